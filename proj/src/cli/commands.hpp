#pragma once

#include "rvkit/series.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rvkit::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int { ok = 0, usage = 1, data_error = 2, estimation_error = 3 };

/// Runs one command line; args[0] is the program name. Tables go to `out`
/// when no --out file is given, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Synthetic daily series: log RV follows a HAR recursion with Gaussian
/// shocks around RV = 1e-4, close-to-close returns have variance RV and BPV
/// is RV times a uniform(0.7, 1) factor. Business days from 2010-01-04.
[[nodiscard]] RvSeries synthetic_series(const std::string& symbol, std::size_t n,
                                        std::uint64_t seed);

}  // namespace rvkit::cli
