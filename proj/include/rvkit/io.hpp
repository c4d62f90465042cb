#pragma once

#include "rvkit/protocol.hpp"
#include "rvkit/series.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace rvkit::io {

inline constexpr std::string_view kCanonicalHeader = "symbol,date,close,rv,bpv";
inline constexpr std::string_view kForecastHeader = "model,symbol,date,forecast";

/// Splits one CSV record on commas; double-quoted fields may contain commas
/// and "" escapes.
[[nodiscard]] std::vector<std::string> split_csv_line(std::string_view line);

/// Seventeen significant digits ("%.17g"); reads back to the same double.
[[nodiscard]] std::string format_double(double value);
/// Shortest text that reads back to the same double; used for report tables.
[[nodiscard]] std::string format_shortest(double value);
/// Whole-field parse; throws FormatError naming `what`.
[[nodiscard]] double parse_double(std::string_view text, std::string_view what);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

struct OmiData {
    std::map<std::string, RvSeries> series;
    /// Rows whose rv was <= 0 (dropped, or floored under the policy).
    std::size_t zero_rv_rows = 0;
};

/// Oxford-Man realized library export: a date column (unnamed, `date` or
/// `Unnamed: 0`), `Symbol`, `rv5_ss`, `bv`, `close_price` and `open_price`.
/// Dates may carry a time and zone suffix. An empty file gives an empty map
/// and a warning.
[[nodiscard]] OmiData parse_omi_csv(const std::filesystem::path& path,
                                    const ZeroRvPolicy& policy = {});

/// Series by symbol from a `symbol,date,close,rv,bpv` file (bpv may be empty).
[[nodiscard]] std::map<std::string, RvSeries> read_canonical_csv(
    const std::filesystem::path& path);
void write_canonical_csv(const std::map<std::string, RvSeries>& series,
                         const std::filesystem::path& path);

/// Finds `symbol` allowing the ".AEX" / "AEX" spellings to match.
[[nodiscard]] const RvSeries& find_series(const std::map<std::string, RvSeries>& series,
                                          std::string_view symbol);

/// Sets in order of first appearance of each (model, symbol). Throws
/// FormatError on a bad header, row, non-positive forecast or duplicate key.
[[nodiscard]] std::vector<eval::ForecastSet> read_forecasts(const std::filesystem::path& path);
void write_forecasts(std::span<const eval::ForecastSet> sets, const std::filesystem::path& path);
[[nodiscard]] std::string format_forecasts(std::span<const eval::ForecastSet> sets);

/// Simple rectangular table rendered as CSV.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] std::string to_csv() const;
};

}  // namespace rvkit::io
