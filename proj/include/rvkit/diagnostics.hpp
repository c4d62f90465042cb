#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace rvkit::diag {

using Sink = std::function<void(std::string_view)>;

/// Emits a warning through the installed sink (stderr by default).
void warn(std::string_view message);

/// Replaces the sink; returns the previous one. Passing an empty function
/// silences warnings.
Sink set_sink(Sink sink);

}  // namespace rvkit::diag
