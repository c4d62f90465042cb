#include "rvkit/diagnostics.hpp"

#include <iostream>
#include <mutex>

namespace rvkit::diag {

namespace {

std::mutex& sink_mutex() {
    static std::mutex m;
    return m;
}

Sink& current_sink() {
    static Sink sink = [](std::string_view message) {
        std::cerr << "rvkit: warning: " << message << '\n';
    };
    return sink;
}

}  // namespace

void warn(std::string_view message) {
    std::lock_guard lock(sink_mutex());
    if (current_sink()) {
        current_sink()(message);
    }
}

Sink set_sink(Sink sink) {
    std::lock_guard lock(sink_mutex());
    Sink previous = std::move(current_sink());
    current_sink() = std::move(sink);
    return previous;
}

}  // namespace rvkit::diag
