#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mirnet {

/// Error type thrown by every fallible operation in the library.
/// Messages are complete sentences naming the offending input
/// (row/column/channel) so CLI users can act on them directly.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

/// Non-fatal diagnostics accumulated by operations that can proceed with a
/// caveat (truncation, degenerate normalisation, isolated nodes under
/// coupling). Callers pass a pointer or nullptr to ignore.
using Warnings = std::vector<std::string>;

inline void warn(Warnings* sink, std::string message) {
    if (sink != nullptr) sink->push_back(std::move(message));
}

}  // namespace mirnet
