#pragma once

// Process-wide warning sink. Defaults to stderr; tests and the CLI may
// redirect it. Safe to call from several threads.

#include <functional>
#include <string>
#include <string_view>

namespace fairplay {

using WarningSink = std::function<void(std::string_view)>;

void log_warning(std::string_view message);
// Returns the previous sink. An empty sink restores the stderr default.
WarningSink set_warning_sink(WarningSink sink);

}  // namespace fairplay
