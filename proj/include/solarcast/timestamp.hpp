#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace solarcast {

/// Calendar instant with one-second resolution. Timezone-naive.
using Timestamp = std::chrono::sys_seconds;

inline constexpr int kMinutesPerDay = 24 * 60;

/// Parses `YYYY-MM-DDTHH:MM[:SS]` with an optional trailing `Z`. Throws DataError.
Timestamp parse_timestamp(std::string_view text);

/// Formats as `YYYY-MM-DDTHH:MM:SS`.
std::string format_timestamp(Timestamp ts);

/// Minutes elapsed since the preceding midnight.
int minute_of_day(Timestamp ts);

} // namespace solarcast
