#pragma once

#include <string>
#include <string_view>

namespace adp {

/// Classic Porter (1980) stemmer, following the reference ANSI C
/// implementation including its two documented departures
/// ("bli" -> "ble" and "logi" -> "log" in step 2).
///
/// Input is expected to be lowercase. Words of length <= 2 are returned
/// unchanged.
std::string porter_stem(std::string_view word);

}  // namespace adp
