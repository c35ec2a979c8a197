#pragma once

#include <string>

namespace fw {

/// Locale-independent decimal rendering at 12 significant digits.
std::string format_number(double value);

/// Rounds to 12 significant digits so that shortest-roundtrip printers
/// (nlohmann::json) emit at most 12 digits.
double round_significant(double value);

}  // namespace fw
