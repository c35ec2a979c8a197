#pragma once

#include <json.hpp>

#include "fanwelfare/core.hpp"
#include "fanwelfare/fans.hpp"

namespace fw::detail {

nlohmann::json rho_to_json(const MonotoneFunction& rho);
MonotoneFunction rho_from_json(const nlohmann::json& j);

nlohmann::json fan_to_json(const FanSpec& fan);
FanSpec fan_from_json(const nlohmann::json& j);

nlohmann::json parse_json(const std::string& text);
std::string read_file(const std::string& path);

/// Number rounded to 12 significant digits for serialization.
nlohmann::json num(double v);

}  // namespace fw::detail
