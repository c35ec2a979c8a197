#include "json_io.hpp"

#include <fstream>
#include <sstream>

#include "fanwelfare/numfmt.hpp"

namespace fw::detail {

using nlohmann::json;

namespace {

double get_number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw Error(ErrorCode::ParseError, std::string("missing numeric field '") + key + "'");
  }
  return j.at(key).get<double>();
}

Direction parse_direction(const json& j) {
  const auto s = j.get<std::string>();
  if (s == "increasing") return Direction::Increasing;
  if (s == "decreasing") return Direction::Decreasing;
  throw Error(ErrorCode::ParseError, "direction must be 'increasing' or 'decreasing', got '" + s + "'");
}

}  // namespace

json num(double v) { return round_significant(v); }

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json rho_to_json(const MonotoneFunction& rho) {
  switch (rho.kind()) {
    case MonotoneFunction::Kind::Identity: return {{"kind", "identity"}};
    case MonotoneFunction::Kind::Power: return {{"kind", "power"}, {"exponent", num(rho.exponent())}};
    case MonotoneFunction::Kind::PiecewiseLinear: {
      json knots = json::array();
      for (const auto& k : rho.knots()) knots.push_back(json::array({num(k.v), num(k.rho)}));
      return {{"kind", "piecewise_linear"}, {"knots", knots}};
    }
  }
  return {{"kind", "identity"}};
}

MonotoneFunction rho_from_json(const json& j) {
  try {
    if (j.is_string()) return MonotoneFunction::parse(j.get<std::string>());
    if (!j.is_object() || !j.contains("kind")) throw Error(ErrorCode::ParseError, "rho must be an object with 'kind'");
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "identity") return MonotoneFunction::identity();
    if (kind == "power") return MonotoneFunction::power(get_number(j, "exponent"));
    if (kind == "piecewise_linear") {
      std::vector<MonotoneFunction::Knot> knots;
      for (const auto& k : j.at("knots")) {
        if (!k.is_array() || k.size() != 2) throw Error(ErrorCode::ParseError, "rho knots must be [v, rho] pairs");
        knots.push_back({k[0].get<double>(), k[1].get<double>()});
      }
      return MonotoneFunction::piecewise_linear(std::move(knots));
    }
    throw Error(ErrorCode::ParseError, "unknown rho kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed rho: ") + e.what());
  }
}

json fan_to_json(const FanSpec& fan) {
  json params = json::object();
  if (auto* c = std::get_if<RhoContamination>(&fan.family())) {
    params["rho"] = rho_to_json(c->rho);
  } else if (auto* s = std::get_if<StepFan>(&fan.family())) {
    params["c_star"] = num(s->c_star);
  } else if (auto* t = std::get_if<VertexTableFan>(&fan.family())) {
    json bps = json::array();
    for (double b : t->breakpoints) bps.push_back(num(b));
    json sets = json::array();
    for (const auto& set : t->vertex_sets) {
      json vs = json::array();
      for (const auto& w : set) {
        json wj = json::array();
        for (double e : w.weights()) wj.push_back(num(e));
        vs.push_back(wj);
      }
      sets.push_back(vs);
    }
    params["breakpoints"] = bps;
    params["vertex_sets"] = sets;
  }
  return {{"family", fan.family_name()}, {"params", params}, {"direction", to_string(fan.direction())}};
}

FanSpec fan_from_json(const json& j) {
  try {
    if (!j.is_object() || !j.contains("family")) throw Error(ErrorCode::ParseError, "fan JSON needs a 'family' field");
    const auto family = j.at("family").get<std::string>();
    const json params = j.value("params", json::object());
    std::optional<Direction> declared;
    if (j.contains("direction")) declared = parse_direction(j.at("direction"));

    auto check_direction = [&](FanSpec fan) {
      if (declared && !fan.monotone_in(*declared)) {
        throw Error(ErrorCode::InvalidFan, "family '" + family + "' is " + to_string(fan.direction()) +
                                               ", declared " + to_string(*declared));
      }
      return fan;
    };

    if (family == "utilitarian") return check_direction(FanSpec::utilitarian());
    if (family == "rawlsian") return check_direction(FanSpec::rawlsian());
    if (family == "rho_contamination" || family == "contamination") {
      if (!params.contains("rho")) throw Error(ErrorCode::ParseError, "rho_contamination needs params.rho");
      return check_direction(FanSpec::contamination(rho_from_json(params.at("rho"))));
    }
    if (family == "step") return check_direction(FanSpec::step(get_number(params, "c_star")));
    if (family == "vertex_table") {
      if (!declared) throw Error(ErrorCode::ParseError, "vertex_table needs an explicit 'direction'");
      auto bps = params.at("breakpoints").get<std::vector<double>>();
      std::vector<std::vector<WeightVector>> sets;
      for (const auto& set : params.at("vertex_sets")) {
        std::vector<WeightVector> vs;
        for (const auto& w : set) {
          auto weights = w.get<std::vector<double>>();
          double sum = 0.0;
          for (double e : weights) sum += e;
          // Decimal inputs like 0.333333 are accepted and renormalized.
          if (std::abs(sum - 1.0) > 1e-6) throw Error(ErrorCode::InvalidFan, "vertex weights must sum to 1");
          if (sum > 0.0)
            for (double& e : weights) e /= sum;
          vs.push_back(WeightVector::checked(std::move(weights), 1e-12));
        }
        sets.push_back(std::move(vs));
      }
      return FanSpec::vertex_table(std::move(bps), std::move(sets), *declared);
    }
    throw Error(ErrorCode::ParseError, "unknown fan family '" + family + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed fan JSON: ") + e.what());
  }
}

}  // namespace fw::detail
