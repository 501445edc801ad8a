#include "cavitycool/params.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cavitycool/error.hpp"

namespace cavitycool {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw InvalidInput(msg);
}

}  // namespace

void check_invariants(const SystemParams& p) {
  for (double v : {p.nu, p.delta, p.omega, p.kappa, p.gamma_atom, p.eta, p.g})
    require(std::isfinite(v), "parameters must be finite");
  require(p.nu > 0.0, "nu must be positive");
  require(p.omega >= 0.0, "omega must be non-negative");
  require(p.kappa >= 0.0, "kappa must be non-negative");
  require(p.gamma_atom > 0.0, "gamma_atom must be positive");
  require(p.eta >= 0.0, "eta must be non-negative");
  require(p.g >= 0.0, "g must be non-negative");
}

bool lamb_dicke_warning(const SystemParams& p) { return p.eta >= kLambDickeWarning; }

double max_frequency(const SystemParams& p) {
  return std::max({p.nu, std::abs(p.delta), p.omega, p.kappa, p.gamma_atom});
}

ValidityReport validate(const SystemParams& p, double threshold) {
  ValidityReport r;
  r.threshold = threshold;
  const double scale = std::max({std::abs(p.delta), p.kappa, p.nu});
  r.ratio = p.eta * p.g / scale;
  r.ok = r.ratio < threshold;
  return r;
}

SystemParams params_from_json(const std::string& text, SystemParams base) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(std::string("malformed parameter JSON: ") + e.what());
  }
  require(j.is_object(), "parameter JSON must be a flat object");

  const std::pair<const char*, double SystemParams::*> fields[] = {
      {"nu", &SystemParams::nu},       {"delta", &SystemParams::delta},
      {"omega", &SystemParams::omega}, {"kappa", &SystemParams::kappa},
      {"gamma_atom", &SystemParams::gamma_atom}, {"eta", &SystemParams::eta},
      {"g", &SystemParams::g},
  };
  for (const auto& [key, value] : j.items()) {
    auto it = std::find_if(std::begin(fields), std::end(fields),
                           [&](const auto& f) { return key == f.first; });
    require(it != std::end(fields), "unknown parameter key '" + key + "'");
    require(value.is_number(), "parameter '" + key + "' must be a number");
    base.*(it->second) = value.get<double>();
  }
  return base;
}

SystemParams load_params(const std::string& path, SystemParams base) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open parameter file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return params_from_json(ss.str(), base);
}

std::string params_to_json(const SystemParams& p) {
  // %.17g round-trips every double; nlohmann's dump would too, but key order
  // here is fixed for readability.
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "{\"nu\":%.17g,\"delta\":%.17g,\"omega\":%.17g,\"kappa\":%.17g,"
                "\"gamma_atom\":%.17g,\"eta\":%.17g,\"g\":%.17g}",
                p.nu, p.delta, p.omega, p.kappa, p.gamma_atom, p.eta, p.g);
  return buf;
}

}  // namespace cavitycool
