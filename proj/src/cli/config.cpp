#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "regdist/cli.hpp"
#include "regdist/electron.hpp"
#include "regdist/observables.hpp"

namespace regdist::cli {

namespace {

using json = nlohmann::json;

const std::set<std::string> kKernelNames = {"gaussian", "compact-bump", "asymmetric-bump", "tabulated"};

double number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return j.get<double>();
}

std::vector<double> number_list(const json& j, const std::string& key) {
  if (j.is_number()) return {j.get<double>()};
  if (!j.is_array()) throw ConfigError("config key '" + key + "' must be a number or an array of numbers");
  std::vector<double> out;
  for (const json& v : j) out.push_back(number(v, key));
  return out;
}

std::vector<std::string> string_list(const json& j, const std::string& key) {
  if (j.is_string()) return {j.get<std::string>()};
  if (!j.is_array()) throw ConfigError("config key '" + key + "' must be a string or an array of strings");
  std::vector<std::string> out;
  for (const json& v : j) {
    if (!v.is_string()) throw ConfigError("config key '" + key + "' must contain strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

KernelSpec kernel_from_json(const json& j) {
  if (j.is_string()) return KernelSpec::parse(j.get<std::string>());
  if (!j.is_object()) throw ConfigError("kernel entries must be strings or objects");
  KernelSpec k;
  for (const auto& [key, v] : j.items()) {
    if (key == "name") {
      if (!v.is_string()) throw ConfigError("kernel name must be a string");
      k.name = v.get<std::string>();
    } else if (key == "width") {
      k.width = number(v, "width");
    } else if (key == "shift") {
      k.shift = number(v, "shift");
    } else if (key == "path") {
      if (!v.is_string()) throw ConfigError("kernel path must be a string");
      k.path = v.get<std::string>();
    } else if (key == "peak_halfwidth") {
      k.peak_halfwidth = number(v, "peak_halfwidth");
    } else if (key == "normalize") {
      if (!v.is_boolean()) throw ConfigError("kernel normalize must be a boolean");
      k.normalize = v.get<bool>();
    } else {
      throw ConfigError("unknown kernel key '" + key + "'");
    }
  }
  if (!kKernelNames.count(k.name)) throw ConfigError("unknown kernel '" + k.name + "'");
  return k;
}

}  // namespace

KernelSpec KernelSpec::parse(const std::string& text) {
  KernelSpec k;
  auto colon = text.find(':');
  k.name = text.substr(0, colon);
  if (!kKernelNames.count(k.name)) throw ConfigError("unknown kernel '" + k.name + "'");
  if (colon != std::string::npos) {
    std::string arg = text.substr(colon + 1);
    if (k.name == "tabulated") {
      k.path = arg;
    } else if (k.name == "asymmetric-bump") {
      try {
        std::size_t used = 0;
        k.shift = std::stod(arg, &used);
        if (used != arg.size()) throw std::invalid_argument(arg);
      } catch (const std::exception&) {
        throw ConfigError("bad shift in kernel '" + text + "'");
      }
    } else {
      throw ConfigError("kernel '" + k.name + "' takes no argument");
    }
  }
  return k;
}

Regularizer KernelSpec::build() const {
  try {
    if (name == "gaussian") return Regularizer::gaussian(width);
    if (name == "compact-bump") return Regularizer::compact_bump(width);
    if (name == "asymmetric-bump") return Regularizer::asymmetric_bump(shift, width);
    if (name == "tabulated") {
      if (path.empty()) throw ConfigError("tabulated kernel needs a path");
      Regularizer r = Regularizer::load_csv(path, peak_halfwidth);
      return normalize ? regdist::normalize(r) : r;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("kernel '") + name + "': " + e.what());
  }
  throw ConfigError("unknown kernel '" + name + "'");
}

RunConfig RunConfig::defaults() {
  RunConfig c;
  c.kernels = {KernelSpec::parse("gaussian"), KernelSpec::parse("compact-bump")};
  c.a_values = {0.05, 0.1};
  c.quadrature = default_observable_spec();
  c.thresholds = {{"default", 1e-3}, {"P", 1e-10}, {"U_mag[h_sector]", 1e-2}, {"identity", 1e-5}};
  return c;
}

void RunConfig::merge_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "kernels") {
      if (!v.is_array()) throw ConfigError("'kernels' must be an array");
      kernels.clear();
      for (const json& k : v) kernels.push_back(kernel_from_json(k));
    } else if (key == "a") {
      a_values = number_list(v, key);
    } else if (key == "eps") {
      eps_values = number_list(v, key);
    } else if (key == "eps_ratio") {
      eps_ratio = number(v, key);
    } else if (key == "observables") {
      observables = string_list(v, key);
    } else if (key == "identities") {
      identities = string_list(v, key);
    } else if (key == "moment_orders" || key == "rn_orders") {
      std::vector<int> orders;
      for (double d : number_list(v, key)) {
        if (d != std::floor(d)) throw ConfigError("'" + key + "' must contain integers");
        orders.push_back(static_cast<int>(d));
      }
      (key == "moment_orders" ? moment_orders : rn_orders) = orders;
    } else if (key == "tolerances") {
      if (!v.is_object()) throw ConfigError("'tolerances' must be an object");
      for (const auto& [tk, tv] : v.items()) {
        if (tk == "abs_tol")
          quadrature.abs_tol = number(tv, tk);
        else if (tk == "rel_tol")
          quadrature.rel_tol = number(tv, tk);
        else if (tk == "max_subdivisions")
          quadrature.max_subdivisions = static_cast<int>(number(tv, tk));
        else
          throw ConfigError("unknown tolerance key '" + tk + "'");
      }
    } else if (key == "sphere_order") {
      sphere_order = static_cast<int>(number(v, key));
    } else if (key == "electron") {
      if (!v.is_object()) throw ConfigError("'electron' must be an object");
      for (const auto& [ek, ev] : v.items()) {
        if (ek == "e") {
          electron.e = number(ev, ek);
        } else if (ek == "c") {
          electron.c = number(ev, ek);
        } else if (ek == "mu") {
          auto m = number_list(ev, ek);
          if (m.size() != 3) throw ConfigError("'electron.mu' must have three components");
          electron.mu = Eigen::Vector3d(m[0], m[1], m[2]);
        } else {
          throw ConfigError("unknown electron key '" + ek + "'");
        }
      }
    } else if (key == "thresholds") {
      if (!v.is_object()) throw ConfigError("'thresholds' must be an object");
      for (const auto& [tk, tv] : v.items()) thresholds[tk] = number(tv, tk);
    } else if (key == "convergence") {
      if (!v.is_object()) throw ConfigError("'convergence' must be an object");
      for (const auto& [ck, cv] : v.items()) {
        if (ck == "points")
          convergence_points = static_cast<int>(number(cv, ck));
        else if (ck == "ratio")
          convergence_ratio = number(cv, ck);
        else if (ck == "exponent_tolerance")
          exponent_tolerance = number(cv, ck);
        else if (ck == "a_exponent_tolerance")
          a_exponent_tolerance = number(cv, ck);
        else
          throw ConfigError("unknown convergence key '" + ck + "'");
      }
    } else if (key == "identity_radii") {
      identity_radii = static_cast<int>(number(v, key));
    } else if (key == "out") {
      if (!v.is_string()) throw ConfigError("'out' must be a string");
      out = v.get<std::string>();
    } else if (key == "format") {
      if (!v.is_string()) throw ConfigError("'format' must be a string");
      format = v.get<std::string>();
    } else if (key == "allow_out_of_regime") {
      if (!v.is_boolean()) throw ConfigError("'allow_out_of_regime' must be a boolean");
      allow_out_of_regime = v.get<bool>();
    } else if (key == "deterministic") {
      if (!v.is_boolean()) throw ConfigError("'deterministic' must be a boolean");
      deterministic = v.get<bool>();
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
}

void RunConfig::validate() const {
  if (kernels.empty()) throw ConfigError("no kernels selected");
  if (a_values.empty()) throw ConfigError("no a values given");
  for (double a : a_values)
    if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("a values must be positive");
  for (double e : eps_values)
    if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("eps values must be positive");
  if (!(eps_ratio > 0.0)) throw ConfigError("eps_ratio must be positive");
  if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
  if (sphere_order < 2) throw ConfigError("sphere_order must be >= 2");
  if (convergence_points < 1) throw ConfigError("convergence.points must be >= 1");
  if (!(convergence_ratio > 1.0)) throw ConfigError("convergence.ratio must exceed 1");
  if (identity_radii < 1) throw ConfigError("identity_radii must be >= 1");
  try {
    quadrature.validate();
    electron.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  for (const std::string& o : observables) {
    try {
      observable_from_string(o);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  for (const std::string& t : identities) {
    try {
      identity_tag_from_string(t);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  for (const TwoScale& ts : scales()) ts.require_regime("config");
}

double RunConfig::threshold(const std::string& observable) const {
  auto it = thresholds.find(observable);
  if (it != thresholds.end()) return it->second;
  if (observable.rfind("identity:", 0) == 0) {
    it = thresholds.find("identity");
    if (it != thresholds.end()) return it->second;
  }
  it = thresholds.find("default");
  return it != thresholds.end() ? it->second : 1e-3;
}

std::vector<TwoScale> RunConfig::scales() const {
  std::vector<TwoScale> out;
  for (double a : a_values) {
    if (eps_values.empty()) {
      out.push_back({a, eps_ratio * a, allow_out_of_regime});
    } else {
      for (double e : eps_values) out.push_back({a, e, allow_out_of_regime});
    }
  }
  return out;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  RunConfig c = RunConfig::defaults();
  c.merge_json(j);
  return c;
}

}  // namespace regdist::cli
