#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "regdist/errors.hpp"
#include "regdist/fields.hpp"
#include "regdist/quadrature.hpp"
#include "regdist/regularizer.hpp"

namespace regdist::cli {

enum ExitCode { kOk = 0, kThresholdViolation = 1, kConfigError = 2, kNumericError = 3 };

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct KernelSpec {
  std::string name = "gaussian";  // gaussian | compact-bump | asymmetric-bump | tabulated
  double width = 1.0;
  double shift = 0.3;
  std::string path;  // tabulated only
  double peak_halfwidth = 0.0;
  bool normalize = true;

  // "gaussian", "asymmetric-bump:0.5", "tabulated:kernel.csv".
  static KernelSpec parse(const std::string& text);
  Regularizer build() const;
};

struct RunConfig {
  std::vector<KernelSpec> kernels;
  std::vector<double> a_values;
  std::vector<double> eps_values;  // absolute; empty means eps_ratio * a
  double eps_ratio = 0.01;
  std::vector<std::string> observables;  // empty means all
  std::vector<std::string> identities;   // empty means all
  std::vector<int> moment_orders = {1, 2};
  std::vector<int> rn_orders = {2, 3};

  QuadratureSpec quadrature;
  int sphere_order = 16;
  ElectronParams electron;

  std::map<std::string, double> thresholds;  // by observable, "default" as fallback
  int convergence_points = 5;
  double convergence_ratio = 3.1622776601683795;
  double exponent_tolerance = 0.01;
  double a_exponent_tolerance = 0.02;
  int identity_radii = 20;

  std::string out;  // empty means stdout
  std::string format = "csv";
  bool allow_out_of_regime = false;
  bool deterministic = true;

  static RunConfig defaults();
  // Overlays keys present in j; ConfigError on unknown keys or bad types.
  void merge_json(const nlohmann::json& j);
  // ConfigError / RegimeError as appropriate.
  void validate() const;
  double threshold(const std::string& observable) const;
  // (a, eps) pairs in sweep order.
  std::vector<TwoScale> scales() const;
};

RunConfig load_config(const std::string& path);

struct Row {
  std::string observable;
  std::string kernel;
  double a = 0.0;
  double eps = 0.0;
  double numeric = 0.0;
  double analytic = 0.0;
  double rel_dev = 0.0;
  std::string notes;
  double M20 = 0.0;
  double M21 = 0.0;
  bool regime_warning = false;
  bool pass = true;
};

void sort_rows(std::vector<Row>& rows);
std::string to_csv(const std::vector<Row>& rows, const std::optional<std::string>& generated_at = std::nullopt);
nlohmann::json to_json(const std::vector<Row>& rows, const std::optional<std::string>& generated_at = std::nullopt);

std::vector<Row> run_moments(const RunConfig& cfg);
std::vector<Row> run_electron(const RunConfig& cfg);
std::vector<Row> run_convergence(const RunConfig& cfg);
std::vector<Row> run_identities(const RunConfig& cfg);
std::vector<Row> run_kernel_info(const RunConfig& cfg);

// Full command line entry point; returns the process exit code.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace regdist::cli
