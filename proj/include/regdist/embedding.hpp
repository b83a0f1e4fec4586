#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "regdist/quadrature.hpp"
#include "regdist/regularizer.hpp"

namespace regdist {

// Cutoff radius a and regularization width eps. Observables that take
// eps -> 0 before a -> 0 need eps <= a/10.
struct TwoScale {
  double a = 0.1;
  double eps = 1e-3;
  bool allow_out_of_regime = false;

  // DomainError unless a > 0 and eps > 0 (both finite).
  void validate() const;
  bool in_regime() const;
  // validate(), then RegimeError when out of regime and not allowed.
  void require_regime(const std::string& who) const;
};

// Point evaluation of the embedded building blocks:
//   delta_embed(x)     = rho(-x/eps)/eps
//   heaviside_embed(x) = int_{-x/eps}^inf rho(z) dz
double delta_embed(const Regularizer& rho, double eps, double x);
double heaviside_embed(const Regularizer& rho, double eps, double x);

enum class TermKind { power_heaviside, delta_derivative };

// prefactor * (r^-n H_a)_eps   or   prefactor * (delta_a^(k))_eps.
//
// (r^-n H_a)_eps(r) = (1/eps) int_a^inf rho((w - r)/eps) w^-n dw, and
// (delta_a^(k))_eps(r) = d^k/dr^k [rho((a - r)/eps)/eps]
//                      = (-1)^k eps^(-1-k) rho^(k)((a - r)/eps).
struct SingularTermFamily {
  TermKind kind = TermKind::power_heaviside;
  int n = 0;
  int k = 0;
  double prefactor = 1.0;
  Regularizer rho = Regularizer::gaussian();
  TwoScale scales;

  static SingularTermFamily power_heaviside(int n, const Regularizer& rho, const TwoScale& ts, double prefactor = 1.0);
  static SingularTermFamily delta(int k, const Regularizer& rho, const TwoScale& ts, double prefactor = 1.0);

  double operator()(double r) const;

  // Exact d/dr as a combination of families:
  //   (r^-n H_a)' = a^-n delta_a - n (r^-(n+1) H_a),   (delta^(k))' = delta^(k+1).
  std::vector<SingularTermFamily> derivative() const;

  SingularTermFamily with_eps(double eps) const;
  SingularTermFamily scaled(double factor) const;
  std::string to_string() const;
};

double term_eval(const SingularTermFamily& t, double r);

// coefficient * r^r_power * family(r).
struct WeightedTerm {
  double coefficient = 1.0;
  int r_power = 0;
  SingularTermFamily family;

  double operator()(double r) const;
};

// Smooth compactly supported test function (support radius support_radius).
struct TestFunction {
  std::function<double(double)> evaluator;
  double support_radius = 1.0;
  std::string name;

  double operator()(double r) const;

  // exp(-(r/width)^2), cut at 8 widths.
  static TestFunction gaussian_bump(double width = 1.0);
  // exp(1 - 1/(1 - (r/radius)^2)), so T(0) = 1.
  static TestFunction compact_bump(double radius = 1.0);
  // 1 on |r| <= inner, smooth monotone step to 0 at |r| = outer.
  static TestFunction plateau(double inner, double outer);
};

// One member of an eps-indexed family: value at (x, eps).
using EpsFamily = std::function<double(double x, double eps)>;

EpsFamily family_of(const SingularTermFamily& t);
EpsFamily family_of(const std::vector<WeightedTerm>& terms);
// rho((a - r)/eps)^2 / eps^2, the square of the embedded delta_a.
EpsFamily delta_squared_family(const Regularizer& rho, double a);

enum class Measure {
  line,    // dx over [-R_T, R_T]
  radial,  // 4 pi r^2 dr over [0, R_T]
};

struct PairingOptions {
  Measure measure = Measure::radial;
  double peak = 0.0;        // where f_eps concentrates (a for radial families)
  double peak_scale = 1.0;  // peak width in units of eps
  double a = 0.0;           // if > 0, every grid eps must satisfy eps <= a/10
  QuadratureSpec quadrature;
};

struct PairingResult {
  double value = 0.0;  // extrapolated eps -> 0 (NaN when divergent)
  double error = 0.0;
  bool divergent = false;
  double growth_exponent = 0.0;  // fitted p in |value| ~ eps^p
  std::vector<double> eps;
  std::vector<double> samples;  // int f_eps T at each grid point
};

// Pairs f_eps with T over the grid and extrapolates the model
// c0 + c1 eps + c2 eps^2 to eps -> 0. Values growing like eps^-q with q >= 0.9
// are reported as divergent with the fitted exponent instead.
PairingResult pair_with_test(const EpsFamily& f, const TestFunction& test, std::span<const double> eps_grid,
                             const PairingOptions& options);

// eps_0, eps_0/sqrt(10), ... (count points).
std::vector<double> geometric_eps_grid(double eps0, int count = 5, double ratio = 3.1622776601683795);

}  // namespace regdist
