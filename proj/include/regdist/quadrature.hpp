#pragma once

#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "regdist/asymptotic.hpp"

namespace regdist {

using Integrand = std::function<double(double)>;

// Tolerances and peak hints for one radial (or line) integral.
//
// peak_locations mark where the integrand concentrates on a scale peak_width;
// each is wrapped in a panel of half-width kPeakWindowFactor * peak_width
// integrated in the scaled variable z = (r - p) / peak_width.
struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 4000;
  std::vector<double> peak_locations;
  double peak_width = 1.0;

  // Throws DomainError if a tolerance or the width is not positive.
  void validate() const;
};

inline constexpr double kPeakWindowFactor = 12.0;

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  int subdivisions = 0;
};

// Global adaptive Gauss-Kronrod (10/21) on a finite interval. On success
// error <= max(abs_tol, rel_tol*|value|). Throws IntegrationError (with the best
// estimate attached) when max_subdivisions bisections do not reach tolerance.
QuadratureResult integrate_interval(const Integrand& f, double lo, double hi, double abs_tol,
                                    double rel_tol, int max_subdivisions = 2000);

// Integral over [lo, hi] where either end may be infinite. Peak panels from
// spec.peak_locations are split out first; infinite ends are mapped onto
// (0, 1] with r = B + S(1 - t)/t.
QuadratureResult integrate_range(const Integrand& f, double lo, double hi, const QuadratureSpec& spec);

// Integral over [0, inf).
QuadratureResult integrate_radial(const Integrand& f, const QuadratureSpec& spec);

// Product rule on the unit sphere: Gauss-Legendre in cos(theta) with `order`
// nodes times a 2*order point periodic trapezoid in phi. Exact for spherical
// polynomials of degree <= 2*order - 1.
struct SphereNode {
  Eigen::Vector3d u;
  double weight;
};

struct SphereGrid {
  std::vector<SphereNode> nodes;
  int order = 0;

  int exact_degree() const { return 2 * order - 1; }
};

SphereGrid make_sphere_grid(int order = 16);

// Sum_i w_i g(u_i); g may return double or Eigen::Vector3d.
template <class G>
auto integrate_sphere(G&& g, const SphereGrid& grid) {
  using R = std::decay_t<decltype(g(std::declval<const Eigen::Vector3d&>()))>;
  R sum = grid.nodes.front().weight * g(grid.nodes.front().u);
  for (std::size_t i = 1; i < grid.nodes.size(); ++i) sum += grid.nodes[i].weight * g(grid.nodes[i].u);
  return sum;
}

// Least-squares fit of v(eps) ~ sum_q c_q eps^q over the given integer powers.
// Coefficients are stored in an AsymptoticValue under key (0, q).
struct AsymptoticFit {
  AsymptoticValue value;
  double residual = 0.0;        // RMS of (v_i - fit_i) / max|v|
  double condition_number = 0.0;  // of the column-scaled design
};

using Sample = std::pair<double, double>;  // (x, value)

// Needs at least powers.size()+1 samples with eps spanning one decade; throws
// ConditioningError otherwise or when the scaled design is numerically singular.
AsymptoticFit fit_asymptotics(std::span<const Sample> samples, std::span<const int> model_powers);

// log|v| = log|C| + exponent * log x, least squares. Needs >= 3 samples of one sign.
struct PowerLawFit {
  double exponent = 0.0;
  double coefficient = 0.0;
  double residual = 0.0;  // RMS in log space
};

PowerLawFit fit_power_law(std::span<const Sample> samples);

}  // namespace regdist
