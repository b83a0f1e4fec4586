#include "regdist/fields.hpp"

#include <algorithm>
#include <cmath>

#include "regdist/errors.hpp"

namespace regdist {

namespace {

using Family = SingularTermFamily;

// rho((a - r)/eps)/eps with the kernel support respected.
double delta_value(const Regularizer& rho, const TwoScale& ts, double r) {
  return delta_embed(rho, ts.eps, r - ts.a);
}

// d/dr of rho((a - r)/eps)/eps.
double delta_prime_value(const Regularizer& rho, const TwoScale& ts, double r) {
  const double z = (ts.a - r) / ts.eps;
  const Interval s = rho.support();
  if (z < s.lo || z > s.hi) return 0.0;
  return -rho.derivative(z, 1) / (ts.eps * ts.eps);
}

// f(0) from f(h), f(2h) when f has 1/r factors.
double origin_limit(const std::function<double(double)>& f, double eps, const char* who) {
  const double h = eps / 100.0;
  double v = 2.0 * f(h) - f(2.0 * h);
  if (!std::isfinite(v)) throw PoleAtOriginError(std::string(who) + ": no finite limit at r = 0");
  return v;
}

void check_r(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("field evaluation needs finite r >= 0");
}

}  // namespace

void ElectronParams::validate() const {
  if (!std::isfinite(e) || !mu.allFinite()) throw DomainError("ElectronParams: non-finite e or mu");
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("ElectronParams: c must be positive");
}

double RadialProfile::sum_of_terms(double r) const {
  double sum = 0.0;
  for (const WeightedTerm& t : decomposition) sum += t(r);
  return sum;
}

SphereDirection SphereDirection::from_angles(double theta, double phi) {
  const double st = std::sin(theta);
  return {Eigen::Vector3d(st * std::cos(phi), st * std::sin(phi), std::cos(theta))};
}

SphereDirection SphereDirection::from_vector(const Eigen::Vector3d& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("SphereDirection: zero or non-finite vector");
  return {v / n};
}

double y_space_integral(const Regularizer& rho, const TwoScale& ts, double r, int n) {
  const Interval s = rho.support();
  const double lo = std::max((ts.a - r) / ts.eps, s.lo);
  const double hi = s.hi;
  if (!(lo < hi)) return 0.0;
  auto g = [&](double y) { return rho(y) * std::pow(r + ts.eps * y, -n); };
  const double abs_tol = 1e-15 * std::pow(ts.a, -n);
  const double c = rho.peak_centre();
  if (c > lo && c < hi)
    return integrate_interval(g, lo, c, abs_tol, 1e-13, 4000).value +
           integrate_interval(g, c, hi, abs_tol, 1e-13, 4000).value;
  return integrate_interval(g, lo, hi, abs_tol, 1e-13, 4000).value;
}

RadialProfile coulomb_potential(const ElectronParams& p, const TwoScale& ts, const Regularizer& rho) {
  p.validate();
  ts.validate();
  RadialProfile prof;
  prof.name = "coulomb_potential";
  const double e = p.e;
  prof.evaluator = [=](double r) {
    check_r(r);
    return e == 0.0 ? 0.0 : e * y_space_integral(rho, ts, r, 1);
  };
  prof.decomposition = {{e, 0, Family::power_heaviside(1, rho, ts)}};
  return prof;
}

RadialProfile coulomb_field(const ElectronParams& p, const TwoScale& ts, const Regularizer& rho) {
  p.validate();
  ts.validate();
  RadialProfile prof;
  prof.name = "coulomb_field";
  const double e = p.e;
  const double a = ts.a;
  prof.evaluator = [=](double r) {
    check_r(r);
    if (e == 0.0) return 0.0;
    return e * (y_space_integral(rho, ts, r, 2) - delta_value(rho, ts, r) / a);
  };
  prof.decomposition = {{e, 0, Family::power_heaviside(2, rho, ts)}, {-e / a, 0, Family::delta(0, rho, ts)}};
  return prof;
}

RadialProfile charge_density(const ElectronParams& p, const TwoScale& ts, const Regularizer& rho) {
  p.validate();
  ts.validate();
  RadialProfile prof;
  prof.name = "charge_density";
  const double k = p.e / (4.0 * M_PI);
  const double a = ts.a;
  auto positive = [=](double r) {
    double t2 = y_space_integral(rho, ts, r, 2);
    double t3 = y_space_integral(rho, ts, r, 3);
    double d = delta_value(rho, ts, r);
    double dp = delta_prime_value(rho, ts, r);
    double inv_r_part = (t2 == 0.0 && d == 0.0) ? 0.0 : (2.0 / r) * (t2 - d / a);
    return k * (inv_r_part - 2.0 * t3 + d / (a * a) - dp / a);
  };
  prof.evaluator = [=](double r) {
    check_r(r);
    if (k == 0.0) return 0.0;
    if (r == 0.0) return origin_limit(positive, ts.eps, "charge_density");
    return positive(r);
  };
  prof.decomposition = {
      {2.0 * k, -1, Family::power_heaviside(2, rho, ts)},
      {-2.0 * k, 0, Family::power_heaviside(3, rho, ts)},
      {k / (a * a), 0, Family::delta(0, rho, ts)},
      {-2.0 * k / a, -1, Family::delta(0, rho, ts)},
      {-k / a, 0, Family::delta(1, rho, ts)},
  };
  return prof;
}

std::pair<RadialProfile, RadialProfile> dipole_h1h2(const ElectronParams& p, const TwoScale& ts,
                                                    const Regularizer& rho) {
  p.validate();
  ts.validate();
  const double a = ts.a;
  RadialProfile h1;
  h1.name = "h1";
  auto h1_positive = [=](double r) {
    double t2 = y_space_integral(rho, ts, r, 2);
    return t2 == 0.0 ? 0.0 : t2 / r;
  };
  h1.evaluator = [=](double r) {
    check_r(r);
    if (r == 0.0) return origin_limit(h1_positive, ts.eps, "h1");
    return h1_positive(r);
  };
  h1.decomposition = {{1.0, -1, Family::power_heaviside(2, rho, ts)}};

  RadialProfile h2;
  h2.name = "h2";
  h2.evaluator = [=](double r) {
    check_r(r);
    return delta_value(rho, ts, r) / (a * a) - 2.0 * y_space_integral(rho, ts, r, 3);
  };
  h2.decomposition = {{1.0 / (a * a), 0, Family::delta(0, rho, ts)}, {-2.0, 0, Family::power_heaviside(3, rho, ts)}};
  return {h1, h2};
}

Eigen::Vector3d dipole_field(const ElectronParams& p, const TwoScale& ts, const Regularizer& rho,
                             const SphereDirection& u, double r) {
  check_r(r);
  if (p.mu.isZero(0.0)) return Eigen::Vector3d::Zero();
  auto [h1, h2] = dipole_h1h2(p, ts, rho);
  const Eigen::Vector3d along = u.u * p.mu.dot(u.u);
  return (p.mu + along) * h1(r) + (p.mu - along) * h2(r);
}

double cross_profile(const ElectronParams& p, const TwoScale& ts, const Regularizer& rho, double r) {
  p.validate();
  ts.validate();
  check_r(r);
  const double a = ts.a;
  auto positive = [&](double x) {
    double t2 = y_space_integral(rho, ts, x, 2);
    double t3 = y_space_integral(rho, ts, x, 3);
    double d = delta_value(rho, ts, x);
    double t2_over_r = t2 == 0.0 ? 0.0 : t2 / x;
    return (t2 - d / a) * (2.0 * t3 - t2_over_r - d / (a * a));
  };
  if (r == 0.0) return origin_limit(positive, ts.eps, "cross_profile");
  return positive(r);
}

Eigen::Vector3d poynting_vector(const ElectronParams& p, const TwoScale& ts, const Regularizer& rho,
                                const SphereDirection& u, double r) {
  if (p.e == 0.0 || p.mu.isZero(0.0)) return Eigen::Vector3d::Zero();
  return p.e * p.mu.cross(u.u) * cross_profile(p, ts, rho, r);
}

}  // namespace regdist
