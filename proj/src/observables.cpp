#include "regdist/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "regdist/errors.hpp"

namespace regdist {

namespace {

using Family = SingularTermFamily;

QuadratureSpec peaked(const TwoScale& ts, const Regularizer& rho, QuadratureSpec spec, double scale) {
  spec.peak_locations = {ts.a - ts.eps * rho.peak_centre()};
  spec.peak_width = ts.eps * rho.peak_halfwidth();
  spec.abs_tol *= std::max(std::abs(scale), std::numeric_limits<double>::min());
  return spec;
}

double ipow(double r, int n) {
  if (n == 0) return 1.0;
  return std::pow(r, n);
}

}  // namespace

QuadratureSpec default_observable_spec() {
  QuadratureSpec spec;
  spec.abs_tol = 1e-10;
  spec.rel_tol = 1e-8;
  spec.max_subdivisions = 4000;
  return spec;
}

QuadratureResult integrate_profile(const std::function<double(double)>& f, const TwoScale& ts,
                                   const Regularizer& rho, const QuadratureSpec& spec, double scale) {
  return integrate_range(f, 0.0, std::numeric_limits<double>::infinity(), peaked(ts, rho, spec, scale));
}

QuadratureResult integrate_delta_window(const std::function<double(double)>& f, const TwoScale& ts,
                                        const Regularizer& rho, const QuadratureSpec& spec, double scale) {
  const Interval s = rho.support();
  const double lo = std::max(0.0, ts.a - ts.eps * s.hi);
  const double hi = ts.a - ts.eps * s.lo;
  if (!(lo < hi)) return {};
  return integrate_range(f, lo, hi, peaked(ts, rho, spec, scale));
}

MomentTerms moment_Mn_terms(int n, const TwoScale& ts, const Regularizer& rho, const QuadratureSpec& spec) {
  ts.require_regime("moment_Mn_numeric");
  if (n > 2) throw DomainError("moment_Mn_numeric: n must be <= 2 (the integral diverges for n >= 3)");
  const double a = ts.a;
  const Family T2 = Family::power_heaviside(2, rho, ts);
  const Family D = Family::delta(0, rho, ts);
  const double scale = std::max(std::pow(a, n - 3), std::pow(a, n - 2) * m20(rho) / ts.eps);

  MomentTerms out;
  auto h2 = integrate_profile(
      [&](double r) {
        double t = T2(r);
        return t == 0.0 ? 0.0 : ipow(r, n) * t * t;
      },
      ts, rho, spec, scale);
  auto mixed = integrate_delta_window([&](double r) { return -(2.0 / a) * ipow(r, n) * T2(r) * D(r); }, ts, rho,
                                      spec, scale);
  auto d2 = integrate_delta_window(
      [&](double r) {
        double d = D(r);
        return ipow(r, n) * d * d / (a * a);
      },
      ts, rho, spec, scale);
  out.h_squared = h2.value;
  out.mixed = mixed.value;
  out.delta_squared = d2.value;
  out.error = h2.error + mixed.error + d2.error;
  return out;
}

double moment_Mn_numeric(int n, const TwoScale& ts, const Regularizer& rho, const QuadratureSpec& spec) {
  return moment_Mn_terms(n, ts, rho, spec).total();
}

AsymptoticValue moment_Mn_analytic(int n, const TwoScale& ts, const Regularizer& rho) {
  ts.validate();
  if (n == 3) throw PoleError("moment_Mn_analytic: the H^2 coefficient 1/(3-n) has a pole at n = 3");
  AsymptoticValue v(1);
  v.add(n - 3, 0, 1.0 / (3.0 - n) - 1.0 - n * m21(rho));
  v.add(n - 2, -1, m20(rho));
  return v;
}

RnTerms Rn_terms(int n, const TwoScale& ts, const Regularizer& rho, const QuadratureSpec& spec) {
  ts.require_regime("Rn_numeric");
  if (n > 3) throw DomainError("Rn_numeric: n must be <= 3 (the integral diverges for n >= 4)");
  const double a = ts.a;
  const Family T2 = Family::power_heaviside(2, rho, ts);
  const Family T3 = Family::power_heaviside(3, rho, ts);
  const Family D = Family::delta(0, rho, ts);
  const double scale = std::max(std::pow(a, n - 4), std::pow(a, n - 3) * m20(rho) / ts.eps);

  auto h = integrate_profile(
      [&](double r) {
        double t2 = T2(r);
        if (t2 == 0.0) return 0.0;
        return 2.0 * ipow(r, n) * t2 * T3(r) - ipow(r, n - 1) * t2 * t2;
      },
      ts, rho, spec, scale);
  auto mixed = integrate_delta_window(
      [&](double r) {
        double d = D(r);
        if (d == 0.0) return 0.0;
        double rn = ipow(r, n), rn1 = ipow(r, n - 1);
        return -(2.0 * rn / a) * T3(r) * d + ((a * rn1 - rn) / (a * a)) * T2(r) * d;
      },
      ts, rho, spec, scale);
  auto d2 = integrate_delta_window(
      [&](double r) {
        double d = D(r);
        return ipow(r, n) * d * d / (a * a * a);
      },
      ts, rho, spec, scale);

  RnTerms out;
  out.h_sector = h.value;
  out.mixed = mixed.value;
  out.delta_squared = d2.value;
  out.error = h.error + mixed.error + d2.error;
  return out;
}

double Rn_numeric(int n, const TwoScale& ts, const Regularizer& rho, const QuadratureSpec& spec) {
  return Rn_terms(n, ts, rho, spec).total();
}

AsymptoticValue Rn_analytic(int n, const TwoScale& ts, const Regularizer& rho) {
  ts.validate();
  if (n == 4) throw PoleError("Rn_analytic: the coefficient (n-3)/(n-4) has a pole at n = 4");
  AsymptoticValue v(1);
  v.add(n - 3, -1, m20(rho));
  v.add(n - 4, 0, -(n - 3.0) / (n - 4.0) - n * m21(rho));
  return v;
}

double delta_sq_weighted(const std::function<double(double)>& F, const TwoScale& ts, const Regularizer& rho,
                         const QuadratureSpec& spec) {
  ts.require_regime("delta_sq_weighted");
  const double scale = std::max(1.0, std::abs(F(ts.a))) * m20(rho) / ts.eps;
  return integrate_delta_window(
             [&](double r) {
               double d = delta_embed(rho, ts.eps, r - ts.a);
               return d == 0.0 ? 0.0 : d * d * F(r);
             },
             ts, rho, spec, scale)
      .value;
}

double delta_sq_prediction(const std::function<double(double)>& F, const TwoScale& ts, const Regularizer& rho,
                           const std::function<double(double)>& F_prime) {
  ts.validate();
  const double a = ts.a;
  double value = m20(rho) * F(a) / ts.eps;
  const double M21 = m21(rho);
  if (M21 != 0.0) {
    double fp;
    if (F_prime) {
      fp = F_prime(a);
    } else {
      const double h = 1e-3 * a;
      fp = (-F(a + 2 * h) + 8 * F(a + h) - 8 * F(a - h) + F(a - 2 * h)) / (12 * h);
    }
    value -= M21 * fp;
  }
  return value;
}

}  // namespace regdist
