#include "regdist/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "regdist/errors.hpp"

namespace regdist {

namespace {

constexpr double kRegimeRatio = 0.1;
constexpr double kDivergenceExponent = 0.9;

void require_eps(double eps, const char* who) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError(std::string(who) + ": eps must be positive");
}

double inverse_power(double w, int n) {
  double p = 1.0;
  for (int i = 0; i < n; ++i) p *= w;
  return 1.0 / p;
}

// int_lo^hi g(y) dy over part of the kernel support, split at the kernel peak.
double kernel_integral(const Regularizer& rho, const Integrand& g, double lo, double hi, double abs_tol) {
  const Interval support = rho.support();
  lo = std::max(lo, support.lo);
  hi = std::min(hi, support.hi);
  if (!(lo < hi)) return 0.0;
  constexpr double rel_tol = 1e-13;
  const double c = rho.peak_centre();
  if (c > lo && c < hi)
    return integrate_interval(g, lo, c, abs_tol, rel_tol, 4000).value +
           integrate_interval(g, c, hi, abs_tol, rel_tol, 4000).value;
  return integrate_interval(g, lo, hi, abs_tol, rel_tol, 4000).value;
}

}  // namespace

void TwoScale::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("TwoScale: a must be positive");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("TwoScale: eps must be positive");
}

bool TwoScale::in_regime() const { return eps <= kRegimeRatio * a * (1.0 + 1e-12); }

void TwoScale::require_regime(const std::string& who) const {
  validate();
  if (!in_regime() && !allow_out_of_regime) {
    std::ostringstream os;
    os << who << ": (a = " << a << ", eps = " << eps << ") is outside the regime eps <= a/10";
    throw RegimeError(os.str());
  }
}

double delta_embed(const Regularizer& rho, double eps, double x) {
  require_eps(eps, "delta_embed");
  const double z = -x / eps;
  const Interval s = rho.support();
  if (z < s.lo || z > s.hi) return 0.0;
  return rho(z) / eps;
}

double heaviside_embed(const Regularizer& rho, double eps, double x) {
  require_eps(eps, "heaviside_embed");
  return kernel_integral(rho, [&](double y) { return rho(y); }, -x / eps, std::numeric_limits<double>::infinity(),
                         1e-15);
}

SingularTermFamily SingularTermFamily::power_heaviside(int n, const Regularizer& rho, const TwoScale& ts,
                                                       double prefactor) {
  ts.validate();
  if (n < 0) throw DomainError("power-heaviside family needs n >= 0");
  SingularTermFamily t;
  t.kind = TermKind::power_heaviside;
  t.n = n;
  t.prefactor = prefactor;
  t.rho = rho;
  t.scales = ts;
  return t;
}

SingularTermFamily SingularTermFamily::delta(int k, const Regularizer& rho, const TwoScale& ts, double prefactor) {
  ts.validate();
  if (k < 0) throw DomainError("delta-derivative family needs k >= 0");
  SingularTermFamily t;
  t.kind = TermKind::delta_derivative;
  t.k = k;
  t.prefactor = prefactor;
  t.rho = rho;
  t.scales = ts;
  return t;
}

double SingularTermFamily::operator()(double r) const { return term_eval(*this, r); }

std::vector<SingularTermFamily> SingularTermFamily::derivative() const {
  if (kind == TermKind::delta_derivative) {
    SingularTermFamily d = *this;
    d.k = k + 1;
    return {d};
  }
  std::vector<SingularTermFamily> out;
  out.push_back(delta(0, rho, scales, prefactor * inverse_power(scales.a, n)));
  if (n != 0) out.push_back(power_heaviside(n + 1, rho, scales, -prefactor * n));
  return out;
}

SingularTermFamily SingularTermFamily::with_eps(double eps) const {
  SingularTermFamily t = *this;
  t.scales.eps = eps;
  t.scales.validate();
  return t;
}

SingularTermFamily SingularTermFamily::scaled(double factor) const {
  SingularTermFamily t = *this;
  t.prefactor *= factor;
  return t;
}

std::string SingularTermFamily::to_string() const {
  std::ostringstream os;
  os << prefactor << "*";
  if (kind == TermKind::power_heaviside)
    os << "(r^-" << n << " H_a)";
  else
    os << "(delta_a^(" << k << "))";
  os << "[" << rho.label() << ", a=" << scales.a << ", eps=" << scales.eps << "]";
  return os.str();
}

double term_eval(const SingularTermFamily& t, double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("term_eval: r must be finite and >= 0");
  if (t.prefactor == 0.0) return 0.0;
  const double a = t.scales.a;
  const double eps = t.scales.eps;
  const Regularizer& rho = t.rho;
  const double z = (a - r) / eps;

  if (t.kind == TermKind::delta_derivative) {
    const Interval s = rho.support();
    if (z < s.lo || z > s.hi) return 0.0;
    const double sign = (t.k % 2 == 0) ? 1.0 : -1.0;
    return t.prefactor * sign * std::pow(eps, -1 - t.k) * rho.derivative(z, t.k);
  }

  // w = r + eps*y: (1/eps) int_a^inf rho((w - r)/eps) w^-n dw over the kernel window.
  const int n = t.n;
  const Interval s = rho.support();
  const double w_lo = std::max(a, r + eps * s.lo);
  const double w_hi = r + eps * s.hi;
  if (!(w_lo < w_hi)) return 0.0;
  auto g = [&](double w) { return rho((w - r) / eps) * inverse_power(w, n) / eps; };
  const double abs_tol = 1e-15 * inverse_power(a, n);
  const double w_peak = r + eps * rho.peak_centre();
  double value;
  if (w_peak > w_lo && w_peak < w_hi)
    value = integrate_interval(g, w_lo, w_peak, abs_tol, 1e-13, 4000).value +
            integrate_interval(g, w_peak, w_hi, abs_tol, 1e-13, 4000).value;
  else
    value = integrate_interval(g, w_lo, w_hi, abs_tol, 1e-13, 4000).value;
  return t.prefactor * value;
}

double WeightedTerm::operator()(double r) const {
  if (coefficient == 0.0) return 0.0;
  double v = family(r);
  if (v == 0.0) return 0.0;
  return coefficient * (r_power == 0 ? 1.0 : std::pow(r, r_power)) * v;
}

double TestFunction::operator()(double r) const {
  if (std::abs(r) > support_radius) return 0.0;
  return evaluator(r);
}

TestFunction TestFunction::gaussian_bump(double width) {
  if (!(width > 0.0)) throw DomainError("gaussian_bump: width must be positive");
  return {[width](double r) { return std::exp(-(r / width) * (r / width)); }, 8.0 * width, "gaussian-bump"};
}

TestFunction TestFunction::compact_bump(double radius) {
  if (!(radius > 0.0)) throw DomainError("compact_bump: radius must be positive");
  return {[radius](double r) {
            double u = r / radius;
            if (!(std::abs(u) < 1.0)) return 0.0;
            return std::exp(1.0 - 1.0 / (1.0 - u * u));
          },
          radius, "compact-bump"};
}

TestFunction TestFunction::plateau(double inner, double outer) {
  if (!(inner > 0.0) || !(outer > inner)) throw DomainError("plateau: need 0 < inner < outer");
  auto f = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  return {[=](double r) {
            double t = (std::abs(r) - inner) / (outer - inner);
            if (t <= 0.0) return 1.0;
            if (t >= 1.0) return 0.0;
            return f(1.0 - t) / (f(1.0 - t) + f(t));
          },
          outer, "plateau"};
}

EpsFamily family_of(const SingularTermFamily& t) {
  return [t](double r, double eps) { return term_eval(t.with_eps(eps), r); };
}

EpsFamily family_of(const std::vector<WeightedTerm>& terms) {
  return [terms](double r, double eps) {
    double sum = 0.0;
    for (const WeightedTerm& w : terms) {
      WeightedTerm at = w;
      at.family = w.family.with_eps(eps);
      sum += at(r);
    }
    return sum;
  };
}

EpsFamily delta_squared_family(const Regularizer& rho, double a) {
  return [rho, a](double r, double eps) {
    double d = delta_embed(rho, eps, r - a);
    return d * d;
  };
}

std::vector<double> geometric_eps_grid(double eps0, int count, double ratio) {
  if (!(eps0 > 0.0) || count < 1 || !(ratio > 1.0)) throw DomainError("geometric_eps_grid: bad arguments");
  std::vector<double> grid;
  double e = eps0;
  for (int i = 0; i < count; ++i, e /= ratio) grid.push_back(e);
  return grid;
}

PairingResult pair_with_test(const EpsFamily& f, const TestFunction& test, std::span<const double> eps_grid,
                             const PairingOptions& options) {
  if (eps_grid.size() < 3) throw ConditioningError("pair_with_test: need at least 3 eps values");
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    require_eps(eps_grid[i], "pair_with_test");
    if (i > 0 && !(eps_grid[i] < eps_grid[i - 1]))
      throw DomainError("pair_with_test: eps grid must be strictly decreasing");
    if (options.a > 0.0) TwoScale{options.a, eps_grid[i], false}.require_regime("pair_with_test");
  }

  PairingResult result;
  const double R = test.support_radius;
  const double lo = options.measure == Measure::line ? -R : 0.0;
  double max_quad_error = 0.0;
  for (double eps : eps_grid) {
    QuadratureSpec spec = options.quadrature;
    spec.peak_locations = {options.peak};
    spec.peak_width = options.peak_scale * eps;
    Integrand g;
    if (options.measure == Measure::radial)
      g = [&](double r) { return 4.0 * M_PI * r * r * f(r, eps) * test(r); };
    else
      g = [&](double x) { return f(x, eps) * test(x); };
    QuadratureResult q = integrate_range(g, lo, R, spec);
    result.eps.push_back(eps);
    result.samples.push_back(q.value);
    max_quad_error = std::max(max_quad_error, q.error);
  }

  std::vector<Sample> samples;
  for (std::size_t i = 0; i < result.eps.size(); ++i) samples.emplace_back(result.eps[i], result.samples[i]);

  try {
    PowerLawFit growth = fit_power_law(samples);
    result.growth_exponent = growth.exponent;
    if (-growth.exponent >= kDivergenceExponent) {
      result.divergent = true;
      result.value = std::numeric_limits<double>::quiet_NaN();
      result.error = std::numeric_limits<double>::infinity();
      return result;
    }
  } catch (const ConditioningError&) {
    // mixed signs or zeros: no power law, so no divergence
  }

  std::vector<int> powers = {0, 1, 2};
  while (powers.size() + 1 > samples.size()) powers.pop_back();
  AsymptoticFit full = fit_asymptotics(samples, powers);
  result.value = full.value.coefficient(0, 0);
  double spread;
  if (powers.size() > 1) {
    std::vector<int> fewer(powers.begin(), powers.end() - 1);
    spread = std::abs(result.value - fit_asymptotics(samples, fewer).value.coefficient(0, 0));
  } else {
    spread = std::abs(result.value - result.samples.back());
  }
  result.error = spread + max_quad_error;
  return result;
}

}  // namespace regdist
