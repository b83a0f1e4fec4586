#include "regdist/regularizer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include <boost/math/constants/constants.hpp>
#include <boost/math/interpolators/barycentric_rational.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/hermite.hpp>

#include "regdist/errors.hpp"
#include "regdist/quadrature.hpp"

namespace regdist {

namespace {

constexpr double kSqrtPi = boost::math::constants::root_pi<double>();
constexpr double kGaussianReach = 12.0;  // support half-width in units of the width
constexpr double kMomentAbsTol = 1e-13;
constexpr double kNormalizedTol = 1e-12;

// exp(-1/(1-u^2)) on (-1, 1).
double bump_shape(double u) {
  if (!(std::abs(u) < 1.0)) return 0.0;
  return std::exp(-1.0 / (1.0 - u * u));
}

// d^m/du^m of g(u) = -1/(1-u^2) = -(1/2)[1/(1-u) + 1/(1+u)].
double bump_exponent_derivative(int m, double u) {
  double fact = boost::math::factorial<double>(static_cast<unsigned>(m));
  double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return -0.5 * fact * (std::pow(1.0 - u, -(m + 1)) + sign * std::pow(1.0 + u, -(m + 1)));
}

// d^k/du^k exp(g(u)) via f^(k) = sum_j C(k-1, j) g^(j+1) f^(k-1-j).
double bump_shape_derivative(int k, double u) {
  double f0 = bump_shape(u);
  if (f0 == 0.0) return 0.0;
  std::vector<double> f(static_cast<std::size_t>(k) + 1);
  f[0] = f0;
  for (int m = 1; m <= k; ++m) {
    double s = 0.0;
    for (int j = 0; j <= m - 1; ++j)
      s += boost::math::binomial_coefficient<double>(static_cast<unsigned>(m - 1), static_cast<unsigned>(j)) *
           bump_exponent_derivative(j + 1, u) * f[static_cast<std::size_t>(m - 1 - j)];
    f[static_cast<std::size_t>(m)] = s;
  }
  return f[static_cast<std::size_t>(k)];
}

double bump_mass() {
  static const double mass =
      integrate_interval([](double u) { return bump_shape(u); }, -1.0, 1.0, 1e-16, 1e-13, 4000).value;
  return mass;
}

}  // namespace

struct Regularizer::Impl {
  KernelKind kind = KernelKind::gaussian;
  KernelParams params;
  Parity parity = Parity::even;
  double peak_halfwidth = 1.0;
  double peak_centre = 0.0;
  TailBound decay;
  Interval support;
  std::string label;

  // tabulated only
  std::vector<double> nodes;
  std::shared_ptr<const boost::math::barycentric_rational<double>> interpolant;

  mutable std::mutex cache_mutex;
  mutable std::map<std::pair<int, int>, double> moment_cache;

  Impl() = default;
  Impl(const Impl& other)
      : kind(other.kind),
        params(other.params),
        parity(other.parity),
        peak_halfwidth(other.peak_halfwidth),
        peak_centre(other.peak_centre),
        decay(other.decay),
        support(other.support),
        label(other.label),
        nodes(other.nodes),
        interpolant(other.interpolant) {}

  double value(double z) const {
    switch (kind) {
      case KernelKind::gaussian: {
        double u = (z - params.shift) / params.width;
        return params.amplitude * std::exp(-u * u);
      }
      case KernelKind::compact_bump:
      case KernelKind::asymmetric_bump:
        return params.amplitude * bump_shape((z - params.shift) / params.width);
      case KernelKind::tabulated: {
        if (z < nodes.front() || z > nodes.back()) {
          std::ostringstream os;
          os << "tabulated kernel queried at z = " << z << " outside [" << nodes.front() << ", " << nodes.back()
             << "]";
          throw InterpolationRangeError(os.str());
        }
        return params.amplitude * (*interpolant)(z);
      }
    }
    return 0.0;
  }

  double tabulated_derivative(double z, int order) const {
    if (order == 0) return value(z);
    const double h = peak_halfwidth / 1e3;
    double lo = z - h, hi = z + h;
    if (lo < nodes.front()) lo = z;
    if (hi > nodes.back()) hi = z;
    if (lo == hi) return 0.0;
    return (tabulated_derivative(hi, order - 1) - tabulated_derivative(lo, order - 1)) / (hi - lo);
  }

  double derivative(double z, int order) const {
    if (order < 0) throw DomainError("Regularizer::derivative: order must be >= 0");
    if (order == 0) return value(z);
    const double w = params.width;
    const double scale = std::pow(w, -order);
    switch (kind) {
      case KernelKind::gaussian: {
        double u = (z - params.shift) / w;
        double sign = (order % 2 == 0) ? 1.0 : -1.0;
        return params.amplitude * scale * sign * boost::math::hermite(static_cast<unsigned>(order), u) *
               std::exp(-u * u);
      }
      case KernelKind::compact_bump:
      case KernelKind::asymmetric_bump:
        return params.amplitude * scale * bump_shape_derivative(order, (z - params.shift) / w);
      case KernelKind::tabulated:
        if (z < nodes.front() || z > nodes.back())
          throw InterpolationRangeError("tabulated kernel derivative queried outside its table");
        return tabulated_derivative(z, order);
    }
    return 0.0;
  }
};

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::gaussian:
      return "gaussian";
    case KernelKind::compact_bump:
      return "compact-bump";
    case KernelKind::asymmetric_bump:
      return "asymmetric-bump";
    case KernelKind::tabulated:
      return "tabulated";
  }
  return "unknown";
}

std::string to_string(Parity parity) { return parity == Parity::even ? "even" : "general"; }

double TailBound::operator()(double z) const {
  if (!envelope) return 0.0;
  return envelope(std::abs(z));
}

Regularizer Regularizer::raw(KernelKind kind, KernelParams params) {
  if (!(params.width > 0.0)) throw DomainError("Regularizer: width must be positive");
  if (!std::isfinite(params.amplitude) || !std::isfinite(params.shift))
    throw DomainError("Regularizer: non-finite parameters");
  auto impl = std::make_shared<Impl>();
  impl->kind = kind;
  impl->params = params;
  const double w = params.width;
  switch (kind) {
    case KernelKind::gaussian: {
      if (params.shift != 0.0) throw DomainError("Regularizer: the gaussian kernel is centred");
      impl->parity = Parity::even;
      impl->peak_halfwidth = w;
      impl->support = {-kGaussianReach * w, kGaussianReach * w};
      const double amp = std::abs(params.amplitude);
      impl->decay = {2.0 * w, [amp, w](double z) {
                       double u = z / w;
                       return amp * std::exp(-0.5 * u * u);
                     }};
      break;
    }
    case KernelKind::compact_bump:
      if (params.shift != 0.0) throw DomainError("Regularizer: compact-bump is centred; use asymmetric-bump");
      [[fallthrough]];
    case KernelKind::asymmetric_bump:
      if (kind == KernelKind::asymmetric_bump && params.shift == 0.0)
        throw DomainError("Regularizer: asymmetric-bump needs a non-zero shift");
      impl->parity = kind == KernelKind::compact_bump ? Parity::even : Parity::general;
      impl->peak_halfwidth = w + std::abs(params.shift);
      impl->peak_centre = params.shift;
      impl->support = {params.shift - w, params.shift + w};
      impl->decay = {std::abs(params.shift) + w, {}};
      break;
    case KernelKind::tabulated:
      throw DomainError("Regularizer::raw: use Regularizer::tabulated for tables");
  }
  impl->label = to_string(kind);
  if (kind == KernelKind::asymmetric_bump) {
    std::ostringstream os;
    os << "asymmetric-bump(s=" << params.shift << ")";
    impl->label = os.str();
  }
  if (w != 1.0) {
    std::ostringstream os;
    os << impl->label << "[w=" << w << "]";
    impl->label = os.str();
  }
  return Regularizer(std::move(impl));
}

Regularizer Regularizer::gaussian(double width) {
  if (width == 1.0) {
    static const Regularizer unit = raw(KernelKind::gaussian, {1.0, 0.0, 1.0 / kSqrtPi});
    return unit;
  }
  return raw(KernelKind::gaussian, {width, 0.0, 1.0 / (width * kSqrtPi)});
}

Regularizer Regularizer::compact_bump(double width) {
  if (width == 1.0) {
    static const Regularizer unit = raw(KernelKind::compact_bump, {1.0, 0.0, 1.0 / bump_mass()});
    return unit;
  }
  return raw(KernelKind::compact_bump, {width, 0.0, 1.0 / (width * bump_mass())});
}

Regularizer Regularizer::asymmetric_bump(double shift, double width) {
  return raw(KernelKind::asymmetric_bump, {width, shift, 1.0 / (width * bump_mass())});
}

Regularizer Regularizer::tabulated(std::vector<double> z, std::vector<double> values, double peak_halfwidth) {
  if (z.size() != values.size()) throw DomainError("tabulated kernel: node and value counts differ");
  if (z.size() < 4) throw DomainError("tabulated kernel: need at least 4 nodes");
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!std::isfinite(z[i]) || !std::isfinite(values[i])) throw DomainError("tabulated kernel: non-finite entry");
    if (i > 0 && !(z[i] > z[i - 1])) throw DomainError("tabulated kernel: z must be strictly increasing");
  }

  auto impl = std::make_shared<Impl>();
  impl->kind = KernelKind::tabulated;
  impl->params = {1.0, 0.0, 1.0};
  impl->nodes = z;
  impl->support = {z.front(), z.back()};
  impl->decay = {std::max(std::abs(z.front()), std::abs(z.back())), {}};
  impl->peak_halfwidth = peak_halfwidth > 0.0 ? peak_halfwidth : std::max(std::abs(z.front()), std::abs(z.back()));
  auto peak = std::max_element(values.begin(), values.end(),
                               [](double l, double r) { return std::abs(l) < std::abs(r); });
  impl->peak_centre = z[static_cast<std::size_t>(peak - values.begin())];

  bool symmetric = true;
  for (std::size_t i = 0, j = z.size() - 1; i < j; ++i, --j)
    if (z[i] != -z[j] || values[i] != values[j]) symmetric = false;
  impl->parity = symmetric ? Parity::even : Parity::general;
  if (symmetric) impl->peak_centre = 0.0;

  const std::size_t order = std::min<std::size_t>(3, z.size() - 1);
  impl->interpolant =
      std::make_shared<boost::math::barycentric_rational<double>>(std::move(z), std::move(values), order);
  impl->label = "tabulated";
  return Regularizer(std::move(impl));
}

Regularizer Regularizer::load_csv(const std::filesystem::path& path, double peak_halfwidth) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open kernel table " + path.string());
  std::vector<double> z, v;
  std::string line;
  bool header_allowed = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double a = 0, b = 0;
    if (!(fields >> a >> b)) {
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      throw DomainError(path.string() + ":" + std::to_string(line_no) + ": expected two numeric columns");
    }
    header_allowed = false;
    z.push_back(a);
    v.push_back(b);
  }
  return tabulated(std::move(z), std::move(v), peak_halfwidth).with_label("tabulated(" + path.filename().string() + ")");
}

double Regularizer::operator()(double z) const { return impl_->value(z); }
double Regularizer::derivative(double z, int order) const { return impl_->derivative(z, order); }
KernelKind Regularizer::kind() const { return impl_->kind; }
Parity Regularizer::parity() const { return impl_->parity; }
const KernelParams& Regularizer::params() const { return impl_->params; }
double Regularizer::peak_halfwidth() const { return impl_->peak_halfwidth; }
double Regularizer::peak_centre() const { return impl_->peak_centre; }
const TailBound& Regularizer::decay() const { return impl_->decay; }
Interval Regularizer::support() const { return impl_->support; }
std::string Regularizer::name() const { return to_string(impl_->kind); }
std::string Regularizer::label() const { return impl_->label; }

Regularizer Regularizer::with_label(std::string label) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->label = std::move(label);
  return Regularizer(std::move(impl));
}

Regularizer Regularizer::scaled(double factor) const {
  if (!std::isfinite(factor)) throw DomainError("Regularizer::scaled: non-finite factor");
  auto impl = std::make_shared<Impl>(*impl_);
  impl->params.amplitude *= factor;
  if (impl->decay.envelope) {
    auto env = impl->decay.envelope;
    const double f = std::abs(factor);
    impl->decay.envelope = [env, f](double z) { return f * env(z); };
  }
  return Regularizer(std::move(impl));
}

Regularizer Regularizer::with_decay(TailBound decay) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->decay = std::move(decay);
  return Regularizer(std::move(impl));
}

MomentValue moment(const Regularizer& rho, int p, int n) {
  if (p < 1 || n < 0) throw DomainError("moment: need p >= 1 and n >= 0");
  const Regularizer::Impl& impl = *rho.impl_;
  {
    std::lock_guard lock(impl.cache_mutex);
    auto it = impl.moment_cache.find({p, n});
    if (it != impl.moment_cache.end()) return {p, n, it->second};
  }

  const Interval support = impl.support;
  const double edge = std::max({std::abs(support.lo), std::abs(support.hi), impl.decay.r0});
  if (impl.decay.envelope) {
    const auto& env = impl.decay.envelope;
    QuadratureSpec tail_spec;
    tail_spec.abs_tol = kMomentAbsTol;
    tail_spec.rel_tol = 1e-6;
    tail_spec.max_subdivisions = 200;
    auto tail_integrand = [&](double y) { return std::pow(y, n) * std::pow(env(y), p); };
    try {
      auto tail = integrate_range(tail_integrand, edge, std::numeric_limits<double>::infinity(), tail_spec);
      if (!std::isfinite(tail.value)) throw DivergenceError("moment: tail bound is not finite");
    } catch (const IntegrationError&) {
      std::ostringstream os;
      os << "moment(p=" << p << ", n=" << n << "): tail bound integral does not converge";
      throw DivergenceError(os.str());
    } catch (const DomainError&) {
      throw DivergenceError("moment: tail bound is not finite");
    }
  }

  auto integrand = [&](double y) {
    double v = impl.value(y);
    return (n == 0 ? 1.0 : std::pow(y, n)) * (p == 1 ? v : std::pow(v, p));
  };
  const double centre = std::clamp(impl.peak_centre, support.lo, support.hi);
  double value = 0.0;
  if (centre > support.lo) value += integrate_interval(integrand, support.lo, centre, kMomentAbsTol, 1e-13, 4000).value;
  if (centre < support.hi) value += integrate_interval(integrand, centre, support.hi, kMomentAbsTol, 1e-13, 4000).value;

  std::lock_guard lock(impl.cache_mutex);
  impl.moment_cache.emplace(std::make_pair(p, n), value);
  return {p, n, value};
}

double m20(const Regularizer& rho) { return moment(rho, 2, 0).value; }
double m21(const Regularizer& rho) { return moment(rho, 2, 1).value; }

Regularizer normalize(const Regularizer& rho) {
  const double mass = moment(rho, 1, 0).value;
  if (!std::isfinite(mass) || std::abs(mass) < 1e-300)
    throw NormalizationError("normalize: kernel integral is zero");
  if (std::abs(mass - 1.0) <= kNormalizedTol) return rho;
  return rho.scaled(1.0 / mass);
}

}  // namespace regdist
