#include "regdist/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "regdist/errors.hpp"

namespace regdist {

namespace {

constexpr double kEpsilon = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

// Kronrod 21-point rule with its embedded 10-point Gauss rule, on [-1, 1].
// Index 0 is the centre node (Kronrod only); odd indices are Gauss nodes.
struct Rule21 {
  std::array<double, 11> x{};
  std::array<double, 11> wk{};
  std::array<double, 11> wg{};

  Rule21() {
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    const auto& ka = gauss_kronrod<double, 21>::abscissa();
    const auto& kw = gauss_kronrod<double, 21>::weights();
    const auto& gw = gauss<double, 10>::weights();
    for (std::size_t i = 0; i < 11; ++i) {
      x[i] = ka[i];
      wk[i] = kw[i];
      wg[i] = (i % 2 == 1) ? gw[i / 2] : 0.0;
    }
  }
};

const Rule21& rule21() {
  static const Rule21 rule;
  return rule;
}

// r(t) on one initial segment.
struct MappedSegment {
  enum class Kind { affine, upper_tail, lower_tail };
  Kind kind = Kind::affine;
  double t_lo = 0.0;
  double t_hi = 1.0;
  double offset = 0.0;
  double scale = 1.0;

  // Returns (r, dr/dt).
  std::pair<double, double> map(double t) const {
    switch (kind) {
      case Kind::affine:
        return {offset + scale * t, scale};
      case Kind::upper_tail:
        return {offset + scale * (1.0 - t) / t, scale / (t * t)};
      case Kind::lower_tail:
        return {offset - scale * (1.0 - t) / t, scale / (t * t)};
    }
    return {0.0, 0.0};
  }
};

struct Panel {
  double t_lo;
  double t_hi;
  int segment;
  double value;
  double error;
};

bool panel_less(const Panel& lhs, const Panel& rhs) {
  if (lhs.error != rhs.error) return lhs.error < rhs.error;
  if (lhs.segment != rhs.segment) return lhs.segment > rhs.segment;
  return lhs.t_lo > rhs.t_lo;
}

// QUADPACK-style GK21 panel estimate.
Panel evaluate_panel(const Integrand& f, const MappedSegment& seg, int segment_index, double t_lo,
                     double t_hi, int& evaluations) {
  const Rule21& rule = rule21();
  const double centre = 0.5 * (t_lo + t_hi);
  const double half = 0.5 * (t_hi - t_lo);

  std::array<double, 21> fv{};
  auto sample = [&](double t) {
    auto [r, jac] = seg.map(t);
    double v = f(r);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "integrand is not finite at r = " << r;
      throw DomainError(os.str());
    }
    return v * jac;
  };

  fv[0] = sample(centre);
  for (std::size_t i = 1; i < 11; ++i) {
    fv[2 * i - 1] = sample(centre - half * rule.x[i]);
    fv[2 * i] = sample(centre + half * rule.x[i]);
  }
  evaluations += 21;

  double resk = fv[0] * rule.wk[0];
  double resg = fv[0] * rule.wg[0];
  double resabs = std::abs(resk);
  for (std::size_t i = 1; i < 11; ++i) {
    double pair = fv[2 * i - 1] + fv[2 * i];
    resk += rule.wk[i] * pair;
    resg += rule.wg[i] * pair;
    resabs += rule.wk[i] * (std::abs(fv[2 * i - 1]) + std::abs(fv[2 * i]));
  }
  const double mean = 0.5 * resk;
  double resasc = rule.wk[0] * std::abs(fv[0] - mean);
  for (std::size_t i = 1; i < 11; ++i)
    resasc += rule.wk[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));

  const double ahalf = std::abs(half);
  resk *= half;
  resabs *= ahalf;
  resasc *= ahalf;
  double err = std::abs((resk - resg * half));
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > kTiny / (50.0 * kEpsilon)) err = std::max(50.0 * kEpsilon * resabs, err);
  return Panel{t_lo, t_hi, segment_index, resk, err};
}

// Neumaier-compensated sum of panel values in (segment, t) order.
std::pair<double, double> ordered_totals(std::vector<Panel> panels) {
  std::sort(panels.begin(), panels.end(), [](const Panel& l, const Panel& r) {
    return l.segment != r.segment ? l.segment < r.segment : l.t_lo < r.t_lo;
  });
  double sum = 0.0, comp = 0.0, err = 0.0;
  for (const Panel& p : panels) {
    double t = sum + p.value;
    if (std::abs(sum) >= std::abs(p.value))
      comp += (sum - t) + p.value;
    else
      comp += (p.value - t) + sum;
    sum = t;
    err += p.error;
  }
  return {sum + comp, err};
}

QuadratureResult integrate_segments(const Integrand& f, const std::vector<MappedSegment>& segments,
                                    double abs_tol, double rel_tol, int max_subdivisions) {
  QuadratureResult result;
  if (segments.empty()) return result;

  std::vector<Panel> heap;
  heap.reserve(segments.size() + 2 * static_cast<std::size_t>(std::min(max_subdivisions, 4096)) + 2);
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    Panel p = evaluate_panel(f, segments[s], static_cast<int>(s), segments[s].t_lo, segments[s].t_hi,
                             result.evaluations);
    total += p.value;
    total_err += p.error;
    heap.push_back(p);
  }
  std::make_heap(heap.begin(), heap.end(), panel_less);

  auto tolerance = [&](double value) { return std::max(abs_tol, rel_tol * std::abs(value)); };

  int since_resum = 0;
  while (true) {
    if (total_err <= tolerance(total) || ++since_resum >= 64) {
      auto [v, e] = ordered_totals(heap);
      total = v;
      total_err = e;
      since_resum = 0;
      if (total_err <= tolerance(total)) break;
    }
    if (result.subdivisions >= max_subdivisions) {
      auto [v, e] = ordered_totals(heap);
      std::ostringstream os;
      os << "adaptive quadrature did not converge in " << max_subdivisions
         << " subdivisions (estimate " << v << " +/- " << e << ")";
      throw IntegrationError(os.str(), v, e);
    }

    std::pop_heap(heap.begin(), heap.end(), panel_less);
    Panel worst = heap.back();
    heap.pop_back();

    const double mid = 0.5 * (worst.t_lo + worst.t_hi);
    if (!(mid > worst.t_lo && mid < worst.t_hi) ||
        (worst.t_hi - worst.t_lo) <= 4.0 * kEpsilon * std::max(std::abs(worst.t_lo), std::abs(worst.t_hi))) {
      heap.push_back(worst);
      auto [v, e] = ordered_totals(heap);
      throw IntegrationError("adaptive quadrature hit the resolution limit of double precision", v, e);
    }

    const MappedSegment& seg = segments[static_cast<std::size_t>(worst.segment)];
    Panel left = evaluate_panel(f, seg, worst.segment, worst.t_lo, mid, result.evaluations);
    Panel right = evaluate_panel(f, seg, worst.segment, mid, worst.t_hi, result.evaluations);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), panel_less);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), panel_less);
    ++result.subdivisions;
  }

  result.value = total;
  result.error = total_err;
  return result;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw DomainError("QuadratureSpec: tolerances must be positive");
  if (!(peak_width > 0.0)) throw DomainError("QuadratureSpec: peak_width must be positive");
  if (max_subdivisions < 1) throw DomainError("QuadratureSpec: max_subdivisions must be >= 1");
}

QuadratureResult integrate_interval(const Integrand& f, double lo, double hi, double abs_tol, double rel_tol,
                                    int max_subdivisions) {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw DomainError("integrate_interval: tolerances must be positive");
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw DomainError("integrate_interval: bounds must be finite");
  if (lo == hi) return {};
  MappedSegment seg{MappedSegment::Kind::affine, lo, hi, 0.0, 1.0};
  return integrate_segments(f, {seg}, abs_tol, rel_tol, max_subdivisions);
}

QuadratureResult integrate_range(const Integrand& f, double lo, double hi, const QuadratureSpec& spec) {
  spec.validate();
  if (std::isnan(lo) || std::isnan(hi) || !(lo < hi)) {
    if (lo == hi) return {};
    throw DomainError("integrate_range: need lo < hi");
  }
  using Kind = MappedSegment::Kind;

  // Peak windows clipped to the domain and merged where they overlap.
  const double half_window = kPeakWindowFactor * spec.peak_width;
  struct Window {
    double lo, hi, centre;
  };
  std::vector<double> peaks = spec.peak_locations;
  std::sort(peaks.begin(), peaks.end());
  std::vector<Window> windows;
  for (double p : peaks) {
    double wlo = std::max(lo, p - half_window);
    double whi = std::min(hi, p + half_window);
    if (!(wlo < whi)) continue;
    if (!windows.empty() && wlo <= windows.back().hi)
      windows.back().hi = std::max(windows.back().hi, whi);
    else
      windows.push_back({wlo, whi, p});
  }

  std::vector<MappedSegment> segments;
  auto add_plain = [&](double a, double b) {
    if (a < b) segments.push_back({Kind::affine, a, b, 0.0, 1.0});
  };

  double cursor = lo;
  if (std::isinf(lo)) {
    double left_end = windows.empty() ? (std::isinf(hi) ? 0.0 : hi) : windows.front().lo;
    double scale = std::max(std::abs(left_end), windows.empty() ? 1.0 : half_window);
    segments.push_back({Kind::lower_tail, 0.0, 1.0, left_end, scale});
    cursor = left_end;
  }
  for (const Window& w : windows) {
    add_plain(cursor, w.lo);
    segments.push_back({Kind::affine, (w.lo - w.centre) / spec.peak_width, (w.hi - w.centre) / spec.peak_width,
                        w.centre, spec.peak_width});
    cursor = w.hi;
  }
  if (std::isinf(hi)) {
    double start = cursor;
    if (start > 0.0) {
      add_plain(start, 2.0 * start);
      start *= 2.0;
    }
    double scale = start > 0.0 ? start : std::max(1.0, windows.empty() ? 1.0 : half_window);
    segments.push_back({Kind::upper_tail, 0.0, 1.0, start, scale});
  } else {
    add_plain(cursor, hi);
  }

  return integrate_segments(f, segments, spec.abs_tol, spec.rel_tol, spec.max_subdivisions);
}

QuadratureResult integrate_radial(const Integrand& f, const QuadratureSpec& spec) {
  return integrate_range(f, 0.0, std::numeric_limits<double>::infinity(), spec);
}

}  // namespace regdist
