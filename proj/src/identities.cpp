#include <algorithm>
#include <array>
#include <cmath>

#include "regdist/errors.hpp"
#include "regdist/fields.hpp"
#include "regdist/observables.hpp"

namespace regdist {

namespace {

using Family = SingularTermFamily;

// 5-point central difference.
double derivative(const std::function<double(double)>& f, double r, double h) {
  return (-f(r + 2 * h) + 8 * f(r + h) - 8 * f(r - h) + f(r - 2 * h)) / (12 * h);
}

struct Blocks {
  Family T2, T3, T4, D;

  Blocks(const TwoScale& ts, const Regularizer& rho, double amp)
      : T2(Family::power_heaviside(2, rho, ts, amp)),
        T3(Family::power_heaviside(3, rho, ts, amp)),
        T4(Family::power_heaviside(4, rho, ts, amp)),
        D(Family::delta(0, rho, ts, amp)) {}
};

}  // namespace

std::string to_string(IdentityTag tag) {
  switch (tag) {
    case IdentityTag::SEN8:
      return "SEN8";
    case IdentityTag::SFO7:
      return "SFO7";
    case IdentityTag::DIP13:
      return "DIP13";
    case IdentityTag::DIP14:
      return "DIP14";
    case IdentityTag::ELE12:
      return "ELE12";
    case IdentityTag::ELE13:
      return "ELE13";
  }
  return "unknown";
}

IdentityTag identity_tag_from_string(const std::string& name) {
  std::string upper = name;
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
  for (IdentityTag t : all_identity_tags())
    if (to_string(t) == upper) return t;
  throw DomainError("unknown identity tag '" + name + "'");
}

const std::vector<IdentityTag>& all_identity_tags() {
  static const std::vector<IdentityTag> tags = {IdentityTag::SEN8,  IdentityTag::SFO7,  IdentityTag::DIP13,
                                                IdentityTag::DIP14, IdentityTag::ELE12, IdentityTag::ELE13};
  return tags;
}

IdentitySides identity_sides(IdentityTag tag, const TwoScale& ts, const Regularizer& rho, double r, int n,
                             double amplitude) {
  ts.validate();
  if (!(r > 0.0)) throw DomainError("identity_sides: r must be positive");
  const double a = ts.a;
  const double h = ts.eps / 100.0;
  if (r - 2 * h <= 0.0) throw DomainError("identity_sides: r too close to the origin for the difference stencil");
  const Blocks b(ts, rho, amplitude);
  auto sq = [](const Family& f) { return [&f](double x) { double v = f(x); return v * v; }; };

  IdentitySides s;
  switch (tag) {
    case IdentityTag::SEN8: {
      s.lhs = derivative(sq(b.T2), r, h);
      double t2 = b.T2(r);
      s.rhs = 2 * t2 * b.D(r) / (a * a) - 4 * t2 * b.T3(r);
      break;
    }
    case IdentityTag::DIP13: {
      s.lhs = r * derivative(sq(b.T2), r, h);
      double t2 = b.T2(r);
      s.rhs = 2 * r * t2 * b.D(r) / (a * a) - 4 * r * t2 * b.T3(r);
      break;
    }
    case IdentityTag::DIP14: {
      s.lhs = a * r * r * derivative(sq(b.T3), r, h);
      double t3 = b.T3(r);
      s.rhs = 2 * a * r * r * t3 * b.D(r) / (a * a * a) - 6 * a * r * r * t3 * b.T4(r);
      break;
    }
    case IdentityTag::ELE12: {
      const double rn = std::pow(r, n);
      s.lhs = a * a * rn * derivative(sq(b.T3), r, h);
      double t3 = b.T3(r);
      s.rhs = (2 * rn / a) * t3 * b.D(r) - 6 * a * a * rn * t3 * b.T4(r);
      break;
    }
    case IdentityTag::ELE13: {
      const double w = a * std::pow(r, n - 1) - std::pow(r, n);
      s.lhs = 0.5 * w * derivative(sq(b.T2), r, h);
      double t2 = b.T2(r);
      s.rhs = (w / (a * a)) * t2 * b.D(r) - 2 * w * t2 * b.T3(r);
      break;
    }
    case IdentityTag::SFO7: {
      // E (E' + 2E/r) against ((r^2 E)^2)' / (2 r^4), with E' + 2E/r = 4 pi varrho.
      ElectronParams p;
      p.e = amplitude;
      const RadialProfile E = coulomb_field(p, ts, rho);
      const RadialProfile rho_c = charge_density(p, ts, rho);
      auto r2e_sq = [&](double x) {
        double v = x * x * E.sum_of_terms(x);
        return v * v;
      };
      s.lhs = derivative(r2e_sq, r, h) / (2 * std::pow(r, 4));
      s.rhs = E.sum_of_terms(r) * 4.0 * M_PI * rho_c.sum_of_terms(r);
      break;
    }
  }
  return s;
}

double identity_residual(IdentityTag tag, const TwoScale& ts, const Regularizer& rho,
                         std::span<const double> r_samples, double amplitude) {
  std::vector<int> powers = {2};
  if (tag == IdentityTag::ELE12 || tag == IdentityTag::ELE13) powers = {2, 3};
  double worst = 0.0;
  for (double r : r_samples) {
    for (int n : powers) {
      IdentitySides s = identity_sides(tag, ts, rho, r, n, amplitude);
      worst = std::max(worst, std::abs(s.lhs - s.rhs) / (1.0 + std::abs(s.lhs)));
    }
  }
  return worst;
}

}  // namespace regdist
