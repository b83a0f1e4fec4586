// Acceptance gate: one PASS/FAIL line per criterion.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "regdist/electron.hpp"
#include "regdist/fields.hpp"
#include "regdist/observables.hpp"

using namespace regdist;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, double metric, double tol) {
  std::printf("[%s] criterion %d: %s (worst = %.3e, tol = %.1e)\n", ok ? "PASS" : "FAIL", id, what.c_str(), metric, tol);
  if (!ok) ++failures;
}

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return (*hi - *lo) / std::abs(*hi);
}

const std::vector<double> kA = {0.05, 0.1};
const std::vector<double> kSweep = {0.05, 0.08, 0.1};

std::vector<Regularizer> even_kernels() { return {Regularizer::gaussian(), Regularizer::compact_bump()}; }

void moments() {
  double worst = 0.0;
  for (const Regularizer& rho : even_kernels())
    for (double a : kA) {
      const TwoScale ts{a, a / 100};
      for (int n : {1, 2})
        worst = std::max(worst, rel(moment_Mn_numeric(n, ts, rho), moment_Mn_analytic(n, ts, rho).evaluate(a, ts.eps)));
    }
  report(1, worst < 1e-3, "M_n numeric vs expansion, n in {1,2}", worst, 1e-3);
}

void electric_energy() {
  const Regularizer g = Regularizer::gaussian();
  const ElectronParams p;
  std::vector<double> u;
  std::vector<Sample> s;
  for (double a : kSweep) {
    u.push_back(self_energy_electric(p, {a, 5e-4}, g).numeric);
    s.emplace_back(a, u.back());
  }
  const double sp = spread(u);
  const double exponent = fit_power_law(s).exponent;
  report(2, sp < 5e-3 && std::abs(exponent) <= 0.02, "U_ele spread over a", sp, 5e-3);
  std::printf("       U_ele a-exponent = %+.5f (target 0 +- 0.02)\n", exponent);
}

void delta_squared() {
  const Regularizer g = Regularizer::gaussian();
  auto F = [](double r) { return r * r; };
  const TwoScale ts{0.1, 1e-3};
  const double dev = rel(delta_sq_weighted(F, ts, g), m20(g) * ts.a * ts.a / ts.eps);
  std::vector<Sample> s;
  for (double eps : geometric_eps_grid(1e-3)) s.emplace_back(eps, delta_sq_weighted(F, {ts.a, eps}, g));
  const double exponent = fit_power_law(s).exponent;
  report(3, dev < 1e-2 && std::abs(exponent + 1) <= 0.01, "delta^2 r^2 integral vs M20 a^2/eps", dev, 1e-2);
  std::printf("       eps-exponent = %+.5f (target -1 +- 0.01)\n", exponent);
}

void dipole_delta() {
  double worst = 0.0;
  for (double a : kA) {
    ElectronParams p;
    const TwoScale ts{a, a / 100};
    for (const Eigen::Vector3d& mu : {Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(0.3, -1.2, 0.5)}) {
      p.mu = mu;
      const Eigen::Vector3d ref = 8 * M_PI / 3 * mu;
      worst = std::max(worst, (dipole_delta_volume_integral(p, ts, Regularizer::gaussian()).value - ref).norm() / ref.norm());
    }
  }
  report(4, worst < 1e-4, "dipole delta-term volume integral vs (8 pi/3) mu", worst, 1e-4);
}

void magnetic_energy() {
  const Regularizer g = Regularizer::gaussian();
  const ElectronParams p;
  std::vector<double> scaled;
  for (double a : kSweep) scaled.push_back(self_energy_magnetic(p, {a, 5e-4}, g).numeric * a * a);
  const double sp = spread(scaled);

  double dev = 0.0, sector = 0.0;
  for (double a : kA) {
    const TwoScale ts{a, a / 100};
    const ObservableReport u = self_energy_magnetic(p, ts, g);
    dev = std::max(dev, rel(u.numeric, p.mu.squaredNorm() / (3 * a * a) * m20(g) / ts.eps));
    sector = std::max(sector, std::abs(u.extras.at("h_sector")) / (2 / (3 * a * a * a)));
  }
  report(5, sp < 5e-3 && dev < 1e-3 && sector < 1e-2, "U_mag leading term", dev, 1e-3);
  std::printf("       U_mag a^2 spread = %.3e (tol 5e-3), H-sector ratio = %.3e (tol 1e-2)\n", sp, sector);
}

void self_force() {
  const Regularizer g = Regularizer::gaussian();
  const ElectronParams p;
  double dev = 0.0, norm_ratio = 0.0;
  bool nonneg = true;
  for (double a : kA) {
    const TwoScale ts{a, a / 100};
    const ObservableReport f = radial_self_force(p, ts, g);
    dev = std::max(dev, rel(f.numeric, m20(g) / (a * ts.eps) - 1 / (2 * a * a)));
    nonneg = nonneg && f.numeric >= 0.0;
    norm_ratio = std::max(norm_ratio, f.extras.at("force_norm") / (4 * M_PI * f.numeric));
  }
  report(6, dev < 1e-3 && nonneg && norm_ratio <= 1e-10, "F_r vs M20/(a eps) - 1/(2a^2)", dev, 1e-3);
  std::printf("       F_r >= 0: %s, |F|/(4 pi F_r) = %.3e (tol 1e-10)\n", nonneg ? "yes" : "no", norm_ratio);
}

void momentum() {
  const Regularizer g = Regularizer::gaussian();
  ElectronParams p;
  p.mu = Eigen::Vector3d(0.2, 0.4, -1.0);
  double ratio = 0.0, dev = 0.0;
  for (double a : kA) {
    const TwoScale ts{a, a / 100};
    const ObservableReport P = hidden_momentum(p, ts, g);
    const double R2 = P.extras.at("P_r");
    ratio = std::max(ratio, P.numeric_vector.norm() / (4 * M_PI * std::abs(R2) * p.mu.norm() * p.e / p.c));
    dev = std::max(dev, rel(R2, Rn_analytic(2, ts, g).evaluate(a, ts.eps)));
  }
  report(7, ratio <= 1e-10 && dev < 1e-3, "hidden momentum cancels", ratio, 1e-10);
  std::printf("       R_2 vs expansion = %.3e (tol 1e-3)\n", dev);
}

void spin_vector() {
  const Regularizer g = Regularizer::gaussian();
  ElectronParams p;
  double dev = 0.0, mis = 0.0;
  for (const Eigen::Vector3d& mu : {Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(0.3, -0.4, 0.8)}) {
    p.mu = mu;
    for (double a : kA) {
      const TwoScale ts{a, a / 100};
      const ObservableReport s = spin(p, ts, g);
      dev = std::max(dev, rel(s.numeric_vector.norm(), 2 * p.e * mu.norm() / (3 * p.c) * m20(g) / ts.eps));
      mis = std::max(mis, s.numeric_vector.normalized().cross(mu.normalized()).norm());
    }
  }
  report(8, dev < 1e-3 && mis < 1e-10, "|S| vs (2 e mu/3c) M20/eps", dev, 1e-3);
  std::printf("       direction misalignment = %.3e (tol 1e-10)\n", mis);
}

void identities() {
  double worst = 0.0;
  for (const Regularizer& rho : even_kernels())
    for (double a : kA) {
      std::vector<double> r;
      for (int i = 0; i < 20; ++i) r.push_back(a / 2 + (10 * a - a / 2) * i / 19.0);
      for (IdentityTag tag : all_identity_tags()) worst = std::max(worst, identity_residual(tag, {a, a / 100}, rho, r));
    }
  report(9, worst < 1e-5, "integration-by-parts identity residuals", worst, 1e-5);
}

void asymmetric() {
  const Regularizer rho = Regularizer::asymmetric_bump(0.3);
  const TwoScale ts{0.1, 1e-3};
  const double M21 = m21(rho);
  const double even = m20(rho) / (ts.a * ts.eps) - 1 / (2 * ts.a * ts.a);
  const double shift = moment_Mn_numeric(1, ts, rho) - even;
  const double target = M21 / (ts.a * ts.a);
  const double dev = rel(shift, target);
  report(10, dev < 0.05, "asymmetric M_1 shift vs +M21/a^2", dev, 0.05);
  std::printf("       shift = %.5g, +M21/a^2 = %.5g, -M21/a^2 = %.5g\n", shift, target, -target);
  const double flipped = rel(shift, -target);
  std::printf("       [INFO] shift vs -M21/a^2: %s (dev = %.3e, tol = 5.0e-02)\n", flipped < 0.05 ? "PASS" : "FAIL", flipped);
}

void oracle_equivalence() {
  const std::vector<std::pair<double, double>> points = {{0.05, 5e-4}, {0.08, 8e-4}, {0.1, 1e-3}, {0.1, 3e-4}, {0.2, 1e-3}};
  const Regularizer g = Regularizer::gaussian();
  const oracle::Kernel k = oracle::gaussian();
  double worst = 0.0;
  for (const auto& [a, eps] : points) {
    const TwoScale ts{a, eps};
    for (int n : {1, 2}) worst = std::max(worst, rel(moment_Mn_numeric(n, ts, g), oracle::brute_Mn(n, k, a, eps)));
    for (int n : {2, 3}) worst = std::max(worst, rel(Rn_numeric(n, ts, g), oracle::brute_Rn(n, k, a, eps)));
  }
  report(11, worst < 1e-6, "term-expanded vs single-integrand quadrature", worst, 1e-6);
}

void classical_limits() {
  const ElectronParams p;
  double worst = 0.0;
  for (const Regularizer& rho : even_kernels())
    for (double a : kA)
      for (double ratio : {1e-2, 1e-3}) {
        const TwoScale ts{a, a * ratio};
        const RadialProfile phi = coulomb_potential(p, ts, rho), E = coulomb_field(p, ts, rho);
        const RadialProfile q = charge_density(p, ts, rho);
        auto [h1, h2] = dipole_h1h2(p, ts, rho);
        const SphereDirection u = SphereDirection::from_angles(0.9, 2.1);
        for (double r = 10 * a; r < 300 * a; r *= 1.5) {
          worst = std::max(worst, rel(phi(r), p.e / r));
          worst = std::max(worst, rel(E(r), p.e / (r * r)));
          worst = std::max(worst, std::abs(q(r)) / (p.e / (r * r * r)));
          worst = std::max(worst, rel(h1(r), std::pow(r, -3)));
          worst = std::max(worst, rel(h2(r), -2 * std::pow(r, -3)));
          const Eigen::Vector3d B = (3 * u.u * p.mu.dot(u.u) - p.mu) / std::pow(r, 3);
          worst = std::max(worst, (dipole_field(p, ts, rho, u, r) - B).norm() / B.norm());
          worst = std::max(worst, rel(cross_profile(p, ts, rho, r), std::pow(r, -5)));
        }
      }
  report(12, worst < 1e-5, "field profiles match classical forms for r >= 10a", worst, 1e-5);
}

}  // namespace

int main() {
  moments();
  electric_energy();
  delta_squared();
  dipole_delta();
  magnetic_energy();
  self_force();
  momentum();
  spin_vector();
  identities();
  asymmetric();
  oracle_equivalence();
  classical_limits();
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
