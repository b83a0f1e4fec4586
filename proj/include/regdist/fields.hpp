#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "regdist/embedding.hpp"

namespace regdist {

// Point source: charge e, magnetic moment mu, speed of light c (Gaussian units).
struct ElectronParams {
  double e = 1.0;
  Eigen::Vector3d mu = Eigen::Vector3d::UnitZ();
  double c = 1.0;

  void validate() const;
};

// A regularized radial field. The evaluator works directly from the y-space
// integrals; the decomposition lists the same function as weighted term
// families, and the two must agree.
struct RadialProfile {
  std::string name;
  std::function<double(double)> evaluator;
  std::vector<WeightedTerm> decomposition;

  double operator()(double r) const { return evaluator(r); }
  double sum_of_terms(double r) const;
};

struct SphereDirection {
  Eigen::Vector3d u = Eigen::Vector3d::UnitZ();

  static SphereDirection from_angles(double theta, double phi);
  // Normalizes v; DomainError for a zero vector.
  static SphereDirection from_vector(const Eigen::Vector3d& v);
};

// e (r^-1 H_a)_eps.
RadialProfile coulomb_potential(const ElectronParams& p, const TwoScale& ts, const Regularizer& rho);

// E(r) = e[(r^-2 H_a)_eps - (a^-1 delta_a)_eps], the radial component of E.
RadialProfile coulomb_field(const ElectronParams& p, const TwoScale& ts, const Regularizer& rho);

// varrho(r) = (e/4pi)[(2/r)(r^-2 H_a) - 2(r^-3 H_a) + (a^-2 delta_a) - (2/r)(a^-1 delta_a) - (a^-1 delta'_a)].
// At r = 0 the evaluator returns the one-sided extrapolation 2f(h) - f(2h),
// h = eps/100, or throws PoleAtOriginError if that is not finite.
RadialProfile charge_density(const ElectronParams& p, const TwoScale& ts, const Regularizer& rho);

// h1 = (1/r)(r^-2 H_a)_eps,  h2 = (a^-2 delta_a)_eps - 2(r^-3 H_a)_eps.
std::pair<RadialProfile, RadialProfile> dipole_h1h2(const ElectronParams& p, const TwoScale& ts,
                                                    const Regularizer& rho);

// H(r u) = (mu + u(mu.u)) h1(r) + (mu - u(mu.u)) h2(r).
Eigen::Vector3d dipole_field(const ElectronParams& p, const TwoScale& ts, const Regularizer& rho,
                             const SphereDirection& u, double r);

// The scalar multiplying e mu x u in E x H:
//   [(r^-2 H_a) - (a^-1 delta_a)] [2(r^-3 H_a) - (1/r)(r^-2 H_a) - (a^-2 delta_a)].
double cross_profile(const ElectronParams& p, const TwoScale& ts, const Regularizer& rho, double r);

// E x H at r u.
Eigen::Vector3d poynting_vector(const ElectronParams& p, const TwoScale& ts, const Regularizer& rho,
                                const SphereDirection& u, double r);

// int_{(a-r)/eps}^inf rho(y) (r + eps y)^-n dy, integrated in y.
double y_space_integral(const Regularizer& rho, const TwoScale& ts, double r, int n);

}  // namespace regdist
