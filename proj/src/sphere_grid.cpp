#include <cmath>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include "regdist/errors.hpp"
#include "regdist/quadrature.hpp"

namespace regdist {

SphereGrid make_sphere_grid(int order) {
  if (order < 1) throw DomainError("make_sphere_grid: order must be >= 1");
  constexpr double pi = boost::math::constants::pi<double>();

  // Legendre zeros come back as the non-negative half, ascending.
  std::vector<double> half = boost::math::legendre_p_zeros<double>(order);
  std::vector<double> x;
  for (auto it = half.rbegin(); it != half.rend(); ++it)
    if (*it != 0.0) x.push_back(-*it);
  for (double v : half) x.push_back(v);

  const int n_phi = 2 * order;
  const double dphi = 2.0 * pi / n_phi;

  SphereGrid grid;
  grid.order = order;
  grid.nodes.reserve(x.size() * static_cast<std::size_t>(n_phi));
  for (double ct : x) {
    double dp = boost::math::legendre_p_prime(order, ct);
    double w_theta = 2.0 / ((1.0 - ct * ct) * dp * dp);
    double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    for (int j = 0; j < n_phi; ++j) {
      double phi = dphi * j;
      grid.nodes.push_back({Eigen::Vector3d(st * std::cos(phi), st * std::sin(phi), ct), w_theta * dphi});
    }
  }
  return grid;
}

}  // namespace regdist
