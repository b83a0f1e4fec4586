#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <Eigen/Geometry>

#include "doctest.h"
#include "regdist/embedding.hpp"
#include "regdist/errors.hpp"
#include "regdist/quadrature.hpp"

using namespace regdist;

TEST_CASE("QuadratureSpec validation") {
  QuadratureSpec s;
  CHECK_NOTHROW(s.validate());
  s.abs_tol = 0.0;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = {};
  s.peak_width = -1.0;
  CHECK_THROWS_AS(s.validate(), DomainError);
}

TEST_CASE("integrate_radial on closed forms") {
  QuadratureSpec spec;
  QuadratureResult q = integrate_radial([](double r) { return std::exp(-r); }, spec);
  CHECK(std::abs(q.value - 1.0) < 1e-10);
  CHECK(q.error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(q.value)));

  q = integrate_radial([](double r) { return 1.0 / (1.0 + r * r); }, spec);
  CHECK(q.value == doctest::Approx(M_PI / 2).epsilon(1e-8));
}

TEST_CASE("squared delta with a peak hint") {
  const Regularizer g = Regularizer::gaussian();
  const double a = 0.1, eps = 1e-3;
  QuadratureSpec spec;
  spec.peak_locations = {a};
  spec.peak_width = eps;
  QuadratureResult q = integrate_radial(
      [&](double r) {
        const double d = delta_embed(g, eps, r - a);
        return d * d;
      },
      spec);
  CHECK(q.value == doctest::Approx(m20(g) / eps).epsilon(1e-6));
  CHECK(q.value == doctest::Approx(398.9423).epsilon(1e-6));
}

TEST_CASE("a peak missing from the hints converges or reports its best estimate") {
  const Regularizer g = Regularizer::gaussian();
  const double a = 0.37, eps = 1e-6;
  QuadratureSpec spec;
  spec.max_subdivisions = 200;
  auto f = [&](double r) { return delta_embed(g, eps, r - a); };
  try {
    QuadratureResult q = integrate_radial(f, spec);
    // the adaptive scheme may step over the spike entirely
    CHECK((std::abs(q.value - 1.0) < 1e-6 || std::abs(q.value) < 1e-6));
  } catch (const IntegrationError& e) {
    CHECK(std::isfinite(e.best_value()));
    CHECK(e.error_estimate() >= 0.0);
  }
}

TEST_CASE("subdivision budget exhaustion carries the best estimate") {
  try {
    integrate_interval([](double x) { return std::sin(1.0 / x); }, 1e-6, 1.0, 1e-14, 1e-14, 5);
    FAIL("expected IntegrationError");
  } catch (const IntegrationError& e) {
    CHECK(std::isfinite(e.best_value()));
    CHECK(e.error_estimate() > 0.0);
  }
}

TEST_CASE("error estimates bound the true error on a synthetic suite") {
  struct Case {
    std::function<double(double)> f;
    double lo, hi, truth;
    std::vector<double> peaks;
    double width;
  };
  std::vector<Case> cases;
  for (double k : {0.5, 1.0, 2.0, 3.5, 5.0, 8.0, 13.0, 21.0})
    cases.push_back({[k](double r) { return std::exp(-k * r); }, 0.0, INFINITY, 1 / k, {}, 1.0});
  for (int m = 1; m <= 8; ++m)
    cases.push_back({[m](double r) { return std::pow(r, m) * std::exp(-r); }, 0.0, INFINITY, std::tgamma(m + 1.0), {}, 1.0});
  for (double p : {0.01, 0.1, 0.5, 2.0})
    for (double w : {1e-4, 1e-3, 1e-2})
      cases.push_back({[p, w](double r) { return std::exp(-((r - p) / w) * ((r - p) / w)); }, 0.0, INFINITY,
                       w * std::sqrt(M_PI) / 2 * (1 + std::erf(p / w)), {p}, w});
  for (int m = 0; m <= 7; ++m)
    cases.push_back({[m](double x) { return std::pow(x, m); }, 0.0, 1.0, 1.0 / (m + 1), {}, 1.0});
  for (double c : {0.5, 1.0, 2.0, 4.0})
    cases.push_back({[c](double r) { return 1 / ((c + r) * (c + r)); }, 0.0, INFINITY, 1 / c, {}, 1.0});
  for (double w : {1.0, 2.0, 3.0, 5.0, 7.0})
    cases.push_back({[w](double x) { return std::sin(w * x); }, 0.0, M_PI, (1 - std::cos(w * M_PI)) / w, {}, 1.0});
  for (double s : {0.5, 1.0, 3.0})
    cases.push_back({[s](double x) { return std::sqrt(x) * std::exp(-s * x); }, 0.0, INFINITY,
                     std::sqrt(M_PI) / (2 * s * std::sqrt(s)), {}, 1.0});
  cases.push_back({[](double x) { return std::exp(x); }, 0.0, 1.0, std::exp(1.0) - 1, {}, 1.0});
  cases.push_back({[](double x) { return std::cos(x); }, 0.0, M_PI / 2, 1.0, {}, 1.0});
  REQUIRE(cases.size() == 50);

  int within2 = 0;
  for (const Case& c : cases) {
    QuadratureSpec spec;
    spec.abs_tol = 1e-10;
    spec.rel_tol = 1e-8;
    spec.peak_locations = c.peaks;
    spec.peak_width = c.width;
    QuadratureResult q = integrate_range(c.f, c.lo, c.hi, spec);
    const double err = std::abs(q.value - c.truth);
    CAPTURE(c.truth);
    CAPTURE(q.value);
    CAPTURE(q.error);
    CHECK(err <= 10 * q.error);
    if (err <= 2 * q.error) ++within2;
  }
  CHECK(within2 >= 48);
}

TEST_CASE("integrate_radial is deterministic") {
  QuadratureSpec spec;
  spec.peak_locations = {0.1};
  spec.peak_width = 1e-3;
  auto f = [](double r) { return std::exp(-r) / (1 + 1e6 * (r - 0.1) * (r - 0.1)); };
  const QuadratureResult a = integrate_radial(f, spec), b = integrate_radial(f, spec);
  CHECK(a.value == b.value);
  CHECK(a.error == b.error);
}

TEST_CASE("sphere grid") {
  const SphereGrid grid = make_sphere_grid(16);
  double w = 0.0;
  for (const SphereNode& n : grid.nodes) {
    w += n.weight;
    CHECK(std::abs(n.u.norm() - 1.0) < 1e-14);
  }
  CHECK(std::abs(w - 4 * M_PI) < 1e-12);
  CHECK(integrate_sphere([](const Eigen::Vector3d&) { return 1.0; }, grid) == doctest::Approx(4 * M_PI).epsilon(1e-14));
  CHECK(integrate_sphere([](const Eigen::Vector3d& u) { return u; }, grid).norm() < 1e-12);

  const Eigen::Vector3d z = Eigen::Vector3d::UnitZ();
  const Eigen::Vector3d got = integrate_sphere([&](const Eigen::Vector3d& u) { return Eigen::Vector3d(u.cross(z.cross(u))); }, grid);

  // dense product-Gauss reference in (theta, phi)
  using G = boost::math::quadrature::gauss<double, 40>;
  Eigen::Vector3d ref = Eigen::Vector3d::Zero();
  for (int c = 0; c < 3; ++c) {
    ref[c] = G::integrate(
        [&](double th) {
          return G::integrate(
              [&](double ph) {
                const Eigen::Vector3d u(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
                return u.cross(z.cross(u))[c] * std::sin(th);
              },
              0.0, 2 * M_PI);
        },
        0.0, M_PI);
  }
  CHECK((got - ref).norm() < 1e-10);
  CHECK((got - 8 * M_PI / 3 * z).norm() < 1e-10);
}

TEST_CASE("sphere grid integrates monomials up to its declared degree") {
  for (int order : {4, 8, 16}) {
    const SphereGrid grid = make_sphere_grid(order);
    for (int i = 0; i <= grid.exact_degree(); ++i)
      for (int j = 0; i + j <= grid.exact_degree(); ++j)
        for (int k = 0; i + j + k <= grid.exact_degree(); ++k) {
          double exact = 0.0;
          if (i % 2 == 0 && j % 2 == 0 && k % 2 == 0) {
            using boost::math::tgamma;
            exact = 2 * tgamma((i + 1) / 2.0) * tgamma((j + 1) / 2.0) * tgamma((k + 1) / 2.0) /
                    tgamma((i + j + k + 3) / 2.0);
          }
          const double got = integrate_sphere(
              [&](const Eigen::Vector3d& u) { return std::pow(u.x(), i) * std::pow(u.y(), j) * std::pow(u.z(), k); }, grid);
          CHECK(std::abs(got - exact) < 1e-12);
        }
  }
}

TEST_CASE("fit_asymptotics") {
  const int powers[] = {-1, 0, 1};
  std::vector<Sample> s;
  for (double e : geometric_eps_grid(1e-2)) s.emplace_back(e, 3 / e);
  AsymptoticFit f = fit_asymptotics(s, powers);
  CHECK(f.value.coefficient(0, -1) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::abs(f.value.coefficient(0, 0)) < 1e-8);
  CHECK(std::abs(f.value.coefficient(0, 1)) < 1e-4);

  s.clear();
  for (double e : geometric_eps_grid(1e-2)) s.emplace_back(e, 2 / e + 5 + e * e);
  f = fit_asymptotics(s, powers);
  CHECK(std::abs(f.value.coefficient(0, -1) - 2) < 1e-6);
  CHECK(std::abs(f.value.coefficient(0, 0) - 5) < 1e-4);

  const std::vector<Sample> one = {{1e-3, 1.0}};
  CHECK_THROWS_AS(fit_asymptotics(one, powers), ConditioningError);
  const std::vector<Sample> narrow = {{1e-3, 1.0}, {1.1e-3, 1.0}, {1.2e-3, 1.0}, {1.3e-3, 1.0}};
  CHECK_THROWS_AS(fit_asymptotics(narrow, powers), ConditioningError);
}

TEST_CASE("fit_power_law") {
  std::vector<Sample> s;
  for (double x : {0.05, 0.08, 0.1, 0.2}) s.emplace_back(x, 7 * std::pow(x, -2));
  PowerLawFit f = fit_power_law(s);
  CHECK(f.exponent == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(f.coefficient == doctest::Approx(7.0).epsilon(1e-12));
  s[1].second = -1.0;
  CHECK_THROWS_AS(fit_power_law(s), ConditioningError);
  const std::vector<Sample> two = {{1.0, 1.0}, {2.0, 2.0}};
  CHECK_THROWS_AS(fit_power_law(two), ConditioningError);
}
