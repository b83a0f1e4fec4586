#include <cmath>

#include "doctest.h"
#include "oracle.hpp"
#include "regdist/errors.hpp"
#include "regdist/observables.hpp"

using namespace regdist;

namespace {

std::vector<double> radii(double a) {
  std::vector<double> r;
  for (int i = 0; i < 20; ++i) r.push_back(a / 2 + (10 * a - a / 2) * i / 19.0);
  return r;
}

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

}  // namespace

TEST_CASE("AsymptoticValue bookkeeping") {
  AsymptoticValue v(1);
  v.add(-1, 0, 2.0);
  v.add(-1, 0, 1.0);
  v.add(0, -1, 0.0);
  CHECK(v.coefficient(-1, 0) == 3.0);
  CHECK(v.size() == 1);
  CHECK_FALSE(v.contains(0, -1));
  CHECK(v.evaluate(0.5, 1e-3) == doctest::Approx(6.0));
  CHECK(v.remainder_order() == 1);
}

TEST_CASE("M_n closed forms") {
  const TwoScale ts{0.1, 1e-3};
  const Regularizer g = Regularizer::gaussian();
  AsymptoticValue m2 = moment_Mn_analytic(2, ts, g);
  CHECK(m2.coefficient(-1, 0) == 0.0);
  CHECK(m2.coefficient(0, -1) == m20(g));
  CHECK(m2.size() == 1);

  AsymptoticValue m1 = moment_Mn_analytic(1, ts, g);
  CHECK(m1.coefficient(-2, 0) == doctest::Approx(-0.5));
  CHECK(m1.coefficient(-1, -1) == m20(g));

  const Regularizer asym = Regularizer::asymmetric_bump(0.3);
  AsymptoticValue m1a = moment_Mn_analytic(1, ts, asym);
  CHECK(m1a.coefficient(-2, 0) == doctest::Approx(-0.5 - m21(asym)).epsilon(1e-14));

  CHECK_THROWS_AS(moment_Mn_analytic(3, ts, g), PoleError);
}

TEST_CASE("R_n closed forms") {
  const TwoScale ts{0.1, 1e-3};
  const Regularizer g = Regularizer::gaussian();
  AsymptoticValue r3 = Rn_analytic(3, ts, g);
  CHECK(r3.size() == 1);
  CHECK(r3.coefficient(0, -1) == m20(g));
  AsymptoticValue r2 = Rn_analytic(2, ts, g);
  CHECK(r2.coefficient(-1, -1) == m20(g));
  CHECK(r2.coefficient(-2, 0) == doctest::Approx(-0.5));
  AsymptoticValue r5 = Rn_analytic(5, ts, g);
  CHECK(r5.coefficient(2, -1) == m20(g));
  CHECK(r5.coefficient(1, 0) == doctest::Approx(-2.0));
  CHECK_THROWS_AS(Rn_analytic(4, ts, g), PoleError);
}

TEST_CASE("numeric moments follow their closed forms") {
  for (const Regularizer& rho : {Regularizer::gaussian(), Regularizer::compact_bump()})
    for (double a : {0.05, 0.1}) {
      const TwoScale ts{a, a / 100};
      CAPTURE(rho.label());
      CAPTURE(a);
      for (int n : {1, 2}) CHECK(rel(moment_Mn_numeric(n, ts, rho), moment_Mn_analytic(n, ts, rho).evaluate(a, ts.eps)) < 1e-3);
      for (int n : {2, 3}) CHECK(rel(Rn_numeric(n, ts, rho), Rn_analytic(n, ts, rho).evaluate(a, ts.eps)) < 1e-3);
    }
}

TEST_CASE("term-expanded integrals agree with single-integrand quadrature") {
  const TwoScale ts{0.1, 1e-3};
  const double m2 = moment_Mn_numeric(2, ts, Regularizer::gaussian());
  CHECK(m2 == doctest::Approx(398.94).epsilon(5e-3));
  CHECK(rel(m2, oracle::brute_Mn(2, oracle::gaussian(), ts.a, ts.eps)) < 1e-6);
  CHECK(rel(moment_Mn_numeric(1, ts, Regularizer::compact_bump()),
            oracle::brute_Mn(1, oracle::compact_bump(), ts.a, ts.eps)) < 1e-6);

  const double r3 = Rn_numeric(3, ts, Regularizer::gaussian());
  CHECK(r3 == doctest::Approx(398.94).epsilon(5e-3));
  CHECK(rel(r3, oracle::brute_Rn(3, oracle::gaussian(), ts.a, ts.eps)) < 1e-6);
  CHECK(rel(Rn_numeric(2, ts, Regularizer::compact_bump()), oracle::brute_Rn(2, oracle::compact_bump(), ts.a, ts.eps)) <
        1e-6);
}

TEST_CASE("the 1/a terms of M_2 cancel at finite parameters") {
  const double eps = 5e-4;
  for (const Regularizer& rho : {Regularizer::gaussian(), Regularizer::compact_bump()}) {
    const double lo = moment_Mn_numeric(2, {0.05, eps}, rho), hi = moment_Mn_numeric(2, {0.1, eps}, rho);
    CHECK(std::abs(lo - hi) / hi < 5e-3);
  }
}

TEST_CASE("asymmetric kernels shift M_1 by a multiple of M21") {
  const Regularizer rho = Regularizer::asymmetric_bump(0.3);
  const TwoScale ts{0.1, 1e-3};
  const double M20 = m20(rho), M21 = m21(rho);
  const double even_formula = M20 / (ts.a * ts.eps) - 1 / (2 * ts.a * ts.a);
  const double shift = moment_Mn_numeric(1, ts, rho) - even_formula;
  // the shift is -M21/a^2 at leading order
  CHECK(rel(shift, -M21 / (ts.a * ts.a)) < 0.05);
  CHECK(rel(moment_Mn_numeric(1, ts, rho), moment_Mn_analytic(1, ts, rho).evaluate(ts.a, ts.eps)) < 1e-3);
  CHECK(rel(moment_Mn_numeric(2, ts, rho), moment_Mn_analytic(2, ts, rho).evaluate(ts.a, ts.eps)) < 1e-3);
  CHECK(rel(Rn_numeric(2, ts, rho), Rn_analytic(2, ts, rho).evaluate(ts.a, ts.eps)) < 1e-3);
}

TEST_CASE("domain checks") {
  const Regularizer g = Regularizer::gaussian();
  CHECK_THROWS_AS(moment_Mn_numeric(3, {0.1, 1e-3}, g), DomainError);
  CHECK_THROWS_AS(Rn_numeric(4, {0.1, 1e-3}, g), DomainError);
  CHECK_THROWS_AS(moment_Mn_numeric(2, {0.1, 0.05}, g), RegimeError);
  CHECK_THROWS_AS(delta_sq_weighted([](double) { return 1.0; }, {0.1, 0.05}, g), RegimeError);
}

TEST_CASE("boundary terms vanish") {
  const TwoScale ts{0.1, 1e-3};
  for (const Regularizer& rho : {Regularizer::gaussian(), Regularizer::compact_bump()}) {
    const auto T2 = SingularTermFamily::power_heaviside(2, rho, ts);
    auto boundary = [&](double r) { return r * r * T2(r) * T2(r); };
    CHECK(boundary(ts.eps / 10) < 1e-300);
    const double far = 1e4 * ts.a;
    CHECK(boundary(far) == doctest::Approx(1 / (far * far)).epsilon(1e-6));
    CHECK(boundary(far) < 1e-6 * boundary(2 * ts.a));
  }
}

TEST_CASE("weighted delta-squared integrals") {
  const TwoScale ts{0.1, 1e-3};
  const Regularizer g = Regularizer::gaussian();
  CHECK(delta_sq_weighted([](double) { return 0.0; }, ts, g) == 0.0);
  CHECK(rel(delta_sq_weighted([](double) { return 1.0; }, ts, g), m20(g) / ts.eps) < 1e-10);

  auto r2 = [](double r) { return r * r; };
  const double v = delta_sq_weighted(r2, ts, g);
  CHECK(v == doctest::Approx(0.3989 * 0.01 / 0.001).epsilon(1e-2));
  const double brute =
      oracle::radial([&](double r) { return std::pow(oracle::delta(oracle::gaussian(), ts.a, ts.eps, r), 2) * r * r; },
                     oracle::gaussian(), ts.a, ts.eps);
  CHECK(rel(v, brute) < 1e-8);
  CHECK(rel(v, delta_sq_prediction(r2, ts, g)) < 1e-3);

  const Regularizer asym = Regularizer::asymmetric_bump(0.4);
  const double va = delta_sq_weighted(r2, ts, asym);
  const double full = delta_sq_prediction(r2, ts, asym);
  const double given = delta_sq_prediction(r2, ts, asym, [](double r) { return 2 * r; });
  CHECK(full == doctest::Approx(given).epsilon(1e-10));
  const double leading = m20(asym) * r2(ts.a) / ts.eps;
  CHECK(std::abs(va - full) < 0.1 * std::abs(va - leading));
}

TEST_CASE("integration-by-parts identities") {
  for (const Regularizer& rho : {Regularizer::gaussian(), Regularizer::compact_bump(), Regularizer::asymmetric_bump(0.3)})
    for (double a : {0.05, 0.1}) {
      const TwoScale ts{a, a / 100};
      for (IdentityTag tag : all_identity_tags()) {
        CAPTURE(rho.label());
        CAPTURE(to_string(tag));
        CHECK(identity_residual(tag, ts, rho, radii(a)) < 1e-5);
        CHECK(identity_residual(tag, ts, rho, radii(a), 0.0) == 0.0);
      }
    }
}

TEST_CASE("identity tag names") {
  for (IdentityTag tag : all_identity_tags()) CHECK(identity_tag_from_string(to_string(tag)) == tag);
  CHECK(all_identity_tags().size() == 6);
  CHECK_THROWS_AS(identity_tag_from_string("SEN9"), DomainError);
}
