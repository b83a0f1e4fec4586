#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "oracle.hpp"
#include "regdist/errors.hpp"
#include "regdist/regularizer.hpp"

using namespace regdist;

namespace {

std::vector<Regularizer> shipped() {
  return {Regularizer::gaussian(), Regularizer::compact_bump(), Regularizer::asymmetric_bump(0.3),
          Regularizer::gaussian(0.5), Regularizer::asymmetric_bump(-0.5, 2.0)};
}

double mass(const Regularizer& rho) {
  const Interval s = rho.support();
  auto f = [&](double z) { return rho(z); };
  return oracle::integrate(f, s.lo, rho.peak_centre()) + oracle::integrate(f, rho.peak_centre(), s.hi);
}

}  // namespace

TEST_CASE("gaussian value at the origin") {
  CHECK(Regularizer::gaussian()(0.0) == doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-15));
  CHECK(Regularizer::gaussian()(1.3) == doctest::Approx(std::exp(-1.69) / std::sqrt(M_PI)).epsilon(1e-14));
}

TEST_CASE("compact bump vanishes outside its support") {
  const Regularizer b = Regularizer::compact_bump();
  CHECK(b(1.0) == 0.0);
  CHECK(b(-1.5) == 0.0);
  CHECK(b(7.0) == 0.0);
  CHECK(b(0.99) > 0.0);
  CHECK(Regularizer::asymmetric_bump(0.3)(-0.75) == 0.0);
}

TEST_CASE("shipped kernels have unit mass") {
  for (const Regularizer& rho : shipped()) {
    CAPTURE(rho.label());
    CHECK(std::abs(mass(rho) - 1.0) < 1e-10);
    CHECK(std::abs(moment(rho, 1, 0).value - 1.0) < 1e-10);
  }
}

TEST_CASE("M20 matches the closed form and the oracle") {
  CHECK(m20(Regularizer::gaussian()) == doctest::Approx(1.0 / std::sqrt(2 * M_PI)).epsilon(1e-12));
  CHECK(m20(Regularizer::gaussian()) == doctest::Approx(oracle::moment(oracle::gaussian(), 2, 0)).epsilon(1e-12));
  CHECK(m20(Regularizer::compact_bump()) ==
        doctest::Approx(oracle::moment(oracle::compact_bump(), 2, 0)).epsilon(1e-11));
  // width scaling: M20 ~ 1/w
  CHECK(m20(Regularizer::gaussian(0.5)) == doctest::Approx(2.0 / std::sqrt(2 * M_PI)).epsilon(1e-12));
}

TEST_CASE("odd moments of even kernels vanish") {
  for (const Regularizer& rho : {Regularizer::gaussian(), Regularizer::compact_bump()}) {
    CHECK(rho.parity() == Parity::even);
    for (int p : {1, 2})
      for (int n : {1, 3, 5}) CHECK(std::abs(moment(rho, p, n).value) < 1e-10);
    for (double z : {0.1, 0.37, 0.5, 0.9, 2.5, 6.0}) CHECK(rho(z) == rho(-z));
  }
}

TEST_CASE("asymmetric bump has a non-zero M21 matching a shifted oracle") {
  const double s = 0.3;
  const Regularizer rho = Regularizer::asymmetric_bump(s);
  CHECK(rho.parity() == Parity::general);
  const oracle::Kernel b = oracle::compact_bump();
  oracle::Kernel shifted{[&](double z) { return b.f(z - s); }, s - 1, s + 1};
  const double ref = oracle::moment(shifted, 2, 1);
  CHECK(std::abs(ref) > 0.1);
  CHECK(m21(rho) == doctest::Approx(ref).epsilon(1e-10));
  // a shift leaves M20 alone
  CHECK(m20(rho) == doctest::Approx(m20(Regularizer::compact_bump())).epsilon(1e-11));
  CHECK_THROWS_AS(Regularizer::asymmetric_bump(0.0), DomainError);
}

TEST_CASE("decay bounds hold beyond r0") {
  const Regularizer g = Regularizer::gaussian();
  for (double z = 2.0; z < 30.0; z += 0.37) {
    CHECK(g(z) <= std::exp(-z * z / 2));
    CHECK(g(-z) <= std::exp(-z * z / 2));
  }
  for (const Regularizer& rho : shipped()) {
    const TailBound& b = rho.decay();
    for (double z = b.r0; z < b.r0 + 20; z += 0.41) {
      CHECK(std::abs(rho(z)) <= b(z));
      CHECK(std::abs(rho(-z)) <= b(z));
    }
  }
}

TEST_CASE("analytic derivatives agree with finite differences") {
  for (const Regularizer& rho : shipped()) {
    CAPTURE(rho.label());
    const double h = 1e-4 * rho.params().width;
    for (double z : {-0.6, -0.2, 0.05, 0.33, 0.7}) {
      const double zz = rho.peak_centre() + z * rho.params().width;
      const double fd1 = (rho(zz + h) - rho(zz - h)) / (2 * h);
      const double fd2 = (rho(zz + h) - 2 * rho(zz) + rho(zz - h)) / (h * h);
      CHECK(rho.derivative(zz, 1) == doctest::Approx(fd1).epsilon(1e-6).scale(1.0));
      CHECK(rho.derivative(zz, 2) == doctest::Approx(fd2).epsilon(1e-4).scale(10.0));
      CHECK(rho.derivative(zz, 0) == rho(zz));
    }
  }
}

TEST_CASE("normalize") {
  SUBCASE("unnormalized gaussian is scaled by 1/sqrt(pi)") {
    const Regularizer raw = Regularizer::raw(KernelKind::gaussian, {1.0, 0.0, 1.0});
    CHECK(raw(0.0) == doctest::Approx(1.0));
    const Regularizer n = normalize(raw);
    CHECK(n(0.0) == doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-12));
    CHECK(n(0.8) / raw(0.8) == doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-12));
  }
  SUBCASE("idempotent on normalized kernels") {
    const Regularizer g = Regularizer::gaussian();
    CHECK(normalize(g).same_kernel(g));
  }
  SUBCASE("zero kernel") {
    CHECK_THROWS_AS(normalize(Regularizer::raw(KernelKind::gaussian, {1.0, 0.0, 0.0})), NormalizationError);
  }
}

TEST_CASE("tabulated kernels") {
  std::vector<double> z, v;
  for (int i = -120; i <= 120; ++i) {
    z.push_back(0.05 * i);
    v.push_back(std::exp(-z.back() * z.back()) / std::sqrt(M_PI));
  }
  const Regularizer t = Regularizer::tabulated(z, v);
  CHECK(t.parity() == Parity::even);
  CHECK(t(0.0) == doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-12));
  CHECK(t(0.1234) == doctest::Approx(Regularizer::gaussian()(0.1234)).epsilon(1e-6));
  CHECK_THROWS_AS(t(6.5), InterpolationRangeError);
  CHECK(m20(t) == doctest::Approx(1.0 / std::sqrt(2 * M_PI)).epsilon(1e-6));
  CHECK(t.derivative(0.4, 1) == doctest::Approx(Regularizer::gaussian().derivative(0.4, 1)).epsilon(1e-5));

  v[130] *= 1.01;
  CHECK(Regularizer::tabulated(z, v).parity() == Parity::general);

  const auto path = std::filesystem::temp_directory_path() / "regdist_kernel_test.csv";
  {
    std::ofstream out(path);
    out.precision(17);
    out << "# two-column table\nz,rho\n\n";
    for (std::size_t i = 0; i < z.size(); ++i) out << z[i] << "," << 2.0 * std::exp(-z[i] * z[i]) << "\n";
  }
  const Regularizer loaded = normalize(Regularizer::load_csv(path));
  CHECK(loaded(0.0) == doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-10));
  std::filesystem::remove(path);

  CHECK_THROWS_AS(Regularizer::tabulated({0, 1, 1, 2}, {0, 1, 1, 0}), DomainError);
  CHECK_THROWS_AS(Regularizer::load_csv("/nonexistent/table.csv"), DomainError);
}

TEST_CASE("moment caching returns identical values") {
  const Regularizer rho = Regularizer::asymmetric_bump(0.4);
  const double first = moment(rho, 2, 3).value;
  CHECK(moment(rho, 2, 3).value == first);
  CHECK_THROWS_AS(moment(rho, 0, 1), DomainError);
}
