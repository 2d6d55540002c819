#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hwec/numerics.hpp"

using namespace hwec::numerics;

TEST_CASE("ellipke matches tabulated values") {
  const auto z = ellipke(0.0);
  CHECK(z.K == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  CHECK(z.E == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  const auto h = ellipke(0.5);
  CHECK(h.K == doctest::Approx(1.8540746773013719).epsilon(1e-14));
  CHECK(h.E == doctest::Approx(1.3506438810476755).epsilon(1e-14));
  const auto n = ellipke(0.99);
  CHECK(n.K == doctest::Approx(3.6956373629898747).epsilon(1e-13));
  CHECK(n.E == doctest::Approx(1.0159935450252238).epsilon(1e-13));
}

TEST_CASE("vector potential kernel agrees with the direct form away from zero") {
  for (double m : {0.2, 0.5, 0.9}) {
    const auto ke = ellipke(m);
    CHECK(ellip_vector_potential_kernel(m) ==
          doctest::Approx((1 - m / 2) * ke.K - ke.E).epsilon(1e-13));
  }
  // Leading term pi m^2 / 32 for small m.
  const double m = 1e-6;
  CHECK(ellip_vector_potential_kernel(m) == doctest::Approx(std::numbers::pi * m * m / 32).epsilon(1e-5));
}

TEST_CASE("Gauss-Legendre of order n integrates degree 2n-1 exactly") {
  const auto& g = gauss_legendre(5);
  double s = 0.0, w = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    s += g.weights[i] * std::pow(g.nodes[i], 8);
    w += g.weights[i];
  }
  CHECK(s == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
  CHECK(w == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("adaptive and trapezoid quadrature") {
  CHECK(integrate_adaptive([](double x) { return std::sin(x); }, 0, std::numbers::pi) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate_adaptive([](double x) { return std::exp(-x * x); }, -6, 6) ==
        doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-10));
  CHECK(integrate_trapezoid([](double x) { return 3 * x + 1; }, 0, 2, 7) ==
        doctest::Approx(8.0).epsilon(1e-14));
  CHECK(integrate_adaptive([](double) { return 1.0; }, 3, 3) == 0.0);
}

TEST_CASE("monotone cubic keeps nodes and monotonicity") {
  MonotoneCubic c({0, 1, 2, 3, 4}, {0, 0.1, 0.2, 5, 5.1});
  CHECK(c(2.0) == doctest::Approx(0.2));
  double prev = c(0.0);
  for (int i = 1; i <= 400; ++i) {
    const double v = c(i * 0.01);
    CHECK(v >= prev - 1e-15);
    prev = v;
  }
}

TEST_CASE("natural spline reproduces a straight line") {
  CubicSpline s({0, 0.5, 2, 3}, {1, 2, 5, 7});
  CHECK(s(1.25) == doctest::Approx(3.5).epsilon(1e-14));
}
