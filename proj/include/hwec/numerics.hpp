#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace hwec::numerics {

/// Complete elliptic integrals of the first and second kind, parameter m = k^2.
struct EllipticKE {
  double K;
  double E;
};

/// AGM evaluation of K(m) and E(m) for 0 <= m < 1.
EllipticKE ellipke(double m);

/// (1 - m/2) K(m) - E(m), accurate for small m where direct evaluation cancels.
double ellip_vector_potential_kernel(double m);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule of order n (Newton iteration on P_n).
const GaussRule& gauss_legendre(std::size_t n);

/// Adaptive Gauss-Legendre quadrature by panel bisection.
///
/// A panel is accepted when the order-n estimate and the sum of its two
/// half-panel estimates agree to rel_tol * |running total| (or abs_tol).
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-8, double abs_tol = 0.0, std::size_t order = 10,
                          int max_depth = 30);

/// Composite trapezoid with n uniform intervals.
double integrate_trapezoid(const std::function<double(double)>& f, double a, double b,
                           std::size_t n);

/// Natural cubic spline on strictly increasing abscissae.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);

  /// Value; outside the node range returns the supplied fill value.
  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] double front() const { return x_.front(); }
  [[nodiscard]] double back() const { return x_.back(); }
  [[nodiscard]] bool empty() const { return x_.empty(); }
  [[nodiscard]] std::span<const double> nodes() const { return x_; }
  [[nodiscard]] std::span<const double> values() const { return y_; }
  double outside_value = 0.0;

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives
};

/// Monotone piecewise-cubic Hermite interpolant (Fritsch-Carlson slopes).
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  /// Caller guarantees x lies inside [front(), back()].
  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] double front() const { return x_.front(); }
  [[nodiscard]] double back() const { return x_.back(); }
  [[nodiscard]] std::span<const double> nodes() const { return x_; }
  [[nodiscard]] std::span<const double> values() const { return y_; }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> d_;
};

}  // namespace hwec::numerics
