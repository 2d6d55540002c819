#include "hwec/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "hwec/errors.hpp"

namespace hwec::numerics {

EllipticKE ellipke(double m) {
  if (!(m >= 0.0) || m >= 1.0) {
    throw DomainError("ellipke: parameter m must lie in [0, 1)");
  }
  double a = 1.0;
  double b = std::sqrt(1.0 - m);
  double c2 = m;  // c_0^2
  double sum = 0.5 * c2;
  double pow2 = 0.5;
  for (int it = 0; it < 40; ++it) {
    const double an = 0.5 * (a + b);
    const double cn = 0.5 * (a - b);
    b = std::sqrt(a * b);
    a = an;
    pow2 *= 2.0;
    sum += pow2 * cn * cn;
    if (std::abs(cn) <= 1e-16 * a) break;
  }
  const double K = std::numbers::pi / (2.0 * a);
  return {K, K * (1.0 - sum)};
}

namespace {

// Taylor coefficients of (1 - m/2) K(m) - E(m) in units of pi/2.
std::array<double, 16> vector_potential_series() {
  std::array<double, 16> d{};
  double c_prev = 1.0;  // c_0
  for (std::size_t n = 1; n < d.size(); ++n) {
    const double ratio = (2.0 * n - 1.0) / (2.0 * n);
    const double c_n = c_prev * ratio * ratio;
    d[n] = c_n * (2.0 * n) / (2.0 * n - 1.0) - 0.5 * c_prev;
    c_prev = c_n;
  }
  return d;
}

}  // namespace

double ellip_vector_potential_kernel(double m) {
  if (m < 0.02) {
    static const auto d = vector_potential_series();
    double acc = 0.0;
    for (std::size_t n = d.size() - 1; n >= 2; --n) acc = acc * m + d[n];
    return 0.5 * std::numbers::pi * acc * m * m;
  }
  const auto ke = ellipke(m);
  return (1.0 - 0.5 * m) * ke.K - ke.E;
}

namespace {

GaussRule make_rule(std::size_t n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = 2.0;
  }
  return rule;
}

double panel(const std::function<double(double)>& f, double a, double b, const GaussRule& rule) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return acc * half;
}

}  // namespace

const GaussRule& gauss_legendre(std::size_t n) {
  if (n == 0) throw DomainError("gauss_legendre: order must be positive");
  static std::mutex mutex;
  static std::map<std::size_t, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_rule(n)).first;
  return it->second;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_tol, std::size_t order, int max_depth) {
  if (a == b) return 0.0;
  const GaussRule& rule = gauss_legendre(order);
  struct Panel {
    double a, b, estimate;
    int depth;
  };
  // Depth-first with an explicit stack keeps the summation order fixed.
  std::vector<Panel> stack{{a, b, panel(f, a, b, rule), 0}};
  const double scale_guess = std::abs(stack.front().estimate);
  double total = 0.0;
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (p.a + p.b);
    const double left = panel(f, p.a, mid, rule);
    const double right = panel(f, mid, p.b, rule);
    const double refined = left + right;
    const double tol = std::max(abs_tol, rel_tol * scale_guess);
    if (std::abs(refined - p.estimate) <= tol || p.depth >= max_depth) {
      total += refined;
    } else {
      stack.push_back({mid, p.b, right, p.depth + 1});
      stack.push_back({p.a, mid, left, p.depth + 1});
    }
  }
  return total;
}

double integrate_trapezoid(const std::function<double(double)>& f, double a, double b,
                           std::size_t n) {
  if (n == 0) throw DomainError("integrate_trapezoid: need at least one interval");
  const double h = (b - a) / static_cast<double>(n);
  double acc = 0.5 * (f(a) + f(b));
  for (std::size_t i = 1; i < n; ++i) acc += f(a + h * static_cast<double>(i));
  return acc * h;
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw DomainError("CubicSpline: need >= 2 matching nodes");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) throw DomainError("CubicSpline: abscissae must increase");
  }
  m_.assign(n, 0.0);
  if (n == 2) return;
  // Tridiagonal solve for natural end conditions.
  std::vector<double> c(n, 0.0), d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    const double diag = 2.0 * (h0 + h1);
    const double rhs = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    const double denom = diag - h0 * c[i - 1];
    c[i] = h1 / denom;
    d[i] = (rhs - h0 * d[i - 1]) / denom;
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = d[i] - c[i] * m_[i + 1];
  }
}

double CubicSpline::operator()(double x) const {
  if (x < x_.front() || x > x_.back()) return outside_value;
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = static_cast<std::size_t>(std::distance(x_.begin(), it));
  i = std::clamp<std::size_t>(i, 1, x_.size() - 1) - 1;
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - x) / h;
  const double b = (x - x_[i]) / h;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw DomainError("MonotoneCubic: need >= 2 matching nodes");
  std::vector<double> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = x_[i + 1] - x_[i];
    if (!(h > 0.0)) throw DomainError("MonotoneCubic: abscissae must increase");
    delta[i] = (y_[i + 1] - y_[i]) / h;
  }
  d_.assign(n, 0.0);
  d_.front() = delta.front();
  d_.back() = delta.back();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d_[i] = 0.0;
    } else {
      // Weighted harmonic mean (Fritsch-Butland form).
      const double h0 = x_[i] - x_[i - 1];
      const double h1 = x_[i + 1] - x_[i];
      const double w1 = 2.0 * h1 + h0;
      const double w2 = h1 + 2.0 * h0;
      d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
}

double MonotoneCubic::operator()(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = static_cast<std::size_t>(std::distance(x_.begin(), it));
  i = std::clamp<std::size_t>(i, 1, x_.size() - 1) - 1;
  const double h = x_[i + 1] - x_[i];
  const double s = (x - x_[i]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y_[i] + (s3 - 2 * s2 + s) * h * d_[i] +
         (-2 * s3 + 3 * s2) * y_[i + 1] + (s3 - s2) * h * d_[i + 1];
}

}  // namespace hwec::numerics
