#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace coag {

/// Gauss-Legendre rule on [-1,1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes of the degree-n Legendre polynomial by Newton iteration.
inline GaussRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

/// Single Gauss panel of f over [a,b].
template <typename F>
auto gauss_panel(const F& f, double a, double b, const GaussRule& rule) {
  using R = decltype(f(a));
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  R acc = R{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * acc;
}

/// Composite Gauss with uniform panels.
template <typename F>
auto composite_gauss(const F& f, double a, double b, int panels, const GaussRule& rule) {
  using R = decltype(f(a));
  R acc = R{};
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) acc += gauss_panel(f, a + p * h, a + (p + 1) * h, rule);
  return acc;
}

/// Composite Gauss on geometrically graded panels accumulating toward a.
/// Handles endpoint singularities of type (x-a)^alpha, alpha > -1.
template <typename F>
auto graded_gauss_toward_a(const F& f, double a, double b, int panels, const GaussRule& rule,
                           double ratio = 0.5) {
  using R = decltype(f(a));
  R acc = R{};
  double hi = b;
  double width = (b - a) * (1.0 - ratio);
  for (int p = 0; p < panels - 1; ++p) {
    acc += gauss_panel(f, hi - width, hi, rule);
    hi -= width;
    width *= ratio;
  }
  acc += gauss_panel(f, a, hi, rule);
  return acc;
}

namespace detail {

template <typename F, typename R>
void adaptive_step(const F& f, double a, double b, R fa, R fm, R fb, R whole, double tol,
                   int depth, R& out) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const R flm = f(lm), frm = f(rm);
  const R left = (b - a) / 12.0 * (fa + 4.0 * flm + fm);
  const R right = (b - a) / 12.0 * (fm + 4.0 * frm + fb);
  const R delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    out += left + right + delta / 15.0;
    return;
  }
  adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, out);
  adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, out);
}

}  // namespace detail

/// Adaptive Simpson with absolute tolerance. Used for closed-form oracles.
template <typename F>
auto adaptive_quadrature(const F& f, double a, double b, double tol = 1e-12, int max_depth = 40) {
  using R = decltype(f(a));
  const double m = 0.5 * (a + b);
  const R fa = f(a), fm = f(m), fb = f(b);
  const R whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  R out = R{};
  detail::adaptive_step(f, a, b, fa, fm, fb, whole, tol, max_depth, out);
  return out;
}

/// Integral over (a, +inf), a > 0, of an algebraically decaying integrand.
/// Maps y = a/u onto u in (0,1] and grades panels toward u=0, which resolves
/// any tail f ~ y^-p with p > 1 to near machine precision.
template <typename F>
auto integrate_to_infinity(const F& f, double a, int panels = 60, int order = 12) {
  const GaussRule rule = gauss_legendre(order);
  auto g = [&](double u) { return f(a / u) * a / (u * u); };
  return graded_gauss_toward_a(g, 0.0, 1.0, panels, rule);
}

}  // namespace coag
