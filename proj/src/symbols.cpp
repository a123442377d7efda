#include "coag/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>
#include <atomic>
#include <thread>
#include <vector>

#include "coag/quadrature.hpp"

namespace coag {

namespace {

const GaussRule& gl12() {
  static const GaussRule r = gauss_legendre(12);
  return r;
}

/// Composite Gauss resolving a phase of rate |z| to <= 4 rad per panel.
template <typename F>
Complex osc_panels(const F& f, double a, double b, double z) {
  const int panels = std::max(4, static_cast<int>(std::ceil((b - a) * std::abs(z) / 4.0)));
  return composite_gauss(f, a, b, panels, gl12());
}

/// int_0^smax g(s) e^{-z s} ds for g with at worst an integrable endpoint
/// power at s=0 and algebraic decay. Panels keep both the exponential phase
/// (z ds <= 5) and the algebraic variation (ds <= s) resolved; the first
/// panel is graded toward 0. smax <= 0 means integrate to exp cutoff.
template <typename F>
Complex laplace_panels(const F& g, double z, double smax = -1.0) {
  const double zz = std::max(z, 1e-12);
  double limit = 60.0 / zz;
  if (smax > 0.0) limit = std::min(limit, smax);

  std::vector<double> cuts{0.0};
  double s = std::min({0.25, 5.0 / zz, limit});
  cuts.push_back(s);
  while (s < limit * (1.0 - 1e-12)) {
    double next = std::min(s < 1.0 ? s + 0.25 : 2.0 * s, s + 5.0 / zz);
    next = std::min(next, limit);
    cuts.push_back(next);
    s = next;
  }

  auto f = [&](double t) { return g(t) * std::exp(-z * t); };
  Complex acc = graded_gauss_toward_a(f, cuts[0], cuts[1], 18, gl12());
  for (std::size_t k = 1; k + 1 < cuts.size(); ++k)
    acc += gauss_panel(f, cuts[k], cuts[k + 1], gl12());
  return acc;
}

Complex background_kernel(const Profile& p, Complex y) {
  return p.f0_complex(y) * std::pow(y, Complex(0.5 * p.params().lambda));
}

}  // namespace

Complex half_derivative_symbol(double z) {
  if (z == 0.0) return {0.0, 0.0};
  const double mag = std::sqrt(2.0 * M_PI) * std::sqrt(std::abs(z));
  return -mag * Complex(1.0, z > 0 ? 1.0 : -1.0);
}

Complex half_derivative_symbol_quadrature(double z) {
  if (z == 0.0) return {0.0, 0.0};
  if (z < 0.0) return std::conj(half_derivative_symbol_quadrature(-z));

  // (0,1): y = u^2 removes the y^{-1/2} strength of the difference integrand
  auto inner = [z](double u) {
    const Complex e = std::exp(Complex(0.0, -z * u * u)) - 1.0;
    return 2.0 * e / (u * u);
  };
  const int panels = std::max(6, static_cast<int>(std::ceil(z / 3.0)));
  Complex acc = composite_gauss(inner, 0.0, 1.0, panels, gl12());

  // -1 part of (1,inf)
  acc += -2.0;

  // oscillatory tail on the contour y = 1 - i s
  auto tail = [](double s) { return std::pow(Complex(1.0, -s), Complex(-1.5)); };
  acc += Complex(0.0, -1.0) * std::exp(Complex(0.0, -z)) * laplace_panels(tail, z);
  return acc;
}

namespace {

struct WtildeCache {
  double qint1;  // int_0^1 q
  double qtail;  // int_1^inf q
};

WtildeCache wtilde_cache(const Profile& p) {
  auto q = [&p](double y) { return p.f0(y) * std::pow(y, 0.5 * p.params().lambda); };
  WtildeCache c;
  c.qint1 = graded_gauss_toward_a(q, 0.0, 1.0, 40, gl12());
  c.qtail = integrate_to_infinity(q, 1.0);
  return c;
}

Complex wtilde_rotated(double z, const Profile& p, const WtildeCache& cache) {
  // z > 0 assumed
  auto qc = [&p](Complex y) { return background_kernel(p, y); };
  auto qr = [&p](double y) { return p.f0(y) * std::pow(y, 0.5 * p.params().lambda); };

  Complex head;  // int_0^1 q (e^{-izy} - 1) dy
  if (z <= 40.0) {
    auto f = [&](double y) { return qr(y) * (std::exp(Complex(0.0, -z * y)) - 1.0); };
    const double c = std::min(1.0, 4.0 / z);
    head = graded_gauss_toward_a(f, 0.0, c, 30, gl12());
    if (c < 1.0) head += osc_panels(f, c, 1.0, z);
  } else {
    const double b = 0.5;
    const Complex leg1 =
        Complex(0.0, -1.0) * laplace_panels([&](double s) { return qc(Complex(0.0, -s)); }, z, b);
    Complex leg2 = 0.0;
    if (z * b < 30.0) {
      auto f2 = [&](double u) { return qc(Complex(u, -b)) * std::exp(Complex(0.0, -z * u)); };
      leg2 = std::exp(-z * b) * osc_panels(f2, 0.0, 1.0, z);
    }
    const Complex leg3 = Complex(0.0, 1.0) * std::exp(Complex(0.0, -z)) *
                         laplace_panels([&](double s) { return qc(Complex(1.0, -s)); }, z, b);
    head = leg1 + leg2 + leg3 - cache.qint1;
  }

  const Complex tail = Complex(0.0, -1.0) * std::exp(Complex(0.0, -z)) *
                       laplace_panels([&](double s) { return qc(Complex(1.0, -s)); }, z);
  return head + tail - cache.qtail;
}

}  // namespace

Complex wtilde(double z, const Profile& p) {
  if (z == 0.0) return {0.0, 0.0};
  if (z < 0.0) return std::conj(wtilde(-z, p));
  if (!p.has_complex()) return wtilde_direct(z, p);
  const WtildeCache cache = wtilde_cache(p);
  return wtilde_rotated(z, p, cache);
}

Complex wtilde_direct(double z, const Profile& p) {
  if (z == 0.0) return {0.0, 0.0};
  if (z < 0.0) return std::conj(wtilde_direct(-z, p));
  auto q = [&p](double y) { return p.f0(y) * std::pow(y, 0.5 * p.params().lambda); };

  auto f = [&](double y) { return q(y) * (std::exp(Complex(0.0, -z * y)) - 1.0); };
  const double c = std::min(1.0, 4.0 / z);
  Complex acc = graded_gauss_toward_a(f, 0.0, c, 30, gl12());
  if (c < 1.0) acc += osc_panels(f, c, 1.0, z);

  const WtildeCache cache = wtilde_cache(p);
  const double Y = std::max(64.0, std::pow(1e8 / z, 2.0 / 3.0));
  auto osc = [&](double y) { return q(y) * std::exp(Complex(0.0, -z * y)); };
  double lo = 1.0;
  while (lo < Y) {
    const double hi = std::min(2.0 * lo, Y);
    acc += osc_panels(osc, lo, hi, z);
    lo = hi;
  }
  // one integration by parts on the truncated tail
  acc += q(Y) * std::exp(Complex(0.0, -z * Y)) / Complex(0.0, z);
  return acc - cache.qtail;
}

Complex symbol_W(double xi, double eps, double R, const Profile& p) {
  if (xi == 0.0) return {0.0, 0.0};
  Complex w = eps * half_derivative_symbol(xi);
  if (eps < 1.0) w += (1.0 - eps) * std::sqrt(R) * wtilde(xi / R, p);
  return w;
}

namespace {

Complex psi_difference_kernel(double zeta) {
  // int_0^inf (e^{-i zeta v} - 1) dv / (v^{3/2} (v^{3/2}+1))
  if (zeta == 0.0) return {0.0, 0.0};
  if (zeta < 0.0) return std::conj(psi_difference_kernel(-zeta));

  auto inner = [zeta](double u) {
    const Complex e = std::exp(Complex(0.0, -zeta * u * u)) - 1.0;
    return 2.0 * e / (u * u * (u * u * u + 1.0));
  };
  const int panels = std::max(6, static_cast<int>(std::ceil(zeta / 3.0)));
  Complex acc = composite_gauss(inner, 0.0, 1.0, panels, gl12());

  auto kr = [](double v) { return 1.0 / (std::pow(v, 1.5) * (std::pow(v, 1.5) + 1.0)); };
  acc -= integrate_to_infinity(kr, 1.0);

  auto kc = [](double s) {
    const Complex v(1.0, -s);
    const Complex v32 = std::pow(v, Complex(1.5));
    return 1.0 / (v32 * (v32 + 1.0));
  };
  acc += Complex(0.0, -1.0) * std::exp(Complex(0.0, -zeta)) * laplace_panels(kc, zeta);
  return acc;
}

}  // namespace

Complex symbol_P_eps(double x, double k, double eps) {
  if (!(x > 0.0)) throw std::invalid_argument("symbol_P_eps: x > 0 required");
  if (k == 0.0) return {0.0, 0.0};
  if (eps <= 0.0) return half_derivative_symbol_quadrature(k);
  const double scale = eps * x;
  return half_derivative_symbol(k) - psi_difference_kernel(k * scale) / std::sqrt(scale);
}

SymbolGrid build_symbol_grid(const Vector& xi, double eps, double R, const Profile& p,
                             int workers) {
  if (R < 1.0) throw std::invalid_argument("build_symbol_grid: R >= 1 required");
  SymbolGrid g;
  g.xi = xi;
  g.W = Eigen::VectorXcd::Zero(xi.size());
  g.eps = eps;
  g.R = R;
  g.method = (eps >= 1.0) ? "closed-form" : "quadrature";

  // compute on |xi| once, mirror by conjugation
  std::map<double, Complex> cache;
  std::vector<double> mags;
  for (int i = 0; i < xi.size(); ++i) mags.push_back(std::abs(xi[i]));
  std::sort(mags.begin(), mags.end());
  mags.erase(std::unique(mags.begin(), mags.end()), mags.end());

  std::vector<Complex> vals(mags.size());
  const int nw = std::max(1, workers);
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  auto work = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= static_cast<int>(mags.size())) break;
      vals[i] = symbol_W(mags[i], eps, R, p);
    }
  };
  if (nw == 1) {
    work();
  } else {
    for (int t = 0; t < nw; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < mags.size(); ++i) cache[mags[i]] = vals[i];

  for (int i = 0; i < xi.size(); ++i) {
    const Complex w = cache[std::abs(xi[i])];
    g.W[i] = xi[i] >= 0.0 ? w : std::conj(w);
  }
  return g;
}

int SymbolGrid::invariant_violations() const {
  int bad = 0;
  std::map<double, Complex> table;
  for (int i = 0; i < size(); ++i) table[xi[i]] = W[i];
  for (int i = 0; i < size(); ++i) {
    if (xi[i] == 0.0) {
      if (std::abs(W[i]) > 1e-14) ++bad;
      continue;
    }
    if (!(W[i].real() < 0.0)) ++bad;
    auto it = table.find(-xi[i]);
    if (it != table.end() && std::abs(it->second - std::conj(W[i])) > 1e-12 * (1.0 + std::abs(W[i])))
      ++bad;
  }
  return bad;
}

void write_symbol_csv(const SymbolGrid& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "xi,re_w,im_w\n";
  char buf[96];
  for (int i = 0; i < g.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.12e,%.12e,%.12e\n", g.xi[i], g.W[i].real(), g.W[i].imag());
    out << buf;
  }
}

SymbolCheckReport check_symbol_inequalities(const SymbolGrid& g, double frozen_constant) {
  SymbolCheckReport rep;

  std::vector<int> big;
  for (int i = 0; i < g.size(); ++i)
    if (std::abs(g.xi[i]) >= 1.0) big.push_back(i);
  const int stride = std::max<std::size_t>(1, big.size() / 48);

  for (double alpha : {0.0, 0.5, 1.0}) {
    const double beta = 1.0 - alpha;
    for (std::size_t a = 0; a < big.size(); a += stride) {
      for (std::size_t b = 0; b < big.size(); b += stride) {
        const double xi = g.xi[big[a]], z = g.xi[big[b]];
        if (xi == z) continue;
        const Complex wxi = g.W[big[a]], wz = g.W[big[b]];
        const double lhs = std::abs(wxi - wz);
        const double rhs = std::abs(xi - z) / (std::pow(std::abs(z), alpha) * std::pow(std::abs(xi), beta)) *
                           std::pow(1.0 + std::abs(wz), alpha) * std::pow(1.0 + std::abs(wxi), beta);
        const double ratio = lhs / rhs;
        rep.max_two_point_ratio = std::max(rep.max_two_point_ratio, ratio);
        if (ratio > frozen_constant) ++rep.two_point_violations;
      }
    }
  }

  const double beta = rep.decay_beta;
  for (int j = -8; j <= 2; ++j) {
    const double t = std::ldexp(1.0, j);
    for (int i = 0; i < g.size(); ++i) {
      const double rw = std::abs(g.W[i].real());
      const double val =
          std::exp(-2.0 * t * rw) * std::pow(std::abs(g.W[i]), 2.0 * beta) * std::pow(t, 2.0 * beta);
      rep.fitted_decay_constant = std::max(rep.fitted_decay_constant, val);
    }
  }
  return rep;
}

}  // namespace coag
