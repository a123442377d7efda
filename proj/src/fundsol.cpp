#include "coag/fundsol.hpp"

#include "coag/cutoff.hpp"

#include <cmath>
#include <stdexcept>

namespace coag {

PowerFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3)
    throw std::invalid_argument("fit_loglog: need at least three points");
  PowerFit fit;
  fit.points = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const int n = fit.points;
  const double denom = n * sxx - sx * sx;
  fit.exponent = (n * sxy - sx * sy) / denom;
  const double icept = (sy - fit.exponent * sx) / n;
  double ss = 0.0, sxc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = std::log(std::abs(y[i])) - fit.exponent * std::log(x[i]) - icept;
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  sxc = sxx - sx * sx / n;
  fit.stderr_exponent = n > 2 ? std::sqrt(ss / (n - 2) / sxc) : 0.0;
  return fit;
}

namespace {

FieldSeries run_delta(double x0, double width, double T, const FundSolConfig& cfg) {
  SolveConfig sc;
  sc.params = cfg.params;
  sc.params.theta = 0.0;
  sc.params.eps = 0.0;
  sc.params.T = T;
  sc.grid = cfg.grid;
  sc.profile = cfg.profile;
  sc.dt = cfg.dt;

  Field init(cfg.grid);
  for (int i = 0; i < cfg.grid->size(); ++i) {
    const double u = (cfg.grid->node(i) - x0) / width;
    init.values[i] = std::exp(-0.5 * u * u);
  }
  const double mass = cfg.grid->integrate(init.values);
  init.values /= mass;
  return evolve_from(sc, init, nullptr);
}

}  // namespace

FundSolResult compute_fundamental(double x0, double width, double T, const FundSolConfig& cfg,
                                  bool attach_width_refinement) {
  if (!(width <= x0 / 10.0))
    throw std::invalid_argument("compute_fundamental: width must be well below x0");
  FundSolResult r;
  r.x0 = x0;
  r.width = width;
  const double spacing = x0 * M_LN2 / cfg.grid->nodes_per_block();
  r.resolution_ratio = width / spacing;
  r.under_resolved = r.resolution_ratio < 2.5;
  r.g = run_delta(x0, width, T, cfg);

  if (attach_width_refinement) {
    FieldSeries fine = run_delta(x0, 0.5 * width, T, cfg);
    const Vector& a = r.g.values.back();
    const Vector& b = fine.values.back();
    double dev = 0.0, peak = 0.0;
    for (int i = 0; i < cfg.grid->size(); ++i) {
      const double x = cfg.grid->node(i);
      if (x < 0.1 * x0 || x > 10.0 * x0) continue;
      dev = std::max(dev, std::abs(a[i] - b[i]));
      peak = std::max(peak, std::abs(b[i]));
    }
    r.width_refine_err = peak > 0.0 ? dev / peak : 0.0;
  }
  return r;
}

SelfSimilarReport check_selfsimilar(const FundSolResult& r1, const FundSolResult& r2, double t2,
                                    double lambda) {
  SelfSimilarReport rep;
  rep.t2 = t2;
  const double s = r2.x0 / r1.x0;
  const double alpha = 0.5 * (lambda - 1.0);
  const double t1 = t2 * std::pow(s, alpha);
  if (t1 > r1.g.times.back() * (1.0 + 1e-9))
    throw std::invalid_argument("check_selfsimilar: r1 does not cover the matched time");

  const Field g2(r2.g.grid, r2.g.eval(t2));
  const Field g1(r1.g.grid, r1.g.eval(t1));
  double dev = 0.0, peak = 0.0;
  for (int i = 0; i < r2.g.grid->size(); ++i) {
    const double x = r2.g.grid->node(i);
    if (x < 0.1 || x > 10.0) continue;
    const double predict = (1.0 / s) * g1(x / s);
    dev = std::max(dev, std::abs(g2.values[i] - predict));
    peak = std::max(peak, std::abs(predict));
  }
  rep.deviation = peak > 0.0 ? dev / peak : 0.0;
  return rep;
}

double interior_profile(double xi, double delta) {
  return 1.0 / (1.0 + std::pow(std::abs(xi), 1.5 - delta));
}

namespace {

PowerFit window_fit(const Field& g, double lo, double hi, bool in_sigma = false,
                    double sigma_factor = 1.0) {
  std::vector<double> xs, ys;
  for (int i = 0; i < g.grid->size(); ++i) {
    const double x = g.grid->node(i);
    const double coord = in_sigma ? sigma_factor * x : x;
    if (coord < lo || coord > hi) continue;
    if (g.values[i] == 0.0) continue;
    xs.push_back(coord);
    ys.push_back(g.values[i]);
  }
  return fit_loglog(xs, ys);
}

}  // namespace

TailReport check_tail_bounds(const FundSolResult& r, double t, double delta, double lambda) {
  TailReport rep;
  rep.t = t;
  const Field g(r.g.grid, r.g.eval(t));

  rep.small_x = window_fit(g, 0.01, 0.1);
  rep.large_x = window_fit(g, 4.0, 64.0);

  for (int i = 0; i < g.grid->size(); ++i) {
    const double x = g.grid->node(i);
    if (x < 0.5 || x > 1.5) continue;
    const double phi = interior_profile((x - r.x0) / (t * t), delta);
    rep.interior_constant = std::max(
        rep.interior_constant, t * t * std::pow(x, 1.5) * std::abs(g.values[i]) / phi);
  }

  const double tlast = r.g.times.back();
  if (tlast >= 1.0) {
    // scaled-variable fits at the last recorded time
    const Field gl(r.g.grid, r.g.values.back());
    const double fac = std::pow(tlast, 2.0 / (lambda - 1.0));
    rep.sigma_small = window_fit(gl, 0.1, 1.0, true, fac);
    rep.sigma_large = window_fit(gl, 1.0, 10.0, true, fac);
  }
  return rep;
}

DuhamelExponentReport duhamel_exponent_test(double delta, const FundSolConfig& cfg) {
  DuhamelExponentReport rep;
  rep.delta = delta;
  const double lambda = cfg.params.lambda;
  rep.beta = std::min(1.0, 2.0 * delta / (lambda - 1.0));

  SolveConfig sc;
  sc.params = cfg.params;
  sc.params.theta = 0.0;
  sc.params.eps = 0.0;
  sc.params.delta = delta;
  sc.params.T = 1.0;
  sc.grid = cfg.grid;
  sc.profile = cfg.profile;
  sc.dt = cfg.dt;

  // For beta < 1 the binding growth comes from the outer dyadic blocks and
  // the reference two-power envelope exhibits it. For beta = 1 the mechanism
  // is accumulation in the small-x region, where the damping vanishes, so
  // the source concentrates there; otherwise the O(1) relaxation time of the
  // x ~ 1 blocks caps the measured growth below the bound's exponent.
  const bool inner_mechanism = rep.beta >= 1.0;
  const SmoothCutoff inner_cut(-2.0, -1.0, std::ldexp(1.0, -8), std::ldexp(1.0, -6));
  Field nu = Field::sample(cfg.grid, [&](double x) {
    const double envelope = std::min(std::pow(x, -1.5), std::pow(x, -(2.0 + delta)));
    return inner_mechanism ? envelope * inner_cut(x) : envelope;
  });
  FieldSeries mu(cfg.grid);
  mu.push(0.0, nu.values);
  mu.push(1.0, nu.values);

  FieldSeries h = evolve(sc, mu);

  const double p = 0.5 * (3.0 + lambda);
  for (int j = 4; j >= 0; --j) {
    const double T = std::ldexp(1.0, -j);
    double sup = 0.0;
    for (int k = 0; k < h.steps(); ++k) {
      if (h.times[k] > T * (1.0 + 1e-12)) break;
      sup = std::max(sup, norm_triple_qp(h.at(k), 1.5, p));
    }
    rep.horizons.push_back(T);
    rep.sup_norms.push_back(sup);
  }
  rep.fit = fit_loglog(rep.horizons, rep.sup_norms);
  return rep;
}

}  // namespace coag
