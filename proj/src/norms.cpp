#include "coag/norms.hpp"

#include <cmath>
#include <stdexcept>

#include "coag/cutoff.hpp"

namespace coag {

namespace {

/// Trapezoid of the piecewise-linear interpolant of (times, vals) over
/// [t0, t1], with partial end segments.
double window_integral(const std::vector<double>& times, const std::vector<double>& vals,
                       double t0, double t1) {
  if (t1 <= t0 || times.size() < 2) return 0.0;
  double acc = 0.0;
  for (std::size_t j = 0; j + 1 < times.size(); ++j) {
    const double a = std::max(times[j], t0);
    const double b = std::min(times[j + 1], t1);
    if (b <= a) continue;
    const double w = times[j + 1] - times[j];
    auto lerp = [&](double t) {
      const double s = (t - times[j]) / w;
      return (1.0 - s) * vals[j] + s * vals[j + 1];
    };
    acc += 0.5 * (lerp(a) + lerp(b)) * (b - a);
  }
  return acc;
}

double sup_on_interval(const Field& f, double a, double b) {
  double m = 0.0;
  for (int i = 0; i < f.grid->size(); ++i) {
    const double x = f.grid->node(i);
    if (x >= a && x <= b) m = std::max(m, std::abs(f.values[i]));
  }
  return m;
}

/// || D^sigma f ||^2_{L^2(R/2, 2R)} surrogate: plateau window on (R/2, 2R)
/// with support (R/4, 4R), uniform resample, |k|^{2 sigma} weight.
double dsigma_block_sq(const Field& f, double sigma, double R, int mesh_n = 1 << 10) {
  const SmoothCutoff win(R / 4.0, R / 2.0, 2.0 * R, 4.0 * R);
  UniformMesh m;
  m.x0 = R / 8.0;
  m.n = mesh_n;
  m.dx = (4.5 * R - m.x0) / mesh_n;
  Vector v(mesh_n);
  for (int j = 0; j < mesh_n; ++j) {
    const double x = m.point(j);
    v[j] = win(x) * f(x);
  }
  return dsigma_norm_sq(m, v, sigma);
}

}  // namespace

double norm_triple_qp(const Field& phi, double q, double p) {
  double inner = 0.0, outer = 0.0;
  for (int i = 0; i < phi.grid->size(); ++i) {
    const double x = phi.grid->node(i);
    const double a = std::abs(phi.values[i]);
    if (x <= 1.0)
      inner = std::max(inner, std::pow(x, q) * a);
    else
      outer = std::max(outer, std::pow(x, p) * a);
  }
  return inner + outer;
}

BlockNorms dyadic_norms(const FieldSeries& fs, double sigma, double t0, double R, double lambda,
                        double T) {
  if (fs.steps() < 2) throw std::invalid_argument("dyadic_norms: need a time series");
  BlockNorms out;
  out.R = R;
  out.t0 = t0;
  const double t1 = std::min(t0 + std::pow(R, -0.5 * (lambda - 1.0)), T);
  if (t1 <= t0 || t0 > fs.times.back())
    throw std::invalid_argument("dyadic_norms: empty time window");

  std::vector<double> sup2(fs.steps()), dsig2(fs.steps());
  for (int k = 0; k < fs.steps(); ++k) {
    const Field fk = fs.at(k);
    const double s = sup_on_interval(fk, 0.5 * R, 2.0 * R);
    sup2[k] = s * s;
    dsig2[k] = dsigma_block_sq(fk, sigma, R);
  }

  const double tpow = std::pow(R, 0.5 * (lambda - 1.0));
  out.N_inf = std::sqrt(tpow * window_integral(fs.times, sup2, t0, t1));
  out.N_2sigma =
      std::sqrt(std::pow(R, 0.5 * (lambda - 1.0) + 2.0 * sigma - 1.0) *
                window_integral(fs.times, dsig2, t0, t1));
  out.M_inf = std::sqrt(window_integral(fs.times, sup2, 0.0, T));
  out.M_2sigma =
      std::sqrt(std::pow(R, 2.0 * sigma - 1.0) * window_integral(fs.times, dsig2, 0.0, T));
  return out;
}

double frac_sobolev(const Field& f, double sigma, double a, double b, int mesh_n) {
  if (!(b > a)) throw std::invalid_argument("frac_sobolev: empty interval");
  const double w = b - a;
  const SmoothCutoff win(a - 0.5 * w, a, b, b + 0.5 * w);
  UniformMesh m;
  m.x0 = a - 0.75 * w;
  m.n = mesh_n;
  m.dx = 2.5 * w / mesh_n;
  Vector v(mesh_n);
  for (int j = 0; j < mesh_n; ++j) {
    const double x = m.point(j);
    v[j] = win(x) * f(x);
  }
  return std::sqrt(hsigma_norm_sq(m, v, sigma));
}

std::vector<double> dyadic_scales(const GradedGrid& grid, bool below_one) {
  std::vector<double> out;
  for (int n = grid.jmin() + 1; n <= grid.jmax() - 1; ++n) {
    const double R = std::ldexp(1.0, n);
    if (below_one && R < 1.0) out.push_back(R);
    if (!below_one && R >= 1.0) out.push_back(R);
  }
  return out;
}

namespace {

/// Shared sup structure of the X / Y norms: inner sup over R<1 of R^q M(R),
/// outer sup over R>=1 and the block time mesh of R^p N(R, t0).
template <typename MFn, typename NFn>
double xy_norm(const GradedGrid& grid, double q, double p, double lambda, double T, const MFn& m,
               const NFn& n) {
  double inner = 0.0;
  for (double R : dyadic_scales(grid, true)) inner = std::max(inner, std::pow(R, q) * m(R));
  double outer = 0.0;
  for (double R : dyadic_scales(grid, false)) {
    const double win = std::pow(R, -0.5 * (lambda - 1.0));
    for (double t0 = 0.0; t0 < T - 1e-12; t0 += win) {
      outer = std::max(outer, std::pow(R, p) * n(R, t0));
      if (win >= T) break;
    }
  }
  return inner + outer;
}

}  // namespace

double norm_X(const FieldSeries& fs, double q, double p, double lambda, double T) {
  return xy_norm(
      *fs.grid, q, p, lambda, T,
      [&](double R) { return dyadic_norms(fs, 0.5, 0.0, R, lambda, T).M_inf; },
      [&](double R, double t0) { return dyadic_norms(fs, 0.5, t0, R, lambda, T).N_inf; });
}

double norm_Y(const FieldSeries& fs, double sigma, double q, double p, double lambda, double T) {
  return xy_norm(
      *fs.grid, q, p, lambda, T,
      [&](double R) { return dyadic_norms(fs, sigma, 0.0, R, lambda, T).M_2sigma; },
      [&](double R, double t0) { return dyadic_norms(fs, sigma, t0, R, lambda, T).N_2sigma; });
}

double bracket_seminorm(const FieldSeries& fs, double sigma, double lambda, double T,
                        bool unbounded_weight) {
  const SmoothCutoff eta = make_eta();
  const int nx = 1 << 11;
  UniformMesh m;
  m.x0 = 0.0;
  m.n = nx;
  m.dx = 4.5 / nx;

  double sup = 0.0;
  for (double R : dyadic_scales(*fs.grid, false)) {
    const double win = std::pow(R, -0.5 * (lambda - 1.0));
    for (double t0 = 0.0; t0 < T - 1e-12; t0 += win) {
      const double t1 = std::min(t0 + win, T);
      // spectral weight integral per snapshot, then trapezoid in t
      std::vector<double> wk(fs.steps(), 0.0);
      for (int k = 0; k < fs.steps(); ++k) {
        if (fs.times[k] < t0 - win || fs.times[k] > t1 + win) continue;
        const Field f = fs.at(k);
        Vector v(nx);
        for (int j = 0; j < nx; ++j) {
          const double X = m.point(j);
          v[j] = eta(X) * f(R * X);
        }
        const CVector F = dft_forward(v);
        double acc = 0.0;
        for (int j = 0; j < nx; ++j) {
          const double kf = std::abs(m.freq(j));
          const double w =
              1.0 + std::pow(kf, 2.0 * sigma) * (unbounded_weight ? kf : std::min(kf, R));
          acc += w * std::norm(F[j]);
        }
        wk[k] = acc * m.dx / nx;
      }
      const double val = std::pow(R, 0.5 * (3.0 + lambda)) *
                         std::sqrt(window_integral(fs.times, wk, t0, t1));
      sup = std::max(sup, val);
      if (win >= T) break;
    }
  }
  return sup;
}

double norm_E(const FieldSeries& fs, double sigma, double lambda, double T) {
  const double p = 0.5 * (3.0 + lambda);
  double sup = 0.0;
  for (int k = 0; k < fs.steps(); ++k)
    sup = std::max(sup, norm_triple_qp(fs.at(k), 1.5, p));
  return sup + norm_Y(fs, sigma, 1.5, p, lambda, T);
}

NormReport build_norm_report(const FieldSeries& fs, double sigma, double q, double p,
                             double lambda, double T) {
  NormReport rep;
  rep.sigma = sigma;
  rep.q = q;
  rep.p = p;
  rep.lambda = lambda;
  rep.T = T;

  for (double R : dyadic_scales(*fs.grid, true))
    rep.blocks.push_back(dyadic_norms(fs, sigma, 0.0, R, lambda, T));
  for (double R : dyadic_scales(*fs.grid, false)) {
    const double win = std::pow(R, -0.5 * (lambda - 1.0));
    for (double t0 = 0.0; t0 < T - 1e-12; t0 += win) {
      rep.blocks.push_back(dyadic_norms(fs, sigma, t0, R, lambda, T));
      if (win >= T) break;
    }
  }

  // aggregates straight from the recorded blocks
  for (const BlockNorms& b : rep.blocks) {
    if (b.R < 1.0) {
      rep.x_norm = std::max(rep.x_norm, std::pow(b.R, q) * b.M_inf);
      rep.y_norm = std::max(rep.y_norm, std::pow(b.R, q) * b.M_2sigma);
    }
  }
  double xn = 0.0, yn = 0.0;
  for (const BlockNorms& b : rep.blocks) {
    if (b.R >= 1.0) {
      xn = std::max(xn, std::pow(b.R, p) * b.N_inf);
      yn = std::max(yn, std::pow(b.R, p) * b.N_2sigma);
    }
  }
  rep.x_norm += xn;
  rep.y_norm += yn;

  for (int k = 0; k < fs.steps(); ++k)
    rep.sup_triple_qp = std::max(rep.sup_triple_qp, norm_triple_qp(fs.at(k), q, p));
  rep.triple_sigma = norm_E(fs, sigma, lambda, T);
  rep.bracket = bracket_seminorm(fs, sigma, lambda, T);
  return rep;
}

}  // namespace coag
