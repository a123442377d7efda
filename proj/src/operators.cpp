#include "coag/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "coag/quadrature.hpp"

namespace coag {

double KernelSpec::operator()(double x, double y) const {
  switch (kind) {
    case KernelKind::PureSingular:
      return std::pow(y, -1.5);
    case KernelKind::Background:
      return std::pow(y, 0.5 * profile->params().lambda) * profile->f0(y);
    case KernelKind::Interpolated: {
      const double lam = profile->params().lambda;
      return eps * std::pow(y, -1.5) +
             (1.0 - eps) * std::pow(R, 0.5 * (3.0 + lam)) * std::pow(y, 0.5 * lam) *
                 profile->f0(R * y);
    }
    case KernelKind::Regularized:
      return 1.0 / (std::pow(y, 1.5) + std::pow(eps * x, 1.5));
  }
  return 0.0;
}

double kernel_H(const Profile& p, double y) {
  return std::pow(y, 0.5 * p.params().lambda) * p.f0(y) - std::pow(y, -1.5);
}

double kernel_H_eps(const Profile& p, double x, double y, double eps) {
  return std::pow(y, 0.5 * p.params().lambda) * p.f0(y) -
         1.0 / (std::pow(y, 1.5) + std::pow(eps * x, 1.5));
}

double kernel_H_R(const Profile& p, double X, double R) {
  const double lam = p.params().lambda;
  return std::pow(R, 0.5 * (3.0 + lam)) * std::pow(X, 0.5 * lam) * p.f0(R * X) -
         std::pow(X, -1.5);
}

Field NodeOperator::apply(const Field& f) const {
  if (f.grid->checksum() != grid_->checksum())
    throw std::invalid_argument("NodeOperator: grid mismatch");
  return Field(f.grid, a_ * f.values, f.time);
}

namespace {

const GaussRule& gl12() {
  static const GaussRule r = gauss_legendre(12);
  return r;
}

const GaussRule& gl8() {
  static const GaussRule r = gauss_legendre(8);
  return r;
}

/// Scatters quadrature contributions of one target node into a matrix row.
class RowAssembler {
 public:
  RowAssembler(const GradedGrid& grid, Matrix& a, int row) : grid_(grid), a_(a), row_(row) {}

  /// coeff * g(y) with g interpolated from nodal values; zero outside the grid.
  void add_point(double y, double coeff) {
    if (coeff == 0.0) return;
    if (!grid_.interpolation_stencil(y, idx_, w_)) return;
    for (std::size_t k = 0; k < idx_.size(); ++k) a_(row_, idx_[k]) += coeff * w_[k];
  }

  void add_node(int j, double coeff) { a_(row_, j) += coeff; }

 private:
  const GradedGrid& grid_;
  Matrix& a_;
  int row_;
  std::vector<int> idx_;
  std::vector<double> w_;
};

/// Block boundaries 2^m intersected with (lo, hi).
std::vector<double> block_breaks(const GradedGrid& grid, double lo, double hi) {
  std::vector<double> out;
  for (int b = 0; b <= grid.block_count(); ++b) {
    const double e = std::ldexp(1.0, grid.jmin() + b);
    if (e > lo && e < hi) out.push_back(e);
  }
  return out;
}

/// Quadrature panels for int_0^upper K(y) g(y) dy with an integrable power
/// behavior at y=0. Panels grade geometrically toward 0 and are cut at the
/// given breakpoints: interpolants are only piecewise smooth across blocks.
template <typename AddFn>
void graded_lower_integral(double upper, const AddFn& add, std::vector<double> breaks = {},
                           int levels = 28) {
  if (upper <= 0.0) return;
  const GaussRule& rule = gl12();
  std::vector<double> cuts{0.0, upper};
  for (int j = 1; j <= levels; ++j) cuts.push_back(std::ldexp(upper, -j));
  for (double b : breaks)
    if (b > 0.0 && b < upper) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double mid = 0.5 * (cuts[c] + cuts[c + 1]);
    const double half = 0.5 * (cuts[c + 1] - cuts[c]);
    if (half <= 0.0) continue;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      add(mid + half * rule.nodes[q], half * rule.weights[q]);
  }
}

/// Difference integral int_0^{x/2} (F(x-y) - F(x)) K(x,y) dy through y = u^2.
/// Emits matched source/diagonal coefficients so the cancellation happens in
/// the matrix-vector product against smooth fields. Panels are cut where
/// z = x - u^2 crosses block boundaries.
template <typename KernelFn>
void assemble_difference_term(RowAssembler& asmr, const GradedGrid& grid, int row, double lambda,
                              const KernelFn& kernel_of_y, double scale = 1.0,
                              const std::vector<double>& kernel_scales_y = {}) {
  const double x = grid.node(row);
  const double umax = std::sqrt(0.5 * x);
  const int panels = std::max(12, 2 * grid.nodes_per_block());
  const GaussRule& rule = gl12();
  const double xl = std::pow(x, 0.5 * lambda);

  std::vector<double> cuts;
  for (int p = 0; p <= panels; ++p) cuts.push_back(umax * p / panels);
  for (double e : block_breaks(grid, 0.5 * x, x)) cuts.push_back(std::sqrt(x - e));
  for (double ys : kernel_scales_y)
    for (double c : {0.25, 0.5, 1.0, 2.0, 4.0})
      if (c * ys < 0.5 * x) cuts.push_back(std::sqrt(c * ys));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double mid = 0.5 * (cuts[c] + cuts[c + 1]);
    const double half = 0.5 * (cuts[c + 1] - cuts[c]);
    if (half <= 0.0) continue;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double u = mid + half * rule.nodes[q];
      const double w = half * rule.weights[q] * 2.0 * u * kernel_of_y(u * u) * scale;
      const double z = x - u * u;
      asmr.add_point(z, w * std::pow(z, 0.5 * lambda));
      asmr.add_node(row, -w * xl);
    }
  }
}

/// Suffix integral int_{x/2}^{xmax} y^{lambda/2} g(y) dy as row coefficients:
/// whole blocks by their native weights, the cut block by a fresh Gauss rule.
void assemble_suffix_moment(RowAssembler& asmr, const GradedGrid& grid, double from, double coeff,
                            double lambda) {
  if (coeff == 0.0) return;
  const double lo = std::max(from, grid.xmin());
  if (lo >= grid.xmax()) return;
  const int cut_block = std::min(std::max(grid.block_of(lo), 0), grid.block_count() - 1);
  const double cut_hi = grid.block_hi(cut_block);
  // partial piece [lo, cut_hi)
  const GaussRule& rule = gl8();
  const double mid = 0.5 * (lo + cut_hi), half = 0.5 * (cut_hi - lo);
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double y = mid + half * rule.nodes[q];
    asmr.add_point(y, coeff * half * rule.weights[q] * std::pow(y, 0.5 * lambda));
  }
  for (int j = grid.block_start(cut_block + 1); j < grid.size(); ++j)
    asmr.add_node(j, coeff * grid.weight(j) * std::pow(grid.node(j), 0.5 * lambda));
}

/// Tail bound of the suffix moment beyond the grid from the decay of g.
double tail_envelope(const Field& g, double lambda) {
  const GradedGrid& grid = *g.grid;
  double amp = 0.0;
  const double p = 0.5 * (3.0 + lambda);
  for (int j = grid.size() - grid.nodes_per_block(); j < grid.size(); ++j)
    amp = std::max(amp, std::abs(g.values[j]) * std::pow(grid.node(j), p));
  // int_xmax^inf y^{lambda/2} amp y^{-(3+lambda)/2} dy = 2 amp xmax^{-1/2}
  return 2.0 * amp / std::sqrt(grid.xmax());
}

void fill_diagnostics(const Field& g, const Field& out, double lambda, ApplyDiagnostics* diag) {
  if (!diag) return;
  const double tail = tail_envelope(g, lambda);
  diag->worst_tail_estimate = 0.0;
  diag->flagged.clear();
  for (int i = 0; i < out.grid->size(); ++i) {
    const double est = tail * std::pow(out.grid->node(i), -1.5);
    diag->worst_tail_estimate = std::max(diag->worst_tail_estimate, est);
    if (est > diag->tolerance * (1.0 + std::abs(out.values[i]))) diag->flagged.push_back(i);
  }
}

}  // namespace

NodeOperator build_L_eps(GridPtr grid, const ModelParams& params, double eps) {
  params.validate();
  const double lam = params.lambda;
  const int n = grid->size();
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    RowAssembler asmr(*grid, a, i);
    const double x = grid->node(i);

    // gain from below: ((x-y)^{-3/2} - x^{-3/2}) y^{lambda/2}
    const double xm32 = std::pow(x, -1.5);
    graded_lower_integral(
        0.5 * x,
        [&](double y, double w) {
          const double k = std::pow(x - y, -1.5) - xm32;
          asmr.add_point(y, w * k * std::pow(y, 0.5 * lam));
        },
        block_breaks(*grid, 0.0, 0.5 * x));

    // singular difference with the (possibly regularized) jump kernel
    const double c = std::pow(eps * x, 1.5);
    assemble_difference_term(
        asmr, *grid, i, lam, [c](double y) { return 1.0 / (std::pow(y, 1.5) + c); }, 1.0,
        eps > 0.0 ? std::vector<double>{eps * x} : std::vector<double>{});

    // flux loss from above and the exact damping
    assemble_suffix_moment(asmr, *grid, 0.5 * x, -xm32, lam);
    asmr.add_node(i, -2.0 * std::sqrt(2.0) * std::pow(x, 0.5 * (lam - 1.0)));
  }
  return NodeOperator(std::move(grid), std::move(a));
}

NodeOperator build_L(GridPtr grid, const ModelParams& params) {
  return build_L_eps(std::move(grid), params, 0.0);
}

NodeOperator build_cal_L(GridPtr grid, const Profile& p) {
  const double lam = p.params().lambda;
  const int n = grid->size();
  const double moment = p.moment_inf();
  Matrix a = Matrix::Zero(n, n);

  // rank-one coupling coefficients: int_0^inf y^{lambda/2} g(y) dy
  Vector jw(n);
  for (int j = 0; j < n; ++j) jw[j] = grid->weight(j) * std::pow(grid->node(j), 0.5 * lam);

  for (int i = 0; i < n; ++i) {
    RowAssembler asmr(*grid, a, i);
    const double x = grid->node(i);
    const double xl = std::pow(x, 0.5 * lam);

    // both halves of the convolution, folded onto (0, x/2)
    std::vector<double> breaks = block_breaks(*grid, 0.0, 0.5 * x);
    for (double e : block_breaks(*grid, 0.5 * x, x)) breaks.push_back(x - e);
    graded_lower_integral(
        0.5 * x,
        [&](double y, double w) {
          const double z = x - y;
          asmr.add_point(y, w * std::pow(z, 0.5 * lam) * p.f0(z) * std::pow(y, 0.5 * lam));
          asmr.add_point(z, w * std::pow(z, 0.5 * lam) * std::pow(y, 0.5 * lam) * p.f0(y));
        },
        breaks);

    a.row(i) -= xl * p.f0(x) * jw.transpose();
    asmr.add_node(i, -xl * moment);
  }
  return NodeOperator(std::move(grid), std::move(a));
}

NodeOperator build_T(GridPtr grid, const Profile& p, double eps, double R) {
  const int n = grid->size();
  Matrix a = Matrix::Zero(n, n);
  const KernelSpec phi{KernelKind::Interpolated, &p, eps, R};
  const double bg = (1.0 - eps) * std::sqrt(R);

  for (int i = 0; i < n; ++i) {
    RowAssembler asmr(*grid, a, i);
    const double x = grid->node(i);

    // short range (0, x/2): difference form, u-substituted (kernel of y only)
    assemble_difference_term(
        asmr, *grid, i, 0.0, [&](double y) { return phi(x, y); }, 1.0,
        eps < 1.0 ? std::vector<double>{1.0 / R} : std::vector<double>{});

    // mid range y in (x/2, x - xmin): f(x-y) reaches down the grid
    {
      const double lo = grid->xmin();
      const double hi = 0.5 * x;
      if (hi > lo) {
        // z = x - y runs over (lo, hi); panels per octave keep f resolved
        double zl = lo;
        while (zl < hi) {
          const double zh = std::min(2.0 * zl, hi);
          const GaussRule& rule = gl12();
          const double mid = 0.5 * (zl + zh), half = 0.5 * (zh - zl);
          for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double z = mid + half * rule.nodes[q];
            asmr.add_point(z, half * rule.weights[q] * phi(x, x - z));
          }
          zl = zh;
        }
      }
    }

    // - f(x) * int_{x/2}^inf Phi, with the background tail done analytically
    double c0 = eps * 2.0 * std::sqrt(2.0) / std::sqrt(x);
    c0 += bg * p.moment_tail(0.5 * R * x);
    asmr.add_node(i, -c0);
  }
  return NodeOperator(std::move(grid), std::move(a));
}

NodeOperator build_TM(GridPtr grid, const Profile& p, double eps, double R) {
  NodeOperator t = build_T(grid, p, eps, R);
  const double lam = p.params().lambda;
  Matrix a = t.matrix();
  for (int j = 0; j < grid->size(); ++j) a.col(j) *= std::pow(grid->node(j), 0.5 * lam);
  return NodeOperator(std::move(grid), std::move(a));
}

NodeOperator build_A1(GridPtr grid, const Profile& p) {
  const double lam = p.params().lambda;
  const int n = grid->size();
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    RowAssembler asmr(*grid, a, i);
    const double x = grid->node(i);
    const double hx = kernel_H(p, x);

    graded_lower_integral(
        0.5 * x,
        [&](double y, double w) {
          asmr.add_point(y, w * (kernel_H(p, x - y) - hx) * std::pow(y, 0.5 * lam));
        },
        block_breaks(*grid, 0.0, 0.5 * x));
    assemble_suffix_moment(asmr, *grid, 0.5 * x, -hx, lam);

    const double h_tail = p.moment_tail(0.5 * x) - 2.0 * std::sqrt(2.0) / std::sqrt(x);
    asmr.add_node(i, -std::pow(x, 0.5 * lam) * h_tail);
  }
  return NodeOperator(std::move(grid), std::move(a));
}

NodeOperator build_A2_eps(GridPtr grid, const Profile& p, double eps) {
  const double lam = p.params().lambda;
  const int n = grid->size();
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    RowAssembler asmr(*grid, a, i);
    const double x = grid->node(i);
    const double c = std::pow(eps * x, 1.5);
    assemble_difference_term(
        asmr, *grid, i, lam,
        [&](double y) { return std::pow(y, 0.5 * lam) * p.f0(y) - 1.0 / (std::pow(y, 1.5) + c); },
        1.0, eps > 0.0 ? std::vector<double>{eps * x} : std::vector<double>{});
  }
  return NodeOperator(std::move(grid), std::move(a));
}

NodeOperator build_Wcal(GridPtr grid, const Profile& p, WcalVariant variant, double param) {
  const double lam = p.params().lambda;
  const int n = grid->size();
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    RowAssembler asmr(*grid, a, i);
    const double x = grid->node(i);
    switch (variant) {
      case WcalVariant::AtScaleR: {
        const double R = param;
        const double pref = std::pow(R, 0.5 * (3.0 + lam));
        assemble_difference_term(asmr, *grid, i, lam, [&](double y) {
          return pref * std::pow(y, 0.5 * lam) * p.f0(R * y);
        });
        break;
      }
      case WcalVariant::Infinity:
        assemble_difference_term(asmr, *grid, i, lam,
                                 [](double y) { return std::pow(y, -1.5); });
        break;
      case WcalVariant::InfinityEps: {
        const double c = std::pow(param * x, 1.5);
        assemble_difference_term(
            asmr, *grid, i, lam, [c](double y) { return 1.0 / (std::pow(y, 1.5) + c); }, 1.0,
            param > 0.0 ? std::vector<double>{param * x} : std::vector<double>{});
        break;
      }
    }
  }
  return NodeOperator(std::move(grid), std::move(a));
}

NodeOperator build_localized_remainder(GridPtr grid, const SmoothCutoff& chi, const Profile& p) {
  const double lam = p.params().lambda;
  const int n = grid->size();
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    RowAssembler asmr(*grid, a, i);
    const double x = grid->node(i);
    const double cx = chi(x);
    const double xl = std::pow(x, 0.5 * lam);
    const double kx = xl * p.f0(x);

    std::vector<double> breaks = block_breaks(*grid, 0.0, 0.5 * x);
    for (double e : block_breaks(*grid, 0.5 * x, x)) breaks.push_back(x - e);
    for (double e : {chi.a(), chi.b(), chi.c(), chi.d()})
      if (x - e > 0.0 && x - e < 0.5 * x) breaks.push_back(x - e);
    graded_lower_integral(
        0.5 * x,
        [&](double y, double w) {
          const double z = x - y;
          const double kz = std::pow(z, 0.5 * lam) * p.f0(z);
          if (cx != 0.0) asmr.add_point(y, w * cx * (kz - kx) * std::pow(y, 0.5 * lam));
          const double dchi = cx - chi(z);
          if (dchi != 0.0)
            asmr.add_point(z, w * dchi * std::pow(z, 0.5 * lam) * std::pow(y, 0.5 * lam) * p.f0(y));
        },
        breaks);

    if (cx != 0.0) {
      asmr.add_node(i, -xl * cx * p.moment_tail(0.5 * x));
      assemble_suffix_moment(asmr, *grid, 0.5 * x, -kx * cx, lam);
    }
  }
  return NodeOperator(std::move(grid), std::move(a));
}

namespace {

Field apply_built(const NodeOperator& op, const Field& g, double lambda, ApplyDiagnostics* diag) {
  Field out = op.apply(g);
  fill_diagnostics(g, out, lambda, diag);
  return out;
}

}  // namespace

Field apply_L(const Field& g, const ModelParams& params, ApplyDiagnostics* diag) {
  return apply_built(build_L(g.grid, params), g, params.lambda, diag);
}

Field apply_L_eps(const Field& g, const ModelParams& params, double eps, ApplyDiagnostics* diag) {
  return apply_built(build_L_eps(g.grid, params, eps), g, params.lambda, diag);
}

Field apply_cal_L(const Field& g, const Profile& p, ApplyDiagnostics* diag) {
  return apply_built(build_cal_L(g.grid, p), g, p.params().lambda, diag);
}

Field apply_T(const Field& f, const Profile& p, double eps, double R, ApplyDiagnostics* diag) {
  return apply_built(build_T(f.grid, p, eps, R), f, p.params().lambda, diag);
}

Field apply_TM(const Field& f, const Profile& p, double eps, double R, ApplyDiagnostics* diag) {
  return apply_built(build_TM(f.grid, p, eps, R), f, p.params().lambda, diag);
}

Field apply_A1(const Field& phi, const Profile& p, ApplyDiagnostics* diag) {
  return apply_built(build_A1(phi.grid, p), phi, p.params().lambda, diag);
}

Field apply_A2_eps(const Field& phi, const Profile& p, double eps, ApplyDiagnostics* diag) {
  return apply_built(build_A2_eps(phi.grid, p, eps), phi, p.params().lambda, diag);
}

Field apply_Wcal(const Field& h, const Profile& p, WcalVariant variant, double param,
                 ApplyDiagnostics* diag) {
  return apply_built(build_Wcal(h.grid, p, variant, param), h, p.params().lambda, diag);
}

Field apply_localized_remainder(const Field& g, const SmoothCutoff& chi, const Profile& p,
                                ApplyDiagnostics* diag) {
  return apply_built(build_localized_remainder(g.grid, chi, p), g, p.params().lambda, diag);
}

Vector apply_T_periodic_at(const UniformMesh& m, const Vector& f, const Profile& p, double eps,
                           double R, double max_freq, const std::vector<int>& targets) {
  const double L = m.length();
  const KernelSpec phi{KernelKind::Interpolated, &p, eps, R};
  const double bg = (1.0 - eps) * std::sqrt(R);

  // u-mesh: geometric start, then panels resolving both the field phase
  // (max_freq du^2 <= 3) and the background kernel scale (du^2 <= 1/(2R))
  const double umax = std::sqrt(L);
  const double kf = std::max(max_freq, 1.0);
  const double dy_max = std::min(3.0 / kf, eps < 1.0 ? 0.5 / R : 3.0 / kf);
  std::vector<double> cuts{0.0};
  for (int j = 14; j >= 1; --j) {
    const double u = umax * std::ldexp(1.0, -j);
    if (u * u > dy_max) break;
    cuts.push_back(u);
  }
  while (cuts.back() < umax) {
    const double next = std::sqrt(cuts.back() * cuts.back() + dy_max);
    cuts.push_back(std::min(next, umax));
  }

  // periodized kernel on the quadrature points (first image plus the sum)
  const GaussRule& rule = gl8();
  struct QPoint {
    double u, w, phi;
  };
  std::vector<QPoint> qp;
  const int images = 3000;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double mid = 0.5 * (cuts[c] + cuts[c + 1]);
    const double half = 0.5 * (cuts[c + 1] - cuts[c]);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double u = mid + half * rule.nodes[q];
      double kernel = 0.0;
      for (int im = 0; im <= images; ++im) kernel += phi(0.0, u * u + im * L);
      // integral correction for the truncated image sum
      const double far = u * u + (images + 0.5) * L;
      kernel += (eps * 2.0 / std::sqrt(far) + bg * p.moment_tail(R * far)) / L;
      qp.push_back({u, half * rule.weights[q] * 2.0 * u, kernel});
    }
  }

  Vector out(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const int i = targets[t];
    const double x = m.point(i);
    double acc = 0.0;
    for (const QPoint& q : qp)
      acc += q.w * (periodic_interp(m, f, x - q.u * q.u) - f[i]) * q.phi;
    out[t] = acc;
  }
  return out;
}

Vector apply_T_periodic(const UniformMesh& m, const Vector& f, const Profile& p, double eps,
                        double R, double max_freq) {
  std::vector<int> all(m.n);
  for (int i = 0; i < m.n; ++i) all[i] = i;
  return apply_T_periodic_at(m, f, p, eps, R, max_freq, all);
}

}  // namespace coag
