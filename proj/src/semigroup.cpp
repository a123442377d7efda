#include "coag/semigroup.hpp"

#include <cmath>
#include <stdexcept>

namespace coag {

FreezePoint make_freeze_point(double x0, double eps, double R, const Profile& p, double lo,
                              double hi, int n, double pad) {
  if (!(x0 > 0.0)) throw std::invalid_argument("FreezePoint: x0 > 0 required");
  if (!(x0 >= lo && x0 <= hi)) throw std::invalid_argument("FreezePoint: x0 outside range");
  FreezePoint fp;
  fp.x0 = x0;
  fp.eps = eps;
  fp.R = R;
  fp.lambda = p.params().lambda;
  fp.mesh = make_padded_mesh(lo, hi, n, pad);
  Vector xi(n);
  for (int j = 0; j < n; ++j) xi[j] = fp.mesh.freq(j);
  fp.symbols = std::make_shared<SymbolGrid>(build_symbol_grid(xi, eps, R, p));
  return fp;
}

Vector semigroup_apply_mesh(const FreezePoint& fp, const Vector& f, double t) {
  if (f.size() != fp.mesh.n) throw std::invalid_argument("semigroup: mesh size mismatch");
  if (t < 0.0) throw std::invalid_argument("semigroup: t >= 0 required");
  CVector F = dft_forward(f);
  const double r = t * fp.rate();
  for (int j = 0; j < fp.mesh.n; ++j) F[j] *= std::exp(r * fp.symbols->W[j]);
  return dft_inverse_real(F);
}

Field semigroup_apply(const Field& f, double t, const FreezePoint& fp, double* wraparound) {
  Vector mesh_vals = resample_to_mesh(f, fp.mesh);
  Vector out = semigroup_apply_mesh(fp, mesh_vals, t);

  if (wraparound) {
    double edge = 0.0, peak = 0.0;
    for (int j = 0; j < fp.mesh.n; ++j) {
      peak = std::max(peak, std::abs(out[j]));
      if (j < fp.mesh.n / 8 || j >= fp.mesh.n - fp.mesh.n / 8)
        edge = std::max(edge, std::abs(out[j]));
    }
    *wraparound = peak > 0.0 ? edge / peak : 0.0;
  }

  Field result(f.grid, f.time + t);
  for (int i = 0; i < f.grid->size(); ++i) {
    const double x = f.grid->node(i);
    if (x <= fp.mesh.x0 || x >= fp.mesh.x0 + fp.mesh.length()) continue;
    result.values[i] = periodic_interp(fp.mesh, out, x);
  }
  return result;
}

FieldSeries duhamel(const FieldSeries& hs, const FreezePoint& fp) {
  if (hs.steps() < 2) throw std::invalid_argument("duhamel: need at least two times");
  const int n = fp.mesh.n;

  // transform every snapshot once
  std::vector<CVector> H(hs.steps());
  for (int k = 0; k < hs.steps(); ++k)
    H[k] = dft_forward(resample_to_mesh(hs.at(k), fp.mesh));

  FieldSeries out(hs.grid);
  out.push(hs.times[0], Vector::Zero(hs.grid->size()));
  CVector acc;
  for (int k = 1; k < hs.steps(); ++k) {
    // midpoint rule: sum_j ds * exp((t_k - s_mid) rate W) * h(s_mid)
    acc = CVector::Zero(n);
    for (int j = 0; j < k; ++j) {
      const double ds = hs.times[j + 1] - hs.times[j];
      const double smid = 0.5 * (hs.times[j] + hs.times[j + 1]);
      const double r = (hs.times[k] - smid) * fp.rate();
      const CVector hm = 0.5 * (H[j] + H[j + 1]);
      for (int i = 0; i < n; ++i) acc[i] += ds * std::exp(r * fp.symbols->W[i]) * hm[i];
    }
    Vector mesh_vals = dft_inverse_real(acc);
    Vector nodal = Vector::Zero(hs.grid->size());
    for (int i = 0; i < hs.grid->size(); ++i) {
      const double x = hs.grid->node(i);
      if (x <= fp.mesh.x0 || x >= fp.mesh.x0 + fp.mesh.length()) continue;
      nodal[i] = periodic_interp(fp.mesh, mesh_vals, x);
    }
    out.push(hs.times[k], std::move(nodal));
  }
  return out;
}

Field commutator_apply(const Field& h, const SmoothCutoff& eta, double eps, double R,
                       const Profile& p) {
  Field th = apply_T(h, p, eps, R);
  Field eh(h.grid, h.time);
  for (int i = 0; i < h.grid->size(); ++i) eh.values[i] = eta(h.grid->node(i)) * h.values[i];
  Field teh = apply_T(eh, p, eps, R);
  Field out(h.grid, h.time);
  for (int i = 0; i < h.grid->size(); ++i)
    out.values[i] = eta(h.grid->node(i)) * th.values[i] - teh.values[i];
  return out;
}

}  // namespace coag
