#include "coag/solver.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace coag {

void SolveConfig::validate() const {
  params.validate();
  if (!grid) throw std::invalid_argument("SolveConfig: grid required");
  if (!profile) throw std::invalid_argument("SolveConfig: profile required");
  if (dt < 0.0) throw std::invalid_argument("SolveConfig: dt must be nonnegative");
  if (!(freeze_x0 > 0.0)) throw std::invalid_argument("SolveConfig: freeze_x0 > 0 required");
}

Vector local_damping(const GradedGrid& grid, const ModelParams& params, const Profile& p) {
  const double theta = params.theta;
  const double lam = params.lambda;
  const double moment = p.moment_inf();
  Vector a(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const double x = grid.node(i);
    a[i] = (1.0 - theta) * 2.0 * std::sqrt(2.0) * std::pow(x, 0.5 * (lam - 1.0)) +
           theta * std::pow(x, 0.5 * lam) * moment;
  }
  return a;
}

Vector integrating_factor(const FieldSeries& a, double s, double t) {
  if (t < s) throw std::invalid_argument("integrating_factor: s <= t required");
  const int n = a.grid->size();
  Vector acc = Vector::Zero(n);
  // trapezoid over the series' own mesh, partial end segments included
  for (int k = 0; k + 1 < a.steps(); ++k) {
    const double lo = std::max(a.times[k], s);
    const double hi = std::min(a.times[k + 1], t);
    if (hi <= lo) continue;
    const double w = a.times[k + 1] - a.times[k];
    auto lerp = [&](double tau) {
      const double u = (tau - a.times[k]) / w;
      return ((1.0 - u) * a.values[k] + u * a.values[k + 1]).eval();
    };
    acc += 0.5 * (hi - lo) * (lerp(lo) + lerp(hi));
  }
  // clamped extension outside the series range
  if (s < a.times.front()) acc += (std::min(t, a.times.front()) - s) * a.values.front();
  if (t > a.times.back()) acc += (t - std::max(s, a.times.back())) * a.values.back();
  return (-acc).array().exp();
}

namespace {

struct ExplicitOperator {
  Matrix a;       // full operator plus the damping diagonal
  Vector damping; // removed diagonal, integrated exactly

  Vector rhs(const Vector& h, const Vector& mu) const { return a * h + mu; }
};

ExplicitOperator build_explicit(const SolveConfig& cfg) {
  const double theta = cfg.params.theta;
  ExplicitOperator op;
  op.damping = local_damping(*cfg.grid, cfg.params, *cfg.profile);
  const int n = cfg.grid->size();
  op.a = Matrix::Zero(n, n);
  if (theta < 1.0) op.a += (1.0 - theta) * build_L_eps(cfg.grid, cfg.params, cfg.params.eps).matrix();
  if (theta > 0.0) op.a += theta * build_cal_L(cfg.grid, *cfg.profile).matrix();
  op.a += op.damping.asDiagonal();
  return op;
}

double power_iteration_radius(const Matrix& a, int iters = 40) {
  Vector v = Vector::Ones(a.rows());
  v.normalize();
  double r = 0.0;
  for (int k = 0; k < iters; ++k) {
    Vector w = a * v;
    r = w.norm();
    if (r == 0.0) return 0.0;
    v = w / r;
  }
  return r;
}

void guard_blowup(const Vector& h, double guard, double t) {
  if (h.allFinite() && h.lpNorm<Eigen::Infinity>() < guard) return;
  std::ostringstream msg;
  msg << "evolve: solution blew up at t=" << t << " (max " << h.lpNorm<Eigen::Infinity>()
      << "); reduce dt or the horizon";
  throw std::runtime_error(msg.str());
}

FieldSeries run_imex(const SolveConfig& cfg, const Vector& init, const FieldSeries* mu,
                     EvolveInfo* info) {
  const ExplicitOperator op = build_explicit(cfg);
  const double T = cfg.params.T;

  const double amax = op.damping.maxCoeff();
  const double rho = power_iteration_radius(op.a);
  const double bound = std::min(0.25 / std::max(amax, 1e-12), 1.0 / std::max(rho, 1e-12));
  double dt = cfg.dt > 0.0 ? cfg.dt : std::min(bound, T / 16.0);
  const int steps = std::max(1, static_cast<int>(std::ceil(T / dt - 1e-9)));
  dt = T / steps;
  if (info) {
    info->dt_used = dt;
    info->stability_bound = bound;
    info->explicit_radius = rho;
  }

  const Vector e_full = (-dt * op.damping.array()).exp();
  const Vector e_half = (-0.5 * dt * op.damping.array()).exp();
  const int n = cfg.grid->size();
  const Vector zero = Vector::Zero(n);
  auto source = [&](double t) { return mu ? mu->eval(t) : zero; };

  FieldSeries out(cfg.grid);
  out.push(0.0, init);
  Vector h = init;
  for (int k = 0; k < steps; ++k) {
    const double t = k * dt;
    // Lawson RK4: the damping factor is exact, the rest classical
    const Vector k1 = op.rhs(h, source(t));
    const Vector h2 = e_half.cwiseProduct(h + 0.5 * dt * k1);
    const Vector k2 = op.rhs(h2, source(t + 0.5 * dt));
    const Vector h3 = e_half.cwiseProduct(h) + 0.5 * dt * k2;
    const Vector k3 = op.rhs(h3, source(t + 0.5 * dt));
    const Vector h4 = e_full.cwiseProduct(h) + dt * e_half.cwiseProduct(k3);
    const Vector k4 = op.rhs(h4, source(t + dt));
    h = e_full.cwiseProduct(h) +
        (dt / 6.0) * (e_full.cwiseProduct(k1) + 2.0 * e_half.cwiseProduct(k2 + k3) + k4);
    guard_blowup(h, cfg.blowup_guard, t + dt);
    out.push((k + 1) * dt, h);
  }
  return out;
}

FieldSeries run_frozen(const SolveConfig& cfg, const Vector& init, const FieldSeries* mu,
                       EvolveInfo* info) {
  const ExplicitOperator op = build_explicit(cfg);
  const double T = cfg.params.T;
  const double theta = cfg.params.theta;
  const double x0 = cfg.freeze_x0;

  // window around the freeze point; the multiplier handles only w*h
  const SmoothCutoff w(x0 / 8.0, x0 / 4.0, 4.0 * x0, 8.0 * x0);
  const int n = cfg.grid->size();
  Vector wv(n);
  for (int i = 0; i < n; ++i) wv[i] = w(cfg.grid->node(i));

  const FreezePoint fp =
      make_freeze_point(x0, 1.0 - theta, 1.0, *cfg.profile, x0 / 8.0, 8.0 * x0, 1 << 12);
  Vector wm(fp.mesh.n);
  for (int j = 0; j < fp.mesh.n; ++j) wm[j] = w(fp.mesh.point(j));

  // full operator (damping treated explicitly here; the multiplier carries
  // the stiff jump part of the window)
  Matrix full = op.a;
  full -= Matrix(op.damping.asDiagonal());

  const double rho = power_iteration_radius(op.a);
  const double amax = op.damping.maxCoeff();
  const double bound = std::min(0.2 / std::max(amax, 1e-12), 0.8 / std::max(rho, 1e-12));
  double dt = cfg.dt > 0.0 ? cfg.dt : std::min(bound, T / 16.0);
  const int steps = std::max(1, static_cast<int>(std::ceil(T / dt - 1e-9)));
  dt = T / steps;
  if (info) {
    info->dt_used = dt;
    info->stability_bound = bound;
    info->explicit_radius = rho;
  }

  const Vector zero = Vector::Zero(n);
  auto source = [&](double t) { return mu ? mu->eval(t) : zero; };
  auto to_mesh = [&](const Vector& nodal) {
    Field f(cfg.grid, nodal);
    return resample_to_mesh(f, fp.mesh);
  };
  auto to_grid = [&](const Vector& mesh_vals) {
    Vector out = Vector::Zero(n);
    for (int i = 0; i < n; ++i) {
      const double x = cfg.grid->node(i);
      if (x <= fp.mesh.x0 || x >= fp.mesh.x0 + fp.mesh.length()) continue;
      out[i] = periodic_interp(fp.mesh, mesh_vals, x);
    }
    return out;
  };
  auto multiply = [&](const Vector& mesh_vals, auto factor) {
    CVector F = dft_forward(mesh_vals);
    for (int j = 0; j < fp.mesh.n; ++j) F[j] *= factor(fp.symbols->W[j]);
    return dft_inverse_real(F);
  };

  // both the semigroup and the subtracted generator use the same mesh
  // realization, so their discretization errors cancel in the update
  auto window_mesh = [&](const Vector& h) { return (wm.array() * to_mesh(h).array()).matrix(); };
  auto generator_grid = [&](const Vector& um) {
    return to_grid(multiply(um, [&](Complex W) { return fp.rate() * W; }));
  };

  FieldSeries out(cfg.grid);
  out.push(0.0, init);
  Vector h = init;
  for (int k = 0; k < steps; ++k) {
    const double t = k * dt;
    const Vector um = window_mesh(h);
    const Vector rest = h - wv.cwiseProduct(h);
    const Vector r1 = full * h + source(t) - generator_grid(um);
    const Vector su_half =
        to_grid(multiply(um, [&](Complex W) { return std::exp(0.5 * dt * fp.rate() * W); }));
    const Vector hmid = su_half + rest + 0.5 * dt * r1;

    const Vector um2 = window_mesh(hmid);
    const Vector r2 = full * hmid + source(t + 0.5 * dt) - generator_grid(um2);
    const Vector su_full =
        to_grid(multiply(um, [&](Complex W) { return std::exp(dt * fp.rate() * W); }));
    h = su_full + rest + dt * r2;
    guard_blowup(h, cfg.blowup_guard, t + dt);
    out.push((k + 1) * dt, h);
  }
  return out;
}

}  // namespace

FieldSeries evolve(const SolveConfig& cfg, const FieldSeries& mu, EvolveInfo* info) {
  cfg.validate();
  const Vector zero = Vector::Zero(cfg.grid->size());
  return cfg.scheme == Scheme::ImexIntegratingFactor ? run_imex(cfg, zero, &mu, info)
                                                     : run_frozen(cfg, zero, &mu, info);
}

FieldSeries evolve_from(const SolveConfig& cfg, const Field& init, const FieldSeries* mu,
                        EvolveInfo* info) {
  cfg.validate();
  if (init.grid->checksum() != cfg.grid->checksum())
    throw std::invalid_argument("evolve_from: grid mismatch");
  return cfg.scheme == Scheme::ImexIntegratingFactor ? run_imex(cfg, init.values, mu, info)
                                                     : run_frozen(cfg, init.values, mu, info);
}

FieldSeries evolve_with_estimate(const SolveConfig& cfg, const FieldSeries& mu, EvolveInfo* info) {
  EvolveInfo local;
  FieldSeries coarse = evolve(cfg, mu, &local);
  SolveConfig fine = cfg;
  fine.dt = 0.5 * local.dt_used;
  FieldSeries refined = evolve(fine, mu, nullptr);
  const Vector& a = coarse.values.back();
  const Vector& b = refined.values.back();
  local.richardson_error =
      (a - b).lpNorm<Eigen::Infinity>() / (1.0 + b.lpNorm<Eigen::Infinity>());
  if (info) *info = local;
  return coarse;
}

ContinuationReport continuation_sweep(const SolveConfig& base, const std::vector<double>& thetas,
                                      const FieldSeries& mu) {
  for (std::size_t i = 1; i < thetas.size(); ++i)
    if (thetas[i] <= thetas[i - 1])
      throw std::invalid_argument("continuation_sweep: thetas must increase");

  const ModelParams& mp = base.params;
  const double mu_norm =
      norm_Y(mu, mp.sigma, 1.5, 2.0 + mp.delta, mp.lambda, mp.T);

  ContinuationReport rep;
  for (double theta : thetas) {
    SolveConfig cfg = base;
    cfg.params.theta = theta;
    FieldSeries h = evolve(cfg, mu);
    ContinuationEntry e;
    e.theta = theta;
    e.mu_norm = mu_norm;
    e.triple_norm = norm_E(h, mp.sigma, mp.lambda, mp.T);
    e.ratio = mu_norm > 0.0 ? e.triple_norm / mu_norm : 0.0;
    rep.entries.push_back(e);
  }
  rep.min_ratio = 1e300;
  for (const ContinuationEntry& e : rep.entries) {
    rep.min_ratio = std::min(rep.min_ratio, e.ratio);
    rep.max_ratio = std::max(rep.max_ratio, e.ratio);
  }
  if (rep.min_ratio > 0.0) rep.uniform = rep.max_ratio / rep.min_ratio <= 3.0;
  return rep;
}

FixedPointReport fixed_point_iterate(const SolveConfig& base, double theta, double theta_n,
                                     double eps, const FieldSeries& mu,
                                     const FieldSeries* phi_init, int iterations) {
  if (!(theta_n <= theta && theta <= 1.0))
    throw std::invalid_argument("fixed_point_iterate: need theta_n <= theta <= 1");
  SolveConfig cfg = base;
  cfg.params.theta = theta_n;
  cfg.params.eps = eps;
  cfg.validate();

  // pin the time mesh so iterates share times
  EvolveInfo info;
  FieldSeries probe = evolve(cfg, mu, &info);
  cfg.dt = info.dt_used;

  const Matrix coupling =
      (theta - theta_n) * (build_cal_L(cfg.grid, *cfg.profile).matrix() -
                           build_L_eps(cfg.grid, cfg.params, eps).matrix());

  FixedPointReport rep;
  FieldSeries prev;
  if (phi_init) {
    prev = *phi_init;
  } else {
    prev = FieldSeries(cfg.grid);
    for (double t : probe.times) {
      prev.times.push_back(t);
      prev.values.push_back(Vector::Zero(cfg.grid->size()));
    }
  }

  const ModelParams& mp = cfg.params;
  int grow = 0;
  for (int it = 0; it < iterations; ++it) {
    // source = (theta - theta_n)(calL - L_eps)(phi_prev) + mu
    FieldSeries src(cfg.grid);
    for (int k = 0; k < probe.steps(); ++k) {
      const double t = probe.times[k];
      src.times.push_back(t);
      src.values.push_back(coupling * prev.eval(t) + mu.eval(t));
    }
    FieldSeries next = evolve(cfg, src);

    FieldSeries diff(cfg.grid);
    for (int k = 0; k < next.steps(); ++k) {
      diff.times.push_back(next.times[k]);
      diff.values.push_back(next.values[k] - prev.eval(next.times[k]));
    }
    rep.distances.push_back(norm_E(diff, mp.sigma, mp.lambda, mp.T));
    if (rep.distances.size() >= 2 && rep.distances.back() > rep.distances[rep.distances.size() - 2])
      ++grow;
    else
      grow = 0;
    if (grow >= 3) {
      rep.diverged = true;
      rep.last = next;
      return rep;
    }
    prev = next;
  }
  rep.last = prev;
  return rep;
}

}  // namespace coag
