#include "coag/acceptance.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "coag/fundsol.hpp"
#include "coag/manifest.hpp"
#include "coag/operators.hpp"
#include "coag/semigroup.hpp"
#include "coag/solver.hpp"
#include "coag/symbols.hpp"

namespace coag {

namespace {

namespace fs = std::filesystem;

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

void report(std::vector<CriterionResult>& out, const AcceptanceOptions& opt, int id,
            const std::string& name, bool pass, const std::string& detail) {
  out.push_back({id, name, pass, detail});
  if (opt.verbose)
    std::printf("[%2d/14] %s  %s (%s)\n", id, pass ? "PASS" : "FAIL", name.c_str(),
                detail.c_str());
}

double poly_bump(double x) {
  if (x <= 1.0 || x >= 2.0) return 0.0;
  const double a = x - 1.0, b = 2.0 - x;
  return 256.0 * a * a * a * a * b * b * b * b;
}

FieldSeries bump_family(GridPtr grid, double T, int nt) {
  FieldSeries mu(grid);
  for (int k = 0; k <= nt; ++k) {
    const double t = T * k / nt;
    mu.times.push_back(t);
    Field f = Field::sample(grid, [&](double x) {
      const double u = std::log(x / 2.0);
      return std::exp(-2.0 * u * u) * (1.0 + 0.5 * std::cos(3.0 * t));
    });
    mu.values.push_back(f.values);
  }
  return mu;
}

// ---- 1: half-derivative constant ------------------------------------------
void criterion_half_derivative(std::vector<CriterionResult>& out, const AcceptanceOptions& opt) {
  double worst = 0.0;
  for (double z : {1.0, 4.0, 9.0}) {
    const Complex num = half_derivative_symbol_quadrature(z);
    worst = std::max(worst, std::abs(num - half_derivative_symbol(z)));
  }
  report(out, opt, 1, "half-derivative constant at z in {1,4,9}", worst < 1e-6,
         fmt("max abs err %.2e, tol 1e-6", worst));
}

// ---- 2: wtilde limits -------------------------------------------------------
void criterion_wtilde_limits(std::vector<CriterionResult>& out, const AcceptanceOptions& opt,
                             const Profile& prof) {
  const double target = -std::sqrt(2.0 * M_PI);
  const Complex ratio = wtilde(1e-3, prof) / (Complex(1.0, 1.0) * std::sqrt(1e-3));
  const double small_err = std::max(std::abs(ratio.real() - target), std::abs(ratio.imag())) /
                           std::abs(target);
  const double moment = prof.moment_inf();
  const double large_err = std::abs(wtilde(1e3, prof) - Complex(-moment, 0.0)) / moment;
  const bool pass = small_err < 0.02 && large_err < 0.02;
  report(out, opt, 2, "wtilde limits at z=1e-3 and z=1e3", pass,
         fmt("small-z err %.4f, large-z err %.4f, tol 0.02", small_err, large_err));
}

// ---- 3: symbol sign and symmetry -------------------------------------------
void criterion_symbol_invariants(std::vector<CriterionResult>& out, const AcceptanceOptions& opt,
                                 const Profile& prof) {
  Vector xi(2 * 13 + 1);
  xi[0] = 0.0;
  for (int j = 0; j <= 12; ++j) {
    xi[1 + 2 * j] = 0.25 * std::ldexp(1.0, j);
    xi[2 + 2 * j] = -0.25 * std::ldexp(1.0, j);
  }
  int bad = 0;
  for (double eps : {0.0, 0.5, 1.0})
    for (double R : {1.0, 8.0, 64.0})
      bad += build_symbol_grid(xi, eps, R, prof, opt.workers).invariant_violations();
  report(out, opt, 3, "Re W < 0 and Hermitian symmetry on all grids", bad == 0,
         fmt("violations %g over 9 grids x 27 nodes", static_cast<double>(bad)));
}

// ---- 4: quadrature vs multiplier --------------------------------------------
void criterion_multiplier_equivalence(std::vector<CriterionResult>& out,
                                      const AcceptanceOptions& opt, const Profile& prof) {
  const int n = 1 << 14;
  UniformMesh m = make_padded_mesh(2.0, 10.0, n, 3.0);
  const double k1 = 2.0 * M_PI * 12 / m.length();
  const double k2 = 2.0 * M_PI * 29 / m.length();
  Vector f(m.n);
  for (int j = 0; j < m.n; ++j)
    f[j] = std::cos(k1 * m.point(j)) + 0.4 * std::sin(k2 * m.point(j));
  std::vector<int> targets;
  for (int j = 0; j < m.n; j += 32) targets.push_back(j);

  double worst = 0.0;
  for (double eps : {0.0, 0.5, 1.0}) {
    for (double R : {1.0, 8.0, 64.0}) {
      Vector xi(m.n);
      for (int j = 0; j < m.n; ++j) xi[j] = m.freq(j);
      const SymbolGrid sg = build_symbol_grid(xi, eps, R, prof, opt.workers);
      CVector F = dft_forward(f);
      for (int j = 0; j < m.n; ++j) F[j] *= sg.W[j];
      const Vector mult = dft_inverse_real(F);

      const Vector quad = apply_T_periodic_at(m, f, prof, eps, R, k2, targets);
      double num = 0.0, den = 0.0;
      for (std::size_t t = 0; t < targets.size(); ++t) {
        num += std::pow(quad[t] - mult[targets[t]], 2.0);
        den += std::pow(mult[targets[t]], 2.0);
      }
      worst = std::max(worst, std::sqrt(num / den));
    }
  }
  report(out, opt, 4, "apply_T matches the symbol multiplier at N=2^14", worst <= 1e-3,
         fmt("worst rel L2 err %.2e over eps {0,1/2,1} x R {1,8,64}, tol 1e-3", worst));
}

// ---- 5: L_eps -> L rate ------------------------------------------------------
void criterion_leps_rate(std::vector<CriterionResult>& out, const AcceptanceOptions& opt) {
  ModelParams mp;
  GridPtr grid = build_grid(-6, 6, 16);
  Field bump = Field::sample(grid, poly_bump);
  NodeOperator l = build_L(grid, mp);
  const Vector lg = l.apply(bump).values;
  std::vector<double> es, ds;
  for (int j = 1; j <= 8; ++j) {
    const double eps = std::ldexp(1.0, -j);
    const Vector diff = apply_L_eps(bump, mp, eps).values - lg;
    double l2 = 0.0;
    for (int i = 0; i < grid->size(); ++i) l2 += grid->weight(i) * diff[i] * diff[i];
    es.push_back(eps);
    ds.push_back(std::sqrt(l2));
  }
  const PowerFit fit = fit_loglog(es, ds);
  const bool pass = std::abs(fit.exponent - 0.5) <= 0.15;
  report(out, opt, 5, "||L_eps g - L g||_2 rate in eps", pass,
         fmt("fitted slope %.3f, want 0.5 +- 0.15", fit.exponent));
}

// ---- 6: symmetrization identity ---------------------------------------------
void criterion_symmetrization(std::vector<CriterionResult>& out, const AcceptanceOptions& opt) {
  ModelParams mp;
  GridPtr grid = build_grid(-12, 6, 16);
  auto f0 = [](double y) { return std::exp(-y * y / 9.0); };
  auto f0p = [](double y) { return -2.0 * y / 9.0 * std::exp(-y * y / 9.0); };
  Profile loc(mp, f0, f0p, nullptr, /*check_decay=*/false);
  Field g = Field::sample(grid, poly_bump);
  const Field lg = apply_cal_L(g, loc);
  double moment = 0.0, scale = 0.0;
  for (int i = 0; i < grid->size(); ++i) {
    const double x = grid->node(i);
    moment += grid->weight(i) * x * lg.values[i];
    scale += grid->weight(i) * x * std::pow(x, 0.75) * std::abs(g.values[i]) * loc.moment_inf();
  }
  const bool pass = std::abs(moment) <= 1e-8 * scale;
  report(out, opt, 6, "first-moment symmetrization of calL", pass,
         fmt("|int x calL(g)| = %.2e, tol %.2e", std::abs(moment), 1e-8 * scale));
}

// ---- 7 and 8: fundamental solution -------------------------------------------
void criterion_fundsol(std::vector<CriterionResult>& out, const AcceptanceOptions& opt,
                       const Profile& prof) {
  ModelParams mp;
  FundSolConfig cfg;
  cfg.params = mp;
  cfg.grid = build_grid(-12, 8, 32);  // deep enough that the inner window is
                                      // clear of bottom-boundary contamination
  cfg.profile = &prof;

  const double t2 = 0.25;
  FundSolResult r1 = compute_fundamental(1.0, 0.08, 0.55, cfg);
  FundSolResult r2 = compute_fundamental(2.0, 0.16, t2 + 0.05, cfg);
  const SelfSimilarReport ss = check_selfsimilar(r1, r2, t2, mp.lambda);
  report(out, opt, 7, "self-similar collapse of g for x0 in {1,2}", ss.deviation <= 0.05,
         fmt("deviation %.4f at t=%.2f, tol 0.05", ss.deviation, t2));

  const TailReport tails = check_tail_bounds(r1, 0.5, mp.delta, mp.lambda);
  const double want_large = -0.5 * (3.0 + mp.lambda);
  const bool pass8 = std::abs(tails.small_x.exponent + 1.5) <= 0.1 &&
                     std::abs(tails.large_x.exponent - want_large) <= 0.1 &&
                     tails.small_x.rms_residual < 0.05 && tails.large_x.rms_residual < 0.05;
  report(out, opt, 8, "tail exponents of g at t=0.5", pass8,
         fmt("small-x %.3f (want -1.5 +- 0.1), large-x %.3f (want %.2f +- 0.1), residuals ok",
             tails.small_x.exponent, tails.large_x.exponent, want_large));
}

// ---- 9: Duhamel exponent ------------------------------------------------------
void criterion_duhamel(std::vector<CriterionResult>& out, const AcceptanceOptions& opt,
                       const Profile& prof) {
  ModelParams mp;
  FundSolConfig outer;
  outer.params = mp;
  outer.grid = build_grid(-8, 10, 16);
  outer.profile = &prof;
  const DuhamelExponentReport r01 = duhamel_exponent_test(0.1, outer);

  FundSolConfig inner;
  inner.params = mp;
  inner.grid = build_grid(-12, 8, 16);
  inner.profile = &prof;
  const DuhamelExponentReport r1 = duhamel_exponent_test(1.0, inner);

  const bool pass = r01.fit.exponent >= r01.beta - 0.1 && r1.fit.exponent >= r1.beta - 0.1;
  report(out, opt, 9, "Duhamel growth exponent for delta in {0.1, 1}", pass,
         fmt("fits %.3f (>= 0.3) and %.3f (>= 0.9)", r01.fit.exponent, r1.fit.exponent));
}

// ---- 10: A1 decay -------------------------------------------------------------
void criterion_a1_decay(std::vector<CriterionResult>& out, const AcceptanceOptions& opt) {
  ModelParams mp;  // delta = 1
  const Profile pert = perturbed_canonical_profile(mp, mp.delta, 3.0);
  GridPtr grid = build_grid(-4, 19, 12);
  const double tail = mp.tail_exponent();
  Field phi = Field::sample(grid, [&](double x) {
    return x <= 1.0 ? 2.5 * std::pow(x, -1.5) : std::pow(x, -tail);
  });
  const Field a1 = apply_A1(phi, pert);
  std::vector<double> xs, ys;
  for (int i = 0; i < grid->size(); ++i) {
    const double x = grid->node(i);
    if (x < 32.0 || x > 512.0) continue;
    xs.push_back(x);
    ys.push_back(a1.values[i]);
  }
  const PowerFit fit = fit_loglog(xs, ys);
  const double want = -(2.0 + mp.delta);
  const bool pass = std::abs(fit.exponent - want) <= 0.15;
  report(out, opt, 10, "A1 decay exponent at s = 2 + delta", pass,
         fmt("fitted %.3f, want %.1f +- 0.15", fit.exponent, want));
}

// ---- 11 to 13: solver surrogates ----------------------------------------------
struct SweepData {
  ContinuationReport base;
  ContinuationReport fine;
  double bracket_base = 0.0;
  double bracket_fine = 0.0;
  double mu_norm_base = 0.0;
  double mu_norm_fine = 0.0;
};

SweepData run_sweeps(const Profile& prof) {
  ModelParams mp;
  mp.T = 0.5;
  const std::vector<double> thetas{0.0, 0.25, 0.5, 0.75, 1.0};

  SweepData data;
  SolveConfig base;
  base.params = mp;
  base.grid = build_grid(-6, 6, 12);
  base.profile = &prof;
  FieldSeries mu = bump_family(base.grid, mp.T, 16);
  EvolveInfo info;
  evolve(base, mu, &info);
  base.dt = info.dt_used;
  data.base = continuation_sweep(base, thetas, mu);
  data.mu_norm_base = data.base.entries.front().mu_norm;

  SolveConfig fine;
  fine.params = mp;
  fine.grid = build_grid(-6, 6, 24);
  fine.profile = &prof;
  fine.dt = 0.5 * info.dt_used;
  FieldSeries muf = bump_family(fine.grid, mp.T, 32);
  data.fine = continuation_sweep(fine, thetas, muf);
  data.mu_norm_fine = data.fine.entries.front().mu_norm;

  // bracket ratios of the theta = 1 solutions
  SolveConfig b1 = base;
  b1.params.theta = 1.0;
  FieldSeries h1 = evolve(b1, mu);
  data.bracket_base = bracket_seminorm(h1, mp.sigma, mp.lambda, mp.T) / data.mu_norm_base;
  SolveConfig f1 = fine;
  f1.params.theta = 1.0;
  FieldSeries h1f = evolve(f1, muf);
  data.bracket_fine = bracket_seminorm(h1f, mp.sigma, mp.lambda, mp.T) / data.mu_norm_fine;
  return data;
}

void criteria_wellposedness_surrogates(std::vector<CriterionResult>& out, const AcceptanceOptions& opt,
                                 const Profile& prof) {
  const SweepData data = run_sweeps(prof);

  double worst_ratio_change = 0.0;
  bool bounded = true;
  for (std::size_t i = 0; i < data.base.entries.size(); ++i) {
    const double rb = data.base.entries[i].ratio;
    const double rf = data.fine.entries[i].ratio;
    if (!(rb > 0.0 && rb < 1e6)) bounded = false;
    const double change = std::max(rb / rf, rf / rb);
    worst_ratio_change = std::max(worst_ratio_change, change);
  }
  report(out, opt, 11, "|||h||| / ||mu||_Y bounded and refinement-stable",
         bounded && worst_ratio_change <= 1.2,
         fmt("worst refinement change x%.3f (tol x1.2), max ratio %.3f", worst_ratio_change,
             data.base.max_ratio));

  const double bchange =
      std::max(data.bracket_base / data.bracket_fine, data.bracket_fine / data.bracket_base);
  report(out, opt, 12, "[h] / ||mu||_Y finite and refinement-stable",
         std::isfinite(data.bracket_base) && data.bracket_base > 0.0 && bchange <= 1.5,
         fmt("bracket ratio %.3f, refinement change x%.3f (tol x1.5)", data.bracket_base,
             bchange));
}

void criterion_contraction(std::vector<CriterionResult>& out, const AcceptanceOptions& opt,
                           const Profile& prof) {
  ModelParams mp;
  mp.T = 0.25;
  SolveConfig base;
  base.params = mp;
  base.grid = build_grid(-5, 5, 12);
  base.profile = &prof;
  FieldSeries mu = bump_family(base.grid, mp.T, 12);

  std::vector<double> gaps{0.1, 0.2, 0.3};
  std::vector<double> factors;
  for (double d : gaps) {
    FixedPointReport rep = fixed_point_iterate(base, 0.5 + d, 0.5, 0.1, mu, nullptr, 3);
    factors.push_back(rep.distances[1] / rep.distances[0]);
  }
  const bool increasing = factors[0] < factors[1] && factors[1] < factors[2];
  report(out, opt, 13, "contraction factor shrinks with theta - theta_n", increasing,
         fmt("factors %.4f < %.4f < %.4f", factors[0], factors[1], factors[2]));
}

// ---- 14: determinism -----------------------------------------------------------
bool files_identical(const fs::path& a, const fs::path& b) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  if (!fa || !fb) return false;
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  return sa.str() == sb.str();
}

void criterion_determinism(std::vector<CriterionResult>& out, const AcceptanceOptions& opt) {
  const fs::path root =
      opt.artifacts_dir.empty() ? fs::temp_directory_path() / "coag-verify" : fs::path(opt.artifacts_dir);
  const fs::path a = root / "run-a";
  const fs::path b = root / "run-b";
  fs::create_directories(a);
  fs::create_directories(b);
  emit_artifact_set(a.string(), 1);
  emit_artifact_set(b.string(), opt.workers > 1 ? opt.workers : 2);

  bool same = true;
  int count = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    ++count;
    if (!files_identical(entry.path(), b / entry.path().filename())) same = false;
  }
  report(out, opt, 14, "artifacts are byte-identical across reruns", same && count >= 3,
         fmt("%g files compared (worker counts 1 vs 2)", static_cast<double>(count)));
}

}  // namespace

void emit_artifact_set(const std::string& dir, int workers) {
  ModelParams mp;
  const Profile prof = canonical_profile(mp);
  const fs::path root(dir);
  fs::create_directories(root);

  // symbol table
  Vector xi(129);
  for (int j = 0; j < 129; ++j) xi[j] = -16.0 + 0.25 * j;
  const SymbolGrid sg = build_symbol_grid(xi, 0.5, 8.0, prof, workers);
  write_symbol_csv(sg, (root / "symbol.csv").string());

  // small solver run with manifest, snapshots and norm report
  SolveConfig cfg;
  cfg.params = mp;
  cfg.params.theta = 0.5;
  cfg.params.eps = 0.1;
  cfg.params.T = 0.25;
  cfg.grid = build_grid(-5, 5, 12);
  cfg.profile = &prof;
  cfg.dt = 1.0 / 128.0;
  FieldSeries mu = bump_family(cfg.grid, cfg.params.T, 8);
  EvolveInfo info;
  FieldSeries h = evolve(cfg, mu, &info);
  write_series_csv(h, (root / "series.csv").string());

  const NormReport rep = build_norm_report(h, mp.sigma, 1.5, mp.tail_exponent(), mp.lambda,
                                           cfg.params.T);
  write_block_csv(rep, (root / "norms.csv").string());

  Json manifest;
  manifest["subcommand"] = "artifact-set";
  manifest["params"] = params_json(cfg.params);
  manifest["grid"] = grid_json(*cfg.grid);
  manifest["dt"] = format_double(info.dt_used);
  manifest["scheme"] = "imex-integrating-factor";
  manifest["norms"] = norm_report_json(rep);
  write_json(manifest, (root / "manifest.json").string());
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
  std::vector<CriterionResult> out;
  ModelParams mp;
  const Profile prof = canonical_profile(mp);

  criterion_half_derivative(out, opt);
  criterion_wtilde_limits(out, opt, prof);
  criterion_symbol_invariants(out, opt, prof);
  criterion_multiplier_equivalence(out, opt, prof);
  criterion_leps_rate(out, opt);
  criterion_symmetrization(out, opt);
  criterion_fundsol(out, opt, prof);
  criterion_duhamel(out, opt, prof);
  criterion_a1_decay(out, opt);
  criteria_wellposedness_surrogates(out, opt, prof);
  criterion_contraction(out, opt, prof);
  criterion_determinism(out, opt);
  return out;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const CriterionResult& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace coag
