// Experiment driver: every acceptance check and artifact is reachable from
// here. Exit codes: 0 pass, 1 run/acceptance failure, 2 usage error.
#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "coag/acceptance.hpp"
#include "coag/manifest.hpp"
#include "coag/operators.hpp"
#include "coag/quadrature.hpp"
#include "coag/symbols.hpp"

namespace fs = std::filesystem;
using namespace coag;

namespace {

struct KeyValues {
  std::map<std::string, std::string> kv;

  double get(const std::string& key, double fallback) const {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : std::stod(it->second);
  }
  std::string get(const std::string& key, const std::string& fallback) const {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  }
};

/// Parses `key=value` extras against an allowlist. Unknown keys are a usage
/// error and nothing is written.
bool parse_extras(const std::vector<std::string>& extras,
                  const std::vector<std::string>& allowed, KeyValues& out, std::string& err) {
  for (const std::string& raw : extras) {
    const auto eq = raw.find('=');
    if (eq == std::string::npos) {
      err = "expected key=value, got '" + raw + "'";
      return false;
    }
    const std::string key = raw.substr(0, eq);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      err = "unknown key '" + key + "'";
      return false;
    }
    out.kv[key] = raw.substr(eq + 1);
  }
  return true;
}

ModelParams params_from(const KeyValues& kv) {
  ModelParams p;
  p.lambda = kv.get("lambda", p.lambda);
  p.sigma = kv.get("sigma", p.sigma);
  p.delta = kv.get("delta", p.delta);
  p.gamma = kv.get("gamma", p.gamma);
  p.A = kv.get("A", p.A);
  p.B = kv.get("B", p.B);
  p.T = kv.get("T", p.T);
  p.theta = kv.get("theta", p.theta);
  p.eps = kv.get("eps", p.eps);
  return p;
}

FieldSeries default_source(GridPtr grid, double T, int nt = 16) {
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

Json base_manifest(const std::string& sub, const ModelParams& p, const GradedGrid& g) {
  Json j;
  j["subcommand"] = sub;
  j["params"] = params_json(p);
  j["grid"] = grid_json(g);
  return j;
}

int run_symbol(const KeyValues& kv, const std::string& out_dir, int workers) {
  const ModelParams p = params_from(kv);
  const Profile prof = canonical_profile(p);
  const double eps = kv.get("eps", 1.0);
  const double R = kv.get("R", 1.0);
  const double xi_max = kv.get("xi_max", 16.0);
  const int n = static_cast<int>(kv.get("n", 129.0));

  Vector xi(n);
  for (int j = 0; j < n; ++j) xi[j] = -xi_max + 2.0 * xi_max * j / (n - 1);
  const SymbolGrid sg = build_symbol_grid(xi, eps, R, prof, workers);
  write_symbol_csv(sg, out_dir + "/symbol.csv");

  const SymbolCheckReport rep = check_symbol_inequalities(sg);
  Json j;
  j["subcommand"] = "symbol";
  j["params"] = params_json(p);
  j["eps"] = format_double(eps);
  j["R"] = format_double(R);
  j["xi_max"] = format_double(xi_max);
  j["n"] = n;
  j["method"] = sg.method;
  j["invariant_violations"] = sg.invariant_violations();
  j["max_two_point_ratio"] = format_double(rep.max_two_point_ratio);
  j["two_point_violations"] = rep.two_point_violations;
  j["fitted_decay_constant"] = format_double(rep.fitted_decay_constant);
  write_json(j, out_dir + "/manifest.json");
  return sg.invariant_violations() == 0 ? 0 : 1;
}

int run_operators(const KeyValues& kv, const std::string& out_dir) {
  const ModelParams p = params_from(kv);
  const Profile prof = canonical_profile(p);
  GridPtr grid = build_grid(static_cast<int>(kv.get("jmin", -6.0)),
                            static_cast<int>(kv.get("jmax", 6.0)),
                            static_cast<int>(kv.get("P", 16.0)));

  auto bump = [](double x) {
    if (x <= 1.0 || x >= 2.0) return 0.0;
    const double a = x - 1.0, b = 2.0 - x;
    return 256.0 * a * a * a * a * b * b * b * b;
  };
  Field g = Field::sample(grid, bump);

  // oracle cross-checks: grid operators against adaptive quadrature
  std::ofstream csv(out_dir + "/oracle_checks.csv");
  csv << "check,value,reference,rel_err\n";
  auto emit = [&](const std::string& name, double value, double reference) {
    const double rel = std::abs(value - reference) / std::max(1e-300, std::abs(reference));
    csv << name << ',' << format_double(value) << ',' << format_double(reference) << ','
        << format_double(rel) << '\n';
    return rel;
  };

  int i8 = 0, i4 = 0;
  for (int i = 0; i < grid->size(); ++i) {
    if (std::abs(grid->node(i) - 8.0) < std::abs(grid->node(i8) - 8.0)) i8 = i;
    if (std::abs(grid->node(i) - 4.0) < std::abs(grid->node(i4) - 4.0)) i4 = i;
  }
  double worst = 0.0;
  {
    const double x = grid->node(i8);
    const double oracle = adaptive_quadrature(
        [&](double y) {
          return (std::pow(x - y, -1.5) - std::pow(x, -1.5)) * std::pow(y, 0.75) * bump(y);
        },
        1.0, 2.0, 1e-14);
    worst = std::max(worst, emit("L_bump_at_8", apply_L(g, p).values[i8], oracle));
  }
  {
    const double x = grid->node(i4);
    const double conv = adaptive_quadrature(
        [&](double y) {
          return std::pow(x - y, 0.75) * prof.f0(x - y) * std::pow(y, 0.75) * bump(y);
        },
        1.0, 2.0, 1e-14);
    const double mom = adaptive_quadrature(
        [&](double y) { return std::pow(y, 0.75) * bump(y); }, 1.0, 2.0, 1e-14);
    const double oracle = conv - std::pow(x, 0.75) * prof.f0(x) * mom;
    worst = std::max(worst, emit("calL_bump_at_4", apply_cal_L(g, prof).values[i4], oracle));
  }
  emit("H_at_2", kernel_H(prof, 2.0),
       std::pow(2.0, 0.75) * std::pow(5.0, -9.0 / 8.0) - std::pow(2.0, -1.5));

  Json j = base_manifest("operators", p, *grid);
  j["worst_rel_err"] = format_double(worst);
  write_json(j, out_dir + "/manifest.json");
  return worst < 1e-5 ? 0 : 1;
}

int run_evolve(const KeyValues& kv, const std::string& out_dir) {
  SolveConfig cfg;
  cfg.params = params_from(kv);
  cfg.grid = build_grid(static_cast<int>(kv.get("jmin", -6.0)),
                        static_cast<int>(kv.get("jmax", 6.0)),
                        static_cast<int>(kv.get("P", 12.0)));
  const Profile prof = canonical_profile(cfg.params);
  cfg.profile = &prof;
  cfg.dt = kv.get("dt", 0.0);
  const std::string scheme = kv.get("scheme", std::string("imex"));
  if (scheme != "imex" && scheme != "frozen") {
    std::fprintf(stderr, "error: scheme must be imex or frozen\n");
    return 2;
  }
  cfg.scheme = scheme == "imex" ? Scheme::ImexIntegratingFactor : Scheme::FrozenSymbolExponential;

  FieldSeries mu = default_source(cfg.grid, cfg.params.T);
  EvolveInfo info;
  FieldSeries h = evolve(cfg, mu, &info);
  write_series_csv(h, out_dir + "/series.csv");

  const NormReport rep = build_norm_report(h, cfg.params.sigma, 1.5,
                                           cfg.params.tail_exponent(), cfg.params.lambda,
                                           cfg.params.T);
  write_block_csv(rep, out_dir + "/norms.csv");

  Json j = base_manifest("evolve", cfg.params, *cfg.grid);
  j["scheme"] = scheme;
  j["dt"] = format_double(info.dt_used);
  j["stability_bound"] = format_double(info.stability_bound);
  j["norms"] = norm_report_json(rep);
  write_json(j, out_dir + "/manifest.json");
  return 0;
}

int run_fundsol(const KeyValues& kv, const std::string& out_dir) {
  FundSolConfig cfg;
  cfg.params = params_from(kv);
  cfg.grid = build_grid(static_cast<int>(kv.get("jmin", -12.0)),
                        static_cast<int>(kv.get("jmax", 8.0)),
                        static_cast<int>(kv.get("P", 32.0)));
  const Profile prof = canonical_profile(cfg.params);
  cfg.profile = &prof;
  const double x0 = kv.get("x0", 1.0);
  const double width = kv.get("width", 0.08);
  const double T = kv.get("T", 0.55);
  const double t_fit = kv.get("t_fit", 0.5);

  const FundSolResult r = compute_fundamental(x0, width, T, cfg);
  write_series_csv(r.g, out_dir + "/g.csv");
  const TailReport tails = check_tail_bounds(r, t_fit, cfg.params.delta, cfg.params.lambda);

  Json j = base_manifest("fundsol", cfg.params, *cfg.grid);
  j["x0"] = format_double(x0);
  j["width"] = format_double(width);
  j["t_fit"] = format_double(t_fit);
  j["under_resolved"] = r.under_resolved;
  j["small_x_fit"] = fit_json(tails.small_x);
  j["large_x_fit"] = fit_json(tails.large_x);
  j["interior_constant"] = format_double(tails.interior_constant);
  write_json(j, out_dir + "/report.json");
  return 0;
}

int run_norms(const KeyValues& kv, const std::string& out_dir) {
  const std::string input = kv.get("input", std::string());
  ModelParams p = params_from(kv);
  GridPtr grid;
  FieldSeries fs;
  if (input.empty()) {
    // built-in demo series so the subcommand is self-contained
    grid = build_grid(-6, 6, 12);
    Field f = Field::sample(grid, [&](double x) {
      return std::min(std::pow(x, -1.5), std::pow(x, -p.tail_exponent()));
    });
    fs = FieldSeries(grid);
    for (int k = 0; k <= 8; ++k) {
      fs.times.push_back(p.T * k / 8.0);
      fs.values.push_back(f.values);
    }
  } else {
    std::ifstream min(input + "/manifest.json");
    if (!min) {
      std::fprintf(stderr, "error: cannot read %s/manifest.json\n", input.c_str());
      return 1;
    }
    Json m = Json::parse(min);
    grid = build_grid(m["grid"]["jmin"].get<int>(), m["grid"]["jmax"].get<int>(),
                      m["grid"]["nodes_per_block"].get<int>());
    if (grid->checksum() != m["grid"]["checksum"].get<std::uint64_t>()) {
      std::fprintf(stderr, "error: grid checksum mismatch against manifest\n");
      return 1;
    }
    p.T = std::stod(m["params"]["T"].get<std::string>());
    p.lambda = std::stod(m["params"]["lambda"].get<std::string>());
    p.sigma = std::stod(m["params"]["sigma"].get<std::string>());
    fs = read_series_csv(grid, input + "/series.csv");
  }

  const NormReport rep =
      build_norm_report(fs, p.sigma, 1.5, p.tail_exponent(), p.lambda, p.T);
  write_block_csv(rep, out_dir + "/norms.csv");
  Json j = base_manifest("norms", p, *grid);
  j["input"] = input;
  j["norms"] = norm_report_json(rep);
  write_json(j, out_dir + "/normreport.json");
  return 0;
}

int run_continuation(const KeyValues& kv, const std::string& out_dir) {
  SolveConfig cfg;
  cfg.params = params_from(kv);
  cfg.grid = build_grid(static_cast<int>(kv.get("jmin", -6.0)),
                        static_cast<int>(kv.get("jmax", 6.0)),
                        static_cast<int>(kv.get("P", 12.0)));
  const Profile prof = canonical_profile(cfg.params);
  cfg.profile = &prof;

  std::vector<double> thetas;
  std::stringstream ss(kv.get("thetas", std::string("0,0.25,0.5,0.75,1")));
  std::string item;
  while (std::getline(ss, item, ',')) thetas.push_back(std::stod(item));

  FieldSeries mu = default_source(cfg.grid, cfg.params.T);
  const ContinuationReport rep = continuation_sweep(cfg, thetas, mu);

  std::ofstream csv(out_dir + "/continuation.csv");
  csv << "theta,triple_norm,mu_norm,ratio\n";
  for (const ContinuationEntry& e : rep.entries)
    csv << format_double(e.theta) << ',' << format_double(e.triple_norm) << ','
        << format_double(e.mu_norm) << ',' << format_double(e.ratio) << '\n';

  Json j = base_manifest("continuation", cfg.params, *cfg.grid);
  j["uniform"] = rep.uniform;
  j["min_ratio"] = format_double(rep.min_ratio);
  j["max_ratio"] = format_double(rep.max_ratio);
  write_json(j, out_dir + "/manifest.json");
  return rep.uniform ? 0 : 1;
}

int run_verify(const std::string& out_dir, int workers) {
  AcceptanceOptions opt;
  opt.workers = workers;
  opt.artifacts_dir = out_dir + "/determinism";
  const auto results = run_acceptance(opt);

  Json j;
  j["subcommand"] = "verify";
  Json list = Json::array();
  Json failures = Json::array();
  for (const auto& r : results) {
    Json e;
    e["id"] = r.id;
    e["name"] = r.name;
    e["pass"] = r.pass;
    e["detail"] = r.detail;
    list.push_back(e);
    if (!r.pass) failures.push_back(e);
  }
  j["criteria"] = list;
  j["failures"] = failures;
  write_json(j, out_dir + "/verify.json");
  return all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"linearized coagulation toolkit"};
  app.require_subcommand(1);
  std::string out_dir;
  int workers = 1;

  std::map<std::string, std::vector<std::string>> allowed{
      {"symbol", {"eps", "R", "xi_max", "n", "lambda", "sigma", "A", "B", "delta", "gamma"}},
      {"operators", {"jmin", "jmax", "P", "lambda", "sigma", "A", "B", "delta", "gamma"}},
      {"evolve",
       {"theta", "eps", "T", "dt", "scheme", "jmin", "jmax", "P", "lambda", "sigma", "A", "B",
        "delta", "gamma"}},
      {"fundsol",
       {"x0", "width", "T", "t_fit", "jmin", "jmax", "P", "lambda", "sigma", "A", "B", "delta",
        "gamma"}},
      {"norms", {"input", "T", "lambda", "sigma", "A", "B", "delta", "gamma"}},
      {"continuation",
       {"thetas", "eps", "T", "jmin", "jmax", "P", "lambda", "sigma", "A", "B", "delta",
        "gamma"}},
      {"verify", {}},
  };
  for (auto& [name, keys] : allowed) {
    CLI::App* sub = app.add_subcommand(name);
    sub->allow_extras();
    sub->add_option("--out", out_dir, "output directory (default coag-out/<subcommand>)");
    sub->add_option("--workers", workers, "worker threads for parallel subcommands")
        ->check(CLI::PositiveNumber);
  }

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();

  KeyValues kv;
  std::string err;
  if (!parse_extras(sub->remaining(), allowed[name], kv, err)) {
    std::fprintf(stderr, "error: %s\n", err.c_str());
    return 2;
  }

  if (out_dir.empty()) out_dir = "coag-out/" + name;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    std::fprintf(stderr, "error: cannot create %s\n", out_dir.c_str());
    return 2;
  }

  try {
    int rc = 2;
    if (name == "symbol") rc = run_symbol(kv, out_dir, workers);
    if (name == "operators") rc = run_operators(kv, out_dir);
    if (name == "evolve") rc = run_evolve(kv, out_dir);
    if (name == "fundsol") rc = run_fundsol(kv, out_dir);
    if (name == "norms") rc = run_norms(kv, out_dir);
    if (name == "continuation") rc = run_continuation(kv, out_dir);
    if (name == "verify") rc = run_verify(out_dir, workers);
    if (rc == 0) std::printf("artifacts written to %s\n", out_dir.c_str());
    return rc;
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
}
