#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <random>

#include "coag/norms.hpp"
#include "coag/quadrature.hpp"

using namespace coag;

namespace {

ModelParams default_params() { return ModelParams{}; }

FieldSeries constant_series(GridPtr g, const Vector& v, double T, int nt = 8) {
  FieldSeries fs(g);
  for (int k = 0; k <= nt; ++k) {
    fs.times.push_back(T * k / nt);
    fs.values.push_back(v);
  }
  return fs;
}

}  // namespace

TEST_CASE("triple norm values") {
  GridPtr g = build_grid(-10, 10, 16);
  ModelParams mp = default_params();
  const double p = mp.tail_exponent();

  Field ref = Field::sample(
      g, [&](double x) { return std::min(std::pow(x, -1.5), std::pow(x, -p)); });
  CHECK(norm_triple_qp(ref, 1.5, p) == doctest::Approx(2.0).epsilon(1e-12));

  Field zero(g);
  CHECK(norm_triple_qp(zero, 1.5, p) == 0.0);

  // canonical profile with (q,p) = (0, (3+lambda)/2): the two sups approach
  // f0's maximum and the tail amplitude A
  Profile prof = canonical_profile(mp);
  Field f0 = Field::sample(g, [&](double x) { return prof.f0(x); });
  CHECK(norm_triple_qp(f0, 0.0, p) == doctest::Approx(2.0 * mp.A).epsilon(1e-4));
}

TEST_CASE("dyadic block norms") {
  GridPtr g = build_grid(-6, 6, 16);
  ModelParams mp = default_params();
  const double T = 1.0;

  // constant field, full window: N_inf equals the constant
  const double c = 0.7;
  FieldSeries fs = constant_series(g, Vector::Constant(g->size(), c), T, 16);
  BlockNorms b = dyadic_norms(fs, mp.sigma, 0.0, 4.0, mp.lambda, T);
  CHECK(b.N_inf == doctest::Approx(c).epsilon(1e-12));

  FieldSeries zs = constant_series(g, Vector::Zero(g->size()), T);
  BlockNorms zb = dyadic_norms(zs, mp.sigma, 0.0, 4.0, mp.lambda, T);
  CHECK(zb.N_inf == 0.0);
  CHECK(zb.N_2sigma == 0.0);
  CHECK(zb.M_inf == 0.0);
  CHECK(zb.M_2sigma == 0.0);

  CHECK_THROWS(dyadic_norms(fs, mp.sigma, 2.0 * T, 4.0, mp.lambda, T));

  // single windowed mode: N_{2,sigma} scales like |k0|^sigma
  GridPtr gf = build_grid(-4, 4, 48);
  std::vector<double> lk, ln;
  for (double k0 : {6.0, 12.0, 24.0, 48.0}) {
    Field mode = Field::sample(gf, [&](double x) { return std::cos(k0 * x); });
    FieldSeries ms = constant_series(gf, mode.values, T, 4);
    BlockNorms mb = dyadic_norms(ms, mp.sigma, 0.0, 1.0, mp.lambda, T);
    lk.push_back(std::log(k0));
    ln.push_back(std::log(mb.N_2sigma));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(lk.size());
  for (int i = 0; i < n; ++i) {
    sx += lk[i];
    sy += ln[i];
    sxx += lk[i] * lk[i];
    sxy += lk[i] * ln[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope == doctest::Approx(mp.sigma).epsilon(0.07));  // sigma +- 0.05
}

TEST_CASE("fractional Sobolev surrogate") {
  GridPtr g = build_grid(-4, 4, 24);
  ModelParams mp = default_params();

  Field zero(g);
  CHECK(frac_sobolev(zero, mp.sigma, 1.0, 2.0) == 0.0);

  // sigma = 0 reproduces the L2 norm of the windowed field
  Field f = Field::sample(g, [](double x) { return std::exp(-(x - 1.5) * (x - 1.5)); });
  const double direct = std::sqrt(adaptive_quadrature(
      [&](double x) {
        const double w = 1.0;
        const SmoothCutoff win(1.0 - 0.5 * w, 1.0, 2.0, 2.0 + 0.5 * w);
        const double v = win(x) * std::exp(-(x - 1.5) * (x - 1.5));
        return v * v;
      },
      0.4, 2.7, 1e-13));
  CHECK(frac_sobolev(f, 0.0, 1.0, 2.0, 1 << 12) == doctest::Approx(direct).epsilon(1e-8));

  // windowed mode of large k0: value / (|k0|^sigma ||window * mode||_2) -> 1
  const double k0 = 40.0;
  GridPtr gf = build_grid(-4, 4, 64);
  Field mode = Field::sample(gf, [&](double x) { return std::cos(k0 * x); });
  const double val = frac_sobolev(mode, mp.sigma, 1.0, 2.0, 1 << 12);
  const double l2 = frac_sobolev(mode, 0.0, 1.0, 2.0, 1 << 12);
  CHECK(val / (std::pow(k0, mp.sigma) * l2) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("bracket seminorm") {
  GridPtr g = build_grid(-6, 6, 16);
  ModelParams mp = default_params();
  const double T = 1.0;
  const double p = mp.tail_exponent();

  FieldSeries zs = constant_series(g, Vector::Zero(g->size()), T);
  CHECK(bracket_seminorm(zs, mp.sigma, mp.lambda, T) == 0.0);

  // time-independent power field: finite and stable under refinement
  Field pf = Field::sample(g, [&](double x) { return std::pow(x, -p); });
  FieldSeries fs = constant_series(g, pf.values, T, 8);
  const double v1 = bracket_seminorm(fs, mp.sigma, mp.lambda, T);
  GridPtr g2 = build_grid(-6, 6, 32);
  Field pf2 = Field::sample(g2, [&](double x) { return std::pow(x, -p); });
  FieldSeries fs2 = constant_series(g2, pf2.values, T, 16);
  const double v2 = bracket_seminorm(fs2, mp.sigma, mp.lambda, T);
  CHECK(v1 > 0.0);
  CHECK(std::abs(v1 - v2) < 0.1 * v2);

  // effectively band-limited field living at large x: every block that sees
  // it has window frequencies below its R, so min(|k|, R) = |k| there
  GridPtr gb = build_grid(-2, 6, 16);
  Field low = Field::sample(gb, [](double x) {
    const double u = (x - 24.0) / 6.0;
    return std::exp(-u * u);
  });
  FieldSeries ls = constant_series(gb, low.values, T, 6);
  const double wb = bracket_seminorm(ls, mp.sigma, mp.lambda, T, false);
  const double wu = bracket_seminorm(ls, mp.sigma, mp.lambda, T, true);
  CHECK(wb == doctest::Approx(wu).epsilon(1e-3));
}

TEST_CASE("norms are absolutely 1-homogeneous on random series") {
  GridPtr g = build_grid(-5, 5, 12);
  ModelParams mp = default_params();
  const double T = 0.5;
  const double p = mp.tail_exponent();
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);

  for (int trial = 0; trial < 3; ++trial) {
    FieldSeries fs(g);
    const double a = coef(rng), b = coef(rng);
    for (int k = 0; k <= 6; ++k) {
      const double t = T * k / 6;
      Field f = Field::sample(g, [=](double x) {
        const double u = std::log(x);
        return std::exp(-0.3 * u * u) * (a * std::cos(u + t) + b);
      });
      fs.times.push_back(t);
      fs.values.push_back(f.values);
    }
    const double s = -1.0 - std::abs(coef(rng));
    FieldSeries scaled(g);
    for (int k = 0; k < fs.steps(); ++k) {
      scaled.times.push_back(fs.times[k]);
      scaled.values.push_back(s * fs.values[k]);
    }
    const double mag = std::abs(s);
    CHECK(norm_X(scaled, 1.5, p, mp.lambda, T) ==
          doctest::Approx(mag * norm_X(fs, 1.5, p, mp.lambda, T)).epsilon(1e-11));
    CHECK(norm_Y(scaled, mp.sigma, 1.5, p, mp.lambda, T) ==
          doctest::Approx(mag * norm_Y(fs, mp.sigma, 1.5, p, mp.lambda, T)).epsilon(1e-11));
    CHECK(norm_E(scaled, mp.sigma, mp.lambda, T) ==
          doctest::Approx(mag * norm_E(fs, mp.sigma, mp.lambda, T)).epsilon(1e-11));
    CHECK(bracket_seminorm(scaled, mp.sigma, mp.lambda, T) ==
          doctest::Approx(mag * bracket_seminorm(fs, mp.sigma, mp.lambda, T)).epsilon(1e-11));
    // sup-part monotone under pointwise growth of |f|
    CHECK(norm_triple_qp(Field(g, scaled.values[0]), 1.5, p) >=
          norm_triple_qp(Field(g, fs.values[0]), 1.5, p));
  }
}

TEST_CASE("norm_E and the report aggregates") {
  GridPtr g = build_grid(-6, 6, 16);
  ModelParams mp = default_params();
  const double T = 0.5;
  const double p = mp.tail_exponent();

  FieldSeries zs = constant_series(g, Vector::Zero(g->size()), T);
  CHECK(norm_E(zs, mp.sigma, mp.lambda, T) == 0.0);

  Field ref = Field::sample(
      g, [&](double x) { return std::min(std::pow(x, -1.5), std::pow(x, -p)); });
  FieldSeries fs = constant_series(g, ref.values, T, 8);
  const double e1 = norm_E(fs, mp.sigma, mp.lambda, T);
  const double ypart = norm_Y(fs, mp.sigma, 1.5, p, mp.lambda, T);
  CHECK(e1 - ypart == doctest::Approx(2.0).epsilon(1e-10));  // sup-part is exactly 2

  // absolute 1-homogeneity
  FieldSeries fs2 = constant_series(g, (-2.5 * ref.values).eval(), T, 8);
  CHECK(norm_E(fs2, mp.sigma, mp.lambda, T) == doctest::Approx(2.5 * e1).epsilon(1e-12));
  CHECK(norm_X(fs2, 1.5, p, mp.lambda, T) ==
        doctest::Approx(2.5 * norm_X(fs, 1.5, p, mp.lambda, T)).epsilon(1e-12));

  // report aggregates are the suprema of the recorded blocks
  NormReport rep = build_norm_report(fs, mp.sigma, 1.5, p, mp.lambda, T);
  double xin = 0.0, xout = 0.0, yin = 0.0, yout = 0.0;
  for (const BlockNorms& b : rep.blocks) {
    CHECK(b.N_inf >= 0.0);
    CHECK(b.M_inf >= 0.0);
    if (b.R < 1.0) {
      xin = std::max(xin, std::pow(b.R, rep.q) * b.M_inf);
      yin = std::max(yin, std::pow(b.R, rep.q) * b.M_2sigma);
    } else {
      xout = std::max(xout, std::pow(b.R, rep.p) * b.N_inf);
      yout = std::max(yout, std::pow(b.R, rep.p) * b.N_2sigma);
    }
  }
  CHECK(rep.x_norm == doctest::Approx(xin + xout).epsilon(1e-12));
  CHECK(rep.y_norm == doctest::Approx(yin + yout).epsilon(1e-12));
  CHECK(rep.bracket >= 0.0);
  CHECK(rep.sup_triple_qp == doctest::Approx(2.0).epsilon(1e-12));
}
