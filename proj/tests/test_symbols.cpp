#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <random>

#include "coag/symbols.hpp"

using namespace coag;

namespace {

ModelParams default_params() { return ModelParams{}; }

}  // namespace

TEST_CASE("half-derivative anchor: quadrature engine vs closed form") {
  for (double z : {1.0, 4.0, 9.0}) {
    const Complex num = half_derivative_symbol_quadrature(z);
    const Complex ref = half_derivative_symbol(z);
    CHECK(std::abs(num - ref) < 1e-6);
    // sign symmetry
    CHECK(std::abs(half_derivative_symbol_quadrature(-z) - std::conj(ref)) < 1e-6);
  }
  CHECK(std::abs(half_derivative_symbol_quadrature(0.0)) == 0.0);
}

TEST_CASE("wtilde: contour path agrees with direct oscillatory panels") {
  const Profile p = canonical_profile(default_params());
  for (double z : {0.3, 2.0, 11.0, 35.0, 44.0, 70.0}) {
    const Complex a = wtilde(z, p);
    const Complex b = wtilde_direct(z, p);
    CHECK(std::abs(a - b) < 2e-7);
  }
}

TEST_CASE("wtilde limits") {
  const Profile p = canonical_profile(default_params());

  CHECK(std::abs(wtilde(0.0, p)) == 0.0);

  // z -> 0: wtilde(z) / ((1+i sign z)|z|^{1/2}) -> -sqrt(2 pi),
  // each component within 2% of the limit at z = 1e-3
  const double z0 = 1e-3;
  const Complex ratio = wtilde(z0, p) / (Complex(1.0, 1.0) * std::sqrt(z0));
  const double target = -std::sqrt(2.0 * M_PI);
  CHECK(std::abs(ratio.real() - target) < 0.02 * std::abs(target));
  CHECK(std::abs(ratio.imag()) < 0.02 * std::abs(target));

  // z -> inf: wtilde -> -int y^{lambda/2} f0 (independent quadrature oracle)
  const double moment = p.moment_inf();
  CHECK(std::abs(wtilde(1e3, p) - Complex(-moment, 0.0)) < 0.02 * moment);

  // Hermitian symmetry via independent evaluations
  const Complex wp = wtilde_direct(3.0, p);
  const Complex wm = wtilde_direct(-3.0, p);
  CHECK(std::abs(wm - std::conj(wp)) < 1e-9);
}

TEST_CASE("wtilde derivative decay") {
  const Profile p = canonical_profile(default_params());
  const double gamma = p.params().gamma;
  double sup = 0.0;
  for (double xi : {1.0, 2.0, 5.0, 12.0, 30.0, 80.0, 200.0}) {
    const double h = 1e-3 * xi;
    const Complex d = (wtilde(xi + h, p) - wtilde(xi - h, p)) / (2.0 * h);
    sup = std::max(sup, std::abs(d) * (1.0 + std::pow(xi, 1.0 + gamma)));
  }
  CHECK(sup < 50.0);
}

TEST_CASE("symbol W values and limits") {
  const Profile p = canonical_profile(default_params());

  // eps=1 closed form, any R
  const Complex w11 = symbol_W(1.0, 1.0, 1.0, p);
  CHECK(w11.real() == doctest::Approx(-2.5066282746).epsilon(1e-9));
  CHECK(w11.imag() == doctest::Approx(-2.5066282746).epsilon(1e-9));
  CHECK(std::abs(symbol_W(1.0, 1.0, 64.0, p) - w11) < 1e-12);

  CHECK(std::abs(symbol_W(0.0, 0.5, 8.0, p)) == 0.0);

  // R -> inf limit of W(2, 1/2, R): -sqrt(2 pi)(1+i) sqrt(2), error decreasing
  const Complex lim = -std::sqrt(2.0 * M_PI) * Complex(1.0, 1.0) * std::sqrt(2.0);
  double prev = 1e9;
  for (double R : {4.0, 16.0, 64.0, 256.0}) {
    const double err = std::abs(symbol_W(2.0, 0.5, R, p) - lim);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 0.05 * std::abs(lim));
}

TEST_CASE("half-derivative multiplier") {
  CHECK(lambda_symbol(0.0) == 0.0);
  CHECK(lambda_symbol(4.0) == doctest::Approx(-2.0 * std::sqrt(2.0 * M_PI)).epsilon(1e-14));
  CHECK(lambda_symbol(-4.0) == lambda_symbol(4.0));
}

TEST_CASE("symbol grid invariants and csv") {
  const Profile p = canonical_profile(default_params());
  Vector xi(9);
  xi << -16.0, -4.0, -1.0, -0.25, 0.0, 0.25, 1.0, 4.0, 16.0;
  const SymbolGrid g = build_symbol_grid(xi, 0.5, 8.0, p);
  CHECK(g.invariant_violations() == 0);
  CHECK(g.method == "quadrature");

  // worker count does not change the result
  const SymbolGrid g2 = build_symbol_grid(xi, 0.5, 8.0, p, 3);
  for (int i = 0; i < g.size(); ++i) CHECK(g.W[i] == g2.W[i]);

  const SymbolCheckReport rep = check_symbol_inequalities(g);
  CHECK(rep.two_point_violations == 0);
  CHECK(rep.max_two_point_ratio > 0.0);
  CHECK(rep.fitted_decay_constant > 0.0);
  CHECK(rep.fitted_decay_constant < 1.0);  // e^{-2u} u is at most (2e)^{-1} per unit frequency
}

TEST_CASE("two-point inequality reduces cleanly in the pure case") {
  const Profile p = canonical_profile(default_params());
  Vector xi(8);
  xi << 1.0, 2.0, 3.0, 5.0, 9.0, 17.0, 33.0, 65.0;
  const SymbolGrid g = build_symbol_grid(xi, 1.0, 1.0, p);
  const SymbolCheckReport rep = check_symbol_inequalities(g);
  CHECK(rep.two_point_violations == 0);

  // xi == z gives 0 on both sides
  CHECK(std::abs(symbol_W(3.0, 1.0, 1.0, p) - symbol_W(3.0, 1.0, 1.0, p)) == 0.0);
}

TEST_CASE("symbol invariants hold over random frequency samples") {
  const Profile p = canonical_profile(default_params());
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> logxi(-3.0, 7.0);
  std::uniform_real_distribution<double> pick(0.0, 1.0);
  for (int trial = 0; trial < 24; ++trial) {
    const double xi = std::exp2(logxi(rng));
    const double eps = pick(rng);
    const double R = 1.0 + 63.0 * pick(rng);
    const Complex w = symbol_W(xi, eps, R, p);
    CHECK(w.real() < 0.0);
    CHECK(std::abs(symbol_W(-xi, eps, R, p) - std::conj(w)) < 1e-12 * (1.0 + std::abs(w)));
  }
}

TEST_CASE("P_eps symbol") {
  CHECK(std::abs(symbol_P_eps(1.0, 0.0, 0.5)) == 0.0);

  // eps = 0 closed form
  const Complex p0 = symbol_P_eps(2.0, 3.0, 0.0);
  CHECK(std::abs(p0 - half_derivative_symbol(3.0)) < 1e-6);

  // |P_eps(x,k)| <= C |k|^{1/2} over a box; fitted C near the pure-case constant
  double fitted = 0.0;
  for (double x : {0.5, 1.0, 4.0})
    for (double k : {0.5, 2.0, 8.0, 32.0})
      for (double eps : {0.05, 0.25, 1.0}) {
        const double r = std::abs(symbol_P_eps(x, k, eps)) / std::sqrt(k);
        fitted = std::max(fitted, r);
        CHECK(r < 2.0 * std::sqrt(2.0 * M_PI));
      }
  CHECK(fitted > 1.0);

  // eps -> 0 recovers the closed form
  const Complex pe = symbol_P_eps(1.0, 2.0, 1e-4);
  CHECK(std::abs(pe - half_derivative_symbol(2.0)) < 0.02 * std::abs(half_derivative_symbol(2.0)));
}
