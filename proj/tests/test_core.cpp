#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "coag/cutoff.hpp"
#include "coag/field.hpp"
#include "coag/grid.hpp"
#include "coag/profile.hpp"
#include "coag/quadrature.hpp"

using namespace coag;

TEST_CASE("gauss rule integrates polynomials exactly") {
  const GaussRule r = gauss_legendre(8);
  auto f = [](double x) { return 3.0 * x * x + x + 1.0; };
  CHECK(gauss_panel(f, -1.0, 2.0, r) == doctest::Approx(9.0 + 1.5 + 3.0).epsilon(1e-14));
}

TEST_CASE("adaptive quadrature and semi-infinite tails") {
  auto f = [](double x) { return std::exp(-x * x); };
  CHECK(adaptive_quadrature(f, -8.0, 8.0, 1e-13) ==
        doctest::Approx(std::sqrt(M_PI)).epsilon(1e-11));
  auto g = [](double y) { return std::pow(y, -1.5); };
  CHECK(integrate_to_infinity(g, 4.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("cutoff plateau, support and smoothness") {
  const SmoothCutoff chi = make_chi(8.0);
  CHECK(chi(8.0) == 1.0);
  CHECK(chi(5.9) == 0.0);
  CHECK(chi(7.5) == 1.0);  // plateau is exact
  CHECK(chi(10.5) == 0.0);

  const SmoothCutoff eta = make_eta();
  CHECK(eta(1.0) == 1.0);
  CHECK(eta(0.1) == 0.0);
  CHECK(eta(5.0) == 0.0);

  // midpoint of any plateau is exactly 1
  const SmoothCutoff c = make_cutoff(0.0, 1.0, 3.0, 4.0);
  CHECK(c(2.0) == 1.0);

  // values in [0,1]; finite-difference derivatives up to order 4 stay bounded
  // and vanish outside (a,d)
  const double h = 1e-2;
  for (double x = -1.0; x <= 5.0; x += 0.01) {
    CHECK(c(x) >= 0.0);
    CHECK(c(x) <= 1.0);
    double d4 = (c(x + 2 * h) - 4 * c(x + h) + 6 * c(x) - 4 * c(x - h) + c(x - 2 * h)) /
                (h * h * h * h);
    CHECK(std::abs(d4) < 1e5);
    if (x < -0.05 || x > 4.05) {
      double d1 = (c(x + h) - c(x - h)) / (2 * h);
      CHECK(d1 == 0.0);
    }
  }
  // monotone on the ramps
  for (double x = 0.01; x < 0.99; x += 0.01) CHECK(c(x + 0.01) >= c(x));
  for (double x = 3.01; x < 3.99; x += 0.01) CHECK(c(x + 0.01) <= c(x));

  CHECK_THROWS(make_cutoff(1.0, 0.5, 2.0, 3.0));
}

TEST_CASE("graded grid: counts, exactness, interpolation") {
  GridPtr g = build_grid(-10, 10, 16);
  CHECK(g->block_count() == 20);
  CHECK(g->size() == 320);

  // strictly increasing, P nodes per block, positive weights
  for (int i = 1; i < g->size(); ++i) CHECK(g->node(i) > g->node(i - 1));
  for (int b = 0; b < g->block_count(); ++b) {
    int inside = 0;
    for (int i = 0; i < g->size(); ++i)
      if (g->node(i) >= g->block_lo(b) && g->node(i) < g->block_hi(b)) ++inside;
    CHECK(inside == 16);
  }
  for (int i = 0; i < g->size(); ++i) CHECK(g->weight(i) > 0.0);

  // exact on constants to 1e-12 relative
  Vector ones = Vector::Ones(g->size());
  const double len = std::ldexp(1.0, 10) - std::ldexp(1.0, -10);
  CHECK(g->integrate(ones) == doctest::Approx(len).epsilon(1e-12));

  // x^{-3/2} against the antiderivative
  Field f = Field::sample(g, [](double x) { return std::pow(x, -1.5); });
  const double exact = 2.0 * (std::pow(std::ldexp(1.0, -10), -0.5) - std::pow(std::ldexp(1.0, 10), -0.5));
  CHECK(g->integrate(f.values) == doctest::Approx(exact).epsilon(1e-6));

  // refinement changes the x^{-3/2} integral by less than the claimed tolerance
  GridPtr g2 = build_grid(-10, 10, 32);
  Field f2 = Field::sample(g2, [](double x) { return std::pow(x, -1.5); });
  CHECK(std::abs(g2->integrate(f2.values) - g->integrate(f.values)) < 1e-6 * exact);

  // interpolation reproduces a block-scale-smooth function to near machine
  auto fn = [](double x) { return std::cos(3.0 * std::log(x)) / (1.0 + x); };
  Field s = Field::sample(g, fn);
  for (double x : {0.37, 1.93, 7.7, 130.0, 900.0})
    CHECK(s(x) == doctest::Approx(fn(x)).epsilon(1e-10));
  CHECK(s(2000.0) == 0.0);  // outside the grid

  CHECK_THROWS(build_grid(3, 3, 8));
  CHECK(g->checksum() == build_grid(-10, 10, 16)->checksum());
  CHECK(g->checksum() != g2->checksum());
}

TEST_CASE("canonical profile satisfies the datum conditions") {
  ModelParams p;
  Profile prof = canonical_profile(p);

  CHECK(prof.f0(0.0) == doctest::Approx(p.A));  // f0(0) = A

  // closed-form ratio against the pure power law
  const double x = 100.0;
  const double ratio = prof.f0(x) / (p.A * std::pow(x, -p.tail_exponent()));
  CHECK(std::abs(ratio - 1.0) < 1.2e-4);

  // y^{(3+lambda)/2+1}|h0| bounded on a log sample (surplus delta = 1)
  double sup = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double y = std::pow(10.0, 4.0 * i / 200.0);
    sup = std::max(sup, std::pow(y, p.tail_exponent() + 1.0) * std::abs(prof.h0(y)));
  }
  CHECK(sup < p.B);
  CHECK(prof.decay().max() <= p.B);

  // positivity
  for (double y : {1e-3, 0.1, 1.0, 10.0, 1e4}) CHECK(prof.f0(y) > 0.0);

  // moment integral against the closed form A*B(7/8,1/4)/2 for lambda=3/2
  const double beta = std::tgamma(7.0 / 8.0) * std::tgamma(1.0 / 4.0) / std::tgamma(9.0 / 8.0);
  CHECK(prof.moment_inf() == doctest::Approx(0.5 * beta).epsilon(1e-10));
  // tail + head consistency
  CHECK(prof.moment_tail(1.0) < prof.moment_inf());

  // the surplus-matched profile pins the decay at the requested rate
  Profile pert = perturbed_canonical_profile(p, 1.0, 0.5);
  double worst = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double y = std::pow(10.0, 1.0 + 3.0 * i / 100.0);
    worst = std::max(worst, std::pow(y, p.tail_exponent() + 1.0) * std::abs(pert.h0(y)));
  }
  CHECK(worst > 0.1);  // genuinely surplus-1, not better
  CHECK(pert.decay().max() <= p.B);
}

TEST_CASE("field series bookkeeping") {
  GridPtr g = build_grid(-2, 2, 8);
  FieldSeries fs(g);
  fs.push(0.0, Vector::Zero(g->size()));
  fs.push(1.0, Vector::Ones(g->size()));
  CHECK(fs.eval(0.25)[0] == doctest::Approx(0.25));
  CHECK_THROWS(fs.push(0.5, Vector::Zero(g->size())));
  fs.validate();
}

TEST_CASE("model params validation") {
  ModelParams p;
  p.validate();
  p.lambda = 2.5;
  CHECK_THROWS(p.validate());
}
