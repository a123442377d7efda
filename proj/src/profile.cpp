#include "coag/profile.hpp"

#include <cmath>
#include <stdexcept>

#include "coag/quadrature.hpp"

namespace coag {

namespace {

double ramp(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double p = std::exp(-1.0 / t);
  const double q = std::exp(-1.0 / (1.0 - t));
  return p / (p + q);
}

}  // namespace

double Profile::xi(double x) { return ramp(2.0 * x - 1.0); }

double Profile::xi_prime(double x) {
  const double h = 1e-6;
  return (xi(x + h) - xi(x - h)) / (2.0 * h);
}

Profile::Profile(ModelParams params, RealFn f0, RealFn f0_prime, ComplexFn f0_complex,
                 bool check_decay)
    : params_(params), f0_(std::move(f0)), f0p_(std::move(f0_prime)), f0c_(std::move(f0_complex)) {
  params_.validate();
  if (!(f0_(0.0) > 0.0)) throw std::invalid_argument("Profile: f0 must be positive");

  const double lam = params_.lambda;
  const GaussRule rule = gauss_legendre(12);
  auto q = [this, lam](double y) { return std::pow(y, 0.5 * lam) * f0_(y); };
  moment_inf_ = graded_gauss_toward_a(q, 0.0, 1.0, 40, rule) + integrate_to_infinity(q, 1.0);

  if (check_decay) {
    decay_ = run_decay_check();
    if (decay_.max() > params_.B)
      throw std::invalid_argument("Profile: datum decay bounds exceed B");
  }
}

double Profile::h0(double x) const {
  return f0_(x) - params_.A * std::pow(x, -params_.tail_exponent()) * xi(x);
}

double Profile::h0_prime(double x) const {
  const double p = params_.tail_exponent();
  return f0p_(x) - params_.A * (-p * std::pow(x, -p - 1.0) * xi(x) +
                                std::pow(x, -p) * xi_prime(x));
}

double Profile::moment_tail(double a) const {
  const double lam = params_.lambda;
  auto q = [this, lam](double y) { return std::pow(y, 0.5 * lam) * f0_(y); };
  if (a <= 0.0) return moment_inf_;
  return integrate_to_infinity(q, a);
}

DecayCheck Profile::run_decay_check() const {
  DecayCheck out;
  const double p = params_.tail_exponent();
  const double delta = params_.delta;
  const double gamma = params_.gamma;

  // sup bounds on a log sample of (0, 1e4]
  const int n = 400;
  for (int i = 0; i <= n; ++i) {
    const double y = std::pow(10.0, -2.0 + 6.0 * i / n);
    out.h0_bound = std::max(out.h0_bound, std::pow(y, p + delta) * std::abs(h0(y)));
    out.h0_prime_bound =
        std::max(out.h0_prime_bound, std::pow(y, p + 1.0 + delta) * std::abs(h0_prime(y)));
  }

  // Holder seminorms sampled by divided differences at lag x/100.
  for (int j = 0; j <= 14; ++j) {
    const double R = std::ldexp(1.0, j);
    double semi = 0.0;
    for (int i = 0; i < 40; ++i) {
      const double x = 0.5 * R + 1.5 * R * i / 39.0;
      const double lag = x / 100.0;
      semi = std::max(semi,
                      std::abs(h0_prime(x + lag) - h0_prime(x)) / std::pow(lag, gamma));
    }
    out.holder_dyadic = std::max(out.holder_dyadic, std::pow(R, p + gamma + delta) * semi);
  }
  for (int i = 1; i < 60; ++i) {
    const double x = 0.985 * i / 60.0;
    const double lag = 0.01;
    out.holder_origin =
        std::max(out.holder_origin,
                 std::abs(h0_prime(x + lag) - h0_prime(x)) / std::pow(lag, gamma));
  }
  return out;
}

Profile canonical_profile(const ModelParams& params) {
  const double A = params.A;
  const double e = 0.25 * (3.0 + params.lambda);
  auto f0 = [A, e](double x) { return A * std::pow(1.0 + x * x, -e); };
  auto f0p = [A, e](double x) { return -2.0 * e * A * x * std::pow(1.0 + x * x, -e - 1.0); };
  auto f0c = [A, e](Complex z) { return A * std::pow(1.0 + z * z, Complex(-e)); };
  return Profile(params, f0, f0p, f0c);
}

Profile perturbed_canonical_profile(const ModelParams& params, double surplus, double amplitude) {
  const double A = params.A;
  const double e = 0.25 * (3.0 + params.lambda);
  const double ep = 0.5 * (params.tail_exponent() + surplus);
  const double c = amplitude;
  auto f0 = [=](double x) {
    return A * std::pow(1.0 + x * x, -e) + c * std::pow(1.0 + x * x, -ep);
  };
  auto f0p = [=](double x) {
    return -2.0 * e * A * x * std::pow(1.0 + x * x, -e - 1.0) -
           2.0 * ep * c * x * std::pow(1.0 + x * x, -ep - 1.0);
  };
  auto f0c = [=](Complex z) {
    return A * std::pow(1.0 + z * z, Complex(-e)) + c * std::pow(1.0 + z * z, Complex(-ep));
  };
  return Profile(params, f0, f0p, f0c);
}

}  // namespace coag
