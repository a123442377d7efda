#pragma once

#include <complex>
#include <functional>

#include "coag/cutoff.hpp"
#include "coag/params.hpp"

namespace coag {

using Complex = std::complex<double>;

/// Sampled decay constants of the datum (sup of the weighted quantities that
/// the admissibility condition bounds by B).
struct DecayCheck {
  double h0_bound = 0.0;        // sup y^{(3+lambda)/2+delta} |h0|
  double h0_prime_bound = 0.0;  // sup y^{(3+lambda)/2+1+delta} |h0'|
  double holder_dyadic = 0.0;   // sup_R R^{(3+lambda)/2+gamma+delta} [h0']_{C^gamma[R/2,2R]}
  double holder_origin = 0.0;   // [h0']_{C^gamma(0,1)}
  double max() const {
    return std::max(std::max(h0_bound, h0_prime_bound), std::max(holder_dyadic, holder_origin));
  }
};

/// Background datum f0 together with its derivative. The remainder
/// h0(x) = f0(x) - A x^{-(3+lambda)/2} xi(x) (xi a one-sided cutoff that is 0
/// below 1/2 and 1 above 1) must obey the sampled decay bounds with constant B.
class Profile {
 public:
  using RealFn = std::function<double(double)>;
  using ComplexFn = std::function<Complex(Complex)>;

  Profile(ModelParams params, RealFn f0, RealFn f0_prime, ComplexFn f0_complex = nullptr,
          bool check_decay = true);

  const ModelParams& params() const { return params_; }
  double f0(double x) const { return f0_(x); }
  double f0_prime(double x) const { return f0p_(x); }
  bool has_complex() const { return static_cast<bool>(f0c_); }
  Complex f0_complex(Complex z) const { return f0c_(z); }

  double h0(double x) const;
  double h0_prime(double x) const;

  /// Moment integral over (0, inf) of y^{lambda/2} f0(y).
  double moment_inf() const { return moment_inf_; }
  /// Moment integral over (a, inf) of y^{lambda/2} f0(y).
  double moment_tail(double a) const;

  const DecayCheck& decay() const { return decay_; }

 private:
  static double xi(double x);
  static double xi_prime(double x);
  DecayCheck run_decay_check() const;

  ModelParams params_;
  RealFn f0_, f0p_;
  ComplexFn f0c_;
  double moment_inf_ = 0.0;
  DecayCheck decay_;
};

/// f0(x) = A (1+x^2)^{-(3+lambda)/4}: smooth, positive, asymptotic to
/// A x^{-(3+lambda)/2}, with decay surplus 2 in the datum condition.
Profile canonical_profile(const ModelParams& params);

/// Canonical profile plus amplitude * (1+x^2)^{-((3+lambda)/2+surplus)/2},
/// which pins the datum's decay surplus at exactly `surplus` (< 2).
Profile perturbed_canonical_profile(const ModelParams& params, double surplus, double amplitude);

}  // namespace coag
