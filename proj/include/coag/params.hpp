#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace coag {

/// Exponent and regularity parameters shared by the whole toolkit.
///
/// lambda is the kernel homogeneity, sigma the Sobolev index used by the
/// dyadic norms, delta the decay surplus of the background datum, gamma its
/// Holder index. A scales the background profile, B bounds the datum and its
/// derivative, T is the time horizon, theta blends the singular and the
/// background operator, eps regularizes the singular kernel.
struct ModelParams {
  double lambda = 1.5;
  double sigma = 0.75;
  double delta = 1.0;
  double gamma = 0.5;
  double A = 1.0;
  double B = 12.0;
  double T = 1.0;
  double theta = 0.0;
  double eps = 0.0;

  void validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("ModelParams: " + msg); };
    if (!(lambda > 1.0 && lambda < 2.0)) fail("lambda must lie in (1,2)");
    if (!(sigma > 0.5 && sigma < 1.0)) fail("sigma must lie in (1/2,1)");
    if (!(gamma > 0.0 && gamma < 1.0)) fail("gamma must lie in (0,1)");
    if (!(delta > 0.0)) fail("delta must be positive");
    if (!(A > 0.0)) fail("A must be positive");
    if (!(B > 0.0)) fail("B must be positive");
    if (!(T > 0.0 && T <= 1.0)) fail("T must lie in (0,1]");
    if (!(theta >= 0.0 && theta <= 1.0)) fail("theta must lie in [0,1]");
    if (!(eps >= 0.0 && eps <= 1.0)) fail("eps must lie in [0,1]");
  }

  /// Exponent of the outer power law x^{-(3+lambda)/2}.
  double tail_exponent() const { return 0.5 * (3.0 + lambda); }
  /// Parabolic time-scale exponent: block R carries windows of length R^{-(lambda-1)/2}.
  double time_scale_exponent() const { return 0.5 * (lambda - 1.0); }
};

}  // namespace coag
