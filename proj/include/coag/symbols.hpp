#pragma once

#include <Eigen/Dense>
#include <string>

#include "coag/grid.hpp"
#include "coag/profile.hpp"

namespace coag {

/// Closed form of int_0^inf (e^{-izy}-1) y^{-3/2} dy = -sqrt(2 pi) |z|^{1/2} (1 + i sign z).
Complex half_derivative_symbol(double z);

/// The same integral by the oscillatory quadrature engine (independent path,
/// used as the anchor check of the engine itself).
Complex half_derivative_symbol_quadrature(double z);

/// Multiplier of the half-derivative operator: -sqrt(2 pi) |xi|^{1/2}.
inline double lambda_symbol(double xi) { return -std::sqrt(2.0 * M_PI) * std::sqrt(std::abs(xi)); }

/// wtilde(z) = int_0^inf f0(y) y^{lambda/2} (e^{-izy} - 1) dy.
/// Oscillatory tail handled on a rotated contour; needs a complex-evaluable
/// profile for z outside the small-|z| regime.
Complex wtilde(double z, const Profile& p);

/// Reference evaluation by oscillation-resolving panels on the real axis.
/// O(|z|) cost; used to validate the contour path.
Complex wtilde_direct(double z, const Profile& p);

/// W(xi, eps, R) = -eps sqrt(2 pi)(1+i sign xi)|xi|^{1/2} + (1-eps) sqrt(R) wtilde(xi/R).
Complex symbol_W(double xi, double eps, double R, const Profile& p);

/// P_eps(x, k) = int_0^inf (e^{-iky}-1) / (y^{3/2} + eps^{3/2} x^{3/2}) dy.
Complex symbol_P_eps(double x, double k, double eps);

/// Tabulated W on a frequency mesh. Values at -xi are the conjugates of the
/// values at xi by construction; tests verify this against direct quadrature.
struct SymbolGrid {
  Vector xi;
  Eigen::VectorXcd W;
  double eps = 1.0;
  double R = 1.0;
  std::string method;  // "closed-form" or "quadrature"

  int size() const { return static_cast<int>(xi.size()); }
  /// Number of nodes violating W(0)=0, Re W(xi!=0) < 0 or Hermitian symmetry.
  int invariant_violations() const;
};

/// Evaluate W on the given frequencies. Work is split across `workers`
/// threads in fixed chunks, so results do not depend on the worker count.
SymbolGrid build_symbol_grid(const Vector& xi, double eps, double R, const Profile& p,
                             int workers = 1);

/// xi, Re W, Im W columns.
void write_symbol_csv(const SymbolGrid& g, const std::string& path);

struct SymbolCheckReport {
  double max_two_point_ratio = 0.0;   // fitted constant of the two-point bound
  int two_point_violations = 0;       // pairs exceeding the frozen constant
  double fitted_decay_constant = 0.0; // sup over (t,xi) of e^{-2t|Re W|} |W|^{2 beta} t^{2 beta}
  double decay_beta = 0.5;
};

/// Samples the two-point symbol inequality (alpha + beta = 1) over a lattice
/// of grid frequencies and the semigroup decay bound over (t, xi).
SymbolCheckReport check_symbol_inequalities(const SymbolGrid& g, double frozen_constant = 16.0);

}  // namespace coag
