#pragma once

#include "coag/solver.hpp"

namespace coag {

/// Least-squares power-law fit in log-log coordinates.
struct PowerFit {
  double exponent = 0.0;
  double stderr_exponent = 0.0;
  double rms_residual = 0.0;  // of log values around the fit line
  int points = 0;
};

PowerFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct FundSolConfig {
  ModelParams params;
  GridPtr grid;
  const Profile* profile = nullptr;
  double dt = 0.0;
};

/// Numerical fundamental solution of the singular model from a unit-mass
/// Gaussian of the given width at x0.
struct FundSolResult {
  double x0 = 1.0;
  double width = 0.02;
  FieldSeries g;
  double resolution_ratio = 0.0;   // width over the local node spacing
  bool under_resolved = false;     // resolution_ratio < 2.5
  double width_refine_err = -1.0;  // sup deviation against a width/2 run
};

FundSolResult compute_fundamental(double x0, double width, double T, const FundSolConfig& cfg,
                                  bool attach_width_refinement = false);

/// Scaling collapse of two runs with r2.x0 = 2 r1.x0 at matched scaled times:
/// sup over x in [0.1, 10] of the deviation of g2(t2, x) from the rescaled
/// r1 solution, normalized by the sup of the reference.
struct SelfSimilarReport {
  double t2 = 0.0;
  double deviation = 0.0;
};

SelfSimilarReport check_selfsimilar(const FundSolResult& r1, const FundSolResult& r2, double t2,
                                    double lambda);

/// Interior comparison profile 1/(1+|xi|^{3/2-delta}).
double interior_profile(double xi, double delta);

/// Tail and interior structure of g(t, ., x0=1) at one time.
struct TailReport {
  double t = 0.0;
  PowerFit small_x;              // |g| on [0.01, 0.1], expect -3/2
  PowerFit large_x;              // |g| on [4, 64], expect -(3+lambda)/2
  double interior_constant = 0;  // sup of t^2 x^{3/2} |g| / Phi((x-1)/t^2) on (1/2,3/2)
  PowerFit sigma_small;          // t >= 1: |g| against sigma_scaled on (0.1, 1)
  PowerFit sigma_large;          // t >= 1: sigma_scaled in (1, 10)
};

TailReport check_tail_bounds(const FundSolResult& r, double t, double delta,
                             double lambda = 1.5);

/// Growth exponent in T of sup_{t<=T} |||int G(t-s) nu ds|||_{3/2,(3+lambda)/2}
/// for nu = min(x^{-3/2}, x^{-(2+delta)}), against beta = min(1, 2 delta/(lambda-1)).
struct DuhamelExponentReport {
  double delta = 0.0;
  double beta = 0.0;
  PowerFit fit;
  std::vector<double> horizons;
  std::vector<double> sup_norms;
};

DuhamelExponentReport duhamel_exponent_test(double delta, const FundSolConfig& cfg);

}  // namespace coag
