#pragma once

#include "coag/norms.hpp"
#include "coag/operators.hpp"
#include "coag/profile.hpp"
#include "coag/semigroup.hpp"

namespace coag {

enum class Scheme { ImexIntegratingFactor, FrozenSymbolExponential };

/// Time integration setup for h_t = (1-theta) L_eps[h] + theta calL[h] + mu.
struct SolveConfig {
  ModelParams params;  // carries theta, eps and the horizon T
  GridPtr grid;
  const Profile* profile = nullptr;
  double dt = 0.0;  // 0: use the stability probe
  Scheme scheme = Scheme::ImexIntegratingFactor;
  double blowup_guard = 1e12;
  double freeze_x0 = 1.0;  // reference point of the frozen-symbol scheme

  void validate() const;
};

struct EvolveInfo {
  double dt_used = 0.0;
  double stability_bound = 0.0;   // dt bound from the dry-run probe
  double explicit_radius = 0.0;   // power-iteration estimate of the explicit part
  double richardson_error = -1.0; // filled by evolve_with_estimate
};

/// Local damping (1-theta) 2 sqrt(2) x^{(lambda-1)/2} + theta x^{lambda/2} I_inf,
/// removed from the explicit operator and integrated exactly.
Vector local_damping(const GradedGrid& grid, const ModelParams& params, const Profile& p);

/// Evolution from h(0) = 0 with the interpolated source series.
FieldSeries evolve(const SolveConfig& cfg, const FieldSeries& mu, EvolveInfo* info = nullptr);

/// Evolution from given initial data (used by the fundamental solution).
FieldSeries evolve_from(const SolveConfig& cfg, const Field& init, const FieldSeries* mu,
                        EvolveInfo* info = nullptr);

/// Same run plus a dt/2 Richardson error estimate on the final snapshot.
FieldSeries evolve_with_estimate(const SolveConfig& cfg, const FieldSeries& mu, EvolveInfo* info);

/// exp(-int_s^t a(., l) dl) with trapezoid time quadrature of the series.
Vector integrating_factor(const FieldSeries& a, double s, double t);

struct ContinuationEntry {
  double theta = 0.0;
  double triple_norm = 0.0;  // |||h|||_sigma
  double mu_norm = 0.0;      // ||mu||_{Y^sigma_{3/2, 2+delta}}
  double ratio = 0.0;
};

struct ContinuationReport {
  std::vector<ContinuationEntry> entries;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  bool uniform = true;  // false when the ratio spreads by more than 3x
};

/// Solves at each theta of the increasing grid and records |||h||| and the
/// ratio against the source norm.
ContinuationReport continuation_sweep(const SolveConfig& base, const std::vector<double>& thetas,
                                      const FieldSeries& mu);

struct FixedPointReport {
  std::vector<double> distances;  // |||phi_{k+1} - phi_k|||_sigma
  bool diverged = false;          // three consecutive growing distances
  FieldSeries last;
};

/// Iterates phi -> solve[(1-theta_n) L + theta_n calL + (theta-theta_n)
/// (calL - L_eps)(phi_prev) + mu] from phi_init (empty series = zero).
FixedPointReport fixed_point_iterate(const SolveConfig& base, double theta, double theta_n,
                                     double eps, const FieldSeries& mu,
                                     const FieldSeries* phi_init, int iterations);

}  // namespace coag
