#pragma once

#include <memory>

#include "coag/fourier.hpp"
#include "coag/operators.hpp"
#include "coag/symbols.hpp"

namespace coag {

/// Frozen-coefficient multiplier semigroup exp[t x0^{lambda/2} T_{eps,R}]
/// realized on a padded uniform mesh through the tabulated symbol.
struct FreezePoint {
  double x0 = 1.0;
  double eps = 1.0;
  double R = 1.0;
  double lambda = 1.5;
  UniformMesh mesh;
  std::shared_ptr<const SymbolGrid> symbols;  // on the mesh frequencies

  double rate() const { return std::pow(x0, 0.5 * lambda); }
};

/// Symbol grid evaluated on the mesh frequencies; the mesh pads [lo, hi]
/// by the given factor so wraparound stays below quadrature noise.
FreezePoint make_freeze_point(double x0, double eps, double R, const Profile& p, double lo,
                              double hi, int n = 1 << 14, double pad = 4.0);

/// Multiplier step on mesh values.
Vector semigroup_apply_mesh(const FreezePoint& fp, const Vector& f, double t);

/// Resample-apply-resample on a Field. Wraparound mass (relative amplitude in
/// the outer pad quarter) is reported through *wraparound when given.
Field semigroup_apply(const Field& f, double t, const FreezePoint& fp,
                      double* wraparound = nullptr);

/// Discrete Duhamel convolution int_0^t S(t-s) h(s) ds by the midpoint rule
/// in s with exact multiplier factors; returns the series on hs's times.
FieldSeries duhamel(const FieldSeries& hs, const FreezePoint& fp);

/// Commutator [eta, T_{eps,R}] h = eta T(h) - T(eta h) by two operator calls.
Field commutator_apply(const Field& h, const SmoothCutoff& eta, double eps, double R,
                       const Profile& p);

}  // namespace coag
