#pragma once

#include <Eigen/Dense>
#include <vector>

#include "coag/cutoff.hpp"
#include "coag/field.hpp"
#include "coag/fourier.hpp"
#include "coag/profile.hpp"

namespace coag {

using Matrix = Eigen::MatrixXd;

/// Jump kernels in direct space.
enum class KernelKind {
  PureSingular,  // y^{-3/2}
  Background,    // y^{lambda/2} f0(y)
  Interpolated,  // eps y^{-3/2} + (1-eps) R^{(3+lambda)/2} y^{lambda/2} f0(R y)
  Regularized,   // 1 / (y^{3/2} + eps^{3/2} x^{3/2})
};

struct KernelSpec {
  KernelKind kind = KernelKind::PureSingular;
  const Profile* profile = nullptr;
  double eps = 1.0;
  double R = 1.0;

  double operator()(double x, double y) const;
};

/// H(y) = y^{lambda/2} f0(y) - y^{-3/2}.
double kernel_H(const Profile& p, double y);
/// H_eps(x,y) = y^{lambda/2} f0(y) - 1/(y^{3/2} + eps^{3/2} x^{3/2}).
double kernel_H_eps(const Profile& p, double x, double y, double eps);
/// H_R(X) = R^{(3+lambda)/2} X^{lambda/2} f0(R X) - X^{-3/2}.
double kernel_H_R(const Profile& p, double X, double R);

/// Truncation bookkeeping for one operator application.
struct ApplyDiagnostics {
  double tolerance = 1e-8;
  double worst_tail_estimate = 0.0;
  std::vector<int> flagged;
};

/// Dense realization of a linear operator on the grid nodes.
class NodeOperator {
 public:
  NodeOperator() = default;
  NodeOperator(GridPtr grid, Matrix a) : grid_(std::move(grid)), a_(std::move(a)) {}

  Field apply(const Field& f) const;
  const Matrix& matrix() const { return a_; }
  const GridPtr& grid() const { return grid_; }

  NodeOperator& operator+=(const NodeOperator& o) {
    a_ += o.a_;
    return *this;
  }
  NodeOperator& operator-=(const NodeOperator& o) {
    a_ -= o.a_;
    return *this;
  }
  NodeOperator& operator*=(double s) {
    a_ *= s;
    return *this;
  }

 private:
  GridPtr grid_;
  Matrix a_;
};

/// Linearization around the pure power law (singular model).
NodeOperator build_L(GridPtr grid, const ModelParams& params);
/// Same with the regularized jump kernel; eps = 0 reproduces build_L exactly.
NodeOperator build_L_eps(GridPtr grid, const ModelParams& params, double eps);
/// Linearization around the bounded background profile.
NodeOperator build_cal_L(GridPtr grid, const Profile& p);
/// Difference operator with the interpolated kernel (dissipative convention:
/// plane waves are multiplied by W(k, eps, R)).
NodeOperator build_T(GridPtr grid, const Profile& p, double eps, double R);
/// T composed with multiplication by x^{lambda/2}.
NodeOperator build_TM(GridPtr grid, const Profile& p, double eps, double R);
NodeOperator build_A1(GridPtr grid, const Profile& p);
NodeOperator build_A2_eps(GridPtr grid, const Profile& p, double eps);

enum class WcalVariant { AtScaleR, Infinity, InfinityEps };
NodeOperator build_Wcal(GridPtr grid, const Profile& p, WcalVariant variant, double param = 0.0);

/// Four-term localization remainder for the cutoff chi.
NodeOperator build_localized_remainder(GridPtr grid, const SmoothCutoff& chi, const Profile& p);

Field apply_L(const Field& g, const ModelParams& params, ApplyDiagnostics* diag = nullptr);
Field apply_L_eps(const Field& g, const ModelParams& params, double eps,
                  ApplyDiagnostics* diag = nullptr);
Field apply_cal_L(const Field& g, const Profile& p, ApplyDiagnostics* diag = nullptr);
Field apply_T(const Field& f, const Profile& p, double eps, double R,
              ApplyDiagnostics* diag = nullptr);
Field apply_TM(const Field& f, const Profile& p, double eps, double R,
               ApplyDiagnostics* diag = nullptr);
Field apply_A1(const Field& phi, const Profile& p, ApplyDiagnostics* diag = nullptr);
Field apply_A2_eps(const Field& phi, const Profile& p, double eps,
                   ApplyDiagnostics* diag = nullptr);
Field apply_Wcal(const Field& h, const Profile& p, WcalVariant variant, double param = 0.0,
                 ApplyDiagnostics* diag = nullptr);
Field apply_localized_remainder(const Field& g, const SmoothCutoff& chi, const Profile& p,
                                ApplyDiagnostics* diag = nullptr);

/// T_{eps,R} of a periodic mesh function (periodized kernel sum), used to
/// cross-check the Fourier multiplier. max_freq bounds the field's content.
Vector apply_T_periodic(const UniformMesh& m, const Vector& f, const Profile& p, double eps,
                        double R, double max_freq);
/// Same, evaluated only at the listed mesh indices.
Vector apply_T_periodic_at(const UniformMesh& m, const Vector& f, const Profile& p, double eps,
                           double R, double max_freq, const std::vector<int>& targets);

}  // namespace coag
