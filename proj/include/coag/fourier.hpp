#pragma once

#include <Eigen/Dense>

#include "coag/field.hpp"
#include "coag/profile.hpp"

namespace coag {

using CVector = Eigen::VectorXcd;

/// Uniform periodic mesh x_j = x0 + j*dx, j = 0..n-1, period length n*dx.
struct UniformMesh {
  double x0 = 0.0;
  double dx = 1.0;
  int n = 0;

  double length() const { return dx * n; }
  double point(int j) const { return x0 + j * dx; }
  /// Signed angular frequency of DFT bin j.
  double freq(int j) const {
    const int k = (j <= n / 2) ? j : j - n;
    return 2.0 * M_PI * k / length();
  }
};

/// Unscaled DFT: F_k = sum_j f_j exp(-2 pi i j k / n).
CVector dft_forward(const Vector& f);
CVector dft_forward(const CVector& f);
/// Inverse with 1/n scaling; real part of the transform.
Vector dft_inverse_real(const CVector& F);

/// Mesh covering [lo, hi] padded to `pad` times its width, n points.
UniformMesh make_padded_mesh(double lo, double hi, int n, double pad = 4.0);

/// Field resampled onto a uniform mesh; zero outside the grid.
Vector resample_to_mesh(const Field& f, const UniformMesh& m);

/// Periodic cubic interpolation of mesh values at x.
double periodic_interp(const UniformMesh& m, const Vector& v, double x);

/// Full-line Sobolev surrogate: integral of (1+k^2)^sigma |fhat|^2 dk with
/// the unitary transform convention, computed spectrally on the mesh.
double hsigma_norm_sq(const UniformMesh& m, const Vector& f, double sigma);

/// Homogeneous derivative surrogate: integral of |k|^{2 sigma} |fhat|^2 dk.
double dsigma_norm_sq(const UniformMesh& m, const Vector& f, double sigma);

/// L2 on the mesh (trapezoid = rectangle rule on the periodic mesh).
double l2_norm_sq(const UniformMesh& m, const Vector& f);

}  // namespace coag
