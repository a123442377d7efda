#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

#include "coag/quadrature.hpp"

namespace coag {

using Vector = Eigen::VectorXd;

/// Dyadic-block spatial mesh on (2^jmin, 2^jmax). Each block [2^n, 2^{n+1})
/// carries P Gauss-Legendre nodes, so integrals of per-block smooth functions
/// are spectrally accurate and per-block polynomial interpolation is stable.
class GradedGrid {
 public:
  GradedGrid(int jmin, int jmax, int nodes_per_block);

  int jmin() const { return jmin_; }
  int jmax() const { return jmax_; }
  int nodes_per_block() const { return p_; }
  int block_count() const { return jmax_ - jmin_; }
  int size() const { return static_cast<int>(nodes_.size()); }

  const Vector& nodes() const { return nodes_; }
  const Vector& weights() const { return weights_; }
  double node(int i) const { return nodes_[i]; }
  double weight(int i) const { return weights_[i]; }

  double xmin() const { return std::ldexp(1.0, jmin_); }
  double xmax() const { return std::ldexp(1.0, jmax_); }

  /// Block index of x; -1 below the grid, block_count() above.
  int block_of(double x) const;
  double block_lo(int b) const { return std::ldexp(1.0, jmin_ + b); }
  double block_hi(int b) const { return std::ldexp(1.0, jmin_ + b + 1); }
  int block_start(int b) const { return b * p_; }

  /// Quadrature of nodal values over the covered range.
  double integrate(const Vector& values) const { return weights_.dot(values); }

  /// Barycentric interpolation weights of the block polynomial at x:
  /// fills idx/w with p_ node indices and coefficients. Returns false when x
  /// lies outside the grid (evaluation there is defined as zero).
  bool interpolation_stencil(double x, std::vector<int>& idx, std::vector<double>& w) const;

  /// Interpolated evaluation of nodal values at x (0 outside the grid).
  double interpolate(const Vector& values, double x) const;

  /// FNV-1a hash of the node coordinates; identifies the mesh in manifests.
  std::uint64_t checksum() const;

  /// Reference Gauss rule shared by all blocks.
  const GaussRule& rule() const { return rule_; }

 private:
  int jmin_, jmax_, p_;
  GaussRule rule_;
  std::vector<double> bary_;  // barycentric weights on the reference nodes
  Vector nodes_;
  Vector weights_;
};

using GridPtr = std::shared_ptr<const GradedGrid>;

GridPtr build_grid(int jmin, int jmax, int nodes_per_block);

}  // namespace coag
