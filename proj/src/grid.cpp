#include "coag/grid.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace coag {

GradedGrid::GradedGrid(int jmin, int jmax, int nodes_per_block)
    : jmin_(jmin), jmax_(jmax), p_(nodes_per_block), rule_(gauss_legendre(nodes_per_block)) {
  if (jmin >= jmax) throw std::invalid_argument("GradedGrid: jmin < jmax required");
  if (nodes_per_block < 4) throw std::invalid_argument("GradedGrid: at least 4 nodes per block");

  const int nb = block_count();
  nodes_.resize(nb * p_);
  weights_.resize(nb * p_);
  for (int b = 0; b < nb; ++b) {
    const double lo = block_lo(b);
    const double hi = block_hi(b);
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    for (int i = 0; i < p_; ++i) {
      nodes_[b * p_ + i] = mid + half * rule_.nodes[i];
      weights_[b * p_ + i] = half * rule_.weights[i];
    }
  }

  // Barycentric weights on the reference nodes, normalized to unit max.
  bary_.assign(p_, 1.0);
  for (int i = 0; i < p_; ++i) {
    for (int j = 0; j < p_; ++j) {
      if (j != i) bary_[i] /= (rule_.nodes[i] - rule_.nodes[j]);
    }
  }
  double mx = 0.0;
  for (double v : bary_) mx = std::max(mx, std::abs(v));
  for (double& v : bary_) v /= mx;
}

int GradedGrid::block_of(double x) const {
  if (x < xmin()) return -1;
  if (x >= xmax()) return block_count();
  const int b = static_cast<int>(std::floor(std::log2(x))) - jmin_;
  // log2 rounding can be off by one at block boundaries
  if (b >= 0 && b < block_count() && x >= block_lo(b) && x < block_hi(b)) return b;
  for (int c = std::max(0, b - 1); c <= std::min(block_count() - 1, b + 1); ++c)
    if (x >= block_lo(c) && x < block_hi(c)) return c;
  return -1;
}

bool GradedGrid::interpolation_stencil(double x, std::vector<int>& idx,
                                       std::vector<double>& w) const {
  idx.clear();
  w.clear();
  const int b = block_of(x);
  if (b < 0 || b >= block_count()) return false;
  const double lo = block_lo(b);
  const double hi = block_hi(b);
  const double t = (2.0 * x - lo - hi) / (hi - lo);
  const int base = block_start(b);

  idx.resize(p_);
  w.resize(p_);
  double denom = 0.0;
  for (int i = 0; i < p_; ++i) {
    idx[i] = base + i;
    const double d = t - rule_.nodes[i];
    if (std::abs(d) < 1e-14) {
      std::fill(w.begin(), w.end(), 0.0);
      w[i] = 1.0;
      return true;
    }
    w[i] = bary_[i] / d;
    denom += w[i];
  }
  for (int i = 0; i < p_; ++i) w[i] /= denom;
  return true;
}

double GradedGrid::interpolate(const Vector& values, double x) const {
  static thread_local std::vector<int> idx;
  static thread_local std::vector<double> w;
  if (!interpolation_stencil(x, idx, w)) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < idx.size(); ++i) acc += w[i] * values[idx[i]];
  return acc;
}

std::uint64_t GradedGrid::checksum() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    for (int k = 0; k < 8; ++k) {
      h ^= (v >> (8 * k)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(static_cast<std::uint64_t>(jmin_));
  mix(static_cast<std::uint64_t>(jmax_));
  mix(static_cast<std::uint64_t>(p_));
  for (int i = 0; i < size(); ++i) {
    std::uint64_t bits;
    const double v = nodes_[i];
    std::memcpy(&bits, &v, 8);
    mix(bits);
  }
  return h;
}

GridPtr build_grid(int jmin, int jmax, int nodes_per_block) {
  return std::make_shared<GradedGrid>(jmin, jmax, nodes_per_block);
}

}  // namespace coag
