#include "coag/fourier.hpp"

#include <cmath>
#include <functional>
#include <unsupported/Eigen/FFT>

namespace coag {

CVector dft_forward(const Vector& f) {
  CVector c = f.cast<Complex>();
  return dft_forward(c);
}

CVector dft_forward(const CVector& f) {
  Eigen::FFT<double> fft;
  std::vector<Complex> src(f.data(), f.data() + f.size());
  std::vector<Complex> dst;
  fft.fwd(dst, src);
  return Eigen::Map<CVector>(dst.data(), static_cast<long>(dst.size()));
}

Vector dft_inverse_real(const CVector& F) {
  Eigen::FFT<double> fft;
  std::vector<Complex> src(F.data(), F.data() + F.size());
  std::vector<Complex> dst;
  fft.inv(dst, src);
  Vector out(F.size());
  for (long i = 0; i < F.size(); ++i) out[i] = dst[i].real();
  return out;
}

UniformMesh make_padded_mesh(double lo, double hi, int n, double pad) {
  UniformMesh m;
  const double width = hi - lo;
  const double total = pad * width;
  m.x0 = 0.5 * (lo + hi) - 0.5 * total;
  m.dx = total / n;
  m.n = n;
  return m;
}

Vector resample_to_mesh(const Field& f, const UniformMesh& m) {
  Vector out(m.n);
  for (int j = 0; j < m.n; ++j) out[j] = f(m.point(j));
  return out;
}

double periodic_interp(const UniformMesh& m, const Vector& v, double x) {
  double s = (x - m.x0) / m.dx;
  s -= std::floor(s / m.n) * m.n;
  const int j1 = static_cast<int>(std::floor(s));
  const double t = s - j1;
  auto at = [&](int j) { return v[((j % m.n) + m.n) % m.n]; };
  // 6-point Lagrange on the nodes j1-2 .. j1+3 (offsets -2..3 from j1)
  double acc = 0.0;
  for (int o = -2; o <= 3; ++o) {
    double w = 1.0;
    for (int q = -2; q <= 3; ++q) {
      if (q == o) continue;
      w *= (t - q) / (o - q);
    }
    acc += w * at(j1 + o);
  }
  return acc;
}

namespace {

double spectral_weighted_sum(const UniformMesh& m, const Vector& f,
                             const std::function<double(double)>& weight) {
  const CVector F = dft_forward(f);
  double acc = 0.0;
  for (int j = 0; j < m.n; ++j) acc += weight(m.freq(j)) * std::norm(F[j]);
  return acc * m.dx / m.n;
}

}  // namespace

double hsigma_norm_sq(const UniformMesh& m, const Vector& f, double sigma) {
  return spectral_weighted_sum(m, f,
                               [sigma](double k) { return std::pow(1.0 + k * k, sigma); });
}

double dsigma_norm_sq(const UniformMesh& m, const Vector& f, double sigma) {
  return spectral_weighted_sum(m, f,
                               [sigma](double k) { return std::pow(std::abs(k), 2.0 * sigma); });
}

double l2_norm_sq(const UniformMesh& m, const Vector& f) { return m.dx * f.squaredNorm(); }

}  // namespace coag
