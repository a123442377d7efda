#pragma once

#include <cmath>
#include <stdexcept>

namespace coag {

/// C-infinity cutoff with exact plateaus: 0 on (-inf,a] and [d,inf),
/// 1 on [b,c], monotone in between. Built from s(t)=psi(t)/(psi(t)+psi(1-t))
/// with psi(t)=exp(-1/t) for t>0, so the plateau values are exact.
class SmoothCutoff {
 public:
  SmoothCutoff(double a, double b, double c, double d) : a_(a), b_(b), c_(c), d_(d) {
    if (!(a < b && b <= c && c < d))
      throw std::invalid_argument("SmoothCutoff: breakpoints must satisfy a<b<=c<d");
  }

  double operator()(double x) const {
    if (x <= a_ || x >= d_) return 0.0;
    if (x >= b_ && x <= c_) return 1.0;
    if (x < b_) return ramp((x - a_) / (b_ - a_));
    return ramp((d_ - x) / (d_ - c_));
  }

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }
  double support_lo() const { return a_; }
  double support_hi() const { return d_; }

 private:
  static double bump(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
  static double ramp(double t) {
    const double p = bump(t);
    const double q = bump(1.0 - t);
    return p / (p + q);
  }

  double a_, b_, c_, d_;
};

inline SmoothCutoff make_cutoff(double a, double b, double c, double d) {
  return SmoothCutoff(a, b, c, d);
}

/// Localization cutoff at scale R: 1 on (R-R/8, R+R/8), 0 outside (R-R/4, R+R/4).
inline SmoothCutoff make_chi(double R) {
  return SmoothCutoff(R - R / 4.0, R - R / 8.0, R + R / 8.0, R + R / 4.0);
}

/// Unit-scale window: 1 on (3/4, 5/4), 0 outside (1/8, 4).
inline SmoothCutoff make_eta() { return SmoothCutoff(1.0 / 8.0, 3.0 / 4.0, 5.0 / 4.0, 4.0); }

}  // namespace coag
