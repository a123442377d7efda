#pragma once

#include <vector>

#include "coag/field.hpp"
#include "coag/fourier.hpp"
#include "coag/params.hpp"

namespace coag {

/// sup_{0<=x<=1} x^q |phi| + sup_{x>1} x^p |phi| over the grid nodes.
double norm_triple_qp(const Field& phi, double q, double p);

/// The four space-time functionals of one dyadic block (R/2, 2R).
struct BlockNorms {
  double R = 1.0;
  double t0 = 0.0;
  double N_inf = 0.0;
  double N_2sigma = 0.0;
  double M_inf = 0.0;
  double M_2sigma = 0.0;
};

/// Computes all four with the exact prefactors R^{(lambda-1)/2},
/// R^{(lambda-1)/2 + 2 sigma - 1}, R^{2 sigma - 1}; D_x^sigma through the
/// windowed-Fourier surrogate. The window [t0, min(t0+R^{-(lambda-1)/2}, T)]
/// must meet the series' time range.
BlockNorms dyadic_norms(const FieldSeries& fs, double sigma, double t0, double R, double lambda,
                        double T);

/// Fractional Sobolev surrogate on an interval: plateau-window the field to
/// the interval (support twice the interval), resample to a uniform mesh and
/// integrate (1+|k|^sigma)^2 |fhat|^2.
double frac_sobolev(const Field& f, double sigma, double a, double b, int mesh_n = 1 << 11);

/// sup over dyadic R<1 of R^q M_inf plus sup over R>=1 and block-mesh t0 of
/// R^p N_inf (the X norm); same with the 2,sigma pair for the Y norm.
double norm_X(const FieldSeries& fs, double q, double p, double lambda, double T);
double norm_Y(const FieldSeries& fs, double sigma, double q, double p, double lambda, double T);

/// Windowed space-time seminorm with weight 1 + |k|^{2 sigma} min(|k|, R).
/// unbounded_weight replaces min(|k|, R) by |k| (the Y-type weight).
double bracket_seminorm(const FieldSeries& fs, double sigma, double lambda, double T,
                        bool unbounded_weight = false);

/// sup_t |||f(t)|||_{3/2,(3+lambda)/2} + Y^sigma_{3/2,(3+lambda)/2} norm.
double norm_E(const FieldSeries& fs, double sigma, double lambda, double T);

/// Full per-block report plus the aggregates for one exponent pair.
struct NormReport {
  double sigma = 0.75, q = 1.5, p = 2.25, lambda = 1.5, T = 1.0;
  std::vector<BlockNorms> blocks;
  double x_norm = 0.0;
  double y_norm = 0.0;
  double sup_triple_qp = 0.0;  // sup over times of |||f(t)|||_{q,p}
  double triple_sigma = 0.0;   // |||f|||_sigma with the (3/2,(3+lambda)/2) pair
  double bracket = 0.0;
};

NormReport build_norm_report(const FieldSeries& fs, double sigma, double q, double p,
                             double lambda, double T);

/// Dyadic scales R = 2^n whose block (R/2, 2R) fits in the grid.
std::vector<double> dyadic_scales(const GradedGrid& grid, bool below_one);

}  // namespace coag
