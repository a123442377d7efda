#pragma once

#include <string>
#include <vector>

#include "coag/grid.hpp"

namespace coag {

/// Nodal values of a function of x at one time, living on a shared grid.
struct Field {
  GridPtr grid;
  Vector values;
  double time = 0.0;

  Field() = default;
  Field(GridPtr g, double t = 0.0) : grid(std::move(g)), time(t) {
    values = Vector::Zero(grid->size());
  }
  Field(GridPtr g, Vector v, double t = 0.0) : grid(std::move(g)), values(std::move(v)), time(t) {}

  double operator()(double x) const { return grid->interpolate(values, x); }
  bool all_finite() const { return values.allFinite(); }

  /// Populate from a callable of x.
  template <typename F>
  static Field sample(GridPtr g, const F& f, double t = 0.0) {
    Field out(std::move(g), t);
    for (int i = 0; i < out.grid->size(); ++i) out.values[i] = f(out.grid->node(i));
    return out;
  }
};

/// Time-indexed sequence of Fields on one shared grid.
struct FieldSeries {
  GridPtr grid;
  std::vector<double> times;
  std::vector<Vector> values;

  FieldSeries() = default;
  explicit FieldSeries(GridPtr g) : grid(std::move(g)) {}

  int steps() const { return static_cast<int>(times.size()); }
  void push(double t, Vector v);
  Field at(int k) const { return Field(grid, values[k], times[k]); }

  /// Nodal values linearly interpolated in time; clamped at the ends.
  Vector eval(double t) const;

  void validate() const;
};

void write_field_csv(const Field& f, const std::string& path);
void write_series_csv(const FieldSeries& fs, const std::string& path);
FieldSeries read_series_csv(GridPtr grid, const std::string& path);

}  // namespace coag
