#include "coag/field.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace coag {

void FieldSeries::push(double t, Vector v) {
  if (!times.empty() && t <= times.back())
    throw std::invalid_argument("FieldSeries: times must be strictly increasing");
  if (v.size() != grid->size()) throw std::invalid_argument("FieldSeries: size mismatch");
  times.push_back(t);
  values.push_back(std::move(v));
}

Vector FieldSeries::eval(double t) const {
  if (times.empty()) throw std::runtime_error("FieldSeries: empty");
  if (t <= times.front()) return values.front();
  if (t >= times.back()) return values.back();
  int lo = 0, hi = steps() - 1;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    (times[mid] <= t ? lo : hi) = mid;
  }
  const double w = (t - times[lo]) / (times[hi] - times[lo]);
  return (1.0 - w) * values[lo] + w * values[hi];
}

void FieldSeries::validate() const {
  for (int k = 0; k < steps(); ++k) {
    if (!values[k].allFinite()) throw std::runtime_error("FieldSeries: non-finite values");
    if (k > 0 && times[k] <= times[k - 1])
      throw std::runtime_error("FieldSeries: times not increasing");
  }
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

}  // namespace

void write_field_csv(const Field& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "node,value\n";
  for (int i = 0; i < f.grid->size(); ++i)
    out << fmt(f.grid->node(i)) << ',' << fmt(f.values[i]) << '\n';
}

void write_series_csv(const FieldSeries& fs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "time,node,value\n";
  for (int k = 0; k < fs.steps(); ++k)
    for (int i = 0; i < fs.grid->size(); ++i)
      out << fmt(fs.times[k]) << ',' << fmt(fs.grid->node(i)) << ',' << fmt(fs.values[k][i])
          << '\n';
}

FieldSeries read_series_csv(GridPtr grid, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::getline(in, line);  // header
  FieldSeries fs(grid);
  Vector cur;
  double cur_t = 0.0;
  int i = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    double t, x, v;
    char c;
    if (!(ss >> t >> c >> x >> c >> v)) throw std::runtime_error("bad series row: " + line);
    if (i == 0) {
      cur = Vector::Zero(grid->size());
      cur_t = t;
    }
    cur[i++] = v;
    if (i == grid->size()) {
      fs.push(cur_t, cur);
      i = 0;
    }
  }
  if (i != 0) throw std::runtime_error("series file truncated: " + path);
  return fs;
}

}  // namespace coag
