#include "coag/manifest.hpp"

#include <cstdio>
#include <fstream>

namespace coag {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

Json params_json(const ModelParams& p) {
  Json j;
  j["lambda"] = format_double(p.lambda);
  j["sigma"] = format_double(p.sigma);
  j["delta"] = format_double(p.delta);
  j["gamma"] = format_double(p.gamma);
  j["A"] = format_double(p.A);
  j["B"] = format_double(p.B);
  j["T"] = format_double(p.T);
  j["theta"] = format_double(p.theta);
  j["eps"] = format_double(p.eps);
  return j;
}

Json grid_json(const GradedGrid& g) {
  Json j;
  j["jmin"] = g.jmin();
  j["jmax"] = g.jmax();
  j["nodes_per_block"] = g.nodes_per_block();
  j["size"] = g.size();
  j["checksum"] = g.checksum();
  return j;
}

Json fit_json(const PowerFit& f) {
  Json j;
  j["exponent"] = format_double(f.exponent);
  j["stderr"] = format_double(f.stderr_exponent);
  j["rms_residual"] = format_double(f.rms_residual);
  j["points"] = f.points;
  return j;
}

Json norm_report_json(const NormReport& r) {
  Json j;
  j["sigma"] = format_double(r.sigma);
  j["q"] = format_double(r.q);
  j["p"] = format_double(r.p);
  j["lambda"] = format_double(r.lambda);
  j["T"] = format_double(r.T);
  j["x_norm"] = format_double(r.x_norm);
  j["y_norm"] = format_double(r.y_norm);
  j["sup_triple_qp"] = format_double(r.sup_triple_qp);
  j["triple_sigma"] = format_double(r.triple_sigma);
  j["bracket"] = format_double(r.bracket);
  j["blocks"] = r.blocks.size();
  return j;
}

void write_json(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << j.dump(2) << '\n';
}

void write_block_csv(const NormReport& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "R,t0,N_inf,N_2sigma,M_inf,M_2sigma\n";
  for (const BlockNorms& b : r.blocks)
    out << format_double(b.R) << ',' << format_double(b.t0) << ',' << format_double(b.N_inf)
        << ',' << format_double(b.N_2sigma) << ',' << format_double(b.M_inf) << ','
        << format_double(b.M_2sigma) << '\n';
}

}  // namespace coag
