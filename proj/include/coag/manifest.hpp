#pragma once

#include <json.hpp>
#include <string>

#include "coag/fundsol.hpp"
#include "coag/norms.hpp"
#include "coag/solver.hpp"

namespace coag {

using Json = nlohmann::ordered_json;

/// Fixed %.12e rendering used by every CSV writer (bit-stable goldens).
std::string format_double(double v);

Json params_json(const ModelParams& p);
Json grid_json(const GradedGrid& g);
Json fit_json(const PowerFit& f);
Json norm_report_json(const NormReport& r);

void write_json(const Json& j, const std::string& path);

/// Per-block CSV: R, t0, N_inf, N_2sigma, M_inf, M_2sigma.
void write_block_csv(const NormReport& r, const std::string& path);

}  // namespace coag
