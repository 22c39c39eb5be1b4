#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qwalk/kac.hpp"
#include "qwalk/monitored.hpp"
#include "qwalk/types.hpp"

namespace qwalk {

using Json = nlohmann::json;

// 17 significant digits: doubles round-trip exactly through this format.
std::string format_double(double value);

std::string csv_row(const std::vector<std::string>& cells);

Json complex_to_json(const Complex& z);
Complex complex_from_json(const Json& j);

Json matrix_to_json(const MatrixX& m);
MatrixX matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols);

// Walk-spec schema: {"sites": k, "dim": d, "transitions": [{"from": j,
// "to": i, "matrix": [[re, im], ...]}]} with matrices flattened row-major.
Json site_walk_to_json(const SiteWalkSpec& spec);
SiteWalkSpec site_walk_from_json(const Json& j);

// Per-step monitored series with its mass bookkeeping:
// "n,term,cumulative,survival".
std::string monitored_series_csv(const MonitoredRun& run);

// Summary of an unmonitored series: {kind, N, cumulative, polya_partial,
// slope, diverges_hint, assessment}. The assessment is evidence at a finite
// truncation, never a categorical verdict.
Json series_summary_json(const ReturnSeries& series, const PolyaResult& polya);

}  // namespace qwalk
