#include "qwalk/io.hpp"

#include <cstdio>

namespace qwalk {

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) row += ',';
    row += cells[i];
  }
  row += '\n';
  return row;
}

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2)
    throw Error(ErrorCode::InvalidArgument,
                "complex values are [re, im] arrays");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json matrix_to_json(const MatrixX& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out.push_back(complex_to_json(m(i, j)));
  return out;
}

MatrixX matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows * cols)
    throw Error(ErrorCode::InvalidArgument,
                "matrix must hold rows*cols [re, im] entries, row-major");
  MatrixX m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index c = 0; c < cols; ++c)
      m(i, c) = complex_from_json(j[i * cols + c]);
  return m;
}

Json site_walk_to_json(const SiteWalkSpec& spec) {
  Json transitions = Json::array();
  for (const auto& [edge, matrix] : spec.transitions)
    transitions.push_back({{"from", edge.first},
                           {"to", edge.second},
                           {"matrix", matrix_to_json(matrix)}});
  return {{"sites", spec.sites}, {"dim", spec.dim}, {"transitions", transitions}};
}

std::string monitored_series_csv(const MonitoredRun& run) {
  std::string out = "n,term,cumulative,survival\n";
  for (int n = 1; n <= run.series.horizon(); ++n)
    out += csv_row({std::to_string(n), format_double(run.series.term(n)),
                    format_double(run.series.cumulative_at(n)),
                    format_double(run.survival[n - 1])});
  return out;
}

Json series_summary_json(const ReturnSeries& series, const PolyaResult& polya) {
  const int horizon = series.horizon();
  Json summary = {
      {"kind", "unmonitored-p0"},
      {"N", horizon},
      {"cumulative", series.cumulative.back()},
      {"polya_partial", polya.partial},
      {"diverges_hint", polya.diverges_hint},
  };
  if (polya.slope_valid) {
    summary["slope"] = polya.slope;
    summary["assessment"] = polya.diverges_hint
                                ? "consistent with SJK-recurrent at this "
                                  "truncation"
                                : "consistent with SJK-transient at this "
                                  "truncation";
  } else {
    summary["slope"] = nullptr;
    summary["assessment"] = "insufficient data for the slope diagnostic";
  }
  return summary;
}

SiteWalkSpec site_walk_from_json(const Json& j) {
  SiteWalkSpec spec;
  spec.sites = j.at("sites").get<int>();
  spec.dim = j.at("dim").get<int>();
  for (const Json& t : j.at("transitions")) {
    const int from = t.at("from").get<int>();
    const int to = t.at("to").get<int>();
    spec.transitions[{from, to}] =
        matrix_from_json(t.at("matrix"), spec.dim, spec.dim);
  }
  return spec;
}

}  // namespace qwalk
