#include "qwalk/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "qwalk/criteria.hpp"
#include "qwalk/firstreturn.hpp"
#include "qwalk/fourier.hpp"
#include "qwalk/io.hpp"
#include "qwalk/kac.hpp"
#include "qwalk/monitored.hpp"
#include "qwalk/walkmodel.hpp"

namespace qwalk {

namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::CostGuardExceeded:
      return 4;
    case ErrorCode::DegenerateStep:
    case ErrorCode::NotConverged:
    case ErrorCode::NonUnique:
    case ErrorCode::TailTooLarge:
    case ErrorCode::EigenFailure:
      return 3;
    default:
      return 2;
  }
}

int thread_budget() {
  unsigned hardware = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QWALK_THREADS")) {
    const long requested = std::strtol(env, nullptr, 10);
    if (requested >= 1)
      hardware = std::min<unsigned>(hardware, static_cast<unsigned>(requested));
  }
  return static_cast<int>(hardware);
}

struct StateSpec {
  std::optional<Vector2> spinor;  // set when the state was given as a vector
  Matrix2 density = Matrix2::Zero();
};

StateSpec parse_state(const std::string& text) {
  StateSpec state;
  const auto from_spinor = [&](const Vector2& psi) {
    Vector2 normalized = psi / psi.norm();
    state.spinor = normalized;
    state.density = normalized * normalized.adjoint();
  };
  if (text == "up") {
    from_spinor(Vector2(1, 0));
  } else if (text == "down") {
    from_spinor(Vector2(0, 1));
  } else if (text == "balanced") {
    from_spinor(Vector2(Complex(1, 0), Complex(0, 1)) / std::sqrt(2.0));
  } else if (text == "e11") {
    state.density << 1, 0, 0, 0;
  } else if (text == "e22") {
    state.density << 0, 0, 0, 1;
  } else if (!text.empty() && text.front() == '[') {
    const Json j = Json::parse(text);
    if (j.size() == 2) {
      from_spinor(Vector2(complex_from_json(j[0]), complex_from_json(j[1])));
    } else if (j.size() == 4) {
      const MatrixX m = matrix_from_json(j, 2, 2);
      state.density = m / m.trace().real();
    } else {
      throw Error(ErrorCode::InvalidArgument,
                  "inline state must be 2 spinor or 4 density entries");
    }
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown state: " + text);
  }
  return state;
}

struct CoinOptions {
  std::string preset;
  double p = 0.5;
  std::string left_json, right_json;

  CoinPair make() const {
    const bool inline_given = !left_json.empty() || !right_json.empty();
    if (preset.empty() == !inline_given)
      throw Error(ErrorCode::InvalidArgument,
                  "give exactly one of --preset or --left/--right");
    if (!preset.empty()) return preset_coin(preset, p);
    if (left_json.empty() || right_json.empty())
      throw Error(ErrorCode::InvalidArgument,
                  "inline coins need both --left and --right");
    const MatrixX left = matrix_from_json(Json::parse(left_json), 2, 2);
    const MatrixX right = matrix_from_json(Json::parse(right_json), 2, 2);
    return validate_coin_pair(left, right);
  }
};

void add_coin_options(CLI::App* cmd, CoinOptions& coin) {
  cmd->add_option("--preset", coin.preset, "preset name");
  cmd->add_option("--p", coin.p, "bitflip parameter");
  cmd->add_option("--left", coin.left_json,
                  "inline left matrix, row-major [re,im] pairs");
  cmd->add_option("--right", coin.right_json,
                  "inline right matrix, row-major [re,im] pairs");
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_)
        throw Error(ErrorCode::InvalidArgument, "cannot open output: " + path);
    }
  }

  std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }

 private:
  std::ofstream file_;
  std::ostream& fallback_;
};

void emit_json(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

// --- first-return -----------------------------------------------------------

struct FirstReturnCmd {
  CoinOptions coin;
  std::string state = "down";
  int max_steps = 16;
  bool compare_uqw = false;
  bool exact = false;
  std::string series_output;
  std::string output, format = "csv";
};

void run_first_return(const FirstReturnCmd& cmd, std::ostream& out_stream) {
  if (cmd.max_steps < 2 || cmd.max_steps % 2 != 0)
    throw Error(ErrorCode::InvalidArgument, "--max-steps must be even, >= 2");
  const CoinPair coin = cmd.coin.make();
  const StateSpec state = parse_state(cmd.state);
  const int k_max = cmd.max_steps / 2;
  const bool with_uqw = cmd.compare_uqw;
  if (with_uqw && !coin.unitary_sum)
    throw Error(ErrorCode::CoinNotUnitarySum,
                "--compare uqw needs a unitary-sum pair");
  if (with_uqw && !state.spinor)
    throw Error(ErrorCode::InvalidArgument,
                "--compare uqw needs a spinor state");

  std::vector<FirstReturnRow> rows;
  if (cmd.exact) {
    if (with_uqw) {
      rows = cumulative_return(coin, *state.spinor, k_max);
    } else {
      const ReturnSeries series = cumulative_return(coin, state.density, k_max);
      for (int k = 1; k <= k_max; ++k)
        rows.push_back({2 * k, series.term(2 * k), 0, 0,
                        series.cumulative_at(2 * k), 0, 0});
    }
  } else {
    const MonitoredRun oqw =
        oqw_monitored_series(coin, state.density, 0, cmd.max_steps);
    if (!cmd.series_output.empty()) {
      std::ofstream series(cmd.series_output, std::ios::binary);
      if (!series)
        throw Error(ErrorCode::InvalidArgument,
                    "cannot open output: " + cmd.series_output);
      series << monitored_series_csv(oqw);
    }
    std::optional<MonitoredRun> uqw;
    if (with_uqw)
      uqw = uqw_monitored_series(coin, *state.spinor, 0, cmd.max_steps);
    for (int k = 1; k <= k_max; ++k) {
      FirstReturnRow row;
      row.steps = 2 * k;
      row.oqw_term = oqw.series.term(2 * k);
      row.oqw_cumulative = oqw.series.cumulative_at(2 * k);
      if (uqw) {
        row.uqw_term = uqw->series.term(2 * k);
        row.uqw_cumulative = uqw->series.cumulative_at(2 * k);
        row.interference = row.uqw_term - row.oqw_term;
        row.interference_cumulative = row.uqw_cumulative - row.oqw_cumulative;
      }
      rows.push_back(row);
    }
  }

  if (cmd.format == "json") {
    Json j = Json::array();
    for (const auto& row : rows) {
      Json item = {{"steps", row.steps},
                   {"oqw_term", row.oqw_term},
                   {"oqw_cumulative", row.oqw_cumulative}};
      if (with_uqw) {
        item["uqw_term"] = row.uqw_term;
        item["uqw_cumulative"] = row.uqw_cumulative;
        item["interference"] = row.interference;
      }
      j.push_back(item);
    }
    emit_json(out_stream, j);
    return;
  }
  out_stream << "steps,oqw_term,uqw_term,interference,oqw_cumulative,"
                "uqw_cumulative\n";
  for (const auto& row : rows) {
    std::vector<std::string> cells{std::to_string(row.steps),
                                   format_double(row.oqw_term)};
    if (with_uqw) {
      cells.push_back(format_double(row.uqw_term));
      cells.push_back(format_double(row.interference));
      cells.push_back(format_double(row.oqw_cumulative));
      cells.push_back(format_double(row.uqw_cumulative));
    } else {
      cells.push_back("");
      cells.push_back("");
      cells.push_back(format_double(row.oqw_cumulative));
      cells.push_back("");
    }
    out_stream << csv_row(cells);
  }
}

// --- distribution ------------------------------------------------------------

struct DistributionCmd {
  CoinOptions coin;
  std::string state = "down";
  int time = 0;
  std::string kind = "auto";  // auto | both | oqw | uqw
  std::string output, format = "csv";
};

void run_distribution(const DistributionCmd& cmd, std::ostream& out_stream) {
  if (cmd.time < 0)
    throw Error(ErrorCode::InvalidArgument, "--time must be >= 0");
  const CoinPair coin = cmd.coin.make();
  const StateSpec state = parse_state(cmd.state);

  std::string kind = cmd.kind;
  if (kind == "auto")
    kind = coin.unitary_sum && state.spinor ? "both" : "oqw";
  const bool want_oqw = kind == "both" || kind == "oqw";
  const bool want_uqw = kind == "both" || kind == "uqw";
  if (!want_oqw && !want_uqw)
    throw Error(ErrorCode::InvalidArgument, "--kind must be both, oqw or uqw");
  if (want_uqw && !state.spinor)
    throw Error(ErrorCode::InvalidArgument,
                "unitary distribution needs a spinor state");

  std::map<int, double> oqw, uqw;
  if (want_oqw)
    oqw = site_distribution(LatticeDensity::point(0, state.density), coin,
                            cmd.time);
  if (want_uqw)
    uqw = site_distribution(SpinorField::point(0, *state.spinor), coin,
                            cmd.time);

  const auto value = [](const std::map<int, double>& dist, int site) {
    const auto found = dist.find(site);
    return found == dist.end() ? 0.0 : found->second;
  };

  if (cmd.format == "json") {
    Json j = Json::array();
    for (int site = -cmd.time; site <= cmd.time; ++site) {
      Json item = {{"site", site}};
      if (want_oqw) item["oqw_probability"] = value(oqw, site);
      if (want_uqw) item["uqw_probability"] = value(uqw, site);
      j.push_back(item);
    }
    emit_json(out_stream, j);
    return;
  }
  if (want_oqw && want_uqw) {
    out_stream << "site,oqw_probability,uqw_probability\n";
    for (int site = -cmd.time; site <= cmd.time; ++site)
      out_stream << csv_row({std::to_string(site),
                             format_double(value(oqw, site)),
                             format_double(value(uqw, site))});
  } else {
    const auto& dist = want_oqw ? oqw : uqw;
    out_stream << "site,probability\n";
    for (int site = -cmd.time; site <= cmd.time; ++site)
      out_stream << csv_row({std::to_string(site),
                             format_double(value(dist, site))});
  }
}

// --- fourier ------------------------------------------------------------------

struct FourierCmd {
  CoinOptions coin;
  std::string state = "down";
  std::string mode = "curves";  // curves | lambda1 | lambda1-vs-cos | p0
  int grid = 512;
  int power = 100;
  int steps = 14;
  int nodes = 0;  // 0: per-n default n + 2
  std::string method = "quadrature";  // quadrature | konno | lattice
  std::string walk = "oqw";           // oqw | uqw (uqw: lattice route only)
  bool summary = false;
  std::string output, format = "csv";
};

void run_fourier(const FourierCmd& cmd, std::ostream& out_stream) {
  const CoinPair coin = cmd.coin.make();
  if (cmd.mode == "curves") {
    const SpectralData data = spectral_curves(coin, cmd.grid);
    if (cmd.format == "json") {
      Json j = Json::array();
      for (std::size_t m = 0; m < data.grid.size(); ++m) {
        Json item = {{"k", data.grid[m]}};
        for (int b = 0; b < 4; ++b)
          item["lambda_" + std::to_string(b + 1)] =
              complex_to_json(data.branches[b][m]);
        j.push_back(item);
      }
      emit_json(out_stream, j);
      return;
    }
    out_stream << "k,re_lambda_1,re_lambda_2,re_lambda_3,re_lambda_4,"
                  "im_lambda_1,im_lambda_2,im_lambda_3,im_lambda_4\n";
    for (std::size_t m = 0; m < data.grid.size(); ++m) {
      std::vector<std::string> cells{format_double(data.grid[m])};
      for (int b = 0; b < 4; ++b)
        cells.push_back(format_double(data.branches[b][m].real()));
      for (int b = 0; b < 4; ++b)
        cells.push_back(format_double(data.branches[b][m].imag()));
      out_stream << csv_row(cells);
    }
    return;
  }

  if (cmd.mode == "lambda1" || cmd.mode == "lambda1-vs-cos") {
    if (cmd.coin.preset != "nonnormal" && cmd.coin.preset != "sec7")
      throw Error(ErrorCode::InvalidArgument,
                  "the lambda1 closed form belongs to the nonnormal preset");
    const bool with_cos = cmd.mode == "lambda1-vs-cos";
    Json j = Json::array();
    if (cmd.format != "json") {
      out_stream << (with_cos ? "k,lambda1,cos_k,lambda1_pow,cos_pow\n"
                              : "k,lambda1\n");
    }
    for (int m = 0; m <= cmd.grid; ++m) {
      const double k =
          -std::numbers::pi + 2.0 * std::numbers::pi * m / cmd.grid;
      const double lambda1 = nonnormal_lambda1(k);
      if (cmd.format == "json") {
        Json item = {{"k", k}, {"lambda1", lambda1}};
        if (with_cos) {
          item["cos_k"] = std::cos(k);
          item["lambda1_pow"] = std::pow(lambda1, cmd.power);
          item["cos_pow"] = std::pow(std::cos(k), cmd.power);
        }
        j.push_back(item);
      } else if (with_cos) {
        out_stream << csv_row({format_double(k), format_double(lambda1),
                               format_double(std::cos(k)),
                               format_double(std::pow(lambda1, cmd.power)),
                               format_double(std::pow(std::cos(k), cmd.power))});
      } else {
        out_stream << csv_row({format_double(k), format_double(lambda1)});
      }
    }
    if (cmd.format == "json") emit_json(out_stream, j);
    return;
  }

  if (cmd.mode == "p0") {
    const StateSpec state = parse_state(cmd.state);
    ReturnSeries series;
    series.kind = SeriesKind::UnmonitoredP0;
    if (cmd.walk == "uqw") {
      if (cmd.method != "lattice")
        throw Error(ErrorCode::InvalidArgument,
                    "the unitary p0 series supports --method lattice only");
      if (!state.spinor)
        throw Error(ErrorCode::InvalidArgument,
                    "the unitary p0 series needs a spinor state");
      series = unmonitored_p0_series(coin, *state.spinor, cmd.steps);
    } else if (cmd.walk != "oqw") {
      throw Error(ErrorCode::InvalidArgument, "--walk must be oqw or uqw");
    } else if (cmd.method == "lattice") {
      series = unmonitored_p0_series(coin, state.density, cmd.steps);
    } else if (cmd.method == "quadrature" || cmd.method == "konno") {
      series.terms.reserve(cmd.steps);
      for (int n = 1; n <= cmd.steps; ++n) {
        const int nodes = cmd.nodes > 0 ? cmd.nodes : n + 2;
        const double p0 =
            cmd.method == "quadrature"
                ? p0_by_quadrature(coin, state.density, n, nodes)
                : konno_dual_p0(coin, state.density, n, nodes);
        // Quadrature round-off can dip epsilon-negative at parity zeros.
        series.terms.push_back(std::max(p0, 0.0));
      }
      series.finalize();
    } else {
      throw Error(ErrorCode::InvalidArgument,
                  "--method must be quadrature, konno or lattice");
    }

    if (cmd.summary) {
      const PolyaResult polya = polya_number(series, cmd.steps);
      emit_json(out_stream, series_summary_json(series, polya));
      return;
    }
    if (cmd.format == "json") {
      Json j = Json::array();
      for (int n = 1; n <= cmd.steps; ++n)
        j.push_back({{"n", n}, {"p0", series.term(n)}, {"method", cmd.method}});
      emit_json(out_stream, j);
      return;
    }
    out_stream << "n,p0,method\n";
    for (int n = 1; n <= cmd.steps; ++n)
      out_stream << csv_row(
          {std::to_string(n), format_double(series.term(n)), cmd.method});
    return;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown fourier mode: " + cmd.mode);
}

// --- criteria -----------------------------------------------------------------

struct CriteriaCmd {
  CoinOptions coin;
  std::string output, format = "json";
};

void run_criteria(const CriteriaCmd& cmd, std::ostream& out_stream) {
  const CoinPair coin = cmd.coin.make();
  const RecurrenceVerdict verdict = eigen_half_criterion(coin);
  Json j = {{"verdict", to_string(verdict.verdict)},
            {"rule", verdict.rule},
            {"eigenvalues",
             {{"LstarL", {verdict.left_gram_eigenvalues[0],
                          verdict.left_gram_eigenvalues[1]}},
              {"RstarR", {verdict.right_gram_eigenvalues[0],
                          verdict.right_gram_eigenvalues[1]}}}},
            {"singular_bounds",
             {verdict.singular_bounds[0], verdict.singular_bounds[1]}},
            {"pq", verdict.pq}};
  if (!verdict.per_density_return.empty())
    j["per_density_return"] = verdict.per_density_return;
  if (cmd.format == "json") {
    emit_json(out_stream, j);
    return;
  }
  out_stream << "verdict,rule,l_eig_1,l_eig_2,r_eig_1,r_eig_2,bound_lo,"
                "bound_hi,pq\n";
  out_stream << csv_row({to_string(verdict.verdict), verdict.rule,
                         format_double(verdict.left_gram_eigenvalues[0]),
                         format_double(verdict.left_gram_eigenvalues[1]),
                         format_double(verdict.right_gram_eigenvalues[0]),
                         format_double(verdict.right_gram_eigenvalues[1]),
                         format_double(verdict.singular_bounds[0]),
                         format_double(verdict.singular_bounds[1]),
                         verdict.pq ? "true" : "false"});
}

// --- kac ------------------------------------------------------------------------

struct KacCmd {
  std::string preset = "barrier";
  double p11 = 1.0 / 3.0, p22 = -1.0;
  int truncation = 60;
  std::string spec_file;
  std::string state = "e11";
  int origin = 0;
  int horizon = 4000;
  std::string output, format = "json";
};

void run_kac(const KacCmd& cmd, std::ostream& out_stream) {
  SiteWalkSpec spec;
  if (!cmd.spec_file.empty()) {
    std::ifstream in(cmd.spec_file);
    if (!in)
      throw Error(ErrorCode::InvalidArgument,
                  "cannot read spec file: " + cmd.spec_file);
    spec = site_walk_from_json(Json::parse(in));
  } else if (cmd.preset == "barrier") {
    spec = barrier_spec(cmd.p11, cmd.p22 < 0 ? cmd.p11 : cmd.p22,
                        cmd.truncation);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown kac preset: " + cmd.preset);
  }
  validate_site_walk(spec);

  MatrixX rho;
  if (spec.dim == 2) {
    rho = parse_state(cmd.state).density;
  } else if (!cmd.state.empty() && cmd.state.front() == '[') {
    rho = matrix_from_json(Json::parse(cmd.state), spec.dim, spec.dim);
    rho /= rho.trace().real();
  } else {
    rho = MatrixX::Identity(spec.dim, spec.dim) / spec.dim;
  }

  const KacReport report = kac_identity_check(spec, rho, cmd.origin, cmd.horizon);
  Json j = {{"E_R", report.expected_return},
            {"tr_pi_x", report.stationary_trace},
            {"inverse_tr_pi_x", report.inverse_stationary_trace},
            {"gap", report.relative_gap},
            {"tail_mass", report.tail_mass},
            {"stationary_residual", report.stationary_residual},
            {"x", cmd.origin},
            {"horizon", cmd.horizon}};
  if (cmd.format == "json") {
    emit_json(out_stream, j);
    return;
  }
  out_stream << "E_R,tr_pi_x,gap,tail_mass\n";
  out_stream << csv_row({format_double(report.expected_return),
                         format_double(report.stationary_trace),
                         format_double(report.relative_gap),
                         format_double(report.tail_mass)});
}

// --- trajectory ------------------------------------------------------------------

struct TrajectoryCmd {
  CoinOptions coin;
  std::string state = "down";
  int start = 0;
  int horizon = 16;
  std::uint64_t seed = 1;
  int count = 1;
  std::string output, format = "csv";
};

void run_trajectory(const TrajectoryCmd& cmd, std::ostream& out_stream) {
  if (cmd.horizon < 1 || cmd.count < 1)
    throw Error(ErrorCode::InvalidArgument, "--horizon and --count must be >= 1");
  const CoinPair coin = cmd.coin.make();
  const StateSpec state = parse_state(cmd.state);

  if (cmd.count == 1) {
    const TrajectorySample sample = sample_trajectory(
        coin, state.density, cmd.start, cmd.horizon, cmd.seed);
    if (cmd.format == "json") {
      Json j = {{"seed", sample.seed},
                {"positions", sample.positions},
                {"first_return_step",
                 sample.first_return_step ? Json(*sample.first_return_step)
                                          : Json()}};
      emit_json(out_stream, j);
      return;
    }
    out_stream << "step,position\n";
    for (std::size_t n = 0; n < sample.positions.size(); ++n)
      out_stream << csv_row(
          {std::to_string(n), std::to_string(sample.positions[n])});
    return;
  }

  // Batch mode: per-trajectory seeds are seed + index, results ordered by
  // index, so the thread count never changes the output.
  std::vector<std::optional<int>> first_returns(cmd.count);
  const int threads = std::min(thread_budget(), cmd.count);
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    workers.emplace_back([&, t]() {
      for (int i = t; i < cmd.count; i += threads) {
        const TrajectorySample sample = sample_trajectory(
            coin, state.density, cmd.start, cmd.horizon, cmd.seed + i);
        first_returns[i] = sample.first_return_step;
      }
    });
  }
  for (auto& worker : workers) worker.join();

  if (cmd.format == "json") {
    int returned = 0;
    for (const auto& r : first_returns)
      if (r) ++returned;
    Json j = {{"count", cmd.count},
              {"horizon", cmd.horizon},
              {"base_seed", cmd.seed},
              {"first_return_frequency",
               static_cast<double>(returned) / cmd.count}};
    emit_json(out_stream, j);
    return;
  }
  out_stream << "trajectory,seed,first_return_step\n";
  for (int i = 0; i < cmd.count; ++i)
    out_stream << csv_row({std::to_string(i), std::to_string(cmd.seed + i),
                           first_returns[i] ? std::to_string(*first_returns[i])
                                            : ""});
}

std::vector<std::string> args_from_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::InvalidArgument, "cannot read config: " + path);
  const Json j = Json::parse(in);
  std::vector<std::string> args;
  args.push_back(j.at("command").get<std::string>());
  for (const auto& [key, value] : j.items()) {
    if (key == "command") continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back("--" + key);
    } else if (value.is_string()) {
      args.push_back("--" + key);
      args.push_back(value.get<std::string>());
    } else {
      args.push_back("--" + key);
      args.push_back(value.dump());
    }
  }
  return args;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"open and unitary quantum walks on the line: simulation and "
               "site-recurrence analysis",
               "qwalk"};
  app.require_subcommand(0, 1);

  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON file mirroring a command's flags (with a \"command\" "
                 "key); used instead of a subcommand");

  FirstReturnCmd first_return;
  CLI::App* fr = app.add_subcommand(
      "first-return", "first-return probability table per step");
  add_coin_options(fr, first_return.coin);
  fr->add_option("--state", first_return.state);
  fr->add_option("--max-steps", first_return.max_steps);
  std::string compare;
  fr->add_option("--compare", compare, "uqw: include the unitary columns");
  fr->add_flag("--exact", first_return.exact,
               "use exhaustive path enumeration instead of taboo evolution");
  fr->add_option("--series-output", first_return.series_output,
                 "also write the per-step open monitored series "
                 "(n,term,cumulative,survival)");
  fr->add_option("--output", first_return.output);
  fr->add_option("--format", first_return.format)
      ->check(CLI::IsMember({"csv", "json"}));

  DistributionCmd distribution;
  CLI::App* dist = app.add_subcommand(
      "distribution", "site distribution at a fixed time");
  add_coin_options(dist, distribution.coin);
  dist->add_option("--state", distribution.state);
  dist->add_option("--time", distribution.time);
  dist->add_option("--kind", distribution.kind)
      ->check(CLI::IsMember({"auto", "both", "oqw", "uqw"}));
  dist->add_option("--output", distribution.output);
  dist->add_option("--format", distribution.format)
      ->check(CLI::IsMember({"csv", "json"}));

  FourierCmd fourier;
  CLI::App* fo = app.add_subcommand(
      "fourier", "momentum-space analysis: curves, closed forms, p0 series");
  add_coin_options(fo, fourier.coin);
  fo->add_option("--state", fourier.state);
  fo->add_option("--curve", fourier.mode,
                 "curves | lambda1 | lambda1-vs-cos | p0");
  fo->add_option("--grid", fourier.grid);
  fo->add_option("--power", fourier.power);
  fo->add_option("--steps", fourier.steps);
  fo->add_option("--nodes", fourier.nodes);
  fo->add_option("--method", fourier.method);
  fo->add_option("--walk", fourier.walk)->check(CLI::IsMember({"oqw", "uqw"}));
  fo->add_flag("--summary", fourier.summary,
               "emit the series summary (cumulative, Polya partial, slope) "
               "as JSON instead of the rows");
  fo->add_option("--output", fourier.output);
  fo->add_option("--format", fourier.format)
      ->check(CLI::IsMember({"csv", "json"}));

  CriteriaCmd criteria;
  CLI::App* cr = app.add_subcommand(
      "criteria", "closed-form recurrence verdict with certificate");
  add_coin_options(cr, criteria.coin);
  cr->add_option("--output", criteria.output);
  cr->add_option("--format", criteria.format)
      ->check(CLI::IsMember({"csv", "json"}));

  KacCmd kac;
  CLI::App* ka = app.add_subcommand(
      "kac", "expected return time and the stationary-trace identity");
  ka->add_option("--preset", kac.preset);
  ka->add_option("--p11", kac.p11);
  ka->add_option("--p22", kac.p22);
  ka->add_option("--truncation", kac.truncation);
  ka->add_option("--spec", kac.spec_file, "walk spec as JSON");
  ka->add_option("--state", kac.state);
  ka->add_option("--x", kac.origin);
  ka->add_option("--horizon", kac.horizon);
  ka->add_option("--output", kac.output);
  ka->add_option("--format", kac.format)->check(CLI::IsMember({"csv", "json"}));

  TrajectoryCmd trajectory;
  CLI::App* tr = app.add_subcommand(
      "trajectory", "Monte Carlo quantum trajectories");
  add_coin_options(tr, trajectory.coin);
  tr->add_option("--state", trajectory.state);
  tr->add_option("--start", trajectory.start);
  tr->add_option("--horizon", trajectory.horizon);
  tr->add_option("--seed", trajectory.seed);
  tr->add_option("--count", trajectory.count);
  tr->add_option("--output", trajectory.output);
  tr->add_option("--format", trajectory.format)
      ->check(CLI::IsMember({"csv", "json"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    // --help and friends print through CLI11's machinery with code 0.
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (!config_path.empty()) {
      if (app.get_subcommands().empty())
        return run_cli(args_from_config(config_path), out, err);
      throw Error(ErrorCode::InvalidArgument,
                  "--config replaces the subcommand; give one or the other");
    }
    if (fr->parsed()) {
      if (!compare.empty() && compare != "uqw")
        throw Error(ErrorCode::InvalidArgument, "--compare supports: uqw");
      first_return.compare_uqw = compare == "uqw";
      Output output(first_return.output, out);
      run_first_return(first_return, output.stream());
    } else if (dist->parsed()) {
      Output output(distribution.output, out);
      run_distribution(distribution, output.stream());
    } else if (fo->parsed()) {
      Output output(fourier.output, out);
      run_fourier(fourier, output.stream());
    } else if (cr->parsed()) {
      Output output(criteria.output, out);
      run_criteria(criteria, output.stream());
    } else if (ka->parsed()) {
      Output output(kac.output, out);
      run_kac(kac, output.stream());
    } else if (tr->parsed()) {
      Output output(trajectory.output, out);
      run_trajectory(trajectory, output.stream());
    } else {
      err << app.help();
      return 2;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace qwalk
