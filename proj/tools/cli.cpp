#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "msj/model.hpp"
#include "msj/parallel.hpp"
#include "msj/rm.hpp"
#include "msj/saturated.hpp"
#include "msj/simulator.hpp"
#include "msj/stability.hpp"

namespace msj::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

std::string csv_field(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

void write_csv(std::ostream& out, const Table& table) {
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out << ',';
      out << csv_field(fields[i]);
    }
    out << "\r\n";
  };
  line(table.columns);
  for (const auto& row : table.rows) line(row);
}

Json params_json(const MsjParams& p) {
  return Json{{"n1", p.n1}, {"n2", p.n2}, {"n", p.n},     {"mu1", p.mu1},
              {"mu2", p.mu2}, {"p1", p.p1}, {"p2", p.p2()}};
}

Json rm_params_json(const RmParams& p) {
  return Json{{"n", p.n}, {"mu", p.mu}, {"class_probs", p.class_probs}};
}

std::vector<std::string> params_cells(const MsjParams& p) {
  return {std::to_string(p.n1), std::to_string(p.n2), std::to_string(p.n), format_double(p.mu1),
          format_double(p.mu2), format_double(p.p1),  format_double(p.p2())};
}

const std::vector<std::string> kParamColumns = {"n1", "n2", "n", "mu1", "mu2", "p1", "p2"};

// Options shared by every command.
struct Common {
  std::string format;
  std::string output;
  unsigned threads = default_threads();
};

struct MsjFlags {
  MsjParams params;
  bool rates_required = true;
  bool mix_required = true;
};

void add_msj_flags(CLI::App* cmd, MsjFlags& flags) {
  cmd->add_option("--n1", flags.params.n1, "Servers per class-1 job")->required();
  cmd->add_option("--n2", flags.params.n2, "Servers per class-2 job")->required();
  cmd->add_option("--n", flags.params.n, "Total servers")->required();
  auto* mu1 = cmd->add_option("--mu1", flags.params.mu1, "Class-1 completion rate");
  auto* mu2 = cmd->add_option("--mu2", flags.params.mu2, "Class-2 completion rate");
  auto* p1 = cmd->add_option("--p1", flags.params.p1, "Class-1 probability");
  if (flags.rates_required) {
    mu1->required();
    mu2->required();
  }
  if (flags.mix_required) p1->required();
}

void add_common(CLI::App* cmd, Common& common, const std::string& default_format) {
  common.format = default_format;
  cmd->add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--output,-o", common.output, "Write to this file instead of stdout");
  cmd->add_option("--threads", common.threads, "Worker threads (default: MSJ_THREADS or 1)")
      ->check(CLI::PositiveNumber);
}

struct Emitted {
  Json json;
  Table table;
};

Json report_json(const StabilityReport& r) {
  return Json{{"lambda_star", r.lambda_star},
              {"lambda_naive", r.lambda_naive},
              {"mean_server_seconds", r.mean_server_seconds},
              {"limiting_wastage", r.limiting_wastage},
              {"utilization", r.utilization}};
}

Emitted analyze(const MsjParams& params, std::optional<double> lambda) {
  const StabilityReport r = report(params);
  Emitted out;
  out.json = {{"command", "analyze"}, {"params", params_json(params)}};
  out.json.update(report_json(r));
  out.json["at_lambda_star"] = "boundary: stability at lambda == lambda_star is undetermined";

  out.table.columns = kParamColumns;
  for (const char* c :
       {"lambda_star", "lambda_naive", "mean_server_seconds", "limiting_wastage", "utilization"}) {
    out.table.columns.emplace_back(c);
  }
  std::vector<std::string> row = params_cells(params);
  for (double v :
       {r.lambda_star, r.lambda_naive, r.mean_server_seconds, r.limiting_wastage, r.utilization}) {
    row.push_back(format_double(v));
  }
  if (lambda) {
    const char* verdict = to_string(classify(params, *lambda));
    out.json["lambda"] = *lambda;
    out.json["verdict"] = verdict;
    out.table.columns.emplace_back("lambda");
    out.table.columns.emplace_back("verdict");
    row.push_back(format_double(*lambda));
    row.emplace_back(verdict);
  }
  out.table.rows.push_back(std::move(row));
  return out;
}

Emitted sweep_mix_command(const MsjParams& base, const Grid& grid, unsigned threads) {
  const std::vector<double> p2 = grid.values();
  const std::vector<MixRow> rows = sweep_mix(base, p2, threads);
  Emitted out;
  out.table.columns = {"p2",          "lambda1_star",  "lambda2_star", "wastage",
                       "utilization", "naive_lambda1", "naive_lambda2"};
  Json json_rows = Json::array();
  for (const MixRow& r : rows) {
    out.table.rows.push_back({format_double(r.p2), format_double(r.lambda1_star),
                              format_double(r.lambda2_star), format_double(r.wastage),
                              format_double(r.utilization), format_double(r.naive_lambda1),
                              format_double(r.naive_lambda2)});
    json_rows.push_back({{"p2", r.p2},
                         {"lambda1_star", r.lambda1_star},
                         {"lambda2_star", r.lambda2_star},
                         {"wastage", r.wastage},
                         {"utilization", r.utilization},
                         {"naive_lambda1", r.naive_lambda1},
                         {"naive_lambda2", r.naive_lambda2}});
  }
  Json params = params_json(base);
  params.erase("p1");
  params.erase("p2");
  out.json = {{"command", "sweep-mix"},
              {"params", params},
              {"grid", {{"lo", grid.lo}, {"hi", grid.hi}, {"log", grid.log}, {"count", grid.count}}},
              {"rows", json_rows}};
  return out;
}

Emitted sweep_ratio_command(const MsjParams& base, const Grid& grid, unsigned threads) {
  const std::vector<double> ratios = grid.values();
  const std::vector<RatioRow> rows = sweep_ratio(base, ratios, threads);
  Emitted out;
  out.table.columns = {"ratio", "wastage"};
  Json json_rows = Json::array();
  for (const RatioRow& r : rows) {
    out.table.rows.push_back({format_double(r.ratio), format_double(r.wastage)});
    json_rows.push_back({{"ratio", r.ratio}, {"wastage", r.wastage}});
  }
  Json params = params_json(base);
  params.erase("mu1");
  params.erase("mu2");
  out.json = {{"command", "sweep-ratio"},
              {"params", params},
              {"grid", {{"lo", grid.lo}, {"hi", grid.hi}, {"log", grid.log}, {"count", grid.count}}},
              {"rows", json_rows}};
  return out;
}

std::vector<double> parse_probs(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("--probs: '" + item + "' is not a number");
    }
    if (used != item.size()) throw std::invalid_argument("--probs: '" + item + "' is not a number");
    out.push_back(value);
  }
  if (out.empty()) throw std::invalid_argument("--probs must list at least one probability");
  return out;
}

Emitted rm_command(const RmParams& params, const std::string& method, std::optional<double> lambda) {
  double x = 0.0;
  if (method == "enumerate") {
    x = rm_throughput_enumerate(params);
  } else if (method == "dp") {
    x = rm_throughput_dp(params);
  } else {
    x = rm_throughput(params);
  }
  Emitted out;
  out.json = {{"command", "rm"}, {"params", rm_params_json(params)}, {"method", method},
              {"throughput", x}};
  out.table.columns = {"n", "mu", "class_probs", "method", "throughput"};
  std::string probs;
  for (std::size_t k = 0; k < params.class_probs.size(); ++k) {
    if (k > 0) probs += ';';
    probs += format_double(params.class_probs[k]);
  }
  std::vector<std::string> row = {std::to_string(params.n), format_double(params.mu), probs, method,
                                  format_double(x)};
  if (lambda) {
    const char* verdict = to_string(rm_is_stable(params, *lambda));
    out.json["lambda"] = *lambda;
    out.json["verdict"] = verdict;
    out.table.columns.emplace_back("lambda");
    out.table.columns.emplace_back("verdict");
    row.push_back(format_double(*lambda));
    row.emplace_back(verdict);
  }
  out.table.rows.push_back(std::move(row));
  return out;
}

struct SimFlags {
  std::string mode = "saturated";
  std::optional<double> lambda;
  std::optional<double> load;
  std::uint64_t seed = 1;
  std::optional<double> horizon;
  double events = 1e6;
  std::optional<double> warmup;
  int batches = 20;
  int replications = 1;
  bool estimate = false;
  double tolerance = 0.05;
};

Json stats_json(const SimStats& s) {
  auto est = [](const Estimate& e) { return Json{{"mean", e.mean}, {"std_error", e.std_error}}; };
  return Json{{"throughput", est(s.throughput)},
              {"mean_response_time", est(s.mean_response_time)},
              {"mean_queue_length", est(s.mean_queue_length)},
              {"queue_growth_rate", est(s.queue_growth_rate)},
              {"time_avg_wastage_saturated", s.time_avg_wastage_saturated},
              {"time_avg_wastage_conditional", s.time_avg_wastage_conditional},
              {"queue_nonempty_fraction", s.queue_nonempty_fraction},
              {"completions_class1", s.completions_class1},
              {"completions_class2", s.completions_class2},
              {"events", s.events},
              {"final_queue_length", s.final_queue_length},
              {"blocked_idle_fraction", s.blocked_idle_fraction},
              {"off_list_visits", s.off_list_visits}};
}

Emitted simulate_command(const MsjParams& params, const SimFlags& flags, unsigned threads) {
  if (flags.estimate) {
    const EmpiricalInterval interval = estimate_lambda_star_empirical(params, flags.tolerance,
                                                                      {.seed = flags.seed});
    Emitted out;
    out.json = {{"command", "simulate"},
                {"params", params_json(params)},
                {"estimate_lambda_star", true},
                {"tolerance", flags.tolerance},
                {"seed", flags.seed},
                {"lo", interval.lo},
                {"hi", interval.hi},
                {"stable_rate", interval.stable_rate},
                {"unstable_rate", interval.unstable_rate},
                {"runs", interval.runs},
                {"converged", interval.converged},
                {"analytical_lambda_star", lambda_star(params)}};
    out.table.columns = {"lo", "hi", "stable_rate", "unstable_rate", "runs", "converged"};
    out.table.rows.push_back({format_double(interval.lo), format_double(interval.hi),
                              format_double(interval.stable_rate),
                              format_double(interval.unstable_rate), std::to_string(interval.runs),
                              interval.converged ? "true" : "false"});
    return out;
  }

  const SimMode mode = flags.mode == "open" ? SimMode::kOpen : SimMode::kSaturated;
  double lambda = 0.0;
  if (mode == SimMode::kOpen) {
    if (flags.lambda && flags.load) throw InvalidParameters("give only one of --lambda and --load");
    if (flags.lambda) {
      lambda = *flags.lambda;
    } else if (flags.load) {
      lambda = *flags.load * lambda_star(params);
    } else {
      throw InvalidParameters("open mode needs --lambda or --load");
    }
  }
  // Horizon from an event budget: departures at ~X, plus arrivals in open mode.
  const double event_rate = mode == SimMode::kOpen ? 2.0 * lambda : lambda_star(params);
  const double horizon = flags.horizon.value_or(flags.events / event_rate);

  const auto count = static_cast<std::size_t>(flags.replications);
  std::vector<SimConfig> configs(count);
  for (std::size_t i = 0; i < count; ++i) {
    SimConfig& c = configs[i];
    c = make_config(params, mode, horizon, flags.seed + i, lambda);
    if (flags.warmup) c.warmup = *flags.warmup;
    c.batches = flags.batches;
    validate(c);
  }
  std::vector<SimStats> stats(count);
  parallel_for(count, threads, [&](std::size_t i) { stats[i] = simulate(configs[i]); });

  Emitted out;
  Json runs = Json::array();
  out.table.columns = {"seed",
                       "throughput",
                       "throughput_se",
                       "mean_response_time",
                       "response_time_se",
                       "mean_queue_length",
                       "queue_length_se",
                       "queue_growth_rate",
                       "time_avg_wastage_saturated",
                       "time_avg_wastage_conditional",
                       "completions_class1",
                       "completions_class2",
                       "events",
                       "final_queue_length"};
  for (std::size_t i = 0; i < count; ++i) {
    const SimStats& s = stats[i];
    Json run = {{"seed", configs[i].seed}};
    run.update(stats_json(s));
    runs.push_back(run);
    out.table.rows.push_back({std::to_string(configs[i].seed),
                              format_double(s.throughput.mean),
                              format_double(s.throughput.std_error),
                              format_double(s.mean_response_time.mean),
                              format_double(s.mean_response_time.std_error),
                              format_double(s.mean_queue_length.mean),
                              format_double(s.mean_queue_length.std_error),
                              format_double(s.queue_growth_rate.mean),
                              format_double(s.time_avg_wastage_saturated),
                              format_double(s.time_avg_wastage_conditional),
                              std::to_string(s.completions_class1),
                              std::to_string(s.completions_class2),
                              std::to_string(s.events),
                              std::to_string(s.final_queue_length)});
  }
  out.json = {{"command", "simulate"},
              {"params", params_json(params)},
              {"mode", flags.mode},
              {"lambda", lambda},
              {"horizon", horizon},
              {"warmup", configs.front().warmup},
              {"batches", flags.batches},
              {"runs", runs}};
  return out;
}

Emitted verify_command(const MsjParams& params, double tol) {
  const StateSpace space(params);
  const TransitionMatrix tm = transition_matrix(space);
  const Distribution product = embedded_steady_state(space);
  const Distribution oracle = solve_dtmc_oracle(tm);
  const BalanceReport balance = verify_balance(tm, product, params);
  const double ctmc = ctmc_balance_residual(params);
  double oracle_diff = 0.0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    oracle_diff = std::max(oracle_diff, std::abs(product[i] - oracle[i]));
  }
  const bool pass = balance.within(tol) && ctmc <= tol;

  Emitted out;
  out.json = {{"command", "verify"},
              {"params", params_json(params)},
              {"states", space.size()},
              {"tolerance", tol},
              {"max_residual_full", balance.max_residual_full},
              {"max_residual_class1", balance.max_residual_class1},
              {"max_residual_class2", balance.max_residual_class2},
              {"ctmc_residual", ctmc},
              {"oracle_max_abs_diff", oracle_diff},
              {"pass", pass}};
  out.table.columns = kParamColumns;
  for (const char* c : {"states", "tolerance", "max_residual_full", "max_residual_class1",
                        "max_residual_class2", "ctmc_residual", "oracle_max_abs_diff", "pass"}) {
    out.table.columns.emplace_back(c);
  }
  std::vector<std::string> row = params_cells(params);
  row.push_back(std::to_string(space.size()));
  for (double v : {tol, balance.max_residual_full, balance.max_residual_class1,
                   balance.max_residual_class2, ctmc, oracle_diff}) {
    row.push_back(format_double(v));
  }
  row.emplace_back(pass ? "true" : "false");
  out.table.rows.push_back(std::move(row));
  return out;
}

void write_error(std::ostream& err, int code, const std::string& kind, const std::string& message) {
  err << Json{{"error", {{"code", code}, {"kind", kind}, {"message", message}}}}.dump() << '\n';
}

void emit(const Emitted& result, const Common& common, std::ostream& out) {
  std::ofstream file;
  std::ostream* sink = &out;
  if (!common.output.empty()) {
    file.open(common.output, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file " + common.output);
    sink = &file;
  }
  if (common.format == "csv") {
    write_csv(*sink, result.table);
  } else {
    *sink << result.json.dump(2) << '\n';
  }
}

}  // namespace

std::vector<double> Grid::values() const {
  std::vector<double> out;
  if (count == 1) return {lo};
  out.reserve(static_cast<std::size_t>(count));
  const double a = log ? std::log(lo) : lo;
  const double b = log ? std::log(hi) : hi;
  for (int i = 0; i < count; ++i) {
    if (i == 0) {
      out.push_back(lo);
    } else if (i == count - 1) {
      out.push_back(hi);
    } else {
      const double t = a + (b - a) * i / (count - 1);
      out.push_back(log ? std::exp(t) : t);
    }
  }
  return out;
}

Grid parse_grid(std::string_view text) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  const std::string where = "grid '" + std::string(text) + "'";
  if (parts.size() != 4) throw std::invalid_argument(where + ": expected lo:hi:lin|log:count");

  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument(where + ": '" + s + "' is not a number");
    }
    if (used != s.size() || !std::isfinite(v)) {
      throw std::invalid_argument(where + ": '" + s + "' is not a finite number");
    }
    return v;
  };

  Grid grid;
  grid.lo = number(parts[0]);
  grid.hi = number(parts[1]);
  if (parts[2] == "log") {
    grid.log = true;
  } else if (parts[2] != "lin") {
    throw std::invalid_argument(where + ": spacing must be lin or log");
  }
  const double count = number(parts[3]);
  if (count < 1 || count != std::floor(count) || count > 1e7) {
    throw std::invalid_argument(where + ": count must be a positive integer");
  }
  grid.count = static_cast<int>(count);
  if (grid.hi < grid.lo) throw std::invalid_argument(where + ": hi must be >= lo");
  if (grid.log && !(grid.lo > 0.0)) throw std::invalid_argument(where + ": log grid needs lo > 0");
  return grid;
}

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stability, throughput and wastage of two-class FCFS multiserver-job systems"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // One per subcommand so that each keeps its own default format.
  Common analyze_common, mix_common, ratio_common, rm_common, sim_common, verify_common;
  std::optional<double> lambda;

  MsjFlags analyze_flags;
  auto* analyze_cmd = app.add_subcommand("analyze", "Stability report for one system");
  add_msj_flags(analyze_cmd, analyze_flags);
  add_common(analyze_cmd, analyze_common, "json");
  analyze_cmd->add_option("--lambda", lambda, "Also classify this arrival rate");

  MsjFlags mix_flags{.params = {}, .rates_required = true, .mix_required = false};
  std::string p2_grid = "0:1:lin:512";
  auto* mix_cmd = app.add_subcommand("sweep-mix", "Stability region as the class mix varies");
  add_msj_flags(mix_cmd, mix_flags);
  add_common(mix_cmd, mix_common, "csv");
  mix_cmd->add_option("--p2", p2_grid, "p2 grid lo:hi:lin|log:count")->capture_default_str();

  MsjFlags ratio_flags{.params = {}, .rates_required = false, .mix_required = true};
  std::string ratio_grid = "1e-3:1e3:log:400";
  auto* ratio_cmd = app.add_subcommand("sweep-ratio", "Saturated wastage against mu2/mu1");
  add_msj_flags(ratio_cmd, ratio_flags);
  add_common(ratio_cmd, ratio_common, "csv");
  ratio_cmd->add_option("--ratios", ratio_grid, "Ratio grid lo:hi:lin|log:count")
      ->capture_default_str();

  RmParams rm_params;
  std::string probs;
  std::string method = "auto";
  auto* rm_cmd = app.add_subcommand("rm", "Single-rate model with arbitrary server demands");
  rm_cmd->add_option("--n", rm_params.n, "Total servers")->required();
  rm_cmd->add_option("--mu", rm_params.mu, "Common completion rate")->capture_default_str();
  rm_cmd->add_option("--probs", probs, "p_1,p_2,...,p_K for demands 1..K")->required();
  rm_cmd->add_option("--method", method, "Throughput method")
      ->check(CLI::IsMember({"auto", "enumerate", "dp"}))
      ->capture_default_str();
  rm_cmd->add_option("--lambda", lambda, "Also classify this arrival rate");
  add_common(rm_cmd, rm_common, "json");

  MsjFlags sim_params;
  SimFlags sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Discrete-event simulation");
  add_msj_flags(sim_cmd, sim_params);
  add_common(sim_cmd, sim_common, "json");
  sim_cmd->add_option("--mode", sim.mode, "saturated or open")
      ->check(CLI::IsMember({"saturated", "open"}))
      ->capture_default_str();
  sim_cmd->add_option("--lambda", sim.lambda, "Arrival rate (open mode)");
  sim_cmd->add_option("--load", sim.load, "Arrival rate as a multiple of lambda* (open mode)");
  sim_cmd->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  sim_cmd->add_option("--horizon", sim.horizon, "Simulated time (overrides --events)");
  sim_cmd->add_option("--events", sim.events, "Approximate event budget")->capture_default_str();
  sim_cmd->add_option("--warmup", sim.warmup, "Warmup time (default 10% of horizon)");
  sim_cmd->add_option("--batches", sim.batches, "Batch-means batches")->capture_default_str();
  sim_cmd->add_option("--replications", sim.replications, "Independent runs with seeds seed, seed+1, ...")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim_cmd->add_flag("--estimate-lambda-star", sim.estimate, "Bracket lambda* by bisection");
  sim_cmd->add_option("--tolerance", sim.tolerance, "Relative bisection tolerance")
      ->capture_default_str();

  MsjFlags verify_flags;
  double tol = 1e-10;
  auto* verify_cmd = app.add_subcommand("verify", "Balance-equation residuals of the product form");
  add_msj_flags(verify_cmd, verify_flags);
  add_common(verify_cmd, verify_common, "json");
  verify_cmd->add_option("--tol", tol, "Residual tolerance")->capture_default_str();

  std::vector<const char*> argv{"msj"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    write_error(err, kBadFlags, "bad_flags", e.what());
    return kBadFlags;
  }

  const Common& common = *analyze_cmd ? analyze_common
                         : *mix_cmd   ? mix_common
                         : *ratio_cmd ? ratio_common
                         : *rm_cmd    ? rm_common
                         : *sim_cmd   ? sim_common
                                      : verify_common;
  try {
    Emitted result;
    if (*analyze_cmd) {
      result = analyze(analyze_flags.params, lambda);
    } else if (*mix_cmd) {
      Grid grid;
      try {
        grid = parse_grid(p2_grid);
      } catch (const std::invalid_argument& e) {
        write_error(err, kBadFlags, "bad_flags", e.what());
        return kBadFlags;
      }
      result = sweep_mix_command(mix_flags.params, grid, common.threads);
    } else if (*ratio_cmd) {
      Grid grid;
      try {
        grid = parse_grid(ratio_grid);
      } catch (const std::invalid_argument& e) {
        write_error(err, kBadFlags, "bad_flags", e.what());
        return kBadFlags;
      }
      result = sweep_ratio_command(ratio_flags.params, grid, common.threads);
    } else if (*rm_cmd) {
      try {
        rm_params.class_probs = parse_probs(probs);
      } catch (const std::invalid_argument& e) {
        write_error(err, kBadFlags, "bad_flags", e.what());
        return kBadFlags;
      }
      result = rm_command(rm_params, method, lambda);
    } else if (*sim_cmd) {
      result = simulate_command(sim_params.params, sim, common.threads);
    } else if (*verify_cmd) {
      result = verify_command(verify_flags.params, tol);
      emit(result, common, out);
      if (!result.json["pass"].get<bool>()) {
        write_error(err, kResidualTooLarge, "residual_too_large",
                    "balance residual exceeds tolerance " + format_double(tol));
        return kResidualTooLarge;
      }
      return kOk;
    }
    emit(result, common, out);
    return kOk;
  } catch (const InvalidParameters& e) {
    write_error(err, kInvalidParameters, "invalid_parameters", e.what());
  } catch (const EnumerationTooLarge& e) {
    write_error(err, kInvalidParameters, "enumeration_too_large", e.what());
  } catch (const std::exception& e) {
    write_error(err, kInvalidParameters, "error", e.what());
  }
  return kInvalidParameters;
}

}  // namespace msj::cli
