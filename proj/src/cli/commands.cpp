#include "qfc/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qfc/capacity.hpp"
#include "qfc/channel_json.hpp"
#include "qfc/channels.hpp"
#include "qfc/error.hpp"
#include "qfc/feedback.hpp"
#include "qfc/rates.hpp"
#include "qfc/verify.hpp"

namespace qfc::cli {

namespace {

struct ChannelArgs {
  std::string name;
  std::string file;
  std::optional<double> param;
  std::size_t dim = 2;
};

struct OptimizerArgs {
  std::size_t restarts = CapacityOptions{}.restarts;
  double gap_tolerance = CapacityOptions{}.gap_tolerance;
  std::size_t max_iterations = CapacityOptions{}.max_iterations;
  double eigenvalue_floor = CapacityOptions{}.eigenvalue_floor;
};

struct OutputArgs {
  std::string path;
  std::string format;
};

struct Config {
  ChannelArgs channel;
  OptimizerArgs optimizer;
  OutputArgs output;
  std::uint64_t seed = 0;
  std::string param_range;
  double tolerance = kOrderingTolerance;
  double converse_tolerance = VerifyOptions{}.converse_tolerance;
  std::string suite = "all";
  std::size_t trials = 100;
  std::size_t rounds = 2;
  std::size_t messages = 4;
  RegisterDims dims;
};

void add_channel_options(CLI::App* cmd, Config& c) {
  auto* name = cmd->add_option("--channel", c.channel.name,
                               "identity | erasure | depolarizing | dephasing | amplitude-damping");
  auto* file = cmd->add_option("--channel-file", c.channel.file, "channel JSON file");
  name->excludes(file);
  file->excludes(name);
  cmd->add_option("--dim", c.channel.dim, "identity channel dimension")->capture_default_str();
}

void add_optimizer_options(CLI::App* cmd, Config& c) {
  cmd->add_option("--restarts", c.optimizer.restarts, "random starts besides I/d")
      ->capture_default_str();
  cmd->add_option("--gap-tolerance", c.optimizer.gap_tolerance, "stationarity gap target")
      ->capture_default_str();
  cmd->add_option("--max-iterations", c.optimizer.max_iterations, "iterations per start")
      ->capture_default_str();
  cmd->add_option("--eigenvalue-floor", c.optimizer.eigenvalue_floor, "floor inside logarithms")
      ->capture_default_str();
}

void add_common_options(CLI::App* cmd, Config& c, const std::string& default_format,
                        const std::vector<std::string>& formats) {
  cmd->add_option("--seed", c.seed, "random seed")->capture_default_str();
  cmd->add_option("--output", c.output.path, "write the result here instead of stdout");
  cmd->add_option("--format", c.output.format, "output format (default " + default_format + ")")
      ->check(CLI::IsMember(formats));
}

QuantumChannel build_channel(const ChannelArgs& a, std::optional<double> param) {
  if (!a.file.empty()) {
    if (param) throw InvalidArgument("--param does not apply to --channel-file");
    return load_channel(a.file);
  }
  if (a.name.empty()) throw InvalidArgument("one of --channel or --channel-file is required");
  if (a.name == "identity") {
    if (param) throw InvalidArgument("the identity channel takes --dim, not --param");
    if (a.dim == 0) throw InvalidArgument("--dim must be positive");
    return identity_channel(a.dim);
  }
  if (!param) throw InvalidArgument("channel '" + a.name + "' requires --param");
  if (a.name == "erasure") return qubit_erasure(*param);
  if (a.name == "depolarizing") return depolarizing(*param);
  if (a.name == "dephasing") return dephasing(*param);
  if (a.name == "amplitude-damping") return amplitude_damping(*param);
  throw InvalidArgument("unknown channel '" + a.name + "'");
}

CapacityOptions capacity_options(const Config& c) {
  CapacityOptions o;
  o.restarts = c.optimizer.restarts;
  o.seed = c.seed;
  o.gap_tolerance = c.optimizer.gap_tolerance;
  o.max_iterations = c.optimizer.max_iterations;
  o.eigenvalue_floor = c.optimizer.eigenvalue_floor;
  return o;
}

void emit(const Config& c, const std::string& text, std::ostream& out) {
  if (c.output.path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(c.output.path, std::ios::binary);
  if (!file) throw InvalidArgument("cannot open output file " + c.output.path);
  file << text;
  if (!file) throw InvalidArgument("failed writing output file " + c.output.path);
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string csv_text(const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
  std::string text;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text += ',';
      text += cells[i];
    }
    text += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return text;
}

struct CapacityRun {
  CapacityReport ea;
  CapacityReport coherent;

  bool converged() const { return ea.converged && coherent.converged; }
};

CapacityRun run_capacity(const QuantumChannel& ch, const Config& c) {
  const auto opts = capacity_options(c);
  return {entanglement_assisted_capacity(ch, opts), max_coherent_information(ch, opts)};
}

int report_convergence(const CapacityRun& run, std::ostream& err) {
  if (run.converged()) return kSuccess;
  err << "error: optimizer did not converge (stationarity gaps "
      << format_number(run.ea.stationarity_gap) << ", "
      << format_number(run.coherent.stationarity_gap) << ")\n";
  return kNonConvergence;
}

int cmd_capacity(const Config& c, std::ostream& out, std::ostream& err) {
  const auto ch = build_channel(c.channel, c.channel.param);
  const auto run = run_capacity(ch, c);
  const double c_e = run.ea.value;
  if (c.output.format == "csv") {
    emit(c,
         csv_text({"channel", "C_E", "Q_E", "coherent_info_max", "iterations", "stationarity_gap",
                   "multistart_spread"},
                  {{ch.name(), format_number(c_e), format_number(c_e / 2.0),
                    format_number(run.coherent.value), std::to_string(run.ea.iterations),
                    format_number(run.ea.stationarity_gap),
                    format_number(run.ea.multistart_spread)}}),
         out);
  } else {
    nlohmann::json j = {{"channel", ch.name()},
                        {"C_E", c_e},
                        {"Q_E", c_e / 2.0},
                        {"coherent_info_max", run.coherent.value},
                        {"iterations", run.ea.iterations},
                        {"stationarity_gap", run.ea.stationarity_gap},
                        {"multistart_spread", run.ea.multistart_spread},
                        {"converged", run.converged()}};
    if (c.channel.param) j["param"] = *c.channel.param;
    emit(c, json_text(j), out);
  }
  return report_convergence(run, err);
}

int cmd_sweep(const Config& c, std::ostream& out, std::ostream& err) {
  if (c.channel.name.empty()) throw InvalidArgument("sweep requires a named --channel");
  if (c.channel.name == "identity") throw InvalidArgument("the identity channel has no parameter to sweep");
  if (c.param_range.empty()) throw InvalidArgument("sweep requires --param-range start:end:step");
  const auto grid = parse_param_range(c.param_range);
  const bool erasure = c.channel.name == "erasure";
  // Validate every grid point before any optimization runs.
  for (double p : grid) build_channel(c.channel, p);

  const std::vector<std::string> header = {"param", "C_E", "Q_E", "Q_unassisted_lb", "Q_FB_star",
                                           "ordering_ok"};
  std::vector<std::vector<std::string>> rows;
  nlohmann::json array = nlohmann::json::array();
  int status = kSuccess;
  for (double p : grid) {
    const auto ch = build_channel(c.channel, p);
    const auto run = run_capacity(ch, c);
    if (report_convergence(run, err) != kSuccess) status = kNonConvergence;

    RateSet rates;
    rates.C_E = run.ea.value;
    rates.Q_E = run.ea.value / 2.0;
    rates.Q = std::max(run.coherent.value, 0.0);
    if (erasure) rates.Q_FB_star = erasure_feedback_rate(p);
    const bool ok = check_capacity_ordering(rates, c.tolerance).empty();

    rows.push_back({format_number(p), format_number(*rates.C_E), format_number(*rates.Q_E),
                    format_number(*rates.Q),
                    rates.Q_FB_star ? format_number(*rates.Q_FB_star) : std::string(),
                    ok ? "true" : "false"});
    nlohmann::json row = {{"param", p},
                          {"C_E", *rates.C_E},
                          {"Q_E", *rates.Q_E},
                          {"Q_unassisted_lb", *rates.Q},
                          {"Q_FB_star", nullptr},
                          {"ordering_ok", ok}};
    if (rates.Q_FB_star) row["Q_FB_star"] = *rates.Q_FB_star;
    array.push_back(std::move(row));
  }
  emit(c, c.output.format == "json" ? json_text(array) : csv_text(header, rows), out);
  return status;
}

int cmd_verify(const Config& c, std::ostream& out, std::ostream& err) {
  VerifyOptions o;
  o.trials = c.trials;
  o.seed = c.seed;
  o.tolerance = c.tolerance;
  o.converse_tolerance = c.converse_tolerance;
  const auto report = run_verify_suite(c.suite, o);
  for (const auto& w : report.warnings) err << "warning: " << w << "\n";
  emit(c, json_text(verify_report_to_json(report)), out);
  if (!report.passed()) {
    err << "error: " << report.failures.size() << " invariant failure(s)\n";
    return kInvariantFailure;
  }
  return kSuccess;
}

int cmd_simulate_feedback(const Config& c, std::ostream& out, std::ostream&) {
  const auto ch = build_channel(c.channel, c.channel.param);
  const auto protocol = random_protocol(ch, c.rounds, c.dims, c.messages, c.seed);
  const auto traj = simulate_feedback_protocol(protocol);
  auto j = trajectory_to_json(traj);
  j["monotonicity_slack"] = traj.monotonicity_slack;
  j["lemma1_bound_holds"] = traj.lemma_bound_holds(c.tolerance);
  emit(c, json_text(j), out);
  return kSuccess;
}

}  // namespace

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw Error("number formatting failed");
  return std::string(buf, end);
}

std::vector<double> parse_param_range(const std::string& range) {
  std::vector<double> parts;
  std::size_t begin = 0;
  for (;;) {
    const std::size_t colon = range.find(':', begin);
    const std::string piece = range.substr(begin, colon == std::string::npos ? colon : colon - begin);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
    if (piece.empty() || ec != std::errc{} || ptr != piece.data() + piece.size() || !std::isfinite(v)) {
      throw InvalidArgument("--param-range must be start:end:step, got '" + range + "'");
    }
    parts.push_back(v);
    if (colon == std::string::npos) break;
    begin = colon + 1;
  }
  if (parts.size() != 3) throw InvalidArgument("--param-range must be start:end:step, got '" + range + "'");
  const double start = parts[0], end = parts[1], step = parts[2];
  if (start > end) throw InvalidArgument("--param-range start must not exceed end");
  if (!(step > 0.0)) throw InvalidArgument("--param-range step must be positive");
  const auto count = static_cast<std::size_t>(std::floor((end - start) / step + 1e-9)) + 1;
  if (count > 100000) throw InvalidArgument("--param-range has too many points");
  std::vector<double> grid;
  for (std::size_t i = 0; i < count; ++i) {
    grid.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
  }
  return grid;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement-assisted capacities and quantum feedback protocols", "qfc"};
  app.require_subcommand(1);
  Config c;

  double param = 0.0;
  auto* capacity = app.add_subcommand("capacity", "entanglement-assisted capacity of one channel");
  add_channel_options(capacity, c);
  auto* capacity_param = capacity->add_option("--param", param, "channel parameter");
  add_optimizer_options(capacity, c);
  add_common_options(capacity, c, "json", {"json", "csv"});

  auto* sweep = app.add_subcommand("sweep", "capacities over a parameter grid");
  sweep->add_option("--channel", c.channel.name, "erasure | depolarizing | dephasing | amplitude-damping")
      ->required();
  sweep->add_option("--param-range", c.param_range, "start:end:step")->required();
  sweep->add_option("--tolerance", c.tolerance, "ordering tolerance")->capture_default_str();
  add_optimizer_options(sweep, c);
  add_common_options(sweep, c, "csv", {"csv", "json"});

  auto* verify = app.add_subcommand("verify", "seeded invariant suites");
  verify->add_option("--suite", c.suite, "suite name")
      ->check(CLI::IsMember(verify_suite_names()))
      ->capture_default_str();
  verify->add_option("--trials", c.trials, "trials per suite")->capture_default_str();
  verify->add_option("--tolerance", c.tolerance, "inequality tolerance")->capture_default_str();
  verify->add_option("--converse-tolerance", c.converse_tolerance, "tolerance on Delta <= C_E")
      ->capture_default_str();
  add_common_options(verify, c, "json", {"json"});

  auto* simulate = app.add_subcommand("simulate-feedback", "simulate a random feedback protocol");
  add_channel_options(simulate, c);
  auto* simulate_param = simulate->add_option("--param", param, "channel parameter");
  simulate->add_option("--rounds", c.rounds, "protocol rounds")->capture_default_str();
  simulate->add_option("--messages", c.messages, "message count")->capture_default_str();
  simulate->add_option("--x-dim", c.dims.x, "feedback register dimension")->capture_default_str();
  simulate->add_option("--y-dim", c.dims.y, "Bob ancilla dimension")->capture_default_str();
  simulate->add_option("--z-dim", c.dims.z, "Alice ancilla dimension")->capture_default_str();
  simulate->add_option("--tolerance", c.tolerance, "bound tolerance")->capture_default_str();
  add_common_options(simulate, c, "json", {"json"});

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  if (capacity_param->count() || simulate_param->count()) c.channel.param = param;
  if (c.output.format.empty()) c.output.format = *sweep ? "csv" : "json";

  try {
    if (*capacity) return cmd_capacity(c, out, err);
    if (*sweep) return cmd_sweep(c, out, err);
    if (*verify) return cmd_verify(c, out, err);
    return cmd_simulate_feedback(c, out, err);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const InvalidState& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const DimensionBudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvariantFailure;
  }
}

}  // namespace qfc::cli
