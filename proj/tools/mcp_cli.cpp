#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mcp/bounds.hpp"
#include "mcp/coders.hpp"
#include "mcp/config.hpp"
#include "mcp/container.hpp"
#include "mcp/errors.hpp"
#include "mcp/harness.hpp"
#include "mcp/sensing.hpp"
#include "mcp/signals.hpp"
#include "mcp/solvers.hpp"
#include "mcp/suites.hpp"

namespace {

using namespace mcp;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

// Thrown for bad invocations; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string config_path;
  std::string out;
  std::string format;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + g.out + "'");
  f << text;
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

std::pair<std::string, std::string> split_assignment(const std::string& arg) {
  const auto eq = arg.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw UsageError("expected key=value, got '" + arg + "'");
  }
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

// Config file first, then key=value arguments, then --seed and --workers.
Config gather(const Globals& g, const std::vector<std::string>& overrides) {
  Config c = g.config_path.empty() ? Config::parse("", "<args>") : Config::load(g.config_path);
  for (const auto& arg : overrides) {
    const auto [k, v] = split_assignment(arg);
    c.set(k, v);
  }
  if (g.seed) c.set("seed", std::to_string(*g.seed));
  if (g.workers) c.set("workers", std::to_string(*g.workers));
  return c;
}

bool json_format(const Globals& g, bool json_default) {
  if (g.format.empty()) return json_default;
  return g.format == "json";
}

Eigen::VectorXd read_signal(const std::string& path) {
  const Eigen::MatrixXd M = matrix_from_csv(read_text(path));
  if (M.cols() != 1 && M.rows() != 1) throw UsageError("signal CSV must be a single column or row");
  return M.cols() == 1 ? Eigen::VectorXd(M.col(0)) : Eigen::VectorXd(M.row(0).transpose());
}

Json vector_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

int cmd_gen(const Globals& g, const std::vector<std::string>& args, const std::string& bitstream) {
  const ExperimentConfig e = experiment_from_config(gather(g, args));
  SignalSpec spec = e.signal;
  spec.seed = e.seed;
  const GeneratedSignal s = generate(spec);
  if (!bitstream.empty()) {
    BitstreamFile f;
    f.coder = s.cert.coder;
    f.n = static_cast<std::uint32_t>(s.x.size());
    f.m = static_cast<std::uint8_t>(spec.m.bits());
    f.bits = s.code;
    write_file(bitstream, serialize(f));
  }
  if (!json_format(g, true)) {
    emit(g, to_csv(s.x));
    return 0;
  }
  Json j;
  j["version"] = kVersion;
  Json cfg = Json::object();
  for (const auto& [k, v] : describe(e)) {
    if (k.rfind("signal.", 0) == 0 || k == "seed") cfg[k] = v;
  }
  j["config"] = cfg;
  j["x"] = vector_json(s.x);
  j["certificate"] = to_json(s.cert);
  std::string why;
  j["member"] = check_membership(spec, s, &why);
  if (!why.empty()) j["membership_note"] = why;
  emit(g, j.dump(2));
  return 0;
}

int cmd_sense(const Globals& g, const std::vector<std::string>& args, const std::string& signal) {
  if (signal.empty()) throw UsageError("sense needs --signal <csv>");
  const ExperimentConfig e = experiment_from_config(gather(g, args));
  const Eigen::VectorXd x = read_signal(signal);
  const Ensemble ens{e.ensemble, e.d, static_cast<std::size_t>(x.size()), e.seed};
  const SensingInstance inst = make_instance(ens, x, e.noise);
  if (!g.out.empty() && !json_format(g, false)) {
    Container c;
    c.put("A", inst.A);
    c.put("x", Eigen::MatrixXd(inst.x_true));
    c.put("y", Eigen::MatrixXd(inst.y));
    c.put("w", Eigen::MatrixXd(inst.w));
    c.put("seed", inst.seed);
    c.put("ensemble", to_string(e.ensemble));
    c.put("noise", to_string(e.noise.kind));
    c.put("version", std::string(kVersion));
    write_file(g.out, c.serialize());
    return 0;
  }
  Json j;
  j["version"] = kVersion;
  j["seed"] = inst.seed;
  j["ensemble"] = to_string(e.ensemble);
  j["noise"] = to_string(e.noise.kind);
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < inst.A.rows(); ++i) {
    rows.push_back(vector_json(inst.A.row(i).transpose()));
  }
  j["A"] = rows;
  j["y"] = vector_json(inst.y);
  j["w"] = vector_json(inst.w);
  emit(g, j.dump(2));
  return 0;
}

int cmd_encode(const Globals& g, const std::vector<std::string>& args, const std::string& signal,
               const std::string& decode) {
  const ExperimentConfig e = experiment_from_config(gather(g, args));
  if (!decode.empty()) {
    const BitstreamFile f = parse_bitstream(read_file(decode));
    const CoderPtr coder = f.coder == CoderId::kLowRank || f.coder == CoderId::kPiecewisePoly
                               ? coder_by_name(to_string(f.coder), e.signal)
                               : make_coder(f.coder);
    const QuantizedSignal q = coder->decode(f.bits, f.n, Resolution(f.m));
    emit(g, to_csv(q.values()));
    return 0;
  }
  if (signal.empty()) throw UsageError("encode needs --signal <csv> or --decode <file>");
  const Eigen::VectorXd x = read_signal(signal);
  const CoderPtr coder = coder_by_name(e.coder, e.signal);
  const QuantizedSignal q = truncate(x, e.m);
  const BitString code = coder->encode(q);
  const bool round_trip = coder->decode(code, q.size(), e.m) == q;
  if (!g.out.empty()) {
    BitstreamFile f;
    f.coder = coder->id();
    f.n = static_cast<std::uint32_t>(q.size());
    f.m = static_cast<std::uint8_t>(e.m.bits());
    f.bits = code;
    write_file(g.out, serialize(f));
  }
  Json j;
  j["coder"] = coder->describe();
  j["n"] = q.size();
  j["m"] = e.m.bits();
  j["bits"] = code.size();
  j["kappa"] = static_cast<double>(code.size()) / e.m.bits();
  j["round_trip"] = round_trip;
  std::cout << j.dump(2) << '\n';
  return round_trip ? 0 : kExitFail;
}

int cmd_recover(const Globals& g, const std::vector<std::string>& args,
                const std::string& instance) {
  if (instance.empty()) throw UsageError("recover needs --instance <container>");
  const ExperimentConfig e = experiment_from_config(gather(g, args));
  const Container c = Container::parse(read_file(instance));
  const Eigen::MatrixXd& A = c.matrix("A");
  const Eigen::VectorXd y = c.matrix("y").col(0);
  SignalSpec shape = e.signal;
  shape.n = static_cast<std::size_t>(A.cols());
  SolverSpec spec;
  spec.program = e.program;
  spec.coder = coder_by_name(e.coder, shape);
  spec.m = e.m;
  spec.strategy = e.strategy;
  if (auto* a = std::get_if<AnnealStrategy>(&spec.strategy)) a->seed += e.seed;
  if (e.program == Program::kLLS) {
    if (!e.budget_bits) throw UsageError("recover with lls needs solver.budget_bits");
    spec.budget_bits = e.budget_bits;
  }
  if (e.program == Program::kRMCP) {
    switch (e.radius) {
      case RadiusRule::kFixed: spec.z_n = e.z_n; break;
      case RadiusRule::kTau: spec.z_n = feasibility_tolerance(A, e.m); break;
      case RadiusRule::kNoise: spec.z_n = e.noise.e; break;
      case RadiusRule::kTauNoise: spec.z_n = feasibility_tolerance(A, e.m) + e.noise.e; break;
      case RadiusRule::kApprox:
        throw UsageError("solver.z_n = approx needs a generated signal; give a number");
    }
  }
  const RecoveryResult r = solve(A, y, spec);
  if (!json_format(g, true)) {
    emit(g, to_csv(r.x_hat.values()));
    return 0;
  }
  Json j = to_json(r);
  j["values"] = vector_json(r.x_hat.values());
  if (c.has("x")) {
    const Eigen::VectorXd x = c.matrix("x").col(0);
    if (x.size() == A.cols()) j["error_l2"] = (x - r.x_hat.values()).norm();
  }
  emit(g, j.dump(2));
  return 0;
}

struct Sweep {
  std::string key;
  std::vector<double> values;
};

std::vector<double> parse_range(const std::string& key, const std::string& text) {
  std::vector<double> parts;
  std::stringstream in(text);
  std::string piece;
  while (std::getline(in, piece, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(piece, &used));
      if (used != piece.size()) throw std::invalid_argument(piece);
    } catch (const std::exception&) {
      throw UsageError("parameter '" + key + "' expects a number or lo:hi:step, got '" + text + "'");
    }
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3 || parts[2] <= 0.0 || parts[1] < parts[0]) {
    throw UsageError("parameter '" + key + "' range must be lo:hi:step with step > 0");
  }
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (std::size_t i = 0; i <= count; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[2]);
  return out;
}

int cmd_bounds(const Globals& g, std::vector<std::string> args) {
  if (args.empty()) throw UsageError("bounds needs a bound name, 'sweep' or 'invert'");
  std::string mode = "eval";
  if (args[0] == "sweep" || args[0] == "invert") {
    mode = args[0];
    args.erase(args.begin());
    if (args.empty()) throw UsageError("bounds " + mode + " needs a bound name");
  }
  BoundKind kind;
  try {
    kind = bound_from_string(args[0]);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  std::vector<Sweep> grid;
  for (std::size_t i = 1; i < args.size(); ++i) {
    const auto [k, v] = split_assignment(args[i]);
    grid.push_back({k, parse_range(k, v)});
  }

  if (mode == "eval" || mode == "invert") {
    BoundParams p;
    for (const auto& s : grid) {
      if (s.values.size() != 1) throw UsageError("ranges are only allowed with 'bounds sweep'");
      p[s.key] = s.values[0];
    }
    if (mode == "eval") {
      emit(g, to_json(evaluate_bound(kind, p)).dump(2));
      return 0;
    }
    const auto target = p.find("target");
    if (target == p.end()) throw UsageError("bounds invert needs target=<probability>");
    const double goal = target->second;
    p.erase(target);
    const InversionResult inv = invert_for_d(kind, goal, p);
    Json j;
    j["theorem"] = to_string(kind);
    j["target"] = goal;
    j["d"] = inv.d;
    j["fail_at_d"] = inv.fail_at_d;
    j["fail_at_d_minus_1"] = inv.fail_at_d_minus_1;
    j["monotone"] = inv.monotone;
    j["notes"] = inv.notes;
    emit(g, j.dump(2));
    return 0;
  }

  std::ostringstream out;
  for (const auto& s : grid) out << csv_quote(s.key) << ',';
  out << "epsilon,fail_prob,log_fail_prob,valid\r\n";
  std::vector<std::size_t> at(grid.size(), 0);
  for (;;) {
    BoundParams p;
    for (std::size_t i = 0; i < grid.size(); ++i) p[grid[i].key] = grid[i].values[at[i]];
    for (std::size_t i = 0; i < grid.size(); ++i) out << format_number(grid[i].values[at[i]]) << ',';
    const BoundReport r = evaluate_bound(kind, p);
    out << format_number(r.epsilon) << ',' << format_number(r.fail_prob) << ','
        << format_number(r.log_fail_prob) << ','
        << (r.valid ? "true" : "false") << "\r\n";
    std::size_t i = grid.size();
    while (i > 0 && ++at[i - 1] == grid[i - 1].values.size()) at[--i] = 0;
    if (i == 0) break;
  }
  emit(g, out.str());
  return 0;
}

int cmd_verify(const Globals& g, const std::string& suite, std::optional<std::size_t> trials) {
  SuiteOptions o;
  if (g.seed) o.seed = *g.seed;
  o.trials = trials;
  if (g.workers) o.workers = *g.workers;
  std::vector<int> ids;
  try {
    ids = suite_criteria(suite);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  std::vector<CriterionResult> results;
  bool pass = true;
  for (int id : ids) {
    results.push_back(run_criterion(id, o));
    std::cout << summary_line(results.back()) << std::endl;
    pass = pass && results.back().pass;
  }
  if (!g.out.empty()) {
    if (json_format(g, false)) {
      Json j;
      j["version"] = kVersion;
      j["suite"] = suite;
      j["seed"] = o.seed;
      Json arr = Json::array();
      for (const auto& r : results) {
        Json c;
        c["id"] = r.id;
        c["name"] = r.name;
        c["pass"] = r.pass;
        c["detail"] = r.detail;
        Json checks = Json::array();
        for (const auto& k : r.checks) {
          checks.push_back({{"label", k.label}, {"value", k.value},
                            {"threshold", k.threshold}, {"pass", k.pass}});
        }
        c["checks"] = checks;
        arr.push_back(c);
      }
      j["criteria"] = arr;
      emit(g, j.dump(2));
    } else {
      emit(g, checks_csv(results));
    }
  }
  std::cout << (pass ? "PASS" : "FAIL") << ' ' << suite << std::endl;
  return pass ? 0 : kExitFail;
}

int cmd_sweep(const Globals& g, const std::vector<std::string>& args) {
  const ExperimentSummary s = run_experiment(experiment_from_config(gather(g, args)));
  if (json_format(g, false)) {
    emit(g, summary_json(s, true).dump(2));
  } else {
    emit(g, records_csv(s));
  }
  std::cerr << s.verdict << ": " << s.failures << "/" << s.valid
            << " outside the bound, fail_prob " << s.fail_prob << ", " << s.errors
            << " errors\n";
  return s.verdict == "PASS" || s.verdict == "SKIP" ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-complexity pursuit toolkit: signals, sensing, coders, solvers and bounds."};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(0, 1);
  Globals g;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  app.add_option("--config", g.config_path, "key = value experiment file")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "output path (stdout when absent)");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  auto* seed_opt = app.add_option("--seed", seed, "master seed");
  auto* workers_opt = app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);

  std::vector<std::string> kv;
  std::string signal_path, decode_path, bitstream_path, instance_path, suite = "acceptance";
  std::optional<std::size_t> trials;

  auto* gen = app.add_subcommand("gen", "generate a signal and its complexity certificate");
  gen->add_option("assignments", kv, "key=value overrides");
  gen->add_option("--bitstream", bitstream_path, "write the certificate codeword");
  auto* sense = app.add_subcommand("sense", "measure a signal: writes A, x, y, w");
  sense->add_option("--signal", signal_path, "signal CSV")->check(CLI::ExistingFile);
  sense->add_option("assignments", kv, "key=value overrides");
  auto* encode = app.add_subcommand("encode", "encode a signal, or decode a bitstream");
  encode->add_option("--signal", signal_path, "signal CSV")->check(CLI::ExistingFile);
  encode->add_option("--decode", decode_path, "bitstream file to decode")->check(CLI::ExistingFile);
  encode->add_option("assignments", kv, "key=value overrides");
  auto* recover = app.add_subcommand("recover", "solve MCP, LLS or R-MCP on a sensed instance");
  recover->add_option("--instance", instance_path, "container from 'sense'")->check(CLI::ExistingFile);
  recover->add_option("assignments", kv, "key=value overrides");
  auto* bounds = app.add_subcommand("bounds", "evaluate, sweep or invert a bound");
  bounds->add_option("args", kv, "[sweep|invert] NAME key=value...");
  auto* verify = app.add_subcommand("verify", "run an acceptance suite");
  verify->add_option("--suite", suite, "suite name")->check(CLI::IsMember(suite_names()));
  verify->add_option("--trials", trials, "trial count override");
  auto* sweep = app.add_subcommand("sweep", "run a Monte Carlo campaign");
  sweep->add_option("assignments", kv, "key=value overrides");
  for (auto* sub : {gen, sense, encode, recover, bounds, verify, sweep}) sub->fallthrough();

  if (argc <= 1) {
    std::cerr << app.help();
    return kExitUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  if (*seed_opt) g.seed = seed;
  if (*workers_opt) g.workers = workers;

  try {
    if (*gen) return cmd_gen(g, kv, bitstream_path);
    if (*sense) return cmd_sense(g, kv, signal_path);
    if (*encode) return cmd_encode(g, kv, signal_path, decode_path);
    if (*recover) return cmd_recover(g, kv, instance_path);
    if (*bounds) return cmd_bounds(g, kv);
    if (*verify) return cmd_verify(g, suite, trials);
    if (*sweep) return cmd_sweep(g, kv);
    std::cerr << app.help();
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
}
