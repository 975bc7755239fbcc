#include "mcp/harness.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>
#include <thread>

#include "mcp/errors.hpp"
#include "mcp/stats.hpp"

namespace mcp {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

namespace {

std::string to_string(RadiusRule r) {
  switch (r) {
    case RadiusRule::kFixed: return "fixed";
    case RadiusRule::kTau: return "tau";
    case RadiusRule::kNoise: return "noise";
    case RadiusRule::kTauNoise: return "tau+noise";
    case RadiusRule::kApprox: return "approx";
  }
  return "unknown";
}

std::size_t positive(const Config& c, const std::string& key, std::int64_t fallback) {
  const std::int64_t v = c.integer(key, fallback);
  if (v < 0) throw ConfigError(c.source() + ": key '" + key + "' must be nonnegative");
  return static_cast<std::size_t>(v);
}

// Wraps enum parsers so that errors carry the key's location.
template <typename F>
auto parse_enum(const Config& c, const std::string& key, const std::string& fallback,
                F&& parse) {
  try {
    return parse(c.str(key, fallback));
  } catch (const ConfigError& e) {
    const auto it = c.entries().find(key);
    const std::string where =
        it == c.entries().end() || it->second.line == 0
            ? std::string("command line")
            : c.source() + ":" + std::to_string(it->second.line);
    throw ConfigError(where + ": " + e.what());
  }
}

}  // namespace

const std::vector<std::string>& experiment_keys() {
  static const std::vector<std::string> keys = {
      "signal.class", "signal.n", "signal.k", "signal.p", "signal.breakpoints",
      "signal.degree", "signal.beta", "signal.rows", "signal.cols", "signal.rank",
      "signal.amplitude", "signal.m", "ensemble.kind", "ensemble.d", "noise.kind",
      "noise.sigma", "noise.e", "noise.direction", "solver.program", "solver.coder",
      "solver.m", "solver.budget_bits", "solver.z_n", "solver.strategy", "solver.cap",
      "solver.seed", "solver.restarts", "solver.iterations", "solver.t0", "solver.rho",
      "solver.probes", "bound.kind", "bound.t", "trials", "seed", "workers",
      "record_wall_time"};
  return keys;
}

ExperimentConfig experiment_from_config(const Config& c) {
  c.check_keys(std::set<std::string>(experiment_keys().begin(), experiment_keys().end()));
  ExperimentConfig e;
  auto resolution = [&](const std::string& key, int fallback) {
    const auto v = c.integer(key, fallback);
    if (v < 1 || v > Resolution::kMax) {
      throw ConfigError(c.source() + ": key '" + key + "' must lie in [1, 53]");
    }
    return Resolution(static_cast<int>(v));
  };
  e.m = resolution("solver.m", 2);

  SignalSpec& s = e.signal;
  s.cls = parse_enum(c, "signal.class", "sparse", signal_class_from_string);
  s.n = positive(c, "signal.n", 8);
  s.k = positive(c, "signal.k", 1);
  s.p = c.real("signal.p", 0.5);
  s.breakpoints = positive(c, "signal.breakpoints", 1);
  s.degree = positive(c, "signal.degree", 1);
  s.beta = positive(c, "signal.beta", 1);
  s.rows = positive(c, "signal.rows", 2);
  s.cols = positive(c, "signal.cols", 2);
  s.rank = positive(c, "signal.rank", 1);
  s.amplitude = parse_enum(c, "signal.amplitude", "on_grid", amplitude_from_string);
  s.m = resolution("signal.m", e.m.bits());

  e.ensemble = parse_enum(c, "ensemble.kind", "gauss", ensemble_from_string);
  e.d = positive(c, "ensemble.d", static_cast<std::int64_t>(s.length()));

  const std::string noise = c.str("noise.kind", "none");
  const std::string direction = c.str("noise.direction", "adversarial");
  if (direction != "adversarial" && direction != "sphere") {
    throw ConfigError(c.source() + ": noise.direction must be adversarial or sphere");
  }
  if (noise == "none") {
    e.noise = NoiseModel::none();
  } else if (noise == "gauss") {
    e.noise = NoiseModel::gaussian(c.real("noise.sigma"));
  } else if (noise == "bounded") {
    e.noise = NoiseModel::bounded(c.real("noise.e"), direction == "sphere"
                                                         ? NoiseDirection::kRandomSphere
                                                         : NoiseDirection::kAdversarial);
  } else {
    throw ConfigError(c.source() + ": noise.kind must be none, gauss or bounded");
  }

  e.program = parse_enum(c, "solver.program", "mcp", program_from_string);
  e.coder = c.str("solver.coder", "sparse");
  coder_by_name(e.coder, s);  // validates the name early
  const std::string budget = c.str("solver.budget_bits", "truth");
  if (budget != "truth") e.budget_bits = positive(c, "solver.budget_bits", 0);
  const std::string z = c.str("solver.z_n", "tau");
  if (z == "tau") {
    e.radius = RadiusRule::kTau;
  } else if (z == "noise") {
    e.radius = RadiusRule::kNoise;
  } else if (z == "tau+noise") {
    e.radius = RadiusRule::kTauNoise;
  } else if (z == "approx") {
    e.radius = RadiusRule::kApprox;
  } else {
    e.radius = RadiusRule::kFixed;
    e.z_n = c.real("solver.z_n");
  }
  const std::string strategy = c.str("solver.strategy", "exhaustive");
  if (strategy == "exhaustive") {
    e.strategy = ExhaustiveStrategy{c.real("solver.cap", ExhaustiveStrategy{}.cap)};
  } else if (strategy == "anneal") {
    AnnealStrategy a;
    a.seed = static_cast<std::uint64_t>(c.integer("solver.seed", 0));
    a.restarts = positive(c, "solver.restarts", 1);
    a.schedule.iterations = positive(c, "solver.iterations", 20000);
    a.schedule.t0 = c.real("solver.t0", -1.0);
    a.schedule.rho = c.real("solver.rho", 0.995);
    a.schedule.probes = positive(c, "solver.probes", 32);
    e.strategy = a;
  } else {
    throw ConfigError(c.source() + ": solver.strategy must be exhaustive or anneal");
  }

  const std::string bound = c.str("bound.kind", "T1");
  if (bound == "none") {
    e.bound.reset();
  } else {
    e.bound = parse_enum(c, "bound.kind", "T1", bound_from_string);
    if (*e.bound != BoundKind::kT1 && *e.bound != BoundKind::kT2 &&
        *e.bound != BoundKind::kT3 && *e.bound != BoundKind::kT4) {
      throw ConfigError(c.source() + ": bound.kind must be T1, T2, T3, T4 or none");
    }
  }
  e.t = c.real("bound.t", 0.965);
  e.trials = positive(c, "trials", 0);
  e.seed = static_cast<std::uint64_t>(c.integer("seed", 0));
  e.workers = std::max<std::size_t>(1, positive(c, "workers", 1));
  e.record_wall_time = c.boolean("record_wall_time", false);
  return e;
}

std::vector<std::pair<std::string, std::string>> describe(const ExperimentConfig& e) {
  const SignalSpec& s = e.signal;
  std::vector<std::pair<std::string, std::string>> out = {
      {"signal.class", to_string(s.cls)},
      {"signal.n", std::to_string(s.n)},
      {"signal.k", std::to_string(s.k)},
      {"signal.p", format_number(s.p)},
      {"signal.breakpoints", std::to_string(s.breakpoints)},
      {"signal.degree", std::to_string(s.degree)},
      {"signal.beta", std::to_string(s.beta)},
      {"signal.rows", std::to_string(s.rows)},
      {"signal.cols", std::to_string(s.cols)},
      {"signal.rank", std::to_string(s.rank)},
      {"signal.amplitude", to_string(s.amplitude)},
      {"signal.m", std::to_string(s.m.bits())},
      {"ensemble.kind", to_string(e.ensemble)},
      {"ensemble.d", std::to_string(e.d)},
      {"noise.kind", to_string(e.noise.kind)},
  };
  if (e.noise.kind == NoiseKind::kGaussIID) out.emplace_back("noise.sigma", format_number(e.noise.sigma));
  if (e.noise.kind == NoiseKind::kBoundedDet) {
    out.emplace_back("noise.e", format_number(e.noise.e));
    out.emplace_back("noise.direction", e.noise.direction == NoiseDirection::kAdversarial
                                            ? "adversarial"
                                            : "sphere");
  }
  out.emplace_back("solver.program", to_string(e.program));
  out.emplace_back("solver.coder", e.coder);
  out.emplace_back("solver.m", std::to_string(e.m.bits()));
  out.emplace_back("solver.budget_bits",
                   e.budget_bits ? std::to_string(*e.budget_bits) : "truth");
  out.emplace_back("solver.z_n", e.radius == RadiusRule::kFixed ? format_number(e.z_n) : to_string(e.radius));
  if (const auto* ex = std::get_if<ExhaustiveStrategy>(&e.strategy)) {
    out.emplace_back("solver.strategy", "exhaustive");
    out.emplace_back("solver.cap", format_number(ex->cap));
  } else {
    const auto& a = std::get<AnnealStrategy>(e.strategy);
    out.emplace_back("solver.strategy", "anneal");
    out.emplace_back("solver.seed", std::to_string(a.seed));
    out.emplace_back("solver.restarts", std::to_string(a.restarts));
    out.emplace_back("solver.iterations", std::to_string(a.schedule.iterations));
    out.emplace_back("solver.t0", format_number(a.schedule.t0));
    out.emplace_back("solver.rho", format_number(a.schedule.rho));
    out.emplace_back("solver.probes", std::to_string(a.schedule.probes));
  }
  out.emplace_back("bound.kind", e.bound ? to_string(*e.bound) : "none");
  out.emplace_back("bound.t", format_number(e.t));
  out.emplace_back("trials", std::to_string(e.trials));
  out.emplace_back("seed", std::to_string(e.seed));
  out.emplace_back("workers", std::to_string(e.workers));
  out.emplace_back("record_wall_time", e.record_wall_time ? "true" : "false");
  return out;
}

CoderPtr coder_by_name(const std::string& name, const SignalSpec& spec) {
  if (name == "low_rank") {
    return std::make_shared<LowRankCoder>(spec.rows, spec.cols, spec.rank);
  }
  if (name == "smooth") {
    return std::make_shared<PiecewisePolyCoder>(spec.n, spec.beta, PolyBasis::kLocalSigned);
  }
  return make_coder(coder_id_from_string(name));
}

TrialRecord run_trial(const ExperimentConfig& c, std::size_t index) {
  TrialRecord rec;
  rec.trial = index;
  rec.seed = c.seed + index;
  try {
    SignalSpec spec = c.signal;
    spec.seed = rec.seed;
    const GeneratedSignal g = generate(spec);
    const auto n = static_cast<std::size_t>(g.x.size());
    const Ensemble ens{c.ensemble, c.d, n, rec.seed};
    const Eigen::MatrixXd A = draw_matrix(ens);
    const Measurement meas = measure(A, g.x, c.noise, rec.seed);
    const CoderPtr coder = coder_by_name(c.coder, spec);
    const QuantizedSignal truth = truncate(g.approximant ? *g.approximant : g.x, c.m);
    auto truth_bits = coder->try_length(truth);
    // Off-grid classes: the certificate codeword is the reference point.
    if (!truth_bits && c.m.bits() == spec.m.bits() && coder->id() == g.cert.coder) {
      truth_bits = g.cert.bits;
    }
    if (!truth_bits) throw UnrepresentableError("truth is not representable by the coder");
    rec.truth_bits = *truth_bits;

    SolverSpec solver;
    solver.program = c.program;
    solver.coder = coder;
    solver.m = c.m;
    solver.strategy = c.strategy;
    if (auto* a = std::get_if<AnnealStrategy>(&solver.strategy)) a->seed += rec.seed;
    if (c.program == Program::kLLS) solver.budget_bits = c.budget_bits.value_or(*truth_bits);
    if (c.program == Program::kRMCP) {
      switch (c.radius) {
        case RadiusRule::kFixed: solver.z_n = c.z_n; break;
        case RadiusRule::kTau: solver.z_n = feasibility_tolerance(A, c.m); break;
        case RadiusRule::kNoise: solver.z_n = c.noise.e; break;
        case RadiusRule::kTauNoise:
          solver.z_n = feasibility_tolerance(A, c.m) + c.noise.e;
          break;
        case RadiusRule::kApprox:
          solver.z_n = (std::sqrt(static_cast<double>(n)) + 2.0 * std::sqrt(static_cast<double>(c.d))) *
                       g.cert.extra("eps_bound");
          break;
      }
    }
    const auto start = std::chrono::steady_clock::now();
    const RecoveryResult res = solve(A, meas.y, solver);
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start).count();
    const Eigen::VectorXd diff = g.x - res.x_hat.values();
    rec.error_l2 = diff.norm();
    rec.error_linf = diff.cwiseAbs().maxCoeff();
    rec.residual = res.residual;
    rec.bits = res.bits;
    rec.success = res.bits == *truth_bits;

    const double nn = static_cast<double>(n);
    const double dd = static_cast<double>(c.d);
    const double kappa = static_cast<double>(*truth_bits) / c.m.bits();
    rec.epsilon = std::numeric_limits<double>::infinity();
    rec.fail_prob = 1.0;
    if (c.bound) {
      switch (*c.bound) {
        case BoundKind::kT1: {
          const auto r = t1_bound(nn, dd, c.m.bits(), kappa, c.t);
          rec.epsilon = r.epsilon;
          rec.fail_prob = r.fail_prob;
          break;
        }
        case BoundKind::kT3: {
          const auto r = t3_bound(nn, dd, c.m.bits(), kappa, c.t, c.noise.e);
          rec.epsilon = r.epsilon;
          rec.fail_prob = r.fail_prob;
          break;
        }
        case BoundKind::kT4: {
          double eps_n = 0.0;
          for (const auto& [k, v] : g.cert.extras) {
            if (k == "eps_bound") eps_n = v;
          }
          const auto r = t4_bound(nn, dd, c.m.bits(), kappa, c.t, eps_n);
          rec.epsilon = r.epsilon;
          rec.fail_prob = r.fail_prob;
          break;
        }
        case BoundKind::kT2: {
          // r = d / (8 bits) with bits = kappa m; below r = 1 the
          // probability statement is vacuous but the radius is still used.
          const double r = dd / (8.0 * static_cast<double>(*truth_bits));
          rec.epsilon = 3.0 * c.noise.sigma / std::sqrt(r) + c.m.step() * std::sqrt(nn);
          rec.fail_prob = r > 1.0 && c.noise.sigma > 0.0
                              ? t2_bound(c.noise.sigma, r, dd, c.m.bits(), kappa).fail_prob
                              : 1.0;
          break;
        }
        default:
          break;
      }
    }
    rec.within_bound = rec.error_l2 <= rec.epsilon;
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

ExperimentSummary run_experiment(const ExperimentConfig& c) {
  ExperimentSummary s;
  s.config = c;
  s.records.resize(c.trials);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < c.trials; i = next++) s.records[i] = run_trial(c, i);
  };
  const std::size_t workers = std::min(std::max<std::size_t>(c.workers, 1),
                                       std::max<std::size_t>(c.trials, 1));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  if (c.trials == 0) {
    s.verdict = "SKIP";
    return s;
  }
  double p_sum = 0.0;
  for (const auto& r : s.records) {
    if (!r.error.empty()) {
      ++s.errors;
      continue;
    }
    ++s.valid;
    s.failures += r.within_bound ? 0 : 1;
    p_sum += r.fail_prob;
  }
  if (10 * s.errors > c.trials) {
    s.verdict = "ERROR";
    return s;
  }
  if (s.valid == 0) {
    s.verdict = "SKIP";
    return s;
  }
  s.empirical_freq = static_cast<double>(s.failures) / static_cast<double>(s.valid);
  s.fail_prob = std::min(1.0, p_sum / static_cast<double>(s.valid));
  s.slack = 3.0 * binomial_std_error(s.fail_prob, s.valid);
  s.verdict = s.empirical_freq <= s.fail_prob + s.slack ? "PASS" : "FAIL";
  return s;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string records_csv(const ExperimentSummary& s) {
  const bool wall = s.config.record_wall_time;
  std::ostringstream out;
  out << "trial,seed,error_l2,error_linf,residual,bits,truth_bits,epsilon,fail_prob,"
         "within_bound,success,error";
  if (wall) out << ",wall_ms";
  out << "\r\n";
  for (const auto& r : s.records) {
    out << r.trial << ',' << r.seed << ',' << format_number(r.error_l2) << ',' << format_number(r.error_linf)
        << ',' << format_number(r.residual) << ',' << r.bits << ',' << r.truth_bits << ','
        << format_number(r.epsilon) << ',' << format_number(r.fail_prob) << ','
        << (r.within_bound ? "true" : "false") << ',' << (r.success ? "true" : "false")
        << ',' << csv_quote(r.error);
    if (wall) out << ',' << format_number(r.wall_ms);
    out << "\r\n";
  }
  return out.str();
}

namespace {

Json finite(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

}  // namespace

Json summary_json(const ExperimentSummary& s, bool with_records) {
  Json j;
  j["version"] = kVersion;
  Json config = Json::object();
  for (const auto& [k, v] : describe(s.config)) config[k] = v;
  j["config"] = config;
  j["trials"] = s.records.size();
  j["valid"] = s.valid;
  j["errors"] = s.errors;
  j["failures"] = s.failures;
  j["empirical_freq"] = s.empirical_freq;
  j["fail_prob"] = s.fail_prob;
  j["slack"] = s.slack;
  j["verdict"] = s.verdict;
  if (with_records) {
    Json recs = Json::array();
    for (const auto& r : s.records) {
      Json rj;
      rj["trial"] = r.trial;
      rj["seed"] = r.seed;
      rj["error_l2"] = r.error_l2;
      rj["error_linf"] = r.error_linf;
      rj["residual"] = r.residual;
      rj["bits"] = r.bits;
      rj["truth_bits"] = r.truth_bits;
      rj["epsilon"] = finite(r.epsilon);
      rj["fail_prob"] = r.fail_prob;
      rj["within_bound"] = r.within_bound;
      rj["success"] = r.success;
      if (!r.error.empty()) rj["error"] = r.error;
      if (s.config.record_wall_time) rj["wall_ms"] = r.wall_ms;
      recs.push_back(rj);
    }
    j["records"] = recs;
  }
  return j;
}

Json to_json(const BoundReport& r) {
  Json j;
  j["theorem"] = to_string(r.theorem);
  Json params = Json::object();
  for (const auto& [k, v] : r.params) params[k] = finite(v);
  j["params"] = params;
  j["epsilon"] = finite(r.epsilon);
  j["fail_prob"] = finite(r.fail_prob);
  j["log_fail_prob"] = finite(r.log_fail_prob);
  j["valid"] = r.valid;
  Json conditions = Json::object();
  for (const auto& [k, v] : r.conditions) conditions[k] = v;
  j["conditions"] = conditions;
  Json extras = Json::object();
  for (const auto& [k, v] : r.extras) extras[k] = finite(v);
  j["extras"] = extras;
  return j;
}

Json to_json(const ComplexityCertificate& c) {
  Json j;
  j["coder"] = to_string(c.coder);
  j["bits"] = c.bits;
  j["m"] = c.m.bits();
  j["kappa"] = c.kappa;
  j["class_bound"] = c.class_bound;
  Json extras = Json::object();
  for (const auto& [k, v] : c.extras) extras[k] = finite(v);
  j["extras"] = extras;
  return j;
}

Json to_json(const RecoveryResult& r) {
  Json j;
  j["x_hat"] = r.x_hat.indices();
  j["m"] = r.x_hat.resolution().bits();
  j["bits"] = r.bits;
  j["residual"] = r.residual;
  j["iterations"] = r.iterations;
  j["oracle_certified"] = r.oracle_certified;
  j["fallbacks"] = r.fallbacks;
  return j;
}

}  // namespace mcp
