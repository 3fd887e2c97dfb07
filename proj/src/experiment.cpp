#include "sinrcast/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <atomic>
#include <optional>
#include <set>
#include <thread>

#include <json.hpp>

#include "sinrcast/errors.hpp"
#include "sinrcast/programs.hpp"

namespace sinrcast {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

template <typename T>
std::vector<T> one_or_many(const json& v) {
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

}  // namespace

ExperimentSpec parse_experiment_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("experiment spec: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("experiment spec must be a JSON object");
  ExperimentSpec s;
  double alpha = s.params.alpha, beta = s.params.beta, noise = s.params.noise, eps = s.params.eps,
         eta = s.params.eta, zeta = s.params.zeta;
  try {
    for (const auto& [k, v] : j.items()) {
      if (k == "generator") s.generator = parse_generator(v.get<std::string>());
      else if (k == "n" || k == "sizes") s.sizes = one_or_many<std::size_t>(v);
      else if (k == "scale") s.scale = v.get<double>();
      else if (k == "eps") eps = v.get<double>();
      else if (k == "alpha") alpha = v.get<double>();
      else if (k == "beta") beta = v.get<double>();
      else if (k == "noise" || k == "noise_N") noise = v.get<double>();
      else if (k == "eta") eta = v.get<double>();
      else if (k == "zeta") zeta = v.get<double>();
      else if (k == "model") s.model = parse_model(v.get<std::string>());
      else if (k == "variant") s.variant = parse_variant(v.get<std::string>());
      else if (k == "seeds") s.seeds = one_or_many<std::uint64_t>(v);
      else if (k == "round_budget") s.round_budget = v.get<std::uint64_t>();
      else if (k == "selector_k" || k == "selector_k_override") s.selector_k = v.get<std::size_t>();
      else if (k == "tau" || k == "tau_override") s.tau = v.get<std::uint64_t>();
      else if (k == "dilution") s.dilution = parse_dilution(v.get<std::string>());
      else if (k == "g_target") s.g_target = v.get<double>();
      else if (k == "cluster_size") s.cluster_size = v.get<std::size_t>();
      else if (k == "min_completion") s.min_completion = v.get<double>();
      else throw ParseError("experiment spec: unknown key '" + k + "'");
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("experiment spec: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("experiment spec: ") + e.what());
  }
  s.params = SinrParams::make(alpha, beta, noise, eps, eta, zeta);
  try {
    s.params.validate();
  } catch (const Error& e) {
    throw ParseError(std::string("experiment spec: ") + e.what());
  }
  if (s.sizes.empty() || s.seeds.empty()) throw ParseError("experiment spec: sizes and seeds must be nonempty");
  if (s.round_budget == 0) throw ParseError("experiment spec: round_budget must be positive");
  return s;
}

double predictor(Variant v, std::size_t D, std::size_t n, double g, const SinrParams& params) {
  const double d = static_cast<double>(D);
  if (v == Variant::Gen) {
    const double l = std::log2(static_cast<double>(std::max<std::size_t>(n, 2)));
    return d * l * l;
  }
  const double e = params.eps;
  return d * (1.0 / (e * e * e) + std::log2(std::max(g, 1.0))) * flat_d_alpha(std::max<std::size_t>(n, 1), params);
}

Fit fit_through_origin(const std::vector<RunRow>& rows) {
  Fit f;
  double pp = 0.0, pr = 0.0;
  std::vector<double> ratios;
  for (const auto& r : rows) {
    if (!(r.predictor > 0.0)) continue;
    pp += r.predictor * r.predictor;
    pr += r.predictor * static_cast<double>(r.rounds);
    ratios.push_back(static_cast<double>(r.rounds) / r.predictor);
  }
  if (pp > 0.0) f.c = pr / pp;
  for (const auto& r : rows)
    if (r.predictor > 0.0) f.residuals.push_back(static_cast<double>(r.rounds) - f.c * r.predictor);
  if (!ratios.empty()) {
    std::sort(ratios.begin(), ratios.end());
    f.min_ratio = ratios.front();
    f.max_ratio = ratios.back();
    const std::size_t m = ratios.size() / 2;
    f.median_ratio = ratios.size() % 2 ? ratios[m] : 0.5 * (ratios[m - 1] + ratios[m]);
  }
  return f;
}

RunRow run_single(const ExperimentSpec& spec, std::size_t n, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  GenSpec gs;
  gs.generator = spec.generator;
  gs.n = n;
  gs.scale = spec.scale;
  gs.params = spec.params;
  gs.seed = seed;
  gs.g_target = spec.g_target;
  gs.cluster_size = spec.cluster_size;
  const Generated gen = generate(gs);

  RunRow row;
  row.seed = seed;
  row.n = n;
  row.rejections = gen.rejections;
  row.g = granularity(gen.net);
  const auto D = eccentricity(comm_graph(gen.net), gen.net, gen.source);
  if (!D) throw InadmissibleNetwork("generated network is disconnected");
  row.D = *D;

  ReceptionModel model = spec.model == ModelKind::Disturbance ? ReceptionModel::disturbance_model(spec.params, seed)
                         : spec.model == ModelKind::Opportunistic ? ReceptionModel::opportunistic()
                                                                  : ReceptionModel::classical();
  ProtocolConfig config;
  config.dilution = spec.dilution;
  config.selector_k = spec.selector_k;
  auto inner = std::make_unique<BroadcastProgram>(spec.variant, gen.source, config);
  BroadcastProgram* bp = inner.get();
  std::unique_ptr<Program> program = std::move(inner);
  row.tau = 1;
  if (spec.model == ModelKind::Disturbance) {
    row.tau = spec.tau.value_or(default_tau(n, spec.params.zeta));
    program = phase_wrap(std::move(program), row.tau);
  } else if (spec.tau) {
    row.tau = *spec.tau;
    program = phase_wrap(std::move(program), row.tau);
  }
  HashSink hash;
  const RunResult rr = run_protocol(*program, gen.net, model, spec.round_budget, &hash);
  row.timed_out = rr.timed_out;
  row.rounds = rr.rounds;
  row.logical_rounds = rr.logical_rounds;
  row.stages = bp->result().stages;
  row.all_informed = std::all_of(rr.final_states.begin(), rr.final_states.end(),
                                 [](const NodeState& s) { return s.informed; });
  row.predictor = predictor(spec.variant, row.D, n, row.g, spec.params);
  row.ratio = row.predictor > 0.0 ? static_cast<double>(row.rounds) / row.predictor : 0.0;
  row.trace_hash = hash.hex();
  row.wallclock = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  ExperimentResult result;
  result.spec = spec;
  std::set<std::pair<std::size_t, std::uint64_t>> done;
  std::vector<std::pair<std::size_t, std::uint64_t>> jobs;
  for (std::size_t n : spec.sizes)
    for (std::uint64_t seed : spec.seeds)
      if (done.insert({n, seed}).second) jobs.push_back({n, seed});

  // Runs share nothing, so they go to a small pool; slots keep results in job order.
  std::vector<std::optional<RunRow>> rows(jobs.size());
  std::vector<std::string> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const auto [n, seed] = jobs[j];
      try {
        rows[j] = run_single(spec, n, seed);
      } catch (const std::exception& e) {
        errors[j] = "n=" + std::to_string(n) + " seed=" + std::to_string(seed) + ": " + e.what();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(jobs.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (rows[j]) result.rows.push_back(std::move(*rows[j]));
    else {
      result.contracts_met = false;
      result.failures.push_back(errors[j]);
    }
  }
  std::sort(result.rows.begin(), result.rows.end(),
            [](const RunRow& a, const RunRow& b) { return a.n != b.n ? a.n < b.n : a.seed < b.seed; });
  result.fit = fit_through_origin(result.rows);
  std::size_t complete = 0;
  for (const auto& r : result.rows) {
    const bool ok = r.all_informed && !r.timed_out;
    complete += ok ? 1 : 0;
    if (!ok && spec.model != ModelKind::Disturbance) {
      result.contracts_met = false;
      result.failures.push_back("n=" + std::to_string(r.n) + " seed=" + std::to_string(r.seed) + ": " +
                                (r.timed_out ? "round budget exhausted" : "not all stations informed"));
    }
  }
  result.completion_rate = result.rows.empty() ? 0.0 : static_cast<double>(complete) / static_cast<double>(result.rows.size());
  if (spec.model == ModelKind::Disturbance && result.completion_rate < spec.min_completion) {
    result.contracts_met = false;
    result.failures.push_back("completion rate " + fmt_short(result.completion_rate) + " below " +
                              fmt_short(spec.min_completion));
  }
  return result;
}

std::string csv_header() {
  return "seed,n,D,g,stages,rounds,logical_rounds,tau,all_informed,timed_out,predictor,ratio,rejections,trace_hash";
}

void write_csv(std::ostream& out, const ExperimentResult& result) {
  out << csv_header() << '\n';
  for (const auto& r : result.rows) {
    out << r.seed << ',' << r.n << ',' << r.D << ',' << fmt(r.g) << ',' << r.stages << ',' << r.rounds << ','
        << r.logical_rounds << ',' << r.tau << ',' << (r.all_informed ? 1 : 0) << ',' << (r.timed_out ? 1 : 0) << ','
        << fmt(r.predictor) << ',' << fmt(r.ratio) << ',' << r.rejections << ',' << r.trace_hash << '\n';
  }
}

void write_summary(std::ostream& out, const ExperimentResult& result) {
  const auto& s = result.spec;
  out << "generator " << to_string(s.generator) << ", variant " << to_string(s.variant) << ", model "
      << to_string(s.model) << ", dilution " << to_string(s.dilution) << '\n';
  out << "alpha " << s.params.alpha << ", beta " << s.params.beta << ", noise " << s.params.noise << ", eps "
      << s.params.eps;
  if (s.model == ModelKind::Disturbance) out << ", eta " << s.params.eta << ", zeta " << s.params.zeta;
  out << '\n';
  out << "runs " << result.rows.size() << ", completion rate " << fmt_short(result.completion_rate) << '\n';
  out << "predictor "
      << (s.variant == Variant::Gen ? "D*log2(n)^2" : "D*(1/eps^3+log2 g)*d_alpha(n)") << '\n';
  out << "fit c " << fmt_short(result.fit.c) << ", ratio min/median/max " << fmt_short(result.fit.min_ratio) << " / "
      << fmt_short(result.fit.median_ratio) << " / " << fmt_short(result.fit.max_ratio) << '\n';

  std::vector<std::size_t> sizes;
  for (const auto& r : result.rows)
    if (sizes.empty() || sizes.back() != r.n) sizes.push_back(r.n);
  for (std::size_t n : sizes) {
    std::vector<double> ratios;
    std::vector<std::uint64_t> rounds;
    double wall = 0.0;
    for (const auto& r : result.rows) {
      if (r.n != n) continue;
      ratios.push_back(r.ratio);
      rounds.push_back(r.rounds);
      wall += r.wallclock;
    }
    std::sort(ratios.begin(), ratios.end());
    std::sort(rounds.begin(), rounds.end());
    out << "  n=" << n << ": runs " << ratios.size() << ", median rounds " << rounds[rounds.size() / 2]
        << ", ratio " << fmt_short(ratios.front()) << ".." << fmt_short(ratios.back()) << ", wallclock "
        << fmt_short(wall) << "s\n";
  }
  for (const auto& f : result.failures) out << "FAIL " << f << '\n';
  out << (result.contracts_met ? "contracts met" : "contracts NOT met") << '\n';
}

}  // namespace sinrcast
