// sinrcast: generate networks, run protocols, check selectors, run experiments.
//
// Exit status: 0 when every run met its contracts, 1 when a run finished but
// broke one (timeout, uninformed stations, audit findings, selector
// violation), 2 for bad input.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sinrcast/errors.hpp"
#include "sinrcast/experiment.hpp"
#include "sinrcast/generate.hpp"
#include "sinrcast/netio.hpp"
#include "sinrcast/programs.hpp"

using namespace sinrcast;

namespace {

constexpr int kOk = 0;
constexpr int kContractBroken = 1;
constexpr int kBadInput = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- gen ----

struct GenArgs {
  std::string generator = "line";
  std::size_t n = 10;
  std::optional<std::uint64_t> seed;
  std::optional<double> scale;
  double eps = 0.2, alpha = 3.0, beta = 1.0, noise = 1.0;
  std::optional<StationId> id_domain;
  double g_target = 10.0;
  std::size_t cluster_size = 8;
  std::size_t max_retries = 1000;
  std::string out;
};

void add_param_flags(CLI::App* cmd, double& eps, double& alpha, double& beta, double& noise) {
  cmd->add_option("--eps", eps, "connectivity slack, 0 < eps < 1")->capture_default_str();
  cmd->add_option("--alpha", alpha, "path loss exponent, > 2")->capture_default_str();
  cmd->add_option("--beta", beta, "SINR threshold, >= 1")->capture_default_str();
  cmd->add_option("--noise", noise, "ambient noise")->capture_default_str();
}

int cmd_gen(const GenArgs& a) {
  if (!a.seed) throw UsageError("gen: --seed is required");
  GenSpec s;
  s.generator = parse_generator(a.generator);
  s.n = a.n;
  s.seed = *a.seed;
  s.scale = a.scale;
  s.params = SinrParams::make(a.alpha, a.beta, a.noise, a.eps);
  s.id_domain = a.id_domain;
  s.g_target = a.g_target;
  s.cluster_size = a.cluster_size;
  s.max_retries = a.max_retries;
  const Generated g = generate(s);
  auto out = open_out(a.out);
  write_network(out, g.net);
  const auto D = eccentricity(comm_graph(g.net), g.net, g.source);
  std::cout << "stations " << g.net.size() << "\nsource " << g.source << "\nD " << D.value_or(0)
            << "\ngranularity " << granularity(g.net) << "\nrejections " << g.rejections << '\n';
  return kOk;
}

// ---- run ----

struct RunArgs {
  std::string network;
  std::string program = "broadcast";
  std::string variant = "gen";
  std::string model = "classical";
  std::optional<std::uint64_t> seed;
  std::optional<StationId> source;
  double eta = 0.2, zeta = 0.1;
  std::optional<std::uint64_t> tau;
  std::uint64_t round_budget = 1'000'000'000;
  std::optional<std::size_t> selector_k;
  std::string dilution = "sufficient";
  std::string pairing = "matching";
  std::optional<double> granularity;
  std::optional<double> x;
  std::optional<double> z;
  std::string trace;
  bool audit = false;
};

int cmd_run(const RunArgs& a) {
  const ModelKind kind = parse_model(a.model);
  if (kind == ModelKind::Disturbance && !a.seed) throw UsageError("run: --seed is required for the disturbance model");
  const Network net = load_network(a.network, a.eta, a.zeta);
  const ReceptionModel model = kind == ModelKind::Disturbance      ? ReceptionModel::disturbance_model(net.params(), *a.seed)
                               : kind == ModelKind::Opportunistic ? ReceptionModel::opportunistic()
                                                                  : ReceptionModel::classical();
  ProtocolConfig cfg;
  cfg.dilution = parse_dilution(a.dilution);
  cfg.pairing = parse_pairing(a.pairing);
  cfg.selector_k = a.selector_k;
  cfg.granularity = a.granularity;
  const Variant variant = parse_variant(a.variant);

  std::unique_ptr<Program> program;
  BroadcastProgram* broadcast = nullptr;
  ElectionProgram* election = nullptr;
  if (a.program == "broadcast") {
    if (!a.source) throw UsageError("run: broadcast needs --source");
    auto p = std::make_unique<BroadcastProgram>(variant, *a.source, cfg, BroadcastOptions{a.audit});
    broadcast = p.get();
    program = std::move(p);
  } else if (a.program == "election") {
    auto p = std::make_unique<ElectionProgram>(variant, a.z, cfg);
    election = p.get();
    program = std::move(p);
  } else if (a.program == "lead-increase" || a.program == "diluted-transmit") {
    if (!a.x) throw UsageError("run: " + a.program + " needs --x");
    if (a.program == "lead-increase") program = std::make_unique<LeadIncreaseProgram>(*a.x, cfg);
    else program = std::make_unique<DilutedTransmitProgram>(*a.x, std::nullopt, cfg);
  } else if (a.program == "silent") {
    program = std::make_unique<SilentProgram>();
  } else {
    throw UsageError("run: unknown program '" + a.program + "'");
  }
  std::uint64_t tau = 1;
  if (kind == ModelKind::Disturbance) tau = a.tau.value_or(default_tau(net.size(), net.params().zeta));
  else if (a.tau) tau = *a.tau;
  if (tau != 1 || a.tau) program = phase_wrap(std::move(program), tau);

  std::vector<TraceSink*> sinks;
  HashSink hash;
  sinks.push_back(&hash);
  std::ofstream trace_file;
  std::optional<StreamSink> stream;
  if (!a.trace.empty()) {
    trace_file = open_out(a.trace);
    stream.emplace(trace_file);
    sinks.push_back(&*stream);
  }
  // Disturbed receptions legitimately fall below the undisturbed threshold,
  // so only the transmit/listen discipline is audited there.
  std::optional<AuditSink> audit;
  if (a.audit) {
    audit.emplace(kind != ModelKind::Disturbance);
    sinks.push_back(&*audit);
  }
  TeeSink tee(sinks);
  const RunResult r = run_protocol(*program, net, model, a.round_budget, &tee);

  std::vector<std::string> problems;
  if (r.timed_out) problems.push_back("round budget exhausted");
  const auto informed = std::count_if(r.final_states.begin(), r.final_states.end(), [](const NodeState& s) { return s.informed; });
  if (broadcast) {
    if (!broadcast->result().all_informed) problems.push_back("not all stations informed");
    for (const auto& p : broadcast->result().problems) problems.push_back(p);
  }
  if (election && !r.timed_out)
    for (const auto& p : election->problems(net, r.final_states)) problems.push_back(p);
  if (audit)
    for (const auto& v : audit->violations()) problems.push_back("audit: " + v);

  std::cout << "program " << r.program << "\nmodel " << to_string(kind) << "\ntau " << tau << "\nrounds " << r.rounds
            << "\nlogical_rounds " << r.logical_rounds << "\ninformed " << informed << '/' << net.size() << '\n';
  if (broadcast) std::cout << "stages " << broadcast->result().stages << '\n';
  if (election) std::cout << "leaders " << election->leaders().leader.size() << '\n';
  std::cout << "trace_hash " << hash.hex() << '\n';
  for (std::size_t i = 0; i < problems.size() && i < 20; ++i) std::cout << "problem " << problems[i] << '\n';
  std::cout << (problems.empty() ? "PASS" : "FAIL") << '\n';
  return problems.empty() ? kOk : kContractBroken;
}

// ---- verify-ssf ----

struct SsfArgs {
  std::string file;
  std::vector<std::uint64_t> build;  // I k
  std::string out;
};

int cmd_verify_ssf(const SsfArgs& a) {
  Ssf family;
  if (!a.file.empty()) {
    std::ifstream in(a.file);
    if (!in) throw UsageError("cannot read " + a.file);
    family = read_ssf(in);
  } else if (a.build.size() == 2) {
    family = build_ssf(a.build[0], a.build[1]);
  } else {
    throw UsageError("verify-ssf: give a family file or --build I k");
  }
  if (!a.out.empty()) {
    auto out = open_out(a.out);
    write_ssf(out, family);
  }
  std::cout << "I " << family.id_domain() << " k " << family.k() << " sets " << family.size() << '\n';
  const auto bad = find_violation(family);
  if (!bad) {
    std::cout << "PASS\n";
    return kOk;
  }
  std::cout << "FAIL\nZ {";
  for (std::size_t i = 0; i < bad->subset.size(); ++i) std::cout << (i ? " " : "") << bad->subset[i];
  std::cout << "} z " << bad->element << '\n';
  return kContractBroken;
}

// ---- experiment ----

struct ExpArgs {
  std::string spec;
  std::string csv;
  std::string summary;
  // Overrides; each mirrors a spec key.
  std::optional<std::string> generator, model, variant, dilution;
  std::vector<std::size_t> sizes;
  std::vector<std::uint64_t> seeds;
  std::optional<double> scale, eps, alpha, beta, noise, eta, zeta, g_target, min_completion;
  std::optional<std::uint64_t> round_budget, tau;
  std::optional<std::size_t> selector_k, cluster_size;
};

template <typename T>
void put(nlohmann::json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

int cmd_experiment(const ExpArgs& a) {
  nlohmann::json j = nlohmann::json::object();
  if (!a.spec.empty()) {
    try {
      j = nlohmann::json::parse(read_file(a.spec));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("experiment spec: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("experiment spec: expected a JSON object");
  }
  put(j, "generator", a.generator);
  put(j, "model", a.model);
  put(j, "variant", a.variant);
  put(j, "dilution", a.dilution);
  if (!a.sizes.empty()) j.erase("n"), j["sizes"] = a.sizes;
  if (!a.seeds.empty()) j["seeds"] = a.seeds;
  put(j, "scale", a.scale);
  put(j, "eps", a.eps);
  put(j, "alpha", a.alpha);
  put(j, "beta", a.beta);
  put(j, "noise", a.noise);
  put(j, "eta", a.eta);
  put(j, "zeta", a.zeta);
  put(j, "g_target", a.g_target);
  put(j, "min_completion", a.min_completion);
  put(j, "round_budget", a.round_budget);
  put(j, "tau", a.tau);
  put(j, "selector_k", a.selector_k);
  put(j, "cluster_size", a.cluster_size);
  if (!j.contains("seeds")) throw UsageError("experiment: seeds are required (spec key \"seeds\" or --seed)");

  const ExperimentSpec spec = parse_experiment_spec(j.dump());
  const ExperimentResult result = run_experiment(spec);
  if (a.csv.empty() || a.csv == "-") {
    write_csv(std::cout, result);
  } else {
    auto out = open_out(a.csv);
    write_csv(out, result);
  }
  if (!a.summary.empty()) {
    auto out = open_out(a.summary);
    write_summary(out, result);
  }
  write_summary(std::cerr, result);
  return result.contracts_met ? kOk : kContractBroken;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SINR broadcast and leader election simulator"};
  app.require_subcommand(1);

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "generate a network file");
  gen->add_option("--generator", ga.generator, "line, grid, uniform-disc or cluster")->capture_default_str();
  gen->add_option("-n,--n", ga.n, "number of stations")->capture_default_str();
  gen->add_option("--seed", ga.seed, "RNG seed (required)");
  gen->add_option("--scale", ga.scale, "spacing, disc radius or cluster distance");
  add_param_flags(gen, ga.eps, ga.alpha, ga.beta, ga.noise);
  gen->add_option("--id-domain", ga.id_domain, "ID domain size I (default n^3)");
  gen->add_option("--g-target", ga.g_target, "cluster granularity")->capture_default_str();
  gen->add_option("--cluster-size", ga.cluster_size)->capture_default_str();
  gen->add_option("--max-retries", ga.max_retries)->capture_default_str();
  gen->add_option("-o,--out", ga.out, "output file")->required();

  RunArgs ra;
  auto* run = app.add_subcommand("run", "run one protocol on a network file");
  run->add_option("network", ra.network, "network file")->required();
  run->add_option("--program", ra.program, "broadcast, election, lead-increase, diluted-transmit or silent")
      ->capture_default_str();
  run->add_option("--variant", ra.variant, "gen or gran")->capture_default_str();
  run->add_option("--model", ra.model, "classical, opportunistic or disturbance")->capture_default_str();
  run->add_option("--seed", ra.seed, "disturbance seed (required for the disturbance model)");
  run->add_option("--source", ra.source, "source station ID (broadcast)");
  run->add_option("--eta", ra.eta)->capture_default_str();
  run->add_option("--zeta", ra.zeta)->capture_default_str();
  run->add_option("--tau", ra.tau, "rounds per phase");
  run->add_option("--round-budget", ra.round_budget)->capture_default_str();
  run->add_option("--selector-k", ra.selector_k, "selector k override");
  run->add_option("--dilution", ra.dilution, "sufficient or literal")->capture_default_str();
  run->add_option("--pairing", ra.pairing, "matching or literal")->capture_default_str();
  run->add_option("--granularity", ra.granularity, "granularity bound known to stations");
  run->add_option("--x", ra.x, "grid side (lead-increase, diluted-transmit)");
  run->add_option("--z", ra.z, "leader box side (election)");
  run->add_option("--trace", ra.trace, "write the round trace here");
  run->add_flag("--audit", ra.audit, "re-check every reception and stage post-condition");

  SsfArgs sa;
  auto* ssf = app.add_subcommand("verify-ssf", "check a strongly selective family exhaustively");
  ssf->add_option("file", sa.file, "family file (header \"I k\", one set per line)");
  ssf->add_option("--build", sa.build, "build the (I, k) family instead of reading one")->expected(2);
  ssf->add_option("-o,--out", sa.out, "write the family here");

  ExpArgs ea;
  auto* exp = app.add_subcommand("experiment", "run a broadcast experiment and write CSV");
  exp->add_option("spec", ea.spec, "JSON spec file");
  exp->add_option("--csv", ea.csv, "CSV output (default stdout)");
  exp->add_option("--summary", ea.summary, "summary output");
  exp->add_option("--generator", ea.generator);
  exp->add_option("--model", ea.model);
  exp->add_option("--variant", ea.variant);
  exp->add_option("--dilution", ea.dilution);
  exp->add_option("--sizes", ea.sizes)->delimiter(',');
  exp->add_option("--seed,--seeds", ea.seeds, "seeds, comma separated")->delimiter(',');
  exp->add_option("--scale", ea.scale);
  exp->add_option("--eps", ea.eps);
  exp->add_option("--alpha", ea.alpha);
  exp->add_option("--beta", ea.beta);
  exp->add_option("--noise", ea.noise);
  exp->add_option("--eta", ea.eta);
  exp->add_option("--zeta", ea.zeta);
  exp->add_option("--g-target", ea.g_target);
  exp->add_option("--min-completion", ea.min_completion);
  exp->add_option("--round-budget", ea.round_budget);
  exp->add_option("--tau", ea.tau);
  exp->add_option("--selector-k", ea.selector_k);
  exp->add_option("--cluster-size", ea.cluster_size);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kBadInput;
  }

  try {
    if (*gen) return cmd_gen(ga);
    if (*run) return cmd_run(ra);
    if (*ssf) return cmd_verify_ssf(sa);
    if (*exp) return cmd_experiment(ea);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const GenerationFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kContractBroken;
  } catch (const InadmissibleNetwork& e) {
    std::cerr << "inadmissible: " << e.what() << '\n';
    return kContractBroken;
  } catch (const ProtocolViolation& e) {
    std::cerr << "protocol violation: " << e.what() << '\n';
    return kContractBroken;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kBadInput;
}
