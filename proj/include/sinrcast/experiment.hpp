#pragma once

// Experiment orchestration: generate, broadcast, measure, fit, export.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sinrcast/broadcast.hpp"
#include "sinrcast/generate.hpp"

namespace sinrcast {

struct ExperimentSpec {
  Generator generator = Generator::Line;
  std::vector<std::size_t> sizes{16};
  std::optional<double> scale;
  SinrParams params;
  ModelKind model = ModelKind::Classical;
  Variant variant = Variant::Gen;
  std::vector<std::uint64_t> seeds{1};
  std::uint64_t round_budget = 1'000'000'000;
  std::optional<std::size_t> selector_k;
  std::optional<std::uint64_t> tau;
  DilutionPolicy dilution = DilutionPolicy::Sufficient;
  double g_target = 10.0;
  std::size_t cluster_size = 8;
  // Disturbance runs pass when at least this fraction completes.
  double min_completion = 0.95;
};

// JSON object with keys named like the fields above (sizes may be "n").
// Throws ParseError on unknown keys or bad values.
ExperimentSpec parse_experiment_spec(const std::string& json_text);

struct RunRow {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t D = 0;
  double g = 0.0;
  std::size_t stages = 0;
  std::uint64_t rounds = 0;
  std::uint64_t logical_rounds = 0;
  std::uint64_t tau = 1;
  bool all_informed = false;
  bool timed_out = false;
  double predictor = 0.0;
  double ratio = 0.0;
  std::size_t rejections = 0;
  std::string trace_hash;
  double wallclock = 0.0;  // seconds; summary only
};

struct Fit {
  double c = 0.0;  // least squares through the origin, rounds ~ c * predictor
  double min_ratio = 0.0;
  double median_ratio = 0.0;
  double max_ratio = 0.0;
  std::vector<double> residuals;
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<RunRow> rows;  // sorted by (n, seed)
  Fit fit;
  double completion_rate = 0.0;
  bool contracts_met = true;
  std::vector<std::string> failures;
};

// Theory predictor: D log2(n)^2 (gen) or D (1/eps^3 + log2 g) d_a(n) (gran).
double predictor(Variant v, std::size_t D, std::size_t n, double g, const SinrParams& params);

Fit fit_through_origin(const std::vector<RunRow>& rows);

// One broadcast run as used by experiments.
RunRow run_single(const ExperimentSpec& spec, std::size_t n, std::uint64_t seed);

ExperimentResult run_experiment(const ExperimentSpec& spec);

// Column order is fixed; see csv_header().
std::string csv_header();
void write_csv(std::ostream& out, const ExperimentResult& result);
void write_summary(std::ostream& out, const ExperimentResult& result);

}  // namespace sinrcast
