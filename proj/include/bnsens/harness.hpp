#pragma once

// Replicated sensitivity experiments and synthetic stand-in networks.
//
// For every (prior mode, noise config) the harness perturbs the network
// once per replicate, runs every case through each perturbed copy, pools
// the outcomes, and compares them case by case against the unperturbed
// baseline.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bnsens/metrics.hpp"
#include "bnsens/model.hpp"
#include "bnsens/perturb.hpp"

namespace bnsens {

struct ExperimentPlan {
  std::vector<NoiseScheme> noise_configs;
  std::size_t replicates = 5;
  std::vector<PriorMode> prior_modes{PriorMode::Expert};
  std::uint64_t master_seed = 0;
  double epsilon = kDefaultEpsilon;
  /// Worker threads. Does not affect results.
  unsigned jobs = 1;
};

/// Throws std::invalid_argument on an unusable plan.
void check_plan(const ExperimentPlan& plan);

struct ReplicateResult {
  std::size_t index = 0;
  std::uint64_t stream_seed = 0;
  RunSummary summary;
  std::size_t degenerate_rows = 0;
};

struct ReportRow {
  PriorMode prior_mode = PriorMode::Expert;
  /// Absent for the baseline row.
  std::optional<NoiseScheme> scheme;
  std::string label;
  RunSummary pooled;
  std::optional<ComparisonSummary> comparison;
  std::vector<ReplicateResult> replicates;
  std::size_t degenerate_rows = 0;

  bool is_baseline() const { return !scheme.has_value(); }
};

struct ExperimentReport {
  ExperimentPlan plan;
  std::size_t n_cases = 0;
  /// Per prior mode, in plan order: the baseline row, then one row per
  /// noise config in plan order.
  std::vector<ReportRow> rows;
};

/// Table label for a noise config, e.g. "Normal noise, sigma=0.05".
std::string config_label(const NoiseScheme& scheme);
inline constexpr const char* kBaselineLabel = "Original knowledge base";

/// Scores one case; inconsistent cases become inconsistent_outcome.
CaseOutcome evaluate_case(const DiagnosticNetwork& net, const ResolvedCase& c, PriorMode mode);

/// One outcome per case on the unperturbed network. Throws
/// std::invalid_argument for an empty case list.
std::vector<CaseOutcome> baseline_run(const DiagnosticNetwork& net,
                                      const std::vector<CaseRecord>& cases, PriorMode mode);

/// Validates inputs (ValidationError) and the plan (std::invalid_argument),
/// then runs the full grid. The report is a deterministic function of the
/// inputs and does not depend on plan.jobs.
ExperimentReport run_experiment(const DiagnosticNetwork& net,
                                const std::vector<CaseRecord>& cases,
                                const ExperimentPlan& plan);

struct SyntheticSpec {
  std::size_t n_diseases = 20;
  std::size_t n_findings = 30;
  std::size_t states_per_finding = 2;
  /// Fraction of rows that are point masses (exact 0 and 1 entries).
  double certainty_fraction = 0.4;
  /// Scale of the Gaussian log-weights of the remaining rows. 0 gives
  /// uniform rows; larger values give sharper ones.
  double concentration = 2.0;
  std::uint64_t seed = 1;
};

/// Weight of the uniform component mixed into every non-certain synthetic
/// row, which keeps those rows strictly inside (0, 1).
inline constexpr double kSyntheticRowFloor = 1e-3;

void check_synthetic_spec(const SyntheticSpec& spec);

/// Priors are a uniformly random point of the simplex. Each cpt row is, with
/// probability certainty_fraction, a point mass on a random state, and
/// otherwise a softmax of concentration-scaled normal draws mixed with
/// kSyntheticRowFloor of the uniform distribution. Deterministic in seed.
DiagnosticNetwork generate_synthetic_network(const SyntheticSpec& spec);

/// Draws the gold disease from the priors and every finding from its row
/// given gold. Each finding is kept with probability observe_fraction
/// (1 keeps all of them).
std::vector<CaseRecord> sample_cases(const DiagnosticNetwork& net, std::size_t n,
                                     std::uint64_t seed, double observe_fraction = 1.0);

}  // namespace bnsens
