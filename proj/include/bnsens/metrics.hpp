#pragma once

// Per-case outcome statistics and the aggregates reported per run.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bnsens/model.hpp"

namespace bnsens {

/// Quadratic score 2 * p_gold - sum_i p_i^2, in [-1, 1].
double quadratic_score(const Posterior& p, std::size_t gold);

struct CaseOutcome {
  std::string case_id;
  std::size_t gold = 0;
  /// Absent when the case had zero probability under every disease.
  std::optional<Posterior> posterior;
  std::size_t leading = 0;
  bool correct = false;
  /// Leading minus runner-up probability. Absent for inconsistent cases.
  std::optional<double> confidence;
  double gold_prob = 0.0;
  double score = 0.0;

  bool inconsistent() const { return !posterior.has_value(); }
};

/// Outcome of a case whose posterior is `p`.
CaseOutcome case_outcome(const Posterior& p, std::size_t gold, std::string case_id = {});

/// Outcome of a case with no consistent disease: incorrect, gold_prob 0,
/// score 0 (the score of an all-zero posterior), no confidence.
CaseOutcome inconsistent_outcome(std::size_t gold, std::string case_id = {});

/// A "(mean, count)" table cell. `count` is every case in the cell; the
/// mean is over the members that have a confidence and is absent when
/// there are none.
struct ConfidenceCell {
  std::optional<double> mean;
  std::size_t count = 0;
};

struct RunSummary {
  std::size_t n_cases = 0;
  std::size_t n_correct = 0;
  double pct_correct = 0.0;
  ConfidenceCell conf_correct;
  ConfidenceCell conf_incorrect;
  double avg_score = 0.0;
  std::size_t n_inconsistent = 0;
};

/// Throws std::invalid_argument on an empty list.
RunSummary summarize(std::span<const CaseOutcome> outcomes);

struct ComparisonSummary {
  std::size_t n_cases = 0;
  std::size_t n_better = 0;
  double pct_better = 0.0;
  std::optional<double> avg_amount_better;
  double epsilon = 0.0;
};

/// Default margin for "notably higher" posterior on the gold disease.
inline constexpr double kDefaultEpsilon = 0.01;

/// A case is better when the noisy run is correct and its gold probability
/// beats the baseline's by more than `epsilon`. Lists must be aligned case
/// by case (same ids in the same order); otherwise std::invalid_argument.
ComparisonSummary compare(std::span<const CaseOutcome> noisy,
                          std::span<const CaseOutcome> baseline, double epsilon);

}  // namespace bnsens
