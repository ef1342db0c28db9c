#pragma once

// Single-fault diagnostic networks: one disease node with a prior, and
// findings that are conditionally independent given the disease.

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bnsens {

struct Disease {
  std::string id;
  std::string name;
};

struct FindingVariable {
  std::string id;
  std::vector<std::string> states;

  /// Index of `label` in `states`, or npos.
  std::size_t state_index(const std::string& label) const;
};

/// P(finding state | disease), one entry per state of the finding.
struct ConditionalRow {
  std::string finding;
  std::string disease;
  std::vector<double> probs;
};

enum class PriorMode { Expert, Uniform };

const char* to_string(PriorMode mode);
PriorMode prior_mode_from_string(const std::string& text);

/// Immutable after construction; safe to share between threads.
///
/// The cpt is normally kept in canonical order (finding-major,
/// disease-minor) so row(f, d) is a direct index. Networks built by hand in
/// another order still work through a slower lookup.
struct DiagnosticNetwork {
  std::vector<Disease> diseases;
  std::vector<double> priors;
  std::vector<FindingVariable> findings;
  std::vector<ConditionalRow> cpt;

  std::size_t disease_count() const { return diseases.size(); }
  std::size_t finding_count() const { return findings.size(); }

  std::size_t disease_index(const std::string& id) const;
  std::size_t finding_index(const std::string& id) const;

  /// Row for (finding index, disease index). Throws std::out_of_range if
  /// the pair has no row.
  const ConditionalRow& row(std::size_t finding, std::size_t disease) const;

  /// Prior of `disease` under `mode`. Uniform is 1/n, never stored.
  double prior(std::size_t disease, PriorMode mode) const;

  /// Reorders the cpt to canonical order. Rows for unknown pairs are kept
  /// at the end.
  void canonicalize();

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

struct CaseRecord {
  std::string id;
  std::map<std::string, std::string> observations;  // finding id -> state label
  std::string gold;
};

struct Posterior {
  std::vector<double> probs;
};

struct Violation {
  std::string location;  // e.g. "priors", "cpt[3]", "cpt(f2,d1)"
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

/// Tolerance for "sums to 1" checks on stored distributions.
inline constexpr double kSumTolerance = 1e-9;

ValidationReport validate_network(const DiagnosticNetwork& net);
ValidationReport validate_case(const DiagnosticNetwork& net, const CaseRecord& c,
                               const std::string& location = "case");

/// Raised when inputs fail validation; carries every violation found.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report)
      : std::runtime_error("validation failed:\n" + report.to_string()),
        report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

class InconsistentCase : public std::runtime_error {
 public:
  explicit InconsistentCase(const std::string& case_id)
      : std::runtime_error("case '" + case_id +
                           "' has zero probability under every disease"),
        case_id_(case_id) {}
  const std::string& case_id() const { return case_id_; }

 private:
  std::string case_id_;
};

/// A case with each observation resolved to (finding index, state index),
/// sorted by finding index. Resolving once lets a case be scored against
/// many perturbed copies of the same network.
struct ResolvedCase {
  std::string id;
  std::size_t gold = 0;
  std::vector<std::pair<std::size_t, std::size_t>> observations;
};

/// Throws std::invalid_argument if the case refers to unknown ids.
ResolvedCase resolve_case(const DiagnosticNetwork& net, const CaseRecord& c);

/// posterior(d) ∝ prior(d) * prod_f P(observed state of f | d), computed in
/// log space in finding order. Throws InconsistentCase when every disease
/// has zero mass.
Posterior infer_posterior(const DiagnosticNetwork& net, const CaseRecord& c,
                          PriorMode mode);
Posterior infer_posterior(const DiagnosticNetwork& net, const ResolvedCase& c,
                          PriorMode mode);

/// Argmax; ties go to the lowest index.
std::size_t leading_disease(const Posterior& p);

struct RankedDisease {
  std::size_t index = 0;
  double prob = 0.0;
};

struct TopTwo {
  RankedDisease leading;
  RankedDisease runner_up;
};

/// Throws std::invalid_argument for fewer than two diseases.
TopTwo top_two(const Posterior& p);

}  // namespace bnsens
