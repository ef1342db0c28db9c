#pragma once

// CSV and aligned-text renderings of an ExperimentReport.
//
// Percentages carry one decimal place and probabilities/scores four. Cells
// with no value are written as an em dash, never as 0.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bnsens/harness.hpp"

namespace bnsens {

inline constexpr const char* kAbsentCell = "—";

std::string format_percent(double pct);       // "98.3"
std::string format_probability(double p);     // "0.7910"
std::string format_optional_probability(const std::optional<double>& p);

/// RFC 4180: CRLF line ends, fields quoted when they contain a comma,
/// quote or line break. One header line, then for each report row a
/// "pooled" (or "baseline") line followed by one "replicate" line per
/// replicate. Every line repeats the run settings (scheme, noise
/// parameters, epsilon, seeds) so any line can be re-run on its own.
std::string report_csv(const ExperimentReport& report);

/// Human-readable tables, one per prior mode, with the run settings in a
/// header block.
std::string report_table(const ExperimentReport& report);

/// The CSV column names in order.
const std::vector<std::string>& csv_columns();

/// One CSV line read back. Absent cells become std::nullopt.
struct CsvRecord {
  std::string prior_mode;
  std::string row_kind;  // "baseline" | "pooled" | "replicate"
  std::optional<std::size_t> replicate;
  std::string scheme;
  std::string dist;
  std::optional<double> mu, sigma, lo, hi;
  std::string label;
  std::size_t n_cases = 0;
  std::size_t n_correct = 0;
  double pct_correct = 0.0;
  std::optional<double> avg_conf_correct;
  std::size_t n_conf_correct = 0;
  std::optional<double> avg_conf_incorrect;
  std::size_t n_conf_incorrect = 0;
  std::optional<double> pct_better;
  std::optional<double> avg_amount_better;
  double avg_score = 0.0;
  std::size_t n_inconsistent = 0;
  std::size_t degenerate_rows = 0;
  double epsilon = 0.0;
  std::size_t replicates = 0;
  std::uint64_t master_seed = 0;
  std::optional<std::uint64_t> stream_seed;
};

/// Splits RFC 4180 text into records of fields.
std::vector<std::vector<std::string>> split_csv(std::string_view text);

/// Parses report_csv output. Throws std::invalid_argument on malformed
/// input.
std::vector<CsvRecord> parse_report_csv(std::string_view text);

}  // namespace bnsens
