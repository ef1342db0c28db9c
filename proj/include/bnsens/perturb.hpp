#pragma once

// Noise injection into conditional probability tables.
//
// Two ways of perturbing an assessed row are provided. The additive scheme
// adds noise in probability space and touches every entry, including exact
// 0 and 1. The log-odds scheme adds noise to ln(p / (1 - p)), leaves exact
// 0 and 1 alone, and therefore moves probabilities near the endpoints much
// less than those near 0.5. A third scheme discards the assessed rows and
// draws fresh random ones.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bnsens/model.hpp"
#include "bnsens/random.hpp"

namespace bnsens {

struct UniformNoise {
  double lo = -0.5;
  double hi = 0.5;
};

struct NormalNoise {
  double mu = 0.0;
  double sigma = 0.0;
};

using NoiseDistribution = std::variant<UniformNoise, NormalNoise>;

/// Throws std::invalid_argument unless lo < hi (uniform) or sigma >= 0
/// (normal), with finite parameters.
void check_distribution(const NoiseDistribution& dist);

/// Short human label, e.g. "normal(0, 0.05)".
std::string describe(const NoiseDistribution& dist);

enum class SchemeKind { AdditiveRenormalize, LogOddsPreserveCertainty, RandomReplace };

const char* to_string(SchemeKind kind);  // "additive" | "logodds" | "random"
SchemeKind scheme_kind_from_string(const std::string& text);

struct NoiseScheme {
  SchemeKind kind = SchemeKind::LogOddsPreserveCertainty;
  NoiseDistribution dist = NormalNoise{};
};

/// Normal parameters used for random replacement rows unless overridden.
inline constexpr NormalNoise kRandomRowNormal{0.5, 0.15};
/// Lower clamp for normal random replacement entries.
inline constexpr double kRandomRowFloor = 1e-6;

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t replicate_index = 0;

  std::uint64_t stream_seed() const {
    return derive_stream_seed(master_seed, replicate_index);
  }
  Rng stream() const { return Rng(stream_seed()); }
};

/// A row whose free entries are all zero while the fixed ones leave mass
/// to distribute.
class DegenerateRow : public std::runtime_error {
 public:
  explicit DegenerateRow(const std::string& what) : std::runtime_error(what) {}
};

/// ln(p / (1 - p)). Throws std::domain_error outside (0, 1).
double logit(double p);

/// 1 / (1 + e^-v), evaluated without overflow for large |v|.
double inverse_logit(double v);

double sample_noise(const NoiseDistribution& dist, Rng& rng);

/// Scales the entries not under `fixed` by one positive factor so the row
/// sums to 1. Fixed entries are copied bit for bit. A row already summing
/// to 1 within 1e-12 is returned unchanged. An empty mask means nothing is
/// fixed.
std::vector<double> renormalize(std::span<const double> row,
                                std::span<const bool> fixed = {});

/// p_i + eps_i clamped to [0, 1], then renormalized. `noise` supplies one
/// value per entry.
std::vector<double> perturb_row_additive(std::span<const double> row,
                                         std::span<const double> noise);
std::vector<double> perturb_row_additive(std::span<const double> row,
                                         const NoiseDistribution& dist, Rng& rng);

/// Result of shifting a row in log-odds space, before renormalization.
struct LogOddsShift {
  std::vector<double> values;
  std::vector<bool> fixed;  // entry was exactly 0.0 or 1.0 and was copied
};

/// Entries exactly 0.0 or 1.0 are copied and flagged; every other entry p
/// becomes inverse_logit(logit(p) + eps_i). `noise` supplies one value per
/// entry; values at fixed positions are ignored.
LogOddsShift shift_row_logodds(std::span<const double> row, std::span<const double> noise);

/// shift_row_logodds followed by renormalize with the fixed entries masked.
/// One draw is taken per entry, fixed or not, so the stream advances by the
/// row length regardless of the row's contents.
std::vector<double> perturb_row_logodds(std::span<const double> row,
                                        std::span<const double> noise);
std::vector<double> perturb_row_logodds(std::span<const double> row,
                                        const NoiseDistribution& dist, Rng& rng);

/// A fresh random distribution over `n_states` states. Uniform: entries on
/// (0, 1) (the range of the distribution is not used). Normal: entries
/// from Normal(mu, sigma) clamped to [kRandomRowFloor, 1]. Both are then
/// renormalized.
std::vector<double> random_row(std::size_t n_states, const NoiseDistribution& dist, Rng& rng);

/// Applies one scheme to a row.
std::vector<double> perturb_row(const NoiseScheme& scheme, std::span<const double> row,
                                Rng& rng);

enum class DegeneratePolicy {
  Throw,            // rethrow DegenerateRow naming the (finding, disease) pair
  UniformFallback,  // replace the row with the uniform distribution and record it
};

struct DegenerateEvent {
  std::string finding;
  std::string disease;
};

struct PerturbedNetwork {
  DiagnosticNetwork network;
  std::vector<DegenerateEvent> degenerate_rows;
};

/// Applies `scheme` to every cpt row, finding-major and disease-minor, from
/// the single stream of `seed`. Priors are copied. The input is not
/// modified and the output is canonical.
PerturbedNetwork perturb_network(const DiagnosticNetwork& net, const NoiseScheme& scheme,
                                 const SeedSpec& seed,
                                 DegeneratePolicy policy = DegeneratePolicy::Throw);

}  // namespace bnsens
