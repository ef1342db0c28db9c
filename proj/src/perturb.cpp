#include "bnsens/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace bnsens {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kRenormTolerance = 1e-12;

std::vector<double> draw_noise(const NoiseDistribution& dist, Rng& rng, std::size_t n) {
  std::vector<double> eps(n);
  for (auto& e : eps) e = sample_noise(dist, rng);
  return eps;
}

void require_same_size(std::span<const double> row, std::span<const double> noise) {
  if (row.size() != noise.size())
    throw std::invalid_argument("noise vector length does not match row length");
}

}  // namespace

void check_distribution(const NoiseDistribution& dist) {
  std::visit(overloaded{
                 [](const UniformNoise& u) {
                   if (!std::isfinite(u.lo) || !std::isfinite(u.hi) || !(u.lo < u.hi))
                     throw std::invalid_argument("uniform noise needs finite lo < hi");
                 },
                 [](const NormalNoise& n) {
                   if (!std::isfinite(n.mu) || !std::isfinite(n.sigma) || n.sigma < 0.0)
                     throw std::invalid_argument("normal noise needs finite mu and sigma >= 0");
                 },
             },
             dist);
}

std::string describe(const NoiseDistribution& dist) {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const UniformNoise& u) { out << "uniform(" << u.lo << ", " << u.hi << ")"; },
                 [&](const NormalNoise& n) { out << "normal(" << n.mu << ", " << n.sigma << ")"; },
             },
             dist);
  return out.str();
}

const char* to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::AdditiveRenormalize: return "additive";
    case SchemeKind::LogOddsPreserveCertainty: return "logodds";
    case SchemeKind::RandomReplace: return "random";
  }
  return "?";
}

SchemeKind scheme_kind_from_string(const std::string& text) {
  if (text == "additive") return SchemeKind::AdditiveRenormalize;
  if (text == "logodds") return SchemeKind::LogOddsPreserveCertainty;
  if (text == "random") return SchemeKind::RandomReplace;
  throw std::invalid_argument("unknown scheme '" + text + "'");
}

double logit(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("logit requires 0 < p < 1");
  return std::log(p / (1.0 - p));
}

double inverse_logit(double v) {
  if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
  const double e = std::exp(v);
  return e / (1.0 + e);
}

double sample_noise(const NoiseDistribution& dist, Rng& rng) {
  return std::visit(overloaded{
                        [&](const UniformNoise& u) { return rng.uniform(u.lo, u.hi); },
                        [&](const NormalNoise& n) { return n.mu + n.sigma * rng.standard_normal(); },
                    },
                    dist);
}

std::vector<double> renormalize(std::span<const double> row, std::span<const bool> fixed) {
  if (!fixed.empty() && fixed.size() != row.size())
    throw std::invalid_argument("fixed mask length does not match row length");
  auto is_fixed = [&](std::size_t i) { return !fixed.empty() && fixed[i]; };

  double fixed_sum = 0.0;
  double free_sum = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (!(row[i] >= 0.0) || !std::isfinite(row[i]))
      throw std::invalid_argument("renormalize: entries must be finite and non-negative");
    (is_fixed(i) ? fixed_sum : free_sum) += row[i];
  }

  std::vector<double> out(row.begin(), row.end());
  if (std::abs(fixed_sum + free_sum - 1.0) <= kRenormTolerance) return out;
  if (fixed_sum > 1.0 + kRenormTolerance)
    throw std::invalid_argument("renormalize: fixed entries sum to more than 1");

  const double target = 1.0 - fixed_sum;
  if (free_sum == 0.0) throw DegenerateRow("no free probability mass to renormalize");

  const double scale = target / free_sum;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (!is_fixed(i)) out[i] *= scale;
  return out;
}

std::vector<double> perturb_row_additive(std::span<const double> row,
                                         std::span<const double> noise) {
  require_same_size(row, noise);
  std::vector<double> shifted(row.size());
  for (std::size_t i = 0; i < row.size(); ++i)
    shifted[i] = std::clamp(row[i] + noise[i], 0.0, 1.0);
  return renormalize(shifted);
}

std::vector<double> perturb_row_additive(std::span<const double> row,
                                         const NoiseDistribution& dist, Rng& rng) {
  const auto eps = draw_noise(dist, rng, row.size());
  return perturb_row_additive(row, eps);
}

LogOddsShift shift_row_logodds(std::span<const double> row, std::span<const double> noise) {
  require_same_size(row, noise);
  LogOddsShift out;
  out.values.resize(row.size());
  out.fixed.resize(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) {
    const double p = row[i];
    if (p == 0.0 || p == 1.0) {
      out.values[i] = p;
      out.fixed[i] = true;
    } else if (noise[i] == 0.0) {
      out.values[i] = p;
    } else {
      out.values[i] = inverse_logit(logit(p) + noise[i]);
    }
  }
  return out;
}

std::vector<double> perturb_row_logodds(std::span<const double> row,
                                        std::span<const double> noise) {
  auto shifted = shift_row_logodds(row, noise);
  // std::vector<bool> has no contiguous storage to span over.
  auto mask = std::make_unique<bool[]>(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) mask[i] = shifted.fixed[i];
  return renormalize(shifted.values, std::span<const bool>(mask.get(), row.size()));
}

std::vector<double> perturb_row_logodds(std::span<const double> row,
                                        const NoiseDistribution& dist, Rng& rng) {
  const auto eps = draw_noise(dist, rng, row.size());
  return perturb_row_logodds(row, eps);
}

std::vector<double> random_row(std::size_t n_states, const NoiseDistribution& dist, Rng& rng) {
  if (n_states < 2) throw std::invalid_argument("random_row needs at least 2 states");
  std::vector<double> row(n_states);
  std::visit(overloaded{
                 [&](const UniformNoise&) {
                   for (auto& p : row) p = rng.uniform_open01();
                 },
                 [&](const NormalNoise& n) {
                   for (auto& p : row)
                     p = std::clamp(n.mu + n.sigma * rng.standard_normal(), kRandomRowFloor, 1.0);
                 },
             },
             dist);
  return renormalize(row);
}

std::vector<double> perturb_row(const NoiseScheme& scheme, std::span<const double> row,
                                Rng& rng) {
  switch (scheme.kind) {
    case SchemeKind::AdditiveRenormalize: return perturb_row_additive(row, scheme.dist, rng);
    case SchemeKind::LogOddsPreserveCertainty: return perturb_row_logodds(row, scheme.dist, rng);
    case SchemeKind::RandomReplace: return random_row(row.size(), scheme.dist, rng);
  }
  throw std::logic_error("unhandled scheme");
}

PerturbedNetwork perturb_network(const DiagnosticNetwork& net, const NoiseScheme& scheme,
                                 const SeedSpec& seed, DegeneratePolicy policy) {
  check_distribution(scheme.dist);
  PerturbedNetwork out;
  out.network.diseases = net.diseases;
  out.network.priors = net.priors;
  out.network.findings = net.findings;
  out.network.cpt.reserve(net.finding_count() * net.disease_count());

  Rng rng = seed.stream();
  for (std::size_t f = 0; f < net.finding_count(); ++f) {
    for (std::size_t d = 0; d < net.disease_count(); ++d) {
      const ConditionalRow& src = net.row(f, d);
      ConditionalRow dst{src.finding, src.disease, {}};
      try {
        dst.probs = perturb_row(scheme, src.probs, rng);
      } catch (const DegenerateRow&) {
        if (policy == DegeneratePolicy::Throw)
          throw DegenerateRow("degenerate row after perturbation at (" + src.finding + ", " +
                              src.disease + ")");
        dst.probs.assign(src.probs.size(), 1.0 / static_cast<double>(src.probs.size()));
        out.degenerate_rows.push_back({src.finding, src.disease});
      }
      out.network.cpt.push_back(std::move(dst));
    }
  }
  return out;
}

}  // namespace bnsens
