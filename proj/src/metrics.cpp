#include "bnsens/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace bnsens {

double quadratic_score(const Posterior& p, std::size_t gold) {
  double sum_sq = 0.0;
  for (double x : p.probs) sum_sq += x * x;
  return 2.0 * p.probs.at(gold) - sum_sq;
}

CaseOutcome case_outcome(const Posterior& p, std::size_t gold, std::string case_id) {
  if (gold >= p.probs.size()) throw std::invalid_argument("gold index out of range");
  CaseOutcome out;
  out.case_id = std::move(case_id);
  out.gold = gold;
  out.posterior = p;
  if (p.probs.size() >= 2) {
    const TopTwo top = top_two(p);
    out.leading = top.leading.index;
    out.confidence = top.leading.prob - top.runner_up.prob;
  } else {
    out.leading = leading_disease(p);
    out.confidence = p.probs[out.leading];
  }
  out.correct = out.leading == gold;
  out.gold_prob = p.probs[gold];
  out.score = quadratic_score(p, gold);
  return out;
}

CaseOutcome inconsistent_outcome(std::size_t gold, std::string case_id) {
  CaseOutcome out;
  out.case_id = std::move(case_id);
  out.gold = gold;
  out.correct = false;
  out.gold_prob = 0.0;
  out.score = 0.0;
  return out;
}

RunSummary summarize(std::span<const CaseOutcome> outcomes) {
  if (outcomes.empty()) throw std::invalid_argument("summarize: no outcomes");
  RunSummary s;
  s.n_cases = outcomes.size();
  double conf_sum[2] = {0.0, 0.0};
  std::size_t conf_n[2] = {0, 0};
  double score_sum = 0.0;
  for (const auto& o : outcomes) {
    const int cell = o.correct ? 0 : 1;
    (o.correct ? s.conf_correct : s.conf_incorrect).count++;
    if (o.correct) s.n_correct++;
    if (o.confidence) {
      conf_sum[cell] += *o.confidence;
      conf_n[cell]++;
    }
    if (o.inconsistent()) s.n_inconsistent++;
    score_sum += o.score;
  }
  s.pct_correct = 100.0 * static_cast<double>(s.n_correct) / static_cast<double>(s.n_cases);
  if (conf_n[0]) s.conf_correct.mean = conf_sum[0] / static_cast<double>(conf_n[0]);
  if (conf_n[1]) s.conf_incorrect.mean = conf_sum[1] / static_cast<double>(conf_n[1]);
  s.avg_score = score_sum / static_cast<double>(s.n_cases);
  return s;
}

ComparisonSummary compare(std::span<const CaseOutcome> noisy,
                          std::span<const CaseOutcome> baseline, double epsilon) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("compare: epsilon must be >= 0");
  if (noisy.size() != baseline.size())
    throw std::invalid_argument("compare: outcome lists differ in length");
  ComparisonSummary c;
  c.n_cases = noisy.size();
  c.epsilon = epsilon;
  double gain_sum = 0.0;
  for (std::size_t i = 0; i < noisy.size(); ++i) {
    if (noisy[i].case_id != baseline[i].case_id || noisy[i].gold != baseline[i].gold)
      throw std::invalid_argument("compare: outcome lists are not aligned at position " +
                                  std::to_string(i));
    const double gain = noisy[i].gold_prob - baseline[i].gold_prob;
    if (noisy[i].correct && gain > epsilon) {
      c.n_better++;
      gain_sum += gain;
    }
  }
  if (c.n_cases)
    c.pct_better = 100.0 * static_cast<double>(c.n_better) / static_cast<double>(c.n_cases);
  if (c.n_better) c.avg_amount_better = gain_sum / static_cast<double>(c.n_better);
  return c;
}

}  // namespace bnsens
