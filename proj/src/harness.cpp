#include "bnsens/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "bnsens/decimal.hpp"

namespace bnsens {

namespace {

std::string pad_index(std::size_t i, std::size_t count) {
  const std::size_t width = std::to_string(count).size();
  std::string s = std::to_string(i);
  return std::string(width > s.size() ? width - s.size() : 0, '0') + s;
}

/// Index drawn from `weights` (sum 1). Never returns a zero-weight index.
std::size_t draw_categorical(const std::vector<double>& weights, Rng& rng) {
  const double u = rng.uniform01();
  double cum = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last_positive = i;
    cum += weights[i];
    if (u < cum) return i;
  }
  return last_positive;
}

std::vector<ResolvedCase> resolve_all(const DiagnosticNetwork& net,
                                      const std::vector<CaseRecord>& cases) {
  std::vector<ResolvedCase> out;
  out.reserve(cases.size());
  for (const auto& c : cases) out.push_back(resolve_case(net, c));
  return out;
}

std::vector<CaseOutcome> run_cases(const DiagnosticNetwork& net,
                                   const std::vector<ResolvedCase>& cases, PriorMode mode) {
  std::vector<CaseOutcome> out;
  out.reserve(cases.size());
  for (const auto& c : cases) out.push_back(evaluate_case(net, c, mode));
  return out;
}

/// Runs task(i) for i in [0, n) on `jobs` threads. The first exception
/// thrown by any task is rethrown after all workers stop.
template <class Task>
void parallel_for(std::size_t n, unsigned jobs, Task&& task) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(jobs);
    for (unsigned w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= n || failed.load()) return;
          try {
            task(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            failed.store(true);
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

void check_plan(const ExperimentPlan& plan) {
  if (plan.noise_configs.empty()) throw std::invalid_argument("plan has no noise configs");
  if (plan.replicates < 1) throw std::invalid_argument("plan needs at least one replicate");
  if (plan.prior_modes.empty()) throw std::invalid_argument("plan has no prior modes");
  if (!(plan.epsilon >= 0.0) || !std::isfinite(plan.epsilon))
    throw std::invalid_argument("epsilon must be a finite value >= 0");
  for (const auto& s : plan.noise_configs) check_distribution(s.dist);
}

std::string config_label(const NoiseScheme& scheme) {
  if (scheme.kind == SchemeKind::RandomReplace) {
    if (std::holds_alternative<UniformNoise>(scheme.dist)) return "Random CPT, uniform";
    const auto& n = std::get<NormalNoise>(scheme.dist);
    return "Random CPT, normal mu=" + to_decimal(n.mu) + " sigma=" + to_decimal(n.sigma);
  }
  if (const auto* u = std::get_if<UniformNoise>(&scheme.dist))
    return "Uniform noise, range=[" + to_decimal(u->lo) + "," + to_decimal(u->hi) + ")";
  const auto& n = std::get<NormalNoise>(scheme.dist);
  std::string label = "Normal noise, sigma=" + to_decimal(n.sigma);
  if (n.mu != 0.0) label += " mu=" + to_decimal(n.mu);
  return label;
}

CaseOutcome evaluate_case(const DiagnosticNetwork& net, const ResolvedCase& c, PriorMode mode) {
  try {
    return case_outcome(infer_posterior(net, c, mode), c.gold, c.id);
  } catch (const InconsistentCase&) {
    return inconsistent_outcome(c.gold, c.id);
  }
}

std::vector<CaseOutcome> baseline_run(const DiagnosticNetwork& net,
                                      const std::vector<CaseRecord>& cases, PriorMode mode) {
  if (cases.empty()) throw std::invalid_argument("baseline_run: no cases");
  return run_cases(net, resolve_all(net, cases), mode);
}

ExperimentReport run_experiment(const DiagnosticNetwork& net,
                                const std::vector<CaseRecord>& cases,
                                const ExperimentPlan& plan) {
  check_plan(plan);
  if (cases.empty()) throw std::invalid_argument("run_experiment: no cases");
  ValidationReport problems = validate_network(net);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    auto r = validate_case(net, cases[i], "cases[" + std::to_string(i) + "]");
    problems.violations.insert(problems.violations.end(), r.violations.begin(),
                               r.violations.end());
  }
  if (!problems.ok()) throw ValidationError(std::move(problems));

  DiagnosticNetwork base = net;
  base.canonicalize();
  const auto resolved = resolve_all(base, cases);
  const std::size_t n_modes = plan.prior_modes.size();
  const std::size_t n_configs = plan.noise_configs.size();
  const std::size_t n_reps = plan.replicates;

  std::vector<std::vector<CaseOutcome>> baselines(n_modes);
  for (std::size_t m = 0; m < n_modes; ++m)
    baselines[m] = run_cases(base, resolved, plan.prior_modes[m]);

  struct TaskResult {
    std::size_t degenerate_rows = 0;
    std::vector<std::vector<CaseOutcome>> outcomes;  // per prior mode
  };
  std::vector<TaskResult> results(n_configs * n_reps);
  parallel_for(results.size(), plan.jobs, [&](std::size_t task) {
    const std::size_t c = task / n_reps;
    const std::size_t r = task % n_reps;
    const SeedSpec seed{plan.master_seed, r};
    auto perturbed = perturb_network(base, plan.noise_configs[c], seed,
                                     DegeneratePolicy::UniformFallback);
    TaskResult& out = results[task];
    out.degenerate_rows = perturbed.degenerate_rows.size();
    out.outcomes.resize(n_modes);
    for (std::size_t m = 0; m < n_modes; ++m)
      out.outcomes[m] = run_cases(perturbed.network, resolved, plan.prior_modes[m]);
  });

  ExperimentReport report;
  report.plan = plan;
  report.n_cases = cases.size();
  for (std::size_t m = 0; m < n_modes; ++m) {
    ReportRow baseline_row;
    baseline_row.prior_mode = plan.prior_modes[m];
    baseline_row.label = kBaselineLabel;
    baseline_row.pooled = summarize(baselines[m]);
    report.rows.push_back(std::move(baseline_row));

    std::vector<CaseOutcome> repeated_baseline;
    repeated_baseline.reserve(n_reps * cases.size());
    for (std::size_t r = 0; r < n_reps; ++r)
      repeated_baseline.insert(repeated_baseline.end(), baselines[m].begin(),
                               baselines[m].end());

    for (std::size_t c = 0; c < n_configs; ++c) {
      ReportRow row;
      row.prior_mode = plan.prior_modes[m];
      row.scheme = plan.noise_configs[c];
      row.label = config_label(plan.noise_configs[c]);
      std::vector<CaseOutcome> pooled;
      pooled.reserve(n_reps * cases.size());
      for (std::size_t r = 0; r < n_reps; ++r) {
        const TaskResult& res = results[c * n_reps + r];
        const auto& outcomes = res.outcomes[m];
        row.replicates.push_back({r, SeedSpec{plan.master_seed, r}.stream_seed(),
                                  summarize(outcomes), res.degenerate_rows});
        row.degenerate_rows += res.degenerate_rows;
        pooled.insert(pooled.end(), outcomes.begin(), outcomes.end());
      }
      row.pooled = summarize(pooled);
      row.comparison = compare(pooled, repeated_baseline, plan.epsilon);
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

void check_synthetic_spec(const SyntheticSpec& spec) {
  if (spec.n_diseases < 2 || spec.n_findings < 2 || spec.states_per_finding < 2)
    throw std::invalid_argument("synthetic network needs at least 2 diseases, findings and states");
  if (!(spec.certainty_fraction >= 0.0 && spec.certainty_fraction <= 1.0))
    throw std::invalid_argument("certainty_fraction must lie in [0, 1]");
  if (!(spec.concentration >= 0.0) || !std::isfinite(spec.concentration))
    throw std::invalid_argument("concentration must be a finite value >= 0");
}

DiagnosticNetwork generate_synthetic_network(const SyntheticSpec& spec) {
  check_synthetic_spec(spec);
  Rng rng(spec.seed);
  DiagnosticNetwork net;

  for (std::size_t d = 0; d < spec.n_diseases; ++d) {
    const std::string n = pad_index(d + 1, spec.n_diseases);
    net.diseases.push_back({"D" + n, "Disease " + n});
  }
  std::vector<std::string> states;
  if (spec.states_per_finding == 2) {
    states = {"absent", "present"};
  } else {
    for (std::size_t s = 0; s < spec.states_per_finding; ++s)
      states.push_back("s" + std::to_string(s));
  }
  for (std::size_t f = 0; f < spec.n_findings; ++f)
    net.findings.push_back({"F" + pad_index(f + 1, spec.n_findings), states});

  // Uniform point on the simplex: normalized Exp(1) draws.
  net.priors.resize(spec.n_diseases);
  double total = 0.0;
  for (auto& p : net.priors) total += (p = -std::log(rng.uniform_open01()));
  for (auto& p : net.priors) p /= total;

  const std::size_t k = spec.states_per_finding;
  const double floor_each = kSyntheticRowFloor / static_cast<double>(k);
  for (const auto& f : net.findings) {
    for (const auto& d : net.diseases) {
      std::vector<double> probs(k, 0.0);
      if (rng.uniform01() < spec.certainty_fraction) {
        probs[rng.below(k)] = 1.0;
      } else {
        std::vector<double> w(k);
        for (auto& x : w) x = spec.concentration * rng.standard_normal();
        const double top = *std::max_element(w.begin(), w.end());
        double sum = 0.0;
        for (auto& x : w) sum += (x = std::exp(x - top));
        for (std::size_t s = 0; s < k; ++s)
          probs[s] = (1.0 - kSyntheticRowFloor) * (w[s] / sum) + floor_each;
      }
      net.cpt.push_back({f.id, d.id, std::move(probs)});
    }
  }
  return net;
}

std::vector<CaseRecord> sample_cases(const DiagnosticNetwork& net, std::size_t n,
                                     std::uint64_t seed, double observe_fraction) {
  if (n < 1) throw std::invalid_argument("sample_cases: n must be >= 1");
  if (!(observe_fraction >= 0.0 && observe_fraction <= 1.0))
    throw std::invalid_argument("observe_fraction must lie in [0, 1]");
  Rng rng(seed);
  std::vector<CaseRecord> cases;
  cases.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    CaseRecord c;
    c.id = "case-" + pad_index(i + 1, std::max<std::size_t>(n, 100));
    const std::size_t gold = draw_categorical(net.priors, rng);
    c.gold = net.diseases[gold].id;
    for (std::size_t f = 0; f < net.finding_count(); ++f) {
      const auto& fv = net.findings[f];
      const std::size_t s = draw_categorical(net.row(f, gold).probs, rng);
      const bool keep = observe_fraction >= 1.0 || rng.uniform01() < observe_fraction;
      if (keep) c.observations.emplace(fv.id, fv.states[s]);
    }
    cases.push_back(std::move(c));
  }
  return cases;
}

}  // namespace bnsens
