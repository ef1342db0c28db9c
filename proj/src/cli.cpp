#include "bnsens/cli.hpp"

#include <algorithm>
#include <sstream>

#include <CLI11.hpp>

#include "bnsens/decimal.hpp"
#include "bnsens/harness.hpp"
#include "bnsens/io.hpp"
#include "bnsens/report.hpp"

namespace bnsens {

namespace {

const std::vector<double> kDefaultSigmas = {0.005, 0.01, 0.025, 0.05, 0.1, 0.25};

struct AnalyzeOptions {
  std::string network;
  std::string cases;
  std::string scheme = "logodds";
  std::string dist = "normal";
  std::string sigma;
  std::string uniform_range = "-0.5,0.5";
  bool also_uniform = false;
  std::size_t replicates = 5;
  std::uint64_t seed = 1;
  std::string priors = "both";
  double epsilon = kDefaultEpsilon;
  unsigned jobs = 1;
  std::string out;
};

struct GenerateOptions {
  SyntheticSpec spec;
  std::size_t n_cases = 60;
  double observe_fraction = 1.0;
  std::optional<std::uint64_t> case_seed;
  std::string network_out;
  std::string cases_out;
};

std::vector<double> parse_number_list(const std::string& text, const char* flag) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto v = parse_decimal(item);
    if (!v) throw std::invalid_argument(std::string(flag) + ": '" + item + "' is not a number");
    values.push_back(*v);
  }
  if (values.empty()) throw std::invalid_argument(std::string(flag) + ": empty list");
  return values;
}

std::vector<NoiseScheme> build_configs(const AnalyzeOptions& o) {
  const SchemeKind kind = scheme_kind_from_string(o.scheme);
  const auto range = parse_number_list(o.uniform_range, "--uniform-range");
  if (range.size() != 2) throw std::invalid_argument("--uniform-range expects lo,hi");
  const UniformNoise uniform{range[0], range[1]};

  std::vector<NoiseScheme> configs;
  if (o.dist == "uniform") {
    if (!o.sigma.empty()) throw std::invalid_argument("--sigma does not apply to --dist uniform");
    if (o.also_uniform)
      throw std::invalid_argument("--also-uniform-noise only combines with --dist normal");
    configs.push_back({kind, uniform});
  } else if (o.dist == "normal") {
    const bool random = kind == SchemeKind::RandomReplace;
    const std::vector<double> sigmas =
        !o.sigma.empty() ? parse_number_list(o.sigma, "--sigma")
                         : random ? std::vector<double>{kRandomRowNormal.sigma} : kDefaultSigmas;
    const double mu = random ? kRandomRowNormal.mu : 0.0;
    for (double s : sigmas) configs.push_back({kind, NormalNoise{mu, s}});
    if (o.also_uniform) configs.push_back({kind, uniform});
  } else {
    throw std::invalid_argument("--dist must be normal or uniform");
  }
  for (const auto& c : configs) check_distribution(c.dist);
  return configs;
}

std::vector<PriorMode> build_prior_modes(const std::string& text) {
  if (text == "both") return {PriorMode::Expert, PriorMode::Uniform};
  return {prior_mode_from_string(text)};
}

int run_analyze(const AnalyzeOptions& o, std::ostream& out) {
  ExperimentPlan plan;
  plan.noise_configs = build_configs(o);
  plan.prior_modes = build_prior_modes(o.priors);
  plan.replicates = o.replicates;
  plan.master_seed = o.seed;
  plan.epsilon = o.epsilon;
  plan.jobs = std::max(1u, o.jobs);
  check_plan(plan);

  const DiagnosticNetwork net = load_network(o.network);
  const auto cases = load_cases(o.cases, net);
  if (cases.empty()) throw std::invalid_argument(o.cases + ": no cases");

  const ExperimentReport report = run_experiment(net, cases, plan);
  if (!o.out.empty()) write_file(o.out, report_csv(report));

  out << "network: " << o.network << "\n";
  out << "cases:   " << o.cases << "\n";
  out << report_table(report);
  return kExitOk;
}

int run_generate(const GenerateOptions& o, std::ostream& out) {
  check_synthetic_spec(o.spec);
  const std::uint64_t case_seed = o.case_seed.value_or(o.spec.seed + 1);
  const DiagnosticNetwork net = generate_synthetic_network(o.spec);
  const auto cases = sample_cases(net, o.n_cases, case_seed, o.observe_fraction);

  GeneratorInfo info = {
      {"tool", "bnsens generate"},
      {"seed", std::to_string(o.spec.seed)},
      {"case_seed", std::to_string(case_seed)},
      {"diseases", std::to_string(o.spec.n_diseases)},
      {"findings", std::to_string(o.spec.n_findings)},
      {"states", std::to_string(o.spec.states_per_finding)},
      {"certainty_fraction", to_decimal(o.spec.certainty_fraction)},
      {"concentration", to_decimal(o.spec.concentration)},
      {"cases", std::to_string(o.n_cases)},
      {"observe_fraction", to_decimal(o.observe_fraction)},
  };
  write_file(o.network_out, serialize_network(net, info));
  write_file(o.cases_out, serialize_cases(cases, info));
  out << "wrote " << o.network_out << " (" << net.disease_count() << " diseases, "
      << net.finding_count() << " findings) and " << o.cases_out << " (" << cases.size()
      << " cases)\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sensitivity analysis of diagnostic belief networks under parameter noise",
               "bnsens"};
  app.require_subcommand(1);

  AnalyzeOptions a;
  auto* analyze = app.add_subcommand("analyze", "Run a replicated noise experiment");
  analyze->add_option("--network", a.network, "Network JSON file")->required();
  analyze->add_option("--cases", a.cases, "Cases JSON file")->required();
  analyze->add_option("--scheme", a.scheme, "additive | logodds | random")
      ->check(CLI::IsMember({"additive", "logodds", "random"}))
      ->capture_default_str();
  analyze->add_option("--dist", a.dist, "normal | uniform")
      ->check(CLI::IsMember({"normal", "uniform"}))
      ->capture_default_str();
  analyze->add_option("--sigma", a.sigma,
                      "Comma-separated standard deviations (default 0.005,0.01,0.025,0.05,0.1,0.25;"
                      " 0.15 for --scheme random)");
  analyze->add_option("--uniform-range", a.uniform_range, "Uniform noise range lo,hi")
      ->capture_default_str();
  analyze->add_flag("--also-uniform-noise", a.also_uniform,
                    "Add a uniform-noise config after the normal ones");
  analyze->add_option("--replicates", a.replicates, "Perturbed networks per config")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  analyze->add_option("--seed", a.seed, "Master seed")->capture_default_str();
  analyze->add_option("--priors", a.priors, "expert | uniform | both")
      ->check(CLI::IsMember({"expert", "uniform", "both"}))
      ->capture_default_str();
  analyze->add_option("--epsilon", a.epsilon, "Margin for a notably higher gold posterior")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  analyze->add_option("--jobs", a.jobs, "Worker threads (output does not depend on it)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  analyze->add_option("--out", a.out, "Write the CSV report here");

  GenerateOptions g;
  auto* generate = app.add_subcommand("generate", "Write a synthetic network and sampled cases");
  generate->add_option("--diseases", g.spec.n_diseases)->capture_default_str();
  generate->add_option("--findings", g.spec.n_findings)->capture_default_str();
  generate->add_option("--states", g.spec.states_per_finding, "States per finding")
      ->capture_default_str();
  generate->add_option("--certainty-fraction", g.spec.certainty_fraction,
                       "Fraction of cpt rows that are point masses")
      ->capture_default_str();
  generate->add_option("--concentration", g.spec.concentration,
                       "Sharpness of the remaining rows")
      ->capture_default_str();
  generate->add_option("--cases", g.n_cases, "Number of cases to sample")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  generate->add_option("--observe-fraction", g.observe_fraction,
                       "Probability that each finding is observed in a case")
      ->capture_default_str();
  generate->add_option("--seed", g.spec.seed, "Network seed")->capture_default_str();
  generate->add_option("--case-seed", g.case_seed, "Case sampling seed (default: seed + 1)");
  generate->add_option("--network-out", g.network_out, "Network JSON output")->required();
  generate->add_option("--cases-out", g.cases_out, "Cases JSON output")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (analyze->parsed()) return run_analyze(a, out);
    return run_generate(g, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what();
    return kExitValidation;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace bnsens
