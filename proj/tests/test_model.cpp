#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bnsens/model.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace bnsens;
using bnsens::testing::two_disease_network;

TEST_CASE("validate_network accepts a well-formed network") {
  CHECK(validate_network(two_disease_network()).ok());
}

TEST_CASE("validate_network names the priors when they do not sum to 1") {
  auto net = two_disease_network();
  net.priors = {0.5, 0.4};
  const auto report = validate_network(net);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].location == "priors");
}

TEST_CASE("validate_network reports a missing cpt row by pair") {
  auto net = two_disease_network();
  net.cpt.pop_back();
  const auto report = validate_network(net);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].location == "cpt(f,d2)");
  CHECK(report.violations[0].message == "missing row");
}

TEST_CASE("validate_network collects every violation") {
  auto net = two_disease_network();
  net.diseases[1].id = "d1";            // duplicate disease id
  net.findings[0].states = {"x", "x"};  // duplicate state label
  net.cpt[0].probs = {0.9, 0.2};        // sums to 1.1
  net.cpt[1].probs = {-0.1, 1.1};       // out of range
  const auto report = validate_network(net);
  CHECK(report.violations.size() >= 4);
  CHECK_FALSE(report.to_string().empty());
}

TEST_CASE("validate_network rejects bad row lengths and unknown ids") {
  auto net = two_disease_network();
  net.cpt[0].probs = {1.0};
  net.cpt.push_back({"nope", "d1", {0.5, 0.5}});
  const auto report = validate_network(net);
  REQUIRE(report.violations.size() == 2);
}

TEST_CASE("validate_case checks findings, states and gold") {
  const auto net = two_disease_network();
  CHECK(validate_case(net, {"c", {{"f", "pos"}}, "d1"}).ok());
  CHECK(validate_case(net, {"c", {{"g", "pos"}}, "d1"}).violations.size() == 1);
  CHECK(validate_case(net, {"c", {{"f", "maybe"}}, "d1"}).violations.size() == 1);
  CHECK(validate_case(net, {"c", {}, "d9"}).violations.size() == 1);
}

TEST_CASE("infer_posterior with no observations returns the priors") {
  const auto net = two_disease_network(0.3);
  const auto post = infer_posterior(net, CaseRecord{"c", {}, "d1"}, PriorMode::Expert);
  CHECK(post.probs[0] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(post.probs[1] == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("infer_posterior matches a hand Bayes computation") {
  // Uniform priors: posterior = (0.5*0.8, 0.5*0.2) / 0.5 = (0.8, 0.2).
  const auto net = two_disease_network(0.9);
  const auto post = infer_posterior(net, CaseRecord{"c", {{"f", "pos"}}, "d1"}, PriorMode::Uniform);
  CHECK(std::abs(post.probs[0] - 0.8) < 1e-15);
  CHECK(std::abs(post.probs[1] - 0.2) < 1e-15);
}

TEST_CASE("infer_posterior raises InconsistentCase when no disease explains the evidence") {
  DiagnosticNetwork net;
  net.diseases = {{"a", ""}, {"b", ""}, {"c", ""}};
  net.priors = {0.2, 0.3, 0.5};
  net.findings = {{"f", {"x", "y"}}};
  for (const auto& d : net.diseases) net.cpt.push_back({"f", d.id, {1.0, 0.0}});
  REQUIRE(validate_network(net).ok());
  CHECK_THROWS_AS(infer_posterior(net, CaseRecord{"k", {{"f", "y"}}, "a"}, PriorMode::Expert),
                  InconsistentCase);
  try {
    infer_posterior(net, CaseRecord{"k", {{"f", "y"}}, "a"}, PriorMode::Expert);
  } catch (const InconsistentCase& e) {
    CHECK(e.case_id() == "k");
  }
}

TEST_CASE("infer_posterior rejects unknown ids") {
  const auto net = two_disease_network();
  CHECK_THROWS_AS(infer_posterior(net, CaseRecord{"c", {{"g", "pos"}}, "d1"}, PriorMode::Expert),
                  std::invalid_argument);
}

TEST_CASE("row lookup works for non-canonical cpt order") {
  auto net = two_disease_network();
  std::swap(net.cpt[0], net.cpt[1]);
  CHECK(net.row(0, 0).disease == "d1");
  const auto post = infer_posterior(net, CaseRecord{"c", {{"f", "pos"}}, "d1"}, PriorMode::Uniform);
  CHECK(std::abs(post.probs[0] - 0.8) < 1e-15);
  net.canonicalize();
  CHECK(net.cpt[0].disease == "d1");
  CHECK_THROWS_AS(net.row(1, 0), std::out_of_range);
}

TEST_CASE("leading_disease breaks ties toward the lowest index") {
  CHECK(leading_disease(Posterior{{0.7, 0.2, 0.1}}) == 0);
  CHECK(leading_disease(Posterior{{0.5, 0.5}}) == 0);
  CHECK(leading_disease(Posterior{{0.25, 0.25, 0.25, 0.25}}) == 0);
  CHECK(leading_disease(Posterior{{0.1, 0.2, 0.7}}) == 2);
}

TEST_CASE("top_two") {
  auto t = top_two(Posterior{{0.7, 0.2, 0.1}});
  CHECK(t.leading.index == 0);
  CHECK(t.leading.prob == 0.7);
  CHECK(t.runner_up.index == 1);
  CHECK(t.runner_up.prob == 0.2);

  t = top_two(Posterior{{0.4, 0.4, 0.2}});
  CHECK(t.leading.index == 0);
  CHECK(t.runner_up.index == 1);
  CHECK(t.runner_up.prob == 0.4);

  t = top_two(Posterior{{1.0, 0.0, 0.0}});
  CHECK(t.leading.index == 0);
  CHECK(t.runner_up.index == 1);
  CHECK(t.runner_up.prob == 0.0);

  t = top_two(Posterior{{0.1, 0.3, 0.6}});
  CHECK(t.leading.index == 2);
  CHECK(t.runner_up.index == 1);

  CHECK_THROWS_AS(top_two(Posterior{{1.0}}), std::invalid_argument);
}

TEST_CASE("property: posterior sums to 1 and matches brute-force enumeration") {
  std::mt19937_64 gen(20240611);
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t nd = 1 + gen() % 4;
    const std::size_t nf = 1 + gen() % 3;
    const std::size_t ns = 2 + gen() % 2;
    const auto net = oracle::random_small_network(gen, nd, nf, ns);
    REQUIRE(validate_network(net).ok());
    for (int k = 0; k < 5; ++k) {
      const auto c = oracle::random_case(gen, net, "c");
      for (PriorMode mode : {PriorMode::Expert, PriorMode::Uniform}) {
        const auto expected = oracle::brute_force_posterior(net, c, mode);
        if (!expected) {
          CHECK_THROWS_AS(infer_posterior(net, c, mode), InconsistentCase);
          continue;
        }
        const auto post = infer_posterior(net, c, mode);
        double sum = 0.0;
        for (std::size_t d = 0; d < nd; ++d) {
          sum += post.probs[d];
          CHECK(std::abs(post.probs[d] - (*expected)[d]) <= 1e-12);
        }
        CHECK(std::abs(sum - 1.0) <= 1e-9);
        ++compared;
      }
    }
  }
  CHECK(compared > 1000);
}

TEST_CASE("property: scaling the priors leaves the posterior unchanged") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 200; ++trial) {
    auto net = oracle::random_small_network(gen, 2 + gen() % 5, 1 + gen() % 4, 2);
    const auto c = oracle::random_case(gen, net, "c");
    Posterior base;
    try {
      base = infer_posterior(net, c, PriorMode::Expert);
    } catch (const InconsistentCase&) {
      continue;
    }
    const double scale = std::ldexp(1.0 + static_cast<double>(gen() % 1000) / 7.0, -3);
    for (auto& p : net.priors) p *= scale;
    const auto scaled = infer_posterior(net, c, PriorMode::Expert);
    CHECK(leading_disease(scaled) == leading_disease(base));
    for (std::size_t d = 0; d < base.probs.size(); ++d)
      CHECK(std::abs(scaled.probs[d] - base.probs[d]) <= 1e-12);
  }
}

TEST_CASE("property: a finding with identical rows carries no evidence") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto net = oracle::random_small_network(gen, 2 + gen() % 5, 1 + gen() % 4, 3);
    FindingVariable flat{"flat", {"a", "b", "c"}};
    net.findings.push_back(flat);
    const std::vector<double> row = {0.2, 0.5, 0.3};
    for (const auto& d : net.diseases) net.cpt.push_back({"flat", d.id, row});
    auto c = oracle::random_case(gen, net, "c");
    c.observations.erase("flat");
    Posterior without;
    try {
      without = infer_posterior(net, c, PriorMode::Expert);
    } catch (const InconsistentCase&) {
      continue;
    }
    c.observations["flat"] = "b";
    const auto with = infer_posterior(net, c, PriorMode::Expert);
    for (std::size_t d = 0; d < without.probs.size(); ++d)
      CHECK(std::abs(with.probs[d] - without.probs[d]) <= 1e-12);
  }
}

TEST_CASE("prior modes") {
  const auto net = two_disease_network(0.9);
  CHECK(net.prior(0, PriorMode::Expert) == 0.9);
  CHECK(net.prior(0, PriorMode::Uniform) == 0.5);
  CHECK(prior_mode_from_string("uniform") == PriorMode::Uniform);
  CHECK(std::string(to_string(PriorMode::Expert)) == "expert");
  CHECK_THROWS_AS(prior_mode_from_string("flat"), std::invalid_argument);
}
