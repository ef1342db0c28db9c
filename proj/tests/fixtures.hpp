#pragma once

#include <random>
#include <vector>

#include "bnsens/model.hpp"

namespace bnsens::testing {

/// Two diseases, one binary finding: P(pos | d1) = 0.8, P(pos | d2) = 0.2.
inline DiagnosticNetwork two_disease_network(double prior1 = 0.5) {
  DiagnosticNetwork net;
  net.diseases = {{"d1", "one"}, {"d2", "two"}};
  net.priors = {prior1, 1.0 - prior1};
  net.findings = {{"f", {"pos", "neg"}}};
  net.cpt = {{"f", "d1", {0.8, 0.2}}, {"f", "d2", {0.2, 0.8}}};
  return net;
}

/// Uniform random point on the probability simplex of dimension n.
inline std::vector<double> random_simplex(std::mt19937_64& gen, std::size_t n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(n);
  double s = 0.0;
  for (auto& x : p) s += (x = e(gen));
  for (auto& x : p) x /= s;
  return p;
}

}  // namespace bnsens::testing
