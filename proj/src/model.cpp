#include "bnsens/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace bnsens {

std::size_t FindingVariable::state_index(const std::string& label) const {
  auto it = std::find(states.begin(), states.end(), label);
  return it == states.end() ? DiagnosticNetwork::npos
                            : static_cast<std::size_t>(it - states.begin());
}

const char* to_string(PriorMode mode) {
  return mode == PriorMode::Expert ? "expert" : "uniform";
}

PriorMode prior_mode_from_string(const std::string& text) {
  if (text == "expert") return PriorMode::Expert;
  if (text == "uniform") return PriorMode::Uniform;
  throw std::invalid_argument("unknown prior mode '" + text + "'");
}

std::size_t DiagnosticNetwork::disease_index(const std::string& id) const {
  for (std::size_t i = 0; i < diseases.size(); ++i)
    if (diseases[i].id == id) return i;
  return npos;
}

std::size_t DiagnosticNetwork::finding_index(const std::string& id) const {
  for (std::size_t i = 0; i < findings.size(); ++i)
    if (findings[i].id == id) return i;
  return npos;
}

const ConditionalRow& DiagnosticNetwork::row(std::size_t finding,
                                             std::size_t disease) const {
  const auto& fid = findings.at(finding).id;
  const auto& did = diseases.at(disease).id;
  const std::size_t slot = finding * diseases.size() + disease;
  if (slot < cpt.size() && cpt[slot].finding == fid && cpt[slot].disease == did)
    return cpt[slot];
  for (const auto& r : cpt)
    if (r.finding == fid && r.disease == did) return r;
  throw std::out_of_range("no cpt row for (" + fid + ", " + did + ")");
}

double DiagnosticNetwork::prior(std::size_t disease, PriorMode mode) const {
  if (mode == PriorMode::Uniform) return 1.0 / static_cast<double>(diseases.size());
  return priors.at(disease);
}

void DiagnosticNetwork::canonicalize() {
  const std::size_t nd = diseases.size();
  auto key = [&](const ConditionalRow& r) {
    const std::size_t f = finding_index(r.finding);
    const std::size_t d = disease_index(r.disease);
    if (f == npos || d == npos) return std::numeric_limits<std::size_t>::max();
    return f * nd + d;
  };
  std::stable_sort(cpt.begin(), cpt.end(),
                   [&](const ConditionalRow& a, const ConditionalRow& b) {
                     return key(a) < key(b);
                   });
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& v : violations) out << v.location << ": " << v.message << "\n";
  return out.str();
}

namespace {

double sum_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s;
}

bool all_unit_interval(const std::vector<double>& xs) {
  return std::all_of(xs.begin(), xs.end(),
                     [](double x) { return x >= 0.0 && x <= 1.0; });
}

void check_distribution(const std::vector<double>& probs, const std::string& where,
                        std::vector<Violation>& out) {
  if (!all_unit_interval(probs))
    out.push_back({where, "entries must lie in [0, 1]"});
  const double s = sum_of(probs);
  if (!(std::abs(s - 1.0) <= kSumTolerance)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "entries sum to " << s << ", expected 1";
    out.push_back({where, msg.str()});
  }
}

}  // namespace

ValidationReport validate_network(const DiagnosticNetwork& net) {
  ValidationReport report;
  auto& out = report.violations;

  if (net.diseases.empty()) out.push_back({"diseases", "network has no diseases"});
  std::set<std::string> disease_ids;
  for (std::size_t i = 0; i < net.diseases.size(); ++i) {
    if (!disease_ids.insert(net.diseases[i].id).second)
      out.push_back({"diseases[" + std::to_string(i) + "]",
                     "duplicate disease id '" + net.diseases[i].id + "'"});
  }

  if (net.priors.size() != net.diseases.size()) {
    out.push_back({"priors", "expected " + std::to_string(net.diseases.size()) +
                                 " entries, found " + std::to_string(net.priors.size())});
  } else if (!net.diseases.empty()) {
    check_distribution(net.priors, "priors", out);
  }

  std::set<std::string> finding_ids;
  for (std::size_t i = 0; i < net.findings.size(); ++i) {
    const auto& f = net.findings[i];
    const std::string where = "findings[" + std::to_string(i) + "]";
    if (!finding_ids.insert(f.id).second)
      out.push_back({where, "duplicate finding id '" + f.id + "'"});
    if (f.states.size() < 2)
      out.push_back({where, "finding '" + f.id + "' needs at least 2 states"});
    std::set<std::string> labels(f.states.begin(), f.states.end());
    if (labels.size() != f.states.size())
      out.push_back({where, "finding '" + f.id + "' has duplicate state labels"});
  }

  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 0; i < net.cpt.size(); ++i) {
    const auto& r = net.cpt[i];
    const std::string where = "cpt(" + r.finding + "," + r.disease + ")";
    const std::size_t f = net.finding_index(r.finding);
    if (f == DiagnosticNetwork::npos) {
      out.push_back({"cpt[" + std::to_string(i) + "]",
                     "unknown finding '" + r.finding + "'"});
      continue;
    }
    if (net.disease_index(r.disease) == DiagnosticNetwork::npos) {
      out.push_back({"cpt[" + std::to_string(i) + "]",
                     "unknown disease '" + r.disease + "'"});
      continue;
    }
    if (!seen.insert({r.finding, r.disease}).second) {
      out.push_back({where, "duplicate row"});
      continue;
    }
    if (r.probs.size() != net.findings[f].states.size()) {
      out.push_back({where, "expected " + std::to_string(net.findings[f].states.size()) +
                                " probabilities, found " + std::to_string(r.probs.size())});
      continue;
    }
    check_distribution(r.probs, where, out);
  }

  for (const auto& f : net.findings)
    for (const auto& d : net.diseases)
      if (!seen.count({f.id, d.id}))
        out.push_back({"cpt(" + f.id + "," + d.id + ")", "missing row"});

  return report;
}

ValidationReport validate_case(const DiagnosticNetwork& net, const CaseRecord& c,
                               const std::string& location) {
  ValidationReport report;
  if (net.disease_index(c.gold) == DiagnosticNetwork::npos)
    report.violations.push_back({location + ".gold", "unknown disease '" + c.gold + "'"});
  for (const auto& [finding, state] : c.observations) {
    const std::size_t f = net.finding_index(finding);
    if (f == DiagnosticNetwork::npos) {
      report.violations.push_back(
          {location + ".observations." + finding, "unknown finding '" + finding + "'"});
    } else if (net.findings[f].state_index(state) == DiagnosticNetwork::npos) {
      report.violations.push_back({location + ".observations." + finding,
                                   "unknown state '" + state + "'"});
    }
  }
  return report;
}

ResolvedCase resolve_case(const DiagnosticNetwork& net, const CaseRecord& c) {
  ResolvedCase out;
  out.id = c.id;
  out.gold = net.disease_index(c.gold);
  if (out.gold == DiagnosticNetwork::npos)
    throw std::invalid_argument("case '" + c.id + "': unknown gold disease '" + c.gold + "'");
  out.observations.reserve(c.observations.size());
  for (const auto& [finding, state] : c.observations) {
    const std::size_t f = net.finding_index(finding);
    if (f == DiagnosticNetwork::npos)
      throw std::invalid_argument("case '" + c.id + "': unknown finding '" + finding + "'");
    const std::size_t s = net.findings[f].state_index(state);
    if (s == DiagnosticNetwork::npos)
      throw std::invalid_argument("case '" + c.id + "': unknown state '" + state +
                                  "' for finding '" + finding + "'");
    out.observations.emplace_back(f, s);
  }
  std::sort(out.observations.begin(), out.observations.end());
  return out;
}

Posterior infer_posterior(const DiagnosticNetwork& net, const CaseRecord& c,
                          PriorMode mode) {
  return infer_posterior(net, resolve_case(net, c), mode);
}

Posterior infer_posterior(const DiagnosticNetwork& net, const ResolvedCase& c,
                          PriorMode mode) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  const std::size_t nd = net.disease_count();
  std::vector<double> log_mass(nd);
  for (std::size_t d = 0; d < nd; ++d) {
    double acc = std::log(net.prior(d, mode));
    for (const auto& [f, s] : c.observations) {
      if (acc == kNegInf) break;
      acc += std::log(net.row(f, d).probs[s]);
    }
    log_mass[d] = acc;
  }

  const double top = *std::max_element(log_mass.begin(), log_mass.end());
  if (top == kNegInf) throw InconsistentCase(c.id);

  Posterior post;
  post.probs.resize(nd);
  double total = 0.0;
  for (std::size_t d = 0; d < nd; ++d) {
    post.probs[d] = std::exp(log_mass[d] - top);
    total += post.probs[d];
  }
  for (double& p : post.probs) p /= total;
  return post;
}

std::size_t leading_disease(const Posterior& p) {
  if (p.probs.empty()) throw std::invalid_argument("empty posterior");
  std::size_t best = 0;
  for (std::size_t i = 1; i < p.probs.size(); ++i)
    if (p.probs[i] > p.probs[best]) best = i;
  return best;
}

TopTwo top_two(const Posterior& p) {
  if (p.probs.size() < 2)
    throw std::invalid_argument("top_two needs at least two diseases");
  const std::size_t lead = leading_disease(p);
  std::size_t second = lead == 0 ? 1 : 0;
  for (std::size_t i = 0; i < p.probs.size(); ++i)
    if (i != lead && p.probs[i] > p.probs[second]) second = i;
  return {{lead, p.probs[lead]}, {second, p.probs[second]}};
}

}  // namespace bnsens
