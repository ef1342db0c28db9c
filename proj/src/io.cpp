#include "bnsens/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bnsens/decimal.hpp"

namespace bnsens {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

/// Walks a parsed document, tracking the JSON pointer of the current node
/// for error messages.
class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
    throw ParseError(source_, pointer.empty() ? "/" : pointer, message);
  }

  const json& member(const json& obj, const std::string& pointer, const char* key) const {
    if (!obj.is_object()) fail(pointer, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(pointer, std::string("missing member \"") + key + "\"");
    return *it;
  }

  const json& array(const json& obj, const std::string& pointer, const char* key) const {
    const json& v = member(obj, pointer, key);
    if (!v.is_array()) fail(pointer + "/" + key, "expected an array");
    return v;
  }

  std::string string(const json& v, const std::string& pointer) const {
    if (!v.is_string()) fail(pointer, "expected a string");
    return v.get<std::string>();
  }

  double probability(const json& v, const std::string& pointer) const {
    if (v.is_number()) return v.get<double>();
    if (!v.is_string()) fail(pointer, "expected a decimal string");
    const auto& text = v.get_ref<const std::string&>();
    auto value = parse_decimal(text);
    if (!value) fail(pointer, "\"" + text + "\" is not a decimal number");
    return *value;
  }

  void check_format(const json& doc, const char* expected) const {
    if (!doc.is_object()) fail("", "expected a JSON object at top level");
    auto it = doc.find("format");
    if (it == doc.end()) return;
    if (!it->is_string() || it->get<std::string>() != expected)
      fail("/format", std::string("expected \"") + expected + "\"");
  }

  json parse(std::string_view text) const {
    try {
      return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
      // Byte offsets are 1-based and point just past the offending character.
      const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
      std::size_t line = 1, column = 1;
      for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
          ++line;
          column = 1;
        } else {
          ++column;
        }
      }
      std::string what = e.what();
      if (auto pos = what.find("] "); pos != std::string::npos) what = what.substr(pos + 2);
      throw ParseError(source_, "line " + std::to_string(line) + ", column " + std::to_string(column),
                       what);
    }
  }

 private:
  std::string source_;
};

std::string idx(const std::string& base, std::size_t i) { return base + "/" + std::to_string(i); }

ordered_json generator_json(const GeneratorInfo& generator) {
  ordered_json g = ordered_json::object();
  for (const auto& [k, v] : generator) g[k] = v;
  return g;
}

}  // namespace

DiagnosticNetwork parse_network(std::string_view text, const std::string& source) {
  Reader in(source);
  const json doc = in.parse(text);
  in.check_format(doc, kNetworkFormat);

  DiagnosticNetwork net;
  const json& diseases = in.array(doc, "", "diseases");
  for (std::size_t i = 0; i < diseases.size(); ++i) {
    const std::string p = idx("/diseases", i);
    const json& d = diseases[i];
    Disease disease;
    disease.id = in.string(in.member(d, p, "id"), p + "/id");
    if (auto it = d.find("name"); it != d.end()) disease.name = in.string(*it, p + "/name");
    net.diseases.push_back(std::move(disease));
    net.priors.push_back(in.probability(in.member(d, p, "prior"), p + "/prior"));
  }

  const json& findings = in.array(doc, "", "findings");
  for (std::size_t i = 0; i < findings.size(); ++i) {
    const std::string p = idx("/findings", i);
    FindingVariable f;
    f.id = in.string(in.member(findings[i], p, "id"), p + "/id");
    const json& states = in.array(findings[i], p, "states");
    for (std::size_t s = 0; s < states.size(); ++s)
      f.states.push_back(in.string(states[s], idx(p + "/states", s)));
    net.findings.push_back(std::move(f));
  }

  const json& cpt = in.array(doc, "", "cpt");
  for (std::size_t i = 0; i < cpt.size(); ++i) {
    const std::string p = idx("/cpt", i);
    ConditionalRow row;
    row.finding = in.string(in.member(cpt[i], p, "finding"), p + "/finding");
    row.disease = in.string(in.member(cpt[i], p, "disease"), p + "/disease");
    const json& probs = in.array(cpt[i], p, "probs");
    for (std::size_t s = 0; s < probs.size(); ++s)
      row.probs.push_back(in.probability(probs[s], idx(p + "/probs", s)));
    net.cpt.push_back(std::move(row));
  }
  return net;
}

std::vector<CaseRecord> parse_cases(std::string_view text, const std::string& source) {
  Reader in(source);
  const json doc = in.parse(text);
  in.check_format(doc, kCasesFormat);

  std::vector<CaseRecord> out;
  const json& cases = in.array(doc, "", "cases");
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const std::string p = idx("/cases", i);
    CaseRecord c;
    c.id = in.string(in.member(cases[i], p, "id"), p + "/id");
    c.gold = in.string(in.member(cases[i], p, "gold"), p + "/gold");
    const json& obs = in.member(cases[i], p, "observations");
    if (!obs.is_object()) in.fail(p + "/observations", "expected an object");
    for (const auto& [finding, state] : obs.items())
      c.observations.emplace(finding, in.string(state, p + "/observations/" + finding));
    out.push_back(std::move(c));
  }
  return out;
}

std::string serialize_network(const DiagnosticNetwork& net, const GeneratorInfo& generator) {
  ordered_json doc = ordered_json::object();
  doc["format"] = kNetworkFormat;
  if (!generator.empty()) doc["generator"] = generator_json(generator);
  ordered_json diseases = ordered_json::array();
  for (std::size_t i = 0; i < net.diseases.size(); ++i) {
    const double prior = i < net.priors.size() ? net.priors[i] : 0.0;
    diseases.push_back({{"id", net.diseases[i].id},
                        {"name", net.diseases[i].name},
                        {"prior", to_decimal(prior)}});
  }
  doc["diseases"] = std::move(diseases);
  ordered_json findings = ordered_json::array();
  for (const auto& f : net.findings) findings.push_back({{"id", f.id}, {"states", f.states}});
  doc["findings"] = std::move(findings);
  ordered_json cpt = ordered_json::array();
  for (const auto& r : net.cpt) {
    ordered_json probs = ordered_json::array();
    for (double p : r.probs) probs.push_back(to_decimal(p));
    cpt.push_back({{"finding", r.finding}, {"disease", r.disease}, {"probs", std::move(probs)}});
  }
  doc["cpt"] = std::move(cpt);
  return doc.dump(2) + "\n";
}

std::string serialize_cases(const std::vector<CaseRecord>& cases, const GeneratorInfo& generator) {
  ordered_json doc = ordered_json::object();
  doc["format"] = kCasesFormat;
  if (!generator.empty()) doc["generator"] = generator_json(generator);
  ordered_json list = ordered_json::array();
  for (const auto& c : cases) {
    ordered_json obs = ordered_json::object();
    for (const auto& [f, s] : c.observations) obs[f] = s;
    list.push_back({{"id", c.id}, {"gold", c.gold}, {"observations", std::move(obs)}});
  }
  doc["cases"] = std::move(list);
  return doc.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), "file", "cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

DiagnosticNetwork load_network(const std::filesystem::path& path) {
  DiagnosticNetwork net = parse_network(read_file(path), path.string());
  ValidationReport report = validate_network(net);
  if (!report.ok()) throw ValidationError(std::move(report));
  return net;
}

std::vector<CaseRecord> load_cases(const std::filesystem::path& path,
                                   const DiagnosticNetwork& net) {
  auto cases = parse_cases(read_file(path), path.string());
  ValidationReport report;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    auto r = validate_case(net, cases[i], "/cases/" + std::to_string(i));
    report.violations.insert(report.violations.end(), r.violations.begin(), r.violations.end());
  }
  if (!report.ok()) throw ValidationError(std::move(report));
  return cases;
}

}  // namespace bnsens
