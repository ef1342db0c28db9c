#include "bnsens/report.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "bnsens/decimal.hpp"

namespace bnsens {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::size_t display_width(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

struct NoiseColumns {
  std::string scheme = "none";
  std::string dist = kAbsentCell;
  std::string mu = kAbsentCell, sigma = kAbsentCell, lo = kAbsentCell, hi = kAbsentCell;
};

NoiseColumns noise_columns(const std::optional<NoiseScheme>& scheme) {
  NoiseColumns c;
  if (!scheme) return c;
  c.scheme = to_string(scheme->kind);
  if (const auto* u = std::get_if<UniformNoise>(&scheme->dist)) {
    c.dist = "uniform";
    c.lo = to_decimal(u->lo);
    c.hi = to_decimal(u->hi);
  } else {
    const auto& n = std::get<NormalNoise>(scheme->dist);
    c.dist = "normal";
    c.mu = to_decimal(n.mu);
    c.sigma = to_decimal(n.sigma);
  }
  return c;
}

std::string join_csv(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += csv_field(fields[i]);
  }
  return line + "\r\n";
}

std::string warnings_cell(std::size_t degenerate, std::size_t inconsistent) {
  return fmt::format("deg={} inc={}", degenerate, inconsistent);
}

std::string conf_cell(const ConfidenceCell& cell) {
  return fmt::format("{} ({})", format_optional_probability(cell.mean), cell.count);
}

template <class T>
T parse_unsigned(const std::string& s, const char* column) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument(std::string("bad integer in column ") + column + ": '" + s + "'");
  return value;
}

std::optional<double> parse_optional(const std::string& s, const char* column) {
  if (s == kAbsentCell) return std::nullopt;
  auto v = parse_decimal(s);
  if (!v) throw std::invalid_argument(std::string("bad number in column ") + column + ": '" + s + "'");
  return v;
}

double parse_required(const std::string& s, const char* column) {
  auto v = parse_optional(s, column);
  if (!v) throw std::invalid_argument(std::string("missing value in column ") + column);
  return *v;
}

}  // namespace

std::string format_percent(double pct) { return fmt::format("{:.1f}", pct); }

std::string format_probability(double p) { return fmt::format("{:.4f}", p); }

std::string format_optional_probability(const std::optional<double>& p) {
  return p ? format_probability(*p) : std::string(kAbsentCell);
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns = {
      "prior_mode",       "row_kind",         "replicate",          "scheme",
      "dist",             "mu",               "sigma",              "lo",
      "hi",               "label",            "n_cases",            "n_correct",
      "pct_correct",      "avg_conf_correct", "n_conf_correct",     "avg_conf_incorrect",
      "n_conf_incorrect", "pct_better",       "avg_amount_better",  "avg_score",
      "n_inconsistent",   "degenerate_rows",  "epsilon",            "replicates",
      "master_seed",      "stream_seed"};
  return columns;
}

std::string report_csv(const ExperimentReport& report) {
  const auto& plan = report.plan;
  std::string out = join_csv(csv_columns());
  auto line = [&](const ReportRow& row, const std::string& kind,
                  const std::optional<ReplicateResult>& rep) {
    const RunSummary& s = rep ? rep->summary : row.pooled;
    const NoiseColumns nc = noise_columns(row.scheme);
    const bool with_comparison = !rep && row.comparison.has_value();
    out += join_csv({
        to_string(row.prior_mode),
        kind,
        rep ? std::to_string(rep->index) : kAbsentCell,
        nc.scheme,
        nc.dist,
        nc.mu,
        nc.sigma,
        nc.lo,
        nc.hi,
        row.label,
        std::to_string(s.n_cases),
        std::to_string(s.n_correct),
        format_percent(s.pct_correct),
        format_optional_probability(s.conf_correct.mean),
        std::to_string(s.conf_correct.count),
        format_optional_probability(s.conf_incorrect.mean),
        std::to_string(s.conf_incorrect.count),
        with_comparison ? format_percent(row.comparison->pct_better) : kAbsentCell,
        with_comparison ? format_optional_probability(row.comparison->avg_amount_better)
                        : kAbsentCell,
        format_probability(s.avg_score),
        std::to_string(s.n_inconsistent),
        std::to_string(rep ? rep->degenerate_rows : row.degenerate_rows),
        to_decimal(plan.epsilon),
        std::to_string(plan.replicates),
        std::to_string(plan.master_seed),
        rep ? std::to_string(rep->stream_seed) : kAbsentCell,
    });
  };
  for (const auto& row : report.rows) {
    line(row, row.is_baseline() ? "baseline" : "pooled", std::nullopt);
    for (const auto& rep : row.replicates) line(row, "replicate", rep);
  }
  return out;
}

std::string report_table(const ExperimentReport& report) {
  const auto& plan = report.plan;
  std::ostringstream out;
  out << "Sensitivity analysis report\n";
  out << "  cases per run:   " << report.n_cases << "\n";
  out << "  replicates:      " << plan.replicates << " (pooled n = "
      << plan.replicates * report.n_cases << ")\n";
  out << "  master seed:     " << plan.master_seed << "\n";
  out << "  epsilon:         " << to_decimal(plan.epsilon) << " (\"better\" margin on gold posterior)\n";
  out << "  noise configs:\n";
  for (const auto& s : plan.noise_configs)
    out << "    " << to_string(s.kind) << " " << describe(s.dist) << "\n";

  const std::vector<std::string> header = {
      "", "Percentage Correct", "Avg Confidence Correct (# cases)",
      "Avg Confidence Incorrect (# cases)", "Percentage Better (average amount better)",
      "Avg Score", "Warnings"};

  for (PriorMode mode : plan.prior_modes) {
    std::vector<std::vector<std::string>> cells{header};
    for (const auto& row : report.rows) {
      if (row.prior_mode != mode) continue;
      std::string better = kAbsentCell;
      if (row.comparison)
        better = fmt::format("{}% ({})", format_percent(row.comparison->pct_better),
                             format_optional_probability(row.comparison->avg_amount_better));
      cells.push_back({row.label, format_percent(row.pooled.pct_correct) + "%",
                       conf_cell(row.pooled.conf_correct), conf_cell(row.pooled.conf_incorrect),
                       better, format_probability(row.pooled.avg_score),
                       warnings_cell(row.degenerate_rows, row.pooled.n_inconsistent)});
    }
    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& r : cells)
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], display_width(r[i]));

    out << "\nPriors: " << to_string(mode) << "\n";
    for (std::size_t r = 0; r < cells.size(); ++r) {
      std::string text;
      for (std::size_t i = 0; i < cells[r].size(); ++i) {
        const std::string& c = cells[r][i];
        const std::string pad(width[i] - display_width(c), ' ');
        if (i) text += "  ";
        text += i == 0 ? c + pad : pad + c;
      }
      while (!text.empty() && text.back() == ' ') text.pop_back();
      out << text << "\n";
      if (r == 0) {
        std::size_t total = 0;
        for (std::size_t w : width) total += w;
        out << std::string(total + 2 * (width.size() - 1), '-') << "\n";
      }
    }
  }
  return out.str();
}

std::vector<std::vector<std::string>> split_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      field_started = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      fields.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(fields));
      fields.clear();
      field_started = false;
    } else {
      field += c;
      field_started = true;
    }
  }
  if (in_quotes) throw std::invalid_argument("unterminated quoted CSV field");
  if (field_started || !field.empty()) {
    fields.push_back(std::move(field));
    records.push_back(std::move(fields));
  }
  return records;
}

std::vector<CsvRecord> parse_report_csv(std::string_view text) {
  auto records = split_csv(text);
  if (records.empty() || records.front() != csv_columns())
    throw std::invalid_argument("CSV header does not match the report columns");
  std::vector<CsvRecord> out;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& f = records[r];
    if (f.size() != csv_columns().size())
      throw std::invalid_argument("CSV line " + std::to_string(r + 1) + " has " +
                                  std::to_string(f.size()) + " fields");
    CsvRecord rec;
    rec.prior_mode = f[0];
    rec.row_kind = f[1];
    if (f[2] != kAbsentCell) rec.replicate = parse_unsigned<std::size_t>(f[2], "replicate");
    rec.scheme = f[3];
    rec.dist = f[4];
    rec.mu = parse_optional(f[5], "mu");
    rec.sigma = parse_optional(f[6], "sigma");
    rec.lo = parse_optional(f[7], "lo");
    rec.hi = parse_optional(f[8], "hi");
    rec.label = f[9];
    rec.n_cases = parse_unsigned<std::size_t>(f[10], "n_cases");
    rec.n_correct = parse_unsigned<std::size_t>(f[11], "n_correct");
    rec.pct_correct = parse_required(f[12], "pct_correct");
    rec.avg_conf_correct = parse_optional(f[13], "avg_conf_correct");
    rec.n_conf_correct = parse_unsigned<std::size_t>(f[14], "n_conf_correct");
    rec.avg_conf_incorrect = parse_optional(f[15], "avg_conf_incorrect");
    rec.n_conf_incorrect = parse_unsigned<std::size_t>(f[16], "n_conf_incorrect");
    rec.pct_better = parse_optional(f[17], "pct_better");
    rec.avg_amount_better = parse_optional(f[18], "avg_amount_better");
    rec.avg_score = parse_required(f[19], "avg_score");
    rec.n_inconsistent = parse_unsigned<std::size_t>(f[20], "n_inconsistent");
    rec.degenerate_rows = parse_unsigned<std::size_t>(f[21], "degenerate_rows");
    rec.epsilon = parse_required(f[22], "epsilon");
    rec.replicates = parse_unsigned<std::size_t>(f[23], "replicates");
    rec.master_seed = parse_unsigned<std::uint64_t>(f[24], "master_seed");
    if (f[25] != kAbsentCell) rec.stream_seed = parse_unsigned<std::uint64_t>(f[25], "stream_seed");
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace bnsens
