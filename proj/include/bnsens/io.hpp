#pragma once

// JSON network and case files.
//
// Network file:
//   {
//     "format": "bnsens-network/1",
//     "generator": { ... },                      // optional, free-form
//     "diseases": [ {"id": "D1", "name": "...", "prior": "0.25"}, ... ],
//     "findings": [ {"id": "F1", "states": ["absent", "present"]}, ... ],
//     "cpt": [ {"finding": "F1", "disease": "D1", "probs": ["0.8", "0.2"]}, ... ]
//   }
//
// Cases file:
//   {
//     "format": "bnsens-cases/1",
//     "generator": { ... },                      // optional
//     "cases": [ {"id": "case-001", "gold": "D1",
//                 "observations": {"F1": "present", ...}}, ... ]
//   }
//
// Probabilities are decimal strings, parsed to the nearest double, so "1.0"
// and "1" are exactly 1. JSON numbers are accepted on input. Output uses
// the shortest text that reads back to the same double.

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bnsens/model.hpp"

namespace bnsens {

inline constexpr const char* kNetworkFormat = "bnsens-network/1";
inline constexpr const char* kCasesFormat = "bnsens-cases/1";

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, std::string location, const std::string& message)
      : std::runtime_error(source + ": " + location + ": " + message),
        source_(std::move(source)),
        location_(std::move(location)) {}
  const std::string& source() const { return source_; }
  /// "line L, column C" for syntax errors, a JSON pointer otherwise.
  const std::string& location() const { return location_; }

 private:
  std::string source_;
  std::string location_;
};

/// Free-form key/value pairs written under "generator".
using GeneratorInfo = std::map<std::string, std::string>;

/// Structural parse only; throws ParseError. Does not validate.
DiagnosticNetwork parse_network(std::string_view text, const std::string& source = "<network>");
std::vector<CaseRecord> parse_cases(std::string_view text, const std::string& source = "<cases>");

std::string serialize_network(const DiagnosticNetwork& net, const GeneratorInfo& generator = {});
std::string serialize_cases(const std::vector<CaseRecord>& cases,
                            const GeneratorInfo& generator = {});

/// Reads, parses and validates. Throws ParseError, or ValidationError
/// listing every violation.
DiagnosticNetwork load_network(const std::filesystem::path& path);
std::vector<CaseRecord> load_cases(const std::filesystem::path& path, const DiagnosticNetwork& net);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace bnsens
