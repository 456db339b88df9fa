#pragma once

// Command-line runner: `orbitsym verify <suite> ...` and `orbitsym info ...`.

#include "orbitsym/verification.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace orbitsym {

class UsageError : public Error {
 public:
  using Error::Error;
};

/// H as typed by the user. `exact` is set when every entry parsed as a
/// decimal or a fraction; block detection then uses exact rationals.
struct ParsedH {
  std::vector<double> values;
  std::optional<std::vector<Rational>> exact;
};

/// Parses "1,0,-1", "1/3,1/3,-2/3", "0.5,-0.5". Throws UsageError.
ParsedH parse_h(const std::string& text);

std::shared_ptr<const ChamberElement> chamber_from(const SemisimpleModel& model,
                                                   const ParsedH& h);

struct RunConfig {
  std::size_t n = 2;
  ParsedH h;
  std::string suite = "all";
  std::size_t samples = 50;
  std::uint64_t seed = 42;
  double fd_step = 1e-3;
  Tolerances tolerances;
  std::optional<std::string> json_path;
  bool quiet = false;
  unsigned threads = 1;
};

/// Suites selected by a suite name ("all" expands to every suite).
std::vector<std::string> expand_suite(const std::string& suite);

nlohmann::ordered_json to_json(const VerificationReport& report);
nlohmann::ordered_json to_json(const std::vector<VerificationReport>& reports);

/// Runs the configured suites. Returns 0 iff every report passes, 1 on any
/// failure, 2 on configuration errors.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Prints block structure and subspace dimensions for H.
int info(std::size_t n, const ParsedH& h, std::ostream& out, std::ostream& err);

/// Full command-line entry point.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace orbitsym
