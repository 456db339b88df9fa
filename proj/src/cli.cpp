#include "orbitsym/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace orbitsym {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::int64_t parse_int64(const std::string& digits) {
  if (digits.size() > 18) throw std::overflow_error("too many digits");
  return std::stoll(digits);
}

// Decimal "[-+]d+[.d*]" or fraction "[-+]d+/d+"; nullopt otherwise.
std::optional<Rational> parse_rational(std::string s) {
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.erase(0, 1);
  }
  try {
    if (const auto slash = s.find('/'); slash != std::string::npos) {
      const std::string p = s.substr(0, slash), q = s.substr(slash + 1);
      if (!all_digits(p) || !all_digits(q)) return std::nullopt;
      const std::int64_t den = parse_int64(q);
      if (den == 0) throw UsageError("zero denominator in H entry");
      const std::int64_t num = parse_int64(p);
      return Rational(negative ? -num : num, den);
    }
    std::string whole = s, frac;
    if (const auto dot = s.find('.'); dot != std::string::npos) {
      whole = s.substr(0, dot);
      frac = s.substr(dot + 1);
      if (!frac.empty() && !all_digits(frac)) return std::nullopt;
      if (whole.empty() && frac.empty()) return std::nullopt;
      if (whole.empty()) whole = "0";
    }
    if (!all_digits(whole)) return std::nullopt;
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) {
      if (den > 100000000000000000LL) throw std::overflow_error("too many digits");
      den *= 10;
    }
    const std::int64_t num = parse_int64(whole + frac);
    return Rational(negative ? -num : num, den);
  } catch (const std::out_of_range&) {
    return std::nullopt;
  } catch (const std::overflow_error&) {
    return std::nullopt;
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string format_h(std::span<const double> h) {
  std::ostringstream os;
  for (std::size_t i = 0; i < h.size(); ++i) os << (i ? ", " : "") << h[i];
  return os.str();
}

}  // namespace

ParsedH parse_h(const std::string& text) {
  ParsedH out;
  std::vector<Rational> exact;
  bool all_exact = true;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    token = trim(token);
    if (token.empty()) throw UsageError("empty entry in H");
    if (auto r = parse_rational(token)) {
      exact.push_back(*r);
      out.values.push_back(r->to_double());
      continue;
    }
    all_exact = false;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      throw UsageError("cannot parse H entry '" + token + "'");
    }
    if (used != token.size() || !std::isfinite(v)) {
      throw UsageError("cannot parse H entry '" + token + "'");
    }
    out.values.push_back(v);
  }
  if (out.values.empty()) throw UsageError("H is empty");
  if (all_exact) out.exact = std::move(exact);
  return out;
}

std::shared_ptr<const ChamberElement> chamber_from(const SemisimpleModel& model,
                                                   const ParsedH& h) {
  if (h.exact) return model.chamber_element(std::span<const Rational>(*h.exact));
  return model.chamber_element(std::span<const double>(h.values));
}

std::vector<std::string> expand_suite(const std::string& suite) {
  if (suite == "all") return {std::begin(kSuiteNames), std::end(kSuiteNames)};
  if (suite == "lagrangian") return {"lagrangian-vertical", "lagrangian-horizontal"};
  for (const char* name : kSuiteNames)
    if (suite == name) return {suite};
  throw UsageError("unknown suite '" + suite + "'");
}

nlohmann::ordered_json to_json(const VerificationReport& report) {
  nlohmann::ordered_json j;
  j["suite"] = report.suite;
  j["n"] = report.n;
  j["H"] = report.h;
  j["samples"] = report.samples;
  j["seed"] = report.seed;
  j["fd_step"] = report.fd_step;
  j["max_error"] = report.max_error;
  j["tolerance"] = report.tolerance;
  j["pass"] = report.pass;
  auto& detail = j["samples_detail"] = nlohmann::ordered_json::array();
  for (const SampleError& s : report.samples_detail) {
    detail.push_back({{"index", s.index}, {"error", s.error}});
  }
  auto& checks = j["checks"] = nlohmann::ordered_json::array();
  for (const CheckSummary& c : report.checks) {
    checks.push_back(
        {{"name", c.name}, {"max_error", c.max_error}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  }
  return j;
}

nlohmann::ordered_json to_json(const std::vector<VerificationReport>& reports) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return arr;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<std::string> suites;
  std::shared_ptr<const ChamberElement> chamber;
  try {
    if (config.n < 2 || config.n > 8) throw UsageError("--n must be between 2 and 8");
    if (config.h.values.size() != config.n) {
      throw UsageError("H has " + std::to_string(config.h.values.size()) + " entries but --n is " +
                       std::to_string(config.n));
    }
    if (!(config.fd_step > 0.0)) throw UsageError("--fd-step must be positive");
    suites = expand_suite(config.suite);
    chamber = chamber_from(*make_sl(config.n), config.h);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  std::vector<VerificationReport> reports;
  bool all_pass = true;
  for (const std::string& suite : suites) {
    reports.push_back(run_suite(suite, chamber, config.samples, config.seed, config.fd_step,
                                config.tolerances, config.threads));
    const VerificationReport& r = reports.back();
    all_pass = all_pass && r.pass;
    if (!config.quiet) {
      char line[160];
      std::snprintf(line, sizeof line, "%-22s samples=%-4zu max_error=%s tolerance=%s %s\n",
                    r.suite.c_str(), r.samples, format_double(r.max_error).c_str(),
                    format_double(r.tolerance).c_str(), r.pass ? "PASS" : "FAIL");
      out << line;
    }
  }

  if (config.json_path) {
    std::ofstream file(*config.json_path, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << *config.json_path << " for writing\n";
      return 2;
    }
    file << to_json(reports).dump(2) << '\n';
  }
  return all_pass ? 0 : 1;
}

int info(std::size_t n, const ParsedH& h, std::ostream& out, std::ostream& err) {
  std::shared_ptr<const ChamberElement> chamber;
  try {
    if (n < 2 || n > 8) throw UsageError("--n must be between 2 and 8");
    if (h.values.size() != n) throw UsageError("H length does not match --n");
    chamber = chamber_from(*make_sl(n), h);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  const ChamberElement& c = *chamber;
  out << "model: sl(" << n << ", R)\n";
  out << "H = diag(" << format_h(c.entries()) << ")\n";
  out << "blocks:";
  for (const auto& b : c.blocks()) out << " (" << b.value << " x" << b.multiplicity << ")";
  out << '\n';
  out << "regular: " << (c.regular() ? "yes" : "no") << '\n';
  out << "dim n(H) = " << c.n_of_h().size() << '\n';
  out << "dim z(H) = " << c.z_of_h().size() << '\n';
  out << "dim z_K(H) = " << c.z_k_of_h().size() << '\n';
  out << "dim m(H) = " << c.m_of_h().size() << '\n';
  out << "orbit dimension = " << c.orbit_dimension() << (c.orbit_dimension() == 0 ? " (point)" : "")
      << '\n';
  out << "flag manifold dimension = " << c.flag_dimension() << '\n';
  return 0;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adjoint orbits of SL(n,R) as cotangent bundles of flag manifolds: numerical checks"};
  app.require_subcommand(1);

  std::size_t n = 2;
  std::string h_text;
  std::string suite_pos, suite_flag;
  RunConfig config;
  std::optional<double> tol_exact, tol_fd;
  std::string json_path;
  bool vertical = false, horizontal = false;

  auto* verify = app.add_subcommand("verify", "Run verification suites");
  verify->add_option("SUITE", suite_pos,
                     "iwasawa | infinitesimal | projection | lagrangian | lagrangian-vertical | "
                     "lagrangian-horizontal | graph | theorem | all");
  verify->add_option("--suite", suite_flag, "Suite name (alternative to the positional form)");
  verify->add_option("--n", n, "Matrix size (2-8)")->required();
  verify->add_option("--H", h_text, "Diagonal of H, e.g. \"1,0,-1\" or \"1/3,1/3,-2/3\"")
      ->required();
  verify->add_option("--samples", config.samples, "Samples per suite")->capture_default_str();
  verify->add_option("--seed", config.seed, "Base seed")->capture_default_str();
  verify->add_option("--fd-step", config.fd_step, "Finite-difference step")->capture_default_str();
  verify->add_option("--tol-exact", tol_exact, "Override exact-formula tolerances");
  verify->add_option("--tol-fd", tol_fd, "Override finite-difference tolerances");
  verify->add_option("--json", json_path, "Write the report array to this path");
  verify->add_flag("--quiet", config.quiet, "Suppress summary lines");
  verify->add_flag("--vertical", vertical, "With 'lagrangian': vertical subspaces only");
  verify->add_flag("--horizontal", horizontal, "With 'lagrangian': horizontal subspaces only");

  auto* info_cmd = app.add_subcommand("info", "Print subspace dimensions for H");
  info_cmd->add_option("--n", n, "Matrix size (2-8)")->required();
  info_cmd->add_option("--H", h_text, "Diagonal of H")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 2;
  }

  ParsedH h;
  try {
    h = parse_h(h_text);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  if (info_cmd->parsed()) return info(n, h, out, err);

  std::string suite = !suite_flag.empty() ? suite_flag : (!suite_pos.empty() ? suite_pos : "all");
  if (suite == "lagrangian" && vertical != horizontal) {
    suite = vertical ? "lagrangian-vertical" : "lagrangian-horizontal";
  }
  config.n = n;
  config.h = std::move(h);
  config.suite = suite;
  config.tolerances = {tol_exact, tol_fd};
  if (!json_path.empty()) config.json_path = json_path;
  config.threads = default_thread_count();
  return run(config, out, err);
}

}  // namespace orbitsym
