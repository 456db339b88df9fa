#pragma once

// Verification suites. Each sample produces a list of named checks; an
// error is stored relative to its operand scale and compared against the
// check's tolerance. Reports express the sample error in units of the
// suite's headline tolerance, so pass <=> max_error <= tolerance.

#include "orbitsym/symplectic.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace orbitsym {

struct Check {
  std::string name;
  double error = 0.0;  // already divided by the operand scale
  double tolerance = 0.0;
};

struct SampleResult {
  std::size_t index = 0;
  std::vector<Check> checks;
};

struct CheckSummary {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct SampleError {
  std::size_t index = 0;
  double error = 0.0;
};

struct VerificationReport {
  std::string suite;
  std::size_t n = 0;
  std::vector<double> h;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double fd_step = 1e-3;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  std::vector<SampleError> samples_detail;
  std::vector<CheckSummary> checks;
};

/// Tolerance classes. Exact-formula checks default per check (1e-12 for
/// factorizations, 1e-10 for Lagrangian KKS values, 1e-9 otherwise); the
/// finite-difference class defaults to 1e-6 for Iwasawa velocities and
/// 1e-5 for forms. An override replaces every default of its class.
struct Tolerances {
  std::optional<double> exact;
  std::optional<double> fd;

  double exact_or(double fallback) const { return exact.value_or(fallback); }
  double fd_or(double fallback) const { return fd.value_or(fallback); }
};

enum class LagrangianMode { vertical, horizontal };

// Per-sample payloads ---------------------------------------------------------

SampleResult iwasawa_sample(const Matrix& g, const Tolerances& tol);
SampleResult infinitesimal_sample(const SemisimpleModel& model, const Matrix& x, const Matrix& g,
                                  double fd_step, const Tolerances& tol);
/// Ruling projection under witness changes g -> g z (z in exp z(H) and in
/// the identity component of Z_K(H)), displacement residual, both round
/// trips of the identification and pairing nondegeneracy.
SampleResult projection_sample(ChamberPtr chamber, const Matrix& g, std::uint64_t seed,
                               const Tolerances& tol);
SampleResult lagrangian_sample(ChamberPtr chamber, const Matrix& g, const Matrix& k,
                               LagrangianMode mode, double fd_step, const Tolerances& tol);
/// The three routes to the section cut out by Ad(gK) H, over the m(H)-basis.
SampleResult graph_sample(ChamberPtr chamber, const Matrix& g, const Matrix& k, double fd_step,
                          const Tolerances& tol);
/// omega_std against omega_kks in the default chart and in a second chart,
/// KKS constancy along the chart and nondegeneracy.
SampleResult theorem_sample(ChamberPtr chamber, const Matrix& g, std::uint64_t seed,
                            double fd_step, const Tolerances& tol);

// Aggregation -----------------------------------------------------------------

/// Evaluates samples [0, count) on up to `threads` workers. Results are
/// ordered by sample index. Exceptions become failing checks.
std::vector<SampleResult> run_samples(std::size_t count, unsigned threads,
                                      const std::function<SampleResult(std::size_t)>& sample);

VerificationReport aggregate(std::string suite, const ChamberElement& chamber, std::size_t samples,
                             std::uint64_t seed, double fd_step, double headline_tolerance,
                             std::vector<SampleResult> results);

/// Worker count from ORBITSYM_THREADS, else hardware concurrency.
unsigned default_thread_count();

// Fixed-g suites ----------------------------------------------------------------

VerificationReport verify_graph(const Matrix& g, ChamberPtr chamber, std::size_t samples,
                                std::uint64_t seed, double fd_step = 1e-3,
                                const Tolerances& tol = {});
VerificationReport verify_lagrangian(const Matrix& g, ChamberPtr chamber, LagrangianMode mode,
                                     std::size_t samples, std::uint64_t seed,
                                     double fd_step = 1e-3, const Tolerances& tol = {});
VerificationReport verify_theorem(const Matrix& g, ChamberPtr chamber, std::uint64_t seed,
                                  double fd_step = 1e-3, const Tolerances& tol = {});

// Suite names and headline tolerances -----------------------------------------

inline constexpr const char* kSuiteNames[] = {
    "iwasawa",  "infinitesimal", "projection", "lagrangian-vertical", "lagrangian-horizontal",
    "graph",    "theorem"};

double headline_tolerance(const std::string& suite, const Tolerances& tol);

/// Runs one named suite with per-sample random witnesses derived from seed.
/// Sample 0 uses g = e; the graph suite uses g in A for sample 1.
VerificationReport run_suite(const std::string& suite, ChamberPtr chamber, std::size_t samples,
                             std::uint64_t seed, double fd_step, const Tolerances& tol,
                             unsigned threads);

/// Group scale used for random witnesses in run_suite.
inline constexpr double kWitnessScale = 0.5;

}  // namespace orbitsym
