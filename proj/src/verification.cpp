#include "orbitsym/verification.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <thread>

namespace orbitsym {

namespace {

constexpr double kHuge = std::numeric_limits<double>::max();

double cond(const Matrix& g) { return g.frobenius_norm() * inverse(g).frobenius_norm(); }

// Operand scale for quantities that are linear in H and conjugated by g.
double orbit_scale(const Matrix& g, const ChamberElement& chamber) {
  return std::max(1.0, cond(g) * chamber.h().frobenius_norm());
}

double relative(double error, double scale) { return error / std::max(1.0, scale); }

Matrix identity_like(const ChamberElement& chamber) {
  return Matrix::identity(chamber.h().rows());
}

// Largest |killing(x, [Z_i, Z_j])| relative to ||x|| ||Z_i|| ||Z_j||.
double max_kks_on_pairs(const OrbitPoint& x, const std::vector<Matrix>& gens) {
  double worst = 0.0;
  const double xn = x.point.frobenius_norm();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      const double v = kks(x, tangent(x, gens[i]), tangent(x, gens[j]));
      const double s = xn * gens[i].frobenius_norm() * gens[j].frobenius_norm();
      worst = std::max(worst, relative(std::abs(v), s));
    }
  }
  return worst;
}

std::vector<Matrix> conjugated(const Matrix& g, const std::vector<Matrix>& basis) {
  const Matrix g_inv = inverse(g);
  std::vector<Matrix> out;
  out.reserve(basis.size());
  for (const Matrix& b : basis) out.push_back(g * b * g_inv);
  return out;
}

Matrix random_k(const SemisimpleModel& model, std::uint64_t seed) {
  return random_exp_in_span(model.k_basis(), model.n(), seed, 1.0);
}

std::uint64_t suite_stream(const std::string& suite) {
  for (std::size_t i = 0; i < std::size(kSuiteNames); ++i)
    if (suite == kSuiteNames[i]) return 1000 + i;
  throw std::invalid_argument("unknown suite: " + suite);
}

// Chart parameters uniform in [-0.5, 0.5).
std::vector<double> chart_grid_point(std::size_t dim, std::uint64_t seed) {
  std::vector<double> t(dim);
  std::uint64_t s = seed;
  for (double& v : t) {
    s = derive_seed(s, 7, 0);
    v = static_cast<double>(s >> 11) * 0x1.0p-53 - 0.5;
  }
  return t;
}

}  // namespace

// ---------------------------------------------------------------------------
// Per-sample payloads

SampleResult iwasawa_sample(const Matrix& g, const Tolerances& tol) {
  const double e = tol.exact_or(1e-12);
  const std::size_t n = g.rows();
  const IwasawaFactors f = iwasawa(g);
  const double gn = g.frobenius_norm();
  SampleResult out;

  out.checks.push_back(
      {"reconstruction", (g - f.k_factor * f.a_factor * f.n_factor).frobenius_norm() / gn, e});
  out.checks.push_back(
      {"k_orthogonal", (f.k_factor.transpose() * f.k_factor - Matrix::identity(n)).frobenius_norm(),
       e});
  out.checks.push_back({"k_det_one", std::abs(determinant(f.k_factor) - 1.0), e});

  double a_shape = 0.0, n_shape = 0.0, h_log = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(f.a_factor(i, i) > 0.0)) a_shape = kHuge;
    h_log = std::max(h_log, std::abs(std::exp(f.h_projection(i, i)) - f.a_factor(i, i)) /
                                f.a_factor(i, i));
    n_shape = std::max(n_shape, std::abs(f.n_factor(i, i) - 1.0));
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) {
        a_shape = std::max(a_shape, std::abs(f.a_factor(i, j)));
        h_log = std::max(h_log, std::abs(f.h_projection(i, j)));
      }
      if (i > j) n_shape = std::max(n_shape, std::abs(f.n_factor(i, j)));
    }
  }
  out.checks.push_back({"a_positive_diagonal", a_shape, e});
  out.checks.push_back({"n_unipotent", n_shape, e});
  out.checks.push_back({"h_is_log_a", h_log, e});

  // Refactoring K A N must return the same factors.
  const IwasawaFactors again = iwasawa(f.k_factor * f.a_factor * f.n_factor);
  const double c = cond(g);
  const double unique = std::max({max_abs_diff(again.k_factor, f.k_factor),
                                  max_abs_diff(again.a_factor, f.a_factor) / f.a_factor.max_abs(),
                                  max_abs_diff(again.n_factor, f.n_factor) / f.n_factor.max_abs()});
  out.checks.push_back({"uniqueness", relative(unique, c), e});
  return out;
}

SampleResult infinitesimal_sample(const SemisimpleModel& model, const Matrix& x, const Matrix& g,
                                  double fd_step, const Tolerances& tol) {
  const double e = tol.exact_or(1e-12);
  const double fd = tol.fd_or(1e-6);
  SampleResult out;
  const IwasawaFactors f = iwasawa(g);
  const Matrix an = f.an();
  const Matrix an_inv = inverse(an);
  const Matrix y = an * x * an_inv;
  const InfinitesimalIwasawa inf = infinitesimal_iwasawa(model, x, f);

  const Matrix rebuilt = inf.k_deriv + inf.a_deriv + an * inf.n_deriv * an_inv;
  out.checks.push_back({"decomposition_identity",
                        relative((y - rebuilt).frobenius_norm(), y.frobenius_norm()), e});

  double shape = (inf.k_deriv + inf.k_deriv.transpose()).max_abs();
  const std::size_t n = g.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) shape = std::max(shape, std::abs(inf.a_deriv(i, j)));
      if (i >= j) shape = std::max(shape, std::abs(inf.n_deriv(i, j)));
    }
  }
  shape = std::max(shape, std::abs(inf.a_deriv.trace()));
  out.checks.push_back({"component_shapes", relative(shape, y.frobenius_norm()), e});

  const InfinitesimalIwasawa num = fd_iwasawa_derivatives(x, g, fd_step);
  const double s = x.frobenius_norm() * g.frobenius_norm();
  out.checks.push_back({"fd_k", relative(max_abs_diff(num.k_deriv, inf.k_deriv), s), fd});
  out.checks.push_back({"fd_a", relative(max_abs_diff(num.a_deriv, inf.a_deriv), s), fd});
  out.checks.push_back({"fd_n", relative(max_abs_diff(num.n_deriv, inf.n_deriv), s), fd});

  // Depends on g only through AN(g).
  const InfinitesimalIwasawa shifted =
      infinitesimal_iwasawa(model, x, f.k_factor.transpose() * g);
  const double dep = std::max({max_abs_diff(shifted.k_deriv, inf.k_deriv),
                               max_abs_diff(shifted.a_deriv, inf.a_deriv),
                               max_abs_diff(shifted.n_deriv, inf.n_deriv)});
  out.checks.push_back({"an_dependence", relative(dep, y.frobenius_norm() * cond(g)), e});
  return out;
}

SampleResult projection_sample(ChamberPtr chamber, const Matrix& g, std::uint64_t seed,
                               const Tolerances& tol) {
  const ChamberElement& ch = *chamber;
  const SemisimpleModel& model = ch.model();
  const std::size_t n = model.n();
  SampleResult out;
  const double scale = orbit_scale(g, ch);
  const OrbitPoint x = orbit_point(g, chamber);
  const OrbitPoint base = project_ruling(x);

  const Matrix z = random_exp_in_span(ch.z_of_h(), n, derive_seed(seed, 1, 0), 0.5);
  const Matrix zk = random_exp_in_span(ch.z_k_of_h(), n, derive_seed(seed, 2, 0), 1.0);
  const double pr_z =
      max_abs_diff(project_ruling(orbit_point(g * z, chamber)).point, base.point);
  const double pr_zk =
      max_abs_diff(project_ruling(orbit_point(g * zk, chamber)).point, base.point);
  out.checks.push_back(
      {"projection_witness_z", relative(pr_z, orbit_scale(g * z, ch)), tol.exact_or(1e-9)});
  out.checks.push_back({"projection_witness_zk", relative(pr_zk, scale), tol.exact_or(1e-9)});
  out.checks.push_back(
      {"displacement_in_fiber", relative(displacement_residual(x), scale), tol.exact_or(1e-10)});

  // i o i^{-1} on the sampled orbit point.
  const CotangentRep rep = to_cotangent(x);
  const OrbitPoint back = from_cotangent(rep);
  const double round1 =
      std::max(max_abs_diff(back.point, x.point),
               max_abs_diff(orbit_point(back.witness, chamber).point, x.point));
  out.checks.push_back({"i_after_i_inverse", relative(round1, scale), tol.exact_or(1e-9)});

  // i^{-1} o i on a random cotangent vector.
  const Matrix k = random_k(model, derive_seed(seed, 3, 0));
  const Matrix u = random_in_span(ch.n_of_h(), n, derive_seed(seed, 4, 0), 1.0);
  const CotangentRep made = make_cotangent(k, k * u * k.transpose(), chamber);
  const OrbitPoint y = from_cotangent(made);
  const CotangentRep again = to_cotangent(orbit_point(y.witness, chamber));
  double round2 = std::max(max_abs_diff(again.base, made.base), max_abs_diff(again.fiber, made.fiber));
  for (std::size_t a = 0; a < made.coords.size(); ++a)
    round2 = std::max(round2, std::abs(again.coords[a] - made.coords[a]));
  out.checks.push_back({"i_inverse_after_i",
                        relative(round2, orbit_scale(y.witness, ch)), tol.exact_or(1e-9)});

  if (!ch.n_of_h().empty()) {
    const auto sv = singular_values(pairing_matrix(ch));
    out.checks.push_back({"pairing_inverse_sigma_min", 1.0 / std::max(sv.back(), 1e-300), 1e8});
  }
  return out;
}

SampleResult lagrangian_sample(ChamberPtr chamber, const Matrix& g, const Matrix& k,
                               LagrangianMode mode, double fd_step, const Tolerances& tol) {
  const ChamberElement& ch = *chamber;
  const Matrix gk = g * k;
  const OrbitPoint x = orbit_point(gk, chamber);
  const bool vertical = mode == LagrangianMode::vertical;
  SampleResult out;

  const auto& frame = vertical ? ch.n_of_h() : ch.model().k_basis();
  out.checks.push_back({"kks_pairs", max_kks_on_pairs(x, conjugated(gk, frame)),
                        tol.exact_or(1e-10)});

  const OrbitChart chart(x, vertical ? ch.n_of_h() : ch.m_of_h());
  const FormMatrix omega = omega_std_chart(chart, fd_step);
  const double block = omega.entries.empty() ? 0.0 : omega.entries.max_abs();
  out.checks.push_back({"std_block", relative(block, orbit_scale(gk, ch)), tol.fd_or(1e-5)});
  return out;
}

SampleResult graph_sample(ChamberPtr chamber, const Matrix& g, const Matrix& k, double fd_step,
                          const Tolerances& tol) {
  const ChamberElement& ch = *chamber;
  const double scale = orbit_scale(g * k, ch);
  double ab = 0.0, ac = 0.0, bc = 0.0;
  for (const Matrix& x : ch.m_of_h()) {
    const double a = alpha_form(g, ch, k, x);
    const double b = graph_covector(g, chamber, k, x);
    const double c = potential_derivative(g, ch, k, x, fd_step);
    ab = std::max(ab, std::abs(a - b));
    ac = std::max(ac, std::abs(a - c));
    bc = std::max(bc, std::abs(b - c));
  }
  double degenerate = 0.0;
  for (const Matrix& x : ch.z_k_of_h()) {
    degenerate = std::max({degenerate, std::abs(alpha_form(g, ch, k, x)),
                           std::abs(graph_covector(g, chamber, k, x))});
  }
  SampleResult out;
  out.checks.push_back({"alpha_vs_covector", relative(ab, scale), tol.exact_or(1e-9)});
  out.checks.push_back({"alpha_vs_minus_dF", relative(ac, scale), tol.fd_or(1e-5)});
  out.checks.push_back({"covector_vs_minus_dF", relative(bc, scale), tol.fd_or(1e-5)});
  out.checks.push_back({"z_k_annihilated", relative(degenerate, scale), tol.exact_or(1e-9)});
  return out;
}

SampleResult theorem_sample(ChamberPtr chamber, const Matrix& g, std::uint64_t seed,
                            double fd_step, const Tolerances& tol) {
  const ChamberElement& ch = *chamber;
  const SemisimpleModel& model = ch.model();
  SampleResult out;
  const double scale = orbit_scale(g, ch);
  const OrbitPoint x = orbit_point(g, chamber);

  const OrbitChart chart(x, default_chart_directions(ch));
  const std::size_t m = chart.dimension();
  if (m == 0) return out;
  const FormMatrix std_form = omega_std_chart(chart, fd_step);
  const FormMatrix kks_form = omega_kks_chart(chart);
  out.checks.push_back({"std_equals_kks",
                        relative(max_abs_diff(std_form.entries, kks_form.entries), scale),
                        tol.fd_or(1e-5)});

  // Reference values killing(H, [X_i, X_j]) and constancy along the chart.
  Matrix reference(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      reference(i, j) = model.killing(ch.h(), commutator(chart.directions()[i], chart.directions()[j]));
  double constancy = 0.0;
  for (std::uint64_t s = 0; s < 4; ++s) {
    std::vector<double> t = s == 0 ? std::vector<double>(m, 0.0)
                                   : chart_grid_point(m, derive_seed(seed, 5, s));
    const Matrix gt = chart.witness(t);
    double dir = 0.0;
    for (const Matrix& d : chart.directions()) dir = std::max(dir, d.frobenius_norm());
    const double s_t = std::pow(cond(gt), 3) * ch.h().frobenius_norm() * dir * dir;
    constancy = std::max(
        constancy, relative(max_abs_diff(omega_kks_chart(chart, t).entries, reference), s_t));
  }
  out.checks.push_back({"kks_constant_along_chart", constancy, tol.exact_or(1e-9)});

  const auto sv = singular_values(kks_form.entries);
  out.checks.push_back({"kks_inverse_sigma_min", 1.0 / std::max(sv.back(), 1e-300), 1e8});

  // A second complement of z(H): m(H) followed by n(H).
  std::vector<Matrix> second = ch.m_of_h();
  second.insert(second.end(), ch.n_of_h().begin(), ch.n_of_h().end());
  const OrbitChart other(x, std::move(second));
  out.checks.push_back(
      {"second_chart_std_equals_kks",
       relative(max_abs_diff(omega_std_chart(other, fd_step).entries,
                             omega_kks_chart(other).entries),
                scale),
       tol.fd_or(1e-5)});
  return out;
}

// ---------------------------------------------------------------------------
// Aggregation

std::vector<SampleResult> run_samples(std::size_t count, unsigned threads,
                                      const std::function<SampleResult(std::size_t)>& sample) {
  std::vector<SampleResult> results(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        results[i] = sample(i);
      } catch (const std::exception& ex) {
        results[i] = SampleResult{};
        results[i].checks.push_back({std::string("exception: ") + ex.what(), kHuge, 1.0});
      }
      results[i].index = i;
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  return results;
}

VerificationReport aggregate(std::string suite, const ChamberElement& chamber, std::size_t samples,
                             std::uint64_t seed, double fd_step, double headline_tolerance,
                             std::vector<SampleResult> results) {
  VerificationReport report;
  report.suite = std::move(suite);
  report.n = chamber.h().rows();
  report.h.assign(chamber.entries().begin(), chamber.entries().end());
  report.samples = samples;
  report.seed = seed;
  report.fd_step = fd_step;
  report.tolerance = headline_tolerance;

  std::sort(results.begin(), results.end(),
            [](const SampleResult& a, const SampleResult& b) { return a.index < b.index; });
  std::vector<std::string> order;
  std::map<std::string, CheckSummary> by_name;
  for (const SampleResult& r : results) {
    double sample_error = 0.0;
    for (const Check& c : r.checks) {
      double ratio = c.error / c.tolerance;
      if (!std::isfinite(ratio)) ratio = kHuge;
      sample_error = std::max(sample_error, std::min(ratio * headline_tolerance, kHuge));
      auto [it, inserted] = by_name.try_emplace(c.name, CheckSummary{c.name, 0.0, c.tolerance, true});
      if (inserted) order.push_back(c.name);
      const double err = std::isfinite(c.error) ? c.error : kHuge;
      it->second.max_error = std::max(it->second.max_error, err);
      it->second.pass = it->second.pass && ratio <= 1.0;
    }
    report.samples_detail.push_back({r.index, sample_error});
    report.max_error = std::max(report.max_error, sample_error);
  }
  for (const std::string& name : order) report.checks.push_back(by_name[name]);
  report.pass = report.max_error <= report.tolerance;
  return report;
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("ORBITSYM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// ---------------------------------------------------------------------------
// Fixed-g suites

VerificationReport verify_graph(const Matrix& g, ChamberPtr chamber, std::size_t samples,
                                std::uint64_t seed, double fd_step, const Tolerances& tol) {
  auto results = run_samples(samples, default_thread_count(), [&](std::size_t i) {
    const Matrix k = i == 0 ? identity_like(*chamber)
                            : random_k(chamber->model(), derive_seed(seed, 11, i));
    return graph_sample(chamber, g, k, fd_step, tol);
  });
  return aggregate("graph", *chamber, samples, seed, fd_step, headline_tolerance("graph", tol),
                   std::move(results));
}

VerificationReport verify_lagrangian(const Matrix& g, ChamberPtr chamber, LagrangianMode mode,
                                     std::size_t samples, std::uint64_t seed, double fd_step,
                                     const Tolerances& tol) {
  const std::string suite =
      mode == LagrangianMode::vertical ? "lagrangian-vertical" : "lagrangian-horizontal";
  auto results = run_samples(samples, default_thread_count(), [&](std::size_t i) {
    const Matrix k = i == 0 ? identity_like(*chamber)
                            : random_k(chamber->model(), derive_seed(seed, 12, i));
    return lagrangian_sample(chamber, g, k, mode, fd_step, tol);
  });
  return aggregate(suite, *chamber, samples, seed, fd_step, headline_tolerance(suite, tol),
                   std::move(results));
}

VerificationReport verify_theorem(const Matrix& g, ChamberPtr chamber, std::uint64_t seed,
                                  double fd_step, const Tolerances& tol) {
  auto results = run_samples(1, 1, [&](std::size_t) {
    return theorem_sample(chamber, g, seed, fd_step, tol);
  });
  return aggregate("theorem", *chamber, 1, seed, fd_step, headline_tolerance("theorem", tol),
                   std::move(results));
}

double headline_tolerance(const std::string& suite, const Tolerances& tol) {
  if (suite == "iwasawa") return tol.exact_or(1e-12);
  if (suite == "infinitesimal") return tol.fd_or(1e-6);
  if (suite == "projection") return tol.exact_or(1e-9);
  if (suite == "lagrangian-vertical" || suite == "lagrangian-horizontal" || suite == "graph" ||
      suite == "theorem") {
    return tol.fd_or(1e-5);
  }
  throw std::invalid_argument("unknown suite: " + suite);
}

VerificationReport run_suite(const std::string& suite, ChamberPtr chamber, std::size_t samples,
                             std::uint64_t seed, double fd_step, const Tolerances& tol,
                             unsigned threads) {
  const SemisimpleModel& model = chamber->model();
  const std::uint64_t stream = suite_stream(suite);
  auto witness = [&](std::size_t i) {
    if (i == 0) return identity_like(*chamber);
    return random_group_element(model, derive_seed(seed, stream, i), kWitnessScale);
  };
  auto k_sample = [&](std::size_t i) {
    return random_k(model, derive_seed(seed, stream + 100, i));
  };

  std::function<SampleResult(std::size_t)> sample;
  if (suite == "iwasawa") {
    sample = [&](std::size_t i) { return iwasawa_sample(witness(i), tol); };
  } else if (suite == "infinitesimal") {
    sample = [&](std::size_t i) {
      const Matrix x = random_algebra_element(model, derive_seed(seed, stream + 200, i), 1.0);
      return infinitesimal_sample(model, x, witness(i), fd_step, tol);
    };
  } else if (suite == "projection") {
    sample = [&](std::size_t i) {
      return projection_sample(chamber, witness(i), derive_seed(seed, stream + 300, i), tol);
    };
  } else if (suite == "lagrangian-vertical" || suite == "lagrangian-horizontal") {
    const LagrangianMode mode =
        suite == "lagrangian-vertical" ? LagrangianMode::vertical : LagrangianMode::horizontal;
    sample = [&, mode](std::size_t i) {
      return lagrangian_sample(chamber, witness(i), k_sample(i), mode, fd_step, tol);
    };
  } else if (suite == "graph") {
    sample = [&](std::size_t i) {
      Matrix g = witness(i);
      if (i == 1) {
        g = random_exp_in_span(model.a_basis(), model.n(), derive_seed(seed, stream + 400, i), 1.0);
      }
      return graph_sample(chamber, g, k_sample(i), fd_step, tol);
    };
  } else if (suite == "theorem") {
    sample = [&](std::size_t i) {
      return theorem_sample(chamber, witness(i), derive_seed(seed, stream + 500, i), fd_step, tol);
    };
  } else {
    throw std::invalid_argument("unknown suite: " + suite);
  }
  auto results = run_samples(samples, threads, sample);
  return aggregate(suite, *chamber, samples, seed, fd_step, headline_tolerance(suite, tol),
                   std::move(results));
}

}  // namespace orbitsym
