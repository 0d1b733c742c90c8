// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Tolerances and budgets are fixed below; nothing is read from the environment
// except the worker count used for the throughput-bound criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "rmps/experiments.hpp"
#include "rmps/io.hpp"
#include "rmps/oracle.hpp"
#include "rmps/symgroup.hpp"
#include "rmps/weingarten.hpp"

using namespace rmps;

namespace {

constexpr double kStderrBand = 5.0;          // equality checks: |estimate - exact| <= 5 se
constexpr double kSlopeTolerance = 0.1;      // criterion 3 log-slope band
constexpr double kOracleTolerance = 1e-9;    // criterion 5 entrywise
constexpr double kFinalDeviation = 0.05;     // criterion 7 (ii), at the largest D
constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

EnsembleParams ensemble(int d, int D, int n, int l, std::uint64_t seed,
                        OmegaDist dist = OmegaDist::Dirichlet) {
  EnsembleParams p;
  p.d = d;
  p.D = D;
  p.n = n;
  p.l = l;
  p.seed = seed;
  p.omega_dist = dist;
  return p;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// CSVs produced with one worker, compared in criterion 12.
struct Artifacts {
  std::vector<std::string> mean_trace;
  std::string purity;
  std::string lipschitz;
  ScalingReport scaling;
};

Artifacts artifacts;

const std::vector<int> kPurityGrid{16, 32, 64, 128};

struct MeanTraceCase {
  const char* label;
  std::uint64_t fixed_stream;
  OmegaDist dist;
};
const MeanTraceCase kMeanTraceCases[] = {
    {"U#1 dirichlet", 0xF1F1F1F1ULL, OmegaDist::Dirichlet},
    {"U#2 dirichlet", 0xF2F2F2F2ULL, OmegaDist::Dirichlet},
    {"U#1 uniform-normalized", 0xF1F1F1F1ULL, OmegaDist::UniformNormalized},
};

MeanTraceResult mean_trace_case(const MeanTraceCase& c, int w) {
  MeanTraceOptions options;
  options.fixed_stream = c.fixed_stream;
  options.workers = w;
  return mean_trace_experiment(ensemble(2, 32, 12, 2, kSeed, c.dist), 500, options);
}

ScalingReport purity_run(int w) {
  return purity_scaling_experiment(ensemble(2, 16, 16, 2, kSeed), kPurityGrid, 100,
                                   ScalingOptions{kFinalDeviation, w});
}

LipschitzReport lipschitz_run(int w) {
  return lipschitz_probe(ensemble(2, 16, 8, 2, kSeed), 10000, {1e-3, 1e-2, 1e-1}, w);
}

// --- criteria ----------------------------------------------------------------

Outcome weingarten_exactness() {
  WeingartenCache cache;
  const Permutation id = Permutation::identity(2);
  const Permutation swap = Permutation::from_cycles(2, {{1, 2}});
  for (long n = 2; n <= 10; ++n) {
    const Rational want_id(1, n * n - 1);
    Rational want_swap(-1, n * (n * n - 1));
    want_swap.canonicalize();
    if (wg(static_cast<int>(n), id, cache) != want_id ||
        wg(static_cast<int>(n), swap, cache) != want_swap) {
      return {false, "mismatch at n=" + std::to_string(n)};
    }
  }
  return {true, "n=2..10 exact"};
}

Outcome moment_cross_validation() {
  const int n = 8;
  const std::size_t N = 1'000'000;
  std::vector<double> second(N), fourth(N);
  parallel_for(N, workers(), [&](std::size_t k) {
    RandomStream rng(kSeed, k);
    const ComplexMatrix U = haar_unitary(n, rng);
    const double a = std::norm(U(0, 0));
    second[k] = a;
    fourth[k] = a * a;
  });
  const Summary s2 = summarize(second);
  const Summary s4 = summarize(fourth);
  const double exact2 = integrate_monomial(n, {1}, {1}, {1}, {1}).get_d();
  const double exact4 = integrate_monomial(n, {1, 1}, {1, 1}, {1, 1}, {1, 1}).get_d();
  const bool closed_forms = exact2 == 1.0 / n && std::abs(exact4 - 2.0 / (n * (n + 1.0))) < 1e-15;
  const double z2 = std::abs(s2.mean - exact2) / s2.stderr_;
  const double z4 = std::abs(s4.mean - exact4) / s4.stderr_;
  return {closed_forms && z2 <= kStderrBand && z4 <= kStderrBand,
          "z(|U11|^2)=" + fmt(z2) + " z(|U11|^4)=" + fmt(z4)};
}

Outcome bound_envelope() {
  WeingartenCache cache;
  const std::vector<int> grid{9, 16, 25, 36, 49, 64};
  const BoundReport report = wg_bound_ratio(3, 2, grid, cache);
  double worst = 0.0;
  for (const auto& [type, slope] : wg_log_slopes(3, grid, cache)) {
    worst = std::max(worst, std::abs(slope + 3.0 + type.length()));
  }
  return {report.bounded && worst <= kSlopeTolerance,
          "envelope=" + fmt(report.envelope) + " worst slope error=" + fmt(worst)};
}

Outcome lemma_gamma() {
  std::string detail;
  bool pass = true;
  for (int n : {1, 2}) {
    const LemmaGammaReport r = lemma_gamma_check(n);
    pass = pass && r.exhaustive && r.parity_ok && r.injective_ok && r.counterexamples.empty();
    detail += "n=" + std::to_string(n) + ": " + std::to_string(r.pairs_checked) + " pairs, " +
              std::to_string(r.counterexamples.size()) + " counterexamples";
    if (n == 1) detail += "; ";
  }
  return {pass, detail};
}

Outcome oracle_equivalence() {
  const auto r = oracle::engine_equivalence(50, kSeed);
  return {r.instances == 50 && r.max_error <= kOracleTolerance,
          std::to_string(r.windows) + " windows, max error " + fmt(r.max_error)};
}

Outcome mean_trace() {
  bool pass = true;
  std::string detail;
  for (const auto& c : kMeanTraceCases) {
    const MeanTraceResult r = mean_trace_case(c, 1);
    artifacts.mean_trace.push_back(records_csv(r.records));
    pass = pass && r.within_band;
    if (!detail.empty()) detail += "; ";
    detail += std::string(c.label) + " " + fmt(r.trace.mean) + "+-" + fmt(r.trace.stderr_);
  }
  return {pass, detail};
}

Outcome purity_scaling() {
  artifacts.scaling = purity_run(1);
  artifacts.purity = records_csv(artifacts.scaling.records);
  const ScalingReport& r = artifacts.scaling;
  const bool pass = r.bound_ok && r.margin_decreasing && r.deviation_decreasing &&
                    r.final_deviation_ok && r.slope_negative;
  std::string detail = "median dev";
  for (const auto& p : r.points) detail += " " + fmt(p.median_deviation);
  detail += ", slope " + fmt(r.deviation_slope);
  return {pass, detail};
}

Outcome sup_distance() {
  const ScalingReport& r = artifacts.scaling;
  std::string detail = "median sup";
  for (const auto& p : r.points) detail += " " + fmt(p.sup_dist.median);
  detail += ", slope " + fmt(r.sup_dist_slope) + " (half-slope check " +
            (r.half_slope_ok ? "holds" : "does not hold") + ", reported)";
  return {r.sup_dist_bound_ok && r.sup_dist_decreasing, detail};
}

Outcome lipschitz() {
  const LipschitzReport r = lipschitz_run(1);
  artifacts.lipschitz = lipschitz_csv(r);
  return {r.max_ratio_f <= 42.0 && r.max_ratio_g <= 42.0 && r.skipped < r.pairs.size(),
          "max f " + fmt(r.max_ratio_f) + ", max g " + fmt(r.max_ratio_g) + ", bound 42"};
}

Outcome boundary_averages() {
  const AveragesReport r = boundary_averages_experiment(32, 10000, kSeed, OmegaDist::Dirichlet, workers());
  bool oracle_rows = true;
  bool inequality_rows = true;
  bool l2_flagged = false;
  for (const auto& row : r.rows) {
    oracle_rows = oracle_rows && row.oracle_ok;
    if (row.paper_relation == "<=") inequality_rows = inequality_rows && row.paper_ok;
    if (row.quantity == "tr(L^2)") l2_flagged = row.paper_discrepancy;
  }
  std::string detail;
  for (const auto& row : r.rows) {
    if (row.quantity == "tr(L^2)" || row.quantity == "tr(LRLR)") {
      if (!detail.empty()) detail += "; ";
      detail += row.quantity + " " + fmt(row.estimate) + " (oracle " + fmt(row.oracle) + ", stated " +
                row.paper_relation + " " + fmt(row.paper_value) + ")";
    }
  }
  return {oracle_rows && inequality_rows && l2_flagged, detail};
}

Outcome combinatorics() {
  for (int p = 1; p <= 6; ++p) {
    if (!check_character_orthogonality(p)) return {false, "orthogonality fails at p=" + std::to_string(p)};
  }
  for (int p = 1; p <= 10; ++p) {
    if (!check_burnside(p)) return {false, "sum dim^2 fails at p=" + std::to_string(p)};
  }
  return {true, "orthogonality p<=6, sum dim^2 = p! for p<=10"};
}

Outcome determinism() {
  const int w = 4;
  bool same = true;
  std::string detail;
  for (std::size_t i = 0; i < std::size(kMeanTraceCases); ++i) {
    same = same && i < artifacts.mean_trace.size() &&
           records_csv(mean_trace_case(kMeanTraceCases[i], w).records) == artifacts.mean_trace[i];
  }
  detail += std::string("mean-trace ") + (same ? "identical" : "differs");
  const bool purity_same = records_csv(purity_run(w).records) == artifacts.purity;
  detail += std::string(", purity ") + (purity_same ? "identical" : "differs");
  const bool lipschitz_same = lipschitz_csv(lipschitz_run(w)) == artifacts.lipschitz;
  detail += std::string(", lipschitz ") + (lipschitz_same ? "identical" : "differs");
  return {same && purity_same && lipschitz_same && !artifacts.purity.empty(), detail};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Weingarten exactness", 1.0, weingarten_exactness},
      {2, "moment cross-validation", 60.0, moment_cross_validation},
      {3, "bound envelope", 10.0, bound_envelope},
      {4, "boundary wiring lemma", 300.0, lemma_gamma},
      {5, "oracle equivalence", 60.0, oracle_equivalence},
      {6, "mean trace", 300.0, mean_trace},
      {7, "purity scaling", 1800.0, purity_scaling},
      {8, "sup distance", 1800.0, sup_distance},
      {9, "Lipschitz ratios", 600.0, lipschitz},
      {10, "boundary averages", 60.0, boundary_averages},
      {11, "combinatorics invariants", 60.0, combinatorics},
      {12, "determinism across workers", 3600.0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = seconds <= c.budget_seconds;
    const bool pass = outcome.pass && in_budget;
    failures += pass ? 0 : 1;
    std::printf("%s %2d %s [%.2fs / %.0fs]: %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name, seconds,
                c.budget_seconds, outcome.detail.c_str(), in_budget ? "" : " (over budget)");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
