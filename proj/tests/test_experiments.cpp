#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>

#include "rmps/errors.hpp"
#include "rmps/experiments.hpp"
#include "rmps/weingarten.hpp"

using namespace rmps;

namespace {

EnsembleParams small_params(int D, int n, int l, std::uint64_t seed) {
  EnsembleParams p;
  p.d = 2;
  p.D = D;
  p.n = n;
  p.l = l;
  p.seed = seed;
  return p;
}

bool same_records(const std::vector<ExperimentRecord>& a, const std::vector<ExperimentRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].trace != b[i].trace || a[i].purity_unnorm != b[i].purity_unnorm ||
        a[i].purity_norm != b[i].purity_norm || a[i].sup_dist != b[i].sup_dist ||
        a[i].renyi2 != b[i].renyi2 || a[i].degenerate != b[i].degenerate ||
        a[i].params.D != b[i].params.D || a[i].sample_index != b[i].sample_index) {
      return false;
    }
  }
  return true;
}

// E tr(A Y B Y^dagger A Y B Y^dagger) over Haar Y in U(D), A and B diagonal.
double lrlr_fixed_spectra(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double D = static_cast<double>(a.size());
  const double w_id = 1.0 / (D * D - 1.0);
  const double w_swap = -1.0 / (D * (D * D - 1.0));
  const double ta = a.sum(), ta2 = a.squaredNorm(), tb = b.sum(), tb2 = b.squaredNorm();
  return (ta * ta * tb2 + ta2 * tb * tb) * w_id + (ta * ta * tb * tb + ta2 * tb2) * w_swap;
}

}  // namespace

TEST_CASE("summaries") {
  const auto s = summarize({1.0, 2.0, 3.0, 10.0});
  CHECK(s.count == 4);
  CHECK(s.mean == doctest::Approx(4.0));
  CHECK(s.median == doctest::Approx(2.5));
  CHECK(s.stderr_ == doctest::Approx(std::sqrt(50.0 / 12.0)));
  CHECK(summarize({1e16, 1.0, -1e16}).mean == doctest::Approx(1.0 / 3.0));
  CHECK(summarize({}).count == 0);
}

TEST_CASE("parallel_for visits each index once") {
  for (int workers : {1, 3, 8}) {
    std::vector<std::atomic<int>> hits(97);
    parallel_for(hits.size(), workers, [&](std::size_t i) { ++hits[i]; });
    for (auto& h : hits) CHECK(h.load() == 1);
  }
  CHECK_THROWS_AS(parallel_for(10, 2, [](std::size_t i) {
                    if (i == 7) throw PreconditionError("boom");
                  }),
                  PreconditionError);
}

TEST_CASE("records are observables of the indexed samples") {
  const auto params = small_params(3, 4, 2, 5);
  const auto records = run_records(params, 6);
  REQUIRE(records.size() == 6);
  const auto sample = sample_mps(params, std::uint64_t{4});
  const auto rho = reduced_density(sample, params);
  CHECK(records[4].trace == doctest::Approx(rho.trace().real()));
  CHECK(records[4].purity_norm == doctest::Approx(purity(normalize(rho))));
  CHECK(records[4].renyi2 == doctest::Approx(-std::log(records[4].purity_norm)));
  CHECK(records[4].purity_unnorm ==
        doctest::Approx(records[4].purity_norm * records[4].trace * records[4].trace));
}

TEST_CASE("results do not depend on the worker count") {
  const auto params = small_params(4, 6, 2, 9);
  CHECK(same_records(run_records(params, 40, 1), run_records(params, 40, 4)));
  const auto a = purity_scaling_experiment(params, {2, 4}, 50, {0.5, 1});
  const auto b = purity_scaling_experiment(params, {2, 4}, 50, {0.5, 3});
  CHECK(same_records(a.records, b.records));
  CHECK(a.deviation_slope == b.deviation_slope);
  CHECK(a.records.size() == 100);
}

TEST_CASE("mean trace is one half") {
  const auto params = small_params(6, 6, 2, 13);
  const auto fixed = mean_trace_experiment(params, 300);
  CHECK(fixed.within_band);
  CHECK(fixed.records.size() == 300);
  MeanTraceOptions resampled;
  resampled.fixed_u = false;
  resampled.fixed_omega = false;
  CHECK(mean_trace_experiment(params, 300, resampled).within_band);
  CHECK_THROWS_AS(mean_trace_experiment(params, 5), PreconditionError);
}

TEST_CASE("purity scaling report structure") {
  const auto params = small_params(4, 6, 2, 3);
  const auto report = purity_scaling_experiment(params, {4, 8, 16}, 60, {0.5, 1});
  REQUIRE(report.points.size() == 3);
  for (const auto& p : report.points) {
    CHECK(p.count == 60);
    CHECK(p.purity_bound == doctest::Approx(1.0 / 16.0));
    CHECK(p.margin == doctest::Approx(p.purity_bound * std::pow(p.D, -0.2)));
  }
  CHECK(report.margin_decreasing);
  CHECK(report.purity_range_ok);
  CHECK(report.sup_dist_bound_ok);
  CHECK_THROWS_AS(purity_scaling_experiment(params, {8, 4}, 60), PreconditionError);
  CHECK_THROWS_AS(purity_scaling_experiment(params, {4}, 10), PreconditionError);
}

TEST_CASE("LRLR oracle agrees with the moment evaluator and its own average") {
  const int D = 4;
  RandomStream rng(2, 0);
  Eigen::VectorXd a(D), b = sample_omega(D, OmegaDist::Dirichlet, rng);
  for (int i = 0; i < D; ++i) a(i) = rng.uniform();
  TraceExpression e;
  e.n = D;
  e.constants["A"] = a.cast<std::complex<double>>().asDiagonal();
  e.constants["B"] = b.cast<std::complex<double>>().asDiagonal();
  e.words = {{TraceToken::u(1), TraceToken::c("B"), TraceToken::udag(1), TraceToken::c("A"),
              TraceToken::u(2), TraceToken::c("B"), TraceToken::udag(2), TraceToken::c("A")}};
  const auto value = evaluate_trace_expression(e);
  CHECK(value.value.real() == doctest::Approx(lrlr_fixed_spectra(a, b)).epsilon(1e-12));

  // Averaging the fixed-spectrum formula over Lambda uniform gives the oracle.
  for (int dim : {2, 8, 32}) {
    const double d = dim;
    const double w_id = 1.0 / (d * d - 1.0);
    const double w_swap = -1.0 / (d * (d * d - 1.0));
    const double omega2 = 2.0 / (d + 1.0);
    const double tl_sq = d / 12.0 + d * d / 4.0;
    const double tl2 = d / 3.0;
    CHECK(lrlr_oracle(dim, omega2) ==
          doctest::Approx((tl_sq * omega2 + tl2) * w_id + (tl_sq + tl2 * omega2) * w_swap));
  }
  // A = B = identity collapses to D.
  CHECK(lrlr_fixed_spectra(Eigen::VectorXd::Ones(5), Eigen::VectorXd::Ones(5)) ==
        doctest::Approx(5.0));
}

TEST_CASE("boundary averages") {
  const auto report = boundary_averages_experiment(8, 4000, 21);
  CHECK(report.passed);
  REQUIRE(report.rows.size() == 9);
  CHECK(report.omega_square_mean == doctest::Approx(2.0 / 9.0));
  int discrepancies = 0;
  for (const auto& row : report.rows) {
    CHECK(row.oracle_ok);
    discrepancies += row.paper_discrepancy;
  }
  CHECK(discrepancies == 2);
  CHECK(report.rows[1].quantity == "tr(L^2)");
  CHECK(report.rows[1].paper_discrepancy);
  CHECK(report.rows[1].oracle == doctest::Approx(8.0 / 3.0));

  const auto uniform = boundary_averages_experiment(8, 4000, 21, OmegaDist::UniformNormalized);
  CHECK(uniform.passed);
  CHECK_THROWS_AS(boundary_averages_experiment(8, 10, 1), PreconditionError);
}

TEST_CASE("perturbations stay unitary and scale with the step") {
  RandomStream rng(4, 0);
  const auto X = haar_unitary(5, rng);
  for (double s : {1e-3, 1e-1}) {
    const auto Y = perturb_unitary(X, s, rng);
    CHECK((Y.adjoint() * Y - ComplexMatrix::Identity(5, 5)).norm() < 1e-12);
    CHECK((Y - X).norm() <= s + 1e-12);
    CHECK((Y - X).norm() >= 0.5 * s);
  }
}

TEST_CASE("Lipschitz probe") {
  const auto report = lipschitz_probe(small_params(4, 4, 2, 8), 1000);
  CHECK(report.passed);
  CHECK(report.bound == doctest::Approx(26.0));
  REQUIRE(report.pairs.size() == 1000);
  CHECK(report.pairs[0].kind == PerturbKind::U);
  CHECK(report.pairs[4].kind == PerturbKind::Joint);
  CHECK(report.pairs[5].scale == doctest::Approx(1e-2));
  CHECK(report.max_ratio_f > 0.0);
}

TEST_CASE("concentration tails") {
  const auto grid = default_r_grid();
  REQUIRE(grid.size() == 10);
  CHECK(grid.front() == doctest::Approx(1e-3));
  CHECK(grid.back() == doctest::Approx(0.5));
  const auto report = concentration_tail_experiment(small_params(4, 4, 2, 1), {4, 16}, 1000, grid);
  CHECK(report.monotone_in_r);
  CHECK(report.rows.size() == 20);
  for (const auto& row : report.rows) {
    CHECK(row.tail_trace >= 0.0);
    CHECK(row.tail_trace <= 1.0);
  }
}

TEST_CASE("per-record purity range and eigenvalue bound") {
  for (int D : {1, 3, 8}) {
    const auto params = small_params(D, 6, 2, 31);
    for (const auto& r : run_records(params, 200)) {
      REQUIRE(!r.degenerate);
      CHECK(r.purity_norm >= 0.25 - 1e-9);
      CHECK(r.purity_norm <= 1.0 + 1e-9);
      CHECK(r.sup_dist <= std::sqrt(4.0 * (r.purity_norm - 0.25)) + 1e-9);
      CHECK(std::abs(r.purity_norm - r.purity_unnorm / (r.trace * r.trace)) <= 1e-9);
      if (D == 1) CHECK(r.purity_norm == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("scalar bond space trace is the left eigenvalue") {
  const auto params = small_params(1, 4, 2, 37);
  const auto records = run_records(params, 20);
  for (const auto& r : records) {
    const auto sample = sample_mps(params, r.sample_index);
    CHECK(r.trace == doctest::Approx(sample.lambda(0)).epsilon(1e-12));
  }
}

TEST_CASE("identical pairs are skipped") {
  const auto report = lipschitz_probe(small_params(3, 4, 2, 2), 1000, {0.0});
  CHECK(report.skipped == 1000);
  CHECK(report.max_ratio_f == 0.0);
}

TEST_CASE("tails vanish beyond the observable range") {
  const auto report = concentration_tail_experiment(small_params(4, 4, 2, 1), {4}, 1000, {0.01, 1.5});
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[1].tail_trace == 0.0);
  CHECK(report.rows[1].tail_purity == 0.0);
  CHECK(report.rows[0].tail_trace > 0.0);
}

TEST_CASE("degenerate samples are rare at moderate bond dimension") {
  const auto report = purity_scaling_experiment(small_params(16, 4, 2, 41), {16, 32}, 100, {0.5, 1});
  CHECK(report.degenerate_rate_ok);
  for (const auto& p : report.points) CHECK(p.count + p.degenerate == 100);
}
