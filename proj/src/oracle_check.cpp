#include "rmps/mps_engine.hpp"
#include "rmps/oracle.hpp"

namespace rmps::oracle {

EquivalenceReport engine_equivalence(std::size_t instances, std::uint64_t seed) {
  constexpr int kBond[] = {1, 2, 3};
  constexpr int kSites[] = {2, 4, 6};
  EquivalenceReport report;
  report.instances = instances;
  for (std::size_t k = 0; k < instances; ++k) {
    EnsembleParams params;
    params.d = 2;
    params.D = kBond[k % 3];
    params.n = kSites[(k / 3) % 3];
    params.l = params.n;
    params.seed = seed;
    const MpsSample sample = sample_mps(params, static_cast<std::uint64_t>(k));
    const ComplexMatrix full = full_state(sample, params.n);
    for (int first = 0; first < params.n; ++first) {
      for (int l = 1; first + l <= params.n; ++l) {
        const ComplexMatrix expected = partial_trace(full, params.d, params.n, first, l);
        const DensityMatrix got = reduced_density(sample, first, l, params.n - first - l);
        report.max_error = std::max(report.max_error, (got.entries - expected).cwiseAbs().maxCoeff());
        ++report.windows;
      }
    }
  }
  report.passed = report.max_error <= report.tolerance;
  return report;
}

}  // namespace rmps::oracle
