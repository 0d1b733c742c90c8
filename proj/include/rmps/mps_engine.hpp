#pragma once

// Contraction of the translation-invariant MPS
//
//   rho = sum tr(L A_{i_1} ... A_{i_n} R A_{j_n}^dagger ... A_{j_1}^dagger) |i><j|
//
// down to the reduced density matrix of a window of consecutive sites. Only
// D x D bond-space blocks are ever materialized: the right part of the chain
// is folded into R with the transfer channel T(X) = sum_i A_i X A_i^dagger, the
// left part into L with its adjoint, and the window is expanded in between.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rmps/ensembles.hpp"

namespace rmps {

/// Largest number of window index pairs d^(2l) the engine will expand.
inline constexpr long kMaxWindowPairs = 4096;

struct DensityMatrix {
  ComplexMatrix entries;
  bool normalized = false;

  Eigen::Index dim() const { return entries.rows(); }
  std::complex<double> trace() const { return entries.trace(); }
};

/// Un-traced window blocks keyed by (i-string, j-string), strings ordered from
/// the leftmost window site.
struct WindowState {
  int d = 0;
  int l = 0;
  std::map<std::pair<std::vector<int>, std::vector<int>>, ComplexMatrix> blocks;
};

/// sum_i A_i X A_i^dagger.
ComplexMatrix channel_apply(const std::vector<ComplexMatrix>& A, const ComplexMatrix& X);
/// Heisenberg-picture adjoint: sum_i A_i^dagger Y A_i.
ComplexMatrix channel_adjoint_apply(const std::vector<ComplexMatrix>& A, const ComplexMatrix& Y);

/// Window blocks A_{i_1}..A_{i_l} X A_{j_l}^dagger..A_{j_1}^dagger for all strings.
WindowState window_blocks(const std::vector<ComplexMatrix>& A, const ComplexMatrix& X, int l);

/// Reduced state of sites t_left+1 .. t_left+l of a chain of
/// t_left + l + t_right sites. Unnormalized; rows and columns are indexed by
/// the window string read as a base-d number, leftmost site most significant.
DensityMatrix reduced_density(const MpsSample& sample, int t_left, int l, int t_right);

/// The centered window of `params`: t = (n - l) / 2 sites on each side.
DensityMatrix reduced_density(const MpsSample& sample, const EnsembleParams& params);

/// tr(L T^n(R)) without expanding a window.
double chain_trace(const MpsSample& sample, int n);

/// rho / tr(rho). Throws DegenerateSample when |tr rho| <= 1e-14.
DensityMatrix normalize(const DensityMatrix& rho);

/// tr(rho^2).
double purity(const DensityMatrix& rho);
/// -log tr(rho^2); requires a normalized state.
double renyi2(const DensityMatrix& rho);
/// max_mu |mu - 1/dim| over eigenvalues of the Hermitized state; requires a
/// normalized state.
double sup_distance_to_mixed(const DensityMatrix& rho);
/// Ascending eigenvalues of (rho + rho^dagger) / 2.
Eigen::VectorXd eigenvalues(const DensityMatrix& rho);

}  // namespace rmps
