#pragma once

// Sampling the translation-invariant random MPS ensemble: a Haar unitary
// U in U(dD) gives the tensors A_i, and boundary matrices L = V diag(Lambda) V^dagger,
// R = W diag(Omega) W^dagger come from Haar V, W, uniform Lambda in [0,1]^D and
// a permutation-invariant Omega on the probability simplex.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rmps/rng.hpp"

namespace rmps {

using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

enum class OmegaDist { Dirichlet, UniformNormalized };

std::string to_string(OmegaDist dist);
OmegaDist parse_omega_dist(const std::string& text);

struct EnsembleParams {
  int d = 2;   // physical dimension
  int D = 1;   // bond dimension
  int n = 1;   // bulk sites
  int l = 1;   // central window
  std::uint64_t seed = 0;
  OmegaDist omega_dist = OmegaDist::Dirichlet;

  /// Sites traced out on each side of the window, (n - l) / 2.
  int t() const { return (n - l) / 2; }
  /// Throws PreconditionError unless d, D >= 1, 1 <= l <= n and n - l is even.
  void validate() const;
};

struct MpsSample {
  int d = 0;
  int D = 0;
  ComplexMatrix U;  // dD x dD
  ComplexMatrix V;  // D x D
  ComplexMatrix W;  // D x D
  RealVector lambda;
  RealVector omega;
  std::vector<ComplexMatrix> A;  // d matrices, D x D
  ComplexMatrix L;
  ComplexMatrix R;
};

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of diag(R) moved into Q.
ComplexMatrix haar_unitary(int dim, RandomStream& rng);

/// A_i = (<i| (x) 1_D) U (|0> (x) 1_D): the (i, 0) block of U with the physical
/// index as the slow index, so that sum_i A_i^dagger A_i = 1_D.
std::vector<ComplexMatrix> mps_tensors(const ComplexMatrix& U, int d, int D);

/// Uniform point of the simplex (flat Dirichlet) or D uniforms divided by their sum.
RealVector sample_omega(int D, OmegaDist dist, RandomStream& rng);

struct Boundaries {
  ComplexMatrix L;
  ComplexMatrix R;
  RealVector lambda;
  RealVector omega;
  ComplexMatrix V;
  ComplexMatrix W;
};

/// Draws V, Lambda, W, Omega in that order.
Boundaries sample_boundaries(int D, RandomStream& rng, OmegaDist dist = OmegaDist::Dirichlet);

/// Builds a sample from explicit components.
MpsSample assemble_sample(ComplexMatrix U, ComplexMatrix V, ComplexMatrix W, RealVector lambda,
                          RealVector omega, int d, int D);

/// Draws U then the boundaries from `rng`.
MpsSample sample_mps(const EnsembleParams& params, RandomStream& rng);

/// The sample of index `index` in a run seeded by params.seed.
MpsSample sample_mps(const EnsembleParams& params, std::uint64_t index);

}  // namespace rmps
