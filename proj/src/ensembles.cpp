#include "rmps/ensembles.hpp"

#include <cmath>

#include "rmps/errors.hpp"

namespace rmps {

std::string to_string(OmegaDist dist) {
  return dist == OmegaDist::Dirichlet ? "dirichlet" : "uniform-normalized";
}

OmegaDist parse_omega_dist(const std::string& text) {
  if (text == "dirichlet") return OmegaDist::Dirichlet;
  if (text == "uniform-normalized") return OmegaDist::UniformNormalized;
  throw ParseError("unknown omega distribution '" + text +
                   "' (expected dirichlet or uniform-normalized)");
}

void EnsembleParams::validate() const {
  if (d < 1) throw PreconditionError("d must be at least 1");
  if (D < 1) throw PreconditionError("D must be at least 1");
  if (n < 1) throw PreconditionError("n must be at least 1");
  if (l < 1 || l > n) throw PreconditionError("window l must satisfy 1 <= l <= n");
  if ((n - l) % 2 != 0) throw PreconditionError("n - l must be even");
}

ComplexMatrix haar_unitary(int dim, RandomStream& rng) {
  if (dim < 1) throw PreconditionError("haar_unitary: dim must be positive");
  ComplexMatrix z(dim, dim);
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r) z(r, c) = rng.complex_normal() * M_SQRT1_2;
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& packed = qr.matrixQR();
  for (int c = 0; c < dim; ++c) {
    const std::complex<double> r = packed(c, c);
    const double mag = std::abs(r);
    q.col(c) *= mag > 0.0 ? r / mag : std::complex<double>(1.0);
  }
  return q;
}

std::vector<ComplexMatrix> mps_tensors(const ComplexMatrix& U, int d, int D) {
  if (d < 1 || D < 1 || U.rows() != static_cast<Eigen::Index>(d) * D || U.cols() != U.rows()) {
    throw DegreeMismatch("mps_tensors: U must be (dD) x (dD) with d=" + std::to_string(d) +
                         ", D=" + std::to_string(D));
  }
  std::vector<ComplexMatrix> A;
  A.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) A.emplace_back(U.block(static_cast<Eigen::Index>(i) * D, 0, D, D));
  return A;
}

RealVector sample_omega(int D, OmegaDist dist, RandomStream& rng) {
  RealVector omega(D);
  for (int i = 0; i < D; ++i) {
    const double u = rng.uniform();
    omega(i) = dist == OmegaDist::Dirichlet ? -std::log1p(-u) : u;
  }
  const double total = omega.sum();
  if (total > 0.0) {
    omega /= total;
  } else {
    omega.setConstant(1.0 / D);
  }
  return omega;
}

Boundaries sample_boundaries(int D, RandomStream& rng, OmegaDist dist) {
  if (D < 1) throw PreconditionError("sample_boundaries: D must be positive");
  Boundaries b;
  b.V = haar_unitary(D, rng);
  b.lambda.resize(D);
  for (int i = 0; i < D; ++i) b.lambda(i) = rng.uniform();
  b.W = haar_unitary(D, rng);
  b.omega = sample_omega(D, dist, rng);
  b.L = b.V * b.lambda.cast<std::complex<double>>().asDiagonal() * b.V.adjoint();
  b.R = b.W * b.omega.cast<std::complex<double>>().asDiagonal() * b.W.adjoint();
  return b;
}

MpsSample assemble_sample(ComplexMatrix U, ComplexMatrix V, ComplexMatrix W, RealVector lambda,
                          RealVector omega, int d, int D) {
  if (V.rows() != D || V.cols() != D || W.rows() != D || W.cols() != D ||
      lambda.size() != D || omega.size() != D) {
    throw DegreeMismatch("assemble_sample: boundary components must have size D=" +
                         std::to_string(D));
  }
  MpsSample s;
  s.d = d;
  s.D = D;
  s.A = mps_tensors(U, d, D);
  s.L = V * lambda.cast<std::complex<double>>().asDiagonal() * V.adjoint();
  s.R = W * omega.cast<std::complex<double>>().asDiagonal() * W.adjoint();
  s.U = std::move(U);
  s.V = std::move(V);
  s.W = std::move(W);
  s.lambda = std::move(lambda);
  s.omega = std::move(omega);
  return s;
}

MpsSample sample_mps(const EnsembleParams& params, RandomStream& rng) {
  params.validate();
  ComplexMatrix U = haar_unitary(params.d * params.D, rng);
  Boundaries b = sample_boundaries(params.D, rng, params.omega_dist);
  return assemble_sample(std::move(U), std::move(b.V), std::move(b.W), std::move(b.lambda),
                         std::move(b.omega), params.d, params.D);
}

MpsSample sample_mps(const EnsembleParams& params, std::uint64_t index) {
  RandomStream rng(params.seed, index);
  return sample_mps(params, rng);
}

}  // namespace rmps
