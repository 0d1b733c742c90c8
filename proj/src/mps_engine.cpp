#include "rmps/mps_engine.hpp"

#include <cmath>

#include "rmps/errors.hpp"

namespace rmps {

namespace {

void check_square(const ComplexMatrix& X, const std::vector<ComplexMatrix>& A, const char* who) {
  if (A.empty()) throw DegreeMismatch(std::string(who) + ": empty tensor set");
  const auto D = A.front().rows();
  if (X.rows() != D || X.cols() != D) {
    throw DegreeMismatch(std::string(who) + ": matrix is " + std::to_string(X.rows()) + "x" +
                         std::to_string(X.cols()) + ", bond dimension is " + std::to_string(D));
  }
}

long window_pairs(int d, int l) {
  long pairs = 1;
  for (int k = 0; k < 2 * l; ++k) {
    pairs *= d;
    if (pairs > kMaxWindowPairs) return pairs;
  }
  return pairs;
}

}  // namespace

ComplexMatrix channel_apply(const std::vector<ComplexMatrix>& A, const ComplexMatrix& X) {
  check_square(X, A, "channel_apply");
  ComplexMatrix out = ComplexMatrix::Zero(X.rows(), X.cols());
  ComplexMatrix tmp(X.rows(), X.cols());
  for (const auto& a : A) {
    tmp.noalias() = a * X;
    out.noalias() += tmp * a.adjoint();
  }
  return out;
}

ComplexMatrix channel_adjoint_apply(const std::vector<ComplexMatrix>& A, const ComplexMatrix& Y) {
  check_square(Y, A, "channel_adjoint_apply");
  ComplexMatrix out = ComplexMatrix::Zero(Y.rows(), Y.cols());
  ComplexMatrix tmp(Y.rows(), Y.cols());
  for (const auto& a : A) {
    tmp.noalias() = a.adjoint() * Y;
    out.noalias() += tmp * a;
  }
  return out;
}

WindowState window_blocks(const std::vector<ComplexMatrix>& A, const ComplexMatrix& X, int l) {
  check_square(X, A, "window_blocks");
  const int d = static_cast<int>(A.size());
  if (l < 0) throw PreconditionError("window_blocks: negative window");
  if (window_pairs(d, l) > kMaxWindowPairs) {
    throw BoundsError("window_blocks: d^(2l) exceeds " + std::to_string(kMaxWindowPairs));
  }
  WindowState state{d, l, {}};
  state.blocks.emplace(std::pair<std::vector<int>, std::vector<int>>{}, X);
  // Grow the strings leftwards: the new site is prepended to both strings.
  for (int step = 0; step < l; ++step) {
    decltype(state.blocks) next;
    ComplexMatrix tmp;
    for (const auto& [key, block] : state.blocks) {
      for (int i = 0; i < d; ++i) {
        tmp.noalias() = A[static_cast<std::size_t>(i)] * block;
        for (int j = 0; j < d; ++j) {
          std::vector<int> is{i};
          is.insert(is.end(), key.first.begin(), key.first.end());
          std::vector<int> js{j};
          js.insert(js.end(), key.second.begin(), key.second.end());
          next.emplace(std::pair{std::move(is), std::move(js)},
                       tmp * A[static_cast<std::size_t>(j)].adjoint());
        }
      }
    }
    state.blocks = std::move(next);
  }
  return state;
}

DensityMatrix reduced_density(const MpsSample& sample, int t_left, int l, int t_right) {
  if (t_left < 0 || t_right < 0 || l < 1) {
    throw PreconditionError("reduced_density: need t_left, t_right >= 0 and l >= 1");
  }
  const int d = sample.d;
  if (window_pairs(d, l) > kMaxWindowPairs) {
    throw BoundsError("reduced_density: d^(2l) exceeds " + std::to_string(kMaxWindowPairs));
  }
  ComplexMatrix right = sample.R;
  for (int k = 0; k < t_right; ++k) right = channel_apply(sample.A, right);
  ComplexMatrix left = sample.L;
  for (int k = 0; k < t_left; ++k) left = channel_adjoint_apply(sample.A, left);

  // With M_I = A_{i_1} ... A_{i_l}:
  //   rho(I, J) = tr(left M_I right M_J^dagger) = sum_ab (left M_I right)_ab conj(M_J)_ab,
  // so each entry is a Frobenius product once the d^l words are formed.
  long dim = 1;
  for (int k = 0; k < l; ++k) dim *= d;
  // Appending site index i to word w gives word w * d + i.
  std::vector<ComplexMatrix> words{ComplexMatrix::Identity(sample.D, sample.D)};
  for (int site = 0; site < l; ++site) {
    std::vector<ComplexMatrix> next;
    next.reserve(words.size() * static_cast<std::size_t>(d));
    for (const auto& w : words) {
      for (const auto& a : sample.A) next.push_back(w * a);
    }
    words = std::move(next);
  }
  std::vector<ComplexMatrix> sandwiched(static_cast<std::size_t>(dim));
  for (long I = 0; I < dim; ++I) {
    sandwiched[static_cast<std::size_t>(I)] = left * words[static_cast<std::size_t>(I)] * right;
  }
  DensityMatrix rho;
  rho.entries.resize(dim, dim);
  for (long J = 0; J < dim; ++J) {
    const ComplexMatrix conj_word = words[static_cast<std::size_t>(J)].conjugate();
    for (long I = 0; I < dim; ++I) {
      rho.entries(I, J) = sandwiched[static_cast<std::size_t>(I)].cwiseProduct(conj_word).sum();
    }
  }
  return rho;
}

DensityMatrix reduced_density(const MpsSample& sample, const EnsembleParams& params) {
  params.validate();
  if (params.d != sample.d || params.D != sample.D) {
    throw DegreeMismatch("reduced_density: sample dimensions do not match parameters");
  }
  return reduced_density(sample, params.t(), params.l, params.t());
}

double chain_trace(const MpsSample& sample, int n) {
  ComplexMatrix x = sample.R;
  for (int k = 0; k < n; ++k) x = channel_apply(sample.A, x);
  return (sample.L * x).trace().real();
}

DensityMatrix normalize(const DensityMatrix& rho) {
  const std::complex<double> tr = rho.trace();
  if (std::abs(tr) <= 1e-14) {
    throw DegenerateSample("normalize: trace " + std::to_string(std::abs(tr)) + " is zero");
  }
  return DensityMatrix{rho.entries / tr.real(), true};
}

double purity(const DensityMatrix& rho) {
  // tr(rho^2) = sum_ij rho_ij rho_ji; equals the squared Frobenius norm for Hermitian rho.
  return (rho.entries.cwiseProduct(rho.entries.transpose())).sum().real();
}

namespace {
void require_normalized(const DensityMatrix& rho, const char* who) {
  if (!rho.normalized) {
    throw PreconditionError(std::string(who) + ": state must be normalized");
  }
}
}  // namespace

double renyi2(const DensityMatrix& rho) {
  require_normalized(rho, "renyi2");
  return -std::log(purity(rho));
}

Eigen::VectorXd eigenvalues(const DensityMatrix& rho) {
  const ComplexMatrix herm = (rho.entries + rho.entries.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double sup_distance_to_mixed(const DensityMatrix& rho) {
  require_normalized(rho, "sup_distance_to_mixed");
  const Eigen::VectorXd mu = eigenvalues(rho);
  const double mixed = 1.0 / static_cast<double>(rho.dim());
  return (mu.array() - mixed).abs().maxCoeff();
}

}  // namespace rmps
