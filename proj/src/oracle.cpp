#include "rmps/oracle.hpp"

#include "rmps/errors.hpp"

namespace rmps::oracle {

ComplexMatrix full_state(const MpsSample& sample, int n) {
  long dim = 1;
  for (int k = 0; k < n; ++k) {
    dim *= sample.d;
    if (dim > 256) throw BoundsError("oracle::full_state: d^n exceeds 256");
  }
  std::vector<ComplexMatrix> words(static_cast<std::size_t>(dim));
  for (long s = 0; s < dim; ++s) {
    ComplexMatrix m = ComplexMatrix::Identity(sample.D, sample.D);
    // Digits of s, most significant first, are the symbols at sites 1..n.
    long place = dim;
    for (int site = 0; site < n; ++site) {
      place /= sample.d;
      m = m * sample.A[static_cast<std::size_t>((s / place) % sample.d)];
    }
    words[static_cast<std::size_t>(s)] = std::move(m);
  }
  ComplexMatrix state(dim, dim);
  for (long i = 0; i < dim; ++i) {
    const ComplexMatrix left = sample.L * words[static_cast<std::size_t>(i)] * sample.R;
    for (long j = 0; j < dim; ++j) {
      state(i, j) = (left * words[static_cast<std::size_t>(j)].adjoint()).trace();
    }
  }
  return state;
}

ComplexMatrix partial_trace(const ComplexMatrix& state, int d, int n, int first, int l) {
  if (first < 0 || l < 1 || first + l > n) throw PreconditionError("oracle::partial_trace: bad window");
  auto power = [d](int k) {
    long p = 1;
    for (int i = 0; i < k; ++i) p *= d;
    return p;
  };
  const long left = power(first);
  const long mid = power(l);
  const long right = power(n - first - l);
  if (state.rows() != left * mid * right) throw DegreeMismatch("oracle::partial_trace: size mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(mid, mid);
  for (long x = 0; x < left; ++x)
    for (long y = 0; y < right; ++y)
      for (long a = 0; a < mid; ++a)
        for (long b = 0; b < mid; ++b) {
          out(a, b) += state((x * mid + a) * right + y, (x * mid + b) * right + y);
        }
  return out;
}

}  // namespace rmps::oracle
