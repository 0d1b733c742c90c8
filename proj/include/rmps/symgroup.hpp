#pragma once

// Exact combinatorics of the symmetric group S_p: integer partitions,
// permutations in cycle notation, irreducible characters and the dimensions
// that enter the Weingarten function.
//
// Permutations are 1-indexed: sigma(i) for i in 1..p. All arithmetic is exact.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rmps/rational.hpp"

namespace rmps {

inline constexpr int kMaxPartitionDegree = 30;
inline constexpr int kMaxCharacterDegree = 14;

/// An integer partition: non-increasing positive parts.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> parts);

  const std::vector<int>& parts() const { return parts_; }
  int degree() const { return degree_; }
  int rows() const { return static_cast<int>(parts_.size()); }
  int operator[](int i) const { return parts_[static_cast<std::size_t>(i)]; }

  /// Comma-joined parts, e.g. "2,1".
  std::string to_string() const;
  static Partition parse(std::string_view text);

  friend bool operator==(const Partition&, const Partition&) = default;
  friend auto operator<=>(const Partition& a, const Partition& b) {
    return a.parts_ <=> b.parts_;
  }

 private:
  std::vector<int> parts_;
  int degree_ = 0;
};

/// Cycle lengths of a permutation including fixed points, sorted non-increasing.
struct CycleType {
  Partition partition;

  int degree() const { return partition.degree(); }
  /// Number of cycles, #sigma.
  int cycles() const { return partition.rows(); }
  /// Minimal number of transpositions, |sigma| = p - #sigma.
  int length() const { return degree() - cycles(); }
  std::string to_string() const { return partition.to_string(); }

  friend bool operator==(const CycleType&, const CycleType&) = default;
  friend auto operator<=>(const CycleType&, const CycleType&) = default;
};

class Permutation {
 public:
  Permutation() = default;
  /// images[i-1] = sigma(i); must be a bijection on 1..p.
  explicit Permutation(std::vector<int> images);

  static Permutation identity(int p);
  /// Builds a permutation of degree p from disjoint cycles, (a b c) : a->b->c->a.
  static Permutation from_cycles(int p, const std::vector<std::vector<int>>& cycles);
  /// Parses cycle notation "(1 2 3)(4 5)" (spaces or commas). The degree is
  /// the largest element mentioned unless `degree` is given.
  static Permutation parse(std::string_view text, std::optional<int> degree = std::nullopt);

  int degree() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[static_cast<std::size_t>(i - 1)]; }
  const std::vector<int>& images() const { return images_; }

  /// Cycles with length > 1, each starting at its smallest element.
  std::vector<std::vector<int>> cycles() const;
  CycleType cycle_type() const;
  int cycle_count() const;
  /// |sigma| = p - #sigma.
  int length() const { return degree() - cycle_count(); }
  bool is_identity() const;

  /// Cycle notation without fixed points; the identity prints "()".
  std::string to_string() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation& a, const Permutation& b) {
    return a.images_ <=> b.images_;
  }

 private:
  std::vector<int> images_;
};

/// (compose(s, t))(i) = s(t(i)).
Permutation compose(const Permutation& s, const Permutation& t);
Permutation inverse(const Permutation& s);

inline CycleType cycle_type(const Permutation& s) { return s.cycle_type(); }

/// All partitions of p in lexicographically descending order. 1 <= p <= 30.
std::vector<Partition> partitions(int p);

/// Calls fn on every permutation of S_p in lexicographic order of images.
void for_each_permutation(int p, const std::function<void(const Permutation&)>& fn);

/// Number of permutations with the given cycle type: p! / prod(k^m_k m_k!).
BigInt class_size(const CycleType& mu);

/// Irreducible character chi^lambda evaluated on the class mu
/// (Murnaghan-Nakayama rule, memoized). Same degree, p <= 14.
BigInt character(const Partition& lambda, const CycleType& mu);

/// chi^lambda(1), by the hook-length formula. p <= 14.
BigInt dimension(const Partition& lambda);

/// Principal specialization s_lambda(1,...,1) with n ones: the dimension of
/// the GL(n) irrep lambda. Zero exactly when lambda has more than n rows.
Rational schur_dim(const Partition& lambda, int n);

BigInt factorial(int p);

/// The boundary-wiring permutation of S_{2n+4}:
/// (2n+1, 1, 2, ..., n, 2n+3)(2n+2, n+1, n+2, ..., 2n, 2n+4).
Permutation gamma_permutation(int n);

struct LemmaGammaCounterexample {
  Permutation alpha;
  Permutation beta;
  std::string reason;
};

struct LemmaGammaReport {
  int n = 0;
  bool exhaustive = false;
  std::uint64_t pairs_checked = 0;
  bool parity_ok = true;
  bool injective_ok = true;
  std::vector<LemmaGammaCounterexample> counterexamples;
};

/// Exhaustive search space limit (constrained alpha times beta) for
/// lemma_gamma_check; beyond it seeded random sampling is used.
inline constexpr std::uint64_t kLemmaGammaExhaustiveLimit = 10'000'000;
inline constexpr std::uint64_t kLemmaGammaDefaultSamples = 10'000;

/// Checks, over alpha fixing {2n+1..2n+4} and beta in S_{2n+4}:
///  (a) |g beta| + |beta| is even, with g = gamma^-1 alpha gamma alpha^-1;
///  (c) (alpha, beta) -> (g, beta alpha^-1) is one to one.
/// Exhaustive when the space has fewer than kLemmaGammaExhaustiveLimit pairs,
/// otherwise `samples` seeded random pairs.
LemmaGammaReport lemma_gamma_check(int n, std::uint64_t samples = kLemmaGammaDefaultSamples,
                                   std::uint64_t seed = 0);

/// sum_{sigma in S_p} chi^lambda(sigma) chi^mu(sigma) == p! delta_{lambda mu} for every
/// pair of partitions, summing over all p! permutations. p <= 8.
bool check_character_orthogonality(int p);

/// sum_{lambda |- p} dimension(lambda)^2 == p!.
bool check_burnside(int p);

}  // namespace rmps
