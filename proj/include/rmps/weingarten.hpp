#pragma once

// Unitary Weingarten calculus: the exact Weingarten function, Haar moments of
// monomials in U and conj(U), and moments of products of traces evaluated by
// explicit loop decomposition of the index wiring.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rmps/rational.hpp"
#include "rmps/symgroup.hpp"

namespace rmps {

inline constexpr int kMaxWeingartenDegree = 10;
inline constexpr int kMaxMonomialDegree = 6;
inline constexpr int kMaxTraceDegree = 5;

/// Cache key: Wg(n, sigma) depends on sigma only through its cycle type.
struct WeingartenKey {
  int n = 0;
  CycleType cycle_type;

  friend bool operator==(const WeingartenKey&, const WeingartenKey&) = default;
  friend auto operator<=>(const WeingartenKey&, const WeingartenKey&) = default;
};

/// Thread-safe table of exact Weingarten values, with optional disk persistence.
///
/// Line format: "p;cycle_type;n;numerator/denominator", e.g. "2;2;8;-1/504".
class WeingartenCache {
 public:
  WeingartenCache() = default;
  WeingartenCache(WeingartenCache&& other) noexcept : table_(other.take()) {}
  WeingartenCache& operator=(WeingartenCache&& other) noexcept {
    if (this != &other) {
      auto table = other.take();
      std::unique_lock lock(mutex_);
      table_ = std::move(table);
    }
    return *this;
  }

  std::optional<Rational> find(const WeingartenKey& key) const;
  void insert(const WeingartenKey& key, const Rational& value);
  std::size_t size() const;
  std::map<WeingartenKey, Rational> snapshot() const;

  /// Merges records from `path`; a missing file is not an error.
  /// Throws ParseError naming the line on malformed input, IoError on read failures.
  void load(const std::filesystem::path& path);
  /// Writes every record, sorted by key. Throws IoError with the path.
  void save(const std::filesystem::path& path) const;

  static std::string format_line(const WeingartenKey& key, const Rational& value);
  static std::pair<WeingartenKey, Rational> parse_line(const std::string& line);

 private:
  std::map<WeingartenKey, Rational> take() {
    std::unique_lock lock(mutex_);
    return std::move(table_);
  }

  mutable std::shared_mutex mutex_;
  std::map<WeingartenKey, Rational> table_;
};

/// Process-wide cache used by wg() when no explicit cache is supplied.
WeingartenCache& default_weingarten_cache();

/// Exact Wg(n, sigma) for sigma in S_p, p <= 10, n >= p.
Rational wg(int n, const CycleType& cycle_type, WeingartenCache& cache = default_weingarten_cache());
inline Rational wg(int n, const Permutation& sigma,
                   WeingartenCache& cache = default_weingarten_cache()) {
  return wg(n, sigma.cycle_type(), cache);
}

/// Exact E[U_{i1 j1}...U_{ip jp} conj(U_{i'1 j'1})...conj(U_{i'p j'p})] over Haar U(n).
/// Indices are 1-based; p <= 6.
Rational integrate_monomial(int n, const std::vector<int>& i, const std::vector<int>& j,
                            const std::vector<int>& i_bar, const std::vector<int>& j_bar);

/// One factor of a trace word.
struct TraceToken {
  enum class Kind { U, UBar, UDag, Constant };
  Kind kind = Kind::Constant;
  int slot = 0;          // 1-based U / conj(U) slot for U, UBar, UDag
  std::string constant;  // id into TraceExpression::constants

  static TraceToken u(int k) { return {Kind::U, k, {}}; }
  /// Entrywise conjugate conj(U).
  static TraceToken ubar(int k) { return {Kind::UBar, k, {}}; }
  /// U^dagger, i.e. conj(U) transposed; occupies conj(U) slot k.
  static TraceToken udag(int k) { return {Kind::UDag, k, {}}; }
  static TraceToken c(std::string id) { return {Kind::Constant, 0, std::move(id)}; }
};

/// A product of traces of words in U, conj(U) and fixed n x n matrices.
struct TraceExpression {
  int n = 0;
  std::vector<std::vector<TraceToken>> words;
  std::map<std::string, Eigen::MatrixXcd> constants;

  /// Number of U slots (equal to the number of conj(U) slots when valid).
  int degree() const;
  /// Throws MalformedExpression unless every U and conj(U) slot 1..p occurs
  /// exactly once, constants are n x n and referenced ids exist.
  void validate() const;
};

struct MomentValue {
  /// Set when every constant is real: the moment as an exact rational.
  std::optional<Rational> exact;
  std::complex<double> value;
};

/// E_U[prod_w tr(word_w)] = sum_{sigma,tau} C(sigma,tau) Wg(n, tau sigma^-1),
/// where C is obtained by deleting the U boxes, wiring row indices along sigma
/// and column indices along tau, and multiplying the traces of the loops.
/// A loop with no constant contributes n. Degree p <= 5.
MomentValue evaluate_trace_expression(const TraceExpression& expr,
                                      WeingartenCache& cache = default_weingarten_cache());

struct BoundRow {
  int n = 0;
  CycleType cycle_type;
  Rational wg_value;
  double ratio = 0.0;  // |wg| * n^(p + |sigma| (1 - 2/k))
};

struct BoundReport {
  int p = 0;
  int k = 0;
  std::vector<int> n_grid;
  std::vector<BoundRow> rows;
  std::vector<double> max_ratio;  // per grid point
  double envelope = 0.0;          // max over the grid
  /// True when the ratio envelope over the upper half of the grid does not
  /// exceed the envelope over the lower half (no growth along the grid).
  bool bounded = false;
};

/// Normalized Weingarten magnitudes for every cycle type of S_p across a grid
/// of n satisfying p^k <= n. p <= 8.
BoundReport wg_bound_ratio(int p, int k, const std::vector<int>& n_grid,
                           WeingartenCache& cache = default_weingarten_cache());

/// Least-squares slope of log|Wg(n, sigma)| against log n, per cycle type of S_p.
std::map<CycleType, double> wg_log_slopes(int p, const std::vector<int>& n_grid,
                                          WeingartenCache& cache = default_weingarten_cache());

}  // namespace rmps
