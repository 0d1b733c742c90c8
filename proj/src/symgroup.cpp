#include "rmps/symgroup.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <sstream>

#include "rmps/errors.hpp"
#include "rmps/rng.hpp"

namespace rmps {

Rational parse_rational(const std::string& text) {
  Rational q;
  if (text.empty() || q.set_str(text, 10) != 0) {
    throw ParseError("not a rational number: '" + text + "'");
  }
  if (q.get_den() == 0) throw ParseError("zero denominator: '" + text + "'");
  q.canonicalize();
  return q;
}

// ---------------------------------------------------------------------------
// Partition

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] < 1) throw PreconditionError("partition parts must be positive");
    if (i > 0 && parts_[i] > parts_[i - 1]) {
      throw PreconditionError("partition parts must be non-increasing");
    }
  }
  degree_ = std::accumulate(parts_.begin(), parts_.end(), 0);
}

std::string Partition::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(parts_[i]);
  }
  return out;
}

Partition Partition::parse(std::string_view text) {
  std::vector<int> parts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view field = text.substr(pos, comma - pos);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
      throw ParseError("bad partition '" + std::string(text) + "'");
    }
    parts.push_back(value);
    pos = comma + 1;
  }
  try {
    return Partition(std::move(parts));
  } catch (const PreconditionError& e) {
    throw ParseError("bad partition '" + std::string(text) + "': " + e.what());
  }
}

std::vector<Partition> partitions(int p) {
  if (p < 1 || p > kMaxPartitionDegree) {
    throw BoundsError("partitions: p=" + std::to_string(p) + " outside 1.." +
                      std::to_string(kMaxPartitionDegree));
  }
  std::vector<Partition> out;
  // Reverse-lexicographic successor: start at (p), finish at (1^p).
  std::vector<int> a{p};
  while (true) {
    out.emplace_back(a);
    // Strip trailing ones, then decrement the last part > 1 and refill.
    int ones = 0;
    while (!a.empty() && a.back() == 1) {
      a.pop_back();
      ++ones;
    }
    if (a.empty()) break;
    const int k = --a.back();
    int rest = ones + 1;
    while (rest > 0) {
      const int take = std::min(k, rest);
      a.push_back(take);
      rest -= take;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Permutation

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size() + 1, false);
  for (int v : images_) {
    if (v < 1 || v > degree() || seen[static_cast<std::size_t>(v)]) {
      throw PreconditionError("permutation images must be a bijection on 1..p");
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation Permutation::identity(int p) {
  std::vector<int> images(static_cast<std::size_t>(p));
  std::iota(images.begin(), images.end(), 1);
  return Permutation(std::move(images));
}

Permutation Permutation::from_cycles(int p, const std::vector<std::vector<int>>& cycles) {
  std::vector<int> images(static_cast<std::size_t>(p));
  std::iota(images.begin(), images.end(), 1);
  std::vector<bool> used(static_cast<std::size_t>(p) + 1, false);
  for (const auto& cycle : cycles) {
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      const int a = cycle[k];
      if (a < 1 || a > p) {
        throw PreconditionError("cycle element " + std::to_string(a) + " outside 1.." +
                                std::to_string(p));
      }
      if (used[static_cast<std::size_t>(a)]) {
        throw PreconditionError("cycles are not disjoint at element " + std::to_string(a));
      }
      used[static_cast<std::size_t>(a)] = true;
      images[static_cast<std::size_t>(a - 1)] = cycle[(k + 1) % cycle.size()];
    }
  }
  return Permutation(std::move(images));
}

Permutation Permutation::parse(std::string_view text, std::optional<int> degree) {
  std::vector<std::vector<int>> cycles;
  std::vector<int>* open = nullptr;
  int largest = 0;
  std::size_t i = 0;
  auto fail = [&](const std::string& why) {
    throw ParseError("bad cycle notation '" + std::string(text) + "': " + why);
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '(') {
      if (open) fail("nested '('");
      open = &cycles.emplace_back();
      ++i;
    } else if (c == ')') {
      if (!open) fail("unbalanced ')'");
      open = nullptr;
      ++i;
    } else if (c == ' ' || c == ',' || c == '\t') {
      ++i;
    } else if (c >= '0' && c <= '9') {
      if (!open) fail("element outside parentheses");
      int value = 0;
      const auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), value);
      if (ec != std::errc{}) fail("bad integer");
      open->push_back(value);
      largest = std::max(largest, value);
      i = static_cast<std::size_t>(ptr - text.data());
    } else {
      fail(std::string("unexpected character '") + c + "'");
    }
  }
  if (open) fail("missing ')'");
  const int p = degree.value_or(largest);
  if (p < largest) fail("element exceeds degree " + std::to_string(p));
  if (p < 1) fail("degree must be at least 1 (pass it explicitly for the identity)");
  try {
    return from_cycles(p, cycles);
  } catch (const PreconditionError& e) {
    fail(e.what());
  }
  return {};
}

std::vector<std::vector<int>> Permutation::cycles() const {
  std::vector<std::vector<int>> out;
  std::vector<bool> seen(images_.size() + 1, false);
  for (int start = 1; start <= degree(); ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    std::vector<int> cycle;
    for (int a = start; !seen[static_cast<std::size_t>(a)]; a = (*this)(a)) {
      seen[static_cast<std::size_t>(a)] = true;
      cycle.push_back(a);
    }
    if (cycle.size() > 1) out.push_back(std::move(cycle));
  }
  return out;
}

CycleType Permutation::cycle_type() const {
  std::vector<int> lengths;
  std::vector<bool> seen(images_.size() + 1, false);
  for (int start = 1; start <= degree(); ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    int len = 0;
    for (int a = start; !seen[static_cast<std::size_t>(a)]; a = (*this)(a)) {
      seen[static_cast<std::size_t>(a)] = true;
      ++len;
    }
    lengths.push_back(len);
  }
  std::sort(lengths.begin(), lengths.end(), std::greater<>());
  return CycleType{Partition(std::move(lengths))};
}

int Permutation::cycle_count() const {
  int count = 0;
  std::vector<bool> seen(images_.size() + 1, false);
  for (int start = 1; start <= degree(); ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    ++count;
    for (int a = start; !seen[static_cast<std::size_t>(a)]; a = (*this)(a)) {
      seen[static_cast<std::size_t>(a)] = true;
    }
  }
  return count;
}

bool Permutation::is_identity() const {
  for (int i = 1; i <= degree(); ++i) {
    if ((*this)(i) != i) return false;
  }
  return true;
}

std::string Permutation::to_string() const {
  const auto cs = cycles();
  if (cs.empty()) return "()";
  std::string out;
  for (const auto& cycle : cs) {
    out += '(';
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      if (k) out += ' ';
      out += std::to_string(cycle[k]);
    }
    out += ')';
  }
  return out;
}

Permutation compose(const Permutation& s, const Permutation& t) {
  if (s.degree() != t.degree()) {
    throw DegreeMismatch("compose: degrees " + std::to_string(s.degree()) + " and " +
                         std::to_string(t.degree()));
  }
  std::vector<int> images(static_cast<std::size_t>(s.degree()));
  for (int i = 1; i <= s.degree(); ++i) images[static_cast<std::size_t>(i - 1)] = s(t(i));
  return Permutation(std::move(images));
}

Permutation inverse(const Permutation& s) {
  std::vector<int> images(static_cast<std::size_t>(s.degree()));
  for (int i = 1; i <= s.degree(); ++i) images[static_cast<std::size_t>(s(i) - 1)] = i;
  return Permutation(std::move(images));
}

void for_each_permutation(int p, const std::function<void(const Permutation&)>& fn) {
  std::vector<int> images(static_cast<std::size_t>(p));
  std::iota(images.begin(), images.end(), 1);
  do {
    fn(Permutation(images));
  } while (std::next_permutation(images.begin(), images.end()));
}

// ---------------------------------------------------------------------------
// Characters and dimensions

BigInt factorial(int p) {
  BigInt out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(p));
  return out;
}

BigInt class_size(const CycleType& mu) {
  BigInt denom = 1;
  const auto& parts = mu.partition.parts();
  std::size_t i = 0;
  while (i < parts.size()) {
    std::size_t j = i;
    while (j < parts.size() && parts[j] == parts[i]) ++j;
    const auto multiplicity = static_cast<int>(j - i);
    for (int k = 0; k < multiplicity; ++k) denom *= parts[i];
    denom *= factorial(multiplicity);
    i = j;
  }
  return factorial(mu.degree()) / denom;
}

namespace {

using CharacterKey = std::pair<std::vector<int>, std::vector<int>>;

struct CharacterMemo {
  std::shared_mutex mutex;
  std::map<CharacterKey, BigInt> table;
};

CharacterMemo& character_memo() {
  static CharacterMemo memo;
  return memo;
}

// Partition (as padded vector) from a beta-set sorted descending.
std::vector<int> from_beta(const std::vector<int>& beta) {
  const auto k = static_cast<int>(beta.size());
  std::vector<int> parts;
  for (int i = 0; i < k; ++i) {
    const int part = beta[static_cast<std::size_t>(i)] - (k - 1 - i);
    if (part > 0) parts.push_back(part);
  }
  return parts;
}

// mu holds the cycle lengths still to be removed, largest first.
BigInt mn_character(const std::vector<int>& lambda, const std::vector<int>& mu) {
  if (mu.empty()) return lambda.empty() ? BigInt(1) : BigInt(0);
  auto& memo = character_memo();
  CharacterKey key{lambda, mu};
  {
    std::shared_lock lock(memo.mutex);
    if (auto it = memo.table.find(key); it != memo.table.end()) return it->second;
  }

  const int r = mu.front();
  const std::vector<int> rest(mu.begin() + 1, mu.end());
  const auto k = static_cast<int>(lambda.size());
  std::vector<int> beta(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) beta[static_cast<std::size_t>(i)] = lambda[static_cast<std::size_t>(i)] + (k - 1 - i);

  BigInt total = 0;
  for (int i = 0; i < k; ++i) {
    const int b = beta[static_cast<std::size_t>(i)];
    const int target = b - r;
    if (target < 0 || std::find(beta.begin(), beta.end(), target) != beta.end()) continue;
    // Leg length: beads strictly between target and b.
    int between = 0;
    for (int c : beta) between += (c > target && c < b) ? 1 : 0;
    std::vector<int> moved = beta;
    moved[static_cast<std::size_t>(i)] = target;
    std::sort(moved.begin(), moved.end(), std::greater<>());
    const BigInt sub = mn_character(from_beta(moved), rest);
    if (between % 2) total -= sub;
    else total += sub;
  }

  std::unique_lock lock(memo.mutex);
  memo.table.emplace(std::move(key), total);
  return total;
}

void check_character_degree(int p) {
  if (p < 1 || p > kMaxCharacterDegree) {
    throw BoundsError("character degree " + std::to_string(p) + " outside 1.." +
                      std::to_string(kMaxCharacterDegree));
  }
}

}  // namespace

BigInt character(const Partition& lambda, const CycleType& mu) {
  if (lambda.degree() != mu.degree()) {
    throw DegreeMismatch("character: lambda has degree " + std::to_string(lambda.degree()) +
                         ", class has degree " + std::to_string(mu.degree()));
  }
  check_character_degree(lambda.degree());
  return mn_character(lambda.parts(), mu.partition.parts());
}

BigInt dimension(const Partition& lambda) {
  check_character_degree(lambda.degree());
  BigInt hooks = 1;
  // Column heights from the conjugate partition.
  const int cols = lambda.rows() ? lambda[0] : 0;
  std::vector<int> height(static_cast<std::size_t>(cols), 0);
  for (int part : lambda.parts()) {
    for (int j = 0; j < part; ++j) ++height[static_cast<std::size_t>(j)];
  }
  for (int i = 0; i < lambda.rows(); ++i) {
    for (int j = 0; j < lambda[i]; ++j) {
      hooks *= (lambda[i] - j - 1) + (height[static_cast<std::size_t>(j)] - i - 1) + 1;
    }
  }
  return factorial(lambda.degree()) / hooks;
}

Rational schur_dim(const Partition& lambda, int n) {
  if (n < 1) throw PreconditionError("schur_dim: n must be positive");
  BigInt contents = 1;
  for (int i = 0; i < lambda.rows(); ++i) {
    for (int j = 0; j < lambda[i]; ++j) contents *= n + j - i;
  }
  Rational out(dimension(lambda) * contents, factorial(lambda.degree()));
  out.canonicalize();
  return out;
}

// ---------------------------------------------------------------------------
// Boundary wiring lemma

Permutation gamma_permutation(int n) {
  if (n < 1) throw PreconditionError("gamma_permutation: n must be positive");
  std::vector<int> first{2 * n + 1};
  for (int i = 1; i <= n; ++i) first.push_back(i);
  first.push_back(2 * n + 3);
  std::vector<int> second{2 * n + 2};
  for (int i = n + 1; i <= 2 * n; ++i) second.push_back(i);
  second.push_back(2 * n + 4);
  return Permutation::from_cycles(2 * n + 4, {first, second});
}

namespace {

// Lehmer rank of a permutation of degree <= 20.
std::uint64_t rank(const Permutation& s) {
  const int p = s.degree();
  std::uint64_t out = 0;
  std::uint32_t used = 0;
  for (int i = 1; i <= p; ++i) {
    const int v = s(i) - 1;
    const auto smaller_unused =
        static_cast<std::uint64_t>(v - std::popcount(used & ((1u << v) - 1u)));
    out = out * static_cast<std::uint64_t>(p - i + 1) + smaller_unused;
    used |= 1u << v;
  }
  return out;
}

Permutation embed(const Permutation& alpha, int p) {
  std::vector<int> images = alpha.images();
  for (int i = alpha.degree() + 1; i <= p; ++i) images.push_back(i);
  return Permutation(std::move(images));
}

std::uint64_t checked_factorial(int p) {
  std::uint64_t out = 1;
  for (int i = 2; i <= p; ++i) out *= static_cast<std::uint64_t>(i);
  return out;
}

}  // namespace

LemmaGammaReport lemma_gamma_check(int n, std::uint64_t samples, std::uint64_t seed) {
  if (n < 1 || n > 8) throw BoundsError("lemma_gamma_check: n must lie in 1..8");
  const int p = 2 * n + 4;
  const Permutation gamma = gamma_permutation(n);
  const Permutation gamma_inv = inverse(gamma);
  constexpr std::size_t kMaxCounterexamples = 20;

  LemmaGammaReport report;
  report.n = n;
  const std::uint64_t alphas = checked_factorial(2 * n);
  const std::uint64_t betas = checked_factorial(p);
  report.exhaustive = n <= 4 && alphas * betas < kLemmaGammaExhaustiveLimit;

  struct Image {
    std::uint64_t g;
    std::uint64_t h;
    std::uint64_t alpha;
    std::uint64_t beta;
    bool operator<(const Image& o) const {
      return std::tie(g, h, alpha, beta) < std::tie(o.g, o.h, o.alpha, o.beta);
    }
  };
  std::vector<Image> images;
  std::map<std::uint64_t, Permutation> by_rank;

  auto visit = [&](const Permutation& alpha, const Permutation& beta,
                   const Permutation& g, const Permutation& alpha_inv) {
    ++report.pairs_checked;
    const Permutation gb = compose(g, beta);
    if ((gb.length() + beta.length()) % 2 != 0) {
      report.parity_ok = false;
      if (report.counterexamples.size() < kMaxCounterexamples) {
        report.counterexamples.push_back({alpha, beta, "odd |g beta| + |beta|"});
      }
    }
    const Permutation h = compose(beta, alpha_inv);
    const std::uint64_t ra = rank(alpha);
    const std::uint64_t rb = rank(beta);
    images.push_back({rank(g), rank(h), ra, rb});
    if (report.counterexamples.size() < kMaxCounterexamples) {
      by_rank.try_emplace(ra, alpha);
      by_rank.try_emplace(rb + (1ULL << 63), beta);
    }
  };

  auto prepare = [&](const Permutation& small_alpha) {
    const Permutation alpha = embed(small_alpha, p);
    const Permutation alpha_inv = inverse(alpha);
    const Permutation g = compose(compose(gamma_inv, alpha), compose(gamma, alpha_inv));
    return std::tuple{alpha, alpha_inv, g};
  };

  if (report.exhaustive) {
    images.reserve(alphas * betas);
    for_each_permutation(2 * n, [&](const Permutation& small_alpha) {
      const auto [alpha, alpha_inv, g] = prepare(small_alpha);
      for_each_permutation(p, [&](const Permutation& beta) { visit(alpha, beta, g, alpha_inv); });
    });
  } else {
    RandomStream rng(seed, 0x6c656d6d61ULL);
    images.reserve(samples);
    std::vector<int> a(static_cast<std::size_t>(2 * n));
    std::vector<int> b(static_cast<std::size_t>(p));
    for (std::uint64_t s = 0; s < samples; ++s) {
      std::iota(a.begin(), a.end(), 1);
      std::iota(b.begin(), b.end(), 1);
      std::shuffle(a.begin(), a.end(), rng.engine());
      std::shuffle(b.begin(), b.end(), rng.engine());
      const auto [alpha, alpha_inv, g] = prepare(Permutation(a));
      visit(alpha, Permutation(b), g, alpha_inv);
    }
  }

  std::sort(images.begin(), images.end());
  for (std::size_t i = 1; i < images.size(); ++i) {
    const Image& x = images[i - 1];
    const Image& y = images[i];
    if (x.g != y.g || x.h != y.h) continue;
    if (x.alpha == y.alpha && x.beta == y.beta) continue;  // same pair drawn twice
    report.injective_ok = false;
    if (report.counterexamples.size() < kMaxCounterexamples) {
      auto a = by_rank.find(y.alpha);
      auto b = by_rank.find(y.beta + (1ULL << 63));
      if (a != by_rank.end() && b != by_rank.end()) {
        report.counterexamples.push_back({a->second, b->second, "image (g, h) repeated"});
      }
    }
  }
  return report;
}

}  // namespace rmps

namespace rmps {

bool check_character_orthogonality(int p) {
  if (p < 1 || p > 8) throw BoundsError("check_character_orthogonality: p must lie in 1..8");
  const auto lambdas = partitions(p);
  // Characters per permutation, enumerated explicitly.
  std::map<CycleType, std::vector<BigInt>> table;
  for (const auto& mu : lambdas) {
    std::vector<BigInt> row;
    for (const auto& lambda : lambdas) row.push_back(character(lambda, CycleType{mu}));
    table.emplace(CycleType{mu}, std::move(row));
  }
  const std::size_t k = lambdas.size();
  std::vector<BigInt> gram(k * k, 0);
  for_each_permutation(p, [&](const Permutation& s) {
    const auto& chi = table.at(s.cycle_type());
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) gram[a * k + b] += chi[a] * chi[b];
  });
  const BigInt order = factorial(p);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      if (gram[a * k + b] != (a == b ? order : BigInt(0))) return false;
    }
  return true;
}

bool check_burnside(int p) {
  BigInt total = 0;
  for (const auto& lambda : partitions(p)) {
    const BigInt dim = dimension(lambda);
    total += dim * dim;
  }
  return total == factorial(p);
}

}  // namespace rmps
