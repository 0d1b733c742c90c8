#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "rmps/errors.hpp"
#include "rmps/symgroup.hpp"

using namespace rmps;

namespace {

// Euler's pentagonal recurrence.
std::vector<long> partition_counts(int max) {
  std::vector<long> p(static_cast<std::size_t>(max) + 1, 0);
  p[0] = 1;
  for (int m = 1; m <= max; ++m) {
    long total = 0;
    for (int k = 1;; ++k) {
      const int g1 = k * (3 * k - 1) / 2;
      const int g2 = k * (3 * k + 1) / 2;
      if (g1 > m) break;
      const long sign = (k % 2) ? 1 : -1;
      total += sign * p[static_cast<std::size_t>(m - g1)];
      if (g2 <= m) total += sign * p[static_cast<std::size_t>(m - g2)];
    }
    p[static_cast<std::size_t>(m)] = total;
  }
  return p;
}

// Standard Young tableaux by removing corners (branching rule).
long count_syt(std::vector<int> shape, std::map<std::vector<int>, long>& memo) {
  while (!shape.empty() && shape.back() == 0) shape.pop_back();
  if (shape.empty()) return 1;
  if (auto it = memo.find(shape); it != memo.end()) return it->second;
  long total = 0;
  for (std::size_t r = 0; r < shape.size(); ++r) {
    const bool corner = r + 1 == shape.size() || shape[r + 1] < shape[r];
    if (!corner) continue;
    auto smaller = shape;
    --smaller[r];
    total += count_syt(smaller, memo);
  }
  memo[shape] = total;
  return total;
}

// Semistandard tableaux with entries in 1..n, counted by brute force fill.
long count_ssyt(const std::vector<int>& shape, int n) {
  std::vector<std::pair<int, int>> cells;
  for (int r = 0; r < static_cast<int>(shape.size()); ++r)
    for (int c = 0; c < shape[static_cast<std::size_t>(r)]; ++c) cells.emplace_back(r, c);
  std::map<std::pair<int, int>, int> fill;
  long count = 0;
  std::function<void(std::size_t)> go = [&](std::size_t k) {
    if (k == cells.size()) {
      ++count;
      return;
    }
    const auto [r, c] = cells[k];
    int lo = 1;
    if (c > 0) lo = std::max(lo, fill[{r, c - 1}]);
    if (r > 0) lo = std::max(lo, fill[{r - 1, c}] + 1);
    for (int v = lo; v <= n; ++v) {
      fill[{r, c}] = v;
      go(k + 1);
    }
  };
  go(0);
  return count;
}

Permutation random_permutation(int p, std::mt19937_64& rng) {
  std::vector<int> images(static_cast<std::size_t>(p));
  std::iota(images.begin(), images.end(), 1);
  std::shuffle(images.begin(), images.end(), rng);
  return Permutation(std::move(images));
}

int fixed_points(const Permutation& s) {
  int f = 0;
  for (int i = 1; i <= s.degree(); ++i) f += s(i) == i;
  return f;
}

}  // namespace

TEST_CASE("partition counts follow the pentagonal recurrence") {
  const auto expected = partition_counts(30);
  for (int p = 1; p <= 30; ++p) {
    CHECK(static_cast<long>(partitions(p).size()) == expected[static_cast<std::size_t>(p)]);
  }
  CHECK(expected[30] == 5604);
}

TEST_CASE("partitions are listed in descending lexicographic order") {
  const auto parts = partitions(6);
  CHECK(parts.front().to_string() == "6");
  CHECK(parts.back().to_string() == "1,1,1,1,1,1");
  for (std::size_t i = 1; i < parts.size(); ++i) CHECK(parts[i - 1] > parts[i]);
  for (const auto& lambda : parts) CHECK(lambda.degree() == 6);
  CHECK_THROWS_AS(partitions(0), BoundsError);
  CHECK_THROWS_AS(partitions(31), BoundsError);
}

TEST_CASE("partition parsing") {
  CHECK(Partition::parse("3,2,2").parts() == std::vector<int>{3, 2, 2});
  CHECK_THROWS_AS(Partition::parse("2,3"), ParseError);
  CHECK_THROWS_AS(Partition::parse("2,,1"), ParseError);
  CHECK_THROWS_AS(Partition::parse(""), ParseError);
}

TEST_CASE("cycle notation round trip") {
  const auto s = Permutation::parse("(1 3 2)(4 5)");
  CHECK(s.degree() == 5);
  CHECK(s(1) == 3);
  CHECK(s(3) == 2);
  CHECK(s(2) == 1);
  CHECK(s.to_string() == "(1 3 2)(4 5)");
  CHECK(s.cycle_type().to_string() == "3,2");
  CHECK(s.length() == 3);
  CHECK(Permutation::parse("(2,1)").to_string() == "(1 2)");
  CHECK(Permutation::parse("()", 3).is_identity());
  CHECK(Permutation::identity(4).to_string() == "()");
  CHECK(Permutation::parse("(1 2)", 4).cycle_type().to_string() == "2,1,1");
  CHECK_THROWS_AS(Permutation::parse("(1 2"), ParseError);
  CHECK_THROWS_AS(Permutation::parse("(1 2)(2 3)"), ParseError);
  CHECK_THROWS_AS(Permutation::parse("(1 x)"), ParseError);
  CHECK_THROWS_AS(Permutation::parse("(1 5)", 3), ParseError);
  CHECK_THROWS_AS(Permutation::parse("()"), ParseError);
}

TEST_CASE("composition and inverse") {
  const auto s = Permutation::parse("(1 2 3)", 4);
  const auto t = Permutation::parse("(3 4)", 4);
  const auto st = compose(s, t);
  for (int i = 1; i <= 4; ++i) CHECK(st(i) == s(t(i)));
  CHECK(compose(s, inverse(s)).is_identity());
  CHECK(compose(inverse(st), st).is_identity());
}

TEST_CASE("compose rejects mismatched degrees") {
  CHECK_THROWS_AS(compose(Permutation::identity(3), Permutation::identity(4)), DegreeMismatch);
}

TEST_CASE("small partition lists") {
  const auto three = partitions(3);
  REQUIRE(three.size() == 3);
  CHECK(three[0].to_string() == "3");
  CHECK(three[1].to_string() == "2,1");
  CHECK(three[2].to_string() == "1,1,1");
  CHECK(partitions(1).size() == 1);
}

TEST_CASE("cycle type is a class function") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const int p = 1 + trial % 8;
    const auto pi = random_permutation(p, rng);
    const auto s = random_permutation(p, rng);
    CHECK(compose(compose(pi, s), inverse(pi)).cycle_type() == s.cycle_type());
  }
}

TEST_CASE("length is subadditive with matching parity") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const int p = 1 + trial % 8;
    const auto s = random_permutation(p, rng);
    const auto t = random_permutation(p, rng);
    const int st = compose(s, t).length();
    CHECK(st <= s.length() + t.length());
    CHECK((st - s.length() - t.length()) % 2 == 0);
    CHECK(inverse(s).length() == s.length());
  }
}

TEST_CASE("schur dimension against the content product") {
  for (int p = 1; p <= 8; ++p) {
    for (const auto& lambda : partitions(p)) {
      for (int n = 1; n <= 12; ++n) {
        Rational content(1);
        const auto& rows = lambda.parts();
        for (std::size_t i = 0; i < rows.size(); ++i)
          for (int j = 0; j < rows[i]; ++j) content *= n + j - static_cast<int>(i);
        CHECK(schur_dim(lambda, n) * Rational(factorial(p)) / Rational(dimension(lambda)) == content);
      }
    }
  }
}

TEST_CASE("enumeration visits every permutation once and class sizes add up") {
  for (int p = 1; p <= 6; ++p) {
    std::set<Permutation> seen;
    std::map<CycleType, long> per_class;
    for_each_permutation(p, [&](const Permutation& s) {
      seen.insert(s);
      ++per_class[s.cycle_type()];
    });
    CHECK(BigInt(static_cast<long>(seen.size())) == factorial(p));
    for (const auto& [ct, count] : per_class) CHECK(class_size(ct) == BigInt(count));
  }
}

TEST_CASE("dimensions match standard tableaux counts") {
  std::map<std::vector<int>, long> memo;
  for (int p = 1; p <= 14; ++p) {
    for (const auto& lambda : partitions(p)) {
      CHECK(dimension(lambda) == BigInt(count_syt(lambda.parts(), memo)));
    }
  }
}

TEST_CASE("schur dimensions match semistandard tableaux counts") {
  for (int p = 1; p <= 5; ++p) {
    for (const auto& lambda : partitions(p)) {
      for (int n = 1; n <= 4; ++n) {
        CHECK(schur_dim(lambda, n) == Rational(count_ssyt(lambda.parts(), n)));
      }
    }
  }
}

TEST_CASE("characters on known families") {
  for (int p = 2; p <= 7; ++p) {
    const Partition trivial({p});
    const Partition sign(std::vector<int>(static_cast<std::size_t>(p), 1));
    std::vector<int> hook_parts{p - 1, 1};
    const Partition standard(hook_parts);
    for_each_permutation(p, [&](const Permutation& s) {
      const CycleType ct = s.cycle_type();
      CHECK(character(trivial, ct) == 1);
      CHECK(character(sign, ct) == (s.length() % 2 ? -1 : 1));
      // Permutation representation = trivial + standard.
      CHECK(character(standard, ct) == fixed_points(s) - 1);
    });
  }
  CHECK(character(Partition({2, 1}), CycleType{Partition({3})}) == -1);
  CHECK(character(Partition({2, 1}), CycleType{Partition({2, 1})}) == 0);
  CHECK(character(Partition({2, 2}), CycleType{Partition({2, 2})}) == 2);
}

TEST_CASE("character orthogonality and dimension identity") {
  for (int p = 1; p <= 6; ++p) CHECK(check_character_orthogonality(p));
  for (int p = 1; p <= 10; ++p) CHECK(check_burnside(p));
}

TEST_CASE("column orthogonality over classes") {
  const int p = 8;
  const auto classes = partitions(p);
  for (const auto& mu : classes) {
    for (const auto& nu : classes) {
      BigInt sum = 0;
      for (const auto& lambda : classes) {
        sum += character(lambda, CycleType{mu}) * character(lambda, CycleType{nu});
      }
      const BigInt expected = mu == nu ? factorial(p) / class_size(CycleType{mu}) : BigInt(0);
      CHECK(sum == expected);
    }
  }
}

TEST_CASE("boundary wiring permutation") {
  CHECK(gamma_permutation(1).to_string() == "(1 5 3)(2 6 4)");
  const auto g2 = gamma_permutation(2);
  CHECK(g2.degree() == 8);
  CHECK(g2(5) == 1);
  CHECK(g2(1) == 2);
  CHECK(g2(2) == 7);
  CHECK(g2(7) == 5);
  CHECK(g2.cycle_type().to_string() == "4,4");
}

TEST_CASE("boundary wiring lemma") {
  const auto r1 = lemma_gamma_check(1);
  CHECK(r1.exhaustive);
  CHECK(r1.pairs_checked == 2 * 720);
  CHECK(r1.parity_ok);
  CHECK(r1.injective_ok);
  CHECK(r1.counterexamples.empty());

  const auto r2 = lemma_gamma_check(2);
  CHECK(r2.exhaustive);
  CHECK(r2.pairs_checked == 24ULL * 40320ULL);
  CHECK(r2.counterexamples.empty());

  const auto r3 = lemma_gamma_check(3, 2000, 11);
  CHECK_FALSE(r3.exhaustive);
  CHECK(r3.pairs_checked == 2000);
  CHECK(r3.parity_ok);
  const auto r3b = lemma_gamma_check(3, 2000, 11);
  CHECK(r3b.injective_ok == r3.injective_ok);
  CHECK_THROWS_AS(lemma_gamma_check(0), BoundsError);
}
