#include "rmps/weingarten.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>

#include "rmps/errors.hpp"

namespace rmps {

// ---------------------------------------------------------------------------
// Cache

std::optional<Rational> WeingartenCache::find(const WeingartenKey& key) const {
  std::shared_lock lock(mutex_);
  if (auto it = table_.find(key); it != table_.end()) return it->second;
  return std::nullopt;
}

void WeingartenCache::insert(const WeingartenKey& key, const Rational& value) {
  std::unique_lock lock(mutex_);
  table_.insert_or_assign(key, value);
}

std::size_t WeingartenCache::size() const {
  std::shared_lock lock(mutex_);
  return table_.size();
}

std::map<WeingartenKey, Rational> WeingartenCache::snapshot() const {
  std::shared_lock lock(mutex_);
  return table_;
}

std::string WeingartenCache::format_line(const WeingartenKey& key, const Rational& value) {
  return std::to_string(key.cycle_type.degree()) + ";" + key.cycle_type.to_string() + ";" +
         std::to_string(key.n) + ";" + value.get_num().get_str() + "/" +
         value.get_den().get_str();
}

std::pair<WeingartenKey, Rational> WeingartenCache::parse_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream in(line);
  for (std::string field; std::getline(in, field, ';');) fields.push_back(field);
  if (fields.size() != 4) throw ParseError("expected 4 ';'-separated fields");
  int p = 0;
  int n = 0;
  try {
    std::size_t used = 0;
    p = std::stoi(fields[0], &used);
    if (used != fields[0].size()) throw ParseError("bad degree");
    n = std::stoi(fields[2], &used);
    if (used != fields[2].size()) throw ParseError("bad dimension");
  } catch (const std::logic_error&) {
    throw ParseError("bad integer field");
  }
  CycleType ct{Partition::parse(fields[1])};
  if (ct.degree() != p) throw ParseError("cycle type does not sum to p");
  if (n < 1) throw ParseError("n must be positive");
  if (fields[3].find('/') == std::string::npos) throw ParseError("value must be num/den");
  return {WeingartenKey{n, std::move(ct)}, parse_rational(fields[3])};
}

void WeingartenCache::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    if (!std::filesystem::exists(path)) return;
    throw IoError("cannot open Weingarten cache '" + path.string() + "'");
  }
  std::map<WeingartenKey, Rational> loaded;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (line.empty() || line.front() == '#') continue;
    try {
      auto [key, value] = parse_line(line);
      loaded.insert_or_assign(std::move(key), std::move(value));
    } catch (const ParseError& e) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (in.bad()) throw IoError("read error in Weingarten cache '" + path.string() + "'");
  std::unique_lock lock(mutex_);
  for (auto& [k, v] : loaded) table_.insert_or_assign(k, v);
}

void WeingartenCache::save(const std::filesystem::path& path) const {
  const auto table = snapshot();
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write Weingarten cache '" + path.string() + "'");
  for (const auto& [key, value] : table) out << format_line(key, value) << '\n';
  out.flush();
  if (!out) throw IoError("write error in Weingarten cache '" + path.string() + "'");
}

WeingartenCache& default_weingarten_cache() {
  static WeingartenCache cache;
  return cache;
}

// ---------------------------------------------------------------------------
// Weingarten function

Rational wg(int n, const CycleType& cycle_type, WeingartenCache& cache) {
  const int p = cycle_type.degree();
  if (p < 1 || p > kMaxWeingartenDegree) {
    throw BoundsError("wg: p=" + std::to_string(p) + " outside 1.." +
                      std::to_string(kMaxWeingartenDegree));
  }
  if (n < p) {
    throw SingularDimension("wg: n=" + std::to_string(n) + " < p=" + std::to_string(p) +
                            " makes s_lambda,n(1) vanish for some lambda");
  }
  const WeingartenKey key{n, cycle_type};
  if (auto hit = cache.find(key)) return *hit;

  Rational sum = 0;
  for (const Partition& lambda : partitions(p)) {
    const BigInt dim = dimension(lambda);
    Rational term(dim * dim * character(lambda, cycle_type));
    term /= schur_dim(lambda, n);
    sum += term;
  }
  const BigInt pf = factorial(p);
  sum /= Rational(pf * pf);
  sum.canonicalize();
  cache.insert(key, sum);
  return sum;
}

namespace {

// Permutations sigma in S_p with left[k] == right[sigma(k)] for all k.
std::vector<Permutation> matchings(const std::vector<int>& left, const std::vector<int>& right) {
  std::vector<Permutation> out;
  const auto p = static_cast<int>(left.size());
  std::vector<int> images(left.size());
  std::vector<bool> used(left.size(), false);
  auto recurse = [&](auto&& self, int k) -> void {
    if (k == p) {
      out.emplace_back(images);
      return;
    }
    for (int c = 0; c < p; ++c) {
      if (used[static_cast<std::size_t>(c)] ||
          left[static_cast<std::size_t>(k)] != right[static_cast<std::size_t>(c)]) {
        continue;
      }
      used[static_cast<std::size_t>(c)] = true;
      images[static_cast<std::size_t>(k)] = c + 1;
      self(self, k + 1);
      used[static_cast<std::size_t>(c)] = false;
    }
  };
  recurse(recurse, 0);
  return out;
}

}  // namespace

Rational integrate_monomial(int n, const std::vector<int>& i, const std::vector<int>& j,
                            const std::vector<int>& i_bar, const std::vector<int>& j_bar) {
  const std::size_t p = i.size();
  if (j.size() != p || i_bar.size() != p || j_bar.size() != p) {
    throw DegreeMismatch("integrate_monomial: index tuples must have equal length");
  }
  if (p < 1 || p > static_cast<std::size_t>(kMaxMonomialDegree)) {
    throw BoundsError("integrate_monomial: p=" + std::to_string(p) + " outside 1.." +
                      std::to_string(kMaxMonomialDegree));
  }
  for (const auto* tuple : {&i, &j, &i_bar, &j_bar}) {
    for (int v : *tuple) {
      if (v < 1 || v > n) {
        throw BoundsError("integrate_monomial: index " + std::to_string(v) + " outside 1.." +
                          std::to_string(n));
      }
    }
  }
  const auto sigmas = matchings(i, i_bar);
  const auto taus = matchings(j, j_bar);
  Rational sum = 0;
  for (const auto& sigma : sigmas) {
    const Permutation sigma_inv = inverse(sigma);
    for (const auto& tau : taus) sum += wg(n, compose(tau, sigma_inv));
  }
  sum.canonicalize();
  return sum;
}

// ---------------------------------------------------------------------------
// Trace expressions

int TraceExpression::degree() const {
  int p = 0;
  for (const auto& word : words) {
    for (const auto& t : word) p += t.kind == TraceToken::Kind::U ? 1 : 0;
  }
  return p;
}

void TraceExpression::validate() const {
  if (n < 1) throw MalformedExpression("trace expression: n must be positive");
  std::vector<int> u_slots;
  std::vector<int> bar_slots;
  for (const auto& word : words) {
    if (word.empty()) throw MalformedExpression("trace expression: empty word (open wiring)");
    for (const auto& t : word) {
      switch (t.kind) {
        case TraceToken::Kind::U: u_slots.push_back(t.slot); break;
        case TraceToken::Kind::UBar:
        case TraceToken::Kind::UDag: bar_slots.push_back(t.slot); break;
        case TraceToken::Kind::Constant:
          if (!constants.contains(t.constant)) {
            throw MalformedExpression("trace expression: unknown constant '" + t.constant + "'");
          }
          break;
      }
    }
  }
  auto check_slots = [](std::vector<int> slots, const char* what, std::size_t p) {
    std::sort(slots.begin(), slots.end());
    for (std::size_t k = 0; k < slots.size(); ++k) {
      if (slots[k] != static_cast<int>(k + 1) || slots.size() != p) {
        throw MalformedExpression(std::string("trace expression: ") + what +
                                  " slots must be exactly 1..p, each once (open wiring)");
      }
    }
    if (slots.size() != p) {
      throw MalformedExpression(std::string("trace expression: ") + what + " slot count mismatch");
    }
  };
  check_slots(u_slots, "U", u_slots.size());
  check_slots(bar_slots, "conj(U)", u_slots.size());
  for (const auto& [id, m] : constants) {
    if (m.rows() != n || m.cols() != n) {
      throw MalformedExpression("trace expression: constant '" + id + "' is not " +
                                std::to_string(n) + "x" + std::to_string(n));
    }
  }
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(int size) : parent_(static_cast<std::size_t>(size)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      auto& px = parent_[static_cast<std::size_t>(x)];
      px = parent_[static_cast<std::size_t>(px)];
      x = px;
    }
    return x;
  }
  void unite(int a, int b) { parent_[static_cast<std::size_t>(find(a))] = find(b); }

 private:
  std::vector<int> parent_;
};

// Dense exact square matrix, used when every constant is real.
struct ExactMatrix {
  int n = 0;
  std::vector<Rational> a;

  static ExactMatrix identity(int n) {
    ExactMatrix m{n, std::vector<Rational>(static_cast<std::size_t>(n * n), 0)};
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }
  Rational& at(int r, int c) { return a[static_cast<std::size_t>(r * n + c)]; }
  const Rational& at(int r, int c) const { return a[static_cast<std::size_t>(r * n + c)]; }
  ExactMatrix transpose() const {
    ExactMatrix t = *this;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) t.at(r, c) = at(c, r);
    return t;
  }
  ExactMatrix operator*(const ExactMatrix& o) const {
    ExactMatrix m{n, std::vector<Rational>(a.size(), 0)};
    for (int r = 0; r < n; ++r)
      for (int k = 0; k < n; ++k) {
        if (at(r, k) == 0) continue;
        for (int c = 0; c < n; ++c) m.at(r, c) += at(r, k) * o.at(k, c);
      }
    return m;
  }
  Rational trace() const {
    Rational t = 0;
    for (int i = 0; i < n; ++i) t += at(i, i);
    return t;
  }
};

// Loop structure of one (sigma, tau) term: every loop is a cyclic sequence
// of constants, each used as is or transposed.
struct Loop {
  std::vector<std::pair<int, bool>> factors;  // (constant edge, transposed)
};

struct Wiring {
  int variables = 0;
  // Per constant edge: left/right variable and constant id.
  std::vector<int> edge_left, edge_right;
  std::vector<std::string> edge_constant;
  // Per slot k (0-based): row/column variable of U_k and of conj(U)_k.
  std::vector<int> u_row, u_col, bar_row, bar_col;
};

Wiring build_wiring(const TraceExpression& expr) {
  const int p = expr.degree();
  Wiring w;
  w.u_row.assign(static_cast<std::size_t>(p), -1);
  w.u_col = w.u_row;
  w.bar_row = w.u_row;
  w.bar_col = w.u_row;
  for (const auto& word : expr.words) {
    const int base = w.variables;
    const auto m = static_cast<int>(word.size());
    w.variables += m;
    for (int a = 0; a < m; ++a) {
      // Token a sits between variable (a-1) on its left and variable a on its right.
      const int left = base + (a + m - 1) % m;
      const int right = base + a;
      const auto& t = word[static_cast<std::size_t>(a)];
      const auto k = static_cast<std::size_t>(t.slot - 1);
      switch (t.kind) {
        case TraceToken::Kind::U:
          w.u_row[k] = left;
          w.u_col[k] = right;
          break;
        case TraceToken::Kind::UBar:
          w.bar_row[k] = left;
          w.bar_col[k] = right;
          break;
        case TraceToken::Kind::UDag:
          w.bar_row[k] = right;
          w.bar_col[k] = left;
          break;
        case TraceToken::Kind::Constant:
          w.edge_left.push_back(left);
          w.edge_right.push_back(right);
          w.edge_constant.push_back(t.constant);
          break;
      }
    }
  }
  return w;
}

// Decomposes the wiring for (sigma, tau) into constant loops plus a count of
// loops carrying no constant at all.
std::pair<std::vector<Loop>, int> decompose(const Wiring& w, const Permutation& sigma,
                                            const Permutation& tau) {
  DisjointSets sets(w.variables);
  for (int k = 1; k <= sigma.degree(); ++k) {
    const auto s = static_cast<std::size_t>(k - 1);
    sets.unite(w.u_row[s], w.bar_row[static_cast<std::size_t>(sigma(k) - 1)]);
    sets.unite(w.u_col[s], w.bar_col[static_cast<std::size_t>(tau(k) - 1)]);
  }
  // Endpoints per class: (edge, side) with side 0 = left, 1 = right.
  std::map<int, std::vector<std::pair<int, int>>> ends;
  std::set<int> classes;
  for (int v = 0; v < w.variables; ++v) classes.insert(sets.find(v));
  const auto edges = static_cast<int>(w.edge_left.size());
  for (int e = 0; e < edges; ++e) {
    ends[sets.find(w.edge_left[static_cast<std::size_t>(e)])].push_back({e, 0});
    ends[sets.find(w.edge_right[static_cast<std::size_t>(e)])].push_back({e, 1});
  }
  int empty_loops = 0;
  for (int c : classes) {
    if (!ends.contains(c)) ++empty_loops;
  }
  std::vector<Loop> loops;
  std::vector<bool> used(static_cast<std::size_t>(edges), false);
  for (int start = 0; start < edges; ++start) {
    if (used[static_cast<std::size_t>(start)]) continue;
    Loop loop;
    int edge = start;
    bool transposed = false;
    while (!used[static_cast<std::size_t>(edge)]) {
      used[static_cast<std::size_t>(edge)] = true;
      loop.factors.push_back({edge, transposed});
      // Leave the edge through its right end (or left end when transposed).
      const int exit_side = transposed ? 0 : 1;
      const int var = exit_side ? w.edge_right[static_cast<std::size_t>(edge)]
                                : w.edge_left[static_cast<std::size_t>(edge)];
      const auto& here = ends.at(sets.find(var));
      if (here.size() != 2) throw MalformedExpression("trace expression: open wiring");
      const auto next = here[0] == std::pair{edge, exit_side} ? here[1] : here[0];
      edge = next.first;
      transposed = next.second == 1;
    }
    loops.push_back(std::move(loop));
  }
  return {std::move(loops), empty_loops};
}

bool all_real(const TraceExpression& expr) {
  for (const auto& [id, m] : expr.constants) {
    if (!m.imag().isZero(0.0)) return false;
  }
  return true;
}

}  // namespace

MomentValue evaluate_trace_expression(const TraceExpression& expr, WeingartenCache& cache) {
  expr.validate();
  const int p = expr.degree();
  if (p > kMaxTraceDegree) {
    throw BoundsError("evaluate_trace_expression: degree " + std::to_string(p) + " exceeds " +
                      std::to_string(kMaxTraceDegree));
  }
  const Wiring wiring = build_wiring(expr);
  const int n = expr.n;
  const bool exact_mode = all_real(expr);

  std::vector<std::string> edge_ids = wiring.edge_constant;
  std::map<std::string, ExactMatrix> exact_constants;
  if (exact_mode) {
    for (const auto& [id, m] : expr.constants) {
      ExactMatrix em{n, std::vector<Rational>(static_cast<std::size_t>(n * n))};
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) em.at(r, c) = Rational(m(r, c).real());
      exact_constants.emplace(id, std::move(em));
    }
  }

  std::vector<Permutation> perms;
  if (p == 0) {
    perms.emplace_back();
  } else {
    for_each_permutation(p, [&](const Permutation& s) { perms.push_back(s); });
  }

  Rational exact_total = 0;
  std::complex<double> total = 0.0;
  for (const auto& sigma : perms) {
    const Permutation sigma_inv = p ? inverse(sigma) : sigma;
    for (const auto& tau : perms) {
      const Rational weight = p ? wg(n, compose(tau, sigma_inv), cache) : Rational(1);
      const auto [loops, empty_loops] = decompose(wiring, sigma, tau);
      if (exact_mode) {
        Rational term = weight;
        for (int e = 0; e < empty_loops; ++e) term *= n;
        for (const auto& loop : loops) {
          ExactMatrix product = ExactMatrix::identity(n);
          for (const auto& [edge, transposed] : loop.factors) {
            const ExactMatrix& c = exact_constants.at(edge_ids[static_cast<std::size_t>(edge)]);
            product = product * (transposed ? c.transpose() : c);
          }
          term *= product.trace();
          if (term == 0) break;
        }
        exact_total += term;
      } else {
        std::complex<double> term = weight.get_d() * std::pow(static_cast<double>(n), empty_loops);
        for (const auto& loop : loops) {
          Eigen::MatrixXcd product = Eigen::MatrixXcd::Identity(n, n);
          for (const auto& [edge, transposed] : loop.factors) {
            const auto& c = expr.constants.at(edge_ids[static_cast<std::size_t>(edge)]);
            product = transposed ? Eigen::MatrixXcd(product * c.transpose())
                                 : Eigen::MatrixXcd(product * c);
          }
          term *= product.trace();
        }
        total += term;
      }
    }
  }
  MomentValue out;
  if (exact_mode) {
    exact_total.canonicalize();
    out.exact = exact_total;
    out.value = exact_total.get_d();
  } else {
    out.value = total;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Asymptotic bound

BoundReport wg_bound_ratio(int p, int k, const std::vector<int>& n_grid, WeingartenCache& cache) {
  if (p < 1 || p > 8) throw BoundsError("wg_bound_ratio: p must lie in 1..8");
  if (k < 1) throw PreconditionError("wg_bound_ratio: k must be positive");
  if (n_grid.empty()) throw PreconditionError("wg_bound_ratio: empty n grid");
  const int n_min = *std::min_element(n_grid.begin(), n_grid.end());
  const double pk = std::pow(static_cast<double>(p), k);
  if (pk > n_min) {
    throw PreconditionError("wg_bound_ratio: hypothesis p^k <= n violated: p^k = " +
                            std::to_string(static_cast<long long>(pk)) +
                            " > n = " + std::to_string(n_min));
  }
  BoundReport report{p, k, n_grid, {}, {}, 0.0, true};
  const auto types = partitions(p);
  for (int n : n_grid) {
    double best = 0.0;
    for (const auto& lambda : types) {
      const CycleType ct{lambda};
      const Rational value = wg(n, ct, cache);
      const double exponent = p + ct.length() * (1.0 - 2.0 / k);
      const double ratio = std::abs(value.get_d()) * std::pow(static_cast<double>(n), exponent);
      report.rows.push_back({n, ct, value, ratio});
      best = std::max(best, ratio);
    }
    report.max_ratio.push_back(best);
  }
  report.envelope = *std::max_element(report.max_ratio.begin(), report.max_ratio.end());
  const std::size_t half = (report.max_ratio.size() + 1) / 2;
  const double lower = *std::max_element(report.max_ratio.begin(), report.max_ratio.begin() + half);
  double upper = 0.0;
  for (std::size_t i = half; i < report.max_ratio.size(); ++i) {
    upper = std::max(upper, report.max_ratio[i]);
  }
  report.bounded = upper <= lower * (1.0 + 1e-12);
  return report;
}

std::map<CycleType, double> wg_log_slopes(int p, const std::vector<int>& n_grid,
                                          WeingartenCache& cache) {
  if (n_grid.size() < 2) throw PreconditionError("wg_log_slopes: need at least two grid points");
  std::map<CycleType, double> out;
  for (const auto& lambda : partitions(p)) {
    const CycleType ct{lambda};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto m = static_cast<double>(n_grid.size());
    for (int n : n_grid) {
      const double x = std::log(static_cast<double>(n));
      const double y = std::log(std::abs(wg(n, ct, cache).get_d()));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    out[ct] = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
  return out;
}

}  // namespace rmps
