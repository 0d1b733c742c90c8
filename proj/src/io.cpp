#include "rmps/io.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rmps/errors.hpp"

namespace rmps {

using nlohmann::json;

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json matrix_to_json(const ComplexMatrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back({m(r, c).real(), m(r, c).imag()});
  return out;
}

ComplexMatrix matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows * cols) {
    throw ParseError("matrix: expected " + std::to_string(rows * cols) + " [re, im] pairs");
  }
  ComplexMatrix m(rows, cols);
  for (Eigen::Index k = 0; k < rows * cols; ++k) {
    const auto& e = j[static_cast<std::size_t>(k)];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw ParseError("matrix: entry " + std::to_string(k) + " is not a [re, im] pair");
    }
    m(k / cols, k % cols) = {e[0].get<double>(), e[1].get<double>()};
  }
  return m;
}

namespace {

json vector_to_json(const RealVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

RealVector vector_from_json(const json& j, Eigen::Index size, const char* what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != size) {
    throw ParseError(std::string(what) + ": expected " + std::to_string(size) + " numbers");
  }
  RealVector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw ParseError(std::string("missing field '") + name + "'");
  }
  return j.at(name);
}

}  // namespace

json params_to_json(const EnsembleParams& p) {
  return {{"d", p.d},       {"D", p.D},       {"n", p.n},
          {"l", p.l},       {"seed", p.seed}, {"omega_dist", to_string(p.omega_dist)}};
}

json sample_to_json(const MpsSample& s) {
  return {{"d", s.d},
          {"D", s.D},
          {"U", matrix_to_json(s.U)},
          {"V", matrix_to_json(s.V)},
          {"W", matrix_to_json(s.W)},
          {"lambda", vector_to_json(s.lambda)},
          {"omega", vector_to_json(s.omega)}};
}

MpsSample sample_from_json(const json& j) {
  try {
    const int d = field(j, "d").get<int>();
    const int D = field(j, "D").get<int>();
    if (d < 1 || D < 1) throw ParseError("d and D must be positive");
    const Eigen::Index dD = static_cast<Eigen::Index>(d) * D;
    return assemble_sample(matrix_from_json(field(j, "U"), dD, dD),
                           matrix_from_json(field(j, "V"), D, D),
                           matrix_from_json(field(j, "W"), D, D),
                           vector_from_json(field(j, "lambda"), D, "lambda"),
                           vector_from_json(field(j, "omega"), D, "omega"), d, D);
  } catch (const json::exception& e) {
    throw ParseError(std::string("sample: ") + e.what());
  }
}

json density_to_json(const DensityMatrix& rho) {
  return {{"dim", rho.dim()}, {"normalized", rho.normalized}, {"entries", matrix_to_json(rho.entries)}};
}

std::string eigenvalue_text(const DensityMatrix& rho) {
  std::string out;
  const Eigen::VectorXd mu = eigenvalues(rho);
  for (Eigen::Index i = 0; i < mu.size(); ++i) out += format_double(mu(i)) + "\n";
  return out;
}

TraceExpression trace_expression_from_json(const json& j) {
  TraceExpression e;
  try {
    e.n = field(j, "n").get<int>();
    if (e.n < 1) throw ParseError("trace expression: n must be positive");
    for (const auto& word : field(j, "words")) {
      auto& tokens = e.words.emplace_back();
      for (const auto& t : word) {
        if (!t.is_object() || t.size() != 1) {
          throw ParseError("trace expression: token must be a one-key object");
        }
        const auto& [key, value] = *t.items().begin();
        if (key == "U") tokens.push_back(TraceToken::u(value.get<int>()));
        else if (key == "Ubar") tokens.push_back(TraceToken::ubar(value.get<int>()));
        else if (key == "Udag") tokens.push_back(TraceToken::udag(value.get<int>()));
        else if (key == "C") tokens.push_back(TraceToken::c(value.get<std::string>()));
        else throw ParseError("trace expression: unknown token '" + key + "'");
      }
    }
    if (j.contains("constants")) {
      for (const auto& [id, m] : j.at("constants").items()) {
        e.constants.emplace(id, matrix_from_json(m, e.n, e.n));
      }
    }
  } catch (const json::exception& ex) {
    throw ParseError(std::string("trace expression: ") + ex.what());
  }
  return e;
}

json trace_expression_to_json(const TraceExpression& e) {
  json words = json::array();
  for (const auto& word : e.words) {
    json tokens = json::array();
    for (const auto& t : word) {
      switch (t.kind) {
        case TraceToken::Kind::U: tokens.push_back({{"U", t.slot}}); break;
        case TraceToken::Kind::UBar: tokens.push_back({{"Ubar", t.slot}}); break;
        case TraceToken::Kind::UDag: tokens.push_back({{"Udag", t.slot}}); break;
        case TraceToken::Kind::Constant: tokens.push_back({{"C", t.constant}}); break;
      }
    }
    words.push_back(std::move(tokens));
  }
  json constants = json::object();
  for (const auto& [id, m] : e.constants) constants[id] = matrix_to_json(m);
  return {{"n", e.n}, {"words", std::move(words)}, {"constants", std::move(constants)}};
}

std::string records_csv(const std::vector<ExperimentRecord>& records) {
  std::string out = std::string(kRecordCsvHeader) + "\n";
  for (const auto& r : records) {
    out += std::to_string(r.params.d) + "," + std::to_string(r.params.D) + "," +
           std::to_string(r.params.n) + "," + std::to_string(r.params.l) + "," +
           std::to_string(r.params.seed) + "," + std::to_string(r.sample_index) + "," +
           format_double(r.trace) + "," + format_double(r.purity_unnorm) + "," +
           format_double(r.purity_norm) + "," + format_double(r.sup_dist) + "," +
           format_double(r.renyi2) + "," + (r.degenerate ? "1" : "0") + "\n";
  }
  return out;
}

json RunConfig::to_json() const {
  return {{"argv", argv},       {"command", command}, {"parameters", parameters},
          {"output", output},   {"cache", cache},     {"workers", workers},
          {"seed", seed}};
}

json make_summary(const RunConfig& config, json body) {
  const auto now = std::chrono::system_clock::now();
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
  json out = {{"version", kVersion},
              {"timestamp", secs},
              {"config", config.to_json()},
              {"seed", config.seed}};
  for (auto& [k, v] : body.items()) out[k] = v;
  return out;
}

json to_json(const Summary& s) {
  return {{"count", s.count}, {"mean", s.mean}, {"median", s.median}, {"stderr", s.stderr_}};
}

json to_json(const MeanTraceResult& r) {
  return {{"trace", to_json(r.trace)},
          {"degenerate", r.degenerate},
          {"expected", r.expected},
          {"checks", {{"within_5_stderr", r.within_band}}},
          {"passed", r.within_band}};
}

json to_json(const ScalingReport& r) {
  json points = json::array();
  for (const auto& p : r.points) {
    points.push_back({{"D", p.D},
                      {"count", p.count},
                      {"degenerate", p.degenerate},
                      {"trace", to_json(p.trace)},
                      {"purity_unnorm", to_json(p.purity_unnorm)},
                      {"purity_norm", to_json(p.purity_norm)},
                      {"sup_dist", to_json(p.sup_dist)},
                      {"renyi2", to_json(p.renyi2)},
                      {"median_deviation", p.median_deviation},
                      {"purity_bound", p.purity_bound},
                      {"margin", p.margin},
                      {"bound_ok", p.bound_ok}});
  }
  return {{"params", params_to_json(r.params)},
          {"D_grid", r.D_grid},
          {"samples_per_D", r.samples_per_D},
          {"points", points},
          {"deviation_slope", r.deviation_slope},
          {"sup_dist_slope", r.sup_dist_slope},
          {"checks",
           {{"bound_ok", r.bound_ok},
            {"margin_decreasing", r.margin_decreasing},
            {"deviation_decreasing", r.deviation_decreasing},
            {"final_deviation_ok", r.final_deviation_ok},
            {"slope_negative", r.slope_negative},
            {"sup_dist_bound_ok", r.sup_dist_bound_ok},
            {"sup_dist_decreasing", r.sup_dist_decreasing},
            {"half_slope_ok", r.half_slope_ok},
            {"purity_range_ok", r.purity_range_ok},
            {"degenerate_rate_ok", r.degenerate_rate_ok}}},
          {"passed", r.passed()}};
}

json to_json(const AveragesReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"quantity", row.quantity},
                    {"estimate", row.estimate},
                    {"stderr", row.stderr_},
                    {"oracle", row.oracle},
                    {"paper_relation", row.paper_relation},
                    {"paper_value", row.paper_value},
                    {"oracle_ok", row.oracle_ok},
                    {"paper_ok", row.paper_ok},
                    {"paper_discrepancy", row.paper_discrepancy}});
  }
  return {{"D", r.D},
          {"N", r.N},
          {"omega_dist", to_string(r.omega_dist)},
          {"omega_square_mean", r.omega_square_mean},
          {"rows", rows},
          {"passed", r.passed}};
}

json to_json(const LipschitzReport& r) {
  return {{"params", params_to_json(r.params)},
          {"pairs", r.pairs.size()},
          {"skipped", r.skipped},
          {"max_ratio_f", r.max_ratio_f},
          {"max_ratio_g", r.max_ratio_g},
          {"bound", r.bound},
          {"passed", r.passed}};
}

json to_json(const TailReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"D", row.D},
                    {"r", row.r},
                    {"tail_trace", row.tail_trace},
                    {"tail_purity", row.tail_purity}});
  }
  return {{"params", params_to_json(r.params)},
          {"D_grid", r.D_grid},
          {"r_grid", r.r_grid},
          {"samples_per_D", r.samples_per_D},
          {"rows", rows},
          {"checks", {{"monotone_in_r", r.monotone_in_r}, {"decays_in_D", r.decays_in_D}}},
          {"passed", r.monotone_in_r}};
}

json to_json(const BoundReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"n", row.n},
                    {"cycle_type", row.cycle_type.to_string()},
                    {"wg", to_string(row.wg_value)},
                    {"ratio", row.ratio}});
  }
  return {{"p", r.p},           {"k", r.k},
          {"n_grid", r.n_grid}, {"rows", rows},
          {"max_ratio", r.max_ratio},
          {"envelope", r.envelope},
          {"bounded", r.bounded}};
}

json to_json(const LemmaGammaReport& r) {
  json ce = json::array();
  for (const auto& c : r.counterexamples) {
    ce.push_back({{"alpha", c.alpha.to_string()}, {"beta", c.beta.to_string()}, {"reason", c.reason}});
  }
  return {{"n", r.n},
          {"exhaustive", r.exhaustive},
          {"pairs_checked", r.pairs_checked},
          {"parity_ok", r.parity_ok},
          {"injective_ok", r.injective_ok},
          {"counterexamples", ce},
          {"passed", r.parity_ok && r.injective_ok}};
}

std::string lipschitz_csv(const LipschitzReport& r) {
  std::string out = "pair,kind,scale,distance,f_ratio,g_ratio,skipped\n";
  for (const auto& p : r.pairs) {
    out += std::to_string(p.index) + "," + to_string(p.kind) + "," + format_double(p.scale) + "," +
           format_double(p.distance) + "," + format_double(p.f_ratio) + "," +
           format_double(p.g_ratio) + "," + (p.skipped ? "1" : "0") + "\n";
  }
  return out;
}

std::string tails_csv(const TailReport& r) {
  std::string out = "D,r,tail_trace,tail_purity\n";
  for (const auto& row : r.rows) {
    out += std::to_string(row.D) + "," + format_double(row.r) + "," +
           format_double(row.tail_trace) + "," + format_double(row.tail_purity) + "\n";
  }
  return out;
}

std::string averages_csv(const AveragesReport& r) {
  std::string out = "quantity,estimate,stderr,oracle,paper_relation,paper_value,oracle_ok,paper_ok,discrepancy\n";
  for (const auto& row : r.rows) {
    out += row.quantity + "," + format_double(row.estimate) + "," + format_double(row.stderr_) + "," +
           format_double(row.oracle) + "," + row.paper_relation + "," +
           format_double(row.paper_value) + "," + (row.oracle_ok ? "1" : "0") + "," +
           (row.paper_ok ? "1" : "0") + "," + (row.paper_discrepancy ? "1" : "0") + "\n";
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void persist_records(const std::vector<ExperimentRecord>& records, const std::filesystem::path& path) {
  write_text(path, records_csv(records));
}

std::filesystem::path resolve_cache_path(const std::string& override_path) {
  if (!override_path.empty()) return override_path;
  if (const char* dir = std::getenv(kCacheDirEnv); dir && *dir) {
    return std::filesystem::path(dir) / kCacheFileName;
  }
  return {};
}

WeingartenCache load_cache(const std::filesystem::path& path) {
  WeingartenCache cache;
  cache.load(path);
  return cache;
}

}  // namespace rmps
