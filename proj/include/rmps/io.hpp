#pragma once

// File formats: record CSV, summary JSON, MPS sample and density-matrix
// snapshots, trace-expression documents and the Weingarten cache location.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rmps/ensembles.hpp"
#include "rmps/experiments.hpp"
#include "rmps/mps_engine.hpp"
#include "rmps/weingarten.hpp"

namespace rmps {

inline constexpr const char* kVersion = "0.3.0";
inline constexpr const char* kCacheDirEnv = "RMPS_CACHE_DIR";
inline constexpr const char* kCacheFileName = "wg_cache.txt";

inline constexpr const char* kRecordCsvHeader =
    "d,D,n,l,seed,sample,trace,purity_unnorm,purity_norm,sup_dist,renyi2,degenerate";

/// Shortest round-trip decimal form of a double ("%.17g").
std::string format_double(double x);

/// Row-major flat list of [re, im] pairs.
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j, Eigen::Index rows, Eigen::Index cols);

nlohmann::json params_to_json(const EnsembleParams& p);

nlohmann::json sample_to_json(const MpsSample& s);
/// Rebuilds a sample (A, L, R rederived from U, V, W, Lambda, Omega).
MpsSample sample_from_json(const nlohmann::json& j);

nlohmann::json density_to_json(const DensityMatrix& rho);
/// One eigenvalue per line, ascending.
std::string eigenvalue_text(const DensityMatrix& rho);

/// {"n": int, "words": [[token,...],...], "constants": {id: [[re,im],...]}} with tokens
/// {"U": k}, {"Ubar": k}, {"Udag": k} or {"C": id}.
TraceExpression trace_expression_from_json(const nlohmann::json& j);
nlohmann::json trace_expression_to_json(const TraceExpression& e);

std::string records_csv(const std::vector<ExperimentRecord>& records);

/// Every command line run is described by one of these; it is embedded in
/// the summary the run writes.
struct RunConfig {
  std::vector<std::string> argv;
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  std::string output;
  std::string cache;
  int workers = 1;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
};

/// {version, timestamp, config, seed, ...body}.
nlohmann::json make_summary(const RunConfig& config, nlohmann::json body);

nlohmann::json to_json(const Summary& s);
nlohmann::json to_json(const MeanTraceResult& r);
nlohmann::json to_json(const ScalingReport& r);
nlohmann::json to_json(const AveragesReport& r);
nlohmann::json to_json(const LipschitzReport& r);
nlohmann::json to_json(const TailReport& r);
nlohmann::json to_json(const BoundReport& r);
nlohmann::json to_json(const LemmaGammaReport& r);

std::string lipschitz_csv(const LipschitzReport& r);
std::string tails_csv(const TailReport& r);
std::string averages_csv(const AveragesReport& r);

/// Writes `content` to `path`, creating parent directories. Throws IoError with the path.
void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);
void persist_records(const std::vector<ExperimentRecord>& records, const std::filesystem::path& path);

/// `override` if non-empty, else $RMPS_CACHE_DIR/wg_cache.txt, else empty (no disk cache).
std::filesystem::path resolve_cache_path(const std::string& override_path);
/// Loads the cache at `path` into a fresh table.
WeingartenCache load_cache(const std::filesystem::path& path);

}  // namespace rmps
