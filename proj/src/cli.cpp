#include "rmps/cli.hpp"

#include <algorithm>
#include <memory>
#include <ostream>
#include <thread>

#include <CLI11.hpp>

#include "rmps/errors.hpp"
#include "rmps/io.hpp"
#include "rmps/oracle.hpp"

namespace rmps {
namespace {

using nlohmann::json;

int default_workers() {
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

// Options shared by the sampling subcommands. Each subcommand owns its copy.
struct EnsembleOptions {
  int d = 2;
  std::vector<int> D{32};
  int n = 12;
  int l = 2;
  std::size_t samples = 500;
  std::uint64_t seed = 0;
  std::string omega_dist = "dirichlet";
  int workers = default_workers();
  std::string out;
  std::string summary;

  EnsembleParams params(int bond) const {
    EnsembleParams p;
    p.d = d;
    p.D = bond;
    p.n = n;
    p.l = l;
    p.seed = seed;
    p.omega_dist = parse_omega_dist(omega_dist);
    p.validate();
    return p;
  }

  int single_D() const {
    if (D.size() != 1) throw PreconditionError("--D takes a single value for this command");
    return D.front();
  }

  json to_json() const {
    return {{"d", d},       {"D", D},           {"n", n},
            {"l", l},       {"samples", samples}, {"seed", seed},
            {"omega_dist", omega_dist}};
  }
};

void add_ensemble_options(CLI::App* app, EnsembleOptions& o, bool with_window = true) {
  app->add_option("--d", o.d, "physical dimension")->capture_default_str();
  app->add_option("--D", o.D, "bond dimension(s), comma separated")
      ->delimiter(',')
      ->capture_default_str();
  app->add_option("--n", o.n, "bulk sites")->capture_default_str();
  if (with_window) app->add_option("--l", o.l, "window sites")->capture_default_str();
  app->add_option("--samples,-N", o.samples, "samples per bond dimension")->capture_default_str();
  app->add_option("--seed", o.seed, "master seed")->capture_default_str();
  app->add_option("--omega-dist", o.omega_dist, "right boundary spectrum distribution")
      ->check(CLI::IsMember({"dirichlet", "uniform-normalized"}))
      ->capture_default_str();
  app->add_option("--workers", o.workers, "worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--out", o.out, "CSV output path");
  app->add_option("--summary", o.summary, "summary JSON path (default: <out>.summary.json)");
}

struct Context {
  const std::vector<std::string>& argv;
  std::ostream& out;
  std::ostream& err;
};

RunConfig make_config(const Context& ctx, std::string command, json parameters,
                      const std::string& output, const std::string& cache, int workers,
                      std::uint64_t seed) {
  RunConfig config;
  config.argv = ctx.argv;
  config.command = std::move(command);
  config.parameters = std::move(parameters);
  config.output = output;
  config.cache = cache;
  config.workers = workers;
  config.seed = seed;
  return config;
}

// Summary goes to --summary, else next to --out, else nowhere.
void emit_summary(const RunConfig& config, const std::string& summary_path, json body) {
  std::string path = summary_path;
  if (path.empty() && !config.output.empty()) path = config.output + ".summary.json";
  if (path.empty()) return;
  write_text(path, make_summary(config, std::move(body)).dump(2) + "\n");
}

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

// Cache plumbing for the Weingarten commands.
struct CacheSession {
  std::filesystem::path path;
  WeingartenCache cache;

  explicit CacheSession(const std::string& flag) : path(resolve_cache_path(flag)) {
    if (!path.empty()) cache = load_cache(path);
  }
  void persist() const {
    if (!path.empty()) cache.save(path);
  }
};

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const Context ctx{args, out, err};
  CLI::App app{"Random matrix product states: Weingarten calculus and maximum-entropy checks",
               args.empty() ? "rmps" : args.front()};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string cache_flag;
  app.add_option("--cache", cache_flag,
                 std::string("Weingarten cache file (default: $") + kCacheDirEnv + "/" +
                     kCacheFileName + ")");

  // wg
  int wg_n = 0;
  std::string wg_sigma;
  int wg_p = 0;
  auto* wg_cmd = app.add_subcommand("wg", "exact Weingarten value Wg(n, sigma)");
  wg_cmd->add_option("--n", wg_n, "unitary dimension")->required();
  wg_cmd->add_option("--sigma", wg_sigma, "permutation in cycle notation, e.g. \"(1 2)(3)\"")
      ->required();
  wg_cmd->add_option("--p", wg_p, "degree of sigma (default: largest element)");

  // wg-bound
  int bound_p = 3;
  int bound_k = 2;
  std::vector<int> bound_grid{9, 16, 25, 36, 49, 64};
  std::string bound_summary;
  auto* bound_cmd = app.add_subcommand("wg-bound", "normalized Weingarten magnitudes over an n grid");
  bound_cmd->add_option("--p", bound_p)->capture_default_str();
  bound_cmd->add_option("--k", bound_k)->capture_default_str();
  bound_cmd->add_option("--n-grid", bound_grid)->delimiter(',')->capture_default_str();
  bound_cmd->add_option("--summary", bound_summary, "summary JSON path");

  // moment
  std::string moment_expr;
  int moment_n = 0;
  std::vector<int> mi, mj, mib, mjb;
  auto* moment_cmd = app.add_subcommand(
      "moment", "exact Haar moment of a trace expression (--expr) or a monomial (--i/--j/--ibar/--jbar)");
  moment_cmd->add_option("--expr", moment_expr, "trace expression JSON file");
  moment_cmd->add_option("--n", moment_n, "unitary dimension for monomials");
  moment_cmd->add_option("--i", mi)->delimiter(',');
  moment_cmd->add_option("--j", mj)->delimiter(',');
  moment_cmd->add_option("--ibar", mib)->delimiter(',');
  moment_cmd->add_option("--jbar", mjb)->delimiter(',');

  // sample
  EnsembleOptions sample_opts;
  std::uint64_t sample_index = 0;
  std::string dump_state;
  auto* sample_cmd = app.add_subcommand("sample", "draw one MPS sample and write it as JSON");
  add_ensemble_options(sample_cmd, sample_opts);
  sample_cmd->add_option("--index", sample_index, "sample index within the seeded run")
      ->capture_default_str();
  sample_cmd->add_option("--dump-state", dump_state,
                         "write the window state JSON here and its eigenvalues to <path>.eigenvalues.txt");

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "Monte Carlo experiments");
  exp_cmd->require_subcommand(1);

  EnsembleOptions mean_opts;
  bool resample_u = false;
  bool resample_omega = false;
  std::uint64_t fixed_stream = MeanTraceOptions{}.fixed_stream;
  auto* mean_cmd = exp_cmd->add_subcommand("mean-trace", "mean of tr rho_l with U and Omega held fixed");
  add_ensemble_options(mean_cmd, mean_opts);
  mean_cmd->add_flag("--resample-u", resample_u, "draw a fresh U for every sample");
  mean_cmd->add_flag("--resample-omega", resample_omega, "draw a fresh Omega for every sample");
  mean_cmd->add_option("--fixed-stream", fixed_stream, "stream id of the fixed U / Omega draw")
      ->capture_default_str();

  EnsembleOptions purity_opts;
  purity_opts.n = 16;
  purity_opts.D = {16, 32, 64, 128};
  purity_opts.samples = 100;
  double final_tol = ScalingOptions{}.final_deviation_tolerance;
  auto* purity_cmd = exp_cmd->add_subcommand("purity", "purity and sup-distance scaling over a D grid");
  add_ensemble_options(purity_cmd, purity_opts);
  purity_cmd->add_option("--final-tolerance", final_tol,
                         "bound on the median deviation at the largest D")
      ->capture_default_str();

  EnsembleOptions avg_opts;
  avg_opts.samples = 10000;
  auto* avg_cmd = exp_cmd->add_subcommand("averages", "boundary averages against closed forms");
  add_ensemble_options(avg_cmd, avg_opts, false);

  EnsembleOptions lip_opts;
  lip_opts.D = {16};
  lip_opts.n = 8;
  lip_opts.samples = 10000;
  std::vector<double> lip_scales{1e-3, 1e-2, 1e-1};
  auto* lip_cmd = exp_cmd->add_subcommand("lipschitz", "Lipschitz ratios over structured perturbation pairs");
  add_ensemble_options(lip_cmd, lip_opts);
  lip_cmd->add_option("--pairs", lip_opts.samples, "number of pairs")->capture_default_str();
  lip_cmd->add_option("--scales", lip_scales)->delimiter(',')->capture_default_str();

  EnsembleOptions tail_opts;
  tail_opts.n = 16;
  tail_opts.D = {16, 64};
  tail_opts.samples = 1000;
  std::vector<double> r_grid = default_r_grid();
  auto* tail_cmd = exp_cmd->add_subcommand("tails", "empirical concentration tails");
  add_ensemble_options(tail_cmd, tail_opts);
  tail_cmd->add_option("--r-grid", r_grid, "radii")->delimiter(',');

  // check
  auto* check_cmd = app.add_subcommand("check", "exact and oracle verifications");
  check_cmd->require_subcommand(1);

  int gamma_n = 1;
  std::uint64_t gamma_samples = kLemmaGammaDefaultSamples;
  std::uint64_t gamma_seed = 0;
  auto* gamma_cmd = check_cmd->add_subcommand(
      "lemma-gamma",
      "parity and injectivity of the boundary-wiring map on S_{2n+4}. Enumeration is exhaustive "
      "when (2n)! * (2n+4)! < 10^7 (n = 1, 2); otherwise --samples seeded random pairs. n <= 8.");
  gamma_cmd->add_option("--n", gamma_n)->capture_default_str();
  gamma_cmd->add_option("--samples", gamma_samples, "random pairs beyond the exhaustive limit")
      ->capture_default_str();
  gamma_cmd->add_option("--seed", gamma_seed)->capture_default_str();

  int char_p = 6;
  int burnside_p = 10;
  auto* char_cmd = check_cmd->add_subcommand(
      "characters", "character orthogonality over all of S_q for q <= p, and sum dim^2 = q! for q <= burnside");
  char_cmd->add_option("--p", char_p, "orthogonality up to this degree (<= 8)")->capture_default_str();
  char_cmd->add_option("--burnside", burnside_p, "dimension identity up to this degree (<= 14)")
      ->capture_default_str();

  std::size_t oracle_instances = 50;
  std::uint64_t oracle_seed = 0;
  auto* oracle_cmd = check_cmd->add_subcommand(
      "oracle", "contraction engine against the explicit full-state construction");
  oracle_cmd->add_option("--instances", oracle_instances)->capture_default_str();
  oracle_cmd->add_option("--seed", oracle_seed)->capture_default_str();

  std::vector<const char*> cargv;
  cargv.reserve(args.size() + 1);
  if (args.empty()) cargv.push_back("rmps");
  for (const auto& a : args) cargv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const CLI::App* failing = &app;
    for (auto* sub : app.get_subcommands()) {
      failing = sub;
      for (auto* inner : sub->get_subcommands()) failing = inner;
    }
    err << failing->help();
    return kExitUsage;
  }

  try {
    if (wg_cmd->parsed()) {
      CacheSession session(cache_flag);
      const Permutation sigma =
          Permutation::parse(wg_sigma, wg_p > 0 ? std::optional<int>(wg_p) : std::nullopt);
      out << to_string(wg(wg_n, sigma, session.cache)) << "\n";
      session.persist();
      return kExitOk;
    }

    if (bound_cmd->parsed()) {
      CacheSession session(cache_flag);
      const BoundReport report = wg_bound_ratio(bound_p, bound_k, bound_grid, session.cache);
      const auto slopes = wg_log_slopes(bound_p, bound_grid, session.cache);
      session.persist();
      for (std::size_t g = 0; g < report.n_grid.size(); ++g) {
        out << "n=" << report.n_grid[g] << " max_ratio=" << format_double(report.max_ratio[g]) << "\n";
      }
      json slope_json = json::object();
      for (const auto& [ct, slope] : slopes) {
        out << "slope[" << ct.to_string() << "]=" << format_double(slope)
            << " expected=" << -(bound_p + ct.length()) << "\n";
        slope_json[ct.to_string()] = slope;
      }
      out << "bounded: " << verdict(report.bounded) << "\n";
      if (!bound_summary.empty()) {
        json body = to_json(report);
        body["log_slopes"] = slope_json;
        const RunConfig config = make_config(
            ctx, "wg-bound", {{"p", bound_p}, {"k", bound_k}, {"n_grid", bound_grid}}, "",
            session.path.string(), 1, 0);
        emit_summary(config, bound_summary, std::move(body));
      }
      return report.bounded ? kExitOk : kExitCheckFailed;
    }

    if (moment_cmd->parsed()) {
      CacheSession session(cache_flag);
      if (!moment_expr.empty()) {
        const TraceExpression expr = trace_expression_from_json(json::parse(read_text(moment_expr)));
        const MomentValue value = evaluate_trace_expression(expr, session.cache);
        session.persist();
        if (value.exact) {
          out << to_string(*value.exact) << "\n";
        } else {
          out << format_double(value.value.real()) << " " << format_double(value.value.imag())
              << "\n";
        }
        return kExitOk;
      }
      if (moment_n <= 0) throw PreconditionError("moment: give --expr, or --n with --i/--j/--ibar/--jbar");
      out << to_string(integrate_monomial(moment_n, mi, mj, mib, mjb)) << "\n";
      return kExitOk;
    }

    if (sample_cmd->parsed()) {
      const EnsembleParams params = sample_opts.params(sample_opts.single_D());
      const MpsSample sample = sample_mps(params, sample_index);
      const std::string doc = sample_to_json(sample).dump() + "\n";
      if (sample_opts.out.empty()) {
        out << doc;
      } else {
        write_text(sample_opts.out, doc);
      }
      if (!dump_state.empty()) {
        const DensityMatrix rho = reduced_density(sample, params);
        write_text(dump_state, density_to_json(rho).dump() + "\n");
        write_text(dump_state + ".eigenvalues.txt", eigenvalue_text(rho));
      }
      return kExitOk;
    }

    if (mean_cmd->parsed()) {
      const EnsembleParams params = mean_opts.params(mean_opts.single_D());
      MeanTraceOptions options;
      options.fixed_u = !resample_u;
      options.fixed_omega = !resample_omega;
      options.fixed_stream = fixed_stream;
      options.workers = mean_opts.workers;
      const MeanTraceResult result = mean_trace_experiment(params, mean_opts.samples, options);
      if (!mean_opts.out.empty()) persist_records(result.records, mean_opts.out);
      json parameters = mean_opts.to_json();
      parameters["fixed_u"] = options.fixed_u;
      parameters["fixed_omega"] = options.fixed_omega;
      parameters["fixed_stream"] = options.fixed_stream;
      emit_summary(make_config(ctx, "experiment mean-trace", parameters, mean_opts.out, "",
                               mean_opts.workers, mean_opts.seed),
                   mean_opts.summary, to_json(result));
      out << "mean tr rho = " << format_double(result.trace.mean) << " +- "
          << format_double(result.trace.stderr_) << " (expected 0.5, " << result.degenerate
          << " degenerate)\n"
          << "within 5 stderr: " << verdict(result.within_band) << "\n";
      return result.within_band ? kExitOk : kExitCheckFailed;
    }

    if (purity_cmd->parsed()) {
      const EnsembleParams params = purity_opts.params(purity_opts.D.front());
      const ScalingReport report = purity_scaling_experiment(
          params, purity_opts.D, purity_opts.samples, ScalingOptions{final_tol, purity_opts.workers});
      if (!purity_opts.out.empty()) persist_records(report.records, purity_opts.out);
      json parameters = purity_opts.to_json();
      parameters["final_tolerance"] = final_tol;
      emit_summary(make_config(ctx, "experiment purity", parameters, purity_opts.out, "",
                               purity_opts.workers, purity_opts.seed),
                   purity_opts.summary, to_json(report));
      for (const auto& p : report.points) {
        out << "D=" << p.D << " mean_purity=" << format_double(p.purity_unnorm.mean)
            << " median_dev=" << format_double(p.median_deviation)
            << " median_sup=" << format_double(p.sup_dist.median)
            << " bound=" << verdict(p.bound_ok) << "\n";
      }
      out << "deviation slope " << format_double(report.deviation_slope) << ", sup slope "
          << format_double(report.sup_dist_slope) << "\n"
          << "scaling checks: " << verdict(report.passed()) << "\n";
      return report.passed() ? kExitOk : kExitCheckFailed;
    }

    if (avg_cmd->parsed()) {
      const int D = avg_opts.single_D();
      const AveragesReport report = boundary_averages_experiment(
          D, avg_opts.samples, avg_opts.seed, parse_omega_dist(avg_opts.omega_dist), avg_opts.workers);
      if (!avg_opts.out.empty()) write_text(avg_opts.out, averages_csv(report));
      emit_summary(make_config(ctx, "experiment averages", avg_opts.to_json(), avg_opts.out, "",
                               avg_opts.workers, avg_opts.seed),
                   avg_opts.summary, to_json(report));
      for (const auto& row : report.rows) {
        out << row.quantity << ": " << format_double(row.estimate) << " +- "
            << format_double(row.stderr_) << " oracle " << format_double(row.oracle) << " "
            << verdict(row.oracle_ok);
        if (row.paper_discrepancy) out << " (stated " << format_double(row.paper_value) << " differs)";
        out << "\n";
      }
      out << "averages: " << verdict(report.passed) << "\n";
      return report.passed ? kExitOk : kExitCheckFailed;
    }

    if (lip_cmd->parsed()) {
      const EnsembleParams params = lip_opts.params(lip_opts.single_D());
      const LipschitzReport report = lipschitz_probe(params, lip_opts.samples, lip_scales, lip_opts.workers);
      if (!lip_opts.out.empty()) write_text(lip_opts.out, lipschitz_csv(report));
      json parameters = lip_opts.to_json();
      parameters["scales"] = lip_scales;
      emit_summary(make_config(ctx, "experiment lipschitz", parameters, lip_opts.out, "",
                               lip_opts.workers, lip_opts.seed),
                   lip_opts.summary, to_json(report));
      out << "max ratio f " << format_double(report.max_ratio_f) << ", g "
          << format_double(report.max_ratio_g) << ", bound " << format_double(report.bound) << " ("
          << report.skipped << " skipped)\n"
          << "lipschitz: " << verdict(report.passed) << "\n";
      return report.passed ? kExitOk : kExitCheckFailed;
    }

    if (tail_cmd->parsed()) {
      const EnsembleParams params = tail_opts.params(tail_opts.D.front());
      const TailReport report = concentration_tail_experiment(params, tail_opts.D, tail_opts.samples,
                                                              r_grid, tail_opts.workers);
      if (!tail_opts.out.empty()) {
        persist_records(report.records, tail_opts.out);
        write_text(tail_opts.out + ".tails.csv", tails_csv(report));
      }
      json parameters = tail_opts.to_json();
      parameters["r_grid"] = r_grid;
      emit_summary(make_config(ctx, "experiment tails", parameters, tail_opts.out, "",
                               tail_opts.workers, tail_opts.seed),
                   tail_opts.summary, to_json(report));
      out << tails_csv(report) << "monotone in r: " << verdict(report.monotone_in_r)
          << "\ndecays in D: " << verdict(report.decays_in_D) << " (reported)\n";
      return report.monotone_in_r ? kExitOk : kExitCheckFailed;
    }

    if (gamma_cmd->parsed()) {
      const LemmaGammaReport report = lemma_gamma_check(gamma_n, gamma_samples, gamma_seed);
      out << "n=" << report.n << (report.exhaustive ? " exhaustive" : " sampled") << " pairs="
          << report.pairs_checked << " parity " << verdict(report.parity_ok) << " injectivity "
          << verdict(report.injective_ok) << "\n";
      for (const auto& c : report.counterexamples) {
        out << "  alpha=" << c.alpha.to_string() << " beta=" << c.beta.to_string() << ": "
            << c.reason << "\n";
      }
      return report.parity_ok && report.injective_ok ? kExitOk : kExitCheckFailed;
    }

    if (char_cmd->parsed()) {
      bool ok = true;
      for (int q = 1; q <= char_p; ++q) {
        const bool good = check_character_orthogonality(q);
        out << "orthogonality S_" << q << ": " << verdict(good) << "\n";
        ok = ok && good;
      }
      for (int q = 1; q <= burnside_p; ++q) {
        const bool good = check_burnside(q);
        out << "sum dim^2 = " << q << "!: " << verdict(good) << "\n";
        ok = ok && good;
      }
      return ok ? kExitOk : kExitCheckFailed;
    }

    if (oracle_cmd->parsed()) {
      const auto report = oracle::engine_equivalence(oracle_instances, oracle_seed);
      out << report.instances << " instances, " << report.windows << " windows, max error "
          << format_double(report.max_error) << ": " << verdict(report.passed) << "\n";
      return report.passed ? kExitOk : kExitCheckFailed;
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const DegenerateSample& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace rmps
