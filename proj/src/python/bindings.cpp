#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <iostream>
#include <sstream>

#include "rmps/cli.hpp"
#include "rmps/errors.hpp"
#include "rmps/io.hpp"
#include "rmps/oracle.hpp"

namespace py = pybind11;
using namespace rmps;

namespace {

// Rationals cross the boundary as (numerator, denominator) decimal strings.
std::pair<std::string, std::string> split(const Rational& q) {
  return {q.get_num().get_str(), q.get_den().get_str()};
}

EnsembleParams make_params(int d, int D, int n, int l, std::uint64_t seed, const std::string& omega) {
  EnsembleParams p;
  p.d = d;
  p.D = D;
  p.n = n;
  p.l = l;
  p.seed = seed;
  p.omega_dist = parse_omega_dist(omega);
  p.validate();
  return p;
}

}  // namespace

PYBIND11_MODULE(_rmps, m) {
  m.doc() = "Random matrix product states: exact Weingarten calculus and Monte Carlo checks";
  m.attr("__version__") = kVersion;

  py::register_exception<Error>(m, "RmpsError", PyExc_ValueError);

  m.def(
      "wg",
      [](int n, const std::string& sigma, std::optional<int> degree) {
        return split(wg(n, Permutation::parse(sigma, degree)));
      },
      py::arg("n"), py::arg("sigma"), py::arg("degree") = std::nullopt);

  m.def(
      "integrate_monomial",
      [](int n, const std::vector<int>& i, const std::vector<int>& j, const std::vector<int>& ib,
         const std::vector<int>& jb) { return split(integrate_monomial(n, i, j, ib, jb)); },
      py::arg("n"), py::arg("i"), py::arg("j"), py::arg("i_bar"), py::arg("j_bar"));

  m.def(
      "evaluate_trace_expression",
      [](const std::string& doc) {
        const MomentValue v = evaluate_trace_expression(trace_expression_from_json(nlohmann::json::parse(doc)));
        py::object exact = py::none();
        if (v.exact) exact = py::cast(split(*v.exact));
        return py::make_tuple(exact, v.value);
      },
      py::arg("expression_json"));

  m.def("character", [](const std::string& lambda, const std::string& mu) {
    return character(Partition::parse(lambda), CycleType{Partition::parse(mu)}).get_str();
  });

  m.def(
      "lemma_gamma_check",
      [](int n, std::uint64_t samples, std::uint64_t seed) {
        return to_json(lemma_gamma_check(n, samples, seed)).dump();
      },
      py::arg("n"), py::arg("samples") = kLemmaGammaDefaultSamples, py::arg("seed") = 0);

  m.def(
      "haar_unitary",
      [](int dim, std::uint64_t seed, std::uint64_t stream) {
        RandomStream rng(seed, stream);
        return haar_unitary(dim, rng);
      },
      py::arg("dim"), py::arg("seed") = 0, py::arg("stream") = 0);

  m.def(
      "sample_mps",
      [](int d, int D, int n, int l, std::uint64_t seed, std::uint64_t index, const std::string& omega) {
        return sample_to_json(sample_mps(make_params(d, D, n, l, seed, omega), index)).dump();
      },
      py::arg("d"), py::arg("D"), py::arg("n"), py::arg("l"), py::arg("seed") = 0,
      py::arg("index") = 0, py::arg("omega_dist") = "dirichlet");

  m.def(
      "reduced_density",
      [](const std::string& sample_json, int t_left, int l, int t_right) {
        return reduced_density(sample_from_json(nlohmann::json::parse(sample_json)), t_left, l, t_right)
            .entries;
      },
      py::arg("sample_json"), py::arg("t_left"), py::arg("l"), py::arg("t_right"));

  m.def(
      "full_state",
      [](const std::string& sample_json, int n) {
        return oracle::full_state(sample_from_json(nlohmann::json::parse(sample_json)), n);
      },
      py::arg("sample_json"), py::arg("n"));

  m.def(
      "run_records",
      [](int d, int D, int n, int l, std::uint64_t seed, std::size_t N, const std::string& omega,
         int workers) {
        const auto params = make_params(d, D, n, l, seed, omega);
        py::gil_scoped_release release;
        return records_csv(run_records(params, N, workers));
      },
      py::arg("d"), py::arg("D"), py::arg("n"), py::arg("l"), py::arg("seed"), py::arg("N"),
      py::arg("omega_dist") = "dirichlet", py::arg("workers") = 1);

  m.def(
      "purity_scaling",
      [](int d, std::vector<int> D_grid, int n, int l, std::uint64_t seed, std::size_t N, int workers) {
        if (D_grid.empty()) throw PreconditionError("purity_scaling: empty D grid");
        const auto params = make_params(d, D_grid.front(), n, l, seed, "dirichlet");
        py::gil_scoped_release release;
        return to_json(purity_scaling_experiment(params, D_grid, N, ScalingOptions{0.05, workers})).dump();
      },
      py::arg("d"), py::arg("D_grid"), py::arg("n"), py::arg("l"), py::arg("seed"), py::arg("N"),
      py::arg("workers") = 1);

  m.def(
      "boundary_averages",
      [](int D, std::size_t N, std::uint64_t seed, const std::string& omega, int workers) {
        const OmegaDist dist = parse_omega_dist(omega);
        py::gil_scoped_release release;
        return to_json(boundary_averages_experiment(D, N, seed, dist, workers)).dump();
      },
      py::arg("D"), py::arg("N"), py::arg("seed") = 0, py::arg("omega_dist") = "dirichlet",
      py::arg("workers") = 1);

  m.def(
      "cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "rmps");
        std::ostringstream out, err;
        const int code = cli_dispatch(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
