"""Python access to the rmps core: exact Weingarten values, Haar moments,
random MPS samples and the Monte Carlo experiments."""

import json
from fractions import Fraction

import numpy as np

from . import _rmps
from ._rmps import RmpsError, __version__, character, full_state, haar_unitary, reduced_density

__all__ = [
    "RmpsError",
    "__version__",
    "boundary_averages",
    "character",
    "cli",
    "evaluate_trace_expression",
    "full_state",
    "haar_unitary",
    "integrate_monomial",
    "lemma_gamma_check",
    "purity_scaling",
    "reduced_density",
    "run_records",
    "sample_mps",
    "wg",
]


def _fraction(pair):
    num, den = pair
    return Fraction(int(num), int(den))


def wg(n, sigma, degree=None):
    """Exact Wg(n, sigma) for sigma in cycle notation, e.g. "(1 2)"."""
    return _fraction(_rmps.wg(n, sigma, degree))


def integrate_monomial(n, i, j, i_bar, j_bar):
    return _fraction(_rmps.integrate_monomial(n, list(i), list(j), list(i_bar), list(j_bar)))


def evaluate_trace_expression(expression):
    """Haar average of a product of traces. `expression` is a dict or JSON string.

    Returns a Fraction when every constant is real, otherwise a complex number."""
    doc = expression if isinstance(expression, str) else json.dumps(expression)
    exact, value = _rmps.evaluate_trace_expression(doc)
    return _fraction(exact) if exact is not None else complex(value)


def lemma_gamma_check(n, samples=10000, seed=0):
    return json.loads(_rmps.lemma_gamma_check(n, samples, seed))


def sample_mps(d, D, n, l, seed=0, index=0, omega_dist="dirichlet"):
    """One sample as its JSON document (string), suitable for reduced_density."""
    return _rmps.sample_mps(d, D, n, l, seed, index, omega_dist)


def run_records(d, D, n, l, seed, N, omega_dist="dirichlet", workers=1):
    """Per-sample observables; returns the CSV text and a structured numpy array."""
    text = _rmps.run_records(d, D, n, l, seed, N, omega_dist, workers)
    lines = text.strip().split("\n")
    names = lines[0].split(",")
    rows = [tuple(float(x) for x in line.split(",")) for line in lines[1:]]
    return text, np.array(rows, dtype=[(name, "f8") for name in names])


def purity_scaling(d, D_grid, n, l, seed, N, workers=1):
    return json.loads(_rmps.purity_scaling(d, list(D_grid), n, l, seed, N, workers))


def boundary_averages(D, N, seed=0, omega_dist="dirichlet", workers=1):
    return json.loads(_rmps.boundary_averages(D, N, seed, omega_dist, workers))


def cli(args):
    """Runs the command line tool in-process; returns (exit_code, stdout, stderr)."""
    return _rmps.cli([str(a) for a in args])
