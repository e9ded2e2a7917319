"""Python front end for the qsys C++ core.

JSON-producing entry points are decoded into plain dicts here.
"""

import json as _json

from ._qsys import (
    QsysError,
    count,
    dirichlet,
    eval_S,
    find_solution,
    fourier_identity,
    generate_set,
    modulus,
    moment_V,
    quadratic_recurrence,
    set_threads,
    validate,
)
from . import _qsys

__all__ = [
    "QsysError",
    "count",
    "dirichlet",
    "energy",
    "eval_S",
    "find_solution",
    "fourier_identity",
    "generate_set",
    "linearize",
    "modulus",
    "moment_V",
    "quadratic_recurrence",
    "run",
    "set_threads",
    "validate",
]


def energy(lambdas, N, members):
    return _json.loads(_qsys.energy_json(lambdas, N, members))


def linearize(lambdas, N, freqs, eps="1/10", delta="1/2"):
    return _json.loads(_qsys.linearize_json(lambdas, N, freqs, eps, delta))


def run(lambdas, N, members, **params):
    return _json.loads(
        _qsys.run_json(lambdas, N, members, {k: str(v) for k, v in params.items()})
    )
