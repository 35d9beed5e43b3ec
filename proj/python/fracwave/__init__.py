"""Backward problem for the time-fractional wave equation on the unit square."""

import json

from ._core import (
    REFERENCE_KAPPA,
    FracwaveError,
    find_real_roots,
    forward_sup_norm,
    initial_rho,
    ml,
    oracle_rho,
    propagator,
    truth_coefficients,
    update_rho,
)
from ._core import run_experiment_json as _run_experiment_json

__all__ = [
    "REFERENCE_KAPPA",
    "FracwaveError",
    "find_real_roots",
    "forward_sup_norm",
    "initial_rho",
    "ml",
    "oracle_rho",
    "propagator",
    "run_experiment",
    "truth_coefficients",
    "update_rho",
]


def run_experiment(example="ex1", **settings):
    """Run an experiment and return the aggregate record as a dict.

    Keyword names follow the CLI flags with dashes replaced by underscores,
    e.g. ``run_experiment("ex2", alpha=1.8, reg="h1", seeds=3)``.
    """
    flat = {key.replace("_", "-") if key in ("tol_rho", "max_iters") else key: str(value)
            for key, value in settings.items()}
    return json.loads(_run_experiment_json(example, flat))
