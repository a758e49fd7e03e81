"""Bound states of fractional Schroedinger operators on a periodic box."""

import json
from pathlib import Path

from ._fracspec import (
    EmptyConstraint,
    Error,
    GridSpec,
    NoConvergence,
    Operator,
    ParseError,
    Potential,
    ValidationError,
    __version__,
    apply_fractional_laplacian,
    compact_bump,
    constant_one,
    dense_eigenvalues,
    dense_gamma_values,
    fingerprint,
    gagliardo_form_direct,
    gamma_values,
    gaussian_well,
    implication_check,
    lowest_eigenpairs,
    multiplier_form,
)
from ._fracspec import run as _run


def run(command, config, serial=True):
    """Run solve, verify, sweep or oracle and return the report as a dict.

    config is INI text or a path to an INI file.
    """
    if isinstance(config, Path) or (isinstance(config, str) and "\n" not in config and Path(config).is_file()):
        config = Path(config).read_text()
    return json.loads(_run(command, config, serial))


__all__ = [
    "EmptyConstraint",
    "Error",
    "GridSpec",
    "NoConvergence",
    "Operator",
    "ParseError",
    "Potential",
    "ValidationError",
    "__version__",
    "apply_fractional_laplacian",
    "compact_bump",
    "constant_one",
    "dense_eigenvalues",
    "dense_gamma_values",
    "fingerprint",
    "gagliardo_form_direct",
    "gamma_values",
    "gaussian_well",
    "implication_check",
    "lowest_eigenpairs",
    "multiplier_form",
    "run",
]
