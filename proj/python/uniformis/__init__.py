"""Analysis on uniform spaces given by finite families of pseudometrics.

Points are sequences of floats, clouds are sequences of points. JSON documents
(spaces, operators, set expressions, potentials) may be passed as dicts or as
JSON text.
"""

import json as _json

from . import _uniformis
from ._uniformis import (
    ContractViolation,
    ConvergenceError,
    DomainError,
    Error,
    HypothesisError,
    InputError,
    InwardnessError,
    Operator,
    Space,
    bishop_phelps as _bishop_phelps,
    check_image_residual,
    demo_names,
    ekeland as _ekeland,
    empirical_alpha,
    greedy_cover_number,
    hausdorff,
    hausdorff_via_inflation,
    invariant_set,
    solve_caristi as _solve_caristi,
    solve_inward,
    solve_nadler,
    solve_picard,
)

__version__ = "0.1.0"


def _text(doc):
    return doc if isinstance(doc, str) else _json.dumps(doc)


def space(doc):
    """Space from a dict or JSON text."""
    return Space.from_json(_text(doc))


def operator(doc, dimension):
    """Multi-function from a dict or JSON text."""
    return Operator.from_json(_text(doc), dimension)


def alpha_bounds(expr):
    """Certified [lo, hi] for the non-compactness measure of a set expression."""
    return _uniformis.alpha_bounds(_text(expr))


def certify_ksc(op, k):
    """Certificate or refusal for alpha(T(A)) <= k alpha(A)."""
    return _uniformis.certify_ksc(_text(op), k)


def solve_caristi(space, operator, potentials, x0, **kw):
    return _solve_caristi(space, operator, _text(potentials), x0, **kw)


def bishop_phelps(space, potentials, x0, grid):
    return _bishop_phelps(space, _text(potentials), x0, grid)


def ekeland(space, potentials, x0, delta, grid):
    if not isinstance(delta, dict):
        delta = {label: float(delta) for label in space.labels}
    return _ekeland(space, _text(potentials), x0, delta, grid)


def run_cli(*args):
    """Runs the command-line tool in process; returns (exit code, stdout, stderr)."""
    return _uniformis.run_cli([str(a) for a in args])


__all__ = [
    "ContractViolation", "ConvergenceError", "DomainError", "Error", "HypothesisError", "InputError",
    "InwardnessError", "Operator", "Space", "alpha_bounds", "bishop_phelps", "certify_ksc",
    "check_image_residual", "demo_names", "ekeland", "empirical_alpha", "greedy_cover_number", "hausdorff",
    "hausdorff_via_inflation", "invariant_set", "operator", "run_cli", "solve_caristi", "solve_inward",
    "solve_nadler", "solve_picard", "space",
]
