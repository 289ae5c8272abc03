"""Central-difference gradient oracle.

The oracle perturbs stored parameter values in place, re-evaluates the target
function, and compares the numeric slope against the tape gradient. It stays
independent of how the tape computes gradients: it only needs the function to
be deterministic and scalar-valued.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import OracleError
from .params import ParamStore
from .tensor import backward


def finite_difference_check(
    f,
    store: ParamStore,
    eps: float = 1e-5,
    coords_per_param: int = 32,
    rng: np.random.Generator | None = None,
    param_names=None,
) -> float:
    """Max relative error between central differences and tape gradients.

    ``f(store)`` must return a scalar Tensor and be deterministic. At least
    ``coords_per_param`` coordinates are sampled per parameter (all of them
    for small parameters). The relative error denominator is floored at 1e-8.

    Central differences of a float64 objective carry irreducible rounding
    noise of order ``eps_machine * |f| / (2 * eps)``; a disagreement below
    that floor is indistinguishable from exact agreement and counts as zero
    error. Real gradient defects sit orders of magnitude above the floor, so
    this guard does not mask them (a dropped term of size g produces a
    disagreement of size g, not of size 1e-10).
    """
    if not (1e-7 <= eps <= 1e-4):
        raise OracleError(f"eps {eps} outside [1e-7, 1e-4]")
    if rng is None:
        rng = np.random.default_rng(0)

    store.zero_grad()
    out = f(store)
    f0 = float(out.data)
    if not math.isfinite(f0):
        raise OracleError("objective is not finite at the evaluation point")
    noise_floor = 32.0 * np.finfo(np.float64).eps * max(1.0, abs(f0)) / (2.0 * eps)
    backward(out)
    names = list(param_names) if param_names is not None else store.names()
    analytic = {}
    for name in names:
        p = store[name]
        analytic[name] = (
            p.grad.copy() if p.grad is not None else np.zeros_like(p.data)
        )

    max_rel = 0.0
    for name in names:
        p = store[name]
        n = p.data.size
        if n <= coords_per_param:
            coords = np.arange(n)
        else:
            coords = rng.choice(n, size=coords_per_param, replace=False)
        flat = p.data.reshape(-1)
        for c in coords:
            orig = flat[c]
            flat[c] = orig + eps
            f_plus = float(f(store).data)
            flat[c] = orig - eps
            f_minus = float(f(store).data)
            flat[c] = orig
            if not (math.isfinite(f_plus) and math.isfinite(f_minus)):
                raise OracleError(f"objective not finite while perturbing {name}[{c}]")
            numeric = (f_plus - f_minus) / (2.0 * eps)
            tape = float(analytic[name].reshape(-1)[c])
            if abs(numeric - tape) <= noise_floor:
                continue
            denom = max(abs(numeric), abs(tape), 1e-8)
            rel = abs(numeric - tape) / denom
            if rel > max_rel:
                max_rel = rel
    return max_rel
