"""Central-difference gradient checker."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .tensor import ParameterSet


def grad_check(
    loss_fn: Callable[[], float],
    params: ParameterSet,
    h: float = 1e-5,
    max_coords: int | None = None,
    rng: np.random.Generator | None = None,
) -> float:
    """Compare analytic grads (already in ``p.grad``) against central differences.

    ``loss_fn`` re-evaluates the loss from the current parameter values and
    must not touch the grad buffers.  For large models pass ``max_coords`` to
    spot-check a random subset of coordinates (at least 200 recommended).
    Returns the maximum relative error |a - n| / max(1e-12, |a| + |n|).
    """
    analytic = {p.name: p.grad.copy() for p in params}
    max_rel = 0.0
    coords = []
    for p in params:
        for idx in np.ndindex(p.value.shape):
            coords.append((p, idx))
    if max_coords is not None and len(coords) > max_coords:
        rng = rng or np.random.default_rng(0)
        chosen = rng.choice(len(coords), size=max_coords, replace=False)
        coords = [coords[i] for i in chosen]
    for p, idx in coords:
        orig = p.value[idx]
        p.value[idx] = orig + h
        f_plus = loss_fn()
        p.value[idx] = orig - h
        f_minus = loss_fn()
        p.value[idx] = orig
        numeric = (f_plus - f_minus) / (2.0 * h)
        a = analytic[p.name][idx]
        rel = abs(a - numeric) / max(1e-12, abs(a) + abs(numeric))
        max_rel = max(max_rel, rel)
    return max_rel
