"""Central differences with one Richardson level and a disagreement guard."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import FiniteDifferenceError


def central_difference(f: Callable[[np.ndarray], np.ndarray], z: np.ndarray,
                       v: np.ndarray, h: float) -> np.ndarray:
    return (np.asarray(f(z + h * v)) - np.asarray(f(z - h * v))) / (2.0 * h)


def directional_derivative(f, z, v, h, *, tol, relative=True):
    """Derivative of ``f`` at ``z`` along the constant direction ``v``.

    Two central differences with steps ``h`` and ``h/2`` are combined into a
    fourth-order estimate. If they differ by more than ``tol`` (scaled by
    ``max(1, |estimate|)`` when ``relative``) a :class:`FiniteDifferenceError`
    is raised, since the step is then dominated by rounding or truncation.
    """
    coarse = central_difference(f, z, v, h)
    fine = central_difference(f, z, v, 0.5 * h)
    estimate = (4.0 * fine - coarse) / 3.0
    gap = float(np.max(np.abs(fine - coarse))) if estimate.size else 0.0
    scale = max(1.0, float(np.max(np.abs(estimate)))) if (relative and estimate.size) else 1.0
    if not np.isfinite(gap) or gap > tol * scale:
        raise FiniteDifferenceError(
            f"Richardson levels disagree by {gap:.3e} (allowed {tol * scale:.3e}) with h = {h:.3e}"
        )
    return estimate


def jacobian_along(f, z, directions, h, *, tol, relative=True):
    """Stack ``directional_derivative`` over the rows of ``directions``.

    Returns an array whose leading axis indexes the direction.
    """
    return np.stack([directional_derivative(f, z, d, h, tol=tol, relative=relative)
                     for d in directions])
