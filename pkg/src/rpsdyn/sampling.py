"""Deterministic random initial conditions.

Draws use numpy's default_rng (PCG64); a fixed seed reproduces the same state
across runs for a given numpy version. x is drawn before w from one stream.
"""

from __future__ import annotations

import numpy as np

from .model import SimplexPoint, SystemState

COORD_FLOOR = 1e-6


def _simplex_draw(rng: np.random.Generator, n: int, floor: float) -> np.ndarray:
    # Normalized exponentials sample the flat Dirichlet; resample rare draws
    # that land within `floor` of the boundary.
    while True:
        v = rng.standard_exponential(n)
        v /= v.sum()
        if v.min() >= floor:
            return v


def random_interior_state(seed: int, n: int, floor: float = COORD_FLOOR) -> SystemState:
    """Uniformly distributed (x, w) on int(simplex)^2, coordinates >= floor."""
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    rng = np.random.default_rng(seed)
    x = _simplex_draw(rng, n, floor)
    w = _simplex_draw(rng, n, floor)
    return SystemState(SimplexPoint(x), SimplexPoint(w))
