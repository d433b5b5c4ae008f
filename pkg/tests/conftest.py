import numpy as np
import pytest

from rpsdyn import ModelParams, SimplexPoint, SystemState


@pytest.fixture
def flagship():
    """The n=3, mu=0.1 system used throughout."""
    return ModelParams(n=3, mu=0.1)


def make_interior(rng, n, floor=1e-6):
    """One uniform interior simplex draw with a coordinate floor."""
    while True:
        v = rng.standard_exponential(n)
        v /= v.sum()
        if v.min() >= floor:
            return v


def make_state(rng, n, floor=1e-6) -> SystemState:
    return SystemState(SimplexPoint(make_interior(rng, n, floor)),
                       SimplexPoint(make_interior(rng, n, floor)))
