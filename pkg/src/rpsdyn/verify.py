"""Bundled machine-checkable invariants for the `verify` command.

Each check returns the measured value and its threshold; the report is a
plain dict ready for JSON serialization.
"""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from .integrate import IntegratorConfig, divergence_fd, integrate
from .model import ModelParams, inverse_transform, make_rhs, transform, uniform_state
from .sampling import random_interior_state

DEFAULT_THRESHOLDS = {
    "conservation_drift": 1e-8,
    "pointwise_divergence": 1e-6,
    "transform_round_trip": 1e-12,
    "equilibrium_fixity": 1e-10,
    "two_space_consistency": 1e-6,
}


def _check_transform_round_trip(params, cfg, seed):
    worst = 0.0
    for k in range(1000):
        state = random_interior_state(seed + k, params.n)
        for p in (state.x, state.w):
            back = inverse_transform(transform(p))
            worst = max(worst, float(np.max(np.abs(back.coords - p.coords) / p.coords)))
    return worst


def _check_equilibrium_fixity(params, cfg, seed):
    eq = uniform_state(params.n)
    target = np.concatenate((eq.x.coords, eq.w.coords))
    worst = 0.0
    for space in ("transformed", "simplex"):
        run = replace(cfg, space=space, t_end=min(cfg.t_end, 100.0))
        traj = integrate(eq, params, run)
        pts = np.hstack((traj.xs, traj.ws))
        worst = max(worst, float(np.max(np.abs(pts - target))))
    return worst


def _check_conservation_drift(params, cfg, seed):
    state0 = random_interior_state(seed, params.n)
    traj = integrate(state0, params, cfg)
    c = traj.conserved
    return float(np.max(np.abs(c - c[0])) / abs(c[0]))


def _check_pointwise_divergence(params, cfg, seed):
    rhs = make_rhs(params, space="transformed")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(100):
        u = rng.uniform(-3.0, 3.0, size=2 * (params.n - 1))
        worst = max(worst, abs(divergence_fd(rhs, u)))
    return worst


def _check_two_space_consistency(params, cfg, seed):
    state0 = random_interior_state(seed, params.n)
    run = replace(cfg, t_end=10.0, rtol=min(cfg.rtol, 1e-10), atol=min(cfg.atol, 1e-10))
    ends = []
    for space in ("simplex", "transformed"):
        traj = integrate(state0, params, replace(run, space=space))
        ends.append(np.concatenate((traj.xs[-1], traj.ws[-1])))
    return float(np.sqrt(((ends[0] - ends[1]) ** 2).sum()))


_CHECKS = {
    "transform_round_trip": _check_transform_round_trip,
    "equilibrium_fixity": _check_equilibrium_fixity,
    "conservation_drift": _check_conservation_drift,
    "pointwise_divergence": _check_pointwise_divergence,
    "two_space_consistency": _check_two_space_consistency,
}


def run_checks(params: ModelParams, cfg: IntegratorConfig, seed: int = 42,
               thresholds: dict | None = None) -> dict:
    """Run every invariant check; returns {"ok": bool, "checks": {...}}."""
    limits = dict(DEFAULT_THRESHOLDS)
    if thresholds:
        limits.update(thresholds)
    report = {}
    ok = True
    for name, fn in _CHECKS.items():
        value = fn(params, cfg, seed)
        passed = bool(value < limits[name])
        ok = ok and passed
        report[name] = {"pass": passed, "value": value, "threshold": limits[name]}
    return {"ok": ok, "checks": report}
