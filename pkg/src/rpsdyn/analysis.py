"""Empirical audits over trajectories: recurrence, conservation drift, volume spread.

Distances for recurrence detection are Euclidean on the concatenated (x, w)
simplex coordinates, matching the space the return statement is made in.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateEnsembleError
from .integrate import IntegratorConfig, Trajectory, integrate
from .model import ModelParams, SystemState, transform


@dataclass(frozen=True, eq=False)
class RecurrenceConfig:
    """Return detection settings.

    epsilon      return radius (Euclidean, concatenated (x, w))
    t_min        exclusion window after t=0 against trivial self-matches
    max_returns  cap on reported return events
    """

    epsilon: float = 0.05
    t_min: float = 1.0
    max_returns: int = 100

    def __post_init__(self):
        if not (np.isfinite(self.epsilon) and self.epsilon > 0.0):
            raise ValueError(f"epsilon must be > 0, got {self.epsilon!r}")
        if not (np.isfinite(self.t_min) and self.t_min > 0.0):
            raise ValueError(f"t_min must be > 0, got {self.t_min!r}")
        if not isinstance(self.max_returns, (int, np.integer)) or self.max_returns < 1:
            raise ValueError(f"max_returns must be a positive integer, got {self.max_returns!r}")


@dataclass(frozen=True, eq=False)
class RecurrenceReport:
    """Return events of a trajectory relative to its own initial sample.

    returns     (time, distance) pairs, one per maximal sub-epsilon interval,
                each reported at the interval's minimal-distance sample
    global_min  (time, distance) over all samples with t > t_min, independent
                of epsilon; None when no sample lies beyond t_min
    drift_stats (max, rms) relative drift of the conserved quantity
    """

    reference: SystemState
    returns: tuple
    global_min: tuple | None
    drift_stats: tuple

    def __post_init__(self):
        object.__setattr__(self, "returns", tuple((float(t), float(d)) for t, d in self.returns))
        times = [t for t, _ in self.returns]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("return times must strictly increase")


def recurrence_scan(traj: Trajectory, cfg: RecurrenceConfig) -> RecurrenceReport:
    """Scan a trajectory for returns near its initial sample.

    Consecutive sub-epsilon samples collapse into one event (a return is a
    maximal time interval spent inside the epsilon-ball), reported at its
    closest sample; ties break to the earliest sample.
    """
    pts = np.hstack((traj.xs, traj.ws))
    ref = pts[0]
    dist = np.sqrt(((pts - ref) ** 2).sum(axis=1))
    mask = traj.times > cfg.t_min
    t_sel = traj.times[mask]
    d_sel = dist[mask]

    returns = []
    global_min = None
    if t_sel.size:
        gi = int(d_sel.argmin())
        global_min = (float(t_sel[gi]), float(d_sel[gi]))
        below = d_sel < cfg.epsilon
        edges = np.flatnonzero(np.diff(np.concatenate(([False], below, [False])).astype(np.int8)))
        for start, stop in zip(edges[::2], edges[1::2]):
            j = start + int(d_sel[start:stop].argmin())
            returns.append((float(t_sel[j]), float(d_sel[j])))
            if len(returns) >= cfg.max_returns:
                break

    return RecurrenceReport(reference=traj.state(0), returns=tuple(returns),
                            global_min=global_min,
                            drift_stats=drift_stats(traj, traj.params))


def drift_stats(traj: Trajectory, params: ModelParams):
    """Max and RMS relative drift of the conserved quantity over the samples."""
    c = -np.log(traj.xs).sum(axis=1) - params.mu * np.log(traj.ws).sum(axis=1)
    c0 = c[0]
    if c0 == 0.0:
        raise ValueError("conserved quantity vanished at t=0; cannot form relative drift")
    rel = np.abs(c - c0) / abs(c0)
    return float(rel.max()), float(np.sqrt(np.mean(rel ** 2)))


def log_volume_proxy(points) -> float:
    """Log-determinant of the sample covariance of a point cloud (volume proxy)."""
    pts = np.asarray(points, dtype=float)
    cov = np.cov(pts, rowvar=False)
    sign, logdet = np.linalg.slogdet(cov)
    if sign <= 0 or not np.isfinite(logdet):
        raise DegenerateEnsembleError("degenerate ensemble: singular covariance")
    return float(logdet)


def _transformed_rows(traj: Trajectory) -> np.ndarray:
    y = np.log(traj.xs[:, :-1] / traj.xs[:, -1:])
    z = np.log(traj.ws[:, :-1] / traj.ws[:, -1:])
    return np.hstack((y, z))


def ensemble_spread(states0, params: ModelParams, cfg: IntegratorConfig):
    """Integrate a tight cloud of initial points and track its volume proxy.

    Requires at least 2(n-1)+1 interior points within pairwise distance 1e-3
    in log-ratio coordinates (small enough for the proxy's linearization to
    hold). Returns (times, series) where series[k] is the log-determinant of
    the cloud covariance in log-ratio coordinates at times[k]. Exactly
    conserved only for linear flows; for a tight cloud under this
    volume-preserving flow the drift stays small over short horizons.
    """
    states0 = list(states0)
    d = 2 * (params.n - 1)
    if len(states0) < d + 1:
        raise ValueError(f"need at least 2(n-1)+1 = {d + 1} cloud points, got {len(states0)}")
    u0s = np.array([np.concatenate((transform(s.x), transform(s.w))) for s in states0])
    gaps = np.sqrt(((u0s[:, None, :] - u0s[None, :, :]) ** 2).sum(axis=2))
    if gaps.max() > 1e-3:
        raise ValueError(
            f"cloud too spread out: max pairwise distance {gaps.max():.3e} exceeds 1e-3")

    trajs = [integrate(s, params, cfg, tick_exact=True) for s in states0]
    times = trajs[0].times
    for tr in trajs[1:]:
        if tr.times.shape != times.shape or np.any(tr.times != times):
            raise RuntimeError("ensemble members recorded mismatched sample times")
    clouds = np.stack([_transformed_rows(tr) for tr in trajs], axis=1)  # (k, members, d)
    series = np.array([log_volume_proxy(cloud) for cloud in clouds])
    return times, series
