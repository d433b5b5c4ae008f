"""Fixed-step RK4 and adaptive Dormand-Prince 5(4) drivers for the game fields.

Trajectories are recorded at accepted step endpoints: each time an accepted
step reaches or passes the next ``sample_interval`` tick, that endpoint is
stored (so the effective resolution is max(sample_interval, step size) and
every stored state lies on the numerically integrated orbit). With
``tick_exact=True`` steps are instead clamped so samples land exactly on the
tick grid, which aligns sample times across runs at some extra cost.

The adaptive controller is the standard proportional one: RMS norm of the
embedded error estimate against atol + rtol*|component|, safety factor 0.9,
step-change factors clamped to [0.2, 5.0]. Everything is deterministic:
identical inputs produce identical trajectories.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BoundaryApproachError, StepUnderflowError
from .model import (
    ModelParams,
    SimplexPoint,
    SystemState,
    _simplex_rows_from_logratios,
    make_rhs,
    transform,
)

MIN_STEP = 1e-14
_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0

METHODS = ("fixed-rk4", "adaptive-rk45")
SPACES = ("simplex", "transformed")


@dataclass(frozen=True, eq=False)
class IntegratorConfig:
    """Integration settings; defaults target the adaptive transformed-space path."""

    method: str = "adaptive-rk45"
    space: str = "transformed"
    t_end: float = 1000.0
    dt: float = 0.01
    rtol: float = 1e-10
    atol: float = 1e-10
    max_step: float = 1.0
    sample_interval: float = 0.1
    boundary_floor: float = 1e-12
    renormalize_field: bool = False

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.space not in SPACES:
            raise ValueError(f"space must be one of {SPACES}, got {self.space!r}")
        if not (np.isfinite(self.t_end) and self.t_end > 0.0):
            raise ValueError(f"t_end must be > 0, got {self.t_end!r}")
        if not (np.isfinite(self.max_step) and self.max_step > 0.0):
            raise ValueError(f"max_step must be > 0, got {self.max_step!r}")
        if not (np.isfinite(self.dt) and 0.0 < self.dt <= self.max_step):
            raise ValueError(f"dt must satisfy 0 < dt <= max_step, got dt={self.dt!r}")
        for name in ("rtol", "atol"):
            v = getattr(self, name)
            if not (np.isfinite(v) and 0.0 < v < 1.0):
                raise ValueError(f"{name} must lie in (0, 1), got {v!r}")
        if not (np.isfinite(self.sample_interval) and self.sample_interval > 0.0):
            raise ValueError(f"sample_interval must be > 0, got {self.sample_interval!r}")
        if not (np.isfinite(self.boundary_floor) and 0.0 < self.boundary_floor < 1.0):
            raise ValueError(f"boundary_floor must lie in (0, 1), got {self.boundary_floor!r}")
        if not isinstance(self.renormalize_field, bool):
            raise ValueError("renormalize_field must be a bool")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Recorded samples of one integration, always in simplex coordinates.

    ``steps[k]`` is the size of the accepted step whose endpoint produced
    sample k (0 for the initial sample).
    """

    times: np.ndarray      # (k,)
    xs: np.ndarray         # (k, n) populations
    ws: np.ndarray         # (k, n) weights
    conserved: np.ndarray  # (k,) log-barrier diagnostic at params.mu
    steps: np.ndarray      # (k,)
    params: ModelParams
    config: IntegratorConfig
    initial: SystemState

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        k = t.size
        if k == 0:
            raise ValueError("trajectory must contain at least one sample")
        if t[0] != 0.0 or (k > 1 and np.any(np.diff(t) <= 0.0)):
            raise ValueError("sample times must strictly increase starting at 0")
        for name in ("xs", "ws"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (k, self.params.n):
                raise ValueError(f"{name} must have shape (k, n) = ({k}, {self.params.n})")
            if arr.min() <= 0.0:
                raise ValueError(f"{name} contains non-interior samples")
            if np.max(np.abs(arr.sum(axis=1) - 1.0)) > 1e-9:
                raise ValueError(f"{name} rows must sum to 1")
        if np.asarray(self.conserved).shape != (k,) or np.asarray(self.steps).shape != (k,):
            raise ValueError("conserved and steps must parallel times")
        for name in ("times", "xs", "ws", "conserved", "steps"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return self.times.size

    def state(self, i: int) -> SystemState:
        return SystemState(SimplexPoint(self.xs[i]), SimplexPoint(self.ws[i]))


def step_rk4(rhs, u: np.ndarray, h: float, project=None) -> np.ndarray:
    """One classical fourth-order Runge-Kutta step of size h.

    ``project``, when given, maps the result back onto the constraint set
    (simplex renormalization); the correction it applies is O(h^5), below the
    local truncation error.
    """
    if h <= 0.0:
        raise ValueError(f"step size must be > 0, got {h!r}")
    k1 = rhs(u)
    k2 = rhs(u + (0.5 * h) * k1)
    k3 = rhs(u + (0.5 * h) * k2)
    k4 = rhs(u + h * k3)
    out = u + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
    return out if project is None else project(out)


def _simplex_project(n):
    def project(u):
        x, w = u[:n], u[n:]
        return np.concatenate((x / x.sum(), w / w.sum()))
    return project


def _floor_check(floor):
    def check(u, t):
        if u.min() < floor:
            raise BoundaryApproachError(
                f"boundary approach at t={t:.6g}: coordinate below floor {floor:g}")
    return check


class _Recorder:
    """Collects (t, state, step) triples on the sample grid."""

    __slots__ = ("interval", "t_end", "times", "points", "hs", "next_tick")

    def __init__(self, u0, interval, t_end):
        self.interval = interval
        self.t_end = t_end
        self.times = [0.0]
        self.points = [u0.copy()]
        self.hs = [0.0]
        self.next_tick = interval

    def after_step(self, t, u, h):
        if t >= self.next_tick or t >= self.t_end:
            self.times.append(t)
            self.points.append(u.copy())
            self.hs.append(h)
            k = int(np.floor(t / self.interval)) + 1
            while k * self.interval <= t:
                k += 1
            self.next_tick = k * self.interval


# Dormand-Prince 5(4) tableau (FSAL): stage weights, 5th-order solution
# weights, and the (5th - 4th)-order error weights.
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
)
_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)


def _drive_adaptive(rhs, u0, cfg: IntegratorConfig, tick_exact=False,
                    project=None, floor_check=None):
    t_end, rtol, atol = cfg.t_end, cfg.rtol, cfg.atol
    u = np.array(u0, dtype=float)
    rec = _Recorder(u, cfg.sample_interval, t_end)
    k1 = rhs(u)
    h = min(cfg.dt, cfg.max_step, t_end)
    t = 0.0
    while t < t_end:
        # Clamp the attempt to land exactly on the next boundary of interest.
        h_try, target = h, None
        if tick_exact and rec.next_tick - t <= h_try:
            h_try, target = rec.next_tick - t, rec.next_tick
        if t_end - t <= h_try:
            h_try, target = t_end - t, t_end

        k2 = rhs(u + h_try * (_A[1][0] * k1))
        k3 = rhs(u + h_try * (_A[2][0] * k1 + _A[2][1] * k2))
        k4 = rhs(u + h_try * (_A[3][0] * k1 + _A[3][1] * k2 + _A[3][2] * k3))
        k5 = rhs(u + h_try * (_A[4][0] * k1 + _A[4][1] * k2 + _A[4][2] * k3 + _A[4][3] * k4))
        k6 = rhs(u + h_try * (_A[5][0] * k1 + _A[5][1] * k2 + _A[5][2] * k3
                              + _A[5][3] * k4 + _A[5][4] * k5))
        unew = u + h_try * (_B[0] * k1 + _B[2] * k3 + _B[3] * k4 + _B[4] * k5 + _B[5] * k6)
        k7 = rhs(unew)
        err = h_try * (_E[0] * k1 + _E[2] * k3 + _E[3] * k4 + _E[4] * k5
                       + _E[5] * k6 + _E[6] * k7)
        scale = atol + rtol * np.maximum(np.abs(u), np.abs(unew))
        enorm = float(np.sqrt(np.mean((err / scale) ** 2)))

        if enorm <= 1.0:
            t = t + h_try if target is None else target
            if project is not None:
                unew = project(unew)
            u = unew
            k1 = k7  # first-same-as-last; projection shifts u by O(h^6) only
            if floor_check is not None:
                floor_check(u, t)
            rec.after_step(t, u, h_try)
            factor = _MAX_FACTOR if enorm == 0.0 else min(
                _MAX_FACTOR, max(_MIN_FACTOR, _SAFETY * enorm ** -0.2))
        else:
            factor = max(_MIN_FACTOR, _SAFETY * enorm ** -0.2)
        h = min(h_try * factor, cfg.max_step)
        if h < MIN_STEP:
            raise StepUnderflowError(f"step underflow: h={h:.3e} below {MIN_STEP:g} at t={t:.6g}")
    return rec.times, rec.points, rec.hs


def _drive_fixed(rhs, u0, cfg: IntegratorConfig, tick_exact=False,
                 project=None, floor_check=None):
    t_end = cfg.t_end
    u = np.array(u0, dtype=float)
    rec = _Recorder(u, cfg.sample_interval, t_end)
    t = 0.0
    while t < t_end:
        h_try, target = cfg.dt, None
        if tick_exact and rec.next_tick - t <= h_try:
            h_try, target = rec.next_tick - t, rec.next_tick
        if t_end - t <= h_try:
            h_try, target = t_end - t, t_end
        u = step_rk4(rhs, u, h_try, project=project)
        t = t + h_try if target is None else target
        if floor_check is not None:
            floor_check(u, t)
        rec.after_step(t, u, h_try)
    return rec.times, rec.points, rec.hs


def integrate(state0: SystemState, params: ModelParams, cfg: IntegratorConfig,
              *, field_sign: float = 1.0, tick_exact: bool = False) -> Trajectory:
    """Integrate the coupled system from ``state0`` and record a Trajectory.

    The field and state layout follow ``cfg.space``; recorded states are
    always mapped back to simplex coordinates. ``field_sign=-1`` integrates
    the reversed field (time-reversal audits); ``tick_exact`` clamps steps so
    samples land exactly on multiples of ``sample_interval``.
    """
    if state0.n != params.n:
        raise ValueError(f"state dimension {state0.n} does not match params.n={params.n}")
    n = params.n
    rhs = make_rhs(params, space=cfg.space, renormalize=cfg.renormalize_field, sign=field_sign)
    if cfg.space == "simplex":
        u0 = np.concatenate((state0.x.coords, state0.w.coords))
        project = _simplex_project(n)
        floor_check = _floor_check(cfg.boundary_floor)
    else:
        u0 = np.concatenate((transform(state0.x), transform(state0.w)))
        project = None
        floor_check = None

    drive = _drive_adaptive if cfg.method == "adaptive-rk45" else _drive_fixed
    times, points, hs = drive(rhs, u0, cfg, tick_exact=tick_exact,
                              project=project, floor_check=floor_check)

    U = np.asarray(points)
    if cfg.space == "simplex":
        X, W = U[:, :n], U[:, n:]
    else:
        X = _simplex_rows_from_logratios(U[:, :n - 1])
        W = _simplex_rows_from_logratios(U[:, n - 1:])
        low = min(X.min(), W.min())
        if low < cfg.boundary_floor:
            raise BoundaryApproachError(
                f"boundary approach: recorded coordinate {low:.3e} below floor "
                f"{cfg.boundary_floor:g}")
    conserved = -np.log(X).sum(axis=1) - params.mu * np.log(W).sum(axis=1)
    return Trajectory(times=np.asarray(times), xs=X, ws=W, conserved=conserved,
                      steps=np.asarray(hs), params=params, config=cfg, initial=state0)


def divergence_fd(rhs, u: np.ndarray, h: float = 1e-6) -> float:
    """Central finite-difference divergence of a flat vector field at u."""
    u = np.asarray(u, dtype=float)
    total = 0.0
    for i in range(u.size):
        up = u.copy()
        um = u.copy()
        up[i] += h
        um[i] -= h
        total += (rhs(up)[i] - rhs(um)[i]) / (up[i] - um[i])
    return float(total)


def accumulated_divergence(times, points, rhs, h: float = 1e-6) -> float:
    """Trapezoidal integral of divergence_fd along a sampled path (log-volume change)."""
    times = np.asarray(times, dtype=float)
    divs = np.array([divergence_fd(rhs, u, h=h) for u in points])
    trapezoid = getattr(np, "trapezoid", None) or np.trapz
    return float(trapezoid(divs, times))


def jacobian_trace_along(traj: Trajectory, params: ModelParams, h: float = 1e-6) -> float:
    """Accumulated divergence of the log-ratio-coordinate field along a trajectory.

    Returns the net log-volume change; a volume-preserving flow gives ~0
    regardless of the space the trajectory was integrated in.
    """
    rhs = make_rhs(params, space="transformed")
    Y = np.log(traj.xs[:, :-1] / traj.xs[:, -1:])
    Z = np.log(traj.ws[:, :-1] / traj.ws[:, -1:])
    return accumulated_divergence(traj.times, np.hstack((Y, Z)), rhs, h=h)
