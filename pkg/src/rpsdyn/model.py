"""Cyclic-competition replicator model with environmental feedback.

Populations ``x`` of ``n >= 3`` species live on the probability simplex and
earn fitness from a rock-paper-scissors-type game. Each species ``i`` owns a
favoring matrix that tilts the base game toward it, and the payoff actually
played is the convex combination of those matrices under an environment
weight vector ``w``. The weights follow a second replicator that grows the
weight of under-represented species, closing a feedback loop:

    dx_i/dt = x_i * (P(w) x)_i
    dw_i/dt = w_i * (<w, x> - x_i)

This module defines the domain types, the game matrices, the vector field in
simplex coordinates and in the log-ratio chart (where the field is
divergence-free), the chart maps, and the conserved log-barrier quantity
C = -sum_i log x_i - mu * sum_i log w_i that pins orbits away from the
boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BarrierDivergenceError

# |sum - 1| required after construction / guaranteed by renormalization
SUM_TOL = 1e-12
# inputs farther than this from unit sum are rejected instead of renormalized
RENORM_TOL = 1e-9
ANTISYMMETRY_TOL = 1e-14


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SimplexPoint:
    """Strictly positive n-vector (n >= 3) summing to 1.

    Inputs whose sum is within 1e-9 of 1 are renormalized (divided by their
    sum); anything farther off is rejected.
    """

    coords: np.ndarray

    def __post_init__(self):
        c = np.array(self.coords, dtype=float)
        if c.ndim != 1 or c.size < 3:
            raise ValueError(f"simplex point needs a 1-d vector with n >= 3, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("simplex coordinates must be finite")
        if np.any(c <= 0.0):
            raise ValueError(f"simplex coordinates must be strictly positive, got min {c.min()!r}")
        s = c.sum()
        if abs(s - 1.0) > RENORM_TOL:
            raise ValueError(f"simplex coordinates sum to {s!r}; more than {RENORM_TOL} away from 1")
        object.__setattr__(self, "coords", _readonly(c / s))

    @property
    def n(self) -> int:
        return self.coords.size


@dataclass(frozen=True, eq=False)
class SystemState:
    """Phase-space point: populations ``x`` and environment weights ``w``."""

    x: SimplexPoint
    w: SimplexPoint

    def __post_init__(self):
        if self.x.n != self.w.n:
            raise ValueError(f"x and w must have equal dimension, got {self.x.n} and {self.w.n}")

    @property
    def n(self) -> int:
        return self.x.n


@dataclass(frozen=True, eq=False)
class TransformedState:
    """Image of a SystemState under the log-ratio chart: (y, z) in R^(n-1) x R^(n-1)."""

    y: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        y = np.array(self.y, dtype=float)
        z = np.array(self.z, dtype=float)
        if y.ndim != 1 or z.ndim != 1 or y.size != z.size:
            raise ValueError("y and z must be 1-d vectors of equal length")
        if y.size < 2:
            raise ValueError("transformed state needs n - 1 >= 2 components per half")
        if not (np.all(np.isfinite(y)) and np.all(np.isfinite(z))):
            raise ValueError("transformed coordinates must be finite")
        object.__setattr__(self, "y", _readonly(y))
        object.__setattr__(self, "z", _readonly(z))

    @property
    def n(self) -> int:
        return self.y.size + 1


@dataclass(frozen=True, eq=False)
class ModelParams:
    """Game parameters.

    n            strategy count (>= 3)
    mu           feedback strength (>= 0); in exploration mode this scalar is
                 only the reference used by the conserved-quantity diagnostic
    amplitude    scale of every +/-1 pair of the base matrix (> 0)
    mu_per_matrix  optional per-matrix feedback strengths (exploration mode)
    """

    n: int
    mu: float
    amplitude: float = 1.0
    mu_per_matrix: tuple | None = None

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or isinstance(self.n, bool):
            raise ValueError(f"n must be an integer, got {self.n!r}")
        if self.n < 3:
            raise ValueError(f"n must be >= 3, got {self.n}")
        if np.ndim(self.mu) != 0:
            raise ValueError("mu must be a scalar (use mu_per_matrix for per-matrix strengths)")
        mu = float(self.mu)
        if not np.isfinite(mu) or mu < 0.0:
            raise ValueError(f"mu must be a finite real >= 0, got {self.mu!r}")
        if np.ndim(self.amplitude) != 0:
            raise ValueError("amplitude must be a single scalar; per-edge amplitudes are not supported")
        a = float(self.amplitude)
        if not np.isfinite(a) or a <= 0.0:
            raise ValueError(f"amplitude must be a finite real > 0, got {self.amplitude!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "amplitude", a)
        if self.mu_per_matrix is not None:
            v = np.array(self.mu_per_matrix, dtype=float)
            if v.ndim != 1 or v.size != self.n:
                raise ValueError(f"mu_per_matrix must have length n={self.n}, got shape {v.shape}")
            if not np.all(np.isfinite(v)) or np.any(v < 0.0):
                raise ValueError("mu_per_matrix entries must be finite reals >= 0")
            object.__setattr__(self, "mu_per_matrix", tuple(float(t) for t in v))

    @property
    def exploration(self) -> bool:
        return self.mu_per_matrix is not None

    def mu_vector(self) -> np.ndarray:
        """Per-matrix feedback strengths; constant vector in uniform mode."""
        if self.mu_per_matrix is None:
            return np.full(self.n, self.mu)
        return np.asarray(self.mu_per_matrix, dtype=float)


@dataclass(frozen=True, eq=False)
class PayoffMatrix:
    """Antisymmetric n x n payoff matrix (zero diagonal)."""

    entries: np.ndarray

    def __post_init__(self):
        e = np.array(self.entries, dtype=float)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise ValueError(f"payoff matrix must be square, got shape {e.shape}")
        if np.max(np.abs(e + e.T)) > ANTISYMMETRY_TOL:
            raise ValueError("payoff matrix must be antisymmetric (within 1e-14)")
        object.__setattr__(self, "entries", _readonly(e))

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def uniform_state(n: int) -> SystemState:
    """Interior equilibrium: x = w = (1/n, ..., 1/n)."""
    p = SimplexPoint(np.full(n, 1.0 / n))
    return SystemState(p, p)


def _weights_array(w, n: int) -> np.ndarray:
    """Accept a SimplexPoint or a plain length-n vector of weights.

    The matrix algebra is defined for boundary weight vectors too, so plain
    arrays are not required to be interior.
    """
    c = w.coords if isinstance(w, SimplexPoint) else np.asarray(w, dtype=float)
    if c.ndim != 1 or c.size != n:
        raise ValueError(f"weight vector must have length n={n}, got shape {c.shape}")
    if not np.all(np.isfinite(c)):
        raise ValueError("weight vector must be finite")
    return c


def rps_base_matrix(params: ModelParams) -> PayoffMatrix:
    """Cyclic base game: species i beats its predecessor (+a) and loses to its successor (-a)."""
    n, a = params.n, params.amplitude
    P = np.zeros((n, n))
    idx = np.arange(n)
    P[idx, (idx - 1) % n] = a
    P[idx, (idx + 1) % n] = -a
    return PayoffMatrix(P)


def favor_matrix(i: int, params: ModelParams) -> PayoffMatrix:
    """Base matrix tilted toward strategy i: +mu_i across row i, -mu_i down column i."""
    n = params.n
    if not 0 <= i < n:
        raise IndexError(f"strategy index {i} out of range for n={n}")
    mu_i = params.mu_vector()[i]
    tilt = np.zeros((n, n))
    tilt[i, :] = mu_i
    tilt[:, i] = -mu_i
    tilt[i, i] = 0.0
    return PayoffMatrix(rps_base_matrix(params).entries + tilt)


def payoff_matrix(w, params: ModelParams) -> PayoffMatrix:
    """Weighted game sum_i w_i P_i; entrywise P[i][j] + mu_i w_i - mu_j w_j."""
    wc = _weights_array(w, params.n)
    mw = params.mu_vector() * wc
    return PayoffMatrix(rps_base_matrix(params).entries + (mw[:, None] - mw[None, :]))


def _fitness_raw(x, w, mu_vec, a, prev_idx, next_idx):
    mw = mu_vec * w
    return a * (x[prev_idx] - x[next_idx]) + (mw - mw @ x)


def _cyclic_indices(n):
    idx = np.arange(n)
    return (idx - 1) % n, (idx + 1) % n


def fitness(state: SystemState, params: ModelParams) -> np.ndarray:
    """Per-strategy growth rates s = P(w) x.

    Evaluated by the O(n) closed form a*(x_{i-1} - x_{i+1}) + mu_i w_i - <mu*w, x>
    (cyclic indices), which agrees with the matrix product.
    """
    if state.n != params.n:
        raise ValueError(f"state dimension {state.n} does not match params.n={params.n}")
    prev_idx, next_idx = _cyclic_indices(params.n)
    return _fitness_raw(state.x.coords, state.w.coords, params.mu_vector(),
                        params.amplitude, prev_idx, next_idx)


def simplex_field(state: SystemState, params: ModelParams):
    """Time derivatives (dx, dw) of the coupled replicator pair; both sum to 0."""
    x, w = state.x.coords, state.w.coords
    s = fitness(state, params)
    return x * s, w * ((w @ x) - x)


def renormalized_field(state: SystemState, params: ModelParams):
    """simplex_field scaled by 1/(||field|| + 1): same orbits, globally bounded speed."""
    dx, dw = simplex_field(state, params)
    scale = 1.0 / (np.sqrt(dx @ dx + dw @ dw) + 1.0)
    return dx * scale, dw * scale


def transform(p) -> np.ndarray:
    """Log-ratio chart: component i is log(p_i / p_n), mapping int(simplex) -> R^(n-1).

    Accepts a SimplexPoint or a strictly positive vector; boundary points
    (any coordinate <= 0) are rejected since they map to infinity.
    """
    c = p.coords if isinstance(p, SimplexPoint) else np.asarray(p, dtype=float)
    if np.any(c <= 0.0):
        raise ValueError("log-ratio chart is undefined on the simplex boundary (coordinate <= 0)")
    return np.log(c[:-1] / c[-1])


def _simplex_from_logratios(v: np.ndarray) -> np.ndarray:
    """Inverse chart on raw arrays; max-subtraction keeps exp in range."""
    m = v.size
    ye = np.empty(m + 1)
    ye[:m] = v
    ye[m] = 0.0
    e = np.exp(ye - ye.max())
    return e / e.sum()


def _simplex_rows_from_logratios(V: np.ndarray) -> np.ndarray:
    """Row-wise inverse chart for a (k, n-1) array of log-ratio vectors."""
    ye = np.concatenate((V, np.zeros((V.shape[0], 1))), axis=1)
    e = np.exp(ye - ye.max(axis=1, keepdims=True))
    return e / e.sum(axis=1, keepdims=True)


def inverse_transform(v) -> SimplexPoint:
    """Inverse chart: normalized exponentials with implicit last coordinate exp(0).

    Stabilized by subtracting the running maximum, so single large entries
    (|v_i| up to ~700) neither overflow nor lose the normalization. Entry
    *ranges* beyond ~745 underflow the smallest coordinates to exactly 0 in
    float64 and are rejected by the SimplexPoint positivity invariant.
    """
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"log-ratio vector must be 1-d, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("log-ratio coordinates must be finite")
    return SimplexPoint(_simplex_from_logratios(v))


def transform_state(state: SystemState) -> TransformedState:
    """Apply the log-ratio chart to both halves of a SystemState."""
    return TransformedState(transform(state.x), transform(state.w))


def inverse_transform_state(ts: TransformedState) -> SystemState:
    """Map a TransformedState back onto int(simplex) x int(simplex)."""
    return SystemState(inverse_transform(ts.y), inverse_transform(ts.z))


def _transformed_field_raw(y, z, mu_vec, a, prev_idx, next_idx):
    m = y.size
    x = _simplex_from_logratios(y)
    w = _simplex_from_logratios(z)
    d = a * (x[prev_idx] - x[next_idx])
    mw = mu_vec * w
    dy = (d[:m] - d[m]) + (mw[:m] - mw[m])
    dz = x[m] - x[:m]
    return dy, dz


def transformed_field(ts: TransformedState, params: ModelParams):
    """Field in log-ratio coordinates: dy_i = s_i - s_n, dz_i = x_n - x_i.

    Expanded, dy_i = a*(x_1 + x_{i-1} - x_{n-1} - x_{i+1}) + mu*(w_i - w_n)
    in uniform mode (1-based cyclic indices). This field has zero divergence,
    which is what makes the flow volume-preserving in these coordinates.
    """
    if ts.n != params.n:
        raise ValueError(f"state dimension {ts.n} does not match params.n={params.n}")
    prev_idx, next_idx = _cyclic_indices(params.n)
    return _transformed_field_raw(ts.y, ts.z, params.mu_vector(), params.amplitude,
                                  prev_idx, next_idx)


def conserved_quantity(state: SystemState, params: ModelParams) -> float:
    """Log-barrier invariant C = -sum_i log x_i - mu * sum_i log w_i.

    Constant along exact orbits in uniform mode; strictly positive on the
    interior (each barrier term is at least n log n). With mu_per_matrix set
    this is a diagnostic only, evaluated at the scalar reference params.mu.
    """
    if state.n != params.n:
        raise ValueError(f"state dimension {state.n} does not match params.n={params.n}")
    return conserved_from_coords(state.x.coords, state.w.coords, params.mu)


def conserved_from_coords(x, w, mu: float) -> float:
    """conserved_quantity on raw coordinate arrays; boundary states diverge."""
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    if np.any(x <= 0.0) or np.any(w <= 0.0):
        raise BarrierDivergenceError("barrier divergence: log-barrier is infinite on the boundary")
    c = -np.log(x).sum() - mu * np.log(w).sum()
    assert c > 0.0
    return float(c)


def make_rhs(params: ModelParams, space: str = "transformed",
             renormalize: bool = False, sign: float = 1.0):
    """Flat-vector right-hand side for the ODE drivers.

    The state layout is [y, z] (length 2(n-1)) for ``space="transformed"`` or
    [x, w] (length 2n) for ``space="simplex"``. ``renormalize`` rescales the
    field by 1/(||f|| + 1); ``sign=-1`` reverses time (used by reversal
    audits).
    """
    n, a = params.n, params.amplitude
    mu_vec = params.mu_vector()
    prev_idx, next_idx = _cyclic_indices(n)
    if space == "transformed":
        m = n - 1

        def base(u):
            dy, dz = _transformed_field_raw(u[:m], u[m:], mu_vec, a, prev_idx, next_idx)
            return np.concatenate((dy, dz))
    elif space == "simplex":

        def base(u):
            x, w = u[:n], u[n:]
            mw = mu_vec * w
            s = a * (x[prev_idx] - x[next_idx]) + (mw - mw @ x)
            return np.concatenate((x * s, w * ((w @ x) - x)))
    else:
        raise ValueError(f"space must be 'simplex' or 'transformed', got {space!r}")

    rhs = base
    if renormalize:
        def rhs(u, _inner=rhs):
            du = _inner(u)
            return du / (np.sqrt(du @ du) + 1.0)
    if sign != 1.0:
        def rhs(u, _inner=rhs, _sign=float(sign)):
            return _sign * _inner(u)
    return rhs
