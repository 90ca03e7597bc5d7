"""The contracting evolution driven by an admissible field.

For a field h the two-parameter evolution operator ``phi_{s,t}`` maps a
start state z in the open unit ball to the solution at time t of

    d/dtau  w(tau) = -h(w(tau), tau),   w(s) = z,   s <= tau <= t.

Positivity of Re<h(w), w> makes |w(tau)| strictly decrease, so the
trajectory never leaves the ball and the two-parameter family composes:
phi_{s,t} = phi_{u,t} o phi_{s,u} for s <= u <= t, and phi_{s,s} = id.

This module evolves points with the adaptive embedded Runge-Kutta
integrator (per point, sequentially, so results are independent of
batch composition), exposes the composition defect, verifies the
two-sided modulus decay estimate

    exp(-C(r0) * K(s,t)) <= |phi_{s,t}(z)| / |z| <= exp(-c(r0) * M(s,t))

with r0 = |z|, c(r) = (1-r)/(1+r), C(r) = 1/c(r), and M, K the running
integrals of the Hermitian-part eigenvalue bounds of A(t), and
integrates the second-order jet of phi_{s,t} at the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._integrate import StepStats, integrate_adaptive
from .errors import InvalidInputError
from .fields import C_of, FieldSpec, c_of

#: states may not come within this distance of the unit sphere
ESCAPE_MARGIN = 1e-9

_TOL_RANGE = (1e-14, 1e-2)


def _check_times(s: float, t: float) -> tuple[float, float]:
    s = float(s)
    t = float(t)
    if not (math.isfinite(s) and math.isfinite(t)):
        raise InvalidInputError("times must be finite")
    if s < 0.0 or t < s:
        raise InvalidInputError(f"need 0 <= s <= t, got s={s}, t={t}")
    return s, t


def _check_tol(tol: float) -> float:
    tol = float(tol)
    if not _TOL_RANGE[0] <= tol <= _TOL_RANGE[1]:
        raise InvalidInputError(
            f"tolerance {tol} outside [{_TOL_RANGE[0]}, {_TOL_RANGE[1]}]")
    return tol


def _check_points(points, dim: int) -> np.ndarray:
    pts = np.asarray(points, dtype=complex)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.ndim != 2 or pts.shape[1] != dim:
        raise InvalidInputError(
            f"points must have shape (n, {dim}), got {pts.shape}")
    if not np.all(np.isfinite(pts.view(float))):
        raise InvalidInputError("points must be finite")
    radii = np.linalg.norm(pts, axis=1)
    if np.any(radii >= 1.0):
        worst = int(np.argmax(radii))
        raise InvalidInputError(
            f"point {worst} has norm {radii[worst]:.6f} >= 1; "
            "states must lie in the open unit ball")
    return pts


@dataclass(frozen=True)
class FlowRequest:
    """A validated evolution request: field, time interval [s, t],
    start points of shape (n, dim), and the local error tolerance."""

    field: FieldSpec
    s: float
    t: float
    points: np.ndarray
    tol: float = 1e-10

    def __post_init__(self):
        s, t = _check_times(self.s, self.t)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "tol", _check_tol(self.tol))
        pts = _check_points(self.points, self.field.dim)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)


@dataclass(frozen=True)
class FlowResult:
    """Evolved images plus integrator counters (summed over points;
    max_local_error is the largest accepted error estimate seen)."""

    images: np.ndarray
    steps_taken: int
    steps_rejected: int
    max_local_error: float
    rhs_evaluations: int


def _rhs(field: FieldSpec):
    def rhs(tau, y):
        return -field.h(y, tau)
    return rhs


def _evolve_one(field: FieldSpec, s: float, t: float, z: np.ndarray,
                tol: float, on_step=None, atol: float | None = None
                ) -> tuple[np.ndarray, StepStats]:
    return integrate_adaptive(
        _rhs(field), s, t, z, tol,
        breakpoints=field.breakpoints,
        escape_radius=1.0 - ESCAPE_MARGIN,
        on_step=on_step, atol=atol)


def evolve(request: FlowRequest) -> FlowResult:
    """Evolve every start point through [s, t], one at a time."""
    field = request.field
    images = np.empty_like(request.points)
    total = StepStats()
    for i in range(request.points.shape[0]):
        w, stats = _evolve_one(field, request.s, request.t,
                               request.points[i].copy(), request.tol)
        images[i] = w
        total.merge(stats)
    images.setflags(write=False)
    return FlowResult(images=images, steps_taken=total.steps_taken,
                      steps_rejected=total.steps_rejected,
                      max_local_error=total.max_local_error,
                      rhs_evaluations=total.rhs_evaluations)


def flow_point(field: FieldSpec, s: float, t: float, z, tol: float = 1e-10
               ) -> np.ndarray:
    """Evolve a single state z (shape (dim,)) through [s, t]."""
    req = FlowRequest(field=field, s=s, t=t, points=z, tol=tol)
    return evolve(req).images[0]


def trace(field: FieldSpec, s: float, t: float, z, tol: float = 1e-10
          ) -> tuple[list[float], list[np.ndarray]]:
    """Evolve one state and record every accepted step.

    Returns (times, states) with the initial state first and the final
    state last.  Step times come from the adaptive controller, so the
    grid is not uniform.
    """
    s, t = _check_times(s, t)
    z = _check_points(z, field.dim)[0]
    times = [s]
    states = [z.copy()]

    def on_step(tau, y):
        times.append(float(tau))
        states.append(y)

    w, _ = _evolve_one(field, s, t, z, _check_tol(tol), on_step=on_step)
    if not times or times[-1] != t:
        times.append(t)
        states.append(w)
    return times, states


def semigroup_defect(field: FieldSpec, s: float, u: float, t: float,
                     points, tol: float = 1e-10) -> float:
    """Largest 2-norm of phi_{u,t}(phi_{s,u}(z)) - phi_{s,t}(z)
    over the given start points; requires s <= u <= t."""
    s, t = _check_times(s, t)
    u = float(u)
    if not s <= u <= t:
        raise InvalidInputError(f"need s <= u <= t, got {s}, {u}, {t}")
    pts = _check_points(points, field.dim)
    direct = evolve(FlowRequest(field=field, s=s, t=t, points=pts, tol=tol))
    leg1 = evolve(FlowRequest(field=field, s=s, t=u, points=pts, tol=tol))
    leg2 = evolve(FlowRequest(field=field, s=u, t=t, points=leg1.images,
                              tol=tol))
    return float(np.max(np.linalg.norm(leg2.images - direct.images, axis=1)))


# ---------------------------------------------------------------------------
# two-sided modulus decay


@dataclass
class DecayReport:
    """Margins of the two-sided modulus decay estimate.

    For each start point z with r0 = |z| and measured
    g = log(|phi_{s,t}(z)| / |z|):

        lower_margin = g - (-C(r0) * K(s,t) - slack_log)
        upper_margin = (-c(r0) * M(s,t) + slack_log) - g

    slack_log = quadrature tolerance + 20 * ODE tolerance covers the
    numerical error in both g and the integrals.  The estimate holds
    when both margins are >= 0 for every point; witnesses collect the
    violating (z, r0, g, lower_log, upper_log) tuples.
    """

    points: int
    interval: tuple
    slack_log: float
    min_lower_margin: float
    min_upper_margin: float
    witnesses: list

    @property
    def passed(self) -> bool:
        return self.min_lower_margin >= 0.0 and self.min_upper_margin >= 0.0

    def to_json_dict(self) -> dict:
        return {
            "points": self.points,
            "interval": [self.interval[0], self.interval[1]],
            "slack_log": self.slack_log,
            "min_lower_margin": self.min_lower_margin,
            "min_upper_margin": self.min_upper_margin,
            "passed": self.passed,
            "witnesses": [
                {"z": [[c.real, c.imag] for c in w[0]], "r0": w[1],
                 "log_ratio": w[2], "lower_log": w[3], "upper_log": w[4]}
                for w in self.witnesses[:16]],
        }


def decay_bounds_check(field: FieldSpec, s: float, t: float, points,
                       tol: float = 1e-10) -> DecayReport:
    """Evolve points and compare the measured modulus ratio with the
    two-sided decay estimate.  Start points must be nonzero (the ratio
    is undefined at the origin)."""
    s, t = _check_times(s, t)
    pts = _check_points(points, field.dim)
    radii = np.linalg.norm(pts, axis=1)
    if np.any(radii == 0.0):
        raise InvalidInputError("decay bounds need nonzero start points")
    tol = _check_tol(tol)
    M_int = field.linear.M(t) - field.linear.M(s)
    K_int = field.linear.K(t) - field.linear.K(s)
    slack_log = field.linear.quad_tol + 20.0 * tol
    result = evolve(FlowRequest(field=field, s=s, t=t, points=pts, tol=tol))
    out_radii = np.linalg.norm(result.images, axis=1)
    min_lo = math.inf
    min_hi = math.inf
    witnesses = []
    for i in range(pts.shape[0]):
        r0 = float(radii[i])
        g = math.log(float(out_radii[i]) / r0)
        lower_log = -C_of(r0) * K_int
        upper_log = -c_of(r0) * M_int
        lo_margin = g - (lower_log - slack_log)
        hi_margin = (upper_log + slack_log) - g
        min_lo = min(min_lo, lo_margin)
        min_hi = min(min_hi, hi_margin)
        if lo_margin < 0.0 or hi_margin < 0.0:
            witnesses.append((pts[i].copy(), r0, g, lower_log, upper_log))
    return DecayReport(points=pts.shape[0], interval=(s, t),
                       slack_log=slack_log, min_lower_margin=float(min_lo),
                       min_upper_margin=float(min_hi), witnesses=witnesses)


# ---------------------------------------------------------------------------
# second-order jet of the evolution at the origin


@dataclass(frozen=True)
class Jet2:
    """Order-2 Taylor data of phi_{s,t} at 0:
    phi(z) = linear @ z + contract(quadratic, z, z) + O(|z|^3),
    with ``quadratic`` symmetric in its last two indices."""

    linear: np.ndarray
    quadratic: np.ndarray

    def symmetry_defect(self) -> float:
        return float(np.max(np.abs(
            self.quadratic - np.swapaxes(self.quadratic, 1, 2))))

    def packed_quadratic(self) -> np.ndarray:
        """Monomial coefficients, shape (dim, dim*(dim+1)//2).

        Column order is (j, k) with j <= k; off-diagonal tensor
        entries are doubled so each column is the full coefficient of
        the monomial z_j z_k.
        """
        q = self.linear.shape[0]
        cols = []
        for j in range(q):
            for k in range(j, q):
                col = self.quadratic[:, j, k]
                cols.append(col if j == k else 2.0 * col)
        return np.stack(cols, axis=1)


def jet2_transition(field: FieldSpec, s: float, t: float,
                    tol: float = 1e-10) -> Jet2:
    """Integrate the order-2 jet of phi_{s,t} at the origin.

    With A(tau) the linear part and H_tau the quadratic coefficient
    tensor of the field, the jet components solve, from J(s) = I,
    Q(s) = 0:

        J'           = -A(tau) J
        Q'[i, j, k]  = -(A(tau) Q)[i, j, k]
                       - sum_{a, b} H_tau[i, a, b] J[a, j] J[b, k]

    The quadratic equation is the chain rule for the second state
    derivative of -h(w, tau) along w = J z + Q(z, z) + O(3).
    """
    s, t = _check_times(s, t)
    tol = _check_tol(tol)
    q = field.dim
    nJ = q * q

    def rhs(tau, y):
        J = y[:nJ].reshape(q, q)
        Q = y[nJ:].reshape(q, q, q)
        A = field.linear.A(tau)
        H = field.quadratic_at(tau)
        dJ = -(A @ J)
        dQ = -np.einsum("ia,ajk->ijk", A, Q) \
            - np.einsum("iab,aj,bk->ijk", H, J, J)
        return np.concatenate([dJ.ravel(), dQ.ravel()])

    y0 = np.concatenate([np.eye(q, dtype=complex).ravel(),
                         np.zeros(q * q * q, dtype=complex)])
    y, _ = integrate_adaptive(rhs, s, t, y0, tol,
                              breakpoints=field.breakpoints)
    J = y[:nJ].reshape(q, q)
    Q = y[nJ:].reshape(q, q, q)
    Q = 0.5 * (Q + np.swapaxes(Q, 1, 2))
    return Jet2(linear=J, quadratic=Q)
