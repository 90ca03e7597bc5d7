"""The normalized limit maps f_t built from the contracting evolution.

Fix an accepted unit-mass schedule u_0 = 0 < u_1 < ... < u_N and let
Lam_m be the derivative at the origin of the one-step evolution
phi_{u_m, u_{m+1}} (a transition matrix of J' = -A(tau) J).  The
normalized approximants of the limit map at time t are

    g_m(t, z) = (Lam_0^-1 Lam_1^-1 ... Lam_{m-1}^-1) phi_{t, u_m}(z),

inverse factors applied by linear solves, never by forming inverses.
Successive increments g_{m+1} - g_m shrink geometrically: once the
evolved state has modulus <= r (the schedule's working radius, and the
decay bounds force that after a burn-in), each step multiplies the
increment by at most mu^2 / nu < 1, because the next evolution step is
quadratically close to its own linearization on |w| <= r (error
~ |w|^2 <= (mu^m r)^2) while the accumulated normalization grows only
like 1/nu per step.  The acceptance inequality mu^h < nu with h = 2 is
exactly summability of that bound, so the approximants are a Cauchy
sequence and ``eval`` returns their limit.

Budgets with h >= 3 (mass ratio ell >= 2) would need the approximants
normalized by higher-degree polynomial jets of the step maps, not just
the linear factors; that construction is not implemented and such
schedules are refused with ChainUnavailableError.

The family f_t(z) = lim_m g_m(t, z) satisfies f_s = f_t o phi_{s,t}
(checked by ``identity_residual``) and the transport equation
d/dt f_t(z) = (Df_t(z)) h(z, t) (checked by ``pde_residual``), and its
images form an increasing family of domains as t grows.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from .errors import (ChainUnavailableError, HorizonExhaustedError,
                     InvalidInputError)
from .fields import FieldSpec
from .flow import _check_tol, _evolve_one
from .linear import InverseTransitionProduct, transition_matrix
from .schedule import Schedule

#: increments below floor * (1 + |g|) are numerical noise, not signal
INCREMENT_FLOOR = 1e-13


@dataclass(frozen=True)
class ChainValue:
    """One limit-map evaluation.

    value is the converged approximant; m_used the last schedule index
    evaluated; last_increment the final approximant difference;
    converged records whether two consecutive increments fell below
    tolerance before the horizon ran out.  history holds
    (m, |state|, increment) per step for diagnostics.
    """

    value: np.ndarray
    m_used: int
    last_increment: float
    converged: bool
    history: tuple


class ChainEvaluator:
    """Evaluate the normalized limit maps of an accepted schedule.

    Parameters
    ----------
    field : FieldSpec
        The driving field; its linear part must be the path the
        schedule was built from.
    schedule : Schedule
        An accepted unit-mass schedule with contraction budget h = 2.
    tol_chain : float
        Stop once two consecutive approximant increments are below
        max(tol_chain, floor); also the advertised accuracy.
    tol_ode : float
        Local error tolerance for every evolution leg and transition
        matrix.
    """

    def __init__(self, field: FieldSpec, schedule: Schedule,
                 tol_chain: float = 1e-9, tol_ode: float = 1e-10):
        if not isinstance(schedule, Schedule):
            raise InvalidInputError("schedule must be a Schedule")
        if not schedule.accepted:
            raise InvalidInputError(
                "schedule was not accepted; build one whose contraction "
                "budget holds before evaluating limit maps")
        if schedule.h != 2:
            raise ChainUnavailableError(
                f"contraction budget h = {schedule.h} (mass ratio ell = "
                f"{schedule.ell:.6g} >= 2) needs approximants normalized by "
                "degree >= 2 polynomial jets of the step maps; only linear "
                "normalization is implemented, so this limit map is "
                "unavailable (fields with ell < 2 work)")
        if field.dim != field.linear.dim:
            raise InvalidInputError("field dimension mismatch")
        self.field = field
        self.schedule = schedule
        self.tol_chain = _check_tol(tol_chain)
        self.tol_ode = _check_tol(tol_ode)
        self._lock = threading.Lock()
        self._factors: list[np.ndarray] = []
        self._prefixes: list[InverseTransitionProduct] = [
            InverseTransitionProduct.identity(field.dim)]

    # -- normalization factors ------------------------------------------

    def _prefix(self, m: int) -> InverseTransitionProduct:
        """Accumulator applying Lam_0^-1 ... Lam_{m-1}^-1 (lazily built)."""
        with self._lock:
            while len(self._prefixes) <= m:
                j = len(self._factors)
                lam = transition_matrix(self.field.linear,
                                        self.schedule.u[j],
                                        self.schedule.u[j + 1],
                                        tol=self.tol_ode)
                self._factors.append(lam)
                self._prefixes.append(self._prefixes[-1].push(lam))
            return self._prefixes[m]

    def step_factor(self, m: int) -> np.ndarray:
        """Lam_m, the linearization of the step phi_{u_m, u_{m+1}}."""
        if not 0 <= m < self.schedule.horizon_N:
            raise InvalidInputError(f"step index {m} outside schedule")
        self._prefix(m + 1)
        with self._lock:
            return self._factors[m].copy()

    # -- evaluation ------------------------------------------------------

    def eval(self, t: float, z, *, min_steps: int = 2) -> ChainValue:
        """Limit map at time t applied to z (shape (dim,)), |z| < 1.

        Needs t within the schedule horizon (t <= u_N).  Convergence is
        declared after two consecutive increments below tolerance; if
        the horizon runs out first the best approximant is returned
        with converged=False.
        """
        u = self.schedule.u
        N = self.schedule.horizon_N
        t = float(t)
        if not math.isfinite(t) or t < 0.0:
            raise InvalidInputError(f"time {t} must be finite and >= 0")
        if t > u[N]:
            raise HorizonExhaustedError(
                f"time {t} exceeds the schedule horizon u_N = {u[N]:.6g}; "
                "rebuild the schedule with a larger N")
        z = np.asarray(z, dtype=complex).reshape(-1)
        if z.shape != (self.field.dim,):
            raise InvalidInputError(
                f"state must have shape ({self.field.dim},), got {z.shape}")
        nz = float(np.linalg.norm(z))
        if nz >= 1.0:
            raise InvalidInputError(f"state norm {nz:.6f} >= 1")
        m0 = 0
        while u[m0] < t:
            m0 += 1
        if nz == 0.0:
            return ChainValue(value=np.zeros(self.field.dim, dtype=complex),
                              m_used=m0, last_increment=0.0, converged=True,
                              history=())
        # Pure relative error control on every leg: the state decays like
        # exp(-M(u_m)) while the normalization grows like its inverse, so
        # any absolute error floor would be amplified into a noise floor
        # on the approximants.  Relative control is sound here because a
        # trajectory of a nonzero state never reaches 0 (solutions are
        # unique and 0 is a stationary point).
        if u[m0] > t:
            w, _ = _evolve_one(self.field, t, u[m0], z.copy(), self.tol_ode,
                               atol=0.0)
        else:
            w = z.copy()
        g_prev = self._prefix(m0).apply(w)
        history = []
        small_run = 0
        m = m0
        while m < N:
            w, _ = _evolve_one(self.field, u[m], u[m + 1], w, self.tol_ode,
                               atol=0.0)
            m += 1
            g = self._prefix(m).apply(w)
            inc = float(np.linalg.norm(g - g_prev))
            history.append((m, float(np.linalg.norm(w)), inc))
            g_prev = g
            floor = INCREMENT_FLOOR * (1.0 + float(np.linalg.norm(g)))
            if inc <= max(self.tol_chain, floor):
                small_run += 1
            else:
                small_run = 0
            if small_run >= 2 and m - m0 >= min_steps:
                return ChainValue(value=g, m_used=m, last_increment=inc,
                                  converged=True, history=tuple(history))
        last_inc = history[-1][2] if history else 0.0
        return ChainValue(value=g_prev, m_used=m, last_increment=last_inc,
                          converged=False, history=tuple(history))

    def eval_many(self, t: float, points) -> list[ChainValue]:
        """Evaluate the time-t limit map at each row of points."""
        pts = np.asarray(points, dtype=complex)
        if pts.ndim == 1:
            pts = pts[None, :]
        return [self.eval(t, pts[i]) for i in range(pts.shape[0])]

    # -- consistency checks ----------------------------------------------

    def identity_residual(self, s: float, t: float, z) -> float:
        """Relative defect of f_s(z) = f_t(phi_{s,t}(z)), s <= t."""
        s = float(s)
        t = float(t)
        if not 0.0 <= s <= t:
            raise InvalidInputError(f"need 0 <= s <= t, got {s}, {t}")
        z = np.asarray(z, dtype=complex).reshape(-1)
        left = self.eval(s, z).value
        w, _ = _evolve_one(self.field, s, t, z.copy(), self.tol_ode)
        right = self.eval(t, w).value
        return float(np.linalg.norm(left - right)
                     / (1.0 + np.linalg.norm(left)))

    def pde_residual(self, t: float, z, dt: float = 1e-4,
                     dz: float = 1e-5) -> float:
        """Relative defect of d/dt f_t(z) = Df_t(z) h(z, t).

        Time derivative by central difference over [t - dt, t + dt]
        (one-sided at t < dt); state derivative by central differences
        along each coordinate, legitimate since the maps are
        holomorphic in z.
        """
        t = float(t)
        z = np.asarray(z, dtype=complex).reshape(-1)
        q = self.field.dim
        if t >= dt:
            f_plus = self.eval(t + dt, z).value
            f_minus = self.eval(t - dt, z).value
            df_dt = (f_plus - f_minus) / (2.0 * dt)
        else:
            f_plus = self.eval(t + dt, z).value
            f_here = self.eval(t, z).value
            df_dt = (f_plus - f_here) / dt
        D = np.empty((q, q), dtype=complex)
        eye = np.eye(q, dtype=complex)
        for j in range(q):
            fp = self.eval(t, z + dz * eye[j]).value
            fm = self.eval(t, z - dz * eye[j]).value
            D[:, j] = (fp - fm) / (2.0 * dz)
        transport = D @ self.field.h(z, t)
        return float(np.linalg.norm(df_dt - transport)
                     / (1.0 + np.linalg.norm(transport)))

    def range_sample(self, t: float, *, radius: float = 0.5,
                     shells: int = 3, directions: int = 8, seed: int = 0,
                     spot_checks: int = 3) -> "RangeSample":
        """Sample the time-t limit map over shells in |z| <= radius.

        Also spot-checks the inclusion of earlier images: each checked
        point verifies f_0(z) = f_t(phi_{0,t}(z)), which is what makes
        the image domains increase with t.
        """
        if not 0.0 < radius < 1.0:
            raise InvalidInputError(f"radius {radius} outside (0, 1)")
        rng = np.random.default_rng(seed)
        raw = (rng.standard_normal((directions, self.field.dim))
               + 1j * rng.standard_normal((directions, self.field.dim)))
        dirs = raw / np.linalg.norm(raw, axis=1, keepdims=True)
        pts = np.concatenate(
            [radius * (k + 1) / shells * dirs for k in range(shells)], axis=0)
        values = []
        all_converged = True
        for i in range(pts.shape[0]):
            cv = self.eval(t, pts[i])
            values.append(cv.value)
            all_converged &= cv.converged
        residuals = [self.identity_residual(0.0, t, pts[i])
                     for i in range(min(spot_checks, pts.shape[0]))]
        return RangeSample(t=t, points=pts, values=np.array(values),
                           converged=all_converged,
                           inclusion_residuals=tuple(residuals))


@dataclass(frozen=True)
class RangeSample:
    """Sampled image of a limit map with inclusion spot-check residuals."""

    t: float
    points: np.ndarray
    values: np.ndarray
    converged: bool
    inclusion_residuals: tuple

    def max_inclusion_residual(self) -> float:
        return max(self.inclusion_residuals) if self.inclusion_residuals \
            else 0.0
