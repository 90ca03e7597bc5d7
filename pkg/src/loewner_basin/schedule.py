"""Unit-mass discretization of the time axis and its contraction budget.

Let m(t) <= k(t) be the Hermitian-part eigenvalue bounds of the linear
part A(t), both positive, with running integrals M and K.  The
discretization places times u_0 = 0 < u_1 < u_2 < ... by unit mass:

    M(u_n) = n,

so every step contracts the modulus by at least exp(-c(r0)) for states
of modulus r0 (upper decay bound), while the lower decay bound keeps
each step's contraction above exp(-C(r0) * (K(u_{n+1}) - K(u_n))).

The working radius balances the two.  With ell >= sup k/m and h the
least integer strictly greater than ell, choose r so that

    C(r)^2 = (1 + h / ell) / 2,    C(r) = (1 + r)/(1 - r),

i.e. r = (sqrt(target) - 1) / (sqrt(target) + 1).  Writing
mu = exp(-c(r)) for the guaranteed per-step decay on |z| <= r and
nu_n = exp(-C(r) * (K(u_{n+1}) - K(u_n))) for the worst admissible
single-step decay, the schedule is accepted when

    mu ** h < min_n nu_n,

which is exactly what the inverse-transition chain construction needs:
h consecutive guaranteed contractions beat one worst-case step, making
successive approximants a geometric Cauchy sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (HorizonExhaustedError, InvalidInputError,
                     ScheduleRejectedError)
from .fields import C_of, c_of
from .linear import LinearPath, ell_estimate

_MAX_BRACKET_DOUBLINGS = 80
_MAX_ROOT_ITERS = 200


@dataclass(frozen=True)
class Schedule:
    """A unit-mass discretization with its contraction budget.

    Attributes
    ----------
    u : tuple of float
        The times u_0 = 0, u_1, ..., u_N with M(u_n) = n.
    ell : float
        The mass-ratio bound sup k/m used to pick the radius.
    ell_source : str
        'user' when supplied, 'grid-estimate' when measured.
    h : int
        Least integer strictly greater than ell.
    r : float
        Working radius, C(r)^2 = (1 + h/ell) / 2.
    mu : float
        Guaranteed per-step decay factor exp(-c(r)) on |z| <= r.
    nu : float
        Worst admissible per-step decay, min of nu_per_step.
    nu_per_step : tuple of float
        exp(-C(r) * (K(u_{n+1}) - K(u_n))) for each step.
    horizon_N : int
        Number of steps (len(u) - 1).
    accepted : bool
        Whether mu ** h < nu holds strictly.
    """

    u: tuple
    ell: float
    ell_source: str
    h: int
    r: float
    mu: float
    nu: float
    nu_per_step: tuple
    horizon_N: int
    accepted: bool

    def to_json_dict(self) -> dict:
        return {
            "ell": self.ell,
            "h": self.h,
            "r": self.r,
            "mu": self.mu,
            "nu": self.nu,
            "horizon_N": self.horizon_N,
            "u": list(self.u),
            "nu_per_step": list(self.nu_per_step),
            "accepted": self.accepted,
        }


def compute_times(path: LinearPath, N: int, tol: float = 1e-10,
                  max_time: float = 1e6) -> tuple:
    """Solve M(u_n) = n for n = 0..N.

    Brackets each time by doubling past the previous one, then closes
    in with a bisection-guarded secant until |M(u) - n| <= tol or the
    bracket collapses to relative width 1e-15.  Raises
    HorizonExhaustedError when the mass M cannot reach N before
    ``max_time`` (the field stops contracting too early).
    """
    if N < 1:
        raise InvalidInputError(f"horizon N must be >= 1, got {N}")
    if tol <= 0.0:
        raise InvalidInputError("tol must be positive")
    us = [0.0]
    for n in range(1, N + 1):
        lo = us[-1]
        flo = path.M(lo) - n
        step = max(1.0, (us[-1] - us[-2]) if n >= 2 else 1.0)
        hi = lo + step
        fhi = path.M(hi) - n
        doublings = 0
        while fhi < 0.0:
            step *= 2.0
            hi = lo + step
            if hi > max_time or doublings > _MAX_BRACKET_DOUBLINGS:
                raise HorizonExhaustedError(
                    f"mass integral reaches only {path.M(min(hi, max_time)):.6g}"
                    f" < {n} before t = {max_time:g}; cannot place time u_{n}")
            fhi = path.M(hi) - n
            doublings += 1
        for _ in range(_MAX_ROOT_ITERS):
            if fhi != flo:
                cand = hi - fhi * (hi - lo) / (fhi - flo)
            else:
                cand = 0.5 * (lo + hi)
            mid = 0.5 * (lo + hi)
            # keep the secant candidate only if it lands well inside
            width = hi - lo
            if not (lo + 0.01 * width <= cand <= hi - 0.01 * width):
                cand = mid
            fcand = path.M(cand) - n
            if abs(fcand) <= tol:
                lo = cand
                break
            if fcand < 0.0:
                lo, flo = cand, fcand
            else:
                hi, fhi = cand, fcand
            if hi - lo <= 1e-15 * max(1.0, hi):
                lo = 0.5 * (lo + hi)
                break
        us.append(float(lo))
    return tuple(us)


def _least_integer_above(x: float) -> int:
    # floor(x) + 1 > x for every float x, and no smaller integer is
    return int(math.floor(x)) + 1


def radius_for(ell: float, h: int) -> float:
    """Working radius from C(r)^2 = (1 + h/ell) / 2."""
    target = (1.0 + h / ell) / 2.0
    if target <= 1.0:
        raise InvalidInputError(
            f"contraction target {target} <= 1 (need h > ell)")
    root = math.sqrt(target)
    return (root - 1.0) / (root + 1.0)


def build_schedule(path: LinearPath, N: int = 30, ell: float | None = None,
                   *, tol: float = 1e-10, max_time: float = 1e6,
                   ell_grid: int = 4097, strict: bool = True) -> Schedule:
    """Compute the unit-mass times and the contraction budget.

    When ``ell`` is None it is measured as max k/m over a uniform grid
    of ``ell_grid`` points on [0, u_N] merged with the declared
    breakpoints.  With ``strict`` (default) a schedule whose budget
    fails mu**h < nu raises ScheduleRejectedError carrying the failing
    step and the full schedule; otherwise it is returned with
    ``accepted=False``.
    """
    u = compute_times(path, N, tol=tol, max_time=max_time)
    if ell is None:
        grid = np.union1d(np.linspace(0.0, u[-1], ell_grid),
                          [b for b in path.breakpoints if 0.0 <= b <= u[-1]])
        ell_value = float(ell_estimate(path, grid))
        ell_source = "grid-estimate"
    else:
        ell_value = float(ell)
        if ell_value < 1.0:
            raise InvalidInputError(
                f"ell must be >= 1 (it bounds sup k/m and k >= m), got {ell_value}")
        ell_source = "user"
    h = _least_integer_above(ell_value)
    r = radius_for(ell_value, h)
    mu = math.exp(-c_of(r))
    Cr = C_of(r)
    Ks = [path.K(t) for t in u]
    nu_per_step = tuple(math.exp(-Cr * (Ks[n + 1] - Ks[n]))
                        for n in range(N))
    nu = min(nu_per_step)
    accepted = mu ** h < nu
    sched = Schedule(u=u, ell=ell_value, ell_source=ell_source, h=h, r=r,
                     mu=mu, nu=nu, nu_per_step=nu_per_step, horizon_N=N,
                     accepted=accepted)
    if strict and not accepted:
        failing = int(np.argmin(nu_per_step))
        raise ScheduleRejectedError(
            f"contraction budget fails: mu**h = {mu ** h:.6g} >= "
            f"nu = {nu:.6g} (worst step {failing})",
            failing_n=failing, schedule=sched)
    return sched


def log_ratio_check(path: LinearPath, schedule: Schedule) -> float:
    """Largest per-step mass-ratio excess max_n (K(u_{n+1}) - K(u_n))
    - ell * (M(u_{n+1}) - M(u_n)).

    Nonpositive (up to quadrature error) exactly when ell really
    bounds k/m along the schedule, which is what makes every
    nu_n >= exp(-C(r) * ell).
    """
    u = schedule.u
    worst = -math.inf
    for n in range(schedule.horizon_N):
        dK = path.K(u[n + 1]) - path.K(u[n])
        dM = path.M(u[n + 1]) - path.M(u[n])
        worst = max(worst, dK - schedule.ell * dM)
    return float(worst)


@dataclass
class ContractionReport:
    """Measured per-step modulus ratios against the [nu_n, mu] sandwich
    for start states of modulus <= r."""

    steps: int
    directions: int
    min_lower_margin: float
    min_upper_margin: float
    witnesses: list

    @property
    def passed(self) -> bool:
        return self.min_lower_margin >= 0.0 and self.min_upper_margin >= 0.0

    def to_json_dict(self) -> dict:
        return {"steps": self.steps, "directions": self.directions,
                "min_lower_margin": self.min_lower_margin,
                "min_upper_margin": self.min_upper_margin,
                "passed": self.passed,
                "witnesses": [{"step": w[0], "ratio": w[1],
                               "lower": w[2], "upper": w[3]}
                              for w in self.witnesses[:16]]}


def contraction_check(field, schedule: Schedule, *, directions: int = 32,
                      seed: int = 0, tol: float = 1e-10,
                      max_steps: int | None = None) -> ContractionReport:
    """Evolve shell states of modulus r through each schedule step and
    compare measured ratios |phi(z)| / |z| with the sandwich
    [nu_n * (1 - slack), mu * (1 + slack)], slack = 100 * tol + 1e-9.

    The field's linear part must be the path the schedule was built
    from; states start on the working-radius shell.
    """
    from .flow import FlowRequest, evolve  # local import to avoid a cycle

    if field.linear.dim != field.dim:
        raise InvalidInputError("field dimension mismatch")
    rng = np.random.default_rng(seed)
    raw = (rng.standard_normal((directions, field.dim))
           + 1j * rng.standard_normal((directions, field.dim)))
    dirs = raw / np.linalg.norm(raw, axis=1, keepdims=True)
    shell = schedule.r * dirs
    slack = 100.0 * tol + 1e-9
    n_steps = schedule.horizon_N if max_steps is None \
        else min(max_steps, schedule.horizon_N)
    min_lo = math.inf
    min_hi = math.inf
    witnesses = []
    for n in range(n_steps):
        res = evolve(FlowRequest(field=field, s=schedule.u[n],
                                 t=schedule.u[n + 1], points=shell, tol=tol))
        ratios = np.linalg.norm(res.images, axis=1) / schedule.r
        lower = schedule.nu_per_step[n] * (1.0 - slack)
        upper = schedule.mu * (1.0 + slack)
        lo_margin = float(np.min(ratios) - lower)
        hi_margin = float(upper - np.max(ratios))
        min_lo = min(min_lo, lo_margin)
        min_hi = min(min_hi, hi_margin)
        if lo_margin < 0.0 or hi_margin < 0.0:
            bad = int(np.argmin(ratios)) if lo_margin < 0.0 \
                else int(np.argmax(ratios))
            witnesses.append((n, float(ratios[bad]), lower, upper))
    return ContractionReport(steps=n_steps, directions=directions,
                             min_lower_margin=min_lo, min_upper_margin=min_hi,
                             witnesses=witnesses)
