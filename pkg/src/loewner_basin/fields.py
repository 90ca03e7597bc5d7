"""Vector fields h(z, t) = A(t) z + (higher order) on the unit ball of C^q.

A field drives the contracting flow z' = -h(z, t).  Membership in the
admissible class requires h(0, t) = 0 and Re<h(z, t), z> > 0 for every
z != 0 in the open unit ball, so the origin attracts.  Around that
this module provides:

* ``FieldSpec``: dimension, validated linear part (a ``LinearPath``),
  a vectorized remainder callable with zero value and zero Jacobian at
  the origin, optional exact quadratic coefficients at 0, declared
  time breakpoints, and a regularity tag;
* built-in families via ``builtin_field``: ``constant-linear``,
  ``diagonal-periodic``, ``koebe-1d`` (the one-dimensional field
  z (1 - z) / (1 + z) whose chain is the Koebe function), and
  ``quadratic-perturbation``;
* sampling checks: ``class_n_check`` (positivity of Re<h, z>),
  ``gurganus_check`` (the sandwich c(|z|) Re<A z, z> <= Re<h, z> <=
  C(|z|) Re<A z, z> with c(r) = (1 - r)/(1 + r), C(r) = 1/c(r)), and
  ``growth_check`` (|h(z, t)| <= 4 r / (1 - r)^2 * ||A(t)|| on
  |z| <= r);
* a strict JSON file format for custom polynomial fields (unknown
  keys rejected) via ``load_field_file``;
* ``builtin_corpus``: the fixed list of named instances exercised by
  the verification suite.

All samplers draw deterministic points from a seeded generator, so a
report is reproducible byte for byte from (config, seed).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from .errors import (FieldRejectedError, InvalidInputError,
                     UnknownFamilyError)
from .linear import (MAX_DIM, LinearPath, operator_norm, validate_matrix)

#: slack below which a sampled sandwich/growth inequality counts as violated
INEQUALITY_SLACK = -1e-10

_FD_STEP = 1e-5  # complex central-difference step for quadratic jets


def c_of(r: float) -> float:
    """Lower sandwich gain c(r) = (1 - r) / (1 + r), decreasing on [0, 1)."""
    if not 0.0 <= r < 1.0:
        raise InvalidInputError(f"radius {r} outside [0, 1)")
    return (1.0 - r) / (1.0 + r)


def C_of(r: float) -> float:
    """Upper sandwich gain C(r) = (1 + r) / (1 - r) = 1 / c(r)."""
    if not 0.0 <= r < 1.0:
        raise InvalidInputError(f"radius {r} outside [0, 1)")
    return (1.0 + r) / (1.0 - r)


@dataclass(frozen=True)
class SamplePlan:
    """Deterministic sampling plan: radius shells, directions per shell,
    time grid, and the generator seed."""

    radii: tuple = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
    directions: int = 4096
    times: tuple = (0.0, 0.5, 1.0, 2.0, 4.0)
    seed: int = 0

    def __post_init__(self):
        for r in self.radii:
            if not 0.0 < r < 1.0:
                raise InvalidInputError(f"shell radius {r} outside (0, 1)")
        if self.directions < 1:
            raise InvalidInputError("directions must be >= 1")

    def states(self, dim: int) -> np.ndarray:
        """All sample states, shape (len(radii) * directions, dim)."""
        rng = np.random.default_rng(self.seed)
        raw = (rng.standard_normal((self.directions, dim))
               + 1j * rng.standard_normal((self.directions, dim)))
        norms = np.linalg.norm(raw, axis=1, keepdims=True)
        dirs = raw / norms
        shells = [r * dirs for r in self.radii]
        return np.concatenate(shells, axis=0)


@dataclass
class FieldSpec:
    """A validated admissible vector field.

    Attributes
    ----------
    dim : int
        Ambient complex dimension q, 1 <= q <= 8.
    linear : LinearPath
        The linear part t -> A(t) with its quadrature caches.
    remainder : callable(z, t) -> ndarray
        h(z, t) - A(t) z; must vanish to second order at z = 0 and
        broadcast over leading axes of z with shape (..., q).
    quadratic : None, ndarray or callable(t) -> ndarray
        Exact quadratic coefficients of h at 0 as a (q, q, q) tensor
        symmetric in its last two indices; None means "extract by
        central finite differences when needed".
    family_tag : str
        Name of the construction recipe ("custom" for file-loaded).
    breakpoints : tuple of float
        Times where h may jump in t; integrators never straddle them.
    regularity : str
        Declared smoothness in t between breakpoints.
    """

    dim: int
    linear: LinearPath
    remainder: Callable[[np.ndarray, float], np.ndarray]
    quadratic: object = None
    family_tag: str = "custom"
    breakpoints: tuple = ()
    regularity: str = "piecewise-continuous-in-t"

    def __post_init__(self):
        if not 1 <= self.dim <= MAX_DIM:
            raise InvalidInputError(f"dimension {self.dim} outside [1, {MAX_DIM}]")
        if self.linear.dim != self.dim:
            raise InvalidInputError("linear part dimension mismatch")
        self.breakpoints = tuple(sorted(set(self.breakpoints)
                                        | set(self.linear.breakpoints)))

    def A(self, t: float) -> np.ndarray:
        return self.linear.A(t)

    def h(self, z: np.ndarray, t: float) -> np.ndarray:
        """Evaluate the field; z has shape (q,) or (..., q)."""
        z = np.asarray(z, dtype=complex)
        A = self.linear.A(t)
        if z.ndim == 1:
            return A @ z + self.remainder(z, t)
        return np.einsum("ij,...j->...i", A, z) + self.remainder(z, t)

    def quadratic_at(self, t: float) -> np.ndarray:
        """Quadratic coefficient tensor H with h_i = (A z)_i +
        sum_{j,k} H[i, j, k] z_j z_k + O(|z|^3), symmetric in (j, k).

        Uses the declared exact tensor when present, otherwise complex
        central finite differences of the remainder at the origin with
        step 1e-5 (diagonal two-point, off-diagonal four-point, both
        with cubic-term cancellation).
        """
        if self.quadratic is not None:
            Hq = self.quadratic(t) if callable(self.quadratic) else self.quadratic
            return np.asarray(Hq, dtype=complex)
        q = self.dim
        d = _FD_STEP
        Hq = np.zeros((q, q, q), dtype=complex)
        eye = np.eye(q, dtype=complex)
        for i in range(q):
            ei = eye[i]
            plus = self.remainder(d * ei, t)
            minus = self.remainder(-d * ei, t)
            Hq[:, i, i] = (plus + minus) / (2.0 * d * d)
        for i in range(q):
            for j in range(i + 1, q):
                u = eye[i]
                v = eye[j]
                val = (self.remainder(d * (u + v), t)
                       - self.remainder(d * (u - v), t)
                       - self.remainder(d * (-u + v), t)
                       + self.remainder(d * (-u - v), t)) / (8.0 * d * d)
                Hq[:, i, j] = val
                Hq[:, j, i] = val
        return Hq


# ---------------------------------------------------------------------------
# built-in families


def _zero_remainder(z, t):
    return np.zeros_like(np.asarray(z, dtype=complex))


def _as_float_list(x, q, name) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.shape != (q,):
        raise InvalidInputError(f"{name} must be a list of {q} reals")
    return arr


def _constant_linear(params: dict) -> FieldSpec:
    if "matrix" in params:
        A = validate_matrix(params["matrix"])
    elif "dim" in params:
        q = int(params["dim"])
        if not 1 <= q <= MAX_DIM:
            raise InvalidInputError(f"dim {q} outside [1, {MAX_DIM}]")
        A = np.eye(q, dtype=complex)
    else:
        raise InvalidInputError("constant-linear needs 'matrix' or 'dim'")
    extra = set(params) - {"matrix", "dim"}
    if extra:
        raise InvalidInputError(f"unknown constant-linear params: {sorted(extra)}")
    path = LinearPath.constant(A)
    return FieldSpec(dim=path.dim, linear=path, remainder=_zero_remainder,
                     quadratic=np.zeros((path.dim,) * 3, dtype=complex),
                     family_tag="constant-linear")


def _diagonal_periodic(params: dict) -> FieldSpec:
    base = params.get("base", (1.0, 1.0))
    if not isinstance(base, (list, tuple)):
        raise InvalidInputError("base must be a list of reals")
    q = len(base)
    if not 1 <= q <= MAX_DIM:
        raise InvalidInputError(f"dim {q} outside [1, {MAX_DIM}]")
    base = _as_float_list(base, q, "base")
    # only the last diagonal entry oscillates unless amplitudes are given
    amplitude = _as_float_list(params.get("amplitude", [0.0] * (q - 1) + [0.5]),
                               q, "amplitude")
    frequency = _as_float_list(params.get("frequency", [1.0] * q), q, "frequency")
    phase = _as_float_list(params.get("phase", [0.0] * q), q, "phase")
    extra = set(params) - {"base", "amplitude", "frequency", "phase"}
    if extra:
        raise InvalidInputError(f"unknown diagonal-periodic params: {sorted(extra)}")

    def evaluate(t: float) -> np.ndarray:
        return np.diag(base + amplitude * np.sin(frequency * t + phase)
                       ).astype(complex)

    path = LinearPath.from_callable(q, evaluate)
    return FieldSpec(dim=q, linear=path, remainder=_zero_remainder,
                     quadratic=np.zeros((q, q, q), dtype=complex),
                     family_tag="diagonal-periodic")


def _koebe_remainder(z, t):
    z = np.asarray(z, dtype=complex)
    w = z[..., 0]
    return (-2.0 * w * w / (1.0 + w))[..., None]


def _koebe_1d(params: dict) -> FieldSpec:
    if params:
        raise InvalidInputError(f"koebe-1d takes no params, got {sorted(params)}")
    path = LinearPath.constant(np.eye(1, dtype=complex))
    Hq = np.zeros((1, 1, 1), dtype=complex)
    Hq[0, 0, 0] = -2.0
    return FieldSpec(dim=1, linear=path, remainder=_koebe_remainder,
                     quadratic=Hq, family_tag="koebe-1d")


def _default_quadratic_tensor(q: int) -> np.ndarray:
    # B(z)_i = z_{(i+1) mod q}^2, a simple fully nonlinear default
    B = np.zeros((q, q, q), dtype=complex)
    for i in range(q):
        j = (i + 1) % q
        B[i, j, j] = 1.0
    return B


def _quadratic_perturbation(params: dict) -> FieldSpec:
    if "matrix" in params:
        A = validate_matrix(params["matrix"])
        q = A.shape[0]
    elif "dim" in params:
        q = int(params["dim"])
        if not 1 <= q <= MAX_DIM:
            raise InvalidInputError(f"dim {q} outside [1, {MAX_DIM}]")
        A = np.eye(q, dtype=complex)
    else:
        raise InvalidInputError("quadratic-perturbation needs 'matrix' or 'dim'")
    eps = float(params.get("epsilon", 0.1))
    if "quadratic" in params:
        B = np.asarray(params["quadratic"], dtype=complex)
        if B.shape != (q, q, q):
            raise InvalidInputError(f"quadratic tensor must have shape {(q,q,q)}")
        B = 0.5 * (B + np.swapaxes(B, 1, 2))
    else:
        B = _default_quadratic_tensor(q)
    extra = set(params) - {"matrix", "dim", "epsilon", "quadratic"}
    if extra:
        raise InvalidInputError(
            f"unknown quadratic-perturbation params: {sorted(extra)}")
    T = eps * B

    def remainder(z, t):
        z = np.asarray(z, dtype=complex)
        return np.einsum("ijk,...j,...k->...i", T, z, z)

    path = LinearPath.constant(A)
    spec = FieldSpec(dim=q, linear=path, remainder=remainder, quadratic=T,
                     family_tag="quadratic-perturbation")
    report = class_n_check(spec)
    if not report.passed:
        raise FieldRejectedError(
            "quadratic-perturbation parameters break the positivity of "
            f"Re<h(z,t), z> on the validation sample (min {report.min_inner:.3e})",
            witnesses=report.witnesses[:8])
    return spec


_FAMILIES = {
    "constant-linear": _constant_linear,
    "diagonal-periodic": _diagonal_periodic,
    "koebe-1d": _koebe_1d,
    "quadratic-perturbation": _quadratic_perturbation,
}


def builtin_field(family: str, params: dict | None = None) -> FieldSpec:
    """Construct a built-in family member.

    Families: 'constant-linear' (params: matrix | dim),
    'diagonal-periodic' (base, amplitude, frequency, phase),
    'koebe-1d' (no params), 'quadratic-perturbation' (matrix | dim,
    epsilon, quadratic tensor).  Unknown family names and unknown or
    malformed params are rejected; quadratic-perturbation parameters
    that break positivity on the validation sample are rejected with
    witnesses.
    """
    if family not in _FAMILIES:
        raise UnknownFamilyError(
            f"unknown family {family!r}; available: {sorted(_FAMILIES)}")
    return _FAMILIES[family](dict(params or {}))


def builtin_corpus() -> list[tuple[str, FieldSpec]]:
    """The named instances exercised by the verification suite."""
    return [
        ("constant-identity-1d", builtin_field("constant-linear", {"dim": 1})),
        ("constant-identity-2d", builtin_field("constant-linear", {"dim": 2})),
        ("constant-diag-1-2",
         builtin_field("constant-linear", {"matrix": [[1, 0], [0, 2]]})),
        ("constant-diag-2-3",
         builtin_field("constant-linear", {"matrix": [[2, 0], [0, 3]]})),
        ("diagonal-periodic", builtin_field("diagonal-periodic", {})),
        ("diagonal-periodic-mild",
         builtin_field("diagonal-periodic",
                       {"base": [1.0, 1.0], "amplitude": [0.25, 0.25],
                        "frequency": [1.0, 1.0], "phase": [0.0, 1.5707963267948966]})),
        ("koebe-1d", builtin_field("koebe-1d")),
        ("quadratic-perturbation",
         builtin_field("quadratic-perturbation", {"dim": 2, "epsilon": 0.25})),
    ]


# ---------------------------------------------------------------------------
# sampling checks


def _inner_re(h: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Re<h, z> = Re sum_i h_i conj(z_i), over the last axis."""
    return np.real(np.sum(h * np.conj(z), axis=-1))


@dataclass
class ClassNReport:
    """Positivity of Re<h(z, t), z> over the sample plan.

    min_inner is the minimum of Re<h, z> / |z|^2; witnesses hold the
    (z, t, value) triples where it was <= 0.
    """

    samples: int
    min_inner: float
    witnesses: list

    @property
    def passed(self) -> bool:
        return self.min_inner > 0.0

    def to_json_dict(self) -> dict:
        return {"samples": self.samples, "min_inner": self.min_inner,
                "passed": self.passed,
                "witnesses": [_witness_json(w) for w in self.witnesses[:16]]}


def _witness_json(w) -> dict:
    z, t, value = w
    return {"z": [[float(c.real), float(c.imag)] for c in np.atleast_1d(z)],
            "t": float(t), "value": float(value)}


def class_n_check(field: FieldSpec, plan: SamplePlan | None = None) -> ClassNReport:
    """Sample Re<h(z, t), z> / |z|^2 over shells, directions and times."""
    plan = plan or SamplePlan()
    Z = plan.states(field.dim)
    nz2 = np.sum(np.abs(Z) ** 2, axis=1)
    min_inner = math.inf
    witnesses = []
    for t in plan.times:
        vals = _inner_re(field.h(Z, t), Z) / nz2
        i = int(np.argmin(vals))
        if vals[i] < min_inner:
            min_inner = float(vals[i])
        bad = np.nonzero(vals <= 0.0)[0]
        for j in bad[:4]:
            witnesses.append((Z[j].copy(), float(t), float(vals[j])))
    return ClassNReport(samples=Z.shape[0] * len(plan.times),
                        min_inner=min_inner, witnesses=witnesses)


@dataclass
class GurganusReport:
    """Sandwich c(|z|) Re<A z, z> <= Re<h, z> <= C(|z|) Re<A z, z>.

    Slacks are the raw differences (actual - lower) and
    (upper - actual); both must stay >= -1e-10 on every sample.
    """

    samples: int
    min_lower_slack: float
    min_upper_slack: float
    witnesses: list

    @property
    def passed(self) -> bool:
        return (self.min_lower_slack >= INEQUALITY_SLACK
                and self.min_upper_slack >= INEQUALITY_SLACK)

    def to_json_dict(self) -> dict:
        return {"samples": self.samples,
                "min_lower_slack": self.min_lower_slack,
                "min_upper_slack": self.min_upper_slack,
                "passed": self.passed,
                "witnesses": [_witness_json(w) for w in self.witnesses[:16]]}


def gurganus_check(field: FieldSpec, plan: SamplePlan | None = None) -> GurganusReport:
    """Verify the sandwich inequalities on the sample plan.

    Assumes the positivity check already passed (the sandwich bounds
    are vacuous where Re<A z, z> <= 0).
    """
    plan = plan or SamplePlan()
    Z = plan.states(field.dim)
    radii = np.linalg.norm(Z, axis=1)
    cs = (1.0 - radii) / (1.0 + radii)
    Cs = 1.0 / cs
    min_lo = math.inf
    min_hi = math.inf
    witnesses = []
    for t in plan.times:
        A = field.linear.A(t)
        lin = _inner_re(np.einsum("ij,...j->...i", A, Z), Z)
        act = _inner_re(field.h(Z, t), Z)
        lo_slack = act - cs * lin
        hi_slack = Cs * lin - act
        min_lo = min(min_lo, float(np.min(lo_slack)))
        min_hi = min(min_hi, float(np.min(hi_slack)))
        for slack in (lo_slack, hi_slack):
            bad = np.nonzero(slack < INEQUALITY_SLACK)[0]
            for j in bad[:4]:
                witnesses.append((Z[j].copy(), float(t), float(slack[j])))
    return GurganusReport(samples=Z.shape[0] * len(plan.times),
                          min_lower_slack=min_lo, min_upper_slack=min_hi,
                          witnesses=witnesses)


@dataclass
class GrowthReport:
    """Bound |h(z, t)| <= 4 r (1 - r)^-2 ||A(t)|| on sampled |z| <= r."""

    samples: int
    radius: float
    min_slack: float
    witnesses: list

    @property
    def passed(self) -> bool:
        return self.min_slack >= INEQUALITY_SLACK

    def to_json_dict(self) -> dict:
        return {"samples": self.samples, "radius": self.radius,
                "min_slack": self.min_slack, "passed": self.passed,
                "witnesses": [_witness_json(w) for w in self.witnesses[:16]]}


def growth_check(field: FieldSpec, r: float, times=(0.0, 0.5, 1.0, 2.0),
                 *, directions: int = 512, seed: int = 0) -> GrowthReport:
    """Verify the growth bound at shells of radius up to r (0 < r < 1)."""
    if not 0.0 < r < 1.0:
        raise InvalidInputError(f"radius {r} outside (0, 1)")
    plan = SamplePlan(radii=(0.25 * r, 0.5 * r, 0.75 * r, r),
                      directions=directions, times=tuple(times), seed=seed)
    Z = plan.states(field.dim)
    bound_coeff = 4.0 * r / (1.0 - r) ** 2
    min_slack = math.inf
    witnesses = []
    for t in plan.times:
        bound = bound_coeff * operator_norm(field.linear.A(t))
        mags = np.linalg.norm(field.h(Z, t), axis=-1)
        slack = bound - mags
        i = int(np.argmin(slack))
        if slack[i] < min_slack:
            min_slack = float(slack[i])
        bad = np.nonzero(slack < INEQUALITY_SLACK)[0]
        for j in bad[:4]:
            witnesses.append((Z[j].copy(), float(t), float(slack[j])))
    return GrowthReport(samples=Z.shape[0] * len(plan.times), radius=r,
                        min_slack=min_slack, witnesses=witnesses)


def remainder_order_check(field: FieldSpec, times=(0.0, 1.0),
                          steps=(1e-3, 5e-4)) -> float:
    """Richardson estimate of the remainder's Jacobian norm at 0.

    The remainder must vanish to second order, so the extrapolated
    Jacobian should be numerically zero (<= 1e-6 for valid fields).
    Returns the largest norm over the given times.
    """
    q = field.dim
    eye = np.eye(q, dtype=complex)
    worst = 0.0
    d1, d2 = steps

    def jac(dd, t):
        cols = [(field.remainder(dd * eye[j], t)
                 - field.remainder(-dd * eye[j], t)) / (2.0 * dd)
                for j in range(q)]
        return np.stack(cols, axis=1)

    for t in times:
        J = (4.0 * jac(d2, t) - jac(d1, t)) / 3.0
        worst = max(worst, float(np.linalg.norm(J)))
    return worst


# ---------------------------------------------------------------------------
# custom field files


_TOP_KEYS = {"dim", "breakpoints", "linear", "quadratic"}
_CONST_BLOCK_KEYS = {"until", "constant"}
_TRIG_BLOCK_KEYS = {"until", "base", "sin", "cos", "frequency"}
_QUAD_KEYS = {"out_index", "in_indices", "coeff_re", "coeff_im", "time_profile"}
_PROFILE_KEYS = {"kind", "offset", "amplitude", "frequency", "phase"}


def _parse_matrix(obj, q: int, name: str) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != q:
        raise InvalidInputError(f"{name} must be a {q}x{q} matrix")
    M = np.zeros((q, q), dtype=complex)
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != q:
            raise InvalidInputError(f"{name} row {i} must have {q} entries")
        for j, entry in enumerate(row):
            if isinstance(entry, (int, float)):
                M[i, j] = float(entry)
            elif (isinstance(entry, list) and len(entry) == 2
                  and all(isinstance(x, (int, float)) for x in entry)):
                M[i, j] = complex(entry[0], entry[1])
            else:
                raise InvalidInputError(
                    f"{name}[{i}][{j}] must be a real or an [re, im] pair")
    return M


def _parse_profile(obj):
    if obj == "constant":
        return None  # means multiply by 1
    if not isinstance(obj, dict):
        raise InvalidInputError("time_profile must be 'constant' or an object")
    extra = set(obj) - _PROFILE_KEYS
    if extra:
        raise InvalidInputError(f"unknown time_profile keys: {sorted(extra)}")
    if obj.get("kind") != "trig":
        raise InvalidInputError("time_profile.kind must be 'trig'")
    off = float(obj.get("offset", 0.0))
    amp = float(obj.get("amplitude", 1.0))
    freq = float(obj.get("frequency", 1.0))
    ph = float(obj.get("phase", 0.0))
    return (off, amp, freq, ph)


def parse_field_config(cfg: dict) -> FieldSpec:
    """Build a FieldSpec from the strict JSON schema.

    Top-level keys: ``dim`` (required), ``linear`` (required, a list of
    piecewise blocks), ``breakpoints`` (optional), ``quadratic``
    (optional, a list of coefficient records).  Unknown keys anywhere
    are rejected.  Matrix entries are reals or [re, im] pairs; indices
    are 0-based.  A linear block is either
    ``{"until": T | null, "constant": M}`` or
    ``{"until": ..., "base": M, "sin": M, "cos": M, "frequency": w}``
    meaning A(t) = base + sin(w t) * sin_M + cos(w t) * cos_M on its
    time span; blocks partition [0, inf) in order, the last must have
    ``until: null``.  A quadratic record
    ``{"out_index": i, "in_indices": [j, k], "coeff_re": a,
    "coeff_im": b, "time_profile": p}`` adds
    (a + i b) p(t) z_j z_k to component i, where p is 1 for
    "constant" or offset + amplitude * sin(frequency t + phase) for
    ``{"kind": "trig", ...}``.
    """
    if not isinstance(cfg, dict):
        raise InvalidInputError("field config must be a JSON object")
    extra = set(cfg) - _TOP_KEYS
    if extra:
        raise InvalidInputError(f"unknown field config keys: {sorted(extra)}")
    if "dim" not in cfg or "linear" not in cfg:
        raise InvalidInputError("field config requires 'dim' and 'linear'")
    q = cfg["dim"]
    if not isinstance(q, int) or not 1 <= q <= MAX_DIM:
        raise InvalidInputError(f"dim must be an integer in [1, {MAX_DIM}]")
    declared_bps = cfg.get("breakpoints", [])
    if not isinstance(declared_bps, list):
        raise InvalidInputError("breakpoints must be a list of reals")
    breakpoints = [float(b) for b in declared_bps]

    blocks_cfg = cfg["linear"]
    if not isinstance(blocks_cfg, list) or not blocks_cfg:
        raise InvalidInputError("linear must be a non-empty list of blocks")
    blocks = []  # (until or None, kind, payload)
    prev_until = 0.0
    for bi, blk in enumerate(blocks_cfg):
        if not isinstance(blk, dict):
            raise InvalidInputError(f"linear block {bi} must be an object")
        last = bi == len(blocks_cfg) - 1
        until = blk.get("until", None)
        if last:
            if until is not None:
                raise InvalidInputError("the last linear block must have until: null")
        else:
            if not isinstance(until, (int, float)) or float(until) <= prev_until:
                raise InvalidInputError(
                    f"linear block {bi} needs an increasing 'until' time")
            until = float(until)
            prev_until = until
        if "constant" in blk:
            extra = set(blk) - _CONST_BLOCK_KEYS
            if extra:
                raise InvalidInputError(
                    f"unknown keys in linear block {bi}: {sorted(extra)}")
            blocks.append((until, "const",
                           _parse_matrix(blk["constant"], q, f"block {bi}")))
        else:
            extra = set(blk) - _TRIG_BLOCK_KEYS
            if extra:
                raise InvalidInputError(
                    f"unknown keys in linear block {bi}: {sorted(extra)}")
            base = _parse_matrix(blk["base"], q, f"block {bi} base") \
                if "base" in blk else np.zeros((q, q), dtype=complex)
            sinM = _parse_matrix(blk["sin"], q, f"block {bi} sin") \
                if "sin" in blk else np.zeros((q, q), dtype=complex)
            cosM = _parse_matrix(blk["cos"], q, f"block {bi} cos") \
                if "cos" in blk else np.zeros((q, q), dtype=complex)
            freq = float(blk.get("frequency", 1.0))
            blocks.append((until, "trig", (base, sinM, cosM, freq)))
    block_edges = [b[0] for b in blocks if b[0] is not None]
    breakpoints = sorted(set(breakpoints) | set(block_edges))

    def _block_value(kind, payload, t):
        if kind == "const":
            return payload
        base, sinM, cosM, freq = payload
        return base + math.sin(freq * t) * sinM + math.cos(freq * t) * cosM

    def eval_A(t: float) -> np.ndarray:
        for until, kind, payload in blocks:
            if until is None or t < until:
                return _block_value(kind, payload, t)
        return _block_value(blocks[-1][1], blocks[-1][2], t)

    quad_cfg = cfg.get("quadratic", [])
    if not isinstance(quad_cfg, list):
        raise InvalidInputError("quadratic must be a list of records")
    records = []  # (out, j, k, coeff, profile)
    for ri, rec in enumerate(quad_cfg):
        if not isinstance(rec, dict):
            raise InvalidInputError(f"quadratic record {ri} must be an object")
        extra = set(rec) - _QUAD_KEYS
        if extra:
            raise InvalidInputError(
                f"unknown keys in quadratic record {ri}: {sorted(extra)}")
        try:
            out = rec["out_index"]
            jk = rec["in_indices"]
        except KeyError as exc:
            raise InvalidInputError(
                f"quadratic record {ri} missing {exc.args[0]}") from None
        if not isinstance(out, int) or not 0 <= out < q:
            raise InvalidInputError(
                f"quadratic record {ri}: out_index outside [0, {q - 1}]")
        if (not isinstance(jk, list) or len(jk) != 2
                or not all(isinstance(x, int) and 0 <= x < q for x in jk)):
            raise InvalidInputError(
                f"quadratic record {ri}: in_indices must be two indices in "
                f"[0, {q - 1}]")
        coeff = complex(float(rec.get("coeff_re", 0.0)),
                        float(rec.get("coeff_im", 0.0)))
        profile = _parse_profile(rec.get("time_profile", "constant"))
        records.append((out, jk[0], jk[1], coeff, profile))

    def profile_value(profile, t: float) -> float:
        if profile is None:
            return 1.0
        off, amp, freq, ph = profile
        return off + amp * math.sin(freq * t + ph)

    def remainder(z, t):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for (o, j, kk, coeff, profile) in records:
            out[..., o] += coeff * profile_value(profile, t) \
                * z[..., j] * z[..., kk]
        return out

    def quadratic_at(t: float) -> np.ndarray:
        Hq = np.zeros((q, q, q), dtype=complex)
        for (o, j, kk, coeff, profile) in records:
            val = coeff * profile_value(profile, t)
            if j == kk:
                Hq[o, j, j] += val
            else:
                Hq[o, j, kk] += 0.5 * val
                Hq[o, kk, j] += 0.5 * val
        return Hq

    path = LinearPath.constant(blocks[0][2]) \
        if len(blocks) == 1 and blocks[0][1] == "const" \
        else LinearPath.from_callable(q, eval_A, breakpoints=breakpoints)
    return FieldSpec(dim=q, linear=path, remainder=remainder,
                     quadratic=quadratic_at if records else
                     np.zeros((q, q, q), dtype=complex),
                     family_tag="custom", breakpoints=tuple(breakpoints))


def load_field_file(path: str) -> FieldSpec:
    """Load a custom field from a JSON file (strict schema)."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            cfg = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"field file is not valid JSON: {exc}") from None
    return parse_field_config(cfg)
