"""Acceptance battery: twelve end-to-end criteria, one per test.

Each test prints exactly one `[PASS]`/`[FAIL]` line (through the
capture-disabled channel, so the lines land on the live terminal) and
pins its tolerances inline.  The criteria exercise public entry points
only; every expected value comes from a closed form, an independent
derivation, or a symbolic check performed inside the test itself.
"""

import contextlib
import math

import numpy as np
import pytest

from loewner_basin import fields as F
from loewner_basin import flow as FL
from loewner_basin import schedule as S
from loewner_basin.linear import LinearPath

from conftest import CHAIN_FIELD_NAMES, CHAIN_TOL, unit_directions

NINE_RADII = tuple(np.round(np.linspace(0.1, 0.9, 9), 12))
DECAY_INTERVALS = ((0.0, 1.0), (0.5, 1.5), (1.0, 2.0))
SCHWARZ_INTERVALS = ((0.0, 0.25), (0.0, 0.5), (0.5, 1.25))
# The sweeps over the full sample plan run at 1e-8: the decay and
# modulus margins being certified are >= 5e-3 on every corpus field,
# so integration noise of order 2e-7 cannot flip a verdict, and the
# looser tolerance keeps the whole battery inside its runtime budget.
SWEEP_TOL = 1e-8


@contextlib.contextmanager
def criterion(capsys, label):
    try:
        yield
    except BaseException:
        with capsys.disabled():
            print(f"[FAIL] {label}", flush=True)
        raise
    with capsys.disabled():
        print(f"[PASS] {label}", flush=True)


def _sample_states(dim: int, count: int, seed: int,
                   max_radius: float = 0.8) -> np.ndarray:
    rng = np.random.default_rng(seed)
    dirs = unit_directions(dim, count, seed=seed + 1)
    radii = rng.uniform(0.05, max_radius, size=count)
    return dirs * radii[:, None]


def test_criterion_01_closed_form_flow_oracle(capsys):
    with criterion(capsys, "criterion 01: constant-linear flow matches "
                           "the matrix exponential within 1e-8"):
        matrices = (np.eye(2), np.diag([1.0, 2.0]), np.diag([2.0, 3.0]))
        worst = 0.0
        for i, A in enumerate(matrices):
            fld = F.builtin_field("constant-linear",
                                  {"matrix": A.tolist()})
            pts = _sample_states(2, 20, seed=10 + i)
            for (s, t) in ((0.0, 1.0), (0.5, 2.0)):
                res = FL.evolve(FL.FlowRequest(field=fld, s=s, t=t,
                                               points=pts, tol=1e-10))
                exact = pts * np.exp(-np.diag(A) * (t - s))[None, :]
                worst = max(worst, float(np.max(np.abs(res.images
                                                       - exact))))
        assert worst <= 1e-8, worst


def test_criterion_02_semigroup_composition(capsys, corpus):
    with criterion(capsys, "criterion 02: semigroup defect on 100 random "
                           "triples stays below 20x the 1e-10 tolerance"):
        rng = np.random.default_rng(2)
        worst = 0.0
        triples = 0
        while triples < 100:
            for name, fld in corpus:
                if triples >= 100:
                    break
                s = float(rng.uniform(0.0, 1.5))
                u = s + float(rng.uniform(0.0, 1.0))
                t = u + float(rng.uniform(0.0, 1.5))
                z = _sample_states(fld.dim, 1, seed=triples,
                                   max_radius=0.7)
                d = FL.semigroup_defect(fld, s, u, t, z, tol=1e-10)
                worst = max(worst, d)
                triples += 1
        assert worst <= 20.0 * 1e-10, worst


def test_criterion_03_decay_bounds(capsys, corpus):
    with criterion(capsys, "criterion 03: two-sided modulus decay holds "
                           "on 9 radii x 64 directions x 3 intervals, "
                           "every corpus field, zero violations"):
        for name, fld in corpus:
            pts = F.SamplePlan(radii=NINE_RADII, directions=64).states(
                fld.dim)
            for (s, t) in DECAY_INTERVALS:
                rep = FL.decay_bounds_check(fld, s, t, pts, tol=SWEEP_TOL)
                assert rep.passed and not rep.witnesses, (
                    name, s, t, rep.min_lower_margin, rep.min_upper_margin)


def test_criterion_04_sandwich_bounds(capsys, corpus, koebe):
    with criterion(capsys, "criterion 04: inner-product sandwich holds "
                           "within 1e-10 slack; Koebe lower bound tight "
                           "on the real axis within 1e-12"):
        plan = F.SamplePlan(radii=NINE_RADII, directions=64)
        for name, fld in corpus:
            rep = F.gurganus_check(fld, plan)
            assert rep.passed, (name, rep.min_lower_slack,
                                rep.min_upper_slack)
            assert rep.min_lower_slack >= -1e-10
            assert rep.min_upper_slack >= -1e-10
        for r in NINE_RADII:
            z = np.array([r + 0j])
            act = float(np.real(koebe.h(z, 0.0)[0] * np.conj(z[0])))
            assert abs(act - F.c_of(float(r)) * r * r) <= 1e-12, r


def test_criterion_05_schedule_constants(capsys):
    with criterion(capsys, "criterion 05: unit-mass times and the "
                           "unit-ratio budget constants are reproduced"):
        # constant unit mass: the times are the integers
        ident = LinearPath.constant(np.eye(1, dtype=complex))
        u = S.compute_times(ident, 8, tol=1e-11)
        assert max(abs(un - n) for n, un in enumerate(u)) <= 1e-10
        # growing mass 1 + t: first time solves u^2 + 2u - 2 = 0
        grow = LinearPath.from_callable(
            1, lambda t: np.array([[1.0 + t]], dtype=complex),
            quad_tol=1e-12)
        ug = S.compute_times(grow, 2, tol=1e-11)
        assert abs(ug[1] - (math.sqrt(3.0) - 1.0)) <= 1e-10
        # ratio-one budget: the radius solves ((1+r)/(1-r))^2 = 3/2,
        # the per-step floor is exp(-c(r)) and the worst admissible
        # step is exp(-C(r)); both follow from that radius exactly
        sched = S.build_schedule(ident, N=5, tol=1e-11)
        assert sched.ell == 1.0 and sched.h == 2
        assert abs(sched.r - 0.1010205) <= 1e-6
        assert abs(sched.mu - math.exp(-1.0 / math.sqrt(1.5))) <= 1e-12
        assert abs(sched.nu - math.exp(-math.sqrt(1.5))) <= 1e-9
        # loose neighborhood guards against regressions of the wrong
        # magnitude (rounded reference decimals, hence wide windows)
        assert abs(sched.mu - 0.4420) <= 5e-4
        assert abs(sched.nu - 0.2938) <= 5e-4
        assert sched.mu ** 2 < sched.nu


def test_criterion_06_chain_linear_case(capsys, chain_for):
    with criterion(capsys, "criterion 06: unit-mass chain reproduces "
                           "e^t z for the scalar identity field "
                           "within 1e-7"):
        ev = chain_for("constant-identity-1d")
        pts = _sample_states(1, 10, seed=60, max_radius=0.6)
        worst = 0.0
        for t in (0.0, 0.5, 1.0):
            for i in range(10):
                cv = ev.eval(t, pts[i])
                assert cv.converged
                worst = max(worst, abs(cv.value[0]
                                       - np.exp(t) * pts[i][0]))
        assert worst <= 1e-7, worst


def test_criterion_07_chain_koebe_case(capsys, chain_for):
    with criterion(capsys, "criterion 07: chain reproduces z/(1-z)^2 "
                           "within 1e-5 after the symbolic transport "
                           "check passes"):
        sympy = pytest.importorskip("sympy")
        z, t = sympy.symbols("z t")
        f = sympy.exp(t) * z / (1 - z) ** 2
        h = z * (1 - z) / (1 + z)
        assert sympy.simplify(sympy.diff(f, t) - sympy.diff(f, z) * h) == 0
        ev = chain_for("koebe-1d")
        worst = 0.0
        for z0 in np.linspace(-0.5, 0.5, 10):
            cv = ev.eval(0.0, np.array([z0 + 0j]))
            assert cv.converged, z0
            worst = max(worst, abs(cv.value[0] - z0 / (1 - z0) ** 2))
        assert worst <= 1e-5, worst


def test_criterion_08_functional_equation(capsys, chain_for):
    with criterion(capsys, "criterion 08: f_s = f_t after evolving, "
                           "relative residual below 1e-6 on the corpus"):
        worst = 0.0
        for k, name in enumerate(CHAIN_FIELD_NAMES):
            ev = chain_for(name)
            z = 0.35 * unit_directions(ev.field.dim, 1, seed=80 + k)[0]
            for (s, t) in ((0.0, 1.0), (1.0, 2.0)):
                worst = max(worst, ev.identity_residual(s, t, z))
        assert worst <= 1e-6, worst


def test_criterion_09_transport_residual(capsys, chain_for):
    with criterion(capsys, "criterion 09: transport-equation residual "
                           "below 1e-4 at dt = 1e-4 on the corpus"):
        worst = 0.0
        for k, name in enumerate(CHAIN_FIELD_NAMES):
            ev = chain_for(name)
            z = 0.3 * unit_directions(ev.field.dim, 1, seed=90 + k)[0]
            worst = max(worst, ev.pde_residual(0.5, z, dt=1e-4))
        assert worst <= 1e-4, worst


def test_criterion_10_geometric_increments(capsys, chain_for):
    with criterion(capsys, "criterion 10: increment ratios stay below "
                           "1.1 mu^2/nu once the state is inside the "
                           "working radius, every converged evaluation"):
        for k, name in enumerate(CHAIN_FIELD_NAMES):
            ev = chain_for(name)
            sched = ev.schedule
            bound = 1.1 * sched.mu ** 2 / sched.nu
            for (tt, rad) in ((0.0, 0.45), (0.5, 0.3)):
                z = rad * unit_directions(ev.field.dim, 1,
                                          seed=100 + k)[0]
                cv = ev.eval(tt, z)
                assert cv.converged, (name, tt)
                rows = list(cv.history)
                for (m_a, aw_a, inc_a), (m_b, aw_b, inc_b) in zip(
                        rows, rows[1:]):
                    if aw_a <= sched.r:
                        assert inc_b <= bound * inc_a + 1e-12, (
                            name, tt, m_a, inc_a, inc_b)


def test_criterion_11_nonexpanding_moduli(capsys, corpus):
    with criterion(capsys, "criterion 11: evolved moduli never exceed "
                           "start moduli beyond 1e-9, all samples, all "
                           "corpus fields"):
        for name, fld in corpus:
            pts = F.SamplePlan(radii=NINE_RADII, directions=64).states(
                fld.dim)
            start = np.linalg.norm(pts, axis=1)
            for (s, t) in SCHWARZ_INTERVALS:
                res = FL.evolve(FL.FlowRequest(field=fld, s=s, t=t,
                                               points=pts, tol=SWEEP_TOL))
                end = np.linalg.norm(res.images, axis=1)
                assert float(np.max(end - start)) <= 1e-9, (name, s, t)


def test_criterion_12_horizon_stability(capsys, chain_for):
    with criterion(capsys, "criterion 12: extending the horizon by five "
                           "steps moves converged values by at most the "
                           "chain tolerance"):
        for k, name in enumerate(CHAIN_FIELD_NAMES):
            base = chain_for(name, 30)
            ext = chain_for(name, 35)
            for (tt, rad) in ((0.0, 0.4), (1.0, 0.3)):
                z = rad * unit_directions(base.field.dim, 1,
                                          seed=120 + k)[0]
                a = base.eval(tt, z)
                b = ext.eval(tt, z)
                assert a.converged and b.converged, (name, tt)
                delta = float(np.max(np.abs(a.value - b.value)))
                assert delta <= CHAIN_TOL, (name, tt, delta)
