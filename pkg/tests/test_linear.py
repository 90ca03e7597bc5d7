"""Matrix analysis layer: eigenvalue bounds, quadrature, mass paths,
sufficient-condition verdicts, transition factors."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loewner_basin.errors import (DegenerateTransitionError,
                                  InvalidInputError)
from loewner_basin.linear import (CRITERIA, GRID_MARGIN, MAX_DIM,
                                  InverseTransitionProduct, LinearPath,
                                  VERDICT_SATISFIED, VERDICT_UNDECIDABLE,
                                  VERDICT_VIOLATED, adaptive_simpson,
                                  classify_hypotheses, eigenvalues,
                                  ell_estimate, hermitian_bounds,
                                  jacobi_eigvalsh, operator_norm,
                                  spectral_abscissa, transition_matrix)


def _random_complex(rng, q):
    return rng.standard_normal((q, q)) + 1j * rng.standard_normal((q, q))


# ---------------------------------------------------------------------------
# eigenvalue machinery


@pytest.mark.parametrize("q", range(1, MAX_DIM + 1))
def test_jacobi_matches_reference_eigvalsh(q):
    rng = np.random.default_rng(q)
    for _ in range(5):
        G = _random_complex(rng, q)
        H = G + G.conj().T
        got = jacobi_eigvalsh(H)
        want = np.linalg.eigvalsh(H)
        assert np.max(np.abs(got - want)) < 1e-10 * max(1.0, np.abs(H).max())
        assert np.all(np.diff(got) >= 0.0)


def test_hermitian_bounds_known_values():
    m, k = hermitian_bounds(np.diag([1.0, 2.0]))
    assert m == pytest.approx(1.0, abs=1e-12)
    assert k == pytest.approx(2.0, abs=1e-12)
    # non-normal: [[1, 2], [0, 1]] has Hermitian part [[1, 1], [1, 1]]
    m, k = hermitian_bounds(np.array([[1.0, 2.0], [0.0, 1.0]]))
    assert m == pytest.approx(0.0, abs=1e-12)
    assert k == pytest.approx(2.0, abs=1e-12)


@pytest.mark.parametrize("q", range(1, MAX_DIM + 1))
def test_eigenvalues_match_reference(q):
    rng = np.random.default_rng(100 + q)
    for _ in range(5):
        A = _random_complex(rng, q)
        got = np.sort_complex(eigenvalues(A))
        want = np.sort_complex(np.linalg.eigvals(A))
        assert np.max(np.abs(got - want)) < 1e-7 * max(1.0, np.abs(A).max())


def test_eigenvalues_jordan_block():
    J = np.array([[2.0, 1.0], [0.0, 2.0]])
    ev = eigenvalues(J)
    assert np.max(np.abs(ev - 2.0)) < 1e-7
    assert spectral_abscissa(J) == pytest.approx(2.0, abs=1e-7)


def test_operator_norm_matches_reference():
    rng = np.random.default_rng(7)
    for q in (1, 2, 3, 5, 8):
        A = _random_complex(rng, q)
        assert operator_norm(A) == pytest.approx(
            np.linalg.norm(A, 2), rel=1e-10)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(0, 10_000))
def test_bound_ordering_properties(q, seed):
    rng = np.random.default_rng(seed)
    A = _random_complex(rng, q)
    m, k = hermitian_bounds(A)
    assert m <= k + 1e-12
    assert k <= operator_norm(A) + 1e-9
    assert spectral_abscissa(A) <= k + 1e-9
    assert m - 1e-9 <= spectral_abscissa(A)


def test_matrix_validation():
    with pytest.raises(InvalidInputError):
        hermitian_bounds(np.ones((2, 3)))
    with pytest.raises(InvalidInputError):
        hermitian_bounds(np.eye(MAX_DIM + 1))
    with pytest.raises(InvalidInputError):
        hermitian_bounds(np.array([[np.nan]]))


# ---------------------------------------------------------------------------
# quadrature


def test_simpson_polynomial_is_near_exact():
    got = adaptive_simpson(lambda t: np.array([t ** 3 - t]), 0.0, 2.0, 1e-12)
    assert abs(got[0] - 2.0) < 1e-12


def test_simpson_periodic_integrand_not_aliased():
    # zeros of sin on dyadic midpoints of [0, 4 pi] would fool a naive
    # single-panel error estimate; the prime panel seeding must not
    got = adaptive_simpson(lambda t: np.array([math.sin(t)]),
                           0.0, 4.0 * math.pi, 1e-11)
    assert abs(got[0]) < 1e-10
    got = adaptive_simpson(lambda t: np.array([math.sin(8.0 * t) ** 2]),
                           0.0, math.pi, 1e-11)
    assert abs(got[0] - math.pi / 2.0) < 1e-9


def test_simpson_breakpoints_and_endpoint_jump():
    # value at the breakpoint belongs to the right piece, so the left
    # piece ends in a jump pinned at its own endpoint; the sliver rule
    # must accept it instead of recursing forever
    def f(t):
        return np.array([1.0 if t < 1.0 else 0.0])

    got = adaptive_simpson(f, 0.0, 2.0, 1e-10, breakpoints=(1.0,))
    assert abs(got[0] - 1.0) < 1e-8


def test_simpson_sharp_peak():
    got = adaptive_simpson(
        lambda t: np.array([1.0 / (1e-4 + (t - 0.5) ** 2)]), 0.0, 1.0, 1e-8)
    want = 2.0 / 1e-2 * math.atan(0.5 / 1e-2)
    assert abs(got[0] - want) < 1e-6 * want


# ---------------------------------------------------------------------------
# LinearPath


def test_constant_path_mass_integrals_exact():
    path = LinearPath.constant(np.diag([2.0, 3.0]).astype(complex))
    assert path.is_constant
    assert path.m(0.7) == pytest.approx(2.0, abs=1e-12)
    assert path.k(0.7) == pytest.approx(3.0, abs=1e-12)
    assert path.M(2.5) == pytest.approx(5.0, abs=1e-12)
    assert path.K(2.5) == pytest.approx(7.5, abs=1e-12)
    assert np.allclose(path.integral_matrix(1.0, 3.0),
                       np.diag([4.0, 6.0]))


def test_callable_path_mass_integrals():
    path = LinearPath.from_callable(
        1, lambda t: np.array([[1.0 + t]], dtype=complex), quad_tol=1e-12)
    assert not path.is_constant
    # M(t) = K(t) = t + t^2/2
    for t in (0.5, 1.0, 3.7):
        assert path.M(t) == pytest.approx(t + t * t / 2.0, abs=1e-10)
        assert path.K(t) == pytest.approx(t + t * t / 2.0, abs=1e-10)
    # additivity through the checkpoint cache
    assert path.M(4.0) - path.M(2.0) == pytest.approx(2.0 + 6.0, abs=1e-9)
    assert path.integral_matrix(0.0, 2.0)[0, 0] == pytest.approx(
        4.0, abs=1e-9)


def test_path_breakpoints_preserved():
    path = LinearPath.from_callable(
        1, lambda t: np.array([[1.0 if t < 1.0 else 2.0]], dtype=complex),
        breakpoints=(1.0,))
    assert path.breakpoints == (1.0,)
    assert path.M(2.0) == pytest.approx(3.0, abs=1e-9)


def test_ell_estimate_diagonal():
    path = LinearPath.constant(np.diag([1.0, 2.0]).astype(complex))
    assert ell_estimate(path, np.linspace(0, 5, 11)) == pytest.approx(
        2.0, abs=1e-12)


# ---------------------------------------------------------------------------
# condition classification


def test_identity_satisfies_every_criterion():
    path = LinearPath.constant(np.eye(2, dtype=complex))
    rep = classify_hypotheses(path, np.linspace(0, 10, 101))
    assert set(rep.verdicts) == set(CRITERIA)
    assert all(v == VERDICT_SATISFIED for v in rep.verdicts.values())
    assert rep.ell == pytest.approx(1.0, abs=1e-12)
    d = rep.to_json_dict()
    assert d["grid_size"] == 101 and not d["witnesses"]


def test_diag_1_2_verdict_split():
    path = LinearPath.constant(np.diag([1.0, 2.0]).astype(complex))
    rep = classify_hypotheses(path, np.linspace(0, 10, 101))
    # 2 m(A) - abscissa = 0: the gap condition fails with a witness
    assert rep.verdicts["constant_spectral_gap"] == VERDICT_VIOLATED
    assert rep.witnesses["constant_spectral_gap"]
    assert rep.verdicts["constant_positive_spectrum"] == VERDICT_SATISFIED
    assert rep.verdicts["commuting_uniform_bunching"] == VERDICT_VIOLATED
    assert rep.verdicts["general_bunching"] == VERDICT_SATISFIED
    assert rep.ell == pytest.approx(2.0, abs=1e-12)


def test_time_varying_verdicts_are_grid_relative():
    def A(t):
        return np.diag([1.0, 1.0 + 0.5 * np.sin(t)]).astype(complex)

    path = LinearPath.from_callable(2, A)
    # the uniform-margin condition 2m >= k + delta degenerates exactly
    # at sin t = -1; a grid that misses that time reports satisfied...
    coarse = np.linspace(0.0, 10.0, 1001)
    rep = classify_hypotheses(path, coarse)
    assert rep.verdicts["commuting_uniform_bunching"] == VERDICT_SATISFIED
    assert rep.verdicts["constant_spectral_gap"] == VERDICT_VIOLATED
    # ...and a grid that contains it reports violated
    hit = np.sort(np.append(coarse, 1.5 * np.pi))
    rep2 = classify_hypotheses(path, hit)
    assert rep2.verdicts["commuting_uniform_bunching"] == VERDICT_VIOLATED
    # the finite-ratio condition still holds there (ratio exactly 2)
    assert rep2.verdicts["general_bunching"] == VERDICT_SATISFIED
    assert rep2.ell == pytest.approx(2.0, abs=1e-9)


def test_non_commuting_integrals_detected():
    def A(t):
        return np.array([[1.0, t], [0.0, 1.0]], dtype=complex)

    path = LinearPath.from_callable(2, A)
    rep = classify_hypotheses(path, np.linspace(0.0, 1.5, 61))
    assert rep.verdicts["commuting_uniform_bunching"] == VERDICT_VIOLATED
    assert rep.witnesses["commuting_uniform_bunching"]


def test_margin_below_grid_resolution_is_undecidable():
    eps = 0.5 * GRID_MARGIN
    path = LinearPath.constant(np.diag([1.0, 2.0 - eps]).astype(complex))
    rep = classify_hypotheses(path, np.linspace(0, 5, 11))
    assert rep.verdicts["constant_spectral_gap"] == VERDICT_UNDECIDABLE
    assert rep.verdicts["commuting_uniform_bunching"] == VERDICT_UNDECIDABLE


def test_negative_mass_violates_everything_decidable():
    path = LinearPath.constant(-np.eye(1, dtype=complex))
    rep = classify_hypotheses(path, np.linspace(0, 2, 5))
    assert rep.verdicts["general_bunching"] == VERDICT_VIOLATED
    assert rep.verdicts["commuting_uniform_bunching"] == VERDICT_VIOLATED
    assert rep.ell is None


def test_classification_needs_two_grid_points():
    path = LinearPath.constant(np.eye(1, dtype=complex))
    with pytest.raises(InvalidInputError):
        classify_hypotheses(path, [0.0])


# ---------------------------------------------------------------------------
# transition factors


def test_transition_matrix_constant_diagonal():
    path = LinearPath.constant(np.diag([1.0, 2.0]).astype(complex))
    T = transition_matrix(path, 0.5, 2.0, tol=1e-12)
    want = np.diag([np.exp(-1.5), np.exp(-3.0)])
    assert np.max(np.abs(T - want)) < 1e-12


def test_transition_matrix_non_normal_vs_expm():
    scipy_linalg = pytest.importorskip("scipy.linalg")
    A = np.array([[1.0, 1.0], [0.0, 2.0]], dtype=complex)
    path = LinearPath.constant(A)
    T = transition_matrix(path, 0.0, 1.3, tol=1e-12)
    want = scipy_linalg.expm(-1.3 * A)
    assert np.max(np.abs(T - want)) < 1e-11


def test_transition_matrix_time_varying_scalar():
    path = LinearPath.from_callable(
        1, lambda t: np.array([[1.0 + t]], dtype=complex))
    T = transition_matrix(path, 0.0, 2.0, tol=1e-12)
    assert abs(T[0, 0] - np.exp(-4.0)) < 1e-12


def test_inverse_product_matches_direct_inverse():
    rng = np.random.default_rng(11)
    acc = InverseTransitionProduct.identity(3)
    total = np.eye(3, dtype=complex)
    for _ in range(4):
        F = np.eye(3, dtype=complex) + 0.3 * _random_complex(rng, 3)
        acc = acc.push(F)
        total = F @ total
    v = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    got = acc.apply(v)
    want = np.linalg.solve(total, v)
    assert np.max(np.abs(got - want)) < 1e-10
    assert len(acc) == 4


def test_inverse_product_telescoping():
    # undoing one more factor then applying it is a no-op
    rng = np.random.default_rng(3)
    F = np.eye(2, dtype=complex) + 0.2 * _random_complex(rng, 2)
    acc = InverseTransitionProduct.identity(2).push(F)
    ext = acc.push(F)
    v = np.array([0.3 + 0.1j, -0.2 + 0.4j])
    assert np.max(np.abs(ext.apply(F @ v) - acc.apply(v))) < 1e-12


def test_inverse_product_condition_cap():
    # factors diag(e^-1, e^-2) leak condition e per push: the running
    # estimate crosses 1e12 before thirty pushes
    F = np.diag([np.exp(-1.0), np.exp(-2.0)]).astype(complex)
    acc = InverseTransitionProduct.identity(2)
    with pytest.raises(DegenerateTransitionError) as exc:
        for _ in range(30):
            acc = acc.push(F)
    assert exc.value.condition_estimate > 1e12


def test_inverse_product_rejects_singular_factor():
    acc = InverseTransitionProduct.identity(2)
    with pytest.raises(DegenerateTransitionError):
        acc.push(np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex))
