"""Shared fixtures: the built-in corpus and cached chain evaluators.

Chain evaluators are expensive to warm up (each one lazily integrates
per-step transition matrices), so a session-scoped factory hands out
one evaluator per (field name, horizon) pair and every test shares it.
"""

import numpy as np
import pytest

from loewner_basin import (ChainEvaluator, build_schedule, builtin_corpus,
                           builtin_field)

#: corpus fields whose mass-ratio bound stays below 2, so the
#: linear-normalization limit maps are available (budget h == 2)
CHAIN_FIELD_NAMES = (
    "constant-identity-1d",
    "constant-identity-2d",
    "constant-diag-2-3",
    "diagonal-periodic",
    "diagonal-periodic-mild",
    "koebe-1d",
    "quadratic-perturbation",
)

#: stopping tolerance advertised by every shared evaluator
CHAIN_TOL = 1e-9
#: leg tolerance kept tighter than the stopping tolerance so measured
#: increments reflect the maps, not integrator noise
CHAIN_LEG_TOL = 1e-11


def unit_directions(dim: int, count: int, seed: int = 0) -> np.ndarray:
    """Deterministic unit vectors in C^dim, rows of shape (count, dim)."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((count, dim)) + 1j * rng.standard_normal(
        (count, dim))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


@pytest.fixture(scope="session")
def corpus():
    return builtin_corpus()


@pytest.fixture(scope="session")
def corpus_map(corpus):
    return dict(corpus)


@pytest.fixture(scope="session")
def koebe():
    return builtin_field("koebe-1d")


@pytest.fixture(scope="session")
def chain_for(corpus_map):
    """Factory: chain_for(name, N=30) -> shared ChainEvaluator."""
    cache = {}

    def get(name: str, N: int = 30) -> ChainEvaluator:
        key = (name, N)
        if key not in cache:
            field = corpus_map[name]
            sched = build_schedule(field.linear, N=N)
            cache[key] = ChainEvaluator(field, sched, tol_chain=CHAIN_TOL,
                                        tol_ode=CHAIN_LEG_TOL)
        return cache[key]

    return get
