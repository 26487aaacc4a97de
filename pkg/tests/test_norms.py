import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from gapgreedy.core import CoeffVector, partial_sum
from gapgreedy.norms import (AdditiveGapNorm, LacunaryNorm, LpNorm, MixedPQNorm, NormConfigError, OikhbergNorm,
                             PRESET_NOTES, dual_norm_estimate, norm_from_spec, preset)
from gapgreedy.sequences import GapSequence

TINY = {
    "lacunary": LacunaryNorm(GapSequence([1, 7, 64]), [1, 2]),
    "additivegap": AdditiveGapNorm(GapSequence([1, 8, 30]), [1, 2], base=2),
    "oikhberg": OikhbergNorm(GapSequence([1, 4, 5, 45]), [1, 3]),
    "oikhberg-unconditional": OikhbergNorm(GapSequence([1, 4, 5, 45]), [1, 3], "absolute"),
    "mixedpq": MixedPQNorm(4, 3.5, 1.6, 0.5),
    "l1": LpNorm(1.0),
    "l3": LpNorm(3.0),
    "linf": LpNorm(math.inf),
}


def naive(name, a):
    norm = TINY[name]
    if name == "lacunary":
        return oracles.lacunary_naive(a, [1, 7, 64], [1, 2])
    if name == "additivegap":
        return oracles.additive_naive(a, [1, 8, 30], [1, 2], norm.p, 2)
    if name.startswith("oikhberg"):
        return oracles.oikhberg_naive(a, [1, 4, 5, 45], [1, 3], norm.mode)
    if name == "mixedpq":
        return oracles.mixedpq_naive(a, 4, 3.5, 1.6)
    return oracles.lp_naive(a, norm.p)


def e(i, N, v=1.0):
    x = np.zeros(N)
    x[i - 1] = v
    return x


# --- worked examples ---------------------------------------------------------

def test_oikhberg_examples():
    norm = preset("oikhberg-small")
    assert norm.c[:2].tolist() == [2.0, 3.0]
    assert norm.m.tolist() == [4, 153, 22048]
    assert norm(np.ones(4)) == pytest.approx(4, rel=1e-12)
    assert norm(np.array([1, -1, 1, -1.0])) == pytest.approx(2, rel=1e-12)
    assert norm(e(1, 4)) == 1.0


def test_lacunary_examples():
    norm = preset("lacunary-small")
    x = np.zeros(21)
    x[7:14] = 1.0
    assert norm(x) == 7
    assert norm(e(2, 3)) == 1
    assert norm(e(3, 3, -5.0)) == 5


def test_mixedpq_examples():
    norm = preset("mixedpq-m4")
    assert norm(np.ones(4)) == pytest.approx(4)
    assert norm(np.array([1, -1, 1, -1.0])) == pytest.approx(4 ** (1 / 3.5), rel=1e-12)
    q2 = MixedPQNorm(4, 3.0, 2.0, 0.5)
    assert q2(np.array([0, 0, 0, 0, 3.0, 4.0])) == pytest.approx(5, rel=1e-12)


def test_additivegap_examples():
    norm = preset("additivegap-small")
    N = 340
    for j, k in ((1, 1), (2, 2)):
        T = np.zeros(N)
        T[[i - 1 for i in norm.T(j)]] = 1.0
        D = np.zeros(N)
        D[[i - 1 for i in norm.D(j)]] = 1.0
        assert len(norm.T(j)) == 10 ** j
        assert norm(T) >= 10 ** (j / norm.exponent(k + 1)) * (1 - 1e-12)
        assert norm(D) <= 10 ** (j / norm.exponent(k)) * (1 + 1e-12)
    assert norm(e(5, N)) == 1.0


def test_mixedpq_conditions():
    norm = preset("mixedpq-paper")
    c = norm.conditions
    assert c.cond1_lhs == pytest.approx(3 / 8) and c.cond1_rhs == pytest.approx(3 / 8)
    assert c.cond1 and c.cond3 and c.largem
    with pytest.raises(NormConfigError):
        MixedPQNorm(2000, 3.5, 1.6, 0.5, 0.5, require_largem=True)
    with pytest.raises(NormConfigError):
        MixedPQNorm(5, 3.5, 1.6, 0.5)
    assert not MixedPQNorm(4, 3.5, 1.6, 0.5).conditions.largem


def test_constructor_errors():
    with pytest.raises(NormConfigError):
        LacunaryNorm(GapSequence([1, 5, 64]), [1, 2])
    with pytest.raises(NormConfigError):
        AdditiveGapNorm(GapSequence([1, 20, 3200]), [1, 2])
    with pytest.raises(NormConfigError):
        OikhbergNorm(GapSequence([1, 16, 17, 32]), [1, 3])
    with pytest.raises(NormConfigError):
        preset("nope")
    with pytest.raises(NormConfigError):
        norm_from_spec({"kind": "lacunary"})
    with pytest.raises(NormConfigError):
        norm_from_spec({"kind": "banana"})


def test_width_beyond_configured_blocks():
    with pytest.raises(ValueError):
        preset("lacunary-small")(np.ones(65))


def test_specs_round_trip():
    for name in PRESET_NOTES:
        norm = preset(name)
        again = norm_from_spec(norm.spec())
        x = np.linspace(-1, 1, 37)
        assert again(x) == norm(x)


# --- dual estimates -----------------------------------------------------------

def test_dual_examples():
    f = np.array([1, 1, 1, 1.0])
    est = dual_norm_estimate(LpNorm(2), f)
    assert est.direction == "exact" and est.value == pytest.approx(2)
    assert dual_norm_estimate(LpNorm(1), f).value == pytest.approx(1)
    rng = np.random.default_rng(3)
    oik = preset("oikhberg-small")
    for _ in range(5):
        g = rng.standard_normal(12)
        est = dual_norm_estimate(oik, g, n_random=8, ascent_steps=30)
        assert est.upper == pytest.approx(np.linalg.norm(g))
        assert est.value <= est.upper * (1 + 1e-9)
    with pytest.raises(ValueError):
        dual_norm_estimate(oik, np.zeros(4))


# --- oracle equivalence ---------------------------------------------------------

@pytest.mark.parametrize("name", sorted(TINY))
def test_structure_aware_matches_enumeration(name):
    rng = np.random.default_rng(11)
    norm = TINY[name]
    for r in range(100):
        N = int(rng.integers(1, 13))
        a = rng.standard_normal(N) * (rng.random(N) < 0.8)
        if r % 5 == 0:
            a = np.round(a)
        want = naive(name, a)
        assert abs(norm(a) - want) <= 1e-12 * max(1.0, want), (name, a)


# --- norm axioms ----------------------------------------------------------------

AXIOM_NORMS = {
    "l1": (preset("l1"), 12), "l2": (preset("l2"), 12), "linf": (LpNorm(math.inf), 12),
    "oikhberg-small": (preset("oikhberg-small"), 24), "oikhberg-unconditional": (preset("oikhberg-unconditional"), 24),
    "lacunary-small": (preset("lacunary-small"), 24), "mixedpq-m4": (preset("mixedpq-m4"), 12),
    "additivegap-small": (preset("additivegap-small"), 60),
}
# subnormal magnitudes underflow when squared; they say nothing about the norms
finite = st.floats(-100, 100, allow_nan=False, allow_infinity=False).filter(lambda v: v == 0 or abs(v) > 1e-100)


def triple(N):
    return st.tuples(arrays(float, N, elements=finite), arrays(float, N, elements=finite), finite)


@pytest.mark.parametrize("name", sorted(AXIOM_NORMS))
def test_norm_axioms(name):
    norm, N = AXIOM_NORMS[name]

    @given(triple(N))
    def check(data):
        x, y, lam = data
        nx = norm(x)
        assert nx >= 0
        assert (nx == 0) == (not np.any(x))
        assert norm(lam * x) == pytest.approx(abs(lam) * nx, rel=1e-9, abs=1e-12)
        assert norm(x + y) <= (nx + norm(y)) * (1 + 1e-12) + 1e-12

    check()


@pytest.mark.parametrize("name", sorted(AXIOM_NORMS))
def test_unit_vectors_within_basis_bounds(name):
    norm, N = AXIOM_NORMS[name]
    for i in range(1, N + 1):
        v = norm(e(i, N))
        assert 1 / norm.alpha2 - 1e-12 <= v <= norm.alpha1 + 1e-12


@pytest.mark.parametrize("name", ["oikhberg-small", "lacunary-small"])
def test_monotone_schauder_and_domination(name):
    norm, N = AXIOM_NORMS[name]

    @given(arrays(float, N, elements=finite))
    def check(x):
        full = norm(x)
        cv = CoeffVector.from_array(x)
        for m in range(N + 1):
            assert norm(partial_sum(cv, m).to_array(N)) <= full * (1 + 1e-12) + 1e-12
        floor = np.linalg.norm(x) if name.startswith("oikhberg") else np.abs(x).max()
        assert full >= floor * (1 - 1e-12)

    check()
