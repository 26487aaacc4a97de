import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from gapgreedy.core import CoeffVector, IndexSet
from gapgreedy.greedy import (GreedyParams, all_t_greedy_sets, best_tail_error, greedy_outcomes, is_t_greedy,
                              projection_error, semi_greedy_error, sigma_n, tail_error)
from gapgreedy.norms import LpNorm, preset


def cv(d, dim=None):
    return CoeffVector(d, dim or max(d))


def sets(lst):
    return [s.to_list() for s in lst]


def test_t_greedy_examples():
    x = cv({1: 3, 2: 1, 3: 2})
    assert sets(all_t_greedy_sets(x, 1, 1.0)) == [[1]]
    assert sets(all_t_greedy_sets(x, 1, 0.5)) == [[1], [3]]
    assert sets(all_t_greedy_sets(cv({1: 2, 2: 2}), 1, 1.0)) == [[1], [2]]
    assert [list(s) for s in oracles.greedy_sets_naive([3, 1, 2], 1, 0.5)] == [[1], [3]]


def test_greedy_outcome_examples():
    (o,) = greedy_outcomes(cv({1: 3, 3: 2}), 1, 1.0)
    assert o.set.to_list() == [1]
    assert dict(o.sum.entries) == {1: 3} and dict(o.residual.entries) == {3: 2}
    (o,) = greedy_outcomes(cv({1: 2, 2: 2}), 2, 1.0)
    assert len(o.residual) == 0
    outs = greedy_outcomes(cv({1: 3, 2: 1, 3: 2}), 2, 0.5)
    assert [o.set.to_list() for o in outs] == [[1, 2], [1, 3]]


def test_m_beyond_support_and_errors():
    x = CoeffVector({2: 5.0}, 4)
    got = sets(all_t_greedy_sets(x, 2, 1.0))
    assert got == [[1, 2], [2, 3], [2, 4]]
    with pytest.raises(ValueError):
        all_t_greedy_sets(x, 5, 1.0)
    with pytest.raises(ValueError):
        GreedyParams(t=0.0)
    with pytest.raises(ValueError):
        all_t_greedy_sets(x, 1, 1.5)


coeffs = arrays(float, st.integers(1, 8), elements=st.sampled_from([0.0, 1.0, -1.0, 2.0, -0.5, 3.0, 0.25, -2.0]))


@given(coeffs, st.data(), st.sampled_from([1.0, 0.75, 0.5, 0.2]))
def test_greedy_sets_match_brute_force(a, data, t):
    m = data.draw(st.integers(0, len(a)))
    got = [tuple(s) for s in all_t_greedy_sets(a, m, t)]
    assert got == oracles.greedy_sets_naive(a, m, t)
    assert all(is_t_greedy(a, s, t) for s in got)
    # every 1-greedy set is t-greedy
    assert set(tuple(s) for s in all_t_greedy_sets(a, m, 1.0)) <= set(got)


@given(st.lists(st.floats(0.1, 10), min_size=1, max_size=8, unique=True), st.data())
def test_unique_greedy_set_for_distinct_moduli(vals, data):
    m = data.draw(st.integers(1, len(vals)))
    assert len(all_t_greedy_sets(np.array(vals), m, 1.0)) == 1


def test_sigma_examples():
    x = cv({1: 3, 2: 1, 3: 2})
    est = sigma_n(LpNorm(2), x, 1)
    assert est.value == pytest.approx(math.sqrt(5), rel=1e-12) and est.direction == "exact"
    assert sigma_n(LpNorm(math.inf), cv({1: 3, 2: 1}), 1).value == pytest.approx(1)
    lac = preset("lacunary-small")
    a = np.array([0, 1, 1, 0, 0.0])
    got = sigma_n(lac, a, 1).value
    assert got == pytest.approx(oracles.sigma_oracle(lac, a, 1), abs=1e-3)


def test_projection_and_tail_examples():
    x = cv({1: 3, 2: 1, 3: 2})
    assert projection_error(LpNorm(2), x, 2).value == pytest.approx(1)
    assert projection_error(preset("mixedpq-m4"), x, 3).value == 0
    lac = preset("lacunary-small")
    y = np.zeros(21)
    y[7:14] = 1.0
    assert projection_error(lac, y, 7).value == 0
    z = cv({1: 3, 2: 4})
    assert tail_error(LpNorm(2), z, 1) == 4 and best_tail_error(LpNorm(2), z, 1) == 4
    assert tail_error(LpNorm(2), z, 0) == 5 == best_tail_error(LpNorm(2), z, 0)
    assert tail_error(lac, CoeffVector({2: 1.0}, 3), 2) == 0


def test_semi_greedy_examples():
    rng = np.random.default_rng(2)
    x = rng.standard_normal(6)
    A = [1, 4]
    resid = x.copy()
    resid[[0, 3]] = 0
    assert semi_greedy_error(LpNorm(2), x, A).value == pytest.approx(np.linalg.norm(resid), rel=1e-12)
    assert semi_greedy_error(LpNorm(math.inf), cv({1: 3, 2: 1}), [1]).value == pytest.approx(1)
    mpq = preset("mixedpq-m4")
    y = np.array([3.0, -1.0, 2.5, -0.5, 1.5, -2.0])
    top = [1, 3]
    got = semi_greedy_error(mpq, y, top).value
    want = oracles.inner_min_grid_oracle(mpq, y, [0, 2])
    assert got == pytest.approx(want, abs=1e-3)
    no_opt = y.copy()
    no_opt[[0, 2]] = 0
    assert got <= mpq(no_opt) + 1e-12


ERROR_NORMS = ["l1", "l2", "oikhberg-small", "lacunary-small", "mixedpq-m4"]


@pytest.mark.parametrize("name", ERROR_NORMS)
def test_error_ordering_on_samples(name):
    norm = preset(name)
    rng = np.random.default_rng(7)
    for _ in range(6):
        x = rng.standard_normal(6) * (rng.random(6) < 0.85)
        for n in range(0, 4):
            s = sigma_n(norm, x, n).value
            p = projection_error(norm, x, n).value
            tl = tail_error(norm, x, n)
            assert s <= p * (1 + 1e-12) + 1e-12
            assert p <= tl * (1 + 1e-12) + 1e-12
            for A in all_t_greedy_sets(x, max(n, 1), 1.0)[:2]:
                sg = semi_greedy_error(norm, x, A).value
                y = x.copy()
                y[[i - 1 for i in A]] = 0
                assert sg <= norm(y) * (1 + 1e-12) + 1e-12


@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 4.0])
def test_lp_greedy_residual_is_best_projection(p):
    norm = LpNorm(p)
    rng = np.random.default_rng(int(p * 10))
    for _ in range(20):
        x = rng.standard_normal(7)
        for m in range(1, 7):
            for o in greedy_outcomes(CoeffVector.from_array(x), m, 1.0):
                assert norm(o.residual.to_array(7)) == pytest.approx(projection_error(norm, x, m).value, rel=1e-12)


@pytest.mark.parametrize("name", ["oikhberg-small", "lacunary-small", "mixedpq-m4"])
def test_sigma_solver_matches_grid_oracle(name):
    norm = preset(name)
    rng = np.random.default_rng(5)
    for trial in range(2):
        x = np.round(rng.standard_normal(5), 2)
        for n in (1, 2, 3):
            got = sigma_n(norm, x, n).value
            want = oracles.sigma_oracle(norm, x, n)
            assert abs(got - want) <= 1e-3 * max(1.0, want), (name, x, n, got, want)
