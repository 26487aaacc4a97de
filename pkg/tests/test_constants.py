import math

import numpy as np
import pytest

from gapgreedy import constants as C
from gapgreedy.estimate import ConstantEstimate
from gapgreedy.families import SampleSpec, sample_vectors
from gapgreedy.norms import LpNorm, preset
from gapgreedy.sequences import GapSequence

SEQ_OIK = GapSequence((1, 4))
SMALL = SampleSpec(n_random=40, n_indicators=40, seed=1)


def replays(norm, est, N):
    got = C.replay(norm, est, N)
    assert got == pytest.approx(est.value, rel=1e-9), est.kind


def test_estimate_validation_and_bracket_promotion():
    with pytest.raises(ValueError):
        ConstantEstimate("nope", 1.0, "lower")
    with pytest.raises(ValueError):
        ConstantEstimate("phi", 1.0, "sideways")
    est = ConstantEstimate("phi", 2.0, "lower", upper=2.0 + 1e-12)
    assert est.direction == "exact"
    assert ConstantEstimate("phi", 1.0, "upper").lower_bound is None


# --- fundamental functions ------------------------------------------------------

def test_phi_examples():
    assert C.fundamental_function(LpNorm(1), 6, 3).value == 3
    assert C.fundamental_function(LpNorm(2), 6, 4).value == pytest.approx(2)
    oik = preset("oikhberg-small")
    est = C.fundamental_function(oik, 8, 4)
    assert est.direction == "exact" and est.value == pytest.approx(4)
    assert est.witness["A"] == [1, 2, 3, 4]
    replays(oik, est, 8)


def test_phi_monotone_and_bounded():
    for name in ("oikhberg-small", "lacunary-small", "mixedpq-m4"):
        norm = preset(name)
        vals = [C.fundamental_function(norm, 7, m).value for m in range(1, 6)]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
        assert all(v <= m * norm.alpha1 + 1e-12 for m, v in zip(range(1, 6), vals))


def test_phi_star_examples():
    for p in (1.0, 2.0, 4.0):
        pc = math.inf if p == 1 else p / (p - 1)
        est = C.fundamental_function_dual(LpNorm(p), 6, 3)
        assert est.direction == "exact"
        assert est.value == pytest.approx(1.0 if p == 1 else 3 ** (1 / pc))
    oik = C.fundamental_function_dual(preset("oikhberg-small"), 8, 3)
    assert oik.upper == pytest.approx(math.sqrt(3)) and oik.value <= oik.upper * (1 + 1e-9)
    lac = C.fundamental_function_dual(preset("lacunary-small"), 5, 1)
    assert lac.value == pytest.approx(1) and lac.direction == "exact"


# --- democracy-type ----------------------------------------------------------------

KINDS = ("Delta_d", "Delta_s", "Delta_c", "Delta_sc", "Delta_oc", "Delta_osc")


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("p", [1.0, 2.0])
def test_democracy_lp_is_one(kind, p):
    est = C.democracy_like_constant(kind, LpNorm(p), GapSequence.geometric(4), 16)
    assert est.direction == "exact" and est.value == pytest.approx(1, abs=1e-9)
    replays(LpNorm(p), est, 16)


def test_democracy_oikhberg_superdemocracy():
    oik = preset("oikhberg-small")
    est = C.democracy_like_constant("Delta_s", oik, GapSequence((1, 16, 17)), 20)
    assert est.value <= math.sqrt(2) + 1e-9
    replays(oik, est, 20)


def test_democracy_lacunary_order_superconservative():
    lac = preset("lacunary-small")
    est = C.democracy_like_constant("Delta_osc", lac, GapSequence((1, 7, 64)), 21, max_card=4)
    assert est.direction == "exact" and est.value == pytest.approx(1)
    replays(lac, est, 21)


def test_democracy_rejects_unknown_kind():
    with pytest.raises(ValueError):
        C.democracy_like_constant("Cq_t", LpNorm(2), None, 4)


# --- ucc, ul ------------------------------------------------------------------------

def test_ucc_examples():
    assert C.ucc_constant(LpNorm(2), GapSequence.geometric(4), 16).value == pytest.approx(1)
    oik = preset("oikhberg-small")
    est = C.ucc_constant(oik, SEQ_OIK, 8)
    assert est.value >= 2 - 1e-12
    replays(oik, est, 8)


def test_ul_examples():
    c1, c2 = C.ul_constants(LpNorm(1), GapSequence.geometric(3), 8)
    assert c1.value == pytest.approx(1) and c2.value == pytest.approx(1)
    oik = preset("oikhberg-small")
    c1, c2 = C.ul_constants(oik, SEQ_OIK, 8, n_random=20)
    assert c2.value >= 1 - 1e-12
    replays(oik, c1, 8)
    replays(oik, c2, 8)
    s1, s2 = C.ul_constants(oik, GapSequence((1,)), 6)
    assert s1.value == pytest.approx(1) and s2.value == pytest.approx(1)


# --- greedy-type -------------------------------------------------------------------------

def test_quasi_greedy_l2():
    q, sq = C.quasi_greedy_constant(LpNorm(2), GapSequence.geometric(4), 16, 1.0, SMALL)
    assert q.value == pytest.approx(1) and q.direction == "exact"
    assert sq.value <= 1 + 1e-9
    replays(LpNorm(2), q, 16)
    replays(LpNorm(2), sq, 16)


def test_quasi_greedy_oikhberg():
    oik = preset("oikhberg-small")
    q, sq = C.quasi_greedy_constant(oik, GapSequence((1, 16, 17)), 24, 1.0, SMALL)
    assert q.value <= 2 + 1e-9
    replays(oik, q, 24)
    replays(oik, sq, 24)


def test_quasi_greedy_comb_ratio_grows_along_blocks():
    oik = preset("oikhberg-small")
    ratios = []
    for i in (1, 2):
        blk = oik.block(i)
        N = blk.stop - 1
        x = np.zeros(N)
        for r, p in enumerate(blk):
            x[p - 1] = 1.05 if r % 2 == 0 else -1.0
        q, _ = C.quasi_greedy_constant(oik, None, N, 1.0, (x[None, :], "alternating comb"), greedy_limit=4)
        replays(oik, q, N)
        ratios.append(q.value)
    assert ratios[1] > ratios[0] > 1


@pytest.mark.parametrize("p", [1.0, 2.0])
def test_partially_greedy_lp(p):
    cp, csp = C.partially_greedy_constants(LpNorm(p), GapSequence.geometric(4), 16, 1.0, SMALL)
    assert cp.value == pytest.approx(1) and csp.value == pytest.approx(1)
    replays(LpNorm(p), cp, 16)
    replays(LpNorm(p), csp, 16)


@pytest.mark.parametrize("t", [1.0, 0.5])
def test_partially_greedy_lacunary(t):
    lac = preset("lacunary-small")
    cp, csp = C.partially_greedy_constants(lac, GapSequence((1, 7, 64)), 30, t, SMALL)
    assert csp.value <= max(1 / t, 2) + 1e-6
    replays(lac, csp, 30)


def test_partially_greedy_skips_zero_over_zero():
    # supp(x) inside 1..n makes both the tail and every greedy residual vanish
    x = np.ones((1, 3))
    cp, csp = C.partially_greedy_constants(LpNorm(2), GapSequence((3,)), 3, 1.0, (x, "flat"))
    assert cp.value == -math.inf and cp.witness is None
    assert csp.value == -math.inf


def test_suppression_unconditionality():
    assert C.suppression_unconditionality_constant(LpNorm(2), None, 10, SMALL).value == pytest.approx(1)
    unc = preset("oikhberg-unconditional")
    assert C.suppression_unconditionality_constant(unc, None, 12, SMALL).value == pytest.approx(1)
    oik = preset("oikhberg-small")
    est = C.suppression_unconditionality_constant(oik, None, 12, SMALL)
    assert est.value > 1
    replays(oik, est, 12)


# --- QGLC, SLC, bidemocracy ----------------------------------------------------------

@pytest.mark.parametrize("p", [1.0, 2.0])
def test_qglc_slc_lp(p):
    seq = GapSequence.geometric(4)
    ql = C.qglc_constant(LpNorm(p), seq, 16)
    slc = C.slc_constant(LpNorm(p), seq, 16)
    assert ql.value == pytest.approx(1) and slc.value == pytest.approx(1)
    replays(LpNorm(p), ql, 16)
    replays(LpNorm(p), slc, 16)


def test_qglc_slc_oikhberg():
    oik = preset("oikhberg-small")
    slc = C.slc_constant(oik, SEQ_OIK, 8)
    ql = C.qglc_constant(oik, SEQ_OIK, 8)
    ds = C.democracy_like_constant("Delta_s", oik, SEQ_OIK, 8)
    assert ql.value >= 1 - 1e-12
    assert slc.value <= 1 + 2 * math.sqrt(2) + 1e-9
    assert ql.value <= 1 + slc.value + 1e-9
    assert slc.direction == ds.direction == "exact"
    assert ds.value <= slc.value ** 2 + 1e-9
    replays(oik, slc, 8)
    replays(oik, ql, 8)


def test_bidemocracy():
    for p in (1.0, 2.0):
        est = C.bidemocracy_constant(LpNorm(p), GapSequence.geometric(4), 16)
        assert est.direction == "exact" and est.value == pytest.approx(1)
    oik = preset("oikhberg-small")
    est = C.bidemocracy_constant(oik, GapSequence((1, 16, 17)), 8)
    assert est.value <= math.sqrt(2) + 1e-9
    # off the sequence the first block is a full-size indicator: phi(4) phi*(4) / 4 = 4 * 2 / 4
    off = C.bidemocracy_constant(oik, SEQ_OIK, 8)
    assert off.direction == "exact" and off.value == pytest.approx(2)
    replays(oik, off, 8)


def test_determinism():
    oik = preset("oikhberg-small")
    X = sample_vectors(oik, 12, SMALL)
    a = C.quasi_greedy_constant(oik, None, 12, 0.5, (X, "s"), seed=3)
    b = C.quasi_greedy_constant(oik, None, 12, 0.5, (X, "s"), seed=3)
    assert a[0].to_json() == b[0].to_json()
