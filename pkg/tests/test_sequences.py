import math

import pytest
from hypothesis import given, strategies as st

from gapgreedy.sequences import (GapSequence, InsufficientPrefix, additive_threshold, admissible_cardinalities,
                                 classify, fast_subsequence, is_l_bounded, oikhberg_subsequence, ratios)


def test_classify_geometric():
    c = classify(GapSequence([2 ** k for k in range(1, 11)]))
    assert c.max_ratio == 2
    assert c.l_bounded_for == 2


def test_classify_factorial():
    c = classify(GapSequence.factorial(8))
    assert GapSequence.factorial(8).prefix == tuple(math.factorial(k) for k in range(1, 9))
    assert c.max_ratio == 8


def test_classify_arithmetic():
    c = classify(GapSequence([3 * k for k in range(1, 11)]))
    assert c.max_additive_gap == 3
    assert c.additive_bounded_for == 3


def test_classify_needs_two_terms():
    with pytest.raises(InsufficientPrefix):
        classify(GapSequence([5]))


def test_oikhberg_subsequence_examples():
    seq = GapSequence([1, 16, 17, 17 * 81, 17 * 81 + 1])
    assert oikhberg_subsequence(seq, 2) == [1, 3]
    r = ratios(seq)
    assert (r[0], r[2]) == (16, 81)
    seq2 = GapSequence([1, 4, 5, 45, 46, 690])
    assert oikhberg_subsequence(seq2, 3) == [1, 3, 5]
    assert [ratios(seq2)[k - 1] for k in (1, 3, 5)] == [4, 9, 15]


def test_oikhberg_subsequence_constant_ratios():
    with pytest.raises(InsufficientPrefix):
        oikhberg_subsequence(GapSequence.geometric(10), 3)


def test_fast_subsequence_examples():
    assert fast_subsequence(GapSequence([1, 7, 64, 65]), 2) == [1, 2]
    with pytest.raises(InsufficientPrefix):
        fast_subsequence(GapSequence.geometric(12), 1)
    assert fast_subsequence(GapSequence([1, 32, 3200]), 2, additive_threshold()) == [1, 2]


def test_rules_and_json():
    seq = GapSequence.geometric(5, r=3, a=1)
    assert seq.prefix == (1, 3, 9, 27, 81)
    assert GapSequence.from_json(seq.to_json()) == seq
    assert GapSequence.arithmetic(4, d=3).prefix == (3, 6, 9, 12)
    assert GapSequence.doubly_exponential(4).prefix[0] >= 1
    with pytest.raises(ValueError):
        GapSequence((1, 3, 9), {"kind": "geometric", "a": 1, "r": 2})
    with pytest.raises(ValueError):
        GapSequence((3, 2))


def test_admissible_cardinalities():
    assert admissible_cardinalities(GapSequence.geometric(6), 16) == [2, 4, 8, 16]
    assert admissible_cardinalities(None, 3) == [1, 2, 3]


increasing = st.lists(st.integers(1, 10 ** 6), min_size=3, max_size=20, unique=True).map(sorted)


@given(increasing)
def test_classify_monotone_under_extension(values):
    short, full = classify(GapSequence(values[:-1])) if len(values) > 2 else None, classify(GapSequence(values))
    assert full.max_ratio >= short.max_ratio
    assert full.max_additive_gap >= short.max_additive_gap
    assert full.max_ratio >= 1


@given(increasing)
def test_l_bounded_holds_pairwise(values):
    seq = GapSequence(values)
    l = classify(seq).l_bounded_for
    assert l >= math.ceil(classify(seq).max_ratio - 1e-12)
    assert is_l_bounded(seq, l)
    assert all(b <= l * a for a, b in zip(values, values[1:]))
