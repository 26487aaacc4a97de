"""Gap sequences n = (n_k): construction, prefix classification, subsequence picks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np


class InsufficientPrefix(ValueError):
    """The finite prefix cannot supply what was asked for."""


@dataclass(frozen=True)
class GapSequence:
    """A strictly increasing prefix of positive integers, with an optional rule tag.

    ``rule`` is a plain dict such as ``{"kind": "geometric", "a": 1, "r": 2}``.
    Positions k are 1-based to match n_1, n_2, ...
    """

    prefix: tuple[int, ...]
    rule: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        pre = tuple(int(v) for v in self.prefix)
        if not pre:
            raise ValueError("prefix must be nonempty")
        if pre[0] < 1:
            raise ValueError("sequence terms must be positive")
        if any(b <= a for a, b in zip(pre, pre[1:])):
            raise ValueError("prefix must be strictly increasing")
        object.__setattr__(self, "prefix", pre)
        if self.rule is not None:
            expected = _generate(self.rule, len(pre))
            if tuple(expected) != pre:
                raise ValueError(f"prefix does not match rule {self.rule}")

    # generators -----------------------------------------------------------
    @classmethod
    def from_rule(cls, rule: dict, count: int) -> "GapSequence":
        return cls(tuple(_generate(rule, count)), dict(rule))

    @classmethod
    def geometric(cls, count: int, r: int = 2, a: int = 2) -> "GapSequence":
        return cls.from_rule({"kind": "geometric", "a": a, "r": r}, count)

    @classmethod
    def arithmetic(cls, count: int, d: int = 1, start: int | None = None) -> "GapSequence":
        return cls.from_rule({"kind": "arithmetic", "start": d if start is None else start, "d": d}, count)

    @classmethod
    def factorial(cls, count: int) -> "GapSequence":
        return cls.from_rule({"kind": "factorial"}, count)

    @classmethod
    def doubly_exponential(cls, count: int) -> "GapSequence":
        return cls.from_rule({"kind": "doubly-exponential"}, count)

    @classmethod
    def naturals(cls, count: int) -> "GapSequence":
        """The full sequence 1, 2, 3, ... (no gaps)."""
        return cls.from_rule({"kind": "arithmetic", "start": 1, "d": 1}, count)

    @classmethod
    def explicit(cls, values: Sequence[int]) -> "GapSequence":
        return cls(tuple(values), None)

    @classmethod
    def from_json(cls, obj: dict) -> "GapSequence":
        rule = obj.get("rule")
        if "prefix" in obj and obj["prefix"] is not None:
            return cls(tuple(obj["prefix"]), rule)
        if rule is None:
            raise ValueError("sequence JSON needs 'prefix' or 'rule'")
        count = int(obj.get("count", 12))
        return cls.from_rule(rule, count)

    def to_json(self) -> dict:
        return {"prefix": list(self.prefix), "rule": self.rule}

    # access ---------------------------------------------------------------
    def __len__(self) -> int:
        return len(self.prefix)

    def term(self, k: int) -> int:
        """n_k with 1-based k."""
        if not 1 <= k <= len(self.prefix):
            raise InsufficientPrefix(f"n_{k} is beyond the prefix of length {len(self.prefix)}")
        return self.prefix[k - 1]

    def up_to(self, N: int) -> list[int]:
        """Terms n_k with n_k <= N."""
        return [v for v in self.prefix if v <= N]

    def covers(self, N: int) -> bool:
        """True when the prefix decides membership for every integer <= N."""
        return self.prefix[-1] >= N or self.rule is not None

    def extended(self, count: int) -> "GapSequence":
        if self.rule is None:
            if count > len(self.prefix):
                raise InsufficientPrefix("explicit sequence cannot be extended")
            return GapSequence(self.prefix[:count])
        return GapSequence.from_rule(self.rule, count)


def _generate(rule: dict, count: int) -> list[int]:
    kind = rule.get("kind")
    if kind == "geometric":
        a, r = int(rule.get("a", 1)), int(rule["r"])
        return [a * r ** k for k in range(count)]
    if kind == "arithmetic":
        d = int(rule["d"])
        start = int(rule.get("start", d))
        return [start + d * k for k in range(count)]
    if kind == "factorial":
        return [math.factorial(k) for k in range(1, count + 1)]
    if kind == "doubly-exponential":
        return [2 ** (2 ** k) for k in range(count)]
    if kind == "explicit":
        vals = list(rule["values"])
        if count > len(vals):
            raise InsufficientPrefix("explicit rule has too few values")
        return vals[:count]
    raise ValueError(f"unknown sequence rule kind: {kind!r}")


@dataclass(frozen=True)
class GapClassification:
    """Prefix facts about a gap sequence.

    ``asymptotic_note`` records that limsup statements are not decidable from a
    prefix; only a rule tag can suggest them.
    """

    max_ratio: float
    max_additive_gap: int
    l_bounded_for: int | None
    additive_bounded_for: int | None
    prefix_length: int
    asymptotic_note: str


def classify(seq: GapSequence) -> GapClassification:
    pre = seq.prefix
    if len(pre) < 2:
        raise InsufficientPrefix("classification needs at least two terms")
    ratios = [b / a for a, b in zip(pre, pre[1:])]
    gaps = [b - a for a, b in zip(pre, pre[1:])]
    max_ratio = max(ratios)
    max_gap = max(gaps)
    kind = (seq.rule or {}).get("kind")
    if kind in ("geometric", "arithmetic"):
        note = f"rule '{kind}' has bounded ratios; prefix values are exact"
    elif kind in ("factorial", "doubly-exponential"):
        note = f"rule '{kind}' has unbounded ratios; l_bounded_for holds only on the prefix"
    else:
        note = "no rule tag: all values describe the prefix only"
    return GapClassification(
        max_ratio=max_ratio,
        max_additive_gap=max_gap,
        l_bounded_for=max(2, math.ceil(max_ratio - 1e-12)),
        additive_bounded_for=max_gap,
        prefix_length=len(pre),
        asymptotic_note=note,
    )


def ratios(seq: GapSequence) -> list[float]:
    """r_k = n_{k+1} / n_k for k = 1 .. len-1."""
    return [b / a for a, b in zip(seq.prefix, seq.prefix[1:])]


def oikhberg_subsequence(seq: GapSequence, count: int) -> list[int]:
    """Earliest indices k_1 < ... < k_count with strictly increasing n_{k+1}/n_k.

    Among all valid choices the lexicographically smallest one is returned.
    """
    if count < 1:
        raise ValueError("count must be positive")
    r = ratios(seq)
    L = len(r)
    # longest strictly increasing chain of ratios starting at each position
    best = [1] * L
    for i in range(L - 1, -1, -1):
        for j in range(i + 1, L):
            if r[j] > r[i] and best[j] + 1 > best[i]:
                best[i] = best[j] + 1
    picks: list[int] = []
    last = -math.inf
    start = 0
    for need in range(count, 0, -1):
        for i in range(start, L):
            if r[i] > last and best[i] >= need:
                picks.append(i + 1)
                last = r[i]
                start = i + 1
                break
        else:
            raise InsufficientPrefix(
                f"prefix supplies no {count} positions with strictly increasing ratios"
            )
    return picks


Threshold = Callable[[int, int], float]


def lacunary_threshold(j: int, n: int) -> float:
    """n_{k_j+1} must exceed 3 (j + 1) n_{k_j}."""
    return 3 * (j + 1) * n


def additive_threshold(base: int = 10) -> Threshold:
    """n_{k_j+1} must exceed n_{k_j} + 3 base^j."""

    def rule(j: int, n: int) -> float:
        return n + 3 * base ** j

    return rule


def fast_subsequence(seq: GapSequence, count: int, threshold: Threshold = lacunary_threshold) -> list[int]:
    """Greedily pick the earliest k_1 < k_2 < ... with n_{k_j + 1} > threshold(j, n_{k_j})."""
    pre = seq.prefix
    picks: list[int] = []
    k = 1
    for j in range(1, count + 1):
        while k < len(pre):
            if pre[k] > threshold(j, pre[k - 1]):
                picks.append(k)
                k += 1
                break
            k += 1
        else:
            raise InsufficientPrefix(f"prefix exhausted while selecting k_{j}")
    return picks


def is_l_bounded(seq: GapSequence, l: int) -> bool:
    return all(b <= l * a for a, b in zip(seq.prefix, seq.prefix[1:]))


def admissible_cardinalities(seq: GapSequence | None, N: int) -> list[int]:
    """Terms of seq in [1, N]; ``None`` stands for the full sequence of naturals."""
    if seq is None:
        return list(range(1, N + 1))
    return [v for v in seq.prefix if v <= N]


def as_array(seq: GapSequence) -> np.ndarray:
    return np.asarray(seq.prefix, dtype=np.int64)
