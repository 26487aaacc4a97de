"""Coefficient vectors, index sets, sign patterns and coordinate projections.

Indices are 1-based throughout the public API. Dense numpy arrays used by the
hot paths store index ``i`` at position ``i - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

import numpy as np

REL_TOL = 1e-9


def close(a: float, b: float, rel: float = REL_TOL) -> bool:
    """Relative comparison used for all equality checks on reals."""
    return abs(a - b) <= rel * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class IndexSet:
    """Sorted, duplicate-free set of positive integers."""

    elements: tuple[int, ...] = ()

    def __post_init__(self):
        elems = tuple(sorted({int(i) for i in self.elements}))
        if elems and elems[0] < 1:
            raise ValueError(f"indices must be >= 1, got {elems[0]}")
        object.__setattr__(self, "elements", elems)

    @classmethod
    def of(cls, items: Iterable[int]) -> "IndexSet":
        return cls(tuple(items))

    @classmethod
    def interval(cls, lo: int, hi: int) -> "IndexSet":
        """The integer interval {lo, ..., hi} (empty when hi < lo)."""
        return cls(tuple(range(lo, hi + 1)))

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, i: object) -> bool:
        return i in set(self.elements)

    def precedes(self, other: "IndexSet") -> bool:
        """A < B, i.e. max A < min B. Vacuously true if either set is empty."""
        if not self.elements or not other.elements:
            return True
        return self.elements[-1] < other.elements[0]

    def __lt__(self, other: "IndexSet") -> bool:
        return self.precedes(other)

    def union(self, other: "IndexSet") -> "IndexSet":
        return IndexSet(self.elements + other.elements)

    def isdisjoint(self, other: "IndexSet") -> bool:
        return set(self.elements).isdisjoint(other.elements)

    def to_list(self) -> list[int]:
        return list(self.elements)


@dataclass(frozen=True)
class SignPattern:
    """A choice of signs in {+1, -1} indexed by an IndexSet."""

    signs: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for i, s in self.signs.items():
            if s not in (1, -1):
                raise ValueError(f"sign at index {i} must be +1 or -1, got {s}")
            clean[int(i)] = int(s)
        object.__setattr__(self, "signs", MappingProxyType(dict(sorted(clean.items()))))

    @property
    def domain(self) -> IndexSet:
        return IndexSet(tuple(self.signs))

    @classmethod
    def constant(cls, A: IndexSet, sign: int = 1) -> "SignPattern":
        return cls({i: sign for i in A})

    @classmethod
    def alternating(cls, A: IndexSet) -> "SignPattern":
        """+1, -1, +1, ... along the increasing enumeration of A."""
        return cls({i: (1 if k % 2 == 0 else -1) for k, i in enumerate(A)})

    def __hash__(self):
        return hash(tuple(self.signs.items()))

    def __eq__(self, other):
        return isinstance(other, SignPattern) and dict(self.signs) == dict(other.signs)


@dataclass(frozen=True)
class CoeffVector:
    """Finitely supported vector x = sum a_i e_i in span(e_1..e_dim).

    Zero coefficients are never stored.
    """

    entries: Mapping[int, float] = field(default_factory=dict)
    dim: int = 1

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError("dim must be nonnegative")
        clean = {}
        for i, v in self.entries.items():
            i = int(i)
            v = float(v)
            if not np.isfinite(v):
                raise ValueError(f"coefficient at index {i} is not finite")
            if i < 1 or i > self.dim:
                raise ValueError(f"index {i} outside 1..{self.dim}")
            if v != 0.0:
                clean[i] = v
        object.__setattr__(self, "entries", MappingProxyType(dict(sorted(clean.items()))))

    # construction -------------------------------------------------------
    @classmethod
    def zero(cls, dim: int) -> "CoeffVector":
        return cls({}, dim)

    @classmethod
    def from_array(cls, a, dim: int | None = None) -> "CoeffVector":
        a = np.asarray(a, dtype=float)
        dim = len(a) if dim is None else dim
        return cls({i + 1: v for i, v in enumerate(a) if v != 0.0}, dim)

    @classmethod
    def from_json(cls, obj: Mapping) -> "CoeffVector":
        if "entries" not in obj or "dim" not in obj:
            raise ValueError("vector JSON needs 'entries' and 'dim'")
        return cls({int(k): float(v) for k, v in obj["entries"].items()}, int(obj["dim"]))

    def to_json(self) -> dict:
        return {"entries": {str(i): v for i, v in self.entries.items()}, "dim": self.dim}

    # views ---------------------------------------------------------------
    def support(self) -> IndexSet:
        return IndexSet(tuple(self.entries))

    def to_array(self, dim: int | None = None) -> np.ndarray:
        dim = self.dim if dim is None else dim
        out = np.zeros(dim)
        for i, v in self.entries.items():
            if i > dim:
                raise ValueError(f"index {i} outside 1..{dim}")
            out[i - 1] = v
        return out

    def __getitem__(self, i: int) -> float:
        return self.entries.get(i, 0.0)

    def __len__(self) -> int:
        return len(self.entries)

    # arithmetic ----------------------------------------------------------
    def _combine(self, other: "CoeffVector", sign: float) -> "CoeffVector":
        dim = max(self.dim, other.dim)
        out = dict(self.entries)
        for i, v in other.entries.items():
            out[i] = out.get(i, 0.0) + sign * v
        return CoeffVector(out, dim)

    def __add__(self, other: "CoeffVector") -> "CoeffVector":
        return self._combine(other, 1.0)

    def __sub__(self, other: "CoeffVector") -> "CoeffVector":
        return self._combine(other, -1.0)

    def __neg__(self) -> "CoeffVector":
        return self.scale(-1.0)

    def scale(self, lam: float) -> "CoeffVector":
        return CoeffVector({i: lam * v for i, v in self.entries.items()}, self.dim)

    def __mul__(self, lam: float) -> "CoeffVector":
        return self.scale(lam)

    __rmul__ = __mul__

    def allclose(self, other: "CoeffVector", rel: float = REL_TOL) -> bool:
        keys = set(self.entries) | set(other.entries)
        return all(close(self[i], other[i], rel) for i in keys)


def project(x: CoeffVector, A: IndexSet | Iterable[int]) -> CoeffVector:
    """Coordinate projection P_A(x)."""
    keep = set(A)
    return CoeffVector({i: v for i, v in x.entries.items() if i in keep}, x.dim)


def partial_sum(x: CoeffVector, m: int) -> CoeffVector:
    """S_m(x) = P_{1..m}(x); S_0 is zero."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return CoeffVector({i: v for i, v in x.entries.items() if i <= m}, x.dim)


def signed_indicator(A: IndexSet, eps: SignPattern | None = None, dim: int | None = None) -> CoeffVector:
    """1_{eps A} = sum_{n in A} eps_n e_n. Signs default to +1."""
    if eps is None:
        eps = SignPattern.constant(A)
    if eps.domain != A:
        raise ValueError("sign pattern domain does not match the index set")
    dim = dim if dim is not None else (A.elements[-1] if len(A) else 0)
    return CoeffVector(dict(eps.signs), dim)


def indicator(A: IndexSet | Iterable[int], dim: int | None = None) -> CoeffVector:
    A = A if isinstance(A, IndexSet) else IndexSet.of(A)
    return signed_indicator(A, None, dim)


def as_dense(x, dim: int | None = None) -> np.ndarray:
    """Accept a CoeffVector or array-like and return a float array."""
    if isinstance(x, CoeffVector):
        return x.to_array(dim)
    a = np.asarray(x, dtype=float)
    if dim is not None and len(a) != dim:
        out = np.zeros(dim)
        n = min(dim, len(a))
        if np.any(a[n:] != 0):
            raise ValueError("nonzero entries beyond the requested dimension")
        out[:n] = a[:n]
        return out
    return a
