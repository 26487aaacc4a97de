"""Enumeration of signed indicators and sample vectors for the estimators.

A norm may declare symmetry classes: groups of positions inside which it is
permutation invariant (and possibly sign invariant). A signed indicator is
then determined up to norm-preserving moves by how many +1 and -1 entries it
places in each class, so only one canonical representative per count profile
is evaluated. Norms without symmetry have singleton classes, which reduces to
plain enumeration of sets and signs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .norms import SpaceNorm

CHUNK = 20000

Rep = tuple[tuple[int, ...], tuple[int, ...]]  # (1-based positions, signs)


def _is_generic(classes) -> bool:
    return all(len(members) == 1 and not inv for members, inv in classes)


def _compositions(sizes: Sequence[int], c: int) -> Iterator[tuple[int, ...]]:
    """Count vectors (k_1..k_r) with 0 <= k_i <= sizes[i] and sum c."""
    r = len(sizes)
    tail = [0] * (r + 1)
    for i in range(r - 1, -1, -1):
        tail[i] = tail[i + 1] + sizes[i]

    def rec(i, left):
        if i == r:
            if left == 0:
                yield ()
            return
        lo = max(0, left - tail[i + 1])
        for k in range(lo, min(sizes[i], left) + 1):
            for rest in rec(i + 1, left - k):
                yield (k,) + rest

    if c <= tail[0]:
        yield from rec(0, c)


def count_sets(classes, c: int) -> int:
    """Number of canonical unsigned representatives of size c."""
    sizes = [len(m) for m, _ in classes]
    # polynomial coefficient of z^c in prod (1 + z + ... + z^s)
    poly = np.zeros(c + 1, dtype=object)
    poly[0] = 1
    for s in sizes:
        new = np.zeros(c + 1, dtype=object)
        for k in range(min(s, c) + 1):
            new[k:] += poly[: c + 1 - k]
        poly = new
    return int(poly[c])


def count_reps(classes, c: int, signed: bool) -> int:
    """Number of canonical signed (or unsigned) representatives of size c."""
    if not signed:
        return count_sets(classes, c)
    if _is_generic(classes):
        L = len(classes)
        return math.comb(L, c) * (2 ** max(c - 1, 0)) if c <= L else 0
    poly = np.zeros(c + 1, dtype=object)
    poly[0] = 1
    for members, inv in classes:
        s = len(members)
        new = np.zeros(c + 1, dtype=object)
        for k in range(min(s, c) + 1):
            w = 1 if inv else k + 1
            new[k:] += w * poly[: c + 1 - k]
        poly = new
    return int(poly[c])


def _sign_splits(counts, classes) -> Iterator[tuple[int, ...]]:
    """Sign vectors for a canonical set: per non-invariant class, choose how many
    of its chosen members carry -1 (placed last)."""
    opts = []
    for k, (members, inv) in zip(counts, classes):
        if k == 0:
            continue
        if inv:
            opts.append([(1,) * k])
        else:
            opts.append([(1,) * (k - q) + (-1,) * q for q in range(k + 1)])
    for combo in itertools.product(*opts):
        yield tuple(s for part in combo for s in part)


def _positions_for(counts, classes) -> tuple[int, ...]:
    out = []
    for k, (members, _) in zip(counts, classes):
        out.extend(members[:k])
    return tuple(out)


def iter_set_reps(classes, c: int) -> Iterator[tuple[tuple[int, ...], list[tuple[int, ...]]]]:
    """Yield (positions, sign patterns) per canonical set of size c.

    For generic classes the sign patterns fix the first sign to +1 (the norm
    is even), otherwise all canonical sign splits are listed.
    """
    if _is_generic(classes):
        pos = [m[0] for m, _ in classes]
        signs = [(1,) + s for s in itertools.product((1, -1), repeat=max(c - 1, 0))] if c else [()]
        for combo in itertools.combinations(pos, c):
            yield combo, signs
        return
    sizes = [len(m) for m, _ in classes]
    for counts in _compositions(sizes, c):
        yield _positions_for(counts, classes), list(_sign_splits(counts, classes))


def rows_from_reps(reps: Sequence[Rep], N: int) -> np.ndarray:
    X = np.zeros((len(reps), N))
    for r, (pos, sg) in enumerate(reps):
        if pos:
            X[r, np.asarray(pos) - 1] = sg
    return X


def _generic_chunks(positions, c, signed, N):
    """Vectorized chunks of all signed indicators on generic positions."""
    P = np.asarray(positions, dtype=int) - 1
    if signed and c > 0:
        S = np.array([(1,) + s for s in itertools.product((1, -1), repeat=c - 1)], dtype=float)
    else:
        S = np.ones((1, c))
    per = max(1, CHUNK // len(S))
    it = itertools.combinations(range(len(P)), c)
    while True:
        block = list(itertools.islice(it, per))
        if not block:
            return
        combos = P[np.array(block, dtype=int).reshape(len(block), c)]
        B, K = len(block), len(S)
        X = np.zeros((B * K, N))
        rows = np.arange(B * K)[:, None]
        cols = np.repeat(combos, K, axis=0)
        vals = np.tile(S, (B, 1))
        if c:
            X[rows, cols] = vals
        sets = [tuple(int(p) + 1 for p in row) for row in combos]
        reps = [(s, tuple(int(v) for v in sg)) for s in sets for sg in S]
        yield X, reps


# ---------------------------------------------------------------------------
# structured fallbacks

def structured_sets(norm: SpaceNorm, positions: Sequence[int], c: int, rng: np.random.Generator,
                    n_random: int = 64) -> list[tuple[int, ...]]:
    """Contiguous runs (at landmarks and, for short ranges, everywhere), spread
    sets, and random sets of size c inside ``positions``."""
    P = list(positions)
    L = len(P)
    if c > L:
        return []
    if c == 0:
        return [()]
    out = set()
    starts = set(range(0, L - c + 1)) if L - c + 1 <= 64 else {0, L - c}
    marks = set(norm.landmarks(max(P)))
    for i, p in enumerate(P):
        if p in marks:
            starts.update({i, max(0, i - c + 1)})
    for s in starts:
        if 0 <= s <= L - c:
            out.add(tuple(P[s:s + c]))
    for step in (2, 3, 5):
        if (c - 1) * step < L:
            out.add(tuple(P[0:(c - 1) * step + 1:step]))
            out.add(tuple(P[L - 1 - (c - 1) * step::step]))
    for _ in range(n_random):
        out.add(tuple(sorted(rng.choice(P, size=c, replace=False).tolist())))
    return sorted(out)


def structured_signs(c: int, rng: np.random.Generator, n_random: int = 8) -> list[tuple[int, ...]]:
    if c == 0:
        return [()]
    if c <= 10:
        return [(1,) + s for s in itertools.product((1, -1), repeat=c - 1)]
    pats = {tuple([1] * c), tuple(1 if i % 2 == 0 else -1 for i in range(c)),
            tuple(1 if i < c // 2 else -1 for i in range(c)),
            tuple(1 if (i // 2) % 2 == 0 else -1 for i in range(c))}
    for _ in range(n_random):
        s = rng.choice((1, -1), size=c)
        s[0] = 1
        pats.add(tuple(int(v) for v in s))
    return sorted(pats)


# ---------------------------------------------------------------------------
@dataclass
class Extremes:
    max_val: float = -math.inf
    max_rep: Rep | None = None
    min_val: float = math.inf
    min_rep: Rep | None = None
    exhaustive: bool = True
    evaluations: int = 0
    count: int = 0
    spec: str = ""

    def update(self, vals: np.ndarray, reps: Sequence[Rep]) -> None:
        if not len(vals):
            return
        i, j = int(np.argmax(vals)), int(np.argmin(vals))
        if vals[i] > self.max_val:
            self.max_val, self.max_rep = float(vals[i]), reps[i]
        if vals[j] < self.min_val:
            self.min_val, self.min_rep = float(vals[j]), reps[j]
        self.evaluations += len(vals)


def indicator_chunks(norm: SpaceNorm, positions: Sequence[int], c: int, signed: bool, budget: int,
                     rng: np.random.Generator, N: int | None = None):
    """Return (chunk iterator, exhaustive, count, description)."""
    positions = sorted(positions)
    N = N or (positions[-1] if positions else 0)
    classes = norm.symmetry_classes(positions)
    count = count_reps(classes, c, signed)
    if count <= budget:
        if _is_generic(classes):
            return _generic_chunks(positions, c, signed, N), True, count, f"all {count} signed sets" if signed else f"all {count} sets"

        def gen():
            buf = []
            for pos, signs in iter_set_reps(classes, c):
                for sg in (signs if signed else [(1,) * c]):
                    buf.append((pos, sg))
                    if len(buf) >= CHUNK:
                        yield rows_from_reps(buf, N), buf
                        buf = []
            if buf:
                yield rows_from_reps(buf, N), buf

        return gen(), True, count, f"all {count} symmetry-reduced representatives"

    sets = structured_sets(norm, positions, c, rng)
    signs = structured_signs(c, rng) if signed else [(1,) * c]
    reps = [(s, sg) for s in sets for sg in signs]

    def gen_s():
        for i in range(0, len(reps), CHUNK):
            part = reps[i:i + CHUNK]
            yield rows_from_reps(part, N), part

    return gen_s(), False, count, f"{len(reps)} structured signed sets (of {count})"


def extremes(norm: SpaceNorm, positions: Sequence[int], c: int, signed: bool, budget: int,
             rng: np.random.Generator, N: int | None = None) -> Extremes:
    """Max and min of ||1_{eps A}|| over A inside ``positions`` with |A| = c."""
    chunks, exhaustive, count, spec = indicator_chunks(norm, positions, c, signed, budget, rng, N)
    ex = Extremes(exhaustive=exhaustive, count=count, spec=spec)
    for X, reps in chunks:
        ex.update(norm.eval_batch(X), reps)
    return ex


# ---------------------------------------------------------------------------
# sample vectors for the greedy-type constants

@dataclass
class SampleSpec:
    n_random: int = 200
    n_indicators: int = 200
    combs: bool = True
    decays: bool = True
    seed: int = 0
    extra: list = field(default_factory=list)

    def describe(self) -> str:
        parts = [f"{self.n_random} random normal vectors on random supports",
                 f"up to {self.n_indicators} signed indicators"]
        if self.combs:
            parts.append("two-block comb family")
        if self.decays:
            parts.append("geometric decays")
        return ", ".join(parts) + f" (seed {self.seed})"


def comb_family(norm: SpaceNorm, N: int) -> list[np.ndarray]:
    """Dense block next to an alternating block, and interleaved big/small combs."""
    out = []
    starts = sorted({1} | {p for p in norm.landmarks(N) if p <= N})
    lengths = sorted({2 ** k for k in range(1, int(math.log2(max(N, 2))) + 1)} | {3, 5, 7})
    for s in starts:
        for L in lengths:
            if s - 1 + L > N:
                continue
            for delta in (0.05, 0.5):
                x = np.zeros(N)
                idx = np.arange(s - 1, s - 1 + L)
                x[idx] = np.where((idx - s + 1) % 2 == 0, 1 + delta, -1.0)
                out.append(x)
                if s - 1 + 2 * L <= N:
                    y = np.zeros(N)
                    y[s - 1:s - 1 + L] = 1.0
                    alt = np.arange(L)
                    y[s - 1 + L:s - 1 + 2 * L] = (1 - delta) * np.where(alt % 2 == 0, 1.0, -1.0)
                    out.append(y)
                    z = np.zeros(N)
                    z[s - 1:s - 1 + L] = np.where(alt % 2 == 0, 1.0, -1.0)
                    z[s - 1 + L:s - 1 + 2 * L] = 1 - delta
                    out.append(z)
    return out


def sample_vectors(norm: SpaceNorm, N: int, spec: SampleSpec | None = None) -> np.ndarray:
    """Deterministic sample matrix (rows) for the given spec."""
    spec = spec or SampleSpec()
    rng = np.random.default_rng(spec.seed)
    rows: list[np.ndarray] = []
    for _ in range(spec.n_random):
        k = int(rng.integers(1, N + 1))
        x = np.zeros(N)
        supp = rng.choice(N, size=k, replace=False)
        x[supp] = rng.standard_normal(k)
        rows.append(x)
    # signed indicators: structured sets of assorted sizes
    ind = []
    sizes = sorted({1, 2, 3, 4, N // 2, N} | set(range(1, min(N, 8) + 1)))
    for c in sizes:
        if c < 1 or c > N:
            continue
        for s in structured_sets(norm, range(1, N + 1), c, rng, n_random=4):
            for sg in ((1,) * c, tuple(1 if i % 2 == 0 else -1 for i in range(c))):
                v = np.zeros(N)
                v[np.asarray(s) - 1] = sg
                ind.append(v)
    if len(ind) > spec.n_indicators:
        pick = rng.choice(len(ind), size=spec.n_indicators, replace=False)
        ind = [ind[i] for i in sorted(pick)]
    rows.extend(ind)
    if spec.combs:
        rows.extend(comb_family(norm, N))
    if spec.decays:
        for r in (0.5, 0.8, 0.95):
            base = r ** np.arange(N)
            rows.append(base.copy())
            rows.append(base * np.where(np.arange(N) % 2 == 0, 1.0, -1.0))
            rows.append(base[::-1].copy())
    rows.extend(np.asarray(e, dtype=float) for e in spec.extra)
    X = np.array([r for r in rows if np.any(r)])
    return X
