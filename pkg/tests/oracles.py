"""Naive reference implementations used to cross-check the package.

Every norm here is evaluated by literal enumeration of the admissible sets or
intervals, without the largest-entries shortcut used by the package.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def subsets_within(lo: int, hi: int, max_size: int):
    """All subsets of {lo..hi} (1-based, inclusive) with at most max_size elements."""
    pool = range(lo, hi + 1)
    for k in range(0, min(max_size, max(hi - lo + 1, 0)) + 1):
        yield from itertools.combinations(pool, k)


def lacunary_naive(a, seq, ks) -> float:
    """max{||a||_inf, sum over S with |S| in seq and |S| < min S, block partial sums}.

    Indices beyond the truncation carry zero coefficients, so an admissible S
    of size n contributes its intersection with {n+1..N}, which may be smaller.
    """
    a = np.asarray(a, dtype=float)
    N = len(a)
    best = float(np.abs(a).max()) if N else 0.0
    for n in seq:
        if n >= N:
            continue
        for S in subsets_within(n + 1, N, n):
            best = max(best, sum(abs(a[i - 1]) for i in S))
    for j, k in enumerate(ks, start=1):
        start = seq[k - 1]
        for end in range(start + 1, start + j * start + 1):
            if end > N:
                break
            best = max(best, abs(sum(a[i - 1] for i in range(start + 1, end + 1))))
    return best


def additive_naive(a, seq, ks, exponents, base) -> float:
    a = np.asarray(a, dtype=float)
    N = len(a)
    best = float(np.abs(a).max()) if N else 0.0
    for k, n in enumerate(seq, start=1):
        if n >= N:
            continue
        p = exponents[k - 1]
        for S in subsets_within(n + 1, N, base ** k):
            best = max(best, sum(abs(a[i - 1]) ** p for i in S) ** (1 / p))
    for j, k in enumerate(ks, start=1):
        s = seq[k - 1]
        p = exponents[k]
        T = [i for i in range(s + 1, s + base ** j + 1) if i <= N]
        best = max(best, sum(abs(a[i - 1]) ** p for i in T) ** (1 / p))
    return best


def oikhberg_naive(a, seq, ks, mode="partial") -> float:
    a = np.asarray(a, dtype=float)
    N = len(a)
    best = math.sqrt(sum(v * v for v in a))
    offset = 0
    for k in ks:
        lo, hi = seq[k - 1], seq[k]
        c = (hi / lo) ** 0.25
        m = math.isqrt(lo * hi)
        w = c / math.sqrt(m)
        block = [i for i in range(offset + 1, offset + m + 1) if i <= N]
        if mode == "partial":
            for end in range(1, len(block) + 1):
                best = max(best, w * abs(sum(a[i - 1] for i in block[:end])))
        else:
            best = max(best, w * sum(abs(a[i - 1]) for i in block))
        offset += m
    return best


def mixedpq_naive(a, m, p, q) -> float:
    a = np.asarray(a, dtype=float)
    head, tail = a[:m], a[m:]
    vals = [abs(sum(head)), sum(abs(v) ** p for v in head) ** (1 / p)]
    if len(tail):
        vals.append(sum(abs(v) ** q for v in tail) ** (1 / q))
    return max(vals)


def lp_naive(a, p) -> float:
    a = np.asarray(a, dtype=float)
    if p == math.inf:
        return float(max(abs(v) for v in a))
    return sum(abs(v) ** p for v in a) ** (1 / p)


def greedy_sets_naive(a, m: int, t: float) -> list[tuple[int, ...]]:
    """1-based t-greedy sets of size m by checking every m-subset."""
    a = np.abs(np.asarray(a, dtype=float))
    N = len(a)
    out = []
    for A in itertools.combinations(range(1, N + 1), m):
        inside = min((a[i - 1] for i in A), default=math.inf)
        outside = max((a[i - 1] for i in range(1, N + 1) if i not in A), default=0.0)
        if inside >= t * outside:
            out.append(A)
    return out


def inner_min_grid_oracle(norm, x, idx, steps=(41, 21, 21, 21)) -> float:
    """min over v of ||y|| with y = x off idx (0-based) and y_idx = v, by zooming grids."""
    x = np.asarray(x, dtype=float)
    idx = list(idx)
    k = len(idx)
    base = x.copy()
    base[idx] = 0.0
    radius = 2.0 * float(np.abs(x).sum()) + 1.0
    center = np.zeros(k)
    best = math.inf
    for g in steps:
        axes = [np.linspace(c - radius, c + radius, g) for c in center]
        V = np.array(list(itertools.product(*axes)))
        Y = np.repeat(x[None, :], len(V), axis=0)
        Y[:, idx] = V
        vals = norm.eval_batch(Y)
        i = int(np.argmin(vals))
        if vals[i] <= best:
            best, center = float(vals[i]), V[i]
        radius = 2 * (2 * radius / (g - 1))
    while radius > 1e-6:
        axes = [np.linspace(c - radius, c + radius, 9) for c in center]
        V = np.array(list(itertools.product(*axes)))
        Y = np.repeat(x[None, :], len(V), axis=0)
        Y[:, idx] = V
        vals = norm.eval_batch(Y)
        i = int(np.argmin(vals))
        if vals[i] <= best:
            best, center = float(vals[i]), V[i]
        radius *= 0.5
    return best


def sigma_oracle(norm, x, n) -> float:
    """Best n-term error by grid search on every support of size n."""
    N = len(x)
    return min(inner_min_grid_oracle(norm, x, S) for S in itertools.combinations(range(N), n))
