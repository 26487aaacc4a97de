"""t-greedy sets, greedy sums and best-approximation errors."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .core import CoeffVector, IndexSet, as_dense, project
from .estimate import ConstantEstimate
from .norms import SpaceNorm

DEFAULT_BUDGET = 10 ** 7
CHUNK = 20000


@dataclass(frozen=True)
class GreedyParams:
    t: float = 1.0
    m: int = 1

    def __post_init__(self):
        if not 0 < self.t <= 1:
            raise ValueError("t must lie in (0, 1]")
        if self.m < 1:
            raise ValueError("m must be positive")


@dataclass(frozen=True)
class GreedyOutcome:
    set: IndexSet
    sum: CoeffVector
    residual: CoeffVector


def _check_t(t: float) -> None:
    if not 0 < t <= 1:
        raise ValueError("t must lie in (0, 1]")


def iter_greedy_index_sets(a: np.ndarray, m: int, t: float,
                           distinct_sums: bool = False) -> Iterator[tuple[int, ...]]:
    """Yield 0-based t-greedy sets of size m for the dense vector a.

    Sets are grouped by their minimum value lam = min_A |a_i|: every element
    above lam / t is forced in, every element in [lam, lam / t] may fill the
    remaining slots, and at least one element must equal lam. With
    ``distinct_sums`` the sets that only differ on zero coefficients are
    collapsed to one representative.
    """
    _check_t(t)
    mags = np.abs(np.asarray(a, dtype=float))
    N = len(mags)
    if m > N:
        raise ValueError(f"m={m} exceeds the dimension {N}")
    if m == 0:
        yield ()
        return
    for lam in np.unique(mags)[::-1]:
        forced = np.flatnonzero(mags > lam / t) if lam > 0 else np.flatnonzero(mags > 0)
        if len(forced) > m:
            break  # smaller lam only enlarges the forced set
        free = np.flatnonzero((mags >= lam) & ~np.isin(np.arange(N), forced))
        need = m - len(forced)
        if need == 0 or need > len(free):
            continue
        is_min = mags[free] == lam
        if lam == 0 and distinct_sums:
            yield tuple(sorted(forced.tolist() + free[:need].tolist()))
            continue
        for combo in itertools.combinations(range(len(free)), need):
            if any(is_min[c] for c in combo):
                yield tuple(sorted(forced.tolist() + free[list(combo)].tolist()))


def greedy_index_sets(a, m: int, t: float, limit: int | None = None,
                      distinct_sums: bool = False) -> tuple[list[tuple[int, ...]], bool]:
    """Sorted list of 0-based t-greedy sets, truncated at ``limit``; flag = complete."""
    out = []
    complete = True
    for s in iter_greedy_index_sets(a, m, t, distinct_sums):
        if limit is not None and len(out) >= limit:
            complete = False
            break
        out.append(s)
    out.sort()
    return out, complete


def all_t_greedy_sets(x, m: int, t: float = 1.0, dim: int | None = None) -> list[IndexSet]:
    """Every A with |A| = m and min_A |x_i| >= t max_{not A} |x_i|, sorted."""
    a = as_dense(x, dim)
    sets, _ = greedy_index_sets(a, m, t)
    return [IndexSet(tuple(i + 1 for i in s)) for s in sets]


def is_t_greedy(x, A: Iterable[int], t: float, dim: int | None = None) -> bool:
    a = np.abs(as_dense(x, dim))
    inside = np.zeros(len(a), dtype=bool)
    inside[[i - 1 for i in A]] = True
    lo = a[inside].min() if inside.any() else math.inf
    hi = a[~inside].max() if (~inside).any() else 0.0
    return lo >= t * hi


def greedy_outcomes(x: CoeffVector, m: int, t: float = 1.0) -> list[GreedyOutcome]:
    out = []
    for A in all_t_greedy_sets(x, m, t):
        g = project(x, A)
        out.append(GreedyOutcome(A, g, x - g))
    return out


# ---------------------------------------------------------------------------
# inner problem: min over z supported on A of ||x - z||

def _residual_value(norm: SpaceNorm, x: np.ndarray, idx: np.ndarray, V: np.ndarray) -> np.ndarray:
    """||y|| for residuals y that equal x off idx and rows of V on idx."""
    Y = np.repeat(x[None, :], len(V), axis=0)
    Y[:, idx] = V
    return norm.eval_batch(Y)


def _directions(k: int, rng: np.random.Generator) -> np.ndarray:
    dirs = [np.eye(k), -np.eye(k)]
    if 1 < k <= 8:
        pairs = []
        for i, j in itertools.combinations(range(k), 2):
            for si, sj in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                v = np.zeros(k)
                v[i], v[j] = si, sj
                pairs.append(v / math.sqrt(2))
        dirs.append(np.array(pairs))
    if k > 1:
        r = rng.standard_normal((2 * k, k))
        dirs.append(r / np.linalg.norm(r, axis=1, keepdims=True))
    return np.vstack(dirs)


def inner_min_descent(norm: SpaceNorm, x: np.ndarray, idx, seed: int = 0,
                      rel_step: float = 1e-7, max_iter: int = 4000) -> tuple[float, np.ndarray, int]:
    """Multi-start pattern search for min over v of ||y||, y = x off idx, y_idx = v.

    Returns (value, best residual values v on idx, evaluations). The optimal
    approximant is z = x - y, supported on idx.
    """
    idx = np.asarray(idx, dtype=int)
    k = len(idx)
    if k == 0:
        return float(norm(x)), np.zeros(0), 1
    rng = np.random.default_rng(seed)
    xa = x[idx]
    scale = max(float(np.abs(x).max()), 1e-300)
    dirs = _directions(k, rng)
    starts = [np.zeros(k), xa.copy()]
    for sgn in (1, -1):
        starts.append(sgn * 0.5 * scale * rng.uniform(-1, 1, k))
    starts.append(0.5 * xa)
    evals = 0
    best_v, best_val = None, math.inf
    for v in starts:
        val = float(_residual_value(norm, x, idx, v[None, :])[0])
        evals += 1
        h = 0.5 * scale
        it = 0
        while h > rel_step * scale and it < max_iter:
            it += 1
            trial = v[None, :] + h * dirs
            tv = _residual_value(norm, x, idx, trial)
            evals += len(trial)
            i = int(np.argmin(tv))
            if tv[i] < val - 1e-15 * max(val, 1.0):
                v, val = trial[i], float(tv[i])
                h *= 1.5
            else:
                h *= 0.5
        if val < best_val:
            best_val, best_v = val, v
    return best_val, best_v, evals


def inner_min_grid(norm: SpaceNorm, x: np.ndarray, idx, tol: float = 1e-4,
                   radius: float | None = None) -> tuple[float, np.ndarray, int]:
    """Zooming grid search for the same inner problem; intended for |idx| <= 4.

    The optimum satisfies |v_i| <= alpha2 * ||x restricted off idx||, which
    fixes the initial box.
    """
    idx = np.asarray(idx, dtype=int)
    k = len(idx)
    if k == 0:
        return float(norm(x)), np.zeros(0), 1
    if k > 4:
        raise ValueError("grid oracle is limited to |A| <= 4")
    base = x.copy()
    base[idx] = 0.0
    if radius is None:
        radius = norm.alpha2 * float(norm(base)) * 1.001 + 1e-12
    g = {1: 201, 2: 41, 3: 17, 4: 9}[k]
    center = np.zeros(k)
    evals = 0
    best_val, best_v = math.inf, center
    scale = max(float(np.abs(x).max()), 1e-300)
    while True:
        axes = [np.linspace(c - radius, c + radius, g) for c in center]
        V = np.array(list(itertools.product(*axes)))
        vals = np.concatenate([_residual_value(norm, x, idx, V[s:s + CHUNK])
                               for s in range(0, len(V), CHUNK)])
        evals += len(V)
        i = int(np.argmin(vals))
        if vals[i] <= best_val:
            best_val, best_v = float(vals[i]), V[i]
        step = 2 * radius / (g - 1)
        if step < tol * scale:
            break
        center = best_v
        radius = 2 * step
    return best_val, best_v, evals


def inner_minimum(norm: SpaceNorm, x: np.ndarray, idx, seed: int = 0,
                  use_grid: bool | None = None) -> tuple[float, np.ndarray, int, bool]:
    """Best value of ||x - z|| over z supported on idx.

    Returns (value, residual values on idx, evaluations, certified). For
    lattice norms the projection is optimal and the value is certified.
    """
    idx = np.asarray(idx, dtype=int)
    if norm.lattice:
        y = x.copy()
        y[idx] = 0.0
        return float(norm(y)), np.zeros(len(idx)), 1, True
    val, v, ev = inner_min_descent(norm, x, idx, seed)
    if use_grid is None:
        use_grid = len(idx) <= 2
    if use_grid and len(idx) <= 4:
        gval, gv, gev = inner_min_grid(norm, x, idx)
        ev += gev
        if gval < val:
            val, v = gval, gv
    return val, v, ev, False


# ---------------------------------------------------------------------------
def _dense_and_dim(x, dim):
    a = as_dense(x, dim)
    return a, len(a)


def _proj_residual_norms(norm: SpaceNorm, a: np.ndarray, sets: list[tuple[int, ...]]) -> np.ndarray:
    out = []
    for s in range(0, len(sets), CHUNK):
        chunk = sets[s:s + CHUNK]
        Y = np.repeat(a[None, :], len(chunk), axis=0)
        for r, S in enumerate(chunk):
            Y[r, list(S)] = 0.0
        out.append(norm.eval_batch(Y))
    return np.concatenate(out) if out else np.zeros(0)


def _heuristic_subsets(a: np.ndarray, n: int, within: np.ndarray | None = None) -> list[tuple[int, ...]]:
    """Structured candidate sets of size <= n: greedy sets, prefixes, swaps."""
    N = len(a)
    pool = np.arange(N) if within is None else within
    order = pool[np.argsort(-np.abs(a[pool]), kind="stable")]
    cands = set()
    for k in range(0, min(n, len(pool)) + 1):
        cands.add(tuple(sorted(order[:k].tolist())))
        pre = [i for i in pool if i < N][:k]
        cands.add(tuple(sorted(pre)))
    for k in range(1, min(n, len(pool)) + 1):
        sets, _ = greedy_index_sets(np.where(np.isin(np.arange(N), pool), a, 0), k, 1.0, limit=50)
        cands.update(s for s in sets if len(set(s) - set(pool.tolist())) == 0)
    top = order[:min(n, len(pool))].tolist()
    rest = order[min(n, len(pool)):].tolist()[:3 * n + 5]
    for i in range(len(top)):
        for j in rest:
            s = top[:i] + top[i + 1:] + [j]
            cands.add(tuple(sorted(s)))
    return sorted(cands)


def projection_error(norm: SpaceNorm, x, n: int, budget: int = DEFAULT_BUDGET,
                     dim: int | None = None) -> ConstantEstimate:
    """min over |A| <= n of ||x - P_A(x)|| (only A inside supp(x) matter)."""
    a, N = _dense_and_dim(x, dim)
    supp = np.flatnonzero(a)
    s = len(supp)
    if n >= s:
        return ConstantEstimate("projection_error", 0.0, "exact", {"set": [int(i) + 1 for i in supp]},
                                "n >= |supp(x)|", exhaustive=True)
    total = sum(math.comb(s, k) for k in range(n + 1))
    if total <= budget:
        sets = [tuple(supp[list(c)].tolist()) for k in range(n + 1)
                for c in itertools.combinations(range(s), k)]
        spec = f"all {total} subsets of supp(x) with size <= {n}"
        exhaustive = True
    else:
        sets = _heuristic_subsets(a, n, supp)
        spec = f"{len(sets)} structured subsets (greedy, prefixes, swaps) of {total}"
        exhaustive = False
    vals = _proj_residual_norms(norm, a, sets)
    i = int(np.argmin(vals))
    return ConstantEstimate("projection_error", float(vals[i]), "exact" if exhaustive else "upper",
                            {"set": [j + 1 for j in sets[i]]}, spec,
                            exhaustive=exhaustive, evaluations=len(sets))


def sigma_n(norm: SpaceNorm, x, n: int, budget: int = DEFAULT_BUDGET, dim: int | None = None,
            seed: int = 0) -> ConstantEstimate:
    """Upper bound (exact when certified) for the best n-term error sigma_n(x)."""
    a, N = _dense_and_dim(x, dim)
    if n > N:
        raise ValueError("n exceeds the dimension")
    supp = np.flatnonzero(a)
    if n >= len(supp):
        return ConstantEstimate("sigma_n", 0.0, "exact", {"set": [int(i) + 1 for i in supp]},
                                "n >= |supp(x)|", exhaustive=True)
    proj = projection_error(norm, a, n, budget)
    cost = 1 if norm.lattice else 400 * max(n, 1) ** 2
    total = math.comb(N, n)
    if total * cost <= budget:
        sets = [tuple(c) for c in itertools.combinations(range(N), n)]
        exhaustive = True
        spec = f"all {total} supports of size {n} in 1..{N}"
    else:
        base = _heuristic_subsets(a, n)
        sets = sorted({s for s in base if len(s) == n} | _pad_sets(base, n, N))
        exhaustive = False
        spec = f"{len(sets)} structured supports of size {n} (of {total})"
    evals = proj.evaluations
    if norm.lattice:
        vals = _proj_residual_norms(norm, a, sets)
        evals += len(sets)
        i = int(np.argmin(vals))
        best_val, best_set, best_v = float(vals[i]), sets[i], np.zeros(n)
        certified = True
    else:
        best_val, best_set, best_v = math.inf, None, None
        results = []
        for S in sets:
            val, v, ev, _ = inner_minimum(norm, a, S, seed, use_grid=False)
            evals += ev
            results.append((val, S, v))
        results.sort(key=lambda r: r[0])
        if n <= 4:
            refined = []
            for val, S, v in results[:3]:
                g, gv, ev = inner_min_grid(norm, a, S)
                evals += ev
                refined.append((g, S, gv) if g < val else (val, S, v))
            results = sorted(refined + results[3:], key=lambda r: r[0])
        best_val, best_set, best_v = results[0]
        certified = False
    witness = {"set": [j + 1 for j in best_set], "residual_on_set": [float(v) for v in best_v]}
    if proj.value < best_val:
        best_val = proj.value
        witness = {"set": proj.witness["set"], "residual_on_set": [0.0] * len(proj.witness["set"])}
    direction = "exact" if (exhaustive and certified) else "upper"
    return ConstantEstimate("sigma_n", best_val, direction, witness, spec,
                            exhaustive=exhaustive, evaluations=evals)


def _pad_sets(base, n: int, N: int) -> set:
    out = set()
    for s in base:
        if len(s) < n:
            extra = [i for i in range(N) if i not in s][: n - len(s)]
            out.add(tuple(sorted(list(s) + extra)))
    return out


def tail_error(norm: SpaceNorm, x, n: int, dim: int | None = None) -> float:
    """||x - S_n(x)||."""
    a, _ = _dense_and_dim(x, dim)
    y = a.copy()
    y[:n] = 0.0
    return float(norm(y))


def best_tail_error(norm: SpaceNorm, x, n: int, dim: int | None = None) -> float:
    """min over 0 <= k <= n of ||x - S_k(x)||."""
    a, N = _dense_and_dim(x, dim)
    ks = range(0, min(n, N) + 1)
    Y = np.repeat(a[None, :], len(ks), axis=0)
    for r, k in enumerate(ks):
        Y[r, :k] = 0.0
    return float(norm.eval_batch(Y).min())


def semi_greedy_error(norm: SpaceNorm, x, A: Iterable[int], budget: int = DEFAULT_BUDGET,
                      dim: int | None = None, seed: int = 0) -> ConstantEstimate:
    """min over z with supp(z) inside A of ||x - z||."""
    a, _ = _dense_and_dim(x, dim)
    idx = np.array(sorted(i - 1 for i in A), dtype=int)
    val, v, ev, certified = inner_minimum(norm, a, idx, seed, use_grid=len(idx) <= 4)
    y = a.copy()
    y[idx] = 0.0
    proj_val = float(norm(y))
    if proj_val < val:
        val, v = proj_val, np.zeros(len(idx))
    return ConstantEstimate("semi_greedy_error", val, "exact" if certified else "upper",
                            {"set": [int(i) + 1 for i in idx], "residual_on_set": [float(u) for u in v]},
                            "projection for lattice norms, else pattern search plus grid oracle",
                            evaluations=ev + 1)
