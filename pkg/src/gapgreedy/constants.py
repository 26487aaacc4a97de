"""Estimators for the greedy-theoretic constants.

Every estimator returns a ConstantEstimate whose value is attained by the
stored witness. A value is tagged ``exact`` when the whole declared family was
enumerated (possibly through a symmetry reduction), ``lower`` otherwise.
For lattice norms a structural bound of 1 is attached where it holds, which
closes the bracket when the search reaches 1.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterable, Sequence

import numpy as np

from .estimate import ConstantEstimate
from .families import (CHUNK, SampleSpec, _is_generic, count_reps, extremes, iter_set_reps,
                       rows_from_reps, sample_vectors, structured_sets, structured_signs)
from .greedy import DEFAULT_BUDGET, greedy_index_sets
from .norms import SpaceNorm, dual_norm_estimate
from .sequences import GapSequence, admissible_cardinalities

DEFAULT_UL_GRID = (1.0, -1.0, 0.5, -0.5, 0.25, -0.25)
DEFAULT_PERTURBATION_GRID = (-1.0, -0.5, 0.0, 0.5, 1.0)
DEFAULT_EXTRA = 4


def _rng(seed: int, *salt: int) -> np.random.Generator:
    return np.random.default_rng([seed, *salt])


def _cards(seq: GapSequence | None, N: int, max_card: int | None = None) -> list[int]:
    cards = admissible_cardinalities(seq, N)
    if max_card is not None:
        cards = [c for c in cards if c <= max_card]
    return cards


def _seq_label(seq: GapSequence | None) -> str:
    if seq is None:
        return "all cardinalities"
    return f"cardinalities in n={list(seq.prefix)}"


def _sparse(x: np.ndarray) -> dict:
    return {str(int(i) + 1): float(x[i]) for i in np.flatnonzero(x)}


def _dense(d: dict, N: int) -> np.ndarray:
    x = np.zeros(N)
    for k, v in d.items():
        x[int(k) - 1] = v
    return x


def _rep_json(rep, prefix: str) -> dict:
    pos, sg = rep
    return {prefix: list(pos), f"signs_{prefix}": list(sg)}


def _ratio(num: float, den: float) -> float:
    if den <= 0:
        return math.inf if num > 0 else math.nan
    return num / den


# ---------------------------------------------------------------------------
# fundamental functions

def _phi_table(norm: SpaceNorm, N: int, m: int, budget: int, seed: int):
    rows = []
    for c in range(1, m + 1):
        ex = extremes(norm, range(1, N + 1), c, True, budget, _rng(seed, 1, c), N)
        rows.append(ex)
    return rows


def fundamental_function(norm: SpaceNorm, N: int, m: int, budget: int = DEFAULT_BUDGET,
                         seed: int = 0, _table=None) -> ConstantEstimate:
    """phi(m) = sup over |A| <= m and signs of ||1_{eps A}||."""
    if not 1 <= m <= N:
        raise ValueError("need 1 <= m <= N")
    table = _table or _phi_table(norm, N, m, budget, seed)
    best = max(table[:m], key=lambda ex: ex.max_val)
    exhaustive = all(ex.exhaustive for ex in table[:m])
    evals = sum(ex.evaluations for ex in table[:m])
    return ConstantEstimate(
        "phi", best.max_val, "exact" if exhaustive else "lower", _rep_json(best.max_rep, "A"),
        f"signed indicators of size <= {m} in 1..{N}: " + "; ".join(ex.spec for ex in table[:m]),
        upper=None if exhaustive else m * norm.alpha1, exhaustive=exhaustive, evaluations=evals)


def fundamental_function_dual(norm: SpaceNorm, N: int, m: int, budget: int = DEFAULT_BUDGET,
                              seed: int = 0, per_card: int = 6, ascent_steps: int = 40) -> ConstantEstimate:
    """phi*(m) = sup over |A| <= m and signs of the dual norm of 1*_{eps A}."""
    if not 1 <= m <= N:
        raise ValueError("need 1 <= m <= N")
    positions = list(range(1, N + 1))
    best_val, best_wit, evals = -math.inf, None, 0
    if norm.dual_exact:
        exhaustive = True
        classes = norm.symmetry_classes(positions)
        for c in range(1, m + 1):
            if count_reps(classes, c, True) > budget:
                exhaustive = False
                reps = [(s, sg) for s in structured_sets(norm, positions, c, _rng(seed, 2, c), 8)
                        for sg in structured_signs(c, _rng(seed, 3, c))]
            else:
                reps = [(pos, sg) for pos, signs in iter_set_reps(classes, c) for sg in signs]
            for rep in reps:
                v = norm.dual_value(rows_from_reps([rep], N)[0])
                evals += 1
                if v > best_val:
                    best_val, best_wit = v, _rep_json(rep, "A")
        return ConstantEstimate("phi_star", best_val, "exact" if exhaustive else "lower", best_wit,
                                f"closed-form dual over indicators of size <= {m}",
                                upper=norm.dual_indicator_upper(m) if exhaustive else None,
                                exhaustive=exhaustive, evaluations=evals)
    for c in range(1, m + 1):
        rng = _rng(seed, 4, c)
        sets = structured_sets(norm, positions, c, rng, n_random=2)
        rng.shuffle(sets)
        sets = sorted(sets[:per_card])
        signs = [(1,) * c, tuple(1 if i % 2 == 0 else -1 for i in range(c))]
        for s in sets:
            for sg in signs[: 1 if c == 1 else 2]:
                f = rows_from_reps([(s, sg)], N)[0]
                est = dual_norm_estimate(norm, f, n_random=8, ascent_steps=ascent_steps, seed=seed)
                evals += est.evaluations
                if est.value > best_val:
                    best_val = est.value
                    best_wit = {"A": list(s), "signs_A": list(sg), "test_vector": _sparse(np.array(est.witness["test_vector"]))}
    return ConstantEstimate("phi_star", best_val, "lower", best_wit,
                            f"dual search (sign, coordinate, random, ascent) over structured indicators of size <= {m}",
                            upper=norm.dual_indicator_upper(m), evaluations=evals)


# ---------------------------------------------------------------------------
# democracy-type constants

_SIGNED = {"Delta_d": False, "Delta_s": True, "Delta_c": False, "Delta_sc": True,
           "Delta_oc": False, "Delta_osc": True}


def democracy_like_constant(kind: str, norm: SpaceNorm, seq: GapSequence | None, N: int,
                            budget: int = DEFAULT_BUDGET, seed: int = 0, window: int | None = None,
                            max_card: int | None = None) -> ConstantEstimate:
    """sup ||1_{eps A}|| / ||1_{eps' B}|| over the pair family of ``kind``.

    Delta_d, Delta_s: |A| <= |B|, both sizes admissible, A and B anywhere in 1..N.
    Delta_c, Delta_sc: additionally A < B.
    Delta_oc, Delta_osc: |A| = |B| of any size with A <= n < B for an admissible n.
    ``window`` limits each side to ``window`` positions next to the split.
    """
    if kind not in _SIGNED:
        raise ValueError(f"not a democracy-type kind: {kind}")
    signed = _SIGNED[kind]
    cache: dict = {}

    def ext(positions, c, salt):
        key = (tuple(positions), c)
        if key not in cache:
            cache[key] = extremes(norm, positions, c, signed, budget, _rng(seed, 5, salt, c), N)
        return cache[key]

    best = (-math.inf, None, None, None)
    families = []
    if kind in ("Delta_d", "Delta_s"):
        cards = _cards(seq, N, max_card)
        if not cards:
            raise ValueError("no admissible cardinality within 1..N")
        full = list(range(1, N + 1))
        table = {c: ext(full, c, 0) for c in cards}
        for a in cards:
            for b in cards:
                if a <= b:
                    r = _ratio(table[a].max_val, table[b].min_val)
                    if r > best[0]:
                        best = (r, table[a].max_rep, table[b].min_rep, None)
        families = list(table.values())
        desc = f"|A| <= |B|, {_seq_label(seq)} up to {N}"
    else:
        if kind in ("Delta_c", "Delta_sc"):
            cards = _cards(seq, N, max_card)
            splits = range(1, N)
            pairs = lambda nl, nr: [(a, b) for a in cards for b in cards if a <= b and a <= nl and b <= nr]
            desc = f"A < B, |A| <= |B|, {_seq_label(seq)}"
        else:
            if seq is None:
                splits = range(1, N)
            else:
                splits = [s for s in seq.prefix if s < N]
            pairs = lambda nl, nr: [(c, c) for c in range(1, min(nl, nr, max_card or N) + 1)]
            desc = f"|A| = |B|, A <= n < B for n in {'N' if seq is None else list(seq.prefix)}"
        for s in splits:
            left = list(range(max(1, s - window + 1) if window else 1, s + 1))
            right = list(range(s + 1, (min(N, s + window) if window else N) + 1))
            for a, b in pairs(len(left), len(right)):
                L, R = ext(left, a, 1), ext(right, b, 2)
                families.extend([L, R])
                r = _ratio(L.max_val, R.min_val)
                if r > best[0]:
                    best = (r, L.max_rep, R.min_rep, s)
        if best[1] is None:
            raise ValueError("no admissible pair fits in 1..N")
        if window:
            desc += f", each side within {window} positions of the split"
    value, repA, repB, split = best
    exhaustive = all(f.exhaustive for f in families)
    evals = sum(f.evaluations for f in {id(f): f for f in families}.values())
    witness = {**_rep_json(repA, "A"), **_rep_json(repB, "B")}
    if split is not None:
        witness["split"] = split
    upper = 1.0 if (norm.fully_symmetric and exhaustive) else None
    return ConstantEstimate(kind, value, "exact" if exhaustive else "lower", witness,
                            f"{desc}; N={N}" + ("" if exhaustive else "; structured families where not exhaustive"),
                            upper=upper, exhaustive=exhaustive, evaluations=evals)


# ---------------------------------------------------------------------------
def _segment_extremes(vals: np.ndarray, bounds: list[int]):
    starts = np.asarray(bounds[:-1])
    return np.maximum.reduceat(vals, starts), np.minimum.reduceat(vals, starts)


def ucc_constant(norm: SpaceNorm, seq: GapSequence | None, N: int, budget: int = DEFAULT_BUDGET,
                 seed: int = 0, max_card: int | None = None) -> ConstantEstimate:
    """sup over A with |A| admissible and signs of ||1_{eps A}|| / ||1_{eps' A}||."""
    positions = list(range(1, N + 1))
    classes = norm.symmetry_classes(positions)
    best = (-math.inf, None)
    exhaustive = True
    evals = 0
    for c in _cards(seq, N, max_card):
        if count_reps(classes, c, True) <= budget:
            groups = iter_set_reps(classes, c)
        else:
            exhaustive = False
            rng = _rng(seed, 6, c)
            signs = structured_signs(c, rng)
            groups = ((s, signs) for s in structured_sets(norm, positions, c, rng))
        buf, bounds = [], [0]
        def flush():
            nonlocal best, evals, buf, bounds
            if not buf:
                return
            vals = norm.eval_batch(rows_from_reps(buf, N))
            evals += len(vals)
            hi, lo = _segment_extremes(vals, bounds)
            for g in range(len(hi)):
                r = _ratio(hi[g], lo[g])
                if r > best[0]:
                    seg = vals[bounds[g]:bounds[g + 1]]
                    reps = buf[bounds[g]:bounds[g + 1]]
                    best = (r, (reps[int(np.argmax(seg))], reps[int(np.argmin(seg))]))
            buf, bounds = [], [0]
        for pos, signs in groups:
            buf.extend((pos, sg) for sg in signs)
            bounds.append(len(buf))
            if len(buf) >= CHUNK:
                flush()
        flush()
    if best[1] is None:
        raise ValueError("no admissible cardinality within 1..N")
    (pa, sa), (_, sb) = best[1]
    return ConstantEstimate("Ku_ucc", best[0], "exact" if exhaustive else "lower",
                            {"A": list(pa), "signs_A": list(sa), "signs_B": list(sb)},
                            f"single sets A, {_seq_label(seq)} up to {N}, sign pairs",
                            upper=1.0 if norm.lattice else None, exhaustive=exhaustive, evaluations=evals)


# ---------------------------------------------------------------------------
def _coefficient_assignments(classes_for_set, grid):
    """Per canonical set, coefficient vectors up to the norm's symmetries."""
    parts = []
    for members, inv in classes_for_set:
        vals = sorted({abs(g) for g in grid}) if inv else list(grid)
        parts.append(list(itertools.combinations_with_replacement(vals, len(members))))
    for combo in itertools.product(*parts):
        yield tuple(v for part in combo for v in part)


def ul_constants(norm: SpaceNorm, seq: GapSequence | None, N: int, grid: Sequence[float] = DEFAULT_UL_GRID,
                 budget: int = DEFAULT_BUDGET, seed: int = 0, n_random: int = 200,
                 max_card: int | None = None) -> tuple[ConstantEstimate, ConstantEstimate]:
    """Lower estimates of the UL constants C1 and C2 over grid coefficients."""
    positions = list(range(1, N + 1))
    classes = norm.symmetry_classes(positions)
    generic = _is_generic(classes)
    g = len(grid)
    best1 = (-math.inf, None)
    best2 = (-math.inf, None)
    exhaustive = True
    evals = 0
    for c in _cards(seq, N, max_card):
        rng = _rng(seed, 7, c)
        if generic:
            count = math.comb(N, c) * g ** c // 2
        else:
            count = count_reps(classes, c, False) * (math.comb(g + c - 1, c) ** 2)
        items: Iterable
        if count <= budget:
            if generic:
                assigns = [a for a in itertools.product(grid, repeat=c) if a[0] > 0]
                items = ((s, assigns) for s in itertools.combinations(positions, c))
            else:
                def gen_reduced():
                    for pos, _ in iter_set_reps(classes, c):
                        sub = []
                        for members, inv in classes:
                            chosen = [p for p in members if p in pos]
                            if chosen:
                                sub.append((chosen, inv))
                        yield pos, list(_coefficient_assignments(sub, grid))
                items = gen_reduced()
        else:
            exhaustive = False
            sets = structured_sets(norm, positions, c, rng, n_random=16)
            def gen_struct(sets=sets, rng=rng):
                for s in sets:
                    assigns = {tuple([grid[0]] * c)}
                    for _ in range(max(4, n_random // max(len(sets), 1))):
                        assigns.add(tuple(rng.choice(grid, size=c)))
                    big = [grid[0]] + [min(grid, key=abs)] * (c - 1)
                    assigns.add(tuple(big))
                    yield s, sorted(assigns)
            items = gen_struct()
        for s, assigns in items:
            ind = np.zeros((1, N))
            ind[0, np.asarray(s) - 1] = 1.0
            n1 = float(norm.eval_batch(ind)[0])
            A = np.asarray(assigns, dtype=float)
            for k in range(0, len(A), CHUNK):
                part = A[k:k + CHUNK]
                Y = np.zeros((len(part), N))
                Y[:, np.asarray(s) - 1] = part
                ny = norm.eval_batch(Y)
                evals += len(part) + 1
                mx = np.abs(part).max(axis=1)
                mn = np.abs(part).min(axis=1)
                r2 = ny / (mx * n1)
                r1 = mn * n1 / ny
                i2, i1 = int(np.argmax(r2)), int(np.argmax(r1))
                if r2[i2] > best2[0]:
                    best2 = (float(r2[i2]), {"A": list(s), "coeffs": part[i2].tolist()})
                if r1[i1] > best1[0]:
                    best1 = (float(r1[i1]), {"A": list(s), "coeffs": part[i1].tolist()})
    spec = f"sets with {_seq_label(seq)} up to {N}, coefficients from grid {list(grid)}" + (
        "" if exhaustive else " (structured sets and random grid draws)")
    # on singletons both ratios are 1 by homogeneity
    upper = 1.0 if (norm.lattice or max(_cards(seq, N, max_card)) == 1) else None
    return (ConstantEstimate("UL_C1", best1[0], "lower", best1[1], spec, upper=upper,
                             exhaustive=exhaustive, evaluations=evals),
            ConstantEstimate("UL_C2", best2[0], "lower", best2[1], spec, upper=upper,
                             exhaustive=exhaustive, evaluations=evals))


# ---------------------------------------------------------------------------
# greedy-type constants over sample vectors

def _samples(norm, N, samples) -> tuple[np.ndarray, str]:
    """Accepts a SampleSpec, a matrix of rows, or a (matrix, description) pair."""
    if isinstance(samples, tuple):
        return samples
    if samples is None or isinstance(samples, SampleSpec):
        spec = samples or SampleSpec()
        return sample_vectors(norm, N, spec), spec.describe()
    X = np.atleast_2d(np.asarray(samples, dtype=float))
    return X, f"{len(X)} supplied vectors"


def _greedy_rows(X: np.ndarray, cards, t: float, limit: int):
    """Yield (sample index, n, 0-based set) for every t-greedy set (capped)."""
    for r, x in enumerate(X):
        for n in cards:
            sets, _ = greedy_index_sets(x, n, t, limit=limit, distinct_sums=True)
            for s in sets:
                yield r, n, s


def _scan_greedy(norm, X, cards, t, limit, callback):
    buf = []

    def flush():
        if not buf:
            return
        G = np.zeros((len(buf), X.shape[1]))
        for k, (r, n, s) in enumerate(buf):
            idx = list(s)
            G[k, idx] = X[r, idx]
        R = X[[b[0] for b in buf]] - G
        ng = norm.eval_batch(G)
        nr = norm.eval_batch(R)
        callback(buf, ng, nr)
        buf.clear()

    for item in _greedy_rows(X, cards, t, limit):
        buf.append(item)
        if len(buf) >= CHUNK:
            flush()
    flush()


def quasi_greedy_constant(norm: SpaceNorm, seq: GapSequence | None, N: int, t: float = 1.0,
                          samples=None, greedy_limit: int = 256,
                          seed: int = 0) -> tuple[ConstantEstimate, ConstantEstimate]:
    """Lower estimates of C_{q,t} (||G|| / ||x||) and C_{sq,t} (||x - G|| / ||x||)."""
    X, sdesc = _samples(norm, N, samples)
    nx = norm.eval_batch(X)
    cards = _cards(seq, N)
    state = {"q": (-math.inf, None), "sq": (-math.inf, None), "evals": len(X)}

    def cb(buf, ng, nr):
        rows = np.array([b[0] for b in buf])
        rq = ng / nx[rows]
        rs = nr / nx[rows]
        state["evals"] += 2 * len(buf)
        for key, r in (("q", rq), ("sq", rs)):
            i = int(np.argmax(r))
            if r[i] > state[key][0]:
                b = buf[i]
                state[key] = (float(r[i]), {"x": _sparse(X[b[0]]), "n": b[1], "set": [j + 1 for j in b[2]], "t": t})

    _scan_greedy(norm, X, cards, t, greedy_limit, cb)
    spec = f"{sdesc}; n in {_seq_label(seq)} up to {N}; all t-greedy sets (t={t}, cap {greedy_limit})"
    upper = 1.0 if norm.lattice else None
    return (ConstantEstimate("Cq_t", state["q"][0], "lower", state["q"][1], spec, upper=upper, evaluations=state["evals"]),
            ConstantEstimate("Csq_t", state["sq"][0], "lower", state["sq"][1], spec, upper=upper, evaluations=state["evals"]))


def partially_greedy_constants(norm: SpaceNorm, seq: GapSequence | None, N: int, t: float = 1.0,
                               samples=None, greedy_limit: int = 256,
                               seed: int = 0) -> tuple[ConstantEstimate, ConstantEstimate]:
    """Lower estimates of C_{p,t} (over the tail) and C_{sp,t} (over the best tail)."""
    X, sdesc = _samples(norm, N, samples)
    cards = _cards(seq, N)
    scale = norm.eval_batch(X)
    # tails[r, k] = ||x_r - S_k x_r|| for k = 0..N
    tails = np.zeros((len(X), N + 1))
    for k in range(N + 1):
        Y = X.copy()
        Y[:, :k] = 0.0
        tails[:, k] = norm.eval_batch(Y)
    best_tail = np.minimum.accumulate(tails, axis=1)
    state = {"p": (-math.inf, None), "sp": (-math.inf, None), "evals": len(X) * (N + 2)}

    def cb(buf, ng, nr):
        state["evals"] += 2 * len(buf)
        for k, (r, n, s) in enumerate(buf):
            num = nr[k]
            tiny = 1e-12 * max(scale[r], 1e-300)
            for key, den in (("p", tails[r, n]), ("sp", best_tail[r, n])):
                if den <= tiny:
                    if num <= tiny:
                        continue
                    val = math.inf
                else:
                    val = num / den
                if val > state[key][0]:
                    state[key] = (float(val), {"x": _sparse(X[r]), "n": n, "set": [j + 1 for j in s], "t": t})

    _scan_greedy(norm, X, cards, t, greedy_limit, cb)
    spec = f"{sdesc}; n in {_seq_label(seq)} up to {N}; all t-greedy sets (t={t}, cap {greedy_limit})"
    return (ConstantEstimate("Cp_t", state["p"][0], "lower", state["p"][1], spec, evaluations=state["evals"]),
            ConstantEstimate("Csp_t", state["sp"][0], "lower", state["sp"][1], spec, evaluations=state["evals"]))


def suppression_unconditionality_constant(norm: SpaceNorm, seq: GapSequence | None, N: int, samples=None,
                                          budget: int = DEFAULT_BUDGET, seed: int = 0,
                                          per_sample: int = 64) -> ConstantEstimate:
    """Lower estimate of K_s = sup ||P_A x|| / ||x|| with |A| admissible."""
    X, sdesc = _samples(norm, N, samples)
    cards = _cards(seq, N)
    nx = norm.eval_batch(X)
    rng = _rng(seed, 8)
    best = (-math.inf, None)
    evals = len(X)
    for r, x in enumerate(X):
        supp = np.flatnonzero(x)
        s = len(supp)
        sizes = [k for k in range(0, s + 1) if any(k <= n <= k + (N - s) for n in cards)]
        if not sizes:
            continue
        if sum(math.comb(s, k) for k in sizes) <= max(per_sample, 4096):
            subsets = [c for k in sizes for c in itertools.combinations(supp.tolist(), k)]
        else:
            subsets = set()
            for k in sizes:
                subsets.add(tuple(supp[:k].tolist()))
                subsets.add(tuple(supp[s - k:].tolist()))
                order = supp[np.argsort(-np.abs(x[supp]), kind="stable")]
                subsets.add(tuple(sorted(order[:k].tolist())))
                subsets.add(tuple(supp[::2][:k].tolist()) if k <= len(supp[::2]) else tuple(supp[:k].tolist()))
            for _ in range(per_sample):
                k = sizes[int(rng.integers(len(sizes)))]
                subsets.add(tuple(sorted(rng.choice(supp, size=k, replace=False).tolist())))
            subsets = sorted(subsets)
        Y = np.zeros((len(subsets), N))
        for k, S in enumerate(subsets):
            Y[k, list(S)] = x[list(S)]
        vals = norm.eval_batch(Y) / nx[r]
        evals += len(Y)
        i = int(np.argmax(vals))
        if vals[i] > best[0]:
            best = (float(vals[i]), {"x": _sparse(x), "set": [j + 1 for j in subsets[i]]})
    return ConstantEstimate("Ks_suppr", best[0], "lower", best[1],
                            f"{sdesc}; subsets of supp(x) extendable to admissible sizes ({_seq_label(seq)})",
                            upper=1.0 if norm.lattice else None, evaluations=evals)


# ---------------------------------------------------------------------------
# perturbation families: QGLC and SLC

def _all_signed_rows(N: int, c: int, positions=None, fix_first: bool = False):
    """All signed indicators of size c: rows, set bitmasks, set ids, reps."""
    positions = list(range(N)) if positions is None else positions
    if fix_first and c:
        S = np.array([(1,) + s for s in itertools.product((1, -1), repeat=c - 1)], dtype=float)
    else:
        S = np.array(list(itertools.product((1, -1), repeat=c)), dtype=float).reshape(-1, c)
    combos = np.array(list(itertools.combinations(positions, c)), dtype=int).reshape(-1, c)
    B, K = len(combos), len(S)
    X = np.zeros((B * K, N))
    if c:
        X[np.arange(B * K)[:, None], np.repeat(combos, K, axis=0)] = np.tile(S, (B, 1))
    masks = (np.left_shift(1, combos).sum(axis=1) if c else np.zeros(B, dtype=np.int64)).astype(np.int64)
    return X, np.repeat(masks, K), combos, S


def _perturbation_supports(N: int, extra: int, room: int):
    for k in range(0, min(extra, N - room) + 1):
        for R in itertools.combinations(range(N), k):
            yield R


def _perturbation_values(k: int, grid_nonzero, halve: bool) -> np.ndarray:
    combos = list(itertools.product(grid_nonzero, repeat=k))
    V = np.array(combos, dtype=float).reshape(len(combos), k)
    if halve and k:
        V = V[V[:, 0] > 0]
    return V


def _count_perturbed(N, c, extra, g, sets_factor):
    total = 0
    for k in range(0, min(extra, N - sets_factor * c) + 1):
        total += math.comb(N, k) * g ** k * math.comb(N - k, c) * 2 ** c * sets_factor
    return total


def qglc_constant(norm: SpaceNorm, seq: GapSequence | None, N: int,
                  grid: Sequence[float] = DEFAULT_PERTURBATION_GRID, budget: int = DEFAULT_BUDGET,
                  seed: int = 0, extra: int = DEFAULT_EXTRA, n_random: int = 64) -> ConstantEstimate:
    """sup ||1_{eps A}|| / ||1_{eps A} + x|| with x disjoint from A, |x_i| <= 1 on grid."""
    nonzero = [v for v in grid if v != 0]
    best = (-math.inf, None)
    exhaustive = True
    evals = 0
    for c in _cards(seq, N):
        if norm.fully_symmetric:
            absvals = sorted({abs(v) for v in nonzero})
            for k in range(0, min(extra, N - c) + 1):
                for combo in itertools.combinations_with_replacement(absvals, k):
                    base = np.zeros(N)
                    base[:c] = 1.0
                    y = base.copy()
                    y[c:c + k] = combo
                    v0, v1 = norm.eval_batch(np.vstack([base, y]))
                    evals += 2
                    r = v0 / v1
                    if r > best[0]:
                        best = (float(r), {"A": list(range(1, c + 1)), "signs_A": [1] * c, "x": _sparse(y - base)})
            continue
        count = _count_perturbed(N, c, extra, len(nonzero), 1) // 2
        if count <= budget:
            I, masks, combos, S = _all_signed_rows(N, c, fix_first=True)
            base = norm.eval_batch(I)
            evals += len(I)
            for R in _perturbation_supports(N, extra, c):
                rmask = sum(1 << i for i in R)
                ok = np.flatnonzero((masks & rmask) == 0)
                V = _perturbation_values(len(R), nonzero, halve=False)
                Xs = np.repeat(I[ok], len(V), axis=0)
                if R:
                    Xs[:, list(R)] = np.tile(V, (len(ok), 1))
                vals = np.concatenate([norm.eval_batch(Xs[s:s + CHUNK]) for s in range(0, len(Xs), CHUNK)])
                evals += len(Xs)
                ratios = np.repeat(base[ok], len(V)) / vals
                i = int(np.argmax(ratios))
                if ratios[i] > best[0]:
                    row = Xs[i]
                    a_idx = np.flatnonzero(I[ok[i // len(V)]])
                    xpart = row.copy()
                    xpart[a_idx] = 0.0
                    best = (float(ratios[i]), {"A": [int(j) + 1 for j in a_idx],
                                               "signs_A": [int(v) for v in row[a_idx]], "x": _sparse(xpart)})
        else:
            exhaustive = False
            rng = _rng(seed, 9, c)
            sets = structured_sets(norm, range(1, N + 1), c, rng, n_random=16)
            signs = structured_signs(c, rng)
            for s in sets:
                rest = np.setdiff1d(np.arange(N), np.asarray(s) - 1)
                rows = []
                pert = [np.zeros(N)]
                for _ in range(n_random):
                    k = int(rng.integers(1, min(extra, len(rest)) + 1)) if len(rest) else 0
                    p = np.zeros(N)
                    if k:
                        R = rng.choice(rest, size=k, replace=False)
                        p[R] = rng.choice(nonzero, size=k)
                    pert.append(p)
                for sg in signs:
                    ind = np.zeros(N)
                    ind[np.asarray(s) - 1] = sg
                    for p in pert:
                        rows.append((ind, p))
                Xb = np.array([a for a, _ in rows])
                Xp = np.array([a + p for a, p in rows])
                r = norm.eval_batch(Xb) / norm.eval_batch(Xp)
                evals += 2 * len(rows)
                i = int(np.argmax(r))
                if r[i] > best[0]:
                    a, p = rows[i]
                    best = (float(r[i]), {"A": list(s), "signs_A": [int(v) for v in a[np.asarray(s) - 1]], "x": _sparse(p)})
    if best[1] is None:
        raise ValueError("no admissible cardinality within 1..N")
    spec = (f"A with {_seq_label(seq)} up to {N}, all signs, perturbations on <= {extra} extra indices "
            f"with values in {list(grid)}")
    if norm.fully_symmetric:
        spec += " (symmetry-reduced)"
    return ConstantEstimate("Cql", best[0], "exact" if exhaustive else "lower", best[1], spec,
                            upper=1.0 if norm.lattice else None, exhaustive=exhaustive, evaluations=evals)


def _best_disjoint_ratio(M: np.ndarray, m: np.ndarray, masks: np.ndarray):
    """max over disjoint set pairs (a, b) of M[a] / m[b]; returns (ratio, a, b)."""
    order_a = np.argsort(-M, kind="stable")
    order_b = np.argsort(m, kind="stable")
    m_min = m[order_b[0]] if len(order_b) else math.inf
    best = (-math.inf, None, None)
    for a in order_a:
        if M[a] / m_min <= best[0]:
            break
        for b in order_b:
            if masks[a] & masks[b] == 0:
                r = M[a] / m[b]
                if r > best[0]:
                    best = (float(r), int(a), int(b))
                break
    return best


def slc_constant(norm: SpaceNorm, seq: GapSequence | None, N: int,
                 grid: Sequence[float] = DEFAULT_PERTURBATION_GRID, budget: int = DEFAULT_BUDGET,
                 seed: int = 0, extra: int = DEFAULT_EXTRA, n_random: int = 24,
                 max_pairs: int = 400) -> ConstantEstimate:
    """sup ||x + 1_{eps A}|| / ||x + 1_{eps' B}|| over disjoint A, B with |A| = |B|
    admissible and grid perturbations x disjoint from A and B."""
    nonzero = [v for v in grid if v != 0]
    best = (-math.inf, None)
    exhaustive = True
    evals = 0
    cards = [c for c in _cards(seq, N) if 2 * c <= N]
    if not cards:
        raise ValueError("no admissible cardinality c with 2c <= N")
    for c in cards:
        if norm.fully_symmetric:
            absvals = sorted({abs(v) for v in nonzero})
            for k in range(0, min(extra, N - 2 * c) + 1):
                for combo in itertools.combinations_with_replacement(absvals, k):
                    x = np.zeros(N)
                    x[2 * c:2 * c + k] = combo
                    ya, yb = x.copy(), x.copy()
                    ya[:c] = 1.0
                    yb[c:2 * c] = 1.0
                    va, vb = norm.eval_batch(np.vstack([ya, yb]))
                    evals += 2
                    if va / vb > best[0]:
                        best = (float(va / vb), {"A": list(range(1, c + 1)), "signs_A": [1] * c,
                                                 "B": list(range(c + 1, 2 * c + 1)), "signs_B": [1] * c,
                                                 "x": _sparse(x)})
            continue
        count = _count_perturbed(N, c, extra, len(nonzero), 2) // 2
        if count <= budget:
            I, masks, combos, S = _all_signed_rows(N, c)
            K = len(S)
            set_masks = masks[::K]
            for R in _perturbation_supports(N, extra, 2 * c):
                rmask = sum(1 << i for i in R)
                ok_sets = np.flatnonzero((set_masks & rmask) == 0)
                if len(ok_sets) < 2:
                    continue
                rows = (ok_sets[:, None] * K + np.arange(K)[None, :]).ravel()
                V = _perturbation_values(len(R), nonzero, halve=True)
                for v in V:
                    Xs = I[rows].copy()
                    if R:
                        Xs[:, list(R)] = v
                    vals = np.concatenate([norm.eval_batch(Xs[s:s + CHUNK]) for s in range(0, len(Xs), CHUNK)])
                    evals += len(Xs)
                    per = vals.reshape(len(ok_sets), K)
                    r, a, b = _best_disjoint_ratio(per.max(axis=1), per.min(axis=1), set_masks[ok_sets])
                    if a is not None and r > best[0]:
                        x = np.zeros(N)
                        if R:
                            x[list(R)] = v
                        sa = S[int(np.argmax(per[a]))]
                        sb = S[int(np.argmin(per[b]))]
                        best = (r, {"A": [int(j) + 1 for j in combos[ok_sets[a]]], "signs_A": [int(s) for s in sa],
                                    "B": [int(j) + 1 for j in combos[ok_sets[b]]], "signs_B": [int(s) for s in sb],
                                    "x": _sparse(x)})
        else:
            exhaustive = False
            rng = _rng(seed, 10, c)
            sets = structured_sets(norm, range(1, N + 1), c, rng, n_random=16)
            pairs = [(a, b) for a in sets for b in sets if not set(a) & set(b)]
            if len(pairs) > max_pairs:
                pick = rng.choice(len(pairs), size=max_pairs, replace=False)
                pairs = [pairs[i] for i in sorted(pick)]
            signs = np.array(structured_signs(c, rng), dtype=float)
            full_signs = np.vstack([signs, -signs])
            for a, b in pairs:
                used = np.asarray(a + b) - 1
                rest = np.setdiff1d(np.arange(N), used)
                perts = [np.zeros(N)]
                for _ in range(n_random):
                    k = int(rng.integers(1, min(extra, len(rest)) + 1)) if len(rest) else 0
                    p = np.zeros(N)
                    if k:
                        R = rng.choice(rest, size=k, replace=False)
                        p[R] = rng.choice(nonzero, size=k)
                    perts.append(p)
                for p in perts:
                    XA = np.repeat(p[None, :], len(full_signs), axis=0)
                    XA[:, np.asarray(a) - 1] += full_signs
                    XB = np.repeat(p[None, :], len(full_signs), axis=0)
                    XB[:, np.asarray(b) - 1] += full_signs
                    va, vb = norm.eval_batch(XA), norm.eval_batch(XB)
                    evals += 2 * len(full_signs)
                    r = va.max() / vb.min()
                    if r > best[0]:
                        best = (float(r), {"A": list(a), "signs_A": [int(s) for s in full_signs[int(np.argmax(va))]],
                                           "B": list(b), "signs_B": [int(s) for s in full_signs[int(np.argmin(vb))]],
                                           "x": _sparse(p)})
    spec = (f"disjoint A, B with |A| = |B| in {_seq_label(seq)}, 2|A| <= {N}, all signs, perturbations on "
            f"<= {extra} extra indices with values in {list(grid)}")
    if norm.fully_symmetric:
        spec += " (symmetry-reduced)"
    upper = 1.0 if norm.fully_symmetric else None
    return ConstantEstimate("Delta_slc", best[0], "exact" if exhaustive else "lower", best[1], spec,
                            upper=upper, exhaustive=exhaustive, evaluations=evals)


# ---------------------------------------------------------------------------
def bidemocracy_constant(norm: SpaceNorm, seq: GapSequence | None, N: int, budget: int = DEFAULT_BUDGET,
                         seed: int = 0) -> ConstantEstimate:
    """max over admissible n <= N of phi(n) phi*(n) / n, bracketed."""
    cards = _cards(seq, N)
    if not cards:
        raise ValueError("no admissible cardinality within 1..N")
    table = _phi_table(norm, N, max(cards), budget, seed)
    best_lo, best_hi, wit = -math.inf, -math.inf, None
    exact = True
    evals = 0
    for n in cards:
        phi = fundamental_function(norm, N, n, budget, seed, _table=table)
        phis = fundamental_function_dual(norm, N, n, budget, seed)
        evals += phis.evaluations
        lo = phi.value * phis.value / n
        phi_hi = phi.upper_bound
        hi = None if (phi_hi is None or phis.upper_bound is None) else phi_hi * phis.upper_bound / n
        exact = exact and phi.direction == "exact" and phis.direction == "exact"
        if lo > best_lo:
            best_lo, wit = lo, {"n": n, "phi": phi.value, "phi_star": phis.value,
                                "phi_witness": phi.witness, "phi_star_witness": phis.witness}
        best_hi = math.inf if hi is None else max(best_hi, hi)
    evals += sum(ex.evaluations for ex in table)
    upper = None if math.isinf(best_hi) else best_hi
    return ConstantEstimate("Delta_b", best_lo, "exact" if exact else "lower", wit,
                            f"phi(n) phi*(n) / n for n in {_seq_label(seq)} up to {N}",
                            upper=upper, exhaustive=exact, evaluations=evals)


# ---------------------------------------------------------------------------
def replay(norm: SpaceNorm, est: ConstantEstimate, N: int) -> float:
    """Recompute an estimate's value from its witness."""
    w = est.witness
    kind = est.kind

    def ind(key, signs_key, base=None):
        y = np.zeros(N) if base is None else base.copy()
        y[np.asarray(w[key], dtype=int) - 1] += np.asarray(w[signs_key], dtype=float)
        return y

    if kind == "phi":
        return norm(ind("A", "signs_A"))
    if kind in _SIGNED:
        return _ratio(norm(ind("A", "signs_A")), norm(ind("B", "signs_B")))
    if kind == "Ku_ucc":
        return _ratio(norm(ind("A", "signs_A")), norm(ind("A", "signs_B")))
    if kind == "Cql":
        x = _dense(w["x"], N)
        return _ratio(norm(ind("A", "signs_A")), norm(ind("A", "signs_A", x)))
    if kind == "Delta_slc":
        x = _dense(w["x"], N)
        return _ratio(norm(ind("A", "signs_A", x)), norm(ind("B", "signs_B", x)))
    if kind in ("UL_C1", "UL_C2"):
        idx = np.asarray(w["A"]) - 1
        a = np.asarray(w["coeffs"], dtype=float)
        y = np.zeros(N)
        y[idx] = a
        one = np.zeros(N)
        one[idx] = 1.0
        if kind == "UL_C2":
            return norm(y) / (np.abs(a).max() * norm(one))
        return np.abs(a).min() * norm(one) / norm(y)
    if kind in ("Cq_t", "Csq_t", "Cp_t", "Csp_t", "Ks_suppr"):
        x = _dense(w["x"], N)
        g = np.zeros(N)
        idx = np.asarray(w["set"], dtype=int) - 1
        g[idx] = x[idx]
        if kind in ("Cq_t", "Ks_suppr"):
            return norm(g) / norm(x)
        if kind == "Csq_t":
            return norm(x - g) / norm(x)
        n = w["n"]
        tails = []
        for k in range(0, n + 1):
            y = x.copy()
            y[:k] = 0.0
            tails.append(norm(y))
        den = tails[n] if kind == "Cp_t" else min(tails)
        return _ratio(norm(x - g), den)
    if kind == "Delta_b":
        return w["phi"] * w["phi_star"] / w["n"]
    raise ValueError(f"no replay rule for {kind}")
