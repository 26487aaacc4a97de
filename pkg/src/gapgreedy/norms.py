"""Computable norms on finitely supported vectors.

Every norm evaluates a batch of dense rows at once (``eval_batch``); the
single-vector call is a thin wrapper. The sup over the infinite families of
admissible sets in the lacunary and additive-gap norms is computed from the
largest coefficients beyond a floor, which is where such a sup is attained.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import CoeffVector, as_dense
from .estimate import ConstantEstimate
from .sequences import GapSequence, InsufficientPrefix, ratios

SymmetryClasses = list[tuple[list[int], bool]]


class NormConfigError(ValueError):
    """Raised when a norm's parameters violate the construction's requirements."""


class SpaceNorm:
    """Base class. Subclasses implement ``_eval_rows`` on 2-D float arrays.

    Metadata:
      alpha1, alpha2   bounds sup ||e_i|| and sup ||e_i^*||
      basis_constant   an upper bound for the Schauder basis constant K
      lattice          True when ||x|| depends monotonically on |x| coordinatewise
                       (1-unconditional, hence also monotone)
      dual_exact       True when ``dual_value`` is exact
      max_dim          largest admissible index, ``None`` if unbounded
    """

    name = "norm"
    alpha1 = 1.0
    alpha2 = 1.0
    basis_constant = 1.0
    basis_constant_exact = True
    lattice = False
    dual_exact = False
    max_dim: int | None = None

    def __init__(self, seq: GapSequence | None = None):
        self.seq = seq

    # evaluation ---------------------------------------------------------
    def _eval_rows(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def eval_batch(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        self._check_width(X)
        return self._eval_rows(X)

    def __call__(self, x) -> float:
        a = as_dense(x)
        return float(self.eval_batch(a[None, :])[0])

    def _check_width(self, X: np.ndarray) -> None:
        if self.max_dim is not None and X.shape[1] > self.max_dim:
            if np.any(X[:, self.max_dim:] != 0):
                raise NormConfigError(
                    f"{self.name}: support exceeds the configured range 1..{self.max_dim}"
                )

    # structure used by the enumerators ----------------------------------
    def symmetry_classes(self, positions: Sequence[int]) -> SymmetryClasses:
        """Partition of ``positions`` into classes inside which the norm is
        permutation invariant. The flag says whether signs inside the class are
        irrelevant too. Default: no symmetry."""
        return [([p], False) for p in positions]

    @property
    def fully_symmetric(self) -> bool:
        return False

    def landmarks(self, N: int) -> list[int]:
        """Indices where the norm's structure changes (block edges, sequence terms)."""
        return []

    # duality --------------------------------------------------------------
    def dual_value(self, f: np.ndarray) -> float | None:
        """Exact dual norm of the functional with coefficients ``f`` if known."""
        return None

    def dual_upper(self, f: np.ndarray) -> float | None:
        """A structural upper bound for the dual norm of ``f`` if one is available."""
        return None

    def dual_indicator_upper(self, m: int) -> float | None:
        """Upper bound for sup_{|A| <= m} ||1*_{eps A}||."""
        return None

    def spec(self) -> dict:
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.spec()}>"


# ---------------------------------------------------------------------------
class LpNorm(SpaceNorm):
    lattice = True
    dual_exact = True

    def __init__(self, p: float = 2.0, seq: GapSequence | None = None):
        super().__init__(seq)
        p = float(p)
        if p < 1:
            raise NormConfigError("p must be >= 1")
        self.p = p
        self.name = f"l{p:g}"

    def _eval_rows(self, X):
        return np.linalg.norm(X, ord=self.p, axis=1)

    @property
    def conjugate(self) -> float:
        if self.p == 1:
            return math.inf
        if math.isinf(self.p):
            return 1.0
        return self.p / (self.p - 1)

    def symmetry_classes(self, positions):
        return [(list(positions), True)] if len(positions) else []

    @property
    def fully_symmetric(self) -> bool:
        return True

    def dual_value(self, f):
        return float(np.linalg.norm(np.asarray(f, dtype=float), ord=self.conjugate))

    def dual_upper(self, f):
        return self.dual_value(f)

    def dual_indicator_upper(self, m):
        q = self.conjugate
        return 1.0 if math.isinf(q) else m ** (1 / q)

    def spec(self):
        return {"kind": "lp", "p": self.p if math.isfinite(self.p) else "inf"}


# ---------------------------------------------------------------------------
class OikhbergNorm(SpaceNorm):
    """max{||a||_2, sup_i (c_i / sqrt(m_i)) * B_i(a)} over blocks i.

    In partial-sum mode B_i(a) is the largest |partial sum| inside block i; in
    absolute-sum mode it is the sum of |a_j| over the block.
    """

    basis_constant = 1.0

    def __init__(self, seq: GapSequence, ks: Sequence[int], mode: str = "partial"):
        super().__init__(seq)
        if mode not in ("partial", "absolute"):
            raise NormConfigError("mode must be 'partial' or 'absolute'")
        self.mode = mode
        self.lattice = mode == "absolute"
        self.ks = tuple(int(k) for k in ks)
        if not self.ks or any(b <= a for a, b in zip(self.ks, self.ks[1:])):
            raise NormConfigError("block indices k_i must be strictly increasing")
        try:
            pairs = [(seq.term(k), seq.term(k + 1)) for k in self.ks]
        except InsufficientPrefix as exc:
            raise NormConfigError(str(exc)) from exc
        self.c = np.array([(b / a) ** 0.25 for a, b in pairs])
        if np.any(np.diff(self.c) <= 0):
            raise NormConfigError("c_i must be strictly increasing (ratios n_{k+1}/n_k must increase)")
        self.m = np.array([math.isqrt(a * b) for a, b in pairs], dtype=np.int64)
        self.offsets = np.concatenate([[0], np.cumsum(self.m)[:-1]]).astype(np.int64)
        self.max_dim = int(self.offsets[-1] + self.m[-1])
        self.weights = self.c / np.sqrt(self.m)
        self.alpha1 = float(max(1.0, self.weights.max()))
        self.alpha2 = 1.0
        self.name = "oikhberg" if mode == "partial" else "oikhberg-unconditional"

    def block(self, i: int) -> range:
        """1-based indices of block i (1-based)."""
        s = int(self.offsets[i - 1])
        return range(s + 1, s + int(self.m[i - 1]) + 1)

    def _eval_rows(self, X):
        out = np.linalg.norm(X, axis=1)
        d = X.shape[1]
        for w, s, m in zip(self.weights, self.offsets, self.m):
            if s >= d:
                break
            blk = X[:, s:s + m]
            if self.mode == "partial":
                val = np.abs(np.cumsum(blk, axis=1)).max(axis=1)
            else:
                val = np.abs(blk).sum(axis=1)
            out = np.maximum(out, w * val)
        return out

    def symmetry_classes(self, positions):
        if self.mode == "partial":
            return super().symmetry_classes(positions)
        classes = []
        pos = sorted(positions)
        for i in range(1, len(self.m) + 1):
            blk = self.block(i)
            members = [p for p in pos if blk.start <= p < blk.stop]
            if members:
                classes.append((members, True))
        return classes

    def landmarks(self, N):
        marks = set()
        for s, m in zip(self.offsets, self.m):
            marks.update({int(s) + 1, int(s + m)})
        return sorted(p for p in marks if p <= N)

    def dual_upper(self, f):
        return float(np.linalg.norm(np.asarray(f, dtype=float)))

    def dual_indicator_upper(self, m):
        return math.sqrt(m)

    def spec(self):
        kind = "oikhberg" if self.mode == "partial" else "oikhberg-unconditional"
        return {"kind": kind, "sequence": self.seq.to_json(), "ks": list(self.ks)}


# ---------------------------------------------------------------------------
class LacunaryNorm(SpaceNorm):
    """max{||a||_inf, sup over admissible S of sum_S |a_i|, block partial sums}.

    Admissible S: |S| is a term of n and every element of S exceeds |S|. Block
    j starts after n_{k_j} and has length j * n_{k_j}.
    """

    basis_constant = 1.0

    def __init__(self, seq: GapSequence, ks: Sequence[int]):
        super().__init__(seq)
        self.ks = tuple(int(k) for k in ks)
        if not self.ks or any(b <= a for a, b in zip(self.ks, self.ks[1:])):
            raise NormConfigError("indices k_j must be strictly increasing")
        for j, k in enumerate(self.ks, start=1):
            try:
                lo, hi = seq.term(k), seq.term(k + 1)
            except InsufficientPrefix as exc:
                raise NormConfigError(str(exc)) from exc
            if not hi > 3 * (j + 1) * lo:
                raise NormConfigError(
                    f"k_{j}={k}: need n_{{k+1}} > 3(j+1) n_k, got {hi} <= {3 * (j + 1) * lo}"
                )
        self.starts = [seq.term(k) for k in self.ks]
        self.lengths = [j * seq.term(k) for j, k in enumerate(self.ks, start=1)]
        self.max_dim = seq.term(self.ks[-1] + 1)
        self.terms = np.array([v for v in seq.prefix if v < self.max_dim], dtype=np.int64)
        self.name = "lacunary"

    def block(self, j: int) -> range:
        s = self.starts[j - 1]
        return range(s + 1, s + self.lengths[j - 1] + 1)

    def _eval_rows(self, X):
        A = np.abs(X)
        d = X.shape[1]
        out = A.max(axis=1) if d else np.zeros(len(X))
        for n in self.terms:
            if n >= d:
                break
            out = np.maximum(out, _top_sum(A[:, n:], int(n)))
        for s, L in zip(self.starts, self.lengths):
            if s >= d:
                break
            blk = X[:, s:s + L]
            out = np.maximum(out, np.abs(np.cumsum(blk, axis=1)).max(axis=1))
        return out

    def landmarks(self, N):
        marks = {int(v) + 1 for v in self.terms} | {int(v) for v in self.terms}
        for s, L in zip(self.starts, self.lengths):
            marks.update({s + 1, s + L, s + L + 1})
        return sorted(p for p in marks if 1 <= p <= N)

    def dual_upper(self, f):
        return float(np.abs(np.asarray(f, dtype=float)).sum())

    def dual_indicator_upper(self, m):
        return float(m)

    def spec(self):
        return {"kind": "lacunary", "sequence": self.seq.to_json(), "ks": list(self.ks)}


def _top_sum(A: np.ndarray, n: int, p: float = 1.0) -> np.ndarray:
    """Row-wise l_p norm of the n largest entries of nonnegative A."""
    if A.shape[1] > n:
        top = -np.partition(-A, n - 1, axis=1)[:, :n]
    else:
        top = A
    if p == 1.0:
        return top.sum(axis=1)
    return (top ** p).sum(axis=1) ** (1.0 / p)


# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class MixedPQConditions:
    cond1: bool
    cond3: bool | None
    largem: bool
    largem_M: bool | None
    cond1_lhs: float
    cond1_rhs: float
    cond3_lhs: float
    cond3_rhs: float | None
    largem_lhs: float
    largem_rhs: float


class MixedPQNorm(SpaceNorm):
    """max{|sum_{i<=m} a_i|, l_p norm of a_1..a_m, l_q norm of the tail}."""

    def __init__(self, m: int, p: float, q: float, eps: float, delta: float | None = None,
                 M: float | None = None, require_largem: bool = False):
        super().__init__(None)
        m = int(m)
        if m < 2 or m % 2:
            raise NormConfigError("m must be an even integer >= 2")
        if not (0 < eps < 1 < q < p):
            raise NormConfigError("need 0 < eps < 1 < q < p")
        self.m, self.p, self.q, self.eps = m, float(p), float(q), float(eps)
        self.delta, self.M = delta, M
        self.conditions = self._conditions()
        if require_largem and not (self.conditions.largem and self.conditions.largem_M is not False):
            raise NormConfigError(
                f"large-m condition fails for m={m}: "
                f"{self.conditions.largem_lhs:.6g} <= {self.conditions.largem_rhs:.6g}"
            )
        # |sum_{i<=k} a_i| <= k^{1-1/p} ||a||_p bounds the head partial sums
        self.basis_constant = max(1.0, (m - 1) ** (1 - 1 / self.p))
        self.basis_constant_exact = False
        self.name = f"mixedpq(m={m})"

    def _conditions(self) -> MixedPQConditions:
        p, q, e, m = self.p, self.q, self.eps, self.m
        gap = 1 / q - 1 / (p + e)
        c1l, c1r = 1 - 1 / q, gap
        c3l = 1 - 1 / p
        c3r = None if self.delta is None else (2 - self.delta) * gap
        lm_l = m ** gap
        lm_r = 2 + 2 ** (1 / p) * m ** (1 / q - 1 / p)
        lmM = None if self.M is None else m ** (1 - 1 / p) > self.M ** 2
        tol = 1e-12
        return MixedPQConditions(
            cond1=c1l <= c1r + tol,
            cond3=None if c3r is None else c3l >= c3r - tol,
            largem=lm_l > lm_r,
            largem_M=lmM,
            cond1_lhs=c1l, cond1_rhs=c1r, cond3_lhs=c3l, cond3_rhs=c3r,
            largem_lhs=lm_l, largem_rhs=lm_r,
        )

    def _eval_rows(self, X):
        m = self.m
        head, tail = X[:, :m], X[:, m:]
        out = np.abs(head.sum(axis=1))
        out = np.maximum(out, np.linalg.norm(head, ord=self.p, axis=1) if head.shape[1] else 0.0)
        if tail.shape[1]:
            out = np.maximum(out, np.linalg.norm(tail, ord=self.q, axis=1))
        return out

    def symmetry_classes(self, positions):
        pos = sorted(positions)
        head = [p for p in pos if p <= self.m]
        tail = [p for p in pos if p > self.m]
        return [c for c in ((head, False), (tail, True)) if c[0]]

    def landmarks(self, N):
        return [p for p in (1, self.m, self.m + 1) if p <= N]

    def dual_upper(self, f):
        f = np.asarray(f, dtype=float)
        pc = self.p / (self.p - 1)
        qc = self.q / (self.q - 1)
        return float(np.linalg.norm(f[:self.m], ord=pc) + np.linalg.norm(f[self.m:], ord=qc))

    def dual_indicator_upper(self, k):
        pc = self.p / (self.p - 1)
        qc = self.q / (self.q - 1)
        return max(h ** (1 / pc) + (k - h) ** (1 / qc) for h in range(0, min(k, self.m) + 1))

    def spec(self):
        return {"kind": "mixedpq", "m": self.m, "p": self.p, "q": self.q, "eps": self.eps,
                "delta": self.delta, "M": self.M}


# ---------------------------------------------------------------------------
def default_exponents(count: int) -> list[float]:
    """p_k = 1 + 1/(k+1): strictly decreasing with infimum 1."""
    return [1.0 + 1.0 / (k + 1) for k in range(1, count + 1)]


class AdditiveGapNorm(SpaceNorm):
    """max{||a||_inf, sup_k S_k-term, sup_j T_j-term}.

    S_k-term: l_{p_k} norm of the base^k largest |a_i| with i > n_k (a sup over
    admissible sets of that size). T_j = {n_{k_j}+1, ..., n_{k_j}+base^j}
    carries the l_{p_{k_j+1}} norm.
    """

    lattice = True

    def __init__(self, seq: GapSequence, ks: Sequence[int], exponents: Sequence[float] | None = None,
                 base: int = 10):
        super().__init__(seq)
        self.base = int(base)
        if self.base < 2:
            raise NormConfigError("base must be >= 2")
        self.ks = tuple(int(k) for k in ks)
        if not self.ks or any(b <= a for a, b in zip(self.ks, self.ks[1:])):
            raise NormConfigError("indices k_j must be strictly increasing")
        for j, k in enumerate(self.ks, start=1):
            try:
                lo, hi = seq.term(k), seq.term(k + 1)
            except InsufficientPrefix as exc:
                raise NormConfigError(str(exc)) from exc
            if not hi > lo + 3 * self.base ** j:
                raise NormConfigError(
                    f"k_{j}={k}: need n_{{k+1}} > n_k + 3*{self.base}^{j}, got {hi}"
                )
        count = len(seq.prefix) + 1
        p = list(exponents) if exponents is not None else default_exponents(count)
        if len(p) < count:
            raise NormConfigError(f"need at least {count} exponents p_k")
        if any(v <= 1 for v in p) or any(b >= a for a, b in zip(p, p[1:])):
            raise NormConfigError("exponents p_k must be strictly decreasing and > 1")
        self.p = [float(v) for v in p]
        self.max_dim = seq.term(self.ks[-1] + 1)
        self.name = "additivegap"

    def exponent(self, k: int) -> float:
        """p_k, 1-based."""
        return self.p[k - 1]

    def T(self, j: int) -> range:
        s = self.seq.term(self.ks[j - 1])
        return range(s + 1, s + self.base ** j + 1)

    def D(self, j: int) -> range:
        s = self.seq.term(self.ks[j - 1]) + self.base ** j
        return range(s + 1, s + self.base ** j + 1)

    def _eval_rows(self, X):
        A = np.abs(X)
        d = X.shape[1]
        out = A.max(axis=1) if d else np.zeros(len(X))
        for k, n in enumerate(self.seq.prefix, start=1):
            if n >= d:
                break
            out = np.maximum(out, _top_sum(A[:, n:], self.base ** k, self.exponent(k)))
        for j, k in enumerate(self.ks, start=1):
            s = self.seq.term(k)
            if s >= d:
                break
            blk = A[:, s:s + self.base ** j]
            pk = self.exponent(k + 1)
            out = np.maximum(out, (blk ** pk).sum(axis=1) ** (1 / pk))
        return out

    def _cuts(self) -> list[int]:
        cuts = set(self.seq.prefix)
        for j in range(1, len(self.ks) + 1):
            t = self.T(j)
            cuts.update({t.start - 1, t.stop - 1})
        return sorted(cuts)

    def symmetry_classes(self, positions):
        cuts = self._cuts()
        groups: dict[int, list[int]] = {}
        for p in sorted(positions):
            key = sum(1 for c in cuts if c < p)
            groups.setdefault(key, []).append(p)
        return [(g, True) for g in groups.values()]

    def landmarks(self, N):
        marks = set()
        for c in self._cuts():
            marks.update({c, c + 1})
        return sorted(p for p in marks if 1 <= p <= N)

    def dual_upper(self, f):
        return float(np.abs(np.asarray(f, dtype=float)).sum())

    def dual_indicator_upper(self, m):
        return float(m)

    def spec(self):
        return {"kind": "additivegap", "sequence": self.seq.to_json(), "ks": list(self.ks),
                "exponents": self.p, "base": self.base}


# ---------------------------------------------------------------------------
# presets

OIKHBERG_SEQ = (1, 16, 17, 1377, 1378, 352768)
OIKHBERG_KS = (1, 3, 5)
LACUNARY_SEQ = (1, 7, 64)
LACUNARY_KS = (1, 2)
ADDITIVE_SEQ = (1, 32, 3200)
ADDITIVE_KS = (1, 2)
MIXEDPQ = {"p": 3.5, "q": 1.6, "eps": 0.5, "delta": 0.5, "M": 2.0}

PRESET_NOTES = {
    "l1": "l_1 on the truncation",
    "l2": "l_2 on the truncation",
    "oikhberg-small": "blocks from n=(1,16,17,1377,1378,352768), k=(1,3,5): c=(2,3,4), m=(4,153,22048)",
    "oikhberg-unconditional": "same blocks, absolute-sum mode (1-unconditional)",
    "lacunary-small": "n=(1,7,64), k=(1,2); admissible indices 1..64",
    "mixedpq-m4": "m=4, q=8/5, p=3.5, eps=0.5 (large-m condition fails; demo size)",
    "mixedpq-paper": "m=10000, q=8/5, p=3.5, eps=0.5, delta=0.5; large-m condition verified",
    "additivegap-small": "n=(1,32,3200), k=(1,2), block sizes 10 and 100, p_k = 1 + 1/(k+1)",
}


def preset(name: str) -> SpaceNorm:
    if name == "l1":
        return LpNorm(1.0)
    if name == "l2":
        return LpNorm(2.0)
    if name == "oikhberg-small":
        return OikhbergNorm(GapSequence(OIKHBERG_SEQ), OIKHBERG_KS, "partial")
    if name == "oikhberg-unconditional":
        return OikhbergNorm(GapSequence(OIKHBERG_SEQ), OIKHBERG_KS, "absolute")
    if name == "lacunary-small":
        return LacunaryNorm(GapSequence(LACUNARY_SEQ), LACUNARY_KS)
    if name == "mixedpq-m4":
        return MixedPQNorm(4, **MIXEDPQ)
    if name == "mixedpq-paper":
        return MixedPQNorm(10000, **MIXEDPQ, require_largem=True)
    if name == "additivegap-small":
        return AdditiveGapNorm(GapSequence(ADDITIVE_SEQ), ADDITIVE_KS)
    raise NormConfigError(f"unknown preset {name!r}; known: {', '.join(PRESET_NOTES)}")


def norm_from_spec(spec: dict | str) -> SpaceNorm:
    """Build a norm from a preset name or a {"kind": ...} dict."""
    if isinstance(spec, str):
        return preset(spec)
    spec = dict(spec)
    if "preset" in spec:
        return preset(spec["preset"])
    kind = spec.get("kind")
    try:
        if kind == "lp":
            p = spec.get("p", 2)
            return LpNorm(math.inf if p in ("inf", "infinity") else float(p))
        if kind in ("oikhberg", "oikhberg-unconditional"):
            seq = GapSequence.from_json(spec["sequence"])
            mode = "absolute" if kind == "oikhberg-unconditional" else spec.get("mode", "partial")
            return OikhbergNorm(seq, spec["ks"], mode)
        if kind == "lacunary":
            return LacunaryNorm(GapSequence.from_json(spec["sequence"]), spec["ks"])
        if kind == "mixedpq":
            return MixedPQNorm(spec["m"], spec["p"], spec["q"], spec["eps"], spec.get("delta"),
                               spec.get("M"), bool(spec.get("require_largem", False)))
        if kind == "additivegap":
            return AdditiveGapNorm(GapSequence.from_json(spec["sequence"]), spec["ks"],
                                   spec.get("exponents"), spec.get("base", 10))
    except KeyError as exc:
        raise NormConfigError(f"norm spec of kind {kind!r} is missing {exc}") from exc
    raise NormConfigError(f"unknown norm kind {kind!r}")


# ---------------------------------------------------------------------------
def dual_norm_estimate(norm: SpaceNorm, functional, dim: int | None = None,
                       n_random: int = 32, ascent_steps: int = 200, seed: int = 0) -> ConstantEstimate:
    """Estimate sup |<f, x>| / ||x|| from below by search over test vectors.

    Exact for norms with a known dual. Structural upper bounds (for instance
    ||f||_2 for norms dominating l_2) are attached as ``upper``.
    """
    f = as_dense(functional, dim)
    d = len(f)
    if d == 0 or not np.any(f):
        raise ValueError("functional must be nonzero")
    upper = norm.dual_upper(f)
    exact = norm.dual_value(f)
    if exact is not None:
        return ConstantEstimate("dual_norm", exact, "exact", {"functional": f.tolist()},
                                "closed-form dual norm", upper=exact)

    rng = np.random.default_rng(seed)
    supp = np.flatnonzero(f)
    cands = [np.sign(f), f.copy()]
    for i in supp:
        e = np.zeros(d)
        e[i] = 1.0
        cands.append(e)
    if len(supp) <= 10:
        for bits in range(1 << max(len(supp) - 1, 0)):
            v = np.zeros(d)
            v[supp[0]] = 1.0
            for b, i in enumerate(supp[1:]):
                v[i] = -1.0 if (bits >> b) & 1 else 1.0
            cands.append(v)
    for _ in range(n_random):
        v = np.zeros(d)
        v[supp] = rng.standard_normal(len(supp))
        cands.append(v)
        cands.append(rng.standard_normal(d))
    C = np.array(cands)
    vals = np.abs(C @ f) / np.maximum(norm.eval_batch(C), 1e-300)
    evals = len(C)
    order = np.argsort(-vals)[:3]
    best_val, best_x = float(vals[order[0]]), C[order[0]]
    for idx in order:
        v, x, k = _ascend(norm, f, C[idx], ascent_steps)
        evals += k
        if v > best_val:
            best_val, best_x = v, x
    return ConstantEstimate("dual_norm", best_val, "lower",
                            {"functional": f.tolist(), "test_vector": best_x.tolist()},
                            f"sign/coordinate/random candidates ({len(C)}) plus coordinate ascent",
                            upper=upper, evaluations=evals)


def _ascend(norm: SpaceNorm, f: np.ndarray, x0: np.ndarray, steps: int):
    """Coordinate pattern ascent on <f, x> / ||x||."""
    d = len(f)
    x = x0 * np.sign(f @ x0 or 1.0)
    scale = max(np.abs(x).max(), 1e-12)
    x = x / scale
    val = float(f @ x / norm(x))
    h = 0.5
    evals = 1
    eye = np.eye(d)
    for _ in range(steps):
        trial = np.vstack([x + h * eye, x - h * eye])
        nv = norm.eval_batch(trial)
        evals += len(trial)
        r = (trial @ f) / np.maximum(nv, 1e-300)
        i = int(np.argmax(r))
        if r[i] > val * (1 + 1e-12):
            x, val = trial[i], float(r[i])
        else:
            h *= 0.5
            if h < 1e-6:
                break
    return val, x, evals
