"""Instantiate the greedy-theoretic inequalities on concrete instances.

Each side of an inequality is an interval [lo, hi] known to contain the true
value: exact measurements give a point, lower bounds from finite search give
[v, inf), structural or closed-form upper bounds give (-inf, v].
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import constants as C
from .estimate import ConstantEstimate
from .families import SampleSpec, sample_vectors
from .greedy import DEFAULT_BUDGET, greedy_index_sets, projection_error, sigma_n, tail_error
from .norms import (AdditiveGapNorm, LacunaryNorm, MixedPQNorm, OikhbergNorm, SpaceNorm,
                    preset as make_preset)
from .sequences import GapSequence, classify

TOL = 1e-9
VERDICTS = ("pass", "fail", "inconclusive")


@dataclass
class Side:
    """A measured quantity as an interval [lo, hi] around ``value``."""

    value: float
    lo: float
    hi: float
    source: str = ""

    @classmethod
    def exact(cls, v: float, source: str = "") -> "Side":
        return cls(float(v), float(v), float(v), source)

    @classmethod
    def upper(cls, v: float, source: str = "") -> "Side":
        return cls(float(v), -math.inf, float(v), source)

    @classmethod
    def of(cls, est: ConstantEstimate) -> "Side":
        lo = est.lower_bound
        hi = est.upper_bound
        return cls(est.value, -math.inf if lo is None else lo, math.inf if hi is None else hi,
                   f"{est.kind} [{est.direction}]: {est.search_spec}")

    @property
    def direction(self) -> str:
        if self.lo == self.hi:
            return "exact"
        if self.hi == math.inf:
            return "lower"
        if self.lo == -math.inf:
            return "upper"
        return "bracket"

    def to_json(self) -> dict:
        return {"value": _num(self.value), "lo": _num(self.lo), "hi": _num(self.hi),
                "direction": self.direction, "source": self.source}


def monotone(f: Callable[..., float], *sides: Side, source: str = "") -> Side:
    """Image of the sides under f, nondecreasing in every argument."""
    def safe(vals):
        if any(math.isnan(v) for v in vals):
            return math.nan
        try:
            return float(f(*vals))
        except (OverflowError, ValueError):
            return math.inf
    lo = -math.inf if any(s.lo == -math.inf for s in sides) else safe([s.lo for s in sides])
    hi = math.inf if any(s.hi == math.inf for s in sides) else safe([s.hi for s in sides])
    return Side(safe([s.value for s in sides]), lo, hi, source)


@dataclass
class LemmaCheck:
    """The inequality lhs <= rhs on one instance.

    status is ``proved`` when the intervals decide it, ``refuted`` when a
    measured lower bound exceeds the certified upper side, ``consistent`` when
    a lower-bound measurement stays below a determined bound, and
    ``undecided`` otherwise.
    """

    id: str
    statement: str
    lhs: Side
    rhs: Side
    inputs: dict = field(default_factory=dict)
    family: str = ""
    verdict: str = ""
    status: str = ""
    margin: float = math.nan

    def __post_init__(self):
        tol = TOL * max(1.0, abs(self.rhs.value) if math.isfinite(self.rhs.value) else 1.0)
        self.margin = self.rhs.value - self.lhs.value
        if self.lhs.hi <= self.rhs.lo + tol:
            self.verdict, self.status = "pass", "proved"
        elif self.lhs.lo > self.rhs.hi + tol:
            self.verdict, self.status = "fail", "refuted"
        elif self.rhs.direction in ("exact", "upper") and self.lhs.lo <= self.rhs.hi + tol:
            self.verdict, self.status = "pass", "consistent"
        else:
            self.verdict, self.status = "inconclusive", "undecided"

    def to_json(self) -> dict:
        return {"id": self.id, "statement": self.statement, "inputs": self.inputs,
                "lhs": self.lhs.to_json(), "rhs": self.rhs.to_json(), "verdict": self.verdict,
                "status": self.status, "margin": _num(self.margin), "family": self.family}


@dataclass
class VerdictReport:
    checks: list
    metadata: dict = field(default_factory=dict)
    runtime: float = 0.0

    @property
    def failed(self) -> list:
        return [c for c in self.checks if c.verdict == "fail"]

    @property
    def ok(self) -> bool:
        return not self.failed

    def to_json(self) -> dict:
        return {"metadata": self.metadata, "runtime_seconds": self.runtime,
                "checks": [c.to_json() for c in self.checks]}

    def table(self) -> str:
        rows = [("id", "verdict", "status", "lhs", "rhs", "margin")]
        for c in self.checks:
            rows.append((c.id, c.verdict, c.status, f"{c.lhs.value:.6g} ({c.lhs.direction})",
                         f"{c.rhs.value:.6g} ({c.rhs.direction})", f"{c.margin:.3g}"))
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        return "\n".join("  ".join(v.ljust(w) for v, w in zip(r, widths)) for r in rows)


def _num(v):
    if v is None or (isinstance(v, float) and (math.isinf(v) or math.isnan(v))):
        return None if v is None else str(v)
    return v


def _instance(norm: SpaceNorm, seq: GapSequence | None, N: int, **extra) -> dict:
    d = {"norm": norm.spec(), "N": N, "seq": None if seq is None else list(seq.prefix)}
    d.update(extra)
    return d


def _gap_params(seq: GapSequence, N: int) -> tuple[int, int]:
    """(n_1, l) for the prefix of seq relevant up to N."""
    pre = [v for v in seq.prefix if v <= N]
    nxt = [v for v in seq.prefix if v > N][:1]
    cls = classify(GapSequence(tuple(pre + nxt))) if len(pre + nxt) >= 2 else None
    return seq.term(1), (cls.l_bounded_for if cls else 2)


# ---------------------------------------------------------------------------
def check_ucc_bounded_gaps(norm: SpaceNorm, seq: GapSequence, N: int, budget: int = DEFAULT_BUDGET,
                           seed: int = 0, max_card: int | None = None) -> LemmaCheck:
    """C_u <= max{n_1 a1 a2, (2l-1) K_u K} with C_u unrestricted and K_u restricted."""
    n1, l = _gap_params(seq, N)
    cu = C.ucc_constant(norm, None, N, budget, seed, max_card)
    ku = C.ucc_constant(norm, seq, N, budget, seed, max_card)
    K = norm.basis_constant
    rhs = monotone(lambda k: max(n1 * norm.alpha1 * norm.alpha2, (2 * l - 1) * k * K), Side.of(ku),
                   source=f"max{{n1 a1 a2, (2l-1) Ku K}}, n1={n1}, l={l}, K={K:g}")
    return LemmaCheck("ucc-bounded-gaps", "C_u <= max{n1*a1*a2, (2l-1)*K_u*K}", Side.of(cu), rhs,
                      _instance(norm, seq, N, n1=n1, l=l, K=K), family=cu.search_spec)


def check_ul_bounded_gaps(norm: SpaceNorm, seq: GapSequence, N: int, budget: int = DEFAULT_BUDGET,
                          seed: int = 0, max_card: int | None = None) -> list[LemmaCheck]:
    """C_i' <= max{n_1 a1 a2, K^2 C_i + 2(l-1) C_i K} for i = 1, 2."""
    n1, l = _gap_params(seq, N)
    K = norm.basis_constant
    full = C.ul_constants(norm, None, N, budget=budget, seed=seed, max_card=max_card)
    restr = C.ul_constants(norm, seq, N, budget=budget, seed=seed, max_card=max_card)
    out = []
    for i, (u, r) in enumerate(zip(full, restr), start=1):
        rhs = monotone(lambda c: max(n1 * norm.alpha1 * norm.alpha2, K * K * c + 2 * (l - 1) * c * K),
                       Side.of(r), source=f"bound from restricted C{i}, n1={n1}, l={l}, K={K:g}")
        out.append(LemmaCheck(f"ul-bounded-gaps-C{i}", f"C{i}' <= max{{n1*a1*a2, K^2*C{i} + 2(l-1)*C{i}*K}}",
                              Side.of(u), rhs, _instance(norm, seq, N, n1=n1, l=l, K=K), family=u.search_spec))
    return out


def check_slc_chain(norm: SpaceNorm, seq: GapSequence, N: int, budget: int = DEFAULT_BUDGET,
                    seed: int = 0, bounded_gaps: bool = True) -> list[LemmaCheck]:
    """C_ql <= 1 + D, D <= 1 + C_ql (1 + D_s), D_s <= D^2 and the bounded-gap bound for D."""
    inst = _instance(norm, seq, N)
    d = Side.of(C.slc_constant(norm, seq, N, budget=budget, seed=seed))
    q = C.qglc_constant(norm, seq, N, budget=budget, seed=seed)
    ds = Side.of(C.democracy_like_constant("Delta_s", norm, seq, N, budget, seed))
    out = [
        LemmaCheck("slc-qglc", "C_ql <= 1 + Delta", Side.of(q), monotone(lambda v: 1 + v, d), inst,
                   family=q.search_spec),
        LemmaCheck("qglc-slc", "Delta <= 1 + C_ql (1 + Delta_s)", d,
                   monotone(lambda a, b: 1 + a * (1 + b), Side.of(q), ds), inst, family=d.source),
        LemmaCheck("slc-superdemocracy", "Delta_s <= Delta^2", ds, monotone(lambda v: v * v, d), inst,
                   family=ds.source),
    ]
    if bounded_gaps:
        n1, l = _gap_params(seq, N)
        full = Side.of(C.slc_constant(norm, None, N, budget=budget, seed=seed))
        a = norm.alpha1 * norm.alpha2
        rhs = monotone(lambda v: max(1 + 2 * a * n1, 1 + 2 * v * v * (1 + l)), d,
                       source=f"n1={n1}, l={l}")
        out.append(LemmaCheck("slc-bounded-gaps", "Delta' <= max{1 + 2 a1 a2 n1, 1 + 2 Delta^2 (1 + l)}",
                              full, rhs, _instance(norm, seq, N, n1=n1, l=l), family=full.source))
    return out


def check_mixedpq_separation(delta: float = 0.5, M: float = 2.0, preset: str | MixedPQNorm = "mixedpq-paper") -> LemmaCheck:
    """(m^{1/q - 1/(p+eps)})^{2-delta} <= ||1_{B_m}|| / ||1_{eps B_m}|| for alternating eps."""
    norm = make_preset(preset) if isinstance(preset, str) else preset
    if not isinstance(norm, MixedPQNorm):
        raise ValueError("the separation check needs a mixed (p, q) norm")
    m, p, q, e = norm.m, norm.p, norm.q, norm.eps
    cond = norm.conditions
    ones = np.ones(m)
    alt = np.where(np.arange(m) % 2 == 0, 1.0, -1.0)
    v1, v2 = norm.eval_batch(np.vstack([ones, alt]))
    ratio = v1 / v2
    gap = 1 / q - 1 / (p + e)
    cond3 = (1 - 1 / p) >= (2 - delta) * gap - 1e-12
    largem_M = m ** (1 - 1 / p) > M * M
    inputs = {"norm": norm.spec(), "delta": delta, "M": M, "ratio": ratio,
              "ratio_closed_form": m ** (1 - 1 / p),
              "cond1": [cond.cond1_lhs, cond.cond1_rhs, cond.cond1], "cond3": cond3,
              "largem": [cond.largem_lhs, cond.largem_rhs, cond.largem], "largem_M": largem_M}
    lhs = Side.exact((m ** gap) ** (2 - delta), "(Delta upper bound)^(2-delta)")
    rhs = Side.exact(ratio, "||1_{B_m}|| / ||1_{eps B_m}||, alternating eps")
    check = LemmaCheck("mixedpq-separation", "Delta_upper^(2-delta) <= ||1_B|| / ||1_{eps B}|| <= Delta_s",
                       lhs, rhs, inputs, family="two direct evaluations on B_m = {1..m}")
    if not (cond.cond1 and cond3 and cond.largem and largem_M):
        check.verdict, check.status = "fail", "refuted"
    return check


def _pairing_family(N: int, n_pairs: int, seed: int):
    rng = np.random.default_rng([seed, 21])
    for _ in range(n_pairs):
        x = rng.standard_normal(N) * (rng.random(N) < 0.8)
        f = rng.standard_normal(N) * (rng.random(N) < 0.8)
        if np.any(x) and np.any(f):
            yield x, f
    e1 = np.zeros(N)
    e1[0] = 1.0
    yield np.ones(N), e1
    yield np.ones(N), np.ones(N)


def check_duality_pairing(norm: SpaceNorm, N: int, t: float = 1.0, n_pairs: int = 60,
                          seed: int = 0, greedy_limit: int = 32) -> LemmaCheck:
    """|(x* - P_B x*)(P_A x)| <= t^{-1} phi*(|A|) phi(|B|) |B|^{-1} ||x|| ||x*||, B t-greedy for x*."""
    if not norm.dual_exact:
        raise ValueError("the pairing check needs an exact dual norm")
    table = C._phi_table(norm, N, N, DEFAULT_BUDGET, seed)
    phi = np.maximum.accumulate([ex.max_val for ex in table])
    phis = [C.fundamental_function_dual(norm, N, m, seed=seed).value for m in range(1, N + 1)]
    rng = np.random.default_rng([seed, 22])
    best, wit, count = -math.inf, None, 0
    for x, f in _pairing_family(N, n_pairs, seed):
        nx, nf = norm(x), norm.dual_value(f)
        A_sets = [tuple(range(N)), tuple(np.flatnonzero(x))]
        for _ in range(4):
            k = int(rng.integers(1, N + 1))
            A_sets.append(tuple(sorted(rng.choice(N, size=k, replace=False).tolist())))
        for nb in range(1, N + 1):
            for B in greedy_index_sets(f, nb, t, limit=greedy_limit)[0]:
                g = f.copy()
                g[list(B)] = 0.0
                for A in A_sets:
                    if not A:
                        continue
                    lhs = abs(float(g[list(A)] @ x[list(A)]))
                    bound = phis[len(A) - 1] * phi[nb - 1] / nb / t * nx * nf
                    count += 1
                    r = lhs / bound if bound > 0 else (0.0 if lhs == 0 else math.inf)
                    if r > best:
                        best, wit = r, {"x": x.tolist(), "x_star": f.tolist(), "A": [i + 1 for i in A],
                                        "B": [i + 1 for i in B]}
    return LemmaCheck("duality-pairing", "|(x* - P_B x*)(P_A x)| / (t^-1 phi*(|A|) phi(|B|) |B|^-1 ||x|| ||x*||) <= 1",
                      Side.exact(best, "max ratio over the pair family"), Side.exact(1.0),
                      _instance(norm, None, N, t=t, pairs=n_pairs, evaluated=count, witness=wit),
                      family=f"{n_pairs} random pairs plus unit and flat probes; A in {{all, supp x, 4 random}}; "
                             f"every t-greedy B (cap {greedy_limit})")


def check_bidem_consequences(norm: SpaceNorm, seq: GapSequence | None, N: int, budget: int = DEFAULT_BUDGET,
                             seed: int = 0) -> list[LemmaCheck]:
    """D_s <= D_b, D <= 1 + 2 D_b and max{C1, C2} <= D_b."""
    inst = _instance(norm, seq, N)
    db = Side.of(C.bidemocracy_constant(norm, seq, N, budget, seed))
    ds = Side.of(C.democracy_like_constant("Delta_s", norm, seq, N, budget, seed))
    d = Side.of(C.slc_constant(norm, seq, N, budget=budget, seed=seed))
    c1, c2 = (Side.of(e) for e in C.ul_constants(norm, seq, N, budget=budget, seed=seed))
    cmax = monotone(max, c1, c2, source="max of the UL constants")
    return [
        LemmaCheck("bidem-superdemocracy", "Delta_s <= Delta_b", ds, db, inst, family=ds.source),
        LemmaCheck("bidem-slc", "Delta <= 1 + 2 Delta_b", d, monotone(lambda v: 1 + 2 * v, db), inst,
                   family=d.source),
        LemmaCheck("bidem-ul", "max{C1, C2} <= Delta_b", cmax, db, inst, family=c1.source),
    ]


def check_partially_greedy_ledger(norm: SpaceNorm, seq: GapSequence | None, N: int, t: float = 1.0,
                                  samples=None, budget: int = DEFAULT_BUDGET, seed: int = 0,
                                  window: int | None = None, max_card: int | None = None) -> list[LemmaCheck]:
    """D_osc <= C_p, the t-greedy projection bound, and C_p <= C_sp on one sample family."""
    inst = _instance(norm, seq, N, t=t)
    X, sdesc = C._samples(norm, N, samples)
    samples = (X, sdesc)
    dosc = C.democracy_like_constant("Delta_osc", norm, seq, N, budget, seed, window, max_card)
    cp, csp = C.partially_greedy_constants(norm, seq, N, t, samples=samples)
    cq_t, _ = C.quasi_greedy_constant(norm, None, N, t, samples=samples)
    cq1, _ = C.quasi_greedy_constant(norm, None, N, 1.0, samples=samples)
    qg = monotone(lambda c: c + 4 * c * c / t, Side.of(cq1), source="C_q + 4 t^-1 C_q^2")
    fam = sdesc
    return [
        LemmaCheck("osc-partially-greedy", "Delta_osc <= C_p", Side.of(dosc), Side.of(cp), inst, family=dosc.search_spec),
        LemmaCheck("qg-projection", "||P_A x|| / ||x|| <= C_q + 4 t^-1 C_q^2 for t-greedy A", Side.of(cq_t), qg,
                   inst, family=fam),
        LemmaCheck("partially-vs-strong", "C_p <= C_sp on the same samples",
                   Side.exact(cp.value, "C_p over the family"), Side.exact(csp.value, "C_sp over the family"),
                   inst, family=fam),
    ]


def check_error_ordering(norm: SpaceNorm, N: int, X: np.ndarray, ns: Sequence[int], budget: int = 10**5,
                         seed: int = 0) -> LemmaCheck:
    """sigma_n <= projection_error <= tail_error on every sample."""
    worst, wit = -math.inf, None
    for r, x in enumerate(X):
        for n in ns:
            s = sigma_n(norm, x, n, budget, N, seed).value
            p = projection_error(norm, x, n, budget, N).value
            tl = tail_error(norm, x, n, N)
            scale = max(1.0, tl)
            gap = max(s - p, p - tl) / scale
            if gap > worst:
                worst, wit = gap, {"row": r, "n": n, "sigma": s, "projection": p, "tail": tl}
    return LemmaCheck("error-ordering", "max(sigma_n - proj, proj - tail) / max(1, tail) <= 0",
                      Side.exact(worst), Side.exact(0.0), _instance(norm, None, N, ns=list(ns), witness=wit),
                      family=f"{len(X)} samples")


# ---------------------------------------------------------------------------
# example batteries

def _ratio_check(cid: str, statement: str, threshold: float, num: float, den: float, inputs: dict) -> LemmaCheck:
    return LemmaCheck(cid, statement, Side.exact(threshold, "claimed threshold"),
                      Side.exact(num / den, "direct evaluation"), inputs, family="two direct evaluations")


def _indicator(N: int, idx, signs=None) -> np.ndarray:
    x = np.zeros(N)
    idx = np.asarray(list(idx)) - 1
    x[idx] = 1.0 if signs is None else signs
    return x


def _alternating(k: int) -> np.ndarray:
    return np.where(np.arange(k) % 2 == 0, 1.0, -1.0)


def oikhberg_battery(norm: OikhbergNorm, N: int = 40, budget: int = DEFAULT_BUDGET, seed: int = 0,
                     blocks: Sequence[int] = (1, 2)) -> list[LemmaCheck]:
    seq = norm.seq
    out = []
    ds = C.democracy_like_constant("Delta_s", norm, seq, N, budget, seed)
    out.append(LemmaCheck("oikhberg-superdemocracy", "Delta_s <= sqrt(2)", Side.of(ds), Side.exact(math.sqrt(2)),
                          _instance(norm, seq, N), family=ds.search_spec))
    for i in blocks:
        blk = norm.block(i)
        m, c = int(norm.m[i - 1]), float(norm.c[i - 1])
        D = blk.stop - 1 + m
        spread = range(blk.stop, blk.stop + m)
        inst = {"norm": norm.spec(), "block": i, "c_i": c, "m_i": m}
        v_blk, v_alt, v_spread = norm.eval_batch(np.vstack([
            _indicator(D, blk), _indicator(D, blk, _alternating(m)), _indicator(D, spread)]))
        out.append(LemmaCheck(f"oikhberg-block-norm-{i}", "| ||1_block|| - c_i sqrt(m_i) | <= 0",
                              Side.exact(abs(v_blk - c * math.sqrt(m)) / (c * math.sqrt(m))), Side.exact(0.0), inst))
        if norm.mode == "partial":
            out.append(_ratio_check(f"oikhberg-democracy-{i}", "c_i / sqrt(2) <= ||1_block|| / ||1_spread||",
                                    c / math.sqrt(2), v_blk, v_spread, inst))
            out.append(_ratio_check(f"oikhberg-ucc-{i}", "c_i <= ||1_block|| / ||1_{eps block}||",
                                    c, v_blk, v_alt, inst))
    if norm.mode == "absolute":
        ks = C.suppression_unconditionality_constant(norm, seq, N, SampleSpec(n_random=100, n_indicators=100))
        out.append(LemmaCheck("oikhberg-unconditional", "K_s <= 1", Side.of(ks), Side.exact(1.0),
                              _instance(norm, seq, N), family=ks.search_spec))
    else:
        cq, _ = C.quasi_greedy_constant(norm, seq, N, 1.0, SampleSpec(n_random=100, n_indicators=100))
        out.append(LemmaCheck("oikhberg-quasi-greedy", "C_q <= 2 (cited value, consistency only)", Side.of(cq),
                              Side.exact(2.0, "cited bound"), _instance(norm, seq, N), family=cq.search_spec))
    db = C.bidemocracy_constant(norm, seq, N, budget, seed)
    out.append(LemmaCheck("oikhberg-bidemocracy", "Delta_b <= sqrt(2)", Side.of(db), Side.exact(math.sqrt(2)),
                          _instance(norm, seq, N), family=db.search_spec))
    return out


def lacunary_battery(norm: LacunaryNorm, N: int = 64, budget: int = DEFAULT_BUDGET, seed: int = 0,
                     ts: Sequence[float] = (1.0, 0.5, 0.25), samples: SampleSpec | None = None,
                     window: int = 16, max_card: int = 7) -> list[LemmaCheck]:
    seq = norm.seq
    out = []
    spec = samples or SampleSpec(n_random=400, n_indicators=200, seed=seed)
    X = (sample_vectors(norm, N, spec), spec.describe())
    for t in ts:
        _, csp = C.partially_greedy_constants(norm, seq, N, t, samples=X)
        out.append(LemmaCheck(f"lacunary-strong-partially-t={t:g}", "C_sp,t <= max{1/t, 2}", Side.of(csp),
                              Side.exact(max(1 / t, 2.0)), _instance(norm, seq, N, t=t, samples=len(X[0])),
                              family=csp.search_spec))
    dosc = C.democracy_like_constant("Delta_osc", norm, seq, N, budget, seed, window, max_card)
    out.append(LemmaCheck("lacunary-superconservative", "Delta_osc <= 1", Side.of(dosc), Side.exact(1.0),
                          _instance(norm, seq, N, window=window, max_card=max_card), family=dosc.search_spec))
    for j, k in enumerate(norm.ks, start=1):
        n = seq.term(k)
        Dj = range(n + 1, (j + 1) * n + 1)
        Ej = range((j + 1) * n + 1, 2 * (j + 1) * n + 1)
        width = max(Ej.stop - 1, N)
        vd, ve = norm.eval_batch(np.vstack([_indicator(width, Dj), _indicator(width, Ej)]))
        inst = {"norm": norm.spec(), "j": j, "D": [Dj.start, Dj.stop - 1], "E": [Ej.start, Ej.stop - 1],
                "norm_D": vd, "norm_E": ve}
        out.append(_ratio_check(f"lacunary-conservative-{j}", "j <= ||1_D_j|| / ||1_E_j||", j, vd, ve, inst))
        out.append(LemmaCheck(f"lacunary-D-norm-{j}", "j n_{k_j} <= ||1_D_j||", Side.exact(j * n), Side.exact(vd), inst))
        out.append(LemmaCheck(f"lacunary-E-norm-{j}", "||1_E_j|| <= n_{k_j}", Side.exact(ve), Side.exact(n), inst))
        L = seq.term(k + 1)
        vb, va = norm.eval_batch(np.vstack([_indicator(L, range(1, L + 1)),
                                            _indicator(L, range(1, L + 1), _alternating(L))]))
        out.append(_ratio_check(f"lacunary-ucc-{j}", "j <= ||1_B|| / ||1_{eps B}||, B = {1..n_{k_j+1}}",
                                j, vb, va, {"norm": norm.spec(), "j": j, "B": [1, L]}))
    return out


def additive_battery(norm: AdditiveGapNorm, N: int | None = None, budget: int = DEFAULT_BUDGET,
                     seed: int = 0, max_card: int | None = None) -> list[LemmaCheck]:
    seq = norm.seq
    N = N or seq.term(norm.ks[-1]) + 300
    out = []
    doc = C.democracy_like_constant("Delta_oc", norm, seq, N, budget, seed, max_card=max_card)
    out.append(LemmaCheck("additive-order-conservative", "Delta_oc <= 1", Side.of(doc), Side.exact(1.0),
                          _instance(norm, seq, N), family=doc.search_spec))
    for j, k in enumerate(norm.ks, start=1):
        T, D = norm.T(j), norm.D(j)
        width = D.stop - 1
        vt, vd = norm.eval_batch(np.vstack([_indicator(width, T), _indicator(width, D)]))
        b = norm.base
        formula = b ** (j / norm.exponent(k + 1) - j / norm.exponent(k))
        inst = {"norm": norm.spec(), "j": j, "T": [T.start, T.stop - 1], "D": [D.start, D.stop - 1],
                "ratio": vt / vd, "formula": formula}
        out.append(LemmaCheck(f"additive-T-vs-D-{j}", "| ||1_T_j|| / ||1_D_j|| - formula | / formula <= 1e-6",
                              Side.exact(abs(vt / vd - formula) / formula), Side.exact(1e-6), inst))
    return out


def check_example_claims(preset: str, N: int | None = None, budget: int = DEFAULT_BUDGET,
                         seed: int = 0) -> VerdictReport:
    start = time.perf_counter()
    norm = make_preset(preset)
    if isinstance(norm, OikhbergNorm):
        checks = oikhberg_battery(norm, N or 40, budget, seed)
    elif isinstance(norm, LacunaryNorm):
        checks = lacunary_battery(norm, N or 64, budget, seed)
    elif isinstance(norm, AdditiveGapNorm):
        checks = additive_battery(norm, N, budget, seed)
    else:
        raise ValueError(f"no example battery for preset {preset!r}")
    return VerdictReport(checks, {"preset": preset, "N": N, "budget": budget, "seed": seed},
                         time.perf_counter() - start)


def baseline_ledger(norm: SpaceNorm, seq: GapSequence, N: int, budget: int = DEFAULT_BUDGET,
                    seed: int = 0, ts: Sequence[float] = (1.0, 0.5)) -> VerdictReport:
    """Every generic check on one instance."""
    start = time.perf_counter()
    checks = [check_ucc_bounded_gaps(norm, seq, N, budget, seed)]
    checks += check_ul_bounded_gaps(norm, seq, N, budget, seed)
    checks += check_slc_chain(norm, seq, N, budget, seed)
    checks += check_bidem_consequences(norm, seq, N, budget, seed)
    spec = SampleSpec(n_random=100, n_indicators=100, seed=seed)
    X = (sample_vectors(norm, N, spec), spec.describe())
    for t in ts:
        checks += check_partially_greedy_ledger(norm, seq, N, t, X, budget, seed)
        if norm.dual_exact:
            checks.append(check_duality_pairing(norm, N, t, n_pairs=20, seed=seed))
    return VerdictReport(checks, {"norm": norm.spec(), "seq": list(seq.prefix), "N": N, "budget": budget,
                                  "seed": seed}, time.perf_counter() - start)


# ---------------------------------------------------------------------------
def growth_table(preset: str, indices: Sequence[int] | None = None) -> list[dict]:
    """Witness ratios along i (Oikhberg blocks) or j (lacunary, additive gap)."""
    norm = make_preset(preset)
    rows = []
    if isinstance(norm, OikhbergNorm):
        for i in indices or (1, 2):
            blk = norm.block(i)
            m = int(norm.m[i - 1])
            D = blk.stop - 1 + m
            vb, va, vs = norm.eval_batch(np.vstack([_indicator(D, blk), _indicator(D, blk, _alternating(m)),
                                                    _indicator(D, range(blk.stop, blk.stop + m))]))
            k = norm.ks[i - 1]
            rows.append({"index": i, "gap_ratio": norm.seq.term(k + 1) / norm.seq.term(k), "c": float(norm.c[i - 1]),
                         "democracy_ratio": float(vb / vs), "ucc_ratio": float(vb / va)})
    elif isinstance(norm, LacunaryNorm):
        for j in indices or (1, 2):
            n = norm.seq.term(norm.ks[j - 1])
            L = norm.seq.term(norm.ks[j - 1] + 1)
            width = max(2 * (j + 1) * n, L)
            vd, ve, vb, va = norm.eval_batch(np.vstack([
                _indicator(width, range(n + 1, (j + 1) * n + 1)),
                _indicator(width, range((j + 1) * n + 1, 2 * (j + 1) * n + 1)),
                _indicator(width, range(1, L + 1)), _indicator(width, range(1, L + 1), _alternating(L))]))
            rows.append({"index": j, "DE_ratio": float(vd / ve), "ucc_ratio": float(vb / va)})
    elif isinstance(norm, AdditiveGapNorm):
        for j in indices or (1, 2):
            T, D = norm.T(j), norm.D(j)
            vt, vd = norm.eval_batch(np.vstack([_indicator(D.stop - 1, T), _indicator(D.stop - 1, D)]))
            k = norm.ks[j - 1]
            rows.append({"index": j, "TD_ratio": float(vt / vd),
                         "formula": norm.base ** (j / norm.exponent(k + 1) - j / norm.exponent(k))})
    else:
        for n in indices or (1, 2, 4, 8):
            vb, ve, va = norm.eval_batch(np.vstack([_indicator(2 * n, range(1, n + 1)),
                                                    _indicator(2 * n, range(n + 1, 2 * n + 1)),
                                                    _indicator(2 * n, range(1, n + 1), _alternating(n))]))
            rows.append({"index": n, "democracy_ratio": float(vb / ve), "ucc_ratio": float(vb / va)})
    return rows
