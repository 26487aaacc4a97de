"""Command-line front end.

    gapgreedy presets
    gapgreedy eval --preset l2 vector.json
    gapgreedy constants --preset lacunary-small --N 16 --t 1 --t 0.5 --format csv
    gapgreedy verify --preset lacunary-small --out results/
    gapgreedy growth --preset oikhberg-small

Exit codes: 0 ok, 1 a check failed, 2 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import constants as C
from . import verify as V
from .core import CoeffVector
from .estimate import ConstantEstimate
from .families import SampleSpec, sample_vectors
from .greedy import DEFAULT_BUDGET
from .norms import (AdditiveGapNorm, LacunaryNorm, MixedPQNorm, NormConfigError, OikhbergNorm,
                    PRESET_NOTES, SpaceNorm, norm_from_spec)
from .sequences import GapSequence, InsufficientPrefix

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

T_FREE_KINDS = ("Ku_ucc", "Ks_suppr", "UL_C1", "UL_C2", "Delta_d", "Delta_s", "Delta_c", "Delta_sc",
                "Delta_oc", "Delta_osc", "Cql", "Delta_slc", "Delta_b")
T_KINDS = ("Cq_t", "Csq_t", "Cp_t", "Csp_t")
CHECKS = ("ucc", "ul", "slc", "bidem", "partial", "pairing", "examples", "separation")
CSV_FIELDS = ("kind", "t", "seq", "value", "direction", "upper", "exhaustive", "evaluations", "search_spec")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    norm: dict | str
    sequence: dict | str | None = "norm"
    N: int = 16
    t: list = field(default_factory=lambda: [1.0])
    budget: int = DEFAULT_BUDGET
    seed: int = 0
    out: str | None = None
    checks: list | None = None
    kinds: list | None = None
    samples: dict = field(default_factory=dict)
    window: int | None = None
    max_card: int | None = None

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        if "norm" not in d:
            raise ConfigError("config needs a 'norm' entry (preset name or spec object)")
        cfg = cls(**d)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if not isinstance(self.N, int) or self.N < 2:
            raise ConfigError("N must be an integer >= 2")
        if not self.t or any(not (0 < float(v) <= 1) for v in self.t):
            raise ConfigError("every t must lie in (0, 1]")
        self.t = [float(v) for v in self.t]
        if self.budget < 1:
            raise ConfigError("budget must be positive")
        for name in self.checks or []:
            if name not in CHECKS:
                raise ConfigError(f"unknown check {name!r}; choose from {', '.join(CHECKS)}")
        for kind in self.kinds or []:
            if kind not in T_FREE_KINDS + T_KINDS:
                raise ConfigError(f"unknown constant kind {kind!r}")
        norm = self.build_norm()
        if norm.max_dim is not None and self.N > norm.max_dim:
            raise ConfigError(f"N={self.N} exceeds the range 1..{norm.max_dim} where {norm.name} is defined")

    def build_norm(self) -> SpaceNorm:
        try:
            return norm_from_spec(self.norm)
        except (NormConfigError, InsufficientPrefix) as exc:
            raise ConfigError(str(exc)) from exc

    def build_sequence(self, norm: SpaceNorm) -> GapSequence | None:
        s = self.sequence
        try:
            if s is None or s == "naturals":
                return None
            if s == "norm":
                if norm.seq is not None:
                    return norm.seq
                return _default_sequence(norm, self.N)
            if isinstance(s, str):
                return parse_sequence(s, self.N)
            return GapSequence.from_json(s)
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"bad sequence: {exc}") from exc

    def sample_spec(self) -> SampleSpec:
        try:
            return SampleSpec(seed=self.seed, **self.samples)
        except TypeError as exc:
            raise ConfigError(f"bad samples entry: {exc}") from exc


def _default_sequence(norm: SpaceNorm, N: int) -> GapSequence | None:
    if isinstance(norm, MixedPQNorm):
        start = math.floor(norm.m ** norm.q + norm.m) + 1
        return GapSequence((norm.m,) + tuple(range(start, max(start, N) + 1)))
    return None


def parse_sequence(text: str, N: int) -> GapSequence | None:
    """'naturals', 'geometric[:r]', 'arithmetic:d' or 'explicit:1,7,64'."""
    kind, _, arg = text.partition(":")
    count = max(2, N.bit_length() + 2)
    if kind == "naturals":
        return None
    if kind == "geometric":
        r = int(arg or 2)
        return GapSequence.geometric(max(2, math.ceil(math.log(N, r)) + 1), r=r, a=r)
    if kind == "arithmetic":
        d = int(arg or 1)
        return GapSequence.arithmetic(max(2, N // d + 1), d=d)
    if kind == "explicit":
        return GapSequence.explicit([int(v) for v in arg.split(",") if v])
    if kind in ("factorial", "doubly-exponential"):
        return GapSequence.from_rule({"kind": kind}, count)
    raise ValueError(f"unknown sequence {text!r}")


# ---------------------------------------------------------------------------
def load_config(args) -> ExperimentConfig:
    d: dict = {}
    if args.config:
        d = _read_json(Path(args.config))
    if getattr(args, "preset", None):
        d["norm"] = args.preset
    for key in ("N", "budget", "seed", "out", "window", "max_card"):
        v = getattr(args, key, None)
        if v is not None:
            d[key] = v
    if getattr(args, "t", None):
        d["t"] = args.t
    if getattr(args, "seq", None):
        d["sequence"] = args.seq
    if getattr(args, "checks", None):
        d["checks"] = args.checks
    if getattr(args, "kinds", None):
        d["kinds"] = args.kinds
    return ExperimentConfig.from_dict(d)


def _read_json(path: Path):
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def read_vector(path: str) -> np.ndarray:
    """A JSON list of numbers or a {"entries": {...}, "dim": N} object."""
    obj = json.loads(sys.stdin.read()) if path == "-" else _read_json(Path(path))
    if isinstance(obj, list):
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            raise ConfigError("vector list must contain only numbers")
        return np.asarray(obj, dtype=float)
    if isinstance(obj, dict):
        try:
            return CoeffVector.from_json(obj).to_array()
        except (KeyError, ValueError, TypeError) as exc:
            raise ConfigError(f"bad vector object: {exc}") from exc
    raise ConfigError("vector must be a JSON list or an object with 'entries' and 'dim'")


# ---------------------------------------------------------------------------
def compute_constants(cfg: ExperimentConfig) -> list[tuple[ConstantEstimate, float | None, str]]:
    """One (estimate, t, seq label) per requested kind and t."""
    norm = cfg.build_norm()
    seq = cfg.build_sequence(norm)
    label = "N" if seq is None else ",".join(str(v) for v in seq.up_to(cfg.N))
    kinds = cfg.kinds or list(T_FREE_KINDS + T_KINDS)
    N, b, s = cfg.N, cfg.budget, cfg.seed
    X = None
    if any(k in kinds for k in T_KINDS + ("Ks_suppr",)):
        spec = cfg.sample_spec()
        X = (sample_vectors(norm, N, spec), spec.describe())
    out = []
    done: dict = {}
    for kind in kinds:
        if kind in T_KINDS:
            continue
        if kind in done:
            est = done[kind]
        elif kind.startswith("Delta_") and kind not in ("Delta_slc", "Delta_b"):
            est = C.democracy_like_constant(kind, norm, seq, N, b, s, cfg.window, cfg.max_card)
        elif kind == "Ku_ucc":
            est = C.ucc_constant(norm, seq, N, b, s, cfg.max_card)
        elif kind == "Ks_suppr":
            est = C.suppression_unconditionality_constant(norm, seq, N, X, b, s)
        elif kind in ("UL_C1", "UL_C2"):
            c1, c2 = C.ul_constants(norm, seq, N, budget=b, seed=s, max_card=cfg.max_card)
            done.update(UL_C1=c1, UL_C2=c2)
            est = done[kind]
        elif kind == "Cql":
            est = C.qglc_constant(norm, seq, N, budget=b, seed=s)
        elif kind == "Delta_slc":
            est = C.slc_constant(norm, seq, N, budget=b, seed=s)
        else:
            est = C.bidemocracy_constant(norm, seq, N, b, s)
        out.append((est, None, label))
    for t in cfg.t:
        if "Cq_t" in kinds or "Csq_t" in kinds:
            q, sq = C.quasi_greedy_constant(norm, seq, N, t, X)
            out += [(e, t, label) for e in (q, sq) if e.kind in kinds]
        if "Cp_t" in kinds or "Csp_t" in kinds:
            p, sp = C.partially_greedy_constants(norm, seq, N, t, X)
            out += [(e, t, label) for e in (p, sp) if e.kind in kinds]
    return out


def constants_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for est, t, label in rows:
        w.writerow([est.kind, "" if t is None else f"{t:g}", label, repr(est.value), est.direction,
                    "" if est.upper is None else repr(est.upper), int(est.exhaustive), est.evaluations,
                    est.search_spec])
    return buf.getvalue()


def constants_json(rows) -> str:
    return json.dumps([{"t": t, "seq": label, **est.to_json()} for est, t, label in rows], indent=2)


def default_checks(norm: SpaceNorm) -> list[str]:
    if isinstance(norm, (OikhbergNorm, LacunaryNorm, AdditiveGapNorm)):
        return ["examples"]
    if isinstance(norm, MixedPQNorm):
        return ["separation"] if norm.m > 64 else ["ucc", "ul", "slc", "bidem", "partial"]
    return ["ucc", "ul", "slc", "bidem", "partial", "pairing"]


def run_checks(cfg: ExperimentConfig) -> V.VerdictReport:
    norm = cfg.build_norm()
    seq = cfg.build_sequence(norm)
    names = cfg.checks or default_checks(norm)
    N, b, s = cfg.N, cfg.budget, cfg.seed
    checks = []
    if seq is None and any(n in names for n in ("ucc", "ul", "slc")):
        raise ConfigError("bounded-gap checks need a sequence")
    X = sample_vectors(norm, N, cfg.sample_spec()) if "partial" in names else None
    for name in names:
        if name == "ucc":
            checks.append(V.check_ucc_bounded_gaps(norm, seq, N, b, s, cfg.max_card))
        elif name == "ul":
            checks += V.check_ul_bounded_gaps(norm, seq, N, b, s, cfg.max_card)
        elif name == "slc":
            checks += V.check_slc_chain(norm, seq, N, b, s)
        elif name == "bidem":
            checks += V.check_bidem_consequences(norm, seq, N, b, s)
        elif name == "partial":
            for t in cfg.t:
                checks += V.check_partially_greedy_ledger(norm, seq, N, t, X, b, s, cfg.window, cfg.max_card)
        elif name == "pairing":
            if not norm.dual_exact:
                raise ConfigError("the pairing check needs a norm with an exact dual")
            for t in cfg.t:
                checks.append(V.check_duality_pairing(norm, N, t, seed=s))
        elif name == "examples":
            if not isinstance(cfg.norm, str):
                raise ConfigError("example batteries run on preset names")
            checks += V.check_example_claims(cfg.norm, cfg.N, b, s).checks
        elif name == "separation":
            checks.append(V.check_mixedpq_separation(preset=norm))
    return V.VerdictReport(checks, {"norm": norm.spec(), "seq": None if seq is None else list(seq.prefix),
                                    "N": N, "t": cfg.t, "budget": b, "seed": s, "checks": names})


def growth_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    keys = list(rows[0]) if rows else ["index"]
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: repr(float(v)) if isinstance(v, float) else v for k, v in r.items()})
    return buf.getvalue()


def _emit(text: str, out: str | None, name: str) -> None:
    if out:
        d = Path(out)
        d.mkdir(parents=True, exist_ok=True)
        (d / name).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# ---------------------------------------------------------------------------
def cmd_presets(args) -> int:
    for name, note in PRESET_NOTES.items():
        print(f"{name:24s} {note}")
    return EXIT_OK


def cmd_eval(args) -> int:
    d = _read_json(Path(args.config)) if args.config else {}
    spec = args.preset or d.get("norm")
    if spec is None:
        raise ConfigError("eval needs --preset or a config with 'norm'")
    try:
        norm = norm_from_spec(spec)
    except (NormConfigError, InsufficientPrefix) as exc:
        raise ConfigError(str(exc)) from exc
    x = read_vector(args.vector)
    try:
        value = norm(x) if len(x) else 0.0
    except NormConfigError as exc:
        raise ConfigError(str(exc)) from exc
    print(np.format_float_positional(value, precision=12, unique=False, fractional=False, trim="k"))
    return EXIT_OK


def cmd_constants(args) -> int:
    cfg = load_config(args)
    rows = compute_constants(cfg)
    if args.format == "json":
        _emit(constants_json(rows), cfg.out, "constants.json")
    else:
        _emit(constants_csv(rows), cfg.out, "constants.csv")
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = load_config(args)
    report = run_checks(cfg)
    if args.format == "json" or cfg.out:
        _emit(json.dumps(report.to_json(), indent=2), cfg.out, "verify.json")
    if args.format != "json" or cfg.out:
        print(report.table())
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_growth(args) -> int:
    if not args.preset:
        raise ConfigError("growth needs --preset")
    try:
        rows = V.growth_table(args.preset, args.indices)
    except (NormConfigError, InsufficientPrefix) as exc:
        raise ConfigError(str(exc)) from exc
    if args.format == "json":
        _emit(json.dumps(rows, indent=2), args.out, "growth.json")
    else:
        _emit(growth_csv(rows), args.out, "growth.csv")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gapgreedy", description="Greedy-type constants for sequences with gaps.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, experiment=True):
        p.add_argument("--config", help="JSON experiment config")
        p.add_argument("--preset", help="preset norm name (see 'presets')")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help="output directory")
        if experiment:
            p.add_argument("--N", type=int, help="dimension of the truncation")
            p.add_argument("--t", type=float, action="append", help="weakness parameter (repeatable)")
            p.add_argument("--budget", type=int, help="primitive evaluations per family")
            p.add_argument("--seed", type=int)
            p.add_argument("--seq", help="'norm', 'naturals', 'geometric[:r]', 'arithmetic:d' or 'explicit:a,b,...'")
            p.add_argument("--window", type=int, help="limit order-type pairs to this many positions per side")
            p.add_argument("--max-card", dest="max_card", type=int)

    p = sub.add_parser("presets", help="list preset norms")
    p.add_argument("action", nargs="?", choices=("list",), default="list")
    p.set_defaults(func=cmd_presets)

    p = sub.add_parser("eval", help="evaluate a norm on a JSON vector")
    p.add_argument("vector", help="JSON file ('-' for stdin)")
    p.add_argument("--config")
    p.add_argument("--preset")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("constants", help="estimate constants")
    common(p)
    p.add_argument("--kinds", nargs="+", help="subset of constant kinds")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("verify", help="run inequality checks")
    common(p)
    p.add_argument("--checks", nargs="+", help=f"subset of {', '.join(CHECKS)}")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("growth", help="witness ratio growth table")
    common(p, experiment=False)
    p.add_argument("--indices", type=int, nargs="+")
    p.set_defaults(func=cmd_growth)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, NormConfigError, InsufficientPrefix) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
