"""The ConstantEstimate record shared by the norms, greedy and constants modules."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

KINDS = (
    "Cq_t", "Csq_t", "Cql", "Ku_ucc", "Ks_suppr", "UL_C1", "UL_C2",
    "Delta_d", "Delta_s", "Delta_slc", "Delta_b", "Delta_c", "Delta_sc",
    "Delta_oc", "Delta_osc", "Cp_t", "Csp_t", "phi", "phi_star",
    # auxiliary quantities that reuse the record
    "dual_norm", "sigma_n", "projection_error", "semi_greedy_error",
)
DIRECTIONS = ("lower", "upper", "exact")


@dataclass
class ConstantEstimate:
    """A measured value together with what the measurement proves.

    ``direction`` says whether ``value`` is a lower bound, an upper bound or the
    exact value of the quantity over the stated family. ``upper`` optionally
    brackets a lower estimate from above (a measured or structural bound).
    ``claimed_upper`` is an annotation only and never enters a verdict.
    """

    kind: str
    value: float
    direction: str
    witness: dict = field(default_factory=dict)
    search_spec: str = ""
    upper: float | None = None
    claimed_upper: float | None = None
    exhaustive: bool = False
    evaluations: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown constant kind {self.kind!r}")
        if self.direction not in DIRECTIONS:
            raise ValueError(f"unknown direction {self.direction!r}")
        self.value = float(self.value)
        if self.upper is not None:
            self.upper = float(self.upper)
            # a bracket that closes on the measured value is an exact result
            if self.direction == "lower" and abs(self.upper - self.value) <= 1e-9 * max(1.0, abs(self.value)):
                self.direction = "exact"

    @property
    def lower_bound(self) -> float | None:
        return self.value if self.direction in ("lower", "exact") else None

    @property
    def upper_bound(self) -> float | None:
        if self.direction in ("upper", "exact"):
            return self.value
        return self.upper

    def to_json(self) -> dict:
        d = asdict(self)
        d["value"] = _num(self.value)
        d["upper"] = _num(self.upper)
        d["claimed_upper"] = _num(self.claimed_upper)
        return d

    @classmethod
    def from_json(cls, d: dict) -> "ConstantEstimate":
        d = dict(d)
        for key in ("value", "upper", "claimed_upper"):
            if isinstance(d.get(key), str):
                d[key] = float(d[key])
        return cls(**d)


def _num(v):
    if v is None:
        return None
    if math.isinf(v) or math.isnan(v):
        return str(v)
    return v
