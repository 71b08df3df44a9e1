"""Exponent sequences: construction, validation and growth classification.

All properties are computed on the stored finite prefix.  Lacunarity,
quasi-geometric bounds and super-lacunary growth are asymptotic notions, so
the classification reports prefix statistics plus a trend label and never
claims anything about the underlying infinite sequence.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class ExponentSequence:
    """Strictly increasing finite prefix of nonnegative exponents."""

    exponents: tuple[float, ...]
    requested_count: int | None = None  # set when a generator truncated early

    def __post_init__(self) -> None:
        exps = tuple(float(v) for v in self.exponents)
        if len(exps) < 1:
            raise ValueError("sequence needs at least one exponent")
        if not all(math.isfinite(v) for v in exps):
            raise ValueError("exponents must be finite")
        if exps[0] < 0.0:
            raise ValueError(f"first exponent must be >= 0, got {exps[0]}")
        for a, b in zip(exps, exps[1:]):
            if not b > a:
                raise ValueError(f"exponents must be strictly increasing ({a} !< {b})")
        object.__setattr__(self, "exponents", exps)

    def __len__(self) -> int:
        return len(self.exponents)

    def __getitem__(self, i: int) -> float:
        return self.exponents[i]

    def __iter__(self):
        return iter(self.exponents)

    @property
    def gap(self) -> float:
        """Smallest consecutive difference on the prefix (inf for length 1)."""
        if len(self.exponents) < 2:
            return math.inf
        return min(b - a for a, b in zip(self.exponents, self.exponents[1:]))

    @property
    def truncated(self) -> bool:
        return self.requested_count is not None and self.requested_count > len(self.exponents)

    def prefix(self, n: int) -> "ExponentSequence":
        if not 1 <= n <= len(self.exponents):
            raise ValueError(f"prefix length {n} out of range 1..{len(self.exponents)}")
        return ExponentSequence(self.exponents[:n])


@dataclass(frozen=True)
class Classification:
    """Prefix ratio statistics of an exponent sequence."""

    r_inf: float
    r_sup: float
    is_lacunary: bool
    is_quasi_geometric: bool
    super_lacunary_trend: tuple[float, ...]  # last min(5, N-1) consecutive ratios
    ratios_from_index: int  # 1 when the leading exponent is 0, else 0
    trend_note: str

    def __post_init__(self) -> None:
        assert self.r_inf <= self.r_sup
        assert not self.is_quasi_geometric or self.is_lacunary


def generate_geometric(lambda0: float, ratio: float, count: int) -> ExponentSequence:
    """lambda0 * ratio**n for n = 0..count-1."""
    if not lambda0 > 0.0:
        raise ValueError(f"lambda0 must be positive, got {lambda0}")
    if not ratio > 1.0:
        raise ValueError(f"ratio must exceed 1, got {ratio}")
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")
    values = []
    v = float(lambda0)
    for _ in range(count):
        if not math.isfinite(v):
            break
        values.append(v)
        v *= ratio
    requested = count if len(values) < count else None
    return ExponentSequence(tuple(values), requested_count=requested)


def generate_recursive_power(
    lambda_start: float, start_index: int, exponent_power: float, count: int
) -> ExponentSequence:
    """lambda_{start_index} = lambda_start, then lambda_n = n**gamma * lambda_{n-1}.

    Values blow past float range quickly for large counts; the sequence is
    then truncated at the last representable value and flagged.
    """
    if not lambda_start > 0.0:
        raise ValueError(f"lambda_start must be positive, got {lambda_start}")
    if start_index < 2:
        raise ValueError(f"start_index must be >= 2, got {start_index}")
    if not exponent_power > 0.0:
        raise ValueError(f"exponent_power must be positive, got {exponent_power}")
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")
    values = [float(lambda_start)]
    for n in range(start_index + 1, start_index + count):
        nxt = values[-1] * float(n) ** exponent_power
        if nxt > 1e306:
            break  # headroom: downstream code forms p*lam and lam_n + lam_k
        values.append(nxt)
    requested = count if len(values) < count else None
    return ExponentSequence(tuple(values), requested_count=requested)


def _trend_note(trend: tuple[float, ...], lacunary: bool) -> str:
    if len(trend) < 2:
        return "too short for a trend"
    diffs = [b - a for a, b in zip(trend, trend[1:])]
    if all(d > 0 for d in diffs):
        return "super-lacunary trend (ratios increasing)"
    if all(d < 0 for d in diffs):
        if lacunary:
            return "prefix-lacunary, trend non-lacunary (ratios decreasing toward 1)"
        return "ratios decreasing"
    return "steady"


def classify(seq: ExponentSequence) -> Classification:
    """Exact prefix ratios; requires two usable (positive) entries."""
    if len(seq) < 2:
        raise ValueError("classification needs at least two exponents")
    start = 0
    if seq[0] == 0.0:
        start = 1
        if len(seq) < 3:
            raise ValueError("leading exponent 0: need two positive entries for ratios")
    ratios = tuple(seq[i + 1] / seq[i] for i in range(start, len(seq) - 1))
    r_inf = min(ratios)
    r_sup = max(ratios)
    lacunary = r_inf > 1.0
    trend = ratios[-min(5, len(ratios)):]
    return Classification(
        r_inf=r_inf,
        r_sup=r_sup,
        is_lacunary=lacunary,
        is_quasi_geometric=lacunary and math.isfinite(r_sup),
        super_lacunary_trend=trend,
        ratios_from_index=start,
        trend_note=_trend_note(trend, lacunary),
    )


def is_r_lacunary(values, r: float, rel_slack: float = 0.0) -> bool:
    """True when consecutive ratios are all >= r (optionally with slack)."""
    vals = list(values)
    if any(v <= 0 for v in vals):
        return False
    return all(b >= r * a * (1.0 - rel_slack) for a, b in zip(vals, vals[1:]))


def decompose_quasi_lacunary(seq: ExponentSequence, r: float) -> list[ExponentSequence]:
    """Greedy first-fit partition into r-lacunary subsequences.

    Each exponent goes to the first part whose last element e satisfies
    lambda >= r*e.  The union of the parts is the input; the number of
    parts is the greedy count, not a certified minimum.
    """
    if not r > 1.0:
        raise ValueError(f"lacunarity ratio must exceed 1, got {r}")
    parts: list[list[float]] = []
    for lam in seq:
        for part in parts:
            if lam >= r * part[-1] and (part[-1] > 0 or lam > 0):
                part.append(lam)
                break
        else:
            parts.append([lam])
    return [ExponentSequence(tuple(p)) for p in parts]
