"""Closed-form constants and analytic brackets for weighted monomial systems.

The closed forms are ordinary float arithmetic (all magnitudes moderate);
only the series that involve t**lam go through the log domain.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .logdomain import log_sum
from .sequences import ExponentSequence, is_r_lacunary


def conjugate(p: float) -> float:
    """Holder conjugate; inf at p = 1."""
    if p < 1.0:
        raise ValueError(f"p must be >= 1, got {p}")
    if p == 1.0:
        return math.inf
    return p / (p - 1.0)


class Lemma31Bound(NamedTuple):
    lhs: float
    rhs: float


def lemma31_bound(p: float, alpha: float, q_seq, r: float) -> Lemma31Bound:
    """Cross-term sum versus its geometric closed-form majorant.

    lhs = max over n of sum_{k != n} (q_n^{1/p} q_k^{1/p'} / (q_n/p + q_k/p'))^alpha,
    rhs = p'^alpha/(r^{alpha/p} - 1) + p^alpha/(r^{alpha/p'} - 1).
    The q sequence must be r-lacunary.
    """
    if not p > 1.0:
        raise ValueError(f"p must exceed 1, got {p}")
    if not alpha > 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if not r > 1.0:
        raise ValueError(f"r must exceed 1, got {r}")
    q = [float(v) for v in q_seq]
    if not is_r_lacunary(q, r, rel_slack=1e-12):
        raise ValueError("q sequence is not r-lacunary for the given r")
    pp = conjugate(p)
    lhs = 0.0
    for n, qn in enumerate(q):
        s = 0.0
        for k, qk in enumerate(q):
            if k == n:
                continue
            num = qn ** (1.0 / p) * qk ** (1.0 / pp)
            s += (num / (qn / p + qk / pp)) ** alpha
        lhs = max(lhs, s)
    rhs = pp ** alpha / (r ** (alpha / p) - 1.0) + p ** alpha / (r ** (alpha / pp) - 1.0)
    return Lemma31Bound(lhs, rhs)


@dataclass(frozen=True)
class NormBoundReport:
    """Upper bound for the synthesis-operator norm from the lacunarity ratio.

    ``r`` is the lacunarity ratio of (p*lam_n + 1), not of lam_n itself;
    callers compute it by classifying the shifted sequence.
    """

    p: float
    r: float
    upper_bound: float
    formula_id: str  # "prop32" (p >= 2) | "prop33" (p <= 2)

    def __post_init__(self) -> None:
        assert self.upper_bound >= 1.0


def jlambda_upper(p: float, r: float) -> NormBoundReport:
    if not r > 1.0:
        raise ValueError(f"r must exceed 1, got {r}")
    if p < 1.0:
        raise ValueError(f"p must be >= 1, got {p}")
    if p >= 2.0:
        inner = 1.0 + 2.0 * p ** (1.0 / (p - 1.0)) / (r ** (1.0 / (p * (p - 1.0))) - 1.0)
        formula = "prop32"
    else:
        inner = 1.0 + 4.0 / (math.sqrt(r) - 1.0)
        formula = "prop33"
    exponent = 0.0 if p == 1.0 else 1.0 / conjugate(p)
    return NormBoundReport(p=p, r=r, upper_bound=inner ** exponent, formula_id=formula)


def r_epsilon(p: float, eps: float) -> float:
    """Lacunarity threshold that forces the frame bracket [1-eps, 1+eps].

    Symmetric in p <-> p' through q = max(p, p').
    """
    if not p > 1.0:
        raise ValueError(f"p must exceed 1, got {p}")
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must be in (0,1), got {eps}")
    q = max(p, conjugate(p))
    return (1.0 + 4.0 * q ** (1.0 / (q - 1.0)) / eps) ** (q * (q - 1.0))


class EnvelopeBracket(NamedTuple):
    ratio_min: float
    ratio_max: float
    profile: tuple[tuple[float, float], ...]  # (t, ratio) pairs


def envelope_check(seq: ExponentSequence, alpha: float,
                   j_range: tuple[int, int] = (1, 40)) -> EnvelopeBracket:
    """Bracket of (sum_n lam_n^alpha t^lam_n) * (1-t)^alpha on t = 1 - 2^-j.

    For quasi-geometric prefixes both edges of the bracket should stay away
    from 0 and infinity; for merely lacunary ones only the upper edge is
    meaningful.  The series is summed in the log domain over the whole
    stored prefix, so the prefix must reach past lam ~ 2^j_max.
    """
    if not alpha > 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    j_lo, j_hi = j_range
    if not 1 <= j_lo <= j_hi:
        raise ValueError(f"bad j range {j_range}")
    profile = []
    for j in range(j_lo, j_hi + 1):
        eps = 2.0 ** (-j)
        log_t = math.log1p(-eps)
        term_logs = [alpha * math.log(l) + l * log_t for l in seq if l > 0.0]
        ratio = math.exp(log_sum(term_logs) + alpha * math.log(eps))
        profile.append((1.0 - eps, ratio))
    ratios = [r for _, r in profile]
    return EnvelopeBracket(min(ratios), max(ratios), tuple(profile))


def point_eval_norm(seq: ExponentSequence, p: float, t: float,
                    n_count: int | None = None) -> float:
    """Dual-norm surrogate for evaluation at t: (sum lam^{p'/p} t^{p' lam})^{1/p'}.

    At p = 1 the p' -> inf limit is the sup of lam * t^lam.  This is the
    basis-side surrogate; the hilbert module has the exact truncated kernel
    for p = 2 cross-checks.
    """
    if not 0.0 <= t < 1.0:
        raise ValueError(f"t must be in [0,1), got {t}")
    if p < 1.0:
        raise ValueError(f"p must be >= 1, got {p}")
    n_count = len(seq) if n_count is None else n_count
    if not 1 <= n_count <= len(seq):
        raise ValueError(f"n_count {n_count} out of range")
    log_t = math.log1p(t - 1.0) if t > 0.0 else -math.inf
    lams = [l for l in seq.exponents[:n_count] if l > 0.0]  # lam = 0 contributes 0
    if t == 0.0 or not lams:
        return 0.0
    if p == 1.0:
        return math.exp(max(math.log(l) + l * log_t for l in lams))
    pp = conjugate(p)
    term_logs = [(pp / p) * math.log(l) + pp * l * log_t for l in lams]
    return math.exp(log_sum(term_logs) / pp)


class NuclearTailCheck(NamedTuple):
    partial_sum: float
    last_term: float
    converged: bool  # trailing terms decay geometrically


def nuclear_tail_sum(seq: ExponentSequence, delta: float, eps: float) -> NuclearTailCheck:
    """Finiteness probe for sum_k ((1+eps)*delta)^lam_k on the prefix.

    Meaningful for measures supported in [0, delta]; requires
    (1+eps)*delta < 1 so the summand decays.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must be in (0,1), got {delta}")
    if not eps > 0.0 or (1.0 + eps) * delta >= 1.0:
        raise ValueError("need eps > 0 with (1+eps)*delta < 1")
    base = math.log((1.0 + eps) * delta)
    term_logs = [l * base for l in seq]
    partial = math.exp(log_sum(term_logs))
    last = math.exp(term_logs[-1])
    converged = len(term_logs) < 2 or term_logs[-1] - term_logs[-2] < math.log(0.5)
    return NuclearTailCheck(partial, last, converged)
