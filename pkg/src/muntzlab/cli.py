"""Command-line front end: computations, named verification suites, reports.

Check statuses make the finite/infinite divide explicit: exact inequalities
with explicit constants are PASS/FAIL; trend or constant-free equivalence
checks are EVIDENCE (finite data can exhibit them, never prove them).
Exit code 0 means no FAIL, 1 means some FAIL, 2 means usage error.  Output
is deterministic for fixed inputs and seed up to the ``generated_unix``
timestamp field.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import asdict
from pathlib import Path

from . import bounds as bounds_mod
from . import dnp as dnp_mod
from . import examples as examples_mod
from . import hilbert
from . import lpnorm
from . import measures as measures_mod
from . import sequences as sequences_mod

SCHEMA = "muntzlab-report/1"

SUITE_IDS = (
    "basis",              # frame bracket + coefficient-norm equivalence sampling
    "isometry-threshold", # near-isometry above the explicit lacunarity threshold
    "pairing-dichotomy",  # adjacent-monomial pairing: decay vs bounded below
    "envelope",           # weighted series vs (1-t)^-alpha bracket
    "crossterm-bound",    # cross-term sum vs closed-form majorant
    "diagonal-domination",# singular values vs rearranged D profile (p=2)
    "blocksum-probe",     # block-indicator lower-bound growth trend
    "carleson",           # monomial test, sublinear norm, embedding norms
    "compact",            # decay of the monomial test and restriction spectra
    "hs",                 # Hilbert-Schmidt: spectra vs integral criteria
    "ex-a", "ex-b",       # the two extremal constructions
)


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# input parsing
# ---------------------------------------------------------------------------

def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from exc


def sequence_from_obj(obj) -> sequences_mod.ExponentSequence:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise UsageError("sequence description must be an object with a 'kind'")
    kind = obj["kind"]
    try:
        if kind == "geometric":
            return sequences_mod.generate_geometric(obj["lambda0"], obj["ratio"], obj["count"])
        if kind == "recursive_power":
            return sequences_mod.generate_recursive_power(
                obj["lambda_start"], obj["start_index"], obj["gamma"], obj["count"])
        if kind == "explicit":
            return sequences_mod.ExponentSequence(tuple(obj["values"]))
    except KeyError as exc:
        raise UsageError(f"sequence description missing field {exc}") from exc
    raise UsageError(f"unknown sequence kind {kind!r}")


def parse_sequence(spec: str) -> sequences_mod.ExponentSequence:
    """geometric:l0,r,count | recursive:start,start_index,gamma,count |
    explicit:v1,v2,... | file:path.json"""
    if spec.startswith("file:"):
        return sequence_from_obj(_load_json(spec[5:]))
    head, _, rest = spec.partition(":")
    if head == "geometric":
        v = _floats(rest)
        if len(v) != 3:
            raise UsageError("geometric needs lambda0,ratio,count")
        return sequences_mod.generate_geometric(v[0], v[1], int(v[2]))
    if head == "recursive":
        v = _floats(rest)
        if len(v) != 4:
            raise UsageError("recursive needs lambda_start,start_index,gamma,count")
        return sequences_mod.generate_recursive_power(v[0], int(v[1]), v[2], int(v[3]))
    if head == "explicit":
        return sequences_mod.ExponentSequence(tuple(_floats(rest)))
    raise UsageError(f"unknown sequence spec {spec!r}")


def measure_from_obj(obj) -> measures_mod.Measure:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise UsageError("measure description must be an object with a 'kind'")
    kind = obj["kind"]
    if kind == "lebesgue":
        return measures_mod.Lebesgue()
    if kind == "atoms":
        pairs = []
        for entry in obj.get("atoms", []):
            if isinstance(entry, dict):
                if "log_delta" in entry:
                    delta = math.exp(entry["log_delta"])
                else:
                    delta = float(entry["delta"])
                pairs.append((delta, float(entry["mass"])))
            else:
                pairs.append((float(entry[0]), float(entry[1])))
        if not pairs:
            raise UsageError("atoms measure needs a nonempty atom list")
        return measures_mod.atoms(pairs)
    if kind == "density":
        params = obj.get("params", {})
        return measures_mod.DensityMeasure(obj["name"], **params)
    if kind == "restrict":
        base = measure_from_obj(obj["base"])
        return measures_mod.restrict(base, obj["a"], obj["b"])
    raise UsageError(f"unknown measure kind {kind!r}")


def parse_measure(spec: str) -> measures_mod.Measure:
    """lebesgue | atoms:delta:mass,delta:mass,... | file:path.json"""
    if spec == "lebesgue":
        return measures_mod.Lebesgue()
    if spec.startswith("file:"):
        return measure_from_obj(_load_json(spec[5:]))
    if spec.startswith("atoms:"):
        pairs = []
        for chunk in spec[6:].split(","):
            parts = chunk.split(":")
            if len(parts) != 2:
                raise UsageError(f"bad atom chunk {chunk!r}, want delta:mass")
            pairs.append((float(parts[0]), float(parts[1])))
        return measures_mod.atoms(pairs)
    raise UsageError(f"unknown measure spec {spec!r}")


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read description file {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# output plumbing
# ---------------------------------------------------------------------------

def _sanitize(obj):
    """Make a payload strictly JSON-serializable (finite floats, str keys)."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else repr(obj)
    if isinstance(obj, dict):
        return {str(k): _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set)):
        return [_sanitize(v) for v in obj]
    if hasattr(obj, "__dataclass_fields__"):
        return _sanitize(asdict(obj))
    return obj


def _emit(payload: dict, args, default_name: str) -> None:
    payload = {"schema": SCHEMA, "generated_unix": time.time(), **payload}
    text = json.dumps(_sanitize(payload), sort_keys=True, indent=2, allow_nan=False)
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / f"{default_name}.json").write_text(text + "\n")
    print(text)


def _emit_csv(rows: list[dict], args, default_name: str) -> None:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
    writer.writeheader()
    writer.writerows(rows)
    text = buf.getvalue()
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / f"{default_name}.csv").write_text(text)
    print(text, end="")


def check(name: str, op: str, status: str, **data) -> dict:
    cleaned = {}
    for key, value in data.items():
        if isinstance(value, float) and not math.isfinite(value):
            value = repr(value)
        cleaned[key] = value
    return {"name": name, "op": op, "status": status, "data": cleaned}


def _exit_code(checks: list[dict]) -> int:
    return 1 if any(c["status"] == "FAIL" for c in checks) else 0


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------

def suite_basis(seq, mu, p, n, seed, tol) -> list[dict]:
    checks = []
    sample = lpnorm.gm_ratio_sample(seq, p, mu=None, trials=100, seed=seed,
                                    n_count=min(n, len(seq)))
    checks.append(check("ratio-sample-bracket", "lpnorm.gm_ratio_sample", "EVIDENCE",
                        min_ratio=sample.min_ratio, max_ratio=sample.max_ratio,
                        trials=sample.trials))
    single = lpnorm.gm_ratio_sample(seq, p, trials=0, seed=seed, n_count=min(n, len(seq)))
    ok = abs(single.min_ratio - 1.0) <= 1e-9 and abs(single.max_ratio - 1.0) <= 1e-9
    checks.append(check("canonical-vectors-normalized", "lpnorm.gm_ratio_sample",
                        "PASS" if ok else "FAIL",
                        min_ratio=single.min_ratio, max_ratio=single.max_ratio))
    profile = dnp_mod.compute_dn(seq, measures_mod.Lebesgue(),
                                 dnp_mod.WeightScheme("inverse_lambda", p),
                                 n_count=min(n, len(seq)), tol=tol)
    ob = dnp_mod.operator_bounds(profile, measures_mod.Lebesgue(), seq)
    checks.append(check("lebesgue-diagonal-bounded", "dnp.compute_dn", "EVIDENCE",
                        sup=ob.sup_dn, trailing_max=ob.limsup_estimate,
                        tails_safe=profile.all_safe))
    if p == 2.0:
        fb = hilbert.frame_bounds(seq, min(n, len(seq)))
        checks.append(check("frame-bracket", "hilbert.frame_bounds", "EVIDENCE",
                            sigma_min=fb.sigma_min, sigma_max=fb.sigma_max))
    return checks


def suite_isometry(seq, mu, p, n, eps) -> list[dict]:
    checks = []
    r_eps = bounds_mod.r_epsilon(p, eps)
    q_seq = [p * l + 1.0 for l in seq]
    ratios = [b / a for a, b in zip(q_seq, q_seq[1:])]
    hyp = min(ratios) >= r_eps
    checks.append(check("shifted-ratio-meets-threshold", "bounds.r_epsilon",
                        "PASS" if hyp else "FAIL",
                        r_epsilon=r_eps, min_shifted_ratio=min(ratios)))
    if p == 2.0:
        fb = hilbert.frame_bounds(seq, min(n, len(seq)))
        ok = (1.0 - eps) <= fb.sigma_min and fb.sigma_max <= (1.0 + eps)
        checks.append(check("frame-within-eps", "hilbert.frame_bounds",
                            ("PASS" if ok else "FAIL") if hyp else "EVIDENCE",
                            sigma_min=fb.sigma_min, sigma_max=fb.sigma_max, eps=eps))
    else:
        sample = lpnorm.gm_ratio_sample(seq, p, trials=200, seed=0,
                                        n_count=min(n, len(seq)))
        ok = (1.0 - eps) <= sample.min_ratio and sample.max_ratio <= (1.0 + eps)
        checks.append(check("sampled-ratios-within-eps", "lpnorm.gm_ratio_sample",
                            "EVIDENCE" if ok else "FAIL",
                            min_ratio=sample.min_ratio, max_ratio=sample.max_ratio, eps=eps))
    return checks


def suite_pairing(seq, p) -> list[dict]:
    checks = []
    pairs = [lpnorm.pairing_integral(seq, p, k) for k in range(len(seq) - 1)]
    above = all(v >= b - 1e-12 for v, b in pairs)
    checks.append(check("pairing-above-lower-bound", "lpnorm.pairing_integral",
                        "PASS" if above else "FAIL",
                        values=[v for v, _ in pairs], bounds=[b for _, b in pairs]))
    vals = [v for v, _ in pairs]
    trend = "decay" if vals[-1] < 0.05 else ("bounded" if min(vals) > 0.1 else "mixed")
    checks.append(check("pairing-trend", "lpnorm.pairing_integral", "EVIDENCE",
                        trend=trend, first=vals[0], last=vals[-1]))
    return checks


def suite_envelope(seq, alphas) -> list[dict]:
    checks = []
    for alpha in alphas:
        br = bounds_mod.envelope_check(seq, alpha)
        ok = br.ratio_min > 0.0 and math.isfinite(br.ratio_max)
        checks.append(check(f"envelope-positive-finite-alpha={alpha:g}",
                            "bounds.envelope_check", "PASS" if ok else "FAIL",
                            ratio_min=br.ratio_min, ratio_max=br.ratio_max))
        checks.append(check(f"envelope-bracket-alpha={alpha:g}",
                            "bounds.envelope_check", "EVIDENCE",
                            ratio_min=br.ratio_min, ratio_max=br.ratio_max,
                            width=br.ratio_max / br.ratio_min))
    return checks


def suite_crossterm(p_values, alphas_mode, r_values, count) -> list[dict]:
    checks = []
    for p in p_values:
        alphas = [1.0 / (p - 1.0), 1.0] if alphas_mode == "auto" else alphas_mode
        for alpha in alphas:
            for r in r_values:
                q = [r ** k for k in range(count)]
                res = bounds_mod.lemma31_bound(p, alpha, q, r)
                checks.append(check(
                    f"crossterm-p={p:g}-alpha={alpha:g}-r={r:g}",
                    "bounds.lemma31_bound",
                    "PASS" if res.lhs <= res.rhs else "FAIL",
                    lhs=res.lhs, rhs=res.rhs))
    return checks


def suite_diagonal(seq, mu, n, seed, tol) -> list[dict]:
    checks = []
    spec = hilbert.t_mu_spectrum(seq, mu, min(n, len(seq)))
    checks.append(check("singular-values-below-rearranged-profile",
                        "hilbert.t_mu_spectrum",
                        "PASS" if spec.extras["chain_ok"] else "FAIL",
                        margin=spec.extras["chain_margin"],
                        tails_safe=spec.extras["chain_tail_safe"]))
    hs = spec.schatten[2.0]
    trace = spec.extras["trace"]
    ok = abs(hs ** 2 - trace) <= 1e-10 * max(trace, 1e-300)
    checks.append(check("hilbert-schmidt-equals-trace", "hilbert.t_mu_spectrum",
                        "PASS" if ok else "FAIL", hs_squared=hs ** 2, trace=trace))
    profile = dnp_mod.compute_dn(seq, mu, dnp_mod.WeightScheme("inverse_lambda", 2.0),
                                 n_count=min(n, len(seq)), tol=tol)
    ob = dnp_mod.operator_bounds(profile, mu, seq)
    for r in (1.0, 2.0, 4.0):
        ok = spec.schatten[r] <= ob.schatten[r] + 1e-9
        checks.append(check(f"schatten-bound-r={r:g}", "dnp.operator_bounds",
                            "PASS" if ok else "FAIL",
                            spectrum=spec.schatten[r], bound=ob.schatten[r]))
    import numpy as np
    rng = np.random.default_rng(seed)
    worst = -math.inf
    for _ in range(100):
        b = rng.uniform(-1.0, 1.0, len(profile.values))
        fpoly = lpnorm.MuntzPolynomial(seq, tuple(b))
        lhs = lpnorm.lp_norm(fpoly, mu, 2.0)
        rhs = math.sqrt(sum(
            abs(bv) ** 2 * math.exp(-profile.weight.log_inv_weight(seq[i])) * dv ** 2
            for i, (bv, dv) in enumerate(zip(b, profile.values))))
        worst = max(worst, lhs - rhs)
    checks.append(check("random-vector-domination", "dnp.compute_dn",
                        "PASS" if worst <= 1e-9 else "FAIL", worst_excess=worst))
    return checks


def suite_blocksum(seq, p) -> list[dict]:
    checks = []
    ratios = []
    lengths = []
    max_len = len(seq)
    length = 1
    while length <= max_len:
        probe = lpnorm.amgm_probe(seq, p, 0, length)
        ratios.append(probe.ratio)
        lengths.append(length)
        length *= 2
    growing = all(b >= a * 0.99 for a, b in zip(ratios, ratios[1:])) and ratios[-1] > ratios[0] * 2
    checks.append(check("block-lower-bound-growth", "lpnorm.amgm_probe", "EVIDENCE",
                        lengths=lengths, ratios=ratios,
                        trend="growing" if growing else "bounded"))
    return checks


def suite_carleson(seq, mu, p, q_list, n, tol) -> list[dict]:
    checks = []
    cls = sequences_mod.classify(seq)
    m_vals = [l * measures_mod.moment(mu, p * l).to_float() for l in seq]
    sup_m = max(m_vals)
    checks.append(check("monomial-test-constant", "measures.moment", "EVIDENCE",
                        sup=sup_m, last=m_vals[-1]))
    sub = measures_mod.sublinear_norm(mu)
    checks.append(check("sublinear-norm", "measures.sublinear_norm", "EVIDENCE",
                        norm_s=sub.norm_s, attained_at=sub.attaining_epsilon,
                        exact=sub.exact))
    if cls.is_quasi_geometric:
        bound = 3.0 * p * cls.r_sup * sup_m
        ok = sub.norm_s <= bound + 1e-12
        checks.append(check("sublinear-vs-monomial-test", "measures.sublinear_norm",
                            "PASS" if ok else "FAIL",
                            norm_s=sub.norm_s, bound=bound, big_r=cls.r_sup))
    for q in q_list:
        if q <= p:
            continue
        profile = dnp_mod.compute_dn(seq, mu, dnp_mod.WeightScheme("inverse_lambda", q),
                                     n_count=len(seq), tol=tol)
        checks.append(check(f"diagonal-profile-finite-q={q:g}", "dnp.compute_dn",
                            "EVIDENCE", sup=max(profile.values),
                            tails_safe=profile.all_safe))
    if p == 2.0 or 2.0 in q_list:
        spec = hilbert.t_mu_spectrum(seq, mu, min(n, len(seq)))
        profile2 = dnp_mod.compute_dn(seq, mu, dnp_mod.WeightScheme("inverse_lambda", 2.0),
                                      n_count=min(n, len(seq)), tol=tol)
        ok = spec.sigma_max <= max(profile2.values) + 1e-9
        checks.append(check("synthesis-norm-below-sup-profile", "hilbert.t_mu_spectrum",
                            "PASS" if ok else "FAIL",
                            sigma_max=spec.sigma_max, sup_profile=max(profile2.values)))
        emb = hilbert.embedding_spectrum(seq, mu, min(n, len(seq)))
        checks.append(check("embedding-norm", "hilbert.embedding_spectrum", "EVIDENCE",
                            sigma_max=emb.sigma_max,
                            ratio_to_sup_profile=emb.sigma_max / max(profile2.values)))
    return checks


def suite_compact(seq, mu, n, tol) -> list[dict]:
    checks = []
    profile = dnp_mod.compute_dn(seq, mu, dnp_mod.WeightScheme("inverse_lambda", 1.0),
                                 n_count=len(seq), tol=tol)
    vals = profile.values
    half = vals[len(vals) // 2:]
    decaying = all(b <= a * 1.001 for a, b in zip(half, half[1:])) and half[-1] < half[0]
    checks.append(check("monomial-test-decay", "dnp.compute_dn", "EVIDENCE",
                        trend="decaying" if decaying else "flat",
                        first=half[0], last=half[-1]))
    sub = measures_mod.sublinear_norm(mu)
    prof = sub.vanishing_profile
    tail_ratio = prof[-1][1]
    head_ratio = max(r for _, r in prof)
    checks.append(check("vanishing-profile", "measures.sublinear_norm", "EVIDENCE",
                        smallest_eps_ratio=tail_ratio, max_ratio=head_ratio))
    cuts = [1.0 - 2.0 ** (-j) for j in range(1, 11)]
    trend = hilbert.essential_norm_estimate(seq, mu, min(n, len(seq)), cuts)
    checks.append(check("restriction-spectrum-trend", "hilbert.essential_norm_estimate",
                        "EVIDENCE", sigma1=trend.sigma1, drop_factor=trend.drop_factor,
                        limit_proxy=trend.limit_proxy))
    pois = measures_mod.poisson_integral(mu)
    checks.append(check("order-boundedness-integral", "measures.poisson_integral",
                        "EVIDENCE", divergent=pois.divergent,
                        value=None if pois.divergent else pois.value.to_float()))
    return checks


def suite_hs(seq, mu, n, q_list) -> list[dict]:
    checks = []
    report = hilbert.hs_criteria(seq, mu, min(n, len(seq)),
                                 q_values=tuple(q_list) or (2.0,))
    if not report.poisson_divergent and 2.0 in report.kernel_values:
        kernel_sq = report.kernel_values[2.0] ** 2
        if math.isfinite(kernel_sq) and math.isfinite(report.poisson_value):
            ok = abs(kernel_sq - report.poisson_value) <= 1e-6
            checks.append(check("kernel-double-integral-matches-poisson",
                                "hilbert.prop511_value", "PASS" if ok else "FAIL",
                                kernel_sq=kernel_sq, poisson=report.poisson_value))
        else:
            checks.append(check("kernel-double-integral-matches-poisson",
                                "hilbert.prop511_value", "EVIDENCE",
                                kernel_sq=kernel_sq, poisson=report.poisson_value,
                                note="value beyond float range at this scale"))
    profile = dnp_mod.compute_dn(seq, mu, dnp_mod.WeightScheme("inverse_lambda", 2.0),
                                 n_count=len(seq))
    bound_sq = math.fsum(v ** 2 for v in profile.values)
    ok = report.hs_synthesis ** 2 <= bound_sq + 1e-9
    checks.append(check("synthesis-hs-below-profile-l2", "hilbert.hs_criteria",
                        "PASS" if ok else "FAIL",
                        hs_squared=report.hs_synthesis ** 2, bound=bound_sq))
    checks.append(check("hs-three-way", "hilbert.hs_criteria", "EVIDENCE",
                        hs_embedding=report.hs_embedding,
                        hs_synthesis=report.hs_synthesis,
                        poisson_divergent=report.poisson_divergent,
                        poisson=report.poisson_value,
                        kernel={f"{q:g}": v for q, v in report.kernel_values.items()},
                        ratios=report.ratios,
                        note=report.expected_divergent_note))
    return checks


def suite_example(label, p, count, q_list) -> list[dict]:
    inst = examples_mod.build_example(label, p, count)
    report = examples_mod.check_example_claims(inst, q_list)
    return [check(c.name, "examples.check_example_claims", c.status, **c.data)
            for c in report.checks]


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_classify(args) -> int:
    seq = parse_sequence(args.seq)
    cls = sequences_mod.classify(seq)
    payload = {"command": "classify", "inputs": {"seq": args.seq},
               "classification": asdict(cls), "gap": seq.gap, "length": len(seq)}
    if args.decompose is not None:
        parts = sequences_mod.decompose_quasi_lacunary(seq, args.decompose)
        payload["decomposition"] = {"r": args.decompose,
                                    "parts": [list(p.exponents) for p in parts]}
    _emit(payload, args, "classify")
    return 0


def _cmd_moments(args) -> int:
    seq = parse_sequence(args.seq)
    mu = parse_measure(args.measure)
    rows = []
    for i, lam in enumerate(seq):
        m = measures_mod.moment(mu, args.p * lam)
        rows.append({"n": i, "lambda_n": lam,
                     "moment_p_lambda": m.to_float(),
                     "log_moment": None if m.is_zero else m.log,
                     "monomial_test": lam * m.to_float()})
    if args.format == "csv":
        _emit_csv(rows, args, "moments")
    else:
        _emit({"command": "moments", "inputs": {"seq": args.seq, "measure": args.measure,
                                                "p": args.p}, "rows": rows}, args, "moments")
    return 0


def _cmd_dnp(args) -> int:
    seq = parse_sequence(args.seq)
    mu = parse_measure(args.measure)
    weight = dnp_mod.WeightScheme(args.weight, args.p)
    n_count = min(args.N, len(seq)) if args.N else len(seq)
    profile = dnp_mod.compute_dn(seq, mu, weight, n_count=n_count, tol=args.tol)
    ob = dnp_mod.operator_bounds(profile, mu, seq)
    rows = [{"n": i, "lambda_n": seq[i], "D_n": profile.values[i],
             "cutoff_K": profile.truncation[i].cutoff,
             "tail_flag": "ok" if profile.truncation[i].safe else "unsafe"}
            for i in range(n_count)]
    if args.format == "csv":
        _emit_csv(rows, args, "dnp")
        return 0
    payload = {"command": "dnp",
               "inputs": {"seq": args.seq, "measure": args.measure, "p": args.p,
                          "weight": args.weight, "n": n_count, "tol": args.tol},
               "rows": rows,
               "bounds": {"sup": ob.sup_dn, "trailing_max": ob.limsup_estimate,
                          "window": ob.window, "rearranged": list(ob.rearranged),
                          "nuclear": ob.nuclear_bound,
                          "schatten": None if ob.schatten is None
                          else {f"{r:g}": v for r, v in ob.schatten.items()}}}
    _emit(payload, args, "dnp")
    return 0


def _cmd_bounds(args) -> int:
    if args.formula == "jlambda":
        report = bounds_mod.jlambda_upper(args.p, args.r)
        payload = {"formula": report.formula_id,
                   "inputs": {"p": args.p, "r": args.r},
                   "value": report.upper_bound}
    elif args.formula == "r_epsilon":
        payload = {"formula": "r_epsilon", "inputs": {"p": args.p, "eps": args.eps},
                   "value": bounds_mod.r_epsilon(args.p, args.eps)}
    elif args.formula == "lemma31":
        q = [args.r ** k for k in range(args.count)]
        res = bounds_mod.lemma31_bound(args.p, args.alpha, q, args.r)
        payload = {"formula": "crossterm", "inputs": {"p": args.p, "alpha": args.alpha,
                                                      "r": args.r, "count": args.count},
                   "value": {"lhs": res.lhs, "rhs": res.rhs}}
    elif args.formula == "envelope":
        seq = parse_sequence(args.seq)
        br = bounds_mod.envelope_check(seq, args.alpha)
        payload = {"formula": "envelope", "inputs": {"seq": args.seq, "alpha": args.alpha},
                   "value": {"ratio_min": br.ratio_min, "ratio_max": br.ratio_max}}
    else:  # point_eval
        seq = parse_sequence(args.seq)
        payload = {"formula": "point_eval",
                   "inputs": {"seq": args.seq, "p": args.p, "t": args.t},
                   "value": bounds_mod.point_eval_norm(seq, args.p, args.t)}
    _emit({"command": "bounds", **payload}, args, "bounds")
    return 0


def _cmd_norm(args) -> int:
    seq = parse_sequence(args.seq)
    mu = parse_measure(args.measure)
    coeffs = _floats(Path(args.coeffs_file).read_text()) if args.coeffs_file \
        else _floats(args.coeffs)
    fpoly = lpnorm.MuntzPolynomial(seq, tuple(coeffs))
    value = lpnorm.lp_norm(fpoly, mu, args.p)
    payload = {"command": "norm",
               "inputs": {"seq": args.seq, "measure": args.measure, "p": args.p,
                          "coefficients": coeffs},
               "value": value}
    if args.p == 2.0 and isinstance(mu, measures_mod.Lebesgue):
        payload["gram_value"] = lpnorm.l2_norm_gram(fpoly)
    _emit(payload, args, "norm")
    return 0


def _cmd_probe(args) -> int:
    seq = parse_sequence(args.seq)
    if args.kind == "gm":
        res = lpnorm.gm_ratio_sample(seq, args.p, trials=args.trials, seed=args.seed)
        payload = {"kind": "gm", "min_ratio": res.min_ratio, "max_ratio": res.max_ratio,
                   "trials": res.trials}
    else:
        probe = lpnorm.amgm_probe(seq, args.p, args.block_start, args.block_len)
        payload = {"kind": "amgm", "norm_lower_bound": probe.norm_lower_bound,
                   "coeff_norm": probe.coeff_norm, "ratio": probe.ratio,
                   "note": "growth along widening blocks is evidence of unboundedness, not proof"}
    _emit({"command": "probe", "inputs": {"seq": args.seq, "p": args.p}, **payload},
          args, "probe")
    return 0


def _cmd_spectrum(args) -> int:
    seq = parse_sequence(args.seq)
    n = min(args.N, len(seq))
    if args.operator == "frame":
        fb = hilbert.frame_bounds(seq, n)
        payload = {"operator": "frame", "N": n,
                   "sigma": list(fb.singular_values),
                   "sigma_min": fb.sigma_min, "sigma_max": fb.sigma_max}
    else:
        mu = parse_measure(args.measure)
        fn = hilbert.embedding_spectrum if args.operator == "embedding" \
            else hilbert.t_mu_spectrum
        spec = fn(seq, mu, n)
        payload = {"operator": spec.operator, "N": spec.n,
                   "sigma": list(spec.singular_values),
                   "schatten": {f"{r:g}": v for r, v in spec.schatten.items()},
                   "drift": spec.drift}
        if args.operator == "synthesis":
            payload["chain_ok"] = spec.extras["chain_ok"]
    _emit({"command": "spectrum", "inputs": {"seq": args.seq, "N": args.N}, **payload},
          args, "spectrum")
    return 0


def _cmd_example(args) -> int:
    inst = examples_mod.build_example(args.label, args.p, args.count)
    report = examples_mod.check_example_claims(inst, args.q)
    rows = []
    for i, n in enumerate(inst.n_range):
        row = {"n": n, "lambda_n": inst.seq[i]}
        for q in report.q_values:
            row[f"M_n(q={q:g})"] = report.monomial_tests[q][i]
        if report.dn_values is not None:
            row["D_n(p)"] = report.dn_values[i]
        rows.append(row)
    if args.format == "csv":
        _emit_csv(rows, args, f"example-{args.label}")
    else:
        _emit({"command": "example",
               "inputs": {"label": args.label, "p": args.p, "count": args.count,
                          "q": list(args.q)},
               "rows": rows,
               "checks": [asdict(c) for c in report.checks],
               "truncated": inst.truncated}, args, f"example-{args.label}")
    for c in report.checks:
        print(f"[{c.status}] {c.name}", file=sys.stderr)
    return 1 if any(c.status == "FAIL" for c in report.checks) else 0


def _run_suite(suite: str, args) -> list[dict]:
    need_seq = suite not in ("crossterm-bound", "ex-a", "ex-b")
    seq = parse_sequence(args.seq) if need_seq else None
    mu = parse_measure(args.measure) if args.measure else measures_mod.Lebesgue()
    if suite == "basis":
        return suite_basis(seq, mu, args.p, args.N, args.seed, args.tol)
    if suite == "isometry-threshold":
        return suite_isometry(seq, mu, args.p, args.N, args.eps)
    if suite == "pairing-dichotomy":
        return suite_pairing(seq, args.p)
    if suite == "envelope":
        return suite_envelope(seq, args.alpha_list)
    if suite == "crossterm-bound":
        return suite_crossterm([1.5, 2.0, 3.0, 5.0], "auto", [2.0, 4.0, 16.0], 30)
    if suite == "diagonal-domination":
        return suite_diagonal(seq, mu, args.N, args.seed, args.tol)
    if suite == "blocksum-probe":
        return suite_blocksum(seq, args.p)
    if suite == "carleson":
        return suite_carleson(seq, mu, args.p, args.q, args.N, args.tol)
    if suite == "compact":
        return suite_compact(seq, mu, args.N, args.tol)
    if suite == "hs":
        return suite_hs(seq, mu, args.N, args.q)
    if suite == "ex-a":
        return suite_example("A", args.p, args.count, args.q or [args.p, args.p + 1.0])
    if suite == "ex-b":
        return suite_example("B", args.p, args.count, args.q or [1.0])
    raise UsageError(f"unknown suite {suite!r}; have {', '.join(SUITE_IDS)}")


def _cmd_verify(args) -> int:
    checks = _run_suite(args.suite, args)
    payload = {"command": "verify", "suite": args.suite,
               "inputs": {"seq": args.seq, "measure": args.measure, "p": args.p,
                          "q": list(args.q), "N": args.N, "eps": args.eps,
                          "count": args.count, "seed": args.seed, "tol": args.tol},
               "checks": checks,
               "summary": {s: sum(1 for c in checks if c["status"] == s)
                           for s in ("PASS", "FAIL", "EVIDENCE")}}
    _emit(payload, args, f"verify-{args.suite}")
    return _exit_code(checks)


def _cmd_report(args) -> int:
    if not args.out:
        raise UsageError("report needs --out DIRECTORY")
    all_checks = []
    index = []
    for suite in args.suites:
        checks = _run_suite(suite, args)
        all_checks.extend(checks)
        payload = {"command": "verify", "suite": suite, "checks": checks}
        _emit(payload, args, f"verify-{suite}")
        index.append({"suite": suite,
                      "fail": sum(1 for c in checks if c["status"] == "FAIL")})
    _emit({"command": "report", "suites": index}, args, "index")
    return _exit_code(all_checks)


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------

def _add_common(sp, seq=True, measure=True):
    if seq:
        sp.add_argument("--seq", default="geometric:1,2,16",
                        help="geometric:l0,r,count | recursive:l,start,gamma,count | "
                             "explicit:v1,v2,... | file:path.json")
    if measure:
        sp.add_argument("--measure", default="lebesgue",
                        help="lebesgue | atoms:delta:mass,... | file:path.json")
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--q", type=lambda s: _floats(s), default=[])
    sp.add_argument("--N", type=int, default=hilbert.DEFAULT_TRUNCATION)
    sp.add_argument("--tol", type=float, default=1e-12)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--eps", type=float, default=0.5)
    sp.add_argument("--count", type=int, default=20)
    sp.add_argument("--out", default=None, help="directory for report files")
    sp.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="muntzlab",
        description="numerics for weighted monomial systems on [0,1)")
    sub = parser.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("classify", help="prefix growth classification")
    _add_common(sp, measure=False)
    sp.add_argument("--decompose", type=float, default=None,
                    help="also greedily split into r-lacunary parts")
    sp.set_defaults(fn=_cmd_classify)

    sp = sub.add_parser("moments", help="monomial moments against a measure")
    _add_common(sp)
    sp.set_defaults(fn=_cmd_moments)

    sp = sub.add_parser("dnp", help="diagonal-domination profile and bounds")
    _add_common(sp)
    sp.add_argument("--weight", choices=("inverse_lambda", "classical"),
                    default="inverse_lambda")
    sp.set_defaults(fn=_cmd_dnp)

    sp = sub.add_parser("bounds", help="closed-form constants and brackets")
    _add_common(sp)
    sp.add_argument("--formula", required=True,
                    choices=("jlambda", "lemma31", "r_epsilon", "envelope", "point_eval"))
    sp.add_argument("--r", type=float, default=2.0)
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.add_argument("--t", type=float, default=0.5)
    sp.set_defaults(fn=_cmd_bounds)

    sp = sub.add_parser("norm", help="L^p(mu) norm of a coefficient vector")
    _add_common(sp)
    sp.add_argument("--coeffs", default="1")
    sp.add_argument("--coeffs-file", default=None)
    sp.set_defaults(fn=_cmd_norm)

    sp = sub.add_parser("probe", help="ratio sampling and block probes")
    _add_common(sp)
    sp.add_argument("--kind", choices=("gm", "amgm"), default="gm")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--block-start", type=int, default=0)
    sp.add_argument("--block-len", type=int, default=4)
    sp.set_defaults(fn=_cmd_probe)

    sp = sub.add_parser("spectrum", help="truncated operator spectra (p=2)")
    _add_common(sp)
    sp.add_argument("--operator", choices=("embedding", "synthesis", "frame"),
                    default="embedding")
    sp.set_defaults(fn=_cmd_spectrum)

    sp = sub.add_parser("example", help="extremal constructions A and B")
    _add_common(sp, seq=False, measure=False)
    sp.add_argument("--label", choices=("A", "B"), required=True)
    sp.set_defaults(fn=_cmd_example)

    sp = sub.add_parser("verify", help="named verification suites")
    _add_common(sp)
    sp.add_argument("--suite", required=True, choices=SUITE_IDS)
    sp.add_argument("--alpha-list", type=lambda s: _floats(s), default=[0.5, 1.0, 2.0])
    sp.set_defaults(fn=_cmd_verify)

    sp = sub.add_parser("report", help="run a battery of suites into a directory")
    _add_common(sp)
    sp.add_argument("--suites", type=lambda s: s.split(","),
                    default=["basis", "pairing-dichotomy", "envelope",
                             "crossterm-bound", "diagonal-domination"])
    sp.add_argument("--alpha-list", type=lambda s: _floats(s), default=[0.5, 1.0, 2.0])
    sp.set_defaults(fn=_cmd_report)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
