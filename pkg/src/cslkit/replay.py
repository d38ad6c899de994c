"""Serialized certificates and their replay.

A certificate document is plain JSON with every exact value written as a
``"p/q"`` string.  :func:`verify_document` re-checks the recorded numbers
against each other (ratios, thresholds, coverage of witness indices); it
never rebuilds a construction.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

from . import certify
from .errors import InvalidInput

FORMAT = "cslkit-certificate/1"

# Expected membership pattern for construction B: x in ran D_mu only,
# y in ran D_lambda only.
B_EXPECTED = {
    ("B.x", "mu"): "inside",
    ("B.x", "lambda"): "outside",
    ("B.y", "lambda"): "inside",
    ("B.y", "mu"): "outside",
}


def q(v) -> str:
    if v == math.inf:
        return "inf"
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def unq(s: str):
    if s == "inf":
        return math.inf
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InvalidInput(f"bad rational {s!r}") from exc


def _ratio_record(r: certify.RatioRecord) -> dict:
    return {"k": r.k, "K": r.K, "num": q(r.num), "den": q(r.den), "ratio": q(r.ratio),
            "threshold": q(r.threshold)}


def document_A(k_max: int = 50, K: int = 200) -> dict:
    recs = certify.certify_A(k_max, K)
    return {
        "format": FORMAT,
        "construction": "A",
        "params": {"k_max": k_max, "K": K},
        "cert_status": certify.PROVEN,
        "records": [_ratio_record(r) for r in recs],
        "conclusion": all(r.ok for r in recs),
        "notes": ["partial ratios over k < n <= K; termwise n^-2 >= (k+1)^2 n^-4 extends them to full tails"],
    }


def document_C(k_max: int = 25, K=None) -> dict:
    odd, even = certify.certify_C(k_max, K)
    recs = []
    for cert in (odd, even):
        for r in cert.records:
            recs.append({"half": cert.construction, "k": r.k, "num_lo": q(r.num_lo), "den_hi": q(r.den_hi),
                         "lower_bound": q(r.lower_bound), "threshold": q(r.threshold)})
    recs.sort(key=lambda d: d["k"])
    return {
        "format": FORMAT,
        "construction": "C",
        "params": {"k_max": k_max, "K": odd.depth},
        "cert_status": certify.PROVEN if odd.status == even.status == certify.PROVEN else certify.ASSERTED,
        "strict": True,
        "records": recs,
        "conclusion": odd.conclusion and even.conclusion,
        "notes": ["tails summed over n >= k; lower_bound = num_lo / den_hi"],
    }


def _membership_dict(m: certify.RangeMembership) -> dict:
    d = {"seq": m.seq, "weights": m.weights, "verdict": m.verdict, "n_max": m.n_max, "status": m.status}
    if m.verdict == "outside":
        d["rule"] = m.rule
        d["witnesses"] = [[n, q(t)] for n, t in m.witnesses]
    elif m.verdict == "inside":
        d["reference"] = [m.reference[0], q(m.reference[1])]
        d["terms"] = [q(t) for t in m.terms]
    return d


def memberships_B(n_max: int = 100) -> list:
    B = certify.construction_B()
    return [
        certify.d_range_membership(B.x, B.mu, n_max),
        certify.d_range_membership(B.x, B.lam, n_max),
        certify.d_range_membership(B.y, B.lam, n_max),
        certify.d_range_membership(B.y, B.mu, n_max),
    ]


def document_B(n_max: int = 100) -> dict:
    ms = memberships_B(n_max)
    ok = all(B_EXPECTED[(m.seq, m.weights)] == m.verdict for m in ms)
    return {
        "format": FORMAT,
        "construction": "B",
        "params": {"n_max": n_max},
        "cert_status": certify.PROVEN if all(m.status == certify.PROVEN for m in ms) else certify.ASSERTED,
        "memberships": [_membership_dict(m) for m in ms],
        "conclusion": ok,
        "notes": ["witness terms are >= 1 and equal 1 at some indices; the equality-tight weights make the bound exact there"],
    }


def document_N(eps_sq, K=None) -> dict:
    nc = certify.non_closedness_certificate(eps_sq, K)
    return {
        "format": FORMAT,
        "construction": "N",
        "params": {"eps_sq": q(nc.eps_sq), "K": nc.K},
        "cert_status": certify.PROVEN,
        "tail_bound": q(nc.tail_bound),
        "exclusion": _ratio_record(nc.exclusion),
        "approximant": {"operator": "sum_{n<=K} n (F_n - F_{n-1})", "norm": nc.K,
                        "increments_checked": nc.increments_checked},
        "telescoping": {"from": nc.K + 1, "count": nc.telescoping_checked},
        "conclusion": nc.ok,
    }


def build_document(construction: str, *, k_max=None, depth=None, eps_sq=None) -> dict:
    if construction == "A":
        return document_A(k_max or 50, depth or 200)
    if construction == "B":
        return document_B(k_max or 100)
    if construction == "C":
        return document_C(k_max or 25, depth)
    if construction == "N":
        return document_N(eps_sq if eps_sq is not None else Fraction(1, 1000), depth)
    raise InvalidInput(f"unknown construction {construction!r}")


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


# -- replay -----------------------------------------------------------------


def _check_ratio_record(r: dict, where: str) -> list:
    fails = []
    num, den, ratio, thr = unq(r["num"]), unq(r["den"]), unq(r["ratio"]), unq(r["threshold"])
    if den <= 0 or num <= 0:
        fails.append(f"{where}: nonpositive partial sum")
    elif ratio != num / den:
        fails.append(f"{where}: ratio != num/den")
    if thr != (r["k"] + 1) ** 2:
        fails.append(f"{where}: threshold is not (k+1)^2")
    if not ratio >= thr:
        fails.append(f"{where}: ratio below threshold")
    if not r["K"] > r["k"]:
        fails.append(f"{where}: depth not beyond k")
    return fails


def _verify_A(doc) -> list:
    fails = []
    ks = [r["k"] for r in doc["records"]]
    if ks != list(range(1, doc["params"]["k_max"] + 1)):
        fails.append("A: records do not cover k = 1..k_max")
    for r in doc["records"]:
        fails += _check_ratio_record(r, f"A k={r['k']}")
    return fails


def _verify_C(doc) -> list:
    fails = []
    ks = [r["k"] for r in doc["records"]]
    if ks != list(range(1, doc["params"]["k_max"] + 1)):
        fails.append("C: records do not cover k = 1..k_max")
    for r in doc["records"]:
        k = r["k"]
        want = "C.a/b" if k % 2 else "C.b/a"
        if r["half"] != want:
            fails.append(f"C k={k}: expected half {want}")
        lo, hi, lb, thr = unq(r["num_lo"]), unq(r["den_hi"]), unq(r["lower_bound"]), unq(r["threshold"])
        if hi == 0:
            if lb != math.inf or lo <= 0:
                fails.append(f"C k={k}: infinite bound not justified")
        elif lb != lo / hi:
            fails.append(f"C k={k}: lower_bound != num_lo/den_hi")
        if thr != 2 ** k:
            fails.append(f"C k={k}: threshold is not 2^k")
        if not lb > thr:
            fails.append(f"C k={k}: bound does not exceed threshold")
    return fails


def _verify_B(doc) -> list:
    fails = []
    seen = {}
    refs = dict(certify._REFERENCES)
    rules = dict(certify._RULES)
    for m in doc["memberships"]:
        key = (m["seq"], m["weights"])
        seen[key] = m["verdict"]
        n_max = m["n_max"]
        if m["verdict"] == "outside":
            pick = rules.get(m["rule"])
            if pick is None:
                fails.append(f"B {key}: unknown rule")
                continue
            idx = [w[0] for w in m["witnesses"]]
            if idx != [n for n in range(1, n_max + 1) if pick(n)]:
                fails.append(f"B {key}: witnesses do not cover the rule up to n_max")
            for n, t in m["witnesses"]:
                if unq(t) < 1:
                    fails.append(f"B {key}: witness term at n={n} below 1")
        elif m["verdict"] == "inside":
            name, C = m["reference"][0], unq(m["reference"][1])
            ref = refs.get(name)
            if ref is None or len(m["terms"]) != n_max:
                fails.append(f"B {key}: malformed comparison certificate")
                continue
            for n, t in enumerate(m["terms"], start=1):
                if unq(t) > C * ref(n):
                    fails.append(f"B {key}: term at n={n} exceeds majorant")
        else:
            fails.append(f"B {key}: undetermined verdict")
    if seen != B_EXPECTED:
        fails.append("B: membership table does not show mutual non-inclusion")
    return fails


def _verify_N(doc) -> list:
    fails = []
    K = doc["params"]["K"]
    eps_sq = unq(doc["params"]["eps_sq"])
    tb = unq(doc["tail_bound"])
    if tb != Fraction(1, K):
        fails.append("N: tail bound is not 1/K")
    if not tb <= eps_sq:
        fails.append("N: tail bound exceeds eps^2")
    ex = doc["exclusion"]
    if ex["k"] != K:
        fails.append("N: exclusion not taken at k = K")
    fails += _check_ratio_record(ex, "N exclusion")
    t = doc["telescoping"]
    if t["from"] != K + 1 or not all(
        Fraction(1, n * n) <= Fraction(1, n - 1) - Fraction(1, n) for n in range(t["from"], t["from"] + t["count"])
    ):
        fails.append("N: telescoping majorant check failed")
    if doc["approximant"]["norm"] != K or doc["approximant"]["increments_checked"] != K:
        fails.append("N: approximant record inconsistent")
    return fails


_VERIFIERS = {"A": _verify_A, "B": _verify_B, "C": _verify_C, "N": _verify_N}


def verify_document(doc: dict) -> list:
    """Replay a certificate; returns the list of failures (empty when valid)."""
    if not isinstance(doc, dict) or doc.get("format") != FORMAT:
        raise InvalidInput("not a cslkit certificate document")
    fn = _VERIFIERS.get(doc.get("construction"))
    if fn is None:
        raise InvalidInput(f"unknown construction {doc.get('construction')!r}")
    try:
        fails = fn(doc)
    except (KeyError, TypeError, IndexError) as exc:
        raise InvalidInput(f"malformed certificate: {exc!r}") from exc
    if doc.get("conclusion") is not True:
        fails.append("certificate does not claim its conclusion")
    return fails
