"""JSON-ready analysis reports.

Exact values appear as ``"p/q"`` strings; each has a ``*_decimal``
companion rendered to 12 significant digits (round-half-even), which is a
rendering only.
"""

from __future__ import annotations

import decimal
import math
from fractions import Fraction

from . import interp
from .lattice import (
    Lattice,
    SymbolicNest,
    NestKind,
    atoms,
    fmt_member,
    is_hyperatomic,
    is_nest,
    p_minus,
    predecessor_table,
)
from .replay import q

_CTX = decimal.Context(prec=12, rounding=decimal.ROUND_HALF_EVEN)


def render(v) -> str:
    """Decimal rendering of an exact rational (or float) to 12 significant digits."""
    if v == math.inf:
        return "inf"
    if isinstance(v, float):
        return str(_CTX.create_decimal_from_float(v))
    v = Fraction(v)
    return str(_CTX.divide(decimal.Decimal(v.numerator), decimal.Decimal(v.denominator)))


def exact(v) -> dict:
    return {"exact": q(v), "decimal": render(v)}


def _vec(x) -> list:
    return [q(v) for v in x]


def _mat(T) -> list:
    return [[q(v) for v in row] for row in T]


def analyze_lattice(L: Lattice) -> dict:
    nest = is_nest(L)
    hyper = is_hyperatomic(L)
    order = interp.orbits_totally_ordered(L)
    conditions = {
        "hyperatomic": {
            "value": hyper.hyperatomic,
            "op": "is_hyperatomic",
            "generators": {fmt_member(P): [sorted(a.coordinates) for a in gens]
                           for P, gens in hyper.generators.items()},
        },
        "ascending_chains_stabilize": {
            "value": True,
            "reason": "finite lattice: every ascending chain has finitely many distinct terms",
        },
        "orbit_order_total": {
            "value": order.total,
            "op": "orbits_totally_ordered",
            "witness": None if order.total else [
                {"member": sorted(P), "generator": _vec(x)} for P, x in order.witness
            ],
        },
        "operator_range_order_total": {
            "value": order.total,
            "reason": "hyperatomic: every invariant operator range is a member, so ranges = orbit spaces",
        },
    }
    if nest:
        conditions["immediate_predecessors"] = {
            "value": True,
            "op": "predecessor_table",
            "table": [[sorted(P), sorted(Q)] for P, Q in
                      sorted(predecessor_table(L).items(), key=lambda kv: (-len(kv[0]), sorted(kv[0])))],
        }
    return {
        "kind": "finite",
        "dimension": L.dimension,
        "member_count": len(L),
        "members": [sorted(m) for m in L.members],
        "nest": nest,
        "atoms": [sorted(a.coordinates) for a in atoms(L)],
        "p_minus": [[sorted(P), sorted(p_minus(L, P))] for P in L.members if P],
        "conditions": conditions,
    }


def analyze_symbolic(N: SymbolicNest, chain_terms: int = 5) -> dict:
    hyper = N.hyperatomic()
    if N.kind is NestKind.OMEGA:
        chain = N.ascending_chain_witness(chain_terms)
        conditions = {
            "hyperatomic": {"value": False, "witness": hyper.witness.label, "rule": hyper.rule},
            "ascending_chains_stabilize": {
                "value": False,
                "witness": [e.label for e in chain] + ["..."],
                "rule": "F_n < F_{n+1} for every n; the chain never becomes constant",
            },
            "immediate_predecessors": {
                "value": False,
                "witness": hyper.witness.label,
                "rule": "every F_n below I has F_{n+1} strictly between it and I",
            },
            "orbits_closed": {"value": False, "certificate": "counterexample N (built on A)"},
            "operator_range_order_total": {"value": False, "certificate": "counterexample B"},
            "orbit_order_total": {"value": False, "certificate": "counterexample C"},
        }
    else:
        conditions = {
            "hyperatomic": {"value": True, "rule": hyper.rule},
            "ascending_chains_stabilize": {
                "value": True,
                "rule": "T_i <= T_j iff j <= i, so an ascending chain has decreasing indices and stops",
            },
            "immediate_predecessors": {
                "value": True,
                "rule": "T_k -> T_{k+1}",
                "table": [[e.label, N.immediate_predecessor(e).label] for e in N.chain(chain_terms)],
            },
            "orbits_closed": {"value": True, "reason": "equivalent to hyperatomic"},
            "operator_range_order_total": {"value": True, "reason": "equivalent to hyperatomic for nests"},
            "orbit_order_total": {"value": True, "reason": "equivalent to hyperatomic for nests"},
        }
    return {"kind": N.kind.value, "nest": True, "conditions": conditions}


def lance_report(L: Lattice, x, y) -> dict:
    res = interp.lance_sup(L, x, y)
    return {
        "value_sq": exact(res.value_sq),
        "finite": res.finite,
        "witness": sorted(res.witness),
    }


def orbit_report(L: Lattice, x) -> dict:
    return {"x": _vec(interp.as_vector(x, L.dimension)), "orbit_space": sorted(interp.orbit_space(L, x))}


def rank_one_report(L: Lattice, x, y) -> dict:
    r = interp.rank_one(L, x, y)
    if r is None:
        return {"exists": False}
    return {"exists": True, "member": sorted(r.member), "functional": _vec(r.functional), "matrix": _mat(r.matrix)}


def _scalar_multiple(x, y):
    # c with y = c x, if any; c*I is in every Alg L
    if not interp.support(x):
        return Fraction(0) if not interp.support(y) else None
    i = min(interp.support(x))
    c = y[i] / x[i]
    return c if all(b == c * a for a, b in zip(x, y)) else None


def interpolate_report(L: Lattice, x, y, tol: float = 1e-7) -> dict:
    x = interp.as_vector(x, L.dimension)
    y = interp.as_vector(y, L.dimension)
    res = interp.lance_sup(L, x, y)
    out = {"lance": lance_report(L, x, y)}
    if not res.finite:
        out["interpolant"] = None
        out["reason"] = "no interpolant: E'x = 0 but E'y != 0 at the witness"
        return out
    scalar = _scalar_multiple(x, y)
    if scalar is not None:
        out["scalar_interpolant"] = {"operator": "c*I", "c": q(scalar)}
    nest = is_nest(L)
    greedy = interp.greedy_nest_interpolant(L, x, y) if nest else interp.pattern_interpolant(L, x, y)
    v = interp.lance_test_vector(L, x, res)
    lower_ok = interp.norm_sq_at_least(greedy.matrix, v, res.value_sq)
    upper_ok = interp.norm_sq_at_most(greedy.matrix, greedy.norm_bound_sq)
    out["exact_interpolant"] = {
        "method": "greedy-nest" if nest else "row-wise least norm",
        "matrix": _mat(greedy.matrix),
        "pattern_ok": greedy.pattern_ok,
        "norm_bound_sq": exact(greedy.norm_bound_sq),
        "opnorm_decimal": render(interp.opnorm(greedy.matrix)),
        "sandwich_exact": lower_ok and upper_ok,
    }
    mn = interp.min_norm_interpolant(L, x, y, tol, require_nest=False)
    out["min_norm_interpolant"] = {
        "matrix": [[render(v) for v in row] for row in mn.matrix],
        "norm_decimal": render(mn.norm),
        "residual_decimal": render(mn.residual),
        "optimal_equals_lance": nest,
        "note": "numeric; for nests the optimum equals the Lance value, otherwise only the lower bound holds",
    }
    return out
