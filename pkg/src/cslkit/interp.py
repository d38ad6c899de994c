"""Interpolation in Alg L for finite lattices.

Given vectors x and y, decide whether some T in Alg L carries x to y and
build such operators.  Decisions and the greedy interpolant are exact
(``fractions.Fraction``); only :func:`min_norm_interpolant` uses floating
point, through a convex solver.

Vectors are real; the criteria involved depend only on norms of
coordinate restrictions, so complex scalars would add nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import CslError, InvalidInput
from .lattice import Lattice, e_hull, is_nest, p_minus, support_pattern

INF = math.inf

Vector = tuple


def to_rational(v) -> Fraction:
    """Parse an exact scalar: int, Fraction, or a string such as ``"3/4"``."""
    if isinstance(v, bool):
        raise InvalidInput(f"not a rational scalar: {v!r}")
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"not a rational scalar: {v!r}") from exc
    raise InvalidInput(f"not an exact scalar (floats are rejected): {v!r}")


def as_vector(values: Iterable, dimension: Optional[int] = None) -> Vector:
    vec = tuple(to_rational(v) for v in values)
    if dimension is not None and len(vec) != dimension:
        raise InvalidInput(f"vector has length {len(vec)}, lattice dimension is {dimension}")
    return vec


def unit(dimension: int, i: int) -> Vector:
    return tuple(Fraction(int(k == i)) for k in range(dimension))


def indicator(dimension: int, s: Iterable[int]) -> Vector:
    s = set(s)
    return tuple(Fraction(int(k in s)) for k in range(dimension))


def support(x: Sequence) -> frozenset:
    return frozenset(i for i, v in enumerate(x) if v != 0)


def restrict(x: Sequence, s: Iterable[int]) -> Vector:
    s = frozenset(s)
    return tuple(v if i in s else Fraction(0) for i, v in enumerate(x))


def sqnorm(x: Sequence) -> Fraction:
    return sum((v * v for v in x), Fraction(0))


def matvec(T, x: Sequence) -> Vector:
    return tuple(sum((a * b for a, b in zip(row, x)), Fraction(0)) for row in T)


def zero_matrix(d: int) -> tuple:
    return tuple(tuple(Fraction(0) for _ in range(d)) for _ in range(d))


def _check_pair(L: Lattice, x, y):
    return as_vector(x, L.dimension), as_vector(y, L.dimension)


@dataclass(frozen=True)
class LanceResult:
    """Outcome of the Lance criterion.

    ``value_sq`` is the squared supremum (``INF`` when unbounded) and
    ``witness`` the member at which it is attained.
    """

    value_sq: object
    witness: frozenset
    finite: bool


def lance_sup(L: Lattice, x, y) -> LanceResult:
    """Squared supremum of ||E'y|| / ||E'x|| over members E, with 0/0 read as 0.

    Among finite maximisers the first member in canonical order is the
    witness.  When the supremum is infinite the witness is the last member
    in canonical order with E'x = 0 and E'y != 0.
    """
    x, y = _check_pair(L, x, y)
    best: Optional[Fraction] = None
    best_member = None
    inf_member = None
    for E in L.members:
        comp = L.complement(E)
        nx = sqnorm(restrict(x, comp))
        ny = sqnorm(restrict(y, comp))
        if nx == 0:
            if ny != 0:
                inf_member = E
                continue
            ratio = Fraction(0)
        else:
            ratio = ny / nx
        if best is None or ratio > best:
            best, best_member = ratio, E
    if inf_member is not None:
        return LanceResult(INF, inf_member, False)
    return LanceResult(best, best_member, True)


def in_orbit(L: Lattice, x, y) -> bool:
    """Whether y = Tx for some T in Alg L."""
    return lance_sup(L, x, y).finite


def orbit_space(L: Lattice, x) -> frozenset:
    """The member spanned by the orbit {Tx : T in Alg L}."""
    x = as_vector(x, L.dimension)
    return e_hull(L, support(x))


def join_generator(L: Lattice, x1, x2) -> Vector:
    """A single vector whose orbit is the join of the orbits of x1 and x2."""
    x1, x2 = _check_pair(L, x1, x2)
    tail = restrict(x2, L.complement(orbit_space(L, x1)))
    return tuple(a + b for a, b in zip(x1, tail))


@dataclass(frozen=True)
class RankOne:
    """A rank-one interpolant T = y w^T with <x, w> = 1."""

    member: frozenset
    functional: Vector
    matrix: tuple


def rank_one(L: Lattice, x, y) -> Optional[RankOne]:
    """Find a rank-one T in Alg L with Tx = y, or return ``None``.

    y w^T lies in Alg L exactly when y is supported in some member P and
    w vanishes on P_-.  Such a w with <x, w> = 1 exists iff x has a nonzero
    component off P_-.
    """
    x, y = _check_pair(L, x, y)
    d = L.dimension
    if not support(y):
        return RankOne(frozenset(), tuple(Fraction(0) for _ in range(d)), zero_matrix(d))
    sy = support(y)
    for P in L.members:
        if not P or not sy <= P:
            continue
        part = restrict(x, L.complement(p_minus(L, P)))
        n = sqnorm(part)
        if n == 0:
            continue
        w = tuple(v / n for v in part)
        T = tuple(tuple(yi * wj for wj in w) for yi in y)
        assert support_pattern(L).respects(T) and matvec(T, x) == y
        return RankOne(P, w, T)
    return None


@dataclass(frozen=True)
class Interpolant:
    """An operator in Alg L mapping x to y.

    Exact interpolants carry ``norm_bound_sq``, a rational upper bound on
    the squared operator norm.  Numeric ones carry the computed ``norm``
    and the ``residual`` ||Tx - y||.
    """

    matrix: tuple
    pattern_ok: bool
    exact: bool
    norm_bound_sq: Optional[Fraction] = None
    norm: Optional[float] = None
    residual: Optional[float] = None


class NoInterpolant(CslError):
    """No operator in Alg L maps x to y; ``witness`` is the Lance witness."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__("no operator in Alg L maps x to y (Lance supremum is infinite)")


def _chain(L: Lattice) -> tuple:
    if not is_nest(L):
        raise InvalidInput("lattice is not a nest")
    return L.members


def greedy_nest_interpolant(L: Lattice, x, y) -> Interpolant:
    """Exact interpolant built from one rank-one block per atom of a nest.

    Block k sends x to the k-th atom's part of y through the functional
    proportional to the tail of x beyond the previous chain element.
    """
    chain = _chain(L)
    x, y = _check_pair(L, x, y)
    res = lance_sup(L, x, y)
    if not res.finite:
        raise NoInterpolant(res.witness)
    d = L.dimension
    rows = [[Fraction(0)] * d for _ in range(d)]
    bound = Fraction(0)
    for prev, cur in zip(chain, chain[1:]):
        block = cur - prev
        dy = restrict(y, block)
        ny = sqnorm(dy)
        if ny == 0:
            continue
        tail = restrict(x, L.complement(prev))
        nt = sqnorm(tail)
        for i in block:
            for j in range(d):
                rows[i][j] += dy[i] * tail[j] / nt
        bound += ny / nt
    T = tuple(tuple(r) for r in rows)
    ok = support_pattern(L).respects(T)
    assert matvec(T, x) == y
    return Interpolant(T, ok, True, norm_bound_sq=bound)


def pattern_interpolant(L: Lattice, x, y) -> Interpolant:
    """Exact interpolant for any lattice: each row is the least-norm solution
    of its own equation over the allowed columns.

    ``norm_bound_sq`` is the squared Frobenius norm.
    """
    x, y = _check_pair(L, x, y)
    res = lance_sup(L, x, y)
    if not res.finite:
        raise NoInterpolant(res.witness)
    pat = support_pattern(L)
    d = L.dimension
    rows = []
    frob = Fraction(0)
    for i in range(d):
        xs = restrict(x, pat.columns(i))
        n = sqnorm(xs)
        if y[i] == 0 or n == 0:
            rows.append(tuple(Fraction(0) for _ in range(d)))
            continue
        rows.append(tuple(y[i] * v / n for v in xs))
        frob += y[i] * y[i] / n
    T = tuple(rows)
    assert matvec(T, x) == y
    return Interpolant(T, pat.respects(T), True, norm_bound_sq=frob)


def is_psd(M) -> bool:
    """Exact positive-semidefiniteness test for a symmetric rational matrix.

    Symmetric Gaussian elimination without pivoting; a zero pivot is
    admissible only when its whole row is zero.
    """
    A = [list(map(Fraction, row)) for row in M]
    n = len(A)
    for k in range(n):
        p = A[k][k]
        if p < 0:
            return False
        if p == 0:
            if any(A[k][j] != 0 for j in range(k + 1, n)):
                return False
            continue
        for i in range(k + 1, n):
            f = A[i][k] / p
            if f:
                for j in range(k + 1, n):
                    A[i][j] -= f * A[k][j]
    return True


def norm_sq_at_most(T, bound_sq: Fraction) -> bool:
    """Exact check that ||T||^2 <= bound_sq, i.e. bound_sq*I - T^T T is PSD."""
    n = len(T[0]) if T else 0
    G = [[-sum((T[r][i] * T[r][j] for r in range(len(T))), Fraction(0)) for j in range(n)] for i in range(n)]
    for i in range(n):
        G[i][i] += bound_sq
    return is_psd(G)


def norm_sq_at_least(T, v: Sequence, bound_sq: Fraction) -> bool:
    """Exact check that ||Tv||^2 >= bound_sq * ||v||^2 (hence ||T||^2 >= bound_sq)."""
    return sqnorm(matvec(T, v)) >= bound_sq * sqnorm(v)


def lance_test_vector(L: Lattice, x, result: LanceResult) -> Vector:
    """The vector E'x at the Lance witness; any interpolant T has
    ||T E'x|| >= ||E'y||, so it certifies the lower bound exactly."""
    return restrict(as_vector(x, L.dimension), L.complement(result.witness))


def opnorm(T) -> float:
    return float(np.linalg.norm(np.array(T, dtype=float), 2))


def _pattern_mask(L: Lattice) -> np.ndarray:
    pat = support_pattern(L)
    mask = np.zeros((L.dimension, L.dimension))
    for i, j in pat.allowed:
        mask[i, j] = 1.0
    return mask


def _solve_min_norm(mask: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    import cvxpy as cp

    d = len(x)
    T = cp.Variable((d, d))
    cons = [cp.multiply(1.0 - mask, T) == 0, T @ x == y]
    prob = cp.Problem(cp.Minimize(cp.sigma_max(T)), cons)
    for solver in ("CLARABEL", "SCS"):
        try:
            prob.solve(solver=solver)
        except cp.SolverError:
            continue
        if T.value is not None and prob.status in ("optimal", "optimal_inaccurate"):
            return np.asarray(T.value) * mask
    raise CslError(f"convex solver failed: status {prob.status}")


def _polish(T: np.ndarray, mask: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    # Row i of Tx = y only involves the allowed columns of row i, so each
    # row is projected onto its own hyperplane.
    T = T.copy()
    for i in range(len(x)):
        xs = x * mask[i]
        n = xs @ xs
        if n > 0:
            T[i] += (y[i] - T[i] @ x) / n * xs
    return T


def min_norm_interpolant(L: Lattice, x, y, tol: float = 1e-7, *, require_nest: bool = True) -> Interpolant:
    """Numerically minimal-norm T in Alg L with Tx = y.

    Minimises the spectral norm over pattern-supported matrices subject to
    the affine constraint (a semidefinite program), then projects back onto
    the affine set so the residual sits at rounding level.  For nests the
    optimum equals the Lance value; ``require_nest=False`` allows probing
    general lattices, where only the lower bound is guaranteed.
    """
    if tol <= 0:
        raise InvalidInput("tol must be positive")
    if require_nest:
        _chain(L)
    xq, yq = _check_pair(L, x, y)
    res = lance_sup(L, xq, yq)
    if not res.finite:
        raise NoInterpolant(res.witness)
    d = L.dimension
    if not support(yq):
        return Interpolant(tuple(tuple(0.0 for _ in range(d)) for _ in range(d)), True, False, norm=0.0, residual=0.0)
    xf = np.array([float(v) for v in xq])
    yf = np.array([float(v) for v in yq])
    sx, sy = np.linalg.norm(xf), np.linalg.norm(yf)
    mask = _pattern_mask(L)
    That = _solve_min_norm(mask, xf / sx, yf / sy)
    That = _polish(That * mask, mask, xf / sx, yf / sy)
    T = That * (sy / sx)
    residual = float(np.linalg.norm(T @ xf - yf))
    if residual > tol * sy:
        raise CslError(f"interpolant residual {residual:.3g} exceeds tolerance")
    return Interpolant(
        tuple(tuple(float(v) for v in row) for row in T),
        bool(np.all(T[mask == 0] == 0)),
        False,
        norm=opnorm(T),
        residual=residual,
    )


@dataclass(frozen=True)
class OrderResult:
    total: bool
    witness: Optional[tuple] = None


def orbits_totally_ordered(L: Lattice) -> OrderResult:
    """Whether the orbit spaces M_x are totally ordered by inclusion.

    Every member P is the orbit space of its indicator vector, so the orbit
    spaces are exactly the members.  The witness is a pair
    ``((P, x_P), (Q, x_Q))`` of incomparable orbit spaces with generators.
    """
    d = L.dimension
    orbits = sorted({orbit_space(L, indicator(d, P)): indicator(d, P) for P in L.members}.items(),
                    key=lambda kv: (len(kv[0]), sorted(kv[0])))
    for i, (P, xp) in enumerate(orbits):
        for Q, xq in orbits[i + 1:]:
            if not (P <= Q or Q <= P):
                return OrderResult(False, ((P, xp), (Q, xq)))
    return OrderResult(True)
