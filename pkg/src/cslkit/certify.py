"""Exact certificates for counterexamples on the omega nest.

On the omega nest 0 = F_0 < F_1 < ... every vector is described by the
squared norms s_n = ||(F_n - F_{n-1}) x||^2 of its pieces, and
||F_k' x||^2 is the tail sum of s_n over n > k.  Tails are enclosed in
rational intervals: an exact partial sum plus a proven (or asserted)
bound on what lies beyond the working depth.

Three constructions are provided:

* ``A``: x_n with ||x_n|| = 1/n^2 and y_n = n x_n.  y lies in the closure
  of the orbit of x but not in the orbit, so the orbit is not closed.
* ``B``: two decreasing weight sequences and vectors x, y whose membership
  in the ranges of the diagonal operators D_lambda, D_mu is crossed.
* ``C``: lacunary squared norms 2^-e_n on alternating indices giving two
  orbits neither of which contains the other.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .errors import InvalidInput

PROVEN = "proven"
ASSERTED = "asserted"

DEFAULT_DEPTH_LIMIT = 100_000


def depth_limit() -> int:
    """Working-depth cap from ``CSLKIT_DEPTH_LIMIT``."""
    raw = os.environ.get("CSLKIT_DEPTH_LIMIT")
    if raw is None:
        return DEFAULT_DEPTH_LIMIT
    try:
        v = int(raw)
    except ValueError:
        raise InvalidInput(f"CSLKIT_DEPTH_LIMIT must be an integer, got {raw!r}")
    if v < 1:
        raise InvalidInput("CSLKIT_DEPTH_LIMIT must be positive")
    return v


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    def __add__(self, other):
        if isinstance(other, RationalInterval):
            return RationalInterval(self.lo + other.lo, self.hi + other.hi)
        other = Fraction(other)
        return RationalInterval(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, RationalInterval):
            ps = [a * b for a in (self.lo, self.hi) for b in (other.lo, other.hi)]
            return RationalInterval(min(ps), max(ps))
        other = Fraction(other)
        a, b = self.lo * other, self.hi * other
        return RationalInterval(min(a, b), max(a, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, RationalInterval):
            if other.lo <= 0:
                raise ZeroDivisionError("division by an interval that is not strictly positive")
            return self * RationalInterval(1 / other.hi, 1 / other.lo)
        other = Fraction(other)
        if other <= 0:
            raise ZeroDivisionError("division by a non-positive scalar")
        return RationalInterval(self.lo / other, self.hi / other)

    def __contains__(self, v) -> bool:
        return self.lo <= v <= self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


def triangular_e(n: int) -> int:
    """The triangular number 1 + 2 + ... + n."""
    if n < 1:
        raise InvalidInput(f"triangular_e needs n >= 1, got {n}")
    return n * (n + 1) // 2


def _e(n: int) -> int:
    return n * (n + 1) // 2


def triangular_tail_bound(k: int) -> Fraction:
    """Strict upper bound 2^-(e_k + k) for the sum of 2^-e_n over n > k.

    Since e_n = e_k + (k+1) + ... + n >= e_k + (k+1) + (n-k-1) for n > k,
    the tail is dominated by a geometric series with ratio 1/2.
    """
    if k < 1:
        raise InvalidInput(f"tail bound needs k >= 1, got {k}")
    return Fraction(1, 2 ** (_e(k) + k))


# -- tail certificates ------------------------------------------------------


@dataclass(frozen=True)
class GeometricTail:
    """s_n <= c * r^n for all n >= start, with 0 < r < 1."""

    start: int
    c: Fraction
    r: Fraction

    def __post_init__(self):
        if not 0 < self.r < 1 or self.c < 0 or self.start < 1:
            raise InvalidInput("geometric certificate needs 0 < r < 1, c >= 0, start >= 1")

    def dominates(self, n: int, s: Fraction) -> bool:
        return s <= self.c * self.r ** n

    def bound(self, K: int) -> Fraction:
        return self.c * self.r ** (K + 1) / (1 - self.r)

    def describe(self) -> dict:
        return {"type": "geometric", "start": self.start, "c": str(self.c), "r": str(self.r)}


@dataclass(frozen=True)
class PowerTail:
    """s_n <= c / n^p for all n >= start, integer p >= 2.

    Tail bound c / ((p-1) K^(p-1)) from n^-p <= integral of t^-p over
    [n-1, n]; for p = 2 this is the telescoping bound 1/(n(n-1)) summed.
    """

    start: int
    c: Fraction
    p: int

    def __post_init__(self):
        if self.p < 2 or self.c < 0 or self.start < 1:
            raise InvalidInput("power certificate needs p >= 2, c >= 0, start >= 1")

    def dominates(self, n: int, s: Fraction) -> bool:
        return s <= Fraction(self.c) / n ** self.p

    def bound(self, K: int) -> Fraction:
        if K < 1:
            raise InvalidInput("power tail bound needs depth >= 1")
        return Fraction(self.c) / ((self.p - 1) * K ** (self.p - 1))

    def describe(self) -> dict:
        return {"type": "power", "start": self.start, "c": str(self.c), "p": self.p}


@dataclass(frozen=True)
class TriangularTail:
    """s_n <= c * 2^-e_n for all n >= start."""

    start: int = 1
    c: Fraction = Fraction(1)

    def dominates(self, n: int, s: Fraction) -> bool:
        return s <= Fraction(self.c) / 2 ** _e(n)

    def bound(self, K: int) -> Fraction:
        if K == 0:
            return Fraction(self.c)
        return Fraction(self.c) * triangular_tail_bound(K)

    def describe(self) -> dict:
        return {"type": "triangular", "start": self.start, "c": str(self.c)}


class NormSeq:
    """Squared norms s_n (n >= 1) of the pieces of a vector on the omega nest.

    ``rule`` maps n to an exact rational.  ``cert`` bounds the tail beyond
    any working depth; ``status`` is ``"proven"`` for the built-in
    constructions and ``"asserted"`` for anything user-supplied.
    """

    def __init__(self, name: str, rule: Callable[[int], Fraction], cert=None, status: str = ASSERTED):
        if status not in (PROVEN, ASSERTED):
            raise InvalidInput(f"unknown certificate status {status!r}")
        self.name = name
        self.rule = rule
        self.cert = cert
        self.status = status
        self._terms = [Fraction(0)]
        self._prefix = [Fraction(0)]

    def __repr__(self):
        return f"NormSeq({self.name!r}, status={self.status})"

    def _extend(self, n: int) -> None:
        while len(self._terms) <= n:
            m = len(self._terms)
            s = Fraction(self.rule(m))
            if s < 0:
                raise InvalidInput(f"{self.name}: negative squared norm at n={m}")
            self._terms.append(s)
            self._prefix.append(self._prefix[-1] + s)

    def __call__(self, n: int) -> Fraction:
        if n < 1:
            raise InvalidInput("sequence index starts at 1")
        self._extend(n)
        return self._terms[n]

    def prefix(self, n: int) -> Fraction:
        """Sum of s_1 .. s_n."""
        if n <= 0:
            return Fraction(0)
        self._extend(n)
        return self._prefix[n]

    def partial(self, k: int, K: int) -> Fraction:
        """Sum of s_n over k < n <= K."""
        return self.prefix(K) - self.prefix(k)

    def verify_terms(self, upto: int) -> bool:
        """Check s_n >= 0 and the tail certificate's term bound for n <= upto."""
        self._extend(upto)
        if self.cert is None:
            return True
        return all(self.cert.dominates(n, self._terms[n]) for n in range(self.cert.start, upto + 1))

    @classmethod
    def zero(cls) -> "NormSeq":
        return cls("zero", lambda n: Fraction(0), GeometricTail(1, Fraction(0), Fraction(1, 2)), PROVEN)


def tail_enclosure(s: NormSeq, k: int, K: int) -> RationalInterval:
    """Enclosure of the sum of s_n over n > k, using exact terms up to K."""
    if K < k + 1:
        raise InvalidInput(f"depth K={K} must be at least k+1={k + 1}")
    if s.cert is None:
        raise InvalidInput(f"{s.name}: no tail certificate, cannot bound the tail beyond {K}")
    if s.cert.start > K + 1:
        raise InvalidInput(f"{s.name}: certificate starts at {s.cert.start}, beyond depth {K}+1")
    lo = s.partial(k, K)
    return RationalInterval(lo, lo + s.cert.bound(K))


# -- construction A ---------------------------------------------------------


def construction_A() -> tuple:
    """Return ``(x, y)`` with ||x_n||^2 = n^-4 and y_n = n x_n, so ||y_n||^2 = n^-2."""
    x = NormSeq("A.x", lambda n: Fraction(1, n ** 4), PowerTail(1, Fraction(1), 4), PROVEN)
    y = NormSeq("A.y", lambda n: Fraction(1, n ** 2), PowerTail(1, Fraction(1), 2), PROVEN)
    return x, y


@dataclass(frozen=True)
class RatioRecord:
    k: int
    K: int
    num: Fraction
    den: Fraction
    ratio: Fraction
    threshold: Fraction
    ok: bool


def _a_ratio(x: NormSeq, y: NormSeq, k: int, K: int) -> RatioRecord:
    num = y.partial(k, K)
    den = x.partial(k, K)
    ratio = num / den
    thr = Fraction((k + 1) ** 2)
    return RatioRecord(k, K, num, den, ratio, thr, ratio >= thr)


def certify_A_ratio(k: int, K: int) -> RatioRecord:
    """Exact partial ratio of ||F_k'y||^2 to ||F_k'x||^2 for construction A.

    Each term satisfies n^-2 >= (k+1)^2 n^-4 for n > k, so the inequality
    ratio >= (k+1)^2 on any partial range implies it for the full tails.
    """
    if K <= k:
        raise InvalidInput(f"need K > k, got k={k}, K={K}")
    if k < 0:
        raise InvalidInput("k must be nonnegative")
    x, y = construction_A()
    return _a_ratio(x, y, k, K)


# -- construction B ---------------------------------------------------------

_LM = ([Fraction(1)], [Fraction(1)])


def _lambda_mu_upto(n_max: int) -> None:
    lam, mu = _LM
    while len(lam) <= n_max:
        n = len(lam)
        if n % 2:
            ln = lam[-1] / 2
            mn = min(mu[-1] / 2, ln / n)
        else:
            mn = mu[-1] / 2
            ln = min(lam[-1] / 2, mn / n)
        lam.append(ln)
        mu.append(mn)


def lambda_mu_sequences(n_max: int) -> tuple:
    """Decreasing positive weights with mu_n/lambda_n >= n at even n and
    lambda_n/mu_n >= n at odd n.

    Returns lists ``(lam, mu)`` of length ``n_max + 1`` where ``lam[n]`` is
    lambda_n and index 0 holds the seed value 1.
    """
    if n_max < 1:
        raise InvalidInput("n_max must be at least 1")
    _lambda_mu_upto(n_max)
    return list(_LM[0][: n_max + 1]), list(_LM[1][: n_max + 1])


def _lam(n: int) -> Fraction:
    _lambda_mu_upto(n)
    return _LM[0][n]


def _mu(n: int) -> Fraction:
    _lambda_mu_upto(n)
    return _LM[1][n]


@dataclass(frozen=True)
class ConstructionB:
    x: NormSeq
    y: NormSeq
    lam: NormSeq
    mu: NormSeq


def construction_B() -> ConstructionB:
    """||x_n|| = mu_n / n and ||y_n|| = lambda_n / n.

    Both weights are at most 2^-n, so the squared norms are dominated by
    4^-n.  ``lam`` and ``mu`` are returned as plain weight sequences.
    """
    quarter = GeometricTail(1, Fraction(1), Fraction(1, 4))
    x = NormSeq("B.x", lambda n: (_mu(n) / n) ** 2, quarter, PROVEN)
    y = NormSeq("B.y", lambda n: (_lam(n) / n) ** 2, quarter, PROVEN)
    lam = NormSeq("lambda", _lam, status=PROVEN)
    mu = NormSeq("mu", _mu, status=PROVEN)
    return ConstructionB(x, y, lam, mu)


@dataclass(frozen=True)
class RangeMembership:
    """Verdict on whether x (given by ``s``) lies in the range of D_delta.

    ``verdict`` is ``"inside"``, ``"outside"`` or ``"undetermined"``.
    Outside: ``rule`` names an infinite index class on which every term
    s_n / delta_n^2 is >= 1, ``witnesses`` lists the verified instances.
    Inside: ``reference`` is ``("inverse-square", C)`` or
    ``("geometric-1/2", C)``, a convergent majorant of the terms with its
    exact constant.
    """

    seq: str
    weights: str
    verdict: str
    n_max: int
    rule: Optional[str] = None
    witnesses: tuple = ()
    reference: Optional[tuple] = None
    terms: tuple = ()
    status: str = ASSERTED


_RULES = (
    ("every n", lambda n: True),
    ("even n", lambda n: n % 2 == 0),
    ("odd n", lambda n: n % 2 == 1),
)

_REFERENCES = (
    ("inverse-square", lambda n: Fraction(1, n * n)),
    ("geometric-1/2", lambda n: Fraction(1, 2 ** n)),
)


def d_range_membership(s: NormSeq, delta: NormSeq, n_max: int = 100) -> RangeMembership:
    """Decide membership of x in ran D_delta, D_delta = sum delta_n (F_n - F_{n-1}).

    x is in the range iff the terms s_n / delta_n^2 are summable.  Terms are
    checked exactly for n <= n_max.  A parity class on which every term is
    at least 1 proves divergence; a majorant C * ref(n) whose constant is
    already attained in the first half of the window proves convergence.
    The all-n claims hold by construction only for built-in sequences;
    otherwise the result is marked ``asserted``.
    """
    if n_max < 2:
        raise InvalidInput("n_max must be at least 2")
    prev = None
    for n in range(1, n_max + 1):
        dn = delta(n)
        if dn <= 0:
            raise InvalidInput(f"{delta.name}: weight at n={n} is not positive")
        if prev is not None and dn > prev:
            raise InvalidInput(f"{delta.name}: weights increase at n={n}")
        prev = dn
    terms = tuple(s(n) / delta(n) ** 2 for n in range(1, n_max + 1))
    status = PROVEN if s.status == PROVEN and delta.status == PROVEN else ASSERTED
    base = dict(seq=s.name, weights=delta.name, n_max=n_max, status=status)

    for name, pick in _RULES:
        idx = [n for n in range(1, n_max + 1) if pick(n)]
        if all(terms[n - 1] >= 1 for n in idx):
            wit = tuple((n, terms[n - 1]) for n in idx)
            return RangeMembership(verdict="outside", rule=name, witnesses=wit, **base)

    for name, ref in _REFERENCES:
        scaled = [terms[n - 1] / ref(n) for n in range(1, n_max + 1)]
        C = max(scaled)
        if scaled.index(C) < n_max // 2:
            return RangeMembership(verdict="inside", reference=(name, C), terms=terms, **base)

    return RangeMembership(verdict="undetermined", terms=terms, **base)


# -- construction C ---------------------------------------------------------


def construction_C() -> tuple:
    """Return ``(a, b)``: a_n = 2^-e_n at odd n, b_n = 2^-e_n at even n, zero otherwise."""
    cert = TriangularTail()
    a = NormSeq("C.a", lambda n: Fraction(1, 2 ** _e(n)) if n % 2 else Fraction(0), cert, PROVEN)
    b = NormSeq("C.b", lambda n: Fraction(0) if n % 2 else Fraction(1, 2 ** _e(n)), cert, PROVEN)
    return a, b


@dataclass(frozen=True)
class DivergenceRecord:
    k: int
    num_lo: Fraction
    den_hi: Fraction
    lower_bound: object  # Fraction, or math.inf when den_hi == 0
    threshold: Fraction
    ok: bool


@dataclass(frozen=True)
class DivergenceCertificate:
    """Per-k certified lower bounds for a tail ratio that is unbounded in k."""

    construction: str
    records: tuple
    conclusion: bool
    inclusive: bool
    strict: bool
    depth: int
    status: str
    notes: tuple = field(default=())


def certify_divergence(num: NormSeq, den: NormSeq, g: Callable[[int], Fraction], ks, K: int, *,
                       inclusive: bool = False, strict: bool = True, construction: str = "custom") -> DivergenceCertificate:
    """Certify ratio(k) > g(k) (or >= if not ``strict``) for each k in ``ks``.

    ratio(k) is the tail of ``num`` over the tail of ``den``; tails start at
    n > k, or at n >= k when ``inclusive``.  The certified lower bound is
    the lower end of the numerator enclosure over the upper end of the
    denominator enclosure.
    """
    records = []
    for k in ks:
        start = k - 1 if inclusive else k
        if start < 0:
            raise InvalidInput(f"k={k} too small")
        lo = tail_enclosure(num, start, K).lo
        hi = tail_enclosure(den, start, K).hi
        thr = Fraction(g(k))
        if hi == 0:
            lower = math.inf if lo > 0 else Fraction(0)
        else:
            lower = lo / hi
        ok = lower > thr if strict else lower >= thr
        records.append(DivergenceRecord(k, lo, hi, lower, thr, ok))
    status = PROVEN if num.status == PROVEN and den.status == PROVEN else ASSERTED
    return DivergenceCertificate(construction, tuple(records), all(r.ok for r in records),
                                 inclusive, strict, K, status)


def certify_C(k_max: int = 25, K: Optional[int] = None) -> tuple:
    """Both halves for construction C: a/b > 2^k at odd k, b/a > 2^k at even k."""
    if k_max < 1:
        raise InvalidInput("k_max must be at least 1")
    K = k_max + 2 if K is None else K
    a, b = construction_C()
    g = lambda k: Fraction(2 ** k)
    odd = certify_divergence(a, b, g, range(1, k_max + 1, 2), K, inclusive=True, construction="C.a/b")
    even = certify_divergence(b, a, g, range(2, k_max + 1, 2), K, inclusive=True, construction="C.b/a")
    return odd, even


def certify_A(k_max: int = 50, K: int = 200) -> tuple:
    """Construction A ratio records for k = 1..k_max at depth K."""
    if not 1 <= k_max < K:
        raise InvalidInput(f"need 1 <= k_max < K, got k_max={k_max}, K={K}")
    x, y = construction_A()
    return tuple(_a_ratio(x, y, k, K) for k in range(1, k_max + 1))


# -- non-closedness ---------------------------------------------------------


@dataclass(frozen=True)
class NonClosedness:
    """Evidence that the orbit of x in construction A is not closed.

    ``exclusion`` shows y is not in the orbit (ratio at F_K at least
    (K+1)^2, and the same holds at every k).  The approximation part: the
    diagonal operator T_K = sum_{n<=K} n (F_n - F_{n-1}) has norm K and
    ||y - T_K x||^2 = sum_{n>K} n^-2 <= 1/K <= eps_sq.
    """

    eps_sq: Fraction
    K: int
    tail_bound: Fraction
    exclusion: RatioRecord
    increments_checked: int
    telescoping_checked: int
    ok: bool


def non_closedness_certificate(eps_sq, K: Optional[int] = None, *, exclusion_depth: int = 10,
                               telescoping_terms: int = 50, limit: Optional[int] = None) -> NonClosedness:
    eps_sq = Fraction(eps_sq)
    if eps_sq <= 0:
        raise InvalidInput("eps^2 must be positive")
    if K is None:
        K = math.ceil(1 / eps_sq)
    if K < 1:
        raise InvalidInput("K must be positive")
    limit = depth_limit() if limit is None else limit
    if K + exclusion_depth > limit:
        raise InvalidInput(f"eps too small: depth {K + exclusion_depth} exceeds limit {limit}")
    tail = Fraction(1, K)
    if tail > eps_sq:
        raise InvalidInput(f"eps too small for depth bound K={K}: 1/K = {tail} > {eps_sq}")
    x, y = construction_A()
    # T_K x has pieces n x_n: squared norms n^2 s_n(x) must equal s_n(y)
    inc_ok = all(n * n * x(n) == y(n) for n in range(1, K + 1))
    tel_ok = all(Fraction(1, n * n) <= Fraction(1, n - 1) - Fraction(1, n)
                 for n in range(K + 1, K + 1 + telescoping_terms))
    exclusion = _a_ratio(x, y, K, K + exclusion_depth)
    return NonClosedness(eps_sq, K, tail, exclusion, K, telescoping_terms,
                         inc_ok and tel_ok and exclusion.ok and tail <= eps_sq)
