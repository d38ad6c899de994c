"""Finite commutative subspace lattices in the diagonal model.

A lattice on ``dimension`` coordinates is a family of coordinate subsets,
each standing for the diagonal projection onto the span of those basis
vectors.  Inclusion of subsets is the projection order, intersection and
union are meet and join.  Every finite-dimensional CSL is unitarily
equivalent to one of these, with atoms possibly spanning several
coordinates.

Two countable nests (:class:`SymbolicNest`) cover the chain shapes needed
for the infinite-dimensional counterexamples.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from .errors import InvalidInput

Member = frozenset


def member_key(s: Iterable[int]) -> tuple:
    """Canonical sort key: by size, then lexicographically."""
    t = tuple(sorted(s))
    return (len(t), t)


def fmt_member(s: Iterable[int]) -> str:
    return "{" + ",".join(str(i) for i in sorted(s)) + "}"


class NotClosedError(InvalidInput):
    """Raised in strict mode when a family is not already a lattice."""

    def __init__(self, added, pair):
        self.added = added
        self.pair = pair
        msg = "family is not a lattice; missing " + ", ".join(fmt_member(a) for a in added)
        if pair is not None:
            msg += f" (e.g. meet/join of {fmt_member(pair[0])} and {fmt_member(pair[1])})"
        super().__init__(msg)


@dataclass(frozen=True)
class Lattice:
    dimension: int
    members: tuple
    _set: frozenset = field(default=frozenset(), init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.dimension, int) or self.dimension < 1:
            raise InvalidInput(f"dimension must be a positive integer, got {self.dimension!r}")
        ms = {frozenset(m) for m in self.members}
        for m in ms:
            _check_range(m, self.dimension)
        object.__setattr__(self, "members", tuple(sorted(ms, key=member_key)))
        object.__setattr__(self, "_set", frozenset(ms))
        if frozenset() not in ms or self.full not in ms:
            raise InvalidInput("lattice must contain the empty set and the full set")
        for a, b in itertools.combinations(self.members, 2):
            if a & b not in ms or a | b not in ms:
                raise NotClosedError(_closure(ms, self.dimension) - ms, (a, b))

    @property
    def full(self) -> frozenset:
        return frozenset(range(self.dimension))

    @property
    def bottom(self) -> frozenset:
        return frozenset()

    def __contains__(self, s) -> bool:
        return frozenset(s) in self._set

    def __len__(self) -> int:
        return len(self.members)

    def complement(self, s: Iterable[int]) -> frozenset:
        return self.full - frozenset(s)

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "members": [sorted(m) for m in self.members],
        }

    def __repr__(self) -> str:
        body = ", ".join(fmt_member(m) for m in self.members)
        return f"Lattice(d={self.dimension}, [{body}])"


def _check_range(s: Iterable[int], dimension: int) -> None:
    for i in s:
        if not isinstance(i, int) or isinstance(i, bool) or not 0 <= i < dimension:
            raise InvalidInput(f"coordinate {i!r} out of range for dimension {dimension}")


def _closure(family: set, dimension: int) -> set:
    closed = set(family) | {frozenset(), frozenset(range(dimension))}
    frontier = list(closed)
    while frontier:
        new = set()
        for a in frontier:
            for b in closed:
                for c in (a & b, a | b):
                    if c not in closed:
                        new.add(c)
        closed |= new
        frontier = list(new)
    return closed


def complete_lattice(subsets: Iterable[Iterable[int]], dimension: int, *, strict: bool = False) -> Lattice:
    """Smallest lattice containing ``subsets``, the empty set and the full set.

    With ``strict=True`` a family that needs any additions is rejected with a
    :class:`NotClosedError` listing the missing members.
    """
    if not isinstance(dimension, int) or dimension < 1:
        raise InvalidInput(f"dimension must be a positive integer, got {dimension!r}")
    family = set()
    for s in subsets:
        s = frozenset(s)
        _check_range(s, dimension)
        family.add(s)
    closed = _closure(family, dimension)
    if strict and closed != family:
        added = sorted(closed - family, key=member_key)
        pair = None
        for a, b in itertools.combinations(sorted(family, key=member_key), 2):
            if a & b not in family or a | b not in family:
                pair = (a, b)
                break
        raise NotClosedError(added, pair)
    return Lattice(dimension, tuple(closed))


def added_members(subsets: Iterable[Iterable[int]], dimension: int) -> list:
    """Members that :func:`complete_lattice` adds to ``subsets``, canonically ordered."""
    family = {frozenset(s) for s in subsets}
    return sorted(complete_lattice(family, dimension)._set - family, key=member_key)


@dataclass(frozen=True)
class Atom:
    """An equivalence class of coordinates with identical lattice membership."""

    coordinates: frozenset

    def __iter__(self):
        return iter(sorted(self.coordinates))

    def __len__(self):
        return len(self.coordinates)

    def __repr__(self):
        return f"Atom({fmt_member(self.coordinates)})"


def atoms(L: Lattice) -> list:
    classes: dict = {}
    for i in range(L.dimension):
        signature = tuple(i in m for m in L.members)
        classes.setdefault(signature, set()).add(i)
    return sorted((Atom(frozenset(c)) for c in classes.values()), key=lambda a: min(a.coordinates))


def atom_of(L: Lattice, i: int) -> Atom:
    for a in atoms(L):
        if i in a.coordinates:
            return a
    raise InvalidInput(f"coordinate {i!r} out of range for dimension {L.dimension}")


def e_hull(L: Lattice, s: Iterable[int]) -> frozenset:
    """Smallest member of ``L`` containing every coordinate in ``s``."""
    s = frozenset(s)
    _check_range(s, L.dimension)
    hull = L.full
    for m in L.members:
        if s <= m:
            hull &= m
    return hull


def p_minus(L: Lattice, P: Iterable[int]) -> frozenset:
    """Join of all members that do not contain ``P``."""
    P = frozenset(P)
    if P not in L:
        raise InvalidInput(f"{fmt_member(P)} is not a member of the lattice")
    if not P:
        raise InvalidInput("p_minus is undefined for the zero projection")
    out: frozenset = frozenset()
    for F in L.members:
        if not P <= F:
            out |= F
    return out


def is_nest(L: Lattice) -> bool:
    # canonical order sorts by size, so a chain is increasing along it
    return all(a <= b for a, b in zip(L.members, L.members[1:]))


def independent_atoms(L: Lattice, atom_list: Sequence) -> list:
    """Drop every atom lying inside the hull of another atom in the list.

    Containment ``A <= E(B)`` is a partial order on atoms, so what remains
    are the maximal ones; they generate the same member as the full list.
    """
    items = [a if isinstance(a, Atom) else Atom(frozenset(a)) for a in atom_list]
    hulls = [e_hull(L, a.coordinates) for a in items]
    kept = []
    for i, a in enumerate(items):
        if any(j != i and items[j] != a and a.coordinates <= hulls[j] for j in range(len(items))):
            continue
        if a not in kept:
            kept.append(a)
    return kept


@dataclass(frozen=True)
class HyperatomicResult:
    hyperatomic: bool
    generators: Optional[dict] = None
    witness: Optional[object] = None
    rule: Optional[str] = None


def is_hyperatomic(L) -> HyperatomicResult:
    """Decide whether every nonzero member is generated by finitely many atoms.

    Finite lattices always are; the result then carries an independent
    generating atom list for each nonzero member.  Symbolic nests are
    decided from their order type.
    """
    if isinstance(L, SymbolicNest):
        return L.hyperatomic()
    all_atoms = atoms(L)
    generators = {}
    for P in L.members:
        if not P:
            continue
        inside = [a for a in all_atoms if a.coordinates <= P]
        gens = independent_atoms(L, inside)
        if e_hull(L, set().union(*(a.coordinates for a in gens))) != P:
            # cannot happen for a valid finite lattice
            return HyperatomicResult(False, witness=P)
        generators[P] = tuple(gens)
    return HyperatomicResult(True, generators=generators)


def predecessor_table(L: Lattice) -> dict:
    """Immediate predecessor of each nonzero member of a nest."""
    if not is_nest(L):
        raise InvalidInput("predecessor table requires a nest")
    return {P: p_minus(L, P) for P in L.members if P}


@dataclass(frozen=True)
class SupportPattern:
    dimension: int
    allowed: frozenset

    def __contains__(self, ij) -> bool:
        return tuple(ij) in self.allowed

    def columns(self, i: int) -> list:
        return [j for j in range(self.dimension) if (i, j) in self.allowed]

    def respects(self, matrix) -> bool:
        """True when every nonzero entry of ``matrix`` is allowed."""
        return all(
            matrix[i][j] == 0 or (i, j) in self.allowed
            for i in range(self.dimension)
            for j in range(self.dimension)
        )


def support_pattern(L: Lattice) -> SupportPattern:
    allowed = set()
    for j in range(L.dimension):
        for i in e_hull(L, {j}):
            allowed.add((i, j))
    return SupportPattern(L.dimension, frozenset(allowed))


def enumerate_lattices(dimension: int) -> Iterator[Lattice]:
    """Every sublattice of the power set of ``dimension`` coordinates that
    contains the empty and the full set."""
    full = (1 << dimension) - 1
    mids = list(range(1, full))
    for mask in range(1 << len(mids)):
        fam = {0, full} | {mids[i] for i in range(len(mids)) if mask >> i & 1}
        if all((a & b) in fam and (a | b) in fam for a in fam for b in fam):
            yield Lattice(dimension, tuple(
                frozenset(i for i in range(dimension) if m >> i & 1) for m in fam
            ))


def chain_lattice(dimension: int) -> Lattice:
    """The maximal nest {}, {0}, {0,1}, ... on ``dimension`` coordinates."""
    return Lattice(dimension, tuple(frozenset(range(k)) for k in range(dimension + 1)))


# -- countable nests -------------------------------------------------------


class NestKind(enum.Enum):
    OMEGA = "omega"
    OMEGA_STAR = "omega-star"


@dataclass(frozen=True, order=True)
class NestElement:
    """An element of a :class:`SymbolicNest`.

    ``index`` is ``None`` for the limit element: the top ``I`` of the omega
    nest or the bottom ``0`` of the omega-star nest.
    """

    kind: NestKind = field(compare=False)
    index: Optional[int]

    @property
    def label(self) -> str:
        if self.kind is NestKind.OMEGA:
            return "I" if self.index is None else f"F_{self.index}"
        return "0" if self.index is None else f"T_{self.index}"

    def covers(self, atom: int) -> bool:
        """Whether the one-dimensional atom number ``atom`` (>= 1) lies in this element."""
        if self.kind is NestKind.OMEGA:
            return self.index is None or atom <= self.index
        return self.index is not None and atom >= self.index

    def is_zero(self) -> bool:
        if self.kind is NestKind.OMEGA:
            return self.index == 0
        return self.index is None

    def __repr__(self):
        return self.label


@dataclass(frozen=True)
class SymbolicNest:
    """A countable nest of diagonal projections on l2(1, 2, ...).

    ``OMEGA``: 0 = F_0 < F_1 < F_2 < ... < I with F_n spanning atoms 1..n
    and I the join of all F_n.  ``OMEGA_STAR``: I = T_1 > T_2 > ... > 0 with
    T_k spanning atoms k, k+1, ....
    """

    kind: NestKind

    @classmethod
    def omega(cls) -> "SymbolicNest":
        return cls(NestKind.OMEGA)

    @classmethod
    def omega_star(cls) -> "SymbolicNest":
        return cls(NestKind.OMEGA_STAR)

    def element(self, index: Optional[int]) -> NestElement:
        if index is not None and (index < 0 or (self.kind is NestKind.OMEGA_STAR and index < 1)):
            raise InvalidInput(f"no element with index {index} in {self.kind.value} nest")
        return NestElement(self.kind, index)

    @property
    def top(self) -> NestElement:
        return self.element(None if self.kind is NestKind.OMEGA else 1)

    @property
    def bottom(self) -> NestElement:
        return self.element(0 if self.kind is NestKind.OMEGA else None)

    def leq(self, a: NestElement, b: NestElement) -> bool:
        if self.kind is NestKind.OMEGA:
            return b.index is None or (a.index is not None and a.index <= b.index)
        return a.index is None or (b.index is not None and b.index <= a.index)

    def e_hull(self, atom_indices: Iterable[int]) -> NestElement:
        """Smallest element containing the given finitely many atoms."""
        js = list(atom_indices)
        if any(j < 1 for j in js):
            raise InvalidInput("atoms are numbered from 1")
        if not js:
            return self.bottom
        if self.kind is NestKind.OMEGA:
            return self.element(max(js))
        return self.element(min(js))

    def immediate_predecessor(self, e: NestElement) -> Optional[NestElement]:
        """Largest element strictly below ``e``, or ``None`` if there is none."""
        if e.is_zero():
            return None
        if self.kind is NestKind.OMEGA:
            # below I every F_n has the strictly larger F_{n+1} below I
            return None if e.index is None else self.element(e.index - 1)
        return self.element(e.index + 1)

    def generating_atoms(self, e: NestElement) -> Optional[tuple]:
        """A finite atom list generating ``e``, or ``None`` when no finite list does."""
        if e.is_zero():
            return ()
        if e.index is None:
            return None
        return (e.index,)

    def chain(self, m: int) -> list:
        """First ``m`` nonzero elements along the chain starting next to 0."""
        if self.kind is NestKind.OMEGA:
            return [self.element(n) for n in range(1, m + 1)]
        return [self.element(k) for k in range(1, m + 1)]

    def ascending_chain_witness(self, m: int = 5) -> Optional[list]:
        """Initial terms of a strictly increasing chain that never stabilises."""
        if self.kind is NestKind.OMEGA:
            return [self.element(n) for n in range(1, m + 1)]
        return None

    def hyperatomic(self) -> HyperatomicResult:
        if self.kind is NestKind.OMEGA:
            return HyperatomicResult(False, witness=self.top, rule="I = join of F_n is not E(A) for any finite atom set")
        return HyperatomicResult(True, rule="T_k = E(atom k) for every k >= 1")
