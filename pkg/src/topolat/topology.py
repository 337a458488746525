"""Topologies on finite ground sets, represented as bitmask families.

A ground set of n points (1 <= n <= 9) is {0, ..., n-1}.  A subset is an
n-bit integer mask (bit i set means point i is a member).  A topology is
the strictly increasing tuple of its open masks; this canonical form makes
equality structural and hashing cheap.

The collection of all topologies on n points, ordered by inclusion of
open families, is a complete lattice: the meet of two topologies is the
intersection of their families, the join is the closure of their union
under pairwise unions and intersections.
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .errors import (
    BudgetExceeded,
    GroundMismatch,
    ImproperSubset,
    MissingEmptyOrFull,
    NotAnAtom,
    NotClosedUnderIntersection,
    NotClosedUnderUnion,
)

MAX_GROUND = 9
ENUM_CAP = 6          # largest n enumerated without the explicit budget flag
ENUM_HARD_CAP = 7     # absolute enumeration bound

#: Number of topologies on n labeled points, n = 0..7.
TOPOLOGY_COUNTS = (1, 1, 4, 29, 355, 6942, 209527, 9535241)


def _check_ground(n: int) -> None:
    if not 1 <= n <= MAX_GROUND:
        raise ValueError(f"ground size must be in 1..{MAX_GROUND}, got {n}")


class FinTopology:
    """A topology on n points as a sorted tuple of open masks.

    Instances are immutable and always canonical; construct them through
    :func:`validate_topology` or the builders in this module.
    """

    __slots__ = ("n", "opens", "famset")

    def __init__(self, n: int, opens: tuple[int, ...]):
        self.n = n
        self.opens = opens
        self.famset = frozenset(opens)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def contains(self, mask: int) -> bool:
        """Is the given subset open?"""
        return mask in self.famset

    def is_indiscrete(self) -> bool:
        return len(self.opens) == 2 or self.n == 0

    def is_discrete(self) -> bool:
        return len(self.opens) == 1 << self.n

    def is_atom(self) -> bool:
        """Atoms of the topology lattice are exactly the 3-open topologies."""
        return len(self.opens) == 3

    def minimal_neighborhoods(self) -> tuple[int, ...]:
        """For each point, the smallest open set containing it.

        The map determines the topology: a set is open iff it contains the
        minimal neighborhood of each of its points.
        """
        out = []
        for x in range(self.n):
            bit = 1 << x
            acc = self.full_mask
            for m in self.opens:
                if m & bit:
                    acc &= m
            out.append(acc)
        return tuple(out)

    def __le__(self, other: "FinTopology") -> bool:
        if self.n != other.n:
            raise GroundMismatch(f"ground sizes {self.n} != {other.n}")
        return self.famset <= other.famset

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FinTopology)
            and self.n == other.n
            and self.opens == other.opens
        )

    def __hash__(self) -> int:
        return hash((self.n, self.opens))

    def __repr__(self) -> str:
        return f"FinTopology(n={self.n}, opens={list(self.opens)})"

    def to_json_dict(self) -> dict:
        return {"n": self.n, "opens": list(self.opens)}

    @classmethod
    def from_json_dict(cls, d: dict) -> "FinTopology":
        return validate_topology(int(d["n"]), [int(m) for m in d["opens"]])


def validate_topology(n: int, family: Iterable[int]) -> FinTopology:
    """Canonicalize a family of masks into a topology, or raise.

    The family (duplicates ignored) must contain the empty and full masks
    and be closed under pairwise union and intersection; on a finite set
    pairwise closure is equivalent to closure under arbitrary unions.
    Errors name the first violating pair in sorted order.
    """
    _check_ground(n)
    full = (1 << n) - 1
    fam = sorted(set(family))
    if fam and (fam[0] < 0 or fam[-1] > full):
        bad = fam[0] if fam[0] < 0 else fam[-1]
        raise ValueError(f"mask {bad} does not fit in {n} bits")
    famset = set(fam)
    if 0 not in famset or full not in famset:
        raise MissingEmptyOrFull(
            f"family must contain the empty mask 0 and the full mask {full}"
        )
    for i, a in enumerate(fam):
        for b in fam[i + 1:]:
            if a | b not in famset:
                raise NotClosedUnderUnion(a, b)
            if a & b not in famset:
                raise NotClosedUnderIntersection(a, b)
    return FinTopology(n, tuple(fam))


def indiscrete(n: int) -> FinTopology:
    _check_ground(n)
    return FinTopology(n, (0, (1 << n) - 1))


def discrete(n: int) -> FinTopology:
    _check_ground(n)
    return FinTopology(n, tuple(range(1 << n)))


def meet(t1: FinTopology, t2: FinTopology) -> FinTopology:
    """Infimum in the topology lattice: intersection of the open families."""
    if t1.n != t2.n:
        raise GroundMismatch(f"ground sizes {t1.n} != {t2.n}")
    return FinTopology(t1.n, tuple(sorted(t1.famset & t2.famset)))


def join(t1: FinTopology, t2: FinTopology) -> FinTopology:
    """Supremum: smallest topology containing both open families.

    Computed by iterating pairwise union/intersection closure to a
    fixpoint, which on a finite ground set yields the generated topology.
    """
    if t1.n != t2.n:
        raise GroundMismatch(f"ground sizes {t1.n} != {t2.n}")
    fam = set(t1.famset | t2.famset)
    frontier = list(fam)
    while frontier:
        fresh = []
        current = list(fam)
        for a in frontier:
            for b in current:
                u = a | b
                if u not in fam:
                    fam.add(u)
                    fresh.append(u)
                v = a & b
                if v not in fam:
                    fam.add(v)
                    fresh.append(v)
        frontier = fresh
    return FinTopology(t1.n, tuple(sorted(fam)))


def complement_map(t: FinTopology) -> FinTopology:
    """Send every open to its complement.

    On a finite ground set this is an automorphism of the topology
    lattice (unions and intersections swap, which fixes closure), and it
    is an involution.
    """
    full = t.full_mask
    return FinTopology(t.n, tuple(sorted(full & ~m for m in t.opens)))


class Bijection:
    """A permutation of the n ground points.

    Unlike topologies, bijections are cheap at any size, so point sets
    larger than the topology-materialization bound are allowed (vector
    spaces reach 64 points).
    """

    __slots__ = ("n", "image")

    def __init__(self, image: Iterable[int]):
        img = tuple(image)
        n = len(img)
        if n < 1:
            raise ValueError("empty ground set")
        if sorted(img) != list(range(n)):
            raise ValueError(f"not a permutation of 0..{n - 1}: {img}")
        self.n = n
        self.image = img

    @classmethod
    def identity(cls, n: int) -> "Bijection":
        return cls(range(n))

    def inverse(self) -> "Bijection":
        inv = [0] * self.n
        for i, v in enumerate(self.image):
            inv[v] = i
        return Bijection(inv)

    def compose(self, other: "Bijection") -> "Bijection":
        """self after other: (self.compose(other))(x) = self(other(x))."""
        if self.n != other.n:
            raise GroundMismatch(f"ground sizes {self.n} != {other.n}")
        return Bijection(self.image[other.image[i]] for i in range(self.n))

    def apply_mask(self, mask: int) -> int:
        """Image of a subset mask under the point permutation."""
        out = 0
        img = self.image
        while mask:
            low = mask & -mask
            out |= 1 << img[low.bit_length() - 1]
            mask ^= low
        return out

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Bijection) and self.image == other.image

    def __hash__(self) -> int:
        return hash(self.image)

    def __repr__(self) -> str:
        return f"Bijection({list(self.image)})"


def pushforward(theta: Bijection, t: FinTopology) -> FinTopology:
    """Relabel every open through the bijection.

    For a bijection this realizes {V : preimage of V is open}; it is a
    lattice automorphism of the topology lattice.
    """
    if theta.n != t.n:
        raise GroundMismatch(f"ground sizes {theta.n} != {t.n}")
    return FinTopology(t.n, tuple(sorted(theta.apply_mask(m) for m in t.opens)))


def pullback(theta: Bijection, t: FinTopology) -> FinTopology:
    """Relabel every open through the inverse bijection."""
    return pushforward(theta.inverse(), t)


# -- atoms -------------------------------------------------------------------

def atom(mask: int, n: int) -> FinTopology:
    """The three-open topology {empty, D, full} for a proper nonempty D."""
    _check_ground(n)
    full = (1 << n) - 1
    if not 0 < mask < full:
        raise ImproperSubset(f"mask {mask} must be a proper nonempty subset of {full:#b}")
    return FinTopology(n, (0, mask, full))


def atoms_of_sigma(n: int) -> list[FinTopology]:
    """All 2**n - 2 atoms of the topology lattice, by ascending mask."""
    _check_ground(n)
    full = (1 << n) - 1
    return [FinTopology(n, (0, m, full)) for m in range(1, full)]


def is_atom(t: FinTopology) -> bool:
    return t.is_atom()


def sup_atoms(atoms: Iterable[FinTopology]) -> FinTopology:
    """Join of a list of atoms; the empty join is the indiscrete topology.

    The topology lattice is atomistic: the join of the atoms of all
    proper opens of T recovers T.
    """
    result: FinTopology | None = None
    for a in atoms:
        if not a.is_atom():
            raise NotAnAtom(f"{a!r} has {len(a.opens)} opens, expected 3")
        result = a if result is None else join(result, a)
    if result is None:
        raise NotAnAtom("empty atom list has no ground size; pass sup_atoms_on(n, [])")
    return result


def sup_atoms_on(n: int, atoms: Iterable[FinTopology]) -> FinTopology:
    """Like :func:`sup_atoms` but with an explicit ground size for the empty join."""
    atoms = list(atoms)
    if not atoms:
        return indiscrete(n)
    result = sup_atoms(atoms)
    if result.n != n:
        raise GroundMismatch(f"atoms live on {result.n} points, expected {n}")
    return result


# -- enumeration --------------------------------------------------------------

def _check_enum_budget(n: int, big_ok: bool) -> None:
    _check_ground(n)
    if n > ENUM_HARD_CAP:
        raise BudgetExceeded(f"enumeration is capped at n = {ENUM_HARD_CAP}")
    if n > ENUM_CAP and not big_ok:
        raise BudgetExceeded(
            f"n = {n} yields {TOPOLOGY_COUNTS[n]} topologies; pass big_ok=True"
        )


def minimal_neighborhood_maps(n: int, big_ok: bool = False) -> Iterator[tuple[int, ...]]:
    """Enumerate all minimal-neighborhood maps on n points, each exactly once.

    A topology is determined by the map U sending each point to its
    minimal open neighborhood; the valid maps are exactly those with
    x in U(x) and (y in U(x) implies U(y) subset of U(x)).  Backtracks
    over assignments U(0), U(1), ... with two prunings: a point y already
    placed inside an assigned U(x) has its candidates narrowed to subsets
    of U(x), and each candidate is checked against earlier assignments.
    Deterministic order: descending submask order per point.
    """
    _check_enum_budget(n, big_ok)
    full = (1 << n) - 1
    U = [0] * n
    allowed = [full] * n

    def rec(i: int) -> Iterator[tuple[int, ...]]:
        if i == n:
            yield tuple(U)
            return
        bit = 1 << i
        below = bit - 1
        above = full & ~((bit << 1) - 1)
        base = allowed[i] & ~bit
        sub = base
        while True:
            m = sub | bit
            ok = True
            mm = m & below
            while mm:
                j = (mm & -mm).bit_length() - 1
                if U[j] & ~m:
                    ok = False
                    break
                mm &= mm - 1
            if ok:
                U[i] = m
                changed = []
                mm = m & above
                while mm:
                    j = (mm & -mm).bit_length() - 1
                    a = allowed[j]
                    if a & ~m:
                        changed.append((j, a))
                        allowed[j] = a & m
                    mm &= mm - 1
                yield from rec(i + 1)
                for j, a in changed:
                    allowed[j] = a
            if sub == 0:
                break
            sub = (sub - 1) & base
    return rec(0)


def opens_from_neighborhoods(n: int, nbhd: tuple[int, ...]) -> tuple[int, ...]:
    """All unions of minimal neighborhoods, i.e. the open sets."""
    fam = {0}
    for m in nbhd:
        fam |= {m | s for s in fam}
    return tuple(sorted(fam))


def enumerate_topologies(n: int, big_ok: bool = False) -> Iterator[FinTopology]:
    """Stream every topology on n points exactly once, deterministically.

    n = 7 (9.5M topologies) must be opted into with big_ok; larger n is
    refused outright.
    """
    for nb in minimal_neighborhood_maps(n, big_ok):
        yield FinTopology(n, opens_from_neighborhoods(n, nb))


def count_topologies(n: int, big_ok: bool = False) -> int:
    """Count topologies on n points without materializing open families.

    Same backtracking as :func:`minimal_neighborhood_maps`, counting
    leaves only; constant memory.
    """
    _check_enum_budget(n, big_ok)
    full = (1 << n) - 1
    U = [0] * n
    allowed = [full] * n

    def rec(i: int) -> int:
        if i == n:
            return 1
        total = 0
        bit = 1 << i
        below = bit - 1
        above = full & ~((bit << 1) - 1)
        base = allowed[i] & ~bit
        sub = base
        while True:
            m = sub | bit
            ok = True
            mm = m & below
            while mm:
                j = (mm & -mm).bit_length() - 1
                if U[j] & ~m:
                    ok = False
                    break
                mm &= mm - 1
            if ok:
                U[i] = m
                changed = []
                mm = m & above
                while mm:
                    j = (mm & -mm).bit_length() - 1
                    a = allowed[j]
                    if a & ~m:
                        changed.append((j, a))
                        allowed[j] = a & m
                    mm &= mm - 1
                total += rec(i + 1)
                for j, a in changed:
                    allowed[j] = a
            if sub == 0:
                break
            sub = (sub - 1) & base
        return total

    return rec(0)
