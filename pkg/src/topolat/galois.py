"""The antitone Galois connection between subspaces and vector topologies.

A vector topology on a finite space over a discrete field makes addition
and scalar multiplication continuous.  Two maps connect them to the
subspace lattice:

* ``frakS(T)``: the intersection of all opens containing the zero vector
  (always a subspace when T is a vector topology);
* ``frakT(S)``: the topology whose opens are the S-saturated sets, i.e.
  unions of cosets of S.

Internally every vector topology is carried by its minimal-neighborhood
system -- the tuple N with N(x) = smallest open set containing point x --
which determines the topology, stays small even when the open family
would not (a coset topology on a 64-point space has 2**64 opens), and
supports order tests, pushforwards and both maps uniformly.  The explicit
open family is materialized on demand for ground sets of at most 9
points.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import BudgetExceeded, GroundMismatch, NotASubspace, SizeExceeded
from .finfield import (
    Subspace,
    VectorSpace,
    enumerate_subspaces,
    span,
    zero_subspace,
)
from .topology import (
    FinTopology,
    MAX_GROUND,
    complement_map,
    enumerate_topologies,
    opens_from_neighborhoods,
)


class VectorTopology:
    """A vector topology on a finite space, held as minimal neighborhoods.

    ``nbhd[i]`` is the point-index mask of the smallest open set
    containing point i.  The explicit :class:`FinTopology` is available
    through :meth:`fin_topology` when the ground set is small enough to
    materialize the family.
    """

    __slots__ = ("space", "nbhd", "_explicit")

    def __init__(self, space: VectorSpace, nbhd: tuple[int, ...],
                 explicit: FinTopology | None = None):
        self.space = space
        self.nbhd = nbhd
        self._explicit = explicit

    @classmethod
    def from_fin_topology(cls, space: VectorSpace, t: FinTopology,
                          check: bool = True) -> "VectorTopology":
        if t.n != space.size:
            raise GroundMismatch(f"topology on {t.n} points, space has {space.size}")
        if check and not is_vector_topology(t, space):
            raise ValueError("topology is not a vector topology on this space")
        return cls(space, t.minimal_neighborhoods(), t)

    def fin_topology(self) -> FinTopology:
        """The explicit open family; refuses ground sets above 9 points."""
        if self._explicit is None:
            if self.space.size > MAX_GROUND:
                raise SizeExceeded(
                    f"cannot materialize opens on {self.space.size} points"
                )
            self._explicit = FinTopology(
                self.space.size,
                opens_from_neighborhoods(self.space.size, self.nbhd),
            )
        return self._explicit

    def is_discrete(self) -> bool:
        return all(m.bit_count() == 1 for m in self.nbhd)

    def leq(self, other: "VectorTopology") -> bool:
        """Coarser-or-equal: every open here is open there.

        Holds iff the other topology's minimal neighborhoods are
        pointwise contained in ours.
        """
        if self.space != other.space:
            raise GroundMismatch("vector topologies on different spaces")
        return all(o & ~s == 0 for s, o in zip(self.nbhd, other.nbhd))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, VectorTopology)
            and self.space == other.space
            and self.nbhd == other.nbhd
        )

    def __hash__(self) -> int:
        return hash((self.space, self.nbhd))

    def __repr__(self) -> str:
        return f"VectorTopology(space={self.space!r}, nbhd={list(self.nbhd)})"

    def to_json_dict(self) -> dict:
        f = self.space.field
        return {
            "space": {"p": f.p, "k": f.k, "dim": self.space.dim},
            "topology": self.fin_topology().to_json_dict(),
        }


def t_max(space: VectorSpace) -> VectorTopology:
    """The discrete topology: the finest vector topology on a finite space
    over a discrete field, and the only Hausdorff one."""
    return VectorTopology(space, tuple(1 << i for i in range(space.size)))


def frakT(s: Subspace) -> VectorTopology:
    """Topology of the S-saturated sets; minimal neighborhoods are cosets."""
    sp = s.space
    base = s.point_mask()
    nbhd = [0] * sp.size
    seen = 0
    for i in range(sp.size):
        if seen >> i & 1:
            continue
        v = sp.vec_of(i)
        coset = 0
        m = base
        while m:
            low = m & -m
            j = low.bit_length() - 1
            coset |= 1 << sp.index_of(sp.add(v, sp.vec_of(j)))
            m ^= low
        mm = coset
        while mm:
            low = mm & -mm
            nbhd[low.bit_length() - 1] = coset
            mm ^= low
        seen |= coset
    return VectorTopology(sp, tuple(nbhd))


def frakS(space: VectorSpace, t: "FinTopology | VectorTopology") -> Subspace:
    """Intersection of all opens containing the zero vector, as a subspace.

    Defined on arbitrary topologies over the space's points; raises
    NotASubspace when the intersection is not linearly closed, which
    certifies the input was not a vector topology.  (The converse fails:
    some non-vector topologies still have a subspace here.)
    """
    if isinstance(t, VectorTopology):
        mask = t.nbhd[0]
    else:
        if t.n != space.size:
            raise GroundMismatch(f"topology on {t.n} points, space has {space.size}")
        mask = (1 << space.size) - 1
        for m in t.opens:
            if m & 1:
                mask &= m
    members = []
    mm = mask
    while mm:
        low = mm & -mm
        members.append(space.vec_of(low.bit_length() - 1))
        mm ^= low
    s = span(space, members)
    if s.point_mask() != mask:
        raise NotASubspace(
            f"the core of the topology at zero (mask {mask:#x}) is not a subspace"
        )
    return s


def is_vector_topology(t: FinTopology, space: VectorSpace) -> bool:
    """Direct continuity check for addition and scalar multiplication.

    Iterates over all (open, point pair) combinations.  For each open W
    and x + y in W it suffices to test N(x) + N(y) inside W where N is
    the minimal-neighborhood map, since any open witnesses U, V contain
    N(x), N(y); similarly alpha * N(x) for the scalar operator.
    """
    if t.n != space.size:
        raise GroundMismatch(f"topology on {t.n} points, space has {space.size}")
    n = space.size
    add = [[space.index_of(space.add(space.vec_of(i), space.vec_of(j)))
            for j in range(n)] for i in range(n)]
    q = space.field.q
    scal = [[space.index_of(space.scalar(a, space.vec_of(i)))
             for i in range(n)] for a in range(q)]
    nb = t.minimal_neighborhoods()

    bits_cache: dict[int, tuple[int, ...]] = {}

    def bits(m: int) -> tuple[int, ...]:
        got = bits_cache.get(m)
        if got is None:
            got = tuple(i for i in range(n) if m >> i & 1)
            bits_cache[m] = got
        return got

    sum_cache: dict[tuple[int, int], int] = {}

    def sum_mask(mx: int, my: int) -> int:
        got = sum_cache.get((mx, my))
        if got is None:
            got = 0
            for a in bits(mx):
                row = add[a]
                for b in bits(my):
                    got |= 1 << row[b]
            sum_cache[(mx, my)] = got
        return got

    for w in t.opens:
        for x in range(n):
            rowx = add[x]
            for y in range(n):
                if w >> rowx[y] & 1 and sum_mask(nb[x], nb[y]) & ~w:
                    return False
        for alpha in range(q):
            srow = scal[alpha]
            for x in range(n):
                if w >> srow[x] & 1:
                    img = 0
                    for b in bits(nb[x]):
                        img |= 1 << srow[b]
                    if img & ~w:
                        return False
    return True


CENSUS_CAP = 5  # full topology enumeration feeds the census filter


def enumerate_vector_topologies(space: VectorSpace, mode: str = "image") -> list[VectorTopology]:
    """All vector topologies on the space, in a deterministic order.

    ``image`` mode returns the saturation topology of every subspace,
    graded like the subspace enumeration.  ``census`` mode independently
    filters every topology on the point set through the continuity
    checker, feasible only for at most 5 points; where both run the two
    lists are equal as sets.
    """
    if mode == "image":
        return [frakT(s) for s in enumerate_subspaces(space)]
    if mode == "census":
        if space.size > CENSUS_CAP:
            raise BudgetExceeded(
                f"census over all topologies on {space.size} points is not feasible"
            )
        out = []
        for t in enumerate_topologies(space.size):
            if is_vector_topology(t, space):
                out.append(VectorTopology(space, t.minimal_neighborhoods(), t))
        return out
    raise ValueError(f"unknown mode {mode!r}")


def quotient_pushforward(s: Subspace, t: VectorTopology) -> FinTopology:
    """Pushforward along the coset map onto X/S.

    Cosets are labeled 0.. in order of their smallest point index.  A
    label set is open iff its point preimage is open, decided through the
    minimal neighborhoods.
    """
    sp = t.space
    if s.space != sp:
        raise GroundMismatch("subspace and topology live on different spaces")
    coset_of = [-1] * sp.size
    coset_masks: list[int] = []
    sat = frakT(s)
    for i in range(sp.size):
        if coset_of[i] == -1:
            label = len(coset_masks)
            coset_masks.append(sat.nbhd[i])
            m = sat.nbhd[i]
            while m:
                low = m & -m
                coset_of[low.bit_length() - 1] = label
                m ^= low
    c = len(coset_masks)
    if c > 12:
        raise SizeExceeded(f"quotient has {c} cosets; pushforward capped at 12")
    opens = []
    for v in range(1 << c):
        pre = 0
        for lbl in range(c):
            if v >> lbl & 1:
                pre |= coset_masks[lbl]
        if _is_open(t, pre):
            opens.append(v)
    return FinTopology(c, tuple(opens))


def _is_open(t: VectorTopology, mask: int) -> bool:
    m = mask
    while m:
        low = m & -m
        if t.nbhd[low.bit_length() - 1] & ~mask:
            return False
        m ^= low
    return True


def complement_fixes(t: VectorTopology) -> bool:
    """Does the open-complement map fix this topology?  True on every
    vector topology over a finite discrete field (cosets tile the space)."""
    ft = t.fin_topology()
    return complement_map(ft) == ft


def galois_report(space: VectorSpace) -> dict:
    """Exhaustive check of the connection on one space.

    Covers: saturation-then-core is the identity on subspaces; every
    vector topology refines into its double image with equality here
    (finite discrete case); the core is zero exactly for the discrete
    topology; the adjunction S <= frakS(T) iff T <= frakT(S); both maps
    reverse inclusion; complements fix every vector topology; and the
    meet of two vector topologies inside the full topology lattice equals
    their meet through subspace sum (the lattices share meets here).
    """
    subs = enumerate_subspaces(space)
    taus = [frakT(s) for s in subs]
    report: dict = {"space": _space_key(space), "n_subspaces": len(subs)}

    report["core_of_saturation_is_identity"] = all(
        frakS(space, frakT(s)) == s for s in subs
    )
    report["refines_double_image"] = all(
        t.leq(frakT(frakS(space, t))) for t in taus
    )
    report["double_image_equality"] = all(
        frakT(frakS(space, t)) == t for t in taus
    )
    zero = zero_subspace(space)
    report["zero_core_iff_discrete"] = all(
        (frakS(space, t) == zero) == t.is_discrete() for t in taus
    )
    adj = True
    for s in subs:
        ts = frakT(s)
        for t in taus:
            left = frakS(space, t).contains_subspace(s)   # s <= frakS(t)
            right = t.leq(ts)                             # t <= frakT(s)
            if left != right:
                adj = False
    report["adjunction"] = adj
    antitone = True
    for s1 in subs:
        for s2 in subs:
            if s2.contains_subspace(s1) and not frakT(s2).leq(frakT(s1)):
                antitone = False
    for t1 in taus:
        for t2 in taus:
            if t1.leq(t2) and not frakS(space, t1).contains_subspace(frakS(space, t2)):
                antitone = False
    report["maps_reverse_inclusion"] = antitone
    if space.size <= MAX_GROUND:
        from .finfield import subspace_sum
        from .topology import meet as sigma_meet

        report["complement_fixes_all"] = all(complement_fixes(t) for t in taus)
        meets_agree = True
        for i, s1 in enumerate(subs):
            for j in range(i, len(subs)):
                lattice_meet = sigma_meet(
                    taus[i].fin_topology(), taus[j].fin_topology()
                )
                tau_meet = frakT(subspace_sum(s1, subs[j])).fin_topology()
                if lattice_meet != tau_meet:
                    meets_agree = False
        report["sigma_meet_equals_tau_meet"] = meets_agree
    report["pass"] = all(
        v for k, v in report.items() if isinstance(v, bool)
    )
    return report


def _space_key(space: VectorSpace) -> dict:
    f = space.field
    return {"p": f.p, "k": f.k, "dim": space.dim}
