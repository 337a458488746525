"""Recovering a point bijection from a topology-lattice isomorphism.

Every order isomorphism between the full topology lattices of two n-point
sets is induced by a unique point bijection, possibly composed with the
open-complement automorphism.  Given the isomorphism as an explicit index
table over the enumerated lattices, the reconstruction reads the bijection
off the singleton atoms and verifies it on every element, trying the
complement composition when the plain reading fails.
"""

from __future__ import annotations

from typing import Callable

from .errors import NoConsistentBijection, NotALatticeIso
from .lattice import (
    LatticeIsoTable,
    classify_atoms_intrinsic,
    sigma_lattice,
    type_of,
)
from .topology import (
    Bijection,
    FinTopology,
    complement_map,
    pushforward,
)


class ReconstructionResult:
    """The bijection behind a lattice isomorphism, plus the complement flag.

    With flag False the isomorphism equals the pushforward by theta; with
    flag True it equals complement-after-pushforward.  The flag is False
    whenever the plain matching succeeds.
    """

    __slots__ = ("theta", "uses_complement")

    def __init__(self, theta: Bijection, uses_complement: bool):
        self.theta = theta
        self.uses_complement = uses_complement

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ReconstructionResult)
            and self.theta == other.theta
            and self.uses_complement == other.uses_complement
        )

    def __hash__(self) -> int:
        return hash((self.theta, self.uses_complement))

    def __repr__(self) -> str:
        return f"ReconstructionResult(theta={list(self.theta.image)}, uses_complement={self.uses_complement})"

    def to_json_dict(self) -> dict:
        return {"theta": list(self.theta.image), "uses_complement": self.uses_complement}


def build_sigma_table(theta: Bijection, use_complement: bool, n: int) -> LatticeIsoTable:
    """Index table of (complement^flag after pushforward-by-theta) on the full lattice."""
    lat = sigma_lattice(n)
    mapping = []
    for t in lat.elements:
        img = pushforward(theta, t)
        if use_complement:
            img = complement_map(img)
        mapping.append(lat.index[img])
    return LatticeIsoTable(lat, lat, mapping, check_order=False)


def table_from_oracle(oracle: Callable[[FinTopology], FinTopology], n: int,
                      check_order: bool = True) -> LatticeIsoTable:
    """Adapter: materialize a query-by-topology isomorphism as an index table."""
    lat = sigma_lattice(n)
    mapping = [lat.index[oracle(t)] for t in lat.elements]
    return LatticeIsoTable(lat, lat, mapping, check_order=check_order)


def reconstruct_bijection(table: LatticeIsoTable) -> ReconstructionResult:
    """Recover the unique (bijection, complement flag) behind a table.

    Both sides must be full enumerated topology lattices on the same
    number of points, n >= 2.  Procedure: locate the atoms; for n = 2
    read the bijection off the two atoms directly; otherwise run the
    intrinsic atom classification on both sides as a structural check,
    then try to define theta from singleton-atom images and verify the
    pushforward against the table on every element, retrying with the
    complement composition.  Uniqueness holds by construction: theta is
    pinned by the singleton atoms and the flag by which pass verifies.
    """
    src, tgt = table.source, table.target
    n = _ground_size(src)
    if n != _ground_size(tgt):
        raise NotALatticeIso("source and target ground sizes differ")
    if n < 2:
        raise NotALatticeIso("reconstruction needs at least 2 points")

    atoms_src = [i for i in range(src.size) if src.elements[i].is_atom()]
    full = (1 << n) - 1

    if n == 2:
        image = [0, 0]
        for i in atoms_src:
            d = src.elements[i].opens[1]
            d_img = tgt.elements[table.map[i]].opens[1]
            image[d.bit_length() - 1] = d_img.bit_length() - 1
        theta = Bijection(image)
        _verify(table, theta, False)
        return ReconstructionResult(theta, False)

    # structural sanity: both atom sets must carry the two-clique pattern,
    # and the table must map cliques to cliques
    prof_src = {i: _profile(src.elements[i], n) for i in atoms_src}
    l_src, c1_src, _ = classify_atoms_intrinsic(
        atoms_src, lambda a, b: type_of(prof_src[a], prof_src[b])
    )
    atoms_tgt = [j for j in range(tgt.size) if tgt.elements[j].is_atom()]
    prof_tgt = {j: _profile(tgt.elements[j], n) for j in atoms_tgt}
    l_tgt, c1_tgt, c2_tgt = classify_atoms_intrinsic(
        atoms_tgt, lambda a, b: type_of(prof_tgt[a], prof_tgt[b])
    )
    img_c1 = {table.map[i] for i in c1_src}
    if img_c1 not in (c1_tgt, c2_tgt) or {table.map[i] for i in l_src} != l_tgt:
        raise NoConsistentBijection("table does not respect the atom classification")

    for use_complement in (False, True):
        theta = _theta_from_singletons(table, atoms_src, use_complement, n, full)
        if theta is None:
            continue
        try:
            _verify(table, theta, use_complement)
        except NoConsistentBijection:
            continue
        return ReconstructionResult(theta, use_complement)
    raise NoConsistentBijection("no bijection matches the table, with or without complement")


def _ground_size(lat) -> int:
    t = lat.elements[0]
    if not isinstance(t, FinTopology):
        raise NotALatticeIso("lattice elements are not topologies")
    return t.n


def _profile(t: FinTopology, n: int):
    from .lattice import AtomProfile

    return AtomProfile(t.opens[1], n)


def _theta_from_singletons(table, atoms_src, use_complement, n, full):
    image = [-1] * n
    for i in atoms_src:
        d = table.source.elements[i].opens[1]
        if d.bit_count() != 1:
            continue
        d_img = table.target.elements[table.map[i]].opens[1]
        if use_complement:
            d_img = full & ~d_img
        if d_img.bit_count() != 1:
            return None
        image[d.bit_length() - 1] = d_img.bit_length() - 1
    if sorted(image) != list(range(n)):
        return None
    return Bijection(image)


def _verify(table, theta: Bijection, use_complement: bool) -> None:
    src, tgt = table.source, table.target
    for i, t in enumerate(src.elements):
        img = pushforward(theta, t)
        if use_complement:
            img = complement_map(img)
        if tgt.elements[table.map[i]] != img:
            raise NoConsistentBijection(f"mismatch at element {i}")
