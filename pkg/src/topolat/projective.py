"""Reconstruction of semilinear maps from subspace-lattice isomorphisms.

An order isomorphism between the subspace lattices of two spaces of
dimension at least 3 is induced by a semilinear map, unique up to a
scalar.  The reconstruction coordinatizes: it reads the images of the
basis lines, normalizes representatives through the images of the
diagonal lines, and recovers the scalar twist from the pencil of lines
through the first two basis vectors.

Also implements the composite check that a lattice isomorphism between
the vector-topology lattices preserving the discrete topology induces,
through the subspace/topology connection, a dimension-preserving
subspace-lattice isomorphism that the coordinatization can consume.
"""

from __future__ import annotations

from typing import Sequence

from .errors import (
    DimensionTooSmall,
    GradeViolation,
    HausdorffNotPreserved,
    NotALatticeIso,
    NotInducible,
)
from .finfield import (
    FieldAut,
    SemilinearMap,
    Subspace,
    VectorSpace,
    enumerate_subspaces,
    span,
)
from .galois import VectorTopology, enumerate_vector_topologies, frakS, frakT


class SubspaceIsoTable:
    """An order isomorphism between two enumerated subspace lattices.

    ``map[i]`` is the target index of source subspace i, over the
    canonical graded enumerations.  Construction validates bijectivity,
    order preservation both ways, and gradedness (order isomorphisms of
    these lattices preserve height, so a dimension change is a hard
    error, not a property to discover).
    """

    __slots__ = ("source_space", "target_space", "source", "target", "map")

    def __init__(self, source_space: VectorSpace, target_space: VectorSpace,
                 mapping: Sequence[int], check: bool = True):
        self.source_space = source_space
        self.target_space = target_space
        self.source = enumerate_subspaces(source_space)
        self.target = enumerate_subspaces(target_space)
        self.map = tuple(mapping)
        if len(self.source) != len(self.target) or len(self.map) != len(self.source):
            raise NotALatticeIso("subspace lattices have different sizes")
        if sorted(self.map) != list(range(len(self.map))):
            raise NotALatticeIso("table is not a bijection of indices")
        if check:
            for i, s in enumerate(self.source):
                if self.target[self.map[i]].dim != s.dim:
                    raise GradeViolation(s.dim, self.target[self.map[i]].dim)
            for i, s1 in enumerate(self.source):
                t1 = self.target[self.map[i]]
                for j, s2 in enumerate(self.source):
                    if s2.contains_subspace(s1) != self.target[self.map[j]].contains_subspace(t1):
                        raise NotALatticeIso(f"order not preserved at pair ({i}, {j})")

    def apply(self, s: Subspace) -> Subspace:
        return self.target[self.map[self.source.index(s)]]

    def to_json_dict(self) -> dict:
        offsets: list[int] = []
        seen = -1
        for i, s in enumerate(self.source):
            if s.dim != seen:
                offsets.append(i)
                seen = s.dim
        return {
            "graded": True,
            "size": len(self.map),
            "offsets": offsets,
            "map": list(self.map),
            "source_space": _space_json(self.source_space),
            "target_space": _space_json(self.target_space),
        }

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SubspaceIsoTable)
            and self.source_space == other.source_space
            and self.target_space == other.target_space
            and self.map == other.map
        )

    def __repr__(self) -> str:
        return f"SubspaceIsoTable(size={len(self.map)})"


def _space_json(space: VectorSpace) -> dict:
    f = space.field
    return {"p": f.p, "k": f.k, "dim": space.dim}


def induced_subspace_iso(phi: SemilinearMap) -> SubspaceIsoTable:
    """The subspace table of a semilinear map: S -> span of basis images."""
    sp = phi.space
    subs = enumerate_subspaces(sp)
    index = {s: i for i, s in enumerate(subs)}
    mapping = [index[phi.apply_subspace(s)] for s in subs]
    return SubspaceIsoTable(sp, sp, mapping)


def ftpg_reconstruct(table: SubspaceIsoTable) -> tuple[FieldAut, SemilinearMap]:
    """Coordinatize a subspace-lattice isomorphism into a semilinear map.

    Requires source dimension at least 3 (below that the lattice does not
    determine the twist).  Fix the standard basis e1..ed.  The image of
    line <ei> is a line Li; pick f1 as the nonzero vector of L1 with the
    smallest point index (this pins the scalar freedom and makes the
    round trip exact), then for i >= 2 pick fi in Li as the unique vector
    with f1 + fi inside the image of <e1 + ei>.  The twist sends alpha to
    the unique beta with f1 + beta*f2 inside the image of <e1 + alpha*e2>.
    The twist table is verified to be a field automorphism and the
    resulting map to induce the input table on every subspace; failures
    raise NotInducible, impossible for tables that genuinely come from
    the subspace lattice of a supported space.
    """
    src, tgt = table.source_space, table.target_space
    d = src.dim
    if d < 3:
        raise DimensionTooSmall(f"reconstruction needs dimension >= 3, got {d}")
    if src.field != tgt.field or tgt.dim != d:
        raise NotInducible("supported reconstructions have identical field and dimension")
    f = src.field
    src_index = {s: i for i, s in enumerate(table.source)}

    def image_of_line(vec) -> Subspace:
        line = span(src, [vec])
        out = table.target[table.map[src_index[line]]]
        if out.dim != 1:
            raise NotInducible("image of a line is not a line")
        return out

    basis = src.basis()
    lines = [image_of_line(e) for e in basis]
    f1 = min(
        (v for v in lines[0].vectors() if any(v)),
        key=tgt.index_of,
    )
    reps = [f1]
    for i in range(1, d):
        diag = image_of_line(src.add(basis[0], basis[i]))
        candidates = [
            v for v in lines[i].vectors()
            if any(v) and diag.contains(tgt.add(f1, v))
        ]
        if len(candidates) != 1:
            raise NotInducible(
                f"normalization of basis line {i} found {len(candidates)} candidates"
            )
        reps.append(candidates[0])

    psi_table = [0] * f.q
    psi_table[1] = 1
    for alpha in range(2, f.q):
        pencil = image_of_line(src.add(basis[0], src.scalar(alpha, basis[1])))
        betas = [
            b for b in range(1, f.q)
            if pencil.contains(tgt.add(f1, tgt.scalar(b, reps[1])))
        ]
        if len(betas) != 1:
            raise NotInducible(f"twist of {alpha} is not pinned (found {betas})")
        psi_table[alpha] = betas[0]
    if sorted(psi_table) != list(range(f.q)):
        raise NotInducible("twist table is not a bijection")
    for a in range(f.q):
        for b in range(f.q):
            if psi_table[f.add(a, b)] != f.add(psi_table[a], psi_table[b]):
                raise NotInducible("twist table is not additive")
            if psi_table[f.mul(a, b)] != f.mul(psi_table[a], psi_table[b]):
                raise NotInducible("twist table is not multiplicative")
    psi = next(
        (a for a in f.automorphisms() if all(a.apply(x) == psi_table[x] for x in range(f.q))),
        None,
    )
    if psi is None:
        raise NotInducible("twist is an isomorphism but not an automorphism power")

    matrix = tuple(tuple(reps[c][r] for c in range(d)) for r in range(d))
    phi = SemilinearMap(tgt, psi, matrix)
    for i, s in enumerate(table.source):
        img = span(tgt, [phi.apply(r) for r in s.rows])
        if img != table.target[table.map[i]]:
            raise NotInducible(f"reconstructed map disagrees with the table at subspace {i}")
    return psi, phi


# -- the vector-topology level ------------------------------------------------

class TauIsoTable:
    """An order isomorphism between the vector-topology lattices of two
    spaces, indexed over the saturation-image enumerations."""

    __slots__ = ("source_space", "target_space", "source", "target", "map")

    def __init__(self, source_space: VectorSpace, target_space: VectorSpace,
                 mapping: Sequence[int], check: bool = True):
        self.source_space = source_space
        self.target_space = target_space
        self.source = enumerate_vector_topologies(source_space, "image")
        self.target = enumerate_vector_topologies(target_space, "image")
        self.map = tuple(mapping)
        if len(self.source) != len(self.target) or len(self.map) != len(self.source):
            raise NotALatticeIso("vector-topology lattices have different sizes")
        if sorted(self.map) != list(range(len(self.map))):
            raise NotALatticeIso("table is not a bijection of indices")
        if check:
            for i, t1 in enumerate(self.source):
                for j, t2 in enumerate(self.source):
                    if t1.leq(t2) != self.target[self.map[i]].leq(self.target[self.map[j]]):
                        raise NotALatticeIso(f"order not preserved at pair ({i}, {j})")

    def inverse_map(self) -> tuple[int, ...]:
        inv = [0] * len(self.map)
        for i, v in enumerate(self.map):
            inv[v] = i
        return tuple(inv)

    def to_json_dict(self) -> dict:
        return {
            "kind": "tau",
            "size": len(self.map),
            "map": list(self.map),
            "source_space": _space_json(self.source_space),
            "target_space": _space_json(self.target_space),
        }

    def __repr__(self) -> str:
        return f"TauIsoTable(size={len(self.map)})"


def tau_iso_from_semilinear(phi: SemilinearMap) -> TauIsoTable:
    """The action of a semilinear bijection on vector topologies.

    The pushforward is computed on minimal-neighborhood systems (the
    image topology's neighborhood of phi(x) is the image of the
    neighborhood of x), then located structurally in the target list.
    """
    sp = phi.space
    taus = enumerate_vector_topologies(sp, "image")
    index = {t.nbhd: i for i, t in enumerate(taus)}
    perm = phi.point_permutation()
    bit_table = [1 << perm[i] for i in range(sp.size)]
    mapping = []
    for t in taus:
        out = [0] * sp.size
        for x, m in enumerate(t.nbhd):
            acc = 0
            while m:
                low = m & -m
                acc |= bit_table[low.bit_length() - 1]
                m ^= low
            out[perm[x]] = acc
        j = index.get(tuple(out))
        if j is None:
            raise NotALatticeIso("map does not preserve vector topologies")
        mapping.append(j)
    return TauIsoTable(sp, sp, mapping)


def theorem_c_pipeline(table: TauIsoTable, hausdorff_check: bool = True) -> dict:
    """From a vector-topology isomorphism to a field isomorphism.

    Requires source dimension at least 3.  When ``hausdorff_check`` is
    set, first verifies the map sends the discrete topology to the
    discrete topology (on finite spaces the Hausdorff vector topologies
    are exactly the discrete one).  Then builds F = core o map o
    saturation and G = core o inverse map o saturation, checks that both
    composites shrink (G(F(S)) inside S and F(G(S')) inside S'), walks
    the dimensions upward verifying grade by grade that F is a bijection
    onto the same grade with G inverse to it, and hands the resulting
    subspace table to the coordinatization.  Reports the recovered twist
    and the dimension equality.
    """
    src_sp, tgt_sp = table.source_space, table.target_space
    if src_sp.dim < 3:
        raise DimensionTooSmall(f"pipeline needs dimension >= 3, got {src_sp.dim}")
    report: dict = {
        "source_space": _space_json(src_sp),
        "target_space": _space_json(tgt_sp),
    }

    src_taus, tgt_taus = table.source, table.target
    src_tau_index = {t.nbhd: i for i, t in enumerate(src_taus)}
    tgt_tau_index = {t.nbhd: i for i, t in enumerate(tgt_taus)}
    inv_map = table.inverse_map()

    src_discrete = next(i for i, t in enumerate(src_taus) if t.is_discrete())
    tgt_discrete = next(i for i, t in enumerate(tgt_taus) if t.is_discrete())
    hausdorff_ok = table.map[src_discrete] == tgt_discrete
    report["hausdorff_preserved"] = hausdorff_ok
    if hausdorff_check and not hausdorff_ok:
        raise HausdorffNotPreserved("discrete topology is not mapped to discrete")

    def fwd(s: Subspace) -> Subspace:
        i = src_tau_index[frakT(s).nbhd]
        return frakS(tgt_sp, tgt_taus[table.map[i]])

    def bwd(s: Subspace) -> Subspace:
        i = tgt_tau_index[frakT(s).nbhd]
        return frakS(src_sp, src_taus[inv_map[i]])

    src_subs = enumerate_subspaces(src_sp)
    tgt_subs = enumerate_subspaces(tgt_sp)
    f_of = [fwd(s) for s in src_subs]
    g_of = [bwd(s) for s in tgt_subs]

    report["composites_shrink"] = all(
        s.contains_subspace(bwd(fs)) for s, fs in zip(src_subs, f_of)
    ) and all(
        s.contains_subspace(fwd(gs)) for s, gs in zip(tgt_subs, g_of)
    )

    # dimension induction: each grade maps bijectively onto the same grade
    tgt_index = {s: i for i, s in enumerate(tgt_subs)}
    src_index = {s: i for i, s in enumerate(src_subs)}
    grades = []
    for d in range(src_sp.dim + 1):
        level = [i for i, s in enumerate(src_subs) if s.dim == d]
        for i in level:
            if f_of[i].dim != d:
                raise GradeViolation(d, f_of[i].dim, f"subspace index {i}")
        images = {tgt_index[f_of[i]] for i in level}
        tgt_level = {i for i, s in enumerate(tgt_subs) if s.dim == d}
        bijective = images == tgt_level and len(images) == len(level)
        inverse_on_grade = all(
            g_of[tgt_index[f_of[i]]] == src_subs[i] for i in level
        ) and all(
            f_of[src_index[g_of[j]]] == tgt_subs[j] for j in tgt_level
        )
        grades.append({"dim": d, "count": len(level),
                       "bijective": bijective, "mutually_inverse": inverse_on_grade})
        if not (bijective and inverse_on_grade):
            raise GradeViolation(d, d, "grade is not a mutually inverse bijection")
    report["grades"] = grades

    # the subspace map must intertwine saturation with the topology map
    report["saturation_compatible"] = all(
        tgt_taus[table.map[src_tau_index[frakT(s).nbhd]]].nbhd == frakT(fs).nbhd
        for s, fs in zip(src_subs, f_of)
    )

    sub_table = SubspaceIsoTable(
        src_sp, tgt_sp, [tgt_index[fs] for fs in f_of]
    )
    psi, phi = ftpg_reconstruct(sub_table)
    report["psi_frobenius_exponent"] = psi.e
    report["dimensions"] = [src_sp.dim, tgt_sp.dim]
    report["dimensions_equal"] = src_sp.dim == tgt_sp.dim
    report["fields_isomorphic"] = src_sp.field == tgt_sp.field
    induced = induced_subspace_iso(phi)
    report["reconstruction_induces_pipeline_table"] = induced.map == sub_table.map
    report["pass"] = all(v for v in report.values() if isinstance(v, bool)) and all(
        g["bijective"] and g["mutually_inverse"] for g in grades
    )
    return report
