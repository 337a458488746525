"""Generic finite-lattice machinery.

Lattices are stored as an indexed element list plus the order relation
encoded as bitmask rows: up[i] has bit j set iff element i <= element j.
With this encoding order validation is a few hundred thousand machine-word
operations even for the 6942-element lattice of topologies on 5 points.

Also implements the combinatorial skeleton used by the reconstruction
algorithms: the type of a pair of atoms (the number of atoms below their
join), the intrinsic split of atoms into two cliques plus a residue, and
an automorphism search anchored on atom images.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .errors import (
    ClassificationFailed,
    EqualAtoms,
    MeetJoinMissing,
    NotALatticeIso,
    NotAPartialOrder,
    SizeExceeded,
)
from .topology import FinTopology, enumerate_topologies

PAIR_VALIDATION_CAP = 10 ** 6   # all-pairs meet/join validation bound
MEMO_CAP = 2048                 # full meet/join tables kept below this size
AUT_CAP = 512                   # automorphism search bound

#: Possible type values by atom class pair: N = singleton atoms,
#: M = co-singleton atoms, L = the rest.
TYPE_TABLE = {
    ("N", "N"): frozenset({3}),
    ("N", "M"): frozenset({2}),
    ("M", "N"): frozenset({2}),
    ("M", "M"): frozenset({3}),
    ("N", "L"): frozenset({2, 3}),
    ("L", "N"): frozenset({2, 3}),
    ("M", "L"): frozenset({2, 3}),
    ("L", "M"): frozenset({2, 3}),
    ("L", "L"): frozenset({2, 3, 4}),
}


class FiniteLattice:
    """A validated finite lattice over an indexed list of elements.

    ``up[i]``/``down[i]`` are bitmasks of the elements above/below i
    (inclusive).  Meet and join are memoized in full tables for small
    lattices and computed on demand otherwise.
    """

    __slots__ = ("elements", "index", "up", "down", "size",
                 "_join_table", "_meet_table", "bottom", "top")

    def __init__(self, elements: Sequence, up: list[int], validate_pairs: bool,
                 down: list[int] | None = None):
        self.elements = list(elements)
        self.size = n = len(self.elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        if len(self.index) != n:
            raise ValueError("duplicate elements")
        self.up = up
        if down is None:
            down = [0] * n
            for i in range(n):
                m = up[i]
                while m:
                    low = m & -m
                    down[low.bit_length() - 1] |= 1 << i
                    m ^= low
        self.down = down
        full = (1 << n) - 1
        bottoms = [i for i in range(n) if up[i] == full]
        tops = [i for i in range(n) if down[i] == full]
        if len(bottoms) != 1 or len(tops) != 1:
            raise MeetJoinMissing("join" if not tops else "meet", -1, -1)
        self.bottom = bottoms[0]
        self.top = tops[0]
        self._join_table: list | None = None
        self._meet_table: list | None = None
        if validate_pairs:
            self._build_tables()

    def _build_tables(self) -> None:
        n = self.size
        up, down = self.up, self.down
        joins: list[list[int]] = []
        meets: list[list[int]] = []
        for i in range(n):
            jrow = [0] * n
            mrow = [0] * n
            for j in range(n):
                uppers = up[i] & up[j]
                k = self._pick_extremum(uppers, up, "join", i, j)
                jrow[j] = k
                lowers = down[i] & down[j]
                k = self._pick_extremum(lowers, down, "meet", i, j)
                mrow[j] = k
            joins.append(jrow)
            meets.append(mrow)
        self._join_table = joins
        self._meet_table = meets

    @staticmethod
    def _pick_extremum(candidates: int, rows: list[int], kind: str, i: int, j: int) -> int:
        # the least element of an up-set (or greatest of a down-set) is the
        # unique member whose row covers every candidate
        m = candidates
        while m:
            low = m & -m
            k = low.bit_length() - 1
            if candidates & ~rows[k] == 0:
                return k
            m ^= low
        raise MeetJoinMissing(kind, i, j)

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def join(self, i: int, j: int) -> int:
        if self._join_table is not None:
            return self._join_table[i][j]
        return self._pick_extremum(self.up[i] & self.up[j], self.up, "join", i, j)

    def meet(self, i: int, j: int) -> int:
        if self._meet_table is not None:
            return self._meet_table[i][j]
        return self._pick_extremum(self.down[i] & self.down[j], self.down, "meet", i, j)

    def join_all(self, indices: Iterable[int]) -> int:
        acc = self.bottom
        for i in indices:
            acc = self.join(acc, i)
        return acc

    def atoms(self) -> list[int]:
        """Elements covering the bottom: exactly one strict predecessor."""
        bot_bit = 1 << self.bottom
        return [
            i for i in range(self.size)
            if i != self.bottom and self.down[i] == bot_bit | (1 << i)
        ]

    def atoms_below_masks(self) -> list[int]:
        """For each element, the bitmask (over atom positions) of atoms below it."""
        atoms = self.atoms()
        out = [0] * self.size
        for pos, a in enumerate(atoms):
            m = self.up[a]
            while m:
                low = m & -m
                out[low.bit_length() - 1] |= 1 << pos
                m ^= low
        return out

    def is_atomistic(self) -> bool:
        """Does every element equal the join of the atoms below it?"""
        atoms = self.atoms()
        below = self.atoms_below_masks()
        for e in range(self.size):
            sel = below[e]
            members = []
            m = sel
            while m:
                low = m & -m
                members.append(atoms[low.bit_length() - 1])
                m ^= low
            if self.join_all(members) != e:
                return False
        return True

    def __len__(self) -> int:
        return self.size


def build_lattice(elements: Sequence, leq: Callable[[object, object], bool]) -> FiniteLattice:
    """Validate a relation into a lattice.

    Checks reflexivity, antisymmetry and transitivity always; checks that
    every pair has a meet and a join exhaustively when the pair count is
    at most 10**6, deferring to on-demand checks above that.
    """
    elements = list(elements)
    n = len(elements)
    up = []
    for i, a in enumerate(elements):
        row = 0
        for j, b in enumerate(elements):
            if leq(a, b):
                row |= 1 << j
        up.append(row)
    return lattice_from_up_rows(elements, up)


def lattice_from_up_rows(elements: Sequence, up: list[int]) -> FiniteLattice:
    """Build a lattice from precomputed order rows (fast path)."""
    n = len(elements)
    for i in range(n):
        if not up[i] >> i & 1:
            raise NotAPartialOrder(f"relation is not reflexive at element {i}")
    for i in range(n):
        m = up[i] & ~(1 << i)
        while m:
            low = m & -m
            j = low.bit_length() - 1
            if up[j] >> i & 1:
                raise NotAPartialOrder(f"antisymmetry fails on elements {i}, {j}")
            if up[j] & ~up[i]:
                raise NotAPartialOrder(f"transitivity fails through elements {i}, {j}")
            m ^= low
    return FiniteLattice(elements, up, validate_pairs=n * n <= PAIR_VALIDATION_CAP)


@lru_cache(maxsize=None)
def sigma_lattice(n: int) -> FiniteLattice:
    """The lattice of all topologies on n points, in enumeration order.

    Inclusion is computed through an inverted index: col[m] packs, as one
    big integer, which topologies have the mask m open.  Then the set of
    topologies above T is the AND of col[m] over the opens of T, and the
    set below T is the complement of the OR of col[m] over the non-opens
    of T.  This costs about (number of topologies) * 2**n word operations
    rather than a quadratic pass, which is what makes n = 5 (6942
    elements, 48M pairs) practical.  The relation is subset inclusion by
    construction, so for n = 5 the axioms are not re-validated; smaller
    lattices go through the fully validating path.
    """
    if n > 5:
        raise SizeExceeded("the full topology lattice is materialized only for n <= 5")
    tops = list(enumerate_topologies(n))
    size = len(tops)
    col = [0] * (1 << n)
    for j, t in enumerate(tops):
        bit = 1 << j
        for m in t.opens:
            col[m] |= bit
    full_col = (1 << size) - 1
    up = []
    down = []
    for t in tops:
        fam = t.famset
        above = full_col
        below = 0
        for m in range(1 << n):
            if m in fam:
                above &= col[m]
            else:
                below |= col[m]
        up.append(above)
        down.append(full_col & ~below)
    if size * size <= PAIR_VALIDATION_CAP:
        lat = lattice_from_up_rows(tops, up)
    else:
        lat = FiniteLattice(tops, up, validate_pairs=False, down=down)
    return lat


class LatticeIsoTable:
    """An explicit order isomorphism between two finite lattices.

    ``map[i]`` is the target index of source element i.  Construction
    checks bijectivity, and order preservation in both directions unless
    ``check_order=False`` (used when a caller re-verifies element-wise).
    """

    __slots__ = ("source", "target", "map")

    def __init__(self, source: FiniteLattice, target: FiniteLattice,
                 mapping: Sequence[int], check_order: bool = True):
        mapping = tuple(mapping)
        if source.size != target.size or len(mapping) != source.size:
            raise NotALatticeIso(
                f"sizes differ: {source.size}, {target.size}, table {len(mapping)}"
            )
        if sorted(mapping) != list(range(source.size)):
            raise NotALatticeIso("table is not a bijection of indices")
        if check_order:
            for i in range(source.size):
                img = 0
                m = source.up[i]
                while m:
                    low = m & -m
                    img |= 1 << mapping[low.bit_length() - 1]
                    m ^= low
                if img != target.up[mapping[i]]:
                    raise NotALatticeIso(f"order not preserved at element {i}")
        self.source = source
        self.target = target
        self.map = mapping

    def inverse(self) -> "LatticeIsoTable":
        inv = [0] * len(self.map)
        for i, v in enumerate(self.map):
            inv[v] = i
        return LatticeIsoTable(self.target, self.source, inv, check_order=False)

    def to_json_dict(self) -> dict:
        return {"size": len(self.map), "map": list(self.map)}

    def __repr__(self) -> str:
        return f"LatticeIsoTable(size={len(self.map)})"


# -- atom profiles and the type function -------------------------------------

class AtomProfile:
    """An atom of the topology lattice on n points, with its class.

    Class N holds the singleton-subset atoms, M the co-singletons, L the
    rest; for n = 3 the classes N and M exhaust all atoms.
    """

    __slots__ = ("n", "mask", "klass")

    def __init__(self, mask: int, n: int):
        full = (1 << n) - 1
        if not 0 < mask < full:
            raise ValueError(f"mask {mask} is not a proper nonempty subset")
        size = mask.bit_count()
        if size == 1:
            self.klass = "N"
        elif size == n - 1:
            self.klass = "M"
        else:
            self.klass = "L"
        self.n = n
        self.mask = mask

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, AtomProfile)
            and self.n == other.n
            and self.mask == other.mask
        )

    def __hash__(self) -> int:
        return hash((self.n, self.mask))

    def __repr__(self) -> str:
        return f"AtomProfile(mask={self.mask:#b}, n={self.n}, klass={self.klass})"


def atom_profiles(n: int) -> list[AtomProfile]:
    return [AtomProfile(m, n) for m in range(1, (1 << n) - 1)]


def type_of(p: AtomProfile, q: AtomProfile) -> int:
    """Number of atoms below the join of two distinct atoms.

    The join of the atoms of D_p and D_q has opens {empty, intersection,
    D_p, D_q, union, full}; the atoms below it correspond to the distinct
    proper nonempty masks in that family, so the count is O(1).
    """
    if p.n != q.n:
        raise EqualAtoms(f"atoms on different ground sets: {p.n} != {q.n}")
    if p.mask == q.mask:
        raise EqualAtoms(f"type is undefined on equal atoms (mask {p.mask:#b})")
    full = (1 << p.n) - 1
    candidates = {p.mask & q.mask, p.mask, q.mask, p.mask | q.mask}
    return sum(1 for m in candidates if 0 < m < full)


def type_of_generic(p: AtomProfile, q: AtomProfile) -> int:
    """Oracle for :func:`type_of`: count atoms weaker than the actual join.

    Builds the join topology and scans all 2**n - 2 atoms; O(2**n) per
    pair, used as a cross-check for n <= 5.
    """
    from .topology import atom, join

    if p.mask == q.mask or p.n != q.n:
        raise EqualAtoms("type is undefined on equal atoms")
    j = join(atom(p.mask, p.n), atom(q.mask, q.n))
    full = (1 << p.n) - 1
    return sum(1 for m in range(1, full) if m in j.famset)


def classify_atoms_intrinsic(
    atoms: Sequence, type_fn: Callable[[object, object], int]
) -> tuple[set, set, set]:
    """Split atoms into (L-set, clique1, clique2) using only type data.

    The L-set collects atoms having some partner of type 4.  The rest
    must fall into exactly two cliques under the relation type == 3, with
    every cross pair of type 2; the two cliques are returned unlabeled
    (which one holds the singleton atoms is not determined by the lattice
    -- composing with the complement automorphism swaps them).  Ordering
    of the returned pair is fixed by smallest member position.
    """
    items = list(atoms)
    k = len(items)
    t = [[0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            t[i][j] = t[j][i] = type_fn(items[i], items[j])
    l_set = {i for i in range(k) if any(t[i][j] == 4 for j in range(k) if j != i)}
    rest = [i for i in range(k) if i not in l_set]
    if not rest:
        raise ClassificationFailed("no atoms outside the type-4 residue")
    # connected components under the type-3 relation
    comp: dict[int, int] = {}
    comps: list[list[int]] = []
    for start in rest:
        if start in comp:
            continue
        cid = len(comps)
        stack, members = [start], []
        comp[start] = cid
        while stack:
            v = stack.pop()
            members.append(v)
            for w in rest:
                if w not in comp and t[v][w] == 3:
                    comp[w] = cid
                    stack.append(w)
        comps.append(sorted(members))
    if len(comps) != 2:
        raise ClassificationFailed(f"expected two type-3 components, found {len(comps)}")
    c1, c2 = comps
    for grp in (c1, c2):
        for a in grp:
            for b in grp:
                if a != b and t[a][b] != 3:
                    raise ClassificationFailed(f"component not a clique at pair ({a}, {b})")
    for a in c1:
        for b in c2:
            if t[a][b] != 2:
                raise ClassificationFailed(f"cross pair ({a}, {b}) has type {t[a][b]}, not 2")
    if min(c2) < min(c1):
        c1, c2 = c2, c1
    return (
        {items[i] for i in l_set},
        {items[i] for i in c1},
        {items[i] for i in c2},
    )


# -- automorphism enumeration -------------------------------------------------

def enumerate_automorphisms(lat: FiniteLattice) -> list[LatticeIsoTable]:
    """All order automorphisms, in a deterministic order.

    For atomistic lattices the search assigns atom images only, pruned by
    preservation of the pair type (atoms below the join), then forces the
    rest of the map through joins of atoms and verifies order
    preservation.  Non-atomistic lattices fall back to element-by-element
    backtracking with local-invariant pruning; intended for small inputs.
    """
    if lat.size > AUT_CAP:
        raise SizeExceeded(f"automorphism search capped at {AUT_CAP} elements")
    results = (
        _automorphisms_atomistic(lat) if lat.is_atomistic()
        else _automorphisms_generic(lat)
    )
    results.sort()
    return [LatticeIsoTable(lat, lat, perm, check_order=False) for perm in results]


def _automorphisms_atomistic(lat: FiniteLattice) -> list[tuple[int, ...]]:
    atoms = lat.atoms()
    k = len(atoms)
    below = lat.atoms_below_masks()
    elem_of_mask = {below[e]: e for e in range(lat.size)}
    # pair types over atom positions
    t = [[0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            jj = lat.join(atoms[i], atoms[j])
            t[i][j] = t[j][i] = below[jj].bit_count()
    profile = [tuple(sorted(t[i])) for i in range(k)]

    found: list[tuple[int, ...]] = []
    img = [-1] * k
    used = [False] * k

    def rec(i: int) -> None:
        if i == k:
            _extend_and_check(lat, atoms, below, elem_of_mask, img, found)
            return
        for b in range(k):
            if used[b] or profile[b] != profile[i]:
                continue
            if any(t[i][j] != t[b][img[j]] for j in range(i)):
                continue
            img[i] = b
            used[b] = True
            rec(i + 1)
            used[b] = False
        img[i] = -1

    rec(0)
    return found


def _extend_and_check(lat, atoms, below, elem_of_mask, img, found) -> None:
    perm = [-1] * lat.size
    for e in range(lat.size):
        sel = below[e]
        tgt = 0
        m = sel
        while m:
            low = m & -m
            tgt |= 1 << img[low.bit_length() - 1]
            m ^= low
        e2 = elem_of_mask.get(tgt)
        if e2 is None:
            return
        perm[e] = e2
    if sorted(perm) != list(range(lat.size)):
        return
    for i in range(lat.size):
        m = lat.up[i]
        tgt = 0
        while m:
            low = m & -m
            tgt |= 1 << perm[low.bit_length() - 1]
            m ^= low
        if tgt != lat.up[perm[i]]:
            return
    found.append(tuple(perm))


def _automorphisms_generic(lat: FiniteLattice) -> list[tuple[int, ...]]:
    n = lat.size
    sig = [
        (lat.up[i].bit_count(), lat.down[i].bit_count())
        for i in range(n)
    ]
    found: list[tuple[int, ...]] = []
    img = [-1] * n
    used = [False] * n

    def rec(i: int) -> None:
        if i == n:
            found.append(tuple(img))
            return
        for b in range(n):
            if used[b] or sig[b] != sig[i]:
                continue
            ok = True
            for j in range(i):
                if lat.leq(i, j) != lat.leq(b, img[j]) or lat.leq(j, i) != lat.leq(img[j], b):
                    ok = False
                    break
            if not ok:
                continue
            img[i] = b
            used[b] = True
            rec(i + 1)
            used[b] = False
        img[i] = -1

    rec(0)
    return found
