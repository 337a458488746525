import itertools

import pytest

from topolat.errors import (
    ClassificationFailed,
    EqualAtoms,
    MeetJoinMissing,
    NotALatticeIso,
    NotAPartialOrder,
    SizeExceeded,
)
from topolat.lattice import (
    AtomProfile,
    LatticeIsoTable,
    TYPE_TABLE,
    atom_profiles,
    build_lattice,
    classify_atoms_intrinsic,
    enumerate_automorphisms,
    lattice_from_up_rows,
    sigma_lattice,
    type_of,
    type_of_generic,
)
from topolat.topology import (
    Bijection,
    complement_map,
    enumerate_topologies,
    join as top_join,
    meet as top_meet,
    pushforward,
)


def chain(length):
    return build_lattice(list(range(length)), lambda a, b: a <= b)


class TestBuildLattice:
    def test_sigma2(self):
        tops = list(enumerate_topologies(2))
        lat = build_lattice(tops, lambda a, b: a.famset <= b.famset)
        assert lat.size == 4
        assert lat.elements[lat.bottom].is_indiscrete()
        assert lat.elements[lat.top].is_discrete()

    def test_sigma3_meet_join_match_topology_ops(self):
        lat = sigma_lattice(3)
        for i in range(lat.size):
            for j in range(lat.size):
                assert lat.elements[lat.join(i, j)] == top_join(lat.elements[i], lat.elements[j])
                assert lat.elements[lat.meet(i, j)] == top_meet(lat.elements[i], lat.elements[j])

    def test_missing_join_detected(self):
        # two maximal elements above a shared bottom: the pair of tops has no join
        elems = ["bot", "a", "b", "c"]
        order = {("bot", "a"), ("bot", "b"), ("bot", "c"), ("a", "c")}
        with pytest.raises(MeetJoinMissing):
            build_lattice(elems, lambda x, y: x == y or (x, y) in order)

    def test_not_antisymmetric(self):
        with pytest.raises(NotAPartialOrder):
            build_lattice([0, 1], lambda a, b: True)

    def test_not_transitive(self):
        rel = {(0, 1), (1, 2)}
        with pytest.raises(NotAPartialOrder):
            build_lattice([0, 1, 2], lambda a, b: a == b or (a, b) in rel)

    def test_not_reflexive(self):
        with pytest.raises(NotAPartialOrder):
            lattice_from_up_rows([0, 1], [0b10, 0b10])

    def test_atoms_of_sigma3(self):
        lat = sigma_lattice(3)
        atoms = lat.atoms()
        assert len(atoms) == 6
        assert all(lat.elements[a].is_atom() for a in atoms)

    def test_atomistic(self):
        assert sigma_lattice(3).is_atomistic()
        assert not chain(3).is_atomistic()


class TestTypeFunction:
    def test_two_singletons(self):
        assert type_of(AtomProfile(0b0001, 4), AtomProfile(0b0010, 4)) == 3

    def test_singleton_cosingleton(self):
        assert type_of(AtomProfile(0b0001, 4), AtomProfile(0b1110, 4)) == 2

    def test_two_doubletons_overlapping(self):
        assert type_of(AtomProfile(0b0011, 4), AtomProfile(0b0110, 4)) == 4

    def test_equal_atoms_rejected(self):
        with pytest.raises(EqualAtoms):
            type_of(AtomProfile(1, 3), AtomProfile(1, 3))

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_symmetric_and_matches_generic(self, n):
        profiles = atom_profiles(n)
        for p, q in itertools.combinations(profiles, 2):
            t = type_of(p, q)
            assert t == type_of(q, p)
            assert t == type_of_generic(p, q)

    @pytest.mark.parametrize("n", [4, 5])
    def test_within_published_cells(self, n):
        profiles = atom_profiles(n)
        for p, q in itertools.combinations(profiles, 2):
            assert type_of(p, q) in TYPE_TABLE[(p.klass, q.klass)]

    @pytest.mark.parametrize("n", [4, 5])
    def test_every_l_atom_has_type4_partner(self, n):
        profiles = atom_profiles(n)
        l_atoms = [p for p in profiles if p.klass == "L"]
        for p in l_atoms:
            assert any(q.mask != p.mask and type_of(p, q) == 4 for q in l_atoms)

    def test_klass_by_cardinality(self):
        assert AtomProfile(0b0001, 4).klass == "N"
        assert AtomProfile(0b0111, 4).klass == "M"
        assert AtomProfile(0b0011, 4).klass == "L"


class TestIntrinsicClassification:
    @pytest.mark.parametrize("n,l_size,clique", [(3, 0, 3), (4, 6, 4), (5, 20, 5)])
    def test_sizes(self, n, l_size, clique):
        profiles = atom_profiles(n)
        l_set, c1, c2 = classify_atoms_intrinsic(profiles, type_of)
        assert len(l_set) == l_size
        assert len(c1) == len(c2) == clique

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_cliques_are_cardinality_classes(self, n):
        profiles = atom_profiles(n)
        l_set, c1, c2 = classify_atoms_intrinsic(profiles, type_of)
        singles = {p for p in profiles if p.klass == "N"}
        cosingles = {p for p in profiles if p.klass == "M"}
        assert {frozenset(c1), frozenset(c2)} == {frozenset(singles), frozenset(cosingles)}
        assert l_set == {p for p in profiles if p.klass == "L"}

    def test_rejects_flat_structure(self):
        with pytest.raises(ClassificationFailed):
            classify_atoms_intrinsic(list(range(6)), lambda a, b: 3)


class TestAutomorphisms:
    def test_chain_is_rigid(self):
        assert len(enumerate_automorphisms(chain(3))) == 1

    def test_sigma2(self):
        assert len(enumerate_automorphisms(sigma_lattice(2))) == 2

    def test_sigma3_count(self):
        assert len(enumerate_automorphisms(sigma_lattice(3))) == 12

    def test_sigma3_all_come_from_bijections(self):
        lat = sigma_lattice(3)
        expected = set()
        for perm in itertools.permutations(range(3)):
            th = Bijection(perm)
            for flip in (False, True):
                mapping = []
                for t in lat.elements:
                    img = pushforward(th, t)
                    if flip:
                        img = complement_map(img)
                    mapping.append(lat.index[img])
                expected.add(tuple(mapping))
        found = {tab.map for tab in enumerate_automorphisms(lat)}
        assert found == expected

    def test_automorphisms_preserve_type(self):
        lat = sigma_lattice(3)
        atoms = lat.atoms()
        below = lat.atoms_below_masks()
        for tab in enumerate_automorphisms(lat):
            for a, b in itertools.combinations(atoms, 2):
                t_ab = below[lat.join(a, b)].bit_count()
                t_img = below[lat.join(tab.map[a], tab.map[b])].bit_count()
                assert t_ab == t_img

    def test_size_cap(self):
        with pytest.raises(SizeExceeded):
            enumerate_automorphisms(sigma_lattice(4).__class__(
                list(range(600)), [(1 << 600) - 1 & ~((1 << i) - 1) | (1 << i) for i in range(600)],
                validate_pairs=False,
            ))

    def test_square_lattice_automorphisms(self):
        # 2x2 boolean lattice: swapping the two middle elements is the only
        # nontrivial automorphism
        elems = [0b00, 0b01, 0b10, 0b11]
        lat = build_lattice(elems, lambda a, b: a & ~b == 0)
        assert len(enumerate_automorphisms(lat)) == 2


class TestIsoTable:
    def test_identity(self):
        lat = sigma_lattice(3)
        tab = LatticeIsoTable(lat, lat, range(lat.size))
        assert tab.inverse().map == tab.map

    def test_rejects_non_bijection(self):
        lat = sigma_lattice(2)
        with pytest.raises(NotALatticeIso):
            LatticeIsoTable(lat, lat, [0, 0, 1, 2])

    def test_rejects_order_breaking(self):
        lat = sigma_lattice(2)
        mapping = list(range(lat.size))
        mapping[lat.bottom], mapping[lat.top] = mapping[lat.top], mapping[lat.bottom]
        with pytest.raises(NotALatticeIso):
            LatticeIsoTable(lat, lat, mapping)

    def test_json(self):
        lat = sigma_lattice(2)
        tab = LatticeIsoTable(lat, lat, range(lat.size))
        assert tab.to_json_dict() == {"size": 4, "map": [0, 1, 2, 3]}
