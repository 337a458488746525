import itertools
import random

import pytest

from topolat.errors import (
    BudgetExceeded,
    GroundMismatch,
    ImproperSubset,
    MissingEmptyOrFull,
    NotAnAtom,
    NotClosedUnderIntersection,
    NotClosedUnderUnion,
)
from topolat.topology import (
    Bijection,
    FinTopology,
    TOPOLOGY_COUNTS,
    atom,
    atoms_of_sigma,
    complement_map,
    count_topologies,
    discrete,
    enumerate_topologies,
    indiscrete,
    is_atom,
    join,
    meet,
    minimal_neighborhood_maps,
    opens_from_neighborhoods,
    pullback,
    pushforward,
    sup_atoms,
    sup_atoms_on,
    validate_topology,
)


def brute_force_topologies(n):
    """Independent oracle: all union/intersection-closed families containing
    the empty and full masks, found by scanning every subset of proper masks."""
    full = (1 << n) - 1
    proper = list(range(1, full))
    out = []
    for bits in range(1 << len(proper)):
        fam = {0, full}
        for i, m in enumerate(proper):
            if bits >> i & 1:
                fam.add(m)
        ok = True
        for a in fam:
            for b in fam:
                if (a | b) not in fam or (a & b) not in fam:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(tuple(sorted(fam)))
    return sorted(out)


class TestValidate:
    def test_indiscrete(self):
        t = validate_topology(2, [0, 3])
        assert t.opens == (0, 3)
        assert t.is_indiscrete()

    def test_atom_family(self):
        assert validate_topology(2, [0, 1, 3]).opens == (0, 1, 3)

    def test_missing_full(self):
        with pytest.raises(MissingEmptyOrFull):
            validate_topology(2, [0, 1, 2])

    def test_discrete_valid(self):
        assert validate_topology(2, [0, 1, 2, 3]).is_discrete()

    def test_duplicates_removed(self):
        assert validate_topology(2, [0, 3, 3, 0]).opens == (0, 3)

    def test_union_violation_names_first_pair(self):
        with pytest.raises(NotClosedUnderUnion) as ei:
            validate_topology(3, [0, 1, 2, 7])
        assert ei.value.pair == (1, 2)

    def test_intersection_violation(self):
        with pytest.raises(NotClosedUnderIntersection) as ei:
            validate_topology(4, [0, 3, 6, 7, 15])
        assert ei.value.pair == (3, 6)

    def test_mask_out_of_range(self):
        with pytest.raises(ValueError):
            validate_topology(2, [0, 4, 3])

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_canonical_idempotence(self, n):
        for t in enumerate_topologies(n):
            assert validate_topology(n, t.opens) == t


class TestLatticeOps:
    def test_meet_of_two_atoms(self):
        assert meet(atom(1, 2), atom(2, 2)) == indiscrete(2)

    def test_meet_idempotent(self):
        for t in enumerate_topologies(3):
            assert meet(t, t) == t

    def test_discrete_is_maximum(self):
        top = discrete(3)
        for t in enumerate_topologies(3):
            assert meet(top, t) == t
            assert join(top, t) == top

    def test_join_two_point_atoms(self):
        assert join(atom(1, 2), atom(2, 2)) == discrete(2)

    def test_join_overlapping_doubletons(self):
        # {0,1} and {1,2} generate exactly the five opens with {1} and {0,1,2}=X collapsing
        assert join(atom(0b011, 3), atom(0b110, 3)).opens == (0, 0b010, 0b011, 0b110, 0b111)

    def test_join_with_indiscrete(self):
        for t in enumerate_topologies(3):
            assert join(t, indiscrete(3)) == t

    def test_ground_mismatch(self):
        with pytest.raises(GroundMismatch):
            meet(indiscrete(2), indiscrete(3))
        with pytest.raises(GroundMismatch):
            join(indiscrete(2), indiscrete(3))

    def test_commutative_associative_absorption(self):
        rng = random.Random(11)
        tops = list(enumerate_topologies(4))
        for _ in range(120):
            a, b, c = (rng.choice(tops) for _ in range(3))
            assert meet(a, b) == meet(b, a)
            assert join(a, b) == join(b, a)
            assert meet(meet(a, b), c) == meet(a, meet(b, c))
            assert join(join(a, b), c) == join(a, join(b, c))
            assert join(a, meet(a, b)) == a
            assert meet(a, join(a, b)) == a


class TestComplement:
    def test_atom_goes_to_complement_atom(self):
        assert complement_map(atom(0b001, 3)) == atom(0b110, 3)

    def test_discrete_fixed(self):
        assert complement_map(discrete(3)) == discrete(3)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_involution(self, n):
        for t in enumerate_topologies(n):
            assert complement_map(complement_map(t)) == t

    def test_commutes_with_pushforward(self):
        # checked exhaustively on 3 points, all 6 bijections
        thetas = [Bijection(p) for p in itertools.permutations(range(3))]
        for t in enumerate_topologies(3):
            for th in thetas:
                assert complement_map(pushforward(th, t)) == pushforward(th, complement_map(t))


class TestPushforward:
    def test_identity(self):
        for t in enumerate_topologies(3):
            assert pushforward(Bijection.identity(3), t) == t

    def test_swap_relabels_atom(self):
        swap = Bijection([1, 0, 2])
        assert pushforward(swap, atom(0b001, 3)) == atom(0b010, 3)

    def test_pullback_inverts(self):
        th = Bijection([2, 0, 1])
        for t in enumerate_topologies(3):
            assert pullback(th, pushforward(th, t)) == t

    def test_distributes_over_meet_and_join(self):
        rng = random.Random(5)
        tops = list(enumerate_topologies(4))
        thetas = [Bijection(p) for p in itertools.permutations(range(4))]
        for _ in range(80):
            t1, t2 = rng.choice(tops), rng.choice(tops)
            th = rng.choice(thetas)
            assert pushforward(th, meet(t1, t2)) == meet(pushforward(th, t1), pushforward(th, t2))
            assert pushforward(th, join(t1, t2)) == join(pushforward(th, t1), pushforward(th, t2))

    def test_not_a_permutation(self):
        with pytest.raises(ValueError):
            Bijection([0, 0, 1])

    def test_compose_and_inverse(self):
        a = Bijection([1, 2, 0])
        assert a.compose(a.inverse()) == Bijection.identity(3)
        assert a.inverse().compose(a) == Bijection.identity(3)


class TestEnumeration:
    @pytest.mark.parametrize("n,count", [(1, 1), (2, 4), (3, 29), (4, 355), (5, 6942)])
    def test_counts(self, n, count):
        assert count_topologies(n) == count

    def test_count_equals_enumeration_length(self):
        for n in range(1, 5):
            assert count_topologies(n) == sum(1 for _ in enumerate_topologies(n))

    def test_two_points_exact(self):
        assert [t.opens for t in enumerate_topologies(2)] == [
            (0, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2, 3),
        ]

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_matches_brute_force_closure(self, n):
        assert sorted(t.opens for t in enumerate_topologies(n)) == brute_force_topologies(n)

    def test_no_duplicates_and_all_valid(self):
        for n in (3, 4):
            seen = set()
            for t in enumerate_topologies(n):
                assert t not in seen
                seen.add(t)
                assert validate_topology(n, t.opens) == t

    def test_budget_gate(self):
        with pytest.raises(BudgetExceeded):
            count_topologies(7)
        with pytest.raises(BudgetExceeded):
            list(enumerate_topologies(8, big_ok=True))

    def test_ground_bounds(self):
        with pytest.raises(ValueError):
            count_topologies(0)

    def test_neighborhood_map_round_trip(self):
        for t in enumerate_topologies(4):
            nb = t.minimal_neighborhoods()
            assert opens_from_neighborhoods(4, nb) == t.opens

    def test_neighborhood_maps_are_deterministic(self):
        assert list(minimal_neighborhood_maps(3)) == list(minimal_neighborhood_maps(3))


class TestAtoms:
    def test_atom_opens(self):
        assert atom(0b0001, 4).opens == (0, 1, 15)

    def test_atom_count(self):
        assert len(atoms_of_sigma(4)) == 14
        assert len(atoms_of_sigma(5)) == 30

    def test_improper_subset(self):
        with pytest.raises(ImproperSubset):
            atom(0, 3)
        with pytest.raises(ImproperSubset):
            atom(7, 3)

    def test_is_atom(self):
        assert is_atom(atom(1, 2))
        assert not is_atom(discrete(2))
        assert not is_atom(indiscrete(2))

    def test_sup_of_all_atoms_is_discrete(self):
        assert sup_atoms(atoms_of_sigma(3)) == discrete(3)

    def test_empty_sup_is_indiscrete(self):
        assert sup_atoms_on(3, []) == indiscrete(3)

    def test_rejects_non_atom(self):
        with pytest.raises(NotAnAtom):
            sup_atoms([discrete(2)])

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_atomicity(self, n):
        # every topology is the join of the atoms of its proper opens
        full = (1 << n) - 1
        for t in enumerate_topologies(n):
            parts = [atom(m, n) for m in t.opens if 0 < m < full]
            assert sup_atoms_on(n, parts) == t

    def test_atomicity_sampled_n5(self):
        rng = random.Random(23)
        tops = list(enumerate_topologies(5))
        for t in rng.sample(tops, 150):
            parts = [atom(m, 5) for m in t.opens if 0 < m < 31]
            assert sup_atoms_on(5, parts) == t


class TestJson:
    def test_round_trip(self):
        t = validate_topology(4, [0, 3, 12, 15])
        assert FinTopology.from_json_dict(t.to_json_dict()) == t
        assert t.to_json_dict() == {"n": 4, "opens": [0, 3, 12, 15]}
