import pytest

from topolat.errors import BudgetExceeded, GroundMismatch, NotASubspace, SizeExceeded
from topolat.finfield import (
    enumerate_subspaces,
    span,
    space,
    subspace_sum,
    zero_subspace,
)
from topolat.galois import (
    VectorTopology,
    complement_fixes,
    enumerate_vector_topologies,
    frakS,
    frakT,
    galois_report,
    is_vector_topology,
    quotient_pushforward,
    t_max,
)
from topolat.topology import FinTopology, atom, discrete, indiscrete, validate_topology

SPACES = [(2, 1, 2), (3, 1, 2), (2, 1, 3)]


class TestTMax:
    def test_f2_plane_has_full_power_set(self):
        assert len(t_max(space(2, 1, 2)).fin_topology().opens) == 16

    def test_f3_line_has_eight_opens(self):
        assert len(t_max(space(3, 1, 1)).fin_topology().opens) == 8

    def test_core_of_t_max_is_zero(self):
        sp = space(2, 1, 2)
        assert frakS(sp, t_max(sp)) == zero_subspace(sp)

    def test_t_max_is_census_maximum(self):
        # cross-validation for hard-coding the discrete topology as the top
        sp = space(2, 1, 2)
        census = enumerate_vector_topologies(sp, "census")
        top = t_max(sp)
        assert all(t.leq(top) for t in census)
        assert top in census


class TestFrakT:
    def test_line_on_f2_plane(self):
        sp = space(2, 1, 2)
        line = span(sp, [(1, 0)])
        assert frakT(line).fin_topology().opens == (0, 3, 12, 15)

    def test_zero_subspace_gives_discrete(self):
        sp = space(2, 1, 2)
        assert frakT(zero_subspace(sp)).fin_topology() == discrete(4)

    def test_full_subspace_gives_indiscrete(self):
        sp = space(2, 1, 2)
        full = span(sp, sp.basis())
        assert frakT(full).fin_topology() == indiscrete(4)

    def test_saturation_is_vector_topology(self):
        for args in SPACES:
            sp = space(*args)
            for s in enumerate_subspaces(sp):
                assert is_vector_topology(frakT(s).fin_topology(), sp)


class TestFrakS:
    @pytest.mark.parametrize("args", SPACES)
    def test_core_of_saturation_is_identity(self, args):
        sp = space(*args)
        for s in enumerate_subspaces(sp):
            assert frakS(sp, frakT(s)) == s

    def test_core_of_discrete_is_zero(self):
        sp = space(3, 1, 2)
        assert frakS(sp, discrete(9)) == zero_subspace(sp)

    def test_atom_at_zero_has_subspace_core_but_is_not_vector(self):
        # the intersection of opens at zero is {0}, a subspace, yet the
        # topology fails additive continuity: the core alone cannot certify
        sp = space(2, 1, 2)
        t = atom(0b0001, 4)
        assert frakS(sp, t) == zero_subspace(sp)
        assert not is_vector_topology(t, sp)

    def test_non_closed_core_raises(self):
        # opens {0, {zero, e1, e2}, X}: the core misses e1 + e2
        sp = space(2, 1, 2)
        t = validate_topology(4, [0, 0b0111, 0b1111])
        with pytest.raises(NotASubspace):
            frakS(sp, t)

    def test_ground_mismatch(self):
        with pytest.raises(GroundMismatch):
            frakS(space(2, 1, 2), discrete(3))


class TestContinuityChecker:
    def test_indiscrete_always_passes(self):
        assert is_vector_topology(indiscrete(4), space(2, 1, 2))

    def test_atom_at_zero_fails(self):
        assert not is_vector_topology(atom(1, 4), space(2, 1, 2))

    def test_scalar_continuity_failure(self):
        # {0,1} open on the 3-element line: scaling by 2 leaves the minimal
        # neighborhood of 1 outside the open set
        sp = space(3, 1, 1)
        t = validate_topology(3, [0, 0b011, 0b111])
        assert not is_vector_topology(t, sp)

    def test_census_filter_counts(self):
        assert len(enumerate_vector_topologies(space(2, 1, 1), "census")) == 2
        assert len(enumerate_vector_topologies(space(3, 1, 1), "census")) == 2
        assert len(enumerate_vector_topologies(space(2, 1, 2), "census")) == 5

    def test_census_equals_image_where_both_run(self):
        for args in [(2, 1, 1), (3, 1, 1), (2, 1, 2)]:
            sp = space(*args)
            census = enumerate_vector_topologies(sp, "census")
            image = enumerate_vector_topologies(sp, "image")
            assert set(census) == set(image)

    def test_census_budget(self):
        with pytest.raises(BudgetExceeded):
            enumerate_vector_topologies(space(3, 1, 2), "census")

    def test_image_counts(self):
        assert len(enumerate_vector_topologies(space(3, 1, 2), "image")) == 6
        assert len(enumerate_vector_topologies(space(2, 2, 3), "image")) == 44


class TestVectorTopologyType:
    def test_from_fin_topology_checks(self):
        sp = space(2, 1, 2)
        with pytest.raises(ValueError):
            VectorTopology.from_fin_topology(sp, atom(1, 4))

    def test_explicit_round_trip(self):
        sp = space(2, 1, 2)
        for s in enumerate_subspaces(sp):
            vt = frakT(s)
            again = VectorTopology.from_fin_topology(sp, vt.fin_topology())
            assert again == vt

    def test_large_space_refuses_materialization(self):
        sp = space(2, 2, 3)  # 64 points
        with pytest.raises(SizeExceeded):
            frakT(zero_subspace(sp)).fin_topology()

    def test_leq_is_family_inclusion(self):
        sp = space(2, 1, 2)
        taus = enumerate_vector_topologies(sp, "image")
        for a in taus:
            for b in taus:
                explicit = a.fin_topology().famset <= b.fin_topology().famset
                assert a.leq(b) == explicit

    def test_json_shape(self):
        sp = space(2, 1, 2)
        d = frakT(span(sp, [(1, 0)])).to_json_dict()
        assert d == {
            "space": {"p": 2, "k": 1, "dim": 2},
            "topology": {"n": 4, "opens": [0, 3, 12, 15]},
        }


class TestQuotient:
    def test_discrete_pushes_to_discrete(self):
        sp = space(2, 1, 2)
        line = span(sp, [(1, 0)])
        out = quotient_pushforward(line, t_max(sp))
        assert out == discrete(2)

    def test_saturation_pushes_to_discrete_on_quotient(self):
        for args in SPACES:
            sp = space(*args)
            for s in enumerate_subspaces(sp):
                cosets = sp.size // sp.field.q ** s.dim
                assert quotient_pushforward(s, frakT(s)) == discrete(cosets)

    def test_zero_subspace_relabels(self):
        sp = space(2, 1, 2)
        for s in enumerate_subspaces(sp):
            vt = frakT(s)
            assert quotient_pushforward(zero_subspace(sp), vt) == vt.fin_topology()


class TestConnectionReports:
    @pytest.mark.parametrize("args", SPACES)
    def test_full_report_passes(self, args):
        report = galois_report(space(*args))
        assert report["pass"] is True
        assert report["core_of_saturation_is_identity"] is True
        assert report["refines_double_image"] is True
        assert report["double_image_equality"] is True
        assert report["zero_core_iff_discrete"] is True
        assert report["adjunction"] is True
        assert report["maps_reverse_inclusion"] is True
        assert report["complement_fixes_all"] is True

    def test_complement_fixes_every_vector_topology(self):
        for args in SPACES:
            sp = space(*args)
            for t in enumerate_vector_topologies(sp, "image"):
                assert complement_fixes(t)

    def test_adjunction_spotcheck(self):
        sp = space(3, 1, 2)
        subs = enumerate_subspaces(sp)
        for s in subs:
            ts = frakT(s)
            for s2 in subs:
                t = frakT(s2)
                assert frakS(sp, t).contains_subspace(s) == t.leq(ts)

    def test_sigma_meet_equals_tau_meet_by_hand(self):
        # intersecting two saturation families is saturating by the subspace sum
        from topolat.topology import meet

        sp = space(2, 1, 3)
        subs = enumerate_subspaces(sp)
        for s1 in subs:
            for s2 in subs:
                got = meet(frakT(s1).fin_topology(), frakT(s2).fin_topology())
                assert got == frakT(subspace_sum(s1, s2)).fin_topology()
