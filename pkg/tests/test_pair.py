import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import tiledim as td
from tiledim import intmat

import corpus


class TestValidate:
    def test_interval_pair_passes(self):
        rep = td.validate([[2]], [(0,), (1,)])
        assert rep.standard and rep.primitive and rep.passed

    def test_congruent_digits(self):
        rep = td.validate([[2]], [(0,), (2,)])
        assert not rep.coset_complete
        assert rep.witnesses["congruent_digits"] == ((0,), (2,))

    def test_residues_mod_three(self):
        rep = td.validate([[3]], [(0,), (4,), (11,)])
        assert rep.standard

    def test_non_expanding(self):
        rep = td.validate([[1]], [(0,)])
        assert not rep.expanding and not rep.standard

    def test_cardinality(self):
        rep = td.validate([[3]], [(0,), (1,)])
        assert not rep.cardinality_match

    def test_translation_recorded(self):
        rep = td.validate([[2]], [(1,), (2,)])
        assert rep.translation == (-1,)
        assert rep.standard

    def test_sublattice_pair_reducible_not_standard(self):
        rep = td.validate([[4]], [(0,), (8,), (16,), (24,)])
        assert not rep.standard
        assert rep.reducible


class TestDifferenceMultiset:
    def test_interval_pair(self):
        mu = td.difference_multiset(corpus.ex1())
        assert mu.counts == {(-1,): 1, (0,): 2, (1,): 1}

    def test_degenerate_single_digit(self):
        p = td.StandardPair(M=((2,),), digits=((0,),))
        assert td.difference_multiset(p).counts == {(0,): 1}

    @pytest.mark.parametrize("m", range(4, 9))
    def test_thin_family_multiplicities(self, m):
        mu = td.difference_multiset(corpus.ex3(m))
        assert mu[(0,)] == m
        assert mu[(1,)] == m - 3
        assert mu[(m + 1,)] == 1
        # both (m-1, 0) and (m+1, 2) realize the difference m-1
        assert mu[(m - 1,)] == 2

    @given(st.sets(st.integers(-12, 12), min_size=1, max_size=6))
    @settings(max_examples=100)
    def test_total_and_symmetry(self, digits):
        p = td.StandardPair(M=((2,),), digits=tuple(sorted((d,) for d in digits)))
        mu = td.difference_multiset(p)
        assert mu.total() == len(digits) ** 2
        assert all(mu[d] == mu[tuple(-c for c in d)] for d in mu.support())
        assert mu[(0,) * p.n] == len(digits)


class TestInvariantSublattice:
    def test_full_lattice(self):
        assert td.invariant_sublattice(corpus.ex1()).is_standard()

    def test_scaled_lattice(self):
        p = td.make_pair([[2]], [(0,), (3,)])
        assert td.invariant_sublattice(p).basis == ((3,),)

    def test_gcd_one(self):
        assert td.invariant_sublattice(corpus.ex2()).is_standard()

    @pytest.mark.parametrize("p", corpus.corpus(), ids=lambda p: p.name or str(p.M))
    def test_m_invariance(self, p):
        lat = td.invariant_sublattice(p)
        extended = list(lat.basis) + [intmat.mat_vec(p.M, b) for b in lat.basis]
        assert intmat.hnf(extended) == lat


class TestPrimitivize:
    def test_identity_on_primitive(self):
        p = corpus.ex1()
        q, B = td.primitivize(p)
        assert q is p
        assert B == intmat.identity(1)

    def test_scale_three(self):
        q, B = td.primitivize(td.make_pair([[2]], [(0,), (3,)]))
        assert B == ((3,),)
        assert q.M == ((2,),)
        assert q.digits == ((0,), (1,))

    def test_scale_eight(self):
        raw = td.make_pair([[4]], [(0,), (8,), (16,), (24,)], require_valid=False)
        q, B = td.primitivize(raw)
        assert B == ((8,),)
        assert q.M == ((4,),)
        assert q.digits == ((0,), (1,), (2,), (3,))

    def test_idempotent(self):
        q, _ = td.primitivize(td.make_pair([[2]], [(0,), (3,)]))
        q2, B2 = td.primitivize(q)
        assert q2 is q
        assert B2 == intmat.identity(1)

    @pytest.mark.parametrize("p", corpus.corpus(), ids=lambda p: p.name or str(p.M))
    def test_coset_distinctness_after_normalization(self, p):
        for i in range(len(p.digits)):
            for j in range(i + 1, len(p.digits)):
                diff = intmat.vec_sub(p.digits[i], p.digits[j])
                assert not intmat.in_image(diff, p.M)


class TestMakePair:
    def test_rejects_invalid(self):
        with pytest.raises(td.PairValidationError):
            td.make_pair([[2]], [(0,), (2,)])

    def test_sorts_digits(self):
        p = td.make_pair([[3]], [(11,), (0,), (4,)])
        assert p.digits == ((0,), (4,), (11,))

    def test_translates_to_zero(self):
        p = td.make_pair([[2]], [(5,), (2,)])
        assert p.digits == ((0,), (3,))
        assert p.translation == (-2,)
