import math

import pytest

import tiledim as td

import corpus


class TestDimensionBounds:
    def test_zero_dimensional_boundary(self):
        lo, hi, clamped = td.dimension_bounds(1.0, 2, 2.0, 1)
        assert lo == 0.0 and hi == 0.0 and not clamped

    def test_direct_substitution(self):
        lo, hi, _ = td.dimension_bounds(3.0, 6, 2.0, 2)
        assert abs(hi - math.log(3) / math.log(2)) < 1e-12
        assert abs(lo - (2 + (math.log(3) - math.log(6)) / math.log(2))) < 1e-12

    def test_equal_modulus_collapse(self):
        m = 5
        lo, hi, _ = td.dimension_bounds(3.0, m, float(m), 1)
        assert abs(lo - hi) < 1e-12
        assert abs(hi - math.log(3) / math.log(m)) < 1e-12

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            td.dimension_bounds(6.0, 6, 2.0, 2)
        with pytest.raises(ValueError):
            td.dimension_bounds(0.5, 6, 2.0, 2)

    def test_clamped_weak_lower_bound(self):
        # far-apart moduli make the lower formula fall below n-1
        lo, hi, clamped = td.dimension_bounds(1.2, 10, 1.1, 2)
        assert clamped
        assert lo == 1.0
        assert abs(hi - math.log(1.2) / math.log(1.1)) < 1e-12

    def test_monotone_in_lambda(self):
        prev = None
        for lam in (1.5, 2.0, 2.5, 3.0, 3.5):
            lo, hi, _ = td.dimension_bounds(lam, 6, 2.0, 2)
            if prev is not None:
                assert lo >= prev[0] - 1e-12 and hi >= prev[1] - 1e-12
            prev = (lo, hi)


class TestExactDimension:
    def test_jordan_tile(self):
        assert abs(td.exact_dimension_if_equal_modulus(2.0, 4, 2) - 1.0) < 1e-12

    def test_two_locals(self):
        v = td.exact_dimension_if_equal_modulus(5.0, 9, 2)
        assert abs(v - math.log(5) / math.log(3)) < 1e-12

    def test_case_iii(self):
        lam = 1.695620769559862
        v = td.exact_dimension_if_equal_modulus(lam, 2, 2)
        assert abs(v - 2 * math.log(lam) / math.log(2)) < 1e-12
        assert abs(v - 1.5236) < 5e-4


class TestLocalDimensionSet:
    def test_two_locals(self):
        locals_ = td.local_dimension_set([5.0, 3.0], 9, 3.0, 2, True)
        assert len(locals_) == 2
        assert abs(locals_[0].exact - math.log(5) / math.log(3)) < 1e-12
        assert abs(locals_[1].exact - 1.0) < 1e-12

    def test_singleton(self):
        locals_ = td.local_dimension_set([3.0], 4, 4.0, 1, True)
        assert len(locals_) == 1

    def test_global_answer_is_max(self):
        locals_ = td.local_dimension_set([5.0, 3.0], 9, 3.0, 2, True)
        assert locals_[0].exact == max(l.exact for l in locals_)


class TestMeasureClassification:
    def test_s_set(self):
        mc = td.measure_classification(1, 1, 2, 1.5)
        assert mc.verdict == "positive_and_finite"

    def test_jordan_tile_positive_only(self):
        mc = td.measure_classification(2, 2, 2, 1.0)
        assert mc.verdict == "positive"
        assert mc.lhs == 1.0 and mc.rhs == 1.0
        assert mc.condition_geq and not mc.condition_strict

    def test_strict_inequality_infinite(self):
        mc = td.measure_classification(1, 3, 2, 1.5)
        assert mc.verdict == "infinite"
        assert mc.lhs == 2.0 and mc.rhs == 0.0

    def test_inconclusive(self):
        mc = td.measure_classification(3, 1, 2, 1.0)
        assert mc.verdict == "inconclusive"


class TestDimensionReportEndToEnd:
    def test_interval(self):
        p = corpus.ex1()
        rep = td.dimension_report(td.spectral_report(td.contact_system(p)), p.n, p.m)
        assert rep.exact == 0.0
        assert rep.lower == 0.0 and rep.upper == 0.0

    def test_jordan_tile(self):
        p = corpus.ex7()
        rep = td.dimension_report(td.spectral_report(td.contact_system(p)), p.n, p.m)
        assert abs(rep.exact - 1.0) < 1e-12
        assert rep.measure.verdict == "positive"

    def test_thin_family_range(self):
        for m in range(4, 9):
            p = corpus.ex3(m)
            rep = td.dimension_report(
                td.spectral_report(td.contact_system(p)), p.n, p.m
            )
            assert 0 <= rep.exact < 1

    def test_primitivization_invariance(self):
        reports = []
        for digits in ([(0,), (1,)], [(0,), (3,)]):
            p0 = td.make_pair([[2]], digits)
            p, _ = td.primitivize(p0)
            rep = td.dimension_report(
                td.spectral_report(td.contact_system(p)), p.n, p.m
            )
            reports.append(rep)
        assert reports[0] == reports[1]

    @pytest.mark.parametrize(
        "p", [q for q in corpus.corpus() if td.m_minus(q.M)[1]],
        ids=lambda p: p.name or str(p.M),
    )
    def test_equal_modulus_bounds_collapse(self, p):
        rep = td.dimension_report(td.spectral_report(td.contact_system(p)), p.n, p.m)
        assert abs(rep.lower - rep.upper) < 1e-9
        assert abs(rep.exact - rep.upper) < 1e-9
        assert p.n - 1 - 1e-9 <= rep.exact < p.n
