import math

import numpy as np
import pytest

import tiledim as td
from tiledim import geometry, intmat

import corpus


class TestGammaK:
    def test_binary_expansions(self):
        p = corpus.ex1()
        g = td.gamma_k(p, 2)
        assert g.points.ravel().tolist() == [0, 1, 2, 3]
        g3 = td.gamma_k(p, 3)
        assert g3.points.ravel().tolist() == list(range(8))

    def test_level_one_is_digit_set(self):
        p = corpus.ex7()
        g = td.gamma_k(p, 1)
        assert {tuple(r) for r in g.points} == set(p.digits)

    def test_zero_always_present(self):
        for p in corpus.corpus():
            g = td.gamma_k(p, 2)
            assert geometry._find_row(g.points, np.zeros(p.n, np.int64)) is not None

    def test_cardinality_bound(self):
        for p in (corpus.ex2(), corpus.ex7()):
            for k in (1, 2, 3):
                assert len(td.gamma_k(p, k)) <= p.m**k

    def test_budget_enforced(self):
        with pytest.raises(td.BudgetExceededError) as err:
            td.gamma_k(corpus.ex8(), 9, budget=100_000)
        assert "k=5" in str(err.value)


class TestDeltaK:
    def test_interval_endpoints(self):
        p = corpus.ex1()
        S = td.compute_S(p)
        d = td.delta_k(p, S, 3)
        assert d.points.ravel().tolist() == [0, 7]
        assert d.witness_for((0,)) == ((1,), (-1,))
        assert d.witness_for((7,)) == ((-1,), (1,))

    @pytest.mark.parametrize("k", range(2, 9))
    def test_interval_cardinality_constant(self, k):
        p = corpus.ex1()
        S = td.compute_S(p)
        assert len(td.delta_k(p, S, k)) == 2

    def test_subset_of_gamma(self):
        p = corpus.ex6("iii")
        S = td.compute_S(p)
        g = td.gamma_k(p, 6)
        d = td.delta_k(p, S, 6)
        gset = {tuple(r) for r in g.points}
        assert {tuple(r) for r in d.points} <= gset

    def test_witnesses_satisfy_definition(self):
        p = corpus.ex7()
        S = td.compute_S(p)
        k = 4
        d = td.delta_k(p, S, k)
        g = td.gamma_k(p, k)
        gset = {tuple(r) for r in g.points}
        Mk = intmat.mat_pow(p.M, k)
        for row, wi, wj in zip(d.points, d.witness_i, d.witness_j):
            i, j = d.contact[wi], d.contact[wj]
            assert any(i) and any(j)
            target = intmat.vec_add(
                intmat.vec_add(tuple(int(c) for c in row), intmat.mat_vec(Mk, i)), j
            )
            assert target in gset

    def test_mirrored_witness_relation(self):
        p = corpus.ex6("ii")
        S = td.compute_S(p)
        k = 5
        d = td.delta_k(p, S, k)
        dset = {tuple(r) for r in d.points}
        Mk = intmat.mat_pow(p.M, k)
        gset = {tuple(r) for r in td.gamma_k(p, k).points}
        for row, wi, wj in zip(d.points, d.witness_i, d.witness_j):
            i, j = d.contact[wi], d.contact[wj]
            target = intmat.vec_add(
                intmat.vec_add(tuple(int(c) for c in row), intmat.mat_vec(Mk, i)), j
            )
            # the target is itself a boundary point, witnessed by (-i, -j)
            assert target in dset
            back = intmat.vec_add(
                intmat.vec_add(target, intmat.mat_vec(Mk, intmat.vec_neg(i))),
                intmat.vec_neg(j),
            )
            assert back in gset


class TestEmpiricalContactMatrix:
    def test_interval_global_ball(self):
        p = corpus.ex1()
        S = td.compute_S(p)
        T, pos = td.contact_matrix_empirical(p, S, 3, td.Ball((0.5,), 2.0))
        i1, im1 = pos[(1,)], pos[(-1,)]
        assert T[i1][im1] == 1
        assert T[im1][i1] == 1
        total = sum(sum(row) for row in T)
        assert total == 2

    def test_far_ball_is_zero(self):
        p = corpus.ex1()
        S = td.compute_S(p)
        T, _ = td.contact_matrix_empirical(p, S, 3, td.Ball((50.0,), 0.5))
        assert all(v == 0 for row in T for v in row)

    def test_origin_row_and_column_zero(self):
        p = corpus.ex7()
        S = td.compute_S(p)
        T, pos = td.contact_matrix_empirical(p, S, 3, td.Ball((0.5, 0.5), 0.45))
        z = pos[(0, 0)]
        assert all(T[z][j] == 0 for j in range(len(S)))
        assert all(T[i][z] == 0 for i in range(len(S)))

    @pytest.mark.parametrize(
        "name,pairfn,center,ks",
        [
            ("ex1", corpus.ex1, (1.0,), [(5, 2), (6, 2)]),
            ("ex7", corpus.ex7, (1.0, 0.5), [(8, 2)]),
            ("ex6iii", lambda: corpus.ex6("iii"), (0.6, 0.3), [(8, 2)]),
        ],
    )
    def test_recursion_sandwich(self, name, pairfn, center, ks):
        # propagating a level-k count with the transition matrix brackets the
        # level-(k+l) count between shrunken and grown balls
        p = pairfn()
        S = td.compute_S(p)
        T = np.array(td.transition_matrix(p, S), dtype=np.int64)
        r, eps = 0.45, 0.4

        def tk(k, ball):
            M, _ = td.contact_matrix_empirical(p, S, k, ball)
            return np.array(M, dtype=np.int64)

        for k, l in ks:
            Tl = np.linalg.matrix_power(T, l)
            lhs = tk(k, td.Ball(center, r * (1 - eps))) @ Tl.T
            mid = tk(k + l, td.Ball(center, r))
            rhs = tk(k, td.Ball(center, r * (1 + eps))) @ Tl.T
            assert (lhs <= mid).all()
            assert (mid <= rhs).all()


class TestGrowthRate:
    def test_interval_rate_one(self):
        p = corpus.ex1()
        S = td.compute_S(p)
        fit = td.growth_rate_estimate(p, S, range(3, 9))
        assert abs(fit.rate - 1.0) < 1e-9
        assert fit.counts == (2,) * 6

    def test_needs_three_levels(self):
        p = corpus.ex1()
        S = td.compute_S(p)
        with pytest.raises(ValueError):
            td.growth_rate_estimate(p, S, [3, 4])

    def test_ball_missing_boundary(self):
        p = corpus.ex1()
        S = td.compute_S(p)
        with pytest.raises(ValueError):
            td.growth_rate_estimate(p, S, range(3, 6), td.Ball((0.5,), 0.05))

    def test_two_locals_whole_space(self):
        p = corpus.ex8()
        S = td.compute_S(p)
        fit = td.growth_rate_estimate(p, S, range(2, 7))
        assert abs(fit.rate - 5.0) <= 0.25
        assert fit.dropped_level == 2

    def test_case_iii_matches_cubic_root(self):
        p = corpus.ex6("iii")
        S = td.compute_S(p)
        fit = td.growth_rate_estimate(p, S, range(4, 13))
        root = float(max(np.roots([1, -1, 0, -2]).real))
        assert abs(fit.rate - root) / root <= 0.05
        assert fit.saturated_levels == (4,)


class TestBoxCounting:
    def test_straight_segment(self):
        p = td.make_pair([[2, 0], [0, 2]], [(0, 0), (1, 0), (0, 1), (1, 1)])
        pts = np.stack(
            [np.arange(4097, dtype=np.int64), np.zeros(4097, np.int64)], axis=1
        )
        cloud = geometry.ScaledPointSet(pair=p, k=12, points=pts)
        fit = td.box_counting_estimate(cloud, p)
        assert abs(fit.dimension - 1.0) <= 0.05

    def test_square_tile_boundary(self):
        p = corpus.ex6("i")
        S = td.compute_S(p)
        d = td.delta_k(p, S, 16)
        assert len(d) >= 1000
        fit = td.box_counting_estimate(d, p)
        assert abs(fit.dimension - 1.0) <= 0.05

    def test_case_iii_fractal_boundary(self):
        p = corpus.ex6("iii")
        S = td.compute_S(p)
        d = td.delta_k(p, S, 14)
        fit = td.box_counting_estimate(d, p)
        lam = float(max(np.roots([1, -1, 0, -2]).real))
        assert abs(fit.dimension - 2 * math.log(lam) / math.log(2)) <= 0.05

    def test_too_few_points(self):
        p = corpus.ex6("i")
        S = td.compute_S(p)
        d = td.delta_k(p, S, 6)
        with pytest.raises(ValueError):
            td.box_counting_estimate(d, p)

    def test_plane_only(self):
        p = corpus.ex1()
        S = td.compute_S(p)
        d = td.delta_k(p, S, 12)
        with pytest.raises(ValueError):
            td.box_counting_estimate(d, p)


class TestCountingSandwich:
    @pytest.mark.parametrize(
        "pairfn,centers",
        [
            (corpus.ex1, [(0.0,), (1.0,), (0.5,)]),
            (corpus.ex2, [(0.0,), (1.5,), (5.5,)]),
            (corpus.ex7, [(0.0, 0.0), (1.0, 0.5)]),
            (lambda: corpus.ex6("iii"), [(0.0, 0.0), (0.6, 0.3)]),
        ],
        ids=["ex1", "ex2", "ex7", "ex6iii"],
    )
    def test_ball_count_bracketed_by_norm(self, pairfn, centers):
        # with a ball of diameter below one, the entry sum of the empirical
        # contact matrix brackets the boundary count within [1/(2|S|), 1/2]
        p = pairfn()
        S = td.compute_S(p)
        for k in range(1, 9):
            if p.m**k > 70_000:
                break
            d = td.delta_k(p, S, k)
            rc = d.real_coordinates()
            for c in centers:
                ball = td.Ball(c, 0.45)
                cnt = int(ball.contains(rc).sum())
                if cnt == 0:
                    continue
                T, _ = td.contact_matrix_empirical(p, S, k, ball)
                nrm = sum(sum(row) for row in T)
                assert nrm / (2 * len(S)) <= cnt <= nrm / 2


class TestExport:
    def test_format(self, tmp_path):
        p = corpus.ex1()
        S = td.compute_S(p)
        d = td.delta_k(p, S, 3)
        out = tmp_path / "cloud.txt"
        with open(out, "w") as fh:
            td.export_points(d, fh)
        lines = out.read_text().splitlines()
        assert lines[0] == "k=3 n=1 scaled=1"
        assert lines[1:] == ["0", "7"]

    def test_planar_format(self, tmp_path):
        p = corpus.ex7()
        g = td.gamma_k(p, 1)
        out = tmp_path / "cloud.txt"
        with open(out, "w") as fh:
            td.export_points(g, fh)
        lines = out.read_text().splitlines()
        assert lines[0] == "k=1 n=2 scaled=1"
        assert all(len(line.split()) == 2 for line in lines[1:])
