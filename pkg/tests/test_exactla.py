import random
from fractions import Fraction

import numpy as np

from thmc.exactla import (
    IntegerLattice,
    det,
    hermite_normal_form,
    in_cone,
    in_convex_hull,
    independent_rows,
    lp_feasible,
    mat_rank,
    nullspace,
    nullspace_int,
    primitive,
    simplex_standard,
)


class TestRank:
    def test_identity(self):
        I6 = [[1 if i == j else 0 for j in range(6)] for i in range(6)]
        assert mat_rank(I6) == 6

    def test_zero(self):
        assert mat_rank([[0, 0], [0, 0]]) == 0

    def test_tight_vectors_rank_five(self):
        k = 2
        vecs = [
            [k, 0, k, 0, 0, 0],
            [0, 0, 0, k, 0, k],
            [k - 1, 1, k, 0, 0, 0],
            [0, 1, 0, k - 1, 0, k],
            [k, 0, k - 1, 0, 1, 0],
        ]
        assert mat_rank(vecs) == 5

    def test_rank_equals_transpose_rank(self):
        rng = random.Random(5)
        for _ in range(30):
            r, c = rng.randint(1, 5), rng.randint(1, 5)
            M = [[rng.randint(-3, 3) for _ in range(c)] for _ in range(r)]
            Mt = [[M[i][j] for i in range(r)] for j in range(c)]
            assert mat_rank(M) == mat_rank(Mt)

    def test_fractions(self):
        M = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), Fraction(2, 1)]]
        assert mat_rank(M) == 2


class TestNullspace:
    def test_kernel_vectors_annihilate(self):
        rng = random.Random(11)
        for _ in range(25):
            r, c = rng.randint(1, 4), rng.randint(2, 6)
            M = [[rng.randint(-4, 4) for _ in range(c)] for _ in range(r)]
            basis = nullspace(M)
            assert len(basis) == c - mat_rank(M)
            for v in basis:
                for row in M:
                    assert sum(a *ب for a, ب in zip(row, v)) == 0

    def test_nullspace_int_primitive(self):
        M = [[2, 4, 6]]
        for v in nullspace_int(M):
            from math import gcd

            g = 0
            for e in v:
                g = gcd(g, e)
            assert g == 1
            assert sum(a * b for a, b in zip(M[0], v)) == 0


class TestHNF:
    def test_diagonal(self):
        H, U = hermite_normal_form([[2, 0], [0, 3]])
        assert H == [[2, 0], [0, 3]]
        assert abs(det(U)) == 1

    def test_gcd_column(self):
        H, U = hermite_normal_form([[2, 4]])
        assert H == [[2, 0]]
        assert abs(det(U)) == 1

    def test_random_MU_equals_H(self):
        rng = random.Random(3)
        for _ in range(40):
            r, c = rng.randint(1, 4), rng.randint(1, 5)
            M = [[rng.randint(-5, 5) for _ in range(c)] for _ in range(r)]
            H, U = hermite_normal_form(M)
            assert abs(det(U)) == 1
            MU = [
                [sum(M[i][t] * U[t][j] for t in range(c)) for j in range(c)]
                for i in range(r)
            ]
            assert MU == H
            # echelon shape: pivots march down-right, zero columns trail
            pivots = []
            for j in range(c):
                col = [H[i][j] for i in range(r)]
                nz = [i for i, e in enumerate(col) if e]
                if nz:
                    pivots.append(nz[0])
            assert pivots == sorted(pivots)


class TestIntegerLattice:
    def test_contains_generators_and_combos(self):
        rng = random.Random(9)
        for _ in range(20):
            dim = rng.randint(2, 6)
            gens = [
                [rng.randint(-4, 4) for _ in range(dim)] for _ in range(rng.randint(1, 5))
            ]
            lat = IntegerLattice(dim)
            for g in gens:
                lat.add(g)
            for g in gens:
                assert g in lat
            combo = [0] * dim
            for g in gens:
                coef = rng.randint(-3, 3)
                combo = [a + coef * b for a, b in zip(combo, g)]
            assert combo in lat

    def test_rejects_outside(self):
        lat = IntegerLattice(2)
        lat.add([2, 0])
        lat.add([0, 2])
        assert [1, 1] not in lat
        assert [2, 2] in lat

    def test_rank(self):
        lat = IntegerLattice(3)
        lat.add([1, 2, 3])
        lat.add([2, 4, 6])
        assert lat.rank == 1
        lat.add([0, 1, 0])
        assert lat.rank == 2


class TestSimplex:
    def test_lp_feasible_interval(self):
        w = lp_feasible([((1,), ">=", 0), ((1,), "<=", 1)])
        assert w is not None and 0 <= w[0] <= 1

    def test_lp_infeasible(self):
        assert lp_feasible([((1,), ">=", 1), ((1,), "<=", 0)]) is None

    def test_witness_satisfies_exactly(self):
        rng = random.Random(21)
        n_feasible = 0
        for _ in range(40):
            nv = rng.randint(1, 3)
            cons = []
            for _ in range(rng.randint(1, 4)):
                vec = tuple(rng.randint(-3, 3) for _ in range(nv))
                rel = rng.choice([">=", "<=", "=="])
                cons.append((vec, rel, Fraction(rng.randint(-4, 4))))
            w = lp_feasible(cons)
            if w is None:
                continue
            n_feasible += 1
            for vec, rel, rhs in cons:
                val = sum(Fraction(a) * x for a, x in zip(vec, w))
                assert (
                    (rel == ">=" and val >= rhs)
                    or (rel == "<=" and val <= rhs)
                    or (rel == "==" and val == rhs)
                )
        assert n_feasible > 5

    def test_cone_membership(self):
        cols = [(1, 0), (1, 1)]
        assert in_cone(cols, (3, 1)) is not None
        assert in_cone(cols, (0, 1)) is None
        w = in_cone(cols, (2, 2))
        assert w is not None
        recon = [sum(cols[j][i] * c for j, c in w.items()) for i in range(2)]
        assert recon == [2, 2]

    def test_convex_hull_membership(self):
        cols = [(0, 0), (1, 0), (0, 1)]
        assert in_convex_hull(cols, (Fraction(1, 3), Fraction(1, 3))) is not None
        assert in_convex_hull(cols, (1, 1)) is None
        assert in_convex_hull(cols, (0, 0)) is not None

    def test_optimize(self):
        # max x1 + x2 over the triangle conv{(0,0),(2,0),(0,2)} written in
        # standard form via convex multipliers
        cols = [(0, 0, 1), (2, 0, 1), (0, 2, 1), (1, 0, 0), (0, 1, 0)]
        # last two columns are slack-like rays; maximize 4*l2 picked freely
        res = simplex_standard(
            [(0, 1), (1, 1), (2, 1)], (Fraction(3, 2), 1), costs=(0, 0, 1), maximize=True
        )
        assert res.status == "optimal"
        # x with x0*0 + x1*1 + x2*2 = 3/2, x0+x1+x2 = 1: max x2 = 3/4
        assert res.value == Fraction(3, 4)

    def test_np_fast_path_matches(self):
        rng = random.Random(2)
        cols = [tuple(rng.randint(0, 4) for _ in range(4)) for _ in range(60)]
        np_cols = np.array([[c[i] for c in cols] for i in range(4)], dtype=np.int64)
        for _ in range(25):
            coefs = [rng.randint(0, 2) for _ in cols]
            x = tuple(sum(c[i] * f for c, f in zip(cols, coefs)) for i in range(4))
            assert in_cone(cols, x, np_cols=np_cols) is not None
            bad = tuple(v + 1 for v in x[:1]) + x[1:]
            a = in_cone(cols, bad, np_cols=np_cols)
            b = in_cone(cols, bad)
            assert (a is None) == (b is None)


class TestHelpers:
    def test_primitive(self):
        assert primitive([Fraction(1, 2), Fraction(1, 3)]) == (3, 2)
        assert primitive([2, 4, 6]) == (1, 2, 3)
        assert primitive([-2, 4]) == (-1, 2)

    def test_independent_rows(self):
        M = [[1, 0], [2, 0], [0, 1]]
        assert independent_rows(M) == [0, 2]
