import math
from collections import Counter
from fractions import Fraction

import pytest

from thmc.design import get_design
from thmc.markov import enumerate_moves, fiber_enumerate
from thmc.mcmc import (
    TestResult,
    WalkConfig,
    as_table,
    chi_square_statistic,
    exact_test,
    g2_statistic,
    walk,
)
from thmc.words import Word


def wtable(A, *texts):
    return as_table(Counter(Word.from_text(t) for t in texts), A)


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            WalkConfig(seed=1, steps=10, burn_in=10)
        with pytest.raises(ValueError):
            WalkConfig(seed=1, steps=10, thinning=0)


class TestStatistic:
    def test_single_word_finite(self):
        A = get_design(3, 5)
        val = chi_square_statistic(Counter([Word.from_text("12132")]), A)
        assert val >= 0

    def test_exactly_fitted_data_scores_zero(self):
        # expected counts N*phat_w match the table exactly when the fitted
        # mass concentrates where the data sits: both steps out of state 1,
        # once each, fit phat = 1/2 both ways and expect 1 = observed
        A = get_design(3, 2)
        u = Counter([Word.from_text("12"), Word.from_text("13")])
        assert chi_square_statistic(u, A) == 0

    def test_full_word_multiset_statistic_value(self):
        # one copy of every word at T=4: the fit is uniform 1/2 per step, so
        # every word has expected count 24/8 = 3 and the statistic is
        # 24*(1-3)^2/3 = 32 exactly
        A = get_design(3, 4)
        val = chi_square_statistic(Counter(A.words), A)
        assert val == Fraction(32)

    def test_exact_value_against_direct_formula(self):
        A = get_design(3, 5)
        table = wtable(A, "12132", "12321")
        # direct reimplementation: pooled transition fit, product per word
        from thmc.words import pair_index, transition_counts

        idx = pair_index(3)
        b = [0] * 6
        for j in table:
            for i, c in enumerate(A.columns[j]):
                b[i] += c
        out = {s: 0 for s in (1, 2, 3)}
        for (i, j), k in idx.items():
            out[i] += b[k]
        phat = {
            (i, j): Fraction(b[k], out[i]) if out[i] else Fraction(0)
            for (i, j), k in idx.items()
        }
        N = len(table)
        expected_stat = Fraction(0)
        counts = Counter(table)
        for j, w in enumerate(A.words):
            mass = Fraction(1)
            for a, bb in zip(w, w[1:]):
                mass *= phat[(a, bb)]
            if mass == 0:
                assert counts.get(j, 0) == 0
                continue
            e = N * mass
            expected_stat += (counts.get(j, 0) - e) ** 2 / e
        assert chi_square_statistic(Counter({Word.from_text("12132"): 1, Word.from_text("12321"): 1}), A) == expected_stat

    def test_g2_nonnegative_ish(self):
        A = get_design(3, 5)
        val = g2_statistic(Counter([Word.from_text("12132"), Word.from_text("12321")]), A)
        assert math.isfinite(val)


class TestWalk:
    def test_requires_moves(self):
        A = get_design(3, 5)
        cfg = WalkConfig(seed=1, steps=5)
        with pytest.raises(ValueError):
            list(walk(wtable(A, "12132"), [], cfg, A))

    def test_fiber_preservation_and_nonnegativity(self):
        A = get_design(3, 5)
        moves = enumerate_moves(A, 2)
        t0 = wtable(A, "12132", "12321", "13212")
        b0 = [0] * 6
        for j in t0:
            for i, c in enumerate(A.columns[j]):
                b0[i] += c
        cfg = WalkConfig(seed=9, steps=2000)
        for state in walk(t0, moves, cfg, A):
            assert len(state) == len(t0)
            b = [0] * 6
            for j in state:
                for i, c in enumerate(A.columns[j]):
                    b[i] += c
            assert b == b0

    def test_reproducibility(self):
        A = get_design(3, 5)
        moves = enumerate_moves(A, 2)
        t0 = wtable(A, "12132", "12321")
        cfg = WalkConfig(seed=123, steps=500)
        s1 = list(walk(t0, moves, cfg, A))
        s2 = list(walk(t0, moves, cfg, A))
        assert s1 == s2
        s3 = list(walk(t0, moves, WalkConfig(seed=124, steps=500), A))
        assert s1 != s3

    def test_visits_figure_companion(self):
        from thmc.markov import minimal_markov_basis

        A = get_design(3, 5)
        moves = minimal_markov_basis(A, 2, 2)
        t0 = wtable(A, "12132", "12321")
        companion = wtable(A, "13212", "21232")
        cfg = WalkConfig(seed=5, steps=30_000)
        assert companion in set(walk(t0, moves, cfg, A))

    def test_uniform_stationary_distribution(self):
        # fully enumerated small fiber: empirical visit frequencies approach
        # uniform; total variation within 0.05 under the minimal basis
        from thmc.markov import _multisets_by_marginal, minimal_markov_basis

        A = get_design(3, 4)
        moves = minimal_markov_basis(A, 2, 3)
        members = next(
            ms
            for ms in _multisets_by_marginal(A, 2, 10**6).values()
            if len(ms) == 15
        )
        t0 = members[0]
        counts = Counter()
        cfg = WalkConfig(seed=31, steps=400_000, burn_in=2000)
        for step, state in enumerate(walk(t0, moves, cfg, A)):
            if step >= cfg.burn_in:
                counts[state] += 1
        n = sum(counts.values())
        f = len(members)
        tv = 0.5 * sum(abs(counts.get(m, 0) / n - 1 / f) for m in members)
        assert set(counts) <= set(members)
        assert tv <= 0.05, tv


class TestExactTest:
    def test_single_table_fiber_pvalue_one(self):
        A = get_design(3, 4)
        # a marginal reached by exactly one table: three copies of one word
        t0 = wtable(A, "1212", "1212", "1212")
        fib = fiber_enumerate(
            tuple(sum(A.columns[j][i] for j in t0) for i in range(6)), A
        )
        assert len(fib.members) == 1
        moves = enumerate_moves(A, 2)
        res = exact_test(t0, A, moves, WalkConfig(seed=3, steps=500))
        assert res.p_value == 1.0

    def test_extreme_tables_of_enumerated_fiber(self):
        A = get_design(3, 5)
        moves = enumerate_moves(A, 2)
        t0 = wtable(A, "12132", "12321")
        b = tuple(sum(A.columns[j][i] for j in t0) for i in range(6))
        fib = fiber_enumerate(b, A)
        from thmc.mcmc import _FittedModel

        model = _FittedModel(t0, A)
        stats = {m: model.pearson(m) for m in fib.members}
        lo = min(fib.members, key=lambda m: (stats[m], m))
        hi = max(fib.members, key=lambda m: (stats[m], m))
        cfg = WalkConfig(seed=11, steps=30_000, burn_in=500)
        res_lo = exact_test(lo, A, moves, cfg)
        # minimizer: every sampled table scores >= it, p near 1
        assert res_lo.p_value > 0.9
        res_hi = exact_test(hi, A, moves, cfg)
        # maximizer: p approaches (multiplicity of max) / fiber size
        mult = sum(1 for m in fib.members if stats[m] == stats[hi])
        target = mult / len(fib.members)
        assert abs(res_hi.p_value - target) < 0.05
        assert res_hi.std_error < 0.01

    def test_result_fields(self):
        A = get_design(3, 5)
        moves = enumerate_moves(A, 2)
        t0 = wtable(A, "12132", "12321", "32131")
        res = exact_test(
            t0, A, moves, WalkConfig(seed=7, steps=2000, burn_in=100, thinning=4)
        )
        assert res.samples == (2000 - 100 + 3) // 4
        assert 0 <= res.p_value <= 1
        assert res.sample_min <= res.sample_mean <= res.sample_max
        assert res.observed_exact is not None
        doc = res.to_dict()
        assert doc["statistic"] == "pearson"

    def test_g2_variant_runs(self):
        A = get_design(3, 5)
        moves = enumerate_moves(A, 2)
        t0 = wtable(A, "12132", "12321")
        res = exact_test(t0, A, moves, WalkConfig(seed=2, steps=1000), statistic="g2")
        assert 0 <= res.p_value <= 1
        assert res.observed_exact is None

    def test_unknown_statistic(self):
        A = get_design(3, 5)
        with pytest.raises(ValueError):
            exact_test(
                wtable(A, "12132"),
                A,
                enumerate_moves(A, 2),
                WalkConfig(seed=1, steps=10),
                statistic="wilks",
            )
