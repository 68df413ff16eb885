import random
from collections import Counter

import pytest

from thmc.words import (
    CapExceededError,
    Word,
    decompose_into_paths,
    degree_imbalances,
    enumerate_words,
    eulerian_path,
    has_eulerian_path,
    read_words,
    state_graph,
    transition_counts,
    transpose_counts,
    word_count,
    write_words,
)


def counts3(text):
    return transition_counts(Word.from_text(text), 3)


class TestWord:
    def test_rejects_self_loops(self):
        with pytest.raises(ValueError):
            Word([1, 1, 2])

    def test_rejects_short_and_bad_labels(self):
        with pytest.raises(ValueError):
            Word([1])
        with pytest.raises(ValueError):
            Word([0, 1])
        with pytest.raises(ValueError):
            Word([1, 4], S=3)

    def test_text_roundtrip(self):
        w = Word.from_text("12132")
        assert w.text == "12132"
        assert w.T == 5

    def test_reverse(self):
        assert Word.from_text("12132").reverse().text == "23121"
        assert Word.from_text("121").reverse().text == "121"


class TestEnumeration:
    def test_3_4(self):
        words = enumerate_words(3, 4)
        assert len(words) == 24
        assert words[0].text == "1212"
        assert words[-1].text == "3232"
        assert len(set(words)) == 24

    def test_3_5_count(self):
        assert len(enumerate_words(3, 5)) == 48

    def test_2_3_alternating(self):
        assert [w.text for w in enumerate_words(2, 3)] == ["121", "212"]

    @pytest.mark.parametrize("T", range(2, 15))
    def test_cardinality_3_states(self, T):
        assert len(enumerate_words(3, T)) == 3 * 2 ** (T - 1) == word_count(3, T)

    def test_lexicographic_no_duplicates(self):
        words = enumerate_words(3, 6)
        assert words == sorted(words)
        assert len(set(words)) == len(words)

    def test_cap(self):
        with pytest.raises(CapExceededError):
            enumerate_words(3, 12, cap=100)


class TestTransitionCounts:
    def test_printed_columns(self):
        assert counts3("1212") == (2, 0, 1, 0, 0, 0)
        assert counts3("1213") == (1, 1, 1, 0, 0, 0)
        assert counts3("3232") == (0, 0, 0, 1, 0, 2)

    def test_sum_is_T_minus_1(self):
        for w in enumerate_words(3, 7):
            assert sum(transition_counts(w, 3)) == 6

    def test_imbalances_at_most_one(self):
        for w in enumerate_words(3, 8):
            assert all(abs(d) <= 1 for d in degree_imbalances(transition_counts(w, 3)))

    def test_reverse_transposes_counts(self):
        assert counts3("1213") == (1, 1, 1, 0, 0, 0)
        assert counts3("3121") == (1, 0, 1, 0, 1, 0)
        assert transpose_counts(counts3("1213")) == counts3("3121")
        for w in enumerate_words(3, 6):
            assert transition_counts(w.reverse(), 3) == transpose_counts(
                transition_counts(w, 3)
            )


class TestStateGraph:
    def test_pair_of_words(self):
        W = Counter([Word.from_text("12132"), Word.from_text("12321")])
        assert state_graph(W, 3) == (2, 1, 2, 1, 0, 2)

    def test_equal_graphs_for_companion_multiset(self):
        W = Counter([Word.from_text("12132"), Word.from_text("12321")])
        V = Counter([Word.from_text("13212"), Word.from_text("21232")])
        assert state_graph(W, 3) == state_graph(V, 3)

    def test_singleton(self):
        assert state_graph([Word.from_text("1212")], 3) == (2, 0, 1, 0, 0, 0)

    def test_multiplicity(self):
        W = Counter({Word.from_text("121"): 3})
        assert state_graph(W, 3) == (3, 0, 3, 0, 0, 0)

    def test_same_graph_multisets_share_all_decompositions(self):
        # multisets with equal summed counts induce the same multigraph, so
        # any one of them can be recovered as a trail decomposition of it
        rng = random.Random(7)
        words = enumerate_words(3, 5)
        for _ in range(50):
            A = Counter(rng.choices(words, k=2))
            x = state_graph(A, 3)
            paths = decompose_into_paths(x, 2, 5)
            assert paths is not None and state_graph(Counter(paths), 3) == x


class TestEulerian:
    def test_simple_cases(self):
        assert has_eulerian_path((1, 0, 1, 0, 0, 0)) is True
        assert has_eulerian_path((2, 0, 0, 0, 0, 0)) is False
        assert has_eulerian_path((0, 2, 0, 0, 0, 0)) is False
        assert has_eulerian_path((0, 0, 0, 0, 0, 0)) is False

    def test_every_word_graph_has_trail(self):
        for T in (3, 5, 8):
            for w in enumerate_words(3, T):
                x = transition_counts(w, 3)
                assert has_eulerian_path(x)
                v = eulerian_path(x)
                assert v is not None and transition_counts(v, 3) == x

    def test_balanced_connected_vectors_have_trail(self):
        # all x with sum T-1, |out-in| <= 1 everywhere, connected support
        T = 6
        from itertools import product

        for x in product(range(T), repeat=6):
            if sum(x) != T - 1:
                continue
            if has_eulerian_path(x):
                w = eulerian_path(x)
                assert w is not None and transition_counts(w, 3) == x

    def test_specific_paths(self):
        assert eulerian_path((2, 0, 1, 0, 0, 0)).text == "1212"
        w = eulerian_path((1, 0, 0, 1, 1, 0))
        assert w is not None and transition_counts(w, 3) == (1, 0, 0, 1, 1, 0)
        assert eulerian_path((0, 2, 0, 0, 0, 0)) is None

    def test_disconnected_balanced_vector(self):
        # S=4, two disjoint 2-cycles 1<->2 and 3<->4: balanced but disconnected
        x = [0] * 12
        x[0], x[3], x[8], x[11] = 1, 1, 1, 1
        assert has_eulerian_path(x) is False


class TestDecompose:
    def test_figure_pair(self):
        W = Counter([Word.from_text("12132"), Word.from_text("12321")])
        x = state_graph(W, 3)
        paths = decompose_into_paths(x, 2, 5)
        assert paths is not None and len(paths) == 2
        assert state_graph(Counter(paths), 3) == x

    def test_single_column_is_word_itself(self):
        for w in enumerate_words(3, 6):
            x = transition_counts(w, 3)
            paths = decompose_into_paths(x, 1, 6)
            assert paths is not None and len(paths) == 1
            assert transition_counts(paths[0], 3) == x

    def test_four_state_disjoint_components(self):
        x = [0] * 12
        # pair order for S=4: 12,13,14,21,23,24,31,32,34,41,42,43
        x[0], x[3], x[8], x[11] = 4, 3, 4, 3
        paths = decompose_into_paths(x, 2, 8)
        assert paths is not None
        assert sorted(p.text for p in paths) == ["12121212", "34343434"]

    def test_impossible_split(self):
        # 8 edges in one component, 6 in the other: no 7+7 split
        x = [0] * 12
        x[0], x[3], x[8], x[11] = 4, 4, 3, 3
        x2 = list(x)
        x2[0], x2[3], x2[8], x2[11] = 4, 4, 4, 2
        assert decompose_into_paths(x2, 2, 8) is None

    def test_precondition(self):
        with pytest.raises(ValueError):
            decompose_into_paths((1, 0, 0, 0, 0, 0), 2, 5)

    def test_zero(self):
        assert decompose_into_paths((0,) * 6, 0, 5) == []

    def test_random_multisets_roundtrip(self):
        rng = random.Random(12)
        words = enumerate_words(3, 7)
        for _ in range(25):
            n = rng.randint(1, 3)
            W = Counter(rng.choices(words, k=n))
            x = state_graph(W, 3)
            paths = decompose_into_paths(x, n, 7)
            assert paths is not None
            assert state_graph(Counter(paths), 3) == x


class TestWordIO:
    def test_roundtrip(self):
        W = Counter(
            {Word.from_text("12132"): 2, Word.from_text("12321"): 1}
        )
        text = write_words(W)
        assert read_words(text.splitlines()) == W

    def test_comments_and_blanks(self):
        W = read_words(["# header", "", "121  ", "121", "# x", "212"])
        assert W == Counter({Word.from_text("121"): 2, Word.from_text("212"): 1})
