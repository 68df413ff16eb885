"""Design matrices for the no-self-loop homogeneous chain model.

The design matrix for S states at time T has one row per ordered state pair
(lexicographic) and one column per word of length T (lexicographic); the
column of a word is its transition-count vector.  Data multisets map to
sufficient statistics b = A.u; the lattice ZA and cone(A) memberships decide
where a candidate statistic can live.
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from .exactla import IntegerLattice, in_cone
from .words import (
    DEFAULT_WORD_CAP,
    Word,
    enumerate_words,
    pair_list,
    transition_counts,
    word_count,
)


@dataclass(frozen=True)
class Marginal:
    """Summed transition counts of a data multiset, with its degree n."""

    b: tuple[int, ...]
    n: int


class DesignMatrix:
    """Word-indexed transition-count matrix, columns in lexicographic order.

    Duplicate columns are kept: distinct words may share a count vector, and
    the word-indexed structure is what moves and fibers live on.
    """

    def __init__(self, S: int, T: int, cap: int = DEFAULT_WORD_CAP):
        self.S = S
        self.T = T
        self.pairs = pair_list(S)
        self.words: list[Word] = enumerate_words(S, T, cap=cap)
        self.columns: list[tuple[int, ...]] = [
            transition_counts(w, S) for w in self.words
        ]
        self.word_index: dict[Word, int] = {w: j for j, w in enumerate(self.words)}
        self._np: Optional[np.ndarray] = None
        self._lattice: Optional[IntegerLattice] = None
        self._distinct: Optional[list[tuple[int, ...]]] = None

    @property
    def dim(self) -> int:
        return len(self.pairs)

    @property
    def np_columns(self) -> np.ndarray:
        """dim x m integer matrix (int64; entries are at most T-1)."""
        if self._np is None:
            self._np = np.array(
                [[col[i] for col in self.columns] for i in range(self.dim)],
                dtype=np.int64,
            )
        return self._np

    def distinct_columns(self) -> list[tuple[int, ...]]:
        if self._distinct is None:
            self._distinct = sorted(set(self.columns))
        return self._distinct

    def column(self, w: Word) -> tuple[int, ...]:
        return self.columns[self.word_index[w]]

    # -- statistics ---------------------------------------------------------

    def sufficient_statistics(self, multiset: Counter | Iterable[Word]) -> Marginal:
        """Marginal b = A.u and degree n = |W| of a word multiset."""
        if not isinstance(multiset, Counter):
            multiset = Counter(multiset)
        b = [0] * self.dim
        n = 0
        for w, mult in multiset.items():
            if len(w) != self.T:
                raise ValueError(f"word {w.text} has length {len(w)}, matrix has T={self.T}")
            j = self.word_index.get(w)
            if j is None:
                raise ValueError(f"word {w.text} not over 1..{self.S}")
            n += mult
            for i, c in enumerate(self.columns[j]):
                b[i] += mult * c
        return Marginal(tuple(b), n)

    def data_vector(self, multiset: Counter) -> dict[int, int]:
        """Sparse word-index representation of a data multiset."""
        return {self.word_index[w]: m for w, m in multiset.items()}

    # -- membership ---------------------------------------------------------

    @property
    def lattice(self) -> IntegerLattice:
        if self._lattice is None:
            lat = IntegerLattice(self.dim)
            for col in self.distinct_columns():
                lat.add(col)
            self._lattice = lat
        return self._lattice

    def lattice_membership(self, x: Sequence[int]) -> bool:
        """True iff x is an integer combination of columns."""
        if len(x) != self.dim:
            raise ValueError("dimension mismatch")
        return list(map(int, x)) in self.lattice

    def cone_membership(
        self, x: Sequence[int | Fraction], facets=None
    ) -> bool:
        """True iff x is a nonnegative combination of columns.

        Decided by exact LP over the distinct columns; `facets` may carry an
        already-certified inequality description (list of (normal, offset)
        pairs valid for the cone) to use as a fast equivalent test.
        """
        if len(x) != self.dim:
            raise ValueError("dimension mismatch")
        if facets is not None:
            return all(
                sum(Fraction(c) * Fraction(e) for c, e in zip(normal, x)) >= rhs
                for normal, rhs in facets
            )
        cols = self.distinct_columns()
        np_cols = np.array(
            [[col[i] for col in cols] for i in range(self.dim)], dtype=np.int64
        )
        return in_cone(cols, x, np_cols=np_cols) is not None

    def model_probabilities(
        self, theta: Sequence[int | Fraction]
    ) -> list[Fraction]:
        """Exact word probabilities theta^(a_w) / sum_v theta^(a_v)."""
        if len(theta) != self.dim:
            raise ValueError("need one positive parameter per ordered pair")
        th = [Fraction(t) for t in theta]
        if any(t <= 0 for t in th):
            raise ValueError("parameters must be positive")
        monomials = []
        for col in self.columns:
            m = Fraction(1)
            for t, e in zip(th, col):
                if e:
                    m *= t**e
            monomials.append(m)
        total = sum(monomials)
        return [m / total for m in monomials]

    # -- export -------------------------------------------------------------

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(["pair"] + [w.text for w in self.words])
        for i, (a, b) in enumerate(self.pairs):
            writer.writerow([f"{a}{b}"] + [col[i] for col in self.columns])
        return out.getvalue()

    def write_csv(self, fh) -> None:
        """Streaming CSV write (row at a time; fine for large T)."""
        writer = csv.writer(fh)
        writer.writerow(["pair"] + [w.text for w in self.words])
        for i, (a, b) in enumerate(self.pairs):
            writer.writerow([f"{a}{b}"] + [col[i] for col in self.columns])

    def to_json(self) -> str:
        return json.dumps(
            {
                "S": self.S,
                "T": self.T,
                "row_order": [f"{a}{b}" for a, b in self.pairs],
                "columns": [
                    {"word": w.text, "counts": list(col)}
                    for w, col in zip(self.words, self.columns)
                ],
            }
        )


@lru_cache(maxsize=32)
def get_design(S: int, T: int, cap: int = DEFAULT_WORD_CAP) -> DesignMatrix:
    """Cached design matrices (they are immutable after construction)."""
    return DesignMatrix(S, T, cap=cap)


def expected_column_count(S: int, T: int) -> int:
    return word_count(S, T)
