"""Exact conditional goodness-of-fit testing on fibers.

The walk is the classic symmetric fiber random walk: propose a uniformly
drawn signed move, stay put when it would go negative.  Its stationary law
on a connected fiber is uniform, so the fraction of sampled tables whose
statistic reaches the observed one estimates the exact conditional p-value
(observed table included on both sides of the ratio: the usual conservative
Monte Carlo convention).

Tables and moves stay exact integers; the default Pearson statistic is
computed in exact rational arithmetic against the time-homogeneous fit
(empirical transition frequencies of the pooled data), the likelihood-ratio
alternative uses floats for its logarithms.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence

from .design import DesignMatrix
from .markov import Move
from .words import Word, pair_index


@dataclass(frozen=True)
class WalkConfig:
    seed: int
    steps: int
    burn_in: int = 0
    thinning: int = 1

    def __post_init__(self):
        if self.steps <= self.burn_in:
            raise ValueError("steps must exceed burn_in")
        if self.thinning < 1:
            raise ValueError("thinning must be >= 1")


@dataclass(frozen=True)
class TestResult:
    __test__ = False  # not a pytest class, despite the name

    statistic: str
    observed: float
    observed_exact: Optional[str]
    p_value: float
    std_error: float
    samples: int
    sample_min: float
    sample_max: float
    sample_mean: float

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "observed": self.observed,
            "observed_exact": self.observed_exact,
            "p_value": self.p_value,
            "std_error": self.std_error,
            "samples": self.samples,
            "sample_min": self.sample_min,
            "sample_max": self.sample_max,
            "sample_mean": self.sample_mean,
        }


def as_table(u, A: DesignMatrix) -> tuple[int, ...]:
    """Normalize data (Counter of words or word-index multiset) to a sorted
    word-index tuple."""
    if isinstance(u, Counter):
        out = []
        for w, mult in u.items():
            j = A.word_index[w if isinstance(w, Word) else Word.from_text(str(w))]
            out.extend([j] * mult)
        return tuple(sorted(out))
    return tuple(sorted(int(j) for j in u))


class _FittedModel:
    """Per-fiber cache of the time-homogeneous fit: expected counts depend
    only on the marginal, which the walk preserves."""

    def __init__(self, table: tuple[int, ...], A: DesignMatrix):
        if not table:
            raise ValueError("empty data")
        self.A = A
        self.N = len(table)
        idx = pair_index(A.S)
        b = [0] * A.dim
        for j in table:
            for i, c in enumerate(A.columns[j]):
                b[i] += c
        self.marginal = tuple(b)
        out_total = [0] * (A.S + 1)
        for (i, _), k in idx.items():
            out_total[i] += b[k]
        self.phat: dict[tuple[int, int], Fraction] = {}
        for (i, j), k in idx.items():
            self.phat[(i, j)] = (
                Fraction(b[k], out_total[i]) if out_total[i] else Fraction(0)
            )
        # total fitted mass over all words, via the transfer matrix
        S = A.S
        M = [[self.phat.get((i, j), Fraction(0)) for j in range(1, S + 1)] for i in range(1, S + 1)]
        vec = [Fraction(1)] * S
        for _ in range(A.T - 1):
            vec = [
                sum(M[i][j] * vec[j] for j in range(S)) for i in range(S)
            ]
        self.total_mass = sum(vec)
        self._word_mass: dict[int, Fraction] = {}

    def word_mass(self, j: int) -> Fraction:
        m = self._word_mass.get(j)
        if m is None:
            w = self.A.words[j]
            m = Fraction(1)
            for a, b in zip(w, w[1:]):
                m *= self.phat[(a, b)]
            self._word_mass[j] = m
        return m

    def pearson(self, table: tuple[int, ...]) -> Fraction:
        """Pearson chi-square against the fitted homogeneous model, exact."""
        counts = Counter(table)
        support_stat = Fraction(0)
        support_mass = Fraction(0)
        for j, u_j in counts.items():
            mass = self.word_mass(j)
            if mass == 0:
                raise AssertionError("observed word with zero fitted mass")
            expected = self.N * mass
            support_stat += (u_j - expected) ** 2 / expected
            support_mass += mass
        return support_stat + self.N * (self.total_mass - support_mass)

    def g2(self, table: tuple[int, ...]) -> float:
        """Likelihood-ratio statistic 2 sum u log(u/e), floating point."""
        counts = Counter(table)
        total = 0.0
        for j, u_j in counts.items():
            expected = self.N * self.word_mass(j)
            total += 2.0 * u_j * math.log(u_j / float(expected))
        return total


def chi_square_statistic(u, A: DesignMatrix) -> Fraction:
    """Pearson X^2 of a data multiset against its own homogeneous fit."""
    table = as_table(u, A)
    return _FittedModel(table, A).pearson(table)


def g2_statistic(u, A: DesignMatrix) -> float:
    table = as_table(u, A)
    return _FittedModel(table, A).g2(table)


STATISTICS = ("pearson", "g2")


def walk(
    u0,
    moves: Sequence[Move],
    cfg: WalkConfig,
    A: DesignMatrix,
) -> Iterator[tuple[int, ...]]:
    """Symmetric fiber walk: one emitted table per step, first state included.

    Every emitted table has the marginal of u0; identical seeds give
    identical streams.
    """
    if not moves:
        raise ValueError("need a nonempty move set")
    table = as_table(u0, A)
    rng = random.Random(cfg.seed)
    nm = len(moves)
    for _ in range(cfg.steps):
        k = rng.randrange(2 * nm)
        z = moves[k % nm] if k < nm else moves[k % nm].negated()
        nxt = z.apply(table)
        if nxt is not None:
            table = nxt
        yield table


def exact_test(
    u_obs,
    A: DesignMatrix,
    moves: Sequence[Move],
    cfg: WalkConfig,
    statistic: str = "pearson",
) -> TestResult:
    """Monte Carlo exact test of time-homogeneity on the observed fiber."""
    if statistic not in STATISTICS:
        raise ValueError(f"statistic must be one of {STATISTICS}")
    table = as_table(u_obs, A)
    model = _FittedModel(table, A)
    evaluate: Callable = model.pearson if statistic == "pearson" else model.g2
    observed = evaluate(table)
    n_ge = 0
    n_samples = 0
    total = 0.0
    lo = math.inf
    hi = -math.inf
    for step, state in enumerate(walk(table, moves, cfg, A)):
        if step < cfg.burn_in or (step - cfg.burn_in) % cfg.thinning:
            continue
        val = evaluate(state)
        n_samples += 1
        if val >= observed:
            n_ge += 1
        fval = float(val)
        total += fval
        lo = min(lo, fval)
        hi = max(hi, fval)
    p = (1 + n_ge) / (1 + n_samples)
    se = math.sqrt(p * (1 - p) / n_samples) if n_samples else math.nan
    return TestResult(
        statistic=statistic,
        observed=float(observed),
        observed_exact=str(observed) if isinstance(observed, Fraction) else None,
        p_value=p,
        std_error=se,
        samples=n_samples,
        sample_min=lo,
        sample_max=hi,
        sample_mean=total / n_samples if n_samples else math.nan,
    )
