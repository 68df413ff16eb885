"""Self-loop-free words, transition counts, state multigraphs, trail decompositions.

A word is a sequence of states from {1,..,S} of length T >= 2 in which
consecutive states differ.  Its transition-count vector lists, for every
ordered pair (i,j) with i != j in lexicographic pair order, how often the
step i->j occurs.  For S=3 the pair order is

    [(1,2), (1,3), (2,1), (2,3), (3,1), (3,2)]

so count vectors are 6-tuples [x12, x13, x21, x23, x31, x32].  Count vectors
double as edge multiplicities of a directed multigraph on the states (the
state graph); words are trails in that graph.
"""

from __future__ import annotations

from collections import Counter
from functools import lru_cache
from typing import Iterable, Optional, Sequence

DEFAULT_WORD_CAP = 2**20


class CapExceededError(RuntimeError):
    """An enumeration would exceed its configured resource cap."""


class Word(bytes):
    """A self-loop-free state sequence, stored as one byte per state label."""

    __slots__ = ()

    def __new__(cls, states: Iterable[int], S: Optional[int] = None) -> "Word":
        w = super().__new__(cls, bytes(states))
        if len(w) < 2:
            raise ValueError(f"word must have length >= 2, got {len(w)}")
        for a, b in zip(w, w[1:]):
            if a == b:
                raise ValueError(f"self-loop {a}->{b} in word {w.text}")
        lo, hi = min(w), max(w)
        if lo < 1 or (S is not None and hi > S):
            raise ValueError(f"state labels of {list(w)} outside 1..{S}")
        return w

    @classmethod
    def from_text(cls, text: str, S: Optional[int] = None) -> "Word":
        return cls((int(ch) for ch in text.strip()), S=S)

    @property
    def text(self) -> str:
        return "".join(str(s) for s in self)

    @property
    def T(self) -> int:
        return len(self)

    def reverse(self) -> "Word":
        return Word(self[::-1])

    def __repr__(self) -> str:
        return f"Word({self.text})"


def pair_list(S: int) -> list[tuple[int, int]]:
    """Ordered state pairs (i,j), i != j, in lexicographic order."""
    return [(i, j) for i in range(1, S + 1) for j in range(1, S + 1) if i != j]


@lru_cache(maxsize=None)
def pair_index(S: int) -> dict[tuple[int, int], int]:
    return {p: k for k, p in enumerate(pair_list(S))}


def states_for_dim(dim: int) -> int:
    """Number of states S with S*(S-1) == dim."""
    S = round((1 + (1 + 4 * dim) ** 0.5) / 2)
    if S * (S - 1) != dim:
        raise ValueError(f"{dim} is not S*(S-1) for any integer S")
    return S


def word_count(S: int, T: int) -> int:
    return S * (S - 1) ** (T - 1)


def enumerate_words(S: int, T: int, cap: int = DEFAULT_WORD_CAP) -> list[Word]:
    """All self-loop-free words of length T over {1..S}, lexicographic."""
    if S < 2 or T < 2:
        raise ValueError(f"need S >= 2 and T >= 2, got S={S}, T={T}")
    total = word_count(S, T)
    if total > cap:
        raise CapExceededError(f"{total} words for S={S}, T={T} exceeds cap {cap}")
    labels = range(1, S + 1)
    out: list[Word] = []
    prefix = bytearray(T)

    def extend(pos: int) -> None:
        if pos == T:
            out.append(bytes.__new__(Word, bytes(prefix)))
            return
        prev = prefix[pos - 1] if pos else 0
        for s in labels:
            if s != prev:
                prefix[pos] = s
                extend(pos + 1)

    extend(0)
    return out


def transition_counts(w: Sequence[int], S: int) -> tuple[int, ...]:
    """Count vector of a word: entry (i,j) = number of steps i->j."""
    idx = pair_index(S)
    counts = [0] * (S * (S - 1))
    for a, b in zip(w, w[1:]):
        counts[idx[(a, b)]] += 1
    return tuple(counts)


def transpose_counts(x: Sequence[int]) -> tuple[int, ...]:
    """Swap every x_ij with x_ji (count vector of the reversed word)."""
    S = states_for_dim(len(x))
    idx = pair_index(S)
    out = [0] * len(x)
    for (i, j), k in idx.items():
        out[idx[(j, i)]] = x[k]
    return tuple(out)


def state_graph(multiset: Counter | Iterable[Word], S: int) -> tuple[int, ...]:
    """Summed transition counts of a word multiset (edge multiplicities of G(W))."""
    if not isinstance(multiset, Counter):
        multiset = Counter(multiset)
    if not multiset:
        raise ValueError("empty multiset has no state graph")
    total = [0] * (S * (S - 1))
    for w, mult in multiset.items():
        if mult < 0:
            raise ValueError("negative multiplicity")
        for k, c in enumerate(transition_counts(w, S)):
            total[k] += mult * c
    return tuple(total)


def degree_imbalances(x: Sequence[int]) -> list[int]:
    """out-degree minus in-degree per vertex of the multigraph G(x)."""
    S = states_for_dim(len(x))
    delta = [0] * (S + 1)
    for (i, j), k in pair_index(S).items():
        delta[i] += x[k]
        delta[j] -= x[k]
    return delta[1:]


def _support_components(x: Sequence[int], S: int) -> list[set[int]]:
    """Weakly connected components of non-isolated vertices of G(x)."""
    idx = pair_index(S)
    adj: dict[int, set[int]] = {}
    for (i, j), k in idx.items():
        if x[k] > 0:
            adj.setdefault(i, set()).add(j)
            adj.setdefault(j, set()).add(i)
    comps = []
    seen: set[int] = set()
    for v in sorted(adj):
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for nb in adj[u]:
                if nb not in comp:
                    comp.add(nb)
                    stack.append(nb)
        seen |= comp
        comps.append(comp)
    return comps


def has_eulerian_path(x: Sequence[int]) -> bool:
    """True iff G(x) admits a trail using every edge exactly once.

    Conditions: weak connectivity of the support (non-isolated vertices) and
    at most one vertex each with out-in = +1 / in-out = +1, rest balanced.
    """
    if sum(x) == 0:
        return False
    S = states_for_dim(len(x))
    if any(c < 0 for c in x):
        return False
    delta = degree_imbalances(x)
    if any(abs(d) > 1 for d in delta):
        return False
    if sum(1 for d in delta if d == 1) > 1:
        return False
    return len(_support_components(x, S)) == 1


def eulerian_path(x: Sequence[int]) -> Optional[Word]:
    """A word w with transition_counts(w) = x, or None (Hierholzer)."""
    if not has_eulerian_path(x):
        return None
    S = states_for_dim(len(x))
    idx = pair_index(S)
    remaining = list(x)
    out_edges: dict[int, list[int]] = {i: [] for i in range(1, S + 1)}
    for (i, j), k in idx.items():
        if x[k] > 0:
            out_edges[i].append(j)
    delta = degree_imbalances(x)
    starts = [v + 1 for v, d in enumerate(delta) if d == 1]
    if starts:
        start = starts[0]
    else:
        start = min(i for i in out_edges if any(remaining[idx[(i, j)]] for j in out_edges[i]))
    # Hierholzer with an explicit stack; smallest available target first.
    stack = [start]
    trail: list[int] = []
    while stack:
        v = stack[-1]
        nxt = None
        for j in out_edges[v]:
            if remaining[idx[(v, j)]] > 0:
                nxt = j
                break
        if nxt is None:
            trail.append(stack.pop())
        else:
            remaining[idx[(v, nxt)]] -= 1
            stack.append(nxt)
    trail.reverse()
    return Word(trail)


def _boundary_feasible(counts: list[int], S: int, T: int) -> bool:
    """Can the remaining multigraph split into trails of exactly T-1 edges?

    Necessary conditions only: per weak component, the edge count must be a
    multiple of T-1 and the positive imbalances must fit the trail budget.
    """
    idx = pair_index(S)
    for comp in _support_components(counts, S):
        edges = sum(counts[k] for (i, j), k in idx.items() if i in comp)
        if edges % (T - 1):
            return False
        budget = edges // (T - 1)
        pos = 0
        for v in comp:
            d = sum(counts[idx[(v, j)]] for j in range(1, S + 1) if j != v) - sum(
                counts[idx[(j, v)]] for j in range(1, S + 1) if j != v
            )
            if d > 0:
                pos += d
        if pos > budget:
            return False
    return True


def decompose_into_paths(
    x: Sequence[int], n: int, T: int, node_cap: int = 20_000_000
) -> Optional[list[Word]]:
    """Split x into n words of length T, or None if impossible.

    Exhaustive depth-first backtracking over edge assignments with dead-state
    memoization; this is the brute-force semigroup-membership oracle, so
    completeness matters more than speed.
    """
    if n < 0 or T < 2:
        raise ValueError("need n >= 0 and T >= 2")
    if sum(x) != n * (T - 1):
        raise ValueError(f"sum(x)={sum(x)} != n(T-1)={n * (T - 1)}")
    if any(c < 0 for c in x):
        raise ValueError("negative transition count")
    if n == 0:
        return []
    S = states_for_dim(len(x))
    idx = pair_index(S)
    targets = {i: [j for j in range(1, S + 1) if j != i] for i in range(1, S + 1)}
    counts = list(x)
    dead: set[tuple[tuple[int, ...], int]] = set()
    paths: list[list[int]] = []
    current: list[int] = []
    nodes = 0

    def out_surplus(v: int) -> int:
        return sum(counts[idx[(v, j)]] for j in targets[v]) - sum(
            counts[idx[(j, v)]] for j in targets[v]
        )

    def search(k: int, cur: int) -> bool:
        # cur == 0 encodes the boundary before starting path k.
        nonlocal nodes
        nodes += 1
        if nodes > node_cap:
            raise CapExceededError(f"decomposition search exceeded {node_cap} nodes")
        if k == n:
            return True
        key = (tuple(counts), cur)
        if key in dead:
            return False
        if cur == 0:
            if not _boundary_feasible(counts, S, T):
                dead.add(key)
                return False
            cands = sorted(
                (v for v in range(1, S + 1) if any(counts[idx[(v, j)]] for j in targets[v])),
                key=lambda v: (-out_surplus(v), v),
            )
            for v in cands:
                current.append(v)
                if search(k, v):
                    return True
                current.pop()
            dead.add(key)
            return False
        if len(current) == T:
            paths.append(current.copy())
            current.clear()
            if search(k + 1, 0):
                return True
            current.extend(paths.pop())
            dead.add(key)
            return False
        for j in targets[cur]:
            e = idx[(cur, j)]
            if counts[e] > 0:
                counts[e] -= 1
                current.append(j)
                if search(k, j):
                    return True
                current.pop()
                counts[e] += 1
        dead.add(key)
        return False

    if search(0, 0):
        return [Word(p) for p in paths]
    return None


def read_words(lines: Iterable[str], S: Optional[int] = None) -> Counter:
    """Parse the word text format: one word per line, '#' comments, blanks skipped."""
    multiset: Counter = Counter()
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if line:
            multiset[Word.from_text(line, S=S)] += 1
    return multiset


def write_words(multiset: Counter) -> str:
    """Serialize a multiset in the word text format (multiplicity = repetition)."""
    out = []
    for w in sorted(multiset):
        out.extend([w.text] * multiset[w])
    return "\n".join(out) + ("\n" if out else "")
