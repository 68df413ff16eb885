"""Kernel moves of the design matrix, fibers, and Markov-basis machinery.

A move is an integer vector in the kernel of the design matrix with equal
positive and negative word mass; fibers are the sets of data tables sharing
a marginal.  Moves are enumerated degree by degree by grouping word
multisets with a common marginal; connectivity of every bounded-degree fiber
under a move set is the desk-scale Markov-basis check, and the bound is part
of every report because full verification is ideal generation in disguise.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from typing import Iterable, Optional, Sequence

from .design import DesignMatrix
from .words import CapExceededError, Word

DEFAULT_MULTISET_CAP = 2_000_000
DEFAULT_MOVE_CAP = 2_000_000
DEFAULT_FIBER_CAP = 100_000


@dataclass(frozen=True)
class Move:
    """Sparse kernel vector: sorted (word index, coefficient) pairs."""

    entries: tuple[tuple[int, int], ...]

    @property
    def degree(self) -> int:
        return sum(c for _, c in self.entries if c > 0)

    @property
    def plus(self) -> tuple[int, ...]:
        out = []
        for j, c in self.entries:
            if c > 0:
                out.extend([j] * c)
        return tuple(out)

    @property
    def minus(self) -> tuple[int, ...]:
        out = []
        for j, c in self.entries:
            if c < 0:
                out.extend([j] * (-c))
        return tuple(out)

    def negated(self) -> "Move":
        return Move(tuple((j, -c) for j, c in self.entries))

    @classmethod
    def from_multisets(
        cls, plus: Sequence[int], minus: Sequence[int]
    ) -> Optional["Move"]:
        """Support-disjoint canonical move from two word-index multisets."""
        coeff = Counter(plus)
        coeff.subtract(Counter(minus))
        entries = tuple(sorted((j, c) for j, c in coeff.items() if c))
        if not entries:
            return None
        if entries[-1][1] < 0:  # sign: largest-index entry positive
            entries = tuple((j, -c) for j, c in entries)
        return cls(entries)

    def apply(self, table: tuple[int, ...]) -> Optional[tuple[int, ...]]:
        """table + move as sorted word-index multisets; None if it goes negative."""
        counts = Counter(table)
        for j, c in self.entries:
            counts[j] += c
            if counts[j] < 0:
                return None
        out = []
        for j in sorted(counts):
            out.extend([j] * counts[j])
        return tuple(out)


@dataclass(frozen=True)
class Fiber:
    marginal: tuple[int, ...]
    degree: int
    members: tuple[tuple[int, ...], ...]  # sorted word-index multisets


def _marginal_of(A: DesignMatrix, multiset: Sequence[int]) -> tuple[int, ...]:
    b = [0] * A.dim
    for j in multiset:
        for i, c in enumerate(A.columns[j]):
            b[i] += c
    return tuple(b)


def _multisets_by_marginal(
    A: DesignMatrix, degree: int, cap: int
) -> dict[tuple[int, ...], list[tuple[int, ...]]]:
    from math import comb

    m = len(A.columns)
    count = comb(m + degree - 1, degree)
    if count > cap:
        raise CapExceededError(
            f"{count} multisets of degree {degree} over {m} words exceeds cap {cap}"
        )
    buckets: dict[tuple[int, ...], list[tuple[int, ...]]] = defaultdict(list)
    for ms in combinations_with_replacement(range(m), degree):
        buckets[_marginal_of(A, ms)].append(ms)
    return buckets


def enumerate_moves(
    A: DesignMatrix,
    max_degree: int,
    multiset_cap: int = DEFAULT_MULTISET_CAP,
    move_cap: int = DEFAULT_MOVE_CAP,
) -> list[Move]:
    """All support-disjoint kernel moves of degree <= max_degree, up to sign.

    Degree d moves arise as differences of distinct equal-marginal d-element
    word multisets; common words cancel, so only disjoint pairs yield new
    moves at their own degree.
    """
    found: set[Move] = set()
    for d in range(1, max_degree + 1):
        for members in _multisets_by_marginal(A, d, multiset_cap).values():
            if len(members) < 2:
                continue
            for u, v in combinations(members, 2):
                z = Move.from_multisets(u, v)
                if z is not None:
                    found.add(z)
                    if len(found) > move_cap:
                        raise CapExceededError(
                            f"move count exceeds cap {move_cap}"
                        )
    return sorted(found, key=lambda z: (z.degree, z.entries))


def verify_kernel(A: DesignMatrix, moves: Iterable[Move]) -> bool:
    """Every move must have zero marginal (A z = 0)."""
    for z in moves:
        b = [0] * A.dim
        for j, c in z.entries:
            for i, e in enumerate(A.columns[j]):
                b[i] += c * e
        if any(b):
            return False
    return True


def fiber_enumerate(
    b: Sequence[int], A: DesignMatrix, cap: int = DEFAULT_FIBER_CAP
) -> Fiber:
    """All tables with marginal b, by backtracking over word multisets."""
    b = tuple(int(e) for e in b)
    total = sum(b)
    if total % (A.T - 1):
        return Fiber(b, 0, ())
    n = total // (A.T - 1)
    if n == 0:
        return Fiber(b, 0, ((),) if not any(b) else ())
    m = len(A.columns)
    members: list[tuple[int, ...]] = []
    found = 0

    def rec(start: int, remaining: list[int], left: int, chosen: list[int]) -> None:
        nonlocal found
        if left == 0:
            if not any(remaining):
                members.append(tuple(chosen))
                found += 1
                if found > cap:
                    raise CapExceededError(f"fiber size exceeds cap {cap}")
            return
        for j in range(start, m):
            col = A.columns[j]
            if all(r >= c for r, c in zip(remaining, col)):
                chosen.append(j)
                rec(j, [r - c for r, c in zip(remaining, col)], left - 1, chosen)
                chosen.pop()

    rec(0, list(b), n, [])
    return Fiber(b, n, tuple(members))


def _minus_index(moves: Iterable[Move]) -> dict[tuple[int, ...], list[Move]]:
    index: dict[tuple[int, ...], list[Move]] = defaultdict(list)
    for z in moves:
        index[z.minus].append(z)
    return index


@lru_cache(maxsize=200_000)
def _submultisets(table: tuple[int, ...]):
    """Nonempty sub-multisets of a sorted word-index tuple."""
    items = sorted(Counter(table).items())
    subs: list[tuple[int, ...]] = [()]
    for j, mult in items:
        subs = [s + (j,) * k for s in subs for k in range(mult + 1)]
    return tuple(s for s in subs if s)


def _fiber_components(
    members: Sequence[tuple[int, ...]],
    index: dict[tuple[int, ...], list[Move]],
    active: Optional[set[Move]] = None,
    used_moves: Optional[set] = None,
) -> int:
    """Union-find connectivity of one fiber under an indexed move set."""
    pos = {u: i for i, u in enumerate(members)}
    parent = list(range(len(members)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for u in members:
        iu = find(pos[u])
        for s in _submultisets(u):
            for z in index.get(s, ()):
                if active is not None and z not in active:
                    continue
                v = z.apply(u)
                if v is None or v == u:
                    continue
                iv = find(pos[v])
                if used_moves is not None:
                    used_moves.add(z)
                if iu != iv:
                    parent[iv] = iu
                    iu = find(iu)
    return len({find(i) for i in range(len(members))})


def is_markov_basis(
    moves: Sequence[Move],
    A: DesignMatrix,
    n_max: int,
    multiset_cap: int = DEFAULT_MULTISET_CAP,
) -> tuple[bool, Optional[dict]]:
    """Connectivity of every fiber of degree <= n_max under the move set.

    Moves of degree above n_max can never apply inside such fibers and are
    ignored.  Bounded verification only: connectivity here does not certify
    connectivity at higher degrees.
    """
    usable = [z for z in moves if z.degree <= n_max]
    index = _minus_index(usable)
    for d in range(1, n_max + 1):
        for marginal, members in _multisets_by_marginal(A, d, multiset_cap).items():
            if len(members) < 2:
                continue
            if _fiber_components(members, index) != 1:
                return False, {
                    "marginal": list(marginal),
                    "degree": d,
                    "fiber_size": len(members),
                }
    return True, None


def minimal_markov_basis(
    A: DesignMatrix,
    max_degree: int,
    n_max: int,
    multiset_cap: int = DEFAULT_MULTISET_CAP,
    moves: Optional[Sequence[Move]] = None,
) -> list[Move]:
    """Greedy inclusion-minimal move subset keeping degree-<=n_max fibers
    connected; candidates are dropped in decreasing degree, lexicographic
    ties."""
    if moves is None:
        moves = enumerate_moves(A, max_degree, multiset_cap=multiset_cap)
    usable = [z for z in moves if z.degree <= n_max]
    # collect fibers with at least two members
    fibers: list[tuple[tuple[int, ...], ...]] = []
    for d in range(1, n_max + 1):
        for members in _multisets_by_marginal(A, d, multiset_cap).values():
            if len(members) >= 2:
                fibers.append(tuple(members))

    # phase 1: drop whole degree classes, largest first; removing a block in
    # one shot equals removing its members one at a time in the stated order
    # (edge sets only shrink), and it avoids materializing edges for huge
    # move sets that vanish anyway
    active_list = list(usable)
    idx_full = _minus_index(active_list)
    if not all(
        _fiber_components(members, idx_full) == 1 for members in fibers
    ):
        raise ValueError("move set does not connect all bounded fibers")
    for deg in sorted({z.degree for z in active_list}, reverse=True):
        trial = [z for z in active_list if z.degree != deg]
        idx_trial = _minus_index(trial)
        if all(
            _fiber_components(members, idx_trial) == 1 for members in fibers
        ):
            active_list = trial

    # phase 2: per-move greedy over the survivors, on materialized edges
    index = _minus_index(active_list)
    fiber_edges: list[dict[Move, list[tuple[int, int]]]] = []
    move_to_fibers: dict[Move, set[int]] = defaultdict(set)
    for fid, members in enumerate(fibers):
        pos = {u: i for i, u in enumerate(members)}
        edges: dict[Move, list[tuple[int, int]]] = defaultdict(list)
        for u in members:
            for s in _submultisets(u):
                for z in index.get(s, ()):
                    v = z.apply(u)
                    if v is not None and v != u:
                        edges[z].append((pos[u], pos[v]))
                        move_to_fibers[z].add(fid)
        fiber_edges.append(dict(edges))

    def components(fid: int, active_set: set, forest: Optional[set] = None) -> int:
        members = fibers[fid]
        parent = list(range(len(members)))

        def find(i: int) -> int:
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for z, pairs in fiber_edges[fid].items():
            if z not in active_set:
                continue
            merged = False
            for iu, iv in pairs:
                ru, rv = find(iu), find(iv)
                if ru != rv:
                    parent[rv] = ru
                    merged = True
            if merged and forest is not None:
                forest.add(z)
        return len({find(i) for i in range(len(members))})

    active = set(active_list)
    forests: list[set] = []
    for fid in range(len(fibers)):
        forest: set = set()
        if components(fid, active, forest) != 1:
            raise ValueError("move set does not connect all bounded fibers")
        forests.append(forest)
    # removal test only needs the fibers whose spanning certificate uses the
    # candidate; elsewhere the certificate survives the removal untouched
    for z in sorted(active_list, key=lambda z: (-z.degree, z.entries)):
        if z not in active:
            continue
        affected = [fid for fid in move_to_fibers.get(z, ()) if z in forests[fid]]
        active.discard(z)
        ok = True
        rebuilt = []
        for fid in affected:
            forest: set = set()
            if components(fid, active, forest) != 1:
                ok = False
                break
            rebuilt.append((fid, forest))
        if ok:
            for fid, forest in rebuilt:
                forests[fid] = forest
        else:
            active.add(z)
    return sorted(active, key=lambda z: (z.degree, z.entries))


# ---------------------------------------------------------------------------
# Degree-truncated binomial completion (Groebner evidence)


def _grevlex_greater(u: tuple[int, ...], v: tuple[int, ...]) -> bool:
    """u > v in graded reverse lexicographic order (variables = word order)."""
    if len(u) != len(v):
        return len(u) > len(v)
    cu, cv = Counter(u), Counter(v)
    for j in sorted(set(cu) | set(cv), reverse=True):
        d = cu.get(j, 0) - cv.get(j, 0)
        if d:
            return d < 0  # last nonzero of u - v negative means u greater
    return False


def _mono_sub(m: tuple[int, ...], s: tuple[int, ...]) -> Optional[tuple[int, ...]]:
    c = Counter(m)
    c.subtract(Counter(s))
    if any(v < 0 for v in c.values()):
        return None
    out = []
    for j in sorted(c):
        out.extend([j] * c[j])
    return tuple(out)


def _mono_lcm(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    ca, cb = Counter(a), Counter(b)
    out = []
    for j in sorted(set(ca) | set(cb)):
        out.extend([j] * max(ca.get(j, 0), cb.get(j, 0)))
    return tuple(out)


def _normal_form(mono: tuple[int, ...], basis: list[tuple]) -> tuple[int, ...]:
    changed = True
    while changed:
        changed = False
        for lead, trail in basis:
            rest = _mono_sub(mono, lead)
            if rest is not None:
                mono = tuple(sorted(rest + trail))
                changed = True
                break
    return mono


def groebner_degree_probe(
    A: DesignMatrix,
    max_degree: int = 3,
    pair_cap: int = 200_000,
    multiset_cap: int = DEFAULT_MULTISET_CAP,
) -> dict:
    """Degree-truncated binomial completion under grevlex word order.

    Starts from an inclusion-minimized generating set of the degree-bounded
    moves, closes under S-binomials whose lcm stays within the degree cap,
    and reports whether the truncated set is self-stable.  Evidence for the
    low-degree basis conjectures, never proof.
    """
    gens = minimal_markov_basis(A, max_degree, n_max=max_degree, multiset_cap=multiset_cap)
    basis: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    for z in gens:
        p, m = z.plus, z.minus
        lead, trail = (p, m) if _grevlex_greater(p, m) else (m, p)
        basis.append((lead, trail))
    queue = [(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))]
    processed = 0
    skipped_degree = 0
    added = 0
    while queue:
        processed += 1
        if processed > pair_cap:
            return {
                "T": A.T,
                "cap": max_degree,
                "order": "grevlex over lexicographic word order",
                "status": "aborted",
                "pairs_processed": processed,
                "basis_size": len(basis),
            }
        i, j = queue.pop()
        (L1, R1), (L2, R2) = basis[i], basis[j]
        w = _mono_lcm(L1, L2)
        if len(w) > max_degree:
            skipped_degree += 1
            continue
        m1 = tuple(sorted(_mono_sub(w, L1) + R1))
        m2 = tuple(sorted(_mono_sub(w, L2) + R2))
        n1, n2 = _normal_form(m1, basis), _normal_form(m2, basis)
        if n1 == n2:
            continue
        lead, trail = (n1, n2) if _grevlex_greater(n1, n2) else (n2, n1)
        basis.append((lead, trail))
        added += 1
        queue.extend((k, len(basis) - 1) for k in range(len(basis) - 1))
    max_basis_degree = max((len(lead) for lead, _ in basis), default=0)
    return {
        "T": A.T,
        "cap": max_degree,
        "order": "grevlex over lexicographic word order",
        "status": "closed",
        "generators": len(gens),
        "basis_size": len(basis),
        "added_by_completion": added,
        "pairs_processed": processed,
        "pairs_skipped_above_cap": skipped_degree,
        "max_basis_degree": max_basis_degree,
        "self_stable_upto_cap": True,
    }


# ---------------------------------------------------------------------------
# Moves file format


def moves_to_text(moves: Iterable[Move], A: DesignMatrix) -> str:
    lines = []
    for z in moves:
        plus = " ".join(f"+{A.words[j].text}" for j in z.plus)
        minus = " ".join(f"-{A.words[j].text}" for j in z.minus)
        lines.append(f"{plus} | {minus}")
    return "\n".join(lines) + ("\n" if lines else "")


def moves_from_text(text: str, A: DesignMatrix) -> list[Move]:
    moves = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        left, _, right = line.partition("|")
        plus = [
            A.word_index[Word.from_text(tok.lstrip("+"))]
            for tok in left.split()
        ]
        minus = [
            A.word_index[Word.from_text(tok.lstrip("-"))]
            for tok in right.split()
        ]
        z = Move.from_multisets(plus, minus)
        if z is not None:
            moves.append(z)
    return moves


def moves_to_json_dict(moves: Iterable[Move], A: DesignMatrix) -> list[dict]:
    out = []
    for z in moves:
        out.append(
            {
                "degree": z.degree,
                "plus": dict(Counter(A.words[j].text for j in z.plus)),
                "minus": dict(Counter(A.words[j].text for j in z.minus)),
            }
        )
    return out
