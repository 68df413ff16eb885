"""Exact rational and integer linear algebra.

Everything here is arbitrary precision: rationals are `fractions.Fraction`,
matrices are plain lists of rows.  No floating point.  A numpy int64 matrix
may be supplied to the simplex as a pricing accelerator; it is only ever used
for integer dot products and falls back to Python ints on overflow risk.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

import numpy as np

Vec = Sequence[int | Fraction]


def _frac_rows(M: Iterable[Vec]) -> list[list[Fraction]]:
    return [[Fraction(e) for e in row] for row in M]


def mat_rank(M: Iterable[Vec]) -> int:
    """Exact rank via Gaussian elimination over the rationals."""
    rows = _frac_rows(M)
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        inv = 1 / prow[col]
        for r in range(rank + 1, len(rows)):
            f = rows[r][col] * inv
            if f:
                rows[r] = [a - f * b for a, b in zip(rows[r], prow)]
        rank += 1
        if rank == len(rows):
            break
    return rank


def nullspace(M: Iterable[Vec]) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel {x : M x = 0}, over the rationals."""
    rows = _frac_rows(M)
    if not rows:
        return []
    ncols = len(rows[0])
    # reduced row echelon form
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [a * inv for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc]
        basis.append(tuple(v))
    return basis


def primitive(v: Sequence[int | Fraction]) -> tuple[int, ...]:
    """Scale v by a positive rational to a primitive integer vector."""
    den = lcm(*(Fraction(e).denominator for e in v)) if v else 1
    ints = [int(Fraction(e) * den) for e in v]
    g = 0
    for e in ints:
        g = gcd(g, e)
    if g > 1:
        ints = [e // g for e in ints]
    return tuple(ints)


def nullspace_int(M: Iterable[Vec]) -> list[tuple[int, ...]]:
    """Integer primitive basis of the right kernel."""
    return [primitive(v) for v in nullspace(M)]


def independent_rows(M: Sequence[Vec], limit: Optional[int] = None) -> list[int]:
    """Indices of a greedy maximal linearly independent subset of rows."""
    chosen: list[int] = []
    echelon: list[list[Fraction]] = []
    for i, row in enumerate(M):
        v = [Fraction(e) for e in row]
        for e in echelon:
            piv = next((c for c, a in enumerate(e) if a), None)
            if piv is not None and v[piv]:
                f = v[piv] / e[piv]
                v = [a - f * b for a, b in zip(v, e)]
        if any(v):
            echelon.append(v)
            chosen.append(i)
            if limit is not None and len(chosen) == limit:
                break
    return chosen


def det(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (Bareiss)."""
    n = len(M)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k]), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[-1][-1]


def solve_square(M: Sequence[Vec], b: Vec) -> Optional[list[Fraction]]:
    """Solve M x = b exactly for square nonsingular M; None if singular."""
    n = len(M)
    aug = [[Fraction(e) for e in row] + [Fraction(b[i])] for i, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [a * inv for a in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * c for a, c in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def hermite_normal_form(
    M: Sequence[Sequence[int]],
) -> tuple[list[list[int]], list[list[int]]]:
    """Column-style Hermite normal form: H = M U with U unimodular.

    Pivot columns come first with positive pivots marching down-right; entries
    left of a pivot in its row are reduced into [0, pivot); columns right of
    the last pivot are zero.
    """
    nrows = len(M)
    ncols = len(M[0]) if nrows else 0
    # column-major copies
    H = [[int(M[r][c]) for r in range(nrows)] for c in range(ncols)]
    U = [[1 if r == c else 0 for r in range(ncols)] for c in range(ncols)]

    def col_sub(dst: int, src: int, q: int) -> None:
        H[dst] = [a - q * b for a, b in zip(H[dst], H[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    c = 0
    for r in range(nrows):
        live = [j for j in range(c, ncols) if H[j][r]]
        if not live:
            continue
        # gcd the row entries into a single column via Euclidean column ops
        while True:
            live = [j for j in range(c, ncols) if H[j][r]]
            if len(live) == 1:
                break
            live.sort(key=lambda j: abs(H[j][r]))
            base = live[0]
            for j in live[1:]:
                col_sub(j, base, H[j][r] // H[base][r])
        j = live[0]
        if j != c:
            H[c], H[j] = H[j], H[c]
            U[c], U[j] = U[j], U[c]
        if H[c][r] < 0:
            H[c] = [-a for a in H[c]]
            U[c] = [-a for a in U[c]]
        piv = H[c][r]
        for j in range(c):
            q = H[j][r] // piv
            if q:
                col_sub(j, c, q)
        c += 1
        if c == ncols:
            break
    H_rows = [[H[j][r] for j in range(ncols)] for r in range(nrows)]
    U_rows = [[U[j][r] for j in range(ncols)] for r in range(ncols)]
    return H_rows, U_rows


class IntegerLattice:
    """Lattice spanned by integer vectors, with exact membership tests.

    Vectors are folded into a row-echelon basis (integer Hermite-style) as
    they are added; membership is a divisibility-aware reduction.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[list[int]] = []  # echelon, pivot columns increasing

    def _pivot(self, row: Sequence[int]) -> Optional[int]:
        return next((c for c, e in enumerate(row) if e), None)

    def add(self, vec: Sequence[int]) -> None:
        v = list(map(int, vec))
        if len(v) != self.dim:
            raise ValueError("dimension mismatch")
        i = 0
        while True:
            p = self._pivot(v)
            if p is None:
                return
            while i < len(self.rows):
                rp = self._pivot(self.rows[i])
                if rp >= p:
                    break
                i += 1
            if i == len(self.rows) or self._pivot(self.rows[i]) > p:
                self.rows.insert(i, v)
                self._normalize()
                return
            row = self.rows[i]
            a, b = row[p], v[p]
            if b % a == 0:
                q = b // a
                v = [x - q * y for x, y in zip(v, row)]
            else:
                # replace pivot row by gcd combination, continue reducing v
                x, y, g = _xgcd(a, b)
                new_row = [x * r + y * s for r, s in zip(row, v)]
                v = [(-(b // g)) * r + (a // g) * s for r, s in zip(row, v)]
                self.rows[i] = new_row
                self._normalize()

    def _normalize(self) -> None:
        # keep pivots positive; reduce entries above each pivot
        for i, row in enumerate(self.rows):
            p = self._pivot(row)
            if row[p] < 0:
                self.rows[i] = [-e for e in row]
        for i in range(len(self.rows) - 1, -1, -1):
            p = self._pivot(self.rows[i])
            piv = self.rows[i][p]
            for j in range(i):
                q = self.rows[j][p] // piv
                if q:
                    self.rows[j] = [a - q * b for a, b in zip(self.rows[j], self.rows[i])]

    def __contains__(self, vec: Sequence[int]) -> bool:
        v = list(map(int, vec))
        for row in self.rows:
            p = self._pivot(row)
            if v[p] % row[p] == 0:
                q = v[p] // row[p]
                if q:
                    v = [a - q * b for a, b in zip(v, row)]
        return not any(v)

    @property
    def rank(self) -> int:
        return len(self.rows)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x, nx, y, ny, g, ng = 1, 0, 0, 1, a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    return x, y, g


# ---------------------------------------------------------------------------
# Exact simplex

_ART = -1  # marker prefix for artificial variables in the basis


@dataclass
class LPResult:
    status: str  # 'optimal' | 'infeasible' | 'unbounded'
    x: Optional[dict[int, Fraction]] = None
    value: Optional[Fraction] = None


def _scaled_int_vector(y: list[Fraction]) -> list[int]:
    den = lcm(*(f.denominator for f in y)) if y else 1
    return [int(f * den) for f in y]


class _Simplex:
    """Revised simplex over exact rationals, Bland's rule throughout."""

    def __init__(self, columns, b, np_cols=None):
        self.cols = columns
        self.m = len(columns)
        self.k = len(b)
        self.b = [Fraction(e) for e in b]
        self.np_cols = np_cols
        if np_cols is not None:
            self._np_absmax = int(np.abs(np_cols).max()) if np_cols.size else 0
        # artificial for row i is sign(b_i) * e_i so its basic value is |b_i|
        self.art_sign = [1 if e >= 0 else -1 for e in self.b]
        self.basis: list[int] = [_ART * (i + 1) for i in range(self.k)]

    def _column(self, var: int) -> list[Fraction]:
        if var < 0:
            i = -var - 1
            col = [Fraction(0)] * self.k
            col[i] = Fraction(self.art_sign[i])
            return col
        return [Fraction(e) for e in self.cols[var]]

    def _basis_matrix(self) -> list[list[Fraction]]:
        cols = [self._column(v) for v in self.basis]
        return [[cols[j][i] for j in range(self.k)] for i in range(self.k)]

    def _solve(self, costs: Optional[Sequence[Fraction]], phase1: bool) -> LPResult:
        while True:
            B = self._basis_matrix()
            xB = solve_square(B, self.b)
            if xB is None:
                raise RuntimeError("singular basis matrix")
            cB = [
                (Fraction(1) if v < 0 else Fraction(0))
                if phase1
                else (Fraction(0) if v < 0 else Fraction(costs[v]))
                for v in self.basis
            ]
            Bt = [[B[r][c] for r in range(self.k)] for c in range(self.k)]
            y = solve_square(Bt, cB)
            enter = self._price(y, costs, phase1)
            if enter is None:
                value = sum(c * x for c, x in zip(cB, xB))
                xdict = {
                    v: x for v, x in zip(self.basis, xB) if v >= 0 and x != 0
                }
                bad = any(v < 0 and x != 0 for v, x in zip(self.basis, xB))
                return LPResult("optimal" if not bad or phase1 else "infeasible", xdict, value)
            d = solve_square(B, self._column(enter))
            # ratio test: Bland tie-break on basis variable order; basic
            # artificials at zero must not grow, so a negative direction
            # component there forces a degenerate swap
            best = None
            for i in range(self.k):
                if d[i] > 0:
                    ratio = xB[i] / d[i]
                elif d[i] < 0 and self.basis[i] < 0 and xB[i] == 0:
                    ratio = Fraction(0)
                else:
                    continue
                key = (ratio, self._order(self.basis[i]))
                if best is None or key < best[0]:
                    best = (key, i)
            if best is None:
                return LPResult("unbounded")
            self.basis[best[1]] = enter

    def _order(self, var: int) -> int:
        return self.m - var if var < 0 else var  # artificials after reals

    def _price(self, y, costs, phase1) -> Optional[int]:
        """Lowest-index real variable with negative reduced cost (Bland)."""
        if phase1 or costs is None or not any(costs):
            # reduced cost is -y . A_j ; integer fast path when available
            Y = _scaled_int_vector(y)
            if self.np_cols is not None and Y:
                ymax = max(abs(e) for e in Y)
                if ymax and ymax * self._np_absmax * self.k < 2**62:
                    v = np.asarray(Y, dtype=np.int64) @ self.np_cols
                    hits = np.nonzero(v > 0)[0]
                    return int(hits[0]) if hits.size else None
            for j, col in enumerate(self.cols):
                s = 0
                for yi, a in zip(Y, col):
                    if a:
                        s += yi * a
                if s > 0:
                    return j
            return None
        for j, col in enumerate(self.cols):
            red = Fraction(costs[j]) - sum(
                yi * a for yi, a in zip(y, col) if a
            )
            if red < 0:
                return j
        return None

    def run(self, costs=None, maximize=False) -> LPResult:
        res = self._solve(None, phase1=True)
        if res.value != 0:
            return LPResult("infeasible")
        if costs is None:
            return LPResult("optimal", res.x, Fraction(0))
        c = [Fraction(-e) for e in costs] if maximize else [Fraction(e) for e in costs]
        res2 = self._solve(c, phase1=False)
        if res2.status != "optimal":
            return res2
        val = res2.value
        return LPResult("optimal", res2.x, -val if maximize else val)


def simplex_standard(
    columns: Sequence[Sequence[int | Fraction]],
    b: Vec,
    costs: Optional[Vec] = None,
    maximize: bool = False,
    np_cols: Optional[np.ndarray] = None,
) -> LPResult:
    """min/max costs.x subject to sum_j x_j columns[j] = b, x >= 0 (exact)."""
    return _Simplex(list(columns), b, np_cols=np_cols).run(costs, maximize)


def in_cone(
    columns: Sequence[Sequence[int]],
    x: Vec,
    np_cols: Optional[np.ndarray] = None,
) -> Optional[dict[int, Fraction]]:
    """Witness of x in cone(columns) (nonnegative combination), else None."""
    res = simplex_standard(columns, x, np_cols=np_cols)
    return res.x if res.status == "optimal" else None


def in_convex_hull(
    columns: Sequence[Sequence[int]],
    x: Vec,
    np_cols: Optional[np.ndarray] = None,
) -> Optional[dict[int, Fraction]]:
    """Witness of x in conv(columns) (convex combination), else None."""
    aug = [tuple(col) + (1,) for col in columns]
    np_aug = None
    if np_cols is not None:
        np_aug = np.vstack([np_cols, np.ones((1, np_cols.shape[1]), dtype=np.int64)])
    res = simplex_standard(aug, tuple(x) + (1,), np_cols=np_aug)
    return res.x if res.status == "optimal" else None


def lp_feasible(
    constraints: Sequence[tuple[Vec, str, int | Fraction]],
) -> Optional[tuple[Fraction, ...]]:
    """Exact feasibility for linear constraints over free variables.

    Each constraint is (coefficients, relation, rhs) with relation one of
    '<=', '>=', '=='.  Returns a witness point or None.
    """
    if not constraints:
        return ()
    nvar = len(constraints[0][0])
    columns: list[list[Fraction]] = []
    k = len(constraints)
    # free variables split as u - v
    for j in range(nvar):
        for sign in (1, -1):
            columns.append([sign * Fraction(c[0][j]) for c in constraints])
    for i, (_, rel, _) in enumerate(constraints):
        if rel == "==":
            continue
        slack = [Fraction(0)] * k
        slack[i] = Fraction(1) if rel == "<=" else Fraction(-1)
        columns.append(slack)
    b = [Fraction(c[2]) for c in constraints]
    res = simplex_standard(columns, b)
    if res.status != "optimal":
        return None
    point = [Fraction(0)] * nvar
    for var, val in res.x.items():
        if var < 2 * nvar:
            j, neg = divmod(var, 2)
            point[j] += -val if neg else val
    return tuple(point)
