"""Exact dense linear algebra over a :class:`~cmkit.field.Field`.

Matrices are lists of rows (lists of field scalars).  Over GF(p) the hot
paths run on numpy int64 arrays; entries stay below p so products fit in
64 bits with room to spare.  Over the rationals everything is plain
Fraction arithmetic.  All pivoting is deterministic (first nonzero column,
first usable row), so results are reproducible across runs.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .field import Field


def _as_np(rows: list[list[int]], ncols: int) -> np.ndarray:
    if len(rows) == 0:
        return np.zeros((0, ncols), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


def _rref_gf(p: int, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    a = a % p
    m, n = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            a[mask] = (a[mask] - np.outer(col[mask], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def _rref_qq(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    a = [list(row) for row in rows]
    m = len(a)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        pivot_row = next((i for i in range(r, m) if a[i][c] != 0), None)
        if pivot_row is None:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        inv = Fraction(1) / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def rref(field: Field, rows, ncols: int | None = None):
    """Reduced row echelon form.  Returns (rows, pivot_columns)."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if field.is_prime_field:
        a, piv = _rref_gf(field.p, _as_np(rows, ncols))
        return [[int(x) for x in row] for row in a], piv
    return _rref_qq(rows, ncols)


def rank(field: Field, rows, ncols: int | None = None) -> int:
    if not rows:
        return 0
    return len(rref(field, rows, ncols)[1])


def nullspace(field: Field, rows, ncols: int) -> list[list]:
    """Deterministic kernel basis of the linear map given by ``rows`` acting
    on column vectors of length ``ncols`` (i.e. right kernel)."""
    red, pivots = rref(field, rows, ncols)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for i, pcol in enumerate(pivots):
            v[pcol] = field.neg(red[i][f])
        basis.append(v)
    return basis


def solve_matrix(field: Field, a_rows, b_rows, ncols: int):
    """Solve A X = B for X (first solution, free variables zero).

    ``a_rows`` is m x ncols, ``b_rows`` m x k.  Returns X as ncols x k rows,
    or None if inconsistent.
    """
    m = len(a_rows)
    k = len(b_rows[0]) if b_rows and b_rows[0] else (len(b_rows[0]) if b_rows else 0)
    if m == 0:
        # no constraints: any B with zero rows; X = 0
        return [[field.zero] * k for _ in range(ncols)]
    aug = [list(ar) + list(br) for ar, br in zip(a_rows, b_rows)]
    red, pivots = rref(field, aug, ncols + k)
    # consistency: no pivot in the B block
    for i, p in enumerate(pivots):
        if p >= ncols:
            return None
    nrow = len(pivots)
    for i in range(nrow, m):
        pass  # rows beyond pivots are zero rows in rref
    x = [[field.zero] * k for _ in range(ncols)]
    for i, p in enumerate(pivots):
        for j in range(k):
            x[p][j] = red[i][ncols + j]
    return x


def solve(field: Field, a_rows, b_vec, ncols: int):
    """Solve A x = b.  Returns x (length ncols) or None."""
    if not a_rows:
        if any(not field.is_zero(v) for v in b_vec):
            return None
        return [field.zero] * ncols
    x = solve_matrix(field, a_rows, [[v] for v in b_vec], ncols)
    if x is None:
        return None
    return [row[0] for row in x]


def matmul(field: Field, a_rows, b_rows):
    """Exact matrix product of row-major matrices."""
    m = len(a_rows)
    inner = len(a_rows[0]) if m else 0
    k = len(b_rows[0]) if b_rows else 0
    if field.is_prime_field and m and inner and k:
        a = _as_np(a_rows, inner)
        b = _as_np(b_rows, k)
        return [[int(x) for x in row] for row in (a @ b) % field.p]
    out = [[field.zero] * k for _ in range(m)]
    for i in range(m):
        ai = a_rows[i]
        for t in range(inner):
            c = ai[t]
            if field.is_zero(c):
                continue
            bt = b_rows[t]
            row = out[i]
            for j in range(k):
                row[j] = field.add(row[j], field.mul(c, bt[j]))
    return out


def invert(field: Field, a_rows):
    """Inverse of a square matrix; None if singular."""
    n = len(a_rows)
    if n == 0:
        return []
    aug = [list(r) + [field.one if j == i else field.zero for j in range(n)]
           for i, r in enumerate(a_rows)]
    red, pivots = rref(field, aug, 2 * n)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in red[:n]]


def eye(field: Field, n: int):
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def in_rowspan(field: Field, red_rows, pivots, vec) -> bool:
    """Membership of ``vec`` in the row span given by a precomputed rref."""
    v = list(vec)
    for i, p in enumerate(pivots):
        if not field.is_zero(v[p]):
            c = v[p]
            row = red_rows[i]
            v = [field.sub(x, field.mul(c, y)) for x, y in zip(v, row)]
    return all(field.is_zero(x) for x in v)


class SpanTracker:
    """Incrementally maintained row span with deterministic reduction.

    Used for minimal-generator selection: add vectors one at a time and ask
    whether a candidate is already in the span of the previously added ones.
    """

    def __init__(self, field: Field, ncols: int):
        self.field = field
        self.ncols = ncols
        self.rows: list[list] = []   # kept in echelon form (not fully reduced)
        self.pivots: list[int] = []  # pivot column per row, strictly handled

    def _reduce(self, vec):
        f = self.field
        v = list(vec)
        for row, p in zip(self.rows, self.pivots):
            if not f.is_zero(v[p]):
                c = v[p]
                v = [f.sub(x, f.mul(c, y)) for x, y in zip(v, row)]
        return v

    def contains(self, vec) -> bool:
        v = self._reduce(vec)
        return all(self.field.is_zero(x) for x in v)

    def add(self, vec) -> bool:
        """Add ``vec`` to the span.  Returns True if it enlarged the span."""
        f = self.field
        v = self._reduce(vec)
        p = next((i for i, x in enumerate(v) if not f.is_zero(x)), None)
        if p is None:
            return False
        inv = f.inv(v[p])
        v = [f.mul(inv, x) for x in v]
        self.rows.append(v)
        self.pivots.append(p)
        return True

    @property
    def dim(self) -> int:
        return len(self.rows)
