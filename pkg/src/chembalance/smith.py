"""Smith normal form over the integers, with the derived lattice tools.

The decomposition D = U*A*V is computed with unimodular row operations
(tracked in U) and column operations (tracked in V) only: swaps, adding an
integer multiple of a row/column to another, and sign flips.  The pivot rule
is deterministic: among the nonzero entries of the working block pick the one
of minimal absolute value, breaking ties by (row, column); clear its row by
column operations with remainders, then its column by row operations,
re-picking whenever a remainder survives; once clean, repair divisibility by
adding an offending row to the pivot row.  Diagonal entries are normalized
positive.

Restricted to integer matrices on purpose: the polynomial ring the rest of
the package supports has no division with remainder, so this construction
does not apply there.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import condense
from .matrix import Matrix
from .ring import ZZ


class UnsupportedRing(TypeError):
    """The operation is defined for integer matrices only."""


class RankDeficient(ValueError):
    """The matrix does not have full column rank."""


@dataclass(frozen=True)
class SmithDecomposition:
    u: Matrix
    d: Matrix
    v: Matrix
    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def _argmin_entry(m, t, rows, cols):
    best = None
    for i in range(t, rows):
        for j in range(t, cols):
            v = m[i][j]
            if v and (best is None or abs(v) < abs(m[best[0]][best[1]])):
                best = (i, j)
    return best


def smith_nf(a: Matrix) -> SmithDecomposition:
    """Smith normal form D = U*A*V with |det U| = |det V| = 1."""
    if a.ring != ZZ:
        raise UnsupportedRing("Smith normal form requires integer entries")
    n_rows, n_cols = a.rows, a.cols
    m = [list(r) for r in a.row_list()]
    u = [[1 if i == j else 0 for j in range(n_rows)] for i in range(n_rows)]
    v = [[1 if i == j else 0 for j in range(n_cols)] for i in range(n_cols)]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row dst += q * row src
        mrow, msrc = m[dst], m[src]
        for j in range(n_cols):
            mrow[j] += q * msrc[j]
        urow, usrc = u[dst], u[src]
        for j in range(n_rows):
            urow[j] += q * usrc[j]

    def add_col(dst, src, q):
        for row in m:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    t = 0
    exhausted = False
    while t < min(n_rows, n_cols) and not exhausted:
        while True:
            best = _argmin_entry(m, t, n_rows, n_cols)
            if best is None:
                exhausted = True
                break
            bi, bj = best
            if bi != t:
                swap_rows(bi, t)
            if bj != t:
                swap_cols(bj, t)
            piv = m[t][t]
            dirty = False
            for j in range(t + 1, n_cols):
                if m[t][j]:
                    q = m[t][j] // piv
                    if q:
                        add_col(j, t, -q)
                    if m[t][j]:
                        dirty = True
            if dirty:
                continue
            for i in range(t + 1, n_rows):
                if m[i][t]:
                    q = m[i][t] // piv
                    if q:
                        add_row(i, t, -q)
                    if m[i][t]:
                        dirty = True
            if dirty:
                continue
            piv = m[t][t]
            repaired = False
            for i in range(t + 1, n_rows):
                for j in range(t + 1, n_cols):
                    if m[i][j] % piv:
                        add_row(t, i, 1)
                        repaired = True
                        break
                if repaired:
                    break
            if repaired:
                continue
            break
        if exhausted:
            break
        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    factors = tuple(m[i][i] for i in range(min(n_rows, n_cols)) if m[i][i])
    return SmithDecomposition(
        u=Matrix(n_rows, n_rows, u, ZZ),
        d=Matrix(n_rows, n_cols, m, ZZ),
        v=Matrix(n_cols, n_cols, v, ZZ),
        invariant_factors=factors,
    )


def kernel_basis(dec: SmithDecomposition) -> Matrix:
    """Lattice basis of the integer kernel: the last cols-rank columns of V."""
    p = dec.rank
    m = dec.v.rows
    if m <= p:
        return Matrix.zeros(m, 0, ZZ)
    return Matrix.from_columns([dec.v.column(j) for j in range(p, m)], ZZ)


def image_basis(dec: SmithDecomposition) -> Matrix:
    """Lattice basis of the integer column span: first rank columns of U^-1 D."""
    p = dec.rank
    n = dec.u.rows
    if p == 0:
        return Matrix.zeros(n, 0, ZZ)
    u_inv = condense.inverse(dec.u).map_entries(lambda f: f.as_ring_element(), ZZ)
    prod = u_inv @ dec.d
    return Matrix.from_columns([prod.column(j) for j in range(p)], ZZ)


def _max_minor_gcd(x: Matrix) -> int:
    """gcd of all cols x cols minors; 0 when the column rank is deficient."""
    p = x.cols
    g = 0
    for rows in itertools.combinations(range(x.rows), p):
        sub = Matrix.from_rows([[x.at(i, j) for j in range(p)] for i in rows], ZZ)
        g = ZZ.gcd(g, condense.det(sub))
        if g == 1:
            break
    return g


def is_saturated(x: Matrix) -> bool:
    """True iff the columns generate a saturated sublattice.

    Saturation is equivalent to the gcd of the maximal minors being a unit.
    Requires full column rank.
    """
    if x.ring != ZZ:
        raise UnsupportedRing("saturation test requires integer entries")
    if x.cols == 0:
        return True
    if x.rows < x.cols:
        raise RankDeficient(f"{x.rows}x{x.cols} matrix cannot have full column rank")
    g = _max_minor_gcd(x)
    if g == 0:
        raise RankDeficient("columns are linearly dependent")
    return g == 1


def saturate(x: Matrix) -> Matrix:
    """Basis of the saturation of the column lattice of x.

    Two-pass recipe: from D' = U' x V' take B, the bottom rows of U'
    annihilating the column span; the integer kernel of B, read off a second
    decomposition D'' = U'' B V'', is the saturation.  The result spans the
    same subspace as x over the rationals and is always saturated.
    """
    if x.ring != ZZ:
        raise UnsupportedRing("saturation requires integer entries")
    n, p = x.rows, x.cols
    if p == 0:
        return Matrix.zeros(n, 0, ZZ)
    dec1 = smith_nf(x)
    if dec1.rank < p:
        raise RankDeficient("columns are linearly dependent")
    b = Matrix.from_rows([list(dec1.u.row(i)) for i in range(p, n)], ZZ) \
        if n > p else Matrix.zeros(0, n, ZZ)
    dec2 = smith_nf(b)
    cols = []
    for j in range(dec2.v.rows - p, dec2.v.rows):
        col = dec2.v.column(j)
        first = next((v for v in col if v), 0)
        cols.append([-v for v in col] if first < 0 else list(col))
    return Matrix.from_columns(cols, ZZ)
