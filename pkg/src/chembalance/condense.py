"""The pivotal-condensation engine.

Everything here works on one block pattern built from an input matrix A
(n rows, m columns):

    X | Y (|| s)          X starts as A^T (m rows, n columns), Y as the
    -----------           m x m identity, s as an optional column of row
    B | T                 sums carried through the arithmetic as a check.

One round of condensation picks a pivot: the first nonzero column k of X and
a row i with X[i][k] != 0.  Row i is swapped to the top, every other row r is
replaced entrywise by the 2x2 minor against the pivot row p,

    new[r][j] = p[k]*r[j] - p[j]*r[k],

and the pivot row together with columns 0..k of X are dropped.  Each new
upper row is then divided by the gcd of its entries, which keeps entry growth
bounded and makes the rows of Y primitive.  The recursion stops when X has no
nonzero column left; at that point the rows of Y are exactly a basis of
ker(A) over the fraction field, with entries still in the ring.

The optional bottom block B | T rides along: its rows are condensed against
the same pivots but are never chosen as pivots and never rescaled.  Seeding
it differently yields the inhomogeneous solver (one row [w | 0 | -1]), the
exact inverse (identity | 0 | -1 column), and the four-subspaces analysis
(identity, with columns of B harvested under the zero columns of X).

A determinant accumulator delta tracks row swaps, the scalar factor
pivot^-(s-2) of the size-s-to-(s-1) condensation identity, and the contents
pulled out of rows, so that delta * det(X) is invariant for square patterns.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .matrix import Matrix, NotSquare, ShapeMismatch
from .ring import Frac, FractionField, Ring


class Singular(ArithmeticError):
    """The matrix has no inverse over the fraction field."""


@dataclass(frozen=True)
class Step:
    """One recorded pattern state (after cleaning)."""

    delta: Frac | None
    x: Matrix
    y: Matrix
    pivot: tuple[int, int] | None      # (row, col) chosen in this state, 0-based
    sigma_step: tuple[int, ...]        # row permutation applied to reach the pivot
    checks: tuple | None               # checksum column, when enabled


@dataclass(frozen=True)
class Trace:
    steps: tuple[Step, ...]
    sigma_total: tuple[int, ...]
    checksum_ok: bool | None


@dataclass(frozen=True)
class KernelBasis:
    """Columns of `generators` span the kernel over the fraction field."""

    generators: Matrix
    ring: Ring
    saturated: bool

    @property
    def dim(self) -> int:
        return self.generators.cols

    def vectors(self) -> list[tuple]:
        return self.generators.columns()


@dataclass(frozen=True)
class AffineSolution:
    particular: tuple[Frac, ...]
    homogeneous: KernelBasis
    feasible: bool


@dataclass(frozen=True)
class FourSubspaces:
    ker: KernelBasis                     # ker(A)
    coker: KernelBasis                   # ker(A^T)
    im_columns: tuple[int, ...]          # column indices into A (0-based)
    im_transpose_columns: tuple[int, ...]  # column indices into A^T (0-based)
    sigma: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.im_columns)


@dataclass
class _Run:
    ring: Ring
    n: int
    m: int
    rank: int
    xw: int                              # final X width
    upper: list[list]                    # final upper rows (X + Y [+ chk])
    bottom: list[list]                   # final bottom rows (X + tail)
    delta: Frac | None
    pivot_origins: list[int]             # original upper-row index per pivot
    consumed_cols: list[int]             # original X-column index per pivot
    harvested: list[tuple]               # bottom-left columns under zero columns
    dropped_nonzero: bool                # a dropped column had a nonzero bottom entry
    trace: Trace


def _sign_normalized(vec, ring: Ring) -> list:
    for v in vec:
        if not ring.is_zero(v):
            if ring.is_negative(v):
                return [ring.neg(v) for v in vec]
            return list(vec)
    return list(vec)


def _pick_pivot(up, k, ring: Ring, rule: str) -> int:
    cand = [i for i in range(len(up)) if not ring.is_zero(up[i][k])]
    if rule == "min":
        return min(cand, key=lambda i: (ring.size(up[i][k]), i))
    return cand[0]


def _condense(
    a: Matrix,
    *,
    track_delta: bool = False,
    checksums: bool = False,
    bottom: list[list] | None = None,
    bottom_tail: int = 0,
    pivot_rule: str = "first",
    harvest: bool = False,
) -> _Run:
    ring = a.ring
    n, m = a.rows, a.cols
    xw = n
    at = a.transpose()

    up: list[list] = []
    for i in range(m):
        row = list(at.row(i)) + [
            ring.one if j == i else ring.zero for j in range(m)
        ]
        if checksums:
            row.append(ring.sum(row))
        up.append(row)
    bt = [list(r) for r in (bottom or [])]

    delta = Frac(ring.one, ring.one, ring) if track_delta else None
    row_origin = list(range(m))
    pivot_origins: list[int] = []
    consumed_cols: list[int] = []
    orig_col = list(range(n))
    harvested: list[tuple] = []
    dropped_nonzero = False
    steps: list[Step] = []

    def snapshot(pivot, sigma_step):
        x = Matrix(len(up), xw, [r[:xw] for r in up], ring)
        y = Matrix(len(up), m, [r[xw : xw + m] for r in up], ring)
        checks = tuple(r[-1] for r in up) if checksums else None
        steps.append(Step(delta, x, y, pivot, sigma_step, checks))

    while True:
        k = 0
        while k < xw and all(ring.is_zero(r[k]) for r in up):
            k += 1
        drop = k if k < xw else xw
        if drop:
            for j in range(drop):
                col = tuple(b[j] for b in bt)
                if harvest:
                    harvested.append(col)
                if any(not ring.is_zero(v) for v in col):
                    dropped_nonzero = True
        if k == xw:
            snapshot(None, tuple(range(len(up))))
            # the leading zero columns are gone for good
            for r in up:
                del r[:xw]
            for b in bt:
                del b[:xw]
            xw = 0
            break

        i = _pick_pivot(up, k, ring, pivot_rule)
        sigma_step = list(range(len(up)))
        if i != 0:
            sigma_step[0], sigma_step[i] = i, 0
        snapshot((i, k), tuple(sigma_step))

        if i != 0:
            up[0], up[i] = up[i], up[0]
            row_origin[0], row_origin[i] = row_origin[i], row_origin[0]
            if track_delta:
                delta = -delta
        pivot_origins.append(row_origin[0])
        consumed_cols.append(orig_col[k])

        piv = up[0][k]
        s = len(up)
        if track_delta:
            e = s - 2
            if e >= 0:
                delta = delta * Frac(ring.one, ring.pow(piv, e), ring)
            else:
                delta = delta * Frac(piv, ring.one, ring)

        pivot_row = up[0]
        pivot_tail = pivot_row[xw : xw + m] + [ring.zero] * max(0, bottom_tail - m)

        new_up = []
        for r in up[1:]:
            rk = r[k]
            row = [
                ring.sub(ring.mul(piv, r[j]), ring.mul(pivot_row[j], rk))
                for j in range(k + 1, len(r))
            ]
            nx = xw - k - 1
            body = row[: nx + m]
            content, _ = ring.content_and_primitive(body)
            if not ring.is_unit(content):
                row = [ring.exact_div(v, content) for v in row]
            if track_delta:
                delta = delta * Frac(content, ring.one, ring)
            new_up.append(row)
        new_bt = []
        for b in bt:
            bk = b[k]
            xpart = [
                ring.sub(ring.mul(piv, b[j]), ring.mul(pivot_row[j], bk))
                for j in range(k + 1, xw)
            ]
            tail = [
                ring.sub(ring.mul(piv, b[xw + j]), ring.mul(pivot_tail[j], bk))
                for j in range(bottom_tail)
            ]
            new_bt.append(xpart + tail)

        up = new_up
        bt = new_bt
        del row_origin[0]
        orig_col = orig_col[k + 1 :]
        xw = xw - k - 1

    rank = len(pivot_origins)
    sigma = [0] * m
    for ordinal, orig in enumerate(pivot_origins):
        sigma[orig] = ordinal
    for offset, orig in enumerate(row_origin):
        sigma[orig] = rank + offset

    trace = Trace(tuple(steps), tuple(sigma), None)
    run = _Run(
        ring=ring,
        n=n,
        m=m,
        rank=rank,
        xw=xw,
        upper=up,
        bottom=bt,
        delta=delta,
        pivot_origins=pivot_origins,
        consumed_cols=consumed_cols,
        harvested=harvested,
        dropped_nonzero=dropped_nonzero,
        trace=trace,
    )
    if checksums:
        run.trace = replace(trace, checksum_ok=verify_checksums(trace))
    return run


def _kernel_from_run(run: _Run) -> KernelBasis:
    ring = run.ring
    vecs = [_sign_normalized(row[run.xw : run.xw + run.m], ring) for row in run.upper]
    if vecs:
        gens = Matrix.from_columns(vecs, ring)
    else:
        gens = Matrix.zeros(run.m, 0, ring)
    return KernelBasis(gens, ring, saturated=len(vecs) <= 1)


def det(a: Matrix, *, pivot_rule: str = "first"):
    """Exact determinant of a square matrix."""
    if a.rows != a.cols:
        raise NotSquare(f"determinant of a {a.rows}x{a.cols} matrix")
    run = _condense(a, track_delta=True, pivot_rule=pivot_rule)
    if run.rank == a.rows:
        return run.delta.as_ring_element()
    return a.ring.zero


def det_and_kernel(
    a: Matrix, *, checksums: bool = False, pivot_rule: str = "first"
):
    """Determinant plus, when singular, a kernel basis, in one pass.

    Returns (det, KernelBasis, Trace); the trace records every pattern state
    including the running delta.
    """
    if a.rows != a.cols:
        raise NotSquare(f"combined pass needs a square matrix, got {a.rows}x{a.cols}")
    run = _condense(
        a, track_delta=True, checksums=checksums, pivot_rule=pivot_rule
    )
    d = run.delta.as_ring_element() if run.rank == a.rows else a.ring.zero
    return d, _kernel_from_run(run), run.trace


def kernel(a: Matrix, *, checksums: bool = False, pivot_rule: str = "first"):
    """Basis of ker(A) over the fraction field, with entries in the ring.

    Every emitted column is primitive (unit content) and sign-normalized so
    its first nonzero entry is positive.  Returns (KernelBasis, Trace).
    """
    run = _condense(a, checksums=checksums, pivot_rule=pivot_rule)
    return _kernel_from_run(run), run.trace


def solve(a: Matrix, w, *, pivot_rule: str = "first") -> AffineSolution:
    """General solution of A v = w over the fraction field.

    The pattern gains one bottom row [w | 0 | -1]; pivots stay in the upper
    block, so the bottom row accumulates the particular solution and a single
    denominator that is divided out only at the very end.
    """
    w = list(w)
    if len(w) != a.rows:
        raise ShapeMismatch(f"right-hand side of length {len(w)} for {a.rows} rows")
    ring = a.ring
    bottom = [w + [ring.zero] * a.cols + [ring.neg(ring.one)]]
    run = _condense(
        a, bottom=bottom, bottom_tail=a.cols + 1, pivot_rule=pivot_rule
    )
    final = run.bottom[0]
    residue = final[: run.xw]
    feasible = not run.dropped_nonzero and all(ring.is_zero(v) for v in residue)
    homogeneous = _kernel_from_run(run)
    if not feasible:
        return AffineSolution((), homogeneous, False)
    p = final[run.xw : run.xw + a.cols]
    lam = final[run.xw + a.cols]
    particular = tuple(Frac(v, lam, ring) for v in p)
    return AffineSolution(particular, homogeneous, True)


def inverse(a: Matrix, *, pivot_rule: str = "first") -> Matrix:
    """Exact inverse as a matrix over the fraction field of the ring."""
    if a.rows != a.cols:
        raise NotSquare(f"inverse of a {a.rows}x{a.cols} matrix")
    n = a.rows
    ring = a.ring
    bottom = []
    for i in range(n):
        row = [ring.one if j == i else ring.zero for j in range(n)]
        bottom.append(row + [ring.zero] * n + [ring.neg(ring.one)])
    run = _condense(a, bottom=bottom, bottom_tail=n + 1, pivot_rule=pivot_rule)
    if run.dropped_nonzero or run.rank < n:
        raise Singular("matrix is singular")
    ff = FractionField(ring)
    cols = []
    for b in run.bottom:
        p = b[run.xw : run.xw + n]
        lam = b[run.xw + n]
        cols.append([Frac(v, lam, ring) for v in p])
    return Matrix.from_columns(cols, ff)


def four_subspaces(a: Matrix, *, pivot_rule: str = "first") -> FourSubspaces:
    """Bases for ker(A), ker(A^T) and column selections spanning the images.

    The bottom block starts as the n x n identity and is never rescaled;
    its columns sitting under zero columns of X drop into ker(A^T).  The
    pivot order determines which columns of A span im(A): the i-th basis
    vector is the column whose pattern row hosted the i-th pivot.
    """
    ring = a.ring
    n = a.rows
    bottom = [
        [ring.one if j == i else ring.zero for j in range(n)] for i in range(n)
    ]
    run = _condense(
        a, bottom=bottom, bottom_tail=0, pivot_rule=pivot_rule, harvest=True
    )
    ker_a = _kernel_from_run(run)
    coker_vecs = []
    for col in run.harvested:
        _, prim = ring.content_and_primitive(col)
        coker_vecs.append(_sign_normalized(prim, ring))
    if coker_vecs:
        coker_gens = Matrix.from_columns(coker_vecs, ring)
    else:
        coker_gens = Matrix.zeros(n, 0, ring)
    coker = KernelBasis(coker_gens, ring, saturated=len(coker_vecs) <= 1)
    return FourSubspaces(
        ker=ker_a,
        coker=coker,
        im_columns=tuple(run.pivot_origins),
        im_transpose_columns=tuple(run.consumed_cols),
        sigma=run.trace.sigma_total,
    )


def verify_checksums(trace: Trace) -> bool:
    """True iff at every step the check column equals the X|Y row sums."""
    for step in trace.steps:
        if step.checks is None:
            return False
        ring = step.x.ring
        for i in range(step.x.rows):
            total = ring.add(ring.sum(step.x.row(i)), ring.sum(step.y.row(i)))
            if total != step.checks[i]:
                return False
    return True


def render_trace(trace: Trace) -> str:
    """ASCII rendering of the pattern states, pivot boxed in brackets."""
    lines = []
    for l, step in enumerate(trace.steps):
        head = f"step {l}"
        if step.delta is not None:
            head += f"   delta = {step.delta}"
        lines.append(head)
        ring = step.x.ring
        cells = []
        for i in range(step.x.rows):
            xs = [ring.format(v) for v in step.x.row(i)]
            if step.pivot is not None and i == step.pivot[0]:
                j = step.pivot[1]
                xs[j] = f"[{xs[j]}]"
            ys = [ring.format(v) for v in step.y.row(i)]
            row = xs + ["|"] + ys
            if step.checks is not None:
                row += ["||", ring.format(step.checks[i])]
            cells.append(row)
        if not cells:
            lines.append("  (empty)")
            continue
        widths = [max(len(r[j]) for r in cells) for j in range(len(cells[0]))]
        for r in cells:
            lines.append("  " + " ".join(c.rjust(w) for c, w in zip(r, widths)))
    return "\n".join(lines)
