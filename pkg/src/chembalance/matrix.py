"""Dense exact matrices over a coefficient ring, with text and JSON I/O.

Row and column indices are 0-based in code; user-facing documentation and CLI
output count from 1.  Empty matrices (zero rows or zero columns) are
first-class values.
"""

from __future__ import annotations

from .ring import Frac, FractionField, PolynomialRing, Ring, ZZ


class ShapeMismatch(ValueError):
    pass


class IndexOutOfRange(IndexError):
    pass


class NotSquare(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = ""
        if line is not None:
            loc = f" at line {line}" + (f", column {column}" if column else "")
        super().__init__(message + loc)
        self.line = line
        self.column = column


class Matrix:
    """Immutable dense matrix with value semantics."""

    __slots__ = ("rows", "cols", "ring", "_e")

    def __init__(self, rows: int, cols: int, entries, ring: Ring = ZZ):
        self.rows = rows
        self.cols = cols
        self.ring = ring
        e = tuple(tuple(r) for r in entries)
        if len(e) != rows or any(len(r) != cols for r in e):
            raise ShapeMismatch(f"entries do not fill a {rows}x{cols} matrix")
        self._e = e

    @classmethod
    def from_rows(cls, rows, ring: Ring = ZZ) -> "Matrix":
        """Build from nested lists; plain ints are coerced into the ring."""
        conv = [
            [v if not isinstance(v, int) or ring is ZZ else ring.from_int(v) for v in row]
            for row in rows
        ]
        r = len(conv)
        c = len(conv[0]) if conv else 0
        return cls(r, c, conv, ring)

    @classmethod
    def identity(cls, n: int, ring: Ring = ZZ) -> "Matrix":
        z, o = ring.zero, ring.one
        return cls(n, n, [[o if i == j else z for j in range(n)] for i in range(n)], ring)

    @classmethod
    def zeros(cls, rows: int, cols: int, ring: Ring = ZZ) -> "Matrix":
        z = ring.zero
        return cls(rows, cols, [[z] * cols for _ in range(rows)], ring)

    @classmethod
    def from_columns(cls, columns, ring: Ring = ZZ) -> "Matrix":
        cols = [list(c) for c in columns]
        if not cols:
            return cls.zeros(0, 0, ring)
        n = len(cols[0])
        if any(len(c) != n for c in cols):
            raise ShapeMismatch("columns of unequal length")
        return cls.from_rows([[c[i] for c in cols] for i in range(n)], ring)

    def at(self, i: int, j: int):
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexOutOfRange(f"({i}, {j}) outside {self.rows}x{self.cols}")
        return self._e[i][j]

    def row(self, i: int) -> tuple:
        if not 0 <= i < self.rows:
            raise IndexOutOfRange(f"row {i} outside {self.rows}x{self.cols}")
        return self._e[i]

    def column(self, j: int) -> tuple:
        if not 0 <= j < self.cols:
            raise IndexOutOfRange(f"column {j} outside {self.rows}x{self.cols}")
        return tuple(r[j] for r in self._e)

    def row_list(self) -> list[tuple]:
        return list(self._e)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "Matrix":
        return Matrix(
            self.cols,
            self.rows,
            [[self._e[i][j] for i in range(self.rows)] for j in range(self.cols)],
            self.ring,
        )

    def mul(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ShapeMismatch(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        if self.ring != other.ring:
            raise ShapeMismatch("cannot multiply matrices over different rings")
        ring = self.ring
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = ring.zero
                for k in range(self.cols):
                    acc = ring.add(acc, ring.mul(self._e[i][k], other._e[k][j]))
                row.append(acc)
            out.append(row)
        return Matrix(self.rows, other.cols, out, ring)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return self.mul(other)

    def minor2(self, r1: int, c1: int, r2: int, c2: int):
        """2x2 minor: M[r1,c1]*M[r2,c2] - M[r1,c2]*M[r2,c1] (0-based)."""
        ring = self.ring
        return ring.sub(
            ring.mul(self.at(r1, c1), self.at(r2, c2)),
            ring.mul(self.at(r1, c2), self.at(r2, c1)),
        )

    def map_entries(self, fn, ring: Ring | None = None) -> "Matrix":
        return Matrix(
            self.rows,
            self.cols,
            [[fn(v) for v in row] for row in self._e],
            ring if ring is not None else self.ring,
        )

    def lift_fractions(self) -> "Matrix":
        """The same matrix over the fraction field of its ring."""
        ff = FractionField(self.ring)
        return self.map_entries(ff.lift, ff)

    def is_zero_matrix(self) -> bool:
        ring = self.ring
        return all(ring.is_zero(v) for row in self._e for v in row)

    @property
    def is_empty(self) -> bool:
        return self.rows == 0 or self.cols == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.ring == other.ring
            and self._e == other._e
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self._e))

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols} over {self.ring!r})"

    def __str__(self) -> str:
        return format_matrix(self)


def _ring_for(param: str | None, ring: Ring | None) -> Ring:
    if ring is not None:
        return ring
    return PolynomialRing(param) if param else ZZ


def parse_matrix(text: str, param: str | None = None, ring: Ring | None = None) -> Matrix:
    """Parse whitespace-separated entries, one row per line.

    Lines starting with '#' are comments; blank lines are skipped; the empty
    input is the 0x0 matrix.
    """
    ring = _ring_for(param, ring)
    rows = []
    width = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        row = []
        for colno, tok in enumerate(tokens, start=1):
            try:
                row.append(ring.parse(tok))
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno, column=colno) from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(
                f"row has {len(row)} entries, expected {width}", line=lineno
            )
        rows.append(row)
    if not rows:
        return Matrix.zeros(0, 0, ring)
    return Matrix(len(rows), width, rows, ring)


def format_matrix(m: Matrix) -> str:
    """Text form that round-trips through parse_matrix (columns aligned)."""
    ring = m.ring
    cells = [[ring.format(v) for v in row] for row in m.row_list()]
    if not cells:
        return ""
    widths = [max(len(cells[i][j]) for i in range(m.rows)) for j in range(m.cols)]
    return "\n".join(
        " ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in cells
    )


def matrix_to_json(m: Matrix) -> dict:
    return {
        "rows": m.rows,
        "cols": m.cols,
        "entries": [[m.ring.format(v) for v in row] for row in m.row_list()],
        "param": m.ring.param,
    }


def matrix_from_json(obj: dict) -> Matrix:
    ring = _ring_for(obj.get("param"), None)
    entries = [[ring.parse(v) for v in row] for row in obj["entries"]]
    if not entries:
        return Matrix.zeros(obj.get("rows", 0), obj.get("cols", 0), ring)
    return Matrix(obj["rows"], obj["cols"], entries, ring)
