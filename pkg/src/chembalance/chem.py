"""Chemical formulas, reactions, and exact balancing.

A formula is parsed into a flat element -> count map plus an integer charge;
nested () and [] groups multiply through exactly.  Counts are integers, or
polynomials in one declared parameter for compound families (the parameter
letter always terminates an element symbol, so declare one only when the
reaction needs it).  Charge is written as a trailing ^k+, ^k-, ^+ or ^-, and
is treated as one extra pseudo-atom row of the adjacency matrix.

Balancing is the kernel of the atom-by-compound adjacency matrix: negative
coefficients are reactants, positive ones products.  Over the integers a
multi-dimensional kernel is upgraded to a lattice basis so every balanced
reaction is an integer combination of the emitted generators.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import condense, quiver, smith
from .matrix import Matrix
from .ring import Poly, PolynomialRing, Ring, ZZ


class ParseError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class InconsistentParameter(ValueError):
    """Formulas parsed over different parameters were combined."""


CHARGE_ROW = "charge"

_CHARGE = re.compile(r"\^(?:(\d+)([+-])|([+-]))$")


@dataclass(frozen=True)
class Formula:
    source: str
    composition: dict
    charge: int

    def atoms(self) -> set[str]:
        return set(self.composition)


@dataclass(frozen=True)
class Reaction:
    left: tuple[Formula, ...]
    right: tuple[Formula, ...]
    parameter: str | None
    atoms: tuple[str, ...]                 # sorted symbols, charge row last
    declared: tuple = field(default=())    # user-typed coefficients, or None

    @property
    def compounds(self) -> tuple[Formula, ...]:
        return self.left + self.right

    @property
    def has_sides(self) -> bool:
        return bool(self.right)

    @property
    def charged(self) -> bool:
        return self.atoms and self.atoms[-1] == CHARGE_ROW

    @property
    def ring(self) -> Ring:
        return PolynomialRing(self.parameter) if self.parameter else ZZ


@dataclass(frozen=True)
class BalanceResult:
    coefficients: Matrix               # one column per independent reaction
    oriented: bool
    diagnostics: tuple[str, ...]

    @property
    def feasible(self) -> bool:
        return self.coefficients.cols > 0


def _scan_symbol(s: str, i: int, param: str | None):
    j = i + 1
    while j < len(s) and s[j].islower() and s[j] != param:
        j += 1
    return s[i:j], j


def _scan_count(s: str, i: int, ring: Ring, param: str | None):
    """Optional multiplier: digits, the parameter, or '+'-joined monomials."""

    def mono(j):
        d = j
        while d < len(s) and s[d].isdigit():
            d += 1
        digits = s[j:d]
        has_param = param is not None and s.startswith(param, d)
        if has_param:
            d += len(param)
        if not digits and not has_param:
            return None
        return (int(digits) if digits else 1, 1 if has_param else 0), d

    first = mono(i)
    if first is None:
        return ring.one, i
    (c, deg), j = first
    monos = [(c, deg)]
    while param is not None and j < len(s) and s[j] == "+":
        nxt = mono(j + 1)
        if nxt is None:
            break
        (c2, d2), j = nxt
        monos.append((c2, d2))
    if param is None:
        return monos[0][0], j
    coeffs = [0, 0]
    for c, deg in monos:
        coeffs[deg] += c
    return Poly(coeffs, param), j


def _merge(comp: dict, sub: dict, mult, ring: Ring) -> None:
    for sym, count in sub.items():
        add = ring.mul(count, mult)
        comp[sym] = ring.add(comp.get(sym, ring.zero), add)


def _parse_units(s: str, i: int, ring: Ring, param: str | None, closer: str | None):
    comp: dict = {}
    while i < len(s):
        ch = s[i]
        if closer is not None and ch == closer:
            return comp, i
        if ch in ")]":
            raise ParseError(f"unmatched {ch!r}", i)
        if ch in "([":
            want = ")" if ch == "(" else "]"
            sub, j = _parse_units(s, i + 1, ring, param, want)
            if j >= len(s) or s[j] != want:
                raise ParseError(f"missing {want!r} for group opened here", i)
            mult, j = _scan_count(s, j + 1, ring, param)
            _merge(comp, sub, mult, ring)
            i = j
        elif ch.isupper():
            sym, j = _scan_symbol(s, i, param)
            mult, j = _scan_count(s, j, ring, param)
            _merge(comp, {sym: ring.one}, mult, ring)
            i = j
        elif ch in "·.*":
            raise ParseError("hydrate dot notation is not supported", i)
        else:
            raise ParseError(f"unexpected {ch!r}", i)
    return comp, i


def parse_formula(text: str, parameter: str | None = None) -> Formula:
    """Parse a compound formula into its flat composition and charge."""
    src = text.strip()
    if not src:
        raise ParseError("empty formula", 0)
    if parameter is not None and not re.fullmatch(r"[a-z]", parameter):
        raise ParseError("formula parameter must be a single lowercase letter")
    ring: Ring = PolynomialRing(parameter) if parameter else ZZ
    body = src
    charge = 0
    m = _CHARGE.search(src)
    if m:
        body = src[: m.start()]
        k = int(m.group(1)) if m.group(1) else 1
        sign = m.group(2) or m.group(3)
        charge = k if sign == "+" else -k
        if not body:
            raise ParseError("charge without a formula", 0)
    comp, i = _parse_units(body, 0, ring, parameter, None)
    if i != len(body):
        raise ParseError(f"unexpected {body[i]!r}", i)
    comp = {sym: v for sym, v in comp.items() if not ring.is_zero(v)}
    if not comp:
        raise ParseError("formula has no atoms", 0)
    return Formula(src, comp, charge)


def _split_terms(side: str, param: str | None) -> list[str]:
    """Split on '+' term separators, keeping charge tails and parametric
    exponents intact."""
    terms: list[str] = []
    cur = ""
    for idx, ch in enumerate(side):
        if ch != "+":
            cur += ch
            continue
        if re.search(r"\^\d*$", cur.rstrip()):
            cur += ch  # sign of a trailing charge
        elif (
            param is not None
            and cur
            and not cur[-1].isspace()
            and idx + 1 < len(side)
            and (side[idx + 1].isdigit() or side.startswith(param, idx + 1))
        ):
            cur += ch  # '+' joining monomials of a parametric exponent
        else:
            terms.append(cur)
            cur = ""
    terms.append(cur)
    return [t.strip() for t in terms if t.strip()]


def _parse_term(term: str, parameter: str | None):
    m = re.match(r"(\d+)\s*", term)
    declared = None
    rest = term
    if m and len(term) > m.end():
        declared = int(m.group(1))
        rest = term[m.end() :]
    return parse_formula(rest, parameter), declared


def parse_reaction(text: str, parameter: str | None = None) -> Reaction:
    """Parse 'side -> side' (or 'side = side'), or a bare compound list.

    Terms are '+'-separated; a term may carry an optional leading integer
    coefficient, which is ignored for balancing but checked against the
    result afterwards.
    """
    arrows = list(re.finditer(r"->|=", text))
    if len(arrows) > 1:
        raise ParseError("more than one arrow in the reaction", arrows[1].start())
    if arrows:
        m = arrows[0]
        left_text, right_text = text[: m.start()], text[m.end() :]
    else:
        left_text, right_text = text, ""
    sides = []
    declared = []
    for chunk in (left_text, right_text):
        formulas = []
        for term in _split_terms(chunk, parameter):
            f, d = _parse_term(term, parameter)
            formulas.append(f)
            declared.append(d)
        sides.append(tuple(formulas))
    left, right = sides
    if not left and not right:
        raise ParseError("no compounds given", 0)
    if arrows and (not left or not right):
        raise ParseError("an arrow needs compounds on both sides", arrows[0].start())
    symbols = sorted({sym for f in left + right for sym in f.composition})
    atoms = tuple(symbols)
    if any(f.charge for f in left + right):
        atoms = atoms + (CHARGE_ROW,)
    return Reaction(left, right, parameter, atoms, tuple(declared))


def _atom_rows(reaction: Reaction, atom_order) -> tuple[str, ...]:
    if atom_order is None:
        return reaction.atoms
    order = list(atom_order)
    base = [a for a in reaction.atoms if a != CHARGE_ROW]
    supplied = [a for a in order if a != CHARGE_ROW]
    if sorted(supplied) != sorted(base):
        raise ValueError(
            f"atom order {order} is not a permutation of {base}"
        )
    if reaction.charged and CHARGE_ROW not in order:
        order.append(CHARGE_ROW)
    return tuple(order)


def adjacency(reaction: Reaction, atom_order=None) -> Matrix:
    """Atom-by-compound count matrix; charge is an extra bottom row."""
    ring = reaction.ring
    atoms = _atom_rows(reaction, atom_order)
    for f in reaction.compounds:
        for count in f.composition.values():
            ok = isinstance(count, int) if ring == ZZ else (
                isinstance(count, Poly) and count.param == ring.param
            )
            if not ok:
                raise InconsistentParameter(
                    f"compound {f.source!r} was parsed over a different parameter"
                )
    rows = []
    for sym in atoms:
        if sym == CHARGE_ROW:
            rows.append([ring.from_int(f.charge) for f in reaction.compounds])
        else:
            rows.append(
                [f.composition.get(sym, ring.zero) for f in reaction.compounds]
            )
    return Matrix(len(atoms), len(reaction.compounds), rows, ring)


def _violations(col, n_left, ring) -> int:
    bad = 0
    for j, v in enumerate(col):
        if ring.is_zero(v):
            continue
        if j < n_left and not ring.is_negative(v):
            bad += 1
        if j >= n_left and ring.is_negative(v):
            bad += 1
    return bad


def _first_nonzero_negative(col, ring) -> list:
    for v in col:
        if not ring.is_zero(v):
            if not ring.is_negative(v):
                return [ring.neg(x) for x in col]
            return list(col)
    return list(col)


def _orient(columns, reaction: Reaction, ring):
    """Flip column signs to match the declared sides where possible."""
    n_left = len(reaction.left)
    out = []
    diags = []
    oriented = True
    for idx, col in enumerate(columns, start=1):
        col = list(col)
        if not reaction.has_sides:
            out.append(_first_nonzero_negative(col, ring))
            continue
        flipped = [ring.neg(v) for v in col]
        v0, v1 = _violations(col, n_left, ring), _violations(flipped, n_left, ring)
        if v0 == 0:
            out.append(col)
        elif v1 == 0:
            out.append(flipped)
        else:
            oriented = False
            diags.append(
                f"generator {idx} places compounds on the wrong side of the arrow"
            )
            if v0 < v1:
                out.append(col)
            elif v1 < v0:
                out.append(flipped)
            else:
                out.append(_first_nonzero_negative(col, ring))
    return out, oriented, diags


def _declared_conflict(result_col, reaction: Reaction, ring) -> bool:
    """True when user-typed coefficients are not proportional to the result."""
    signed = []
    for j, d in enumerate(reaction.declared):
        if d is None:
            continue
        want = ring.from_int(-d if j < len(reaction.left) else d)
        signed.append((result_col[j], want))
    if len(signed) < 2:
        return False
    ref = next(((v, w) for v, w in signed if not ring.is_zero(w)), None)
    if ref is None:
        return False
    rv, rw = ref
    return any(
        ring.mul(v, rw) != ring.mul(rv, w) for v, w in signed
    )


def balance(
    reaction: Reaction,
    *,
    use_quiver: bool = False,
    saturate: bool = True,
    atom_order=None,
) -> BalanceResult:
    """Stoichiometric coefficients for every independent balanced reaction.

    The kernel of the adjacency matrix is computed by condensation
    (optionally preprocessed by pruning/substitution); over the integers a
    kernel of dimension > 1 is upgraded to a lattice basis, so the emitted
    columns generate every integer balancing.  Infeasibility is a normal
    result: no columns plus a diagnostic.
    """
    ring = reaction.ring
    a = adjacency(reaction, atom_order)
    diags: list[str] = []
    generators = None
    if use_quiver:
        try:
            generators, _ = quiver.kernel_columns(a)
        except quiver.DeclineQuivering as exc:
            diags.append(f"substitution preprocessing declined: {exc}")
            generators = None
    if generators is None:
        basis, _ = condense.kernel(a)
        generators = basis.generators
    if generators.cols == 0:
        diags.append("no balanced reaction exists among these compounds")
        return BalanceResult(generators, True, tuple(diags))
    if ring == ZZ and generators.cols > 1 and saturate:
        generators = smith.saturate(generators)
    cols, oriented, orient_diags = _orient(generators.columns(), reaction, ring)
    diags.extend(orient_diags)
    coeffs = Matrix.from_columns(cols, ring)
    if coeffs.cols == 1 and any(d is not None for d in reaction.declared):
        if _declared_conflict(coeffs.column(0), reaction, ring):
            diags.append("the coefficients you wrote do not balance; see the result")
    if coeffs.cols > 1:
        diags.append(
            f"{coeffs.cols} independent reactions are possible among these compounds"
        )
    return BalanceResult(coeffs, oriented, tuple(diags))


def _coefficient_text(mag, ring) -> str:
    if ring.is_unit(mag) and not ring.is_negative(mag):
        return ""
    s = ring.format(mag)
    if isinstance(mag, Poly) and (("+" in s[1:]) or ("-" in s[1:])):
        s = f"({s})"
    return s


def render(result: BalanceResult, reaction: Reaction) -> str:
    """One equation per generator, reactants left, coefficient 1 omitted."""
    if not result.feasible:
        return "no balanced reaction exists among these compounds"
    ring = reaction.ring
    lines = []
    for col in result.coefficients.columns():
        lhs, rhs = [], []
        for f, c in zip(reaction.compounds, col):
            if ring.is_zero(c):
                continue
            mag = ring.neg(c) if ring.is_negative(c) else c
            text = _coefficient_text(mag, ring)
            term = f"{text} {f.source}" if text else f.source
            (lhs if ring.is_negative(c) else rhs).append(term)
        lines.append(" + ".join(lhs) + " -> " + " + ".join(rhs))
    return "\n".join(lines)


def balance_report(reaction: Reaction, result: BalanceResult, atom_order=None) -> dict:
    """JSON-ready description; big integers ride as decimal strings."""
    ring = reaction.ring
    a = adjacency(reaction, atom_order)
    atoms = list(_atom_rows(reaction, atom_order))
    return {
        "compounds": [f.source for f in reaction.compounds],
        "atoms": atoms,
        "adjacency": [[ring.format(v) for v in row] for row in a.row_list()],
        "basis": [
            [ring.format(v) for v in col] for col in result.coefficients.columns()
        ],
        "equations": render(result, reaction).splitlines() if result.feasible else [],
        "feasible": result.feasible,
        "oriented": result.oriented,
        "diagnostics": list(result.diagnostics),
    }
