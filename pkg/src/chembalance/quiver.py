"""Balancing-by-inspection as a preprocessing pass.

Atoms supported on a single compound force that compound's coefficient to
zero; atoms supported on exactly two compounds become edges of a directed
graph on the compounds (source = the earlier compound in column order), each
edge fixing the target coefficient as a signed ratio of the source one.
Pruning iterates these eliminations to a fixpoint, discarding along the way
every edge that takes part in a pair of same-endpoint walks whose ratio
products disagree (the coefficients touched by such walks are forced to
zero).

The surviving graph is acyclic.  Substituting every non-source coefficient
by its ratio times its source coefficient shrinks the linear system to the
source compounds and the atoms not consumed as edges; solutions of the small
system lift back through the ratios.

Vertices reachable from two different sources would make the substitution
ambiguous; that raises :class:`DeclineQuivering`, and callers fall back to
the plain kernel computation.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import condense
from .matrix import Matrix
from .ring import Frac


class DeclineQuivering(Exception):
    """The substitution graph is ambiguous; use the plain kernel instead."""


@dataclass(frozen=True)
class Edge:
    atom: int
    source: int
    target: int
    a_source: object
    a_target: object


@dataclass(frozen=True)
class PruneState:
    atoms: tuple[int, ...]
    compounds: tuple[int, ...]
    zeroed: frozenset
    depth: int
    edges: tuple[Edge, ...]
    log: tuple[str, ...]


@dataclass(frozen=True)
class QuiveredSystem:
    atoms: tuple[int, ...]          # rows kept in the reduced system
    compounds: tuple[int, ...]      # source compounds (columns of a_hat)
    a_hat: Matrix
    source_of: dict
    ratio: dict                     # compound -> Frac relative to its source


def _edges_of(a: Matrix, atoms, compounds) -> list[Edge]:
    ring = a.ring
    edges = []
    for i in atoms:
        supp = [j for j in compounds if not ring.is_zero(a.at(i, j))]
        if len(supp) == 2:
            s, t = supp
            edges.append(Edge(i, s, t, a.at(i, s), a.at(i, t)))
    return edges


def _propagate(a: Matrix, edges, compounds):
    """Per-source signed ratios along the acyclic graph.

    Returns (info, bad_atoms, conflicts): info maps each vertex to {source:
    (ratio, edge-atom set)}; bad_atoms collects the atoms of every edge on a
    pair of conflicting walks (same source, same vertex, different ratio);
    conflicts lists those (vertex, source, ratio, ratio) pairs.
    """
    ring = a.ring
    incoming: dict = {j: [] for j in compounds}
    for e in edges:
        incoming[e.target].append(e)
    info: dict = {}
    bad: set = set()
    conflicts: list = []
    for j in compounds:  # column order is topological: edges increase it
        ins = incoming[j]
        if not ins:
            info[j] = {j: (Frac(ring.one, ring.one, ring), frozenset())}
            continue
        acc: dict = {}
        for e in ins:
            for src, (r, eset) in info[e.source].items():
                cand = -(r * Frac(e.a_source, e.a_target, ring))
                used = eset | {e.atom}
                if src not in acc:
                    acc[src] = (cand, used, None)
                else:
                    prev, prev_set, other = acc[src]
                    if other is None and prev != cand:
                        other = cand
                    acc[src] = (prev, prev_set | used, other)
        out = {}
        for src, (r, eset, other) in acc.items():
            if other is not None:
                bad |= eset
                conflicts.append((j, src, r, other))
            out[src] = (r, eset)
        info[j] = out
    return info, bad, conflicts


def prune_step(a: Matrix, atoms, compounds):
    """One pruning pass: returns (atoms', compounds', zeroed_now, notes)."""
    ring = a.ring
    notes = []
    supp = {
        i: [j for j in compounds if not ring.is_zero(a.at(i, j))] for i in atoms
    }
    i0 = {i for i in atoms if not supp[i]}
    i1 = {i for i in atoms if len(supp[i]) == 1}
    zero_now = {supp[i][0] for i in i1}
    if zero_now:
        notes.append(
            "single-support atoms force zero coefficients: "
            + ", ".join(f"atom {i} -> compound {supp[i][0]}" for i in sorted(i1))
        )
    atoms2 = [i for i in atoms if i not in i0 and i not in i1]
    comps2 = [j for j in compounds if j not in zero_now]

    edges = _edges_of(a, atoms2, comps2)
    _, bad_atoms, conflicts = _propagate(a, edges, comps2)
    if bad_atoms:
        for vertex, src, r1, r2 in conflicts:
            notes.append(
                f"inconsistent walk pair from compound {src} to compound {vertex}:"
                f" ratios {r1} and {r2}"
            )
        bad_edges = [e for e in edges if e.atom in bad_atoms]
        bad_comps = {e.source for e in bad_edges} | {e.target for e in bad_edges}
        notes.append(
            "conflicting walks zero compounds: "
            + ", ".join(str(j) for j in sorted(bad_comps))
        )
        zero_now |= bad_comps
        atoms2 = [i for i in atoms2 if i not in bad_atoms]
        comps2 = [j for j in comps2 if j not in bad_comps]
    return tuple(atoms2), tuple(comps2), zero_now, notes


def prune_fixpoint(a: Matrix) -> PruneState:
    """Iterate prune_step until the active sets stabilize."""
    atoms = tuple(range(a.rows))
    compounds = tuple(range(a.cols))
    zeroed: set = set()
    depth = 0
    log: list[str] = []
    while True:
        atoms2, comps2, zero_now, notes = prune_step(a, atoms, compounds)
        if atoms2 == atoms and comps2 == compounds:
            break
        depth += 1
        log.append(f"pass {depth}:")
        log.extend("  " + line for line in notes)
        atoms, compounds = atoms2, comps2
        zeroed |= zero_now
    edges = tuple(_edges_of(a, atoms, compounds))
    return PruneState(atoms, compounds, frozenset(zeroed), depth, edges, tuple(log))


def quivered_system(a: Matrix, state: PruneState) -> QuiveredSystem:
    """Reduce the system to the source compounds of the pruned graph."""
    ring = a.ring
    info, bad, _ = _propagate(a, state.edges, state.compounds)
    if bad:
        raise DeclineQuivering("pruned graph still has conflicting walks")
    source_of = {}
    ratio = {}
    for j in state.compounds:
        if len(info[j]) > 1:
            raise DeclineQuivering(
                f"compound {j} is reachable from several sources"
            )
        ((src, (r, _)),) = info[j].items()
        source_of[j] = src
        ratio[j] = r
    j_hat = [j for j in state.compounds if source_of[j] == j]
    edge_atoms = {e.atom for e in state.edges}
    i_hat = [i for i in state.atoms if i not in edge_atoms]

    col_pos = {j: c for c, j in enumerate(j_hat)}
    rows = []
    for i in i_hat:
        acc = [Frac(ring.zero, ring.one, ring) for _ in j_hat]
        for j in state.compounds:
            v = a.at(i, j)
            if not ring.is_zero(v):
                acc[col_pos[source_of[j]]] = (
                    acc[col_pos[source_of[j]]] + Frac(v, ring.one, ring) * ratio[j]
                )
        rows.append(_clear_denominators(acc, ring))
    a_hat = Matrix(len(i_hat), len(j_hat), rows, ring)
    return QuiveredSystem(tuple(i_hat), tuple(j_hat), a_hat, source_of, ratio)


def _clear_denominators(fracs, ring):
    """Scale a row of fractions into the ring and divide out the content."""
    l = ring.one
    for f in fracs:
        l = ring.lcm(l, f.den)
    vals = [(f * Frac(l, ring.one, ring)).as_ring_element() for f in fracs]
    _, prim = ring.content_and_primitive(vals)
    return prim


def reconstruct(w_hat: Matrix, a: Matrix, state: PruneState, system: QuiveredSystem) -> Matrix:
    """Lift solutions of the reduced system back to all compounds.

    Pruned-away coefficients are zero; active ones are the source value times
    the propagated ratio.  Columns are scaled to the ring and made primitive.
    """
    ring = a.ring
    active = set(state.compounds)
    cols = []
    for mu in range(w_hat.cols):
        at_source = {j: w_hat.at(idx, mu) for idx, j in enumerate(system.compounds)}
        fr = []
        for j in range(a.cols):
            if j in active:
                fr.append(
                    system.ratio[j]
                    * Frac(at_source[system.source_of[j]], ring.one, ring)
                )
            else:
                fr.append(Frac(ring.zero, ring.one, ring))
        cols.append(_clear_denominators(fr, ring))
    if not cols:
        return Matrix.zeros(a.cols, 0, ring)
    return Matrix.from_columns(cols, ring)


def kernel_columns(a: Matrix):
    """Kernel basis via pruning and substitution.

    Returns (columns, PruneState); raises DeclineQuivering when the reduced
    substitution is ambiguous.
    """
    state = prune_fixpoint(a)
    system = quivered_system(a, state)
    basis, _ = condense.kernel(system.a_hat)
    lifted = reconstruct(basis.generators, a, state, system)
    return lifted, state
