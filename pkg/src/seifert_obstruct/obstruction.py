"""Certificates that a closed strictly diagonally dominant graph manifold has no
vertex-faithful representation into the Seifert motion group.

The engine does not look for representations.  For a vertex ``v`` at which a
representation is supposed faithful, every neighbor's fiber must be noncentral
of projectively infinite order.  Whatever maximal noncentral Abelian component
contains such a neighbor, its fiber equations form an integer matrix system
whose matrix is strictly diagonally dominant, hence invertible, so each member
fiber is a root of a central element and has projectively finite order.  The
certificate records that contradiction for every candidate component.
"""

from __future__ import annotations

import hashlib
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from . import __version__
from .covers import AbelianComponent, Disconnected, double_cover_cut, lift_id
from .exact import adjugate, exact_det, identity, is_sdd_matrix, matmul
from .manifold import (
    BlockId,
    Edge,
    GraphManifold,
    charge,
    intersection_index,
    is_sdd,
    is_sdd_block,
    reciprocal_index_sum,
    validate,
)


class ObstructionError(Exception):
    """Precondition failure for certification."""


class NotClosedError(ObstructionError):
    pass


class NotSDDError(ObstructionError):
    pass


def fiber_product(m: GraphManifold, v: BlockId) -> int:
    ns = m.neighbors(v)
    if not ns:
        raise ValueError(f"block {v!r} has no glued neighbor")
    p = 1
    for w in ns:
        p *= intersection_index(m, v, w)
    return p


@dataclass(frozen=True)
class AssociatedMatrix:
    """Fiber equations of an induced component: ``entries @ f = rhs``.

    ``rhs[i]`` lists ``(external neighbor, coefficient)`` pairs; the neighbor
    stands for its (central) fiber image.
    """

    members: tuple[BlockId, ...]
    entries: list[list[int]]
    rhs: list[list[tuple[BlockId, int]]]

    @property
    def order(self) -> int:
        return len(self.members)


def _exact_quotient(p: int, q: int) -> int:
    quo, rem = divmod(p, q)
    assert rem == 0, f"{p} is not divisible by {q}"
    return quo


def associated_matrix(m: GraphManifold, vertices: Iterable[BlockId]) -> AssociatedMatrix:
    """Matrix of the component induced by ``vertices`` (rows in sorted id order).

    Row ``i``: diagonal ``b_i k_i``; ``-b_i / b_{j,i}`` for members ``j``
    adjacent to ``i``; external neighbors ``w`` enter the right-hand side with
    coefficient ``b_i / b_{w,i}``.
    """
    members = tuple(sorted(vertices))
    index = {v: i for i, v in enumerate(members)}
    n = len(members)
    entries = [[0] * n for _ in range(n)]
    rhs: list[list[tuple[BlockId, int]]] = []
    for i, v in enumerate(members):
        bv = fiber_product(m, v)
        diag = bv * charge(m, v)
        assert diag.denominator == 1
        entries[i][i] = int(diag)
        row_rhs = []
        for w in m.neighbors(v):
            coeff = _exact_quotient(bv, intersection_index(m, v, w))
            if w in index:
                entries[i][index[w]] = -coeff
            else:
                row_rhs.append((w, coeff))
        rhs.append(row_rhs)
    return AssociatedMatrix(members, entries, rhs)


def associated_matrix_for(m: GraphManifold, comp: AbelianComponent) -> AssociatedMatrix:
    if not comp.is_induced(m):
        raise ValueError(
            "component is not an induced subgraph; pass to a cover with "
            "covers.induce_component_cover first"
        )
    return associated_matrix(m, comp.vertices)


@dataclass(frozen=True)
class RowDominance:
    diag_abs: int
    off_mass: int
    rhs_mass: int

    @property
    def strict(self) -> bool:
        return self.diag_abs > self.off_mass

    @property
    def strict_with_rhs(self) -> bool:
        return self.diag_abs > self.off_mass + self.rhs_mass


def row_dominance(a: AssociatedMatrix) -> list[RowDominance]:
    rows = []
    for i, row in enumerate(a.entries):
        off = sum(abs(x) for j, x in enumerate(row) if j != i)
        rhs = sum(abs(c) for _, c in a.rhs[i])
        rows.append(RowDominance(abs(row[i]), off, rhs))
    return rows


@dataclass(frozen=True)
class FormalFiberSolution:
    """``det * f_i = sum_w terms[i][w] * c_w`` for every member ``i``."""

    members: tuple[BlockId, ...]
    det: int
    terms: list[dict[BlockId, int]]

    def projectively_finite(self) -> list[bool]:
        # det != 0: each fiber is a root of a central element
        return [self.det != 0 for _ in self.members]


def rhs_vectors(a: AssociatedMatrix) -> list[dict[BlockId, int]]:
    out = []
    for row in a.rhs:
        d: dict[BlockId, int] = {}
        for w, c in row:
            d[w] = d.get(w, 0) + c
        out.append(d)
    return out


def solve_fibers(a: AssociatedMatrix, det: int | None = None, adj=None) -> FormalFiberSolution:
    if det is None:
        det = exact_det(a.entries)
    if det == 0:
        raise ArithmeticError("associated matrix is singular")
    if adj is None:
        adj = adjugate(a.entries)
    rhs = rhs_vectors(a)
    terms = []
    for i in range(a.order):
        t: dict[BlockId, int] = {}
        for j in range(a.order):
            if adj[i][j] == 0:
                continue
            for w, c in rhs[j].items():
                t[w] = t.get(w, 0) + adj[i][j] * c
        terms.append({w: c for w, c in sorted(t.items()) if c != 0})
    return FormalFiberSolution(a.members, det, terms)


def substitute(a: AssociatedMatrix, sol: FormalFiberSolution) -> bool:
    """Check ``entries @ sol.terms == det * rhs`` symbol by symbol."""
    rhs = rhs_vectors(a)
    for i, row in enumerate(a.entries):
        lhs: dict[BlockId, int] = {}
        for j, x in enumerate(row):
            for w, c in sol.terms[j].items():
                lhs[w] = lhs.get(w, 0) + x * c
        lhs = {w: c for w, c in lhs.items() if c != 0}
        want = {w: sol.det * c for w, c in rhs[i].items() if c != 0}
        if lhs != want:
            return False
    return True


# ---------------------------------------------------------------------------
# candidate enumeration


def connected_subsets(m: GraphManifold, allowed: set[BlockId], seeds: set[BlockId]):
    """All connected (in the induced graph) subsets of ``allowed`` meeting ``seeds``.

    Each subset is produced once, grown from its smallest seed member.
    """
    order = {v: i for i, v in enumerate(sorted(allowed))}
    for s in sorted(seeds & allowed):
        yield from _grow(m, allowed, seeds, order, frozenset([s]), s, set(), _frontier(m, allowed, {s}))


def _frontier(m, allowed, current):
    return {w for v in current for w in m.neighbors(v) if w in allowed and w not in current}


def _grow(m, allowed, seeds, order, current, root, banned, frontier):
    # reject subsets whose smallest seed is not the root
    yield current
    candidates = sorted(
        (w for w in frontier if w not in banned and not (w in seeds and order[w] < order[root])),
        key=order.get,
    )
    banned = set(banned)
    for w in candidates:
        new = current | {w}
        new_frontier = (frontier | {x for x in m.neighbors(w) if x in allowed}) - new
        yield from _grow(m, allowed, seeds, order, new, root, banned, new_frontier)
        banned.add(w)


def internal_edges(m: GraphManifold, vertices) -> list[Edge]:
    vs = set(vertices)
    return [e for e in m.undirected_edges() if e[0] in vs and e[1] in vs]


def _connected_without(m: GraphManifold, vertices, edges: list[Edge], removed: set[Edge]) -> bool:
    vs = sorted(vertices)
    adj = {v: [] for v in vs}
    for e in edges:
        if e not in removed:
            adj[e[0]].append(e[1])
            adj[e[1]].append(e[0])
    seen = {vs[0]}
    stack = [vs[0]]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vs)


def cut_subsets(m: GraphManifold, vertices, max_cut_edges: int):
    """Cut sets ``C`` of internal edges leaving the vertex set connected.

    Returns ``(cut_sets, complete)``; ``complete`` is False when the internal
    edge count exceeds ``max_cut_edges`` and only the empty cut was produced.
    """
    edges = internal_edges(m, vertices)
    if len(edges) > max_cut_edges:
        return [()], False
    out = []
    for r in range(len(edges) + 1):
        for c in combinations(edges, r):
            if _connected_without(m, vertices, edges, set(c)):
                out.append(c)
    return out, True


# ---------------------------------------------------------------------------
# certification


@dataclass
class CertifyOptions:
    max_vertices: int = 12
    max_cut_edges: int = 12
    max_candidates: int = 200_000
    components: list[frozenset[BlockId]] | None = None
    workers: int | None = None


@dataclass
class Certificate:
    data: dict
    gaps: list[str] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return not self.gaps


def manifold_hash(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def block_record(m: GraphManifold, v: BlockId) -> dict:
    k = charge(m, v)
    r = reciprocal_index_sum(m, v)
    return {
        "id": v,
        "genus": m.blocks[v].genus,
        "charge": fraction_str(k),
        "fiber_product": fiber_product(m, v),
        "neighbors": [
            {"id": w, "b": intersection_index(m, v, w), "slope": fraction_str(Fraction(m.glue(w, v).a, m.glue(w, v).b))}
            for w in m.neighbors(v)
        ],
        "sdd": {"abs_charge": fraction_str(abs(k)), "reciprocal_sum": fraction_str(r), "holds": abs(k) > r},
    }


def analyze_candidate(m: GraphManifold, v: BlockId, component: Iterable[BlockId], cut: Iterable[Edge]) -> dict:
    """One candidate maximal noncentral Abelian component for faithfulness at ``v``."""
    component = sorted(component)
    cut = sorted(tuple(e) for e in cut)
    if cut:
        cover = double_cover_cut(m, cut)
        if isinstance(cover, Disconnected):
            # cannot happen when the component stays connected without the cut
            raise AssertionError("cut of a connected component produced a disconnected cover")
        space = cover.total
        members = sorted(lift_id(u, s) for u in component for s in (0, 1))
        anchor = lift_id(v, 0)
        cover_rec = {
            "cut": [list(e) for e in cut],
            "connected": True,
            "blocks": len(space.blocks),
            "edges": len(space.edges),
            "anchor": anchor,
        }
    else:
        space = m
        members = component
        anchor = v
        cover_rec = None
    a = associated_matrix(space, members)
    rows = row_dominance(a)
    det = exact_det(a.entries)
    adj = adjugate(a.entries)
    assert matmul(adj, a.entries) == identity(a.order, det)
    sol = solve_fibers(a, det, adj)
    assert substitute(a, sol)
    witnesses = [u for u in space.neighbors(anchor) if u in set(a.members)]
    holds = (
        all(r.strict_with_rhs for r in rows)
        and is_sdd_matrix(a.entries)
        and det != 0
        and bool(witnesses)
    )
    return {
        "component": component,
        "cover": cover_rec,
        "members": list(a.members),
        "matrix": a.entries,
        "rhs": [[{"symbol": w, "coeff": c} for w, c in row] for row in a.rhs],
        "rows": [
            {"diag_abs": r.diag_abs, "off_mass": r.off_mass, "rhs_mass": r.rhs_mass, "strict": r.strict_with_rhs}
            for r in rows
        ],
        "determinant": det,
        "adjugate": adj,
        "solutions": [
            {"member": u, "det": det, "terms": [{"symbol": w, "coeff": c} for w, c in t.items()]}
            for u, t in zip(a.members, sol.terms)
        ],
        "witnesses": witnesses,
        "contradiction": holds,
    }


def candidates_for(m: GraphManifold, v: BlockId, opts: CertifyOptions) -> tuple[list, list[str]]:
    gaps = []
    allowed = set(m.blocks) - {v}
    seeds = set(m.neighbors(v))
    if opts.components is not None:
        comps = []
        for c in opts.components:
            c = frozenset(c)
            if v not in c and c & seeds and c <= allowed:
                comps.append(c)
        if len(m.blocks) > opts.max_vertices:
            gaps.append(f"vertex {v}: only user-supplied components analyzed")
    elif len(m.blocks) > opts.max_vertices:
        return [], [f"vertex {v}: {len(m.blocks)} blocks exceed the enumeration bound {opts.max_vertices}"]
    else:
        comps = list(connected_subsets(m, allowed, seeds))
    out = []
    for comp in sorted(comps, key=lambda c: (len(c), sorted(c))):
        cuts, complete = cut_subsets(m, comp, opts.max_cut_edges)
        if not complete:
            gaps.append(f"vertex {v}: component {sorted(comp)} has too many internal edges; only the empty cut analyzed")
        for cut in cuts:
            out.append((comp, cut))
            if len(out) > opts.max_candidates:
                gaps.append(f"vertex {v}: candidate limit {opts.max_candidates} reached")
                return out[: opts.max_candidates], gaps
    return out, gaps


def _vertex_record(args):
    m, v, opts = args
    cands, gaps = candidates_for(m, v, opts)
    records = [analyze_candidate(m, v, comp, cut) for comp, cut in cands]
    records.sort(key=lambda r: (len(r["component"]), r["component"], r["cover"]["cut"] if r["cover"] else []))
    return {
        "vertex": v,
        "neighbors": m.neighbors(v),
        "candidates": records,
        "contradiction": bool(records) and all(r["contradiction"] for r in records),
    }, gaps


def _worker_count(opts: CertifyOptions) -> int:
    n = opts.workers or 1
    cap = os.environ.get("SEIFERT_OBSTRUCT_THREADS")
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return n


def certify_no_vertex_faithful(m: GraphManifold, options: CertifyOptions | None = None, text: str | None = None) -> Certificate:
    """Build the certificate; raises ObstructionError subclasses on bad input."""
    from .io import serialize_manifold

    opts = options or CertifyOptions()
    report = validate(m)
    if not report.ok:
        raise ObstructionError(f"invalid manifold:\n{report}")
    if not m.is_closed():
        raise NotClosedError("manifold is not closed (has free boundary tori)")
    if not is_sdd(m):
        bad = [v for v in m.block_ids() if not is_sdd_block(m, v)]
        raise NotSDDError(f"manifold is not strictly diagonally dominant (blocks {', '.join(bad)})")
    canonical = serialize_manifold(m) if text is None else text
    jobs = [(m, v, opts) for v in m.block_ids()]
    workers = _worker_count(opts)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_vertex_record, jobs))
    else:
        results = [_vertex_record(j) for j in jobs]
    vertices = [r for r, _ in results]
    gaps = [g for _, gs in results for g in gs]
    conclusion = all(r["contradiction"] for r in vertices) and not gaps
    data = {
        "schema": "seifert-obstruct/certificate",
        "version": 1,
        "tool_version": __version__,
        "kind": "no-vertex-faithful-representation",
        "manifold": {"sha256": manifold_hash(canonical), "text": canonical},
        "options": {
            "max_vertices": opts.max_vertices,
            "max_cut_edges": opts.max_cut_edges,
            "max_candidates": opts.max_candidates,
            "components": None if opts.components is None else sorted(sorted(c) for c in opts.components),
        },
        "blocks": [block_record(m, v) for v in m.block_ids()],
        "vertices": vertices,
        "exhaustive": not gaps,
        "gaps": gaps,
        "conclusion": "no vertex-faithful representation" if conclusion else "partial",
    }
    return Certificate(data, gaps)
