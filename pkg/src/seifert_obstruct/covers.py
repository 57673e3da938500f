"""Graph-level double covers by cutting and cross-gluing edges, plus invariant
bookkeeping for characteristic covers."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .manifold import (
    BlockId,
    Edge,
    GraphManifold,
    SeifertBlock,
    charge,
    connected_component,
    intersection_index,
    is_sdd_block,
    reciprocal_index_sum,
)

SHEET_SEP = "~"


def lift_id(v: BlockId, sheet: int) -> BlockId:
    return f"{v}{SHEET_SEP}{sheet}"


def _edge_key(m: GraphManifold, e: Edge) -> Edge:
    v, w = e
    if (v, w) in m.edges:
        return (v, w)
    if (w, v) in m.edges:
        return (w, v)
    raise KeyError(f"no edge between {v!r} and {w!r}")


@dataclass(frozen=True)
class CoverGraph:
    base: GraphManifold
    total: GraphManifold
    block_map: dict[BlockId, BlockId]
    edge_map: dict[Edge, Edge]
    sheet: dict[BlockId, int] = field(default_factory=dict)
    cut: frozenset[Edge] = frozenset()


@dataclass(frozen=True)
class Disconnected:
    """The cut is a coboundary: the double cover splits into two copies.

    ``coloring`` is the witness: a 0/1 labelling of base blocks that differs
    across an edge exactly when the edge is cut.
    """

    cover: CoverGraph
    components: tuple[frozenset[BlockId], frozenset[BlockId]]
    coloring: dict[BlockId, int]


def double_cover_cut(m: GraphManifold, cut: Iterable[Edge]) -> CoverGraph | Disconnected:
    """Two copies of ``m`` with every cut edge cross-glued between the copies."""
    cut_keys = frozenset(_edge_key(m, e) for e in cut)
    blocks = {}
    block_map = {}
    sheet = {}
    for v, b in m.blocks.items():
        for s in (0, 1):
            u = lift_id(v, s)
            if u in m.blocks or u in blocks:
                raise ValueError(f"lifted block id {u!r} collides with an existing id")
            blocks[u] = SeifertBlock(u, b.genus, b.free_boundaries)
            block_map[u] = v
            sheet[u] = s
    edges = {}
    edge_map = {}
    for (v, w), g in m.edges.items():
        flip = 1 if (v, w) in cut_keys else 0
        for s in (0, 1):
            e = (lift_id(v, s), lift_id(w, s ^ flip))
            edges[e] = g
            edge_map[e] = (v, w)
    total = GraphManifold(blocks, edges)
    cover = CoverGraph(m, total, block_map, edge_map, sheet, cut_keys)
    start = lift_id(next(iter(sorted(m.blocks))), 0)
    comp0 = connected_component(total, start)
    if len(comp0) == len(blocks):
        return cover
    comp1 = frozenset(blocks) - comp0
    coloring = {block_map[u]: sheet[u] for u in comp0}
    return Disconnected(cover, (frozenset(comp0), comp1), coloring)


def voltage_is_trivial(m: GraphManifold, cut: Iterable[Edge]) -> tuple[bool, dict[BlockId, int] | None]:
    """Is the Z/2 voltage (1 on cut edges) a coboundary?  Returns the coloring if so."""
    cut_keys = {frozenset(e) for e in cut}
    color: dict[BlockId, int] = {}
    for root in sorted(m.blocks):
        if root in color:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in m.neighbors(v):
                want = color[v] ^ (1 if frozenset((v, w)) in cut_keys else 0)
                if w not in color:
                    color[w] = want
                    queue.append(w)
                elif color[w] != want:
                    return False, None
    return True, color


def cover_invariants_preserved(c: CoverGraph) -> bool:
    """Every lifted block has the same genus, degree, charge, indices and SDD status as its image."""
    base, total = c.base, c.total
    for u, v in c.block_map.items():
        bu, bv = total.blocks[u], base.blocks[v]
        if (bu.genus, bu.free_boundaries) != (bv.genus, bv.free_boundaries):
            return False
        if total.degree(u) != base.degree(v):
            return False
        if sorted(c.block_map[x] for x in total.neighbors(u)) != base.neighbors(v):
            return False
        for x in total.neighbors(u):
            if intersection_index(total, u, x) != intersection_index(base, v, c.block_map[x]):
                return False
            if total.glue(u, x) != base.glue(v, c.block_map[x]):
                return False
        if charge(total, u) != charge(base, v):
            return False
        if is_sdd_block(total, u) != is_sdd_block(base, v):
            return False
    for e, image in c.edge_map.items():
        if (c.block_map[e[0]], c.block_map[e[1]]) != image:
            return False
    return True


def relabel_cover(m: GraphManifold, suffix: str = "'") -> CoverGraph:
    """The trivial (degree one) cover given by renaming every block."""
    name = {v: f"{v}{suffix}" for v in m.blocks}
    blocks = {name[v]: SeifertBlock(name[v], b.genus, b.free_boundaries) for v, b in m.blocks.items()}
    edges = {(name[v], name[w]): g for (v, w), g in m.edges.items()}
    total = GraphManifold(blocks, edges)
    return CoverGraph(
        m,
        total,
        {name[v]: v for v in m.blocks},
        {(name[v], name[w]): (v, w) for (v, w) in m.edges},
        {name[v]: 0 for v in m.blocks},
    )


# ---------------------------------------------------------------------------
# characteristic covers


@dataclass(frozen=True)
class ScaledInvariants:
    block: BlockId
    multiplicity: int
    scaled_charge: Fraction
    scaled_reciprocal_sum: Fraction

    @property
    def is_sdd(self) -> bool:
        return abs(self.scaled_charge) > self.scaled_reciprocal_sum


def scale_invariants(m: GraphManifold, v: BlockId, multiplicity: int) -> ScaledInvariants:
    """Invariants of a lift of ``v`` in a characteristic cover where every
    incident edge lifts ``multiplicity`` times at the lifted block."""
    if multiplicity < 1:
        raise ValueError("multiplicity must be a positive integer")
    return ScaledInvariants(
        v,
        multiplicity,
        multiplicity * charge(m, v),
        multiplicity * reciprocal_index_sum(m, v),
    )


# ---------------------------------------------------------------------------
# inducing a component


@dataclass(frozen=True)
class AbelianComponent:
    """A connected set of blocks together with the edges the component uses."""

    vertices: frozenset[BlockId]
    edges: frozenset[frozenset[BlockId]] | None = None  # None: all internal edges

    @classmethod
    def of(cls, vertices, edges=None) -> AbelianComponent:
        es = None if edges is None else frozenset(frozenset(e) for e in edges)
        return cls(frozenset(vertices), es)

    def internal_edges(self, m: GraphManifold) -> list[Edge]:
        return [e for e in m.undirected_edges() if e[0] in self.vertices and e[1] in self.vertices]

    def excluded_edges(self, m: GraphManifold) -> list[Edge]:
        if self.edges is None:
            return []
        return [e for e in self.internal_edges(m) if frozenset(e) not in self.edges]

    def is_induced(self, m: GraphManifold) -> bool:
        return not self.excluded_edges(m)

    def is_connected(self, m: GraphManifold) -> bool:
        if not self.vertices:
            return False
        used = {frozenset(e) for e in self.internal_edges(m)} if self.edges is None else self.edges
        start = min(self.vertices)
        seen = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in m.neighbors(v):
                if w in self.vertices and w not in seen and frozenset((v, w)) in used:
                    seen.add(w)
                    queue.append(w)
        return seen == set(self.vertices)


@dataclass(frozen=True)
class InducedComponent:
    manifold: GraphManifold
    vertices: frozenset[BlockId]
    cover: CoverGraph | None = None


def induce_component_cover(
    m: GraphManifold, comp: AbelianComponent, cut: Iterable[Edge] | None = None
) -> InducedComponent | Disconnected:
    """Pass to a double cover in which the lifted vertex set induces the component.

    By default the cut set is every internal edge the component leaves out; an
    explicit ``cut`` overrides it.  An already induced component (with no
    explicit cut) is returned unchanged.
    """
    if not comp.is_connected(m):
        raise ValueError("component does not induce a connected subgraph")
    cut_edges = list(comp.excluded_edges(m) if cut is None else cut)
    if not cut_edges:
        return InducedComponent(m, comp.vertices)
    result = double_cover_cut(m, cut_edges)
    if isinstance(result, Disconnected):
        return result
    lifted = frozenset(u for u, v in result.block_map.items() if v in comp.vertices)
    return InducedComponent(result.total, lifted, result)
