"""Graph manifolds in normal form: trivial circle bundle blocks over surfaces of
genus >= 2, a simple dual graph, and a determinant -1 gluing matrix per edge.

Convention for the gluing matrix ``G[v, w] = [[a, b], [c, d]]`` of the directed
edge ``v -> w``: the fiber ``f_v`` of block ``v`` is glued to ``a f_w + b z_w``
and the section ``z_v`` to ``c f_w + d z_w``, both in block ``w``'s Waldhausen
basis.  ``b`` is the intersection index of the two fibers.  The reverse edge
carries the inverse matrix ``[[-d, b], [c, -a]]``.

All arithmetic here is exact (Python ints and Fractions).
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

BlockId = str
Edge = tuple[BlockId, BlockId]


@dataclass(frozen=True)
class GluingMatrix:
    a: int
    b: int
    c: int
    d: int

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> GluingMatrix:
        # valid for det = -1
        return GluingMatrix(-self.d, self.b, self.c, -self.a)

    def __matmul__(self, other: GluingMatrix) -> GluingMatrix:
        return GluingMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]


@dataclass(frozen=True)
class SeifertBlock:
    id: BlockId
    genus: int
    free_boundaries: int = 0


@dataclass(frozen=True)
class GraphManifold:
    """Blocks keyed by id and gluing matrices keyed by the stored edge direction."""

    blocks: Mapping[BlockId, SeifertBlock]
    edges: Mapping[Edge, GluingMatrix]
    _adj: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        adj: dict[BlockId, list[BlockId]] = {v: [] for v in self.blocks}
        for v, w in self.edges:
            adj.setdefault(v, []).append(w)
            adj.setdefault(w, []).append(v)
        object.__setattr__(self, "_adj", {v: sorted(ns) for v, ns in adj.items()})

    @classmethod
    def build(cls, blocks: Iterable[SeifertBlock], edges) -> GraphManifold:
        """``edges`` is an iterable of ``(v, w, GluingMatrix or 4-tuple)``."""
        bmap = {}
        for b in blocks:
            bmap[b.id] = b
        emap = {}
        for v, w, g in edges:
            if not isinstance(g, GluingMatrix):
                g = GluingMatrix(*(int(x) for x in g))
            emap[(v, w)] = g
        return cls(bmap, emap)

    def __hash__(self):
        return hash((tuple(sorted(self.blocks.items())), tuple(sorted(self.edges.items()))))

    def block_ids(self) -> list[BlockId]:
        return sorted(self.blocks)

    def neighbors(self, v: BlockId) -> list[BlockId]:
        return self._adj.get(v, [])

    def has_edge(self, v: BlockId, w: BlockId) -> bool:
        return (v, w) in self.edges or (w, v) in self.edges

    def glue(self, v: BlockId, w: BlockId) -> GluingMatrix:
        """Gluing matrix of the directed edge ``v -> w``."""
        if (v, w) in self.edges:
            return self.edges[(v, w)]
        if (w, v) in self.edges:
            return self.edges[(w, v)].inverse()
        raise KeyError(f"no edge between {v!r} and {w!r}")

    def undirected_edges(self) -> list[Edge]:
        """Stored edges in canonical (sorted) order, keeping stored direction."""
        return sorted(self.edges, key=lambda e: tuple(sorted(e)))

    def degree(self, v: BlockId) -> int:
        return len(self.neighbors(v))

    def is_closed(self) -> bool:
        return all(b.free_boundaries == 0 for b in self.blocks.values())

    def with_edges(self, edges: Mapping[Edge, GluingMatrix]) -> GraphManifold:
        return GraphManifold(dict(self.blocks), dict(edges))


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "valid" if self.ok else "\n".join(self.problems)


def validate(m: GraphManifold) -> ValidationReport:
    report = ValidationReport()
    out = report.problems
    for bid, block in sorted(m.blocks.items()):
        if block.id != bid:
            out.append(f"block {bid}: id mismatch ({block.id})")
        if block.genus < 2:
            out.append(f"block {bid}: genus {block.genus} < 2")
        if block.free_boundaries < 0:
            out.append(f"block {bid}: negative free boundary count")
    seen: set[frozenset] = set()
    for (v, w), g in sorted(m.edges.items()):
        name = f"edge {v} {w}"
        if v == w:
            out.append(f"{name}: self-loop")
        for x in (v, w):
            if x not in m.blocks:
                out.append(f"{name}: unknown block {x}")
        key = frozenset((v, w))
        if key in seen:
            out.append(f"{name}: multiple edge")
        seen.add(key)
        if g.det != -1:
            out.append(f"{name}: determinant {g.det} != -1")
        if g.b == 0:
            out.append(f"{name}: intersection index b = 0")
    if m.blocks and len(connected_component(m, next(iter(sorted(m.blocks))))) != len(m.blocks):
        out.append("dual graph is disconnected")
    if not m.blocks:
        out.append("no blocks")
    return report


def connected_component(m: GraphManifold, start: BlockId, allowed=None) -> set[BlockId]:
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in m.neighbors(v):
            if w not in seen and (allowed is None or w in allowed):
                seen.add(w)
                queue.append(w)
    return seen


# ---------------------------------------------------------------------------
# invariants


def intersection_index(m: GraphManifold, v: BlockId, w: BlockId) -> int:
    return m.glue(w, v).b


def slope(m: GraphManifold, v: BlockId, w: BlockId) -> Fraction:
    """Slope ``a_{w,v} / b_{w,v}`` of the torus between ``v`` and ``w``, seen from ``v``."""
    g = m.glue(w, v)
    return Fraction(g.a, g.b)


def charge(m: GraphManifold, v: BlockId) -> Fraction:
    # free boundary tori have slope zero
    return sum((slope(m, v, w) for w in m.neighbors(v)), Fraction(0))


def reciprocal_index_sum(m: GraphManifold, v: BlockId) -> Fraction:
    return sum((Fraction(1, abs(intersection_index(m, v, w))) for w in m.neighbors(v)), Fraction(0))


def is_sdd_block(m: GraphManifold, v: BlockId) -> bool:
    return abs(charge(m, v)) > reciprocal_index_sum(m, v)


def is_sdd(m: GraphManifold) -> bool:
    return all(is_sdd_block(m, v) for v in m.blocks)


def graph_distance(m: GraphManifold, v: BlockId, w: BlockId) -> int:
    if v not in m.blocks or w not in m.blocks:
        raise KeyError("unknown block")
    dist = {v: 0}
    queue = deque([v])
    while queue:
        x = queue.popleft()
        if x == w:
            return dist[x]
        for y in m.neighbors(x):
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    raise ValueError(f"{v!r} and {w!r} lie in different components")


def waldhausen_rebase(m: GraphManifold, v: BlockId, offsets: Mapping[BlockId, int]) -> GraphManifold:
    """Change block ``v``'s trivialization by ``z_{v,w} -> z_{v,w} - n_w f_{v,w}``.

    ``offsets`` maps neighbors ``w`` of ``v`` to ``n_w`` (missing neighbors get 0)
    and must sum to zero.  Each incident slope moves by ``+n_w``; the charge
    of ``v`` is unchanged.
    """
    if v not in m.blocks:
        raise KeyError(v)
    unknown = set(offsets) - set(m.neighbors(v))
    if unknown:
        raise ValueError(f"offsets for non-neighbors of {v!r}: {sorted(unknown)}")
    if sum(offsets.values()) != 0:
        raise ValueError("Waldhausen offsets must sum to zero")
    edges = dict(m.edges)
    for w, n in offsets.items():
        if n == 0:
            continue
        # z_old = z_new + n f, so f_w = a f + b z_old = (a + b n) f + b z_new
        change = GluingMatrix(1, 0, n, 1)
        new_wv = m.glue(w, v) @ change
        if (w, v) in edges:
            edges[(w, v)] = new_wv
        else:
            edges[(v, w)] = new_wv.inverse()
    return m.with_edges(edges)


# ---------------------------------------------------------------------------
# random manifolds


def random_gluing(rng: random.Random, max_entry: int = 6, b_choices=(1, -1, 2, -2, 3)) -> GluingMatrix:
    """A random determinant -1 integer matrix with nonzero ``b``."""
    while True:
        b = rng.choice(b_choices)
        a = rng.randint(-max_entry, max_entry)
        g, x, y = _ext_gcd(a, b)
        if g != 1:
            continue
        # a x + b y = 1  =>  a(-x) - b(y) = -1
        d, c = -x, y
        k = rng.randint(-2, 2)
        d, c = d + k * b, c + k * a
        m = GluingMatrix(a, b, c, d)
        assert m.det == -1
        return m


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def random_graph(rng: random.Random, n: int, extra_edge_prob: float = 0.3) -> list[Edge]:
    """A random connected simple graph on ``b0..b{n-1}`` (random tree plus extras)."""
    ids = [f"b{i}" for i in range(n)]
    edges = set()
    for i in range(1, n):
        j = rng.randrange(i)
        edges.add((ids[j], ids[i]))
    for i in range(n):
        for j in range(i + 1, n):
            if (ids[i], ids[j]) not in edges and rng.random() < extra_edge_prob:
                edges.add((ids[i], ids[j]))
    return sorted(edges)


def random_manifold(
    rng: random.Random,
    n_blocks: int,
    extra_edge_prob: float = 0.3,
    closed: bool = True,
) -> GraphManifold:
    edges = random_graph(rng, n_blocks, extra_edge_prob)
    blocks = [
        SeifertBlock(f"b{i}", rng.randint(2, 4), 0 if closed else rng.randint(0, 2))
        for i in range(n_blocks)
    ]
    glued = []
    for v, w in edges:
        if rng.random() < 0.5:
            v, w = w, v
        glued.append((v, w, random_gluing(rng)))
    return GraphManifold.build(blocks, glued)


def random_sdd_manifold(rng: random.Random, n_blocks: int, extra_edge_prob: float = 0.3) -> GraphManifold:
    """A random closed manifold in which every block is strictly diagonally dominant.

    Every slope is given the same sign and magnitude above the block degree,
    which makes each block dominant regardless of the intersection indices.
    """
    edges = random_graph(rng, n_blocks, extra_edge_prob)
    deg: dict[str, int] = {}
    for v, w in edges:
        deg[v] = deg.get(v, 0) + 1
        deg[w] = deg.get(w, 0) + 1
    glued = []
    for v, w in edges:
        bound = max(deg[v], deg[w]) + 1
        while True:
            b = rng.choice((1, -1, 2, -2, 3, -3))
            # head slope a/b and tail slope -d/b both positive and > bound
            a = _sign(b) * rng.randint(bound * abs(b) + 1, bound * abs(b) + 6)
            if _ext_gcd(a, b)[0] != 1:
                continue
            # need a d - b c = -1 with -d/b > bound
            g, x, y = _ext_gcd(a, b)
            d, c = -x, y
            # shift d by multiples of b until -d/b > bound
            while Fraction(-d, b) <= bound:
                d, c = d - b, c - a
            m = GluingMatrix(a, b, c, d)
            assert m.det == -1
            break
        glued.append((v, w, m))
    blocks = [SeifertBlock(f"b{i}", rng.randint(2, 3), 0) for i in range(n_blocks)]
    return GraphManifold.build(blocks, glued)


def _sign(x: int) -> int:
    return 1 if x > 0 else -1
