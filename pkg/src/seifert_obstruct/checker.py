"""Replay of obstruction certificates.

This module recomputes every claim of a certificate from the manifold text
alone and shares no code with :mod:`seifert_obstruct.obstruction`: charges are
read straight off the stored matrices, covers are rebuilt by hand, candidates
are enumerated by brute force over bitmasks, and determinants come from
rational Gaussian elimination rather than Bareiss.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction

from .io import parse_manifold


@dataclass
class CheckReport:
    errors: list[str] = field(default_factory=list)
    checked_candidates: int = 0

    @property
    def ok(self) -> bool:
        return not self.errors


class _Graph:
    """Blocks, and for each ordered pair (x, y) the matrix of the directed edge x -> y."""

    def __init__(self, ids, directed):
        self.ids = sorted(ids)
        self.directed = directed
        self.adj = {v: sorted(w for (x, w) in directed if x == v) for v in self.ids}

    @classmethod
    def from_text(cls, text):
        m = parse_manifold(text)
        directed = {}
        for (x, y), g in m.edges.items():
            a, b, c, d = g.a, g.b, g.c, g.d
            directed[(x, y)] = (a, b, c, d)
            directed[(y, x)] = (-d, b, c, -a)
        return cls(m.blocks, directed), m

    def b(self, v, w):
        return self.directed[(w, v)][1]

    def charge(self, v):
        return sum((Fraction(self.directed[(w, v)][0], self.directed[(w, v)][1]) for w in self.adj[v]), Fraction(0))

    def cover(self, cut):
        cutset = {frozenset(e) for e in cut}
        ids = [f"{v}~{s}" for v in self.ids for s in (0, 1)]
        directed = {}
        for (x, y), g in self.directed.items():
            flip = 1 if frozenset((x, y)) in cutset else 0
            for s in (0, 1):
                directed[(f"{x}~{s}", f"{y}~{s ^ flip}")] = g
        return _Graph(ids, directed)

    def connected(self, vertices, skip=frozenset()):
        vs = set(vertices)
        if not vs:
            return False
        start = min(vs)
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in self.adj[x]:
                if y in vs and y not in seen and frozenset((x, y)) not in skip:
                    seen.add(y)
                    stack.append(y)
        return seen == vs


def _fraction_det(m):
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k] != 0), None)
        if p is None:
            return 0
        if p != k:
            a[k], a[p] = a[p], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    assert det.denominator == 1
    return int(det)


def _mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def _frac(s):
    return Fraction(s)


def _expected_candidates(g: _Graph, v, opts, n_blocks):
    """Brute-force (component, cut) pairs, or None when enumeration is not exhaustive."""
    if opts.get("components") is not None:
        comps = [frozenset(c) for c in opts["components"]]
        comps = [c for c in comps if v not in c and c & set(g.adj[v])]
    elif n_blocks > opts["max_vertices"]:
        return []
    else:
        others = [x for x in g.ids if x != v]
        comps = []
        for mask in range(1, 1 << len(others)):
            c = frozenset(others[i] for i in range(len(others)) if mask >> i & 1)
            if c & set(g.adj[v]) and g.connected(c):
                comps.append(c)
    pairs = set()
    for c in comps:
        internal = sorted(
            {tuple(sorted((x, y))) for x in c for y in g.adj[x] if y in c}
        )
        if len(internal) > opts["max_cut_edges"]:
            pairs.add((tuple(sorted(c)), ()))
            continue
        for mask in range(1 << len(internal)):
            cut = tuple(internal[i] for i in range(len(internal)) if mask >> i & 1)
            if g.connected(c, frozenset(frozenset(e) for e in cut)):
                pairs.add((tuple(sorted(c)), cut))
    return pairs


def check_certificate(cert: dict, manifold_text: str | None = None) -> CheckReport:
    report = CheckReport()
    err = report.errors
    try:
        text = cert["manifold"]["text"]
        if manifold_text is not None:
            ext = parse_manifold(manifold_text)
            if parse_manifold(text) != ext:
                err.append("certificate manifold differs from the supplied manifold file")
                return report
        if hashlib.sha256(text.encode()).hexdigest() != cert["manifold"]["sha256"]:
            err.append("manifold hash mismatch")
        g, m = _Graph.from_text(text)
        _check_body(cert, g, m, report)
    except (KeyError, TypeError, ValueError, IndexError, AssertionError, ZeroDivisionError) as exc:
        err.append(f"malformed certificate: {exc!r}")
    return report


def _check_body(cert, g: _Graph, m, report: CheckReport):
    err = report.errors
    if cert.get("kind") != "no-vertex-faithful-representation":
        err.append(f"unexpected certificate kind {cert.get('kind')!r}")
    if any(b.free_boundaries for b in m.blocks.values()):
        err.append("manifold is not closed")
    # block invariants
    blocks = {b["id"]: b for b in cert["blocks"]}
    if sorted(blocks) != g.ids:
        err.append("block list mismatch")
    all_sdd = True
    for v in g.ids:
        rec = blocks.get(v)
        if rec is None:
            continue
        k = g.charge(v)
        r = sum((Fraction(1, abs(g.b(v, w))) for w in g.adj[v]), Fraction(0))
        bv = 1
        for w in g.adj[v]:
            bv *= g.b(v, w)
        if _frac(rec["charge"]) != k:
            err.append(f"block {v}: charge {rec['charge']} != {k}")
        if rec["fiber_product"] != bv:
            err.append(f"block {v}: fiber product mismatch")
        if [(n["id"], n["b"]) for n in rec["neighbors"]] != [(w, g.b(v, w)) for w in g.adj[v]]:
            err.append(f"block {v}: neighbor/intersection index mismatch")
        sdd = rec["sdd"]
        if _frac(sdd["abs_charge"]) != abs(k) or _frac(sdd["reciprocal_sum"]) != r or sdd["holds"] != (abs(k) > r):
            err.append(f"block {v}: dominance record mismatch")
        all_sdd = all_sdd and abs(k) > r
    if not all_sdd:
        err.append("manifold is not strictly diagonally dominant")

    opts = cert["options"]
    gaps_expected = bool(cert["gaps"])
    vrecs = {r["vertex"]: r for r in cert["vertices"]}
    if sorted(vrecs) != g.ids:
        err.append("vertex list mismatch")
    all_contra = True
    for v in g.ids:
        vr = vrecs.get(v)
        if vr is None:
            continue
        if vr["neighbors"] != g.adj[v]:
            err.append(f"vertex {v}: neighbor list mismatch")
        expected = _expected_candidates(g, v, opts, len(g.ids))
        got = set()
        for c in vr["candidates"]:
            cut = tuple(tuple(e) for e in c["cover"]["cut"]) if c["cover"] else ()
            got.add((tuple(c["component"]), tuple(sorted(tuple(sorted(e)) for e in cut))))
            ok = _check_candidate(g, v, c, cut, err)
            report.checked_candidates += 1
            if not ok:
                all_contra = False
        if not gaps_expected and got != expected:
            missing = len(expected - got)
            extra = len(got - expected)
            err.append(f"vertex {v}: candidate set mismatch ({missing} missing, {extra} unexpected)")
        if not vr["candidates"]:
            all_contra = False
        if vr["contradiction"] != (bool(vr["candidates"]) and all(c["contradiction"] for c in vr["candidates"])):
            err.append(f"vertex {v}: contradiction flag inconsistent")
    complete = all_contra and not cert["gaps"]
    want = "no vertex-faithful representation" if complete else "partial"
    if cert["conclusion"] != want:
        err.append(f"conclusion {cert['conclusion']!r} not supported (expected {want!r})")
    if cert["exhaustive"] != (not cert["gaps"]):
        err.append("exhaustive flag inconsistent with gap list")


def _check_candidate(g: _Graph, v, c, cut, err) -> bool:
    tag = f"vertex {v}, component {c['component']}, cut {list(cut)}"
    comp = set(c["component"])
    if v in comp:
        err.append(f"{tag}: component contains the faithful vertex")
    if cut:
        space = g.cover(cut)
        members = sorted(f"{u}~{s}" for u in comp for s in (0, 1))
        anchor = f"{v}~0"
        if c["cover"]["anchor"] != anchor or c["cover"]["blocks"] != len(space.ids):
            err.append(f"{tag}: cover record mismatch")
        if not space.connected(set(space.ids)):
            err.append(f"{tag}: cover is disconnected")
    else:
        space = g
        members = sorted(comp)
        anchor = v
    if c["members"] != members:
        err.append(f"{tag}: member list mismatch")
        return False
    idx = {u: i for i, u in enumerate(members)}
    n = len(members)
    mat = [[0] * n for _ in range(n)]
    rhs = []
    for i, u in enumerate(members):
        bu = 1
        for w in space.adj[u]:
            bu *= space.b(u, w)
        d = bu * space.charge(u)
        if d.denominator != 1:
            err.append(f"{tag}: non-integral diagonal")
            return False
        mat[i][i] = int(d)
        row = []
        for w in space.adj[u]:
            q, rem = divmod(bu, space.b(u, w))
            if rem:
                err.append(f"{tag}: inexact division")
                return False
            if w in idx:
                mat[i][idx[w]] = -q
            else:
                row.append({"symbol": w, "coeff": q})
        rhs.append(row)
    ok = True
    if c["matrix"] != mat:
        err.append(f"{tag}: matrix mismatch")
        ok = False
    if c["rhs"] != rhs:
        err.append(f"{tag}: right-hand side mismatch")
        ok = False
    rows = []
    for i in range(n):
        off = sum(abs(mat[i][j]) for j in range(n) if j != i)
        rm = sum(abs(t["coeff"]) for t in rhs[i])
        rows.append({"diag_abs": abs(mat[i][i]), "off_mass": off, "rhs_mass": rm, "strict": abs(mat[i][i]) > off + rm})
    if c["rows"] != rows:
        err.append(f"{tag}: row dominance mismatch")
        ok = False
    det = _fraction_det(mat)
    if c["determinant"] != det:
        err.append(f"{tag}: determinant {c['determinant']} != {det}")
        ok = False
    adj = c["adjugate"]
    eye = [[det if i == j else 0 for j in range(n)] for i in range(n)]
    if _mul(adj, mat) != eye or _mul(mat, adj) != eye:
        err.append(f"{tag}: adjugate identity fails")
        ok = False
    # det * f_i = sum_j adj_ij rhs_j
    for i, s in enumerate(c["solutions"]):
        want: dict = {}
        for j in range(n):
            for t in rhs[j]:
                want[t["symbol"]] = want.get(t["symbol"], 0) + adj[i][j] * t["coeff"]
        want = {k: x for k, x in want.items() if x}
        have = {t["symbol"]: t["coeff"] for t in s["terms"]}
        if s["member"] != members[i] or s["det"] != det or have != want:
            err.append(f"{tag}: formal solution for {members[i]} mismatch")
            ok = False
    witnesses = [u for u in space.adj[anchor] if u in idx]
    if c["witnesses"] != witnesses:
        err.append(f"{tag}: witness list mismatch")
        ok = False
    holds = all(r["strict"] for r in rows) and det != 0 and bool(witnesses)
    if c["contradiction"] != holds:
        err.append(f"{tag}: contradiction flag not supported")
        ok = False
    return ok and holds
