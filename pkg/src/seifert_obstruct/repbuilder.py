"""Vertex-faithful representations of tree-shaped graph manifolds.

A block of genus ``g`` with ``l`` boundary tori has generators
``a1, b1, ..., ag, bg`` (surface), ``c1, ..., cl`` (boundary curves) and ``f``
(fiber) with ``[a1,b1]...[ag,bg] = c1...cl`` and ``f`` central.  Boundaries are
numbered glued-first (sorted by neighbor id), then free.  The boundary facing a
neighbor ``w`` is the section curve ``z`` of that torus, so the gluing matrix
``G_{v,w} = [[a, b], [c, d]]`` gives ``rho(f_v) = rho(f_w)^a rho(z_w)^b`` and
``rho(z_v) = rho(f_w)^c rho(z_w)^d``.

The root block gets a faithful image built from a Schottky configuration;
every other block is filled in Abelianly, parent before child.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .manifold import GluingMatrix, GraphManifold, SeifertBlock, validate
from .motion import (
    DEFAULT_TOL,
    MOT_IDENTITY,
    ElementClass,
    MotionElement,
    ProjClass,
    Tolerances,
    central,
    classify,
    commutator,
    commutes,
    mot_inv,
    mot_mul,
    mot_pow,
    mot_product,
)
from .pingpong import (
    Interval,
    PingPongCertificate,
    PingPongError,
    certify_pingpong,
    default_spread,
    reduced_word_min_distance,
    schottky_layout,
    schottky_generators,
)


@dataclass(frozen=True)
class Boundary:
    label: str
    neighbor: str | None  # None for a free boundary


def block_boundaries(m: GraphManifold | None, block: SeifertBlock) -> list[Boundary]:
    glued = m.neighbors(block.id) if m is not None else []
    out = [Boundary(f"c{i + 1}", w) for i, w in enumerate(glued)]
    for j in range(block.free_boundaries):
        out.append(Boundary(f"c{len(glued) + j + 1}", None))
    return out


def surface_names(genus: int) -> list[str]:
    names = []
    for i in range(1, genus + 1):
        names += [f"a{i}", f"b{i}"]
    return names


@dataclass
class BlockRep:
    block: SeifertBlock
    boundaries: list[Boundary]
    images: dict[str, MotionElement]

    def boundary_to(self, w: str) -> str:
        for bd in self.boundaries:
            if bd.neighbor == w:
                return bd.label
        raise KeyError(f"block {self.block.id} has no boundary facing {w}")

    def torus(self, w: str) -> tuple[MotionElement, MotionElement]:
        """Images of ``(f, z)`` on the torus facing ``w``."""
        return self.images["f"], self.images[self.boundary_to(w)]

    def relation_defect(self) -> MotionElement:
        g = self.block.genus
        comms = [commutator(self.images[f"a{i}"], self.images[f"b{i}"]) for i in range(1, g + 1)]
        bds = mot_product(self.images[bd.label] for bd in self.boundaries)
        return mot_mul(mot_product(comms), mot_inv(bds))


@dataclass
class Representation:
    root: str
    blocks: dict[str, BlockRep]
    pingpong: PingPongCertificate
    params: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# seed


def seed_faithful_rep(block: SeifertBlock, fiber_central=1, spread=None, boundaries=None, fill=0.9):
    """Faithful image of one block: Schottky surface generators and a central fiber.

    The free generators are ``a_i, b_i`` and ``c_1 .. c_{l-1}``; ``c_l`` is
    solved from the relation.  Returns ``(BlockRep, PingPongCertificate)``.
    """
    if fiber_central == 0:
        raise ValueError("fiber image must be a nontrivial central element")
    if boundaries is None:
        boundaries = block_boundaries(None, block)
    if not boundaries:
        raise ValueError(f"block {block.id} has no boundary; its surface group is not free")
    names = surface_names(block.genus) + [bd.label for bd in boundaries[:-1]]
    matrices, att, rep, lam = schottky_generators(len(names), spread, fill)
    cert = certify_pingpong(names, matrices, att, rep)
    if not cert.margin > 0:
        raise PingPongError(
            f"ping-pong fails for spread {lam} (margin {cert.margin:.3g}); increase the spread"
        )
    images = {n: MotionElement(p, 0) for n, p in zip(names, matrices)}
    images["f"] = central(fiber_central)
    comms = [commutator(images[f"a{i}"], images[f"b{i}"]) for i in range(1, block.genus + 1)]
    before = mot_product(images[bd.label] for bd in boundaries[:-1])
    images[boundaries[-1].label] = mot_mul(mot_inv(before), mot_product(comms))
    return BlockRep(block, list(boundaries), images), cert


# ---------------------------------------------------------------------------
# Abelian extension


def glue_images(glue: GluingMatrix, f_par: MotionElement, z_par: MotionElement):
    """Child ``(f, z)`` from the parent's torus images under ``G_{child,parent}``."""
    f = mot_mul(mot_pow(f_par, glue.a), mot_pow(z_par, glue.b))
    z = mot_mul(mot_pow(f_par, glue.c), mot_pow(z_par, glue.d))
    return f, z


def extend_abelian(parent_torus, glue: GluingMatrix, child: SeifertBlock, boundaries, parent_id,
                   free_choices=None, tol: Tolerances = DEFAULT_TOL) -> BlockRep:
    """Abelian image of ``child`` agreeing with its parent on the shared torus.

    ``free_choices`` maps generator names to elements, or is a list assigned in
    order to the unconstrained generators (surface generators, then the
    boundaries other than the parent torus and the closing one).  Defaults:
    identity on the surface, the parent-torus section image on the others.
    """
    f, z = glue_images(glue, *parent_torus)
    parent_label = next(bd.label for bd in boundaries if bd.neighbor == parent_id)
    open_labels = [bd.label for bd in boundaries if bd.label != parent_label]
    if not open_labels:
        raise ValueError(f"block {child.id}: no boundary left to absorb the closing constraint")
    closing = open_labels[-1]
    choosable = surface_names(child.genus) + open_labels[:-1]
    if free_choices is None:
        free_choices = {}
    elif not isinstance(free_choices, dict):
        free_choices = dict(zip(choosable, free_choices))
    unknown = set(free_choices) - set(choosable)
    if unknown:
        raise ValueError(f"block {child.id}: cannot choose {sorted(unknown)}")

    images = {"f": f, parent_label: z}
    chosen = []
    for name in choosable:
        if name in free_choices:
            x = free_choices[name]
            for other_name, other in [("f", f), (parent_label, z)] + chosen:
                if not commutes(x, other, tol):
                    raise ValueError(f"block {child.id}: choice for {name} does not commute with {other_name}")
            chosen.append((name, x))
            images[name] = x
        elif name.startswith(("a", "b")):
            images[name] = MOT_IDENTITY
        else:
            images[name] = z

    comms = [commutator(images[f"a{i}"], images[f"b{i}"]) for i in range(1, child.genus + 1)]
    labels = [bd.label for bd in boundaries]
    k = labels.index(closing)
    before = mot_product(images[lb] for lb in labels[:k])
    after = mot_product(images[lb] for lb in labels[k + 1:])
    images[closing] = mot_product([mot_inv(before), mot_product(comms), mot_inv(after)])
    return BlockRep(child, list(boundaries), images)


def _is_tree(m: GraphManifold) -> bool:
    return len(m.undirected_edges()) == len(m.blocks) - 1 and validate(m).ok


def extend_along_tree(m: GraphManifold, root: str, fiber_central=1, spread=None, fill=0.9,
                      free_choices=None, tol: Tolerances = DEFAULT_TOL) -> Representation:
    """Faithful at ``root``, Abelian elsewhere, compatible on every edge.

    ``free_choices`` optionally maps block ids to per-block choices for
    :func:`extend_abelian`.
    """
    if root not in m.blocks:
        raise ValueError(f"unknown root block {root!r}")
    if not _is_tree(m):
        raise ValueError("dual graph must be a tree")
    for v in m.block_ids():
        if m.degree(v) == 1 and m.blocks[v].free_boundaries < 1:
            raise ValueError(f"leaf block {v} has no free boundary")
    free_choices = free_choices or {}
    if spread is None:
        n_free = 2 * m.blocks[root].genus + m.degree(root) + m.blocks[root].free_boundaries - 1
        spread = default_spread(*schottky_layout(max(n_free, 1), fill))
    root_rep, cert = seed_faithful_rep(
        m.blocks[root], fiber_central, spread, block_boundaries(m, m.blocks[root]), fill
    )
    reps = {root: root_rep}
    queue = deque([root])
    while queue:
        p = queue.popleft()
        for c in m.neighbors(p):
            if c in reps:
                continue
            reps[c] = extend_abelian(
                reps[p].torus(c), m.glue(c, p), m.blocks[c], block_boundaries(m, m.blocks[c]), p,
                free_choices.get(c), tol,
            )
            queue.append(c)
    params = {"fiber_central": fiber_central, "spread": spread, "fill": fill}
    return Representation(root, reps, cert, params)


# ---------------------------------------------------------------------------
# verification


CHECKS = ("relation", "fiber-central", "edge-compatibility", "abelian", "root-faithful")


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst: float
    failures: list[str]


@dataclass
class VerificationReport:
    results: list[CheckResult]

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def __getitem__(self, name: str) -> CheckResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)


def _root_generators(r: BlockRep) -> list[str]:
    return surface_names(r.block.genus) + [bd.label for bd in r.boundaries[:-1]]


def verify_rep(m: GraphManifold, rep: Representation, eps: float = 1e-9) -> VerificationReport:
    tol = Tolerances(comm=eps, identity=eps)
    results = []

    worst, bad = 0.0, []
    for v in sorted(rep.blocks):
        d = rep.blocks[v].relation_defect().distance(MOT_IDENTITY)
        worst = max(worst, d)
        if not d <= eps:
            bad.append(f"{v}: relation off by {d:.3g}")
    results.append(CheckResult("relation", not bad, worst, bad))

    bad = []
    for v in sorted(rep.blocks):
        br = rep.blocks[v]
        for name in sorted(br.images):
            if name != "f" and not commutes(br.images["f"], br.images[name], tol):
                bad.append(f"{v}: fiber does not commute with {name}")
    results.append(CheckResult("fiber-central", not bad, 0.0, bad))

    worst, bad = 0.0, []
    for v, w in m.undirected_edges():
        for x, y in ((v, w), (w, v)):
            if x not in rep.blocks or y not in rep.blocks:
                bad.append(f"edge {x} {y}: block missing from representation")
                continue
            want_f, want_z = glue_images(m.glue(x, y), *rep.blocks[y].torus(x))
            have_f, have_z = rep.blocks[x].torus(y)
            d = max(have_f.distance(want_f), have_z.distance(want_z))
            worst = max(worst, d)
            if not d <= eps:
                bad.append(f"edge {x} {y}: torus images off by {d:.3g}")
    results.append(CheckResult("edge-compatibility", not bad, worst, bad))

    bad = []
    for v in sorted(rep.blocks):
        if v == rep.root:
            continue
        items = sorted(rep.blocks[v].images.items())
        for i, (n1, x) in enumerate(items):
            for n2, y in items[i + 1:]:
                if not commutes(x, y, tol):
                    bad.append(f"{v}: {n1} and {n2} do not commute")
    results.append(CheckResult("abelian", not bad, 0.0, bad))

    bad = []
    root = rep.blocks.get(rep.root)
    margin = float("-inf")
    if root is None:
        bad.append("root block missing")
    else:
        fib = root.images["f"]
        if classify(fib, tol) is not ElementClass.CENTRAL:
            bad.append("root fiber image is not central")
        elif fib.central == 0:
            bad.append("root fiber image is trivial")
        names = _root_generators(root)
        pp = rep.pingpong
        if list(pp.generators) != names:
            bad.append("ping-pong generators do not match the root block")
        else:
            fresh = certify_pingpong(names, [root.images[n].proj for n in names], pp.attracting, pp.repelling)
            margin = fresh.margin
            if not margin > 0:
                bad.append(f"ping-pong margin {margin:.3g} is not positive")
    results.append(CheckResult("root-faithful", not bad, margin, bad))
    return VerificationReport(results)


def seed_word_distance(rep: Representation, max_length: int = 6) -> float:
    root = rep.blocks[rep.root]
    return reduced_word_min_distance([root.images[n].proj for n in _root_generators(root)], max_length)


# ---------------------------------------------------------------------------
# serialization


def _element_to_json(x: MotionElement):
    from .io import real_to_json

    return {"proj": [real_to_json(e) for e in x.proj.entries()], "central": real_to_json(x.central)}


def _element_from_json(d) -> MotionElement:
    from .io import real_from_json

    a, b, c, e = (real_from_json(t) for t in d["proj"])
    t = real_from_json(d["central"])
    proj = ProjClass(a, b, c, e)
    if proj == ProjClass.identity():
        return central(t)
    return MotionElement(proj, t)


def representation_to_json(rep: Representation, manifold_text: str | None = None) -> dict:
    from . import __version__
    from .io import real_to_json

    pp = rep.pingpong
    params = {k: (real_to_json(v) if isinstance(v, (int, float, Fraction)) else v) for k, v in rep.params.items()}
    data = {
        "schema": 1,
        "kind": "representation",
        "tool_version": __version__,
        "root": rep.root,
        "params": params,
        "blocks": [
            {
                "id": v,
                "genus": br.block.genus,
                "free": br.block.free_boundaries,
                "boundaries": [{"label": bd.label, "neighbor": bd.neighbor} for bd in br.boundaries],
                "images": {n: _element_to_json(x) for n, x in sorted(br.images.items())},
            }
            for v, br in sorted(rep.blocks.items())
        ],
        "pingpong": {
            "generators": list(pp.generators),
            "attracting": [[real_to_json(i.center), real_to_json(i.half_width)] for i in pp.attracting],
            "repelling": [[real_to_json(i.center), real_to_json(i.half_width)] for i in pp.repelling],
            "margins": [real_to_json(x) for x in pp.margins],
            "separation": real_to_json(pp.separation),
        },
    }
    if manifold_text is not None:
        data["manifold"] = {"text": manifold_text}
    return data


def representation_from_json(data: dict) -> Representation:
    from .io import real_from_json

    blocks = {}
    for b in data["blocks"]:
        block = SeifertBlock(b["id"], b["genus"], b["free"])
        bds = [Boundary(x["label"], x["neighbor"]) for x in b["boundaries"]]
        images = {n: _element_from_json(x) for n, x in b["images"].items()}
        blocks[b["id"]] = BlockRep(block, bds, images)
    pp = data["pingpong"]
    root = blocks[data["root"]]
    names = list(pp["generators"])

    def arcs(key):
        return tuple(Interval(real_from_json(c), real_from_json(h)) for c, h in pp[key])

    cert = PingPongCertificate(
        tuple(names),
        tuple(root.images[n].proj for n in names if n in root.images),
        arcs("attracting"),
        arcs("repelling"),
        tuple(real_from_json(x) for x in pp["margins"]),
        real_from_json(pp["separation"]),
    )
    params = {k: (real_from_json(v) if isinstance(v, dict) else v) for k, v in data["params"].items()}
    return Representation(data["root"], blocks, cert, params)
