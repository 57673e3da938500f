"""Schottky generators on RP^1 with interval certificates of freeness."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .motion import ProjClass, circle_action


class PingPongError(ValueError):
    pass


@dataclass(frozen=True)
class Interval:
    """Closed arc ``[center - half_width, center + half_width]`` of R/Z."""

    center: float
    half_width: float

    @property
    def left(self) -> float:
        return (self.center - self.half_width) % 1.0

    @property
    def right(self) -> float:
        return (self.center + self.half_width) % 1.0

    def offset(self, x: float) -> float:
        """Position of ``x`` measured counterclockwise from the left end."""
        return (x - self.left) % 1.0


def arc_gap(p: Interval, q: Interval) -> float:
    """Circular distance between two arcs (negative when they overlap)."""
    d = abs(p.center - q.center) % 1.0
    d = min(d, 1.0 - d)
    return d - p.half_width - q.half_width


def inclusion_margin(g: ProjClass, repelling: Interval, attracting: Interval) -> float:
    """How far inside ``attracting`` the image of the complement of ``repelling`` sits.

    The complement runs counterclockwise from the right end of ``repelling``
    to its left end; ``g`` preserves orientation, so the image arc runs from
    ``g(right)`` to ``g(left)``.  Negative when the inclusion fails.
    """
    o1 = attracting.offset(circle_action(g, repelling.right))
    o2 = attracting.offset(circle_action(g, repelling.left))
    width = 2 * attracting.half_width
    if not o1 <= o2:
        return -1.0
    return min(o1, width - o2)


@dataclass(frozen=True)
class PingPongCertificate:
    generators: tuple[str, ...]
    matrices: tuple[ProjClass, ...]
    attracting: tuple[Interval, ...]
    repelling: tuple[Interval, ...]
    margins: tuple[float, ...]
    separation: float

    @property
    def margin(self) -> float:
        return min(self.margins + (self.separation,)) if self.margins else self.separation


def certify_pingpong(names, matrices, attracting, repelling) -> PingPongCertificate:
    """Measure the ping-pong configuration; the certificate holds when ``margin > 0``."""
    arcs = list(attracting) + list(repelling)
    sep = math.inf
    for i in range(len(arcs)):
        for j in range(i + 1, len(arcs)):
            sep = min(sep, arc_gap(arcs[i], arcs[j]))
    margins = []
    for g, att, rep in zip(matrices, attracting, repelling):
        forward = inclusion_margin(g, rep, att)
        backward = inclusion_margin(g.inverse(), att, rep)
        margins.append(min(forward, backward))
    return PingPongCertificate(
        tuple(names), tuple(matrices), tuple(attracting), tuple(repelling), tuple(margins), sep
    )


def _tan_coord(x: float, m: float) -> float:
    return math.tan(math.pi * (x - m))


def common_perpendicular(rep: Interval, att: Interval) -> tuple[float, float]:
    """Endpoints (in ``att``, in ``rep``) of the geodesic perpendicular to both arc geodesics.

    They are the fixed points of the involution swapping the endpoints of each
    arc, i.e. the roots of the quadratic harmonic to both endpoint pairs.
    Coordinates are taken relative to the midpoint of the two arcs so that the
    chart ``tan(pi (x - m))`` has its pole in the gap away from both.
    """
    span = (att.right - rep.left) % 1.0
    m = rep.left + span / 2
    polars = []
    for e1, e2 in ((rep.left, rep.right), (att.left, att.right)):
        s1, s2 = _tan_coord(e1, m), _tan_coord(e2, m)
        polars.append(np.array([s1 * s2, s1 + s2, 1.0]))  # (C, -2B, A) for z^2 - (s1+s2) z + s1 s2
    qa, qb2, qc = np.cross(polars[0], polars[1])  # coefficients of A z^2 + 2B z + C, with -2B = qb2
    a, b, c = qa, -qb2 / 2, qc
    disc = math.sqrt(b * b - a * c)
    roots = [(-b + disc) / a, (-b - disc) / a]
    pts = [(m + math.atan(r) / math.pi) % 1.0 for r in roots]
    if att.offset(pts[0]) <= 2 * att.half_width:
        return pts[0], pts[1]
    return pts[1], pts[0]


def geodesic_distance(rep: Interval, att: Interval) -> float:
    """Hyperbolic distance between the geodesics spanning two disjoint arcs."""
    span = (att.right - rep.left) % 1.0
    m = rep.left + span / 2
    s1, s2, s3, s4 = (_tan_coord(x, m) for x in (rep.left, rep.right, att.left, att.right))
    cr = (s3 - s1) * (s4 - s2) / ((s3 - s2) * (s4 - s1))
    return 2 * math.atanh(1 / math.sqrt(cr))


def line_vector(x: float, max_denominator: int = 1000):
    """A rational vector spanning (approximately) the line at ``x``."""
    c, s = math.cos(math.pi * x), math.sin(math.pi * x)
    if abs(c) >= abs(s):
        return Fraction(1), Fraction(s / c).limit_denominator(max_denominator)
    return Fraction(c / s).limit_denominator(max_denominator), Fraction(1)


def hyperbolic_between(p_att: float, p_rep: float, lam) -> ProjClass:
    """Exact hyperbolic class attracting near ``p_att``, repelling near ``p_rep``, eigenvalue ``lam``."""
    u, v = line_vector(p_att), line_vector(p_rep)
    det = u[0] * v[1] - v[0] * u[1]
    lam = Fraction(lam)
    # M diag(lam, 1/lam) M^-1 with M = [u v]
    p, q, r, s = u[0] * lam, v[0] / lam, u[1] * lam, v[1] / lam
    inv = (v[1] / det, -v[0] / det, -u[1] / det, u[0] / det)
    return ProjClass.from_matrix(
        [
            [p * inv[0] + q * inv[2], p * inv[1] + q * inv[3]],
            [r * inv[0] + s * inv[2], r * inv[1] + s * inv[3]],
        ]
    )


def schottky_layout(n: int, fill: float = 0.9):
    """``2n`` arcs around the circle: generator ``k`` repels from slot ``2k`` and attracts into ``2k+1``."""
    if n < 1:
        raise PingPongError("need at least one generator")
    slot = 1.0 / (2 * n)
    h = fill * slot / 2
    rep = [Interval((2 * k + 0.5) * slot, h) for k in range(n)]
    att = [Interval((2 * k + 1.5) * slot, h) for k in range(n)]
    return att, rep


def default_spread(attracting, repelling) -> int:
    d = max(geodesic_distance(r, a) for a, r in zip(attracting, repelling))
    return math.ceil(2 * math.exp(d / 2))


def schottky_generators(n: int, spread=None, fill: float = 0.9):
    """``n`` exact hyperbolic classes in ping-pong position.

    Each generator translates by ``2 log(spread)`` along the common
    perpendicular of its two arcs.  The configuration works when that exceeds
    the distance between the arc geodesics; the default spread is twice the
    smallest eigenvalue that does.  Returns
    ``(matrices, attracting, repelling, spread)``.
    """
    attracting, repelling = schottky_layout(n, fill)
    if spread is None:
        spread = default_spread(attracting, repelling)
    lam = Fraction(spread).limit_denominator(1000)
    if lam <= 1:
        raise PingPongError("spread must exceed 1")
    matrices = []
    for att, rep in zip(attracting, repelling):
        p_att, p_rep = common_perpendicular(rep, att)
        matrices.append(hyperbolic_between(p_att, p_rep, lam))
    return matrices, attracting, repelling, lam


def reduced_word_min_distance(matrices, max_length: int = 6) -> float:
    """Smallest distance from the identity class over nonempty reduced words."""
    letters = []
    for g in matrices:
        letters.append(g.as_array())
        letters.append(g.inverse().as_array())
    k = len(letters)
    if k == 0:
        return math.inf
    letters = np.stack(letters)
    inverse_of = np.array([i ^ 1 for i in range(k)])
    eye = np.eye(2)

    def dist(ws):
        d1 = np.abs(ws - eye).max(axis=(1, 2))
        d2 = np.abs(ws + eye).max(axis=(1, 2))
        return float(np.minimum(d1, d2).min())

    words, last = letters.copy(), np.arange(k)
    best = dist(words)
    for _ in range(max_length - 1):
        new_words, new_last = [], []
        for j in range(k):
            keep = last != inverse_of[j]
            new_words.append(words[keep] @ letters[j])
            new_last.append(np.full(int(keep.sum()), j))
        words, last = np.concatenate(new_words), np.concatenate(new_last)
        best = min(best, dist(words))
    return best
