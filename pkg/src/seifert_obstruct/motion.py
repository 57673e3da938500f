"""The Seifert motion group as a central extension of PSL(2,R) by the reals.

An element is a pair ``(A, t)`` with ``A`` a class in PSL(2,R) and ``t`` a real
central coordinate.  Multiplication is ``(A,t)(B,u) = (AB, t + u + c(A,B))``
where ``c`` is the integer cocycle of the universal cover of PSL(2,R) read off
from lifts of the circle action on RP^1.  The lift of ``A`` is normalized so
that it sends 0 into [0, 1); the centre generator (one full half-turn lift)
is ``(identity, 1)``.

Points of RP^1 are parametrized by ``x = theta / pi mod 1`` where ``theta`` is
the direction angle of a line through the origin.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational, Real

import numpy as np


@dataclass(frozen=True)
class Tolerances:
    det: float = 1e-12
    trace: float = 1e-9
    comm: float = 1e-9
    rot: float = 1e-9
    angle: float = 1e-12
    identity: float = 1e-9


DEFAULT_TOL = Tolerances()


# ---------------------------------------------------------------------------
# PSL(2,R)


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def _rational_sqrt(q: Fraction) -> Fraction | None:
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


@dataclass(frozen=True)
class ProjClass:
    """A PSL(2,R) element stored as a det-1 representative ``[[a, b], [c, d]]``.

    Entries are floats, or exact rationals when every entry is an int or
    Fraction and the determinant normalizes exactly; products of exact classes
    stay exact.  Construct through :meth:`from_matrix`, which rescales to
    determinant one and makes the first (non-negligible) entry positive.
    """

    a: Real
    b: Real
    c: Real
    d: Real

    @classmethod
    def from_matrix(cls, m, tol: Tolerances = DEFAULT_TOL) -> ProjClass:
        if isinstance(m, np.ndarray):
            entries = [float(x) for x in m.reshape(4)]
        else:
            entries = [x for row in m for x in row]
        if all(_is_exact(x) for x in entries):
            a, b, c, d = (Fraction(x) for x in entries)
            det = a * d - b * c
            if det <= 0:
                raise ValueError(f"matrix has non-positive determinant {det}")
            root = Fraction(1) if det == 1 else _rational_sqrt(det)
            if root is not None:
                a, b, c, d = a / root, b / root, c / root, d / root
                for x in (a, b, c, d):
                    if x != 0:
                        if x < 0:
                            a, b, c, d = -a, -b, -c, -d
                        break
                return cls(*(int(x) if x.denominator == 1 else x for x in (a, b, c, d)))
        a, b, c, d = (float(x) for x in entries)
        det = a * d - b * c
        if not det > 0:
            raise ValueError(f"matrix has non-positive determinant {det!r}")
        if abs(det - 1.0) > tol.det:
            s = math.sqrt(det)
            a, b, c, d = a / s, b / s, c / s, d / s
        scale = max(abs(a), abs(b), abs(c), abs(d))
        for x in (a, b, c, d):
            if abs(x) > 1e-12 * scale:
                if x < 0:
                    a, b, c, d = -a, -b, -c, -d
                break
        return cls(a, b, c, d)

    @classmethod
    def identity(cls) -> ProjClass:
        return cls(1, 0, 0, 1)

    @property
    def is_exact(self) -> bool:
        return all(_is_exact(x) for x in self.entries())

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=float)

    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, other: ProjClass) -> ProjClass:
        a, b, c, d = self.entries()
        e, f, g, h = other.entries()
        prod = [[a * e + b * g, a * f + b * h], [c * e + d * g, c * f + d * h]]
        if self.is_exact and other.is_exact:
            return ProjClass.from_matrix(prod)
        # det is 1 by construction; recomputing it in floats only adds
        # cancellation error once entries are large
        return _sign_normalized([x for row in prod for x in row])

    def inverse(self) -> ProjClass:
        if self.is_exact:
            return ProjClass.from_matrix([[self.d, -self.b], [-self.c, self.a]])
        return _sign_normalized([self.d, -self.b, -self.c, self.a])

    @property
    def trace(self) -> float:
        return float(self.a + self.d)

    def distance(self, other: ProjClass) -> float:
        """Max-norm distance, minimized over the sign ambiguity."""
        pairs = list(zip(self.entries(), other.entries()))
        minus = max(abs(float(x - y)) for x, y in pairs)
        plus = max(abs(float(x + y)) for x, y in pairs)
        return min(minus, plus)

    def is_identity(self, tol: Tolerances = DEFAULT_TOL) -> bool:
        return self.distance(IDENTITY) <= tol.identity


def _sign_normalized(entries) -> ProjClass:
    entries = [float(x) for x in entries]
    scale = max(abs(x) for x in entries)
    for x in entries:
        if abs(x) > 1e-12 * scale:
            if x < 0:
                entries = [-y for y in entries]
            break
    return ProjClass(*entries)


IDENTITY = ProjClass.identity()


def rotation_matrix(r) -> ProjClass:
    """``k(r)``: rotation by angle ``pi * r``; it shifts RP^1 by ``r``."""
    t = math.pi * float(r)
    return ProjClass.from_matrix([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])


def hyperbolic_matrix(lam: float, axis: float = 0.0) -> ProjClass:
    """diag(lam, 1/lam) conjugated so the attracting fixed point sits at ``axis``."""
    h = ProjClass.from_matrix([[lam, 0.0], [0.0, 1.0 / lam]])
    if axis == 0.0:
        return h
    r = rotation_matrix(axis)
    return r @ h @ r.inverse()


def point_angle(vx: float, vy: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """Parameter in [0, 1) of the line spanned by ``(vx, vy)``."""
    x = (math.atan2(vy, vx) / math.pi) % 1.0
    if x >= 1.0 - tol.angle:
        x = 0.0
    return x


def circle_action(p: ProjClass, x: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """Action of ``p`` on RP^1 = R/Z."""
    t = math.pi * x
    cx, sx = math.cos(t), math.sin(t)
    return point_angle(p.a * cx + p.b * sx, p.c * cx + p.d * sx, tol)


def lift(p: ProjClass, x: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """The canonical lift ``F_p : R -> R`` of the circle action, ``F_p(0) in [0,1)``.

    ``F_p(x) - F_p(floor x)`` is the angle swept by the image line, which lies
    in ``[0, pi)``; its sine is exactly ``sin(pi * frac(x))`` because det = 1,
    so no branch choice is needed beyond the normalization at 0.
    """
    n = math.floor(x)
    frac = x - n
    a0 = point_angle(p.a, p.c, tol)
    if frac == 0.0:
        return n + a0
    t = math.pi * frac
    cx, sx = math.cos(t), math.sin(t)
    vx, vy = p.a * cx + p.b * sx, p.c * cx + p.d * sx
    dot = p.a * vx + p.c * vy
    cross = math.sin(t)
    return n + a0 + math.atan2(cross, dot) / math.pi


# ---------------------------------------------------------------------------
# exact tags


@dataclass(frozen=True)
class ExactRotation:
    """Projective part is exactly ``k(turn)``, ``0 < turn < 1``."""

    turn: Fraction


@dataclass(frozen=True)
class ExactCentral:
    pass


ExactTag = ExactRotation | ExactCentral


def _upper(vx, vy):
    """Representative of the line through ``(vx, vy)`` in the upper half plane."""
    if vy < 0 or (vy == 0 and vx < 0):
        return -vx, -vy
    return vx, vy


def _starts_at_zero(vx, vy, tol: Tolerances) -> bool:
    if _is_exact(vx) and _is_exact(vy):
        return vy == 0
    return point_angle(float(vx), float(vy), tol) == 0.0


def cocycle(a: ProjClass, b: ProjClass, tol: Tolerances = DEFAULT_TOL) -> int:
    """``c(a, b) = F_a(F_b(0)) - F_ab(0)``, which is 0 or 1.

    ``F_a(F_b(0)) = F_a(0) + (swept angle)`` with both terms in [0, 1), so the
    value is 1 exactly when the image under ``a`` of the arc from 0 to
    ``F_b(0)`` passes through 0, i.e. when ``0 < a^-1(0) <= F_b(0)``.  This
    reduces to orientation signs, which are exact for rational entries.
    """
    if a == IDENTITY or b == IDENTITY:
        return 0
    if _starts_at_zero(a.a, a.c, tol) or _starts_at_zero(b.a, b.c, tol):
        return 0
    qx, qy = _upper(a.d, -a.c)  # a^-1 applied to (1, 0)
    bx, by = _upper(b.a, b.c)
    cross = qx * by - qy * bx
    if a.is_exact and b.is_exact:
        return 1 if cross >= 0 else 0
    # a near tie means ab(0) is within the angle tolerance of 0, which the
    # lift normalization rounds to 0; count it as a full turn, like a tie
    slack = math.pi * tol.angle * math.hypot(qx, qy) * math.hypot(bx, by)
    return 1 if cross >= -slack else 0


# ---------------------------------------------------------------------------
# motion group


class ElementClass(enum.Enum):
    CENTRAL = "central"
    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"
    PARABOLIC = "parabolic"


@dataclass(frozen=True)
class MotionElement:
    proj: ProjClass
    central: Real = 0
    tag: ExactTag | None = field(default=None, compare=False)

    def __mul__(self, other: MotionElement) -> MotionElement:
        return mot_mul(self, other)

    def __pow__(self, n: int) -> MotionElement:
        return mot_pow(self, n)

    def inverse(self) -> MotionElement:
        return mot_inv(self)

    def distance(self, other: MotionElement) -> float:
        """Largest componentwise discrepancy (projective and central)."""
        return max(self.proj.distance(other.proj), abs(float(self.central - other.central)))


MOT_IDENTITY = MotionElement(IDENTITY, 0, ExactCentral())


def central(t) -> MotionElement:
    """The central element ``(identity, t)``; ``t`` is kept exact when rational."""
    if isinstance(t, Rational) and not isinstance(t, int):
        t = Fraction(t)
    return MotionElement(IDENTITY, t, ExactCentral())


def rotation(r) -> MotionElement:
    """The lift of ``k(r)`` through the path ``s -> k(s)``, ``0 <= s <= r``.

    For rational ``r`` the element carries an exact tag.
    """
    n = math.floor(r)
    frac = r - n
    if frac == 0:
        return central(int(n))
    tag = ExactRotation(Fraction(frac)) if isinstance(r, Rational) else None
    return MotionElement(rotation_matrix(frac), int(n), tag)


def from_lift(proj: ProjClass, winding: int, s=0) -> MotionElement:
    """Image of ``g[s]`` where ``g`` is the lift of ``proj`` with ``F_g = F_proj + winding``."""
    return MotionElement(proj, winding + s)


def mot_mul(x: MotionElement, y: MotionElement, tol: Tolerances = DEFAULT_TOL) -> MotionElement:
    if x.tag is not None and y.tag is not None:
        tx = x.tag.turn if isinstance(x.tag, ExactRotation) else Fraction(0)
        ty = y.tag.turn if isinstance(y.tag, ExactRotation) else Fraction(0)
        s = tx + ty
        carry = 1 if s >= 1 else 0
        turn = s - carry
        t = x.central + y.central + carry
        if turn == 0:
            return MotionElement(IDENTITY, t, ExactCentral())
        return MotionElement(rotation_matrix(turn), t, ExactRotation(turn))
    return MotionElement(
        x.proj @ y.proj,
        x.central + y.central + cocycle(x.proj, y.proj, tol),
    )


def mot_inv(x: MotionElement, tol: Tolerances = DEFAULT_TOL) -> MotionElement:
    if isinstance(x.tag, ExactCentral):
        return MotionElement(IDENTITY, -x.central, x.tag)
    if isinstance(x.tag, ExactRotation):
        turn = 1 - x.tag.turn
        return MotionElement(rotation_matrix(turn), -x.central - 1, ExactRotation(turn))
    pinv = x.proj.inverse()
    return MotionElement(pinv, -x.central - cocycle(x.proj, pinv, tol))


def mot_pow(x: MotionElement, n: int, tol: Tolerances = DEFAULT_TOL) -> MotionElement:
    if n < 0:
        x, n = mot_inv(x, tol), -n
    result = MOT_IDENTITY
    base = x
    while n:
        if n & 1:
            result = mot_mul(result, base, tol)
        n >>= 1
        if n:
            base = mot_mul(base, base, tol)
    return result


def mot_product(elements, tol: Tolerances = DEFAULT_TOL) -> MotionElement:
    result = MOT_IDENTITY
    for e in elements:
        result = mot_mul(result, e, tol)
    return result


def commutator(x: MotionElement, y: MotionElement, tol: Tolerances = DEFAULT_TOL) -> MotionElement:
    return mot_product([x, y, mot_inv(x, tol), mot_inv(y, tol)], tol)


def is_central(x: MotionElement, tol: Tolerances = DEFAULT_TOL) -> bool:
    return isinstance(x.tag, ExactCentral) or x.proj.is_identity(tol)


def classify(x: MotionElement, tol: Tolerances = DEFAULT_TOL) -> ElementClass:
    if is_central(x, tol):
        return ElementClass.CENTRAL
    tr = abs(x.proj.trace)
    if tr < 2.0 - tol.trace:
        return ElementClass.ELLIPTIC
    if tr > 2.0 + tol.trace:
        return ElementClass.HYPERBOLIC
    return ElementClass.PARABOLIC


def projective_commutator_defect(p: ProjClass, q: ProjClass) -> float:
    """Distance of ``[p, q]`` from the identity class."""
    return (p @ q @ p.inverse() @ q.inverse()).distance(IDENTITY)


def commutes(x: MotionElement, y: MotionElement, tol: Tolerances = DEFAULT_TOL) -> bool:
    # two elements of the motion group commute iff their projections do
    if is_central(x, tol) or is_central(y, tol):
        return True
    return projective_commutator_defect(x.proj, y.proj) <= tol.comm


def central_root(f: MotionElement, m: int, tol: Tolerances = DEFAULT_TOL) -> MotionElement:
    """The central ``m``-th root ``(identity, t/m)`` of ``f = (identity, t)``."""
    if m <= 0:
        raise ValueError("root order must be a positive integer")
    if not is_central(f, tol):
        raise ValueError("central_root requires a central element")
    t = f.central
    if isinstance(t, float):
        t = Fraction(t)
    return central(Fraction(t) / m)


# ---------------------------------------------------------------------------
# projective order


@dataclass(frozen=True)
class ProjectiveOrder:
    kind: str  # "finite" | "infinite" | "unknown"
    q: int | None = None

    @classmethod
    def finite(cls, q: int) -> ProjectiveOrder:
        return cls("finite", q)

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"


INFINITE = ProjectiveOrder("infinite")
UNKNOWN_NUMERIC = ProjectiveOrder("unknown")


def rotation_number(p: ProjClass) -> float:
    """For elliptic ``p``, the ``r`` in (0, 1/2] with ``p`` conjugate to ``k(+-r)``."""
    tr = min(abs(p.trace) / 2.0, 1.0)
    return math.acos(tr) / math.pi


def projective_order(
    x: MotionElement, denominator_bound: int = 1000, tol: Tolerances = DEFAULT_TOL
) -> ProjectiveOrder:
    if isinstance(x.tag, ExactCentral):
        return ProjectiveOrder.finite(1)
    if isinstance(x.tag, ExactRotation):
        return ProjectiveOrder.finite(x.tag.turn.denominator)
    kind = classify(x, tol)
    if kind is ElementClass.CENTRAL:
        return ProjectiveOrder.finite(1)
    if kind is not ElementClass.ELLIPTIC:
        return INFINITE
    r = rotation_number(x.proj)
    approx = Fraction(r).limit_denominator(denominator_bound)
    if approx != 0 and abs(r - float(approx)) <= tol.rot:
        return ProjectiveOrder.finite(approx.denominator)
    return UNKNOWN_NUMERIC
