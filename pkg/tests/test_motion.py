import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st

from oracles import cocycle_oracle, lift_oracle, random_sl2
from seifert_obstruct.motion import (
    IDENTITY,
    MOT_IDENTITY,
    ElementClass,
    MotionElement,
    ProjClass,
    central,
    central_root,
    circle_action,
    classify,
    cocycle,
    commutator,
    commutes,
    hyperbolic_matrix,
    lift,
    mot_inv,
    mot_mul,
    mot_pow,
    projective_order,
    rotation,
    rotation_matrix,
)


def proj(m):
    return ProjClass.from_matrix(m)


def rand_proj(rng):
    return proj(random_sl2(rng))


def rand_exact(rng, size=6):
    while True:
        a, b, c = (Fraction(rng.randint(-size, size), rng.randint(1, 4)) for _ in range(3))
        if a != 0:
            d = (1 + b * c) / a
            return ProjClass.from_matrix([[a, b], [c, d]])


def rand_elem(rng, exact=False):
    p = rand_exact(rng) if exact else rand_proj(rng)
    return MotionElement(p, rng.randint(-3, 3))


# --- PSL(2,R) classes


def test_from_matrix_normalizes_sign_and_scale():
    p = proj([[-2.0, 0.0], [0.0, -0.5]])
    assert (p.a, p.d) == (2.0, 0.5)
    q = proj([[2, 0], [0, 2]])
    assert q == IDENTITY and q.is_exact


def test_exact_path_keeps_fractions():
    p = proj([[Fraction(3), Fraction(1)], [Fraction(2), Fraction(1)]])
    assert p.is_exact
    assert p.inverse() @ p == IDENTITY


def test_nonpositive_determinant_rejected():
    with pytest.raises(ValueError):
        proj([[1, 0], [0, -1]])


def test_distance_ignores_sign():
    p = proj([[1.0, 2.0], [0.0, 1.0]])
    assert p.distance(ProjClass(-1.0, -2.0, -0.0, -1.0)) == 0.0


# --- circle action and lift


def test_rotation_shifts_circle():
    assert circle_action(rotation_matrix(0.3), 0.1) == pytest.approx(0.4)


@given(st.floats(0, 0.999), st.floats(-3, 3))
@example(0.0, -6.629665364931799e-17)
@settings(max_examples=200, deadline=None)
def test_lift_matches_oracle(seed, x):
    m = random_sl2(random.Random(seed))
    assert lift(proj(m), x) == pytest.approx(lift_oracle(proj(m).as_array(), x), abs=1e-9)


def test_lift_is_equivariant_under_integer_shift():
    p = rand_proj(random.Random(3))
    assert lift(p, 2.25) - lift(p, 0.25) == pytest.approx(2.0)


# --- cocycle


def test_cocycle_matches_lift_oracle():
    rng = random.Random(11)
    for _ in range(2000):
        a, b = rand_proj(rng), rand_proj(rng)
        assert cocycle(a, b) == cocycle_oracle(a.as_array(), b.as_array())


def test_cocycle_values_and_identity():
    rng = random.Random(5)
    p = rand_proj(rng)
    assert cocycle(IDENTITY, p) == cocycle(p, IDENTITY) == 0
    half = rotation_matrix(0.75)
    assert cocycle(half, half) == 1
    assert cocycle(rotation_matrix(0.25), rotation_matrix(0.25)) == 0


@given(st.integers(0, 10**6))
@settings(max_examples=200, deadline=None)
def test_cocycle_identity_exact(seed):
    rng = random.Random(seed)
    a, b, c = (rand_exact(rng) for _ in range(3))
    assert cocycle(a, b) + cocycle(a @ b, c) == cocycle(a, b @ c) + cocycle(b, c)


# --- group laws


def test_rotation_square_example():
    sq = rotation(0.6) * rotation(0.6)
    assert sq.distance(MotionElement(rotation_matrix(0.2), 1)) <= 1e-12
    exact = rotation(Fraction(3, 5)) ** 2
    assert exact.central == 1 and exact.tag.turn == Fraction(1, 5)


def test_rotation_by_integer_is_central():
    assert rotation(2) == central(2)
    assert rotation(Fraction(7, 2)) == MotionElement(rotation_matrix(Fraction(1, 2)), 3)


def test_full_turn_is_center_generator():
    assert rotation(Fraction(1, 3)) ** 3 == central(1)


@given(st.integers(0, 10**6))
@settings(max_examples=100, deadline=None)
def test_associativity(seed):
    rng = random.Random(seed)
    x, y, z = (rand_elem(rng) for _ in range(3))
    assert ((x * y) * z).distance(x * (y * z)) <= 1e-9


@given(st.integers(0, 10**6))
@settings(max_examples=100, deadline=None)
def test_inverse(seed):
    x = rand_elem(random.Random(seed))
    assert (x * mot_inv(x)).distance(MOT_IDENTITY) <= 1e-9
    assert (mot_inv(x) * x).distance(MOT_IDENTITY) <= 1e-9


def test_exact_tags_agree_with_general_product():
    r = rotation(Fraction(2, 7))
    s = rotation(Fraction(6, 7))
    tagged = mot_mul(r, s)
    untagged = mot_mul(MotionElement(r.proj, r.central), MotionElement(s.proj, s.central))
    assert tagged.distance(untagged) <= 1e-12
    assert mot_inv(r).distance(mot_inv(MotionElement(r.proj, r.central))) <= 1e-12


def test_power_matches_repeated_product():
    x = rand_elem(random.Random(8))
    prod = MOT_IDENTITY
    for _ in range(5):
        prod = prod * x
    assert mot_pow(x, 5).distance(prod) <= 1e-9
    assert (mot_pow(x, -5) * prod).distance(MOT_IDENTITY) <= 1e-9


# --- centralizers and roots


def test_commutes_on_same_axis_and_center():
    h = MotionElement(hyperbolic_matrix(2.5, 0.3), 1)
    assert commutes(h ** 2, h ** -3)
    assert commutes(h, central(Fraction(5, 3)))
    other = MotionElement(hyperbolic_matrix(2.5, 0.1), 0)
    assert not commutes(h, other)


def test_commutator_of_commuting_pair_is_trivial():
    r = rotation(0.3)
    assert commutator(r, rotation(0.45)).distance(MOT_IDENTITY) <= 1e-9


def test_central_root():
    f = central(Fraction(7, 3))
    root = central_root(f, 4)
    assert mot_pow(root, 4) == f
    with pytest.raises(ValueError):
        central_root(f, 0)
    with pytest.raises(ValueError):
        central_root(rotation(0.3), 2)


# --- classification


@pytest.mark.parametrize(
    "elem, kind",
    [
        (central(3), ElementClass.CENTRAL),
        (rotation(0.3), ElementClass.ELLIPTIC),
        (MotionElement(hyperbolic_matrix(3.0), 0), ElementClass.HYPERBOLIC),
        (MotionElement(ProjClass.from_matrix([[1, 1], [0, 1]]), 0), ElementClass.PARABOLIC),
    ],
)
def test_classify(elem, kind):
    assert classify(elem) is kind


def test_projective_order():
    assert projective_order(rotation(Fraction(2, 5))).q == 5
    assert projective_order(MotionElement(rotation_matrix(0.25), 0)).q == 4
    assert projective_order(central(2)).q == 1
    assert not projective_order(MotionElement(hyperbolic_matrix(2.0), 0)).is_finite
    assert projective_order(MotionElement(rotation_matrix(1 / math.sqrt(7)), 0)).kind == "unknown"


def test_roots_of_central_have_finite_projective_order():
    # x^m central forces x projectively of order dividing m
    x = rotation(Fraction(3, 8))
    assert classify(x ** 8) is ElementClass.CENTRAL
    assert 8 % projective_order(x).q == 0


def test_hyperbolic_products_stay_exact():
    a = ProjClass.from_matrix([[Fraction(5, 2), 0], [0, Fraction(2, 5)]])
    b = ProjClass.from_matrix([[Fraction(13, 5), Fraction(12, 5)], [Fraction(12, 5), Fraction(13, 5)]])
    word = a @ b @ a.inverse() @ b.inverse()
    assert word.is_exact
    assert (word @ (b @ a @ b.inverse() @ a.inverse())).is_exact


def test_numpy_array_input():
    p = ProjClass.from_matrix(np.array([[2.0, 1.0], [1.0, 1.0]]))
    assert p.as_array() @ p.inverse().as_array() == pytest.approx(np.eye(2))
