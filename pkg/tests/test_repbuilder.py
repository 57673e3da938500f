import json
from fractions import Fraction
from pathlib import Path

import pytest

from seifert_obstruct.io import dump_json, read_manifold
from seifert_obstruct.manifold import GluingMatrix, GraphManifold, SeifertBlock
from seifert_obstruct.motion import (
    MOT_IDENTITY,
    ElementClass,
    MotionElement,
    ProjClass,
    central,
    classify,
    commutes,
    hyperbolic_matrix,
    mot_inv,
    mot_mul,
    projective_order,
    rotation,
)
from seifert_obstruct.pingpong import (
    Interval,
    PingPongError,
    certify_pingpong,
    common_perpendicular,
    geodesic_distance,
    inclusion_margin,
    reduced_word_min_distance,
    schottky_generators,
    schottky_layout,
)
from seifert_obstruct.repbuilder import (
    block_boundaries,
    extend_abelian,
    extend_along_tree,
    representation_from_json,
    representation_to_json,
    seed_faithful_rep,
    seed_word_distance,
    verify_rep,
)

DATA = Path(__file__).resolve().parents[1] / "data"


@pytest.fixture(scope="module")
def path3():
    return read_manifold(DATA / "path3.mfd")


@pytest.fixture(scope="module")
def rep(path3):
    return extend_along_tree(path3, "b")


# --- ping-pong


def test_standard_hyperbolic_inclusion():
    g = hyperbolic_matrix(4.0)
    att, rep = Interval(0.0, 0.2), Interval(0.5, 0.2)
    assert inclusion_margin(g, rep, att) > 0
    assert inclusion_margin(hyperbolic_matrix(1.1), rep, att) < 0


def test_common_perpendicular_of_symmetric_arcs():
    p_att, p_rep = common_perpendicular(Interval(0.5, 0.1), Interval(0.0, 0.1))
    assert p_att == pytest.approx(0.0, abs=1e-12) or p_att == pytest.approx(1.0)
    assert p_rep == pytest.approx(0.5)


def test_four_generators_at_spread_three():
    ms, att, rep, lam = schottky_generators(4, spread=3)
    cert = certify_pingpong("abcd", ms, att, rep)
    assert lam == 3 and cert.margin > 1e-3
    for g in ms:
        assert g.is_exact
        assert abs(g.trace) == pytest.approx(3 + 1 / 3)


def test_spread_below_geodesic_gap_fails():
    att, rep = schottky_layout(4)
    d = geodesic_distance(rep[0], att[0])
    ms, att, rep, _ = schottky_generators(4, spread=Fraction(1001, 1000))
    assert d > 2 * 0.001
    assert certify_pingpong("abcd", ms, att, rep).margin < 0


def test_reduced_words_avoid_identity():
    ms, *_ = schottky_generators(3)
    assert reduced_word_min_distance(ms, 6) > 1e-6
    # a word and its inverse cancel, so non-reduced words would hit the identity
    a = ms[0]
    assert (a @ a.inverse()).distance(ProjClass.identity()) == 0


# --- seed


def test_seed_genus_two_one_boundary():
    block = SeifertBlock("s", 2, 1)
    br, cert = seed_faithful_rep(block, fiber_central=1, spread=3)
    assert cert.margin > 1e-3 and len(cert.generators) == 4
    c1 = br.images["c1"]
    assert classify(c1) is ElementClass.HYPERBOLIC
    assert not projective_order(c1).is_finite
    assert br.images["f"] == central(1)
    assert br.relation_defect().distance(MOT_IDENTITY) == 0


def test_seed_rejects_trivial_fiber_and_closed_block():
    with pytest.raises(ValueError):
        seed_faithful_rep(SeifertBlock("s", 2, 1), fiber_central=0)
    with pytest.raises(ValueError):
        seed_faithful_rep(SeifertBlock("s", 2, 0))
    with pytest.raises(PingPongError):
        seed_faithful_rep(SeifertBlock("s", 2, 2), spread=Fraction(11, 10))


# --- Abelian extension


def _parent_torus():
    return central(1), MotionElement(hyperbolic_matrix(3.0, 0.2), 0)


def test_closing_boundary_inverts_determined_one():
    child = SeifertBlock("k", 2, 1)
    bds = block_boundaries(GraphManifold.build([child, SeifertBlock("p", 2, 0)], [("k", "p", GluingMatrix(2, 1, 5, 2))]), child)
    br = extend_abelian(_parent_torus(), GluingMatrix(2, 1, 5, 2), child, bds, "p")
    assert br.images["c2"].distance(mot_inv(br.images["c1"])) <= 1e-12
    assert classify(br.images["f"]) is ElementClass.HYPERBOLIC


def test_free_choices_must_commute():
    child = SeifertBlock("k", 2, 1)
    m = GraphManifold.build([child, SeifertBlock("p", 2, 0)], [("k", "p", GluingMatrix(2, 1, 5, 2))])
    bds = block_boundaries(m, child)
    f_par, z_par = _parent_torus()
    same_axis = MotionElement(hyperbolic_matrix(1.7, 0.2), 0)
    br = extend_abelian((f_par, z_par), GluingMatrix(2, 1, 5, 2), child, bds, "p", {"a1": same_axis, "b2": central(3)})
    assert commutes(br.images["a1"], br.images["f"])
    other_axis = MotionElement(hyperbolic_matrix(1.7, 0.35), 0)
    with pytest.raises(ValueError, match="commute"):
        extend_abelian((f_par, z_par), GluingMatrix(2, 1, 5, 2), child, bds, "p", {"a1": other_axis})
    with pytest.raises(ValueError):
        extend_abelian((f_par, z_par), GluingMatrix(2, 1, 5, 2), child, bds, "p", {"c1": central(1)})
    # list form fills surface generators in order
    br = extend_abelian((f_par, z_par), GluingMatrix(2, 1, 5, 2), child, bds, "p", [central(2)])
    assert br.images["a1"] == central(2)


# --- tree extension and verification


def test_path3_all_checks(path3, rep):
    report = verify_rep(path3, rep, 1e-9)
    assert report.ok, [r.failures for r in report.results]
    assert rep.pingpong.margin > 1e-6
    assert seed_word_distance(rep, 6) > 1e-6


def test_fiber_types(path3, rep):
    assert classify(rep.blocks["b"].images["f"]) is ElementClass.CENTRAL
    for leaf in "ac":
        assert classify(rep.blocks[leaf].images["f"]) is not ElementClass.CENTRAL


def test_every_root_works(path3):
    for root in path3.block_ids():
        assert verify_rep(path3, extend_along_tree(path3, root)).ok


def test_single_block_is_seed():
    m = GraphManifold.build([SeifertBlock("s", 3, 1)], [])
    r = extend_along_tree(m, "s")
    assert list(r.blocks) == ["s"] and verify_rep(m, r).ok


def test_preconditions():
    blocks = [SeifertBlock("a", 2, 0), SeifertBlock("b", 2, 1)]
    m = GraphManifold.build(blocks, [("a", "b", GluingMatrix(2, 1, 5, 2))])
    with pytest.raises(ValueError, match="leaf"):
        extend_along_tree(m, "b")
    tri = GraphManifold.build(
        [SeifertBlock(x, 2, 1) for x in "xyz"],
        [("x", "y", GluingMatrix(2, 1, 5, 2)), ("y", "z", GluingMatrix(2, 1, 5, 2)), ("z", "x", GluingMatrix(2, 1, 5, 2))],
    )
    with pytest.raises(ValueError, match="tree"):
        extend_along_tree(tri, "x")
    with pytest.raises(ValueError):
        extend_along_tree(m, "nope")


def test_deterministic(path3):
    a = dump_json(representation_to_json(extend_along_tree(path3, "b")))
    b = dump_json(representation_to_json(extend_along_tree(path3, "b")))
    assert a == b


def test_zero_fiber_fails_faithfulness(path3, rep):
    bad = representation_from_json(representation_to_json(rep))
    bad.blocks["b"].images["f"] = central(0)
    report = verify_rep(path3, bad)
    assert not report["root-faithful"].passed


def test_perturbation_breaks_edge_compatibility(path3, rep):
    bad = representation_from_json(representation_to_json(rep))
    bad.blocks["b"].images["c1"] = mot_mul(bad.blocks["b"].images["c1"], rotation(1e-3))
    report = verify_rep(path3, bad, 1e-9)
    assert not report["edge-compatibility"].passed
    assert not report.ok


def test_nonabelian_child_detected(path3, rep):
    bad = representation_from_json(representation_to_json(rep))
    bad.blocks["a"].images["a1"] = MotionElement(hyperbolic_matrix(2.0, 0.3), 0)
    report = verify_rep(path3, bad)
    assert not report["abelian"].passed
    assert not report["fiber-central"].passed


def test_serialization_is_lossless(path3, rep):
    data = json.loads(dump_json(representation_to_json(rep)))
    back = representation_from_json(data)
    for v, br in rep.blocks.items():
        assert back.blocks[v].images == br.images
    assert verify_rep(path3, back).ok
