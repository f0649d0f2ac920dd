import pytest

from sl3skein.skein_presented import (
    TRIANGLE_WEBS,
    _parse_rel,
    _rotate_name,
    build_dictionary,
    check_relation,
    name_grading,
    relation_table,
    table_verdict,
    triangle_laurent_demo,
    verify_table,
)


def test_triangle_dictionary_names_every_web():
    d = build_dictionary("triangle")
    assert sorted(d.entries) == sorted(TRIANGLE_WEBS)
    assert d.provenance["t-123"].startswith("mutation")
    assert d.cluster_count == 2


def test_quadrilateral_dictionary():
    d = build_dictionary("quadrilateral")
    assert len(d.entries) == 24
    assert d.cluster_count == 50
    assert all(x.is_positive() and x.is_bar_invariant() for x in d.entries.values())


def test_name_grading_is_injective_on_quadrilateral_webs():
    d = build_dictionary("quadrilateral")
    grads = [name_grading(nm, d.points) for nm in d.names]
    assert len(set(grads)) == len(grads)
    with pytest.raises(KeyError):
        name_grading("x99", d.points)


def test_cutting_identity_for_crossing_diagonals():
    d = build_dictionary("quadrilateral")
    lhs = d["e24"] * d.weyl(["e13", "e31"])
    rhs = (d.weyl(["e21", "e34", "e13"]).qshift(6)
           + d.weyl(["t+231", "t-413"])
           + d.weyl(["e23", "e14", "e31"]).qshift(-6))
    assert lhs == rhs


def test_weyl_requires_q_commuting_webs():
    d = build_dictionary("quadrilateral")
    with pytest.raises(ValueError):
        d.weyl(["e13", "e24"])


def test_triangle_table_passes():
    checks = verify_table("triangle")
    assert checks and all(c.verdict == "pass" for c in checks)
    assert table_verdict(checks) == (True, 0)


def test_relation_parser():
    rel = _parse_rel("r", "a b = 2:[c d] + -1:[e]")
    assert rel.kind == "exchange" and not rel.required
    assert rel.right == ((2, ("c", "d")), (-1, ("e",)))
    assert _parse_rel("s", "a b = b a").kind == "commute"
    assert _parse_rel("t", "a b = 1:[a b]").required


def test_wrong_coefficient_is_reported_with_both_sides():
    d = build_dictionary("triangle")
    bad = _parse_rel("bad", "e21 e32 = 1:[e32 e21]")
    res = check_relation(d, bad)
    assert res.verdict == "mismatch"
    assert res.to_json()["lhs"] and res.to_json()["rhs"]


def test_rotations():
    assert _rotate_name("e12", 1, 4) == "e23"
    assert _rotate_name("t+413", 1, 4) == "t+124"
    assert len(relation_table("quadrilateral", rotations=True)) == 4 * len(relation_table("quadrilateral"))


def test_quadrilateral_required_rows_pass():
    checks = verify_table("quadrilateral")
    assert all(c.verdict == "pass" for c in checks if c.required)
    names = {c.name: c for c in checks}
    assert names["first_mutation"].verdict == "pass"
    assert names["sign_change"].verdict == "pass"


def test_laurent_demo_clears_opposite_face():
    k, p = triangle_laurent_demo(["t-123", "e12"])
    assert k == 1
    assert all(v >= 0 for a in p.exponents() for v in a)
