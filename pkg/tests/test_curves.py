import pytest

from cubiclines.bihom import SVARS
from cubiclines.cubic import ProjLine
from cubiclines.curves import (BasePointError, NotOnXError, RationalCurve,
                               conic_residual_to_line, curve_from_json,
                               curve_meeting_data, line_as_curve,
                               validate_curve)
from cubiclines.fields import QQ
from cubiclines.poly import MultiPoly
from conftest import fixture_json, load_line


def test_conic_fixtures_validate(threefold7, conic7, tower7,
                                 threefold11, conic11, tower11,
                                 threefoldQ, conicQ):
    for X, C, tw in ((threefold7, conic7, tower7),
                     (threefold11, conic11, tower11),
                     (threefoldQ, conicQ, None)):
        rep = validate_curve(X, C, tower=tw, max_level=4)
        assert rep.valid, (X.field, rep)
        assert rep.e == 2


def test_curve_json_round_trip(conic7, tower7):
    doc = conic7.to_json()
    back = curve_from_json(doc, tower7.level(1))
    assert back.e == conic7.e
    assert all(a == b for a, b in zip(back.coords, conic7.coords))


def test_base_point_detection(threefold7, tower7):
    lvl = tower7.level(1)
    s0 = MultiPoly.var(lvl, SVARS, "s0")
    s1 = MultiPoly.var(lvl, SVARS, "s1")
    z = MultiPoly.zero(lvl, SVARS)
    bad = RationalCurve(lvl, 2, [s0 * s0, s0 * s1, z, z, z])
    with pytest.raises(BasePointError):
        validate_curve(threefold7, bad, tower=tower7)


def test_off_x_detection(threefold7, tower7):
    lvl = tower7.level(1)
    s0 = MultiPoly.var(lvl, SVARS, "s0")
    s1 = MultiPoly.var(lvl, SVARS, "s1")
    bad = RationalCurve(lvl, 1, [s0, s1, s0, s1, s0])
    with pytest.raises(NotOnXError):
        validate_curve(threefold7, bad, tower=tower7)


def test_line_as_curve_is_valid(threefold7, skew7, tower7):
    for line in skew7:
        rep = validate_curve(threefold7, line_as_curve(line), tower=tower7)
        assert rep.valid and rep.e == 1


def test_meeting_data_skew_lines(skew7, tower7):
    l1, l2 = skew7
    md = curve_meeting_data(line_as_curve(l1), line_as_curve(l2),
                            tower=tower7, max_level=4)
    assert md.complete and md.r == 0


def test_meeting_data_crossing_lines(tower7):
    lvl = tower7.level(1)
    l1 = ProjLine(lvl, [1, 6, 0, 0, 0], [0, 0, 1, 6, 0])
    l2 = ProjLine(lvl, [1, 6, 0, 0, 0], [0, 0, 0, 0, 1])
    assert l1.meets(l2)
    md = curve_meeting_data(line_as_curve(l1), line_as_curve(l2),
                            tower=tower7, max_level=4)
    assert md.r == 1
    pt = md.points[0]
    assert pt.transversal
    # normalized so the last nonzero coordinate is one: (1,6,0,0,0) / 6
    assert pt.point == (6, 1, 0, 0, 0)


def test_meeting_data_conic_and_line(threefold7, conic7, tower7):
    doc = fixture_json("meetline7.json")
    line = curve_from_json(doc, tower7.level(1))
    md = curve_meeting_data(conic7, line, tower=tower7, max_level=4)
    assert md.complete and md.r == 1
    assert md.all_transversal


def test_meeting_data_disjoint_conic_line(conic7, tower7):
    doc = fixture_json("disjline7.json")
    line = curve_from_json(doc, tower7.level(1))
    md = curve_meeting_data(conic7, line, tower=tower7, max_level=4)
    assert md.complete and md.r == 0


def test_conic_residual_parameterized(threefold7, tower7):
    doc = fixture_json("conic7.json")
    lvl = tower7.level(1)
    line = load_line(doc["residual_of_line"], lvl)
    basis = doc["plane_basis"]
    res = conic_residual_to_line(threefold7, line, basis, tower=tower7)
    assert res.kind == "parameterized"
    rep = validate_curve(threefold7, res.curve, tower=tower7, max_level=4)
    assert rep.valid and rep.e == 2
    # the conic and the line it is residual to meet inside the plane
    md = curve_meeting_data(res.curve, line_as_curve(line), tower=tower7,
                            max_level=4)
    assert md.r >= 1


def test_conic_residual_double_line(threefold7, tower7):
    lvl = tower7.level(1)
    line = ProjLine(lvl, [1, 6, 0, 0, 0], [0, 0, 1, 6, 0])
    basis = [list(line.rows[0]), list(line.rows[1]), [0, 0, 0, 0, 1]]
    res = conic_residual_to_line(threefold7, line, basis, tower=tower7)
    assert res.kind == "double_line"


def test_conic_residual_rational_case(threefoldQ):
    doc = fixture_json("conicQ.json")
    line_rows = fixture_json("conicQ.json").get("residual_of_line")
    basis = doc["plane_basis"]
    line = ProjLine(QQ, [QQ.from_int(x) for x in basis[0]],
                    [QQ.from_int(x) for x in basis[1]])
    if not threefoldQ.line_in_x(line):
        pytest.skip("fixture plane basis rows do not span a line of X")
    res = conic_residual_to_line(threefoldQ, line, basis, tower=None)
    assert res.kind in ("parameterized", "no_rational_point")
