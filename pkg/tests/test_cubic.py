import random

import pytest

from cubiclines.cubic import (CubicForm, DegenerateSpanError, ProjLine,
                              SingularPointError, _proj_points,
                              cubic_from_json, fermat_cubic,
                              lines_through_point, plane_residual,
                              smoothness_probe)
from cubiclines.fields import QQ
from cubiclines.poly import MultiPoly


def F7pts(lvl):
    return list(_proj_points(lvl, 4))


def test_projline_canonical_and_meets(tower7):
    lvl = tower7.level(1)
    l1 = ProjLine(lvl, [1, 0, 0, 0, 0], [0, 1, 0, 0, 0])
    same = ProjLine(lvl, [2, 3, 0, 0, 0], [5, 1, 0, 0, 0])
    assert l1 == same and l1.key() == same.key()
    l2 = ProjLine(lvl, [0, 0, 1, 0, 0], [0, 0, 0, 1, 0])
    assert not l1.meets(l2)
    l3 = ProjLine(lvl, [1, 0, 0, 0, 0], [0, 0, 1, 0, 0])
    assert l1.meets(l3) and l2.meets(l3)
    assert l1.contains([3, 4, 0, 0, 0])
    assert not l1.contains([0, 0, 1, 0, 0])
    with pytest.raises(DegenerateSpanError):
        ProjLine(lvl, [1, 2, 0, 0, 0], [3, 6, 0, 0, 0])


def test_projline_embed_descend_round_trip(tower7):
    lvl = tower7.level(1)
    l1 = ProjLine(lvl, [1, 6, 0, 0, 0], [0, 0, 1, 6, 0])
    up = l1.embed(tower7, 2)
    assert up.min_level() == 1
    assert up.descend(tower7, 1) == l1


def test_cubic_validation(tower7):
    lvl = tower7.level(1)
    with pytest.raises(ValueError):
        CubicForm(lvl, 4, MultiPoly.zero(lvl, ("x0", "x1", "x2", "x3", "x4")))
    mixed = MultiPoly.from_int_terms(lvl, ("x0", "x1", "x2", "x3", "x4"),
                                     {(3, 0, 0, 0, 0): 1, (1, 0, 0, 0, 0): 1})
    with pytest.raises(ValueError):
        CubicForm(lvl, 4, mixed)


def test_polarization_identity(threefold7, tower7):
    # F(a + b) = F(a) + P1(a;b) + P2(a;b) + F(b) for all a, b
    lvl = tower7.level(1)
    rng = random.Random(2)
    X = threefold7
    for _ in range(40):
        a = [rng.randrange(7) for _ in range(5)]
        b = [rng.randrange(7) for _ in range(5)]
        s = [lvl.add(x, y) for x, y in zip(a, b)]
        total = lvl.add(lvl.add(X.f_at(a), X.f_at(b)),
                        lvl.add(X.p1_at(a, b), X.p2_at(a, b)))
        assert X.f_at(s) == total


def test_smoothness_probe_fermat(threefold7, tower7):
    cert = smoothness_probe(threefold7, tower7, max_level=2)
    assert cert.smooth_so_far and cert.singular_point is None
    assert 1 in cert.levels_exhausted


def test_smoothness_probe_finds_singularity(tower7):
    # cone over a plane cubic: singular along x3 = x4 = 0 complement
    doc = {"p": 7, "n": 4, "monomials": [
        {"exps": [3, 0, 0, 0, 0], "coeff": 1},
        {"exps": [0, 3, 0, 0, 0], "coeff": 1},
        {"exps": [0, 0, 3, 0, 0], "coeff": 1}]}
    cone, tw = cubic_from_json(doc)
    cert = smoothness_probe(cone, tw, max_level=1)
    assert not cert.smooth_so_far
    assert cert.singular_point is not None


def test_smoothness_probe_rejects_rationals(threefoldQ):
    with pytest.raises(ValueError):
        smoothness_probe(threefoldQ, None)


def test_lines_through_point_vs_bruteforce(threefold7, tower7):
    lvl = tower7.level(1)
    rng = random.Random(4)
    pts = [p for p in F7pts(lvl) if threefold7.on_x(p)
           and threefold7.is_smooth_point(p)]
    rng.shuffle(pts)
    checked = 0
    for x in pts:
        res = lines_through_point(threefold7, x, tower7, max_level=4)
        if res.eckardt:
            continue
        brute = set()
        for y in F7pts(lvl):
            try:
                line = ProjLine(lvl, x, y)
            except DegenerateSpanError:
                continue
            if threefold7.line_in_x(line):
                brute.add(line.key())
        level1 = {l.descend(tower7, 1).key() for l in res.lines
                  if l.min_level() == 1}
        assert level1 == brute
        assert res.total_multiplicity == 6
        checked += 1
        if checked >= 8:
            break
    assert checked >= 8


def test_eckardt_point_on_fermat(threefold7, tower7):
    res = lines_through_point(threefold7, [1, 6, 0, 0, 0], tower7)
    assert res.eckardt


def test_lines_through_point_rejects_bad_input(threefold7, tower7):
    with pytest.raises(ValueError):
        lines_through_point(threefold7, [1, 0, 0, 0, 0], tower7)  # not on X
    doc = {"p": 7, "n": 4, "monomials": [
        {"exps": [3, 0, 0, 0, 0], "coeff": 1},
        {"exps": [0, 3, 0, 0, 0], "coeff": 1},
        {"exps": [0, 0, 3, 0, 0], "coeff": 1}]}
    cone, tw = cubic_from_json(doc)
    with pytest.raises(SingularPointError):
        lines_through_point(cone, [0, 0, 0, 0, 1], tw)


def test_plane_residual_double_line(threefold7, tower7):
    lvl = tower7.level(1)
    line = ProjLine(lvl, [1, 6, 0, 0, 0], [0, 0, 1, 6, 0])
    basis = [list(line.rows[0]), list(line.rows[1]), [0, 0, 0, 0, 1]]
    sec = plane_residual(threefold7, basis, known_line=line, tower=tower7)
    assert sec.status == "decomposed"
    assert sec.conic_class == "double_line"


def test_plane_residual_irreducible_section(threefold7, tower7):
    basis = [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 0, 0, 1]]
    sec = plane_residual(threefold7, basis, tower=tower7, max_level=2)
    assert sec.status == "no_linear_factor"
    assert sec.components_degrees == [3]


def test_plane_residual_plane_inside(tower7):
    # F = x0 * (x1^2 + x2^2 + x3 x4) contains the plane x0 = 0
    doc = {"p": 7, "n": 4, "monomials": [
        {"exps": [1, 2, 0, 0, 0], "coeff": 1},
        {"exps": [1, 0, 2, 0, 0], "coeff": 1},
        {"exps": [1, 0, 0, 1, 1], "coeff": 1}]}
    cub, tw = cubic_from_json(doc)
    basis = [[0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0]]
    sec = plane_residual(cub, basis, tower=tw)
    assert sec.status == "plane_in_X"


def test_fermat_rejected_in_char3():
    from cubiclines.fields import FieldTower
    tw = FieldTower(3, budget=2, seed=0)
    with pytest.raises(ValueError):
        fermat_cubic(tw.level(1), 4)
