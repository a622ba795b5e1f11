"""Parameterized rational curves on a cubic hypersurface.

A curve is n+1 binary forms of a common degree e.  Validation checks the
parameterization is base-point-free, lands on X, and is birational onto
its image; image singularities are located through the coincidence system
(all 2x2 minors of [phi(s); phi(t)] after removing the diagonal factor).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .bihom import (
    STVARS,
    SVARS,
    TVARS,
    PositiveDimensionalError,
    diagonal_form,
    solve_bihomog,
)
from .cubic import ProjLine, _proj2_points, plane_residual
from .fields import QQ
from .poly import MultiPoly, binary_gcd


class BasePointError(ValueError):
    """All coordinate forms share a root: the map is undefined there."""


class NotOnXError(ValueError):
    """The composed form F(phi(s)) is not identically zero."""


class RationalCurve:
    """A degree-e map P^1 -> P^n given by n+1 binary forms in (s0, s1)."""

    __slots__ = ("field", "n", "e", "coords")

    def __init__(self, fld, e, coords):
        coords = tuple(coords)
        if e < 1:
            raise ValueError("curve degree must be >= 1")
        for c in coords:
            if c.vars != SVARS:
                raise ValueError("coordinate forms must use variables %r" % (SVARS,))
            if not c.is_zero() and any(sum(ex) != e for ex in c.terms):
                raise ValueError("coordinate form not homogeneous of degree %d" % e)
        if all(c.is_zero() for c in coords):
            raise ValueError("zero parameterization")
        self.field = fld
        self.n = len(coords) - 1
        self.e = e
        self.coords = coords

    def point_at(self, s):
        vals = list(s)
        return [c.eval_elems(vals) for c in self.coords]

    def jacobian_at(self, s, lvl=None):
        """Rows d(phi)/d(s0) and d(phi)/d(s1) evaluated at the parameter."""
        lvl = lvl or self.field
        rows = []
        for name in SVARS:
            row = []
            for c in self.coords:
                d = c.derivative(name)
                d = _lift_poly(d, self.field, lvl)
                row.append(d.eval_elems(list(s)))
            rows.append(row)
        return rows

    def tangent_rows_at(self, s, lvl=None):
        """Spanning rows of the embedded tangent line at a smooth parameter."""
        lvl = lvl or self.field
        pt = [_lift_poly(c, self.field, lvl).eval_elems(list(s))
              for c in self.coords]
        jac = self.jacobian_at(s, lvl)
        for row in jac:
            if linalg.rank([pt, row], lvl) == 2:
                return [pt, row]
        return None

    def embed(self, tower, k):
        F = self.field
        if F is QQ or F.k == k:
            return self
        lvl = tower.level(k)
        return RationalCurve(lvl, self.e,
                             [c.map_field(lvl, lambda x: lvl.embed_from(x, F.k))
                              for c in self.coords])

    def to_json(self):
        out = []
        for c in self.coords:
            dense = [self.field.zero] * (self.e + 1)
            for (e0, e1), v in c.terms.items():
                dense[e1] = v
            out.append([_as_int(self.field, v) for v in dense])
        return {"e": self.e, "coords": out}

    def __repr__(self):
        return "RationalCurve(e=%d, n=%d over %r)" % (self.e, self.n, self.field)


def _as_int(F, v):
    if F is QQ:
        if v.denominator != 1:
            raise ValueError("non-integer coefficient in JSON export")
        return int(v)
    if getattr(F, "k", 1) > 1:
        raise ValueError("JSON export needs level-1 coefficients")
    return int(v)


def curve_from_json(doc, fld):
    """Curve from {"e": int, "coords": [[c_0..c_e] per coordinate]}.

    Coefficient k of a coordinate multiplies s0^(e-k) s1^k.
    """
    e = int(doc["e"])
    coords = []
    for dense in doc["coords"]:
        if len(dense) != e + 1:
            raise ValueError("coefficient list length must be e+1")
        terms = {(e - k, k): int(c) for k, c in enumerate(dense)}
        coords.append(MultiPoly.from_int_terms(fld, SVARS, terms))
    return RationalCurve(fld, e, coords)


def line_as_curve(line):
    """Degree-1 parameterization s0*a + s1*b of a ProjLine."""
    F = line.field
    a, b = line.rows
    coords = []
    for i in range(line.n + 1):
        coords.append(MultiPoly(F, SVARS, {(1, 0): a[i], (0, 1): b[i]}))
    return RationalCurve(F, 1, coords)


def _lift_poly(P, F, lvl):
    if lvl is F or F is QQ:
        return P
    return P.map_field(lvl, lambda c: lvl.embed_from(c, F.k))


def _lift_elems(vals, F, lvl):
    if lvl is F or F is QQ:
        return list(vals)
    return [lvl.embed_from(v, F.k) for v in vals]


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

@dataclass
class CurveValidation:
    e: int
    on_x: bool
    base_point_free: bool
    birational: bool
    nodes: list = field(default_factory=list)   # (level, s pair, t pair)
    cusps: list = field(default_factory=list)   # (level, s pair)
    complete: bool = True
    composition_formal_degree: int = 0

    @property
    def node_free(self):
        return not self.nodes and not self.cusps

    @property
    def valid(self):
        return (self.on_x and self.base_point_free and self.birational
                and self.node_free)


def coincidence_minors(curve):
    """The forms (phi_i(s) phi_j(t) - phi_j(s) phi_i(t)) / (s0 t1 - s1 t0)."""
    F = curve.field
    delta = diagonal_form(F)
    phis = [MultiPoly(F, STVARS, {(e0, e1, 0, 0): c
                                  for (e0, e1), c in p.terms.items()})
            for p in curve.coords]
    phit = [MultiPoly(F, STVARS, {(0, 0, e0, e1): c
                                  for (e0, e1), c in p.terms.items()})
            for p in curve.coords]
    out = []
    for i in range(len(phis)):
        for j in range(i + 1, len(phis)):
            M = phis[i] * phit[j] - phis[j] * phit[i]
            if M.is_zero():
                continue
            out.append(M.exact_div(delta))
    return out


def validate_curve(cubic, curve, tower=None, max_level=None):
    """Full validation report; raises on base points or a curve off X."""
    F = curve.field
    X = cubic if cubic.field is F else cubic._over(F)
    e = curve.e
    nonzero = [c for c in curve.coords if not c.is_zero()]
    g = binary_gcd(nonzero, degrees=[e] * len(nonzero))
    if g.degree() > 0:
        raise BasePointError("coordinate forms share the factor %r" % (g,))
    comp = X.F.eval_polys(list(curve.coords))
    if not comp.is_zero():
        raise NotOnXError("F(phi(s)) is a nonzero form of degree %d" % (3 * e))
    report = CurveValidation(e=e, on_x=True, base_point_free=True,
                             birational=True,
                             composition_formal_degree=3 * e)
    mins = coincidence_minors(curve)
    if not mins:
        raise ValueError("image of the parameterization is a single point")
    if e == 1:
        return report
    nonconst = [N for N in mins if not N.is_constant()]
    if any(N.is_constant() and not N.is_zero() for N in mins):
        # a constant nonzero minor forbids any coincidence at all
        return report
    sols = _solve_system(nonconst, ((e - 1, e - 1),), tower, max_level)
    if sols is None:
        report.birational = False
        return report
    report.complete = sols.complete
    seen = set()
    for lv, s, t, _m in sols.solutions:
        lvl = tower.level(lv) if tower is not None else QQ
        ks = tuple(lvl.key(x) for x in s)
        kt = tuple(lvl.key(x) for x in t)
        if ks == kt:
            if (lv, ks) not in seen:
                seen.add((lv, ks))
                report.cusps.append((lv, s))
        elif (lv, kt, ks) not in seen:
            seen.add((lv, ks, kt))
            report.nodes.append((lv, s, t))
    return report


def _solve_system(forms, bidegs, tower, max_level):
    """Common zeros of >= 1 bihomogeneous forms of one shared bidegree.

    Solves a pair with a nonzero resultant and filters by the rest;
    returns None when every pairing is positive dimensional (the common
    zero locus contains a curve).
    """
    forms = [f for f in forms if not f.is_zero()]
    if not forms:
        return None
    bd = bidegs[0]
    if len(forms) == 1:
        return None if max(bd) > 0 else _empty_solutions()
    for i in range(len(forms)):
        for j in range(i + 1, len(forms)):
            try:
                sols = solve_bihomog(forms[i], forms[j], tower,
                                     max_level=max_level, bidegrees=(bd, bd))
            except PositiveDimensionalError:
                continue
            rest = [f for k, f in enumerate(forms) if k not in (i, j)]
            sols.solutions = [sol for sol in sols.solutions
                              if _vanishes_all(rest, sol, tower, forms[0].field)]
            return sols
    return None


def _empty_solutions():
    from .bihom import BihomSolutions
    return BihomSolutions()


def _vanishes_all(forms, sol, tower, F):
    lv, s, t, _m = sol
    lvl = tower.level(lv) if tower is not None else QQ
    vals = list(s) + list(t)
    for f in forms:
        fl = _lift_poly(f, F, lvl)
        if not lvl.is_zero(fl.eval_elems(vals)):
            return False
    return True


# ---------------------------------------------------------------------------
# meeting data of a pair
# ---------------------------------------------------------------------------

@dataclass
class MeetingPoint:
    level: int
    point: tuple
    s_params: list
    t_params: list
    transversal: bool


@dataclass
class MeetingData:
    points: list
    complete: bool = True

    @property
    def r(self):
        return len(self.points)

    @property
    def all_transversal(self):
        return all(p.transversal for p in self.points)


def curve_meeting_data(curve1, curve2, tower=None, max_level=None):
    """Common image points of two distinct curves, with transversality."""
    F = curve1.field
    if curve2.field is not F:
        raise ValueError("curves must live over the same level")
    phis = [MultiPoly(F, STVARS, {(e0, e1, 0, 0): c
                                  for (e0, e1), c in p.terms.items()})
            for p in curve1.coords]
    phit = [MultiPoly(F, STVARS, {(0, 0, e0, e1): c
                                  for (e0, e1), c in p.terms.items()})
            for p in curve2.coords]
    mins = []
    for i in range(len(phis)):
        for j in range(i + 1, len(phis)):
            M = phis[i] * phit[j] - phis[j] * phit[i]
            if not M.is_zero():
                mins.append(M)
    if not mins:
        raise ValueError("images coincide in a single point")
    sols = _solve_system(mins, ((curve1.e, curve2.e),), tower, max_level)
    if sols is None:
        raise ValueError("curve images share a component")
    by_point = {}
    for lv, s, t, _m in sols.solutions:
        lvl = tower.level(lv) if tower is not None else QQ
        pt = [_lift_poly(c, F, lvl).eval_elems(list(s)) for c in curve1.coords]
        pt = _normalize_point(pt, lvl)
        key = (lv, tuple(lvl.key(x) for x in pt))
        rec = by_point.setdefault(key, MeetingPoint(lv, tuple(pt), [], [], True))
        if s not in rec.s_params:
            rec.s_params.append(s)
        if t not in rec.t_params:
            rec.t_params.append(t)
    for rec in by_point.values():
        lvl = tower.level(rec.level) if tower is not None else QQ
        rec.transversal = _is_transversal(curve1, curve2, rec, lvl)
    points = [by_point[k] for k in sorted(by_point)]
    return MeetingData(points=points, complete=sols.complete)


def _normalize_point(pt, lvl):
    idx = max(i for i, x in enumerate(pt) if not lvl.is_zero(x))
    inv = lvl.inv(pt[idx])
    return [lvl.mul(x, inv) for x in pt]


def _is_transversal(curve1, curve2, rec, lvl):
    if len(rec.s_params) != 1 or len(rec.t_params) != 1:
        return False
    rows1 = curve1.tangent_rows_at(rec.s_params[0], lvl)
    rows2 = curve2.tangent_rows_at(rec.t_params[0], lvl)
    if rows1 is None or rows2 is None:
        return False
    return linalg.rank(rows1 + rows2, lvl) >= 3


# ---------------------------------------------------------------------------
# conics residual to a line in a plane section
# ---------------------------------------------------------------------------

@dataclass
class ConicResidual:
    kind: str            # parameterized | two_lines | double_line | no_rational_point
    curve: object = None
    conic: object = None
    lines: list = field(default_factory=list)
    level: int = 1


def conic_residual_to_line(cubic, line, plane_basis, tower=None, max_level=2,
                           q_bound=12):
    """Parameterize the conic residual to a known line in a plane section."""
    F = cubic.field
    if not cubic.line_in_x(line):
        raise ValueError("the given line does not lie on X")
    sec = plane_residual(cubic, plane_basis, known_line=line, tower=tower,
                         max_level=max_level)
    if sec.status == "plane_in_X":
        raise ValueError("the plane lies inside X")
    if sec.conic_class != "smooth":
        return ConicResidual(kind=sec.conic_class, conic=sec.conic,
                             lines=sec.conic_lines)
    found = _point_on_conic(sec.conic, F, tower, max_level, q_bound)
    if found is None:
        return ConicResidual(kind="no_rational_point", conic=sec.conic)
    lvl, p = found
    plane_param = _parameterize_conic(sec.conic, p, lvl, F)
    coords = []
    base_k = getattr(F, "k", 0)
    lift = (lambda e: e) if (F is QQ or lvl is F) else (
        lambda e: lvl.embed_from(e, base_k))
    for i in range(cubic.n + 1):
        acc = MultiPoly.zero(lvl, SVARS)
        for k in range(3):
            acc = acc + plane_param[k].scale(lift(plane_basis[k][i]))
        coords.append(acc)
    curve = RationalCurve(lvl, 2, coords)
    return ConicResidual(kind="parameterized", curve=curve, conic=sec.conic,
                         level=getattr(lvl, "k", 1))


def _point_on_conic(C, F, tower, max_level, q_bound):
    if F is QQ or F.char == 0:
        rng = range(-q_bound, q_bound + 1)
        for a in rng:
            for b in rng:
                for c in rng:
                    if (a, b, c) == (0, 0, 0):
                        continue
                    pt = [QQ.from_int(a), QQ.from_int(b), QQ.from_int(c)]
                    if QQ.is_zero(C.eval_elems(pt)):
                        return QQ, pt
        return None
    for k in range(1, max_level + 1):
        if tower is None or k > tower.budget or k % F.k:
            continue
        lvl = tower.level(k)
        Cl = _lift_poly(C, F, lvl)
        for pt in _proj2_points(lvl):
            if lvl.is_zero(Cl.eval_elems(pt)):
                return lvl, pt
    return None


def _parameterize_conic(C, p, lvl, F):
    """Degree-2 binary forms sweeping a smooth conic through its point p.

    The pencil of lines through p meets the conic once more; the second
    intersection Q(d) p - B(p, d) d gives the parameterization.
    """
    Cl = _lift_poly(C, F, lvl)
    basis = [list(p)]
    for i in range(3):
        e = [lvl.zero] * 3
        e[i] = lvl.one
        if linalg.rank(basis + [e], lvl) == len(basis) + 1:
            basis.append(e)
        if len(basis) == 3:
            break
    v, w = basis[1], basis[2]
    d = []
    for k in range(3):
        d.append(MultiPoly(lvl, SVARS, {(1, 0): v[k], (0, 1): w[k]}))
    pd = [dk + MultiPoly.const(lvl, SVARS, pk) for dk, pk in zip(d, p)]
    qd = Cl.eval_polys(d)
    bpd = Cl.eval_polys(pd) - qd  # C(p) = 0 drops out
    out = []
    for k in range(3):
        out.append(qd.scale(p[k]) - bpd * d[k])
    g = binary_gcd([f for f in out if not f.is_zero()])
    if g.degree() > 0:
        out = [f.exact_div(g.rename_vars(SVARS)) if not f.is_zero() else f
               for f in out]
    return out
