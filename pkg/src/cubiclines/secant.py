"""Secant-line schemes of curves on a cubic hypersurface.

A line through two points of X lies on X iff both mixed polar forms vanish
on the pair, so secants of one curve (or of a pair) are cut out by two
bihomogeneous equations on P^1 x P^1.  Single mode removes the universal
order-2 diagonal vanishing exactly; pair mode excises the coincidence
solutions at common points of the two images.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .bihom import (
    STVARS,
    PositiveDimensionalError,
    divide_diagonal,
    solve_bihomog,
)
from .cubic import ProjLine, ambient_line_from_plane_form, plane_residual
from .curves import curve_meeting_data, validate_curve
from .fields import QQ
from .poly import MultiPoly


def expected_single(e, g=0):
    """Count of secants of a degree-e genus-g curve, with multiplicity."""
    num = 5 * e * (e - 3) + 2 * (6 - 6 * g)
    assert num % 2 == 0
    return num // 2


def expected_pair(e1, e2, r):
    return 5 * e1 * e2 - 6 * r


def expected_line_meeting(e):
    """Pair count when one member is a line through a point of the other."""
    return 5 * e - 5


def _s_forms(curve):
    F = curve.field
    return [MultiPoly(F, STVARS, {(e0, e1, 0, 0): c
                                  for (e0, e1), c in p.terms.items()})
            for p in curve.coords]


def _t_forms(curve):
    F = curve.field
    return [MultiPoly(F, STVARS, {(0, 0, e0, e1): c
                                  for (e0, e1), c in p.terms.items()})
            for p in curve.coords]


@dataclass
class SecantSystem:
    mode: str                   # single | pair
    G1: object
    G2: object
    bidegrees: tuple            # of (G1, G2)
    Gt1: object = None          # single mode: after diagonal division
    Gt2: object = None
    removed_order: int = 0
    residual_bidegrees: tuple = ()


def build_system(cubic, curve_a, curve_b=None):
    """The two mixed-polar equations for secants of one curve or a pair."""
    F = curve_a.field
    if curve_b is not None and curve_b.field is not F:
        raise ValueError("curves must live over the same level")
    X = cubic if cubic.field is F else cubic._over(F)
    sf = _s_forms(curve_a)
    tf = _t_forms(curve_b if curve_b is not None else curve_a)
    G1 = X.P1.eval_polys(sf + tf)
    G2 = X.P2.eval_polys(sf + tf)
    ea = curve_a.e
    eb = curve_b.e if curve_b is not None else ea
    bidegs = ((2 * ea, eb), (ea, 2 * eb))
    if curve_b is not None:
        return SecantSystem(mode="pair", G1=G1, G2=G2, bidegrees=bidegs)
    Gt1 = divide_diagonal(G1, 2)
    Gt2 = divide_diagonal(G2, 2)
    return SecantSystem(mode="single", G1=G1, G2=G2, bidegrees=bidegs,
                        Gt1=Gt1, Gt2=Gt2, removed_order=2,
                        residual_bidegrees=((2 * ea - 2, ea - 2),
                                            (ea - 2, 2 * ea - 2)))


@dataclass
class SecantLine:
    level: int              # minimal definition level of the line
    param_level: int
    s: tuple
    t: tuple
    line: ProjLine
    multiplicity: int
    kind: str               # secant | tangent

    def key(self):
        return (self.level, self.line.key())


@dataclass
class SecantReport:
    mode: str
    expected: int
    outcome: str = "ok"                 # ok | infinitely_many
    lines: list = field(default_factory=list)
    complete: bool = True
    certified: bool = True
    spurious: int = 0
    excised: list = field(default_factory=list)   # (level, point, multiplicity)
    excision_consistent: bool = True

    @property
    def distinct_count(self):
        return len(self.lines)

    @property
    def count_with_multiplicity(self):
        return sum(l.multiplicity for l in self.lines)

    @property
    def levels_used(self):
        return sorted({l.param_level for l in self.lines}
                      | {l.level for l in self.lines})

    @property
    def well_positioned(self):
        return (self.outcome == "ok" and self.complete and self.certified
                and self.distinct_count == self.expected
                and all(l.multiplicity == 1 for l in self.lines))

    def to_json(self):
        return {
            "schema": "secant-report/1",
            "mode": self.mode,
            "outcome": self.outcome,
            "expected": self.expected,
            "distinct_count": self.distinct_count,
            "count_with_multiplicity": self.count_with_multiplicity,
            "well_positioned": self.well_positioned,
            "complete": self.complete,
            "certified": self.certified,
            "spurious": self.spurious,
            "excised": [{"level": lv, "point": _enc_vec(pt),
                         "multiplicity": m} for lv, pt, m in self.excised],
            "excision_consistent": self.excision_consistent,
            "levels_used": self.levels_used,
            "lines": [{
                "level": l.level,
                "param_level": l.param_level,
                "multiplicity": l.multiplicity,
                "kind": l.kind,
                "rows": [_enc_vec(row) for row in l.line.rows],
                "plucker": _enc_vec(l.line.plucker()),
            } for l in self.lines],
        }


def _enc_vec(vec):
    return [list(x) if isinstance(x, tuple) else
            (str(x) if getattr(x, "denominator", 1) != 1 else int(x))
            for x in vec]


# ---------------------------------------------------------------------------
# single mode
# ---------------------------------------------------------------------------

def count_secants_single(cubic, curve, tower=None, max_level=None,
                         validation=None):
    """All secants of one curve, with multiplicity, against N(e, 0)."""
    e = curve.e
    if e < 2:
        raise ValueError("a line has no secant scheme; degree must be >= 2")
    if validation is None:
        validation = validate_curve(cubic, curve, tower, max_level)
    if not validation.valid:
        raise ValueError("curve must validate as birational and node-free")
    system = build_system(cubic, curve)
    report = SecantReport(mode="single", expected=expected_single(e))
    try:
        sols = solve_bihomog(system.Gt1, system.Gt2, tower,
                             max_level=max_level,
                             bidegrees=system.residual_bidegrees)
    except PositiveDimensionalError:
        report.outcome = "infinitely_many"
        return report
    report.complete = sols.complete
    report.certified = sols.certified
    F = curve.field
    off = {}
    for lv, s, t, m in sols.solutions:
        lvl = tower.level(lv) if tower is not None else QQ
        ks = tuple(lvl.key(x) for x in s)
        kt = tuple(lvl.key(x) for x in t)
        if ks == kt:
            _handle_diagonal(report, cubic, curve, tower, lv, s, m)
            continue
        key = (lv, min(ks, kt), max(ks, kt))
        off.setdefault(key, []).append((s, t, m))
    for (lv, _a, _b), entries in sorted(off.items()):
        mults = {m for _s, _t, m in entries}
        if len(entries) != 2 or len(mults) != 1:
            # swap partner missing or mismatched: only from incomplete splits
            report.certified = False
        s, t, m = entries[0]
        lvl = tower.level(lv) if tower is not None else QQ
        a = _curve_point(curve, s, lvl, tower)
        b = _curve_point(curve, t, lvl, tower)
        line = ProjLine(lvl, a, b)
        _assert_secant_line(cubic, line, tower, lv)
        report.lines.append(_finish_line(line, tower, lv, s, t, m, "secant"))
    _sort_report(report)
    return report


def _handle_diagonal(report, cubic, curve, tower, lv, s, m):
    """A diagonal residual solution is kept only as a true tangent secant."""
    lvl = tower.level(lv) if tower is not None else QQ
    rows = curve.tangent_rows_at(list(s), lvl)
    if rows is None:
        report.spurious += m
        return
    line = ProjLine(lvl, rows[0], rows[1])
    X = cubic if (cubic.field is lvl or cubic.field is QQ) else cubic._over(lvl)
    if not X.line_in_x(line):
        report.spurious += m
        return
    if m % 2 == 0:
        mult = m // 2   # the ordered model sees the diagonal doubly
    else:
        mult = m
        report.certified = False
    report.lines.append(_finish_line(line, tower, lv, s, s, mult, "tangent"))


# ---------------------------------------------------------------------------
# pair mode
# ---------------------------------------------------------------------------

def count_secants_pair(cubic, curve1, curve2, tower=None, max_level=None,
                       meeting=None):
    """Secants meeting both curves once each, against 5 e1 e2 - 6 r.

    When one member is a line through a point of the other curve the whole
    fiber over that point degenerates; the fiber's linear factor is divided
    out and the expected count switches to 5 e - 5.
    """
    F = curve1.field
    if curve2.field is not F:
        raise ValueError("curves must live over the same level")
    if meeting is None:
        meeting = curve_meeting_data(curve1, curve2, tower, max_level)
    r = meeting.r
    line_sides = [curve1.e == 1, curve2.e == 1]
    if r > 0 and all(line_sides):
        raise ValueError("two meeting lines span a plane; no secant count")
    system = build_system(cubic, curve1, curve2)
    if r > 0 and any(line_sides):
        return _count_line_meeting(cubic, curve1, curve2, tower, max_level,
                                   meeting, system)
    report = SecantReport(mode="pair",
                          expected=expected_pair(curve1.e, curve2.e, r))
    try:
        sols = solve_bihomog(system.G1, system.G2, tower, max_level=max_level,
                             bidegrees=system.bidegrees)
    except PositiveDimensionalError:
        report.outcome = "infinitely_many"
        return report
    report.complete = sols.complete
    report.certified = sols.certified
    excised = {}
    for lv, s, t, m in sols.solutions:
        lvl = tower.level(lv) if tower is not None else QQ
        a = _curve_point(curve1, s, lvl, tower)
        b = _curve_point(curve2, t, lvl, tower)
        if _proportional(a, b, lvl):
            key = (lv, tuple(lvl.key(x) for x in _normalize(a, lvl)))
            excised[key] = excised.get(key, 0) + m
            continue
        line = ProjLine(lvl, a, b)
        _assert_secant_line(cubic, line, tower, lv)
        report.lines.append(_finish_line(line, tower, lv, s, t, m, "secant"))
    report.excised = [(lv, pt, excised[(lv, pt)]) for lv, pt in sorted(excised)]
    _absorb_second_type(report, cubic, curve1, curve2, meeting, tower,
                        max_level, excised, base_excess=6)
    _sort_report(report)
    return report


def _count_line_meeting(cubic, curve1, curve2, tower, max_level, meeting,
                        system):
    """Pair count when one curve is a line through r >= 1 common points."""
    F = curve1.field
    line_is_first = curve1.e == 1
    e = curve2.e if line_is_first else curve1.e
    report = SecantReport(mode="pair", expected=expected_line_meeting(e))
    G1, G2 = system.G1, system.G2
    (d1s, d1t), (d2s, d2t) = system.bidegrees
    bad_s, bad_t = [], []
    for mp in meeting.points:
        if mp.level != getattr(F, "k", 1):
            raise ValueError("meeting parameters above the curve level "
                             "are not supported in line mode")
        for t in mp.t_params:
            bad_t.append(t)
        for s in mp.s_params:
            bad_s.append(s)
    if line_is_first:
        # the fibers {t = t*} degenerate
        for t in bad_t:
            lam = MultiPoly(F, STVARS, {(0, 0, 1, 0): t[1],
                                        (0, 0, 0, 1): F.neg(t[0])})
            G1 = G1.exact_div(lam)
            G2 = G2.exact_div(lam)
            d1t -= 1
            d2t -= 1
    else:
        for s in bad_s:
            lam = MultiPoly(F, STVARS, {(1, 0, 0, 0): s[1],
                                        (0, 1, 0, 0): F.neg(s[0])})
            G1 = G1.exact_div(lam)
            G2 = G2.exact_div(lam)
            d1s -= 1
            d2s -= 1
    try:
        sols = solve_bihomog(G1, G2, tower, max_level=max_level,
                             bidegrees=((d1s, d1t), (d2s, d2t)))
    except PositiveDimensionalError:
        report.outcome = "infinitely_many"
        return report
    report.complete = sols.complete
    report.certified = sols.certified
    excised = {}
    for lv, s, t, m in sols.solutions:
        lvl = tower.level(lv) if tower is not None else QQ
        if _param_matches(s, bad_s, lvl, tower, F) or \
           _param_matches(t, bad_t, lvl, tower, F):
            a = _curve_point(curve1, s, lvl, tower)
            key = (lv, tuple(lvl.key(x) for x in _normalize(a, lvl)))
            excised[key] = excised.get(key, 0) + m
            continue
        a = _curve_point(curve1, s, lvl, tower)
        b = _curve_point(curve2, t, lvl, tower)
        if _proportional(a, b, lvl):
            key = (lv, tuple(lvl.key(x) for x in _normalize(a, lvl)))
            excised[key] = excised.get(key, 0) + m
            continue
        line = ProjLine(lvl, a, b)
        _assert_secant_line(cubic, line, tower, lv)
        report.lines.append(_finish_line(line, tower, lv, s, t, m, "secant"))
    report.excised = [(lv, pt, excised[(lv, pt)]) for lv, pt in sorted(excised)]
    # after one linear division the Bezout excess at each meeting point is 2,
    # plus the multiplicities of the second-type secants through that point
    _absorb_second_type(report, cubic, curve1, curve2, meeting, tower,
                        max_level, excised, base_excess=2)
    _sort_report(report)
    return report


def _absorb_second_type(report, cubic, curve1, curve2, meeting, tower,
                        max_level, excised, base_excess):
    """Assign the leftover coincidence multiplicity to second-type secants.

    At a common point x of the two images, lines of X through x lying in
    the plane of the two tangent directions count as secants of the pair
    without meeting the images anywhere else; they surface in the ordered
    model only inside the local multiplicity at the coincidence solution.
    """
    consistent = True
    for mp in meeting.points:
        key = (mp.level, tuple(_key_at(mp.level, tower, x) for x in mp.point))
        m_exc = excised.get(key, 0)
        leftover = m_exc - base_excess
        if leftover == 0:
            continue
        if leftover < 0:
            consistent = False
            continue
        cands = _second_type_lines(cubic, curve1, curve2, mp, tower, max_level)
        if not cands:
            consistent = False
            continue
        if leftover % len(cands) == 0:
            each = leftover // len(cands)
        else:
            each = 1
            consistent = False
            report.certified = False
        for lv, line in cands:
            s = tuple(mp.s_params[0])
            t = tuple(mp.t_params[0])
            report.lines.append(_finish_line(line, tower, lv, s, t, each,
                                             "second_type"))
    report.excision_consistent = consistent


def _key_at(lv, tower, x):
    lvl = tower.level(lv) if tower is not None else QQ
    return lvl.key(x)


def _second_type_lines(cubic, curve1, curve2, mp, tower, max_level):
    """Lines of X through a meeting point inside the node plane there."""
    F = curve1.field
    if len(mp.s_params) != 1 or len(mp.t_params) != 1:
        return []
    lvl = (tower.level(mp.level) if tower is not None
           and F is not QQ else QQ if F is QQ else F)
    c1 = curve1 if (F is QQ or F.k == mp.level) else curve1.embed(tower, mp.level)
    c2 = curve2 if (F is QQ or F.k == mp.level) else curve2.embed(tower, mp.level)
    rows1 = c1.tangent_rows_at(list(mp.s_params[0]), lvl)
    rows2 = c2.tangent_rows_at(list(mp.t_params[0]), lvl)
    if rows1 is None or rows2 is None:
        return []
    mat, piv = linalg.rref(rows1 + rows2, lvl)
    if len(piv) != 3:
        return []
    basis = mat[:3]
    X = cubic if (cubic.field is lvl or cubic.field is QQ) else cubic._over(lvl)
    known = None
    for c in (c1, c2):
        if c.e == 1:
            known = ProjLine(lvl, c.point_at([lvl.one, lvl.zero]),
                             c.point_at([lvl.zero, lvl.one]))
    sec = plane_residual(X, basis, known_line=known, tower=tower,
                         max_level=max_level or 2)
    if sec.status != "decomposed":
        return []
    cands = []
    if sec.line_form is not None and known is None:
        cands.append((getattr(lvl, "k", 1), list(sec.line_form)))
    cands.extend(sec.conic_lines)
    out = []
    seen = set()
    for clv, ell in cands:
        l2 = tower.level(clv) if tower is not None else QQ
        line = ambient_line_from_plane_form(basis, ell, l2, X, tower)
        x = list(mp.point) if l2 is lvl else \
            [l2.embed_from(v, mp.level) for v in mp.point]
        if not line.contains(x):
            continue
        if known is not None and clv == mp.level and line == known:
            continue
        k = (clv, line.key())
        if k in seen:
            continue
        seen.add(k)
        out.append((clv, line))
    return out


def _param_matches(p, bads, lvl, tower, F):
    for q in bads:
        if F is QQ:
            if not QQ.is_zero(p[0] * q[1] - p[1] * q[0]):
                continue
            return True
        qq = [lvl.embed_from(x, F.k) for x in q]
        if lvl.is_zero(lvl.sub(lvl.mul(p[0], qq[1]), lvl.mul(p[1], qq[0]))):
            return True
    return False


# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------

def _curve_point(curve, s, lvl, tower):
    F = curve.field
    if lvl is F or F is QQ:
        return [c.eval_elems(list(s)) for c in curve.coords]
    coords = [c.map_field(lvl, lambda x: lvl.embed_from(x, F.k))
              for c in curve.coords]
    return [c.eval_elems(list(s)) for c in coords]


def _proportional(a, b, lvl):
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            d = lvl.sub(lvl.mul(a[i], b[j]), lvl.mul(a[j], b[i]))
            if not lvl.is_zero(d):
                return False
    return True


def _normalize(pt, lvl):
    idx = max(i for i, x in enumerate(pt) if not lvl.is_zero(x))
    inv = lvl.inv(pt[idx])
    return [lvl.mul(x, inv) for x in pt]


def _assert_secant_line(cubic, line, tower, lv):
    X = cubic
    if cubic.field is not line.field and cubic.field is not QQ:
        X = cubic._over(line.field)
    assert X.line_in_x(line), "reported secant is not contained in X"


def _finish_line(line, tower, lv, s, t, mult, kind):
    min_lv = line.min_level()
    if tower is not None and min_lv < lv:
        line = line.descend(tower, min_lv)
    return SecantLine(level=min_lv, param_level=lv, s=tuple(s), t=tuple(t),
                      line=line, multiplicity=mult, kind=kind)


def _sort_report(report):
    report.lines.sort(key=lambda l: (l.level, l.line.key(), l.param_level))


def secant_multiplicity(cubic, target, line, tower=None, max_level=None):
    """Multiplicity of one line in the relevant secant scheme (0 if absent)."""
    if isinstance(target, tuple):
        report = count_secants_pair(cubic, target[0], target[1], tower,
                                    max_level=max_level)
    else:
        report = count_secants_single(cubic, target, tower,
                                      max_level=max_level)
    if report.outcome != "ok":
        raise ValueError("secant scheme is not zero dimensional")
    min_lv = line.min_level()
    probe = line.descend(tower, min_lv) if (tower is not None
                                            and min_lv < line.field.level) \
        else line
    for rec in report.lines:
        if rec.level == min_lv and rec.line.key() == probe.key():
            return rec.multiplicity
    return 0
