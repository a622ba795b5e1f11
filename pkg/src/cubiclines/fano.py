"""Finite-field line geometry on cubic surfaces and threefolds.

Exhaustive enumeration of the lines contained in a cubic hypersurface over
a small finite field, with incidence data; detection of second-type lines
(lines carried doubly by some plane section); the discriminant quintic of
the conic bundle obtained by projecting a threefold from a line; and the
secant-correspondence row attached to a line meeting a curve once.
"""

from __future__ import annotations

import base64
import itertools
import random
from dataclasses import dataclass, field

from . import linalg
from .curves import curve_meeting_data, line_as_curve
from .cubic import ProjLine, lines_through_point
from .fields import QQ, BudgetError
from .poly import MultiPoly
from .secant import count_secants_pair, expected_line_meeting

CANDIDATE_GUARD = 10 ** 8


class DegenerateConfigurationError(ValueError):
    """The chosen line is too special for the requested construction."""


def _line_space_size(q, n):
    """Number of lines in P^n over a field with q elements."""
    return ((q ** (n + 1) - 1) * (q ** n - 1)) // ((q ** 2 - 1) * (q - 1))


@dataclass
class LineCensus:
    """All lines on a cubic hypersurface rational over one field level."""

    level: int
    n: int
    lines: list = field(default_factory=list)
    adjacency: list = field(default_factory=list)   # rows of 0/1
    second_type: list = field(default_factory=list)

    @property
    def count(self):
        return len(self.lines)

    def meet_counts(self):
        return [sum(row) for row in self.adjacency]

    def to_json(self):
        packed = bytearray()
        bits = [b for row in self.adjacency for b in row]
        for i in range(0, len(bits), 8):
            byte = 0
            for j, b in enumerate(bits[i:i + 8]):
                byte |= b << j
            packed.append(byte)
        return {
            "schema": "line-census/1",
            "level": self.level,
            "n": self.n,
            "count": self.count,
            "lines": [[_enc_row(r) for r in l.rows] for l in self.lines],
            "second_type": list(self.second_type),
            "adjacency": base64.b64encode(bytes(packed)).decode("ascii"),
        }


def _enc_row(row):
    return [list(x) if isinstance(x, tuple) else int(x) for x in row]


def _echelon_lines(fld, n):
    """All lines of P^n over fld, as canonical echelon row pairs."""
    elems = list(fld.elements())
    zero, one = fld.zero, fld.one
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            ufree = [c for c in range(i + 1, n + 1) if c != j]
            vfree = list(range(j + 1, n + 1))
            for uvals in itertools.product(elems, repeat=len(ufree)):
                u = [zero] * (n + 1)
                u[i] = one
                for c, v in zip(ufree, uvals):
                    u[c] = v
                for vvals in itertools.product(elems, repeat=len(vfree)):
                    v = [zero] * (n + 1)
                    v[j] = one
                    for c, w in zip(vfree, vvals):
                        v[c] = w
                    yield u, v


def enumerate_lines(cubic, tower, level=1, with_second_type=True):
    """Exhaustive census of the lines on the hypersurface at one level.

    Scans every canonical echelon representative of a line of P^n; refuses
    scans above the candidate guard.
    """
    fld = tower.level(level)
    q = fld.p ** fld.k
    n = cubic.n
    total = _line_space_size(q, n)
    if total > CANDIDATE_GUARD:
        raise BudgetError(
            "line scan needs %d candidates (guard %d)" % (total, CANDIDATE_GUARD))
    X = cubic._over(fld)
    census = LineCensus(level=level, n=n)
    for u, v in _echelon_lines(fld, n):
        if X.line_in_x_points(u, v, fld):
            census.lines.append(ProjLine(fld, u, v))
    census.lines.sort(key=lambda l: l.key())
    m = len(census.lines)
    census.adjacency = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            if census.lines[i].meets(census.lines[j]):
                census.adjacency[i][j] = census.adjacency[j][i] = 1
    if with_second_type:
        census.second_type = [second_type_test(X, l)[0] for l in census.lines]
    else:
        census.second_type = [False] * m
    return census


def _complement_basis(line):
    """Standard basis vectors at the non-pivot columns of the line's rows."""
    fld = line.field
    n = line.n
    pivots = []
    for row in line.rows:
        pivots.append(next(c for c, x in enumerate(row) if not fld.is_zero(x)))
    out = []
    for c in range(n + 1):
        if c not in pivots:
            w = [fld.zero] * (n + 1)
            w[c] = fld.one
            out.append(tuple(w))
    return out


def _restrict_along(cubic, line, comp):
    """F(s*r0 + t*r1 + z*sum u_i w_i) as a polynomial in (s, t, z, u...)."""
    fld = line.field
    X = cubic._over(fld)
    m = len(comp)
    pvars = ("s", "t", "z") + tuple("u%d" % i for i in range(m))
    r0, r1 = line.rows

    def lin(idx):
        terms = {}
        for vi, coeff in (((1, 0, 0) + (0,) * m, r0[idx]),
                          ((0, 1, 0) + (0,) * m, r1[idx])):
            if not fld.is_zero(coeff):
                terms[vi] = coeff
        for i in range(m):
            c = comp[i][idx]
            if not fld.is_zero(c):
                e = [0, 0, 1] + [0] * m
                e[3 + i] = 1
                terms[tuple(e)] = c
        return MultiPoly(fld, pvars, terms)

    coords = [lin(idx) for idx in range(line.n + 1)]
    return X, pvars, X.F.eval_polys(coords)


def _u_part(G, pvars, s_deg, t_deg, z_deg):
    """Coefficient of s^a t^b z^c as a polynomial in the u variables."""
    fld = G.field
    uvars = pvars[3:]
    terms = {}
    for exps, c in G.terms.items():
        if exps[0] == s_deg and exps[1] == t_deg and exps[2] == z_deg:
            terms[exps[3:]] = c
    return MultiPoly(fld, uvars, terms)


def second_type_test(cubic, line):
    """Whether some plane through the line cuts the hypersurface in the
    line doubled plus a residual line; returns (flag, witness plane basis).

    The planes through the line form a projective space of directions u;
    double containment is three conditions linear in u, so the witness is
    a kernel vector of a 3 x (n-1) matrix over the line's own field.
    """
    fld = line.field
    comp = _complement_basis(line)
    X, pvars, G = _restrict_along(cubic, line, comp)
    if any(exps[2] == 0 and not fld.is_zero(c) for exps, c in G.terms.items()):
        raise ValueError("line does not lie on the hypersurface")
    m = len(comp)
    rows = []
    for (sa, tb) in ((2, 0), (1, 1), (0, 2)):
        form = _u_part(G, pvars, sa, tb, 1)
        row = [fld.zero] * m
        for exps, c in form.terms.items():
            i = next(k for k, e in enumerate(exps) if e)
            row[i] = c
        rows.append(row)
    kern = linalg.kernel_basis(rows, fld)
    if not kern:
        return False, None
    u = kern[0]
    direction = [fld.zero] * (line.n + 1)
    for i, ui in enumerate(u):
        for idx in range(line.n + 1):
            direction[idx] = fld.add(direction[idx], fld.mul(ui, comp[i][idx]))
    plane_basis = [list(line.rows[0]), list(line.rows[1]), direction]
    return True, plane_basis


@dataclass
class DiscriminantCurve:
    """Degeneration locus of the conic bundle from projecting along a line."""

    form: MultiPoly          # ternary quintic in the direction coordinates
    level_field: object
    degree: int = 5
    genus: int = 6                   # smooth plane quintic
    double_cover_genus: int = 11     # connected etale double cover
    samples: list = field(default_factory=list)


def discriminant_quintic(cubic, line):
    """Determinant of the fiber conic of the projection from the line.

    The fibers over the P^2 of directions u are conics in coordinates
    (s, t, z); their symmetric matrix has entries of degrees (1,1,2 /
    1,1,2 / 2,2,3) in u, so the determinant is a quintic.
    """
    fld = line.field
    if cubic.n != 4:
        raise ValueError("projection discriminant needs a threefold")
    if fld is not QQ and fld.char == 2:
        raise ValueError("conic matrices need characteristic != 2")
    comp = _complement_basis(line)
    X, pvars, G = _restrict_along(cubic, line, comp)
    if any(exps[2] == 0 and not fld.is_zero(c) for exps, c in G.terms.items()):
        raise ValueError("line does not lie on the hypersurface")
    two = fld.add(fld.one, fld.one)
    alpha = _u_part(G, pvars, 2, 0, 1)
    beta = _u_part(G, pvars, 1, 1, 1)
    gamma = _u_part(G, pvars, 0, 2, 1)
    delta = _u_part(G, pvars, 1, 0, 2)
    eps = _u_part(G, pvars, 0, 1, 2)
    zeta = _u_part(G, pvars, 0, 0, 3)
    a2, g2, z2 = (f.scale(two) for f in (alpha, gamma, zeta))
    det = (a2 * (g2 * z2 - eps * eps)
           - beta * (beta * z2 - eps * delta)
           + delta * (beta * eps - g2 * delta))
    if det.is_zero():
        raise DegenerateConfigurationError(
            "fiber conics degenerate everywhere; the line is special")
    if det.degree() != 5 or {sum(e) for e in det.terms} != {5}:
        raise DegenerateConfigurationError(
            "discriminant is not a quintic; the line is special")
    return DiscriminantCurve(form=det, level_field=fld)


def sample_smoothness(curve, tower, count=20, max_level=3, seed=0):
    """Check the Jacobian criterion at sampled zeros of the discriminant.

    Collects projective zeros level by level until ``count`` are found,
    records (level, point, smooth) per sample, and returns True when every
    sampled zero is a smooth point of the curve.
    """
    base = curve.form.field
    grads = {}
    rng = random.Random(seed)
    curve.samples = []
    for lv in range(base.k, max_level + 1):
        lvl = tower.level(lv)
        form = (curve.form if lv == base.k else
                curve.form.map_field(lvl, lambda c: lvl.embed_from(c, base.k)))
        parts = [form.derivative(v) for v in form.vars]
        pts = [p for p in _proj2_points(lvl)
               if lvl.is_zero(form.eval_elems(list(p)))]
        rng.shuffle(pts)
        for p in pts:
            if len(curve.samples) >= count:
                break
            smooth = any(not lvl.is_zero(d.eval_elems(list(p))) for d in parts)
            curve.samples.append((lv, tuple(p), smooth))
        if len(curve.samples) >= count:
            break
    return bool(curve.samples) and all(s for _, _, s in curve.samples)


def _proj2_points(lvl):
    elems = list(lvl.elements())
    one, zero = lvl.one, lvl.zero
    for a in elems:
        for b in elems:
            yield (a, b, one)
    for a in elems:
        yield (a, one, zero)
    yield (one, zero, zero)


@dataclass
class CorrespondenceRow:
    """One row of the secant correspondence attached to a line on the
    hypersurface meeting a curve transversally at a single point."""

    report: object                  # SecantReport in line-meeting mode
    meeting_level: int
    meeting_point: tuple
    lines_at_point: object          # LinesThroughPoint at the meeting point
    row_total: int
    point_line_multiplicity: int    # total multiplicity of lines through x


def correspondence_row(cubic, curve, line, tower=None, max_level=None):
    """Row total of the secant correspondence for a line meeting a curve.

    Requires a single transversal meeting point; asserts the row total
    with multiplicity equals 5e - 5 and attaches the full census of lines
    through the meeting point.
    """
    line_curve = line_as_curve(line)
    meeting = curve_meeting_data(curve, line_curve, tower, max_level)
    if meeting.r != 1 or not meeting.all_transversal:
        raise ValueError(
            "the line must meet the curve transversally at exactly one point")
    report = count_secants_pair(cubic, curve, line_curve, tower, max_level,
                                meeting=meeting)
    expected = expected_line_meeting(curve.e)
    if report.outcome == "ok":
        assert report.count_with_multiplicity == expected, (
            "row total %d != %d" % (report.count_with_multiplicity, expected))
    mp = meeting.points[0]
    lvl = tower.level(mp.level) if tower is not None else QQ
    X = cubic if cubic.field is lvl else cubic._over(lvl)
    ltp = lines_through_point(X, list(mp.point), tower, max_level=max_level)
    return CorrespondenceRow(
        report=report,
        meeting_level=mp.level,
        meeting_point=tuple(mp.point),
        lines_at_point=ltp,
        row_total=report.count_with_multiplicity,
        point_line_multiplicity=ltp.total_multiplicity,
    )
