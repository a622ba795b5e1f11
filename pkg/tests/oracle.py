"""Brute-force census oracles for secant counts over small finite fields.

The scheme length of (line ∩ curve) is computed directly: the three
hyperplane forms cutting out the line are composed with the
parameterization and their binary gcd (with formal degrees, so the point
at infinity of the parameter line participates) measures the length.
"""

from cubiclines import linalg
from cubiclines.bihom import SVARS
from cubiclines.fano import enumerate_lines
from cubiclines.poly import MultiPoly, binary_gcd


def line_hyperplanes(line):
    """Coefficient vectors of the linear forms vanishing on the line."""
    return linalg.kernel_basis([list(r) for r in line.rows], line.field)


def scheme_length(line, curve):
    """Length of the intersection of a line with a parameterized curve."""
    F = curve.field
    forms = []
    for v in line_hyperplanes(line):
        acc = MultiPoly.zero(F, SVARS)
        for c, phi in zip(v, curve.coords):
            acc = acc + phi.scale(c)
        if not acc.is_zero():
            forms.append(acc)
    if not forms:
        raise ValueError("curve image lies on the line")
    g = binary_gcd(forms, degrees=[curve.e] * len(forms))
    return g.degree()


def level1_census(cubic, tower):
    return enumerate_lines(cubic, tower, level=1, with_second_type=False)


def report_level1_keys(report):
    """Sorted keys of the distinct level-1 lines in a secant report."""
    return sorted({l.line.key() for l in report.lines if l.level == 1})


def oracle_single(census, curve):
    """Level-1 lines meeting one curve with total length at least two."""
    return sorted(l.key() for l in census.lines if scheme_length(l, curve) >= 2)


def oracle_skew_pair(census, line1, line2):
    """Level-1 transversals of two disjoint lines on the hypersurface."""
    out = []
    for l in census.lines:
        if l in (line1, line2):
            continue
        if l.meets(line1) and l.meets(line2):
            out.append(l.key())
    return sorted(out)


def oracle_disjoint_pair(census, curve, line):
    """Level-1 secants of a curve/line pair with disjoint images."""
    out = []
    for l in census.lines:
        if l == line:
            continue
        if l.meets(line) and scheme_length(l, curve) >= 1:
            out.append(l.key())
    return sorted(out)


def oracle_meeting_pair(census, curve, line, meeting_point, tangent_rows):
    """Level-1 secants when the line passes through a point of the curve.

    Lines avoiding the common point must meet both images; lines through
    it count exactly when they lie in the plane spanned by the line and
    the curve's tangent direction there.
    """
    F = line.field
    plane_rows = [list(r) for r in line.rows] + [list(r) for r in tangent_rows]
    x = list(meeting_point)
    out = []
    for l in census.lines:
        if l == line:
            continue
        if l.contains(x):
            stacked = plane_rows + [list(r) for r in l.rows]
            if linalg.rank(stacked, F) == 3:
                out.append(l.key())
        elif l.meets(line) and scheme_length(l, curve) >= 1:
            out.append(l.key())
    return sorted(out)
