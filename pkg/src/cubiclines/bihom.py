"""Exact solving of bihomogeneous equation pairs on P^1 x P^1.

Equations live in the four variables (s0, s1, t0, t1) and are homogeneous
in each pair separately.  Elimination is by the homogeneous Sylvester
resultant in the t-pair with formal bidegrees, so vanishing leading
coefficients (solutions at the points at infinity of either factor) are
handled uniformly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .fields import QQ, upoly_gcd
from .poly import MultiPoly, binary_gcd, binary_roots, resultant

SVARS = ("s0", "s1")
TVARS = ("t0", "t1")
STVARS = SVARS + TVARS


class PositiveDimensionalError(Exception):
    """The solution set contains a curve; counts are undefined."""


def bidegree(G):
    """(s-degree, t-degree) of a bihomogeneous form; raises if mixed."""
    if G.is_zero():
        return (-1, -1)
    degs = {(e[0] + e[1], e[2] + e[3]) for e in G.terms}
    if len(degs) != 1:
        raise ValueError("form is not bihomogeneous")
    return degs.pop()


def diagonal_form(fld):
    """The bidegree (1,1) form s0*t1 - s1*t0 cutting out the diagonal."""
    return MultiPoly(fld, STVARS, {(1, 0, 0, 1): fld.one,
                                   (0, 1, 1, 0): fld.neg(fld.one)})


def divide_diagonal(G, times):
    """Divide by the diagonal form exactly ``times`` times.

    Asserts the claimed order is sharp: one more division must fail.
    """
    delta = diagonal_form(G.field)
    out = G
    for _ in range(times):
        out = out.exact_div(delta)
    if not out.is_zero() and out.divides_exactly(delta) is not None:
        raise ValueError("diagonal vanishing order exceeds %d" % times)
    return out


@dataclass
class BihomSolutions:
    """Common zeros of a bihomogeneous pair, with multiplicities.

    Each solution is (level, (s0, s1), (t0, t1), multiplicity) with both
    points normalized so their last nonzero coordinate is one.
    """

    solutions: list = field(default_factory=list)
    complete: bool = True
    certified: bool = True      # all multiplicities followed the exact rule
    total_degree: int = 0       # bihomogeneous Bezout number

    @property
    def total_multiplicity(self):
        return sum(m for _, _, _, m in self.solutions)


def solve_bihomog(G1, G2, tower, max_level=None, bidegrees=None):
    """All isolated common zeros of two bihomogeneous forms on P^1 x P^1.

    Raises PositiveDimensionalError when the two forms share a component
    (including a whole fiber).  ``bidegrees`` overrides the formal
    bidegrees, needed when leading coefficient forms vanish identically.
    """
    F = G1.field
    if G1.is_zero() or G2.is_zero():
        raise PositiveDimensionalError("an equation vanishes identically")
    if bidegrees is None:
        bidegrees = (bidegree(G1), bidegree(G2))
    (d1s, d1t), (d2s, d2t) = bidegrees
    bezout = d1s * d2t + d2s * d1t
    if d1t == 0 and d2t == 0:
        return _pure_s_case(G1, G2, d1s, d2s)
    if d1s == 0 and d2s == 0:
        sols = solve_bihomog(_swap_st(G1), _swap_st(G2), tower,
                             max_level=max_level,
                             bidegrees=((d1t, d1s), (d2t, d2s)))
        sols.solutions = [(lv, t, s, m) for lv, s, t, m in sols.solutions]
        _sort_solutions(sols, tower, F)
        return sols
    g1d = _dehomog_t(G1)
    g2d = _dehomog_t(G2)
    R = resultant(g1d, g2d, "t0", deg_f=d1t, deg_g=d2t)
    if R.is_zero():
        raise PositiveDimensionalError("equations share a common component")
    rm = binary_roots(R, tower, max_level=max_level, formal_degree=bezout)
    out = BihomSolutions(total_degree=bezout, complete=rm.complete)
    for lv, (a0, a1), mult in rm.roots:
        lvl = tower.level(lv) if tower is not None else QQ
        forms, degs = [], []
        for G, dt in ((G1, d1t), (G2, d2t)):
            spec = _specialize_s(G, a0, a1, lvl, F)
            if not spec.is_zero():
                forms.append(spec)
                degs.append(dt)
        if not forms:
            raise PositiveDimensionalError("a fiber line lies in the zero set")
        g = binary_gcd(forms, degrees=degs)
        frm = binary_roots(g, tower, max_level=max_level)
        out.complete = out.complete and frm.complete
        fr = frm.roots
        if not fr:
            continue
        tot = g.degree()
        for flv, (b0, b1), fm in fr:
            if len(fr) == 1 and frm.complete:
                m = mult
            elif (mult * fm) % tot == 0:
                m = (mult * fm) // tot
            else:
                m = fm
                out.certified = False
            tlvl = tower.level(flv) if tower is not None else QQ
            c0 = tlvl.embed_from(a0, lv) if (tower and flv != lv) else a0
            c1 = tlvl.embed_from(a1, lv) if (tower and flv != lv) else a1
            out.solutions.append((flv, (c0, c1), (b0, b1), m))
    _verify_solutions(out, (G1, G2), tower, F)
    _sort_solutions(out, tower, F)
    return out


def _swap_st(G):
    return MultiPoly(G.field, STVARS,
                     {(e[2], e[3], e[0], e[1]): c for e, c in G.terms.items()})


def _pure_s_case(G1, G2, d1s, d2s):
    """Both equations free of t: any common s-root gives a whole fiber."""
    F = G1.field
    f1 = MultiPoly(F, SVARS, {(e[0], e[1]): c for e, c in G1.terms.items()})
    f2 = MultiPoly(F, SVARS, {(e[0], e[1]): c for e, c in G2.terms.items()})
    g = binary_gcd([f1, f2], degrees=[d1s, d2s])
    if g.degree() > 0:
        raise PositiveDimensionalError("common fiber over a shared s-root")
    return BihomSolutions(total_degree=0)


def _dehomog_t(G):
    """Set t1 = 1, keeping a polynomial in (s0, s1, t0)."""
    F = G.field
    out = {}
    for (e0, e1, e2, e3), c in G.terms.items():
        key = (e0, e1, e2)
        out[key] = F.add(out.get(key, F.zero), c)
    return MultiPoly(F, ("s0", "s1", "t0"), out)


def _specialize_s(G, a0, a1, lvl, F):
    """G(a0, a1; t0, t1) as a binary form over lvl."""
    base_k = getattr(F, "k", 0)
    lift = (lambda e: e) if (F is QQ or lvl is F) else (
        lambda e: lvl.embed_from(e, base_k))
    out = {}
    for (e0, e1, e2, e3), c in G.terms.items():
        v = lift(c)
        for _ in range(e0):
            v = lvl.mul(v, a0)
        for _ in range(e1):
            v = lvl.mul(v, a1)
        if lvl.is_zero(v):
            continue
        key = (e2, e3)
        s = lvl.add(out.get(key, lvl.zero), v)
        if lvl.is_zero(s):
            out.pop(key, None)
        else:
            out[key] = s
    return MultiPoly(lvl, TVARS, out)


def _lift_form(G, tower, lv, F):
    if F is QQ or getattr(F, "k", 0) == lv:
        return G
    lvl = tower.level(lv)
    return G.map_field(lvl, lambda c: lvl.embed_from(c, F.k))


def _verify_solutions(out, eqs, tower, F):
    cache = {}
    for lv, s, t, _m in out.solutions:
        if lv not in cache:
            cache[lv] = [_lift_form(G, tower, lv, F) for G in eqs]
        lvl = tower.level(lv) if tower is not None else QQ
        vals = list(s) + list(t)
        for G in cache[lv]:
            assert lvl.is_zero(G.eval_elems(vals)), "solution fails substitution"


def _sort_solutions(out, tower, F):
    def key(sol):
        lv, s, t, m = sol
        lvl = tower.level(lv) if tower is not None else QQ
        return (lv, tuple(lvl.key(x) for x in s), tuple(lvl.key(x) for x in t))
    out.solutions.sort(key=key)


def point_key(lvl, pt):
    return tuple(lvl.key(x) for x in pt)


def normalize_pair(lvl, pair):
    """Scale a projective pair so its last nonzero coordinate is one."""
    a, b = pair
    if not lvl.is_zero(b):
        inv = lvl.inv(b)
        return (lvl.mul(a, inv), lvl.one)
    inv = lvl.inv(a)
    return (lvl.one, lvl.zero)
