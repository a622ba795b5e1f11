"""Cubic hypersurfaces X = V(F) in P^n with their mixed polar forms.

The two polar forms are the coefficients in the characteristic-free
expansion F(x + t*y) = F(x) + t*P1(x;y) + t^2*P2(x;y) + t^3*F(y); they
drive the line-containment test, the lines-through-a-point solver and the
secant systems downstream.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import linalg
from .fields import QQ, FieldTower
from .poly import MultiPoly, binary_gcd, resultant, roots_in_tower, to_dense


def xvars(n):
    return tuple("x%d" % i for i in range(n + 1))


def yvars(n):
    return tuple("y%d" % i for i in range(n + 1))


class DegenerateSpanError(ValueError):
    """Two coincident points were asked to span a line."""


class SingularPointError(ValueError):
    """An operation requiring a smooth point was given a singular one."""


class ProjLine:
    """A line in P^n, canonicalized as the RREF of its 2x(n+1) span matrix."""

    __slots__ = ("field", "n", "rows")

    def __init__(self, fld, a, b):
        n = len(a) - 1
        mat, pivots = linalg.rref([list(a), list(b)], fld)
        if len(pivots) != 2:
            raise DegenerateSpanError("points do not span a line")
        self.field = fld
        self.n = n
        self.rows = (tuple(mat[0]), tuple(mat[1]))

    @classmethod
    def _from_rows(cls, fld, rows):
        return cls(fld, rows[0], rows[1])

    def points(self):
        return [list(r) for r in self.rows]

    def plucker(self):
        F = self.field
        a, b = self.rows
        out = []
        for i in range(self.n + 1):
            for j in range(i + 1, self.n + 1):
                out.append(F.sub(F.mul(a[i], b[j]), F.mul(a[j], b[i])))
        return tuple(out)

    def contains(self, pt):
        return linalg.rank(list(self.rows) + [list(pt)], self.field) == 2

    def meets(self, other):
        if self.field is not other.field:
            raise ValueError("lines live over different fields")
        return linalg.rank(list(self.rows) + list(other.rows), self.field) <= 3

    def key(self):
        F = self.field
        return tuple(tuple(F.key(x) for x in row) for row in self.rows)

    def __eq__(self, other):
        return (isinstance(other, ProjLine) and self.field is other.field
                and self.rows == other.rows)

    def __hash__(self):
        return hash(self.rows)

    def min_level(self):
        """Smallest tower level over which this line is defined (finite only)."""
        F = self.field
        if F is QQ or F.char == 0:
            return 1
        j = 1
        for row in self.rows:
            for x in row:
                m = F.min_subfield(x)
                j = j * m // _gcd(j, m)
        return j

    def descend(self, tower, j):
        F = self.field
        if F.k == j:
            return self
        lj = tower.level(j)
        rows = [[F.descend(x, j) for x in row] for row in self.rows]
        return ProjLine(lj, rows[0], rows[1])

    def embed(self, tower, k):
        F = self.field
        if F is QQ:
            raise ValueError("cannot embed a rational line into a tower")
        if F.k == k:
            return self
        lk = tower.level(k)
        rows = [[lk.embed_from(x, F.k) for x in row] for row in self.rows]
        return ProjLine(lk, rows[0], rows[1])

    def __repr__(self):
        return "ProjLine(%r)" % (self.rows,)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


class CubicForm:
    """A homogeneous cubic F with cached polar forms P1 (deg (2,1)) and P2."""

    def __init__(self, fld, n, F):
        if F.is_zero():
            raise ValueError("zero cubic form")
        if any(sum(e) != 3 for e in F.terms):
            raise ValueError("form is not homogeneous of degree 3")
        if n not in (3, 4):
            raise ValueError("ambient dimension n must be 3 or 4")
        self.field = fld
        self.n = n
        self.F = F
        self.char3_flag = (fld.char == 3)
        self.P1, self.P2 = self._polarize()

    def _polarize(self):
        n = self.n
        xv, yv = xvars(n), yvars(n)
        ring_vars = xv + yv + ("lam",)
        fld = self.field
        args = []
        lam = MultiPoly.var(fld, ring_vars, "lam")
        for i in range(n + 1):
            xi = MultiPoly.var(fld, ring_vars, "x%d" % i)
            yi = MultiPoly.var(fld, ring_vars, "y%d" % i)
            args.append(xi + lam * yi)
        big = self.F.eval_polys(args)
        coeffs = big.coeffs_in("lam")
        xy = xv + yv
        P1 = coeffs[1] if len(coeffs) > 1 else MultiPoly.zero(fld, xy)
        P2 = coeffs[2] if len(coeffs) > 2 else MultiPoly.zero(fld, xy)
        return P1, P2

    # -- evaluation -----------------------------------------------------------

    def f_at(self, pt):
        return self.F.eval_elems(list(pt))

    def p1_at(self, a, b):
        return self.P1.eval_elems(list(a) + list(b))

    def p2_at(self, a, b):
        return self.P2.eval_elems(list(a) + list(b))

    def on_x(self, pt):
        return self.field.is_zero(self.f_at(pt))

    def gradient_at(self, pt):
        return [self.F.derivative(v).eval_elems(list(pt)) for v in self.F.vars]

    def is_smooth_point(self, pt):
        if not self.on_x(pt):
            return False
        return not all(self.field.is_zero(g) for g in self.gradient_at(pt))

    # -- lines ------------------------------------------------------------------

    def line_in_x(self, line):
        """F vanishes identically on the line."""
        a, b = line.rows
        F = self.field
        return (F.is_zero(self.f_at(a)) and F.is_zero(self.f_at(b))
                and F.is_zero(self.p1_at(a, b)) and F.is_zero(self.p2_at(a, b)))

    def line_in_x_points(self, a, b, fld=None):
        F = fld or self.field
        Fm = self._over(F)
        return (F.is_zero(Fm.f_at(a)) and F.is_zero(Fm.f_at(b))
                and F.is_zero(Fm.p1_at(a, b)) and F.is_zero(Fm.p2_at(a, b)))

    def _over(self, fld):
        """This cubic with coefficients embedded into another tower level."""
        if fld is self.field:
            return self
        base = self.field
        if base is QQ or fld is QQ:
            raise ValueError("cannot transport between QQ and a finite level")
        conv = lambda c: fld.embed_from(c, base.k)
        key = "_embed_cache"
        cache = getattr(self, key, None)
        if cache is None:
            cache = {}
            setattr(self, key, cache)
        if fld.k not in cache:
            cache[fld.k] = CubicForm(fld, self.n, self.F.map_field(fld, conv))
        return cache[fld.k]


def fermat_cubic(fld, n):
    """sum x_i^3; rejected in characteristic 3 where it is singular."""
    if fld.char == 3:
        raise ValueError("the Fermat cubic is singular in characteristic 3")
    terms = {}
    for i in range(n + 1):
        e = [0] * (n + 1)
        e[i] = 3
        terms[tuple(e)] = 1
    return CubicForm(fld, n, MultiPoly.from_int_terms(fld, xvars(n), terms))


def cubic_from_json(doc, budget=6, seed=0):
    """Build (CubicForm, tower-or-None) from the JSON cubic schema."""
    p = int(doc["p"])
    n = int(doc["n"])
    if p == 0:
        fld, tower = QQ, None
    else:
        tower = FieldTower(p, budget=budget, seed=seed)
        fld = tower.level(1)
    terms = {}
    for mono in doc["monomials"]:
        exps = tuple(int(e) for e in mono["exps"])
        if len(exps) != n + 1:
            raise ValueError("monomial exponent length != n+1")
        terms[exps] = terms.get(exps, 0) + int(mono["coeff"])
    return CubicForm(fld, n, MultiPoly.from_int_terms(fld, xvars(n), terms)), tower


# ---------------------------------------------------------------------------
# lines through a point
# ---------------------------------------------------------------------------

@dataclass
class LinesThroughPoint:
    point: tuple
    eckardt: bool
    directions: list = field(default_factory=list)  # (level, dir pt, mult)
    lines: list = field(default_factory=list)       # ProjLine, aligned
    total_multiplicity: int = 0
    complete: bool = True


def lines_through_point(cubic, x, tower, max_level=None, seed=0):
    """Lines of X through a smooth point x, with multiplicities.

    Solves {P1(x;y)=0, P2(x;y)=0, F(y)=0} in the projective space of
    directions modulo x: the linear condition is substituted first and the
    remaining conic/cubic pair is eliminated by resultants.  A positive
    dimensional solution set is the Eckardt outcome, not an error.
    """
    F = cubic.field
    if not F.is_zero(cubic.f_at(x)):
        raise ValueError("point is not on X")
    grad = cubic.gradient_at(x)
    if all(F.is_zero(g) for g in grad):
        raise SingularPointError("singular point of X")
    n = cubic.n
    # basis of the hyperplane P1(x; .) = 0 containing x
    ker = linalg.kernel_basis([grad], F)
    coords = linalg.solve([[ker[j][i] for j in range(len(ker))]
                           for i in range(n + 1)], list(x), F)
    swap = next(i for i, c in enumerate(coords) if not F.is_zero(c))
    basis = [list(x)] + [k for i, k in enumerate(ker) if i != swap]
    m = len(basis) - 1  # = n - 1 direction coordinates
    cvars = tuple("c%d" % i for i in range(1, m + 1))
    args = []
    for i in range(n + 1):
        acc = MultiPoly.zero(F, cvars)
        for j in range(1, m + 1):
            cj = MultiPoly.var(F, cvars, "c%d" % j)
            acc = acc + cj.scale(basis[j][i])
        args.append(acc)
    # P2(x; y(c)) and F(y(c))
    p2x = _specialize_first(cubic.P2, x, n, F)
    Q = p2x.eval_polys(args)
    K = cubic.F.eval_polys(args)
    res = LinesThroughPoint(point=tuple(x), eckardt=False)
    if Q.is_zero() or K.is_zero():
        res.eckardt = True
        return res
    if m == 2:
        sols = _solve_binary_pair(Q, K, tower, max_level)
    else:
        sols = _solve_conic_cubic(Q, K, F, tower, max_level, seed)
    if sols is None:
        res.eckardt = True
        return res
    roots, complete = sols
    res.complete = complete
    for lv, cpt, mult in roots:
        lvl = tower.level(lv) if tower is not None else QQ
        direction = _direction_point(basis, cpt, F, lvl, tower, n)
        line = ProjLine(lvl, _lift_pt(x, F, lvl, tower), direction)
        res.directions.append((lv, tuple(direction), mult))
        res.lines.append(line)
        res.total_multiplicity += mult
    return res


def _specialize_first(P, x, n, F):
    """P(x; y) with x fixed, as a polynomial in the y variables."""
    yv = yvars(n)
    out = {}
    for exps, c in P.terms.items():
        xe, ye = exps[: n + 1], exps[n + 1:]
        v = c
        for xi, e in zip(x, xe):
            for _ in range(e):
                v = F.mul(v, xi)
        if not F.is_zero(v):
            out[ye] = F.add(out.get(ye, F.zero), v)
    return MultiPoly(F, yv, out)


def _direction_point(basis, cpt, F, lvl, tower, n):
    base_k = getattr(F, "k", 0)
    lift = (lambda e: e) if lvl is F else (
        (lambda e: lvl.embed_from(e, base_k)) if F is not QQ else (lambda e: e))
    out = []
    for i in range(n + 1):
        acc = lvl.zero
        for j, c in enumerate(cpt):
            acc = lvl.add(acc, lvl.mul(c, lift(basis[j + 1][i])))
        out.append(acc)
    return out


def _lift_pt(x, F, lvl, tower):
    if lvl is F:
        return list(x)
    if F is QQ:
        return list(x)
    return [lvl.embed_from(e, F.k) for e in x]


def _solve_binary_pair(Q, K, tower, max_level):
    """Common projective roots of two binary forms (n = 3 case)."""
    g = binary_gcd([Q, K], degrees=[2, 3])
    if g.degree() <= 0:
        return [], True
    from .poly import binary_roots
    rm = binary_roots(g, tower, max_level=max_level)
    return [(lv, pt, m) for lv, pt, m in rm.roots], rm.complete


def _solve_conic_cubic(Q, K, F, tower, max_level, seed):
    """Solve a conic/cubic pair in P^2 exactly; None signals positive dim."""
    cvars = Q.vars
    rng = random.Random("ltp:%d" % seed)
    for attempt in range(24):
        if attempt == 0:
            M = None  # identity
            Qt, Kt = Q, K
        else:
            M = _random_unimodular(F, rng)
            Qt = _apply_change(Q, M, F)
            Kt = _apply_change(K, M, F)
        lcq = _coeff_of_power(Qt, cvars[2], 2)
        lck = _coeff_of_power(Kt, cvars[2], 3)
        if lcq is None or lck is None:
            continue
        R = resultant(Qt, Kt, cvars[2], deg_f=2, deg_g=3)
        if R.is_zero():
            return None
        sols = _fiber_solutions(Qt, Kt, R, F, tower, max_level)
        if sols is None:
            continue
        roots, complete = sols
        if M is not None:
            roots = [(lv, _unapply_change(pt, M, tower, lv, F), m)
                     for lv, pt, m in roots]
        return roots, complete
    raise RuntimeError("no usable coordinate change found")


def _coeff_of_power(P, var, d):
    """Constant coefficient of var^d in P, or None if absent/vanishing."""
    i = P.vars.index(var)
    for exps, c in P.terms.items():
        if exps[i] == d and sum(exps) == d:
            return c
    return None


def _random_unimodular(F, rng):
    p = getattr(F, "p", 0)
    while True:
        if p:
            M = [[F.from_int(rng.randrange(p)) for _ in range(3)] for _ in range(3)]
        else:
            M = [[F.from_int(rng.randrange(-3, 4)) for _ in range(3)] for _ in range(3)]
        if not F.is_zero(_det3(M, F)):
            return M


def _det3(M, F):
    def mul(*xs):
        acc = F.one
        for v in xs:
            acc = F.mul(acc, v)
        return acc
    s = F.zero
    s = F.add(s, mul(M[0][0], M[1][1], M[2][2]))
    s = F.add(s, mul(M[0][1], M[1][2], M[2][0]))
    s = F.add(s, mul(M[0][2], M[1][0], M[2][1]))
    s = F.sub(s, mul(M[0][2], M[1][1], M[2][0]))
    s = F.sub(s, mul(M[0][0], M[1][2], M[2][1]))
    s = F.sub(s, mul(M[0][1], M[1][0], M[2][2]))
    return s


def _apply_change(P, M, F):
    """P(M c) for a 3x3 change of the c-coordinates."""
    cvars = P.vars
    args = []
    for i in range(3):
        acc = MultiPoly.zero(F, cvars)
        for j in range(3):
            acc = acc + MultiPoly.var(F, cvars, cvars[j]).scale(M[i][j])
        args.append(acc)
    return P.eval_polys(args)


def _unapply_change(pt, M, tower, lv, F):
    """Map a solution of the changed system back: c = M c'."""
    lvl = tower.level(lv) if tower is not None else QQ
    base_k = getattr(F, "k", 0)
    lift = (lambda e: e) if (F is QQ or lvl is F) else (
        lambda e: lvl.embed_from(e, base_k))
    out = []
    for i in range(3):
        acc = lvl.zero
        for j in range(3):
            acc = lvl.add(acc, lvl.mul(lift(M[i][j]), pt[j]))
        out.append(acc)
    return tuple(out)


def _specialize_two(P, a1, a2, lvl, F):
    """P(a1, a2, c3) as a univariate polynomial in c3 over lvl."""
    base_k = getattr(F, "k", 0)
    lift = (lambda e: e) if (F is QQ or lvl is F) else (
        lambda e: lvl.embed_from(e, base_k))
    out = {}
    for (e1, e2, e3), c in P.terms.items():
        v = lift(c)
        for _ in range(e1):
            v = lvl.mul(v, a1)
        for _ in range(e2):
            v = lvl.mul(v, a2)
        if not lvl.is_zero(v):
            s = lvl.add(out.get((e3,), lvl.zero), v)
            if lvl.is_zero(s):
                out.pop((e3,), None)
            else:
                out[(e3,)] = s
    return MultiPoly(lvl, (P.vars[2],), out)


def _fiber_solutions(Q, K, R, F, tower, max_level):
    """Roots of R (binary in c1,c2) with fiber c3 values from gcds."""
    from .fields import upoly_gcd
    from .poly import binary_roots
    cvars = Q.vars
    rm = binary_roots(R, tower, max_level=max_level, formal_degree=6)
    out = []
    complete = rm.complete
    for lv, (a1, a2), mult in rm.roots:
        lvl = tower.level(lv) if tower is not None else QQ
        Qs = _specialize_two(Q, a1, a2, lvl, F)
        Ks = _specialize_two(K, a1, a2, lvl, F)
        dq = to_dense(Qs) if not Qs.is_zero() else []
        dk = to_dense(Ks) if not Ks.is_zero() else []
        if dq and dk:
            g = upoly_gcd(dq, dk, lvl)
        else:
            g = dq or dk
        if len(g) - 1 <= 0:
            # resultant root with empty fiber: bad coordinates, retry
            return None
        gpoly = MultiPoly(lvl, (cvars[2],), {(i,): c for i, c in enumerate(g)})
        frm = roots_in_tower(gpoly, tower, max_level=max_level)
        complete = complete and frm.complete
        fr = frm.roots
        if not fr:
            continue
        distinct = len(fr)
        tot = sum(m for _, _, m in fr)
        for flv, beta, fm in fr:
            if distinct == 1 and frm.complete:
                m = mult
            elif (mult * fm) % tot == 0:
                m = (mult * fm) // tot
            else:
                m = fm
            tlvl = tower.level(flv) if tower is not None else QQ
            b1 = tlvl.embed_from(a1, lv) if (tower and flv != lv) else a1
            b2 = tlvl.embed_from(a2, lv) if (tower and flv != lv) else a2
            out.append((flv, (b1, b2, beta), m))
    return out, complete


# ---------------------------------------------------------------------------
# plane sections
# ---------------------------------------------------------------------------

@dataclass
class PlaneSection:
    status: str                 # plane_in_X | decomposed | no_linear_factor
    cubic: object = None        # ternary restriction of F
    line_form: object = None    # linear factor divided out (plane coords)
    conic: object = None        # residual conic (plane coords)
    conic_class: str = ""       # smooth | two_lines | double_line
    conic_lines: list = field(default_factory=list)  # (level, linear form)
    components_degrees: list = field(default_factory=list)


def restrict_to_plane(cubic, plane_basis):
    """F restricted to the plane spanned by three rows, in coords (a,b,c)."""
    F = cubic.field
    pv = ("pa", "pb", "pc")
    args = []
    for i in range(cubic.n + 1):
        acc = MultiPoly.zero(F, pv)
        for j, nm in enumerate(pv):
            acc = acc + MultiPoly.var(F, pv, nm).scale(plane_basis[j][i])
        args.append(acc)
    return cubic.F.eval_polys(args)


def plane_line_form(plane_basis, line, F):
    """Linear form (plane coords) cutting out a line contained in the plane."""
    cols = [[plane_basis[j][i] for j in range(3)] for i in range(len(plane_basis[0]))]
    pts = []
    for row in line.rows:
        sol = linalg.solve(cols, list(row), F)
        if sol is None:
            raise ValueError("line does not lie in the plane")
        pts.append(sol)
    p, q = pts
    ell = [F.sub(F.mul(p[1], q[2]), F.mul(p[2], q[1])),
           F.sub(F.mul(p[2], q[0]), F.mul(p[0], q[2])),
           F.sub(F.mul(p[0], q[1]), F.mul(p[1], q[0]))]
    if all(F.is_zero(e) for e in ell):
        raise ValueError("degenerate line data")
    return ell


def _linear_form_poly(ell, F, pv=("pa", "pb", "pc")):
    return MultiPoly(F, pv, {tuple(1 if i == j else 0 for i in range(3)): c
                             for j, c in enumerate(ell) if not F.is_zero(c)})


def plane_residual(cubic, plane_basis, known_line=None, tower=None, max_level=2):
    """Decompose the plane section of X, dividing out a known line exactly."""
    F = cubic.field
    T = restrict_to_plane(cubic, plane_basis)
    if T.is_zero():
        return PlaneSection(status="plane_in_X")
    sec = PlaneSection(status="decomposed", cubic=T)
    if known_line is not None:
        ell = plane_line_form(plane_basis, known_line, F)
        lf = _linear_form_poly(ell, F)
        conic = T.exact_div(lf)
        sec.line_form = ell
        sec.conic = conic
        cls, lines = classify_conic(conic, F, tower, max_level)
        sec.conic_class = cls
        sec.conic_lines = lines
        sec.components_degrees = [1] + ([1, 1] if cls != "smooth" else [2])
        return sec
    # full linear-factor search over low tower levels
    found = _find_linear_factor(T, F, tower, max_level)
    if found is None:
        sec.status = "no_linear_factor"
        sec.components_degrees = [3]
        return sec
    lvl, lf = found
    Tl = T if lvl is F else T.map_field(lvl, lambda c: lvl.embed_from(c, F.k))
    conic = Tl.exact_div(lf)
    sec.line_form = [lf.terms.get(tuple(1 if i == j else 0 for i in range(3)),
                                  lvl.zero) for j in range(3)]
    sec.conic = conic
    cls, lines = classify_conic(conic, lvl, tower, max_level)
    sec.conic_class = cls
    sec.conic_lines = lines
    sec.components_degrees = [1] + ([1, 1] if cls != "smooth" else [2])
    return sec


def _find_linear_factor(T, F, tower, max_level):
    if F is QQ or F.char == 0:
        return None  # exhaustive factor search is finite-field machinery
    for k in range(1, max_level + 1):
        if tower is None or k > tower.budget:
            break
        if F.k > 1 and k % F.k:
            continue
        lvl = tower.level(k)
        Tl = T if lvl is F else T.map_field(lvl, lambda c: lvl.embed_from(c, F.k))
        for ell in _proj2_points(lvl):
            lf = _linear_form_poly(ell, lvl)
            if Tl.divides_exactly(lf) is not None:
                return lvl, lf
    return None


def _proj2_points(lvl):
    """Canonical representatives of P^2 over a finite level."""
    one, zero = lvl.one, lvl.zero
    yield from ([one, a, b] for a in lvl.elements() for b in lvl.elements())
    yield from ([zero, one, b] for b in lvl.elements())
    yield [zero, zero, one]


def classify_conic(C, F, tower=None, max_level=2):
    """Rank classification of a ternary conic, with split lines if cheap.

    Needs characteristic != 2 for the symmetric matrix criterion.
    """
    if F.char == 2:
        raise NotImplementedError("conic classification needs odd characteristic")
    two = F.from_int(2)
    c = {e: v for e, v in C.terms.items()}
    A = c.get((2, 0, 0), F.zero)
    B = c.get((1, 1, 0), F.zero)
    Cc = c.get((1, 0, 1), F.zero)
    D = c.get((0, 2, 0), F.zero)
    E = c.get((0, 1, 1), F.zero)
    G = c.get((0, 0, 2), F.zero)
    M = [[F.mul(two, A), B, Cc],
         [B, F.mul(two, D), E],
         [Cc, E, F.mul(two, G)]]
    r = linalg.rank(M, F)
    if r == 3:
        return "smooth", []
    if r == 1:
        row = next(row for row in M if any(not F.is_zero(x) for x in row))
        return "double_line", [(getattr(F, "k", 1), list(row))]
    # rank 2: vertex + binary quadratic along a complement
    vertex = linalg.kernel_basis(M, F)[0]
    lines = _split_rank2_conic(C, vertex, F, tower, max_level)
    return "two_lines", lines


def _split_rank2_conic(C, vertex, F, tower, max_level):
    """Two linear factors of a rank-2 conic, possibly over an extension."""
    basis = [vertex]
    for i in range(3):
        e = [F.zero] * 3
        e[i] = F.one
        if linalg.rank(basis + [e], F) == len(basis) + 1:
            basis.append(e)
        if len(basis) == 3:
            break
    pv = C.vars
    args = []
    for i in range(3):
        acc = MultiPoly.zero(F, pv)
        for j in range(3):
            acc = acc + MultiPoly.var(F, pv, pv[j]).scale(basis[j][i])
        args.append(acc)
    Cn = C.eval_polys(args)  # no dependence on first coord
    q = {}
    for (e0, e1, e2), v in Cn.terms.items():
        assert e0 == 0
        q[(e1, e2)] = v
    qf = MultiPoly(F, (pv[1], pv[2]), q)
    from .poly import binary_roots
    rm = binary_roots(qf, tower, max_level=max_level, formal_degree=2)
    out = []
    Minv_cols = [[basis[j][i] for j in range(3)] for i in range(3)]
    for lv, (r0, r1), mult in rm.roots:
        lvl = tower.level(lv) if tower is not None else QQ
        lift = (lambda e: e) if (F is QQ or lv == getattr(F, "k", 0)) else (
            lambda e: lvl.embed_from(e, F.k))
        # factor vanishing at [.:r0:r1] in the new coords: r1*b - r0*c -> pull back
        new_form = [lvl.zero, r1, lvl.neg(r0)]
        orig = _pull_back_form(new_form, basis, lvl, lift, F)
        for _ in range(mult):
            out.append((lv, orig))
    return out


def _pull_back_form(form_new, basis, lvl, lift, F):
    """Linear form in original coords from one in the basis coords."""
    # ell_orig(x) = ell_new(coords of x) ; coords = basis^{-1} x
    rows = [[lift(basis[j][i]) if F is not QQ else basis[j][i]
             for j in range(3)] for i in range(3)]
    inv = _invert3(rows, lvl)
    out = []
    for i in range(3):
        acc = lvl.zero
        for j in range(3):
            acc = lvl.add(acc, lvl.mul(form_new[j], inv[j][i]))
        out.append(acc)
    return out


def _invert3(M, F):
    aug = [list(M[i]) + [F.one if j == i else F.zero for j in range(3)]
           for i in range(3)]
    red, piv = linalg.rref(aug, F)
    if len(piv) != 3:
        raise ValueError("singular matrix")
    return [row[3:] for row in red]


def ambient_line_from_plane_form(plane_basis, ell, lvl, cubic, tower):
    """ProjLine in P^n cut out on the plane by a linear plane-coord form."""
    F = cubic.field
    ker = linalg.kernel_basis([list(ell)], lvl)
    pts = []
    base_k = getattr(F, "k", 0)
    lift = (lambda e: e) if (F is QQ or lvl is F) else (
        lambda e: lvl.embed_from(e, base_k))
    for v in ker[:2]:
        pt = []
        for i in range(cubic.n + 1):
            acc = lvl.zero
            for j in range(3):
                acc = lvl.add(acc, lvl.mul(v[j], lift(plane_basis[j][i])))
            pt.append(acc)
        pts.append(pt)
    return ProjLine(lvl, pts[0], pts[1])


# ---------------------------------------------------------------------------
# smoothness probe
# ---------------------------------------------------------------------------

@dataclass
class SmoothnessCertificate:
    smooth_so_far: bool
    singular_point: tuple | None
    levels_exhausted: list
    samples: int
    conclusive: bool


def smoothness_probe(cubic, tower, max_level=2, sample_budget=2000,
                     exhaust_limit=500_000, seed=0):
    """Search for common zeros of F and its partials over low tower levels.

    Exhaustive wherever the projective point count fits the limit, seeded
    random sampling beyond; the certificate says which was which.
    """
    F = cubic.field
    if F is QQ or F.char == 0:
        raise ValueError("the probe enumerates points; use a finite tower")
    n = cubic.n
    grads = [cubic.F.derivative(v) for v in cubic.F.vars]
    levels_done = []
    samples = 0
    rng = random.Random("smooth:%d" % seed)
    for k in range(1, max_level + 1):
        if k > tower.budget:
            break
        lvl = tower.level(k)
        count = sum(lvl.q ** i for i in range(n + 1))
        cub = cubic._over(lvl)
        gl = [g.map_field(lvl, lambda c, _l=lvl: _l.embed_from(c, F.k))
              if lvl is not F else g for g in grads]
        if count <= exhaust_limit:
            for pt in _proj_points(lvl, n):
                if _is_singular_at(cub, gl, pt, lvl):
                    return SmoothnessCertificate(False, tuple(pt), levels_done,
                                                 samples, True)
            levels_done.append(k)
        else:
            for _ in range(sample_budget):
                pt = [lvl.from_coeffs([rng.randrange(lvl.p)
                                       for _ in range(lvl.k)])
                      if lvl.k > 1 else rng.randrange(lvl.p)
                      for _ in range(n + 1)]
                if all(lvl.is_zero(c) for c in pt):
                    continue
                samples += 1
                if _is_singular_at(cub, gl, pt, lvl):
                    return SmoothnessCertificate(False, tuple(pt), levels_done,
                                                 samples, True)
    conclusive = bool(levels_done) and samples == 0
    return SmoothnessCertificate(True, None, levels_done, samples, conclusive)


def _is_singular_at(cub, grads, pt, lvl):
    if not lvl.is_zero(cub.f_at(pt)):
        return False
    return all(lvl.is_zero(g.eval_elems(list(pt))) for g in grads)


def _proj_points(lvl, n):
    """Canonical representatives of P^n over a finite level."""
    for i in range(n, -1, -1):
        lead = [lvl.zero] * (n - i) + [lvl.one]
        for tail in _tuples(lvl, i):
            yield lead + list(tail)


def _tuples(lvl, m):
    if m == 0:
        yield ()
        return
    for head in _tuples(lvl, m - 1):
        for e in lvl.elements():
            yield head + (e,)
