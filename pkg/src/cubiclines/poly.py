"""Sparse multivariate polynomials over an exact field, with resultants,
squarefree decomposition and root extraction over a field tower.

No floating point anywhere; elimination is resultant-based (Sylvester
determinants with fraction-free Bareiss reduction) by design.
"""

from __future__ import annotations

import itertools
import random

from .fields import (
    QQ,
    BudgetError,
    FieldTower,
    roots_of_split_poly,
    upoly_divmod,
    upoly_gcd,
    upoly_mul,
    upoly_powmod,
    upoly_trim,
)


class MultiPoly:
    """Sparse polynomial: exponent tuples -> nonzero field elements."""

    __slots__ = ("field", "vars", "terms")

    def __init__(self, field, variables, terms=None):
        self.field = field
        self.vars = tuple(variables)
        self.terms = {}
        if terms:
            for exps, c in terms.items():
                if not field.is_zero(c):
                    self.terms[tuple(exps)] = c

    # -- constructors ----------------------------------------------------------

    @classmethod
    def zero(cls, field, variables):
        return cls(field, variables)

    @classmethod
    def const(cls, field, variables, c):
        return cls(field, variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, field, variables, name):
        i = tuple(variables).index(name)
        e = [0] * len(variables)
        e[i] = 1
        return cls(field, variables, {tuple(e): field.one})

    @classmethod
    def from_int_terms(cls, field, variables, int_terms):
        """Build from {exps: integer} with coefficients reduced into the field."""
        return cls(field, variables,
                   {e: field.from_int(c) for e, c in int_terms.items()})

    # -- basic queries ----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def constant_value(self):
        if self.is_zero():
            return self.field.zero
        (exps, c), = self.terms.items()
        if any(exps):
            raise ValueError("not a constant")
        return c

    def degree(self, name=None):
        if not self.terms:
            return -1
        if name is None:
            return max(sum(e) for e in self.terms)
        i = self.vars.index(name)
        return max(e[i] for e in self.terms)

    def __eq__(self, other):
        return (isinstance(other, MultiPoly) and self.vars == other.vars
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def sort_key(self):
        return tuple(sorted((e, self.field.key(c)) for e, c in self.terms.items()))

    # -- arithmetic --------------------------------------------------------------

    def _check(self, other):
        if self.vars != other.vars:
            raise ValueError("variable mismatch: %r vs %r" % (self.vars, other.vars))

    def __add__(self, other):
        self._check(other)
        F = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = F.add(out.get(e, F.zero), c)
            if F.is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
        return MultiPoly(F, self.vars, out)

    def __neg__(self):
        F = self.field
        return MultiPoly(F, self.vars, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        F = self.field
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = F.add(out.get(e, F.zero), F.mul(c1, c2))
                if F.is_zero(s):
                    out.pop(e, None)
                else:
                    out[e] = s
        return MultiPoly(F, self.vars, out)

    def scale(self, c):
        F = self.field
        if F.is_zero(c):
            return MultiPoly.zero(F, self.vars)
        return MultiPoly(F, self.vars, {e: F.mul(c, v) for e, v in self.terms.items()})

    def pow(self, n):
        out = MultiPoly.const(self.field, self.vars, self.field.one)
        b = self
        while n:
            if n & 1:
                out = out * b
            n >>= 1
            if n:
                b = b * b
        return out

    # -- substitution -------------------------------------------------------------

    def eval_elems(self, values):
        """Evaluate at field elements, one per variable."""
        F = self.field
        acc = F.zero
        for exps, c in self.terms.items():
            t = c
            for v, e in zip(values, exps):
                if e:
                    t = F.mul(t, _elem_pow(F, v, e))
            acc = F.add(acc, t)
        return acc

    def eval_polys(self, args):
        """Substitute a MultiPoly (all over the same field/vars) per variable."""
        F = self.field
        tvars = args[0].vars
        out = MultiPoly.zero(F, tvars)
        pow_cache = [{0: MultiPoly.const(F, tvars, F.one)} for _ in args]
        for exps, c in self.terms.items():
            term = MultiPoly.const(F, tvars, c)
            for i, e in enumerate(exps):
                if e:
                    if e not in pow_cache[i]:
                        pow_cache[i][e] = args[i].pow(e)
                    term = term * pow_cache[i][e]
            out = out + term
        return out

    def map_field(self, new_field, conv):
        """Transport coefficients through conv into another field."""
        out = {}
        for e, c in self.terms.items():
            v = conv(c)
            if not new_field.is_zero(v):
                out[e] = v
        return MultiPoly(new_field, self.vars, out)

    def rename_vars(self, new_vars):
        return MultiPoly(self.field, new_vars, dict(self.terms))

    # -- structure -------------------------------------------------------------

    def coeffs_in(self, name):
        """Coefficients as polynomials in the other variables, by degree in name."""
        i = self.vars.index(name)
        rest = self.vars[: i] + self.vars[i + 1:]
        by_deg = {}
        for exps, c in self.terms.items():
            d = exps[i]
            e2 = exps[: i] + exps[i + 1:]
            by_deg.setdefault(d, {})[e2] = c
        top = max(by_deg) if by_deg else -1
        return [MultiPoly(self.field, rest, by_deg.get(d, {}))
                for d in range(top + 1)]

    def exact_div(self, divisor):
        """Exact division; raises ValueError if the division is not exact."""
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        F = self.field
        rem = dict(self.terms)
        # lex-leading term of divisor
        dlead = max(divisor.terms)
        dc = divisor.terms[dlead]
        dcinv = F.inv(dc)
        out = {}
        while rem:
            lead = max(rem)
            if any(l < d for l, d in zip(lead, dlead)):
                raise ValueError("inexact polynomial division")
            q = tuple(l - d for l, d in zip(lead, dlead))
            c = F.mul(rem[lead], dcinv)
            out[q] = c
            for e2, c2 in divisor.terms.items():
                e = tuple(a + b for a, b in zip(q, e2))
                s = F.sub(rem.get(e, F.zero), F.mul(c, c2))
                if F.is_zero(s):
                    rem.pop(e, None)
                else:
                    rem[e] = s
        return MultiPoly(F, self.vars, out)

    def divides_exactly(self, divisor):
        try:
            return self.exact_div(divisor)
        except ValueError:
            return None

    def derivative(self, name):
        F = self.field
        i = self.vars.index(name)
        out = {}
        for exps, c in self.terms.items():
            e = exps[i]
            if e:
                ne = exps[: i] + (e - 1,) + exps[i + 1:]
                v = F.mul(c, F.from_int(e))
                if not F.is_zero(v):
                    out[ne] = F.add(out.get(ne, F.zero), v) if ne in out else v
        return MultiPoly(F, self.vars, out)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for exps in sorted(self.terms, reverse=True):
            c = self.terms[exps]
            mono = "*".join("%s^%d" % (v, e) if e > 1 else v
                            for v, e in zip(self.vars, exps) if e)
            bits.append("(%s)%s" % (c, "*" + mono if mono else ""))
        return " + ".join(bits)


def _elem_pow(F, v, e):
    out = F.one
    b = v
    while e:
        if e & 1:
            out = F.mul(out, b)
        e >>= 1
        if e:
            b = F.mul(b, b)
    return out


# ---------------------------------------------------------------------------
# resultants
# ---------------------------------------------------------------------------

def resultant(f, g, name, deg_f=None, deg_g=None):
    """Sylvester resultant of f and g eliminating one variable.

    ``deg_f``/``deg_g`` override the formal degrees, which matters for
    (bi)homogeneous inputs whose leading coefficient may vanish at special
    points.  Computed by fraction-free Bareiss elimination, so it stays exact
    over any coefficient ring the entries live in.
    """
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant of a zero polynomial")
    cf = f.coeffs_in(name)
    cg = g.coeffs_in(name)
    m = deg_f if deg_f is not None else len(cf) - 1
    n = deg_g if deg_g is not None else len(cg) - 1
    if m < len(cf) - 1 or n < len(cg) - 1:
        raise ValueError("formal degree below actual degree")
    rest = cf[0].vars if cf else cg[0].vars
    F = f.field
    zero = MultiPoly.zero(F, rest)
    cf = cf + [zero] * (m + 1 - len(cf))
    cg = cg + [zero] * (n + 1 - len(cg))
    size = m + n
    if size == 0:
        return MultiPoly.const(F, rest, F.one)
    if m == 0:
        return cf[0].pow(n)
    if n == 0:
        return cg[0].pow(m)
    rows = []
    for i in range(n):
        row = [zero] * size
        for j, c in enumerate(reversed(cf)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for j, c in enumerate(reversed(cg)):
            row[i + j] = c
        rows.append(row)
    return _bareiss_det(rows, F, rest)


def _bareiss_det(mat, F, variables):
    """Fraction-free determinant of a matrix of MultiPolys."""
    n = len(mat)
    mat = [row[:] for row in mat]
    sign = 1
    prev = MultiPoly.const(F, variables, F.one)
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if not mat[i][k].is_zero()), None)
        if piv is None:
            return MultiPoly.zero(F, variables)
        if piv != k:
            mat[k], mat[piv] = mat[piv], mat[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j]
                mat[i][j] = num.exact_div(prev)
            mat[i][k] = MultiPoly.zero(F, variables)
        prev = mat[k][k]
    det = mat[n - 1][n - 1]
    return -det if sign < 0 else det


# ---------------------------------------------------------------------------
# univariate utilities (MultiPoly in one variable <-> dense element lists)
# ---------------------------------------------------------------------------

def to_dense(f, name=None):
    if len(f.vars) != 1 and name is None:
        raise ValueError("to_dense needs a univariate polynomial")
    name = name or f.vars[0]
    i = f.vars.index(name)
    if any(e for exps in f.terms for j, e in enumerate(exps) if j != i and e):
        raise ValueError("polynomial involves other variables")
    d = f.degree(name)
    out = [f.field.zero] * (d + 1)
    for exps, c in f.terms.items():
        out[exps[i]] = c
    return upoly_trim(out, f.field)


def from_dense(coeffs, field, name="t"):
    return MultiPoly(field, (name,), {(i,): c for i, c in enumerate(coeffs)})


def squarefree_decompose(f, name=None):
    """Squarefree decomposition of a univariate polynomial.

    Returns (unit, [(factor: MultiPoly, multiplicity)]) with monic pairwise
    coprime squarefree factors.  Uses Yun over the rationals and the
    p-th-power refinement in positive characteristic.
    """
    if f.is_zero():
        raise ValueError("squarefree decomposition of zero")
    name = name or f.vars[0]
    F = f.field
    dense = to_dense(f, name)
    unit = dense[-1]
    inv = F.inv(unit)
    dense = [F.mul(c, inv) for c in dense]
    pairs = _sqfree_dense(dense, F)
    merged = {}
    for fac, m in pairs:
        key = tuple(F.key(c) for c in fac)
        if key in merged:
            merged[key] = (fac, merged[key][1] + m)
        else:
            merged[key] = (fac, m)
    out = [(from_dense(fac, F, name).rename_vars(f.vars) if len(f.vars) == 1
            else _lift_univar(fac, f, name), m)
           for fac, m in merged.values()]
    out.sort(key=lambda fm: (len(to_dense(fm[0], name)), fm[0].sort_key()))
    return unit, out


def _lift_univar(dense, template, name):
    i = template.vars.index(name)
    terms = {}
    for d, c in enumerate(dense):
        if not template.field.is_zero(c):
            e = [0] * len(template.vars)
            e[i] = d
            terms[tuple(e)] = c
    return MultiPoly(template.field, template.vars, terms)


def _deriv_dense(f, F):
    return upoly_trim([F.mul(c, F.from_int(i)) for i, c in enumerate(f)][1:], F)


def _sqfree_dense(f, F, mult=1):
    """Monic squarefree factors of a dense monic polynomial."""
    if len(f) - 1 == 0:
        return []
    df = _deriv_dense(f, F)
    if not df:
        # characteristic p: f is a polynomial in x^p
        p = F.char
        if p == 0:
            raise AssertionError("zero derivative in characteristic 0")
        root = _pth_root_dense(f, F)
        return _sqfree_dense(root, F, mult * p)
    out = []
    a = upoly_gcd(f, df, F)
    b, r = upoly_divmod(f, a, F)
    assert not r
    # b = product of squarefree part; walk multiplicities
    i = 1
    while len(b) - 1 > 0:
        c = upoly_gcd(a, b, F)
        fac, r = upoly_divmod(b, c, F)
        assert not r
        if len(fac) - 1 > 0:
            out.append((fac, i * mult))
        a, r = upoly_divmod(a, c, F)
        assert not r
        b = c
        i += 1
    if len(a) - 1 > 0:
        # residual p-th power content
        out.extend(_sqfree_dense(a, F, mult))
    return out


def _pth_root_dense(f, F):
    p = F.char
    out = []
    for i in range(0, len(f), p):
        c = f[i]
        # coefficient p-th root: c^(p^(k-1)) in GF(p^k)
        k = getattr(F, "k", 1)
        out.append(_elem_pow(F, c, p ** (k - 1)) if k > 1 else c)
    for i, c in enumerate(f):
        if i % p and not F.is_zero(c):
            raise AssertionError("not a p-th power despite zero derivative")
    return out


# ---------------------------------------------------------------------------
# roots over a tower
# ---------------------------------------------------------------------------

class RootMultiset:
    """Roots of a univariate polynomial found inside a field tower.

    Each entry is (level, root, multiplicity); ``complete`` says whether the
    polynomial split entirely within the budget, with leftover irreducible
    factor data recorded in ``unsplit``.
    """

    def __init__(self, roots, degree, unsplit=None):
        self.roots = list(roots)
        self.degree = degree
        self.unsplit = list(unsplit or [])

    @property
    def complete(self):
        return not self.unsplit

    @property
    def total_multiplicity(self):
        return sum(m for _, _, m in self.roots)

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)

    def __repr__(self):
        return "RootMultiset(%r, unsplit=%r)" % (self.roots, self.unsplit)


def rational_roots(f, name=None):
    """All rational roots, with multiplicity, of a univariate poly over QQ."""
    from fractions import Fraction
    name = name or f.vars[0]
    dense = to_dense(f, name)
    if not dense:
        raise ValueError("zero polynomial")
    _, factors = squarefree_decompose(f, name)
    roots = []
    unsplit = []
    for fac, m in factors:
        rem = to_dense(fac, name)
        found = []
        while len(rem) > 1 and rem[0] == 0:
            rem = rem[1:]
            found.append(Fraction(0))
        if len(rem) > 1:
            for cand in _rational_candidates(rem):
                while len(rem) > 1 and _dense_eval(rem, cand, QQ) == 0:
                    rem, r = upoly_divmod(rem, [-cand, Fraction(1)], QQ)
                    assert not r
                    found.append(cand)
        for cand in sorted(set(found)):
            roots.append((1, cand, m * found.count(cand)))
        if len(rem) - 1 > 0:
            unsplit.append((len(rem) - 1, 1, m))
    roots.sort(key=lambda t: (t[0], QQ.key(t[1])))
    return RootMultiset(roots, len(dense) - 1, unsplit)


def _rational_candidates(dense):
    from fractions import Fraction
    lcm = 1
    for c in dense:
        lcm = lcm * c.denominator // _gcd_int(lcm, c.denominator)
    ints = [int(c * lcm) for c in dense]
    a0, an = abs(ints[0]), abs(ints[-1])
    for pnum in _divisors(a0):
        for pden in _divisors(an):
            yield Fraction(pnum, pden)
            yield Fraction(-pnum, pden)


def _divisors(n):
    n = abs(n)
    if n == 0:
        return [1]
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)


def _gcd_int(a, b):
    while b:
        a, b = b, a % b
    return a


def _dense_eval(f, x, F):
    acc = F.zero
    for c in reversed(f):
        acc = F.add(F.mul(acc, x), c)
    return acc


def roots_in_tower(f, tower, max_level=None, name=None):
    """All roots of a univariate polynomial within tower levels <= max_level.

    Coefficients may live at any level d; roots of a factor of relative
    degree m are reported at level d*m.  Works over QQ by falling back to
    rational root extraction (no extensions of QQ are modeled).
    """
    if f.field is QQ or getattr(f.field, "char", None) == 0:
        return rational_roots(f, name)
    name = name or f.vars[0]
    K = max_level if max_level is not None else tower.budget
    if K > tower.budget:
        raise BudgetError("max level %d exceeds budget %d" % (K, tower.budget))
    lvl = f.field
    base_level = lvl.level
    dense = to_dense(f, name)
    if not dense:
        raise ValueError("zero polynomial")
    degree = len(dense) - 1
    _, factors = squarefree_decompose(f, name)
    roots = []
    unsplit = []
    rng = random.Random("roots:%d:%d" % (tower.p, tower.seed))
    for fac, m in factors:
        d = to_dense(fac, name)
        for rel_deg, piece in _distinct_degree(d, lvl):
            target = base_level * rel_deg
            if target > K:
                unsplit.append((rel_deg, base_level, m))
                continue
            tgt = tower.level(target)
            lifted = [tgt.embed_from(c, base_level) for c in piece]
            for r in roots_of_split_poly(lifted, tgt, rng):
                roots.append((target, r, m))
    roots.sort(key=lambda t: (t[0], tower.level(t[0]).key(t[1])))
    return RootMultiset(roots, degree, unsplit)


def _distinct_degree(f, lvl):
    """Distinct-degree split of a monic squarefree dense polynomial."""
    out = []
    rem = list(f)
    x = [lvl.zero, lvl.one]
    power = x
    i = 0
    while len(rem) - 1 > 0:
        i += 1
        if 2 * i > len(rem) - 1:
            out.append((len(rem) - 1, rem))
            break
        power = upoly_powmod(power, lvl.q, rem, lvl)
        diff = list(power)
        while len(diff) < 2:
            diff.append(lvl.zero)
        diff[1] = lvl.sub(diff[1], lvl.one)
        diff = upoly_trim(diff, lvl)
        g = upoly_gcd(diff, rem, lvl)
        if len(g) - 1 > 0:
            out.append((i, g))
            rem, r = upoly_divmod(rem, g, lvl)
            assert not r
            _, power = upoly_divmod(power, rem, lvl)
    return out


# ---------------------------------------------------------------------------
# binary (two-variable homogeneous) form helpers
# ---------------------------------------------------------------------------

def binary_roots(form, tower, max_level=None, formal_degree=None):
    """Projective roots [a:1] and possibly [1:0] of a binary form.

    Returns a RootMultiset whose root values are pairs (a, b) of field
    elements normalized so the last nonzero coordinate is 1; the point at
    infinity is ((one, zero)).
    """
    s0, s1 = form.vars
    F = form.field
    d = formal_degree if formal_degree is not None else form.degree()
    dehom = {}
    for (e0, e1), c in form.terms.items():
        dehom[(e0,)] = c
    de = MultiPoly(F, (s0,), dehom)
    finite_deg = de.degree()
    inf_mult = d - finite_deg
    rm = roots_in_tower(de, tower, max_level=max_level, name=s0)
    roots = [(lv, (r, _one_at(tower, F, lv)), m) for lv, r, m in rm.roots]
    if inf_mult > 0:
        lv0 = 1 if (tower is None or F is QQ) else F.k
        roots.insert(0, (lv0, (F.one, F.zero), inf_mult))
    return RootMultiset(roots, d, rm.unsplit)


def _one_at(tower, F, lv):
    if F is QQ or getattr(F, "char", None) == 0:
        return QQ.one
    return tower.level(lv).one


def binary_gcd(forms, degrees=None):
    """Monic gcd of a list of binary forms over a field (projective divisor)."""
    forms = [f for f in forms if not f.is_zero()]
    if not forms:
        raise ValueError("gcd of zero forms")
    F = forms[0].field
    s0, s1 = forms[0].vars
    denses = []
    infs = []
    for i, f in enumerate(forms):
        d = degrees[i] if degrees else f.degree()
        de = to_dense_in(f, s0)
        denses.append(de)
        infs.append(d - (len(de) - 1))
    g = denses[0]
    for d2 in denses[1:]:
        g = upoly_gcd(g, d2, F)
    inf = min(infs)
    # homogenize g to degree len(g)-1 and append s1^inf
    terms = {}
    total = (len(g) - 1) + inf
    for i, c in enumerate(g):
        if not F.is_zero(c):
            terms[(i, total - i)] = c
    return MultiPoly(F, (s0, s1), terms)


def to_dense_in(f, name):
    """Dense coefficient list in one variable of a form (other vars collapse)."""
    i = f.vars.index(name)
    d = f.degree(name)
    F = f.field
    out = [F.zero] * (d + 1)
    for exps, c in f.terms.items():
        out[exps[i]] = F.add(out[exps[i]], c)
    return upoly_trim(out, F)
