"""Exact ground fields: the rationals and towers of finite fields.

A :class:`FieldTower` holds the prime field GF(p) together with one
extension GF(p^k) for each level k up to a budget K.  Elements are plain
data (an ``int`` at level 1, a coefficient ``tuple`` at higher levels) and
all arithmetic goes through the level object, so elements stay hashable
and cheap to sort.  Defining polynomials are found by seeded search, so
two towers built with the same seed are identical.
"""

from __future__ import annotations

import random
from fractions import Fraction


class BudgetError(Exception):
    """A requested extension level exceeds the tower budget."""


class Rationals:
    """Field interface for exact rational arithmetic (characteristic 0)."""

    char = 0
    level = 1

    def from_int(self, n):
        return Fraction(n)

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / a

    def div(self, a, b):
        return a / self._nonzero(b)

    @staticmethod
    def _nonzero(b):
        if b == 0:
            raise ZeroDivisionError("division by 0")
        return b

    def is_zero(self, a):
        return a == 0

    def key(self, a):
        return a

    def __repr__(self):
        return "QQ"


QQ = Rationals()


# ---------------------------------------------------------------------------
# dense polynomials over GF(p), coefficient lists little-endian
# ---------------------------------------------------------------------------

def _trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul_p(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _poly_mod_p(a, m, p):
    # m monic
    a = list(a)
    dm = len(m) - 1
    while len(a) > dm:
        c = a[-1]
        if c:
            off = len(a) - 1 - dm
            for i in range(dm):
                a[off + i] = (a[off + i] - c * m[i]) % p
        a.pop()
    return _trim(a)


def _poly_powmod_p(base, e, m, p):
    result = [1]
    b = _poly_mod_p(base, m, p)
    while e:
        if e & 1:
            result = _poly_mod_p(_poly_mul_p(result, b, p), m, p)
        e >>= 1
        if e:
            b = _poly_mod_p(_poly_mul_p(b, b, p), m, p)
    return result


def _poly_gcd_p(a, b, p):
    a, b = list(a), list(b)
    while b:
        a = _poly_mod_monic(a, b, p)
        a, b = b, a
    if a:
        lead_inv = pow(a[-1], p - 2, p)
        a = [(c * lead_inv) % p for c in a]
    return a


def _poly_mod_monic(a, b, p):
    # remainder of a by arbitrary nonzero b
    binv = pow(b[-1], p - 2, p)
    bm = [(c * binv) % p for c in b]
    return _poly_mod_p(a, bm, p)


def _is_irreducible_p(f, p):
    """Rabin test for a monic polynomial over GF(p)."""
    k = len(f) - 1
    if k <= 0:
        return False
    x = [0, 1]
    xq = _poly_powmod_p(x, p ** k, f, p)
    if _trim([(a - b) % p for a, b in
              zip(xq + [0] * len(x), x + [0] * len(xq))]) != []:
        return False
    for ell in _prime_divisors(k):
        xe = _poly_powmod_p(x, p ** (k // ell), f, p)
        diff = [(a - b) % p for a, b in
                zip(xe + [0] * len(x), x + [0] * len(xe))]
        if len(_poly_gcd_p(_trim(diff), f, p)) - 1 != 0:
            return False
    return True


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# finite field levels
# ---------------------------------------------------------------------------

class FiniteLevel:
    """The field GF(p^k) inside a :class:`FieldTower`.

    Level 1 elements are ints in [0, p); higher levels use length-k
    coefficient tuples with respect to the defining polynomial.
    """

    def __init__(self, tower, k, modulus):
        self.tower = tower
        self.p = tower.p
        self.k = k
        self.q = tower.p ** k
        self.modulus = modulus  # little-endian int list, monic, len k+1
        self.char = tower.p
        self.level = k

    # -- element construction ------------------------------------------------

    def from_int(self, n):
        n %= self.p
        if self.k == 1:
            return n
        return (n,) + (0,) * (self.k - 1)

    @property
    def zero(self):
        return self.from_int(0)

    @property
    def one(self):
        return self.from_int(1)

    def gen(self):
        if self.k == 1:
            raise ValueError("prime field has no tower generator")
        return (0, 1) + (0,) * (self.k - 2)

    def from_coeffs(self, coeffs):
        c = [x % self.p for x in coeffs]
        if self.k == 1:
            return c[0] if c else 0
        c = c[: self.k] + [0] * max(0, self.k - len(c))
        return tuple(c)

    # -- arithmetic -----------------------------------------------------------

    def add(self, a, b):
        if self.k == 1:
            return (a + b) % self.p
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        if self.k == 1:
            return (a - b) % self.p
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        if self.k == 1:
            return (-a) % self.p
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        if self.k == 1:
            return (a * b) % self.p
        prod = _poly_mul_p(list(a), list(b), self.p)
        prod = _poly_mod_p(prod, self.modulus, self.p)
        return tuple(prod + [0] * (self.k - len(prod)))

    def pow_(self, a, e):
        if e < 0:
            return self.pow_(self.inv(a), -e)
        result = self.one
        b = a
        while e:
            if e & 1:
                result = self.mul(result, b)
            e >>= 1
            if e:
                b = self.mul(b, b)
        return result

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of 0 in GF(%d^%d)" % (self.p, self.k))
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow_(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        if self.k == 1:
            return a == 0
        return all(x == 0 for x in a)

    def key(self, a):
        if self.k == 1:
            return (a,)
        return a

    def frob(self, a, times=1):
        """Frobenius a -> a^(p^times)."""
        t = times % self.k
        if t == 0:
            return a
        return self.pow_(a, self.p ** t)

    # -- subfield structure ----------------------------------------------------

    def embed_from(self, a, j):
        """Embed an element of level j into this level (requires j | k)."""
        if j == self.k:
            return a
        if self.k % j != 0:
            raise ValueError("no embedding of level %d into level %d" % (j, self.k))
        if j == 1:
            return self.from_int(a)
        img = self.tower._gen_image(j, self.k)
        acc = self.zero
        power = self.one
        for c in a:
            if c:
                acc = self.add(acc, self.mul(self.from_int(c), power))
            power = self.mul(power, img)
        return acc

    def min_subfield(self, a):
        """Smallest j | k with a in GF(p^j)."""
        for j in sorted(d for d in range(1, self.k + 1) if self.k % d == 0):
            if self.pow_(a, self.p ** j) == a:
                return j
        return self.k

    def descend(self, a, j):
        """Write an element known to lie in GF(p^j) as a level-j element."""
        if j == self.k:
            return a
        if self.k % j != 0:
            raise ValueError("level %d is not a subfield of level %d" % (j, self.k))
        sol = self.tower._descend_solver(j, self.k)(self._vec(a))
        if sol is None:
            raise ValueError("element does not lie in level %d" % j)
        return self.tower.level(j).from_coeffs(sol)

    def _vec(self, a):
        return [a] if self.k == 1 else list(a)

    def elements(self):
        """Iterate all field elements (used by exhaustive scans)."""
        if self.k == 1:
            yield from range(self.p)
        else:
            idx = [0] * self.k
            while True:
                yield tuple(idx)
                i = 0
                while i < self.k:
                    idx[i] += 1
                    if idx[i] < self.p:
                        break
                    idx[i] = 0
                    i += 1
                else:
                    return

    def __repr__(self):
        return "GF(%d^%d)" % (self.p, self.k) if self.k > 1 else "GF(%d)" % self.p


class FieldTower:
    """GF(p) plus extensions GF(p^k), k <= budget, with compatible embeddings.

    Embeddings exist between levels j | k.  Maps out of the prime field are
    canonical, and for budget <= 6 no two composable proper extensions stack,
    so all embedding diagrams commute by construction.
    """

    def __init__(self, p, budget=6, seed=0):
        if p < 2 or not _is_prime(p):
            raise ValueError("characteristic must be prime, got %r" % (p,))
        self.p = p
        self.budget = budget
        self.seed = seed
        self._levels = {}
        self._gen_images = {}
        self._descend_cache = {}
        self._rng = random.Random("tower:%d:%d" % (p, seed))

    def level(self, k):
        if k < 1:
            raise ValueError("level must be >= 1")
        if k > self.budget:
            raise BudgetError("level %d exceeds tower budget %d" % (k, self.budget))
        if k not in self._levels:
            self._levels[k] = FiniteLevel(self, k, self._defining_poly(k))
        return self._levels[k]

    def _defining_poly(self, k):
        if k == 1:
            return [0, 1]
        rng = random.Random("defpoly:%d:%d:%d" % (self.p, self.seed, k))
        while True:
            coeffs = [rng.randrange(self.p) for _ in range(k)] + [1]
            if _is_irreducible_p(coeffs, self.p):
                return coeffs

    def _gen_image(self, j, k):
        """Canonical image of the level-j generator in level k (j | k, j > 1)."""
        key = (j, k)
        if key not in self._gen_images:
            lk = self.level(k)
            mj = self.level(j).modulus
            f = [lk.from_int(c) for c in mj]
            roots = roots_of_split_poly(f, lk, self._rng)
            self._gen_images[key] = min(roots, key=lk.key)
        return self._gen_images[key]

    def _descend_solver(self, j, k):
        """Linear solver writing level-k vectors in the level-j basis image."""
        key = (j, k)
        if key not in self._descend_cache:
            lk = self.level(k)
            cols = []
            if j == 1:
                cols.append(lk._vec(lk.one))
            else:
                img = self._gen_image(j, k)
                power = lk.one
                for _ in range(j):
                    cols.append(lk._vec(power))
                    power = lk.mul(power, img)
            self._descend_cache[key] = _make_fp_solver(cols, self.p)
        return self._descend_cache[key]

    def __repr__(self):
        return "FieldTower(p=%d, budget=%d, seed=%d)" % (self.p, self.budget, self.seed)


def _make_fp_solver(cols, p):
    """Return a function solving sum_i c_i cols[i] = target over GF(p)."""
    ncols = len(cols)
    nrows = len(cols[0])
    # row-reduce the matrix [cols | I] once
    mat = [[cols[c][r] % p for c in range(ncols)] for r in range(nrows)]

    def solve(target):
        aug = [row[:] + [target[r] % p] for r, row in enumerate(mat)]
        piv_cols = []
        r = 0
        for c in range(ncols):
            piv = next((i for i in range(r, nrows) if aug[i][c]), None)
            if piv is None:
                continue
            aug[r], aug[piv] = aug[piv], aug[r]
            inv = pow(aug[r][c], p - 2, p)
            aug[r] = [(x * inv) % p for x in aug[r]]
            for i in range(nrows):
                if i != r and aug[i][c]:
                    f = aug[i][c]
                    aug[i] = [(x - f * y) % p for x, y in zip(aug[i], aug[r])]
            piv_cols.append(c)
            r += 1
        # consistency
        for i in range(r, nrows):
            if aug[i][ncols]:
                return None
        sol = [0] * ncols
        for row_i, c in enumerate(piv_cols):
            sol[c] = aug[row_i][ncols]
        return sol

    return solve


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# generic dense univariate polynomials over a level (element lists)
# ---------------------------------------------------------------------------

def upoly_trim(f, lvl):
    while f and lvl.is_zero(f[-1]):
        f.pop()
    return f


def upoly_mul(a, b, lvl):
    if not a or not b:
        return []
    out = [lvl.zero] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if not lvl.is_zero(ai):
            for j, bj in enumerate(b):
                out[i + j] = lvl.add(out[i + j], lvl.mul(ai, bj))
    return upoly_trim(out, lvl)


def upoly_divmod(a, b, lvl):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    binv = lvl.inv(b[-1])
    db = len(b) - 1
    quot = [lvl.zero] * max(0, len(a) - db)
    while len(a) - 1 >= db and a:
        c = lvl.mul(a[-1], binv)
        off = len(a) - 1 - db
        if not lvl.is_zero(c):
            quot[off] = c
            for i in range(db + 1):
                a[off + i] = lvl.sub(a[off + i], lvl.mul(c, b[i]))
        a.pop()
    return upoly_trim(quot, lvl), upoly_trim(a, lvl)


def upoly_gcd(a, b, lvl):
    a, b = list(a), list(b)
    while b:
        _, a = upoly_divmod(a, b, lvl)
        a, b = b, a
    if a:
        inv = lvl.inv(a[-1])
        a = [lvl.mul(c, inv) for c in a]
    return a


def upoly_powmod(base, e, m, lvl):
    _, r = upoly_divmod(base, m, lvl)
    result = [lvl.one]
    while e:
        if e & 1:
            _, result = upoly_divmod(upoly_mul(result, r, lvl), m, lvl)
        e >>= 1
        if e:
            _, r = upoly_divmod(upoly_mul(r, r, lvl), m, lvl)
    return result


def roots_of_split_poly(f, lvl, rng):
    """All roots of a monic squarefree polynomial that splits over lvl.

    Cantor-Zassenhaus splitting; requires odd characteristic.
    """
    if lvl.p == 2:
        raise NotImplementedError("root splitting needs odd characteristic")
    f = list(f)
    inv = lvl.inv(f[-1])
    f = [lvl.mul(c, inv) for c in f]
    out = []
    stack = [f]
    while stack:
        g = stack.pop()
        d = len(g) - 1
        if d == 0:
            continue
        if d == 1:
            out.append(lvl.neg(g[0]))
            continue
        while True:
            c = lvl.from_coeffs([rng.randrange(lvl.p) for _ in range(lvl.k)]) \
                if lvl.k > 1 else rng.randrange(lvl.p)
            base = [c, lvl.one]
            h = upoly_powmod(base, (lvl.q - 1) // 2, g, lvl)
            h = list(h)
            if h:
                h[0] = lvl.sub(h[0], lvl.one)
            else:
                h = [lvl.neg(lvl.one)]
            h = upoly_trim(h, lvl)
            w = upoly_gcd(h, g, lvl)
            if 0 < len(w) - 1 < d:
                q, r = upoly_divmod(g, w, lvl)
                assert not r
                stack.append(w)
                stack.append(q)
                break
    return out
