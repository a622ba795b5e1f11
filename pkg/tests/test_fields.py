import random

import pytest

from cubiclines.fields import (QQ, BudgetError, FieldTower,
                               roots_of_split_poly, upoly_divmod, upoly_gcd,
                               upoly_mul)


def rand_elem(lvl, rng):
    if lvl.k == 1:
        return rng.randrange(lvl.p)
    return lvl.from_coeffs([rng.randrange(lvl.p) for _ in range(lvl.k)])


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_field_axioms_sampled(tower7, k):
    lvl = tower7.level(k)
    rng = random.Random(1000 + k)
    for _ in range(200):
        a, b, c = (rand_elem(lvl, rng) for _ in range(3))
        assert lvl.add(a, lvl.add(b, c)) == lvl.add(lvl.add(a, b), c)
        assert lvl.mul(a, lvl.mul(b, c)) == lvl.mul(lvl.mul(a, b), c)
        assert lvl.add(a, b) == lvl.add(b, a)
        assert lvl.mul(a, b) == lvl.mul(b, a)
        assert lvl.mul(a, lvl.add(b, c)) == lvl.add(lvl.mul(a, b),
                                                    lvl.mul(a, c))
        assert lvl.add(a, lvl.neg(a)) == lvl.zero
        if not lvl.is_zero(a):
            assert lvl.mul(a, lvl.inv(a)) == lvl.one


def test_frobenius_fixes_prime_field(tower7):
    lvl = tower7.level(3)
    for n in range(7):
        e = lvl.from_int(n)
        assert lvl.frob(e) == e


def test_multiplicative_order_divides_group(tower7):
    lvl = tower7.level(2)
    g = lvl.gen()
    acc = lvl.one
    order = None
    for i in range(1, 7 ** 2):
        acc = lvl.mul(acc, g)
        if acc == lvl.one:
            order = i
            break
    assert order is not None and (7 ** 2 - 1) % order == 0


def test_embedding_is_ring_hom(tower7):
    rng = random.Random(7)
    l1, l2 = tower7.level(1), tower7.level(2)
    for _ in range(100):
        a, b = rand_elem(l1, rng), rand_elem(l1, rng)
        ea, eb = l2.embed_from(a, 1), l2.embed_from(b, 1)
        assert l2.add(ea, eb) == l2.embed_from(l1.add(a, b), 1)
        assert l2.mul(ea, eb) == l2.embed_from(l1.mul(a, b), 1)


def test_descend_round_trip(tower7):
    rng = random.Random(17)
    l1, l3 = tower7.level(1), tower7.level(3)
    for _ in range(50):
        a = rand_elem(l1, rng)
        lifted = l3.embed_from(a, 1)
        assert l3.min_subfield(lifted) == 1
        assert l3.descend(lifted, 1) == a


def test_min_subfield_of_generator(tower7):
    l4 = tower7.level(4)
    assert l4.min_subfield(l4.gen()) == 4
    assert l4.min_subfield(l4.from_int(3)) == 1


def test_budget_enforced():
    tw = FieldTower(7, budget=2, seed=0)
    tw.level(2)
    with pytest.raises(BudgetError):
        tw.level(3)


def test_roots_of_split_poly(tower7):
    lvl = tower7.level(2)
    # (x - a)(x - b) for random a != b splits back into {a, b}
    rng = random.Random(3)
    for _ in range(20):
        a, b = rand_elem(lvl, rng), rand_elem(lvl, rng)
        if a == b:
            continue
        poly = upoly_mul([lvl.neg(a), lvl.one], [lvl.neg(b), lvl.one], lvl)
        roots = roots_of_split_poly(poly, lvl, rng)
        assert sorted(map(lvl.key, roots)) == sorted(map(lvl.key, [a, b]))


def test_upoly_divmod_identity(tower7):
    lvl = tower7.level(1)
    rng = random.Random(4)
    for _ in range(50):
        f = [rng.randrange(7) for _ in range(6)]
        g = [rng.randrange(7) for _ in range(3)] + [1]
        q, r = upoly_divmod(f, g, lvl)
        recon = [lvl.add(x, y) for x, y in
                 zip(upoly_mul(q, g, lvl) + [0] * 8, r + [0] * 8)]
        f_pad = f + [0] * (len(recon) - len(f))
        assert all(lvl.is_zero(lvl.sub(x, y))
                   for x, y in zip(recon, f_pad))


def test_rationals_exact():
    a = QQ.from_int(2)
    third = QQ.div(QQ.one, QQ.from_int(3))
    assert QQ.mul(third, QQ.from_int(3)) == QQ.one
    assert QQ.sub(QQ.add(a, third), third) == a
