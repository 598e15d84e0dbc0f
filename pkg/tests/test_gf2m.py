import random

import galois
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sl2check.gf2m import PRIMITIVE, field
from sl2check.hopf import KG
from sl2check.poly import parse


@pytest.mark.parametrize("m", sorted(PRIMITIVE))
def test_arithmetic_matches_galois(m):
    F = field(m)
    ref = galois.GF(2**m, irreducible_poly=PRIMITIVE[m]) if m > 1 else galois.GF(2)
    elems = range(F.order)
    rng = random.Random(m)
    for _ in range(200):
        x, y = rng.choice(elems), rng.choice(elems)
        assert F.mul(x, y) == int(ref(x) * ref(y))
        if x:
            assert F.inv(x) == int(ref(x) ** -1)
            assert F.pow(x, -3) == int(ref(x) ** -3)


@given(st.integers(1, 8), st.integers(0, 2**32))
def test_random_sl2_has_determinant_one(m, seed):
    F = field(m)
    a, b, c, d = F.random_sl2(random.Random(seed))
    assert F.mul(a, d) ^ F.mul(b, c) == 1


def test_evaluate_polynomial():
    F = field(3)
    p = parse("a*d + b*c + 1", KG)
    rng = random.Random(1)
    for _ in range(10):
        point = dict(zip("abcd", F.random_sl2(rng)))
        assert F.evaluate(p, point) == 0


def test_unsupported_degree():
    with pytest.raises(ValueError):
        field(9)
    with pytest.raises(ZeroDivisionError):
        field(2).inv(0)
