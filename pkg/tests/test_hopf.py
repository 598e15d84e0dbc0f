import random

import pytest
from hypothesis import given, settings
from strategies import kg_polys

from sl2check import hopf
from sl2check.gf2m import field
from sl2check.hopf import COACT, GR, KG, KG2, LOW4, PAIRS2
from sl2check.poly import Poly, parse

SHIFT = 64


def P(text, ctx=KG):
    return parse(text, ctx)


def nf(text):
    return hopf.normal_form(P(text))


def straightened(max_degree=4, max_terms=6):
    return kg_polys(max_exp=4, max_terms=max_terms, max_degree=max_degree).map(hopf.normal_form)


def mat_mul(F, g, h):
    a, b, c, d = g
    e, f, x, y = h
    return (F.mul(a, e) ^ F.mul(b, x), F.mul(a, f) ^ F.mul(b, y), F.mul(c, e) ^ F.mul(d, x), F.mul(c, f) ^ F.mul(d, y))


class TestNormalForm:
    def test_examples(self):
        assert nf("a*d") == P("b*c + 1")
        assert nf("a^2*d^2") == P("b^2*c^2 + 1")
        assert nf("b^3") == P("b^3")

    def test_square_of_relation_by_evaluation(self):
        F = field(5)
        rng = random.Random(3)
        lhs, rhs = P("a^2*d^2"), nf("a^2*d^2")
        for _ in range(20):
            pt = dict(zip("abcd", F.random_sl2(rng)))
            assert F.evaluate(lhs, pt) == F.evaluate(rhs, pt)

    def test_basis_count_matches_enumeration(self):
        assert hopf.straightened_count(6) == 140
        assert len(hopf.straightened_basis(6)) == 140
        brute = {
            (i, j, k, l)
            for i in range(7)
            for j in range(7)
            for k in range(7)
            for l in range(7)
            if i + j + k + l <= 6 and min(i, l) == 0
        }
        assert {KG.unpack(m) for m in hopf.straightened_basis(6)} == brute

    @settings(max_examples=200)
    @given(kg_polys(max_exp=3), kg_polys(max_exp=3))
    def test_idempotent_ring_map(self, p, q):
        n = hopf.normal_form
        assert n(n(p)) == n(p)
        assert hopf.is_straightened(n(p))
        assert n(p * q) == n(n(p) * n(q))

    @settings(max_examples=100)
    @given(kg_polys(max_exp=3))
    def test_agrees_with_evaluation(self, p):
        F = field(4)
        rng = random.Random(len(p))
        q = hopf.normal_form(p)
        for _ in range(5):
            pt = dict(zip("abcd", F.random_sl2(rng)))
            assert F.evaluate(p, pt) == F.evaluate(q, pt)


def _triples_left(p):
    out = set()
    for t in hopf.comultiply(p).terms:
        for u in hopf.delta_code(t & LOW4):
            out ^= {(u & LOW4, u >> SHIFT, t >> SHIFT)}
    return out


def _triples_right(p):
    out = set()
    for t in hopf.comultiply(p).terms:
        for u in hopf.delta_code(t >> SHIFT):
            out ^= {(t & LOW4, u & LOW4, u >> SHIFT)}
    return out


class TestHopfAxioms:
    def test_comultiply_generator(self):
        assert hopf.comultiply(P("a")) == P("a*a.2 + b*c.2", KG2)

    @settings(max_examples=120)
    @given(straightened())
    def test_coassociative(self, p):
        assert _triples_left(p) == _triples_right(p)

    @settings(max_examples=120)
    @given(straightened())
    def test_counit(self, p):
        left, right = set(), set()
        for t in hopf.comultiply(p).terms:
            if hopf.counit_code(t & LOW4):
                left ^= {t >> SHIFT}
            if hopf.counit_code(t >> SHIFT):
                right ^= {t & LOW4}
        assert Poly(KG, left) == p == Poly(KG, right)

    def test_counit_examples(self):
        assert hopf.counit(P("a*d")) == 1
        assert hopf.counit(P("b")) == 0
        assert hopf.counit(P("a*b + 1")) == 1
        abc = P("a*b*c")
        left = Poly(KG, {t >> SHIFT for t in hopf.comultiply(abc).terms if hopf.counit_code(t & LOW4)})
        assert left == abc

    @settings(max_examples=120)
    @given(straightened())
    def test_antipode_axiom(self, p):
        total = Poly.zero(KG)
        for t in hopf.comultiply(p).terms:
            total = total + hopf.multiply(hopf.antipode(Poly(KG, {t & LOW4})), Poly(KG, {t >> SHIFT}))
        assert total == Poly.one(KG) * hopf.counit(p)

    def test_antipode_examples(self):
        assert hopf.antipode(P("a*d")) == nf("a*d")
        assert hopf.antipode(P("a")) == P("d")

    @settings(max_examples=120)
    @given(straightened())
    def test_antipode_involutive(self, p):
        assert hopf.antipode(hopf.antipode(p)) == p

    @settings(max_examples=100)
    @given(straightened(max_degree=3, max_terms=4), straightened(max_degree=3, max_terms=4))
    def test_comultiply_is_multiplicative(self, p, q):
        prod = hopf.comultiply(p) * hopf.comultiply(q)
        assert hopf.comultiply(hopf.multiply(p, q)) == Poly(KG2, hopf.straighten_codes(prod.terms, PAIRS2))

    @settings(max_examples=60)
    @given(straightened(max_degree=3))
    def test_comultiply_is_matrix_product(self, p):
        F = field(6)
        rng = random.Random(len(p))
        dp = hopf.comultiply(p)
        for _ in range(5):
            g, h = F.random_sl2(rng), F.random_sl2(rng)
            pt = dict(zip(KG2.names, g + h))
            assert F.evaluate(dp, pt) == F.evaluate(p, dict(zip("abcd", mat_mul(F, g, h))))


class TestCoaction:
    def test_coaction_of_ad(self):
        expected = P("a*b*α*γ + c*d*β*δ + b*c + β*γ + 1", COACT)
        assert hopf.left_coaction(P("a*d")) == expected

    def test_unit(self):
        assert hopf.left_coaction(Poly.one(KG)) == Poly.one(COACT)

    @settings(max_examples=60)
    @given(straightened(max_degree=3))
    def test_left_translation_by_evaluation(self, p):
        F = field(5)
        rng = random.Random(len(p) + 11)
        rho = hopf.left_coaction(p)
        for _ in range(5):
            x, g = F.random_sl2(rng), F.random_sl2(rng)
            pt = dict(zip(COACT.names, x + g))
            assert F.evaluate(rho, pt) == F.evaluate(p, dict(zip("abcd", mat_mul(F, g, x))))

    @settings(max_examples=100)
    @given(straightened())
    def test_degrees_do_not_grow(self, p):
        rho = hopf.left_coaction(p)
        for t in rho.terms:
            assert hopf.degree_code(t & LOW4) <= max(p.degree(), 0)
            assert hopf.degree_code(t >> SHIFT) <= max(p.degree(), 0)


class TestSigma:
    def test_swaps_ad_and_bc(self):
        assert hopf.sigma_translate(P("a*d")) == P("b*c")
        assert hopf.sigma_translate(P("b*c")) == nf("a*d")

    def test_fixes_abcd(self):
        assert hopf.sigma_translate(P("a*b*c*d")) == nf("a*b*c*d")

    @settings(max_examples=100)
    @given(straightened())
    def test_involutions(self, p):
        assert hopf.sigma_translate(hopf.sigma_translate(p)) == p
        assert hopf.sigma_left(hopf.sigma_left(p)) == p


class TestFrobeniusKernel:
    def test_examples(self):
        assert hopf.gr_normal_form(P("d"), 1) == P("a*b*c + a", GR)
        assert hopf.gr_normal_form(P("a^2"), 1) == Poly.one(GR)
        assert hopf.gr_normal_form(hopf.power(P("a*d"), 2), 1) == Poly.one(GR)

    def test_d_times_a_oracle(self):
        da = hopf.gr_normal_form(P("a*d"), 1)
        assert da == hopf.gr_normal_form(P("b*c + 1"), 1) == P("b*c + 1", GR)

    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_dimension(self, r):
        assert len(hopf.gr_basis(r)) == 2 ** (3 * r)

    @pytest.mark.parametrize("r", [1, 2])
    def test_kernel_generators(self, r):
        q = 2**r
        for text in (f"a^{q} + 1", f"b^{q}", f"c^{q}", f"d^{q} + 1"):
            assert hopf.gr_normal_form(P(text), r) == 0

    @settings(max_examples=150)
    @given(straightened(max_degree=5, max_terms=4), straightened(max_degree=5, max_terms=4))
    def test_ring_map(self, p, q):
        for r in (1, 2):
            lhs = hopf.gr_normal_form(hopf.multiply(p, q), r)
            rhs = hopf.gr_normal_form(p, r)
            prod = Poly(GR, ())
            for x in rhs.terms:
                for y in hopf.gr_normal_form(q, r).terms:
                    lifted = hopf.multiply(Poly(KG, {x}), Poly(KG, {y}))
                    prod = prod + hopf.gr_normal_form(lifted, r)
            assert lhs == prod

    def test_invalid_index(self):
        with pytest.raises(ValueError):
            hopf.gr_normal_form(P("a"), 0)
