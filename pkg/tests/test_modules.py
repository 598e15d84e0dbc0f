import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sl2check import hopf
from sl2check.gf2 import Subspace
from sl2check.hopf import KG
from sl2check.modules import (
    G_LEFT,
    N_LEFT,
    N_RIGHT,
    T_LEFT,
    T_RIGHT,
    U_LEFT,
    MembershipError,
    ModuleId,
    SchemeMismatch,
    ambient,
    comodule,
    free_decompose,
    gr_left,
    in_kG_mod_N,
    in_kG_mod_T,
    invariants,
    module_basis,
    non_membership_check,
    separability_check,
)
from sl2check.poly import Poly, parse

M = ModuleId


def P(text):
    return hopf.normal_form(parse(text, KG))


def span(D, *texts):
    return Subspace.span(ambient(D), [P(t) for t in texts])


class TestModuleBasis:
    def test_kU_G(self):
        assert module_basis(M.KU_BACKSLASH_G, 2) == span(2, "1", "c", "d", "c^2", "c*d", "d^2")

    def test_kG_mod_N(self):
        expected = span(4, "1", "a*b", "c*d", "a^2*b^2", "a*b*c*d", "c^2*d^2")
        assert module_basis(M.KG_MOD_N, 4) == expected

    def test_kG_mod_T(self):
        assert module_basis(M.KG_MOD_T, 2) == span(2, "1", "a*b", "a*d", "c*d")

    @pytest.mark.parametrize("D", range(7))
    def test_dimensions(self, D):
        # k[G/N] is polynomial in ab, cd; k[G/T] is free of rank two over it
        n = D // 2
        assert module_basis(M.KG_MOD_N, D).dim == (n + 1) * (n + 2) // 2
        low = (n - 1 + 1) * (n - 1 + 2) // 2 if n >= 1 else 0
        assert module_basis(M.KG_MOD_T, D).dim == module_basis(M.KG_MOD_N, D).dim + low
        assert module_basis(M.KG, D).dim == hopf.straightened_count(D)


class TestInvariants:
    def test_U_invariants_of_kG_mod_T(self):
        assert invariants(M.KG_MOD_T, U_LEFT, 4) == span(4, "1", "c*d", "c^2*d^2")

    def test_G_invariants(self):
        assert invariants(M.KG_MOD_N, G_LEFT, 8) == span(8, "1")
        assert invariants(M.KG_MOD_T, G_LEFT, 6) == span(6, "1")

    def test_first_frobenius_kernel_invariants(self):
        assert invariants(M.KG_MOD_N, gr_left(1), 4) == span(4, "1", "a^2*b^2", "c^2*d^2")

    def test_torus_and_normalizer(self):
        cd = span(4, "1", "c*d", "c^2*d^2")
        assert invariants(M.KU_BACKSLASH_G, T_RIGHT, 4) == cd
        assert invariants(M.KU_BACKSLASH_G, N_RIGHT, 4) == cd
        assert invariants(M.KG_MOD_N, U_LEFT, 4) == cd
        # the left torus scales c and d alike
        assert invariants(M.KU_BACKSLASH_G, T_LEFT, 4) == span(4, "1")
        assert invariants(M.KG_MOD_T, N_LEFT, 4) == invariants(M.KG_MOD_N, N_LEFT, 4)
        assert invariants(M.KG, T_RIGHT, 2) == module_basis(M.KG_MOD_T, 2)
        assert invariants(M.KG, N_RIGHT, 4) == module_basis(M.KG_MOD_N, 4)

    def test_right_scheme_on_quotient_rejected(self):
        with pytest.raises(SchemeMismatch):
            invariants(M.KG_MOD_T, T_RIGHT, 2)
        with pytest.raises(SchemeMismatch):
            comodule(M.KU_BACKSLASH_G, 2)

    @pytest.mark.parametrize("D", range(9))
    def test_U_invariants_of_kG_are_polynomials_in_c_d(self, D):
        cd_monomials = [Poly.monomial(KG, (0, 0, k, l)) for k in range(D + 1) for l in range(D + 1 - k)]
        assert invariants(M.KG, U_LEFT, D) == Subspace.span(ambient(D), cd_monomials)

    @pytest.mark.parametrize("m", [M.KG, M.KG_MOD_T, M.KG_MOD_N])
    def test_truncation_tower(self, m):
        for D in range(5):
            small = invariants(m, U_LEFT, D)
            big = invariants(m, U_LEFT, D + 1)
            assert small.issubset(big)
            assert big.intersection(module_basis(M.KG, D).embed(big.ambient)).dim == small.dim


class TestComodules:
    @pytest.mark.parametrize("m", [M.KG, M.KG_MOD_T, M.KG_MOD_N, M.QUOTIENT])
    @pytest.mark.parametrize("D", [4, 8])
    def test_filtration_stability(self, m, D):
        # building the comodule raises if any coaction term leaves M_{<=D}
        mod = comodule(m, D)
        assert mod.dim > 0

    @pytest.mark.parametrize("m", [M.KG, M.KG_MOD_T, M.KG_MOD_N, M.QUOTIENT])
    def test_counit_recovers_vector(self, m):
        mod = comodule(m, 4)
        for j, row in enumerate(mod.coaction):
            at_identity = 0
            for i, mu in row:
                if hopf.counit_code(mu):
                    at_identity ^= 1 << i
            assert at_identity == 1 << j

    def test_quotient_dimension(self):
        assert comodule(M.QUOTIENT, 6).dim == module_basis(M.KG_MOD_N, 4).dim


class TestFreeDecomposition:
    def test_examples(self):
        d = free_decompose(P("a^2*d^2"))
        assert (d.p, d.q) == (P("a*b*c*d"), P("1"))
        d = free_decompose(P("a*b"))
        assert (d.p, d.q) == (P("a*b"), P("0"))
        d = free_decompose(P("a^4*d^4"))
        assert (d.p, d.q) == (P("a*b*c*d + a^2*b^2*c^2*d^2"), P("1"))

    def test_rejects_elements_outside(self):
        with pytest.raises(MembershipError) as info:
            free_decompose(P("a"))
        assert info.value.residue

    @settings(max_examples=60)
    @given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.booleans()), max_size=5))
    def test_reconstructs(self, terms):
        ab, cd, ad = P("a*b"), P("c*d"), P("a*d")
        f = Poly.zero(KG)
        for i, j, with_ad in terms:
            x = hopf.multiply(hopf.power(ab, i), hopf.power(cd, j))
            f = f + (hopf.multiply(x, ad) if with_ad else x)
        dec = free_decompose(f)
        assert in_kG_mod_N(dec.p) and in_kG_mod_N(dec.q)
        assert hopf.normal_form(dec.p + hopf.multiply(dec.q, ad)) == hopf.normal_form(f)


def test_ring_checks():
    sep = separability_check(4)
    assert sep["passed"] and sep["relation_residue"] == "0" and sep["derivative"] == 1
    nm = non_membership_check(3)
    assert nm["passed"]
    ad = P("a*d")
    assert hopf.normal_form(ad + hopf.power(ad, 2)) == P("a*b*c*d")
    assert hopf.sigma_translate(hopf.power(ad, 2)) == P("b^2*c^2")
    assert hopf.normal_form(ad + hopf.power(ad, 4)) == P("a*b*c*d + a^2*b^2*c^2*d^2")
    assert in_kG_mod_T(ad) and not in_kG_mod_N(ad)
