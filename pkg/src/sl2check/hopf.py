"""The coordinate Hopf algebra k[SL2] = k[a,b,c,d]/(ad + bc + 1) over GF(2).

Straightened monomials (no monomial divisible by ad) form a basis.  The
rewrite ad -> bc + 1 applied m times to a^i d^l, m = min(i, l), gives the
closed form a^(i-m) d^(l-m) (bc + 1)^m; every produced term has
min(exp a, exp d) = 0, so a single pass per monomial is the normal form and
the rewrite system terminates and is confluent (each rewrite lowers
min(exp a, exp d) by one and the result is independent of the order).
Binomial coefficients mod 2 come from Lucas: C(m, s) is odd iff s is a
submask of m.

Frobenius kernels: in k[G_r] = k[G]/(a^q - 1, b^q, c^q, d^q - 1), q = 2^r,
``a`` is a unit with inverse a^(q-1), so d = a^(q-1) (bc + 1) and the
monomials a^i b^j c^k with i, j, k < q form a basis.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterable

from .poly import FIELD_BITS, Poly, VarContext, xor_accumulate

KG = VarContext(("a", "b", "c", "d"))
KG2 = KG.concat(KG.suffixed(".2"))
ACTING = VarContext(("α", "β", "γ", "δ"), params=frozenset({"α", "β", "γ", "δ"}))
# M-factor (x = a, b, c, d) followed by the acting group copy g = alpha..delta
COACT = KG.concat(ACTING)
GR = VarContext(("a", "b", "c"))

A, B, C, D = (1 << (FIELD_BITS * i) for i in range(4))
BC = B + C
_F = FIELD_BITS
_M = (1 << FIELD_BITS) - 1
LOW4 = (1 << (4 * FIELD_BITS)) - 1
# per-factor (shift of a, shift of d, packed bc) for straightening
PAIRS1 = ((0, 3 * _F, BC),)
PAIRS2 = PAIRS1 + ((4 * _F, 7 * _F, BC << (4 * _F)),)


def submasks(m: int):
    s = m
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & m


@lru_cache(maxsize=1 << 20)
def straighten_code(code: int, pairs: tuple = PAIRS1) -> frozenset[int]:
    """Normal form of one packed monomial as a set of packed monomials."""
    out = {code}
    for sa, sd, bc in pairs:
        nxt = set()
        for m in out:
            ea = (m >> sa) & _M
            ed = (m >> sd) & _M
            k = min(ea, ed)
            if not k:
                nxt ^= {m}
                continue
            base = m - (k << sa) - (k << sd)
            for s in submasks(k):
                nxt ^= {base + s * bc}
        out = nxt
    return frozenset(out)


def straighten_codes(codes: Iterable[int], pairs: tuple = PAIRS1) -> set[int]:
    out: set[int] = set()
    for m in codes:
        out ^= straighten_code(m, pairs)
    return out


def mul_straight(p: Iterable[int], q: Iterable[int], pairs: tuple = PAIRS1) -> frozenset[int]:
    q = tuple(q)
    prod = xor_accumulate([x + y for x in p for y in q])
    return frozenset(straighten_codes(prod, pairs))


def is_straightened(p: Poly) -> bool:
    return all(
        not (p.ctx.exponent(m, "a") and p.ctx.exponent(m, "d")) for m in p.terms
    )


def normal_form(p: Poly) -> Poly:
    """Straightened representative of ``p`` modulo ad + bc + 1."""
    if p.ctx != KG:
        raise ValueError(f"normal_form expects a polynomial in a,b,c,d, got {p.ctx.names}")
    return Poly(KG, straighten_codes(p.terms))


def straightened_basis(max_degree: int) -> list[int]:
    """Packed straightened monomials of degree <= max_degree, ascending graded-lex."""
    out = []
    for n in range(max_degree + 1):
        for j in range(n + 1):
            for k in range(n - j + 1):
                i = n - j - k
                out.append(i * A + j * B + k * C)
                if i:
                    out.append(i * D + j * B + k * C)
    return sorted(out, key=KG.sort_key)


def straightened_count(max_degree: int) -> int:
    """Closed form: a^i b^j c^k plus d^l b^j c^k (l >= 1)."""
    n = max_degree
    return 2 * math.comb(n + 3, 3) - math.comb(n + 2, 2)


def degree_code(code: int) -> int:
    return sum((code >> (_F * i)) & _M for i in range(4))


def _frobenius_codes(codes: Iterable[int]) -> frozenset[int]:
    # squaring a straightened monomial keeps it straightened
    return frozenset(2 * m for m in codes)


def _multiplicative(generators: dict[int, frozenset[int]], pairs: tuple):
    """Extend images of a, b, c, d to a memoized map on straightened monomials."""

    @lru_cache(maxsize=None)
    def image(code: int) -> frozenset[int]:
        if code == 0:
            return frozenset({0})
        exps = [(code >> (_F * i)) & _M for i in range(4)]
        if all(e % 2 == 0 for e in exps):
            return _frobenius_codes(image(_halve(code)))
        for i, e in enumerate(exps):
            if e & 1:
                unit = 1 << (_F * i)
                return mul_straight(image(code - unit), generators[unit], pairs)
        raise AssertionError("unreachable")

    return image


def _halve(code: int) -> int:
    out = 0
    for i in range(4):
        out |= (((code >> (_F * i)) & _M) >> 1) << (_F * i)
    return out


def _codes(text_terms: list[tuple[int, int]], shift: int) -> frozenset[int]:
    # (first-factor unit, second-factor unit) pairs -> packed codes
    return frozenset(x + (y << shift) for x, y in text_terms)


# Delta(a) = a(x)a + b(x)c, ... ; second factor lives in fields 4..7
_DELTA_GEN = {
    A: _codes([(A, A), (B, C)], 4 * _F),
    B: _codes([(A, B), (B, D)], 4 * _F),
    C: _codes([(C, A), (D, C)], 4 * _F),
    D: _codes([(C, B), (D, D)], 4 * _F),
}
_delta_mono = _multiplicative(_DELTA_GEN, PAIRS2)

# rho(f)(x; g) = f(g x): a -> alpha a + beta c, b -> alpha b + beta d,
# c -> gamma a + delta c, d -> gamma b + delta d; M-factor first
_RHO_GEN = {
    A: _codes([(A, A), (C, B)], 4 * _F),
    B: _codes([(B, A), (D, B)], 4 * _F),
    C: _codes([(A, C), (C, D)], 4 * _F),
    D: _codes([(B, C), (D, D)], 4 * _F),
}
coaction_code = _multiplicative(_RHO_GEN, PAIRS2)


def delta_code(code: int) -> frozenset[int]:
    """Comultiplication of one straightened monomial (first factor in fields 0..3)."""
    return _delta_mono(code)


def _linear(fn, codes: Iterable[int]) -> set[int]:
    out: set[int] = set()
    for m in codes:
        out ^= fn(m)
    return out


def comultiply(p: Poly) -> Poly:
    """Delta(p) in k[G] (x) k[G], second factor in variables a.2 .. d.2."""
    p = normal_form(p)
    return Poly(KG2, _linear(delta_code, p.terms))


def left_coaction(p: Poly) -> Poly:
    """rho(p) = p(g x) with x-factor in a..d and acting factor in alpha..delta."""
    p = normal_form(p)
    return Poly(COACT, _linear(coaction_code, p.terms))


def split_tensor(p: Poly) -> dict[int, Poly]:
    """Group a two-factor tensor by its second-factor monomial: {code: first factor}."""
    groups: dict[int, set[int]] = {}
    for m in p.terms:
        groups.setdefault(m >> (4 * _F), set()).add(m & LOW4)
    return {k: Poly(KG, v) for k, v in groups.items()}


def first_factor_map(p: Poly, fn) -> Poly:
    """Apply a linear map on straightened monomials to the first tensor factor."""
    out: set[int] = set()
    for m in p.terms:
        hi = m - (m & LOW4)
        for x in fn(m & LOW4):
            out ^= {x + hi}
    return Poly(p.ctx, out)


def second_factor_map(p: Poly, fn, ctx: VarContext | None = None) -> Poly:
    out: set[int] = set()
    for m in p.terms:
        lo = m & LOW4
        for y in fn(m >> (4 * _F)):
            out ^= {lo + (y << (4 * _F))}
    return Poly(ctx or p.ctx, out)


def counit_code(code: int) -> int:
    """epsilon on a monomial: a, d -> 1, b, c -> 0."""
    return int(((code >> _F) & _M) == 0 and ((code >> (2 * _F)) & _M) == 0)


def counit(p: Poly) -> int:
    p = normal_form(p)
    return sum(counit_code(m) for m in p.terms) & 1


def _substitute_codes(code: int, images: dict[int, frozenset[int]]) -> frozenset[int]:
    out = frozenset({0})
    for i in range(4):
        e = (code >> (_F * i)) & _M
        unit = 1 << (_F * i)
        for _ in range(e):
            out = mul_straight(out, images[unit])
    return out


_ANTIPODE = {A: frozenset({D}), B: frozenset({B}), C: frozenset({C}), D: frozenset({A})}
_SIGMA_RIGHT = {A: frozenset({B}), B: frozenset({A}), C: frozenset({D}), D: frozenset({C})}
_SIGMA_LEFT = {A: frozenset({C}), B: frozenset({D}), C: frozenset({A}), D: frozenset({B})}


@lru_cache(maxsize=None)
def antipode_code(code: int) -> frozenset[int]:
    return _substitute_codes(code, _ANTIPODE)


@lru_cache(maxsize=None)
def sigma_right_code(code: int) -> frozenset[int]:
    return _substitute_codes(code, _SIGMA_RIGHT)


@lru_cache(maxsize=None)
def sigma_left_code(code: int) -> frozenset[int]:
    return _substitute_codes(code, _SIGMA_LEFT)


def antipode(p: Poly) -> Poly:
    """S(a) = d, S(b) = b, S(c) = c, S(d) = a (inverse matrix, no signs in char 2)."""
    return Poly(KG, _linear(antipode_code, normal_form(p).terms))


def sigma_translate(p: Poly) -> Poly:
    """Right translation by sigma = [[0, 1], [1, 0]]: a <-> b, c <-> d."""
    return Poly(KG, _linear(sigma_right_code, normal_form(p).terms))


def sigma_left(p: Poly) -> Poly:
    """Left translation by sigma: a <-> c, b <-> d."""
    return Poly(KG, _linear(sigma_left_code, normal_form(p).terms))


def multiply(p: Poly, q: Poly) -> Poly:
    """Product in k[G]."""
    return Poly(KG, mul_straight(normal_form(p).terms, normal_form(q).terms))


def power(p: Poly, n: int) -> Poly:
    result = Poly.one(KG)
    base = normal_form(p)
    while n:
        if n & 1:
            result = multiply(result, base)
        n >>= 1
        if n:
            base = Poly(KG, _frobenius_codes(base.terms))
    return result


@lru_cache(maxsize=None)
def gr_code(code: int, r: int) -> frozenset[int]:
    """Image of a straightened monomial in k[G_r] (codes with d-exponent 0)."""
    if r < 1:
        raise ValueError("Frobenius kernel index r must be >= 1")
    q = 1 << r
    i, j, k, l = ((code >> (_F * n)) & _M for n in range(4))
    if l == 0:
        if j >= q or k >= q:
            return frozenset()
        return frozenset({(i % q) * A + j * B + k * C})
    # d^l = a^(l(q-1)) (bc + 1)^l
    ia = (i + l * (q - 1)) % q
    out = set()
    for s in submasks(l):
        if j + s < q and k + s < q:
            out ^= {ia * A + (j + s) * B + (k + s) * C}
    return frozenset(out)


def gr_normal_form(p: Poly, r: int) -> Poly:
    """Image of ``p`` in the Frobenius kernel algebra k[G_r], as a polynomial in a, b, c."""
    if r < 1:
        raise ValueError("Frobenius kernel index r must be >= 1")
    p = normal_form(p)
    return Poly(GR, _linear(lambda m: gr_code(m, r), p.terms))


def gr_basis(r: int) -> list[int]:
    q = 1 << r
    codes = [i * A + j * B + k * C for i in range(q) for j in range(q) for k in range(q)]
    return sorted(codes, key=KG.sort_key)


@lru_cache(maxsize=None)
def gr_delta_code(code: int, r: int) -> frozenset[int]:
    """Comultiplication on k[G_r], computed through a lift to k[G]."""
    out: set[int] = set()
    for m in delta_code(code):
        lo = gr_code(m & LOW4, r)
        if not lo:
            continue
        hi = gr_code(m >> (4 * _F), r)
        for x in lo:
            for y in hi:
                out ^= {x + (y << (4 * _F))}
    return frozenset(out)
