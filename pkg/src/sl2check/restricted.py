"""Cohomology of the first Frobenius kernel via the restricted enveloping algebra.

In characteristic 2, u = u(sl2) has PBW basis e^i f^j h^k (i, j, k in {0, 1})
with e^2 = f^2 = 0, h^2 = h, h central and fe = ef + h.  A comodule for the
first Frobenius kernel is the same thing as a u-module; here the action is
obtained from the derivations

    e -> c d/da + d d/db,   f -> a d/dc + b d/dd,   h -> degree mod 2,

(the infinitesimal left translations), without touching any coproduct
table.  Ext_u(k, M) is computed from the normalized bar complex
Hom(ubar^{(x) n}, M).  This is an independent route to H^*(G_1, M).
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from . import hopf
from .gf2 import Echelon, bits
from .hopf import KG
from .modules import TruncatedComodule
from .poly import Poly

# PBW basis element = (i, j, k) exponents of e, f, h
BASIS = tuple(product((0, 1), repeat=3))
UNIT = (0, 0, 0)
AUG = tuple(b for b in BASIS if b != UNIT)


@lru_cache(maxsize=None)
def _normal_order(word: str) -> frozenset[str]:
    """Rewrite a word in e, f, h to a GF(2) sum of ordered words e^i f^j h^k."""
    for pos in range(len(word) - 1):
        pair = word[pos : pos + 2]
        head, tail = word[:pos], word[pos + 2 :]
        if pair in ("ee", "ff"):
            return frozenset()
        if pair == "hh":
            return _normal_order(head + "h" + tail)
        if pair in ("he", "hf"):
            return _normal_order(head + pair[::-1] + tail)
        if pair == "fe":
            return _normal_order(head + "ef" + tail) ^ _normal_order(head + "h" + tail)
    return frozenset({word})


def _word(b: tuple[int, int, int]) -> str:
    return "e" * b[0] + "f" * b[1] + "h" * b[2]


def _parse_word(w: str) -> tuple[int, int, int]:
    return (w.count("e"), w.count("f"), w.count("h"))


@lru_cache(maxsize=None)
def u_product(x: tuple, y: tuple) -> frozenset[tuple]:
    return frozenset(_parse_word(w) for w in _normal_order(_word(x) + _word(y)))


def _derivation(p: Poly, pairs: tuple[tuple[str, str], ...]) -> Poly:
    """sum over (target, var) of target * d/dvar, on a polynomial in a..d."""
    out: set[int] = set()
    for m in p.terms:
        exps = KG.unpack(m)
        for target, var in pairs:
            i = KG.index(var)
            if exps[i] % 2 == 0:
                continue
            new = list(exps)
            new[i] -= 1
            new[KG.index(target)] += 1
            out ^= {KG.pack(new)}
    return hopf.normal_form(Poly(KG, out))


_GENERATORS = {
    "e": (("c", "a"), ("d", "b")),
    "f": (("a", "c"), ("b", "d")),
}


def action_matrices(mod: TruncatedComodule) -> dict[str, list[int]]:
    """Columns: action[x][j] = bitset of coordinates of x . e_j."""
    out: dict[str, list[int]] = {"e": [], "f": [], "h": []}
    for j, v in enumerate(mod.reps):
        p = mod.ambient.poly(v)
        for x, pairs in _GENERATORS.items():
            image = _derivation(p, pairs)
            out[x].append(mod.coordinates_at(j, mod.ambient.vector(image)) if image else 0)
        deg = {KG.degree(m) % 2 for m in p.terms}
        if len(deg) > 1:
            raise ValueError("representative is not homogeneous mod 2")
        hv = v if deg.pop() else 0
        out["h"].append(mod.coordinates_at(j, hv) if hv else 0)
    return out


def _apply_word(action: dict[str, list[int]], b: tuple, vec: int) -> int:
    # e^i f^j h^k . v  (rightmost letter acts first)
    for letter in reversed(_word(b)):
        cols = action[letter]
        out = 0
        for j in bits(vec):
            out ^= cols[j]
        vec = out
    return vec


def bar_cohomology(action: dict[str, list[int]], dim: int, n_max: int) -> list[int]:
    """dim Ext^n_u(k, M) for n <= n_max from the normalized bar complex.

    A cochain phi in Hom(ubar^{(x) n}, M) is indexed by (tuple of AUG indices, basis vector of M).
    (d phi)(x1..x_{n+1}) = x1 phi(x2..) + sum_i phi(.. x_i x_{i+1} ..)   (epsilon(x_{n+1}) = 0)
    """
    na = len(AUG)
    aug_index = {b: i for i, b in enumerate(AUG)}
    products = [[[aug_index[z] for z in u_product(x, y)] for y in AUG] for x in AUG]
    mult = {b: [_apply_word(action, b, 1 << j) for j in range(dim)] for b in AUG}

    def cell(args: tuple[int, ...], j: int, n: int) -> int:
        code = 0
        for a in args:
            code = code * na + a
        return code * dim + j

    def differential_matrix(n: int) -> list[int]:
        # rows: basis cochains delta_{(args, j)} of degree n, as vectors in degree n+1
        rows = []
        for args in product(range(na), repeat=n):
            for j in range(dim):
                vec = 0
                # term x1 . phi(x2 .. x_{n+1}): nonzero on (x1, args) with coefficient x1 . e_j
                for x1 in range(na):
                    for i in bits(mult[AUG[x1]][j]):
                        vec ^= 1 << cell((x1,) + args, i, n + 1)
                # phi(.. x_i x_{i+1} ..) = delta(args) when the product contains args[p]
                for p in range(n):
                    for x in range(na):
                        for y in range(na):
                            if args[p] in products[x][y]:
                                vec ^= 1 << cell(args[:p] + (x, y) + args[p + 1 :], j, n + 1)
                rows.append(vec)
        return rows

    ranks = []
    for n in range(n_max + 1):
        ech = Echelon()
        for v in differential_matrix(n):
            ech.insert(v)
        ranks.append(ech.rank)
    return [dim * na**n - ranks[n] - (ranks[n - 1] if n else 0) for n in range(n_max + 1)]


def g1_cohomology_oracle(mod: TruncatedComodule, n_max: int = 2) -> list[int]:
    return bar_cohomology(action_matrices(mod), mod.dim, n_max)
