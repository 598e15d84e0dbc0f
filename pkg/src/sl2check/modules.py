"""Homogeneous spaces of SL2 as truncated comodules, and their invariants.

k[G/T] and k[G/N] are the right-T and right-N invariant functions on G,
k[U\\G] the left-U invariant ones.  Each truncation to polynomial degree
<= D is stable under left translation, so the invariants computed on the
truncation are exactly the degree <= D part of the invariant ring.

Invariance is always tested scheme-theoretically: the action is a
substitution with generic parameters (t for U, a Laurent s for T, the
acting copy alpha..delta for G, its image in k[G_r] for G_r) and invariance
is a polynomial identity in those parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable

from . import hopf
from .gf2 import Ambient, Echelon, KeyIndexer, Subspace, bits, combine, left_kernel
from .hopf import A, B, C, D, KG, LOW4, left_coaction  # noqa: F401  (re-export)
from .poly import FIELD_BITS, Poly

_F = FIELD_BITS
_M = (1 << _F) - 1
T_PARAM = 1 << (4 * _F)  # packed t in the context (a, b, c, d, t)


class ModuleId(str, Enum):
    KG = "kG"
    KG_MOD_T = "kG_mod_T"
    KG_MOD_N = "kG_mod_N"
    KU_BACKSLASH_G = "kU_backslash_G"
    QUOTIENT = "quotient"
    GR_KG_MOD_N = "gr_kG_mod_N"
    GR_KG_MOD_T = "gr_kG_mod_T"


@dataclass(frozen=True)
class GroupScheme:
    name: str
    r: int | None = None

    @property
    def side(self) -> str:
        return "right" if self.name.endswith("_right") else "left"

    def __str__(self):
        return f"{self.name}({self.r})" if self.r is not None else self.name


U_LEFT = GroupScheme("U_left")
T_LEFT = GroupScheme("T_left")
N_LEFT = GroupScheme("N_left")
G_LEFT = GroupScheme("G_left")
T_RIGHT = GroupScheme("T_right")
N_RIGHT = GroupScheme("N_right")


def gr_left(r: int) -> GroupScheme:
    if r < 1:
        raise ValueError("Frobenius kernel index r must be >= 1")
    return GroupScheme("Gr_left", r)


class SchemeMismatch(ValueError):
    pass


class MembershipError(ValueError):
    """Raised when an element is not in the expected module; carries the residue."""

    def __init__(self, message: str, residue: Poly):
        super().__init__(f"{message}: residue {residue}")
        self.residue = residue


# ---------------------------------------------------------------- ambients


@lru_cache(maxsize=None)
def ambient(max_degree: int) -> Ambient:
    """Straightened monomials of k[G] of degree <= max_degree."""
    return Ambient(KG, tuple(hopf.straightened_basis(max(max_degree, 0))))


def left_weight_code(code: int) -> int:
    """Weight under a -> u^-1 a, b -> u^-1 b, c -> u c, d -> u d."""
    i, j, k, l = ((code >> (_F * n)) & _M for n in range(4))
    return k + l - i - j


def right_weight_code(code: int) -> int:
    """Weight under a -> s a, c -> s c, b -> s^-1 b, d -> s^-1 d."""
    i, j, k, l = ((code >> (_F * n)) & _M for n in range(4))
    return i + k - j - l


def conj_weight_code(code: int) -> int:
    """Weight of an acting-factor monomial under conjugation by the torus."""
    i, j, k, l = ((code >> (_F * n)) & _M for n in range(4))
    return 2 * (k - j)


# ------------------------------------------------------- residual of rho - id


def _substitute(code: int, images: dict[int, frozenset[int]]) -> frozenset[int]:
    out = frozenset({0})
    for unit in (A, B, C, D):
        e = (code // unit) & _M
        for _ in range(e):
            out = hopf.mul_straight(out, images[unit])
    return out


_U_IMAGES = {
    A: frozenset({A, C + T_PARAM}),
    B: frozenset({B, D + T_PARAM}),
    C: frozenset({C}),
    D: frozenset({D}),
}


@lru_cache(maxsize=None)
def _u_residual(code: int) -> frozenset[int]:
    # f(a + t c, b + t d, c, d) - f  in k[G][t]
    return _substitute(code, _U_IMAGES) ^ {code}


@lru_cache(maxsize=None)
def _g_residual(code: int) -> frozenset[int]:
    return hopf.coaction_code(code) ^ {code}


@lru_cache(maxsize=None)
def gr_coaction_code(code: int, r: int) -> frozenset[int]:
    """rho followed by the projection k[G] -> k[G_r] on the acting factor."""
    out: set[int] = set()
    for m in hopf.coaction_code(code):
        lo = m & LOW4
        for y in hopf.gr_code(m >> (4 * _F), r):
            out ^= {lo + (y << (4 * _F))}
    return frozenset(out)


def residual_keys(code: int, scheme: GroupScheme) -> frozenset:
    """Keys of rho_scheme(m) - m (x) 1 for one straightened monomial."""
    name = scheme.name
    if name == "U_left":
        return _u_residual(code)
    if name == "G_left":
        return _g_residual(code)
    if name == "Gr_left":
        return gr_coaction_code(code, scheme.r) ^ {code}
    if name in ("T_left", "T_right", "N_left", "N_right"):
        wt = left_weight_code(code) if scheme.side == "left" else right_weight_code(code)
        keys = frozenset({("T", code, wt), ("T", code, 0)}) if wt else frozenset()
        if name.startswith("N"):
            moved = hopf.sigma_left_code(code) if scheme.side == "left" else hopf.sigma_right_code(code)
            keys = keys | {("σ", m) for m in moved ^ {code}}
        return keys
    raise ValueError(f"unknown group scheme {scheme}")


def residual(p: Poly, scheme: GroupScheme) -> set:
    out: set = set()
    for m in hopf.normal_form(p).terms:
        out ^= residual_keys(m, scheme)
    return out


def is_invariant(p: Poly, scheme: GroupScheme) -> bool:
    return not residual(p, scheme)


def in_kG_mod_T(p: Poly) -> bool:
    return is_invariant(p, T_RIGHT)


def in_kG_mod_N(p: Poly) -> bool:
    return is_invariant(p, N_RIGHT)


# ----------------------------------------------------------- module bases

_SUBMODULES = (ModuleId.KG, ModuleId.KG_MOD_T, ModuleId.KG_MOD_N, ModuleId.KU_BACKSLASH_G)
_RIGHT_STABLE = (ModuleId.KG, ModuleId.KU_BACKSLASH_G)


def _invariant_subspace(space: Subspace, scheme: GroupScheme) -> Subspace:
    idx = KeyIndexer()
    rows = []
    for v in space.rows:
        keys: set = set()
        for i in bits(v):
            keys ^= residual_keys(space.ambient.monomials[i], scheme)
        rows.append(idx.vector(keys))
    deps = left_kernel(rows)
    return Subspace.span(space.ambient, (combine(space.rows, c) for c in deps))


@lru_cache(maxsize=None)
def module_basis(m: ModuleId, max_degree: int) -> Subspace:
    """Degree <= D slice of module ``m`` inside the straightened basis of k[G].

    For the quotient the slice is the space of q-components (k[G/N] up to
    degree D - 2); for the graded modules it is the underlying space.
    """
    m = ModuleId(m)
    if max_degree < 0:
        raise ValueError("degree bound must be >= 0")
    amb = ambient(max_degree)
    if m is ModuleId.KG:
        return Subspace(amb, tuple(1 << i for i in range(len(amb))))
    if m is ModuleId.KG_MOD_T:
        return _invariant_subspace(module_basis(ModuleId.KG, max_degree), T_RIGHT)
    if m is ModuleId.KG_MOD_N:
        return _invariant_subspace(module_basis(ModuleId.KG, max_degree), N_RIGHT)
    if m is ModuleId.KU_BACKSLASH_G:
        return _invariant_subspace(module_basis(ModuleId.KG, max_degree), U_LEFT)
    if m is ModuleId.QUOTIENT:
        if max_degree < 2:
            return Subspace(amb, ())
        return module_basis(ModuleId.KG_MOD_N, max_degree - 2).embed(amb)
    if m is ModuleId.GR_KG_MOD_N:
        return module_basis(ModuleId.KG_MOD_N, max_degree)
    return module_basis(ModuleId.KG_MOD_T, max_degree)


def generator_span(m: ModuleId, max_degree: int) -> Subspace:
    """The same slices built from the generator descriptions (cross-check)."""
    m = ModuleId(m)
    amb = ambient(max_degree)
    ab, ad, cd = (Poly(KG, {x}) for x in (A + B, A + D, C + D))
    c, d = Poly(KG, {C}), Poly(KG, {D})
    vecs = []
    if m is ModuleId.KU_BACKSLASH_G:
        for i in range(max_degree + 1):
            for j in range(max_degree + 1 - i):
                vecs.append(hopf.multiply(hopf.power(c, i), hopf.power(d, j)))
    elif m in (ModuleId.KG_MOD_T, ModuleId.KG_MOD_N):
        top = max_degree // 2
        for i in range(top + 1):
            for j in range(top + 1 - i):
                base = hopf.multiply(hopf.power(ab, i), hopf.power(cd, j))
                ks = range(top + 1 - i - j) if m is ModuleId.KG_MOD_T else (0,)
                for k in ks:
                    vecs.append(hopf.multiply(base, hopf.power(ad, k)))
    elif m is ModuleId.KG:
        return module_basis(m, max_degree)
    else:
        raise ValueError(f"no generator description for {m.value}")
    return Subspace.span(amb, vecs)


# --------------------------------------------------------------- comodules


@dataclass
class TruncatedComodule:
    """A finite-dimensional comodule with an explicit basis.

    ``coaction[j]`` lists ``(i, mu)`` with rho(e_j) = sum e_i (x) mu, where
    ``mu`` is a packed straightened monomial of the acting k[G] (fields
    0..3).  ``reps[j]`` is a representative of e_j in ``ambient`` (a lift
    for subquotients).  ``weights[j]`` is the left-torus weight of e_j.
    """

    label: str
    ambient: Ambient
    reps: list[int]
    weights: list[int]
    coaction: list[list[tuple[int, int]]]
    below: tuple[int, ...] = ()
    grading: list[int] | None = None
    _coords: Echelon | None = field(default=None, repr=False)
    _pieces: list[tuple[int, Echelon]] | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coordinates(self, v: int) -> int:
        """Coordinates (bitset over the basis) of an ambient vector in sub/below."""
        res, combo = self._coords.reduce(v)
        if res:
            raise MembershipError(f"vector outside {self.label}", self.ambient.poly(res))
        return combo

    def coordinates_at(self, j: int, v: int) -> int:
        """Coordinates of ``v`` read in the graded piece containing e_j."""
        if self._pieces is None:
            return self.coordinates(v)
        off, ech = self._pieces[j]
        res, combo = ech.reduce(v)
        if res:
            raise MembershipError(f"vector outside the piece of {self.label}", self.ambient.poly(res))
        return combo << off

    def rep_polys(self) -> list[Poly]:
        return [self.ambient.poly(v) for v in self.reps]


def _coordinate_echelon(below: Iterable[int], reps: list[int]) -> Echelon:
    ech = Echelon(track=True)
    for v in below:
        ech.insert(v, 0)
    for j, v in enumerate(reps):
        ok, _ = ech.insert(v, 1 << j)
        if not ok:
            raise ValueError("complement vectors are dependent modulo the submodule")
    return ech


def _homogeneous_weight(amb: Ambient, v: int) -> int:
    ws = {left_weight_code(amb.monomials[i]) for i in bits(v)}
    if len(ws) != 1:
        raise ValueError(f"basis vector {amb.poly(v)} is not a torus weight vector")
    return ws.pop()


def build_comodule(label: str, amb: Ambient, reps: list[int], below: Iterable[int] = ()) -> TruncatedComodule:
    """Comodule structure on span(reps + below) / span(below), by projection.

    The coaction is transported from left translation on k[G]; any component
    leaving span(reps + below) raises :class:`MembershipError`, so building
    a comodule also certifies that the slice is a subcomodule.
    """
    below = tuple(below)
    ech = _coordinate_echelon(below, reps)
    mod = TruncatedComodule(label, amb, list(reps), [_homogeneous_weight(amb, v) for v in reps], [], below, _coords=ech)
    for v in reps:
        groups: dict[int, int] = {}
        for i in bits(v):
            for t in hopf.coaction_code(amb.monomials[i]):
                mu = t >> (4 * _F)
                groups[mu] = groups.get(mu, 0) ^ (1 << amb.position(t & LOW4))
        row = []
        for mu in sorted(groups, key=KG.sort_key):
            for i in bits(mod.coordinates(groups[mu])):
                row.append((i, mu))
        mod.coaction.append(row)
    return mod


@lru_cache(maxsize=None)
def comodule(m: ModuleId, max_degree: int) -> TruncatedComodule:
    """Module ``m`` truncated at degree D as an explicit comodule."""
    m = ModuleId(m)
    amb = ambient(max_degree)
    if m in (ModuleId.KG, ModuleId.KG_MOD_T, ModuleId.KG_MOD_N):
        return build_comodule(f"{m.value}<={max_degree}", amb, list(module_basis(m, max_degree).rows))
    if m is ModuleId.QUOTIENT:
        low = module_basis(ModuleId.KG_MOD_N, max_degree).rows
        qs = module_basis(ModuleId.QUOTIENT, max_degree).polys()
        ad = Poly(KG, {A + D})
        reps = [amb.vector(hopf.multiply(q, ad)) for q in qs]
        return build_comodule(f"quotient<={max_degree}", amb, reps, low)
    if m in (ModuleId.GR_KG_MOD_N, ModuleId.GR_KG_MOD_T):
        from .grosshans import graded_comodule

        base = ModuleId.KG_MOD_N if m is ModuleId.GR_KG_MOD_N else ModuleId.KG_MOD_T
        return graded_comodule(base, max_degree)
    raise SchemeMismatch(f"{m.value} is not a left G-comodule")


def comodule_invariants(mod: TruncatedComodule, scheme: GroupScheme) -> Subspace:
    """Invariants of an explicit comodule under G_left or Gr_left(r)."""
    if scheme.name not in ("G_left", "Gr_left"):
        raise SchemeMismatch(f"{scheme} needs a module inside k[G]")
    idx = KeyIndexer()
    rows = []
    for j, row in enumerate(mod.coaction):
        keys: set = set()
        for i, mu in row:
            if scheme.name == "G_left":
                keys ^= {(i, mu)}
            else:
                keys ^= {(i, y) for y in hopf.gr_code(mu, scheme.r)}
        keys ^= {(j, 0)}
        rows.append(idx.vector(keys))
    deps = left_kernel(rows)
    return Subspace.span(mod.ambient, (combine(mod.reps, c) for c in deps))


def invariants(m: ModuleId, scheme: GroupScheme, max_degree: int) -> Subspace:
    """Invariants of the degree <= D slice of ``m`` under ``scheme``."""
    m = ModuleId(m)
    if scheme.side == "right" and m not in _RIGHT_STABLE:
        raise SchemeMismatch(f"right scheme {scheme} is not defined on {m.value}")
    if m in _SUBMODULES:
        return _invariant_subspace(module_basis(m, max_degree), scheme)
    return comodule_invariants(comodule(m, max_degree), scheme)


# ------------------------------------------------------ free decomposition


@dataclass(frozen=True)
class FreeDecomposition:
    p: Poly
    q: Poly


_AD = Poly(KG, {A + D})


@lru_cache(maxsize=None)
def _free_system(max_degree: int) -> tuple[Echelon, int, list[int]]:
    amb = ambient(max_degree)
    low = list(module_basis(ModuleId.KG_MOD_N, max_degree).rows)
    high = [amb.vector(hopf.multiply(q, _AD)) for q in module_basis(ModuleId.KG_MOD_N, max_degree - 2).polys()] if max_degree >= 2 else []
    vectors = low + high
    ech = Echelon(track=True)
    for j, v in enumerate(vectors):
        ok, _ = ech.insert(v, 1 << j)
        if not ok:
            raise AssertionError("1 and ad are not a free basis over k[G/N] in this degree")
    return ech, len(low), vectors


def free_decompose(f: Poly) -> FreeDecomposition:
    """Unique p, q in k[G/N] with f = p + q * ad."""
    f = hopf.normal_form(f)
    if not in_kG_mod_T(f):
        bad = Poly(KG, {m for m in f.terms if right_weight_code(m)})
        raise MembershipError("element is not in k[G/T]", bad)
    deg = max(f.degree(), 0)
    ech, n_low, vectors = _free_system(deg)
    amb = ambient(deg)
    res, combo = ech.reduce(amb.vector(f))
    if res:
        raise MembershipError("element is not in k[G/N] + k[G/N] ad", amb.poly(res))
    low_mask = (1 << n_low) - 1
    p = amb.poly(combine(vectors, combo & low_mask))
    q_vecs = module_basis(ModuleId.KG_MOD_N, deg - 2).polys() if deg >= 2 else []
    q = Poly(KG, ())
    for j in bits(combo >> n_low):
        q = q + q_vecs[j]
    return FreeDecomposition(p, q)


# ------------------------------------------------------------- ring checks


def _ad_power(r: int) -> Poly:
    return hopf.power(_AD, 1 << r)


def separability_check(r_max: int = 4) -> dict:
    """(ad)^2 + ad + ab cd = 0, derivative of x^2 + x + ab cd is 1, and
    (ad)^(2^r) + (bc)^(2^r) = 1."""
    ab_cd = hopf.multiply(Poly(KG, {A + B}), Poly(KG, {C + D}))
    relation = hopf.normal_form(hopf.power(_AD, 2) + _AD + ab_cd)
    # formal derivative of x^2 + x + e over GF(2): 2x + 1 = 1
    derivative = (2 * 1 + 1) % 2
    bc = Poly(KG, {B + C})
    powers = {r: str(hopf.normal_form(_ad_power(r) + hopf.power(bc, 1 << r))) for r in range(1, r_max + 1)}
    ok = not relation and derivative == 1 and all(v == "1" for v in powers.values())
    return {
        "passed": ok,
        "relation_residue": str(relation),
        "derivative": derivative,
        "frobenius_difference": powers,
    }


def non_membership_check(r_max: int = 4) -> dict:
    """(ad)^(2^r) is not in k[G/N] while ad + (ad)^(2^r) is."""
    rows = []
    ok = True
    for r in range(1, r_max + 1):
        pw = _ad_power(r)
        moved = hopf.sigma_translate(pw)
        diff = hopf.normal_form(_AD + pw)
        row = {
            "r": r,
            "power_in_kG_mod_N": in_kG_mod_N(pw),
            "sigma_moves_power": moved != pw,
            "difference_in_kG_mod_N": in_kG_mod_N(diff),
        }
        ok &= (not row["power_in_kG_mod_N"]) and row["sigma_moves_power"] and row["difference_in_kG_mod_N"]
        rows.append(row)
    return {"passed": ok, "rows": rows}
