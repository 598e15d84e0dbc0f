"""Torus weights, the Grosshans filtration, its associated graded, and characters.

Step n of the filtration of a module M is the largest subcomodule whose
left-torus weights lie in [-n, n].  On a truncation M_{<=D} (itself a
subcomodule) it is found by shrinking the weight window
V <- {v in V : rho(v) in V (x) k[G]} until nothing changes.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from . import hopf
from .gf2 import Echelon, KeyIndexer, Subspace, bits, combine, left_kernel
from .hopf import A, B, C, D, KG, LOW4
from .modules import (
    MembershipError,
    ModuleId,
    TruncatedComodule,
    build_comodule,
    comodule,
    left_weight_code,
    module_basis,
)
from .poly import FIELD_BITS, Poly

MAX_ROUNDS = 50
_SHIFT = 4 * FIELD_BITS
_FILTERED = (ModuleId.KG, ModuleId.KG_MOD_T, ModuleId.KG_MOD_N)


class StabilizationError(RuntimeError):
    pass


@dataclass(frozen=True)
class GrosshansStep:
    n: int
    space: Subspace

    @property
    def dim(self) -> int:
        return self.space.dim


def _base(m: ModuleId) -> ModuleId:
    m = ModuleId(m)
    if m not in _FILTERED:
        raise ValueError(f"Grosshans filtration is computed for {[x.value for x in _FILTERED]}, not {m.value}")
    return m


def row_weight(space: Subspace, v: int) -> int:
    ws = {left_weight_code(space.ambient.monomials[i]) for i in bits(v)}
    if len(ws) != 1:
        raise ValueError("row is not a weight vector")
    return ws.pop()


def weight_decompose(m: ModuleId, max_degree: int) -> dict[int, Subspace]:
    """Left-torus weight spaces of the degree <= D slice (weight(cd) = +2)."""
    m = ModuleId(m)
    if m in _FILTERED or m is ModuleId.KU_BACKSLASH_G:
        space = module_basis(m, max_degree)
        # the slice is torus stable, so weight components of rows stay inside
        parts: dict[int, list[int]] = {}
        for v in space.rows:
            comps: dict[int, int] = {}
            for i in bits(v):
                w = left_weight_code(space.ambient.monomials[i])
                comps[w] = comps.get(w, 0) | (1 << i)
            for w, comp in comps.items():
                parts.setdefault(w, []).append(comp)
        return {w: Subspace.span(space.ambient, vs) for w, vs in sorted(parts.items())}
    mod = comodule(m, max_degree)
    groups: dict[int, list[int]] = {}
    for v, w in zip(mod.reps, mod.weights):
        groups.setdefault(w, []).append(v)
    return {w: Subspace.span(mod.ambient, vs) for w, vs in sorted(groups.items())}


def weight_of(f: Poly) -> int:
    ws = {left_weight_code(m) for m in hopf.normal_form(f).terms}
    if len(ws) != 1:
        raise ValueError(f"{f} is not a weight vector")
    return ws.pop()


def _coaction_groups(space: Subspace, v: int) -> dict[int, int]:
    amb = space.ambient
    groups: dict[int, int] = {}
    for i in bits(v):
        for t in hopf.coaction_code(amb.monomials[i]):
            mu = t >> _SHIFT
            groups[mu] = groups.get(mu, 0) ^ (1 << amb.position(t & LOW4))
    return groups


def largest_subcomodule(space: Subspace) -> Subspace:
    """Largest left subcomodule of k[G] contained in ``space``."""
    for _ in range(MAX_ROUNDS):
        ech = space.echelon()
        idx = KeyIndexer()
        rows = []
        for v in space.rows:
            keys: set = set()
            for mu, x in _coaction_groups(space, v).items():
                res, _ = ech.reduce_full(x)
                keys ^= {(mu, i) for i in bits(res)}
            rows.append(idx.vector(keys))
        deps = left_kernel(rows)
        if len(deps) == space.dim:
            return space
        space = Subspace.span(space.ambient, (combine(space.rows, c) for c in deps))
    raise StabilizationError(f"largest-submodule iteration did not stabilize in {MAX_ROUNDS} rounds")


@lru_cache(maxsize=None)
def grosshans_step(m: ModuleId, n: int, max_degree: int) -> GrosshansStep:
    if n < 0:
        raise ValueError("step index must be >= 0")
    m = _base(m)
    space = module_basis(m, max_degree)
    window = [v for w, sub in weight_decompose(m, max_degree).items() if abs(w) <= n for v in sub.rows]
    step = largest_subcomodule(Subspace.span(space.ambient, window))
    _verify_step(step, n)
    return GrosshansStep(n, step)


def _verify_step(step: Subspace, n: int) -> None:
    # a posteriori: weights in the window, and a subcomodule
    for v in step.rows:
        if abs(row_weight(step, v)) > n:
            raise AssertionError("Grosshans step leaves its weight window")
    build_comodule("step", step.ambient, list(step.rows))


def filtration(m: ModuleId, max_degree: int) -> list[GrosshansStep]:
    """Steps 0..2D; step 2D is the whole slice."""
    return [grosshans_step(m, n, max_degree) for n in range(2 * max_degree + 1)]


def grosshans_degree(f: Poly, m: ModuleId = ModuleId.KG_MOD_T, max_degree: int | None = None) -> int:
    """Least n with f in step n (computed at truncation ``max_degree``)."""
    f = hopf.normal_form(f)
    if max_degree is None:
        max_degree = max(f.degree(), 0)
    if f not in module_basis(m, max_degree):
        raise MembershipError(f"element outside {ModuleId(m).value}<={max_degree}", f)
    for n in range(2 * max_degree + 1):
        if f in grosshans_step(m, n, max_degree).space:
            return n
    raise AssertionError("element not in the last Grosshans step")


# ------------------------------------------------------------- graded pieces


def graded_pieces(m: ModuleId, max_degree: int) -> list[tuple[int, list[int], tuple[int, ...]]]:
    """(n, canonical complement of step n-1 in step n, rows of step n-1)."""
    out = []
    prev: tuple[int, ...] = ()
    for step in filtration(m, max_degree):
        ech = Echelon()
        for v in prev:
            ech.insert(v)
        residues = [ech.reduce_full(v)[0] for v in step.space.rows]
        comp = Subspace.span(step.space.ambient, (r for r in residues if r)).rows
        out.append((step.n, list(comp), prev))
        prev = step.space.rows
    return out


@lru_cache(maxsize=None)
def graded_comodule(m: ModuleId, max_degree: int) -> TruncatedComodule:
    """gr M_{<=D} = sum of step n / step n-1, coaction by projection."""
    m = _base(m)
    amb = module_basis(m, max_degree).ambient
    reps: list[int] = []
    weights: list[int] = []
    coaction: list[list[tuple[int, int]]] = []
    degrees: list[int] = []
    pieces = []
    for n, comp, below in graded_pieces(m, max_degree):
        if not comp:
            continue
        piece = build_comodule(f"gr{n}", amb, comp, below)
        off = len(reps)
        reps.extend(piece.reps)
        weights.extend(piece.weights)
        degrees.extend([n] * piece.dim)
        pieces.extend([(off, piece._coords)] * piece.dim)
        coaction.extend([[(i + off, mu) for i, mu in row] for row in piece.coaction])
    return TruncatedComodule(f"gr_{m.value}<={max_degree}", amb, reps, weights, coaction, grading=degrees, _pieces=pieces)


def graded_dims(m: ModuleId, max_degree: int) -> dict[int, int]:
    return {n: len(comp) for n, comp, _ in graded_pieces(m, max_degree)}


# --------------------------------------------------------------- characters


def character(space: Subspace) -> Counter:
    return Counter(row_weight(space, v) for v in space.rows)


def nabla_character(n: int) -> Counter:
    return Counter(range(-n, n + 1, 2))


def nabla_decompose(char: Counter) -> dict:
    """Greedy top-weight decomposition into characters of nabla(n)."""
    rest = Counter({w: k for w, k in char.items() if k})
    mults: dict[int, int] = {}
    while rest:
        top = max(rest)
        k = rest[top]
        if k < 0 or top < 0:
            return {"ok": False, "weight": top, "multiplicity": k, "partial": mults}
        mults[top] = k
        for w in range(-top, top + 1, 2):
            rest[w] -= k
            if rest[w] == 0:
                del rest[w]
        neg = [w for w, x in rest.items() if x < 0]
        if neg:
            w = max(neg)
            return {"ok": False, "weight": w, "multiplicity": rest[w], "partial": mults}
    return {"ok": True, "multiplicities": dict(sorted(mults.items()))}


def graded_characters(m: ModuleId, max_degree: int) -> dict[int, Counter]:
    out = {}
    prev: Counter = Counter()
    for step in filtration(m, max_degree):
        cur = character(step.space)
        diff = Counter(cur)
        diff.subtract(prev)
        out[step.n] = Counter({w: k for w, k in diff.items() if k})
        prev = cur
    return out


def good_filtration_check(max_degree: int, m: ModuleId = ModuleId.KG_MOD_T) -> dict:
    """Every graded piece has a nonnegative nabla decomposition (necessary condition only)."""
    pieces = {}
    ok = True
    for n, char in graded_characters(m, max_degree).items():
        if not char:
            continue
        dec = nabla_decompose(char)
        ok &= dec["ok"]
        pieces[n] = {"character": {str(w): k for w, k in sorted(char.items())}, "decomposition": dec}
    return {"passed": ok, "pieces": pieces}


# -------------------------------------------------------------------- hull


def _in_sum(f: Poly, *spaces: Subspace) -> bool:
    amb = spaces[0].ambient
    ech = Echelon()
    for s in spaces:
        for v in s.rows:
            ech.insert(s.ambient.reindex(v, amb))
    try:
        return amb.vector(hopf.normal_form(f)) in ech
    except KeyError:
        return False


def hull_check(max_degree: int = 4) -> dict:
    """gr k[G/T] is gr k[G/N][x]/(x^2 + ab cd), and every graded square lies in gr k[G/N]."""
    T, N = ModuleId.KG_MOD_T, ModuleId.KG_MOD_N
    ab, ad, cd = (Poly(KG, {x}) for x in (A + B, A + D, C + D))
    ab_cd = hopf.multiply(ab, cd)
    top = max(max_degree, 4)
    deg_sq = grosshans_degree(hopf.power(ad, 2) + ab_cd, T, top)
    deg_abcd = grosshans_degree(ab_cd, T, top)
    square_relation = deg_sq == 2 and deg_abcd == 4

    dims_T = graded_dims(T, max_degree)
    dims_N = graded_dims(N, max_degree)
    dims_N2 = graded_dims(N, max_degree - 2) if max_degree >= 2 else {}
    rank_two = {}
    for n in sorted(dims_T):
        expected = dims_N.get(n, 0) + dims_N2.get(n - 2, 0)
        rank_two[n] = {"gr_T": dims_T[n], "gr_N": dims_N.get(n, 0), "gr_N_shift": dims_N2.get(n - 2, 0), "ok": dims_T[n] == expected}
    free_ok = all(v["ok"] for v in rank_two.values())

    # squares of graded basis elements of gr k[G/T] land in gr k[G/N]
    squares = []
    for n, comp, _ in graded_pieces(T, max_degree):
        for v in comp:
            x = module_basis(T, max_degree).ambient.poly(v)
            sq = hopf.power(x, 2)
            big = 2 * max_degree
            inside = _in_sum(
                sq,
                grosshans_step(N, 2 * n, big).space.embed(module_basis(T, big).ambient),
                grosshans_step(T, 2 * n - 1, big).space if n else Subspace(module_basis(T, big).ambient, ()),
            )
            squares.append({"element": str(x), "gr_degree": n, "square_in_gr_N": inside})
    insep_ok = all(s["square_in_gr_N"] for s in squares)
    return {
        "passed": square_relation and free_ok and insep_ok,
        "grosshans_degree_ad2_plus_abcd": deg_sq,
        "grosshans_degree_abcd": deg_abcd,
        "rank_two": {str(k): v for k, v in rank_two.items()},
        "squares": squares,
    }
