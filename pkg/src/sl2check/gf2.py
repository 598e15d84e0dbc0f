"""GF(2) linear algebra on int bitsets.

Vectors are Python ints; bit ``i`` is the coefficient of basis element ``i``.
Elimination pivots on the highest set bit, so with an ascending monomial
order a pivot is always the leading (largest) monomial of its row.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .poly import Poly, VarContext, format_monomial, parse


class Echelon:
    """Incremental row echelon form.

    With ``track=True`` every stored row remembers which inserted vectors it
    is a combination of (as a bitset of insertion tags), which is what the
    null space and the subquotient coordinates need.
    """

    def __init__(self, track: bool = False):
        self.rows: dict[int, int] = {}
        self.track = track
        self.combos: dict[int, int] = {}

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: int, combo: int = 0) -> tuple[int, int]:
        """Reduce until the top bit is not a pivot; zero iff ``v`` is in the span."""
        rows = self.rows
        combos = self.combos
        while v:
            p = v.bit_length() - 1
            row = rows.get(p)
            if row is None:
                break
            v ^= row
            if self.track:
                combo ^= combos[p]
        return v, combo

    def reduce_full(self, v: int, combo: int = 0) -> tuple[int, int]:
        """Clear every pivot column of ``v``; the result is the canonical residue."""
        rows = self.rows
        out = 0
        while v:
            p = v.bit_length() - 1
            row = rows.get(p)
            if row is None:
                bit = 1 << p
                out |= bit
                v ^= bit
            else:
                v ^= row
                if self.track:
                    combo ^= self.combos[p]
        return out, combo

    def insert(self, v: int, combo: int = 0) -> tuple[bool, int]:
        """Insert ``v``.  Returns ``(True, 0)`` if it was independent, else
        ``(False, c)`` where ``c`` is a dependency among inserted tags."""
        v, combo = self.reduce(v, combo)
        if v:
            p = v.bit_length() - 1
            self.rows[p] = v
            if self.track:
                self.combos[p] = combo
            return True, 0
        return False, combo

    def __contains__(self, v: int) -> bool:
        return self.reduce(v)[0] == 0

    def rref(self) -> list[int]:
        """Fully reduced rows, ascending by pivot."""
        done: dict[int, int] = {}
        for p in sorted(self.rows):
            v = self.rows[p]
            rest = v ^ (1 << p)
            out = 1 << p
            while rest:
                q = rest.bit_length() - 1
                row = done.get(q)
                if row is None:
                    out |= 1 << q
                    rest ^= 1 << q
                else:
                    rest ^= row
            done[p] = out
        return [done[p] for p in sorted(done)]


def rank(vectors: Iterable[int]) -> int:
    ech = Echelon()
    for v in vectors:
        ech.insert(v)
    return ech.rank


def left_kernel(vectors: Sequence[int]) -> list[int]:
    """Basis of ``{c : sum_i c_i vectors[i] = 0}`` as bitsets over indices."""
    ech = Echelon(track=True)
    out = []
    for i, v in enumerate(vectors):
        ok, dep = ech.insert(v, 1 << i)
        if not ok:
            out.append(dep)
    return out


def combine(vectors: Sequence[int], combo: int) -> int:
    out = 0
    i = 0
    while combo:
        if combo & 1:
            out ^= vectors[i]
        combo >>= 1
        i += 1
    return out


def bits(v: int) -> list[int]:
    out = []
    while v:
        p = v.bit_length() - 1
        out.append(p)
        v ^= 1 << p
    return out[::-1]


class KeyIndexer:
    """Assigns consecutive bit positions to hashable keys on first sight."""

    def __init__(self):
        self.index: dict = {}

    def vector(self, keys: Iterable) -> int:
        idx = self.index
        v = 0
        for k in keys:
            i = idx.get(k)
            if i is None:
                i = idx[k] = len(idx)
            v ^= 1 << i
        return v


@dataclass(frozen=True)
class Ambient:
    """An indexed monomial basis (ascending graded-lex) of a truncated space."""

    ctx: VarContext
    monomials: tuple[int, ...]
    _pos: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_pos", {m: i for i, m in enumerate(self.monomials)})

    def __len__(self):
        return len(self.monomials)

    def position(self, code: int) -> int:
        try:
            return self._pos[code]
        except KeyError:
            raise KeyError(f"monomial {format_monomial(self.ctx, code)} outside ambient basis") from None

    def __contains__(self, code: int) -> bool:
        return code in self._pos

    def vector(self, p: Poly | Iterable[int]) -> int:
        terms = p.terms if isinstance(p, Poly) else p
        v = 0
        for m in terms:
            v ^= 1 << self.position(m)
        return v

    def poly(self, v: int) -> Poly:
        return Poly(self.ctx, (self.monomials[i] for i in bits(v)))

    def reindex(self, v: int, target: "Ambient") -> int:
        """Express a vector of this ambient in ``target`` (monomials must exist there)."""
        return target.vector(self.monomials[i] for i in bits(v))


@dataclass(frozen=True)
class Subspace:
    """Canonical subspace: reduced row echelon rows, ascending pivots."""

    ambient: Ambient
    rows: tuple[int, ...]

    @classmethod
    def span(cls, ambient: Ambient, vectors: Iterable[int | Poly]) -> "Subspace":
        ech = Echelon()
        for v in vectors:
            if isinstance(v, Poly):
                v = ambient.vector(v)
            ech.insert(v)
        return cls(ambient, tuple(ech.rref()))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __len__(self):
        return len(self.rows)

    def echelon(self) -> Echelon:
        ech = Echelon()
        for r in self.rows:
            ech.rows[r.bit_length() - 1] = r
        return ech

    def pivots(self) -> list[int]:
        return [r.bit_length() - 1 for r in self.rows]

    def __contains__(self, v) -> bool:
        if isinstance(v, Poly):
            try:
                v = self.ambient.vector(v)
            except KeyError:
                return False
        return v in self.echelon()

    def coordinates(self, v: int) -> list[int]:
        """Coefficients of ``v`` in the row basis (``v`` must lie in the span)."""
        out = [(v >> p) & 1 for p in self.pivots()]
        if combine(self.rows, sum(c << i for i, c in enumerate(out))) != v:
            raise ValueError("vector is not in the subspace")
        return out

    def polys(self) -> list[Poly]:
        return [self.ambient.poly(r) for r in self.rows]

    def issubset(self, other: "Subspace") -> bool:
        ech = other.echelon()
        return all(self.ambient.reindex(r, other.ambient) in ech for r in self.rows)

    def embed(self, target: Ambient) -> "Subspace":
        return Subspace.span(target, (self.ambient.reindex(r, target) for r in self.rows))

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.ambient, self.rows + tuple(other.ambient.reindex(r, self.ambient) for r in other.rows))

    def intersection(self, other: "Subspace") -> "Subspace":
        theirs = [other.ambient.reindex(r, self.ambient) for r in other.rows]
        deps = left_kernel(list(self.rows) + theirs)
        mask = (1 << len(self.rows)) - 1
        return Subspace.span(self.ambient, (combine(self.rows, d & mask) for d in deps))

    def to_json(self) -> dict:
        width = len(self.ambient)
        return {
            "ambient_basis": [format_monomial(self.ambient.ctx, m) for m in self.ambient.monomials],
            "rows": [format(r, f"0{width}b")[::-1] for r in self.rows],
        }

    @classmethod
    def from_json(cls, data: dict | str, ctx: VarContext) -> "Subspace":
        if isinstance(data, str):
            data = json.loads(data)
        monos = []
        for s in data["ambient_basis"]:
            (m,) = parse(s, ctx).terms
            monos.append(m)
        ambient = Ambient(ctx, tuple(monos))
        rows = [int(b[::-1], 2) for b in data["rows"]]
        return cls.span(ambient, rows)
