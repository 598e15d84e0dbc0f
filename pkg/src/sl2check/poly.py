"""Sparse multivariate polynomials over GF(2).

A monomial is packed into a single Python int: variable ``i`` owns the
16-bit field starting at bit ``16 * i``.  Ordinary variables store their
exponent directly (limit ``2**13 - 1``); Laurent variables store
``exponent + 2**14``.  With this layout the product of two monomials is an
integer addition followed by subtracting the packed "one" monomial, and no
carry can cross a field boundary as long as both inputs are within limits.

A polynomial is a frozenset of packed monomials: over GF(2) presence means
coefficient 1, addition is symmetric difference.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

FIELD_BITS = 16
FIELD_MASK = (1 << FIELD_BITS) - 1
EXP_LIMIT = 1 << 13
LAURENT_BIAS = 1 << 14


class PolyError(ValueError):
    pass


class ContextMismatch(PolyError):
    pass


class ExponentOverflow(PolyError):
    pass


class ParseError(PolyError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class VarContext:
    """Ordered variable names plus flags.

    ``laurent`` names may carry negative exponents.  ``params`` names do not
    count towards :meth:`degree` (group parameters such as t, s, alpha...).
    """

    names: tuple[str, ...]
    laurent: frozenset[str] = frozenset()
    params: frozenset[str] = frozenset()
    _index: dict = field(init=False, repr=False, compare=False, hash=False)
    one: int = field(init=False, repr=False, compare=False, hash=False)
    _overflow_mask: int = field(init=False, repr=False, compare=False, hash=False)
    _laurent_idx: tuple = field(init=False, repr=False, compare=False, hash=False)
    _degree_idx: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        names = tuple(self.names)
        if len(set(names)) != len(names):
            raise PolyError(f"duplicate variable names in {names}")
        unknown = (set(self.laurent) | set(self.params)) - set(names)
        if unknown:
            raise PolyError(f"flags for unknown variables {sorted(unknown)}")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "laurent", frozenset(self.laurent))
        object.__setattr__(self, "params", frozenset(self.params))
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})
        one = 0
        mask = 0
        lidx = []
        for i, n in enumerate(names):
            if n in self.laurent:
                one |= LAURENT_BIAS << (FIELD_BITS * i)
                lidx.append(i)
            else:
                # bits 13..15 of an ordinary field must stay clear
                mask |= (FIELD_MASK ^ (EXP_LIMIT - 1)) << (FIELD_BITS * i)
        object.__setattr__(self, "one", one)
        object.__setattr__(self, "_overflow_mask", mask)
        object.__setattr__(self, "_laurent_idx", tuple(lidx))
        object.__setattr__(
            self,
            "_degree_idx",
            tuple(i for i, n in enumerate(names) if n not in self.params),
        )

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise PolyError(f"unknown variable {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def unit(self, name: str) -> int:
        """Packed offset that raises ``name`` by one."""
        return 1 << (FIELD_BITS * self.index(name))

    def pack(self, exps: Iterable[int]) -> int:
        exps = tuple(exps)
        if len(exps) != len(self.names):
            raise PolyError(f"expected {len(self.names)} exponents, got {len(exps)}")
        code = 0
        for i, (n, e) in enumerate(zip(self.names, exps)):
            if n in self.laurent:
                if not -EXP_LIMIT < e < EXP_LIMIT:
                    raise ExponentOverflow(f"exponent {e} of {n} out of range")
                e += LAURENT_BIAS
            elif e < 0:
                raise PolyError(f"negative exponent {e} for non-Laurent variable {n}")
            elif e >= EXP_LIMIT:
                raise ExponentOverflow(f"exponent {e} of {n} out of range")
            code |= e << (FIELD_BITS * i)
        return code

    def unpack(self, code: int) -> tuple[int, ...]:
        out = []
        for i, n in enumerate(self.names):
            e = (code >> (FIELD_BITS * i)) & FIELD_MASK
            if n in self.laurent:
                e -= LAURENT_BIAS
            out.append(e)
        return tuple(out)

    def exponent(self, code: int, name: str) -> int:
        i = self.index(name)
        e = (code >> (FIELD_BITS * i)) & FIELD_MASK
        return e - LAURENT_BIAS if name in self.laurent else e

    def degree(self, code: int) -> int:
        exps = self.unpack(code)
        return sum(abs(exps[i]) for i in self._degree_idx)

    def check(self, codes: Iterable[int]) -> None:
        """Raise :class:`ExponentOverflow` if any packed monomial left its range."""
        mask = self._overflow_mask
        for m in codes:
            if m & mask:
                raise ExponentOverflow("exponent overflow in polynomial product")
            for i in self._laurent_idx:
                e = (m >> (FIELD_BITS * i)) & FIELD_MASK
                if not LAURENT_BIAS - EXP_LIMIT < e < LAURENT_BIAS + EXP_LIMIT:
                    raise ExponentOverflow("Laurent exponent overflow")

    def concat(self, other: "VarContext") -> "VarContext":
        clash = set(self.names) & set(other.names)
        if clash:
            raise PolyError(f"contexts share variables {sorted(clash)}")
        return VarContext(
            self.names + other.names,
            self.laurent | other.laurent,
            self.params | other.params,
        )

    def suffixed(self, suffix: str) -> "VarContext":
        return VarContext(
            tuple(n + suffix for n in self.names),
            frozenset(n + suffix for n in self.laurent),
            frozenset(n + suffix for n in self.params),
        )

    def sort_key(self, code: int):
        """Graded-lex key: ascending key = ascending monomial order."""
        exps = self.unpack(code)
        return (sum(abs(e) for e in exps), exps)


def xor_accumulate(codes: Iterable[int]) -> set[int]:
    """Collapse a stream of monomials with GF(2) cancellation."""
    return {m for m, k in Counter(codes).items() if k & 1}


class Poly:
    """Immutable polynomial over GF(2) in a :class:`VarContext`."""

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx: VarContext, terms: Iterable[int] = ()):
        self.ctx = ctx
        self.terms = frozenset(terms)
        self._hash = None

    @classmethod
    def zero(cls, ctx: VarContext) -> "Poly":
        return cls(ctx)

    @classmethod
    def one(cls, ctx: VarContext) -> "Poly":
        return cls(ctx, (ctx.one,))

    @classmethod
    def var(cls, ctx: VarContext, name: str, power: int = 1) -> "Poly":
        exps = [0] * len(ctx)
        exps[ctx.index(name)] = power
        return cls(ctx, (ctx.pack(exps),))

    @classmethod
    def monomial(cls, ctx: VarContext, exps: Iterable[int]) -> "Poly":
        return cls(ctx, (ctx.pack(exps),))

    def _same(self, other: "Poly") -> None:
        if self.ctx != other.ctx:
            raise ContextMismatch(f"{self.ctx.names} vs {other.ctx.names}")

    def __add__(self, other):
        if isinstance(other, int):
            other = Poly.one(self.ctx) if other & 1 else Poly.zero(self.ctx)
        self._same(other)
        return Poly(self.ctx, self.terms ^ other.terms)

    __radd__ = __add__
    __sub__ = __add__

    def __mul__(self, other):
        if isinstance(other, int):
            return self if other & 1 else Poly.zero(self.ctx)
        self._same(other)
        one = self.ctx.one
        acc = xor_accumulate([x + y - one for x in self.terms for y in other.terms])
        self.ctx.check(acc)
        return Poly(self.ctx, acc)

    __rmul__ = __mul__

    def frobenius(self, times: int = 1) -> "Poly":
        """Raise to the power ``2**times``; cross terms vanish in characteristic 2."""
        one = self.ctx.one
        f = 1 << times
        terms = [f * (m - one) + one for m in self.terms]
        self.ctx.check(terms)
        return Poly(self.ctx, terms)

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            if len(self.terms) != 1:
                raise PolyError("only monomials can be inverted")
            (m,) = self.terms
            exps = self.ctx.unpack(m)
            return Poly.monomial(self.ctx, [-e for e in exps]) ** (-n)
        result = Poly.one(self.ctx)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base.frobenius()
        return result

    def __eq__(self, other):
        if isinstance(other, int) and other in (0, 1):
            other = Poly.one(self.ctx) if other else Poly.zero(self.ctx)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx, self.terms))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.sorted_terms())

    def sorted_terms(self, descending: bool = True) -> list[int]:
        return sorted(self.terms, key=self.ctx.sort_key, reverse=descending)

    def degree(self) -> int:
        """Total degree over non-parameter variables (-1 for the zero polynomial)."""
        if not self.terms:
            return -1
        return max(self.ctx.degree(m) for m in self.terms)

    def exponents(self) -> list[tuple[int, ...]]:
        return [self.ctx.unpack(m) for m in self.sorted_terms()]

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"


def add(p: Poly, q: Poly) -> Poly:
    return p + q


def mul(p: Poly, q: Poly) -> Poly:
    return p * q


def substitute(p: Poly, images: Mapping[str, Poly], target: VarContext | None = None) -> Poly:
    """Ring homomorphism sending each variable of ``p`` to ``images[name]``.

    Negative exponents (Laurent variables) need an image that is a single
    monomial whose variables are all Laurent in the target context.
    """
    if target is None:
        target = next(iter(images.values())).ctx if images else p.ctx
    for name, img in images.items():
        if img.ctx != target:
            raise ContextMismatch(f"image of {name} lives in {img.ctx.names}")
    ctx = p.ctx
    for i, n in enumerate(ctx.names):
        if n not in images and any(ctx.unpack(m)[i] for m in p.terms):
            raise PolyError(f"no image for variable {n!r}")
    cache: dict[tuple[str, int], Poly] = {}

    def power(name: str, e: int) -> Poly:
        key = (name, e)
        if key not in cache:
            img = images[name]
            if e < 0:
                if len(img.terms) != 1:
                    raise PolyError(f"negative power of {name} needs a monomial image")
                (m,) = img.terms
                exps = target.unpack(m)
                for n2, x in zip(target.names, exps):
                    if x and n2 not in target.laurent:
                        raise PolyError(
                            f"negative power of {name} needs a Laurent target, {n2} is not Laurent"
                        )
            cache[key] = img ** e
        return cache[key]

    acc: Counter = Counter()
    for m in p.terms:
        term = Poly.one(target)
        for n, e in zip(ctx.names, ctx.unpack(m)):
            if e:
                term = term * power(n, e)
        acc.update(term.terms)
    return Poly(target, (m for m, k in acc.items() if k & 1))


_TOKEN = re.compile(r"\s*(?:(?P<num>-?\d+)|(?P<name>[^\W\d]\w*(?:\.\d+)?)|(?P<op>[+*^])|(?P<bad>\S))")


def _tokens(text: str):
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        if m.lastgroup == "bad":
            raise ParseError(f"unexpected character {m.group('bad')!r}", m.start("bad"))
        start = m.start(m.lastgroup)
        yield m.lastgroup, m.group(m.lastgroup), start
        pos = m.end()
    yield "end", "", len(text)


def parse(text: str, ctx: VarContext) -> Poly:
    """Parse ``"a*d + b*c + 1"`` style text into a polynomial over ``ctx``.

    Grammar: terms joined by ``+``; a term is ``1``, ``0`` or factors joined
    by ``*``; a factor is ``VAR`` or ``VAR^INT``.  Negative integers are only
    accepted for Laurent variables.
    """
    toks = list(_tokens(text))
    i = 0
    terms: Counter = Counter()

    def expect_term():
        nonlocal i
        exps = [0] * len(ctx)
        kind, val, pos = toks[i]
        if kind == "num":
            if val not in ("0", "1"):
                raise ParseError(f"only 0 or 1 allowed as coefficient, got {val}", pos)
            i += 1
            return None if val == "0" else exps
        while True:
            kind, val, pos = toks[i]
            if kind != "name":
                raise ParseError(f"expected variable, got {val or 'end of input'!r}", pos)
            if val not in ctx:
                raise ParseError(f"unknown variable {val!r}", pos)
            i += 1
            e = 1
            if toks[i][:2] == ("op", "^"):
                i += 1
                kind, num, npos = toks[i]
                if kind != "num":
                    raise ParseError("expected integer exponent", npos)
                e = int(num)
                if e < 0 and val not in ctx.laurent:
                    raise ParseError(f"negative exponent for non-Laurent variable {val!r}", npos)
                i += 1
            exps[ctx.index(val)] += e
            if toks[i][:2] == ("op", "*"):
                i += 1
                continue
            return exps

    while True:
        exps = expect_term()
        if exps is not None:
            terms[ctx.pack(exps)] += 1
        kind, val, pos = toks[i]
        if kind == "end":
            break
        if (kind, val) != ("op", "+"):
            raise ParseError(f"expected '+', got {val!r}", pos)
        i += 1
    return Poly(ctx, (m for m, k in terms.items() if k & 1))


def format_monomial(ctx: VarContext, code: int) -> str:
    parts = []
    for n, e in zip(ctx.names, ctx.unpack(code)):
        if e == 1:
            parts.append(n)
        elif e:
            parts.append(f"{n}^{e}")
    return "*".join(parts) if parts else "1"


def format_poly(p: Poly) -> str:
    """Canonical text: graded-lex order, largest monomial first."""
    if not p.terms:
        return "0"
    return " + ".join(format_monomial(p.ctx, m) for m in p.sorted_terms())
