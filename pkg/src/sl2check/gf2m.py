"""Small binary fields GF(2^m), m <= 8, for the random-point evaluation oracle.

Elements are ints below 2^m.  Multiplication goes through log/exp tables
built from a primitive modulus, so evaluation stays cheap enough to run
hundreds of points inside the quick profile.
"""

from __future__ import annotations

import random
from functools import lru_cache

# primitive polynomials, bit i = coefficient of x^i
PRIMITIVE = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10000011,
    8: 0b100011101,
}


class GF2m:
    def __init__(self, m: int):
        if m not in PRIMITIVE:
            raise ValueError(f"GF(2^{m}) not supported (1 <= m <= 8)")
        self.m = m
        self.order = 1 << m
        n = self.order - 1
        exp = [0] * (2 * n)
        log = [0] * self.order
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x <<= 1
            if x & self.order:
                x ^= PRIMITIVE[m]
        for i in range(n, 2 * n):
            exp[i] = exp[i - n]
        self._exp = exp
        self._log = log
        self._n = n

    def mul(self, x: int, y: int) -> int:
        if not x or not y:
            return 0
        return self._exp[self._log[x] + self._log[y]]

    def inv(self, x: int) -> int:
        if not x:
            raise ZeroDivisionError("inverse of 0 in GF(2^m)")
        return self._exp[(self._n - self._log[x]) % self._n]

    def pow(self, x: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(x), -e)
        if e == 0:
            return 1
        if not x:
            return 0
        return self._exp[(self._log[x] * e) % self._n]

    def random_sl2(self, rng: random.Random) -> tuple[int, int, int, int]:
        """Uniform-ish point (a, b, c, d) with ad + bc = 1."""
        while True:
            a, b, c, d = (rng.randrange(self.order) for _ in range(4))
            if a:
                d = self.mul(1 ^ self.mul(b, c), self.inv(a))
                return a, b, c, d
            if b and c:
                # a = 0 forces bc = 1
                c = self.inv(b)
                return a, b, c, d

    def evaluate(self, p, point: dict[str, int]) -> int:
        """Evaluate a :class:`~sl2check.poly.Poly` at ``point`` (variable -> element)."""
        ctx = p.ctx
        vals = [point[n] for n in ctx.names]
        total = 0
        for code in p.terms:
            term = 1
            for x, e in zip(vals, ctx.unpack(code)):
                if e:
                    term = self.mul(term, self.pow(x, e))
                    if not term:
                        break
            total ^= term
        return total


@lru_cache(maxsize=None)
def field(m: int) -> GF2m:
    return GF2m(m)
