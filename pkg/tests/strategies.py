"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from sl2check.hopf import KG
from sl2check.poly import Poly


def exponents(n: int, hi: int = 3):
    return st.tuples(*[st.integers(0, hi)] * n)


def kg_polys(max_exp: int = 3, max_terms: int = 6, max_degree: int | None = None):
    def build(exps):
        if max_degree is not None:
            exps = [e for e in exps if sum(e) <= max_degree]
        return Poly(KG, {KG.pack(e) for e in exps})

    return st.lists(exponents(4, max_exp), max_size=max_terms).map(build)


def polys_in(ctx, max_exp: int = 3, max_terms: int = 5):
    return st.lists(exponents(len(ctx), max_exp), max_size=max_terms).map(
        lambda es: Poly(ctx, {ctx.pack(e) for e in es})
    )
