import galois
import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from sl2check.gf2 import Ambient, Echelon, Subspace, bits, combine, left_kernel, rank
from sl2check.hopf import KG, straightened_basis

GF2 = galois.GF(2)
WIDTH = 12
vectors = st.lists(st.integers(0, (1 << WIDTH) - 1), max_size=10)


def as_matrix(vs):
    return GF2(np.array([[(v >> i) & 1 for i in range(WIDTH)] for v in vs] or [[0] * WIDTH], dtype=int))


@settings(max_examples=300)
@given(vectors)
def test_rank_matches_galois(vs):
    assert rank(vs) == int(np.linalg.matrix_rank(as_matrix(vs)))


@settings(max_examples=300)
@given(vectors)
def test_left_kernel_is_a_kernel_basis(vs):
    ker = left_kernel(vs)
    assert all(combine(vs, c) == 0 for c in ker)
    assert rank(ker) == len(ker) == len(vs) - rank(vs)


@given(vectors)
def test_rref_is_reduced(vs):
    ech = Echelon()
    for v in vs:
        ech.insert(v)
    rows = ech.rref()
    pivots = [r.bit_length() - 1 for r in rows]
    assert pivots == sorted(pivots)
    for r in rows:
        assert sum(1 for p in pivots if (r >> p) & 1) == 1
    assert rank(rows + vs) == len(rows)


def test_rref_small_regression():
    ech = Echelon()
    for v in (0b110, 0b011, 0b101):
        ech.insert(v)
    assert ech.rref() == [0b011, 0b101]


def test_bits():
    assert bits(0) == [] and bits(0b1011) == [0, 1, 3]


AMBIENT = Ambient(KG, tuple(straightened_basis(2)))
N = len(AMBIENT)
subspaces = st.lists(st.integers(0, (1 << N) - 1), max_size=6).map(lambda vs: Subspace.span(AMBIENT, vs))


@settings(max_examples=200)
@given(st.lists(st.integers(0, (1 << N) - 1), max_size=6), st.randoms(use_true_random=False))
def test_span_is_canonical(vs, rnd):
    shuffled = list(vs)
    rnd.shuffle(shuffled)
    extra = [a ^ b for a, b in zip(vs, shuffled)]
    assert Subspace.span(AMBIENT, vs) == Subspace.span(AMBIENT, shuffled + extra)


@settings(max_examples=200)
@given(subspaces, subspaces)
def test_intersection_dimension(u, w):
    assert (u + w).dim + u.intersection(w).dim == u.dim + w.dim
    inter = u.intersection(w)
    assert inter.issubset(u) and inter.issubset(w)


@given(subspaces)
def test_json_round_trip(u):
    assert Subspace.from_json(u.to_json(), KG) == u


def test_coordinates_and_membership():
    u = Subspace.span(AMBIENT, [AMBIENT.vector(straightened_basis(2)[:3])])
    (r,) = u.rows
    assert u.coordinates(r) == [1]
    assert AMBIENT.poly(r) in u
