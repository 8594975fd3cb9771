"""Complexes, blockwise homology, good truncation."""

import random

import pytest

from liemodel.linalg import Matrix, Echelon
from liemodel.graded import (
    Multidegree, FiniteComplex, Slot, homology_dims, total_homology,
    good_truncation,
)
from liemodel.freelie import Generator, GeneratorSet, enumerate_basis


def slots(n, weight=0, length=None, prefix="s"):
    return [Slot(f"{prefix}{i}", weight, length) for i in range(n)]


def test_multidegree_validation():
    Multidegree(degree=2, weight=-3, filtration=0, length=1)
    with pytest.raises(ValueError):
        Multidegree(degree=1, weight=0, filtration=-1)
    with pytest.raises(ValueError):
        Multidegree(degree=1, weight=0, length=0)


def test_zero_differentials():
    c = FiniteComplex("chain", {0: slots(2), 1: slots(3), 2: slots(1)}, {})
    assert homology_dims(c, 0) == {(0, None): 2}
    assert homology_dims(c, 1) == {(0, None): 3}
    assert homology_dims(c, 2) == {(0, None): 1}


def test_exact_two_term_complex():
    c = FiniteComplex("chain", {0: slots(1), 1: slots(1)},
                      {1: Matrix.identity(1)})
    assert homology_dims(c, 0) == {}
    assert homology_dims(c, 1) == {}


def test_free_lie_on_one_odd_generator_as_complex():
    # sanity bridge: zero-differential complex whose degree-n term is the
    # free graded Lie algebra on one odd degree-1 generator
    gset = GeneratorSet([Generator("u", degree=1, weight=-2)])
    term_slots = {}
    for n in range(1, 4):
        basis = enumerate_basis(gset, degree=n)
        term_slots[n] = [
            Slot(repr(b), -2 * n, n) for b in basis]
    c = FiniteComplex("chain", term_slots, {}, length_shift=1)
    assert homology_dims(c, 1) == {(-2, 1): 1}
    assert homology_dims(c, 2) == {(-4, 2): 1}
    assert homology_dims(c, 3) == {}


def test_homogeneity_is_enforced():
    bad = {0: [Slot("a", 0)], 1: [Slot("b", 5)]}
    with pytest.raises(ValueError, match="mixes blocks"):
        FiniteComplex("chain", bad, {1: Matrix.identity(1)})


def test_square_zero_is_enforced():
    terms = {0: slots(1), 1: slots(1), 2: slots(1)}
    with pytest.raises(ValueError, match="!= 0"):
        FiniteComplex("chain", terms,
                      {1: Matrix.identity(1), 2: Matrix.identity(1)})


def test_length_shift_blocks():
    terms = {
        0: [Slot("x", -2, 2)],
        1: [Slot("y0", -2, 1), Slot("y1", -2, 1)],
    }
    d1 = Matrix(1, 2, {(0, 0): 1})
    c = FiniteComplex("chain", terms, {1: d1}, length_shift=1)
    assert homology_dims(c, 0) == {}
    assert homology_dims(c, 1) == {(-2, 1): 1}


def random_chain_complex(rng, dims, weight=0):
    """A valid random chain complex: each d's columns lie in ker(previous)."""
    terms = {n: slots(d, weight, prefix=f"d{n}_") for n, d in enumerate(dims)}
    diffs = {}
    prev_kernel = None       # Matrix whose columns span ker(d_{n-1})
    for n in range(1, len(dims)):
        rows, cols = dims[n - 1], dims[n]
        if prev_kernel is None:
            mat = Matrix(rows, cols,
                         {(i, j): rng.randrange(-2, 3)
                          for i in range(rows) for j in range(cols)})
        else:
            mix = Matrix(prev_kernel.cols, cols,
                         {(i, j): rng.randrange(-2, 3)
                          for i in range(prev_kernel.cols)
                          for j in range(cols)})
            mat = prev_kernel @ mix
        diffs[n] = mat
        prev_kernel = mat.kernel_basis()
    return FiniteComplex("chain", terms, diffs)


def test_euler_characteristic_per_block():
    rng = random.Random(99)
    for _ in range(25):
        dims = [rng.randrange(0, 5) for _ in range(4)]
        c = random_chain_complex(rng, dims)
        h = total_homology(c)
        euler_terms = sum((-1) ** n * c.dim(n) for n in c.degrees())
        euler_h = sum((-1) ** n * sum(d.values()) for n, d in h.items())
        assert euler_terms == euler_h


def invert(mat):
    """Inverse of a square invertible Matrix via tracked elimination."""
    ech = Echelon(track=True)
    for j in range(mat.cols):
        assert ech.add(mat.column(j)) is None, "matrix not invertible"
    cols = []
    for i in range(mat.rows):
        coords = ech.coordinates({i: 1})
        assert coords is not None
        cols.append(coords)
    return Matrix.from_columns(mat.cols, cols)


def random_invertible(rng, n):
    while True:
        mat = Matrix(n, n, {(i, j): rng.randrange(-2, 3)
                            for i in range(n) for j in range(n)})
        ech = Echelon()
        if all(ech.add(mat.column(j)) is None for j in range(n)):
            return mat


def test_homology_invariant_under_basis_change():
    rng = random.Random(4242)
    for _ in range(10):
        dims = [rng.randrange(1, 4) for _ in range(3)]
        c = random_chain_complex(rng, dims)
        ps = {n: random_invertible(rng, c.dim(n)) for n in range(3)}
        new_diffs = {}
        for n, mat in c.diffs.items():
            new_diffs[n] = ps[n - 1] @ mat @ invert(ps[n])
        c2 = FiniteComplex("chain", c.slots, new_diffs)
        for n in range(3):
            assert homology_dims(c, n) == homology_dims(c2, n)


def random_cochain_complex(rng, dims, weight=0):
    chain = random_chain_complex(rng, dims, weight)
    top = len(dims) - 1
    # flip degrees: cochain degree n = chain degree top - n
    terms = {top - n: v for n, v in chain.slots.items()}
    diffs = {}
    for n, mat in chain.diffs.items():
        diffs[top - n] = mat   # maps cochain degree top-n to top-n+1
    return FiniteComplex("cochain", terms, diffs)


def test_truncation_matches_formula_and_cohomology():
    rng = random.Random(11)
    # the pinned three-term example: 0 -> Q -> Q -> Q with d0 = 0, d1 = id
    c = FiniteComplex("cochain", {0: slots(1), 1: slots(1), 2: slots(1)},
                      {1: Matrix.identity(1)})
    t = good_truncation(c, 1)
    assert t.dim(0) == 1 and t.dim(1) == 0 and t.dim(2) == 0

    for _ in range(15):
        dims = [rng.randrange(0, 4) for _ in range(4)]
        c = random_cochain_complex(rng, dims)
        top = max(c.degrees(), default=0)
        # truncating above the support changes nothing
        t = good_truncation(c, top + 2)
        for n in range(top + 1):
            assert t.dim(n) == c.dim(n)
            assert homology_dims(t, n) == homology_dims(c, n)
        for m in range(top + 2):
            t = good_truncation(c, m)
            for n in range(top + 2):
                if n <= m:
                    assert homology_dims(t, n) == homology_dims(c, n), (m, n)
                else:
                    assert homology_dims(t, n) == {}
                    assert t.dim(n) == 0


def test_truncation_keeps_weights():
    terms = {0: [Slot("a", 3), Slot("b", 7)], 1: [Slot("c", 3)]}
    d0 = Matrix(1, 2, {(0, 0): 1})
    c = FiniteComplex("cochain", terms, {0: d0})
    t = good_truncation(c, 0)
    assert [s.weight for s in t.slots[0]] == [7]
    assert homology_dims(t, 0) == {(7, None): 1}
