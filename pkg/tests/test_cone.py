import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from projcoh.cohomology import FiniteComplex, cone, cone_identity, random_chain_map, random_complex
from projcoh.cohomology.cone import ChainMapError, check_chain_map
from projcoh.exactalg import QMatrix


def pair(rng):
    A = random_complex(rng)
    B = random_complex(rng)
    return A, B


def test_zero_map_adds_betti():
    rng = random.Random(5)
    for _ in range(10):
        A, B = pair(rng)
        phi = [QMatrix(B.dims[i], A.dims[i]) for i in range(len(A.dims))]
        got = cone(A, B, phi).betti()
        bA, bB = A.betti() + [0], [0] + B.betti()
        assert got == [x + y for x, y in zip(bA, bB)]


def test_identity_map_is_acyclic():
    rng = random.Random(6)
    for _ in range(10):
        A = random_complex(rng)
        phi = [QMatrix.identity(d) for d in A.dims]
        assert cone(A, A, phi).betti() == [0] * (len(A.dims) + 1)


def test_non_chain_map_is_rejected():
    A = FiniteComplex([1, 1], [QMatrix.from_dense([[1]])])
    B = FiniteComplex([1, 1], [QMatrix(1, 1)])
    with pytest.raises(ChainMapError):
        cone(A, B, [QMatrix.identity(1), QMatrix.identity(1)])


def test_bad_complex_is_rejected():
    with pytest.raises(ValueError):
        FiniteComplex([1, 1, 1], [QMatrix.from_dense([[1]]), QMatrix.from_dense([[1]])])


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**31))
def test_cone_identity(seed):
    rng = random.Random(seed)
    A, B = pair(rng)
    phi = random_chain_map(rng, A, B)
    assert check_chain_map(A, B, phi)
    got, predicted = cone_identity(A, B, phi)
    assert got == predicted
