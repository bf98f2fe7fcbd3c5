import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from phaseframe.algebra import (adjoint_generator, adjoint_of, coefficients, gell_mann_basis,
                                operator, pauli_basis, random_unitary)

BASES = [pauli_basis(), gell_mann_basis()]
vectors = st.lists(st.floats(-3, 3, allow_nan=False), min_size=8, max_size=8)


@pytest.mark.parametrize('basis', BASES, ids=['su2', 'su3'])
def test_trace_normalisation(basis):
    G = basis.generators
    gram = np.einsum('iab,jba->ij', G, G)
    assert np.allclose(gram, 2*np.eye(basis.size))
    assert np.allclose(np.trace(G, axis1=1, axis2=2), 0)


@pytest.mark.parametrize('basis', BASES, ids=['su2', 'su3'])
def test_structure_constants_antisymmetric(basis):
    f = basis.structure_constants
    assert np.allclose(f, -np.swapaxes(f, 0, 1))
    assert np.allclose(f, -np.swapaxes(f, 1, 2))


def test_known_structure_constants():
    assert pauli_basis().structure_constants[0, 1, 2] == pytest.approx(2.0)
    gm = gell_mann_basis()
    assert gm.structure_constants[0, 1, 2] == pytest.approx(2.0)
    assert gm.structure_constants[3, 4, 7] == pytest.approx(np.sqrt(3))


def test_labels_and_indices():
    b = pauli_basis()
    assert b.index('z') == 2 and b.index(1) == 1
    with pytest.raises(KeyError):
        b.index('w')
    with pytest.raises(IndexError):
        b.index(3)
    assert np.array_equal(gell_mann_basis().unit('3'), np.eye(8)[2])


@pytest.mark.parametrize('basis', BASES, ids=['su2', 'su3'])
@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_adjoint_is_orthogonal_homomorphism(basis, seed):
    rng = np.random.default_rng(seed)
    U, V = random_unitary(basis.dimension, rng), random_unitary(basis.dimension, rng)
    RU, RV = adjoint_of(U, basis), adjoint_of(V, basis)
    assert np.allclose(RU @ RU.T, np.eye(basis.size), atol=1e-12)
    assert np.allclose(adjoint_of(U @ V, basis), RU @ RV, atol=1e-12)
    assert np.linalg.det(RU) == pytest.approx(1.0)


@settings(max_examples=25, deadline=None)
@given(x=vectors)
def test_coefficients_round_trip(x):
    gm = gell_mann_basis()
    assert np.allclose(coefficients(operator(np.array(x), gm), gm), x)


@pytest.mark.parametrize('basis', BASES, ids=['su2', 'su3'])
@pytest.mark.parametrize('t', [0.3, -1.7, 2.5])
def test_adjoint_generator_exponentiates_to_rotation(basis, t):
    for k in range(basis.size):
        lhs = expm(t*adjoint_generator(k, basis))
        rhs = adjoint_of(expm(-0.5j*t*basis.generators[k]), basis)
        assert np.allclose(lhs, rhs, atol=1e-12)


def test_lambda3_rotates_the_two_lambda_legs_oppositely():
    gm = gell_mann_basis()
    Q = expm(0.8*adjoint_generator('3', gm))
    c, s = np.cos(0.4), np.sin(0.4)
    assert np.allclose(Q[3:5, 3:5], [[c, -s], [s, c]])
    assert np.allclose(Q[5:7, 5:7], [[c, s], [-s, c]])


def test_rejects_non_unitary():
    with pytest.raises(ValueError):
        adjoint_of(np.diag([1.0, 2.0]), pauli_basis())
