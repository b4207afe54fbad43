import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qpe import qmath
from qpe.errors import ValidationError


def test_tensor_product_matches_kron():
    a = np.arange(4).reshape(2, 2)
    b = np.eye(2) * 3
    assert np.array_equal(qmath.tensor_product(a, b), np.kron(a, b))
    assert qmath.kron_all(a, b, a).shape == (8, 8)


def test_n_qubits_of_rejects_non_power_of_two():
    assert qmath.n_qubits_of(8) == 3
    with pytest.raises(ValidationError):
        qmath.n_qubits_of(6)


def test_partial_trace_of_product_recovers_factors():
    g = np.random.default_rng(1)
    a = qmath.random_density(2, g)
    b = qmath.random_density(4, g)
    rho = np.kron(a, b)
    assert np.allclose(qmath.partial_trace(rho, 3, [1, 2]), a, atol=1e-12)
    assert np.allclose(qmath.partial_trace(rho, 3, [0]), b, atol=1e-12)


def test_partial_trace_against_explicit_sum():
    # Oracle: sum_k (I (x) <k|) rho (I (x) |k>) over the last qubit.
    g = np.random.default_rng(2)
    rho = qmath.random_density(8, g)
    expect = np.zeros((4, 4), dtype=complex)
    for k in range(2):
        e = np.zeros((2, 1))
        e[k] = 1
        p = np.kron(np.eye(4), e)
        expect += p.T @ rho @ p
    assert np.allclose(qmath.partial_trace(rho, 3, [2]), expect, atol=1e-12)


def test_bell_state_reduces_to_maximally_mixed():
    v = np.array([1, 0, 0, 1]) / np.sqrt(2)
    assert np.allclose(qmath.partial_trace(np.outer(v, v), 2, [1]), np.eye(2) / 2)


def test_herm_exp_against_pauli_closed_form():
    x = np.array([[0, 1], [1, 0]])
    t = 0.731
    expect = np.cos(t) * np.eye(2) - 1j * np.sin(t) * x
    assert np.allclose(qmath.herm_exp(x, -1j * t), expect, atol=1e-12)


def test_operator_distance_is_spectral_norm():
    a = np.diag([3.0, -1.0])
    assert qmath.operator_distance(a, np.zeros((2, 2))) == pytest.approx(3.0)


@settings(max_examples=50, deadline=None)
@given(st.floats(-np.pi, np.pi), st.integers(0, 10_000))
def test_global_phase_equality(phase, seed):
    u = qmath.random_unitary(4, np.random.default_rng(seed))
    assert qmath.equal_up_to_global_phase(np.exp(1j * phase) * u, u)
    assert not qmath.equal_up_to_global_phase(u @ np.diag([1, 1, 1, -1]), u)


def test_validators():
    assert qmath.is_unitary(np.eye(2))
    assert not qmath.is_unitary(np.array([[1, 1], [0, 1]]))
    with pytest.raises(ValidationError):
        qmath.require_unitary(np.array([[1, 1], [0, 1]]))
    assert qmath.is_density(np.eye(2) / 2)
    assert not qmath.is_density(np.eye(2))


def test_trace_distance_orthogonal_pure_states():
    a = np.diag([1, 0])
    b = np.diag([0, 1])
    assert qmath.trace_distance(a, b) == pytest.approx(1.0)
