import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qfi_teleport.errors import NotHermitian
from qfi_teleport.qmath import eigh, hermiticity_residual, tensor, validate_density


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return a + a.conj().T


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_eigh_matches_numpy(n):
    rng = np.random.default_rng(n)
    for _ in range(25):
        h = random_hermitian(rng, n)
        dec = eigh(h)
        ref = np.linalg.eigvalsh(h)[::-1]
        assert np.allclose(dec.eigenvalues, ref, atol=1e-10)
        assert np.allclose(dec.reconstruct(), h, atol=1e-10)
        v = dec.eigenvectors
        assert np.allclose(v.conj().T @ v, np.eye(n), atol=1e-10)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=16, max_size=16))
def test_eigh_property(vals):
    a = np.array(vals[:8]).reshape(2, 4)
    m = (a[0] + 1j * a[1]).reshape(2, 2)
    h = np.kron(m + m.conj().T, np.eye(2)) + np.diag(vals[8:12])
    dec = eigh(h)
    assert np.allclose(h @ dec.eigenvectors, dec.eigenvectors * dec.eigenvalues, atol=1e-9)
    assert list(dec.eigenvalues) == sorted(dec.eigenvalues, reverse=True)


def test_eigh_sorted_descending_and_phase():
    dec = eigh(np.diag([0.1, 0.7, 0.2]).astype(complex))
    assert np.allclose(dec.eigenvalues, [0.7, 0.2, 0.1])
    for i in range(3):
        v = dec.vector(i)
        first = v[np.flatnonzero(np.abs(v) > 1e-12)[0]]
        assert abs(first.imag) < 1e-14 and first.real > 0


def test_degenerate_is_deterministic():
    h = np.eye(4, dtype=complex) * 0.25
    a, b = eigh(h), eigh(h.copy())
    assert np.array_equal(a.eigenvectors, b.eigenvectors)
    assert np.allclose(a.reconstruct(), h)


def test_pauli_x_eigenpairs():
    dec = eigh(np.array([[0, 1], [1, 0]], dtype=complex))
    assert np.allclose(dec.eigenvalues, [1, -1])
    assert np.allclose(np.abs(dec.vector(0)), [2**-0.5, 2**-0.5])


def test_not_hermitian():
    with pytest.raises(NotHermitian):
        eigh(np.array([[0, 1], [0, 0]], dtype=complex))
    assert hermiticity_residual(np.array([[0, 1], [0, 0]])) == pytest.approx(1.0)


def test_clamped_removes_tiny_negatives():
    dec = eigh(np.diag([1.0 + 1e-13, -1e-13]).astype(complex)).clamped()
    assert dec.eigenvalues.min() >= 0


def test_validate_density():
    good = validate_density(np.diag([0.5, 0.5]))
    assert good.passed
    bad = validate_density(np.diag([1.2, -0.2]))
    assert not bad.passed and bad.min_eigenvalue == pytest.approx(-0.2)
    assert not validate_density(np.diag([0.6, 0.6])).passed
    assert "min_eig" in bad.describe()


def test_tensor_is_kron():
    a = np.arange(4).reshape(2, 2)
    b = np.eye(2)
    assert np.array_equal(tensor(a, b), np.kron(a, b))
