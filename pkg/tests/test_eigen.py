import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from condrenyi.eigen import hermitian_eig, matrix_function
from condrenyi.errors import NoConvergence, NotHermitian


def _random_unitary(rng, d):
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_diagonal():
    s = hermitian_eig(np.diag([0.3, 0.7]))
    assert np.allclose(s.eigenvalues, [0.7, 0.3])
    assert np.allclose(np.abs(s.eigenvectors), [[0, 1], [1, 0]])


def test_pauli_x():
    s = hermitian_eig([[0, 1], [1, 0]])
    assert np.allclose(s.eigenvalues, [1, -1], atol=1e-14)


def test_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_eig([[0, 1], [0, 0]])
    with pytest.raises(NotHermitian):
        hermitian_eig(np.ones((2, 3)))


def test_sweep_cap():
    rng = np.random.default_rng(0)
    h = rng.normal(size=(6, 6))
    with pytest.raises(NoConvergence):
        hermitian_eig(h + h.T, max_sweeps=0)


def test_trivial_sizes():
    assert hermitian_eig(np.zeros((0, 0))).eigenvalues.size == 0
    assert hermitian_eig([[2.5]]).eigenvalues[0] == 2.5


def test_degenerate_spectrum():
    rng = np.random.default_rng(3)
    u = _random_unitary(rng, 5)
    lam = np.array([2, 2, 2, -1, -1.0])
    s = hermitian_eig((u * lam) @ u.conj().T)
    assert np.allclose(s.eigenvalues, [2, 2, 2, -1, -1], atol=1e-11)
    assert np.linalg.norm(s.reconstruct() - (u * lam) @ u.conj().T) <= 1e-10


@given(st.integers(1, 16), st.integers(0, 10**6))
def test_known_spectrum_round_trip(d, seed):
    rng = np.random.default_rng(seed)
    u = _random_unitary(rng, d)
    lam = np.sort(rng.normal(size=d))[::-1]
    h = (u * lam) @ u.conj().T
    h = 0.5 * (h + h.conj().T)
    s = hermitian_eig(h)
    assert np.max(np.abs(s.eigenvalues - lam)) <= 1e-11
    assert np.linalg.norm(s.reconstruct() - h) <= 1e-10
    v = s.eigenvectors
    assert np.linalg.norm(v.conj().T @ v - np.eye(d)) <= 1e-10


def test_matrix_function_sqrt():
    rng = np.random.default_rng(1)
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    psd = g @ g.conj().T
    root = matrix_function(hermitian_eig(psd), lambda x: np.sqrt(np.clip(x, 0, None)))
    assert np.allclose(root @ root, psd, atol=1e-10)
