import numpy as np
import pytest

from qppm import gus
from qppm.linalg import (
    LinalgError,
    NotPSDError,
    eid_hermitian,
    hermitian,
    inv_sqrt_psd,
    kron,
    range_projector,
    sqrt_psd,
)


def random_psd(rng, n, rank=None, complex_=True):
    rank = n if rank is None else rank
    b = rng.normal(size=(n, rank))
    if complex_:
        b = b + 1j * rng.normal(size=(n, rank))
    return b @ b.conj().T


def test_hermitian_symmetrizes_and_rejects_non_square():
    a = np.array([[1.0, 2.0], [0.0, 3.0]])
    h = hermitian(a)
    assert np.allclose(h, [[1, 1], [1, 3]])
    with pytest.raises(ValueError):
        hermitian(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        hermitian(np.zeros((0, 0)))


def test_eid_identity_and_diagonal():
    e = eid_hermitian(np.eye(3))
    assert np.array_equal(e.values, [1.0, 1.0, 1.0])
    e = eid_hermitian(np.diag([2.0, -1.0]))
    assert np.allclose(e.values, [2, -1])
    assert np.allclose(np.abs(e.vectors), np.eye(2))


def test_eid_sorted_descending_unitary_and_reconstructs():
    rng = np.random.default_rng(1)
    a = hermitian(rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12)))
    e = eid_hermitian(a)
    assert np.all(np.diff(e.values) <= 0)
    assert np.allclose(e.vectors.conj().T @ e.vectors, np.eye(12), atol=1e-10)
    assert np.linalg.norm(e.reconstruct() - a) / np.linalg.norm(a) < 1e-10


def test_eid_failure_names_dimension(monkeypatch):
    def boom(_):
        raise np.linalg.LinAlgError("no convergence")

    monkeypatch.setattr(np.linalg, "eigh", boom)
    with pytest.raises(LinalgError, match="7x7"):
        eid_hermitian(np.eye(7))


def test_sqrt_psd_trivial_cases():
    assert np.allclose(sqrt_psd(np.diag([4.0, 9.0])), np.diag([2, 3]))
    assert np.array_equal(sqrt_psd(np.zeros((3, 3))), np.zeros((3, 3)))


def test_sqrt_psd_random_seeded():
    a = random_psd(np.random.default_rng(5), 5)
    s = sqrt_psd(a)
    assert np.linalg.norm(s @ s - a) / np.linalg.norm(a) < 1e-9


def test_sqrt_psd_rejects_negative():
    with pytest.raises(NotPSDError) as info:
        sqrt_psd(np.diag([1.0, -0.5]))
    assert info.value.eigenvalue == pytest.approx(-0.5)


def test_sqrt_psd_clamps_roundoff_negatives():
    s = sqrt_psd(np.diag([1.0, -1e-14]))
    assert np.allclose(s, np.diag([1.0, 0.0]))


def test_inv_sqrt_psd_generalized():
    assert np.allclose(inv_sqrt_psd(np.diag([4.0, 0.0])), np.diag([0.5, 0.0]))
    assert np.allclose(inv_sqrt_psd(np.eye(4)), np.eye(4))


def test_inv_sqrt_of_two_state_gram():
    ov = np.exp(-2.0)
    g = np.array([[1.0, ov], [ov, 1.0]])
    r = inv_sqrt_psd(g)
    assert np.max(np.abs(r @ g @ r - np.eye(2))) < 1e-10


def test_inv_sqrt_range_projector_on_singular():
    rng = np.random.default_rng(2)
    a = random_psd(rng, 8, rank=3)
    r = inv_sqrt_psd(a)
    p = range_projector(a)
    assert np.max(np.abs(r @ a @ r - p)) < 1e-8
    assert np.allclose(p @ p, p, atol=1e-10)
    assert np.trace(p).real == pytest.approx(3)


def test_kron_trivial_and_indexing():
    assert np.array_equal(kron(np.eye(2), np.eye(3)), np.eye(6))
    w0, w1 = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    # leftmost factor is the most significant digit: w(1) (x) w(0) = w_4(2)
    assert np.array_equal(kron(w1, w0), np.eye(4)[2])


def test_kron_mixed_product_and_associativity():
    rng = np.random.default_rng(3)
    a, b, c, d = (rng.normal(size=(2, 2)) for _ in range(4))
    assert np.allclose(kron(a, b) @ kron(c, d), kron(a @ c, b @ d), atol=1e-14)
    e = rng.normal(size=(3, 2))
    assert np.max(np.abs(kron(kron(a, b), e) - kron(a, kron(b, e)))) <= 1e-14


def test_kron_commutation_by_perfect_shuffle():
    rng = np.random.default_rng(4)
    a = rng.normal(size=(2, 2))
    b = rng.normal(size=(3, 3))
    s = gus.perfect_shuffle(2, 3)
    assert np.allclose(kron(b, a), s @ kron(a, b) @ s.T, atol=1e-14)
    with pytest.raises(ValueError):
        kron()

