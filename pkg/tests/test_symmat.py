import numpy as np
import pytest

from sllab import symmat
from sllab.symmat import (DimensionMismatchError, InvalidInputError, OrthMatrix,
                          SymMatrix)

from conftest import random_orthogonal, random_symmetric


def test_eigenvalues_diagonal():
    lam = symmat.eigenvalues(SymMatrix.diag([2.0, -1.0, 5.0]))
    np.testing.assert_allclose(lam.values, [-1.0, 2.0, 5.0], atol=1e-14)


def test_eigenvalues_exchange_2x2():
    lam = symmat.eigenvalues(SymMatrix([[0.0, 1.0], [1.0, 0.0]]))
    np.testing.assert_allclose(lam.values, [-1.0, 1.0], atol=1e-14)


def test_trace_det_oracle_4x4(rng):
    for _ in range(20):
        x = SymMatrix(random_symmetric(4, rng))
        lam = symmat.eigenvalues(x).values
        assert abs(lam.sum() - np.trace(x.mat)) < 1e-9
        assert abs(np.prod(lam) - np.linalg.det(x.mat)) < 1e-9


def test_eigenvalues_rejects_nonfinite():
    with pytest.raises(InvalidInputError):
        SymMatrix([[np.nan, 0.0], [0.0, 1.0]])
    with pytest.raises(InvalidInputError):
        SymMatrix([[np.inf]])


def test_exchange_matrix():
    assert symmat.exchange_matrix(1).mat.tolist() == [[1.0]]
    np.testing.assert_array_equal(symmat.exchange_matrix(2).mat,
                                  [[0.0, 1.0], [1.0, 0.0]])
    for n in range(1, 7):
        j = symmat.exchange_matrix(n).mat
        np.testing.assert_array_equal(j, j.T)
        np.testing.assert_allclose(j @ j, np.eye(n), atol=0.0)


def test_conjugate_identity_and_swap():
    x = SymMatrix([[1.0, 2.0], [2.0, 3.0]])
    np.testing.assert_allclose(symmat.conjugate(x, OrthMatrix.identity(2)).mat,
                               x.mat, atol=0.0)
    j = symmat.exchange_matrix(2)
    swapped = symmat.conjugate(SymMatrix.diag([4.0, 7.0]), j)
    np.testing.assert_allclose(swapped.mat, np.diag([7.0, 4.0]), atol=0.0)


def test_conjugate_similarity_invariance(rng):
    for n in (2, 3, 5):
        x = SymMatrix(random_symmetric(n, rng))
        q = OrthMatrix(random_orthogonal(n, rng))
        lam1 = symmat.eigenvalues(x).values
        lam2 = symmat.eigenvalues(symmat.conjugate(x, q)).values
        np.testing.assert_allclose(lam1, lam2, atol=1e-9)


def test_conjugate_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        symmat.conjugate(SymMatrix.diag([1.0, 2.0]), OrthMatrix.identity(3))


def test_loewner_basic():
    x = SymMatrix([[1.0, 0.5], [0.5, 2.0]])
    assert symmat.loewner_leq(x, x)
    assert symmat.loewner_leq(SymMatrix.diag([0.0, 0.0]), SymMatrix.diag([1.0, 2.0]))
    assert not symmat.loewner_leq(SymMatrix.diag([1.0, 2.0]), SymMatrix.diag([0.0, 0.0]))


def test_loewner_rank_one_perturbation(rng):
    for n in (2, 4, 6):
        x = SymMatrix(random_symmetric(n, rng))
        v = rng.normal(size=(n, 1))
        assert symmat.loewner_leq(x, SymMatrix(x.mat + v @ v.T))


def test_reconstruction_from_jacobi_decomposition(rng):
    for n in range(1, 9):
        for _ in range(200):
            x = SymMatrix(random_symmetric(n, rng))
            lam, q = symmat.eigen_decomposition(x)
            rec = q.mat @ np.diag(lam.values) @ q.mat.T
            scale = max(np.linalg.norm(x.mat), 1e-30)
            assert np.linalg.norm(rec - x.mat) / scale < 1e-9


def test_monotone_interlacing(rng):
    for n in (2, 3, 5):
        for _ in range(30):
            x = SymMatrix(random_symmetric(n, rng))
            b = rng.normal(size=(n, n))
            y = SymMatrix(x.mat + b @ b.T)
            assert symmat.loewner_leq(x, y)
            lx = symmat.eigenvalues(x).values
            ly = symmat.eigenvalues(y).values
            assert np.all(lx <= ly + 1e-9)


def test_identity_shift(rng):
    for _ in range(50):
        n = int(rng.integers(1, 7))
        tau = float(rng.uniform(1e-6, 10.0))
        x = SymMatrix(random_symmetric(n, rng))
        lam = symmat.eigenvalues(x).values
        shifted = symmat.eigenvalues(x.shifted(tau)).values
        np.testing.assert_allclose(shifted, lam + tau, atol=1e-10)


def test_negation_reverses_spectrum(rng):
    for _ in range(50):
        n = int(rng.integers(1, 7))
        x = SymMatrix(random_symmetric(n, rng))
        lam = symmat.eigenvalues(x).values
        neg = symmat.eigenvalues(-x).values
        np.testing.assert_allclose(neg, -lam[::-1], atol=1e-10)


def test_matrix_csv_roundtrip(tmp_path, rng):
    x = SymMatrix(random_symmetric(4, rng))
    path = tmp_path / "mat.csv"
    symmat.write_matrix_csv(path, x)
    y = symmat.read_matrix_csv(path)
    np.testing.assert_allclose(y.mat, x.mat, atol=0.0)


def test_matrix_csv_rejects_asymmetry(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1.0,2.0\n2.1,1.0\n")
    with pytest.raises(InvalidInputError):
        symmat.read_matrix_csv(path)


def test_orthogonality_checked_on_construction():
    with pytest.raises(InvalidInputError):
        OrthMatrix([[1.0, 0.1], [0.0, 1.0]])
