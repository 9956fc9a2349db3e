from typing import NamedTuple

import numpy as np
import scipy.linalg

from aaalawson import array_util
from aaalawson.errors import DimensionError

# |beta| of a homogeneous eigenvalue pair at or below this fraction of the
# pair's magnitude marks an eigenvalue at infinity
INFINITE_EIGENVALUE_TOL = 1e-13


class PencilEigenvalues(NamedTuple):
    finite: np.ndarray
    infinite: int


def smallest_singular_vector(A):
    """
    Return (v, sigma_min) where v is the unit right singular vector of A for its
    smallest singular value.  The phase of v is fixed so that its first
    largest-magnitude entry is real and positive.
    A must have at least as many rows as columns.
    """
    A = array_util.as_complex_matrix(A, 'A')
    rows, cols = A.shape
    if cols < 1 or rows < cols:
        raise DimensionError(
            f'smallest_singular_vector needs rows >= cols >= 1, got {rows}x{cols}')
    _, s, vh = np.linalg.svd(A, full_matrices=False)
    v = array_util.normalize_phase(vh[-1].conj())
    return v, float(s[-1])


def singular_values(A):
    """
    All singular values of A in decreasing order
    """
    A = array_util.as_complex_matrix(A, 'A')
    return np.linalg.svd(A, compute_uv=False)


def generalized_eigenvalues(A, B):
    """
    Eigenvalues of the pencil (A, B), i.e. all lambda with det(A - lambda B) = 0.
    Eigenvalues at infinity are dropped and counted.  The finite ones are
    returned sorted (real part, then imaginary part).
    """
    A = array_util.as_complex_matrix(A, 'A')
    B = array_util.as_complex_matrix(B, 'B')
    if A.shape[0] != A.shape[1] or B.shape != A.shape:
        raise DimensionError(
            f'generalized_eigenvalues needs square matrices of equal size, '
            f'got A {A.shape[0]}x{A.shape[1]} and B {B.shape[0]}x{B.shape[1]}')
    if A.shape[0] == 0:
        return PencilEigenvalues(np.zeros(0, dtype=complex), 0)

    pairs = scipy.linalg.eig(A, B, left=False, right=False, homogeneous_eigvals=True)
    alpha, beta = pairs[0], pairs[1]
    scale = np.hypot(np.abs(alpha), np.abs(beta))
    at_infinity = np.abs(beta) <= INFINITE_EIGENVALUE_TOL * scale
    finite = np.sort(alpha[~at_infinity] / beta[~at_infinity])
    return PencilEigenvalues(finite, int(at_infinity.sum()))
