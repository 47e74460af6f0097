# tensor_linalg.py
"""
Dense complex linear algebra for the simulator.

Matrices and vectors are plain numpy complex128 arrays. The helpers here add the
checks the rest of the simulator relies on: finiteness, shape agreement, the
qubit ceiling on Kronecker products, and the structural certificates
(unitary, Hermitian, density).
"""
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Optional

import numpy as np
import scipy.linalg

from errors import ConvergenceError, DimensionError, NotHermitianError, QubitCeilingError
from logger import get_logger
from sim_config import get_config

logger = get_logger('linalg')


def as_matrix(m) -> np.ndarray:
    """Coerce to a finite 2-D complex128 array."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"Expected a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DimensionError("Matrix contains NaN or Inf entries")
    return arr


def as_vector(v) -> np.ndarray:
    """Coerce to a finite 1-D complex128 array."""
    arr = np.asarray(v, dtype=np.complex128)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise DimensionError(f"Expected a non-empty 1-D vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DimensionError("Vector contains NaN or Inf entries")
    return arr


def dagger(m) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(as_matrix(m)).T


def identity(order: int) -> np.ndarray:
    return np.eye(order, dtype=np.complex128)


def _check_ceiling(rows: int, cols: int, max_qubits: Optional[int]) -> None:
    limit = 2 ** (max_qubits if max_qubits is not None else get_config().max_qubits)
    if rows > limit or cols > limit:
        raise QubitCeilingError(
            f"Product of order {rows}x{cols} exceeds the {limit}x{limit} ceiling"
        )


def tensor_product(a, b, max_qubits: Optional[int] = None) -> np.ndarray:
    """Kronecker product a ⊗ b; block (i, j) of the result is a[i, j] * b."""
    a = as_matrix(a)
    b = as_matrix(b)
    _check_ceiling(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1], max_qubits)
    return np.kron(a, b)


def tensor_all(factors: Iterable, max_qubits: Optional[int] = None) -> np.ndarray:
    """Left-to-right Kronecker product of a sequence of matrices."""
    return reduce(lambda acc, f: tensor_product(acc, f, max_qubits), factors)


def apply(u, v) -> np.ndarray:
    """Matrix-vector product u · v."""
    u = as_matrix(u)
    v = as_vector(v)
    if u.shape[1] != v.shape[0]:
        raise DimensionError(f"Cannot apply {u.shape[0]}x{u.shape[1]} matrix to vector of dim {v.shape[0]}")
    return u @ v


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues descending."""
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.eigenvectors * self.eigenvalues) @ np.conj(self.eigenvectors).T


def is_square(m) -> bool:
    arr = np.asarray(m)
    return arr.ndim == 2 and arr.shape[0] == arr.shape[1]


def is_hermitian(m, tol: Optional[float] = None) -> bool:
    tol = get_config().structure_tol if tol is None else tol
    if not is_square(m):
        return False
    arr = as_matrix(m)
    return bool(np.max(np.abs(arr - np.conj(arr).T)) <= tol)


def hermitian_eig(m, tol: Optional[float] = None) -> Spectrum:
    """Eigen-decompose a Hermitian matrix; eigenvalues are returned descending."""
    arr = as_matrix(m)
    if not is_square(arr):
        raise DimensionError(f"Eigen-decomposition needs a square matrix, got {arr.shape}")
    if not is_hermitian(arr, tol):
        raise NotHermitianError("Eigen-decomposition requested for a non-Hermitian matrix")

    # Symmetrise away roundoff before handing to LAPACK
    herm = (arr + np.conj(arr).T) / 2
    try:
        values, vectors = scipy.linalg.eigh(herm)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as e:
        logger.error(f"Eigen-solver failed on {arr.shape[0]}x{arr.shape[0]} matrix: {e}")
        raise ConvergenceError(str(e)) from e

    order = np.argsort(values)[::-1]
    return Spectrum(eigenvalues=values[order], eigenvectors=vectors[:, order])


def check_unitary(m, tol: Optional[float] = None) -> bool:
    """True iff max |m†m − I| <= tol."""
    tol = get_config().structure_tol if tol is None else tol
    if not is_square(m):
        return False
    arr = as_matrix(m)
    gram = np.conj(arr).T @ arr
    return bool(np.max(np.abs(gram - identity(arr.shape[0]))) <= tol)


def check_density(m, tol: Optional[float] = None) -> bool:
    """True iff Hermitian, unit trace and positive semidefinite within tol."""
    tol = get_config().structure_tol if tol is None else tol
    if not is_square(m):
        return False
    arr = as_matrix(m)
    if not is_hermitian(arr, tol):
        return False
    if abs(np.trace(arr) - 1.0) > tol:
        return False
    values = scipy.linalg.eigvalsh((arr + np.conj(arr).T) / 2)
    return bool(np.all(values >= -tol))


def clip_eigenvalues(values: np.ndarray, clip: Optional[float] = None) -> np.ndarray:
    """Zero out eigenvalues with magnitude at or below clip, and any negatives."""
    clip = get_config().eig_clip if clip is None else clip
    values = np.real(np.asarray(values, dtype=np.complex128))
    return np.where(values > clip, values, 0.0)
