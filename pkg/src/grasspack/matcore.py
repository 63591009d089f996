"""Dense complex matrix kernel.

Thin, contract-checked wrappers over numpy/LAPACK: Kronecker products,
Hermitian spectra, singular values, orthonormality tests, and the JSON
wire format used by every matrix-valued interface.  Decompositions are
capped at 512x512; this package only targets desk-scale fixtures.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import CapacityError, DomainError, InvalidParameterError

DECOMPOSITION_CAP = 512


def as_matrix(entries, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Coerce to a 2-d complex128 array, optionally checking the shape."""
    A = np.asarray(entries, dtype=np.complex128)
    if A.ndim != 2:
        raise DomainError(f"expected a matrix, got ndim={A.ndim}")
    if rows is not None and A.shape[0] != rows:
        raise DomainError(f"expected {rows} rows, got {A.shape[0]}")
    if cols is not None and A.shape[1] != cols:
        raise DomainError(f"expected {cols} columns, got {A.shape[1]}")
    return A


def max_abs(A: np.ndarray) -> float:
    """Entrywise max-modulus norm; 0 for empty arrays."""
    if A.size == 0:
        return 0.0
    return float(np.max(np.abs(A)))


def kron(A, B) -> np.ndarray:
    """Kronecker product, block a_ij * B."""
    return np.kron(as_matrix(A), as_matrix(B))


def _check_decomposition_size(A: np.ndarray) -> None:
    if max(A.shape, default=0) > DECOMPOSITION_CAP:
        raise CapacityError(
            f"decompositions limited to {DECOMPOSITION_CAP}x{DECOMPOSITION_CAP}"
        )


def hermitian_eigenvalues(A, tol: float = 1e-8) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, descending."""
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise DomainError("matrix must be square")
    _check_decomposition_size(A)
    if max_abs(A - A.conj().T) > tol:
        raise DomainError("matrix is not Hermitian within tolerance")
    return np.linalg.eigvalsh(A)[::-1]


def singular_values(A) -> np.ndarray:
    """Singular values, descending and nonnegative."""
    A = as_matrix(A)
    _check_decomposition_size(A)
    if A.size == 0:
        return np.zeros(min(A.shape))
    return np.linalg.svd(A, compute_uv=False)


def is_orthonormal_columns(L, tol: float) -> bool:
    """True iff L*L is the identity within entrywise tolerance."""
    if tol <= 0:
        raise InvalidParameterError("tolerance must be positive")
    L = as_matrix(L)
    if L.shape[1] == 0:
        return True
    gram = L.conj().T @ L
    return max_abs(gram - np.eye(L.shape[1])) <= tol


# --- JSON wire format ---------------------------------------------------

def matrix_to_json(A) -> dict:
    """Row-major [re, im] pairs; floats keep full double precision."""
    A = as_matrix(A)
    return {
        "rows": int(A.shape[0]),
        "cols": int(A.shape[1]),
        "entries": [[float(z.real), float(z.imag)] for z in A.reshape(-1)],
    }


def matrix_from_json(doc: dict) -> np.ndarray:
    rows, cols = int(doc["rows"]), int(doc["cols"])
    entries: Sequence[Sequence[float]] = doc["entries"]
    if len(entries) != rows * cols:
        raise DomainError(
            f"matrix JSON claims {rows}x{cols} but carries {len(entries)} entries"
        )
    flat = np.array(
        [complex(re, im) for re, im in entries], dtype=np.complex128
    )
    return flat.reshape(rows, cols)
