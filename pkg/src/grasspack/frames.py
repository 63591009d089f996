"""Frames and fusion frames.

A fusion frame is held as n orthonormal k-by-m basis blocks; queries
(tightness, coherence, flatness, the Welch bound) are pure functions on
top.  Tightness detection verifies the theoretical bound m*n/k instead of
fitting a constant, which gives sharper diagnostics when it fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, InvalidParameterError
from .matcore import as_matrix, matrix_from_json, matrix_to_json, max_abs

ONB_TOL = 1e-8
REAL_DETECT_TOL = 1e-10


@dataclass(eq=False)
class FusionFrame:
    """n subspaces of dimension m in F^k, each given by an orthonormal
    basis block; weights are always 1 and dimensions equal."""

    k: int
    m: int
    n: int
    bases: tuple[np.ndarray, ...]
    field: str  # "R" or "C"
    provenance: dict | None = None

    def block(self, i: int) -> np.ndarray:
        return self.bases[i]

    def projections(self) -> list[np.ndarray]:
        return [L @ L.conj().T for L in self.bases]


def fusion_frame(
    bases: Sequence[np.ndarray],
    field: str | None = None,
    provenance: dict | None = None,
    tol: float = ONB_TOL,
) -> FusionFrame:
    """Validate basis blocks and assemble a :class:`FusionFrame`.

    Every block must be k x m with orthonormal columns within ``tol``.
    The scalar field is detected from the imaginary parts unless declared.
    """
    blocks = [as_matrix(B) for B in bases]
    if not blocks:
        raise InvalidParameterError("need at least one subspace")
    k, m = blocks[0].shape
    if not 1 <= m <= k:
        raise InvalidParameterError(f"subspace dimension {m} not in [1, {k}]")
    for i, B in enumerate(blocks):
        if B.shape != (k, m):
            raise DomainError(f"block {i} has shape {B.shape}, expected {(k, m)}")
        gram = B.conj().T @ B
        if max_abs(gram - np.eye(m)) > tol:
            raise DomainError(f"block {i} does not have orthonormal columns")
    max_imag = max(max_abs(B.imag) for B in blocks)
    if field is None:
        field = "R" if max_imag <= REAL_DETECT_TOL else "C"
    elif field not in ("R", "C"):
        raise InvalidParameterError("field must be 'R' or 'C'")
    elif field == "R" and max_imag > REAL_DETECT_TOL:
        raise DomainError("declared real but entries have imaginary parts")
    frozen = []
    for B in blocks:
        B = B.copy()
        B.flags.writeable = False
        frozen.append(B)
    return FusionFrame(k, m, len(blocks), tuple(frozen), field, provenance)


def synthesis(ff: FusionFrame) -> np.ndarray:
    """Horizontal concatenation of the basis blocks, k x (m*n)."""
    return np.hstack(ff.bases)


def tight_bound(ff: FusionFrame, tol: float) -> float | None:
    """m*n/k if the projections sum to that multiple of the identity
    within ``tol`` entrywise, else None."""
    if tol <= 0:
        raise InvalidParameterError("tolerance must be positive")
    bound = ff.m * ff.n / ff.k
    total = sum(ff.projections())
    if max_abs(total - bound * np.eye(ff.k)) <= tol:
        return bound
    return None


def coherence(vectors, tol: float = ONB_TOL) -> float:
    """Largest pairwise |inner product| among unit-norm columns."""
    V = as_matrix(vectors)
    if V.shape[1] < 2:
        raise InvalidParameterError("coherence needs at least two vectors")
    norms = np.linalg.norm(V, axis=0)
    if np.max(np.abs(norms - 1.0)) > tol:
        raise DomainError("columns must be unit norm")
    gram = np.abs(V.conj().T @ V)
    np.fill_diagonal(gram, 0.0)
    return float(np.max(gram))


def welch_bound(n: int, k: int) -> float:
    """sqrt((n-k)/(k(n-1))), the coherence floor for n unit vectors in F^k."""
    if k < 1 or n <= k:
        raise InvalidParameterError("bound requires n > k >= 1")
    return math.sqrt((n - k) / (k * (n - 1)))


def is_etf(vectors, tol: float) -> bool:
    """Tight with equal-modulus pairwise inner products, all within tol."""
    V = as_matrix(vectors)
    k, n = V.shape
    norms = np.linalg.norm(V, axis=0)
    if np.max(np.abs(norms - 1.0)) > ONB_TOL:
        raise DomainError("columns must be unit norm")
    if max_abs(V @ V.conj().T - (n / k) * np.eye(k)) > tol:
        return False
    if n < 2:
        return True
    gram = np.abs(V.conj().T @ V)
    offdiag = gram[~np.eye(n, dtype=bool)]
    return float(np.max(offdiag) - np.min(offdiag)) <= tol


@dataclass(frozen=True)
class FlatnessClass:
    """Entry-modulus profile of a synthesis matrix."""

    kind: str  # "flat" | "almost_flat" | "neither"
    magnitude: float | None
    support_sizes: tuple[int, ...] | None

    @property
    def is_flat(self) -> bool:
        return self.kind == "flat"

    def to_json(self) -> dict:
        return {
            "class": self.kind,
            "magnitude": self.magnitude,
            "support_sizes": list(self.support_sizes)
            if self.support_sizes is not None
            else None,
        }


def flatness(ff: FusionFrame, tol: float = 1e-8, zero_tol: float = 1e-8) -> FlatnessClass:
    """Classify the synthesis entries: all moduli equal (flat), all
    nonzero moduli equal (almost flat), or neither."""
    moduli = np.abs(synthesis(ff))
    support = moduli > zero_tol
    support_sizes = tuple(int(c) for c in support.sum(axis=0))
    if float(moduli.max() - moduli.min()) <= tol:
        return FlatnessClass("flat", float(moduli.mean()), support_sizes)
    nonzero = moduli[support]
    if nonzero.size and float(nonzero.max() - nonzero.min()) <= tol:
        return FlatnessClass("almost_flat", float(nonzero.mean()), support_sizes)
    return FlatnessClass("neither", None, support_sizes)


# --- JSON wire format ---------------------------------------------------

def fusion_frame_to_json(ff: FusionFrame) -> dict:
    doc = {
        "field": ff.field,
        "k": ff.k,
        "m": ff.m,
        "n": ff.n,
        "bases": [matrix_to_json(B) for B in ff.bases],
    }
    if ff.provenance is not None:
        doc["provenance"] = ff.provenance
    return doc


def fusion_frame_from_json(doc: dict) -> FusionFrame:
    bases = [matrix_from_json(b) for b in doc["bases"]]
    ff = fusion_frame(bases, field=doc.get("field"), provenance=doc.get("provenance"))
    for name in ("k", "m", "n"):
        if name in doc and int(doc[name]) != getattr(ff, name):
            raise DomainError(f"fusion frame JSON field {name!r} disagrees with bases")
    return ff
