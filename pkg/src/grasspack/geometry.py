"""Chordal geometry of subspace packings.

Distances, principal angles, the equichordal / strongly simplicial /
equiisoclinic trichotomy, and the simplex / orthoplex / Gerzon bounds.
Principal angles follow the standard convention: their cosines are the
singular values of Li* Lj, so the eigenvalues of Li* Lj Lj* Li are the
squared cosines.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .errors import DomainError, InvalidParameterError
from .frames import ONB_TOL, FusionFrame, tight_bound
from .matcore import as_matrix, max_abs

TRACE_TOL = 1e-8
SPECTRUM_TOL = 1e-7
ALPHA_TOL = 1e-8


def _check_block_pair(Li, Lj) -> tuple[np.ndarray, np.ndarray]:
    Li, Lj = as_matrix(Li), as_matrix(Lj)
    if Li.shape != Lj.shape:
        raise DomainError(f"shape mismatch: {Li.shape} vs {Lj.shape}")
    for B in (Li, Lj):
        if max_abs(B.conj().T @ B - np.eye(B.shape[1])) > ONB_TOL:
            raise DomainError("blocks must have orthonormal columns")
    return Li, Lj


def cross_gram_product(Li, Lj) -> np.ndarray:
    """Li* Lj Lj* Li, the m x m Hermitian pair matrix."""
    Li, Lj = _check_block_pair(Li, Lj)
    C = Li.conj().T @ Lj
    return C @ C.conj().T


def chordal_distance_sq(Li, Lj) -> float:
    """m - trace(Li* Lj Lj* Li), clamped to [0, m]."""
    Li, Lj = _check_block_pair(Li, Lj)
    m = Li.shape[1]
    C = Li.conj().T @ Lj
    value = m - float(np.real(np.trace(C @ C.conj().T)))
    return min(max(value, 0.0), float(m))


def principal_angles(Li, Lj) -> np.ndarray:
    """Angles in [0, pi/2], ascending; cosines are the singular values
    of Li* Lj."""
    Li, Lj = _check_block_pair(Li, Lj)
    sigma = np.linalg.svd(Li.conj().T @ Lj, compute_uv=False)
    return np.arccos(np.clip(sigma, 0.0, 1.0))


@dataclass(frozen=True)
class PackingClassification:
    """Pairwise structure of a packing; the three flags form a chain
    (equiisoclinic implies strongly simplicial implies equichordal)."""

    equichordal: bool
    strongly_simplicial: bool
    equiisoclinic: bool
    common_trace: float | None
    common_spectrum: tuple[float, ...] | None
    alpha: float | None

    def to_json(self) -> dict:
        return {
            "equichordal": self.equichordal,
            "strongly_simplicial": self.strongly_simplicial,
            "equiisoclinic": self.equiisoclinic,
            "common_trace": self.common_trace,
            "common_spectrum": list(self.common_spectrum)
            if self.common_spectrum is not None
            else None,
            "alpha": self.alpha,
        }


def classify(
    ff: FusionFrame,
    trace_tol: float = TRACE_TOL,
    spectrum_tol: float = SPECTRUM_TOL,
    alpha_tol: float = ALPHA_TOL,
) -> PackingClassification:
    """Classify a packing by its pair matrices Li* Lj Lj* Li.

    Traces decide equichordality, sorted spectra strong simpliciality,
    and closeness to alpha*I equiisoclinicity.  For tight frames the
    fitted alpha is cross-checked against (m*n - k)/(k*(n - 1)).
    """
    if ff.n < 2:
        raise InvalidParameterError("classification needs at least two subspaces")
    pairs = []
    for i in range(ff.n):
        for j in range(i + 1, ff.n):
            C = ff.bases[i].conj().T @ ff.bases[j]
            pairs.append(C @ C.conj().T)
    traces = np.array([float(np.real(np.trace(M))) for M in pairs])
    spectra = np.stack([np.linalg.eigvalsh(M)[::-1] for M in pairs])

    equichordal = float(traces.max() - traces.min()) <= trace_tol
    spread = float(np.max(spectra.max(axis=0) - spectra.min(axis=0)))
    strongly_simplicial = spread <= spectrum_tol

    alpha = float(traces.mean()) / ff.m
    eye = np.eye(ff.m)
    isoclinic_dev = max(max_abs(M - alpha * eye) for M in pairs)
    equiisoclinic = isoclinic_dev <= alpha_tol

    # the chain holds mathematically; make the reported flags honor it
    strongly_simplicial = strongly_simplicial or equiisoclinic
    equichordal = equichordal or strongly_simplicial

    if equiisoclinic and tight_bound(ff, 1e-8) is not None:
        theory = (ff.m * ff.n - ff.k) / (ff.k * (ff.n - 1))
        if abs(alpha - theory) > max(alpha_tol, 1e-6):
            raise DomainError(
                "equiisoclinic parameter inconsistent with the tight bound"
            )

    return PackingClassification(
        equichordal=equichordal,
        strongly_simplicial=strongly_simplicial,
        equiisoclinic=equiisoclinic,
        common_trace=float(traces.mean()) if equichordal else None,
        common_spectrum=tuple(float(x) for x in spectra.mean(axis=0))
        if strongly_simplicial
        else None,
        alpha=alpha if equiisoclinic else None,
    )


@dataclass(frozen=True)
class BoundsRecord:
    """Parameter-only packing bounds, exact where they are rational."""

    simplex_sq: Fraction
    orthoplex_sq: Fraction
    gerzon: int
    welch: float | None
    min_dist_sq: float | None = None
    max_dist_sq: float | None = None

    def to_json(self) -> dict:
        return {
            "simplex_sq": _fraction_json(self.simplex_sq),
            "orthoplex_sq": _fraction_json(self.orthoplex_sq),
            "gerzon": self.gerzon,
            "welch": self.welch,
            "min_dist_sq": self.min_dist_sq,
            "max_dist_sq": self.max_dist_sq,
        }


def _fraction_json(q: Fraction) -> dict:
    return {"num": q.numerator, "den": q.denominator}


def bounds(n: int, m: int, k: int, field: str) -> BoundsRecord:
    """Simplex, orthoplex, Gerzon and (for lines) Welch bounds."""
    if not 1 <= m <= k or n < 2:
        raise InvalidParameterError("need 1 <= m <= k and n >= 2")
    if field not in ("R", "C"):
        raise InvalidParameterError("field must be 'R' or 'C'")
    simplex = Fraction(m * (k - m) * n, k * (n - 1))
    orthoplex = Fraction(m * (k - m), k)
    gerzon = k * k if field == "C" else k * (k + 1) // 2
    welch = None
    if m == 1 and n > k:
        welch = float(np.sqrt((n - k) / (k * (n - 1))))
    return BoundsRecord(simplex, orthoplex, gerzon, welch)


def pairwise_distances_sq(ff: FusionFrame) -> np.ndarray:
    """Squared chordal distances over pairs i < j."""
    if ff.n < 2:
        raise InvalidParameterError("need at least two subspaces")
    out = []
    for i in range(ff.n):
        for j in range(i + 1, ff.n):
            C = ff.bases[i].conj().T @ ff.bases[j]
            value = ff.m - float(np.real(np.trace(C @ C.conj().T)))
            out.append(min(max(value, 0.0), float(ff.m)))
    return np.array(out)


@dataclass(frozen=True)
class SaturationRecord:
    """Whether the packing meets its distance bounds."""

    simplex_saturated: bool
    orthoplectic: bool
    bounds: BoundsRecord

    def to_json(self) -> dict:
        return {
            "simplex_saturated": self.simplex_saturated,
            "orthoplectic": self.orthoplectic,
            "bounds": self.bounds.to_json(),
        }


def check_saturation(
    ff: FusionFrame, field: str | None = None, tol: float = 1e-8
) -> SaturationRecord:
    """Compare the minimal pairwise distance with the simplex and
    orthoplex bounds; the orthoplex verdict also needs the subspace
    count to sit in (gerzon, 2*(gerzon - 1)]."""
    field = field or ff.field
    rec = bounds(ff.n, ff.m, ff.k, field)
    d2 = pairwise_distances_sq(ff)
    min_d2, max_d2 = float(d2.min()), float(d2.max())
    rec = replace(rec, min_dist_sq=min_d2, max_dist_sq=max_d2)
    simplex_saturated = abs(min_d2 - float(rec.simplex_sq)) <= tol
    in_orthoplex_range = rec.gerzon < ff.n <= 2 * (rec.gerzon - 1)
    orthoplectic = (
        abs(min_d2 - float(rec.orthoplex_sq)) <= tol and in_orthoplex_range
    )
    return SaturationRecord(simplex_saturated, orthoplectic, rec)
