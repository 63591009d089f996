"""Constructions of frames, fusion frames and packings.

Character-table constructions (equiangular tight frames from difference
sets, equichordal tight fusion frames from semiregular divisible
difference sets, their sparse re-basing), Kronecker new-from-old
constructions, orthogonal complements, and the sequency-ordered
Walsh-Hadamard family.

All element, character and set orderings are canonical (lexicographic),
so every construction is bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from .abelian import (
    AbelianGroup,
    Character,
    GroupElement,
    Subgroup,
    annihilator,
    coset_reps,
    element_to_json,
    group_to_json,
)
from .designs import (
    DDSParams,
    classify_dds,
    classify_difference_set,
    is_semiregular,
)
from .errors import (
    CapacityError,
    DomainError,
    InvalidParameterError,
    PreconditionError,
)
from .frames import FusionFrame, fusion_frame
from .matcore import as_matrix, max_abs

UNITARY_TOL = 1e-8
WALSH_MAX_LOG = 12


@dataclass(frozen=True)
class DDSConstructionInput:
    """Verified ingredients for the divisible-difference-set construction."""

    group: AbelianGroup
    subgroup: Subgroup
    dset: tuple[GroupElement, ...]
    params: DDSParams

    def __post_init__(self):
        object.__setattr__(
            self, "dset", tuple(sorted(set(self.dset), key=lambda e: e.coords))
        )
        found = classify_dds(self.group, self.subgroup, self.dset)
        if found != self.params:
            raise PreconditionError(
                f"set does not verify as a divisible difference set with {self.params}"
            )
        if not is_semiregular(self.params):
            raise PreconditionError("divisible difference set is not semiregular")

    def provenance(self, construction: str) -> dict:
        return {
            "construction": construction,
            "group": group_to_json(self.group),
            "subgroup_generators": [
                element_to_json(e) for e in self.subgroup.elements
            ],
            "set": [element_to_json(d) for d in self.dset],
            "params": self.params.to_json(),
        }


def dds_input(
    G: AbelianGroup, N: Subgroup, D: Iterable[GroupElement]
) -> DDSConstructionInput:
    """Classify D and package it; raises if it is not a semiregular DDS."""
    D = tuple(D)
    params = classify_dds(G, N, D)
    if params is None:
        raise PreconditionError("set is not a divisible difference set")
    return DDSConstructionInput(G, N, D, params)


def _character_column(chi: Character, D: Sequence[GroupElement], scale: float) -> np.ndarray:
    return np.array([chi(g) for g in D], dtype=np.complex128) * scale


def etf_from_ds(G: AbelianGroup, D: Iterable[GroupElement]) -> np.ndarray:
    """Unit-norm vectors (chi(g))_{g in D} / sqrt(k) over all characters.

    The columns form an equiangular tight frame exactly because D is a
    difference set; anything else is rejected.
    """
    D = tuple(sorted(set(D), key=lambda e: e.coords))
    params = classify_difference_set(G, D)
    if params is None:
        raise PreconditionError("set is not a difference set")
    scale = 1.0 / math.sqrt(params.k)
    cols = [_character_column(chi, D, scale) for chi in G.characters()]
    return np.stack(cols, axis=1)


def ectff_from_dds(inp: DDSConstructionInput) -> FusionFrame:
    """Equichordal tight fusion frame from a semiregular DDS.

    Subspace blocks collect the difference-set rows of the character
    table, one block per coset of the annihilator of N in the dual
    group: block i, column j is (chi_i eta_j)(g) / sqrt(k) over g in D.
    """
    G, N, D = inp.group, inp.subgroup, inp.dset
    k = len(D)
    scale = 1.0 / math.sqrt(k)
    ann = annihilator(G, N)
    etas = [Character(b) for b in ann.elements]
    reps = [Character(b) for b in coset_reps(G, ann)]
    bases = []
    for chi in reps:
        cols = [_character_column(chi * eta, D, scale) for eta in etas]
        bases.append(np.stack(cols, axis=1))
    return fusion_frame(bases, provenance=inp.provenance("dds_ectff"))


def sparsify(inp: DDSConstructionInput) -> FusionFrame:
    """Re-basis the DDS construction so each vector has support k/m.

    Right-multiplying each block by the adjoint of the unitary
    U[l, j] = eta_j(h_l)/sqrt(m) (h_l coset representatives of G/N)
    keeps the subspaces and concentrates every column on one coset of N
    inside D, with constant modulus sqrt(m/k) there.
    """
    base = ectff_from_dds(inp)
    G, N = inp.group, inp.subgroup
    ann = annihilator(G, N)
    etas = [Character(b) for b in ann.elements]
    hreps = coset_reps(G, N)
    m = len(etas)
    U = np.array(
        [[eta(h) for eta in etas] for h in hreps], dtype=np.complex128
    ) / math.sqrt(m)
    bases = [L @ U.conj().T for L in base.bases]
    return fusion_frame(bases, provenance=inp.provenance("dds_sparse"))


def tensor_with_unitaries(
    ff: FusionFrame, unitaries: Sequence[np.ndarray]
) -> FusionFrame:
    """Kronecker each block with its own r x r unitary.

    Produces n subspaces of dimension r*m in F^(r*k); equichordality,
    strong simpliciality, equiisoclinicity and tightness (with the same
    bound) transfer in both directions.
    """
    Us = [as_matrix(U) for U in unitaries]
    if len(Us) != ff.n:
        raise InvalidParameterError(
            f"need one unitary per subspace ({ff.n}), got {len(Us)}"
        )
    r = Us[0].shape[0]
    if r < 1:
        raise InvalidParameterError("unitaries must be at least 1x1")
    for U in Us:
        if U.shape != (r, r):
            raise DomainError("unitaries must share a square shape")
        if max_abs(U.conj().T @ U - np.eye(r)) > UNITARY_TOL:
            raise DomainError("matrix is not unitary within tolerance")
    bases = [np.kron(L, U) for L, U in zip(ff.bases, Us)]
    return fusion_frame(
        bases,
        provenance={"construction": "tensor_with_unitaries", "r": r, "base": ff.provenance},
    )


def tensor_packings(ffW: FusionFrame, ffV: FusionFrame) -> FusionFrame:
    """Kronecker two packings block by block (the second acts as partial
    isometries).  Tight iff both are, with the product of the bounds."""
    if ffW.n != ffV.n:
        raise InvalidParameterError(
            f"subspace counts differ: {ffW.n} vs {ffV.n}"
        )
    bases = [np.kron(W, V) for W, V in zip(ffW.bases, ffV.bases)]
    return fusion_frame(
        bases,
        provenance={
            "construction": "tensor_packings",
            "left": ffW.provenance,
            "right": ffV.provenance,
        },
    )


def complement(ff: FusionFrame) -> FusionFrame:
    """Orthogonal complement of every subspace.

    Preserves tightness, equichordality, strong simpliciality and
    orthoplecticity; equiisoclinicity is *not* preserved in general.
    The basis of each complement is any deterministic orthonormal null
    space basis; only the subspace is the contract.
    """
    if ff.m >= ff.k:
        raise InvalidParameterError("complement needs m < k")
    bases = []
    for L in ff.bases:
        A = L.conj().T
        if ff.field == "R":
            null = scipy.linalg.null_space(A.real)
        else:
            null = scipy.linalg.null_space(A)
        bases.append(null.astype(np.complex128))
    return fusion_frame(
        bases,
        field=ff.field,
        provenance={"construction": "complement", "base": ff.provenance},
    )


def walsh_hadamard_sequency(n: int) -> np.ndarray:
    """2^n x 2^n +-1 matrix whose row j has exactly j sign changes.

    Generated by sorting the rows of the Sylvester Kronecker power by
    sign-change count; the count invariant is asserted afterwards.
    """
    if not 1 <= n <= WALSH_MAX_LOG:
        raise CapacityError(f"size exponent must be in [1, {WALSH_MAX_LOG}]")
    H = scipy.linalg.hadamard(2**n, dtype=np.int8)
    changes = (H[:, 1:] != H[:, :-1]).sum(axis=1)
    W = H[np.argsort(changes)].astype(np.float64)
    resorted = (W[:, 1:] != W[:, :-1]).sum(axis=1)
    if not np.array_equal(resorted, np.arange(2**n)):
        raise AssertionError("sequency ordering failed")  # pragma: no cover
    return W


def walsh_tff(n: int, m: int) -> FusionFrame:
    """Equiisoclinic tight fusion frame from truncated Walsh rows.

    2^(n-m) subspaces of dimension 2^m in F^(2^n - 2^m); subspace i is
    spanned by columns i + k*2^(n-m) of the sequency matrix restricted
    to rows 2^m and up.  The frame bound is 2^n/(2^n - 2^m) and the
    isoclinicity parameter (2^m/(2^n - 2^m))^2.
    """
    if not (1 <= m < n <= 10):
        raise InvalidParameterError("need 1 <= m < n <= 10")
    W = walsh_hadamard_sequency(n)
    rows = W[2**m :, :]
    stride = 2 ** (n - m)
    scale = 1.0 / math.sqrt(2**n - 2**m)
    bases = []
    for i in range(stride):
        cols = [i + j * stride for j in range(2**m)]
        bases.append(rows[:, cols] * scale)
    return fusion_frame(
        bases,
        field="R",
        provenance={"construction": "walsh_tff", "n": n, "m": m},
    )
