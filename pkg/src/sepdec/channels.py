"""Holevo-form channels, Choi matrices, and QC/CQ detection.

A channel in Holevo form acts as Phi(X) = sum_k tr(F_k X) R_k with PSD F_k
and density matrices R_k; it is trace preserving iff sum_k F_k = I.  Its
Choi matrix is sum_k F_k^t (x) R_k, with the entrywise transpose taken in
the fixed standard basis (the transpose is basis dependent, so the basis
is part of the contract).

Quantum-classical channels are exactly those whose Choi matrix admits an
orthogonal decomposition on the B side and has identity B-marginal;
classical-quantum channels are the mirror image on the A side.  Detection
reuses the canonical decomposition pipeline and, on success, produces an
explicit Holevo-form witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bipartite import BipartiteMatrix, blocks, partial_trace_B, swap_sides
from .decompose import b_orthogonal_form
from .errors import NotBOrthogonalError, ShapeMismatchError
from .matcore import DEFAULT_TOL, ToleranceConfig, as_complex_matrix, herm_eig, kron

QC = "QC"
CQ = "CQ"
ORTHOGONAL_ONLY = "orthogonal_only"
NOT_DETECTED = "none"


@dataclass(frozen=True)
class HolevoForm:
    """Channel data Phi(X) = sum_k tr(F_k X) R_k.

    F_k are m x m PSD, R_k are n x n densities.  The form is not unique;
    two forms describe the same channel iff their actions agree, so
    comparisons should always go through apply().
    """

    m: int
    n: int
    pairs: list

    def __post_init__(self):
        for f, r in self.pairs:
            if f.shape != (self.m, self.m) or r.shape != (self.n, self.n):
                raise ShapeMismatchError(
                    f"pair shapes {f.shape}, {r.shape} do not match (m, n) = "
                    f"({self.m}, {self.n})"
                )

    def apply(self, x) -> np.ndarray:
        x = as_complex_matrix(x, "X")
        if x.shape != (self.m, self.m):
            raise ShapeMismatchError(f"input shape {x.shape}, expected {(self.m, self.m)}")
        out = np.zeros((self.n, self.n), dtype=np.complex128)
        for f, r in self.pairs:
            out += np.trace(f @ x) * r
        return out

    def is_trace_preserving(self, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
        total = sum(f for f, _ in self.pairs)
        return bool(
            np.linalg.norm(total - np.eye(self.m)) <= tol.tol_recon * np.sqrt(self.m)
        )


@dataclass(frozen=True)
class ChannelClass:
    """Detection outcome: QC, CQ, orthogonal_only, or none.

    orthogonal_only marks the diagnostic gap between the orthogonality
    structure holding and the Choi marginal actually being the identity;
    witnesses are attached only for the QC/CQ kinds.
    """

    kind: str
    witness: Optional[HolevoForm] = None


def choi_of_holevo(h: HolevoForm) -> BipartiteMatrix:
    """Choi matrix sum_k F_k^t (x) R_k of a Holevo-form channel."""
    mat = np.zeros((h.m * h.n,) * 2, dtype=np.complex128)
    for f, r in h.pairs:
        mat += kron(f.T, r)
    return BipartiteMatrix(m=h.m, n=h.n, mat=mat)


def apply_channel_from_choi(c: BipartiteMatrix, x) -> np.ndarray:
    """Evaluate the channel with Choi matrix C on X: sum_ij X[i,j] C_ij."""
    x = as_complex_matrix(x, "X")
    if x.shape != (c.m, c.m):
        raise ShapeMismatchError(f"input shape {x.shape}, expected {(c.m, c.m)}")
    return np.einsum("ij,ijkl->kl", x, blocks(c).blocks)


def is_trace_preserving_choi(
    c: BipartiteMatrix, tol: ToleranceConfig = DEFAULT_TOL
) -> bool:
    """Whether tr_B C = I_m, i.e. the channel is trace preserving."""
    return bool(
        np.linalg.norm(partial_trace_B(c) - np.eye(c.m)) <= tol.tol_recon * np.sqrt(c.m)
    )


def _rank_one_split(mat: np.ndarray, tol: ToleranceConfig):
    """Eigenpairs (value, projection) above the relative rank cutoff."""
    sys = herm_eig(mat, tol)
    cut = tol.tol_rank * max(float(sys.values.max(initial=0.0)), 0.0)
    out = []
    for k in range(len(sys.values)):
        if sys.values[k] > cut:
            v = sys.vectors[:, k]
            out.append((float(sys.values[k]), np.outer(v, v.conj())))
    return out


def detect_qc(c: BipartiteMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> ChannelClass:
    """Detect a quantum-classical channel from its Choi matrix.

    QC iff C is B-orthogonal and tr_B C = I.  The witness splits every
    decomposition term into rank-one R's and completes them to a full
    orthonormal resolution of I_n, pairing the padding with zero F's.
    """
    try:
        cd = b_orthogonal_form(c, tol)
    except NotBOrthogonalError:
        return ChannelClass(kind=NOT_DETECTED)
    if not is_trace_preserving_choi(c, tol):
        return ChannelClass(kind=ORTHOGONAL_ONLY)
    pairs = []
    covered = np.zeros((c.n, c.n), dtype=np.complex128)
    for a, b in cd.terms:
        for value, proj in _rank_one_split(b, tol):
            pairs.append(((value * a).T, proj))
            covered += proj
    comp = np.eye(c.n) - covered
    comp = 0.5 * (comp + comp.conj().T)
    if np.linalg.norm(comp) > tol.tol_recon * np.sqrt(c.n):
        for value, proj in _rank_one_split(comp, tol):
            if value > 0.5:
                pairs.append((np.zeros((c.m, c.m), dtype=np.complex128), proj))
    return ChannelClass(kind=QC, witness=HolevoForm(m=c.m, n=c.n, pairs=pairs))


def detect_cq(c: BipartiteMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> ChannelClass:
    """Detect a classical-quantum channel from its Choi matrix.

    CQ iff C is A-orthogonal (the side-swapped matrix is B-orthogonal) and
    tr_B C = I.  Trace preservation forces the orthogonal A factors to be
    projections, so the witness F's are their rank-one splits transposed
    and the R's the unit-trace partners.
    """
    try:
        swapped = b_orthogonal_form(swap_sides(c), tol)
    except NotBOrthogonalError:
        return ChannelClass(kind=NOT_DETECTED)
    if not is_trace_preserving_choi(c, tol):
        return ChannelClass(kind=ORTHOGONAL_ONLY)
    pairs = []
    for u, w in swapped.terms:
        # c = sum w (x) u with w a positive multiple of a projection on the
        # A side; each rank-one piece value * proj of w contributes
        # F^t = proj, R = value * u
        for value, proj in _rank_one_split(w, tol):
            pairs.append((proj.T, value * u))
    return ChannelClass(kind=CQ, witness=HolevoForm(m=c.m, n=c.n, pairs=pairs))
