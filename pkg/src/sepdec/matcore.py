"""Dense complex-matrix primitives with tolerance-aware spectral operations.

All matrices are plain ``numpy.ndarray`` of complex dtype.  Every cutoff is
relative: ranks and supports are measured against the largest eigenvalue
magnitude, and defect norms against the scale of the operands, so results are
invariant under rescaling the input.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields

import numpy as np

from .errors import NotHermitianError, NotPSDError, NotSquareError, ShapeMismatchError


@dataclass(frozen=True)
class ToleranceConfig:
    """Relative tolerances shared by all spectral and certification routines.

    tol_herm     allowed Hermiticity defect before a matrix is rejected
    tol_psd      allowed negative eigenvalue (relative to the spectral radius)
    tol_rank     eigenvalue cutoff for numerical rank and support
    tol_normal   normality defect cutoff for block checks
    tol_commute  commutator norm cutoff for block checks
    tol_cluster  eigenvalue-gap threshold for joint-eigenspace clustering
    tol_recon    relative Frobenius residual allowed in reconstructions
    """

    tol_herm: float = 1e-10
    tol_psd: float = 1e-9
    tol_rank: float = 1e-9
    tol_normal: float = 1e-10
    tol_commute: float = 1e-10
    tol_cluster: float = 1e-8
    tol_recon: float = 1e-9

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not (0.0 < v < 1.0):
                raise ValueError(f"{f.name} must lie in (0, 1), got {v!r}")

    def replace(self, **kwargs) -> "ToleranceConfig":
        """Copy with the given tolerances overridden."""
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update(kwargs)
        return ToleranceConfig(**values)


DEFAULT_TOL = ToleranceConfig()


@dataclass(frozen=True)
class HermitianEigenSystem:
    """Spectral decomposition M = V diag(w) V† with w sorted descending."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.vectors
        return (v * self.values) @ v.conj().T


def as_complex_matrix(mat, name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-D complex128 array, rejecting non-finite entries."""
    arr = np.asarray(mat, dtype=np.complex128)
    if arr.ndim != 2:
        raise ShapeMismatchError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def _require_square(mat: np.ndarray, name: str = "matrix") -> np.ndarray:
    if mat.shape[0] != mat.shape[1]:
        raise NotSquareError(f"{name} must be square, got shape {mat.shape}")
    return mat


def hermitian_part(mat: np.ndarray) -> np.ndarray:
    return 0.5 * (mat + mat.conj().T)


def herm_defect(mat: np.ndarray) -> float:
    """Relative Frobenius distance of a square matrix from its Hermitian part."""
    nrm = np.linalg.norm(mat)
    if nrm == 0.0:
        return 0.0
    return float(np.linalg.norm(mat - mat.conj().T) / nrm)


def herm_eig(mat, tol: ToleranceConfig = DEFAULT_TOL) -> HermitianEigenSystem:
    """Eigendecompose a Hermitian matrix, eigenvalues descending.

    Inputs whose Hermiticity defect is below ``tol_herm`` are symmetrized
    first; larger defects raise ``NotHermitianError``.
    """
    m = _require_square(as_complex_matrix(mat))
    defect = herm_defect(m)
    if defect > tol.tol_herm:
        raise NotHermitianError(
            f"Hermiticity defect {defect:.3e} exceeds tol_herm={tol.tol_herm:.1e}"
        )
    w, v = np.linalg.eigh(hermitian_part(m))
    order = np.argsort(w)[::-1]
    return HermitianEigenSystem(values=w[order], vectors=v[:, order])


def _psd_eig(mat, tol: ToleranceConfig) -> HermitianEigenSystem:
    """herm_eig plus a PSD check; small negative eigenvalues are clamped to 0."""
    sys = herm_eig(mat, tol)
    w = sys.values
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    if scale == 0.0:
        return sys
    if w[-1] < -tol.tol_psd * scale:
        raise NotPSDError(
            f"eigenvalue {w[-1]:.3e} below -tol_psd*lambda_max={-tol.tol_psd * scale:.3e}"
        )
    return HermitianEigenSystem(values=np.maximum(w, 0.0), vectors=sys.vectors)


def _support_mask(values: np.ndarray, tol_rank: float) -> np.ndarray:
    scale = float(values.max(initial=0.0))
    if scale <= 0.0:
        return np.zeros(values.shape, dtype=bool)
    return values > tol_rank * scale


def rank_tol(mat, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Numerical rank of a PSD matrix: eigenvalues above tol_rank * lambda_max."""
    sys = _psd_eig(mat, tol)
    return int(np.count_nonzero(_support_mask(sys.values, tol.tol_rank)))


def support_projection(mat, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Orthogonal projection onto the numerical image of a PSD matrix."""
    sys = _psd_eig(mat, tol)
    keep = _support_mask(sys.values, tol.tol_rank)
    v = sys.vectors[:, keep]
    return v @ v.conj().T


def pseudo_inverse(mat, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Penrose pseudo-inverse of a PSD matrix (zero on the numerical kernel)."""
    sys = _psd_eig(mat, tol)
    keep = _support_mask(sys.values, tol.tol_rank)
    inv = np.zeros_like(sys.values)
    inv[keep] = 1.0 / sys.values[keep]
    v = sys.vectors
    return (v * inv) @ v.conj().T


def psd_sqrt(mat, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """PSD square root with the same numerical support as the input."""
    sys = _psd_eig(mat, tol)
    keep = _support_mask(sys.values, tol.tol_rank)
    root = np.zeros_like(sys.values)
    root[keep] = np.sqrt(sys.values[keep])
    v = sys.vectors
    return (v * root) @ v.conj().T


def is_normal(mat, tol: ToleranceConfig = DEFAULT_TOL, floor: float = 0.0) -> bool:
    """Whether ||M M† - M† M||_F <= tol_normal * max(||M||_F², floor).

    ``floor`` is an absolute scale floor so that negligibly small blocks of a
    larger matrix pass the check instead of dividing by their own tiny norm.
    """
    m = _require_square(as_complex_matrix(mat))
    defect = np.linalg.norm(m @ m.conj().T - m.conj().T @ m)
    ref = max(float(np.linalg.norm(m)) ** 2, floor)
    if ref == 0.0:
        return True
    return bool(defect <= tol.tol_normal * ref)


def normal_defect(mat: np.ndarray) -> float:
    """Absolute Frobenius norm of M M† - M† M."""
    return float(np.linalg.norm(mat @ mat.conj().T - mat.conj().T @ mat))


def commutes(
    a, b, tol: ToleranceConfig = DEFAULT_TOL, floor: float = 0.0
) -> bool:
    """Whether ||AB - BA||_F <= tol_commute * max(||A||_F ||B||_F, floor)."""
    ma = _require_square(as_complex_matrix(a, "A"))
    mb = _require_square(as_complex_matrix(b, "B"))
    if ma.shape != mb.shape:
        raise ShapeMismatchError(f"shapes differ: {ma.shape} vs {mb.shape}")
    defect = np.linalg.norm(ma @ mb - mb @ ma)
    ref = max(float(np.linalg.norm(ma)) * float(np.linalg.norm(mb)), floor)
    if ref == 0.0:
        return True
    return bool(defect <= tol.tol_commute * ref)


def commute_defect(a: np.ndarray, b: np.ndarray) -> float:
    """Absolute Frobenius norm of AB - BA."""
    return float(np.linalg.norm(a @ b - b @ a))


def kron(a, b) -> np.ndarray:
    """Kronecker product with the row-major block convention."""
    return np.kron(as_complex_matrix(a, "A"), as_complex_matrix(b, "B"))
