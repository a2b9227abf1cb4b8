"""Bipartite structure on mn x mn matrices.

A matrix T acting on the tensor product of an m-dimensional A side and an
n-dimensional B side is stored dense with row-major product indexing: row
i*n + k pairs A-index i with B-index k.  The block grid of T collects the
n x n blocks T_ij so that T = sum_ij E_ij (x) T_ij; extracting and
reassembling blocks is pure reindexing and therefore bit-exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotPSDError, ShapeMismatchError, ZeroMatrixError
from .matcore import (
    DEFAULT_TOL,
    ToleranceConfig,
    as_complex_matrix,
    herm_eig,
    kron,
    pseudo_inverse,
    psd_sqrt,
    support_projection,
)


@dataclass(frozen=True)
class BipartiteMatrix:
    """An mn x mn complex matrix with its A/B factor dimensions."""

    m: int
    n: int
    mat: np.ndarray

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ShapeMismatchError(f"factor dimensions must be >= 1, got ({self.m}, {self.n})")
        mat = as_complex_matrix(self.mat)
        d = self.m * self.n
        if mat.shape != (d, d):
            raise ShapeMismatchError(
                f"matrix shape {mat.shape} does not match m*n = {self.m}*{self.n} = {d}"
            )
        object.__setattr__(self, "mat", mat)

    @property
    def dim(self) -> int:
        return self.m * self.n


@dataclass(frozen=True)
class BlockGrid:
    """The m x m grid of n x n blocks of a bipartite matrix.

    blocks[i, j] is the (i, j) block, i.e. the compression of the source to
    A-basis pair (i, j); stored as one (m, m, n, n) array.
    """

    m: int
    n: int
    blocks: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.blocks, dtype=np.complex128)
        if arr.shape != (self.m, self.m, self.n, self.n):
            raise ShapeMismatchError(
                f"block array shape {arr.shape}, expected {(self.m, self.m, self.n, self.n)}"
            )
        object.__setattr__(self, "blocks", arr)

    def block(self, i: int, j: int) -> np.ndarray:
        return self.blocks[i, j]


@dataclass(frozen=True)
class FilteredPair:
    """Output of the one-sided local filter.

    t_tilde is (I (x) (T_B^#)^(1/2)) T (I (x) (T_B^#)^(1/2)), t_b the B
    marginal of the original T, and p_b the projection onto the image of t_b.
    The original matrix is (I (x) t_b^(1/2)) t_tilde (I (x) t_b^(1/2)).
    """

    t_tilde: BipartiteMatrix
    t_b: np.ndarray
    p_b: np.ndarray


def blocks(t: BipartiteMatrix) -> BlockGrid:
    """Extract the block grid; blocks[i, j][k, l] = T[i*n+k, j*n+l]."""
    g = t.mat.reshape(t.m, t.n, t.m, t.n).transpose(0, 2, 1, 3)
    return BlockGrid(m=t.m, n=t.n, blocks=g.copy())


def from_blocks(g: BlockGrid) -> BipartiteMatrix:
    """Reassemble sum_ij E_ij (x) blocks[i, j]; inverse of blocks()."""
    d = g.m * g.n
    mat = g.blocks.transpose(0, 2, 1, 3).reshape(d, d)
    return BipartiteMatrix(m=g.m, n=g.n, mat=mat.copy())


def partial_trace_B(t: BipartiteMatrix) -> np.ndarray:
    """B-side partial trace: the m x m matrix of block traces tr(T_ij)."""
    return np.einsum("ikjk->ij", t.mat.reshape(t.m, t.n, t.m, t.n))


def partial_trace_A(t: BipartiteMatrix) -> np.ndarray:
    """A-side partial trace: the n x n sum of diagonal blocks T_ii."""
    return np.einsum("ikil->kl", t.mat.reshape(t.m, t.n, t.m, t.n))


def _check_state(t: BipartiteMatrix, tol: ToleranceConfig) -> None:
    sys = herm_eig(t.mat, tol)
    w = sys.values
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    if scale == 0.0:
        raise ZeroMatrixError("expected a nonzero positive matrix, got 0")
    if w[-1] < -tol.tol_psd * scale:
        raise NotPSDError(
            f"eigenvalue {w[-1]:.3e} below -tol_psd*scale = {-tol.tol_psd * scale:.3e}"
        )


def local_filter_B(t: BipartiteMatrix, tol: ToleranceConfig = DEFAULT_TOL) -> FilteredPair:
    """Filter T on the B side by the inverse square root of its marginal.

    Returns the pair (t_tilde, t_b) with
    t_tilde = (I (x) (t_b^#)^(1/2)) T (I (x) (t_b^#)^(1/2)).  The A-side
    partial trace of t_tilde is the support projection p_b of t_b, and
    conjugating t_tilde back by I (x) t_b^(1/2) recovers T.
    """
    _check_state(t, tol)
    t_b = partial_trace_A(t)
    filt = psd_sqrt(pseudo_inverse(t_b, tol), tol)
    f = kron(np.eye(t.m), filt)
    t_tilde = BipartiteMatrix(m=t.m, n=t.n, mat=f @ t.mat @ f)
    return FilteredPair(t_tilde=t_tilde, t_b=t_b, p_b=support_projection(t_b, tol))


def reconstruct(fp: FilteredPair, tol: ToleranceConfig = DEFAULT_TOL) -> BipartiteMatrix:
    """Undo the filter: (I (x) t_b^(1/2)) t_tilde (I (x) t_b^(1/2))."""
    tt = fp.t_tilde
    root = psd_sqrt(as_complex_matrix(fp.t_b, "t_b"), tol)
    if root.shape != (tt.n, tt.n):
        raise ShapeMismatchError(
            f"t_b shape {root.shape} does not match B dimension {tt.n}"
        )
    r = kron(np.eye(tt.m), root)
    return BipartiteMatrix(m=tt.m, n=tt.n, mat=r @ tt.mat @ r)


def swap_sides(t: BipartiteMatrix) -> BipartiteMatrix:
    """Exchange the roles of the A and B factors.

    Conjugates by the perfect-shuffle permutation sending e_i (x) f_k to
    f_k (x) e_i, so the result has dimensions (n, m).  Involution, bit-exact.
    """
    mat = t.mat.reshape(t.m, t.n, t.m, t.n).transpose(1, 0, 3, 2).reshape(t.dim, t.dim)
    return BipartiteMatrix(m=t.n, n=t.m, mat=mat.copy())


def product_range(
    t: BipartiteMatrix, tol: ToleranceConfig = DEFAULT_TOL
) -> tuple[np.ndarray, np.ndarray]:
    """Projections (P_A, P_B) onto the marginal images.

    P_A (x) P_B is the smallest product projection whose range contains the
    image of a positive T, so compressing T by it changes nothing.
    """
    _check_state(t, tol)
    p_a = support_projection(partial_trace_B(t), tol)
    p_b = support_projection(partial_trace_A(t), tol)
    return p_a, p_b
