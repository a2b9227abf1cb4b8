"""Joint eigenspaces of a commuting normal block family.

A Hermitian bipartite matrix whose blocks are normal and mutually commute
acts on the B side through a single orthogonal family of projections: each
block decomposes as T_ij = sum_g lambda_g^{ij} Q_g over the joint
eigenspaces.  This module certifies the commuting-normal property and
computes the projections Q_g with their eigenvalue tuples.

The algorithm is deterministic recursive refinement.  Because the source is
Hermitian the family is closed under adjoints, so the Hermitian and
anti-Hermitian parts of the upper-triangle blocks generate the same joint
eigenspaces and only Hermitian eigensolvers are needed.  Subspaces are
split on eigenvalue gaps exceeding tol_cluster * scale with scale the
largest block Frobenius norm; gaps too close to the threshold raise
ClusterAmbiguityError instead of being resolved silently.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key

import numpy as np

from .bipartite import BlockGrid
from .errors import ClusterAmbiguityError, NotCommutingFamilyError
from .matcore import DEFAULT_TOL, ToleranceConfig, commute_defect, normal_defect


@dataclass(frozen=True)
class FamilyDiagnostics:
    """Outcome of a commuting-normal certification, truthy iff it passed.

    kind is "normal" or "commute" for the worst-offending check, pair the
    block index (i, j) or index pair ((i, j), (k, l)) it occurred at, and
    ratio = defect / threshold (> 1 means failed).
    """

    ok: bool
    kind: str | None = None
    pair: tuple | None = None
    defect: float = 0.0
    threshold: float = 0.0

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "all blocks normal and mutually commuting"
        what = "not normal" if self.kind == "normal" else "non-commuting pair"
        return (
            f"block {self.pair} {what}: defect {self.defect:.3e} "
            f"exceeds {self.threshold:.3e}"
        )


@dataclass(frozen=True)
class JointEigenstructure:
    """The joint eigenspace partition of a commuting normal block family.

    projections[g] is the n x n orthogonal projection Q_g, tuples[g] the
    m x m matrix of block eigenvalues on that subspace, and support the sum
    of the projections (the joint zero eigenspace is excluded).
    """

    q: int
    projections: list
    tuples: list
    support: np.ndarray


def grid_scale(g: BlockGrid) -> float:
    """Largest block Frobenius norm; the reference scale for all cutoffs."""
    return float(max(np.linalg.norm(g.blocks[i, j]) for i in range(g.m) for j in range(g.m)))


def is_commuting_normal_family(
    g: BlockGrid, tol: ToleranceConfig = DEFAULT_TOL
) -> FamilyDiagnostics:
    """Certify that every block is normal and every pair commutes.

    Defects are measured against max(own scale, grid scale squared) so that
    negligibly small blocks of a large grid pass rather than being judged
    against their own tiny norm.  Returns the worst-offending check.
    """
    scale = grid_scale(g)
    floor = scale * scale
    worst = FamilyDiagnostics(ok=True)
    worst_ratio = 0.0

    norms = np.array(
        [[np.linalg.norm(g.blocks[i, j]) for j in range(g.m)] for i in range(g.m)]
    )
    pairs = [(i, j) for i in range(g.m) for j in range(g.m)]
    for i, j in pairs:
        defect = normal_defect(g.blocks[i, j])
        ref = tol.tol_normal * max(norms[i, j] ** 2, floor)
        ratio = defect / ref if ref > 0 else 0.0
        if ratio > worst_ratio:
            worst_ratio = ratio
            worst = FamilyDiagnostics(
                ok=bool(ratio <= 1.0),
                kind="normal",
                pair=(i, j),
                defect=float(defect),
                threshold=float(ref),
            )
    for a in range(len(pairs)):
        for b in range(a + 1, len(pairs)):
            (i, j), (k, l) = pairs[a], pairs[b]
            defect = commute_defect(g.blocks[i, j], g.blocks[k, l])
            ref = tol.tol_commute * max(norms[i, j] * norms[k, l], floor)
            ratio = defect / ref if ref > 0 else 0.0
            if ratio > worst_ratio:
                worst_ratio = ratio
                worst = FamilyDiagnostics(
                    ok=bool(ratio <= 1.0),
                    kind="commute",
                    pair=((i, j), (k, l)),
                    defect=float(defect),
                    threshold=float(ref),
                )
    if worst_ratio <= 1.0:
        return FamilyDiagnostics(ok=True)
    return worst


def _split_by_clusters(values: np.ndarray, tol: ToleranceConfig, scale: float):
    """Group sorted eigenvalue indices by gaps above tol_cluster * scale."""
    cut = tol.tol_cluster * scale
    order = np.argsort(values)
    sorted_vals = values[order]
    groups = [[order[0]]]
    for pos in range(1, len(order)):
        gap = float(sorted_vals[pos] - sorted_vals[pos - 1])
        if 0.1 * cut <= gap <= 10.0 * cut:
            raise ClusterAmbiguityError(
                f"eigenvalue gap {gap:.3e} lies within a decade of "
                f"tol_cluster*scale = {cut:.3e}; tighten or loosen tol_cluster",
                gap=gap,
                scale=scale,
            )
        if gap > cut:
            groups.append([])
        groups[-1].append(order[pos])
    return groups


def _hermitian_generators(g: BlockGrid):
    """Hermitian/anti-Hermitian parts of the upper-triangle blocks, row-major."""
    gens = []
    for i in range(g.m):
        for j in range(i, g.m):
            tij, tji = g.blocks[i, j], g.blocks[j, i]
            gens.append(0.5 * (tij + tji))
            if i != j:
                gens.append((tij - tji) / 2j)
    return gens


def _tuple_order(tuples: list, tol: ToleranceConfig, scale: float):
    """Canonical ordering: lexicographic over flattened (real, imag) entries.

    Coordinates closer than 0.5 * tol_cluster * scale are treated as ties,
    which is safe because distinct joint eigenspaces are guaranteed to
    differ by more than tol_cluster * scale in some coordinate.
    """
    eps = 0.5 * tol.tol_cluster * scale

    def cmp(a: int, b: int) -> int:
        fa, fb = tuples[a].ravel(), tuples[b].ravel()
        for x, y in zip(fa, fb):
            for dx in (x.real - y.real, x.imag - y.imag):
                if abs(dx) > eps:
                    return -1 if dx < 0 else 1
        return 0

    return sorted(range(len(tuples)), key=cmp_to_key(cmp))


def joint_eigenspaces(
    g: BlockGrid, tol: ToleranceConfig = DEFAULT_TOL
) -> JointEigenstructure:
    """Partition the B side into the joint eigenspaces of the block family.

    Returns the unique maximal subspaces on which every block acts as a
    scalar, excluding the joint zero eigenspace, in canonical tuple order.
    Raises NotCommutingFamilyError when the family fails certification and
    ClusterAmbiguityError when an eigenvalue gap is too close to the
    clustering threshold to trust.
    """
    diag = is_commuting_normal_family(g, tol)
    if not diag:
        raise NotCommutingFamilyError(diag.describe(), diagnostics=diag)

    n = g.n
    scale = grid_scale(g)
    if scale == 0.0:
        return JointEigenstructure(
            q=0, projections=[], tuples=[], support=np.zeros((n, n), dtype=np.complex128)
        )

    subspaces = [np.eye(n, dtype=np.complex128)]
    for gen in _hermitian_generators(g):
        refined = []
        for v in subspaces:
            if v.shape[1] == 1:
                refined.append(v)
                continue
            comp = v.conj().T @ gen @ v
            w, u = np.linalg.eigh(0.5 * (comp + comp.conj().T))
            for idx in _split_by_clusters(w, tol, scale):
                refined.append(v @ u[:, idx])
        subspaces = refined

    tuples = []
    for v in subspaces:
        lam = np.empty((g.m, g.m), dtype=np.complex128)
        for i in range(g.m):
            for j in range(g.m):
                lam[i, j] = np.trace(v.conj().T @ g.blocks[i, j] @ v) / v.shape[1]
        tuples.append(lam)

    keep = [
        k for k, lam in enumerate(tuples) if np.max(np.abs(lam)) > tol.tol_rank * scale
    ]
    projections = [subspaces[k] @ subspaces[k].conj().T for k in keep]
    tuples = [tuples[k] for k in keep]

    order = _tuple_order(tuples, tol, scale)
    projections = [projections[k] for k in order]
    tuples = [tuples[k] for k in order]
    support = (
        sum(projections)
        if projections
        else np.zeros((n, n), dtype=np.complex128)
    )
    return JointEigenstructure(
        q=len(projections), projections=projections, tuples=tuples, support=support
    )
