"""Seeded ground-truth instance generators.

All randomness flows from an explicit seed through numpy's default
generator (PCG64), so instances are reproducible across platforms.  The
generators construct decompositions whose structure holds by construction
(independence from frame partitions, distinctness by resampling) and
return both the assembled matrix and the canonicalized ground truth, ready
for term-by-term comparison against the decomposition pipeline.
"""

from __future__ import annotations

import numpy as np

from .bipartite import BipartiteMatrix
from .decompose import CanonicalDecomposition
from .errors import InfeasibleRanksError
from .jointdiag import _tuple_order
from .matcore import DEFAULT_TOL, kron

_MAX_RESAMPLE = 100
_MAX_COND = 100.0
_MIN_SEPARATION = 1e-4


def _random_unitary(rng, n: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _conditioned_frame(rng, n: int) -> np.ndarray:
    """Random invertible n x n matrix with a bounded condition number."""
    for _ in range(_MAX_RESAMPLE):
        s = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        if np.linalg.cond(s) <= _MAX_COND:
            return s
    raise RuntimeError("failed to draw a well-conditioned frame")


def _random_density(rng, m: int, rank: int) -> np.ndarray:
    g = rng.normal(size=(m, rank)) + 1j * rng.normal(size=(m, rank))
    out = g @ g.conj().T
    return out / np.trace(out).real


def _distinct_densities(rng, m: int, ranks) -> list:
    """Unit-trace PSD factors, resampled until pairwise well separated."""
    for _ in range(_MAX_RESAMPLE):
        out = [_random_density(rng, m, r) for r in ranks]
        ok = all(
            np.linalg.norm(out[a] - out[b]) > _MIN_SEPARATION
            for a in range(len(out))
            for b in range(a + 1, len(out))
        )
        if ok:
            return out
    raise RuntimeError("failed to draw distinct unit-trace factors")


def _canonical_truth(m, n, terms) -> CanonicalDecomposition:
    lefts = [a for a, _ in terms]
    order = _tuple_order(lefts, DEFAULT_TOL, scale=1.0)
    return CanonicalDecomposition(
        side="B", terms=[terms[k] for k in order], m=m, n=n
    )


def generate_b_independent(
    m: int, n: int, p: int, ranks, seed: int, a_ranks=None
) -> tuple[BipartiteMatrix, CanonicalDecomposition]:
    """Random state with independent B images and its canonical ground truth.

    ranks prescribes the B-side image dimensions (their sum at most n);
    independence holds by construction because the images are spanned by
    disjoint column groups of one invertible frame.  a_ranks optionally
    prescribes the ranks of the unit-trace A factors (default full rank).
    The assembled matrix is normalized to unit trace, scale carried by the
    B factors.
    """
    ranks = list(ranks)
    if len(ranks) != p:
        raise InfeasibleRanksError(f"expected {p} ranks, got {len(ranks)}")
    if p < 1 or any(r < 1 for r in ranks):
        raise InfeasibleRanksError("need p >= 1 terms with ranks >= 1")
    if sum(ranks) > n:
        raise InfeasibleRanksError(
            f"B ranks sum to {sum(ranks)} > n = {n}; images cannot be independent"
        )
    a_ranks = [m] * p if a_ranks is None else list(a_ranks)
    if len(a_ranks) != p or any(not 1 <= r <= m for r in a_ranks):
        raise InfeasibleRanksError(f"a_ranks must be {p} values in [1, {m}]")

    rng = np.random.default_rng(seed)
    frame = _conditioned_frame(rng, n)
    bs, start = [], 0
    for r in ranks:
        cols = frame[:, start : start + r]
        b = cols @ cols.conj().T
        bs.append(b * rng.uniform(0.5, 2.0) / np.trace(b).real)
        start += r
    alist = _distinct_densities(rng, m, a_ranks)

    total = float(sum(np.trace(b).real for b in bs))
    bs = [b / total for b in bs]
    terms = list(zip(alist, bs))
    truth = _canonical_truth(m, n, terms)
    return truth.reassemble(), truth


def generate_marginal_rank(
    m: int, n: int, p: int, seed: int
) -> tuple[BipartiteMatrix, CanonicalDecomposition]:
    """Convex combination of p pure product states with independent y's.

    The x rays are pairwise distinct, the y vectors linearly independent,
    so rank T = rank of the B marginal = p and the canonical decomposition
    has p rank-one terms.  Weights are convex, so tr T = 1.
    """
    if p < 1 or p > n:
        raise InfeasibleRanksError(f"need 1 <= p <= n = {n} independent y vectors")

    rng = np.random.default_rng(seed)
    for _ in range(_MAX_RESAMPLE):
        xs = [rng.normal(size=m) + 1j * rng.normal(size=m) for _ in range(p)]
        xs = [x / np.linalg.norm(x) for x in xs]
        if all(
            abs(np.vdot(xs[a], xs[b])) < 1.0 - 1e-3
            for a in range(p)
            for b in range(a + 1, p)
        ):
            break
    else:
        raise RuntimeError("failed to draw distinct x rays")
    frame = _conditioned_frame(rng, n)[:, :p]
    ys = [frame[:, k] / np.linalg.norm(frame[:, k]) for k in range(p)]

    w = rng.uniform(0.5, 1.5, size=p)
    lam = w / w.sum()
    terms = [
        (np.outer(x, x.conj()), lam[k] * np.outer(ys[k], ys[k].conj()))
        for k, x in enumerate(xs)
    ]
    truth = _canonical_truth(m, n, terms)
    return truth.reassemble(), truth


def generate_entangled_pure(m: int, n: int, schmidt_rank: int, seed: int) -> BipartiteMatrix:
    """Projection onto a random entangled vector of the given Schmidt rank.

    Schmidt weights are floored away from zero, so the state is rejected by
    every separability path with a comfortable margin: its rank is 1 while
    the B marginal has rank >= 2, and the partial transpose has an
    eigenvalue below -0.04 / schmidt_rank.
    """
    r = schmidt_rank
    if r < 2 or r > min(m, n):
        raise InfeasibleRanksError(
            f"schmidt rank must satisfy 2 <= r <= min(m, n) = {min(m, n)}, got {r}"
        )
    rng = np.random.default_rng(seed)
    u = _random_unitary(rng, m)[:, :r]
    v = _random_unitary(rng, n)[:, :r]
    w = rng.uniform(0.2, 1.0, size=r)
    s = w / np.linalg.norm(w)
    psi = np.zeros(m * n, dtype=np.complex128)
    for k in range(r):
        psi += s[k] * np.kron(u[:, k], v[:, k])
    return BipartiteMatrix(m=m, n=n, mat=np.outer(psi, psi.conj()))
