"""Decomposition reports: build, serialize, render, and verify.

A report records everything a reader needs to audit a decomposition run:
the verdict, the terms themselves, the pure-product refinement, the face
summary, the achieved residual, and the tolerances that produced it.
``verify_report`` re-checks a report against an input matrix from scratch,
using only the serialized terms, so a stored report can be audited without
trusting the code that wrote it.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bipartite import BipartiteMatrix
from .decompose import (
    CanonicalDecomposition,
    FaceReport,
    FaceSummand,
    PureProductDecomposition,
    face_summary,
    independent_form,
    pure_product_decomposition,
)
from .errors import ParseError, VerificationFailedError
from .matcore import DEFAULT_TOL, ToleranceConfig, kron
from .matio import (
    matrix_from_lists,
    matrix_to_lists,
    vector_from_list,
    vector_to_list,
)

SCHEMA = "sepdec-report/1"


@dataclass(frozen=True)
class DecompositionReport:
    verdict: str
    decomposition: CanonicalDecomposition
    residual: float
    orthogonal_factors: bool
    pure_product: PureProductDecomposition
    face: FaceReport
    tolerances: ToleranceConfig
    seed: Optional[int] = None


def _relative_residual(cd: CanonicalDecomposition, t: BipartiteMatrix) -> float:
    gap = np.linalg.norm(cd.reassemble().mat - t.mat)
    return float(gap / max(np.linalg.norm(t.mat), 1.0))


def _independent_factors(cd: CanonicalDecomposition) -> list:
    # side "B" puts the independent-image factors on the right, side "A"
    # on the left
    idx = 1 if cd.side == "B" else 0
    return [term[idx] for term in cd.terms]


def _factors_orthogonal(factors, tol: ToleranceConfig) -> bool:
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            scale = max(np.linalg.norm(factors[i]) * np.linalg.norm(factors[j]), 1e-300)
            if np.linalg.norm(factors[i] @ factors[j]) > tol.tol_rank * scale:
                return False
    return True


def build_report(
    t: BipartiteMatrix,
    side: str = "B",
    tol: ToleranceConfig = DEFAULT_TOL,
    seed: Optional[int] = None,
) -> DecompositionReport:
    """Decompose ``t`` and collect the full report."""
    cd = independent_form(t, side=side, tol=tol)
    return report_from_decomposition(cd, t, tol=tol, seed=seed)


def report_from_decomposition(
    cd: CanonicalDecomposition,
    t: BipartiteMatrix,
    tol: ToleranceConfig = DEFAULT_TOL,
    seed: Optional[int] = None,
) -> DecompositionReport:
    verdict = "b-independent" if cd.side == "B" else "a-independent"
    return DecompositionReport(
        verdict=verdict,
        decomposition=cd,
        residual=_relative_residual(cd, t),
        orthogonal_factors=_factors_orthogonal(_independent_factors(cd), tol),
        pure_product=pure_product_decomposition(cd, tol),
        face=face_summary(cd, tol),
        tolerances=tol,
        seed=seed,
    )


def report_to_json(report: DecompositionReport) -> str:
    cd = report.decomposition
    doc = {
        "schema": SCHEMA,
        "verdict": report.verdict,
        "side": cd.side,
        "m": cd.m,
        "n": cd.n,
        "p": cd.p,
        "terms": [
            {"a": matrix_to_lists(a), "b": matrix_to_lists(b)} for a, b in cd.terms
        ],
        "residual": report.residual,
        "orthogonal_factors": report.orthogonal_factors,
        "pure_product": {
            "unique": report.pure_product.unique,
            "terms": [
                {"weight": w, "x": vector_to_list(x), "y": vector_to_list(y)}
                for w, x, y in report.pure_product.terms
            ],
        },
        "face": {
            "prerequisites_met": report.face.prerequisites_met,
            "mode": report.face.mode,
            "summands": [dataclasses.asdict(s) for s in report.face.summands],
        },
        "tolerances": dataclasses.asdict(report.tolerances),
        "seed": report.seed,
    }
    return json.dumps(doc, indent=2) + "\n"


def report_from_json(text: str) -> DecompositionReport:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA:
        raise ParseError(f"expected a {SCHEMA!r} document")
    try:
        m, n = int(doc["m"]), int(doc["n"])
        side = doc["side"]
        if side not in ("B", "A"):
            raise ParseError(f"bad side {side!r}")
        terms = []
        for k, entry in enumerate(doc["terms"]):
            a = matrix_from_lists(entry["a"], what=f"term {k} 'a'")
            b = matrix_from_lists(entry["b"], what=f"term {k} 'b'")
            if a.shape != (m, m) or b.shape != (n, n):
                raise ParseError(f"term {k}: factor shapes do not match m={m}, n={n}")
            terms.append((a, b))
        cd = CanonicalDecomposition(side=side, terms=terms, m=m, n=n)
        pp_doc = doc["pure_product"]
        pp = PureProductDecomposition(
            terms=[
                (
                    float(entry["weight"]),
                    vector_from_list(entry["x"], what="pure term 'x'"),
                    vector_from_list(entry["y"], what="pure term 'y'"),
                )
                for entry in pp_doc["terms"]
            ],
            unique=bool(pp_doc["unique"]),
        )
        face_doc = doc["face"]
        face = FaceReport(
            prerequisites_met=bool(face_doc["prerequisites_met"]),
            mode=face_doc["mode"],
            summands=[
                FaceSummand(
                    rank_a=int(s["rank_a"]),
                    rank_b=int(s["rank_b"]),
                    face_dim=None if s["face_dim"] is None else int(s["face_dim"]),
                )
                for s in face_doc["summands"]
            ],
        )
        tol = ToleranceConfig(**doc["tolerances"])
        seed = doc.get("seed")
        return DecompositionReport(
            verdict=doc["verdict"],
            decomposition=cd,
            residual=float(doc["residual"]),
            orthogonal_factors=bool(doc["orthogonal_factors"]),
            pure_product=pp,
            face=face,
            tolerances=tol,
            seed=None if seed is None else int(seed),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad report document: {exc}") from None


def render_text(report: DecompositionReport) -> str:
    cd = report.decomposition
    lines = [
        f"verdict: {report.verdict} (p={cd.p}, m={cd.m}, n={cd.n})",
        f"residual: {report.residual:.3e}",
        f"orthogonal factors: {'yes' if report.orthogonal_factors else 'no'}",
    ]
    for k, (a, b) in enumerate(cd.terms, start=1):
        weight = float(np.trace(a).real * np.trace(b).real)
        ra = int(np.linalg.matrix_rank(a))
        rb = int(np.linalg.matrix_rank(b))
        lines.append(f"term {k}: weight {weight:.6g}, rank(A)={ra}, rank(B)={rb}")
    pp = report.pure_product
    lines.append(
        f"pure-product terms: {len(pp.terms)} (unique: {'yes' if pp.unique else 'no'})"
    )
    face = report.face
    if face.mode == "none":
        lines.append("face: mode=none")
    else:
        dims = ", ".join(
            "-" if s.face_dim is None else str(s.face_dim) for s in face.summands
        )
        lines.append(f"face: mode={face.mode} (dims: {dims})")
    tol = report.tolerances
    lines.append(
        "tolerances: "
        + " ".join(
            f"{name}={getattr(tol, name):g}"
            for name in ("tol_rank", "tol_cluster", "tol_normal", "tol_recon")
        )
    )
    if report.seed is not None:
        lines.append(f"seed: {report.seed}")
    return "\n".join(lines) + "\n"


def verify_report(
    report: DecompositionReport,
    t: BipartiteMatrix,
    tol: Optional[ToleranceConfig] = None,
) -> dict:
    """Audit a report against the input matrix it claims to decompose.

    Rebuilds the sum from the serialized terms and checks the residual,
    the unit traces, the independence of the factor images, and, when the
    report claims it, pairwise orthogonality.  All checks are insensitive
    to term order.  Returns one detail line per check; raises
    VerificationFailedError naming the first failing check.
    """
    if tol is None:
        tol = report.tolerances
    cd = report.decomposition
    out = {}

    if (cd.m, cd.n) != (t.m, t.n):
        raise VerificationFailedError(
            f"report is for a {cd.m} x {cd.n} system, input is {t.m} x {t.n}",
            check="shape",
        )
    out["shape"] = f"m={cd.m}, n={cd.n}"

    total = np.zeros_like(t.mat)
    for a, b in cd.terms:
        total += kron(a, b)
    residual = float(np.linalg.norm(total - t.mat) / max(np.linalg.norm(t.mat), 1.0))
    if residual > tol.tol_recon:
        raise VerificationFailedError(
            f"reassembled terms miss the input by {residual:.3e} "
            f"(allowed {tol.tol_recon:g})",
            check="residual",
        )
    out["residual"] = f"{residual:.3e}"

    unit_idx = 0 if cd.side == "B" else 1
    worst_trace = 0.0
    for a, b in cd.terms:
        worst_trace = max(worst_trace, abs(complex(np.trace((a, b)[unit_idx])) - 1.0))
    if worst_trace > tol.tol_recon:
        raise VerificationFailedError(
            f"unit-trace factors are off by {worst_trace:.3e}", check="trace"
        )
    out["trace"] = f"max deviation {worst_trace:.3e}"

    factors = _independent_factors(cd)
    scale = max(float(np.linalg.norm(f, 2)) for f in factors)
    cut = tol.tol_rank * max(scale, 1e-300)
    ranks = [int(np.linalg.matrix_rank(f, tol=cut)) for f in factors]
    joint = int(np.linalg.matrix_rank(np.hstack(factors), tol=cut))
    if joint != sum(ranks):
        raise VerificationFailedError(
            f"factor images are not independent: joint rank {joint}, "
            f"rank sum {sum(ranks)}",
            check="independence",
        )
    out["independence"] = f"rank sum {sum(ranks)} = joint rank {joint}"

    if report.orthogonal_factors:
        if not _factors_orthogonal(factors, tol):
            raise VerificationFailedError(
                "factors claimed orthogonal have overlapping images",
                check="orthogonality",
            )
        out["orthogonality"] = "pairwise products vanish"

    return out
