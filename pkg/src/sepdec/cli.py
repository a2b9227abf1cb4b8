"""Command line front end.

Subcommands: decompose, check, verify, generate, choi.  Exit codes are a
stable contract: 0 success, 1 input error (unparseable files, bad flags,
infeasible parameters, non-PSD input), 2 mathematically-determined
rejection (a failed test, a rejected decomposition, a failed verification,
or an ambiguous eigenvalue clustering).

Tolerances resolve in three layers: built-in defaults, then SEPDEC_TOL_*
environment variables (SEPDEC_TOL_RANK, SEPDEC_TOL_CLUSTER, ...), then
command line flags.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from pathlib import Path

from . import decompose as dec
from .channels import CQ, ORTHOGONAL_ONLY, QC, choi_of_holevo, detect_cq, detect_qc
from .errors import (
    ClusterAmbiguityError,
    InfeasibleRanksError,
    NotAIndependentError,
    NotBIndependentError,
    NotBOrthogonalError,
    ParseError,
    SepdecError,
    VerificationFailedError,
)
from .generators import (
    generate_b_independent,
    generate_entangled_pure,
    generate_marginal_rank,
)
from .matcore import DEFAULT_TOL, ToleranceConfig
from .matio import (
    emit_matrix_text,
    parse_holevo_file,
    parse_matrix_file,
)
from .report import (
    build_report,
    render_text,
    report_from_decomposition,
    report_from_json,
    report_to_json,
    verify_report,
)

_ENV_PREFIX = "SEPDEC_TOL_"
_REJECTIONS = (
    NotBIndependentError,
    NotAIndependentError,
    NotBOrthogonalError,
    VerificationFailedError,
    ClusterAmbiguityError,
)


class _ArgumentParser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; 2 is reserved for rejections here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"error: {message}\n")


def _tolerance_overrides(args) -> dict:
    overrides = {}
    for f in dataclasses.fields(ToleranceConfig):
        env_name = _ENV_PREFIX + f.name[len("tol_"):].upper()
        raw = os.environ.get(env_name)
        if raw is not None:
            try:
                overrides[f.name] = float(raw)
            except ValueError:
                raise ParseError(f"{env_name} must be a float, got {raw!r}") from None
    for name in ("tol_rank", "tol_cluster", "tol_normal"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    return overrides


def _tolerances(args) -> ToleranceConfig:
    overrides = _tolerance_overrides(args)
    try:
        return DEFAULT_TOL.replace(**overrides) if overrides else DEFAULT_TOL
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _note(text: str) -> None:
    print(text, file=sys.stderr)


def _write_text(path, text: str) -> None:
    Path(path).write_text(text)
    _note(f"wrote: {path}")


def _factor_file_text(mat, as_left: bool) -> str:
    from .bipartite import BipartiteMatrix

    d = mat.shape[0]
    wrapped = BipartiteMatrix(m=d if as_left else 1, n=1 if as_left else d, mat=mat)
    return emit_matrix_text(wrapped)


def _write_bundle(report, t, out: str, fmt: str) -> None:
    path = Path(out)
    if path.suffix == ".json":
        _write_text(path, report_to_json(report))
        return
    if path.suffix == ".txt":
        _write_text(path, render_text(report))
        return
    # anything else is a directory bundle: report in both formats, one
    # delimited file per factor, figures alongside
    path.mkdir(parents=True, exist_ok=True)
    _write_text(path / "report.json", report_to_json(report))
    _write_text(path / "report.txt", render_text(report))
    for k, (a, b) in enumerate(report.decomposition.terms, start=1):
        _write_text(path / f"A_{k}.mat", _factor_file_text(a, as_left=True))
        _write_text(path / f"B_{k}.mat", _factor_file_text(b, as_left=False))
    from .plots import render_figures

    for fig_path in render_figures(report, t, path):
        _note(f"wrote: {fig_path}")


def cmd_decompose(args) -> int:
    tol = _tolerances(args)
    t = parse_matrix_file(args.input)
    report = build_report(t, side=args.side, tol=tol)
    rendered = report_to_json(report) if args.format == "json" else render_text(report)
    sys.stdout.write(rendered)
    if args.out:
        _write_bundle(report, t, args.out, args.format)
    return 0


def cmd_check(args) -> int:
    tol = _tolerances(args)
    t = parse_matrix_file(args.input)

    if args.test == "ppt":
        ok = dec.ppt_check(t, tol)
        print(f"PPT: {'yes' if ok else 'no'}")
        return 0 if ok else 2

    if args.test == "b-independent":
        try:
            cd = dec.independent_form(t, side="B", tol=tol)
        except NotBIndependentError as exc:
            print("B-independent: no")
            _note(f"detail: {exc}")
            return 2
        print(f"B-independent: yes (p={cd.p})")
        return 0

    if args.test == "b-orthogonal":
        try:
            cd = dec.b_orthogonal_form(t, tol)
        except NotBOrthogonalError as exc:
            print("B-orthogonal: no")
            _note(f"detail: {exc}")
            return 2
        print(f"B-orthogonal: yes (p={cd.p})")
        return 0

    if args.test == "marginal-rank":
        verdict = dec.marginal_rank_separability(t, tol)
        if verdict.status == dec.SEPARABLE:
            print(f"separable: yes (p={verdict.decomposition.p})")
            return 0
        if verdict.status == dec.ENTANGLED:
            print("separable: no")
            return 2
        print("separable: unknown (marginal rank condition fails)")
        return 2

    if args.test == "qc":
        res = detect_qc(t, tol)
        if res.kind == QC:
            print("QC: yes")
            return 0
        print(f"QC: no{' (orthogonal only)' if res.kind == ORTHOGONAL_ONLY else ''}")
        return 2

    res = detect_cq(t, tol)
    if res.kind == CQ:
        print("CQ: yes")
        return 0
    print(f"CQ: no{' (orthogonal only)' if res.kind == ORTHOGONAL_ONLY else ''}")
    return 2


def cmd_verify(args) -> int:
    try:
        report_text = Path(args.report).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {args.report}: {exc}") from None
    report = report_from_json(report_text)
    t = parse_matrix_file(args.input)
    overrides = _tolerance_overrides(args)
    tol = DEFAULT_TOL.replace(**overrides) if overrides else None
    try:
        details = verify_report(report, t, tol=tol)
    except VerificationFailedError as exc:
        print(f"verification: fail ({exc.check})")
        _note(f"detail: {exc}")
        return 2
    for check, detail in details.items():
        print(f"{check}: ok ({detail})")
    print("verification: pass")
    return 0


def cmd_generate(args) -> int:
    tol = _tolerances(args)
    truth = None
    if args.kind == "b-independent":
        if args.p is None or args.ranks is None:
            raise ParseError("b-independent needs --p and --ranks")
        if len(args.ranks) != args.p:
            raise ParseError(f"--ranks needs {args.p} entries, got {len(args.ranks)}")
        t, truth = generate_b_independent(
            args.m, args.n, args.p, args.ranks, seed=args.seed, a_ranks=args.a_ranks
        )
    elif args.kind == "marginal-rank":
        if args.p is None:
            raise ParseError("marginal-rank needs --p")
        t, truth = generate_marginal_rank(args.m, args.n, args.p, seed=args.seed)
    else:
        if args.schmidt_rank is None:
            raise ParseError("entangled-pure needs --schmidt-rank")
        t = generate_entangled_pure(args.m, args.n, args.schmidt_rank, seed=args.seed)

    text = emit_matrix_text(t)
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)

    if args.truth:
        if truth is None:
            raise ParseError("entangled-pure instances have no ground truth")
        report = report_from_decomposition(truth, t, tol=tol, seed=args.seed)
        _write_text(args.truth, report_to_json(report))
    return 0


def cmd_choi(args) -> int:
    h = parse_holevo_file(args.input)
    text = emit_matrix_text(choi_of_holevo(h))
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def _int_list(text: str) -> list:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="sepdec", description=__doc__.splitlines()[0])
    tol_parent = _ArgumentParser(add_help=False)
    tol_parent.add_argument("--tol-rank", dest="tol_rank", type=float)
    tol_parent.add_argument("--tol-cluster", dest="tol_cluster", type=float)
    tol_parent.add_argument("--tol-normal", dest="tol_normal", type=float)

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "decompose", parents=[tol_parent], help="canonical decomposition report"
    )
    p.add_argument("input", help="matrix file")
    p.add_argument("--side", choices=("B", "A"), default="B")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument(
        "--out",
        help="report file (.json/.txt) or bundle directory (report, factor files, figures)",
    )
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("check", parents=[tol_parent], help="one verdict line per test")
    p.add_argument("input", help="matrix file")
    p.add_argument(
        "--test",
        required=True,
        choices=("b-independent", "b-orthogonal", "marginal-rank", "qc", "cq", "ppt"),
    )
    p.set_defaults(func=cmd_check)

    p = sub.add_parser(
        "verify", parents=[tol_parent], help="audit a report against an input matrix"
    )
    p.add_argument("report", help="report JSON file")
    p.add_argument("input", help="matrix file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser(
        "generate", parents=[tol_parent], help="seeded test instances"
    )
    p.add_argument(
        "--kind",
        required=True,
        choices=("b-independent", "marginal-rank", "entangled-pure"),
    )
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int)
    p.add_argument("--ranks", type=_int_list, help="comma-separated, one per term")
    p.add_argument("--a-ranks", dest="a_ranks", type=_int_list)
    p.add_argument("--schmidt-rank", dest="schmidt_rank", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="matrix file (stdout when omitted)")
    p.add_argument("--truth", help="also write the ground-truth report JSON here")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("choi", help="Choi matrix of a Holevo-form channel")
    p.add_argument("input", help="Holevo form JSON file")
    p.add_argument("--out", help="matrix file (stdout when omitted)")
    p.set_defaults(func=cmd_choi)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _REJECTIONS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SepdecError, InfeasibleRanksError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
