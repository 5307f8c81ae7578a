"""Command-line front end.

Exit codes: 0 success, 1 semantic failure (verification failed, uncorrectable
word, miscorrection observed), 2 input error.
"""

from __future__ import annotations

import argparse
import sys
from importlib.metadata import PackageNotFoundError, version

import numpy as np

from . import matrixio
from .balanced import (
    STRATEGIES,
    DeltaSpec,
    generate_delta,
    l_condition_violation,
    verify_balanced,
)
from .codec import Outcome, decode, encode
from .harness import CSV_COLUMNS, grid_specs, inject_faults, scaling_report
from .planner import CheckMatrix, build_check_matrix, hsiao_conditions

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "unknown"


def _read_text(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _write_text(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _parse_int_set(text: str) -> list[int]:
    """``"8"``, ``"8:14"`` (inclusive) or ``"2,5,9"``."""
    out: list[int] = []
    try:
        for part in text.split(","):
            if ":" in part:
                lo, hi = (int(x) for x in part.split(":"))
                if hi < lo:
                    raise InputError(f"empty range {part!r}")
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise InputError(f"bad integer list {text!r}") from None
    return out


def _bit_string(text: str, what: str) -> np.ndarray:
    text = text.strip()
    if any(c not in "01" for c in text):
        raise InputError(f"{what} must be a string of 0/1 characters")
    return np.array([c == "1" for c in text], dtype=np.uint8)


def _require_k(k: int | None) -> int:
    if k is None:
        raise InputError("--k is required")
    if k < 1:
        raise InputError(f"--k must be >= 1, got {k}")
    return k


def _plan_comments(check: CheckMatrix, strategy: str) -> list[str]:
    plan = check.plan
    rows = check.H.sum(axis=1)
    return [
        f"k={plan.k}",
        f"R={plan.R}",
        f"n={plan.n}",
        f"strategy={strategy}",
        "blocks=" + " ".join(str(b) for b in plan.blocks),
        "parity_positions=" + ",".join(str(p) for p in check.parity_positions),
        f"ones={int(check.H.sum())}",
        "row_weights=" + ",".join(str(int(w)) for w in rows),
        f"version={_version()}",
    ]


def cmd_gen(args) -> int:
    k = _require_k(args.k)
    check = build_check_matrix(k, args.strategy)
    _write_text(matrixio.render(check.H, args.format, _plan_comments(check, args.strategy)), args.out)
    if args.plot:
        from .plotting import plot_matrix

        plot_matrix(check.H, args.plot, title=f"H for k={k}")
    return EXIT_OK


def cmd_delta(args) -> int:
    for name in ("r", "j", "m"):
        if getattr(args, name) is None:
            raise InputError(f"--{name} is required")
    if args.r < 1:
        raise InputError(f"--r must be >= 1, got {args.r}")
    spec = DeltaSpec(args.r, args.j, args.m)
    reason = l_condition_violation(spec)
    if reason is not None:
        raise InputError(f"Δ{spec} violates the L-condition: {reason}")
    mat = generate_delta(spec, args.strategy)
    comments = [f"R={spec.R}", f"J={spec.J}", f"m={spec.m}", f"strategy={args.strategy}",
                f"version={_version()}"]
    _write_text(matrixio.render(mat, args.format, comments), args.out)
    if args.plot:
        from .plotting import plot_matrix

        plot_matrix(mat, args.plot, title=f"Δ{spec}")
    return EXIT_OK


def _load_matrix(path: str | None, fmt: str | None) -> np.ndarray:
    try:
        return matrixio.parse(_read_text(path), fmt)
    except matrixio.MatrixFormatError as exc:
        raise InputError(f"cannot parse matrix: {exc}") from None


def cmd_verify(args) -> int:
    mat = _load_matrix(args.path or args.inp, args.input_format)
    lines = [f"rows={mat.shape[0]}", f"cols={mat.shape[1]}"]
    if args.j is not None:
        rep = verify_balanced(mat, args.j)
        lines += [
            f"column_weight_ok={rep.column_weight_ok}",
            f"columns_distinct={rep.columns_distinct}",
            "row_weights=" + ",".join(map(str, rep.row_weights)),
            f"max_row_delta={rep.max_row_delta}",
            f"heavy_rows_on_top={rep.heavy_rows_on_top}",
        ]
        ok = rep.balanced
    else:
        cond = hsiao_conditions(mat)
        rows = mat.sum(axis=1)
        lines += [f"{name}={val}" for name, val in cond.items()]
        lines.append("row_weights=" + ",".join(str(int(w)) for w in rows))
        ok = all(cond.values())
    lines.append(f"result={'pass' if ok else 'fail'}")
    _write_text("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_FAIL


def _codec_matrix(args) -> CheckMatrix:
    if args.matrix:
        mat = _load_matrix(args.matrix, None)
        try:
            return CheckMatrix.from_matrix(mat)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    return build_check_matrix(_require_k(args.k), args.strategy)


def _bits_arg(args, what: str) -> np.ndarray:
    text = args.bits
    if text is None:
        lines = [ln for ln in _read_text(args.inp).splitlines() if ln.strip()]
        if not lines:
            raise InputError(f"no {what} given")
        text = lines[0]
    return _bit_string(text, what)


def cmd_encode(args) -> int:
    check = _codec_matrix(args)
    data = _bits_arg(args, "data")
    if data.size != check.k:
        raise InputError(f"data has {data.size} bits, expected k={check.k}")
    word = encode(data, check)
    _write_text("".join(map(str, word)) + "\n", args.out)
    return EXIT_OK


def cmd_decode(args) -> int:
    check = _codec_matrix(args)
    word = _bits_arg(args, "word")
    if word.size != check.n:
        raise InputError(f"word has {word.size} bits, expected n={check.n}")
    outcome = decode(word, check)
    _write_text(str(outcome) + "\n", args.out)
    return EXIT_OK if outcome.kind in (Outcome.NO_ERROR, Outcome.CORRECTED) else EXIT_FAIL


BENCH_MAX_R = 20


def cmd_bench(args) -> int:
    if not args.r:
        raise InputError("--r is required")
    R_values = _parse_int_set(args.r)
    if any(R < 1 or R > BENCH_MAX_R for R in R_values):
        raise InputError(f"--r values must lie in 1..{BENCH_MAX_R}")
    J_values = _parse_int_set(args.j) if args.j else None
    m_values = _parse_int_set(args.m) if args.m else None
    strategies = args.strategy or list(STRATEGIES)
    specs = list(grid_specs(R_values, J_values, m_values, args.full_blocks))
    if not specs:
        raise InputError("grid contains no feasible spec")
    report = scaling_report(specs, strategies)
    _write_text(report.to_csv(), args.out)
    print(report.summary(), file=sys.stderr)
    if args.plot:
        from .plotting import plot_scaling

        plot_scaling(report, args.plot)
    return EXIT_OK


def cmd_inject(args) -> int:
    k = _require_k(args.k)
    if args.trials is not None and args.trials < 0:
        raise InputError("--trials must be >= 0")
    try:
        report = inject_faults(k, args.mode, args.trials, args.seed, args.strategy)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    text = report.to_csv() if args.format == "csv" else report.to_keyvalue()
    _write_text(text, args.out)
    return EXIT_OK if report.miscorrections == 0 else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hsiaogen",
        description="Hsiao SEC-DED check matrices from recursively balanced matrices.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {_version()}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, strategy_multi=False):
        if strategy_multi:
            p.add_argument("--strategy", choices=STRATEGIES, action="append",
                           help="repeat to select several (default: both)")
        else:
            p.add_argument("--strategy", choices=STRATEGIES, default="shift")
        p.add_argument("--out", help="output path (default: stdout)")

    p = sub.add_parser("gen", help="build the check matrix for k data bits")
    p.add_argument("--k", type=int)
    p.add_argument("--format", choices=matrixio.FORMATS, default="txt")
    p.add_argument("--plot", help="also write a figure of H to this path")
    common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("delta", help="build one balanced matrix Δ(R,J,m)")
    p.add_argument("--r", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--format", choices=matrixio.FORMATS, default="txt")
    p.add_argument("--plot", help="also write a figure of the matrix to this path")
    common(p)
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("verify", help="check a matrix file")
    p.add_argument("path", nargs="?", help="matrix file (default: --in or stdin)")
    p.add_argument("--in", dest="inp")
    p.add_argument("--j", type=int, help="check fixed column weight J instead of Hsiao conditions")
    p.add_argument("--format", dest="input_format", choices=matrixio.FORMATS,
                   help="input format (default: detect)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    for name, func, what in (("encode", cmd_encode, "data"), ("decode", cmd_decode, "word")):
        p = sub.add_parser(name, help=f"{name} a bit string")
        p.add_argument("bits", nargs="?", help=f"{what} as 0/1 string (default: first line of --in)")
        p.add_argument("--k", type=int)
        p.add_argument("--matrix", help="check matrix file instead of --k")
        p.add_argument("--in", dest="inp")
        common(p)
        p.set_defaults(func=func)

    p = sub.add_parser(
        "bench",
        help="count generation work over a grid of specs",
        description="CSV columns: " + ",".join(CSV_COLUMNS)
        + ". ratio = element_writes / (R*m*(log2 m + 1)); overhead = element_writes / (R*m).",
    )
    p.add_argument("--r", help="R values: N, A:B (inclusive) or comma list")
    p.add_argument("--j", help="J values (default: all)")
    p.add_argument("--m", help="m values (default: all feasible)")
    p.add_argument("--full-blocks", action="store_true", help="only m = C(R,J)")
    p.add_argument("--plot", help="also write a scaling figure to this path")
    common(p, strategy_multi=True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("inject", help="fault-inject single and double bit errors")
    p.add_argument("--k", type=int)
    p.add_argument("--mode", choices=("exhaustive", "random"), default="exhaustive")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("txt", "csv"), default="txt")
    common(p)
    p.set_defaults(func=cmd_inject)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"hsiaogen {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
