"""Command-line front end.

Exit status: 0 pass/member, 1 fail/non-member, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .harness import (
    TrialReport,
    arc_tangent_check,
    counterexample_check,
    projection_optimality_check,
    sequence_limit_check,
    verify_inclusion_chain,
)
from .linalg_core import DEFAULT_TOL, TolerancePolicy, numerical_rank
from .matrix_io import MatrixFormatError, read_matrix, write_matrix
from .retraction import NotTangentError, SingularBlockError, orthographic_retract
from .fixed_rank import adapted_frame, proj_tangent
from .solver import CompletionProblem, solve_completion
from .tangent_cone import membership, project_to_cone

SEED_ENV = "DETVAR_SEED"

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    command: str
    r: int | None
    tol: TolerancePolicy
    seed: int
    trials: int | None
    output_format: str
    paths: dict = field(default_factory=dict)


class Output:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def header(self, cfg: CliConfig) -> None:
        self.kv("command", cfg.command)
        self.kv("tol.relative", cfg.tol.relative_rank_threshold)
        self.kv("tol.absolute", cfg.tol.absolute_floor)

    def kv(self, key: str, value) -> None:
        if isinstance(value, bool):
            value = "true" if value else "false"
        elif isinstance(value, float):
            value = repr(value)
        elif isinstance(value, (list, tuple, np.ndarray)):
            value = ",".join(repr(float(v)) for v in value)
        sep = "=" if self.fmt == "machine" else ": "
        print(f"{key}{sep}{value}", file=self.stream)

    def report(self, rep: TrialReport) -> None:
        text = rep.format_machine() if self.fmt == "machine" else rep.format_text()
        print(text, file=self.stream)


def _load(path: str, name: str) -> np.ndarray:
    if path is None:
        raise UsageError(f"--{name} is required")
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"{name} file not found: {path}")
    return read_matrix(p)


def _same_shape(A, B, what: str) -> None:
    if A.shape != B.shape:
        raise UsageError(f"dimension mismatch for {what}: {A.shape} vs {B.shape}")


def _need_r(cfg: CliConfig) -> int:
    if cfg.r is None:
        raise UsageError("--r is required")
    return cfg.r


def cmd_membership(cfg, args, out) -> int:
    X = _load(args.X, "X")
    Z = _load(args.Z, "Z")
    _same_shape(X, Z, "X and Z")
    rep = membership(X, Z, _need_r(cfg), cfg.tol)
    for key, value in rep.to_record().items():
        out.kv(key, value)
    return EXIT_PASS if rep.is_member else EXIT_FAIL


def cmd_project(cfg, args, out) -> int:
    X = _load(args.X, "X")
    Z = _load(args.Z, "Z")
    _same_shape(X, Z, "X and Z")
    split = project_to_cone(X, Z, _need_r(cfg), cfg.tol)
    if args.tangent_out:
        write_matrix(args.tangent_out, split.tangent_part)
    if args.normal_out:
        write_matrix(args.normal_out, split.normal_part)
    if args.out:
        write_matrix(args.out, split.total)
    out.kv("distance", float(np.linalg.norm(Z - split.total)))
    out.kv("normal_singular_values", split.normal_singular_values)
    out.kv("tie", split.tie)
    return EXIT_PASS


def cmd_retract(cfg, args, out) -> int:
    X = _load(args.X, "X")
    Y = _load(args.Y, "Y")
    _same_shape(X, Y, "X and Y")
    frame = adapted_frame(X, cfg.tol)
    if args.project_first:
        Y = proj_tangent(frame, Y)
    try:
        L = orthographic_retract(X, frame, Y, cfg.tol)
    except (NotTangentError, SingularBlockError) as exc:
        out.kv("error", str(exc))
        return EXIT_FAIL
    if args.out:
        write_matrix(args.out, L)
    out.kv("point_rank", frame.rank)
    out.kv("result_rank", numerical_rank(L, cfg.tol))
    out.kv("correction_norm", float(np.linalg.norm(L - X - Y)))
    return EXIT_PASS


def cmd_verify(cfg, args, out) -> int:
    r = _need_r(cfg)
    trials = cfg.trials if cfg.trials is not None else 1000
    reports = [
        verify_inclusion_chain(args.m, args.n, r, args.rlow, trials, cfg.seed, tol=cfg.tol),
        sequence_limit_check(args.m, args.n, r, args.rlow, trials, cfg.seed, tol=cfg.tol),
        projection_optimality_check(args.m, args.n, r, trials, cfg.seed, samples=args.samples, tol=cfg.tol),
    ]
    for rep in reports:
        out.report(rep)
    return EXIT_PASS if all(rep.passed for rep in reports) else EXIT_FAIL


def cmd_counterexample(cfg, args, out) -> int:
    rep = counterexample_check(args.count, cfg.tol)
    out.report(rep)
    return EXIT_PASS if rep.passed else EXIT_FAIL


def cmd_arcs(cfg, args, out) -> int:
    trials = cfg.trials if cfg.trials is not None else 200
    rep = arc_tangent_check(args.m, args.n, _need_r(cfg), args.rlow, args.degree, trials, cfg.seed, tol=cfg.tol)
    out.report(rep)
    return EXIT_PASS if rep.passed else EXIT_FAIL


def cmd_solve(cfg, args, out) -> int:
    M = _load(args.M, "M")
    mask = _load(args.mask, "mask")
    _same_shape(M, mask, "M and mask")
    if not np.all((mask == 0) | (mask == 1)):
        raise UsageError("mask entries must be 0 or 1")
    r = _need_r(cfg)
    X0 = _load(args.X0, "X0") if args.X0 else np.zeros_like(M)
    _same_shape(M, X0, "M and X0")
    step = args.step if args.step is not None else 1.0 / float(mask.mean())
    problem = CompletionProblem(M, mask, r, step_size=step, max_iters=args.max_iters, stop_tol=args.stop_tol)
    X, history = solve_completion(problem, X0, cfg.tol, retraction=args.retraction)
    if args.out:
        write_matrix(args.out, X)
    res = problem.relative_residual(X)
    out.kv("iterations", len(history) - 1)
    out.kv("objective", history[-1])
    out.kv("relative_residual", float(res))
    out.kv("rank", numerical_rank(X, cfg.tol))
    return EXIT_PASS if res <= args.target_residual else EXIT_FAIL


COMMANDS = {
    "membership": cmd_membership,
    "project": cmd_project,
    "retract": cmd_retract,
    "verify": cmd_verify,
    "counterexample": cmd_counterexample,
    "arcs": cmd_arcs,
    "solve": cmd_solve,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--r", type=int, help="rank bound")
    common.add_argument("--rel-tol", type=float, default=DEFAULT_TOL.relative_rank_threshold)
    common.add_argument("--abs-tol", type=float, default=DEFAULT_TOL.absolute_floor)
    common.add_argument("--seed", type=int, default=None, help=f"random seed (default: ${SEED_ENV} or 0)")
    common.add_argument("--trials", type=int, default=None)
    common.add_argument("--format", choices=("text", "machine"), default="text", dest="output_format")

    parser = _Parser(prog="detvar", description="Tangent cones of low-rank matrix varieties.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("membership", parents=[common], help="tangent-cone membership of Z at X")
    p.add_argument("--X", required=True)
    p.add_argument("--Z", required=True)

    p = sub.add_parser("project", parents=[common], help="metric projection of Z onto the cone at X")
    p.add_argument("--X", required=True)
    p.add_argument("--Z", required=True)
    p.add_argument("--tangent-out")
    p.add_argument("--normal-out")
    p.add_argument("--out")

    p = sub.add_parser("retract", parents=[common], help="orthographic retraction of Y at X")
    p.add_argument("--X", required=True)
    p.add_argument("--Y", required=True)
    p.add_argument("--out")
    p.add_argument("--project-first", action="store_true", help="project Y onto the tangent space first")

    for name, helptext in (("verify", "randomized inclusion/limit/projection checks"),
                           ("arcs", "tangents of random polynomial arcs")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--m", type=int, default=4)
        p.add_argument("--n", type=int, default=4)
        p.add_argument("--rlow", type=int, default=2)
        if name == "verify":
            p.add_argument("--samples", type=int, default=1000)
        else:
            p.add_argument("--degree", type=int, default=2)

    p = sub.add_parser("counterexample", parents=[common], help="reproduce the 4x4 counterexample")
    p.add_argument("--count", type=int, default=100)

    p = sub.add_parser("solve", parents=[common], help="rank-constrained matrix completion")
    p.add_argument("--M", required=True)
    p.add_argument("--mask", required=True)
    p.add_argument("--X0")
    p.add_argument("--out")
    p.add_argument("--step", type=float, default=None, help="initial step (default: 1 / observed fraction)")
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--stop-tol", type=float, default=1e-14)
    p.add_argument("--target-residual", type=float, default=1e-6)
    p.add_argument("--retraction", choices=("truncate", "orthographic"), default="truncate")
    return parser


def _config(args) -> CliConfig:
    seed = args.seed
    if seed is None:
        env = os.environ.get(SEED_ENV)
        try:
            seed = int(env) if env else 0
        except ValueError:
            raise UsageError(f"${SEED_ENV} is not an integer: {env!r}") from None
    if args.r is not None and args.r < 0:
        raise UsageError("--r must be nonnegative")
    try:
        tol = TolerancePolicy(args.rel_tol, args.abs_tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    paths = {k: getattr(args, k) for k in ("X", "Z", "Y", "M", "mask", "X0") if getattr(args, k, None)}
    return CliConfig(args.command, args.r, tol, seed, args.trials, args.output_format, paths)


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        cfg = _config(args)
        out = Output(cfg.output_format, stdout)
        out.header(cfg)
        return COMMANDS[cfg.command](cfg, args, out)
    except (UsageError, MatrixFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # bound violations and shape problems raised by the library
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
