"""Command line front end.

Subcommands: trees (enumerate a tree class), expand (normal form ledger),
f-transform (generator ledger), verify (tree expansion versus brute-force
iteration), render (pretty-print one tree).

Configuration precedence: explicit flags > JSON config file (--config or
the BIRKHOFF_CONFIG environment variable) > defaults (dim 1, K 2, N 0,
cap 10^6).  All JSON output is deterministic: sorted keys, exact
rationals as strings.  Exit codes: 0 success / all residuals empty,
1 nonempty verification residual, 2 configuration or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .enumeration import (
    ClassKind,
    DEFAULT_CAP,
    EnumerationCapError,
    TreeClassQuery,
    tree_class,
)
from .evaluator import (
    EvalConfig,
    cancellation_check,
    f_transform,
    normal_form,
)
from .hamiltonian import Kernel, ModeLattice, ResonanceConfig
from .oracle import birkhoff_iterate, compare, generators_from_recursion
from .trees import AssumptionMode, ParseError, parse, render

CONFIG_ENV = "BIRKHOFF_CONFIG"

_DEFAULTS = {
    "dim": 1,
    "K": 2,
    "N": 0,
    "assumption_mode": "nested-le",
    "cap": DEFAULT_CAP,
}


class CliError(Exception):
    """User-facing configuration or input error; maps to exit code 2."""


@dataclass
class RunConfig:
    dim: int
    K: int
    N: int
    mode: AssumptionMode
    cap: int

    def lattice(self) -> ModeLattice:
        return ModeLattice(self.dim, self.K)

    def eval_config(self, cutoff: int) -> EvalConfig:
        return EvalConfig(
            self.lattice(), ResonanceConfig(self.N), cutoff, self.mode
        )


def _load_config_file(path: str | None) -> dict:
    if path is None:
        path = os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read config file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise CliError(f"config file {path} must hold a JSON object")
    return data


def _resolve(args: argparse.Namespace) -> RunConfig:
    merged = dict(_DEFAULTS)
    merged.update(_load_config_file(args.config))
    for key, flag in [
        ("dim", args.dim),
        ("K", args.K),
        ("N", args.N),
        ("assumption_mode", args.assumption_mode),
        ("cap", args.cap),
    ]:
        if flag is not None:
            merged[key] = flag
    try:
        mode = AssumptionMode(merged["assumption_mode"])
    except ValueError as exc:
        raise CliError(f"unknown assumption mode {merged['assumption_mode']}") from exc
    cfg = RunConfig(
        int(merged["dim"]), int(merged["K"]), int(merged["N"]), mode,
        int(merged["cap"]),
    )
    if cfg.dim < 1 or cfg.K < 1 or cfg.N < 0 or cfg.cap < 1:
        raise CliError("need dim >= 1, K >= 1, N >= 0, cap >= 1")
    return cfg


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _note(message: str) -> None:
    print(message, file=sys.stderr)


def cmd_trees(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    kind = ClassKind(args.kind)
    if kind is ClassKind.CIRC_RANGE and args.ell is None:
        raise CliError("--ell is required for circ-range")
    ell = args.ell if kind is ClassKind.CIRC_RANGE else None
    try:
        query = TreeClassQuery(kind, args.m, ell)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    ts = tree_class(query, cfg.mode, cfg.cap)
    payload = ts.to_json()
    if args.format in ("latex", "dot"):
        payload["renders"] = [render(t, args.format) for t in ts]
    _emit(payload, args.out)
    _note(f"count={len(ts)} degrees={payload['degrees']}")
    return 0


def _ledger_summary(payload: dict) -> None:
    _note(f"{'tree':<42} {'S':>4} {'#monomials':>10}")
    for entry in payload["entries"]:
        n_terms = len(entry["kernel"]["terms"])
        _note(f"{entry['tree']:<42} {str(entry['S']):>4} {n_terms:>10}")
    _note(f"total monomials: {len(payload['total']['terms'])}")


def cmd_expand(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    if args.m < 1 or args.ell <= args.m:
        raise CliError("need 1 <= m < ell")
    ec = cfg.eval_config(2 * args.ell)
    ledger = normal_form(args.m, args.ell, ec)
    payload = ledger.to_json(ec)
    _emit(payload, args.out)
    _ledger_summary(payload)
    return 0


def cmd_f_transform(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    if args.m < 1:
        raise CliError("need m >= 1")
    ec = cfg.eval_config(2 * (args.m + 1))
    ledger = f_transform(args.m, ec)
    payload = ledger.to_json(ec)
    _emit(payload, args.out)
    _ledger_summary(payload)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    if args.m < 1 or args.ell <= args.m:
        raise CliError("need 1 <= m < ell")
    ec = cfg.eval_config(2 * args.ell)
    oracle = birkhoff_iterate(args.m, args.ell, ec)
    if args.ledger:
        try:
            with open(args.ledger, encoding="utf-8") as fh:
                data = json.load(fh)
            total = Kernel.from_json(data["total"])
        except (OSError, json.JSONDecodeError, KeyError, TypeError,
                ValueError) as exc:
            raise CliError(f"cannot read ledger {args.ledger}: {exc}") from exc
        total = total.with_cutoff(ec.cutoff)
    else:
        total = normal_form(args.m, args.ell, ec).total
    report = compare(total, oracle.normal_form)
    checks = {"normal_form": report.equal}
    if not args.ledger:
        recursions = generators_from_recursion(args.m, ec)
        for i in range(1, args.m + 1):
            checks[f"cancellation_{i}"] = cancellation_check(i, ec).is_zero
            checks[f"f_transform_{i}"] = compare(
                f_transform(i, ec).total, recursions[i - 1]
            ).equal
    payload = report.to_json()
    payload["checks"] = checks
    _emit(payload, args.out)
    ok = all(checks.values())
    _note("all checks passed" if ok else f"FAILED: {checks}")
    return 0 if ok else 1


def cmd_render(args: argparse.Namespace) -> int:
    try:
        tree = parse(args.tree)
    except ParseError as exc:
        raise CliError(str(exc)) from exc
    print(render(tree, args.format))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dim", type=int, help="lattice dimension")
    common.add_argument("--K", type=int, help="lattice radius")
    common.add_argument("--N", type=int, help="resonance threshold")
    common.add_argument(
        "--assumption-mode",
        choices=[m.value for m in AssumptionMode],
        help="reading of the nested size rule",
    )
    common.add_argument("--cap", type=int, help="tree enumeration cap")
    common.add_argument("--config", help="JSON config file path")
    common.add_argument("--out", help="output file (default stdout)")

    parser = argparse.ArgumentParser(
        prog="birkhoff",
        description="decorated-tree normal form engine for truncated cubic NLS",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trees", parents=[common], help="enumerate a tree class")
    p.add_argument("--kind", required=True,
                   choices=[k.value for k in ClassKind])
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--ell", type=int)
    p.add_argument("--format", default="json",
                   choices=["json", "latex", "dot"])
    p.set_defaults(func=cmd_trees)

    p = sub.add_parser("expand", parents=[common],
                       help="normal form expansion ledger")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("f-transform", parents=[common],
                       help="generator ledger F_m")
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_f_transform)

    p = sub.add_parser("verify", parents=[common],
                       help="tree expansion versus brute-force iteration")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--ledger", help="check a saved expand ledger instead")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("render", parents=[common], help="pretty-print a tree")
    p.add_argument("--tree", required=True, help="canonical tree string")
    p.add_argument("--format", default="canonical",
                   choices=["canonical", "latex", "dot"])
    p.set_defaults(func=cmd_render)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        _note(f"error: {exc}")
        return 2
    except (EnumerationCapError, ValueError) as exc:
        _note(f"error: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
