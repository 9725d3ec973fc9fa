"""Command-line interface.

Subcommands: compile, eval, laws, shadow, converge, proof (check |
search), weakcomp, fuzz-soundness, train-demo.  Every subcommand
writes a versioned JSON report ("dlc-report/1") to --out (default:
stdout) and exits 0 on pass, 1 when a checked verdict fails, and 2 on
usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import analysis, laws
from .calculus import (
    CALCULI,
    check_proof,
    load_proof,
    proof_to_json,
    prove_bounded,
    soundness_fuzz,
    weak_completeness_suite,
    _hyper_from_json,
    _tree_depth,
)
from .carriers import F64Carrier, XRealCarrier
from .core import (
    DL2,
    GODEL,
    LUKASIEWICZ,
    PRODUCT,
    STL_INFTY,
    LogicId,
    _node_to_json,
    stl,
    yager,
)
from .errors import DlcError, StepError
from .semantics import interpret
from .speclang import (
    base_env,
    elaborate,
    eval_loss,
    extend_env,
    load_bindings,
    load_network,
    load_spec,
    train_demo,
)

LOGIC_NAMES = ("goedel", "lukasiewicz", "yager", "product", "dl2", "stl", "stl-inf")
CARRIERS = {"f64": F64Carrier, "xreal": XRealCarrier}


class UsageError(DlcError):
    pass


def _logic_from_args(args) -> LogicId:
    name = args.logic
    if name == "yager":
        if args.r is None:
            raise UsageError("--logic yager requires --r")
        return yager(args.r)
    if name == "stl":
        if args.nu is None:
            raise UsageError("--logic stl requires --nu")
        return stl(args.nu)
    if args.r is not None or args.nu is not None:
        raise UsageError("--r applies to yager only, --nu to stl only")
    return {
        "goedel": GODEL,
        "lukasiewicz": LUKASIEWICZ,
        "product": PRODUCT,
        "dl2": DL2,
        "stl-inf": STL_INFTY,
    }[name]


def _add_logic_flags(p, required=True):
    p.add_argument("--logic", choices=LOGIC_NAMES, required=required)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--nu", type=float, default=None)


def _add_common_flags(p):
    p.add_argument("--carrier", choices=sorted(CARRIERS), default="f64")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", default=None)


def _emit(report: dict, out_path) -> None:
    text = json.dumps(report, indent=2, default=str)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _spec_env(args):
    env = base_env()
    nets = {}
    for item in args.net or []:
        name, _, path = item.partition("=")
        if not path:
            raise UsageError("--net expects name=path")
        nets[name] = load_network(path).as_env_function()
    return extend_env(env, functions=nets)


def _cmd_compile(args) -> int:
    logic = _logic_from_args(args)
    doc = load_spec(args.spec)
    expr = elaborate(doc, logic, _spec_env(args) if args.net else None)
    _emit(
        {
            "version": "dlc-report/1",
            "kind": "compile",
            "logic": args.logic,
            "expr": _node_to_json(expr),
        },
        args.out,
    )
    return 0


def _cmd_eval(args) -> int:
    logic = _logic_from_args(args)
    doc = load_spec(args.spec)
    env = _spec_env(args)
    inputs = load_bindings(args.inputs)
    value, gradient = eval_loss(
        logic, doc, inputs, env, CARRIERS[args.carrier], args.grad
    )
    _emit(
        {
            "version": "dlc-report/1",
            "kind": "eval",
            "logic": args.logic,
            "loss": float(F64Carrier.primal(value))
            if args.carrier == "f64"
            else str(value),
            "gradient": list(gradient) if gradient is not None else None,
        },
        args.out,
    )
    return 0


def _cmd_laws(args) -> int:
    matrix = laws.table3_matrix(args.seed, args.samples, args.tol)
    expected = laws.EXPECTED_MATRIX
    mismatches = [
        {"logic": lg, "group": g, "expected": expected[lg][g], "got": v}
        for lg, row in matrix["groups"].items()
        for g, v in row.items()
        if expected[lg][g] != v
    ]
    matrix["expected_mismatches"] = mismatches
    _emit(matrix, args.out)
    return 0 if not mismatches else 1


def _cmd_shadow(args) -> int:
    logic = _logic_from_args(args)
    rep = analysis.shadow_lifting_mand(
        logic, args.n, [0.25, 0.5, 0.75, 1.0], args.tol
    )
    _emit(rep.to_json(), args.out)
    return 0 if rep.holds else 1


def _cmd_converge(args) -> int:
    import random

    rng = random.Random(args.seed)
    logic = _logic_from_args(args)
    if logic.kind.value == "stl":
        values = [rng.uniform(0.1, 2.0) for _ in range(4)]
        if args.negative:
            values = [-v for v in values]
        rep = analysis.convergence_stl_min(
            values, [1.0, 3.0, 10.0, 30.0, logic.nu], args.tol
        )
    elif logic.kind.value == "yager":
        pairs = [(rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95)) for _ in range(20)]
        rep = analysis.convergence_yager_godel(
            pairs, [1.0, 2.0, 4.0, 8.0, 16.0, args.r], args.tol
        )
    else:
        raise UsageError("converge applies to --logic stl or --logic yager")
    _emit(rep.to_json(), args.out)
    return 0 if rep.passed else 1


def _cmd_proof_check(args) -> int:
    name, tree = load_proof(args.proof)
    calc = CALCULI[args.calculus or name]
    try:
        check_proof(calc, tree)
        ok = True
        detail = None
    except StepError as exc:
        ok = False
        detail = str(exc)
    _emit(
        {
            "version": "dlc-report/1",
            "kind": "proof-check",
            "calculus": calc.name,
            "depth": _tree_depth(tree),
            "passed": ok,
            "detail": detail,
        },
        args.out,
    )
    return 0 if ok else 1


def _cmd_proof_search(args) -> int:
    calc = CALCULI[args.calculus]
    with open(args.goal) as fh:
        goal = _hyper_from_json(json.load(fh)["components"])
    tree = prove_bounded(calc, goal, args.depth)
    report = {
        "version": "dlc-report/1",
        "kind": "proof-search",
        "calculus": calc.name,
        "depth_budget": args.depth,
        "found": tree is not None,
        "proof": proof_to_json(calc.name, tree) if tree is not None else None,
    }
    _emit(report, args.out)
    return 0 if tree is not None else 1


def _cmd_weakcomp(args) -> int:
    calc = CALCULI[args.calculus]
    rep = weak_completeness_suite(calc, args.depth)
    _emit(rep, args.out)
    return 0 if rep["passed"] else 1


def _cmd_fuzz(args) -> int:
    calc = CALCULI[args.calculus]
    rep = soundness_fuzz(calc, args.samples, args.depth, args.seed, args.tol)
    _emit(rep, args.out)
    return 0 if rep["passed"] else 1


def _cmd_train(args) -> int:
    logic = _logic_from_args(args)
    doc = load_spec(args.spec)
    env = _spec_env(args)
    inputs = load_bindings(args.inputs)
    trace = train_demo(
        logic,
        doc,
        inputs,
        env,
        x_name=args.x,
        center_name=args.center,
        radius_name=args.radius,
        steps=args.steps,
        learning_rate=args.lr,
    )
    _emit(
        {
            "version": "dlc-report/1",
            "kind": "train-demo",
            "logic": args.logic,
            "trace": trace,
        },
        args.out,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dlc", description="Differentiable-logic toolkit"
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="lower a spec file to a core expression")
    p.add_argument("spec")
    p.add_argument("--net", action="append", metavar="NAME=PATH")
    _add_logic_flags(p)
    _add_common_flags(p)
    p.set_defaults(fn=_cmd_compile)

    p = sub.add_parser("eval", help="evaluate a spec's loss and gradient")
    p.add_argument("spec")
    p.add_argument("--inputs", required=True)
    p.add_argument("--net", action="append", metavar="NAME=PATH")
    p.add_argument("--grad", default=None, metavar="VECTOR")
    _add_logic_flags(p)
    _add_common_flags(p)
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("laws", help="algebraic law matrix for all logics")
    _add_common_flags(p)
    p.set_defaults(fn=_cmd_laws)

    p = sub.add_parser("shadow", help="shadow-lifting check for one logic")
    p.add_argument("--n", type=int, default=3)
    _add_logic_flags(p)
    _add_common_flags(p)
    p.set_defaults(fn=_cmd_shadow)

    p = sub.add_parser("converge", help="limit checks (stl or yager)")
    p.add_argument("--negative", action="store_true",
                   help="use negative sample values (stl only)")
    _add_logic_flags(p)
    _add_common_flags(p)
    p.set_defaults(fn=_cmd_converge)

    proof = sub.add_parser("proof", help="proof checking and search")
    psub = proof.add_subparsers(dest="proof_command", required=True)

    p = psub.add_parser("check", help="re-check a serialized proof")
    p.add_argument("proof")
    p.add_argument("--calculus", choices=sorted(CALCULI), default=None)
    _add_common_flags(p)
    p.set_defaults(fn=_cmd_proof_check)

    p = psub.add_parser("search", help="bounded backward proof search")
    p.add_argument("--calculus", choices=sorted(CALCULI), required=True)
    p.add_argument("--goal", required=True)
    p.add_argument("--depth", type=int, default=12)
    _add_common_flags(p)
    p.set_defaults(fn=_cmd_proof_search)

    p = sub.add_parser("weakcomp", help="discharge the lattice/monoid goals")
    p.add_argument("--calculus", choices=sorted(CALCULI), required=True)
    p.add_argument("--depth", type=int, default=12)
    _add_common_flags(p)
    p.set_defaults(fn=_cmd_weakcomp)

    p = sub.add_parser("fuzz-soundness", help="random-derivation soundness fuzz")
    p.add_argument("--calculus", choices=sorted(CALCULI), required=True)
    p.add_argument("--depth", type=int, default=6)
    _add_common_flags(p)
    p.set_defaults(fn=_cmd_fuzz)

    p = sub.add_parser("train-demo", help="projected gradient ascent demo")
    p.add_argument("spec")
    p.add_argument("--inputs", required=True)
    p.add_argument("--net", action="append", metavar="NAME=PATH")
    p.add_argument("--x", default="x")
    p.add_argument("--center", default="v")
    p.add_argument("--radius", default="eps")
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--lr", type=float, default=0.1)
    _add_logic_flags(p)
    _add_common_flags(p)
    p.set_defaults(fn=_cmd_train)

    return ap


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (DlcError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))
