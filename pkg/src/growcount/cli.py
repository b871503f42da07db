"""Command-line interface.

Verbs: gen, count, oracle, analyze, bethe, verify, export.  Trees move
between commands as canonical JSON on stdin/stdout, so the verbs
compose:

    growcount gen comb --bonds 6 | growcount count

Exit codes: 0 success, 1 verification failure, 2 invalid input, 3
resource guard tripped (enumeration cap, SVG size).  Big integers in
JSON output are decimal strings; everything printed is deterministic,
byte for byte, for the same inputs.
"""

import argparse
import json
import math
import sys

from . import analytics, bethe, render, verify
from .core import (
    enumerate_growth_orders,
    growth_count,
    random_lattice_tree,
    tree_from_json,
    tree_to_json,
    tree_weight,
)
from .errors import (
    CapExceeded,
    GrowcountError,
    TooLarge,
)
from .generators import (
    tower_params,
    tower_tree,
    comb_tree,
    custom_hierarchical_tree,
    path_tree,
)

ORACLE_FREE_LIMIT = 12   # beyond this, `oracle` insists on --cap
PRINT_INT_BITS = 2 ** 17   # larger ints report bit length, not digits


def _emit(payload: dict) -> int:
    print(json.dumps(payload, separators=(",", ":")))
    return 0


def _fail(code: int, exc) -> int:
    print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    return code


def _read_tree():
    return tree_from_json(sys.stdin.read())


def _csv_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise ValueError(f"expected comma-separated integers, got {text!r}") \
            from exc


def cmd_gen(args) -> int:
    try:
        if args.kind == "path":
            _need(args, "bonds")
            tree = path_tree(args.bonds)
        elif args.kind == "comb":
            _need(args, "bonds")
            tree = comb_tree(args.bonds)
        elif args.kind == "tower":
            _need(args, "a0", "gen")
            tree = tower_tree(tower_params(args.a0, args.gen))
        elif args.kind == "random":
            _need(args, "bonds")
            tree = random_lattice_tree(args.bonds, seed=args.seed)
        else:   # custom
            _need(args, "ells")
            bs = _csv_ints(args.bs) if args.bs is not None else ()
            tree = custom_hierarchical_tree(_csv_ints(args.ells), bs)
    except (GrowcountError, ValueError) as exc:
        # every gen failure, guards included, is a bad request
        return _fail(2, exc)
    sys.stdout.write(tree_to_json(tree) + "\n")
    return 0


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise ValueError(f"gen {args.kind} requires --{name}")


def cmd_count(args) -> int:
    try:
        tree = _read_tree()
        w = tree_weight(tree)
        n = growth_count(tree)
    except (GrowcountError, ValueError) as exc:
        return _fail(2, exc)
    return _emit({"L": tree.bond_count, "W": str(w), "N": str(n)})


def cmd_oracle(args) -> int:
    try:
        tree = _read_tree()
        if tree.bond_count > ORACLE_FREE_LIMIT and args.cap is None:
            raise ValueError(
                f"L={tree.bond_count} needs an explicit --cap beyond "
                f"L={ORACLE_FREE_LIMIT}"
            )
    except (GrowcountError, ValueError) as exc:
        return _fail(2, exc)
    try:
        n = enumerate_growth_orders(tree, cap=args.cap)
    except CapExceeded as exc:
        return _fail(3, exc)
    return _emit({"N_enumerated": str(n)})


def cmd_analyze(args) -> int:
    try:
        report = analytics.verify_main_bound(args.a0, args.gen)
        params = tower_params(args.a0, args.gen)
        structure = (
            analytics.structure_fractions(args.a0, args.gen)
            if args.gen >= 2 else None
        )
        if args.mode == "exact":
            total = analytics.bond_count(params, args.gen)
            log_w = math.log(
                analytics.weight_upper_bound(params, args.gen, mode="exact")
            )
        else:
            total = params.bond_counts[args.gen]
            bound = analytics.weight_upper_bound(params, args.gen, mode="log")
            log_w = bound.ln
    except (GrowcountError, ValueError) as exc:
        return _fail(2, exc)
    payload = report.to_dict()
    payload["mode"] = args.mode
    # quadratic digit conversion makes huge counts unprintable in
    # reasonable time, so past a threshold report only the bit length
    if total is not None and total.bit_length() <= PRINT_INT_BITS:
        payload["L"] = str(total)
    else:
        payload["L"] = None
    payload["Lbits"] = total.bit_length() if total is not None else None
    payload["logW"] = log_w
    payload["structure"] = structure.to_dict() if structure else None
    return _emit(payload)


def cmd_bethe(args) -> int:
    try:
        report = bethe.bethe_existence_bound(args.bonds)
    except (GrowcountError, ValueError) as exc:
        return _fail(2, exc)
    return _emit(report.to_dict())


def cmd_verify(args) -> int:
    names = list(verify.SUITES) if args.suite == "all" else [args.suite]
    checks = verify.run_suites(names)
    failed = [c for c in checks if not c.ok]
    for c in checks:
        mark = "ok  " if c.ok else "FAIL"
        tail = f"  ({c.detail})" if c.detail else ""
        print(f"[{mark}] {c.name}{tail}")
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return 1 if failed else 0


def cmd_export(args) -> int:
    try:
        tree = _read_tree()
    except (GrowcountError, ValueError) as exc:
        return _fail(2, exc)
    if args.format == "dot":
        sys.stdout.write(render.to_dot(tree))
        return 0
    try:
        text = render.to_svg(tree)
    except TooLarge as exc:
        return _fail(3, exc)
    sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="growcount",
        description="Exact growth-order counting for rooted lattice trees.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("gen", help="generate a tree as canonical JSON")
    p.add_argument("kind", choices=("path", "comb", "tower", "random", "custom"))
    p.add_argument("--bonds", type=int, help="bond count (path, comb, random)")
    p.add_argument("--a0", type=int, help="tower seed (tower)")
    p.add_argument("--gen", type=int, help="generation (tower)")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (random)")
    p.add_argument("--ells", help="backbone lengths, comma-separated (custom)")
    p.add_argument("--bs", help="branch counts, comma-separated (custom)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("count", help="exact W and N for a tree on stdin")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("oracle", help="brute-force growth-order count")
    p.add_argument("--cap", type=int, help="abort once the count passes this")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("analyze", help="constants and certified margins")
    p.add_argument("--a0", type=int, default=20)
    p.add_argument("--gen", type=int, default=2)
    p.add_argument("--mode", choices=("exact", "log"), default="log")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("bethe", help="Bethe-lattice pigeonhole report")
    p.add_argument("--bonds", type=int, required=True)
    p.set_defaults(func=cmd_bethe)

    p = sub.add_parser("verify", help="run the invariant suites")
    p.add_argument(
        "--suite", choices=("core", "tower", "bethe", "all"), default="all"
    )
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="render a tree from stdin")
    p.add_argument("--format", choices=("dot", "svg"), required=True)
    p.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    try:   # exact counts overflow the default digit cap quickly
        sys.set_int_max_str_digits(0)
    except AttributeError:
        pass
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
