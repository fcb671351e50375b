"""Command-line front end: ``wqolen <subcommand> ...``.

Exit codes: 0 success, 1 invariant violation, 2 parse or usage error,
3 budget exceeded on a required computation.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

from . import __version__
from .control import ControlFunction, ControlSyntaxError, EvalBudget, Exceeded
from .derivatives import derive, mbound
from .hierarchies import (
    FundamentalConfig,
    HierarchyKind,
    classify_complexity,
    evaluate,
    gamma_for_control,
    leading_exponent_of,
    length_bound,
)
from .nwqo import (
    Gamma,
    NwqoSyntaxError,
    Prod,
    ShapeError,
    Star,
    format_element,
    format_nwqo,
    is_bad,
    is_controlled,
    max_bad_length,
    max_bad_length_residual,
    parse_nwqo,
    parse_sequence,
    power,
)
from .ordinals import (
    NotCNFError,
    OrdinalSyntaxError,
    _cmp,
    classify,
    format_ordinal,
    is_cnf,
    leanness,
    nat,
    omega_pow,
    parse_ordinal,
    to_cnf,
)
from .otype import NonExponentialError, OutOfFragmentError, canonical_nwqo, otype

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

_PARSE_ERRORS = (
    OrdinalSyntaxError,
    NwqoSyntaxError,
    ControlSyntaxError,
    ShapeError,
    NotCNFError,
    NonExponentialError,
    OutOfFragmentError,
)


class UsageError(Exception):
    pass


# ------------------------------------------------------------------ output


def _record(op: str, inputs: dict, result: Any, args, budget: EvalBudget) -> dict:
    return {
        "op": op,
        "input": inputs,
        "result": result,
        "budget": {
            "max_nodes": budget.max_nodes,
            "max_steps": budget.max_steps,
            "max_bits": budget.max_bits,
        },
        "config": {"g": str(args.g_fn), "omega": args.omega, "seed": args.seed},
    }


def _emit(record: dict, as_json: bool, out) -> None:
    if as_json:
        out.write(json.dumps(record, sort_keys=True, default=str) + "\n")
        return
    res = record["result"]
    if isinstance(res, dict):
        for k, v in res.items():
            if isinstance(v, list):
                v = ", ".join(str(x) for x in v) if v else "(none)"
            elif isinstance(v, dict):
                v = json.dumps(v, default=str)
            out.write(f"{k}: {v}\n")
    else:
        out.write(f"{res}\n")


# ---------------------------------------------------------------- commands


def _cfg(args) -> FundamentalConfig:
    return FundamentalConfig(args.omega)


def cmd_len(args, budget):
    a = parse_nwqo(args.expr)
    g = args.g_fn
    forbidden = parse_sequence(args.forbid) if args.forbid else []
    inputs = {"expr": format_nwqo(a), "n": args.n, "forbid": [format_element(x) for x in forbidden]}
    status = EXIT_OK
    if forbidden:
        value = max_bad_length_residual(
            a, forbidden, g, args.n, budget, memo=not args.no_memo, with_witness=True
        )
        length, witness = value
    else:
        length, witness = max_bad_length(
            a, g, args.n, budget, memo=not args.no_memo, symmetry=args.symmetry
        )
    result: dict[str, Any] = {"length": length}
    if args.witness:
        result["witness"] = [format_element(e) for e in witness]
    if args.check is not None:
        seq = parse_sequence(args.check)
        bad = is_bad(a, seq)
        controlled = is_controlled(a, g, args.n, seq)
        within = not (bad and controlled) or len(seq) <= length
        result["check"] = {
            "sequence": [format_element(e) for e in seq],
            "bad": bad,
            "controlled": controlled,
            "within_maximum": within,
        }
        inputs["check"] = args.check
        if not within:
            status = EXIT_VIOLATION
    return "len", inputs, result, status


def cmd_otype(args, budget):
    a = parse_nwqo(args.expr)
    o = otype(a)
    return "otype", {"expr": format_nwqo(a)}, {"otype": format_ordinal(o)}, EXIT_OK


def cmd_cnf(args, budget):
    t = parse_ordinal(args.term)
    c = to_cnf(t)
    result = {
        "cnf": format_ordinal(c),
        "is_cnf": is_cnf(t),
        "classify": classify(c),
        "leanness": leanness(c),
    }
    if args.canonical:
        result["canonical_nwqo"] = format_nwqo(canonical_nwqo(c))
    return "cnf", {"term": args.term}, result, EXIT_OK


def _cnf_arg(text: str):
    t = parse_ordinal(text)
    if not is_cnf(t):
        raise NotCNFError(f"{format_ordinal(t)} is not in Cantor normal form")
    return t


def cmd_deriv(args, budget):
    t = _cnf_arg(args.term)
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    ds = [format_ordinal(d) for d in derive(t, args.n)]
    return "deriv", {"term": format_ordinal(t), "n": args.n}, {"derivatives": ds}, EXIT_OK


def cmd_mbound(args, budget):
    t = _cnf_arg(args.term)
    value = mbound(t, args.g_fn, args.n, budget)
    return "mbound", {"term": format_ordinal(t), "n": args.n}, {"M": value}, EXIT_OK


def cmd_hier(args, budget):
    alpha = parse_ordinal(args.alpha)
    h = ControlFunction(args.h) if args.h else args.g_fn
    value = evaluate(HierarchyKind(args.kind), h, alpha, args.x, _cfg(args), budget)
    inputs = {"kind": args.kind, "alpha": format_ordinal(alpha), "x": args.x, "h": str(h)}
    return "hier", inputs, {"value": value}, EXIT_OK


def cmd_hbound(args, budget):
    t = _cnf_arg(args.term)
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    lb = length_bound(t, args.g_fn, args.n, _cfg(args), budget)
    result = {
        "symbolic": lb.symbolic,
        "k": lb.k,
        "h": lb.h.text,
        "argument": lb.argument,
        "numeric": lb.numeric,
    }
    if lb.exceeded:
        result["exceeded"] = lb.exceeded
    return "hbound", {"term": format_ordinal(t), "n": args.n}, result, EXIT_OK


def _gamma(args):
    if args.gamma is not None:
        return _cnf_arg(args.gamma)
    gamma = gamma_for_control(args.g_fn)
    if gamma is None:
        raise UsageError("cannot infer gamma from this control; pass --gamma")
    return gamma


def _classification_dict(c) -> dict:
    return {
        "beta": format_ordinal(c.beta),
        "gamma": format_ordinal(c.gamma),
        "branch": c.branch,
        "class_index": format_ordinal(c.index) if c.index is not None else None,
        "class": c.label,
    }


def cmd_classify(args, budget):
    if args.expr:
        beta = leading_exponent_of(otype(parse_nwqo(args.expr)))
    elif args.beta:
        beta = _cnf_arg(args.beta)
    else:
        raise UsageError("pass --beta or --expr")
    gamma = _gamma(args)
    c = classify_complexity(beta, gamma)
    inputs = {"beta": format_ordinal(beta), "gamma": format_ordinal(gamma)}
    if args.expr:
        inputs["expr"] = args.expr
    return "classify", inputs, _classification_dict(c), EXIT_OK


def lcs_expr(q: int, m: int, c: int):
    return Prod(Gamma(q), power(Star(Gamma(m)), c))


def lcs_order_type(q: int, m: int, c: int):
    """``w^(w^(m-1) * c) * q``."""
    return omega_pow(omega_pow(m - 1, c), q)


def cmd_lcs(args, budget):
    for name in ("q", "m", "c"):
        if getattr(args, name) < 1:
            raise UsageError(f"--{name} must be at least 1")
    q, m, c = args.q, args.m, args.c
    a = lcs_expr(q, m, c)
    o = otype(a)
    index = omega_pow(m - 1, c)
    gamma = _gamma(args)
    theorem = classify_complexity(leading_exponent_of(o), gamma)
    lifted = theorem.index is None and _cmp(gamma, nat(2)) < 0
    if lifted:
        # g in F_gamma is also in F_2, which always reaches the finite-beta branch
        theorem = classify_complexity(theorem.beta, nat(2))
    result: dict[str, Any] = {
        "expr": format_nwqo(a),
        "otype": format_ordinal(o),
        "formula": format_ordinal(lcs_order_type(q, m, c)),
        "class_index": format_ordinal(index),
        "theorem": _classification_dict(theorem),
    }
    if lifted:
        result["note"] = f"no branch applies with gamma = {format_ordinal(gamma)}; gamma lifted to 2"
    status = EXIT_OK if o == lcs_order_type(q, m, c) else EXIT_VIOLATION
    if args.n is not None:
        num: dict[str, Any] = {"n": args.n}
        try:
            num["L"] = max_bad_length(a, args.g_fn, args.n, budget)[0]
        except Exceeded as exc:
            num["L"] = None
            num["L_exceeded"] = str(exc)
        try:
            num["M"] = mbound(o, args.g_fn, args.n, budget)
        except Exceeded as exc:
            num["M"] = None
            num["M_exceeded"] = str(exc)
        if num.get("L") is not None and num.get("M") is not None and num["L"] > num["M"]:
            status = EXIT_VIOLATION
        result["numeric"] = num
    return "lcs", {"q": q, "m": m, "c": c}, result, status


def cmd_pep(args, budget):
    p, n = args.p, args.n
    if p < 1:
        raise UsageError("--p must be at least 1")
    index = omega_pow(omega_pow(1)) if args.unbounded else omega_pow(p - 1)
    result: dict[str, Any] = {
        "bound": f"H = 2 * L_{{G{p}^* * G{n}}}({args.size})" if not args.unbounded else "H = 2 * L_{G_p^* * G_n}(0)",
        "class_index": format_ordinal(index),
        "class": f"F_{{{format_ordinal(index)}}}",
    }
    if not args.unbounded and p <= 2 and n <= 2 and n >= 1:
        a = Prod(Star(Gamma(p)), Gamma(n))
        at = args.size
        try:
            value = max_bad_length(a, args.g_fn, at, budget)[0]
            result["L"] = value
            result["L_at"] = at
            result["H"] = 2 * value
        except Exceeded as exc:
            result["L"] = None
            result["L_exceeded"] = str(exc)
    return "pep", {"p": p, "n": n, "unbounded": args.unbounded, "size": args.size}, result, EXIT_OK


def cmd_verify(args, budget):
    from .verify import run_suite

    checks = run_suite(args.suite, seed=args.seed)
    counts = {"pass": 0, "fail": 0, "skip": 0}
    for ch in checks:
        counts[ch.status] += 1
    result: dict[str, Any] = {"suite": args.suite, **counts}
    if args.json:
        result["checks"] = [ch.as_dict() for ch in checks]
    else:
        shown = [f"[{ch.status}] {ch.name}: {ch.instance} {ch.detail}".rstrip()
                 for ch in checks if args.verbose or ch.status == "fail"]
        result["report"] = shown
    status = EXIT_VIOLATION if counts["fail"] else EXIT_OK
    return "verify", {"suite": args.suite, "seed": args.seed}, result, status


# ------------------------------------------------------------------ parser


def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--json", action="store_true", default=d(False), help="machine-readable output")
    parser.add_argument("--seed", type=int, default=d(1), help="seed for randomized suites")
    parser.add_argument("--budget-nodes", type=int, default=d(10**7), help="search node ceiling")
    parser.add_argument("--budget-steps", type=int, default=d(10**5), help="hierarchy step ceiling")
    parser.add_argument("--budget-bits", type=int, default=d(4096), help="bit-length ceiling on naturals")
    parser.add_argument("--omega", choices=("x", "x+1"), default=d("x+1"), help="value of w_x")
    parser.add_argument("--g", default=d("succ"), help="control function: succ or an expression in x")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wqolen",
        description="Lengths of controlled bad sequences and their ordinal bounds.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        _global_options(p, suppress=True)
        p.set_defaults(func=fn)
        return p

    p = add("len", cmd_len, "maximal length of a controlled bad sequence")
    p.add_argument("expr")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--witness", action="store_true", help="print a maximal bad sequence")
    p.add_argument("--check", metavar="SEQ", help="check a sequence, e.g. '[a1 a2], [a2]'")
    p.add_argument("--forbid", metavar="SEQ", help="compute over the residual by these elements")
    p.add_argument("--no-memo", action="store_true", help="plain tree search without memoization")
    p.add_argument("--symmetry", action="store_true", help="quotient by letter permutations")

    p = add("otype", cmd_otype, "maximal order type of an exponential nwqo")
    p.add_argument("expr")

    p = add("cnf", cmd_cnf, "normalize an ordinal term")
    p.add_argument("term")
    p.add_argument("--canonical", action="store_true", help="also print C(alpha)")

    p = add("deriv", cmd_deriv, "derivatives of a CNF term")
    p.add_argument("term")
    p.add_argument("--n", type=int, required=True)

    p = add("mbound", cmd_mbound, "the bound function M_alpha(n)")
    p.add_argument("term")
    p.add_argument("--n", type=int, required=True)

    p = add("hier", cmd_hier, "evaluate a Hardy, length or fast-growing function")
    p.add_argument("kind", choices=[k.value for k in HierarchyKind])
    p.add_argument("--alpha", required=True)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--h", help="base function (defaults to --g)")

    p = add("hbound", cmd_hbound, "the h_alpha(k n) bound on M_alpha(n)")
    p.add_argument("term")
    p.add_argument("--n", type=int, required=True)

    p = add("classify", cmd_classify, "complexity class from the main theorem")
    p.add_argument("--beta")
    p.add_argument("--expr", help="take beta from the order type of this nwqo")
    p.add_argument("--gamma")

    p = add("lcs", cmd_lcs, "lossy channel system configuration wqo")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--gamma")
    p.add_argument("--n", type=int, help="also compare L and M numerically at this n")

    p = add("pep", cmd_pep, "regular Post embedding bound")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--size", type=int, default=0, help="control start for the numeric L (default 0)")
    p.add_argument("--unbounded", action="store_true", help="alphabet size not fixed")

    p = add("verify", cmd_verify, "run a property suite")
    p.add_argument(
        "suite",
        choices=("ordinals", "descent", "reflection", "derivatives", "hierarchies", "bridge", "all"),
    )
    p.add_argument("--verbose", action="store_true", help="list every checked instance")
    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        budget = EvalBudget(args.budget_nodes, args.budget_steps, args.budget_bits)
        args.g_fn = ControlFunction(args.g)
    except (ValueError, ControlSyntaxError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    try:
        op, inputs, result, status = args.func(args, budget)
    except _PARSE_ERRORS + (UsageError,) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except Exceeded as exc:
        record = _record(args.command, {}, {"exceeded": exc.limit, "ceiling": exc.ceiling,
                                           "progress": {k: str(v) for k, v in exc.progress.items()}},
                         args, budget)
        if args.json:
            _emit(record, True, out)
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BUDGET
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    _emit(_record(op, inputs, result, args, budget), args.json, out)
    return status


def main_entry() -> None:
    sys.exit(main())
