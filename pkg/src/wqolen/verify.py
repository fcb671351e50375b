"""Property suites behind ``wqolen verify``.

Each suite returns a list of :class:`Check` records.  A check whose
computation runs out of budget is recorded as ``skip``, never ``fail``.
"""

from __future__ import annotations

import random
from bisect import bisect_left
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable

from .control import SUCC, ControlFunction, EvalBudget, Exceeded
from .derivatives import d_n_closed_form, d_n_principal, derive, mbound, mbound_chain
from .hierarchies import (
    X,
    XPLUS1,
    FundamentalConfig,
    fast,
    fundamental,
    hardy,
    length,
    length_at_least,
    pointwise_le,
    predecessor,
    product_control,
)
from .nwqo import (
    NwqoExpr,
    enumerate_below,
    is_bad,
    is_controlled,
    max_bad_length,
    max_bad_length_residual,
    normalize,
    parse_nwqo,
    reflect_residual,
)
from .ordinals import (
    ZERO,
    OrdinalTerm,
    _cmp,
    classify,
    cnf_terms_below_omega_omega,
    compare,
    format_ordinal,
    is_cnf,
    leanness,
    nat,
    natural_product,
    natural_sum,
    omega_pow,
    to_cnf,
)
from .otype import canonical_nwqo, otype

__all__ = [
    "Check",
    "SUITES",
    "run_suite",
    "random_cnf",
    "random_cnf_www",
    "random_omega_term",
    "DESCENT_FAMILY",
    "MAIN_FAMILY",
    "check_main_inequality",
    "check_descent",
    "check_bound_chain",
]


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    instance: str
    status: str  # "pass" | "fail" | "skip"
    detail: str = ""

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "name": self.name,
            "instance": self.instance,
            "status": self.status,
            "detail": self.detail,
        }


def _run(suite: str, name: str, instance: str, fn: Callable[[], bool | tuple]) -> Check:
    try:
        out = fn()
    except Exceeded as exc:
        return Check(suite, name, instance, "skip", str(exc))
    detail = ""
    if isinstance(out, tuple):
        out, detail = out
    return Check(suite, name, instance, "pass" if out else "fail", detail)


# -------------------------------------------------------------- generators


def random_cnf(rng: random.Random, depth: int, max_coeff: int, max_terms: int = 3) -> OrdinalTerm:
    """Random CNF term of nesting depth <= ``depth``."""
    if depth <= 0:
        return ZERO
    k = rng.randint(0, max_terms)
    exps = {random_cnf(rng, depth - 1, max_coeff, max_terms) for _ in range(k)}
    exps = sorted(exps, key=lambda e: _SortKey(e), reverse=True)
    return OrdinalTerm((e, rng.randint(1, max_coeff)) for e in exps)


class _SortKey:
    __slots__ = ("t",)

    def __init__(self, t):
        self.t = t

    def __lt__(self, other):
        return _cmp(self.t, other.t) < 0


def random_cnf_www(rng: random.Random, max_coeff: int = 4, max_terms: int = 3) -> OrdinalTerm:
    """Random CNF term below w^(w^w) (depth <= 3)."""
    return random_cnf(rng, 3, max_coeff, max_terms)


def random_omega_term(rng: random.Random, depth: int, max_coeff: int, max_terms: int = 3) -> OrdinalTerm:
    """Random general (possibly non-CNF) term."""
    if depth <= 0:
        return ZERO
    k = rng.randint(0, max_terms)
    return OrdinalTerm(
        (random_omega_term(rng, depth - 1, max_coeff, max_terms), rng.randint(1, max_coeff))
        for _ in range(k)
    )


# ---------------------------------------------------------------- ordinals


def suite_ordinals(seed: int = 1, samples: int = 300) -> list[Check]:
    rng = random.Random(seed)
    out = []

    def add(name, inst, fn):
        out.append(_run("ordinals", name, inst, fn))

    for _ in range(samples):
        a, b, c = (random_cnf(rng, 3, 5) for _ in range(3))
        inst = f"{a} | {b} | {c}"
        add("sum-commutative", inst, lambda: natural_sum(a, b) == natural_sum(b, a))
        add(
            "sum-associative",
            inst,
            lambda: natural_sum(natural_sum(a, b), c) == natural_sum(a, natural_sum(b, c)),
        )
        add("product-commutative", inst, lambda: natural_product(a, b) == natural_product(b, a))
        add(
            "product-associative",
            inst,
            lambda: natural_product(natural_product(a, b), c)
            == natural_product(a, natural_product(b, c)),
        )
        add(
            "distributive",
            inst,
            lambda: natural_product(a, natural_sum(b, c))
            == natural_sum(natural_product(a, b), natural_product(a, c)),
        )
        lo, hi = sorted((b, c), key=_SortKey)
        if compare(lo, hi) < 0:
            add(
                "sum-monotone",
                inst,
                lambda: compare(natural_sum(a, lo), natural_sum(a, hi)) < 0,
            )
            if a:
                add(
                    "product-monotone",
                    inst,
                    lambda: compare(natural_product(a, lo), natural_product(a, hi)) < 0,
                )
        add(
            "compare-transitive",
            inst,
            lambda: not (compare(a, b) <= 0 and compare(b, c) <= 0) or compare(a, c) <= 0,
        )
        add(
            "compare-antisymmetric",
            inst,
            lambda: (compare(a, b) == 0) == (a == b) and compare(a, b) == -compare(b, a),
        )
        t = random_omega_term(rng, 3, 3)
        add("to_cnf-is-cnf", format_ordinal(t), lambda: is_cnf(to_cnf(t)) and to_cnf(to_cnf(t)) == to_cnf(t))
        add(
            "lean-subadditive",
            inst,
            lambda: leanness(natural_sum(a, b)) <= leanness(a) + leanness(b),
        )
    # principal closure: a term is below w^beta iff each summand is
    exps = list(cnf_terms_below_omega_omega(2, 2))
    for beta in exps:
        bound = omega_pow(beta)
        for alpha in exps:
            add(
                "principal-closure",
                f"{alpha} < w^({beta})",
                lambda: (compare(alpha, bound) < 0)
                == all(compare(omega_pow(e), bound) < 0 for e, _ in alpha.summands),
            )
    return out


# ----------------------------------------------------------------- descent

DESCENT_FAMILY: tuple[str, ...] = (
    "G1", "G2", "G3", "G4", "Seg1", "Seg2", "Seg3", "Seg4", "N",
    "G2 + G3", "G1 + N", "N + N", "Seg2 + Seg3", "Seg3 + N", "G4 + N",
    "G2 * G3", "G2 * N", "G3 * N", "G1 * N", "Seg2 * N", "Seg3 * Seg3",
    "Seg4 * Seg4", "G2 * Seg3", "N * Seg3", "Seg2 * G2", "Seg4 + Seg4",
    "(N + G1) * G2", "(G2 + G1) * N", "N * Seg2 + G1", "(Seg2 + Seg2) * Seg2",
    "N + N + N", "N + N * Seg2", "G2 * G2 * G2", "Seg2 * Seg2 * Seg3",
    "(G1 + Seg3) * Seg2", "G2 * (N + G2)", "Seg3 * Seg3 * Seg3", "(N + G2) + Seg3",
    "(G1^*) * G2", "G1^* + G2",
)


def check_descent(a: NwqoExpr, n: int, g: ControlFunction = SUCC, budget: EvalBudget | None = None):
    """``L_A(n) = max_{x in A_<n} 1 + L_{A/x}(g(n))``."""
    budget = budget or EvalBudget()
    lhs, witness = max_bad_length(a, g, n, budget)
    rhs = 0
    for x in enumerate_below(a, n, budget):
        rhs = max(rhs, 1 + max_bad_length_residual(a, [x], g, g(n), budget))
    ok = lhs == rhs and is_bad(a, witness) and is_controlled(a, g, n, witness) and len(witness) == lhs
    return ok, f"L={lhs} rhs={rhs}"


def suite_descent(seed: int = 1, max_n: int = 4, budget: EvalBudget | None = None) -> list[Check]:
    out = []
    for text in DESCENT_FAMILY:
        a = parse_nwqo(text)
        for n in range(max_n + 1):
            out.append(_run("descent", "descent-equation", f"{text} @ n={n}", lambda: check_descent(a, n, SUCC, budget)))
            out.append(
                _run(
                    "descent",
                    "normalize-preserves-length",
                    f"{text} @ n={n}",
                    lambda: max_bad_length(a, SUCC, n, budget)[0]
                    == max_bad_length(normalize(a), SUCC, n, budget)[0],
                )
            )
    return out


# -------------------------------------------------------------- reflection

REFLECT_FAMILY: tuple[str, ...] = (
    "G3", "N", "Seg4", "G2 + N", "G2 * N", "Seg3 * G2", "N * N",
    "G1^*", "G2^*", "G3^*", "(G1 + G1)^*", "N^*", "(G2 * G1)^*",
)


def suite_reflection(seed: int = 1, max_n: int = 2, max_m: int = 3, budget: EvalBudget | None = None) -> list[Check]:
    budget = budget or EvalBudget(max_nodes=2 * 10**6)
    out = []
    for text in REFLECT_FAMILY:
        a = parse_nwqo(text)
        for x in enumerate_below(a, max_n, budget):
            b = reflect_residual(a, x)
            for m in range(max_m + 1):
                out.append(
                    _run(
                        "reflection",
                        "residual-reflects",
                        f"{text} / {x} -> {b} @ m={m}",
                        lambda: max_bad_length_residual(a, [x], SUCC, m, budget)
                        <= max_bad_length(b, SUCC, m, budget)[0],
                    )
                )
    # Higman order is compatible with concatenation
    rng = random.Random(seed)
    star = parse_nwqo("G2^*")
    from .nwqo import Letter, Word, leq

    def word():
        return Word(Letter(rng.randint(1, 2)) for _ in range(rng.randint(0, 4)))

    for _ in range(200):
        u, u2, v, v2 = word(), word(), word(), word()
        if leq(star, u, u2) and leq(star, v, v2):
            out.append(
                _run(
                    "reflection",
                    "embedding-concatenation",
                    f"{u}{v} <= {u2}{v2}",
                    lambda: leq(star, Word(u.items + v.items), Word(u2.items + v2.items)),
                )
            )
    return out


# ------------------------------------------------------------- derivatives

DERIVATIVE_LENGTH_FAMILY: tuple[str, ...] = ("G3", "N", "G2 * N", "N + G2", "G2^*", "G1^* * G2", "N * N")


def suite_derivatives(seed: int = 1, samples: int = 1000, budget: EvalBudget | None = None) -> list[Check]:
    rng = random.Random(seed)
    out = []
    for _ in range(samples):
        alpha = random_cnf_www(rng, 3)
        n = rng.randint(1, 4)
        inst = f"{alpha} @ n={n}"
        members = derive(alpha, n)
        out.append(_run("derivatives", "strictly-below", inst, lambda: all(compare(m, alpha) < 0 for m in members)))
        k = leanness(alpha)
        if k:
            out.append(
                _run("derivatives", "lean-propagation", inst, lambda: all(leanness(m) <= k * n for m in members))
            )
        beta = random_cnf(rng, 2, 3)
        out.append(
            _run(
                "derivatives",
                "closed-form",
                f"D_{n}(w^({beta}))",
                lambda: d_n_principal(beta, n) == d_n_closed_form(beta, n),
            )
        )
    out.extend(suite_derivative_length(budget=budget))
    return out


def suite_derivative_length(max_n: int = 2, max_m: int = 2, budget: EvalBudget | None = None) -> list[Check]:
    budget = budget or EvalBudget(max_nodes=2 * 10**6)
    out = []
    for text in DERIVATIVE_LENGTH_FAMILY:
        a = parse_nwqo(text)
        alpha = otype(a)
        for n in range(1, max_n + 1):
            cands = [canonical_nwqo(d) for d in derive(alpha, n)]
            for x in enumerate_below(a, n, budget):
                for m in range(max_m + 1):

                    def check():
                        lhs = max_bad_length_residual(a, [x], SUCC, m, budget)
                        best = None
                        for c in cands:
                            try:
                                v = max_bad_length(c, SUCC, m, budget)[0]
                            except Exceeded:
                                continue
                            if v >= lhs:
                                return True, f"L={lhs} <= {v}"
                            best = v if best is None else max(best, v)
                        if best is None:
                            raise Exceeded("nodes", budget.max_nodes)
                        return False, f"L={lhs} best={best}"

                    out.append(_run("derivatives", "derivative-length", f"{text} / {x} @ n={n} m={m}", check))
    return out


# ------------------------------------------------------------- hierarchies

_H_SMOOTH = (SUCC, ControlFunction("2*x+1"))


def _small_terms(rng, count, cnf=True, depth=2, coeff=2):
    out = []
    while len(out) < count:
        t = random_cnf(rng, depth, coeff) if cnf else random_omega_term(rng, depth, coeff)
        out.append(t)
    return out


def suite_hierarchies(seed: int = 1, samples: int = 100, budget: EvalBudget | None = None) -> list[Check]:
    rng = random.Random(seed)
    budget = budget or EvalBudget(max_steps=20000, max_bits=256)
    out = []

    def add(name, inst, fn):
        out.append(_run("hierarchies", name, inst, fn))

    add("anchor-F2(2)", "F_2(2)=8, w_x=x", lambda: fast(SUCC, nat(2), 2, X, budget) == 8)
    add("anchor-F3(2)", "F_3(2)=2048, w_x=x", lambda: fast(SUCC, nat(3), 2, X, EvalBudget()) == 2048)
    for x in range(6):
        add("hardy-omega", f"H^w({x})", lambda: hardy(SUCC, omega_pow(1), x, XPLUS1, budget) == 2 * x + 1)

    for cfg in (X, XPLUS1):
        tag = f"w_x={cfg.omega_at}"
        for alpha in _small_terms(rng, samples):
            for h in _H_SMOOTH:
                x = rng.randint(0, 3)
                inst = f"{alpha}, x={x}, h={h}, {tag}"
                if alpha and cfg.omega(x) > 0:
                    add(
                        "length-predecessor",
                        inst,
                        lambda: length(h, alpha, x, cfg, budget)
                        == 1 + length(h, predecessor(alpha, x, cfg, budget), h(x), cfg, budget),
                    )
                add(
                    "length-below-hardy",
                    inst,
                    lambda: length(h, alpha, x, cfg, budget) <= hardy(h, alpha, x, cfg, budget) - x,
                )
                if h.is_succ:
                    add(
                        "length-hardy-identity",
                        inst,
                        lambda: length(h, alpha, x, cfg, budget) == hardy(h, alpha, x, cfg, budget) - x,
                    )
                y = x + rng.randint(1, 2)
                add(
                    "mono-hardy",
                    f"{inst}, y={y}",
                    lambda: length(h, alpha, x, cfg, budget) <= length(h, alpha, y, cfg, budget),
                )
                if cfg.omega(x) > 0:
                    add("fast-mn", inst, lambda: fast(h, alpha, x, cfg, budget) >= h(x) >= x)
                if cfg.omega(x) > 0:
                    add(
                        "fast-xy",
                        f"{inst}, y={y}",
                        lambda: fast(h, alpha, x, cfg, budget) <= fast(h, alpha, y, cfg, budget),
                    )
        for alpha in _small_terms(rng, samples // 2, depth=2, coeff=2):
            for r in range(4):
                x = rng.randint(0, 3)
                inst = f"w^({alpha})*{r}, x={x}, {tag}"
                add(
                    "hardy-fast-iterate",
                    inst,
                    lambda: hardy(SUCC, OrdinalTerm([(alpha, r)]), x, cfg, budget)
                    == _iterate_fast(alpha, r, x, cfg, budget),
                )
        for _ in range(samples):
            g_ = random_omega_term(rng, 2, 2)
            a_ = random_omega_term(rng, 2, 2)
            x = rng.randint(0, 3)
            h = rng.choice(_H_SMOOTH)
            add(
                "hardy-composition",
                f"{g_} + {a_}, x={x}, h={h}, {tag}",
                lambda: hardy(h, g_ + a_, x, cfg, budget)
                == hardy(h, g_, hardy(h, a_, x, cfg, budget), cfg, budget),
            )
        # pointwise-ordering consequences along descent chains
        for alpha in _small_terms(rng, samples):
            if not alpha:
                continue
            x = rng.randint(0, 3)
            a1 = _random_chain_member(rng, alpha, x, cfg)
            h = rng.choice(_H_SMOOTH)
            inst = f"{a1} ⊴_{x} {alpha}, h={h}, {tag}"
            add("chain-member-is-below", inst, lambda: pointwise_le(a1, alpha, x, cfg, budget))
            add(
                "dd-hardy",
                inst,
                lambda: length(h, a1, x, cfg, budget) <= length(h, alpha, x, cfg, budget),
            )
            if cfg.omega(x) > 0:
                add(
                    "fast-dd",
                    inst,
                    lambda: fast(h, a1, x, cfg, budget) <= fast(h, alpha, x, cfg, budget),
                )
    out.extend(_pointwise_laws(rng, samples, budget))
    return out


def _iterate_fast(alpha, r, x, cfg, budget):
    for _ in range(r):
        x = fast(SUCC, alpha, x, cfg, budget)
    return x


def _random_chain_member(rng, alpha, x, cfg, max_steps=40):
    steps = rng.randint(0, max_steps)
    cur = alpha
    for _ in range(steps):
        if not cur:
            break
        cur = predecessor(cur, x, cfg) if classify(cur) == "successor" else fundamental(cur, x, cfg)
    return cur


def _pointwise_laws(rng, samples, budget) -> list[Check]:
    out = []
    cfg = XPLUS1

    def add(name, inst, fn):
        out.append(_run("hierarchies", name, inst, fn))

    for _ in range(samples):
        alpha = random_cnf(rng, 3, 2)
        x = rng.randint(0, 3)
        add("dd-zero", f"0 ⊴_{x} {alpha}", lambda: pointwise_le(ZERO, alpha, x, cfg, budget))
        add("dd-reflexive", f"{alpha} ⊴_{x} {alpha}", lambda: pointwise_le(alpha, alpha, x, cfg, budget))
        if not alpha:
            continue
        a1 = _random_chain_member(rng, alpha, x, cfg, 20)
        if a1 == alpha:
            continue
        gamma = random_cnf(rng, 2, 2)
        add(
            "dd-sum",
            f"{gamma} + ({a1} ⊲_{x} {alpha})",
            lambda: pointwise_le(gamma + a1, gamma + alpha, x, cfg, budget),
        )
        add(
            "dd-power",
            f"w^({a1}) ⊲_{x} w^({alpha})",
            lambda: pointwise_le(omega_pow(a1), omega_pow(alpha), x, cfg, budget),
        )
    for _ in range(samples):
        lam = random_cnf(rng, 3, 2)
        if classify(lam) != "limit":
            continue
        x = rng.randint(0, 3)
        y = x + rng.randint(1, 3)
        add(
            "dd-limit",
            f"({lam})_{x} ⊲_{y} ({lam})_{y}",
            lambda: pointwise_le(fundamental(lam, x, cfg), fundamental(lam, y, cfg), y, cfg, budget),
        )
    return out


# ---------------------------------------------------------------- lean laws


def lean_terms(max_exp: int, max_coeff: int) -> list[OrdinalTerm]:
    return list(cnf_terms_below_omega_omega(max_exp, max_coeff))


def suite_lean(max_product: int = 6, max_exp: int = 2) -> list[Check]:
    """Lean-predecessor lemma and ``[alpha]_x = P_{N(alpha) x}(alpha)`` by enumeration."""
    cfg = XPLUS1
    out = []
    gammas = lean_terms(max_exp, 3)
    for x in range(1, max_product + 1):
        alphas = lean_terms(max_exp, x)
        for gamma in gammas:
            if not gamma:
                continue
            p = predecessor(gamma, x, cfg)
            for alpha in alphas:
                if leanness(alpha) > x or leanness(alpha) * x > max_product:
                    continue

                def four_way(alpha=alpha, gamma=gamma, p=p):
                    lt = compare(alpha, gamma) < 0
                    a = pointwise_le(alpha, p, x, cfg)
                    b = pointwise_le(alpha, gamma, x, cfg) and alpha != gamma
                    c = compare(alpha, p) <= 0
                    return lt == a == b == c, f"{lt} {a} {b} {c}"

                out.append(_run("lean", "lean-predecessor", f"{alpha} vs {gamma}, x={x}", four_way))
    pools = {}
    for k in range(1, max_product + 1):
        pool = [b for b in lean_terms(max_exp + 1, k) if leanness(b) <= k]
        pools[k] = sorted(pool, key=_SortKey)
    for x in range(1, max_product + 1):
        for alpha in pools[max_product]:
            k = leanness(alpha)
            if not alpha or k * x > max_product:
                continue

            def ident(alpha=alpha, k=k):
                pool = pools[k * x]
                i = bisect_left([_SortKey(b) for b in pool], _SortKey(alpha))
                best = pool[i - 1]
                return best == predecessor(alpha, k * x, cfg), f"max={best}"

            out.append(_run("lean", "predecessor-identity", f"[{alpha}]_{x}", ident))
    return out


# ------------------------------------------------------------------ bridge

MAIN_FAMILY: tuple[str, ...] = (
    "G1", "G2", "G3", "G4", "G1^*", "G2^*", "G1^* * G2", "G2^* + G3",
)


def check_main_inequality(
    a: NwqoExpr,
    n: int,
    g: ControlFunction = SUCC,
    budget: EvalBudget | None = None,
    exact_nodes: int = 20000,
):
    """``L_A(n) <= M_{o(A)}(n)``.

    ``M`` is computed exactly under a small node budget; otherwise a
    descending derivative chain of length ``>= L`` certifies the bound.
    """
    budget = budget or EvalBudget()
    lhs = max_bad_length(a, g, n, budget)[0]
    alpha = otype(a)
    try:
        m = mbound(alpha, g, n, EvalBudget(max_nodes=exact_nodes, max_bits=budget.max_bits))
        return lhs <= m, f"L={lhs} M={m}"
    except Exceeded:
        chain = mbound_chain(alpha, g, n, lhs, budget)
        return len(chain) >= lhs, f"L={lhs} M>={len(chain)} (chain certificate)"


def bound_chain_terms() -> list[OrdinalTerm]:
    out = []
    for a2, a1, a0 in product(range(3), repeat=3):
        t = OrdinalTerm([(nat(2), a2), (nat(1), a1), (ZERO, a0)])
        if t:
            out.append(t)
    return out


def check_bound_chain(alpha: OrdinalTerm, n: int, g: ControlFunction = SUCC, budget: EvalBudget | None = None):
    """``M_alpha(n) <= h_alpha(k n)`` with ``k = leanness(alpha)`` and ``h(x) = x g(x)``."""
    budget = budget or EvalBudget(max_nodes=20000, max_steps=10**5, max_bits=4096)
    m = mbound(alpha, g, n, budget)
    k = leanness(alpha)
    h = product_control(g)
    try:
        bound = length(h, alpha, k * n, XPLUS1, budget)
        return m <= bound, f"M={m} h={bound}"
    except Exceeded:
        ok = length_at_least(h, alpha, k * n, m, XPLUS1, budget)
        return ok, f"M={m} h>={m}" if ok else f"M={m} h<{m}"


def suite_bridge(seed: int = 1, budget: EvalBudget | None = None) -> list[Check]:
    out = []
    for text in MAIN_FAMILY:
        a = parse_nwqo(text)
        for n in range(4):
            out.append(_run("bridge", "main-inequality", f"{text} @ n={n}", lambda: check_main_inequality(a, n, SUCC, budget)))
    for alpha in bound_chain_terms():
        for n in (1, 2, 3):
            out.append(_run("bridge", "bound-chain", f"{alpha} @ n={n}", lambda: check_bound_chain(alpha, n)))
    return out


# ----------------------------------------------------------------- driver


SUITES: dict[str, Callable[..., list[Check]]] = {
    "ordinals": suite_ordinals,
    "descent": suite_descent,
    "reflection": suite_reflection,
    "derivatives": suite_derivatives,
    "hierarchies": lambda seed=1: suite_hierarchies(seed) + suite_lean(),
    "bridge": suite_bridge,
}


def run_suite(name: str, seed: int = 1) -> list[Check]:
    if name == "all":
        out = []
        for key in SUITES:
            out.extend(SUITES[key](seed=seed))
        return out
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    return SUITES[name](seed=seed)
