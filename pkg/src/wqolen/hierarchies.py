"""Fundamental sequences, predecessors and the Hardy / length / fast-growing hierarchies.

Everything here works on general (not necessarily CNF) ordinal terms: the
hierarchies are syntactic, so ``1 + w`` and ``w`` index different functions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .control import BudgetMeter, ControlFunction, EvalBudget
from .ordinals import (
    ZERO,
    OrdinalTerm,
    _cmp,
    _require_cnf,
    classify,
    format_ordinal,
    is_cnf,
    leanness,
    nat,
    omega_pow,
    to_cnf,
)

__all__ = [
    "FundamentalConfig",
    "X",
    "XPLUS1",
    "HierarchyKind",
    "fundamental",
    "predecessor",
    "pointwise_le",
    "evaluate",
    "hardy",
    "length",
    "length_at_least",
    "fast",
    "LengthBound",
    "length_bound",
    "Classification",
    "classify_complexity",
]


@dataclass(frozen=True)
class FundamentalConfig:
    """Choice of ``w_x``: ``"x"`` or ``"x+1"``."""

    omega_at: str = "x+1"

    def __post_init__(self):
        if self.omega_at not in ("x", "x+1"):
            raise ValueError("omega_at must be 'x' or 'x+1'")

    def omega(self, x: int) -> int:
        return x if self.omega_at == "x" else x + 1


X = FundamentalConfig("x")
XPLUS1 = FundamentalConfig("x+1")


class HierarchyKind(enum.Enum):
    HARDY = "hardy"
    LENGTH = "length"
    FAST = "fast"


# --------------------------------------------------------------- sequences


def _drop_unit(alpha: OrdinalTerm) -> tuple[OrdinalTerm, OrdinalTerm]:
    """Split ``alpha = gamma + w^e`` (last unit summand); returns (gamma, e)."""
    items = list(alpha.summands)
    e, c = items[-1]
    if c == 1:
        items.pop()
    else:
        items[-1] = (e, c - 1)
    return OrdinalTerm(items), e


def _fund(lam: OrdinalTerm, x: int, cfg: FundamentalConfig) -> OrdinalTerm:
    gamma, e = _drop_unit(lam)
    if classify(e) == "successor":
        delta, _ = _drop_unit(e)
        return gamma + OrdinalTerm([(delta, cfg.omega(x))])
    return gamma + omega_pow(_fund(e, x, cfg))


def fundamental(lam: OrdinalTerm, x: int, cfg: FundamentalConfig = XPLUS1) -> OrdinalTerm:
    """``lam_x`` for the standard assignment."""
    if classify(lam) != "limit":
        raise ValueError(f"{format_ordinal(lam)} is not a limit")
    return _fund(lam, x, cfg)


def _step(alpha: OrdinalTerm, x: int, cfg: FundamentalConfig) -> OrdinalTerm:
    if classify(alpha) == "successor":
        return _drop_unit(alpha)[0]
    return _fund(alpha, x, cfg)


def predecessor(
    alpha: OrdinalTerm,
    x: int,
    cfg: FundamentalConfig = XPLUS1,
    budget: EvalBudget | None = None,
) -> OrdinalTerm:
    """``P_x(alpha)``: descend through fundamental sequences to the first successor."""
    if alpha.is_zero:
        raise ValueError("0 has no predecessor")
    meter = (budget or EvalBudget()).meter("steps")
    while classify(alpha) == "limit":
        meter.tick()
        meter.progress["alpha"] = alpha
        alpha = _fund(alpha, x, cfg)
        if alpha.is_zero:
            raise ValueError(f"P_{x} is undefined here: the descent reaches 0 since w_{x} = 0")
    return _drop_unit(alpha)[0]


def _den_le(a: OrdinalTerm, b: OrdinalTerm) -> bool:
    return _cmp(to_cnf(a), to_cnf(b)) <= 0


def pointwise_le(
    alpha1: OrdinalTerm,
    alpha: OrdinalTerm,
    x: int,
    cfg: FundamentalConfig = XPLUS1,
    budget: EvalBudget | None = None,
) -> bool:
    """``alpha1 ⊴_x alpha``: ``alpha1`` occurs on the descent chain of ``alpha``.

    The chain steps ``beta + 1 -> beta`` and ``lam -> lam_x``.  Common
    leading summands are stripped (the chain of ``g + a`` runs through
    ``g + chain(a)`` and then ``g``), and a chain starting at ``w^e * c + r``
    is fast-forwarded to ``w^e`` when the target lies below ``w^e``.
    """
    meter = (budget or EvalBudget()).meter("steps")
    a1 = list(alpha1.expand())
    a = list(alpha.expand())
    while True:
        i = 0
        while i < len(a) and i < len(a1) and a[i] == a1[i]:
            i += 1
        a1, a = a1[i:], a[i:]
        if not a1:
            return True
        if not a:
            return False
        t1 = OrdinalTerm((e, 1) for e in a1)
        t = OrdinalTerm((e, 1) for e in a)
        if _den_le(t, t1):
            return False
        meter.tick()
        head = omega_pow(a[0])
        if len(a) > 1 and not _den_le(head, t1):
            t = head
        a = list(_step(t, x, cfg).expand())


# -------------------------------------------------------------- hierarchies


def _split_finite_tail(alpha: OrdinalTerm) -> tuple[OrdinalTerm, int]:
    items = alpha.summands
    if items and items[-1][0].is_zero:
        return OrdinalTerm(items[:-1]), items[-1][1]
    return alpha, 0


def _iterate(h: ControlFunction, k: int, x: int, meter: BudgetMeter) -> int:
    if h.is_succ:
        return meter.check(x + k)
    for _ in range(k):
        meter.tick()
        x = meter.check(h(x))
    return x


def hardy(h, alpha, x, cfg=XPLUS1, budget=None, meter=None) -> int:
    """``h^alpha(x)``."""
    meter = meter or (budget or EvalBudget()).meter("steps")
    meter.check(x)
    while alpha.summands:
        meter.tick()
        meter.progress["alpha"] = alpha
        alpha, k = _split_finite_tail(alpha)
        if k:
            x = _iterate(h, k, x, meter)
        else:
            alpha = _fund(alpha, x, cfg)
    return x


def length(h, alpha, x, cfg=XPLUS1, budget=None, meter=None) -> int:
    """``h_alpha(x)``; finite ``alpha = k`` gives ``k`` outright."""
    meter = meter or (budget or EvalBudget()).meter("steps")
    meter.check(x)
    acc = 0
    while alpha.summands:
        meter.tick()
        meter.progress["alpha"] = alpha
        alpha, k = _split_finite_tail(alpha)
        if k:
            acc += k
            if not alpha.summands:
                break
            x = _iterate(h, k, x, meter)
        else:
            alpha = _fund(alpha, x, cfg)
    return acc


def length_at_least(h, alpha, x, target, cfg=XPLUS1, budget=None) -> bool:
    """Decide ``h_alpha(x) >= target`` for an inflationary ``h``.

    Runs the ``length`` descent but stops as soon as the count reaches
    ``target``.  The descent of an infinite ``alpha`` passes through some
    ``g + w`` at an argument ``x' >= x``, which contributes ``w_x' >= w_x``
    more steps; so once ``w_x`` alone closes the gap we can stop, which
    keeps the arguments from outgrowing the bit budget.
    """
    meter = (budget or EvalBudget()).meter("steps")
    meter.check(x)
    acc = 0
    while alpha.summands:
        if acc >= target:
            return True
        if not alpha.is_finite and acc + cfg.omega(x) >= target:
            return True
        meter.tick()
        meter.progress["alpha"] = alpha
        alpha, k = _split_finite_tail(alpha)
        if k:
            acc += k
            if not alpha.summands:
                break
            for _ in range(k):
                if acc + cfg.omega(x) >= target:
                    return True
                meter.tick()
                x = meter.check(h(x))
        else:
            alpha = _fund(alpha, x, cfg)
    return acc >= target


def fast(h, alpha, x, cfg=XPLUS1, budget=None, meter=None) -> int:
    """``f_alpha(x)``, with ``f_0 = h`` and ``f_(a+1)(x) = f_a^(w_x)(x)``."""
    meter = meter or (budget or EvalBudget()).meter("steps")
    v = meter.check(x)
    tasks: list[list] = [[alpha, 1]]
    while tasks:
        top = tasks[-1]
        if top[1] == 0:
            tasks.pop()
            continue
        top[1] -= 1
        a = top[0]
        while True:
            meter.tick()
            meter.progress["alpha"] = a
            if not a.summands:
                v = meter.check(h(v))
                break
            if classify(a) == "limit":
                a = _fund(a, v, cfg)
                continue
            tasks.append([_drop_unit(a)[0], cfg.omega(v)])
            break
    return v


def evaluate(
    kind: HierarchyKind | str,
    h: ControlFunction,
    alpha: OrdinalTerm,
    x: int,
    cfg: FundamentalConfig = XPLUS1,
    budget: EvalBudget | None = None,
) -> int:
    """Exact hierarchy value; raises :class:`Exceeded` past the budget."""
    kind = HierarchyKind(kind)
    fn = {HierarchyKind.HARDY: hardy, HierarchyKind.LENGTH: length, HierarchyKind.FAST: fast}[kind]
    return fn(h, alpha, x, cfg, budget)


# ---------------------------------------------------------------- bounds


def product_control(g: ControlFunction) -> ControlFunction:
    """``h(x) = x * g(x)``."""
    inner = "x+1" if g.is_succ else g.text
    return ControlFunction(f"x*({inner})")


@dataclass(frozen=True)
class LengthBound:
    alpha: OrdinalTerm
    k: int
    h: ControlFunction
    argument: int
    symbolic: str
    numeric: int | None
    exceeded: str | None = None


def length_bound(
    alpha: OrdinalTerm,
    g: ControlFunction,
    n: int,
    cfg: FundamentalConfig = XPLUS1,
    budget: EvalBudget | None = None,
) -> LengthBound:
    """``h_alpha(k n)`` with ``k = leanness(alpha)`` and ``h(x) = x g(x)``.

    The numeric part is ``None`` (with the reason in ``exceeded``) when the
    budget runs out; the symbolic part is always filled in.
    """
    from .control import Exceeded

    _require_cnf(alpha)
    if n <= 0:
        raise ValueError("the bound is stated for n > 0")
    k = leanness(alpha)
    h = product_control(g)
    symbolic = f"h_{{{format_ordinal(alpha)}}}({k}*{n}) with h(x) = {h.text}"
    items = alpha.summands
    if (
        len(items) == 1
        and items[0][1] == 1
        and len(items[0][0].summands) == 1
        and items[0][0].summands[0][1] == 1
        and items[0][0].summands[0][0].is_finite
    ):
        p = items[0][0].summands[0][0].finite_value() + 1
        symbolic += f"; star bound h_{{w^(w^{p - 1})}}(({p}-1)*{n}) for G{p}^*"
    try:
        numeric = length(h, alpha, k * n, cfg, budget)
        return LengthBound(alpha, k, h, k * n, symbolic, numeric)
    except Exceeded as exc:
        return LengthBound(alpha, k, h, k * n, symbolic, None, str(exc))


@dataclass(frozen=True)
class Classification:
    beta: OrdinalTerm
    gamma: OrdinalTerm
    branch: int | None
    index: OrdinalTerm | None

    @property
    def label(self) -> str:
        if self.index is None:
            return "no branch applies"
        return f"F_{{{format_ordinal(self.index)}}}"


def classify_complexity(beta: OrdinalTerm, gamma: OrdinalTerm) -> Classification:
    """Class of ``L_{A,g}`` for ``o(A) < w^(beta+1)`` and ``g`` bounded in ``F_gamma``.

    Branch 1: ``F_beta`` when ``gamma < w <= beta``.  Branch 2: ``F_(gamma+beta)``
    (syntactic sum) when ``gamma >= 2`` and ``beta < w``.
    """
    _require_cnf(beta, gamma)
    omega = omega_pow(1)
    gamma_finite = _cmp(gamma, omega) < 0
    beta_finite = _cmp(beta, omega) < 0
    if gamma_finite and not beta_finite:
        return Classification(beta, gamma, 1, beta)
    if _cmp(gamma, nat(2)) >= 0 and beta_finite:
        return Classification(beta, gamma, 2, gamma + beta)
    return Classification(beta, gamma, None, None)


def gamma_for_control(g: ControlFunction) -> OrdinalTerm | None:
    """0 for the successor, 2 for polynomials, otherwise unknown (None)."""
    if g.is_succ:
        return ZERO
    if g.is_polynomial:
        return nat(2)
    return None


def leading_exponent_of(alpha: OrdinalTerm) -> OrdinalTerm:
    """Least ``beta`` with ``alpha < w^(beta+1)``; 0 for ``alpha = 0``."""
    if not is_cnf(alpha):
        alpha = to_cnf(alpha)
    return alpha.leading_exponent if alpha.summands else ZERO
