"""Derivatives ``D_n`` / ``∂_n`` on CNF(w^(w^w)) and the bound function ``M_alpha``."""

from __future__ import annotations

from .control import ControlFunction, EvalBudget
from .ordinals import (
    ZERO,
    OrdinalTerm,
    _Key,
    _merge_desc,
    _nprod,
    _nsum,
    _require_cnf,
    format_ordinal,
    nat,
    omega_pow,
)
from .otype import OutOfFragmentError

__all__ = [
    "d_n_principal",
    "d_n_closed_form",
    "derive",
    "mbound",
    "mbound_chain",
]


def _finite_powers(beta: OrdinalTerm) -> list[tuple[int, int]]:
    """``beta = sum w^p_i * c_i`` with finite p_i, as [(p_i, c_i)]."""
    out = []
    for e, c in beta.summands:
        if not e.is_finite:
            raise OutOfFragmentError(
                f"exponent {format_ordinal(beta)} is not below w^w"
            )
        out.append((e.finite_value(), c))
    return out


def _d_atom(p: int, n: int) -> OrdinalTerm:
    if p == 0:
        return nat(n - 1)
    return omega_pow(omega_pow(p - 1, n - 1), n - 1)


def d_n_principal(beta: OrdinalTerm, n: int) -> OrdinalTerm:
    """``D_n(w^beta)`` by expanding coefficients of ``beta`` into principal factors."""
    if n < 1:
        raise ValueError("D_n is defined for n >= 1")
    _require_cnf(beta)
    ps = [p for p, c in _finite_powers(beta) for _ in range(c)]
    parts = []
    for j, p in enumerate(ps):
        term = _d_atom(p, n)
        for ell, q in enumerate(ps):
            if ell != j:
                term = _nprod(term, omega_pow(omega_pow(q)))
        parts.append(term)
    return _nsum(parts) if parts else ZERO


def d_n_closed_form(beta: OrdinalTerm, n: int) -> OrdinalTerm:
    """``D_n(w^beta) = (+)_i w^(beta_i) * c_i(n-1)`` with the strict form of ``beta``."""
    if n < 1:
        raise ValueError("D_n is defined for n >= 1")
    _require_cnf(beta)
    pcs = _finite_powers(beta)
    parts = []
    for i, (p, c) in enumerate(pcs):
        pieces = [omega_pow(p, c - 1)]
        if p > 0:
            pieces.append(omega_pow(p - 1, n - 1))
        else:
            pieces.append(ZERO)
        pieces.extend(omega_pow(q, cq) for ell, (q, cq) in enumerate(pcs) if ell != i)
        beta_i = _nsum([x for x in pieces if x.summands] or [ZERO])
        parts.append(omega_pow(beta_i, c * (n - 1)))
    return _nsum(parts) if parts else ZERO


def derive(alpha: OrdinalTerm, n: int) -> list[OrdinalTerm]:
    """``∂_n alpha``: one candidate per CNF summand, sorted descending."""
    if n < 1:
        raise ValueError("∂_n is defined for n >= 1")
    _require_cnf(alpha)
    return _derive(alpha, n)


def _derive(alpha: OrdinalTerm, n: int) -> list[OrdinalTerm]:
    # The closed form costs O(summands^2); the factor expansion in
    # d_n_principal is quadratic in the coefficients and serves as its oracle.
    out = []
    items = alpha.summands
    for i, (beta, c) in enumerate(items):
        rest = list(items)
        if c == 1:
            del rest[i]
        else:
            rest[i] = (beta, c - 1)
        d = d_n_closed_form(beta, n)
        out.append(_merge_desc(list(rest) + list(d.summands)))
    uniq = {t: None for t in out}
    return sorted(uniq, key=_Key, reverse=True)


def mbound(
    alpha: OrdinalTerm,
    g: ControlFunction,
    n: int,
    budget: EvalBudget | None = None,
) -> int:
    """``M_alpha(n) = max_{alpha' in ∂_n alpha} 1 + M_alpha'(g(n))``, with ``M_0 = 0``.

    Evaluated with an explicit stack and a per-call memo on ``(alpha, n)``.
    Each expanded node costs one unit plus the total summand count of its
    derivatives.
    ``∂_0`` is taken to be empty, so ``M_alpha(0) = 0``.
    """
    _require_cnf(alpha)
    budget = budget or EvalBudget()
    meter = budget.meter("nodes")
    memo: dict[tuple[OrdinalTerm, int], int] = {}
    children: dict[tuple[OrdinalTerm, int], tuple] = {}

    def quick(a, m):
        if m <= 0 or not a.summands:
            return 0
        if a.is_finite:
            return a.finite_value()
        return None

    root = (alpha, n)
    v = quick(alpha, n)
    if v is not None:
        return v
    stack = [root]
    while stack:
        key = stack[-1]
        if key in memo:
            stack.pop()
            continue
        a, m = key
        kids = children.get(key)
        if kids is None:
            meter.tick()
            meter.progress["depth"] = len(stack)
            nm = meter.check(g(m))
            derived = _derive(a, m)
            # charge for the size of the children so wide terms cannot hide work
            meter.tick(sum(len(b.summands) for b in derived))
            kids = tuple((b, nm) for b in derived)
            children[key] = kids
        best = 0
        pending = False
        for kid in kids:
            val = quick(*kid)
            if val is None:
                val = memo.get(kid)
            if val is None:
                stack.append(kid)
                pending = True
            elif not pending:
                best = max(best, 1 + val)
        if pending:
            continue
        memo[key] = best
        del children[key]
        stack.pop()
    return memo[root]


def mbound_chain(
    alpha: OrdinalTerm,
    g: ControlFunction,
    n: int,
    target: int,
    budget: EvalBudget | None = None,
) -> list[OrdinalTerm]:
    """A descending chain ``alpha ∂_n a1 ∂_g(n) a2 ...`` of length >= ``target``.

    Since ``M`` is a maximum over derivatives, any chain of length k
    certifies ``M_alpha(n) >= k``.  The walk always takes the largest
    derivative (the one obtained from the smallest summand), stopping at
    ``target`` steps or at 0.  Returns the chain without ``alpha`` itself.
    """
    _require_cnf(alpha)
    budget = budget or EvalBudget()
    meter = budget.meter("nodes")
    chain: list[OrdinalTerm] = []
    a, m = alpha, n
    while len(chain) < target and a.summands and m > 0:
        meter.tick()
        a = _derive(a, m)[0]
        m = meter.check(g(m))
        chain.append(a)
    return chain
