"""Maximal order types of exponential nwqo's and the inverse map ``C``."""

from __future__ import annotations

from .nwqo import Gamma, Nat, NwqoExpr, Prod, Seg, Star, Sum, _monomials, format_nwqo, normalize
from .ordinals import (
    ONE,
    ZERO,
    OrdinalTerm,
    _nprod,
    _nsum,
    _require_cnf,
    format_ordinal,
    nat,
    omega_pow,
)

__all__ = ["NonExponentialError", "OutOfFragmentError", "otype", "canonical_nwqo"]


class NonExponentialError(ValueError):
    """The expression uses a constructor outside the exponential fragment."""

    def __init__(self, subterm: NwqoExpr):
        self.subterm = subterm
        super().__init__(f"not an exponential nwqo: offending subterm {format_nwqo(subterm)}")


class OutOfFragmentError(ValueError):
    """The ordinal is not below w^(w^w)."""


def otype(a: NwqoExpr) -> OrdinalTerm:
    """``o(A)`` computed on the normal form of ``a``."""
    parts = []
    for factors, mult in _monomials(a).items():
        term = ONE
        for f in factors:
            if not (isinstance(f, Star) and isinstance(f.arg, Gamma)):
                raise NonExponentialError(_offending(a) or f)
            term = _nprod(term, omega_pow(omega_pow(f.arg.p - 1)))
        parts.append(_nprod(term, nat(mult)))
    return _nsum(parts) if parts else ZERO


def _offending(a: NwqoExpr) -> NwqoExpr | None:
    """The first subterm of ``a``, as written, that leaves the exponential fragment."""
    if isinstance(a, Seg):
        return a if a.p >= 2 else None
    if isinstance(a, (Gamma, Nat)):
        return None
    if isinstance(a, (Sum, Prod)):
        return _offending(a.left) or _offending(a.right)
    inner = normalize(a.arg)
    if isinstance(inner, Gamma):
        return None
    return a


def _finite_exponents(beta: OrdinalTerm, alpha: OrdinalTerm) -> list[tuple[int, int]]:
    out = []
    for e, k in beta.summands:
        if not e.is_finite:
            raise OutOfFragmentError(f"{format_ordinal(alpha)} is not below w^(w^w)")
        out.append((e.finite_value(), k))
    return out


def canonical_nwqo(alpha: OrdinalTerm) -> NwqoExpr:
    """``C(alpha)``: one product of ``G(p+1)^*`` factors per unit of coefficient."""
    _require_cnf(alpha)
    terms: list[NwqoExpr] = []
    for beta, c in alpha.summands:
        factors = [
            Star(Gamma(p + 1)) for p, k in _finite_exponents(beta, alpha) for _ in range(k)
        ]
        if not factors:
            terms.append(Gamma(c))
            continue
        body = factors[0]
        for f in factors[1:]:
            body = Prod(body, f)
        terms.extend([body] * c)
    if not terms:
        return Gamma(0)
    out = terms[0]
    for t in terms[1:]:
        out = Sum(out, t)
    return out
