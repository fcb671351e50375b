"""Ordinal terms below epsilon_0.

A term is a finite sequence of summands ``omega^exponent * coefficient``.
Terms are *syntactic*: ``1 + w`` and ``w`` are different terms even though
they denote the same ordinal.  The hierarchies in :mod:`wqolen.hierarchies`
depend on that distinction, so nothing here silently normalizes a term
except for merging adjacent summands with identical exponents, which is
pure notation (``w + w`` is written ``w*2``).

Cantor normal form (CNF) is the refinement where exponents are strictly
decreasing and themselves in CNF.  Comparison and the natural (Hessenberg)
operations require CNF arguments.
"""

from __future__ import annotations

import re
from functools import total_ordering
from typing import Iterable, Iterator, Sequence

__all__ = [
    "OrdinalTerm",
    "NotCNFError",
    "OrdinalSyntaxError",
    "ZERO",
    "ONE",
    "OMEGA",
    "nat",
    "omega_pow",
    "is_cnf",
    "to_cnf",
    "compare",
    "natural_sum",
    "natural_product",
    "leanness",
    "classify",
    "parse_ordinal",
    "format_ordinal",
    "cnf_terms_below_omega_omega",
]


class NotCNFError(ValueError):
    """An operation that requires Cantor normal form received another term."""


class OrdinalSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


class OrdinalTerm:
    """Immutable ordinal term ``w^e1*c1 + w^e2*c2 + ...``.

    ``summands`` is a tuple of ``(exponent, coefficient)`` pairs with every
    coefficient >= 1 and no two adjacent exponents structurally equal.
    """

    __slots__ = ("summands", "_hash")

    def __init__(self, summands: Iterable[tuple["OrdinalTerm", int]] = ()):
        merged: list[tuple[OrdinalTerm, int]] = []
        for exp, coeff in summands:
            if not isinstance(exp, OrdinalTerm):
                raise TypeError(f"exponent must be an OrdinalTerm, got {exp!r}")
            coeff = int(coeff)
            if coeff < 0:
                raise ValueError("coefficients are natural numbers")
            if coeff == 0:
                continue
            if merged and merged[-1][0] == exp:
                merged[-1] = (exp, merged[-1][1] + coeff)
            else:
                merged.append((exp, coeff))
        object.__setattr__(self, "summands", tuple(merged))
        object.__setattr__(self, "_hash", hash(self.summands))

    def __setattr__(self, name, value):
        raise AttributeError("OrdinalTerm is immutable")

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, OrdinalTerm):
            return NotImplemented
        return self._hash == other._hash and self.summands == other.summands

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"OrdinalTerm({format_ordinal(self)!r})"

    def __str__(self):
        return format_ordinal(self)

    def __bool__(self):
        return bool(self.summands)

    def __add__(self, other: "OrdinalTerm") -> "OrdinalTerm":
        """Syntactic sum (term concatenation), *not* ordinal addition."""
        if isinstance(other, int):
            other = nat(other)
        if not isinstance(other, OrdinalTerm):
            return NotImplemented
        return OrdinalTerm(self.summands + other.summands)

    def __radd__(self, other):
        if isinstance(other, int):
            return nat(other) + self
        return NotImplemented

    def __mul__(self, k: int) -> "OrdinalTerm":
        """``alpha * k`` as the k-fold syntactic sum."""
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            raise ValueError("cannot repeat a term a negative number of times")
        return OrdinalTerm(self.summands * k)

    @property
    def is_zero(self) -> bool:
        return not self.summands

    @property
    def is_finite(self) -> bool:
        return all(e.is_zero for e, _ in self.summands)

    def finite_value(self) -> int:
        if not self.is_finite:
            raise ValueError(f"{self} is not a natural number")
        return sum(c for _, c in self.summands)

    def expand(self) -> Iterator["OrdinalTerm"]:
        """Yield the exponents one copy per unit of coefficient."""
        for exp, coeff in self.summands:
            for _ in range(coeff):
                yield exp

    @property
    def leading_exponent(self) -> "OrdinalTerm":
        if not self.summands:
            raise ValueError("0 has no leading exponent")
        return self.summands[0][0]

    @property
    def depth(self) -> int:
        """Nesting depth: 0 for 0, 1 for naturals, 2 for terms with finite exponents, ..."""
        if not self.summands:
            return 0
        return 1 + max(e.depth for e, _ in self.summands)


ZERO = OrdinalTerm()


def nat(k: int) -> OrdinalTerm:
    if k < 0:
        raise ValueError("natural numbers only")
    return OrdinalTerm([(ZERO, k)]) if k else ZERO


def omega_pow(exponent: OrdinalTerm | int, coeff: int = 1) -> OrdinalTerm:
    if isinstance(exponent, int):
        exponent = nat(exponent)
    return OrdinalTerm([(exponent, coeff)])


ONE = nat(1)
OMEGA = omega_pow(ONE)


# --------------------------------------------------------------- CNF & order


def is_cnf(alpha: OrdinalTerm) -> bool:
    prev = None
    for exp, _ in alpha.summands:
        if not is_cnf(exp):
            return False
        if prev is not None and _cmp(exp, prev) >= 0:
            return False
        prev = exp
    return True


def _require_cnf(*terms: OrdinalTerm) -> None:
    for t in terms:
        if not is_cnf(t):
            raise NotCNFError(f"{format_ordinal(t)} is not in Cantor normal form")


def _cmp(a: OrdinalTerm, b: OrdinalTerm) -> int:
    # lexicographic on the strict form; valid for CNF inputs only
    if a is b:
        return 0
    for (ea, ca), (eb, cb) in zip(a.summands, b.summands):
        c = _cmp(ea, eb)
        if c:
            return c
        if ca != cb:
            return -1 if ca < cb else 1
    la, lb = len(a.summands), len(b.summands)
    return (la > lb) - (la < lb)


def compare(alpha: OrdinalTerm, beta: OrdinalTerm) -> int:
    """Three-way comparison of CNF terms: -1, 0 or 1."""
    _require_cnf(alpha, beta)
    return _cmp(alpha, beta)


def to_cnf(alpha: OrdinalTerm) -> OrdinalTerm:
    """Normal form of ``alpha`` read with ``+`` as ordinal (direct) sum."""
    out: list[tuple[OrdinalTerm, int]] = []
    for exp, coeff in alpha.summands:
        exp = to_cnf(exp)
        while out and _cmp(out[-1][0], exp) < 0:
            out.pop()
        if out and out[-1][0] == exp:
            out[-1] = (exp, out[-1][1] + coeff)
        else:
            out.append((exp, coeff))
    return OrdinalTerm(out)


@total_ordering
class _Key:
    """Sort key wrapping a CNF term."""

    __slots__ = ("t",)

    def __init__(self, t):
        self.t = t

    def __eq__(self, other):
        return self.t == other.t

    def __lt__(self, other):
        return _cmp(self.t, other.t) < 0


def cnf_key(alpha: OrdinalTerm) -> _Key:
    """Key usable with ``sorted``/``max`` on CNF terms."""
    return _Key(alpha)


# ------------------------------------------------------ natural operations


def _merge_desc(parts: Iterable[tuple[OrdinalTerm, int]]) -> OrdinalTerm:
    acc: dict[OrdinalTerm, int] = {}
    for exp, coeff in parts:
        acc[exp] = acc.get(exp, 0) + coeff
    items = sorted(acc.items(), key=lambda ec: _Key(ec[0]), reverse=True)
    return OrdinalTerm(items)


def natural_sum(*terms: OrdinalTerm) -> OrdinalTerm:
    _require_cnf(*terms)
    return _nsum(terms)


def _nsum(terms: Sequence[OrdinalTerm]) -> OrdinalTerm:
    if len(terms) == 1:
        return terms[0]
    return _merge_desc(s for t in terms for s in t.summands)


def natural_product(*terms: OrdinalTerm) -> OrdinalTerm:
    _require_cnf(*terms)
    out = ONE
    for t in terms:
        out = _nprod(out, t)
    return out


def _nprod(a: OrdinalTerm, b: OrdinalTerm) -> OrdinalTerm:
    if not a.summands or not b.summands:
        return ZERO
    if a == ONE:
        return b
    if b == ONE:
        return a
    return _merge_desc(
        (_nsum((ea, eb)), ca * cb) for ea, ca in a.summands for eb, cb in b.summands
    )


def leanness(alpha: OrdinalTerm) -> int:
    """Least k such that every coefficient, recursively, is <= k."""
    _require_cnf(alpha)
    return _lean(alpha)


def _lean(alpha: OrdinalTerm) -> int:
    k = 0
    for exp, coeff in alpha.summands:
        k = max(k, coeff, _lean(exp))
    return k


def classify(alpha: OrdinalTerm) -> str:
    """``"zero"``, ``"successor"`` or ``"limit"`` (by the last summand)."""
    if not alpha.summands:
        return "zero"
    return "successor" if alpha.summands[-1][0].is_zero else "limit"


# ------------------------------------------------------------------ syntax

def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        m = re.match(r"\d+", text[pos:])
        if m:
            toks.append(("nat", m.group(0), pos))
            pos += m.end()
            continue
        if ch in "w+*^()" or ch == "ω":
            toks.append(("w" if ch == "ω" else ch, ch, pos))
            pos += 1
            continue
        raise OrdinalSyntaxError(f"unexpected character {ch!r}", text, pos)
    toks.append(("end", "", len(text)))
    return toks


class _OrdinalParser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind):
        tok = self.toks[self.i]
        if tok[0] != kind:
            want = "end of input" if kind == "end" else repr(kind)
            raise OrdinalSyntaxError(f"expected {want}", self.text, tok[2])
        self.i += 1
        return tok

    def term(self) -> OrdinalTerm:
        parts = [self.prod()]
        while self.peek()[0] == "+":
            self.i += 1
            parts.append(self.prod())
        return OrdinalTerm(s for p in parts for s in p.summands)

    def prod(self) -> OrdinalTerm:
        a = self.atom()
        if self.peek()[0] == "*":
            self.i += 1
            k = int(self.take("nat")[1])
            a = a * k
        return a

    def atom(self) -> OrdinalTerm:
        kind, val, pos = self.peek()
        if kind == "nat":
            self.i += 1
            return nat(int(val))
        if kind == "w":
            self.i += 1
            if self.peek()[0] == "^":
                self.i += 1
                if self.peek()[0] == "(":
                    self.i += 1
                    exp = self.term()
                    self.take(")")
                else:
                    exp = self.atom()
                return omega_pow(exp)
            return OMEGA
        raise OrdinalSyntaxError("expected a natural number or 'w'", self.text, pos)


def parse_ordinal(text: str) -> OrdinalTerm:
    """Parse the ASCII ordinal grammar (``w`` for omega, ``^``, ``*k``, ``+``)."""
    p = _OrdinalParser(text)
    t = p.term()
    p.take("end")
    return t


def _format_exponent(exp: OrdinalTerm) -> str:
    if exp.is_finite or exp == ONE:
        return format_ordinal(exp)
    if exp == OMEGA:
        return "w"
    return f"({format_ordinal(exp)})"


def format_ordinal(alpha: OrdinalTerm) -> str:
    if not alpha.summands:
        return "0"
    parts = []
    for exp, coeff in alpha.summands:
        if exp.is_zero:
            parts.append(str(coeff))
            continue
        base = "w" if exp == ONE else f"w^{_format_exponent(exp)}"
        parts.append(base if coeff == 1 else f"{base}*{coeff}")
    return " + ".join(parts)


# ------------------------------------------------------------- enumeration


def cnf_terms_below_omega_omega(max_exponent: int, max_coeff: int) -> Iterator[OrdinalTerm]:
    """All CNF terms ``sum_k w^k * c_k`` with ``k <= max_exponent`` and ``c_k <= max_coeff``.

    Includes 0.  Output is in increasing order.
    """
    from itertools import product

    exps = list(range(max_exponent, -1, -1))
    combos = product(range(max_coeff + 1), repeat=len(exps))
    terms = [OrdinalTerm((nat(k), c) for k, c in zip(exps, cs)) for cs in combos]
    terms.sort(key=_Key)
    return iter(terms)
