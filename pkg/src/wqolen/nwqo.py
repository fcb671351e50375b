"""Symbolic normed wqo's and their elements.

Expressions are built from finite alphabets ``G p``, initial segments
``Seg p``, the naturals ``N``, disjoint sums, cartesian products and Kleene
stars (Higman's subword ordering).  Elements are small frozen dataclasses;
internally every element is encoded as nested tuples of ints so the search
kernel in :mod:`wqolen.kernel` can work on plain Python values.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from typing import Iterable, Sequence, Union

from . import kernel
from .control import ControlFunction, EvalBudget

__all__ = [
    "NwqoExpr",
    "Gamma",
    "Seg",
    "Nat",
    "Sum",
    "Prod",
    "Star",
    "power",
    "Element",
    "Letter",
    "Number",
    "Pair",
    "InLeft",
    "InRight",
    "Word",
    "ShapeError",
    "NwqoSyntaxError",
    "norm",
    "leq",
    "enumerate_below",
    "is_bad",
    "is_controlled",
    "normalize",
    "reflect_residual",
    "is_exponential",
    "parse_nwqo",
    "parse_element",
    "parse_sequence",
    "format_element",
    "max_bad_length",
    "max_bad_length_residual",
]


class ShapeError(ValueError):
    """An element does not belong to the carrier of an expression."""


class NwqoSyntaxError(ValueError):
    pass


# ----------------------------------------------------------------- syntax


class NwqoExpr:
    __slots__ = ()

    def __add__(self, other):
        return Sum(self, other)

    def __mul__(self, other):
        return Prod(self, other)

    def __str__(self):
        return format_nwqo(self)


@dataclass(frozen=True)
class Gamma(NwqoExpr):
    """The p-letter alphabet with distinct letters unordered; all norms 0."""

    p: int


@dataclass(frozen=True)
class Seg(NwqoExpr):
    """``{0, ..., p-1}`` ordered linearly, norm = value."""

    p: int


@dataclass(frozen=True)
class Nat(NwqoExpr):
    pass


@dataclass(frozen=True)
class Sum(NwqoExpr):
    left: NwqoExpr
    right: NwqoExpr


@dataclass(frozen=True)
class Prod(NwqoExpr):
    left: NwqoExpr
    right: NwqoExpr


@dataclass(frozen=True)
class Star(NwqoExpr):
    arg: NwqoExpr


def power(a: NwqoExpr, k: int) -> NwqoExpr:
    """k-fold product, left nested; ``power(a, 0)`` is the unit ``G1``."""
    if k <= 0:
        return Gamma(1)
    out = a
    for _ in range(k - 1):
        out = Prod(out, a)
    return out


def _prec(e: NwqoExpr) -> int:
    if isinstance(e, Sum):
        return 1
    if isinstance(e, Prod):
        return 2
    return 3


def format_nwqo(e: NwqoExpr) -> str:
    if isinstance(e, Gamma):
        return f"G{e.p}"
    if isinstance(e, Seg):
        return f"Seg{e.p}"
    if isinstance(e, Nat):
        return "N"
    if isinstance(e, Star):
        inner = format_nwqo(e.arg)
        if _prec(e.arg) < 3 or isinstance(e.arg, Star):
            inner = f"({inner})"
        return f"{inner}^*"
    if isinstance(e, Sum):
        right = format_nwqo(e.right)
        if _prec(e.right) <= 1:
            right = f"({right})"
        return f"{format_nwqo(e.left)} + {right}"
    left = format_nwqo(e.left)
    right = format_nwqo(e.right)
    if _prec(e.left) < 2:
        left = f"({left})"
    if _prec(e.right) <= 2:
        right = f"({right})"
    return f"{left} * {right}"


_NWQO_TOKEN = re.compile(r"\s*(Seg|\^\*|\d+|[GN+*^()])")


def _nwqo_tokens(text: str):
    toks = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        m = _NWQO_TOKEN.match(stripped, pos)
        if not m:
            raise NwqoSyntaxError(f"unexpected input at position {pos}: {text!r}")
        toks.append((m.group(1), m.start(1)))
        pos = m.end()
    toks.append((None, len(stripped)))
    return toks


def parse_nwqo(text: str) -> NwqoExpr:
    """Parse ``G3``, ``Seg2``, ``N``, ``+``, ``*``, ``A^*`` and ``A^k``."""
    toks = _nwqo_tokens(text)
    i = 0

    def peek():
        return toks[i][0]

    def fail(msg):
        raise NwqoSyntaxError(f"{msg} at position {toks[i][1]}: {text!r}")

    def take_nat():
        nonlocal i
        t = peek()
        if t is None or not t.isdigit():
            fail("expected a natural number")
        i += 1
        return int(t)

    def expr():
        nonlocal i
        node = prod()
        while peek() == "+":
            i += 1
            node = Sum(node, prod())
        return node

    def prod():
        nonlocal i
        node = postfix()
        while peek() == "*":
            i += 1
            node = Prod(node, postfix())
        return node

    def postfix():
        nonlocal i
        node = atom()
        while peek() in ("^*", "^"):
            if peek() == "^*":
                i += 1
                node = Star(node)
            else:
                i += 1
                node = power(node, take_nat())
        return node

    def atom():
        nonlocal i
        t = peek()
        if t == "G":
            i += 1
            return Gamma(take_nat())
        if t == "Seg":
            i += 1
            return Seg(take_nat())
        if t == "N":
            i += 1
            return Nat()
        if t == "(":
            i += 1
            node = expr()
            if peek() != ")":
                fail("expected ')'")
            i += 1
            return node
        fail("expected G, Seg, N or '('")

    node = expr()
    if peek() is not None:
        fail("unexpected trailing input")
    return node


# --------------------------------------------------------------- elements


class Element:
    __slots__ = ()

    def __str__(self):
        return format_element(self)


@dataclass(frozen=True)
class Letter(Element):
    i: int


@dataclass(frozen=True)
class Number(Element):
    k: int


@dataclass(frozen=True)
class Pair(Element):
    fst: Element
    snd: Element


@dataclass(frozen=True)
class InLeft(Element):
    e: Element


@dataclass(frozen=True)
class InRight(Element):
    e: Element


@dataclass(frozen=True)
class Word(Element):
    items: tuple = ()

    def __init__(self, items: Iterable[Element] = ()):
        object.__setattr__(self, "items", tuple(items))

    def __len__(self):
        return len(self.items)


def format_element(e: Element) -> str:
    if isinstance(e, Letter):
        return f"a{e.i}"
    if isinstance(e, Number):
        return str(e.k)
    if isinstance(e, Pair):
        return f"<{format_element(e.fst)}, {format_element(e.snd)}>"
    if isinstance(e, InLeft):
        return f"inl({format_element(e.e)})"
    if isinstance(e, InRight):
        return f"inr({format_element(e.e)})"
    return "[" + " ".join(format_element(x) for x in e.items) + "]"


_ELEM_TOKEN = re.compile(r"\s*(a\d+|\d+|inl|inr|[\[\]<>(),])")


def _element_tokens(text: str):
    toks = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        m = _ELEM_TOKEN.match(stripped, pos)
        if not m:
            raise NwqoSyntaxError(f"unexpected input at position {pos}: {text!r}")
        toks.append((m.group(1), m.start(1)))
        pos = m.end()
    toks.append((None, len(stripped)))
    return toks


class _ElementParser:
    def __init__(self, text):
        self.text = text
        self.toks = _element_tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0]

    def fail(self, msg):
        raise NwqoSyntaxError(f"{msg} at position {self.toks[self.i][1]}: {self.text!r}")

    def expect(self, tok):
        if self.peek() != tok:
            self.fail(f"expected {tok!r}")
        self.i += 1

    def element(self) -> Element:
        t = self.peek()
        if t is None:
            self.fail("expected an element")
        if t.startswith("a") and t[1:].isdigit():
            self.i += 1
            return Letter(int(t[1:]))
        if t.isdigit():
            self.i += 1
            return Number(int(t))
        if t in ("inl", "inr"):
            self.i += 1
            self.expect("(")
            inner = self.element()
            self.expect(")")
            return InLeft(inner) if t == "inl" else InRight(inner)
        if t == "<":
            self.i += 1
            a = self.element()
            self.expect(",")
            b = self.element()
            self.expect(">")
            return Pair(a, b)
        if t == "[":
            self.i += 1
            items = []
            while self.peek() != "]":
                items.append(self.element())
                if self.peek() == ",":
                    self.i += 1
            self.i += 1
            return Word(items)
        self.fail("unexpected token")


def parse_element(text: str) -> Element:
    p = _ElementParser(text)
    e = p.element()
    if p.peek() is not None:
        p.fail("unexpected trailing input")
    return e


def parse_sequence(text: str) -> list[Element]:
    """Parse a comma- or space-separated list of elements, optionally in ``{...}``."""
    text = text.strip()
    if text.startswith("{") and text.endswith("}"):
        text = text[1:-1]
    p = _ElementParser(text)
    out = []
    while p.peek() is not None:
        out.append(p.element())
        if p.peek() == ",":
            p.i += 1
    return out


# --------------------------------------------------------------- encoding


class kernel_kinds:
    GAMMA, SEG, NAT, SUM, PROD, STAR = range(6)


@lru_cache(maxsize=None)
def compile_expr(a: NwqoExpr) -> tuple:
    if isinstance(a, Gamma):
        return (kernel_kinds.GAMMA, a.p)
    if isinstance(a, Seg):
        return (kernel_kinds.SEG, a.p)
    if isinstance(a, Nat):
        return (kernel_kinds.NAT,)
    if isinstance(a, Sum):
        return (kernel_kinds.SUM, compile_expr(a.left), compile_expr(a.right))
    if isinstance(a, Prod):
        return (kernel_kinds.PROD, compile_expr(a.left), compile_expr(a.right))
    if isinstance(a, Star):
        return (kernel_kinds.STAR, compile_expr(a.arg))
    raise TypeError(f"not an nwqo expression: {a!r}")


def encode(a: NwqoExpr, e: Element):
    """Element -> kernel code, checking shape compatibility."""
    if isinstance(a, Gamma):
        if isinstance(e, Letter) and 1 <= e.i <= a.p:
            return e.i
    elif isinstance(a, (Seg, Nat)):
        if isinstance(e, Number) and e.k >= 0 and (isinstance(a, Nat) or e.k < a.p):
            return e.k
    elif isinstance(a, Sum):
        if isinstance(e, InLeft):
            return (0, encode(a.left, e.e))
        if isinstance(e, InRight):
            return (1, encode(a.right, e.e))
    elif isinstance(a, Prod):
        if isinstance(e, Pair):
            return (encode(a.left, e.fst), encode(a.right, e.snd))
    elif isinstance(a, Star):
        if isinstance(e, Word):
            return tuple(encode(a.arg, x) for x in e.items)
    raise ShapeError(f"{format_element(e) if isinstance(e, Element) else e!r} is not an element of {a}")


def decode(a: NwqoExpr, code) -> Element:
    if isinstance(a, Gamma):
        return Letter(code)
    if isinstance(a, (Seg, Nat)):
        return Number(code)
    if isinstance(a, Sum):
        tag, inner = code
        return InLeft(decode(a.left, inner)) if tag == 0 else InRight(decode(a.right, inner))
    if isinstance(a, Prod):
        return Pair(decode(a.left, code[0]), decode(a.right, code[1]))
    return Word(decode(a.arg, x) for x in code)


# ------------------------------------------------------------- operations


def norm(a: NwqoExpr, e: Element) -> int:
    return kernel.norm(compile_expr(a), encode(a, e))


def leq(a: NwqoExpr, e1: Element, e2: Element) -> bool:
    """The wqo ordering; on stars this is Higman's subword embedding."""
    return bool(kernel.leq(compile_expr(a), encode(a, e1), encode(a, e2)))


def enumerate_below(a: NwqoExpr, n: int, budget: EvalBudget | None = None) -> list[Element]:
    """All elements of norm < n, sorted by (norm, structure)."""
    budget = budget or EvalBudget()
    node = compile_expr(a)
    codes, _ = kernel.avoiding(node, [], n, 0, budget.max_nodes)
    codes.sort(key=lambda c: (kernel.norm(node, c), _sort_key(c)))
    return [decode(a, c) for c in codes]


def _sort_key(code):
    if isinstance(code, tuple):
        return (len(code), tuple(_sort_key(c) for c in code))
    return (0, code)


def is_bad(a: NwqoExpr, seq: Sequence[Element]) -> bool:
    node = compile_expr(a)
    codes = [encode(a, e) for e in seq]
    return not any(
        kernel.leq(node, codes[i], codes[j])
        for j in range(len(codes))
        for i in range(j)
    )


def is_controlled(a: NwqoExpr, g: ControlFunction, n: int, seq: Sequence[Element]) -> bool:
    bound = n
    for e in seq:
        if norm(a, e) >= bound:
            return False
        bound = g(bound)
    return True


# ------------------------------------------------------------ isomorphisms


def _monomials(a: NwqoExpr) -> dict[tuple, int]:
    """Sum-of-products view: {sorted factor tuple: multiplicity}.

    Factors are ``Star(Gamma(p))`` with p >= 1 or opaque non-exponential
    subterms (``Seg(p)`` with p >= 2, stars of non-alphabets).
    """
    if isinstance(a, Gamma):
        return {(): a.p} if a.p else {}
    if isinstance(a, Seg):
        if a.p <= 1:
            return {(): a.p} if a.p else {}
        return {(a,): 1}
    if isinstance(a, Nat):
        return {(Star(Gamma(1)),): 1}
    if isinstance(a, Sum):
        out = dict(_monomials(a.left))
        for k, v in _monomials(a.right).items():
            out[k] = out.get(k, 0) + v
        return out
    if isinstance(a, Prod):
        out: dict[tuple, int] = {}
        for k1, v1 in _monomials(a.left).items():
            for k2, v2 in _monomials(a.right).items():
                k = tuple(sorted(k1 + k2, key=format_nwqo))
                out[k] = out.get(k, 0) + v1 * v2
        return out
    inner = normalize(a.arg)
    if isinstance(inner, Gamma):
        if inner.p == 0:
            return {(): 1}
        return {(Star(inner),): 1}
    return {(Star(inner),): 1}


def normalize(a: NwqoExpr) -> NwqoExpr:
    """Canonical sum of products of ``Star(Gamma(p+1))`` and alphabet factors.

    Applies commutativity, associativity, ``0+A = A``, ``1xA = A``,
    ``0xA = 0``, distributivity, ``0* = 1`` and ``1* = N``.
    """
    monos = _monomials(a)
    if not monos:
        return Gamma(0)
    terms = []
    constant = monos.pop((), 0)
    for factors in sorted(monos, key=lambda fs: [format_nwqo(f) for f in fs]):
        mult = monos[factors]
        body = factors[0]
        for f in factors[1:]:
            body = Prod(body, f)
        terms.append(body if mult == 1 else Prod(Gamma(mult), body))
    if constant:
        terms.append(Gamma(constant))
    out = terms[0]
    for t in terms[1:]:
        out = Sum(out, t)
    return out


def is_exponential(a: NwqoExpr) -> bool:
    return all(
        isinstance(f, Star) and isinstance(f.arg, Gamma)
        for factors in _monomials(a)
        for f in factors
    )


def reflect_residual(a: NwqoExpr, x: Element) -> NwqoExpr:
    """A symbolic nwqo reflecting the residual ``a/x`` (inductive residual rules)."""
    if isinstance(a, Gamma):
        encode(a, x)
        return Gamma(a.p - 1)
    if isinstance(a, (Nat, Seg)):
        encode(a, x)
        return Seg(x.k)
    if isinstance(a, Sum):
        if isinstance(x, InLeft):
            return Sum(reflect_residual(a.left, x.e), a.right)
        if isinstance(x, InRight):
            return Sum(a.left, reflect_residual(a.right, x.e))
        raise ShapeError(f"{format_element(x)} is not an element of {a}")
    if isinstance(a, Prod):
        if not isinstance(x, Pair):
            raise ShapeError(f"{format_element(x)} is not an element of {a}")
        return Sum(
            Prod(reflect_residual(a.left, x.fst), a.right),
            Prod(a.left, reflect_residual(a.right, x.snd)),
        )
    encode(a, x)
    n = len(x.items)
    if n == 0:
        return Gamma(0)
    if _contains_seg(a.arg):
        raise ValueError(f"no residual rule for a star over initial segments: {a}")
    if isinstance(a.arg, Gamma):
        return Prod(Gamma(n), power(Star(Gamma(a.arg.p - 1)), n))
    out: NwqoExpr = Prod(Gamma(n), power(a.arg, n))
    for item in x.items:
        out = Prod(out, Star(reflect_residual(a.arg, item)))
    return out


def _contains_seg(a: NwqoExpr) -> bool:
    if isinstance(a, Seg):
        return a.p >= 2
    if isinstance(a, (Sum, Prod)):
        return _contains_seg(a.left) or _contains_seg(a.right)
    if isinstance(a, Star):
        return _contains_seg(a.arg)
    return False


# --------------------------------------------------------------- symmetry


def _alphabet_sizes(node) -> list[int]:
    kind = node[0]
    if kind == kernel_kinds.GAMMA:
        return [node[1]]
    if kind in (kernel_kinds.SUM, kernel_kinds.PROD):
        return _alphabet_sizes(node[1]) + _alphabet_sizes(node[2])
    if kind == kernel_kinds.STAR:
        return _alphabet_sizes(node[1])
    return []


def _apply(node, code, perms, start):
    kind = node[0]
    if kind == kernel_kinds.GAMMA:
        return perms[start][code - 1], start + 1
    if kind in (kernel_kinds.SEG, kernel_kinds.NAT):
        return code, start
    if kind == kernel_kinds.SUM:
        width_left = len(_alphabet_sizes(node[1]))
        if code[0] == 0:
            inner, _ = _apply(node[1], code[1], perms, start)
        else:
            inner, _ = _apply(node[2], code[1], perms, start + width_left)
        return (code[0], inner), start + width_left + len(_alphabet_sizes(node[2]))
    if kind == kernel_kinds.PROD:
        a, mid = _apply(node[1], code[0], perms, start)
        b, end = _apply(node[2], code[1], perms, mid)
        return (a, b), end
    width = len(_alphabet_sizes(node[1]))
    return tuple(_apply(node[1], c, perms, start)[0] for c in code), start + width


def letter_symmetry(node, max_group: int = 5040):
    """Canonical-key function quotienting by letter permutations, or None."""
    sizes = _alphabet_sizes(node)
    if not sizes:
        return None
    group = 1
    for p in sizes:
        for k in range(2, p + 1):
            group *= k
    if group <= 1 or group > max_group:
        return None
    perm_lists = [
        [tuple(range(1, p + 1))] if p <= 1 else [tuple(q) for q in permutations(range(1, p + 1))]
        for p in sizes
    ]
    group_elems = list(product(*perm_lists))

    def canon(basis):
        best = None
        for perms in group_elems:
            img = tuple(sorted((_apply(node, c, perms, 0)[0] for c in basis), key=_sort_key))
            k = tuple(_sort_key(c) for c in img)
            if best is None or k < best[0]:
                best = (k, img)
        return best[1]

    return canon


# ----------------------------------------------------------------- oracle


def _control_bounds(g: ControlFunction, n: int, budget: EvalBudget):
    meter = budget.meter("nodes")
    meter.check(n)

    def ctrl(i, _cache=[n]):
        while len(_cache) <= i:
            _cache.append(meter.check(g(_cache[-1])))
        return _cache[i]

    return ctrl


def max_bad_length_residual(
    a: NwqoExpr,
    forbidden: Sequence[Element],
    g: ControlFunction,
    n: int,
    budget: EvalBudget | None = None,
    *,
    memo: bool = True,
    symmetry: bool = False,
    with_witness: bool = False,
):
    """Longest (g, n)-controlled bad sequence in ``a/x0/x1/...``.

    Exhaustive depth-first search.  Search states are memoized on the
    minimal set of forbidden elements plus the position; ``memo=False``
    gives the plain tree walk.  ``symmetry=True`` further quotients states
    by permutations of alphabet letters (only sound when no forbidden
    element is supplied, since the initial basis breaks the symmetry).
    """
    budget = budget or EvalBudget()
    node = compile_expr(a)
    basis = [encode(a, x) for x in forbidden]
    canon = letter_symmetry(node) if symmetry and not basis else None
    if n <= 0:
        return (0, []) if with_witness else 0
    length, witness, _ = kernel.longest_bad(
        node, basis, _control_bounds(g, n, budget), canon, memo, 0, budget.max_nodes
    )
    if with_witness:
        return length, [decode(a, c) for c in witness]
    return length


def max_bad_length(
    a: NwqoExpr,
    g: ControlFunction,
    n: int,
    budget: EvalBudget | None = None,
    *,
    memo: bool = True,
    symmetry: bool = False,
) -> tuple[int, list[Element]]:
    """``L_{A,g}(n)`` together with a bad controlled witness of that length.

    ``n = 0`` gives ``(0, [])`` since ``A_{<0}`` is empty; the closed forms
    ``L_{G p}(n) = p`` and friends hold for ``n >= 1``.
    """
    return max_bad_length_residual(
        a, [], g, n, budget, memo=memo, symmetry=symmetry, with_witness=True
    )
