"""Control functions and evaluation budgets."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

__all__ = [
    "ControlFunction",
    "ControlSyntaxError",
    "EvalBudget",
    "Exceeded",
    "BudgetMeter",
    "SUCC",
    "parse_control",
]


class Exceeded(RuntimeError):
    """A computation hit one of its budget ceilings.

    ``limit`` is ``"nodes"``, ``"steps"`` or ``"bits"``; ``progress`` carries
    whatever partial information the caller could salvage (deepest ordinal
    reached, longest sequence found so far, ...).
    """

    def __init__(self, limit: str, ceiling: int, progress: dict | None = None):
        self.limit = limit
        self.ceiling = ceiling
        self.progress = dict(progress or {})
        detail = ", ".join(f"{k}={v}" for k, v in self.progress.items())
        super().__init__(
            f"{limit} budget of {ceiling} exceeded" + (f" ({detail})" if detail else "")
        )


@dataclass(frozen=True)
class EvalBudget:
    """Ceilings on search nodes / recursion steps and on integer magnitudes."""

    max_nodes: int = 10**7
    max_steps: int = 10**5
    max_bits: int = 4096

    def __post_init__(self):
        if self.max_nodes <= 0 or self.max_steps <= 0 or self.max_bits <= 0:
            raise ValueError("budget ceilings must be positive")

    def meter(self, kind: str = "nodes") -> "BudgetMeter":
        ceiling = self.max_nodes if kind == "nodes" else self.max_steps
        return BudgetMeter(kind, ceiling, self.max_bits)


@dataclass
class BudgetMeter:
    """Per-call counter; one instance is shared across a whole recursion."""

    kind: str
    ceiling: int
    max_bits: int
    used: int = 0
    progress: dict = field(default_factory=dict)

    def tick(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.ceiling:
            raise Exceeded(self.kind, self.ceiling, self.progress)

    def check(self, value: int) -> int:
        if value.bit_length() > self.max_bits:
            raise Exceeded("bits", self.max_bits, self.progress)
        return value


# ------------------------------------------------------------ expressions

_TOKEN = re.compile(r"\s*(?:(\d+)|(x)|([-+*^()]))")


class ControlSyntaxError(ValueError):
    pass


def _parse(text: str):
    toks = []
    pos = 0
    text_s = text.rstrip()
    while pos < len(text_s):
        m = _TOKEN.match(text_s, pos)
        if not m:
            raise ControlSyntaxError(f"unexpected input at position {pos}: {text!r}")
        toks.append(m.group(1) or m.group(2) or m.group(3))
        pos = m.end()
    toks.append(None)
    i = 0

    def peek():
        return toks[i]

    def take():
        nonlocal i
        t = toks[i]
        i += 1
        return t

    def expr():
        node = term()
        while peek() == "+":
            take()
            node = ("+", node, term())
        return node

    def term():
        node = power()
        while peek() == "*":
            take()
            node = ("*", node, power())
        return node

    def power():
        base = atom()
        if peek() == "^":
            take()
            return ("^", base, power())
        return base

    def atom():
        t = take()
        if t is None:
            raise ControlSyntaxError(f"unexpected end of expression: {text!r}")
        if t == "x":
            return ("x",)
        if t.isdigit():
            return ("n", int(t))
        if t == "(":
            node = expr()
            if take() != ")":
                raise ControlSyntaxError(f"missing ')': {text!r}")
            return node
        raise ControlSyntaxError(f"unexpected token {t!r}: {text!r}")

    tree = expr()
    if peek() is not None:
        raise ControlSyntaxError(f"trailing input {peek()!r}: {text!r}")
    return tree


_POW_BITS = 1 << 20


def _eval(node, x: int) -> int:
    op = node[0]
    if op == "x":
        return x
    if op == "n":
        return node[1]
    a, b = _eval(node[1], x), _eval(node[2], x)
    if op == "+":
        return a + b
    if op == "*":
        return a * b
    if a > 1 and b * a.bit_length() > _POW_BITS:
        # refuse before Python spends minutes building the integer
        raise Exceeded("bits", _POW_BITS, {"power": f"{a}^{b}"})
    return a**b


def _show(node) -> str:
    op = node[0]
    if op == "x":
        return "x"
    if op == "n":
        return str(node[1])
    return f"({_show(node[1])}{op}{_show(node[2])})"


class ControlFunction:
    """A map N -> N: the successor or a polynomial-like expression in ``x``."""

    def __init__(self, text: str = "succ"):
        text = text.strip()
        self.text = text
        if text in ("succ", "x+1", "x + 1"):
            self.text = "succ"
            self._tree = None
        else:
            self._tree = _parse(text)

    @property
    def is_succ(self) -> bool:
        return self._tree is None

    @property
    def is_polynomial(self) -> bool:
        """True when no ``^`` has ``x`` in its exponent."""

        def poly(node):
            if node[0] in ("x", "n"):
                return True
            if node[0] == "^":
                return poly(node[1]) and "x" not in _show(node[2])
            return poly(node[1]) and poly(node[2])

        return self._tree is None or poly(self._tree)

    def __call__(self, x: int) -> int:
        if self._tree is None:
            return x + 1
        return _eval(self._tree, x)

    def iterate(self, i: int, n: int, meter: BudgetMeter | None = None) -> int:
        """``g^i(n)``."""
        if self._tree is None:
            return n + i
        for _ in range(i):
            n = self(n)
            if meter is not None:
                meter.check(n)
        return n

    def is_monotone_on(self, upto: int = 64) -> bool:
        vals = [self(x) for x in range(upto + 1)]
        return all(a <= b for a, b in zip(vals, vals[1:]))

    def is_smooth_on(self, upto: int = 64) -> bool:
        """Sampled check of ``g(x+1) >= g(x)+1 >= x+2``."""
        vals = [self(x) for x in range(upto + 2)]
        return all(vals[x + 1] >= vals[x] + 1 >= x + 2 for x in range(upto + 1))

    def __eq__(self, other):
        return isinstance(other, ControlFunction) and self.text == other.text

    def __hash__(self):
        return hash(self.text)

    def __repr__(self):
        return f"ControlFunction({self.text!r})"

    def __str__(self):
        return self.text


SUCC = ControlFunction("succ")


def parse_control(text: str) -> ControlFunction:
    return ControlFunction(text)
