"""Pure-Python search kernel.

Mirrors ``_kernel.pyx`` function for function; :mod:`wqolen.kernel` picks
the compiled module when it imports and falls back to this one otherwise.

Expressions arrive compiled to nested tuples::

    (0, p)      Gamma_p          element: letter index 1..p
    (1, p)      [p]              element: int 0..p-1
    (2,)        N                element: int
    (3, A, B)   A + B            element: (0, a) or (1, b)
    (4, A, B)   A x B            element: (a, b)
    (5, A)      A*               element: tuple of A-elements
"""

from __future__ import annotations

import sys

from .control import Exceeded

GAMMA, SEG, NAT, SUM, PROD, STAR = range(6)


def leq(node, a, b):
    kind = node[0]
    if kind == GAMMA:
        return a == b
    if kind == SEG or kind == NAT:
        return a <= b
    if kind == SUM:
        return a[0] == b[0] and leq(node[1 + a[0]], a[1], b[1])
    if kind == PROD:
        return leq(node[1], a[0], b[0]) and leq(node[2], a[1], b[1])
    sub = node[1]
    n = len(a)
    j = 0
    if n == 0:
        return True
    for y in b:
        if leq(sub, a[j], y):
            j += 1
            if j == n:
                return True
    return False


def norm(node, e):
    kind = node[0]
    if kind == GAMMA:
        return 0
    if kind == SEG or kind == NAT:
        return e
    if kind == SUM:
        return norm(node[1 + e[0]], e[1])
    if kind == PROD:
        return max(norm(node[1], e[0]), norm(node[2], e[1]))
    sub = node[1]
    best = len(e)
    for x in e:
        v = norm(sub, x)
        if v > best:
            best = v
    return best


class _Counter:
    __slots__ = ("used", "ceiling")

    def __init__(self, used, ceiling):
        self.used = used
        self.ceiling = ceiling

    def tick(self):
        self.used += 1
        if self.used > self.ceiling:
            raise Exceeded("nodes", self.ceiling, {"nodes": self.used})


def _avoid(node, forbidden, m, out, ctr):
    kind = node[0]
    if m <= 0:
        return
    if kind == GAMMA:
        for i in range(1, node[1] + 1):
            if i not in forbidden:
                ctr.tick()
                out.append(i)
        return
    if kind == SEG or kind == NAT:
        top = m if kind == NAT else min(m, node[1])
        for x in forbidden:
            if x < top:
                top = x
        for k in range(top):
            ctr.tick()
            out.append(k)
        return
    if kind == SUM:
        for tag in (0, 1):
            sub_forb = [x[1] for x in forbidden if x[0] == tag]
            part = []
            _avoid(node[1 + tag], sub_forb, m, part, ctr)
            for e in part:
                out.append((tag, e))
        return
    if kind == PROD:
        left, right = node[1], node[2]
        firsts = []
        _avoid(left, [], m, firsts, ctr)
        cache = {}
        for a in firsts:
            sub_forb = tuple(x[1] for x in forbidden if leq(left, x[0], a))
            seconds = cache.get(sub_forb)
            if seconds is None:
                seconds = []
                _avoid(right, list(sub_forb), m, seconds, ctr)
                cache[sub_forb] = seconds
            for b in seconds:
                ctr.tick()
                out.append((a, b))
        return
    # Kleene star: extend words letter by letter, tracking for each forbidden
    # word how far its greedy leftmost embedding has progressed.
    sub = node[1]
    for w in forbidden:
        if len(w) == 0:
            return
    letters = []
    _avoid(sub, [], m, letters, ctr)
    forb = list(forbidden)
    nf = len(forb)
    stack = [((), (0,) * nf)]
    while stack:
        word, prog = stack.pop()
        ctr.tick()
        out.append(word)
        if len(word) + 1 >= m:
            continue
        for li in range(len(letters) - 1, -1, -1):
            e = letters[li]
            newp = list(prog)
            dead = False
            for j in range(nf):
                k = newp[j]
                f = forb[j]
                if leq(sub, f[k], e):
                    k += 1
                    if k == len(f):
                        dead = True
                        break
                    newp[j] = k
            if not dead:
                stack.append((word + (e,), tuple(newp)))


def avoiding(node, forbidden, m, used=0, ceiling=10**18):
    """Elements of norm < m above none of ``forbidden``; returns (list, used)."""
    ctr = _Counter(used, ceiling)
    out = []
    _avoid(node, list(forbidden), m, out, ctr)
    return out, ctr.used


def longest_bad(node, basis, ctrl, canon, use_memo, used, ceiling):
    """Longest controlled bad sequence avoiding the up-closure of ``basis``.

    ``ctrl(i)`` is the norm bound for position i; ``canon`` maps a basis to
    a hashable memo key (or is None for the plain sorted key).  Returns
    ``(length, witness, nodes_used)``.
    """
    ctr = _Counter(used, ceiling)
    memo = {}
    bounds = []

    def bound(i):
        while len(bounds) <= i:
            bounds.append(ctrl(len(bounds)))
        return bounds[i]

    def key_of(b, i):
        if canon is not None:
            return (canon(b), i)
        return (frozenset(b), i)

    def solve(b, i):
        key = key_of(b, i) if use_memo else None
        if use_memo:
            hit = memo.get(key)
            if hit is not None:
                return hit
        ctr.tick()
        cands = []
        _avoid(node, b, bound(i), cands, ctr)
        best = 0
        for y in cands:
            nb = [x for x in b if not leq(node, y, x)]
            nb.append(y)
            r = 1 + solve(nb, i + 1)
            if r > best:
                best = r
        if use_memo:
            memo[key] = best
        return best

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 100000))
    try:
        length = solve(list(basis), 0)
        witness = []
        b = list(basis)
        i = 0
        remaining = length
        while remaining > 0:
            cands = []
            _avoid(node, b, bound(i), cands, ctr)
            for y in cands:
                nb = [x for x in b if not leq(node, y, x)]
                nb.append(y)
                if 1 + solve(nb, i + 1) == remaining:
                    witness.append(y)
                    b = nb
                    break
            else:  # pragma: no cover - memo inconsistency
                raise AssertionError("witness reconstruction failed")
            i += 1
            remaining -= 1
    finally:
        sys.setrecursionlimit(old)
    return length, witness, ctr.used
