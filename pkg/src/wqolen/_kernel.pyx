# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled search kernel; same contract as ``_kernel_py``."""

import sys

from .control import Exceeded

cdef enum:
    GAMMA = 0
    SEG = 1
    NAT = 2
    SUM = 3
    PROD = 4
    STAR = 5


cdef bint _leq(tuple node, object a, object b) except -1:
    cdef int kind = node[0]
    cdef Py_ssize_t j, n
    cdef tuple ta, tb
    if kind == GAMMA:
        return a == b
    if kind == SEG or kind == NAT:
        return a <= b
    if kind == SUM:
        ta = a
        tb = b
        if ta[0] != tb[0]:
            return False
        return _leq(node[1 + <int>ta[0]], ta[1], tb[1])
    if kind == PROD:
        ta = a
        tb = b
        return _leq(node[1], ta[0], tb[0]) and _leq(node[2], ta[1], tb[1])
    ta = a
    tb = b
    n = len(ta)
    if n == 0:
        return True
    j = 0
    sub = node[1]
    for y in tb:
        if _leq(sub, ta[j], y):
            j += 1
            if j == n:
                return True
    return False


def leq(node, a, b):
    return _leq(node, a, b)


cdef object _norm(tuple node, object e):
    cdef int kind = node[0]
    if kind == GAMMA:
        return 0
    if kind == SEG or kind == NAT:
        return e
    if kind == SUM:
        return _norm(node[1 + <int>e[0]], e[1])
    if kind == PROD:
        return max(_norm(node[1], e[0]), _norm(node[2], e[1]))
    best = len(e)
    sub = node[1]
    for x in e:
        v = _norm(sub, x)
        if v > best:
            best = v
    return best


def norm(node, e):
    return _norm(node, e)


cdef class _Counter:
    cdef public long long used
    cdef public long long ceiling

    def __init__(self, long long used, long long ceiling):
        self.used = used
        self.ceiling = ceiling

    cdef inline int tick(self) except -1:
        self.used += 1
        if self.used > self.ceiling:
            raise Exceeded("nodes", self.ceiling, {"nodes": self.used})
        return 0


cdef int _avoid(tuple node, list forbidden, object m, list out, _Counter ctr) except -1:
    cdef int kind = node[0]
    cdef Py_ssize_t i, j, k, nf, li, nl
    cdef bint dead
    cdef list part, firsts, seconds, letters, forb, stack, newp
    cdef tuple word, prog, f
    if m <= 0:
        return 0
    if kind == GAMMA:
        for i in range(1, <Py_ssize_t>node[1] + 1):
            if i not in forbidden:
                ctr.tick()
                out.append(i)
        return 0
    if kind == SEG or kind == NAT:
        top = m if kind == NAT else min(m, node[1])
        for x in forbidden:
            if x < top:
                top = x
        for k in range(top):
            ctr.tick()
            out.append(k)
        return 0
    if kind == SUM:
        for tag in (0, 1):
            part = []
            _avoid(node[1 + tag], [x[1] for x in forbidden if x[0] == tag], m, part, ctr)
            for e in part:
                out.append((tag, e))
        return 0
    if kind == PROD:
        left = node[1]
        right = node[2]
        firsts = []
        _avoid(left, [], m, firsts, ctr)
        cache = {}
        for a in firsts:
            sub_forb = tuple([x[1] for x in forbidden if _leq(left, x[0], a)])
            seconds = cache.get(sub_forb)
            if seconds is None:
                seconds = []
                _avoid(right, list(sub_forb), m, seconds, ctr)
                cache[sub_forb] = seconds
            for b in seconds:
                ctr.tick()
                out.append((a, b))
        return 0
    sub = node[1]
    for w in forbidden:
        if len(w) == 0:
            return 0
    letters = []
    _avoid(sub, [], m, letters, ctr)
    nl = len(letters)
    forb = list(forbidden)
    nf = len(forb)
    stack = [((), (0,) * nf)]
    while stack:
        word, prog = stack.pop()
        ctr.tick()
        out.append(word)
        if len(word) + 1 >= m:
            continue
        for li in range(nl - 1, -1, -1):
            e = letters[li]
            newp = list(prog)
            dead = False
            for j in range(nf):
                k = newp[j]
                f = forb[j]
                if _leq(sub, f[k], e):
                    k += 1
                    if k == len(f):
                        dead = True
                        break
                    newp[j] = k
            if not dead:
                stack.append((word + (e,), tuple(newp)))
    return 0


def avoiding(node, forbidden, m, used=0, ceiling=10**18):
    cdef _Counter ctr = _Counter(used, ceiling)
    cdef list out = []
    _avoid(node, list(forbidden), m, out, ctr)
    return out, ctr.used


cdef class _Search:
    cdef tuple node
    cdef object ctrl
    cdef object canon
    cdef bint use_memo
    cdef _Counter ctr
    cdef dict memo
    cdef list bounds

    def __init__(self, node, ctrl, canon, use_memo, _Counter ctr):
        self.node = node
        self.ctrl = ctrl
        self.canon = canon
        self.use_memo = use_memo
        self.ctr = ctr
        self.memo = {}
        self.bounds = []

    cdef object bound(self, Py_ssize_t i):
        while len(self.bounds) <= i:
            self.bounds.append(self.ctrl(len(self.bounds)))
        return self.bounds[i]

    cdef list extend(self, list b, object y):
        cdef list nb = [x for x in b if not _leq(self.node, y, x)]
        nb.append(y)
        return nb

    cdef long long solve(self, list b, Py_ssize_t i) except -1:
        cdef object key = None
        cdef long long best = 0, r
        cdef list cands
        if self.use_memo:
            if self.canon is not None:
                key = (self.canon(b), i)
            else:
                key = (frozenset(b), i)
            hit = self.memo.get(key)
            if hit is not None:
                return hit
        self.ctr.tick()
        cands = []
        _avoid(self.node, b, self.bound(i), cands, self.ctr)
        for y in cands:
            r = 1 + self.solve(self.extend(b, y), i + 1)
            if r > best:
                best = r
        if self.use_memo:
            self.memo[key] = best
        return best

    def run(self, list basis):
        cdef long long length = self.solve(list(basis), 0)
        cdef long long remaining = length
        cdef Py_ssize_t i = 0
        cdef list b = list(basis), witness = [], cands, nb
        while remaining > 0:
            cands = []
            _avoid(self.node, b, self.bound(i), cands, self.ctr)
            for y in cands:
                nb = self.extend(b, y)
                if 1 + self.solve(nb, i + 1) == remaining:
                    witness.append(y)
                    b = nb
                    break
            else:
                raise AssertionError("witness reconstruction failed")
            i += 1
            remaining -= 1
        return length, witness


def longest_bad(node, basis, ctrl, canon, use_memo, used, ceiling):
    cdef _Counter ctr = _Counter(used, ceiling)
    search = _Search(node, ctrl, canon, use_memo, ctr)
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 100000))
    try:
        length, witness = search.run(list(basis))
    finally:
        sys.setrecursionlimit(old)
    return length, witness, ctr.used
