import itertools

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from wqolen.control import SUCC, ControlFunction, EvalBudget, Exceeded
from wqolen.nwqo import (
    Gamma,
    InLeft,
    InRight,
    Letter,
    Nat,
    Number,
    NwqoSyntaxError,
    Pair,
    Prod,
    Seg,
    ShapeError,
    Star,
    Sum,
    Word,
    enumerate_below,
    format_element,
    format_nwqo,
    is_bad,
    is_controlled,
    is_exponential,
    leq,
    max_bad_length,
    max_bad_length_residual,
    norm,
    normalize,
    parse_element,
    parse_nwqo,
    parse_sequence,
    power,
    reflect_residual,
)

# --- a from-scratch model: elements, norms, order, exhaustive search ----------


def m_elems(a, m):
    """Every element of ``a`` with norm < m."""
    if m <= 0:
        return []
    if isinstance(a, Gamma):
        return [Letter(i) for i in range(1, a.p + 1)]
    if isinstance(a, Seg):
        return [Number(k) for k in range(min(a.p, m))]
    if isinstance(a, Nat):
        return [Number(k) for k in range(m)]
    if isinstance(a, Sum):
        return [InLeft(x) for x in m_elems(a.left, m)] + [InRight(y) for y in m_elems(a.right, m)]
    if isinstance(a, Prod):
        return [Pair(x, y) for x in m_elems(a.left, m) for y in m_elems(a.right, m)]
    letters = m_elems(a.arg, m)
    out = []
    for k in range(m):
        out.extend(Word(w) for w in itertools.product(letters, repeat=k))
    return out


def m_norm(a, e):
    if isinstance(a, Gamma):
        return 0
    if isinstance(a, (Seg, Nat)):
        return e.k
    if isinstance(a, Sum):
        return m_norm(a.left if isinstance(e, InLeft) else a.right, e.e)
    if isinstance(a, Prod):
        return max(m_norm(a.left, e.fst), m_norm(a.right, e.snd))
    return max([len(e.items)] + [m_norm(a.arg, x) for x in e.items])


def m_leq(a, x, y):
    if isinstance(a, Gamma):
        return x == y
    if isinstance(a, (Seg, Nat)):
        return x.k <= y.k
    if isinstance(a, Sum):
        return type(x) is type(y) and m_leq(a.left if isinstance(x, InLeft) else a.right, x.e, y.e)
    if isinstance(a, Prod):
        return m_leq(a.left, x.fst, y.fst) and m_leq(a.right, x.snd, y.snd)
    # subword embedding, by brute force over index choices
    u, v = x.items, y.items
    return any(
        all(m_leq(a.arg, u[i], v[j]) for i, j in enumerate(idx))
        for idx in itertools.combinations(range(len(v)), len(u))
    )


def brute_length(a, g, n, prefix=()):
    """Longest controlled bad extension of ``prefix``, by plain enumeration."""
    bound = n
    for _ in prefix:
        bound = g(bound)
    best = 0
    for y in m_elems(a, bound):
        if any(m_leq(a, x, y) for x in prefix):
            continue
        best = max(best, 1 + brute_length(a, g, n, prefix + (y,)))
    return best


SMALL = ["G1", "G3", "Seg2", "Seg3", "N", "G2 + N", "G1 * N", "Seg2 * Seg2", "G1^*", "G2^*", "(G1 + G1)^*", "N + Seg2", "G2 * G2"]


# --- syntax -------------------------------------------------------------------


@pytest.mark.parametrize(
    "text, shown",
    [
        ("G3", "G3"),
        ("Seg4", "Seg4"),
        ("N", "N"),
        ("G2^* * G3 + N", "G2^* * G3 + N"),
        ("(G1 + G2)^*", "(G1 + G2)^*"),
        ("G2^3", "G2 * G2 * G2"),
        ("G2 * (G3 + N)", "G2 * (G3 + N)"),
    ],
)
def test_parse_format(text, shown):
    assert format_nwqo(parse_nwqo(text)) == shown
    assert parse_nwqo(format_nwqo(parse_nwqo(text))) == parse_nwqo(text)


@pytest.mark.parametrize("bad", ["", "G", "G2 +", "(G2", "X3", "G2 G3", "Seg"])
def test_parse_errors(bad):
    with pytest.raises(NwqoSyntaxError):
        parse_nwqo(bad)


def test_power():
    assert power(Gamma(2), 0) == Gamma(1)
    assert power(Gamma(2), 1) == Gamma(2)
    assert power(Gamma(2), 3) == Prod(Prod(Gamma(2), Gamma(2)), Gamma(2))


@pytest.mark.parametrize(
    "text, elem",
    [
        ("a3", Letter(3)),
        ("7", Number(7)),
        ("<a1, 2>", Pair(Letter(1), Number(2))),
        ("inl(a2)", InLeft(Letter(2))),
        ("inr(0)", InRight(Number(0))),
        ("[a1 a2 a1]", Word([Letter(1), Letter(2), Letter(1)])),
        ("[]", Word()),
        ("[<a1, 0> <a2, 3>]", Word([Pair(Letter(1), Number(0)), Pair(Letter(2), Number(3))])),
    ],
)
def test_elements_roundtrip(text, elem):
    assert parse_element(text) == elem
    assert parse_element(format_element(elem)) == elem


def test_parse_sequence():
    seq = parse_sequence("{[a1], [a2 a2], []}")
    assert seq == [Word([Letter(1)]), Word([Letter(2), Letter(2)]), Word()]
    assert parse_sequence("1 2 3") == [Number(1), Number(2), Number(3)]
    with pytest.raises(NwqoSyntaxError):
        parse_element("[a1")


def test_shape_errors():
    with pytest.raises(ShapeError):
        norm(parse_nwqo("G2"), Letter(3))
    with pytest.raises(ShapeError):
        norm(parse_nwqo("G2 + N"), Number(1))
    with pytest.raises(ShapeError):
        leq(parse_nwqo("Seg2"), Number(2), Number(0))


# --- norms, order, enumeration against the model ------------------------------


@pytest.mark.parametrize("text", SMALL)
def test_enumeration_norms_and_order(text, any_kernel):
    a = parse_nwqo(text)
    got = enumerate_below(a, 3)
    want = m_elems(a, 3)
    assert sorted(map(format_element, got)) == sorted(map(format_element, want))
    for x in got:
        assert norm(a, x) == m_norm(a, x) < 3
    for x, y in itertools.product(got[:25], repeat=2):
        assert leq(a, x, y) == m_leq(a, x, y)


def test_higman_examples():
    a = parse_nwqo("G2^*")
    w = parse_element
    assert leq(a, w("[a1 a2]"), w("[a2 a1 a1 a2]"))
    assert not leq(a, w("[a2 a1]"), w("[a1 a1 a2]"))
    assert leq(a, w("[]"), w("[a1]"))
    b = parse_nwqo("N^*")
    assert leq(b, w("[1 2]"), w("[0 3 5]"))
    assert not leq(b, w("[4]"), w("[0 3]"))


def test_bad_and_controlled():
    a = parse_nwqo("G2^*")
    seq = parse_sequence("[a1 a1], [a1 a2 a2], [a2]")
    assert is_bad(a, seq)
    assert is_controlled(a, SUCC, 3, seq)
    assert not is_controlled(a, SUCC, 2, seq)
    assert not is_bad(a, parse_sequence("[a1], [a2 a1]"))


# --- the search ---------------------------------------------------------------


@pytest.mark.parametrize("text", SMALL)
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_search_matches_brute_force(text, n, any_kernel):
    if n == 3 and "^*" in text and text != "G1^*":
        pytest.skip("too large for the unmemoized model; covered by FROZEN_LENGTHS")
    a = parse_nwqo(text)
    want = brute_length(a, SUCC, n)
    length, witness = max_bad_length(a, SUCC, n)
    assert length == want
    assert len(witness) == length
    assert is_bad(a, witness) and is_controlled(a, SUCC, n, witness)
    assert max_bad_length(a, SUCC, n, memo=False)[0] == want
    assert max_bad_length(a, SUCC, n, symmetry=True)[0] == want


@pytest.mark.parametrize("text, g", [("N", "2*x"), ("G2^*", "x+2"), ("Seg3 * G2", "x^2")])
def test_search_other_controls(text, g, any_kernel):
    a = parse_nwqo(text)
    ctl = ControlFunction(g)
    for n in (1, 2):
        assert max_bad_length(a, ctl, n)[0] == brute_length(a, ctl, n)


def test_residual_search():
    a = parse_nwqo("G2^*")
    x = parse_element("[a1]")
    # after forbidding [a1], only powers of a2 remain
    assert max_bad_length_residual(a, [x], SUCC, 3) == 3
    length, wit = max_bad_length_residual(a, [x], SUCC, 3, with_witness=True)
    assert len(wit) == 3 and is_bad(a, [x] + wit)


def test_budget_exceeded():
    with pytest.raises(Exceeded) as info:
        max_bad_length(parse_nwqo("G2^*"), SUCC, 4, EvalBudget(max_nodes=500))
    assert info.value.limit == "nodes"


# frozen values.  The small ones agree with the search with memoization off;
# G2^* @ 3, N * G3 @ 3, N * N @ 3 and Seg3^3 @ 2 are out of reach unmemoized
# and were confirmed with the letter-symmetry quotient instead.  N * G3 also
# matches M_{w*3}(n) = 7n.
FROZEN_LENGTHS = {
    ("G2^*", 1): 1,
    ("G2^*", 2): 4,
    ("G2^*", 3): 27,
    ("N * G3", 3): 21,
    ("N * N", 2): 8,
    ("N * N", 3): 39,
    ("(N + G1) * G2", 1): 11,
    ("Seg4 * Seg4", 3): 13,
    ("Seg3^3", 2): 20,
    ("N * Seg2", 4): 12,
    ("G1^* * G2", 5): 15,
}


@pytest.mark.parametrize("key", sorted(FROZEN_LENGTHS))
def test_frozen_lengths(key):
    text, n = key
    assert max_bad_length(parse_nwqo(text), SUCC, n)[0] == FROZEN_LENGTHS[key]


# --- normal form and residual reflection --------------------------------------


def test_normalize_examples():
    assert normalize(parse_nwqo("G1 * N")) == parse_nwqo("G1^*")
    assert normalize(parse_nwqo("G0 + G3")) == Gamma(3)
    assert normalize(parse_nwqo("G0^*")) == Gamma(1)
    assert normalize(parse_nwqo("G2 * (G1^* + G1)")) == Sum(Prod(Gamma(2), Star(Gamma(1))), Gamma(2))
    assert normalize(parse_nwqo("G2^* * G3")) == normalize(parse_nwqo("G3 * G2^*"))
    assert is_exponential(parse_nwqo("G2^* * G3 + N"))
    assert not is_exponential(parse_nwqo("Seg3"))
    assert not is_exponential(parse_nwqo("N^*"))


@pytest.mark.parametrize("text", ["G2 * N", "G1^* * G2 + G2", "N * N", "G1^* * G2 + G1"])
def test_normalize_preserves_length(text):
    a = parse_nwqo(text)
    for n in (1, 2, 3):
        assert max_bad_length(a, SUCC, n)[0] == max_bad_length(normalize(a), SUCC, n)[0]


def test_reflect_residual_rules():
    assert reflect_residual(Gamma(3), Letter(2)) == Gamma(2)
    assert reflect_residual(Nat(), Number(4)) == Seg(4)
    a = parse_nwqo("G2 + N")
    assert reflect_residual(a, InRight(Number(2))) == Sum(Gamma(2), Seg(2))
    assert reflect_residual(parse_nwqo("G2^*"), Word()) == Gamma(0)
    r = reflect_residual(parse_nwqo("G2^*"), parse_element("[a1 a2]"))
    assert r == Prod(Gamma(2), power(Star(Gamma(1)), 2))
    with pytest.raises(ValueError):
        reflect_residual(parse_nwqo("Seg3^*"), parse_element("[1]"))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["G2^*", "G3 * N", "N + G2", "(G1 + G1)^*", "G2 * G2^*"]), st.integers(1, 2), st.data())
def test_residual_is_reflected(text, n, data):
    """Residual lengths never exceed those of the reflecting expression."""
    a = parse_nwqo(text)
    x = data.draw(st.sampled_from(enumerate_below(a, 3)))
    budget = EvalBudget(max_nodes=200_000)
    try:
        direct = max_bad_length_residual(a, [x], SUCC, n, budget)
        reflected = max_bad_length(reflect_residual(a, x), SUCC, n, budget)[0]
    except Exceeded:
        assume(False)
    assert direct <= reflected
