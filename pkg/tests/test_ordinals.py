import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wqolen.ordinals import (
    OMEGA,
    ONE,
    ZERO,
    NotCNFError,
    OrdinalSyntaxError,
    OrdinalTerm,
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
    parse_ordinal,
    to_cnf,
)
from wqolen.verify import random_cnf, random_omega_term

# --- an independent model of ordinals below w^w -----------------------------
# An ordinal sum_k w^k * c_k is a dict {k: c_k}; the helpers below implement
# ordinal addition, the natural operations and comparison from scratch.


def den(t: OrdinalTerm) -> dict[int, int]:
    """Denotation of a term with finite exponents, using ordinal addition."""
    acc: dict[int, int] = {}
    for exp, coeff in t.summands:
        k = exp.finite_value() if exp.is_finite else None
        assert k is not None
        acc = {d: c for d, c in acc.items() if d >= k}
        acc[k] = acc.get(k, 0) + coeff
    return acc


def model_term(d: dict[int, int]) -> OrdinalTerm:
    return OrdinalTerm((nat(k), d[k]) for k in sorted(d, reverse=True) if d[k])


def model_cmp(a: dict, b: dict) -> int:
    for k in sorted(set(a) | set(b), reverse=True):
        x, y = a.get(k, 0), b.get(k, 0)
        if x != y:
            return -1 if x < y else 1
    return 0


def model_nsum(a, b):
    return {k: a.get(k, 0) + b.get(k, 0) for k in set(a) | set(b)}


def model_nprod(a, b):
    out: dict[int, int] = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return out


finite_exp_terms = st.lists(
    st.tuples(st.integers(0, 4), st.integers(1, 4)), max_size=5
).map(lambda xs: OrdinalTerm((nat(k), c) for k, c in xs))

cnf_below_ww = st.dictionaries(st.integers(0, 4), st.integers(1, 4), max_size=4).map(model_term)


# --- syntax -------------------------------------------------------------------


@pytest.mark.parametrize(
    "text, shown",
    [
        ("0", "0"),
        ("3", "3"),
        ("w", "w"),
        ("w^2*3 + w + 1", "w^2*3 + w + 1"),
        ("w^(w+1)", "w^(w + 1)"),
        ("w^w^w", "w^(w^w)"),
        ("1 + w", "1 + w"),
        ("w + w", "w*2"),
        ("ω^2", "w^2"),
    ],
)
def test_parse_format(text, shown):
    assert format_ordinal(parse_ordinal(text)) == shown


@pytest.mark.parametrize("bad", ["", "w^", "w*", "2 +", "x", "(w)", "w^(2"])
def test_parse_errors(bad):
    with pytest.raises(OrdinalSyntaxError):
        parse_ordinal(bad)


def test_roundtrip_random():
    rng = random.Random(7)
    for _ in range(300):
        t = random_omega_term(rng, 3, 3)
        assert parse_ordinal(format_ordinal(t)) == t


def test_terms_are_syntactic():
    assert parse_ordinal("1 + w") != OMEGA
    assert to_cnf(parse_ordinal("1 + w")) == OMEGA
    assert not is_cnf(parse_ordinal("1 + w"))
    assert is_cnf(parse_ordinal("w^2 + w*3 + 7"))


def test_constructors():
    assert nat(0) == ZERO and nat(1) == ONE
    assert omega_pow(1) == OMEGA
    assert omega_pow(2, 3) == parse_ordinal("w^2*3")
    with pytest.raises(ValueError):
        nat(-1)
    with pytest.raises(TypeError):
        OrdinalTerm([(1, 2)])


def test_classify():
    assert classify(ZERO) == "zero"
    assert classify(parse_ordinal("w + 1")) == "successor"
    assert classify(parse_ordinal("w^2 + w")) == "limit"


# --- comparison and normal form against the model -----------------------------


@given(finite_exp_terms)
def test_to_cnf_matches_model(t):
    c = to_cnf(t)
    assert is_cnf(c)
    assert c == model_term(den(t))


@given(cnf_below_ww, cnf_below_ww)
def test_compare_matches_model(a, b):
    assert compare(a, b) == model_cmp(den(a), den(b))


@given(cnf_below_ww, cnf_below_ww)
def test_natural_ops_match_model(a, b):
    assert natural_sum(a, b) == model_term(model_nsum(den(a), den(b)))
    assert natural_product(a, b) == model_term(model_nprod(den(a), den(b)))


def test_compare_requires_cnf():
    with pytest.raises(NotCNFError):
        compare(parse_ordinal("1 + w"), OMEGA)


def test_enumeration_sorted_and_complete():
    terms = list(cnf_terms_below_omega_omega(2, 2))
    assert len(terms) == 27
    assert terms[0] == ZERO
    for a, b in zip(terms, terms[1:]):
        assert compare(a, b) < 0


# --- algebraic laws on deeper terms -------------------------------------------


@settings(max_examples=200)
@given(st.integers(0, 10**6))
def test_natural_laws(seed):
    rng = random.Random(seed)
    a, b, c = (random_cnf(rng, 3, 3) for _ in range(3))
    assert natural_sum(a, b) == natural_sum(b, a)
    assert natural_product(a, b) == natural_product(b, a)
    assert natural_sum(a, natural_sum(b, c)) == natural_sum(natural_sum(a, b), c)
    assert natural_product(a, natural_product(b, c)) == natural_product(natural_product(a, b), c)
    assert natural_product(a, natural_sum(b, c)) == natural_sum(
        natural_product(a, b), natural_product(a, c)
    )
    if compare(b, c) < 0:
        assert compare(natural_sum(a, b), natural_sum(a, c)) < 0


def test_leanness():
    assert leanness(ZERO) == 0
    assert leanness(nat(5)) == 5
    assert leanness(parse_ordinal("w^2*2 + w")) == 2
    assert leanness(parse_ordinal("w^(w*3)")) == 3


def test_syntactic_operators():
    w = OMEGA
    assert (w + 1) + w == parse_ordinal("w + 1 + w")
    assert (w + 1) * 2 == parse_ordinal("w + 1 + w + 1")
    assert 1 + w == parse_ordinal("1 + w")
