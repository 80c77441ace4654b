import pytest
from hypothesis import given, strategies as st

from dtlkit.dtl import (
    DTLMorphism,
    ParseError,
    SignatureError,
    basis,
    braid_generator,
    cap,
    compose,
    cup,
    diagram_to_word,
    dot,
    dot_at,
    dotted_cap,
    dotted_cup,
    flip,
    format_morphism,
    identity,
    parse_morphism,
    reflect,
    tensor,
    turnback,
    word_to_morphism,
)

from conftest import composable_words, words


def test_circle_evaluates_to_two():
    assert compose(cap(), cup()) == identity(0).scale(2)


def test_dot_squares_to_zero_and_dotted_circle_vanishes():
    assert compose(dot(), dot()).is_zero()
    assert compose(dotted_cap(), cup()).is_zero()
    assert compose(cap(), dotted_cup()).is_zero()


def test_dot_slides_through_cup_and_cap():
    assert compose(dot_at(2, 1), cup()) == compose(dot_at(2, 2), cup())
    assert compose(cap(), dot_at(2, 1)) == compose(cap(), dot_at(2, 2))


def test_zigzag():
    left = compose(tensor(identity(1), cap()), tensor(cup(), identity(1)))
    assert left == identity(1)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_braid_generators_square_to_identity(n):
    for i in range(1, n):
        s = braid_generator(n, i)
        assert compose(s, s) == identity(n)


def test_braid_relation():
    s1, s2 = braid_generator(3, 1), braid_generator(3, 2)
    assert compose(s1, compose(s2, s1)) == compose(s2, compose(s1, s2))


def test_turnback_squares_to_twice_itself():
    t = turnback(3, 1)
    assert compose(t, t) == t.scale(2)


@pytest.mark.parametrize("m,n", [(0, 2), (1, 1), (2, 2), (1, 3), (3, 3), (2, 4)])
def test_basis_sizes(m, n):
    from math import comb

    k = (m + n) // 2
    catalan = comb(2 * k, k) // (k + 1)
    # every arc may carry a dot, except that through-strand dots are separate basis elements too
    assert len(basis(m, n)) >= catalan


@given(words())
def test_word_roundtrip(mw):
    m, word = mw
    f = word_to_morphism(m, word)
    for arcs, _ in f.terms.items():
        again = word_to_morphism(m, diagram_to_word(arcs, m, f.n))
        assert again == DTLMorphism(m, f.n, {arcs: 1})


@given(composable_words())
def test_composition_is_associative(data):
    m, w1, w2 = data
    f = word_to_morphism(m, w1)
    g = word_to_morphism(f.n, w2)
    combined = word_to_morphism(m, w1 + w2)
    assert compose(g, f) == combined


@given(words(max_n=4, max_length=5), words(max_n=4, max_length=5))
def test_interchange_law(a, b):
    f = word_to_morphism(*a)
    g = word_to_morphism(*b)
    lhs = tensor(f, g)
    rhs = compose(tensor(f, identity(g.n)), tensor(identity(f.m), g))
    assert lhs == rhs


@given(words())
def test_reflections_are_involutions(mw):
    f = word_to_morphism(*mw)
    assert reflect(reflect(f)) == f
    assert flip(flip(f)) == f


@given(words())
def test_text_roundtrip(mw):
    f = word_to_morphism(*mw)
    if not f.is_zero():
        assert parse_morphism(format_morphism(f)) == f


def test_parse_reports_position():
    with pytest.raises(ParseError) as err:
        parse_morphism("1 1 ; arc(B1,T1,0)\n1 1 ; arc(B1,T2,0)")
    assert err.value.line == 2


def test_parse_rejects_crossing_arcs():
    with pytest.raises(ParseError):
        parse_morphism("2 2 ; arc(B1,T2,0) arc(B2,T1,0)")


def test_parse_rejects_mixed_signatures():
    with pytest.raises(ParseError):
        parse_morphism("0 2 ; arc(T1,T2,0)\n2 0 ; arc(B1,B2,0)")


def test_signature_mismatch_in_composition():
    with pytest.raises(SignatureError):
        compose(cup(), cup())


def test_negative_control_wrong_circle_value_is_detected():
    # a perturbed relation must not hold
    assert compose(cap(), cup()) != identity(0)
