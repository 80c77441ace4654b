import pytest
from hypothesis import given, settings

from dtlkit.dtl import SignatureError, compose, tensor, word_to_morphism
from dtlkit.kdtl import (
    admissible_levels,
    equal_at,
    equal_through,
    iota,
    kcompose,
    kdot,
    kdtl,
    kid,
    kreflect,
    ktensor,
    mu,
    parse_word,
    verify_suite,
    word_str,
)

from conftest import composable_words, words


def test_word_parsing():
    assert parse_word("c k0 k1") == ("c", 0, 1)
    assert parse_word(("c", 1)) == ("c", 1)
    assert word_str(("c", 0, 1)) == "c k0 k1"
    with pytest.raises(ValueError):
        parse_word("c k2")


def test_admissible_levels_have_the_right_parity():
    levels = admissible_levels(("c", 0, 1), 3)
    assert levels == [(0, 1), (0, 3), (2, 1), (2, 3)]


@settings(max_examples=40)
@given(composable_words(max_n=4, max_length=4))
def test_embedding_of_dtl_is_a_functor(data):
    m, w1, w2 = data
    f = word_to_morphism(m, w1)
    g = word_to_morphism(f.n, w2)
    assert equal_at(kcompose(kdtl(g), kdtl(f)), kdtl(compose(g, f)), ())


@settings(max_examples=30)
@given(words(max_n=3, max_length=3), words(max_n=3, max_length=3))
def test_embedding_respects_tensor_products(a, b):
    f, g = word_to_morphism(*a), word_to_morphism(*b)
    assert equal_at(ktensor(kdtl(f), kdtl(g)), kdtl(tensor(f, g)), ())


def test_inclusions_and_merges_have_the_right_words():
    assert (iota(3).source, iota(3).target) == (("c", "c", "c"), (1,))
    assert (mu(0, 1).source, mu(0, 1).target) == ((0, 1), (1,))


def test_composition_checks_words():
    with pytest.raises(SignatureError):
        kcompose(iota(2), iota(2))


def test_reflection_is_an_involution():
    f = kcompose(kdot(0), mu(1, 1))
    assert equal_through(kreflect(kreflect(f)), f, 3)


@pytest.mark.parametrize("suite", ["relations", "rungs", "rewire", "decomp"])
def test_relation_suites_at_level_two(suite):
    failed = [c for c in verify_suite(suite, 2) if not c.ok]
    assert not failed


def test_negative_control_dot_is_not_identity():
    assert not equal_at(kdot(0), kid("k0"), (2,))
    assert not equal_through(kdot(1), kid("k1"), 3)
