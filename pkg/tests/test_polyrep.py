import pytest
from hypothesis import given

from dtlkit.algebra import LaurentPoly
from dtlkit.dtl import DTLMorphism, basis, braid_generator, compose, identity, word_to_morphism
from dtlkit.karoubi import jones_wenzl
from dtlkit.polyrep import (
    graded_rank,
    is_unitriangular,
    monomial_str,
    pairing_matrix,
    pol,
    pol_is_injective,
    pol_jw_closed,
    pol_jw_coset,
    pol_of_word,
)

from conftest import composable_words, words


@given(words(max_n=6, max_length=10))
def test_pol_of_reduced_word_matches_generator_product(mw):
    m, word = mw
    f = word_to_morphism(m, word)
    direct = pol_of_word(m, word)
    assert pol(f).entries == direct.entries
    assert f.is_zero() == direct.is_zero()


@given(composable_words())
def test_pol_is_a_functor(data):
    m, w1, w2 = data
    f = word_to_morphism(m, w1)
    g = word_to_morphism(f.n, w2)
    assert pol(compose(g, f)).entries == (pol(g) @ pol(f)).entries


@given(words(max_n=5, max_length=6))
def test_pol_is_homogeneous(mw):
    f = word_to_morphism(*mw)
    for d, part in f.degree_components().items():
        assert pol(part).check_homogeneous(d)


def test_monomial_names():
    assert monomial_str(0b101) == "x1*x3"
    assert monomial_str(0) == "1"


@pytest.mark.parametrize("k", [0, 2, 4, 6, 8])
def test_pairing_unitriangular(k):
    assert is_unitriangular(pairing_matrix(k))


@pytest.mark.parametrize("m,n", [(0, 4), (2, 2), (3, 3), (1, 5)])
def test_faithful_on_basis(m, n):
    assert pol_is_injective(m, n)
    mats = [pol(DTLMorphism(m, n, {arcs: 1})) for arcs in basis(m, n)]
    assert len({tuple(sorted(x.entries.items())) for x in mats}) == len(mats)


@pytest.mark.parametrize("n", range(6))
def test_jw_closed_form_matches_symbolic_projector(n):
    assert pol(jones_wenzl(n)).entries == pol_jw_closed(n).entries


@pytest.mark.parametrize("n", range(6))
def test_jw_coset_route(n):
    assert graded_rank(pol_jw_coset(n)) == LaurentPoly.quantum_integer(n + 1)


def test_braid_generator_acts_as_signed_transposition():
    s = pol(braid_generator(2, 1))
    assert (s @ s).entries == pol(identity(2)).entries
    assert s.entries != pol(identity(2)).entries
