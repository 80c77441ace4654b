import pytest

from dtlkit.algebra import LaurentPoly
from dtlkit.kirby import (
    end_kirby_dimensions,
    hom_from_kirby_vanishing,
    kirby_checks,
    kirby_object,
    kirby_pol_report,
    kirby_square,
    pol_of_kirby,
    shift_isomorphism_holds,
)


def test_stated_values():
    assert pol_of_kirby(0, 2) == LaurentPoly({0: 1, -2: 1, -4: 1})
    assert pol_of_kirby(1, 1) == LaurentPoly({-1: 1, -3: 1})


@pytest.mark.parametrize("k", [0, 1])
@pytest.mark.parametrize("N", range(5))
def test_partial_sums(k, N):
    expected = LaurentPoly({-k - 2 * i: 1 for i in range(N + 1)})
    assert pol_of_kirby(k, N) == expected
    assert all(kirby_pol_report(k, N).transitions_full_rank)


@pytest.mark.parametrize("N", range(4))
def test_adding_a_level_only_adds_lower_degrees(N):
    for k in (0, 1):
        lo, hi = pol_of_kirby(k, N), pol_of_kirby(k, N + 1)
        assert all(hi[e] == c for e, c in lo.items())
        assert min(hi.exponents()) < min(lo.exponents())


def test_kirby_checks():
    assert all(c.ok for c in kirby_checks(3))


@pytest.mark.parametrize("k", [0, 1])
def test_end_dimensions(k):
    assert end_kirby_dimensions(k, 3, 7) == LaurentPoly({0: 1, 2: 1, 4: 1, 6: 1})


@pytest.mark.parametrize("k", [0, 1])
@pytest.mark.parametrize("m", range(4))
def test_maps_out_vanish(k, m):
    assert hom_from_kirby_vanishing(k, m, 4, 6).certified


def test_shift_isomorphism():
    assert shift_isomorphism_holds(0, 3)


def test_kirby_object_levels():
    obj = kirby_object(1, 3)
    assert [obj.strands(i) for i in range(obj.level + 1)] == [1, 3, 5, 7]


def test_kirby_square_small():
    sq = kirby_square(1, 1, 2)
    assert all(info["identity"] for info in sq["levels"].values())
    assert all(sq["orthogonality"].values())
