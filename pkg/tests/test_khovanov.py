import pytest
from hypothesis import given, settings, strategies as st

from dtlkit.algebra import LaurentPoly
from dtlkit.dtl import braid_generator
from dtlkit.khovanov import (
    PDError,
    builtin,
    builtin_names,
    cable,
    colored_kh,
    cube_complex,
    jones_from_bracket,
    jw_projector_action,
    khovanov_homology,
    kirby_colored_unknot,
    load_pd,
    parse_color,
    parse_pd,
    scan_homology,
    transposition_action,
    unknot_jw_dimension,
    unknot_transposition,
    unknot_word_action,
    unlink,
)
from dtlkit.khovanov import cube
from dtlkit.kirby import pol_of_kirby
from dtlkit.polyrep import monomial_order, pol, pol_of_word

from conftest import words

q = LaurentPoly.monomial
SMALL = [name for name in builtin_names() if builtin(name).n_crossings <= 8]


def _mirror_table(table):
    return {-h: p.substitute_inverse() for h, p in table.items()}


def _matrix_of_sparse(mat, m, n):
    src, tgt = monomial_order(m), monomial_order(n)
    out = {}
    for (i, j), v in mat.entries.items():
        out.setdefault(src[j], {})[tgt[i]] = v
    return out


# ---------------------------------------------------------------------------
# planar diagram codes


def test_parse_with_comments_signs_and_loops():
    d = parse_pd("# right-handed trefoil\nX 1 5 2 4\nX 3 1 4 6\nX 5 3 6 2\nLOOP 1\n")
    assert d.n_crossings == 3 and d.loops == 1 and d.n_components == 2
    assert d.writhe == 3
    kink = parse_pd("X- 1 2 2 1")
    assert kink.writhe == -1


def test_parse_errors():
    with pytest.raises(PDError):
        parse_pd("X 1 2 3 4")  # every edge must appear twice
    with pytest.raises(PDError):
        parse_pd("Y 1 1 2 2")


def test_load_from_file(tmp_path):
    path = tmp_path / "trefoil.pd"
    path.write_text(builtin("trefoil").to_pd())
    assert khovanov_homology(load_pd(path)) == khovanov_homology(builtin("trefoil"))


def test_bundled_diagrams():
    names = builtin_names()
    for name in ("unknot", "trefoil", "figure_eight", "hopf", "cinquefoil"):
        assert name in names


# ---------------------------------------------------------------------------
# homology of links


def test_unknot():
    assert khovanov_homology(builtin("unknot")) == {0: q(1) + q(-1)}


def test_trefoil():
    assert khovanov_homology(builtin("trefoil")) == {0: q(1) + q(3), 2: q(5), 3: q(9)}


@pytest.mark.parametrize("name", builtin_names())
def test_complex_and_euler_characteristic(name):
    d = builtin(name)
    cx = cube_complex(d)
    assert cx.d_squared_is_zero()
    assert cx.preserves_quantum_degree()
    assert cx.euler_characteristic() == jones_from_bracket(d)


@pytest.mark.parametrize("name", builtin_names())
def test_scan_agrees_with_cube(name):
    d = builtin(name)
    assert scan_homology(d) == khovanov_homology(d)


@pytest.mark.parametrize("name", SMALL)
def test_mirror_dualizes(name):
    d = builtin(name)
    assert khovanov_homology(d.mirror()) == _mirror_table(khovanov_homology(d))


@pytest.mark.parametrize("name", ["trefoil", "hopf", "figure_eight"])
def test_disjoint_union_is_a_tensor_product(name):
    d = builtin(name)
    union = khovanov_homology(d.disjoint_union(builtin("unknot")))
    expected = {h: p * (q(1) + q(-1)) for h, p in khovanov_homology(d).items()}
    assert union == expected


def test_reidemeister_one():
    for name in ("unknot_kinks", "unknot_kinks_negative"):
        assert scan_homology(builtin(name)) == khovanov_homology(builtin("unknot"))


@settings(max_examples=15)
@given(st.sampled_from(["trefoil", "hopf", "unknot_kinks", "torus_link_2_4"]), st.data())
def test_cables_scan_cube_and_bracket_agree(name, data):
    base = builtin(name)
    mult = [data.draw(st.integers(0, 2)) for _ in range(len(base.components))]
    d = cable(base, mult).diagram
    if d.n_crossings > 10:
        return
    cx = cube_complex(d)
    assert cx.d_squared_is_zero()
    assert cx.euler_characteristic() == jones_from_bracket(d)
    assert scan_homology(d) == cx.homology()


def test_negative_control_trefoil_is_not_its_mirror():
    d = builtin("trefoil")
    assert khovanov_homology(d) != khovanov_homology(d.mirror())


# ---------------------------------------------------------------------------
# maps induced by cobordisms


def test_sphere_evaluations():
    d = unlink(0)
    born = cube.birth(d)
    dotted = born.then(cube.dot(unlink(1), ("loop", 0)))
    assert dotted.then(cube.death(unlink(1), 0)).scalar() == 1
    assert born.then(cube.death(unlink(1), 0)).scalar() == 0


def test_elementary_maps_on_a_knot_are_chain_maps():
    d = builtin("trefoil")
    for f in (cube.birth(d), cube.dot(d, 1)):
        assert f.commutes() and f.is_homogeneous()
    assert cube.dot(d, 1).then(cube.dot(d, 1)).maps[0].is_zero()


def test_saddle_between_cable_strands_is_a_chain_map():
    c = cable(builtin("hopf"), [2, 1])
    e, f = c.site(c.base.edges[0], 0)
    s = cube.saddle(c.diagram, e, f)
    assert s.commutes() and s.is_homogeneous()


@settings(max_examples=40)
@given(words(max_n=5, max_length=6))
def test_unknot_cables_realize_the_polynomial_representation(mw):
    m, word = mw
    n = m + sum({"cup": 2, "cap": -2, "dot": 0}[k] for k, _ in word)
    assert unknot_word_action(m, word) == _matrix_of_sparse(pol_of_word(m, word), m, n)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_transposition_is_the_braid_generator(n):
    for i in range(1, n):
        assert unknot_transposition(n, i) == _matrix_of_sparse(pol(braid_generator(n, i)), n, n)


def test_braid_relations_on_unknot_cables():
    c3 = cable(unlink(1), n=3)
    s1, s2 = transposition_action(c3, 1), transposition_action(c3, 2)
    assert (s1 @ s2 @ s1).matrix == (s2 @ s1 @ s2).matrix
    c4 = cable(unlink(1), n=4)
    t1, t3 = transposition_action(c4, 1), transposition_action(c4, 3)
    assert (t1 @ t3).matrix == (t3 @ t1).matrix
    assert not t1.is_identity()


# ---------------------------------------------------------------------------
# colors


@pytest.mark.parametrize("n", range(6))
def test_projector_colored_unknot(n):
    assert unknot_jw_dimension(n) == LaurentPoly.quantum_integer(n + 1)


@pytest.mark.parametrize("k", [0, 1])
@pytest.mark.parametrize("N", range(4))
def test_kirby_colored_unknot(k, N):
    rep = kirby_colored_unknot(k, N)
    assert rep.value == pol_of_kirby(k, N)
    assert all(rep.injective)


def test_kinked_unknot_two_cable():
    # writhe zero, so the cable is the unframed 2-cable of the unknot
    d = builtin("unknot_kinks")
    c = cable(d, n=2)
    s = transposition_action(c)
    assert (s @ s).is_identity()
    assert s.fixed_dimension() == {0: LaurentPoly.quantum_integer(3)}
    assert jw_projector_action(c).image_dimension() == {0: LaurentPoly.quantum_integer(3)}


def test_colored_unlink():
    table = colored_kh(builtin("unlink2"), ["jw:2", "c:1"])
    assert table == {0: LaurentPoly.quantum_integer(3) * LaurentPoly.quantum_integer(2)}


def test_color_names():
    assert str(parse_color("jw:2")) == "JW2"
    assert str(parse_color("kirby:0", level=3)) == "w0@3"
    assert str(parse_color("w1@2")) == "w1@2"
    assert parse_color("kirby", level=1).kind == "omega_total"
    with pytest.raises(ValueError):
        parse_color("kirby:0")
    with pytest.raises(ValueError):
        parse_color("kirby:2", level=1)
    with pytest.raises(ValueError):
        colored_kh(builtin("trefoil"), ["c:1", "c:1"])
