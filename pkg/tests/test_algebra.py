from hypothesis import given, strategies as st

from dtlkit.algebra import GradedSpace, LaurentPoly, Q, SparseMatrix, gauss, nullspace, rank_of_rows, solve_linear

from conftest import laurent_polys, rationals


@given(laurent_polys, laurent_polys, laurent_polys)
def test_laurent_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == LaurentPoly()


@given(laurent_polys, st.integers(-5, 5))
def test_shift_and_inverse(a, k):
    assert a.shift(k) == a * LaurentPoly.monomial(k)
    assert a.substitute_inverse().substitute_inverse() == a
    assert (a * a).substitute_inverse() == a.substitute_inverse() * a.substitute_inverse()


@given(laurent_polys)
def test_json_roundtrip(a):
    assert LaurentPoly.from_json(a.to_json()) == a


def test_quantum_integer():
    assert LaurentPoly.quantum_integer(3) == LaurentPoly({2: 1, 0: 1, -2: 1})
    assert LaurentPoly.quantum_integer(0) == LaurentPoly()
    two = LaurentPoly.quantum_integer(2)
    assert two * two == LaurentPoly.quantum_integer(3) + LaurentPoly.quantum_integer(1)


def test_serialization_is_exact():
    assert LaurentPoly({-2: Q(1, 3), 1: -2}).to_json() == {"1": "-2", "-2": "1/3"}


def _space(n):
    return GradedSpace.from_pairs((i, 0) for i in range(n))


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.dictionaries(st.tuples(st.integers(0, r - 1), st.integers(0, c - 1)), rationals, max_size=8).map(
            lambda e: SparseMatrix.from_entries(_space(c), _space(r), e)
        )
    )
)


@given(matrices, st.data())
def test_matmul_matches_dense(a, data):
    rows, cols = a.shape
    k = data.draw(st.integers(1, 4))
    entries = data.draw(st.dictionaries(st.tuples(st.integers(0, cols - 1), st.integers(0, k - 1)), rationals, max_size=6))
    b = SparseMatrix.from_entries(_space(k), _space(cols), entries)
    prod = (a @ b).to_dense()
    da, db = a.to_dense(), b.to_dense()
    for i in range(rows):
        for j in range(k):
            assert prod[i][j] == sum(da[i][t] * db[t][j] for t in range(cols))


@given(st.lists(st.dictionaries(st.integers(0, 4), rationals, max_size=4), max_size=6))
def test_rank_nullity(rows):
    unknowns = list(range(5))
    # columns of the system are the rows given above
    system = [{r: row.get(u, 0) for r, row in enumerate(rows) if row.get(u, 0)} for u in unknowns]
    kernel = nullspace(system, list(range(len(rows))))
    assert rank_of_rows(rows) + len(kernel) == len(rows)
    for vec in kernel:
        for u in unknowns:
            assert sum(c * rows[r].get(u, 0) for r, c in vec.items()) == 0


def test_solve_linear_and_gauss():
    rows = [{0: Q(1), 1: Q(1)}, {0: Q(1), 1: Q(-1)}]
    sol = solve_linear(rows, [Q(3), Q(1)])
    assert sol == {0: 2, 1: 1}
    m = SparseMatrix.from_entries(_space(3), _space(2), {(0, 0): 1, (0, 1): 1, (1, 1): 1, (1, 2): 1})
    assert gauss(m).rank == 2


def test_inconsistent_system_has_no_solution():
    rows = [{0: Q(1)}, {0: Q(2)}]
    assert solve_linear(rows, [Q(1), Q(1)]) is None
