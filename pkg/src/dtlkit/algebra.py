"""Exact scalars, Laurent polynomials in ``q`` and sparse rational linear algebra.

Every other module works over the exact rational type ``Q`` (``gmpy2.mpq``,
falling back to :class:`fractions.Q`); nothing here ever touches
floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

try:  # exact rationals implemented in C; the stdlib type is the fallback
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    from fractions import Q as Q

Rational = Q


def frac(x) -> Q:
    """Coerce ints, strings and fractions to ``Q``."""
    return x if isinstance(x, Q) else Q(x)


def rational_str(x: Q) -> str:
    return str(frac(x))


class LaurentPoly:
    """A finitely supported map ``exponent -> Q`` in the variable q."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Optional[Mapping[int, object]] = None):
        c: Dict[int, Q] = {}
        if coeffs:
            for e, v in coeffs.items():
                v = frac(v)
                if v:
                    c[int(e)] = v
        self._c = c
        self._hash = None

    @classmethod
    def monomial(cls, exp: int, coef=1) -> "LaurentPoly":
        return cls({exp: coef})

    @classmethod
    def quantum_integer(cls, n: int) -> "LaurentPoly":
        """``[n] = q^{n-1} + q^{n-3} + ... + q^{1-n}`` (zero for n <= 0)."""
        return cls({n - 1 - 2 * i: 1 for i in range(max(n, 0))})

    @property
    def coeffs(self) -> Dict[int, Q]:
        return dict(self._c)

    def __getitem__(self, e: int) -> Q:
        return self._c.get(e, Q(0))

    def items(self):
        return sorted(self._c.items(), reverse=True)

    def exponents(self) -> List[int]:
        return sorted(self._c, reverse=True)

    def __bool__(self) -> bool:
        return bool(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Q)):
            other = LaurentPoly({0: other})
        return isinstance(other, LaurentPoly) and self._c == other._c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        c = dict(self._c)
        for e, v in other._c.items():
            c[e] = c.get(e, 0) + v
        return LaurentPoly(c)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -v for e, v in self._c.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Q)):
            return LaurentPoly({e: v * other for e, v in self._c.items()})
        return laurent_mul(self, other)

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``q^k``."""
        return LaurentPoly({e + k: v for e, v in self._c.items()})

    def substitute_inverse(self) -> "LaurentPoly":
        """``q -> q^{-1}``."""
        return LaurentPoly({-e: v for e, v in self._c.items()})

    def to_json(self) -> Dict[str, str]:
        return {str(e): rational_str(v) for e, v in self.items()}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "LaurentPoly":
        return cls({int(e): Q(v) for e, v in data.items()})

    def __repr__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for e, v in self.items():
            coef = "" if v == 1 and e != 0 else ("-" if v == -1 and e != 0 else str(v))
            if e == 0:
                parts.append(str(v))
            elif e == 1:
                parts.append(f"{coef}q")
            else:
                parts.append(f"{coef}q^{e}")
        return " + ".join(parts)


def laurent_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Convolution of coefficient maps."""
    out: Dict[int, Q] = {}
    for e1, v1 in a._c.items():
        for e2, v2 in b._c.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + v1 * v2
    return LaurentPoly(out)


@dataclass(frozen=True)
class GradedSpace:
    """An ordered basis of labels, each carrying an integer degree."""

    basis: Tuple[Tuple[Hashable, int], ...]
    _index: Dict[Hashable, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        index = {}
        for i, (label, _) in enumerate(self.basis):
            if label in index:
                raise ValueError(f"duplicate basis label {label!r}")
            index[label] = i
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[Hashable, int]]) -> "GradedSpace":
        return cls(tuple((label, int(deg)) for label, deg in pairs))

    def __len__(self) -> int:
        return len(self.basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, label: Hashable) -> int:
        return self._index[label]

    def label(self, i: int) -> Hashable:
        return self.basis[i][0]

    def degree(self, i: int) -> int:
        return self.basis[i][1]

    def graded_dimension(self) -> LaurentPoly:
        c: Dict[int, int] = {}
        for _, d in self.basis:
            c[d] = c.get(d, 0) + 1
        return LaurentPoly(c)


Vector = Dict[int, Q]


class SparseMatrix:
    """Sparse exact matrix stored column by column.

    ``cols[j]`` maps row indices to nonzero entries of column ``j``.
    """

    __slots__ = ("domain", "codomain", "cols", "degree")

    def __init__(
        self,
        domain: GradedSpace,
        codomain: GradedSpace,
        cols: Optional[Mapping[int, Mapping[int, object]]] = None,
        degree: Optional[int] = None,
    ):
        self.domain = domain
        self.codomain = codomain
        clean: Dict[int, Dict[int, Q]] = {}
        for j, col in (cols or {}).items():
            if not 0 <= j < len(domain):
                raise IndexError(f"column {j} out of range")
            cc = {}
            for i, v in col.items():
                if not 0 <= i < len(codomain):
                    raise IndexError(f"row {i} out of range")
                v = frac(v)
                if v:
                    cc[i] = v
            if cc:
                clean[j] = cc
        self.cols = clean
        self.degree = degree
        if degree is not None:
            self.check_homogeneous(degree)

    @classmethod
    def from_entries(cls, domain, codomain, entries: Mapping[Tuple[int, int], object], degree=None):
        cols: Dict[int, Dict[int, object]] = {}
        for (i, j), v in entries.items():
            cols.setdefault(j, {})[i] = v
        return cls(domain, codomain, cols, degree)

    @classmethod
    def identity(cls, space: GradedSpace) -> "SparseMatrix":
        return cls(space, space, {i: {i: 1} for i in range(len(space))}, 0)

    @property
    def shape(self) -> Tuple[int, int]:
        return (len(self.codomain), len(self.domain))

    @property
    def entries(self) -> Dict[Tuple[int, int], Q]:
        return {(i, j): v for j, col in self.cols.items() for i, v in col.items()}

    def sorted_entries(self) -> List[Tuple[int, int, Q]]:
        return sorted((i, j, v) for (i, j), v in self.entries.items())

    def is_zero(self) -> bool:
        return not self.cols

    def check_homogeneous(self, d: int) -> bool:
        for j, col in self.cols.items():
            dj = self.domain.degree(j)
            for i in col:
                if self.codomain.degree(i) - dj != d:
                    raise ValueError(f"entry ({i},{j}) breaks homogeneity {d}")
        return True

    def apply(self, v: Mapping[int, Q]) -> Vector:
        out: Vector = {}
        for j, a in v.items():
            col = self.cols.get(j)
            if not col or not a:
                continue
            for i, b in col.items():
                out[i] = out.get(i, 0) + a * b
        return {i: x for i, x in out.items() if x}

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        """Composition ``self ∘ other``."""
        if other.codomain != self.domain:
            raise ValueError("dimension mismatch in matrix product")
        cols = {j: self.apply(col) for j, col in other.cols.items()}
        deg = None
        if self.degree is not None and other.degree is not None:
            deg = self.degree + other.degree
        return SparseMatrix(other.domain, self.codomain, cols, deg)

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        cols = {j: dict(c) for j, c in self.cols.items()}
        for j, c in other.cols.items():
            t = cols.setdefault(j, {})
            for i, v in c.items():
                t[i] = t.get(i, 0) + v
        deg = self.degree if self.degree == other.degree else None
        return SparseMatrix(self.domain, self.codomain, cols, deg)

    def __neg__(self) -> "SparseMatrix":
        return self.scale(-1)

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + (-other)

    def scale(self, c) -> "SparseMatrix":
        c = frac(c)
        return SparseMatrix(
            self.domain, self.codomain, {j: {i: v * c for i, v in col.items()} for j, col in self.cols.items()}, self.degree
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparseMatrix)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and self.cols == other.cols
        )

    def rows(self) -> Dict[int, Dict[int, Q]]:
        r: Dict[int, Dict[int, Q]] = {}
        for j, col in self.cols.items():
            for i, v in col.items():
                r.setdefault(i, {})[j] = v
        return r

    def to_dense(self) -> List[List[Q]]:
        rows, ncols = self.shape
        out = [[Q(0)] * ncols for _ in range(rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def to_json(self) -> dict:
        return {
            "domain": [[str(lbl), d] for lbl, d in self.domain.basis],
            "codomain": [[str(lbl), d] for lbl, d in self.codomain.basis],
            "degree": self.degree,
            "entries": [[i, j, rational_str(v)] for i, j, v in self.sorted_entries()],
        }

    def __repr__(self) -> str:
        return f"SparseMatrix({self.shape[0]}x{self.shape[1]}, nnz={len(self.entries)}, degree={self.degree})"


@dataclass
class GaussResult:
    rank: int
    kernel: List[Vector]
    image: List[Vector]
    pivots: List[Tuple[int, int]]


def _reduce_rows(rows: List[Dict[int, Q]]) -> Tuple[List[Dict[int, Q]], List[int]]:
    """Reduced row echelon form of sparse rows.

    Rows are processed in order; each row is cleared against existing pivots
    and its first nonzero column (in increasing order) becomes its pivot.
    This is the row-major "first nonzero entry" rule and is deterministic.
    """
    pivot_rows: Dict[int, Dict[int, Q]] = {}
    for row in rows:
        r = {c: v for c, v in row.items() if v}
        # pivot rows are kept fully reduced, so one pass clears every pivot column
        for c in [c for c in r if c in pivot_rows]:
            f = r.get(c)
            if not f:
                continue
            for cc, vv in pivot_rows[c].items():
                nv = r.get(cc, 0) - f * vv
                if nv:
                    r[cc] = nv
                else:
                    r.pop(cc, None)
        if not r:
            continue
        p = min(r)
        inv = 1 / r[p]
        r = {c: v * inv for c, v in r.items()}
        for q, prow in pivot_rows.items():
            f = prow.get(p)
            if f:
                for cc, vv in r.items():
                    nv = prow.get(cc, 0) - f * vv
                    if nv:
                        prow[cc] = nv
                    else:
                        prow.pop(cc, None)
        pivot_rows[p] = r
    pivots = sorted(pivot_rows)
    return [pivot_rows[p] for p in pivots], pivots


def gauss(m: SparseMatrix) -> GaussResult:
    """Exact row reduction: rank, kernel basis (in the domain) and image basis (columns)."""
    nrows, ncols = m.shape
    rows_map = m.rows()
    rows = [rows_map.get(i, {}) for i in range(nrows)]
    rref, pivots = _reduce_rows(rows)
    pivset = set(pivots)
    kernel: List[Vector] = []
    for free in range(ncols):
        if free in pivset:
            continue
        v: Vector = {free: Q(1)}
        for p, row in zip(pivots, rref):
            a = row.get(free)
            if a:
                v[p] = -a
        kernel.append(v)
    image = [dict(m.cols.get(p, {})) for p in pivots]
    pivot_pairs = []
    for p, row in zip(pivots, rref):
        pivot_pairs.append((len(pivot_pairs), p))
    return GaussResult(len(pivots), kernel, image, pivot_pairs)


def rank_of_rows(rows: Iterable[Mapping[Hashable, Q]]) -> int:
    """Rank of a family of sparse vectors with arbitrary hashable coordinates."""
    keys: Dict[Hashable, int] = {}
    int_rows = []
    for row in rows:
        r = {}
        for k, v in row.items():
            if v:
                if k not in keys:
                    keys[k] = len(keys)
                r[keys[k]] = frac(v)
        int_rows.append(r)
    return len(_reduce_rows(int_rows)[1])


class RowSpace:
    """Incrementally maintained echelon basis of a subspace of a sparse coordinate space.

    Coordinates may be any hashable labels; ``add`` returns whether the vector
    enlarged the span.
    """

    def __init__(self):
        self._pivots: Dict[Hashable, Dict[Hashable, Q]] = {}
        self._order: Dict[Hashable, int] = {}

    def _key(self, k: Hashable) -> int:
        if k not in self._order:
            self._order[k] = len(self._order)
        return self._order[k]

    def reduce(self, v: Mapping[Hashable, Q]) -> Dict[Hashable, Q]:
        r = {k: frac(x) for k, x in v.items() if x}
        for k in list(r):
            self._key(k)
        while True:
            hit = [k for k in r if k in self._pivots]
            if not hit:
                return r
            k = min(hit, key=self._order.__getitem__)
            f = r[k]
            for kk, vv in self._pivots[k].items():
                nv = r.get(kk, 0) - f * vv
                if nv:
                    r[kk] = nv
                else:
                    r.pop(kk, None)

    def contains(self, v: Mapping[Hashable, Q]) -> bool:
        return not self.reduce(v)

    def add(self, v: Mapping[Hashable, Q]) -> bool:
        r = self.reduce(v)
        if not r:
            return False
        for k in r:
            self._key(k)
        p = min(r, key=self._order.__getitem__)
        inv = 1 / r[p]
        self._pivots[p] = {k: x * inv for k, x in r.items()}
        return True

    @property
    def dim(self) -> int:
        return len(self._pivots)


def vec_add(a: Mapping, b: Mapping, scale=1) -> dict:
    out = dict(a)
    for k, v in b.items():
        nv = out.get(k, 0) + scale * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


def vec_scale(a: Mapping, c) -> dict:
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


def solve_linear(rows: Sequence[Mapping[Hashable, Q]], rhs: Sequence[Q]) -> Optional[Dict[Hashable, Q]]:
    """Solve ``sum_k row[k] * x_k = rhs`` for all rows; return one solution or None."""
    keys: Dict[Hashable, int] = {}
    for row in rows:
        for k in row:
            keys.setdefault(k, len(keys))
    rhs_col = len(keys)
    int_rows = []
    for row, b in zip(rows, rhs):
        ir = {keys[k]: frac(v) for k, v in row.items() if v}
        if b:
            ir[rhs_col] = frac(b)
        int_rows.append(ir)
    rref, pivots = _reduce_rows(int_rows)
    if rhs_col in pivots:
        return None
    inv_keys = {v: k for k, v in keys.items()}
    sol = {k: Q(0) for k in keys}
    for p, row in zip(pivots, rref):
        sol[inv_keys[p]] = row.get(rhs_col, Q(0))
    return sol


def iter_nonzero(d: Mapping) -> Iterator:
    return ((k, v) for k, v in d.items() if v)


def nullspace(rows: Iterable[Mapping[Hashable, Q]], unknowns: Sequence[Hashable]) -> List[Dict[Hashable, Q]]:
    """Basis of the solutions of ``sum_k row[k] * x_k = 0`` over the given unknowns."""
    index = {u: i for i, u in enumerate(unknowns)}
    int_rows = [{index[k]: frac(v) for k, v in row.items() if v} for row in rows]
    rref, pivots = _reduce_rows(int_rows)
    pivset = set(pivots)
    basis: List[Dict[Hashable, Q]] = []
    for free in range(len(unknowns)):
        if free in pivset:
            continue
        v = {unknowns[free]: Q(1)}
        for p, row in zip(pivots, rref):
            a = row.get(free)
            if a:
                v[unknowns[p]] = -a
        basis.append(v)
    return basis
