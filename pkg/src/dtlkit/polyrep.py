"""The polynomial representation of dotted Temperley-Lieb diagrams.

``c^n`` acts on square-free polynomials in ``x_1..x_n``; a dot multiplies by
the variable of its strand, a cap sends ``x_a, x_b -> 1`` and ``1, x_a x_b -> 0``,
and a cup inserts ``x_a + x_b``.  Monomials are bitmasks (bit ``i-1`` for
``x_i``).  The representation is faithful, which makes it the reference
against which all diagrammatic identities in this package are checked.

Two independent evaluations are provided: :func:`pol` reads a normal-form
diagram directly, while :func:`generator_matrix` / :func:`pol_of_word` build
matrices for single cups, caps and dots and multiply them.

The second half of the module evaluates Jones-Wenzl projectors on large
numbers of strands without expanding them: the projector ``JW_n`` sends a
monomial in the signed variables ``x~_i = (-1)^(i-1) x_i`` to a vector that
depends only on its size, so vectors in the image are tracked as
``b_k^(n)`` symbols (see :func:`apply_jw`).
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .algebra import Q, GradedSpace, SparseMatrix, LaurentPoly, frac
from .dtl import Arcs, DTLMorphism, Layer, _unbend, basis

Poly = Dict[int, Q]  # bitmask -> coefficient


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_indices(mask: int) -> Tuple[int, ...]:
    """1-based indices of the variables in a monomial."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def indices_mask(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << (i - 1)
    return m


def monomial_str(mask: int) -> str:
    idx = mask_indices(mask)
    return "*".join(f"x{i}" for i in idx) if idx else "1"


@lru_cache(maxsize=None)
def monomial_order(n: int) -> Tuple[int, ...]:
    """Monomials of ``Pol(c^n)`` ordered by size, then lexicographically on sorted indices."""
    out = []
    for k in range(n + 1):
        for c in combinations(range(1, n + 1), k):
            out.append(indices_mask(c))
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_space(n: int) -> GradedSpace:
    return GradedSpace.from_pairs((monomial_str(m), 2 * popcount(m) - n) for m in monomial_order(n))


@lru_cache(maxsize=None)
def _monomial_index(n: int) -> Dict[int, int]:
    return {m: i for i, m in enumerate(monomial_order(n))}


def sign_of(mask: int) -> int:
    """``prod_{i in S} (-1)^(i-1)``: the sign relating ``x_S`` and ``x~_S``."""
    # bits at odd 0-based positions are the even 1-based indices
    return -1 if popcount(mask & 0xAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAA) % 2 else 1


# ---------------------------------------------------------------------------
# direct evaluation of a normal-form diagram


@lru_cache(maxsize=200_000)
def _diagram_action(arcs: Arcs, m: int, n: int, src: int) -> Tuple[Tuple[int, int], ...]:
    """Image of the monomial ``src`` under one diagram, as (mask, coefficient) pairs."""
    out_mask = 0
    cup_factors: List[Tuple[int, int, int]] = []
    for a, b, d in arcs:
        sa, ia = _unbend(a, m, n)
        sb, ib = _unbend(b, m, n)
        if sa == "B" and sb == "B":
            e = (src >> ia & 1) + (src >> ib & 1) + d
            if e != 1:
                return ()
        elif sa == "T" and sb == "T":
            cup_factors.append((ia, ib, d))
        else:
            bi, tj = (ia, ib) if sa == "B" else (ib, ia)
            e = (src >> bi & 1) + d
            if e >= 2:
                return ()
            if e:
                out_mask |= 1 << tj
    terms = {out_mask: 1}
    for i, j, d in cup_factors:
        if d:
            terms = {mk | (1 << i) | (1 << j): c for mk, c in terms.items()}
        else:
            new: Dict[int, int] = {}
            for mk, c in terms.items():
                new[mk | (1 << i)] = new.get(mk | (1 << i), 0) + c
                new[mk | (1 << j)] = new.get(mk | (1 << j), 0) + c
            terms = new
    return tuple(sorted(terms.items()))


def pol_apply(f: DTLMorphism, poly: Mapping[int, Q]) -> Poly:
    out: Poly = {}
    for src, a in poly.items():
        if not a:
            continue
        for arcs, c in f.terms.items():
            for mk, v in _diagram_action(arcs, f.m, f.n, src):
                out[mk] = out.get(mk, 0) + a * c * v
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=200_000)
def _local_action(f: DTLMorphism, mid: int) -> Tuple[Tuple[int, Q], ...]:
    return tuple(pol_apply(f, {mid: Q(1)}).items())


def pol_apply_at(f: DTLMorphism, poly: Mapping[int, Q], offset: int) -> Poly:
    """Apply ``id_offset ⊗ f ⊗ id`` without forming the tensor product.

    Bits below ``offset`` pass through, the next ``f.m`` bits are acted on,
    and the remaining bits are moved up by ``f.n - f.m``.
    """
    low_mask = (1 << offset) - 1
    mid_mask = (1 << f.m) - 1
    out: Poly = {}
    for mk, c in poly.items():
        if not c:
            continue
        mid = (mk >> offset) & mid_mask
        low = mk & low_mask
        high = mk >> (offset + f.m)
        for tm, v in _local_action(f, mid):
            key = low | (tm << offset) | (high << (offset + f.n))
            out[key] = out.get(key, 0) + c * v
    return {k: v for k, v in out.items() if v}


def pol_central_z(poly: Mapping[int, Q], n: int) -> Poly:
    """Multiplication by ``sum_i (-1)^(i-1) x_i`` on ``Pol(c^n)``; this is how ``z`` acts."""
    out: Poly = {}
    for mk, c in poly.items():
        for i in range(n):
            if not mk >> i & 1:
                key = mk | (1 << i)
                out[key] = out.get(key, 0) + (c if i % 2 == 0 else -c)
    return {k: v for k, v in out.items() if v}


def pol(f: DTLMorphism) -> SparseMatrix:
    """Matrix of ``f`` between monomial spaces (columns = source monomials)."""
    src_order = monomial_order(f.m)
    tgt_index = _monomial_index(f.n)
    cols: Dict[int, Dict[int, Q]] = {}
    for j, mk in enumerate(src_order):
        img = pol_apply(f, {mk: Q(1)})
        if img:
            cols[j] = {tgt_index[k]: v for k, v in img.items()}
    degs = f.degrees()
    deg = degs[0] if len(degs) == 1 else None
    return SparseMatrix(monomial_space(f.m), monomial_space(f.n), cols, deg)


# ---------------------------------------------------------------------------
# generator matrices (the independent route)


@lru_cache(maxsize=None)
def generator_matrix(kind: str, n: int, i: int) -> SparseMatrix:
    """Matrix of a single cup, cap or dot at 1-based position ``i`` on ``c^n``.

    Built from the local two-strand rules and the identity on other strands.
    """
    if kind == "dot":
        tgt_n = n
    elif kind == "cap":
        tgt_n = n - 2
    elif kind == "cup":
        tgt_n = n + 2
    else:
        raise ValueError(kind)
    src_order = monomial_order(n)
    tgt_index = _monomial_index(tgt_n)
    cols: Dict[int, Dict[int, int]] = {}
    p = i - 1
    for j, mk in enumerate(src_order):
        if kind == "dot":
            if mk >> p & 1:
                continue
            cols[j] = {tgt_index[mk | 1 << p]: 1}
        elif kind == "cap":
            pair = (mk >> p & 1) + (mk >> (p + 1) & 1)
            if pair != 1:
                continue
            low = mk & ((1 << p) - 1)
            high = mk >> (p + 2)
            cols[j] = {tgt_index[low | high << p]: 1}
        else:
            low = mk & ((1 << p) - 1)
            high = mk >> p
            base = low | high << (p + 2)
            cols[j] = {tgt_index[base | 1 << p]: 1, tgt_index[base | 1 << (p + 1)]: 1}
    deg = 2 if kind == "dot" else 0
    return SparseMatrix(monomial_space(n), monomial_space(tgt_n), cols, deg)


def pol_of_word(m: int, word: Sequence[Layer]) -> SparseMatrix:
    """Product of generator matrices for a bottom-to-top word of layers."""
    mat = SparseMatrix.identity(monomial_space(m))
    n = m
    for kind, i in word:
        g = generator_matrix(kind, n, i)
        mat = g @ mat
        n = len(g.codomain).bit_length() - 1
    return mat


# ---------------------------------------------------------------------------
# pairing basis


def dual_monomial(arcs: Arcs) -> int:
    """Undotted caps ``(a < b)`` contribute ``x_a``; dotted caps contribute nothing."""
    m = 0
    for a, b, d in arcs:
        if not d:
            m |= 1 << a
    return m


def greedy_diagram(mask: int, k: int) -> Arcs:
    """Rebuild the basis cap diagram on ``k`` points from its dual monomial."""
    points = list(range(k))
    chosen = set(mask_indices(mask))  # 1-based
    arcs = []
    while chosen:
        j = max(chosen) - 1
        pos = points.index(j)
        if pos + 1 >= len(points):
            raise ValueError("monomial is not a dual monomial")
        j2 = points[pos + 1]
        arcs.append((j, j2, 0))
        del points[pos:pos + 2]
        chosen.discard(j + 1)
        if any(c - 1 not in points for c in chosen):
            raise ValueError("monomial is not a dual monomial")
    if len(points) % 2:
        raise ValueError("odd number of leftover points")
    for t in range(0, len(points), 2):
        arcs.append((points[t], points[t + 1], 1))
    return tuple(sorted(arcs))


def _pairing_key(mask: int) -> Tuple[int, Tuple[int, ...]]:
    # decreasing in the order "degree first, then lexicographic with x1 > x2 > ...":
    # higher degree first, and within a degree x1... before x2...
    return (-popcount(mask), mask_indices(mask))


def pairing_basis(k: int) -> List[Tuple[Arcs, int]]:
    """Basis of ``Hom(c^k, c^0)`` with dual monomials, sorted by the comparison order."""
    if k % 2:
        return []
    out = [(arcs, dual_monomial(arcs)) for arcs in basis(k, 0)]
    out.sort(key=lambda t: _pairing_key(t[1]))
    return out


def pairing_matrix(k: int) -> SparseMatrix:
    """Entries ``d_i(delta*_j)`` for the pairing basis in its comparison order."""
    pb = pairing_basis(k)
    space = GradedSpace.from_pairs((monomial_str(mk), popcount(mk)) for _, mk in pb)
    cols: Dict[int, Dict[int, Q]] = {}
    for j, (_, mk) in enumerate(pb):
        col = {}
        for i, (arcs, _) in enumerate(pb):
            img = _diagram_action(arcs, k, 0, mk)
            v = sum(c for _, c in img)
            if v:
                col[i] = Q(v)
        cols[j] = col
    return SparseMatrix(space, space, cols)


def is_unitriangular(mat: SparseMatrix) -> bool:
    """Ones on the diagonal and zeros below it."""
    n = mat.shape[0]
    if mat.shape[1] != n:
        return False
    for j, col in mat.cols.items():
        for i, v in col.items():
            if i > j or (i == j and v != 1):
                return False
    return all(mat.cols.get(i, {}).get(i) == 1 for i in range(n))


def pol_is_injective(m: int, n: int) -> bool:
    """Certify faithfulness on ``Hom(c^m, c^n)`` via the unitriangular pairing matrix."""
    if (m + n) % 2:
        return True
    k = m + n
    if not is_unitriangular(pairing_matrix(k)):
        return False
    return len(pairing_basis(k)) == len(basis(m, n))


# ---------------------------------------------------------------------------
# Jones-Wenzl projectors in the polynomial representation


def jw_image_vector(n: int, k: int) -> Poly:
    """``b_k^(n) = C(n,k)^-1 * sum_{|T|=k} x~_T``."""
    c = Q(1, comb(n, k))
    out = {}
    for t in combinations(range(n), k):
        mk = 0
        for i in t:
            mk |= 1 << i
        out[mk] = c * sign_of(mk)
    return out


@lru_cache(maxsize=None)
def pol_jw_closed(n: int) -> SparseMatrix:
    """Closed form of Pol(JW_n): ``x_S -> sign(S) b_|S|``."""
    src_order = monomial_order(n)
    idx = _monomial_index(n)
    vecs = {k: jw_image_vector(n, k) for k in range(n + 1)}
    cols = {}
    for j, mk in enumerate(src_order):
        s = sign_of(mk)
        cols[j] = {idx[t]: s * v for t, v in vecs[popcount(mk)].items()}
    return SparseMatrix(monomial_space(n), monomial_space(n), cols, 0)


def signed_permutation_action(n: int, i: int) -> SparseMatrix:
    """Pol of the transposition ``s_i``: swap the signed variables ``x~_i`` and ``x~_{i+1}``."""
    idx = _monomial_index(n)
    cols = {}
    p = i - 1
    for j, mk in enumerate(monomial_order(n)):
        a, b = mk >> p & 1, mk >> (p + 1) & 1
        if a == b:
            cols[j] = {j: 1}
        else:
            # x~_i -> x~_{i+1}: x_i = x~_i (up to sign) maps to -x_{i+1} relative sign
            new = mk ^ (3 << p)
            cols[j] = {idx[new]: -1}
    return SparseMatrix(monomial_space(n), monomial_space(n), cols, 0)


def kron_identity_right(mat: SparseMatrix, n_src: int, n_tgt: int, extra: int = 1) -> SparseMatrix:
    """``mat ⊗ id_{c^extra}`` on monomial spaces."""
    src_idx = monomial_order(n_src + extra)
    tgt_index = _monomial_index(n_tgt + extra)
    small_src = _monomial_index(n_src)
    small_tgt = monomial_order(n_tgt)
    cols = {}
    low_mask = (1 << n_src) - 1
    for j, mk in enumerate(src_idx):
        low, high = mk & low_mask, mk >> n_src
        col = mat.cols.get(small_src[low], {})
        if col:
            cols[j] = {tgt_index[small_tgt[i] | high << n_tgt]: v for i, v in col.items()}
    return SparseMatrix(monomial_space(n_src + extra), monomial_space(n_tgt + extra), cols, mat.degree)


@lru_cache(maxsize=None)
def pol_jw_coset(n: int) -> SparseMatrix:
    """Pol(JW_n) from ``JW_n = (JW_{n-1} ⊗ 1) · (1/n) sum_j s_{n-1} ... s_j``.

    Uses only the signed-permutation action of transpositions, never the
    closed form.
    """
    if n <= 1:
        return SparseMatrix.identity(monomial_space(n))
    prev = kron_identity_right(pol_jw_coset(n - 1), n - 1, n - 1)
    space = monomial_space(n)
    word = SparseMatrix.identity(space)
    terms = [word]
    for j in range(n - 1, 0, -1):
        word = word @ signed_permutation_action(n, j)  # s_{n-1} ... s_j
        terms.append(word)
    total = terms[0]
    for t in terms[1:]:
        total = total + t
    total = total.scale(Q(1, n))
    return prev @ total


def graded_rank(mat: SparseMatrix) -> LaurentPoly:
    """Graded dimension of the image of a homogeneous degree-0 endomorphism-like matrix."""
    from .algebra import rank_of_rows

    by_deg: Dict[int, List[Dict[int, Q]]] = {}
    for j, col in mat.cols.items():
        if not col:
            continue
        d = mat.codomain.degree(next(iter(col)))
        by_deg.setdefault(d, []).append(col)
    return LaurentPoly({d: rank_of_rows(cols) for d, cols in by_deg.items()})


# ---------------------------------------------------------------------------
# symmetric-block vectors
#
# A key is a tuple of segments.  ("B", a, k) stands for b_k^(a), a vector in
# the image of JW_a on a consecutive block of a strands; ("F", e) is a single
# free strand carrying x^e.  Extra data (e.g. a blue-line exponent) can be
# carried by callers in a separate key component.

Segment = Tuple
SymKey = Tuple[Segment, ...]


def seg_width(seg: Segment) -> int:
    return seg[1] if seg[0] == "B" else 1


def key_width(key: SymKey) -> int:
    return sum(seg_width(s) for s in key)


def free_key(mask: int, n: int) -> SymKey:
    return tuple(("F", mask >> i & 1) for i in range(n))


def symvec_from_poly(poly: Mapping[int, Q], n: int) -> Dict[SymKey, Q]:
    return {free_key(mk, n): frac(v) for mk, v in poly.items() if v}


def merge_into_block(key: SymKey, start: int, stop: int) -> Tuple[SymKey, int]:
    """Project segments ``start:stop`` with one JW projector.

    Returns the new key and the sign relating the representative monomial to
    the new block's signed variables.
    """
    sign = 1
    off = 0
    total_k = 0
    for seg in key[start:stop]:
        if seg[0] == "B":
            _, a, k = seg
            # local x~ monomial on the first k strands of the sub-block, re-expressed
            # in the merged block's signed variables
            if (off * k) % 2:
                sign = -sign
            total_k += k
            off += a
        else:
            if seg[1]:
                if off % 2:
                    sign = -sign
                total_k += 1
            off += 1
    return key[:start] + (("B", off, total_k),) + key[stop:], sign


def apply_jw(vec: Mapping[SymKey, Q], start: int, stop: int) -> Dict[SymKey, Q]:
    out: Dict[SymKey, Q] = {}
    for key, c in vec.items():
        nk, s = merge_into_block(key, start, stop)
        out[nk] = out.get(nk, 0) + s * c
    return {k: v for k, v in out.items() if v}


def expand_block(vec: Mapping[SymKey, Q], seg_index: int) -> Dict[SymKey, Q]:
    """Replace a ``b_k^(a)`` segment by its explicit expansion into free strands."""
    out: Dict[SymKey, Q] = {}
    for key, c in vec.items():
        seg = key[seg_index]
        if seg[0] != "B":
            out[key] = out.get(key, 0) + c
            continue
        _, a, k = seg
        for mk, v in jw_image_vector(a, k).items():
            nk = key[:seg_index] + free_key(mk, a) + key[seg_index + 1:]
            out[nk] = out.get(nk, 0) + c * v
    return {k: v for k, v in out.items() if v}


def block_z(vec: Mapping[SymKey, Q], seg_index: int, power: int = 1) -> Dict[SymKey, Q]:
    """Act by ``z^power`` on a block: ``z b_k^(a) = (a - k) b_{k+1}^(a)``."""
    out: Dict[SymKey, Q] = {}
    for key, c in vec.items():
        _, a, k = key[seg_index]
        coef = Q(c)
        for t in range(power):
            coef *= a - k - t
        if not coef:
            continue
        nk = key[:seg_index] + (("B", a, k + power),) + key[seg_index + 1:]
        out[nk] = out.get(nk, 0) + coef
    return {k: v for k, v in out.items() if v}


def apply_dtl_free(vec: Mapping[SymKey, Q], f: DTLMorphism, start: int) -> Dict[SymKey, Q]:
    """Apply ``f: c^p -> c^r`` to the free segments ``start .. start+p-1``."""
    p = f.m
    out: Dict[SymKey, Q] = {}
    for key, c in vec.items():
        segs = key[start:start + p]
        if any(s[0] != "F" for s in segs):
            raise ValueError("dTL morphism applied across a symmetric block")
        mk = 0
        for i, s in enumerate(segs):
            if s[1]:
                mk |= 1 << i
        img = pol_apply(f, {mk: Q(1)})
        for tm, v in img.items():
            nk = key[:start] + free_key(tm, f.n) + key[start + p:]
            out[nk] = out.get(nk, 0) + c * v
    return {k: v for k, v in out.items() if v}


def to_free(vec: Mapping[SymKey, Q]) -> Dict[SymKey, Q]:
    """Expand every block, giving coordinates in the plain monomial basis."""
    cur = dict(vec)
    while True:
        pos = None
        for key in cur:
            for i, s in enumerate(key):
                if s[0] == "B":
                    pos = i
                    break
            if pos is not None:
                break
        if pos is None:
            return cur
        # expand that block index for all keys having a block there
        nxt: Dict[SymKey, Q] = {}
        for key, c in cur.items():
            if key[pos][0] == "B":
                for k2, v2 in expand_block({key: c}, pos).items():
                    nxt[k2] = nxt.get(k2, 0) + v2
            else:
                nxt[key] = nxt.get(key, 0) + c
        cur = {k: v for k, v in nxt.items() if v}


def free_key_to_mask(key: SymKey) -> int:
    mk = 0
    for i, s in enumerate(key):
        if s[1]:
            mk |= 1 << i
    return mk
