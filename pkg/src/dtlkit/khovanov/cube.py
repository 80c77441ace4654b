"""Khovanov homology from the cube of resolutions.

Conventions: every circle carries ``V = K[x]/(x^2)`` with ``1`` in quantum
degree ``+1`` and ``x`` in degree ``-1``.  Merging multiplies, splitting is
``Δ(1) = 1⊗x + x⊗1``, ``Δ(x) = x⊗x``, and the counit is ``ε(x) = 1``,
``ε(1) = 0``.  The 0-smoothing of ``X a b c d`` joins ``a`` with ``b`` and
``c`` with ``d``; the 1-smoothing joins ``a`` with ``d`` and ``b`` with
``c``.  The edge changing crossing ``i`` carries the sign ``(-1)^k`` where
``k`` counts 1-smoothings among crossings ``0..i-1``.  A state with ``r``
1-smoothings sits in homological degree ``r - n₋`` and is shifted by
``q^{r + n₊ - 2n₋}``.

Generators are pairs ``(state, xmask)``: bit ``j`` of ``xmask`` is set when
circle ``j`` of the state is labelled ``x``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

from ..algebra import GradedSpace, LaurentPoly, Q, SparseMatrix, _reduce_rows
from .pd import LinkDiagram

Generator = Tuple[int, int]


class SiteError(ValueError):
    """Raised when a cobordism site is not a crossing-free region of the diagram."""


@dataclass(frozen=True)
class Resolution:
    """Circles of one vertex of the cube.

    ``edge_circle`` maps each edge label to its circle; crossingless loops of
    the diagram come last.
    """

    n_circles: int
    edge_circle: Dict[int, int]


def resolve(d: LinkDiagram, state: int) -> Resolution:
    parent: Dict[int, int] = {e: e for e in d.edges}

    def find(e: int) -> int:
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for i, (a, b, c, dd) in enumerate(d.crossings):
        if state >> i & 1:
            union(a, dd)
            union(b, c)
        else:
            union(a, b)
            union(c, dd)
    roots = sorted({find(e) for e in parent})
    index = {r: k for k, r in enumerate(roots)}
    return Resolution(len(roots) + d.loops, {e: index[find(e)] for e in parent})


def _popcount(n: int) -> int:
    return bin(n).count("1")


@dataclass
class KhComplex:
    """Bigraded chain complex over the rationals.

    ``groups[h]`` lists the basis in homological degree ``h`` with quantum
    degrees; ``diff[h]`` is the differential ``groups[h] -> groups[h+1]``.
    """

    groups: Dict[int, GradedSpace]
    diff: Dict[int, SparseMatrix]
    diagram: Optional[LinkDiagram] = None

    @property
    def degrees(self) -> List[int]:
        return sorted(self.groups)

    def rank(self) -> int:
        return sum(len(g) for g in self.groups.values())

    def d_squared_is_zero(self) -> bool:
        for h, d1 in self.diff.items():
            d2 = self.diff.get(h + 1)
            if d2 is not None and not (d2 @ d1).is_zero():
                return False
        return True

    def preserves_quantum_degree(self) -> bool:
        return all(m.check_homogeneous(0) for m in self.diff.values())

    def homology(self) -> Dict[int, LaurentPoly]:
        """Bigraded Betti numbers ``{h: Σ dim H^{h,j} q^j}``."""
        out: Dict[int, LaurentPoly] = {}
        ranks: Dict[Tuple[int, int], int] = {}
        for h, m in self.diff.items():
            for j, r in _ranks_by_degree(m).items():
                ranks[(h, j)] = r
        for h, g in self.groups.items():
            coeffs: Dict[int, int] = {}
            for j, n in g.graded_dimension().items():
                dim = int(n) - ranks.get((h, j), 0) - ranks.get((h - 1, j), 0)
                if dim:
                    coeffs[j] = dim
            if coeffs:
                out[h] = LaurentPoly(coeffs)
        return out

    def euler_characteristic(self) -> LaurentPoly:
        total = LaurentPoly()
        for h, g in self.groups.items():
            total = total + g.graded_dimension() * ((-1) ** (h % 2))
        return total


def _ranks_by_degree(m: SparseMatrix) -> Dict[int, int]:
    rows: Dict[int, Dict[int, List]] = {}
    for j, col in m.cols.items():
        deg = m.domain.degree(j)
        block = rows.setdefault(deg, {})
        for i, v in col.items():
            block.setdefault(i, {})[j] = v
    return {deg: len(_reduce_rows(list(block.values()))[1]) for deg, block in rows.items()}


def homology_poincare(h: Mapping[int, LaurentPoly]) -> Dict[Tuple[int, int], int]:
    """Flatten ``{h: poly}`` into ``{(h, j): dim}``."""
    return {(t, j): int(c) for t, p in h.items() for j, c in p.items()}


# ---------------------------------------------------------------------------
# the cube


def _merge_split_image(src: Resolution, dst: Resolution, crossing: Tuple[int, int, int, int]):
    """How circles of ``src`` feed into ``dst`` across one crossing change.

    Returns ``(perm, kind, a, b, c)``: ``perm[i]`` is the circle of ``dst``
    containing circle ``i`` of ``src``.  For a merge, circles ``a`` and ``b``
    of ``src`` fuse into ``c``; for a split, circle ``a`` of ``src`` splits
    into ``b`` and ``c`` of ``dst``.
    """
    rep: Dict[int, int] = {}
    for e, k in src.edge_circle.items():
        rep.setdefault(k, e)
    loops_src = src.n_circles - len(rep)
    perm = []
    for k in range(src.n_circles - loops_src):
        perm.append(dst.edge_circle[rep[k]])
    base_dst = dst.n_circles - loops_src
    perm.extend(base_dst + t for t in range(loops_src))
    a, b, c = crossing[0], crossing[1], crossing[2]
    if dst.n_circles < src.n_circles:
        # the 0-smoothing arcs a-b and c-d lie on different circles that fuse
        x, y = src.edge_circle[a], src.edge_circle[c]
        return perm, "merge", x, y, perm[x]
    # the 1-smoothing separates the arc a-d from the arc b-c
    return perm, "split", src.edge_circle[a], dst.edge_circle[a], dst.edge_circle[b]


def _apply_perm(mask: int, perm: Sequence[int], skip: Tuple[int, ...] = ()) -> int:
    out = 0
    k = 0
    while mask:
        if mask & 1 and k not in skip:
            out |= 1 << perm[k]
        mask >>= 1
        k += 1
    return out


def merge_images(mask: int, perm, a: int, b: int, c: int) -> List[Tuple[int, int]]:
    base = _apply_perm(mask, perm, (a, b))
    xa, xb = mask >> a & 1, mask >> b & 1
    if xa and xb:
        return []
    if xa or xb:
        return [(base | 1 << c, 1)]
    return [(base, 1)]


def split_images(mask: int, perm, a: int, b: int, c: int) -> List[Tuple[int, int]]:
    base = _apply_perm(mask, perm, (a,))
    if mask >> a & 1:
        return [(base | 1 << b | 1 << c, 1)]
    return [(base | 1 << b, 1), (base | 1 << c, 1)]


def cube_complex(d: LinkDiagram) -> KhComplex:
    """The Khovanov complex of ``d`` with the global ``[-n₋]{n₊ - 2n₋}`` shift applied."""
    n = d.n_crossings
    npl, nmi = d.n_plus, d.n_minus
    res = [resolve(d, s) for s in range(1 << n)]
    labels: Dict[int, List[Tuple[Generator, int]]] = {}
    for s in range(1 << n):
        r = _popcount(s)
        k = res[s].n_circles
        for mask in range(1 << k):
            qdeg = k - 2 * _popcount(mask) + r + npl - 2 * nmi
            labels.setdefault(r - nmi, []).append(((s, mask), qdeg))
    groups = {h: GradedSpace(tuple(v)) for h, v in labels.items()}
    diff: Dict[int, SparseMatrix] = {}
    for h in sorted(groups):
        if h + 1 not in groups:
            continue
        src, dst = groups[h], groups[h + 1]
        cols: Dict[int, Dict[int, int]] = {}
        for s in {lab[0] for lab, _ in src.basis}:
            for i in range(n):
                if s >> i & 1:
                    continue
                t = s | 1 << i
                sign = -1 if _popcount(s & ((1 << i) - 1)) % 2 else 1
                perm, kind, a, b, c = _merge_split_image(res[s], res[t], d.crossings[i])
                images = merge_images if kind == "merge" else split_images
                for mask in range(1 << res[s].n_circles):
                    j = src.index((s, mask))
                    col = cols.setdefault(j, {})
                    for tmask, coef in images(mask, perm, a, b, c):
                        row = dst.index((t, tmask))
                        col[row] = col.get(row, 0) + sign * coef
        diff[h] = SparseMatrix(src, dst, cols)
    return KhComplex(groups, diff, d)


def khovanov_homology(d: LinkDiagram) -> Dict[int, LaurentPoly]:
    return cube_complex(d).homology()


# ---------------------------------------------------------------------------
# independent oracle: Kauffman bracket state sum in the variable A


def kauffman_bracket(d: LinkDiagram) -> Dict[int, int]:
    """``<D>`` as ``{exponent of A: coefficient}`` with ``<O> = 1``.

    Each crossing contributes ``A`` for its A-smoothing and ``A^{-1}`` for
    its B-smoothing, and each circle beyond the first contributes
    ``δ = -A^2 - A^{-2}``.
    """
    delta = {2: -1, -2: -1}
    total: Dict[int, int] = {}
    n = d.n_crossings
    for s in range(1 << n):
        k = _region_circles(d, s) + d.loops
        term = {n - 2 * _popcount(s): 1}
        for _ in range(k - 1):
            term = _poly_mul(term, delta)
        for e, c in term.items():
            total[e] = total.get(e, 0) + c
    return {e: c for e, c in total.items() if c}


def _region_circles(d: LinkDiagram, state: int) -> int:
    """Number of circles of a smoothing, computed by walking arcs between crossings.

    This traversal is written independently of :func:`resolve`: it follows
    each edge to its partner slot instead of using a union-find.
    """
    slots: Dict[int, List[Tuple[int, int]]] = {}
    for i, x in enumerate(d.crossings):
        for k, e in enumerate(x):
            slots.setdefault(e, []).append((i, k))
    partner_a = {0: 1, 1: 0, 2: 3, 3: 2}
    partner_b = {0: 3, 3: 0, 1: 2, 2: 1}
    seen = set()
    count = 0
    for e in slots:
        if e in seen:
            continue
        count += 1
        cur = e
        side = 0
        while cur not in seen:
            seen.add(cur)
            i, k = slots[cur][side]
            turn = partner_b if state >> i & 1 else partner_a
            k2 = turn[k]
            nxt = d.crossings[i][k2]
            # leave through the other occurrence of the next edge
            occ = slots[nxt]
            side = 1 if occ[0] == (i, k2) else 0
            cur = nxt
    return count if slots else 0


def _poly_mul(a: Dict[int, int], b: Dict[int, int]) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            out[ea + eb] = out.get(ea + eb, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def jones_from_bracket(d: LinkDiagram) -> LaurentPoly:
    """Unnormalised Jones polynomial ``(q + q^{-1}) · f(A)`` at ``A^{-2} = -q``.

    ``f = (-A^3)^{-w} <D>`` is the writhe-normalised bracket; this is the
    graded Euler characteristic that Khovanov homology categorifies.
    """
    w = d.writhe
    br = kauffman_bracket(d)
    norm = {e - 3 * w: c * (-1) ** (w % 2) for e, c in br.items()}
    out: Dict[int, Q] = {}
    for e, c in norm.items():
        if e % 2:
            raise ArithmeticError("odd power of A in the normalised bracket")
        m = -e // 2  # A^e = (A^{-2})^{-e/2} = (-q)^{-e/2}
        out[m] = out.get(m, 0) + c * (-1) ** (m % 2)
    poly = LaurentPoly(out)
    if d.n_components == 0:
        return LaurentPoly({0: 1})
    return poly * LaurentPoly({1: 1, -1: 1})


# ---------------------------------------------------------------------------
# elementary cobordisms between crossing-free modifications of a diagram


@dataclass
class ChainMap:
    """Degree-homogeneous map between two Khovanov complexes.

    ``degree`` is the quantum degree in the homological convention of this
    module (``x`` has degree ``-2`` relative to ``1``); ``dtl_degree`` is its
    negative, which matches the ``2·dots`` grading of dotted Temperley-Lieb
    diagrams.
    """

    source: KhComplex
    target: KhComplex
    maps: Dict[int, SparseMatrix]
    degree: int

    @property
    def dtl_degree(self) -> int:
        return -self.degree

    def commutes(self) -> bool:
        for h in self.source.groups:
            f0 = self.maps.get(h)
            f1 = self.maps.get(h + 1)
            ds = self.source.diff.get(h)
            dt = self.target.diff.get(h)
            left = None
            right = None
            if f0 is not None and dt is not None:
                left = dt @ f0
            if ds is not None and f1 is not None:
                right = f1 @ ds
            if left is None and right is None:
                continue
            if left is None:
                if not right.is_zero():
                    return False
            elif right is None:
                if not left.is_zero():
                    return False
            elif left != right:
                return False
        return True

    def is_homogeneous(self) -> bool:
        return all(m.check_homogeneous(self.degree) for m in self.maps.values())

    def then(self, other: "ChainMap") -> "ChainMap":
        """``other ∘ self``."""
        maps = {h: other.maps[h] @ m for h, m in self.maps.items() if h in other.maps}
        return ChainMap(self.source, other.target, maps, self.degree + other.degree)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        maps = dict(self.maps)
        for h, m in other.maps.items():
            maps[h] = maps[h] + m if h in maps else m
        return ChainMap(self.source, self.target, maps, self.degree)

    def scale(self, c) -> "ChainMap":
        return ChainMap(self.source, self.target, {h: m.scale(c) for h, m in self.maps.items()}, self.degree)

    def scalar(self) -> Q:
        """The value of a map between complexes of the empty diagram."""
        m = self.maps.get(0)
        if m is None or m.shape != (1, 1):
            raise ValueError("not a map between complexes of the empty diagram")
        return m.entries.get((0, 0), Q(0))


def _vertexwise(source: KhComplex, target: KhComplex, degree: int, images) -> ChainMap:
    """Assemble a chain map from per-generator images ``images(state, mask)``."""
    maps: Dict[int, SparseMatrix] = {}
    for h, g in source.groups.items():
        tg = target.groups.get(h)
        if tg is None:
            continue
        cols: Dict[int, Dict[int, int]] = {}
        for j, ((s, mask), _) in enumerate(g.basis):
            for (t, tmask), c in images(s, mask):
                row = tg.index((t, tmask))
                col = cols.setdefault(j, {})
                col[row] = col.get(row, 0) + c
        maps[h] = SparseMatrix(g, tg, cols)
    return ChainMap(source, target, maps, degree)


Site = Hashable  # an edge label, or ("loop", k) for the k-th crossingless loop


def _circle_of(d: LinkDiagram, res: Resolution, site: Site) -> int:
    if isinstance(site, tuple) and site and site[0] == "loop":
        k = site[1]
        if not 0 <= k < d.loops:
            raise SiteError(f"no loop {k}")
        return res.n_circles - d.loops + k
    if site not in res.edge_circle:
        raise SiteError(f"edge {site!r} is not in the diagram")
    return res.edge_circle[site]


def birth(d: LinkDiagram, position: Optional[int] = None) -> ChainMap:
    """Cup creating a new crossingless loop at index ``position`` (default: last)."""
    pos = d.loops if position is None else position
    if not 0 <= pos <= d.loops:
        raise SiteError("loop position out of range")
    d2 = LinkDiagram(d.crossings, d.signs, d.loops + 1, d.name)
    src, dst = cube_complex(d), cube_complex(d2)
    cache = {}

    def images(s, mask):
        k = cache.setdefault(s, resolve(d, s).n_circles)
        cut = k - d.loops + pos
        low = mask & ((1 << cut) - 1)
        high = mask >> cut
        return [((s, low | high << (cut + 1)), 1)]

    return _vertexwise(src, dst, 1, images)


def death(d: LinkDiagram, loop: int) -> ChainMap:
    """Cap removing the crossingless loop ``loop`` (the counit on its label)."""
    if not 0 <= loop < d.loops:
        raise SiteError(f"no loop {loop}")
    d2 = LinkDiagram(d.crossings, d.signs, d.loops - 1, d.name)
    src, dst = cube_complex(d), cube_complex(d2)
    cache = {}

    def images(s, mask):
        k = cache.setdefault(s, resolve(d, s).n_circles)
        cut = k - d.loops + loop
        if not mask >> cut & 1:
            return []
        low = mask & ((1 << cut) - 1)
        high = mask >> (cut + 1)
        return [((s, low | high << cut), 1)]

    return _vertexwise(src, dst, 1, images)


def dot(d: LinkDiagram, site: Site) -> ChainMap:
    """Multiplication by ``x`` on the circle through ``site``."""
    cx = cube_complex(d)
    cache = {}

    def images(s, mask):
        r = cache.setdefault(s, resolve(d, s))
        c = _circle_of(d, r, site)
        if mask >> c & 1:
            return []
        return [((s, mask | 1 << c), 1)]

    return _vertexwise(cx, cx, -2, images)


def saddle_diagram(d: LinkDiagram, e: Site, f: Site) -> Tuple[LinkDiagram, Dict[str, object]]:
    """The diagram obtained by a saddle joining the sites ``e`` and ``f``.

    Edge sites must be antiparallel neighbours: the saddle reconnects the
    start of ``e`` with the end of ``f`` and vice versa.  A loop site may be
    merged into an edge or another loop; a loop used twice is split in two.
    """
    loop_e = isinstance(e, tuple)
    loop_f = isinstance(f, tuple)
    if loop_e and loop_f:
        if e == f:
            return LinkDiagram(d.crossings, d.signs, d.loops + 1, d.name), {"kind": "split_loop", "loop": e[1]}
        return LinkDiagram(d.crossings, d.signs, d.loops - 1, d.name), {"kind": "merge_loops", "loops": (e[1], f[1])}
    if loop_e or loop_f:
        loop, edge = (e, f) if loop_e else (f, e)
        if edge not in d.edges:
            raise SiteError(f"edge {edge!r} is not in the diagram")
        return LinkDiagram(d.crossings, d.signs, d.loops - 1, d.name), {"kind": "absorb", "loop": loop[1], "edge": edge}
    if e == f or e not in d.edges or f not in d.edges:
        raise SiteError("a saddle needs two distinct edges of the diagram")
    def ends(edge):
        tail = head = None
        for i, x in enumerate(d.crossings):
            for k, t in enumerate(x):
                if t == edge:
                    if _slot_is_incoming(d, i, k):
                        head = (i, k)
                    else:
                        tail = (i, k)
        return tail, head

    te, he = ends(e)
    tf, hf = ends(f)
    g = max(d.edges) + 1
    h = g + 1
    xs = [list(x) for x in d.crossings]
    xs[te[0]][te[1]] = g
    xs[hf[0]][hf[1]] = g
    xs[tf[0]][tf[1]] = h
    xs[he[0]][he[1]] = h
    d2 = LinkDiagram(tuple(tuple(x) for x in xs), d.signs, d.loops, d.name)
    return d2, {"kind": "edges", "e": e, "f": f, "new": (g, h)}


def _slot_is_incoming(d: LinkDiagram, i: int, k: int) -> bool:
    a, b, c, dd = d.crossings[i]
    if k == 0:
        return True
    if k == 2:
        return False
    return (k == 3) == (d.signs[i] > 0)


def saddle(d: LinkDiagram, e: Site, f: Site) -> ChainMap:
    """Merge or split at a saddle joining ``e`` and ``f`` (degree ``-1``)."""
    d2, info = saddle_diagram(d, e, f)
    src, dst = cube_complex(d), cube_complex(d2)
    rs: Dict[int, Resolution] = {}
    rt: Dict[int, Resolution] = {}
    kind = info["kind"]

    def images(s, mask):
        r1 = rs.setdefault(s, resolve(d, s))
        r2 = rt.setdefault(s, resolve(d2, s))
        base1 = r1.n_circles - d.loops
        base2 = r2.n_circles - d2.loops
        if kind in ("split_loop", "merge_loops", "absorb"):
            # crossing circles are untouched; only the loop block changes
            low = mask & ((1 << base1) - 1)
            loops = [mask >> (base1 + t) & 1 for t in range(d.loops)]
            if kind == "split_loop":
                k = info["loop"]
                if loops[k]:
                    new = [loops[:k] + [1, 1] + loops[k + 1:]]
                else:
                    new = [loops[:k] + [1, 0] + loops[k + 1:], loops[:k] + [0, 1] + loops[k + 1:]]
                return [((s, low | _bits(v) << base2), 1) for v in new]
            if kind == "merge_loops":
                k, l = sorted(info["loops"])
                if loops[k] and loops[l]:
                    return []
                merged = loops[k] | loops[l]
                v = loops[:k] + [merged] + loops[k + 1:l] + loops[l + 1:]
                return [((s, low | _bits(v) << base2), 1)]
            k = info["loop"]
            c = r1.edge_circle[info["edge"]]
            if loops[k] and mask >> c & 1:
                return []
            v = loops[:k] + loops[k + 1:]
            low2 = low | (loops[k] << c)
            return [((s, low2 | _bits(v) << base2), 1)]
        g, h = info["new"]
        e_, f_ = info["e"], info["f"]
        ce, cf = r1.edge_circle[e_], r1.edge_circle[f_]
        # circles of d not through e or f persist; find them in d2 via a common edge
        rep = {}
        for edge, k in r1.edge_circle.items():
            if edge not in (e_, f_):
                rep.setdefault(k, edge)
        perm = {k: r2.edge_circle[edge] for k, edge in rep.items()}
        loops_part = mask >> base1
        out_low = 0
        for k in range(base1):
            if k in (ce, cf):
                continue
            if mask >> k & 1:
                out_low |= 1 << perm[k]
        cg, ch = r2.edge_circle[g], r2.edge_circle[h]
        shifted = loops_part << base2
        if ce != cf:
            if cg != ch:
                raise SiteError("saddle neither merges nor splits")
            xe, xf = mask >> ce & 1, mask >> cf & 1
            if xe and xf:
                return []
            return [((s, out_low | (xe | xf) << cg | shifted), 1)]
        if cg == ch:
            raise SiteError("saddle neither merges nor splits")
        if mask >> ce & 1:
            return [((s, out_low | 1 << cg | 1 << ch | shifted), 1)]
        return [((s, out_low | 1 << cg | shifted), 1), ((s, out_low | 1 << ch | shifted), 1)]

    return _vertexwise(src, dst, -1, images)


def _bits(v: Sequence[int]) -> int:
    out = 0
    for k, b in enumerate(v):
        out |= b << k
    return out


def identity_map(d: LinkDiagram) -> ChainMap:
    cx = cube_complex(d)
    return ChainMap(cx, cx, {h: SparseMatrix.identity(g) for h, g in cx.groups.items()}, 0)


def elementary_cobordism_map(kind: str, d: LinkDiagram, *site) -> ChainMap:
    """Dispatch ``birth``/``death``/``dot``/``saddle`` by name."""
    table = {"birth": birth, "death": death, "dot": dot, "saddle": saddle}
    if kind not in table:
        raise ValueError(f"unknown cobordism {kind!r}; expected one of {sorted(table)}")
    return table[kind](d, *site)
