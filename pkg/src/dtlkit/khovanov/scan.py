"""Tangle scanning: Khovanov complexes built one crossing at a time.

Objects are crossingless matchings of the current boundary points (edge
labels that so far occur once) with a quantum shift.  A morphism ``A -> B``
between matchings of the same boundary is stored in disk normal form: every
circle of ``A ∪ B̄`` bounds a disk that is dotted or not, and the morphism is
a linear combination of dottings, ``{frozenset(dotted circles): coefficient}``.
Neck cutting makes this a basis of the Bar-Natan morphism space for the
Frobenius algebra ``K[x]/(x^2)``, so composing and gluing reduce to counting
Euler characteristics of the glued surface.

After each crossing is added, closed loops are removed by delooping and every
degree-zero isomorphism in the differential is cancelled by Gaussian
elimination.  At the end the boundary is empty and what remains is a small
complex of shifted copies of the empty diagram.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from ..algebra import LaurentPoly, Q, _reduce_rows, frac
from .pd import LinkDiagram

Point = int
Matching = FrozenSet[Tuple[Point, Point]]
Circle = FrozenSet[Point]
Morphism = Dict[FrozenSet[Circle], Q]


def matching(pairs: Iterable[Tuple[Point, Point]]) -> Matching:
    return frozenset(tuple(sorted(p)) for p in pairs)


def circles(a: Matching, b: Matching) -> List[Circle]:
    """Circles of ``A ∪ B̄`` as sets of boundary points."""
    nbr_a = {}
    nbr_b = {}
    for p, q in a:
        nbr_a[p], nbr_a[q] = q, p
    for p, q in b:
        nbr_b[p], nbr_b[q] = q, p
    seen = set()
    out = []
    for start in sorted(nbr_a):
        if start in seen:
            continue
        circ = []
        p = start
        while p not in seen:
            seen.add(p)
            circ.append(p)
            q = nbr_a[p]
            seen.add(q)
            circ.append(q)
            p = nbr_b[q]
        out.append(frozenset(circ))
    return out


def identity_morphism() -> Morphism:
    return {frozenset(): Q(1)}


def _add_into(acc: Morphism, m: Mapping[FrozenSet[Circle], Q], scale=1) -> None:
    for k, v in m.items():
        nv = acc.get(k, 0) + scale * v
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)


def morphism_degree(a: Matching, b: Matching, m: Morphism, shift_a: int, shift_b: int) -> Optional[int]:
    """Quantum degree of a homogeneous morphism ``A{shift_a} -> B{shift_b}``.

    A dotting of the disks has degree ``#circles - #points/2 - 2·#dots``.
    """
    degs = {len(circles(a, b)) - len(a) - 2 * len(k) + shift_b - shift_a for k in m}
    if len(degs) > 1:
        raise ArithmeticError("inhomogeneous morphism")
    return degs.pop() if degs else None


# ---------------------------------------------------------------------------
# evaluating glued surfaces


def evaluate(dots: Sequence[int], glues: Sequence[Tuple[int, int, int]], finals: Sequence[Tuple[Circle, int]]) -> Morphism:
    """Reduce a union of disks glued together to disk normal form.

    ``dots[i]`` is the number of dots on disk ``i``; ``glues`` lists
    ``(i, j, w)`` where ``w = 1`` glues along an interval and ``w = 0`` along
    a whole circle; ``finals`` lists each boundary circle of the result with
    a disk it lies on.  A connected piece with Euler characteristic ``χ``,
    ``b`` boundary circles, genus ``g`` and ``d`` dots reduces, by neck
    cutting, to: zero if ``g + d ≥ 2``; ``2^g`` times all boundary disks
    dotted if ``g + d = 1``; the sum over ``i`` of all boundary disks dotted
    except the ``i``-th if ``g = d = 0``.
    """
    parent = list(range(len(dots)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j, _ in glues:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
    comp: Dict[int, List] = {}
    for i, d in enumerate(dots):
        r = find(i)
        c = comp.setdefault(r, [0, 0, 0, []])
        c[0] += 1
        c[2] += d
    for i, j, w in glues:
        comp[find(i)][1] += w
    for circ, i in finals:
        comp[find(i)][3].append(circ)
    result: List[Tuple[FrozenSet[Circle], Q]] = [(frozenset(), Q(1))]
    for ndisk, nglue, ndots, bnd in comp.values():
        chi = ndisk - nglue
        b = len(bnd)
        twice_g = 2 - b - chi
        if twice_g < 0 or twice_g % 2:
            raise ArithmeticError(f"impossible surface: chi={chi}, boundary={b}")
        g = twice_g // 2
        e = g + ndots
        if e >= 2:
            return {}
        if b == 0:
            if e == 0:
                return {}
            result = [(k, c * 2**g) for k, c in result]
            continue
        if e == 1:
            full = frozenset(bnd)
            result = [(k | full, c * 2**g) for k, c in result]
        else:
            options = [frozenset(bnd[:i] + bnd[i + 1:]) for i in range(b)]
            result = [(k | o, c) for k, c in result for o in options]
    out: Morphism = {}
    for k, c in result:
        out[k] = out.get(k, 0) + c
    return {k: v for k, v in out.items() if v}


def compose(g: Morphism, f: Morphism, a: Matching, b: Matching, c: Matching) -> Morphism:
    """``g ∘ f`` for ``f: A -> B`` and ``g: B -> C`` on the same boundary."""
    if not f or not g:
        return {}
    fc = circles(a, b)
    gc = circles(b, c)
    fin = circles(a, c)
    where_f = {p: i for i, circ in enumerate(fc) for p in circ}
    where_g = {p: len(fc) + i for i, circ in enumerate(gc) for p in circ}
    glues = [(where_f[p], where_g[p], 1) for p, q in b]
    finals = [(circ, where_f[min(circ)]) for circ in fin]
    out: Morphism = {}
    for kf, cf in f.items():
        for kg, cg in g.items():
            dots = [1 if circ in kf else 0 for circ in fc] + [1 if circ in kg else 0 for circ in gc]
            _add_into(out, evaluate(dots, glues, finals), cf * cg)
    return out


# ---------------------------------------------------------------------------
# gluing a local piece onto a boundary


@dataclass(frozen=True)
class Piece:
    """A crossingless local picture on labelled slots together with a cobordism.

    ``slots`` are the edge labels of the piece in order (a label may repeat,
    in which case the two slots are joined to each other); ``source`` and
    ``target`` are matchings of slot indices and ``morphism`` is in disk
    normal form over circles of slot indices.
    """

    slots: Tuple[Point, ...]
    source: Matching
    target: Matching
    morphism: Morphism


def piece_identity(slots: Sequence[Point], m: Matching) -> Piece:
    return Piece(tuple(slots), m, m, identity_morphism())


def piece_saddle(slots: Sequence[Point], m0: Matching, m1: Matching) -> Piece:
    """The saddle between two matchings of four slots (a single undotted disk)."""
    return Piece(tuple(slots), m0, m1, identity_morphism())


def piece_dot(slots: Sequence[Point], m: Matching, slot: int) -> Piece:
    circ = next(c for c in circles(m, m) if slot in c)
    return Piece(tuple(slots), m, m, {frozenset([circ]): Q(1)})


class _Glued:
    """Result of attaching a piece (with matching ``sigma``) to a boundary matching."""

    __slots__ = ("matching", "loops", "node_loop")

    def __init__(self, matching, loops, node_loop):
        self.matching = matching
        self.loops = loops  # number of closed loops
        self.node_loop = node_loop  # node -> loop index, for nodes on loops


def _nodes(boundary: Sequence[Point], piece_slots: Sequence[Point]):
    """Identify old boundary nodes with piece slots sharing a label."""
    old = [("o", p) for p in boundary]
    new = [("s", k) for k in range(len(piece_slots))]
    label = {("o", p): p for p in boundary}
    label.update({("s", k): e for k, e in enumerate(piece_slots)})
    by_label: Dict[Point, List] = {}
    for n in old + new:
        by_label.setdefault(label[n], []).append(n)
    ident = []
    free = {}
    for e, ns in by_label.items():
        if len(ns) == 2:
            ident.append((ns[0], ns[1]))
        elif len(ns) == 1:
            free[ns[0]] = e
        else:
            raise ValueError(f"label {e} occurs {len(ns)} times")
    return old + new, ident, free


def _glue_matching(a: Matching, sigma: Matching, boundary, slots) -> _Glued:
    nodes, ident, free = _nodes(boundary, slots)
    nbr: Dict = {n: [] for n in nodes}
    for p, q in a:
        nbr[("o", p)].append(("o", q))
        nbr[("o", q)].append(("o", p))
    for k, l in sigma:
        nbr[("s", k)].append(("s", l))
        nbr[("s", l)].append(("s", k))
    for u, v in ident:
        nbr[u].append(v)
        nbr[v].append(u)
    seen = set()
    pairs = []
    node_loop = {}
    loops = 0
    for start in sorted(free, key=repr):
        if start in seen:
            continue
        prev, cur = None, start
        seen.add(cur)
        while True:
            nxt = [n for n in nbr[cur] if n != prev or nbr[cur].count(n) > 1]
            step = next((n for n in nxt if n not in seen), None)
            if step is None:
                break
            prev, cur = cur, step
            seen.add(cur)
        pairs.append((free[start], free[cur]))
    for n in sorted(nodes, key=repr):
        if n in seen:
            continue
        stack = [n]
        seen.add(n)
        while stack:
            u = stack.pop()
            node_loop[u] = loops
            for v in nbr[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        loops += 1
    return _Glued(matching(pairs), loops, node_loop)


def glue_morphism(
    f: Morphism,
    a: Matching,
    b: Matching,
    boundary: Sequence[Point],
    piece: Piece,
    choice_src: Sequence[int],
    choice_tgt: Sequence[int],
) -> Morphism:
    """Attach ``piece`` to ``f: A -> B`` and project onto delooped summands.

    ``choice_src``/``choice_tgt`` pick, for every closed loop of the glued
    source/target, the summand ``+1`` (shift ``+1``) or ``-1`` of the
    isomorphism ``O ≅ q O ⊕ q^{-1} O``: the inclusions are the undotted and
    dotted cup, the projections the dotted and undotted cap.
    """
    if not f or not piece.morphism:
        return {}
    slots = piece.slots
    nodes, ident, free = _nodes(boundary, slots)
    ga = _glue_matching(a, piece.source, boundary, slots)
    gb = _glue_matching(b, piece.target, boundary, slots)
    fc = circles(a, b)
    pc = circles(piece.source, piece.target)
    disk_of = {}
    for i, circ in enumerate(fc):
        for p in circ:
            disk_of[("o", p)] = i
    for i, circ in enumerate(pc):
        for k in circ:
            disk_of[("s", k)] = len(fc) + i
    ndisks = len(fc) + len(pc)
    glues = [(disk_of[u], disk_of[v], 1) for u, v in ident]
    # boundary circles of the glued surface through free points
    top_bot: Dict = {}
    for layer, mat, sig in (("bot", a, piece.source), ("top", b, piece.target)):
        for p, q in mat:
            top_bot.setdefault((layer, ("o", p)), []).append((layer, ("o", q)))
            top_bot.setdefault((layer, ("o", q)), []).append((layer, ("o", p)))
        for k, l in sig:
            top_bot.setdefault((layer, ("s", k)), []).append((layer, ("s", l)))
            top_bot.setdefault((layer, ("s", l)), []).append((layer, ("s", k)))
        for u, v in ident:
            top_bot.setdefault((layer, u), []).append((layer, v))
            top_bot.setdefault((layer, v), []).append((layer, u))
    for n in free:
        top_bot.setdefault(("bot", n), []).append(("top", n))
        top_bot.setdefault(("top", n), []).append(("bot", n))
    finals = []
    seen = set()
    for n in sorted(free, key=repr):
        if ("bot", n) in seen:
            continue
        stack = [("bot", n)]
        seen.add(("bot", n))
        pts = set()
        while stack:
            u = stack.pop()
            if u[1] in free:
                pts.add(free[u[1]])
            for v in top_bot.get(u, []):
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        finals.append((frozenset(pts), disk_of[n]))
    extra_dots = []
    loop_disk_a = {}
    for node, lp in ga.node_loop.items():
        loop_disk_a.setdefault(lp, disk_of[node])
    loop_disk_b = {}
    for node, lp in gb.node_loop.items():
        loop_disk_b.setdefault(lp, disk_of[node])
    for lp in range(ga.loops):
        extra_dots.append(0 if choice_src[lp] > 0 else 1)
        glues.append((ndisks + len(extra_dots) - 1, loop_disk_a[lp], 0))
    for lp in range(gb.loops):
        extra_dots.append(1 if choice_tgt[lp] > 0 else 0)
        glues.append((ndisks + len(extra_dots) - 1, loop_disk_b[lp], 0))
    out: Morphism = {}
    for kf, cf in f.items():
        for kp, cp in piece.morphism.items():
            dots = [1 if c in kf else 0 for c in fc] + [1 if c in kp else 0 for c in pc] + extra_dots
            _add_into(out, evaluate(dots, glues, finals), cf * cp)
    return out


# ---------------------------------------------------------------------------
# complexes over the tangle category


@dataclass
class TangleComplex:
    """Complex of shifted crossingless matchings.

    ``objects[oid] = (h, matching, shift)``; ``diff[src][tgt]`` is the
    morphism from object ``src`` (degree ``h``) to ``tgt`` (degree ``h+1``).
    """

    boundary: Tuple[Point, ...]
    objects: Dict[int, Tuple[int, Matching, int]] = field(default_factory=dict)
    diff: Dict[int, Dict[int, Morphism]] = field(default_factory=dict)
    incoming: Dict[int, Dict[int, None]] = field(default_factory=dict)
    _next: int = 0

    def add_object(self, h: int, m: Matching, shift: int) -> int:
        oid = self._next
        self._next += 1
        self.objects[oid] = (h, m, shift)
        self.diff[oid] = {}
        self.incoming[oid] = {}
        return oid

    def set_entry(self, src: int, tgt: int, m: Morphism) -> None:
        if m:
            self.diff[src][tgt] = m
            self.incoming[tgt][src] = None
        else:
            self.diff[src].pop(tgt, None)
            self.incoming[tgt].pop(src, None)

    def add_entry(self, src: int, tgt: int, m: Morphism, scale=1) -> None:
        cur = dict(self.diff[src].get(tgt, {}))
        _add_into(cur, m, scale)
        self.set_entry(src, tgt, cur)

    def remove(self, oid: int) -> None:
        for t in list(self.diff[oid]):
            self.incoming[t].pop(oid, None)
        for s in list(self.incoming[oid]):
            self.diff[s].pop(oid, None)
        del self.objects[oid], self.diff[oid], self.incoming[oid]

    @property
    def size(self) -> int:
        return len(self.objects)

    def check_degrees(self) -> bool:
        for s, row in self.diff.items():
            hs, ms, ss = self.objects[s]
            for t, m in row.items():
                ht, mt, st = self.objects[t]
                if ht != hs + 1 or morphism_degree(ms, mt, m, ss, st) not in (0, None):
                    return False
        return True

    def d_squared_is_zero(self) -> bool:
        for s, row in self.diff.items():
            acc: Dict[int, Morphism] = {}
            _, ms, _ = self.objects[s]
            for t, m in row.items():
                _, mt, _ = self.objects[t]
                for u, m2 in self.diff[t].items():
                    _, mu, _ = self.objects[u]
                    _add_into(acc.setdefault(u, {}), compose(m2, m, ms, mt, mu))
            if any(acc.values()):
                return False
        return True

    def simplify(self) -> int:
        """Cancel every degree-zero isomorphism; return the number of cancellations."""
        count = 0
        while True:
            hit = self._find_iso()
            if hit is None:
                return count
            self._cancel(*hit)
            count += 1

    def _find_iso(self) -> Optional[Tuple[int, int, Q]]:
        for s in sorted(self.diff):
            _, ms, ss = self.objects[s]
            for t in sorted(self.diff[s]):
                _, mt, st = self.objects[t]
                if ms == mt and ss == st:
                    m = self.diff[s][t]
                    if set(m) != {frozenset()}:
                        raise ArithmeticError("degree-zero endomorphism with dots")
                    return s, t, m[frozenset()]
        return None

    def _cancel(self, s: int, t: int, c: Q) -> None:
        """Gaussian elimination of the isomorphism ``c·id: s -> t``."""
        inv = 1 / frac(c)
        _, mt, _ = self.objects[t]
        into_t = [(u, self.diff[u][t]) for u in self.incoming[t] if u != s]
        out_of_s = [(v, self.diff[s][v]) for v in self.diff[s] if v != t]
        for u, delta in into_t:
            _, mu, _ = self.objects[u]
            for v, gamma in out_of_s:
                _, mv, _ = self.objects[v]
                self.add_entry(u, v, compose(gamma, delta, mu, mt, mv), -inv)
        self.remove(s)
        self.remove(t)

    def closed_poincare(self) -> Dict[int, LaurentPoly]:
        """Homology of a complex over the empty boundary, before global shifts."""
        if self.boundary:
            raise ValueError("the complex still has boundary points")
        by_hq: Dict[Tuple[int, int], List[int]] = {}
        for oid, (h, _, s) in self.objects.items():
            by_hq.setdefault((h, s), []).append(oid)
        ranks: Dict[Tuple[int, int], int] = {}
        for (h, q), oids in by_hq.items():
            rows = []
            for oid in oids:
                rows.append({t: m.get(frozenset(), 0) for t, m in self.diff[oid].items()})
            ranks[(h, q)] = len(_reduce_rows([{k: frac(v) for k, v in r.items() if v} for r in rows])[1])
        out: Dict[int, Dict[int, int]] = {}
        for (h, q), oids in by_hq.items():
            dim = len(oids) - ranks[(h, q)] - ranks.get((h - 1, q), 0)
            if dim:
                out.setdefault(h, {})[q] = dim
        return {h: LaurentPoly(c) for h, c in out.items()}


def _deloop_choices(n: int):
    return list(itertools.product((1, -1), repeat=n))


def initial_complex(loops: int = 0) -> TangleComplex:
    cx = TangleComplex(())
    for ch in _deloop_choices(loops):
        cx.add_object(0, frozenset(), sum(ch))
    return cx


def attach(cx: TangleComplex, slots: Sequence[Point], sources: Sequence[Tuple[Matching, int, int]], maps) -> TangleComplex:
    """Tensor ``cx`` with a small complex living on ``slots``.

    ``sources`` lists the objects ``(matching, homological degree, shift)``
    of the local complex; ``maps`` lists ``(i, j, Piece)`` entries from
    local object ``i`` to local object ``j``.  The Koszul sign
    ``(-1)^h`` multiplies local differentials on top of an object of degree ``h``.
    """
    boundary = cx.boundary
    _, _, free = _nodes(boundary, slots)
    new_boundary = tuple(sorted(free.values()))
    out = TangleComplex(new_boundary)
    glued: Dict[Tuple[int, int], Tuple[_Glued, Dict[Tuple[int, ...], int]]] = {}
    for oid in sorted(cx.objects):
        h, m, s = cx.objects[oid]
        for li, (sig, lh, ls) in enumerate(sources):
            g = _glue_matching(m, sig, boundary, slots)
            ids = {}
            for ch in _deloop_choices(g.loops):
                ids[ch] = out.add_object(h + lh, g.matching, s + ls + sum(ch))
            glued[(oid, li)] = (g, ids)
    for oid in sorted(cx.objects):
        h, m, s = cx.objects[oid]
        for tid, f in sorted(cx.diff[oid].items()):
            _, mt, _ = cx.objects[tid]
            for li, (sig, _, _) in enumerate(sources):
                piece = piece_identity(slots, sig)
                _fill(out, f, m, mt, boundary, piece, glued[(oid, li)], glued[(tid, li)], 1)
        ident = identity_morphism()
        for li, lj, piece in maps:
            sign = -1 if h % 2 else 1
            _fill(out, ident, m, m, boundary, piece, glued[(oid, li)], glued[(oid, lj)], sign)
    return out


def _fill(out, f, a, b, boundary, piece, src, tgt, sign) -> None:
    gs, ids_s = src
    gt, ids_t = tgt
    for chs, sid in ids_s.items():
        for cht, tid in ids_t.items():
            m = glue_morphism(f, a, b, boundary, piece, chs, cht)
            if m:
                out.add_entry(sid, tid, m, sign)


def crossing_pieces(x: Tuple[Point, Point, Point, Point]):
    """Local complex ``[0-smoothing -> q^1 1-smoothing]`` of a crossing."""
    s0 = matching([(0, 1), (2, 3)])
    s1 = matching([(0, 3), (1, 2)])
    return [(s0, 0, 0), (s1, 1, 1)], [(0, 1, piece_saddle(x, s0, s1))]


def scan_order(crossings: Sequence[Tuple[int, ...]], start: int = 0) -> List[int]:
    """Greedy order keeping the boundary small: always add the crossing sharing the most edges."""
    if not crossings:
        return []
    remaining = set(range(len(crossings)))
    order = [start]
    remaining.discard(start)
    boundary = set()
    for e in crossings[start]:
        boundary ^= {e}
    while remaining:
        def score(i):
            shared = sum(1 for e in crossings[i] if e in boundary)
            return (-shared, i)

        nxt = min(remaining, key=score)
        order.append(nxt)
        remaining.discard(nxt)
        for e in crossings[nxt]:
            boundary ^= {e}
    return order


def scan_tangle(crossings: Sequence[Tuple[int, int, int, int]], loops: int = 0, order: Optional[Sequence[int]] = None, check: bool = False) -> TangleComplex:
    """Simplified complex of a tangle given by crossings (labels occurring once are boundary)."""
    cx = initial_complex(loops)
    for i in order if order is not None else scan_order(crossings):
        sources, maps = crossing_pieces(crossings[i])
        cx = attach(cx, crossings[i], sources, maps)
        cx.simplify()
        if check and not (cx.check_degrees() and cx.d_squared_is_zero()):
            raise ArithmeticError(f"scan produced an invalid complex after crossing {i}")
    return cx


def scan_complex(d: LinkDiagram, check: bool = False) -> TangleComplex:
    """Simplified complex of a closed diagram (shifts not yet applied)."""
    return scan_tangle(d.crossings, d.loops, check=check)


def scan_homology(d: LinkDiagram) -> Dict[int, LaurentPoly]:
    """Khovanov homology via scanning, with the global ``[-n₋]{n₊ - 2n₋}`` shift."""
    raw = scan_complex(d).closed_poincare()
    n_plus, n_minus = d.n_plus, d.n_minus
    return {h - n_minus: p.shift(n_plus - 2 * n_minus) for h, p in raw.items()}


# ---------------------------------------------------------------------------
# closing a tangle complex, and homology with explicit representatives


@dataclass
class ScalarComplex:
    """Complex over the empty boundary: generators with ``(h, q)`` and scalar differential."""

    gens: Dict[Hashable, Tuple[int, int]]
    diff: Dict[Hashable, Dict[Hashable, Q]]

    def poincare(self) -> Dict[int, LaurentPoly]:
        hb = HomologyBasis(self)
        out: Dict[int, Dict[int, int]] = {}
        for h, q in hb.degrees:
            out.setdefault(h, {})
            out[h][q] = out[h].get(q, 0) + 1
        return {h: LaurentPoly(c) for h, c in out.items()}

    def shifted(self, dh: int, dq: int) -> "ScalarComplex":
        return ScalarComplex({g: (h + dh, q + dq) for g, (h, q) in self.gens.items()}, self.diff)


def _solve(columns: Sequence[Mapping[Hashable, Q]], target: Mapping[Hashable, Q]) -> Optional[List[Q]]:
    """Coefficients ``a`` with ``Σ a_c columns[c] = target``, or ``None``."""
    keys: Dict[Hashable, int] = {}
    for col in list(columns) + [target]:
        for k in col:
            keys.setdefault(k, len(keys))
    rhs = len(columns)
    rows: List[Dict[int, Q]] = [dict() for _ in keys]
    for c, col in enumerate(columns):
        for k, v in col.items():
            if v:
                rows[keys[k]][c] = frac(v)
    for k, v in target.items():
        if v:
            rows[keys[k]][rhs] = frac(v)
    rref, pivots = _reduce_rows(rows)
    if rhs in pivots:
        return None
    sol = [Q(0)] * len(columns)
    for p, row in zip(pivots, rref):
        sol[p] = row.get(rhs, Q(0))
    return sol


class HomologyBasis:
    """Representatives of a basis of homology, block by block in ``(h, q)``."""

    def __init__(self, cx: ScalarComplex):
        from ..algebra import RowSpace, nullspace

        self.cx = cx
        blocks: Dict[Tuple[int, int], List[Hashable]] = {}
        for g, hq in sorted(cx.gens.items(), key=lambda t: repr(t[0])):
            blocks.setdefault(hq, []).append(g)
        self.reps: List[Dict[Hashable, Q]] = []
        self.degrees: List[Tuple[int, int]] = []
        self._boundaries: Dict[Tuple[int, int], List[Dict[Hashable, Q]]] = {}
        self._block_reps: Dict[Tuple[int, int], List[int]] = {}
        for (h, q), gens in sorted(blocks.items()):
            eqs: Dict[Hashable, Dict[Hashable, Q]] = {}
            for g in gens:
                for t, c in cx.diff.get(g, {}).items():
                    eqs.setdefault(t, {})[g] = c
            cycles = nullspace(list(eqs.values()), gens)
            bnd = []
            for g in blocks.get((h - 1, q), []):
                img = {t: c for t, c in cx.diff.get(g, {}).items() if c}
                if img:
                    bnd.append(img)
            self._boundaries[(h, q)] = bnd
            rs = RowSpace()
            for b in bnd:
                rs.add(b)
            idx = []
            for z in cycles:
                if rs.add(z):
                    idx.append(len(self.reps))
                    self.reps.append(z)
                    self.degrees.append((h, q))
            self._block_reps[(h, q)] = idx

    def __len__(self) -> int:
        return len(self.reps)

    def coordinates(self, z: Mapping[Hashable, Q], hq: Tuple[int, int]) -> Dict[int, Q]:
        """Coordinates of the class of the cycle ``z`` (all of whose terms lie in ``hq``)."""
        idx = self._block_reps.get(hq, [])
        cols = [self.reps[i] for i in idx] + self._boundaries.get(hq, [])
        if not any(z.values()):
            return {}
        sol = _solve(cols, z)
        if sol is None:
            raise ArithmeticError("vector is not a cycle of the expected degree")
        return {i: sol[k] for k, i in enumerate(idx) if sol[k]}


def homology_matrix(f: Mapping[Hashable, Mapping[Hashable, Q]], src: HomologyBasis, tgt: HomologyBasis) -> Dict[Tuple[int, int], Q]:
    """Matrix ``{(row, col): entry}`` of the map induced on homology by the chain map ``f``."""
    out: Dict[Tuple[int, int], Q] = {}
    for col, rep in enumerate(src.reps):
        img: Dict[Hashable, Q] = {}
        for g, c in rep.items():
            for t, v in f.get(g, {}).items():
                img[t] = img.get(t, 0) + c * v
        img = {t: v for t, v in img.items() if v}
        if not img:
            continue
        degs = {tgt.cx.gens[t] for t in img}
        if len(degs) != 1:
            raise ArithmeticError("chain map is not homogeneous")
        for row, v in tgt.coordinates(img, degs.pop()).items():
            out[(row, col)] = v
    return out


def close(cx: TangleComplex, slots: Sequence[Point], closures: Sequence[Matching], maps: Sequence[Tuple[int, int, Piece]] = ()):
    """Close ``cx`` by crossingless pictures on ``slots`` and transport cobordisms between them.

    Returns the closed complexes (one per closure) and, for each
    ``(i, j, piece)``, the chain map from closure ``i`` to closure ``j`` as
    ``{source generator: {target generator: coefficient}}``.
    """
    boundary = cx.boundary
    _, _, free = _nodes(boundary, slots)
    if free:
        raise ValueError(f"closure leaves boundary points {sorted(free.values())}")
    glued = {}
    closed = []
    for ci, kappa in enumerate(closures):
        gens = {}
        for oid, (h, m, s) in cx.objects.items():
            g = _glue_matching(m, kappa, boundary, slots)
            glued[(oid, ci)] = g
            for ch in _deloop_choices(g.loops):
                gens[(oid, ch)] = (h, s + sum(ch))
        diff: Dict[Hashable, Dict[Hashable, Q]] = {}
        piece = piece_identity(slots, kappa)
        for oid, row in cx.diff.items():
            _, m, _ = cx.objects[oid]
            ga = glued[(oid, ci)]
            for tid, f in row.items():
                _, mt, _ = cx.objects[tid]
                gb = glued[(tid, ci)]
                for chs in _deloop_choices(ga.loops):
                    for cht in _deloop_choices(gb.loops):
                        v = glue_morphism(f, m, mt, boundary, piece, chs, cht).get(frozenset(), 0)
                        if v:
                            diff.setdefault((oid, chs), {})[(tid, cht)] = v
        closed.append(ScalarComplex(gens, diff))
    chain_maps = []
    ident = identity_morphism()
    for i, j, piece in maps:
        f: Dict[Hashable, Dict[Hashable, Q]] = {}
        for oid, (h, m, s) in cx.objects.items():
            ga, gb = glued[(oid, i)], glued[(oid, j)]
            for chs in _deloop_choices(ga.loops):
                for cht in _deloop_choices(gb.loops):
                    v = glue_morphism(ident, m, m, boundary, piece, chs, cht).get(frozenset(), 0)
                    if v:
                        f.setdefault((oid, chs), {})[(oid, cht)] = v
        chain_maps.append(f)
    return closed, chain_maps
