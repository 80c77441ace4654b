"""Symmetric-group actions on Khovanov homology of cables, and colored homology.

The adjacent transposition on strands ``i, i+1`` of a cable acts by
``σ_i = id - T_i`` where ``T_i`` is the image of the turnback ``cup ∘ cap``:
a saddle fusing the two strands at a parallel section, the death and
rebirth of the resulting circle, and the splitting saddle.

For cables of the crossingless unknot every step is a chain map on the cube
(the fused circle is a split loop).  For the 2-cable of a knot the fused
circle is a knotted diagram of the unknot; there the complex is computed by
scanning with the section cut open, both closures are formed, and the
death-then-birth composite on the two-dimensional homology of the fused
unknot is pinned down by degrees and the dot action: it sends the bottom
class ``x·g`` to the top class ``g`` and kills ``g``.

Grading: homology is graded as in :mod:`.cube` (``x`` has degree ``-1``).
Kirby colors are reported in the normalization of
:func:`dtlkit.kirby.pol_of_kirby`, which uses the dotted Temperley-Lieb
grading ``q ↦ q^{-1}``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from ..algebra import LaurentPoly, Q, RowSpace, frac
from . import cube
from .cube import ChainMap, _popcount
from .pd import Cable, LinkDiagram, cable, unlink
from .scan import (
    HomologyBasis,
    close,
    homology_matrix,
    matching,
    piece_dot,
    piece_saddle,
    scan_order,
    scan_tangle,
)

# largest cable (strands) handled by the unknot routines
MAX_UNKNOT_STRANDS = 9

Matrix = Dict[int, Dict[int, Q]]  # column -> {row: entry}


def _h0(f: ChainMap) -> Matrix:
    """Matrix of a chain map between crossingless diagrams, indexed by x-masks."""
    m = f.maps[0]
    out: Matrix = {}
    for j, col in m.cols.items():
        src_mask = m.domain.label(j)[1]
        out[src_mask] = {m.codomain.label(i)[1]: v for i, v in col.items()}
    return out


def _mat_mul(g: Matrix, f: Matrix) -> Matrix:
    out: Matrix = {}
    for j, col in f.items():
        acc: Dict[int, Q] = {}
        for k, v in col.items():
            for i, w in g.get(k, {}).items():
                acc[i] = acc.get(i, 0) + v * w
        acc = {i: v for i, v in acc.items() if v}
        if acc:
            out[j] = acc
    return out


def _apply(m: Matrix, v: Mapping[int, Q]) -> Dict[int, Q]:
    out: Dict[int, Q] = {}
    for j, c in v.items():
        for i, w in m.get(j, {}).items():
            out[i] = out.get(i, 0) + c * w
    return {i: c for i, c in out.items() if c}


def _check_strands(n: int) -> None:
    if n > MAX_UNKNOT_STRANDS:
        raise ValueError(f"unknot cables are limited to {MAX_UNKNOT_STRANDS} strands, got {n}")


# ---------------------------------------------------------------------------
# unknot cables: every map is a chain map on crossingless diagrams


@lru_cache(maxsize=None)
def unknot_cap(n: int, i: int) -> ChainMap:
    """Annulus joining loops ``i, i+1`` (1-based) of ``U^n``: saddle then death."""
    _check_strands(n)
    d = unlink(n)
    fuse = cube.saddle(d, ("loop", i - 1), ("loop", i))
    return fuse.then(cube.death(unlink(n - 1), i - 1))


@lru_cache(maxsize=None)
def unknot_cup(n: int, i: int) -> ChainMap:
    """Annulus creating loops ``i, i+1`` of ``U^{n+2}``: birth then splitting saddle."""
    _check_strands(n + 2)
    born = cube.birth(unlink(n), i - 1)
    return born.then(cube.saddle(unlink(n + 1), ("loop", i - 1), ("loop", i - 1)))


@lru_cache(maxsize=None)
def unknot_dot(n: int, i: int) -> ChainMap:
    _check_strands(n)
    return cube.dot(unlink(n), ("loop", i - 1))


@lru_cache(maxsize=None)
def unknot_turnback(n: int, i: int) -> Matrix:
    """``T_i = cup ∘ cap`` on ``Kh(U^n)``."""
    return _h0(unknot_cap(n, i).then(unknot_cup(n - 2, i)))


@lru_cache(maxsize=None)
def unknot_transposition(n: int, i: int) -> Matrix:
    """``σ_i = id - T_i`` on ``Kh(U^n)`` as a matrix on x-masks."""
    t = unknot_turnback(n, i)
    out: Matrix = {}
    for mask in range(1 << n):
        col = {mask: Q(1)}
        for r, v in t.get(mask, {}).items():
            nv = col.get(r, 0) - v
            if nv:
                col[r] = nv
            else:
                col.pop(r, None)
        out[mask] = col
    return out


@lru_cache(maxsize=None)
def unknot_dotted_cup(n: int) -> Matrix:
    """Birth of two new outer loops with a dot on the first: ``Kh(U^n) -> Kh(U^{n+2})``."""
    cup = _h0(unknot_cup(n, n + 1))
    return _mat_mul(_h0(unknot_dot(n + 2, n + 1)), cup)


def unknot_word_action(m: int, word: Sequence[Tuple[str, int]]) -> Matrix:
    """Action on ``Kh`` of a word of ``cup``/``cap``/``dot`` layers on unknot cables.

    Layers are applied bottom to top starting from ``U^m``, positions are
    1-based as in :func:`dtlkit.dtl.word_to_morphism`.
    """
    n = m
    out: Matrix = {mask: {mask: Q(1)} for mask in range(1 << m)}
    for kind, i in word:
        if kind == "cup":
            step, n = _h0(unknot_cup(n, i)), n + 2
        elif kind == "cap":
            step, n = _h0(unknot_cap(n, i)), n - 2
        elif kind == "dot":
            step = _h0(unknot_dot(n, i))
        else:
            raise ValueError(f"unknown layer {kind!r}")
        out = _mat_mul(step, out)
    return out


def kh_degree(mask: int, n: int) -> int:
    """Quantum degree of a labelling of ``U^n``: loops labelled 1 count +1, x counts -1."""
    return n - 2 * _popcount(mask)


def symmetrizer_apply(n: int, v: Mapping[int, Q], action=None) -> Dict[int, Q]:
    """``(1/n!) Σ_w w · v`` using the coset factorisation ``S_k = C_k · S_{k-1}``.

    ``C_k = 1 + s_{k-1} + s_{k-2}s_{k-1} + ... + s_1···s_{k-1}`` runs over
    coset representatives, so the full sum is ``C_n ··· C_3 C_2``.
    """
    gen = action or (lambda i, w: _apply(unknot_transposition(n, i), w))
    cur = dict(v)
    for k in range(2, n + 1):
        total = dict(cur)
        w = cur
        for j in range(k - 1, 0, -1):
            w = gen(j, w)
            for key, c in w.items():
                total[key] = total.get(key, 0) + c
        cur = {key: c for key, c in total.items() if c}
    scale = Q(1, factorial(n))
    return {key: c * scale for key, c in cur.items() if c}


@lru_cache(maxsize=None)
def unknot_jw_image(n: int) -> Tuple[Tuple[int, Tuple[Tuple[int, Q], ...]], ...]:
    """Basis of ``Kh(U^{(n)})``, the image of the symmetrizer, as ``(degree, vector)`` pairs."""
    _check_strands(n)
    spaces: Dict[int, RowSpace] = {}
    out = []
    for mask in range(1 << n):
        img = symmetrizer_apply(n, {mask: Q(1)})
        if not img:
            continue
        deg = kh_degree(mask, n)
        rs = spaces.setdefault(deg, RowSpace())
        if rs.add(img):
            out.append((deg, tuple(sorted(img.items()))))
    return tuple(out)


def unknot_jw_dimension(n: int) -> LaurentPoly:
    c: Dict[int, int] = {}
    for deg, _ in unknot_jw_image(n):
        c[deg] = c.get(deg, 0) + 1
    return LaurentPoly(c)


def unknot_transition(n: int, v: Mapping[int, Q]) -> Dict[int, Q]:
    """Dotted-annulus map ``Kh(U^{(n)}) -> Kh(U^{(n+2)})``: dotted cup, then symmetrize."""
    return symmetrizer_apply(n + 2, _apply(unknot_dotted_cup(n), v))


@dataclass
class KirbyColorReport:
    k: int
    N: int
    union: LaurentPoly  # homological grading, stages shifted by q^{k+2m}
    value: LaurentPoly  # normalization of pol_of_kirby
    injective: List[bool]

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "level": self.N,
            "union": self.union.to_json(),
            "value": self.value.to_json(),
            "transitions_injective": self.injective,
        }


def kirby_colored_unknot(k: int, N: int) -> KirbyColorReport:
    """``Kh(U^{ω_k})`` through level ``N`` as the union of the stage images.

    Stage ``m`` is ``q^{k+2m} Kh(U^{(k+2m)})`` (the homological-grading mirror
    of ``q^{-k-2m}``), and the dotted-annulus transitions are degree zero.
    """
    if k not in (0, 1) or N < 0:
        raise ValueError("Kirby colors need k in {0, 1} and a non-negative level")
    top = k + 2 * N
    _check_strands(top)
    injective = []
    pushed: List[Tuple[int, Dict[int, Q]]] = []
    for m in range(N + 1):
        n = k + 2 * m
        basis = [(deg + n, dict(vec)) for deg, vec in unknot_jw_image(n)]
        images = [v for _, v in basis]
        for step in range(m, N):
            size = k + 2 * step
            images = [unknot_transition(size, v) for v in images]
            if step == m and m < N:
                rs_by_deg: Dict[int, RowSpace] = {}
                ok = True
                for (deg, _), img in zip(basis, images):
                    ok &= rs_by_deg.setdefault(deg, RowSpace()).add(img)
                injective.append(bool(ok))
        pushed.extend((deg, img) for (deg, _), img in zip(basis, images))
    spaces: Dict[int, RowSpace] = {}
    for deg, v in pushed:
        spaces.setdefault(deg, RowSpace()).add(v)
    union = LaurentPoly({d: s.dim for d, s in spaces.items() if s.dim})
    centred = union.substitute_inverse().shift(top)
    value = LaurentPoly({d: c for d, c in centred.items() if d <= 0})
    return KirbyColorReport(k, N, union, value, injective)


# ---------------------------------------------------------------------------
# actions on homology


@dataclass
class HomologyAction:
    """A linear map on a bigraded homology basis.

    ``degrees[j] = (h, q)`` of basis vector ``j``; ``matrix`` maps column
    index to ``{row: entry}``.
    """

    degrees: List[Tuple[int, int]]
    matrix: Matrix

    @property
    def dim(self) -> int:
        return len(self.degrees)

    def __matmul__(self, other: "HomologyAction") -> "HomologyAction":
        return HomologyAction(self.degrees, _mat_mul(self.matrix, other.matrix))

    def is_identity(self) -> bool:
        for j in range(self.dim):
            if self.matrix.get(j, {}) != {j: 1}:
                return False
        return True

    def preserves_bidegree(self) -> bool:
        return all(self.degrees[i] == self.degrees[j] for j, col in self.matrix.items() for i in col)

    def image_dimension(self) -> Dict[int, LaurentPoly]:
        return _graded_rank(self.degrees, self.matrix)

    def fixed_dimension(self) -> Dict[int, LaurentPoly]:
        """Graded dimension of ``{v : A v = v}``."""
        minus_id: Matrix = {}
        for j in range(self.dim):
            col = dict(self.matrix.get(j, {}))
            col[j] = col.get(j, 0) - 1
            minus_id[j] = {i: v for i, v in col.items() if v}
        rank = _graded_rank(self.degrees, minus_id)
        total: Dict[int, Dict[int, int]] = {}
        for h, q in self.degrees:
            total.setdefault(h, {})
            total[h][q] = total[h].get(q, 0) + 1
        out = {}
        for h, qs in total.items():
            r = rank.get(h, LaurentPoly())
            c = {q: n - int(r[q]) for q, n in qs.items() if n - int(r[q])}
            if c:
                out[h] = LaurentPoly(c)
        return out


def _graded_rank(degrees, matrix: Matrix) -> Dict[int, LaurentPoly]:
    by_deg: Dict[Tuple[int, int], RowSpace] = {}
    for j in range(len(degrees)):
        col = matrix.get(j, {})
        if col:
            by_deg.setdefault(degrees[j], RowSpace()).add(col)
    out: Dict[int, Dict[int, int]] = {}
    for (h, q), rs in by_deg.items():
        if rs.dim:
            out.setdefault(h, {})[q] = rs.dim
    return {h: LaurentPoly(c) for h, c in out.items()}


def _unknot_action(n: int, i: int) -> HomologyAction:
    degrees = [(0, kh_degree(mask, n)) for mask in range(1 << n)]
    return HomologyAction(degrees, {m: dict(c) for m, c in unknot_transposition(n, i).items()})


@dataclass
class CutCable:
    """Scan data of a knot 2-cable with one parallel section cut open."""

    cable: Cable
    homology: HomologyBasis
    turnback: HomologyAction  # T = split ∘ (birth ∘ death) ∘ fuse on Kh(K^2)
    fused_homology: HomologyBasis
    shift: Tuple[int, int]


def _cut_cable(c: Cable, edge: Optional[int] = None) -> CutCable:
    d = c.diagram
    if c.base.n_components != 1 or c.base.loops or c.multiplicities != (2,):
        raise ValueError("the scanned transposition supports the 2-cable of a knot diagram with crossings")
    e = edge if edge is not None else min(c.copies)
    u, v = c.site(e, 1)
    fresh = max(d.edges) + 1
    uh, vh = fresh, fresh + 1
    xs = [list(x) for x in d.crossings]
    for label, new in ((u, uh), (v, vh)):
        for ci, x in enumerate(d.crossings):
            for k, t in enumerate(x):
                if t == label and cube._slot_is_incoming(d, ci, k):
                    xs[ci][k] = new
    crossings = [tuple(x) for x in xs]
    tangle = scan_tangle(crossings, order=scan_order(crossings))
    slots = (u, uh, v, vh)
    straight = matching([(0, 1), (2, 3)])
    # the fused picture reconnects the start of u with the end of v and vice versa
    fused = matching([(0, 3), (1, 2)])
    (c_id, c_tb), (fuse, split, dot_map) = close(
        tangle,
        slots,
        [straight, fused],
        [(0, 1, piece_saddle(slots, straight, fused)), (1, 0, piece_saddle(slots, fused, straight)), (1, 1, piece_dot(slots, fused, 0))],
    )
    hb = HomologyBasis(c_id)
    hf = HomologyBasis(c_tb)
    if len(hf) != 2:
        raise ArithmeticError(f"the fused diagram should be an unknot, found homology of rank {len(hf)}")
    top, bottom = sorted(range(2), key=lambda j: -hf.degrees[j][1])
    if hf.degrees[top][1] - hf.degrees[bottom][1] != 2 or hf.degrees[top][0] != hf.degrees[bottom][0]:
        raise ArithmeticError("unexpected bigrading of the fused unknot")
    x = homology_matrix(dot_map, hf, hf)
    lam = x.get((bottom, top))
    if not lam:
        raise ArithmeticError("dot does not connect the two classes of the fused unknot")
    birth_death = {bottom: {top: 1 / frac(lam)}}
    m = _as_matrix(homology_matrix(fuse, hb, hf))
    s = _as_matrix(homology_matrix(split, hf, hb))
    t = _mat_mul(s, _mat_mul(birth_death, m))
    shift = (-d.n_minus, d.n_plus - 2 * d.n_minus)
    degrees = [(h + shift[0], q + shift[1]) for h, q in hb.degrees]
    return CutCable(c, hb, HomologyAction(degrees, t), hf, shift)


def _as_matrix(entries: Mapping[Tuple[int, int], Q]) -> Matrix:
    out: Matrix = {}
    for (i, j), v in entries.items():
        out.setdefault(j, {})[i] = v
    return out


_CUT_CACHE: Dict[Tuple, CutCable] = {}


def cut_cable(c: Cable, edge: Optional[int] = None) -> CutCable:
    key = (c.base.crossings, c.base.signs, c.multiplicities, edge)
    if key not in _CUT_CACHE:
        _CUT_CACHE[key] = _cut_cable(c, edge)
    return _CUT_CACHE[key]


def transposition_action(c: Cable, i: int = 1, edge: Optional[int] = None) -> HomologyAction:
    """``σ_i = id - T_i`` on ``Kh`` of a cable.

    Supported: cables of crossingless unknots (any ``i``) and the 2-cable of
    a knot diagram with crossings (``i = 1``), cut at the copies of ``edge``.
    """
    n = sum(c.multiplicities)
    if not 1 <= i < n:
        raise IndexError("transposition index out of range")
    if c.base.n_crossings == 0:
        if c.base.loops != 1:
            raise ValueError("the crossingless case supports a single unknot")
        return _unknot_action(n, i)
    t = cut_cable(c, edge).turnback
    out: Matrix = {}
    for j in range(t.dim):
        col = {j: Q(1)}
        for r, v in t.matrix.get(j, {}).items():
            nv = col.get(r, 0) - v
            if nv:
                col[r] = nv
            else:
                col.pop(r, None)
        out[j] = col
    return HomologyAction(t.degrees, out)


def jw_projector_action(c: Cable, edge: Optional[int] = None) -> HomologyAction:
    """``Kh_K(JW_2) = id - T/2`` on ``Kh(K^2)`` (computed without using σ)."""
    t = cut_cable(c, edge).turnback
    out: Matrix = {}
    for j in range(t.dim):
        col = {j: Q(1)}
        for r, v in t.matrix.get(j, {}).items():
            nv = col.get(r, 0) - v / 2
            if nv:
                col[r] = nv
            else:
                col.pop(r, None)
        out[j] = col
    return HomologyAction(t.degrees, out)


# ---------------------------------------------------------------------------
# colored homology


@dataclass(frozen=True)
class Color:
    kind: str  # "c", "JW", "omega" or "omega_total"
    n: int = 1
    level: int = 0

    def __str__(self) -> str:
        if self.kind == "c":
            return f"c{self.n}"
        if self.kind == "JW":
            return f"JW{self.n}"
        if self.kind == "omega":
            return f"w{self.n}@{self.level}"
        return f"w@{self.level}"


_COLOR_RE = re.compile(
    r"^(?:(c|jw):?(\d+)|(?:w|omega|ω|kirby):?(\d?)(?:@(\d+))?)$",
    re.IGNORECASE,
)


def parse_color(text: str, level: Optional[int] = None) -> Color:
    """Parse a color name.

    Accepted forms: ``c3`` or ``c:3`` (three parallel strands), ``JW2`` or
    ``jw:2``, ``w0@3`` or ``kirby:0`` (Kirby color ``ω_0``; the level comes
    after ``@`` or from ``level``) and ``w@3`` or ``kirby`` for the total
    Kirby color.
    """
    m = _COLOR_RE.match(text.strip())
    if not m:
        raise ValueError(f"cannot parse color {text!r}")
    if m.group(1):
        kind = "c" if m.group(1).lower() == "c" else "JW"
        return Color(kind, int(m.group(2)))
    if m.group(4) is not None:
        level = int(m.group(4))
    if level is None:
        raise ValueError(f"color {text!r} needs a level")
    if m.group(3):
        k = int(m.group(3))
        if k not in (0, 1):
            raise ValueError(f"Kirby colors are ω_0 and ω_1, got ω_{k}")
        return Color("omega", k, level)
    return Color("omega_total", 0, level)


def _unknot_colored(color: Color) -> Dict[int, LaurentPoly]:
    if color.kind == "c":
        poly = LaurentPoly({0: 1})
        for _ in range(color.n):
            poly = poly * LaurentPoly({1: 1, -1: 1})
        return {0: poly}
    if color.kind == "JW":
        return {0: unknot_jw_dimension(color.n)}
    if color.kind == "omega":
        return {0: kirby_colored_unknot(color.n, color.level).value}
    return {0: kirby_colored_unknot(0, color.level).value + kirby_colored_unknot(1, color.level).value}


def _tensor(a: Dict[int, LaurentPoly], b: Dict[int, LaurentPoly]) -> Dict[int, LaurentPoly]:
    out: Dict[int, LaurentPoly] = {}
    for h1, p1 in a.items():
        for h2, p2 in b.items():
            out[h1 + h2] = out.get(h1 + h2, LaurentPoly()) + p1 * p2
    return {h: p for h, p in out.items() if p}


def colored_kh(d: LinkDiagram, colors: Sequence) -> Dict[int, LaurentPoly]:
    """Colored Khovanov homology, one color per component.

    Components with crossings are listed first, then crossingless loops, as
    in :func:`.pd.cable`.  ``c^n`` is supported everywhere; ``JW_n`` and the
    Kirby colors on split crossingless loops; ``JW_2`` on a knot diagram.
    """
    from .scan import scan_homology

    cols = [c if isinstance(c, Color) else parse_color(str(c)) for c in colors]
    if len(cols) != d.n_components:
        raise ValueError(f"expected {d.n_components} colors, got {len(cols)}")
    ncross = len(d.components)
    core_diagram = LinkDiagram(d.crossings, d.signs, 0, d.name)
    heads = [Color("c", 1) if c == Color("JW", 1) else c for c in cols[:ncross]]
    if ncross == 0:
        out = {0: LaurentPoly({0: 1})}
    elif all(c.kind == "c" for c in heads):
        out = scan_homology(cable(core_diagram, [c.n for c in heads]).diagram)
    elif ncross == 1 and heads[0] == Color("JW", 2):
        out = jw_projector_action(cable(core_diagram, n=2)).image_dimension()
    else:
        raise ValueError("this color assignment is outside the supported range (see colored_kh docstring)")
    for c in cols[ncross:]:
        out = _tensor(out, _unknot_colored(c))
    return out
