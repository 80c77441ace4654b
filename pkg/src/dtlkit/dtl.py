"""Dotted Temperley-Lieb diagrams and their linear combinations.

A diagram ``c^m -> c^n`` is stored *bent*: the m bottom points and the n top
points are placed on one line, bottom points first (left to right) followed by
the top points in reverse order, so bottom point ``Bi`` sits at position
``i - 1`` and top point ``Tj`` at position ``m + n - j``.  Every strand is then
a cap over this line, recorded as ``(a, b, dots)`` with ``a < b``.

The canonical basis consists of matchings whose dots (at most one per arc)
all sit on outermost caps, i.e. caps touching the unbounded region above the
line.  :func:`normalize` rewrites any dotted matching into that basis.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .algebra import Q, frac

Arc = Tuple[int, int, int]
Arcs = Tuple[Arc, ...]


class SignatureError(ValueError):
    pass


class PlanarityError(ValueError):
    pass


def _check_planar(arcs: Iterable[Tuple[int, int, int]], npoints: int) -> None:
    seen = [False] * npoints
    spans = []
    for a, b, d in arcs:
        if not (0 <= a < b < npoints):
            raise PlanarityError(f"bad arc endpoints {(a, b)}")
        if seen[a] or seen[b]:
            raise PlanarityError("boundary point used twice")
        seen[a] = seen[b] = True
        if d < 0:
            raise ValueError("negative dot count")
        spans.append((a, b))
    if not all(seen):
        raise PlanarityError("boundary point left unmatched")
    for a, b in spans:
        for c, e in spans:
            if a < c < b < e:
                raise PlanarityError(f"arcs {(a, b)} and {(c, e)} cross")


def parents(arcs: Arcs) -> Dict[int, Optional[int]]:
    """Map each arc index to the index of the arc immediately enclosing it."""
    order = sorted(range(len(arcs)), key=lambda k: arcs[k][0])
    stack: List[int] = []
    out: Dict[int, Optional[int]] = {}
    for k in order:
        a, b, _ = arcs[k]
        while stack and arcs[stack[-1]][1] < a:
            stack.pop()
        out[k] = stack[-1] if stack else None
        stack.append(k)
    return out


def is_normal(arcs: Arcs) -> bool:
    par = parents(arcs)
    return all(d <= 1 and (d == 0 or par[k] is None) for k, (_, _, d) in enumerate(arcs))


def _canon(arcs: Iterable[Arc]) -> Arcs:
    return tuple(sorted(arcs))


@lru_cache(maxsize=None)
def normalize(arcs: Arcs) -> Tuple[Tuple[Arcs, Q], ...]:
    """Rewrite a dotted matching (already loop free) into the canonical basis.

    Returns a tuple of ``(normal arcs, coefficient)`` pairs.
    """
    if any(d >= 2 for _, _, d in arcs):
        return ()
    par = parents(arcs)
    # pick the dotted non-outermost arc whose left endpoint is smallest
    target = None
    for k in sorted(range(len(arcs)), key=lambda k: arcs[k][0]):
        if arcs[k][2] and par[k] is not None:
            target = k
            break
    if target is None:
        return ((arcs, Q(1)),)
    a, b, _ = arcs[target]
    p = par[target]
    A, B, dp = arcs[p]
    rest = [arc for i, arc in enumerate(arcs) if i != target and i != p]
    # neck-cutting across the region between the parent and the child:
    # dot(child) = -dot(parent) + reconnect(dot left piece) + reconnect(dot right piece)
    terms = [
        (_canon(rest + [(a, b, 0), (A, B, dp + 1)]), Q(-1)),
        (_canon(rest + [(A, a, dp + 1), (b, B, 0)]), Q(1)),
        (_canon(rest + [(A, a, dp), (b, B, 1)]), Q(1)),
    ]
    out: Dict[Arcs, Q] = {}
    for t, c in terms:
        for nt, nc in normalize(t):
            out[nt] = out.get(nt, 0) + c * nc
    return tuple((k, v) for k, v in sorted(out.items()) if v)


def enumerate_matchings(npoints: int) -> List[Tuple[Tuple[int, int], ...]]:
    """All non-crossing perfect matchings of ``npoints`` points on a line."""

    @lru_cache(maxsize=None)
    def rec(lo: int, hi: int) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
        if lo > hi:
            return ((),)
        out = []
        for j in range(lo + 1, hi + 1, 2):
            for inner in rec(lo + 1, j - 1):
                for outer in rec(j + 1, hi):
                    out.append(((lo, j),) + inner + outer)
        return tuple(out)

    if npoints % 2:
        return []
    return [tuple(sorted(m)) for m in rec(0, npoints - 1)]


def outermost(matching: Sequence[Tuple[int, int]]) -> List[int]:
    arcs = tuple((a, b, 0) for a, b in matching)
    par = parents(arcs)
    return [k for k in range(len(arcs)) if par[k] is None]


@lru_cache(maxsize=None)
def basis(m: int, n: int) -> Tuple[Arcs, ...]:
    """Canonical basis of ``Hom(c^m, c^n)`` in bent form."""
    out = []
    for mt in enumerate_matchings(m + n):
        outs = outermost(mt)
        for mask in range(1 << len(outs)):
            dots = {outs[i] for i in range(len(outs)) if mask >> i & 1}
            out.append(tuple((a, b, 1 if k in dots else 0) for k, (a, b) in enumerate(mt)))
    return tuple(sorted(out, key=lambda t: (sum(d for _, _, d in t), t)))


# ---------------------------------------------------------------------------
# boundary bookkeeping


def point_label(pos: int, m: int, n: int) -> str:
    return f"B{pos + 1}" if pos < m else f"T{m + n - pos}"


def label_position(label: str, m: int, n: int) -> int:
    side, idx = label[0], int(label[1:])
    if side == "B" and 1 <= idx <= m:
        return idx - 1
    if side == "T" and 1 <= idx <= n:
        return m + n - idx
    raise ValueError(f"boundary point {label} out of range for {m} -> {n}")


def _unbend(pos: int, m: int, n: int) -> Tuple[str, int]:
    """Bent position to (side, 0-based index along that side)."""
    return ("B", pos) if pos < m else ("T", m + n - 1 - pos)


def _bend(side: str, idx: int, m: int, n: int) -> int:
    return idx if side == "B" else m + n - 1 - idx


# ---------------------------------------------------------------------------


class DTLMorphism:
    """A rational linear combination of canonical diagrams ``c^m -> c^n``."""

    __slots__ = ("m", "n", "terms")

    def __init__(self, m: int, n: int, terms: Optional[Mapping[Arcs, object]] = None, *, normal: bool = True):
        self.m = m
        self.n = n
        out: Dict[Arcs, Q] = {}
        for arcs, c in (terms or {}).items():
            c = frac(c)
            if not c:
                continue
            if normal:
                out[arcs] = out.get(arcs, 0) + c
            else:
                for na, nc in normalize(_canon(arcs)):
                    out[na] = out.get(na, 0) + c * nc
        self.terms = {k: v for k, v in out.items() if v}

    @classmethod
    def from_raw(cls, m: int, n: int, arcs: Iterable[Arc], loops: Sequence[int] = (), coef=1) -> "DTLMorphism":
        """Build from an arbitrary dotted matching plus closed loops (given by dot counts)."""
        arcs = _canon(arcs)
        _check_planar(arcs, m + n)
        c = frac(coef)
        for d in loops:
            if d == 0:
                c *= 2
            else:
                return cls(m, n)
        return cls(m, n, {arcs: c}, normal=False)

    @classmethod
    def zero(cls, m: int, n: int) -> "DTLMorphism":
        return cls(m, n)

    @property
    def signature(self) -> Tuple[int, int]:
        return (self.m, self.n)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, DTLMorphism) and self.signature == other.signature and self.terms == other.terms

    def __hash__(self):
        return hash((self.m, self.n, frozenset(self.terms.items())))

    def _check_same(self, other: "DTLMorphism") -> None:
        if self.signature != other.signature:
            raise SignatureError(f"signature mismatch {self.signature} vs {other.signature}")

    def __add__(self, other: "DTLMorphism") -> "DTLMorphism":
        self._check_same(other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return DTLMorphism(self.m, self.n, t)

    def __neg__(self) -> "DTLMorphism":
        return self.scale(-1)

    def __sub__(self, other: "DTLMorphism") -> "DTLMorphism":
        return self + (-other)

    def scale(self, c) -> "DTLMorphism":
        c = frac(c)
        return DTLMorphism(self.m, self.n, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, c) -> "DTLMorphism":
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "DTLMorphism") -> "DTLMorphism":
        return compose(self, other)

    def tensor(self, other: "DTLMorphism") -> "DTLMorphism":
        return tensor(self, other)

    def degree_components(self) -> Dict[int, "DTLMorphism"]:
        out: Dict[int, Dict[Arcs, Q]] = {}
        for k, v in self.terms.items():
            out.setdefault(diagram_degree(k), {})[k] = v
        return {d: DTLMorphism(self.m, self.n, t) for d, t in out.items()}

    def degrees(self) -> List[int]:
        return sorted({diagram_degree(k) for k in self.terms})

    def __repr__(self) -> str:
        if not self.terms:
            return f"0 : {self.m} -> {self.n}"
        return "\n".join(f"{v} * {format_diagram(k, self.m, self.n)}" for k, v in sorted(self.terms.items()))

    def to_text(self) -> str:
        return format_morphism(self)


def diagram_degree(arcs: Arcs) -> int:
    return 2 * sum(d for _, _, d in arcs)


# ---------------------------------------------------------------------------
# composition and tensor product


@lru_cache(maxsize=200_000)
def _compose_diagrams(f: Arcs, fm: int, fn: int, g: Arcs, gm: int) -> Tuple[Tuple[Arcs, Q], ...]:
    """Stack ``g: c^gm -> c^fm`` below ``f: c^fm -> c^fn`` and normalize."""
    # Label endpoints: ("g", bent pos) and ("f", bent pos).  Middle points are
    # g-tops and f-bottoms; they are glued: g top j (0-based) <-> f bottom j.
    gmate: Dict[int, Tuple[int, int]] = {}
    for a, b, d in g:
        gmate[a] = (b, d)
        gmate[b] = (a, d)
    fmate: Dict[int, Tuple[int, int]] = {}
    for a, b, d in f:
        fmate[a] = (b, d)
        fmate[b] = (a, d)
    mid = fm
    # final bent positions: bottom = g bottoms (0..gm-1), top = f tops
    new_arcs: List[Arc] = []
    used_f = set()
    used_g = set()

    def g_is_mid(pos: int) -> bool:
        return pos >= gm

    def g_mid_index(pos: int) -> int:
        return gm + mid - 1 - pos

    def f_is_mid(pos: int) -> bool:
        return pos < mid

    def f_mid_to_g(pos: int) -> int:
        return gm + mid - 1 - pos

    def final_pos_g(pos: int) -> int:
        return pos

    def final_pos_f(pos: int) -> int:
        # f top j (0-based) is at f bent pos fm + fn - 1 - j; final pos gm + fn - 1 - j
        return pos - fm + gm

    def walk(start_side: str, pos: int) -> Tuple[int, int]:
        dots = 0
        side = start_side
        while True:
            if side == "g":
                used_g.add(pos)
                other, d = gmate[pos]
                used_g.add(other)
                dots += d
                if not g_is_mid(other):
                    return final_pos_g(other), dots
                side, pos = "f", g_mid_index(other)
            else:
                used_f.add(pos)
                other, d = fmate[pos]
                used_f.add(other)
                dots += d
                if not f_is_mid(other):
                    return final_pos_f(other), dots
                side, pos = "g", f_mid_to_g(other)

    for p in range(gm):
        if p in used_g:
            continue
        end, dots = walk("g", p)
        new_arcs.append((min(p, end), max(p, end), dots))
    for p in range(fm, fm + fn):
        if p in used_f:
            continue
        end, dots = walk("f", p)
        a = final_pos_f(p)
        new_arcs.append((min(a, end), max(a, end), dots))
    coef = Q(1)
    for p in range(mid):
        if p in used_f:
            continue
        # closed loop through the middle
        dots = 0
        pos, side = p, "f"
        while True:
            if side == "f":
                if pos in used_f:
                    break
                used_f.add(pos)
                other, d = fmate[pos]
                used_f.add(other)
                dots += d
                side, pos = "g", f_mid_to_g(other)
            else:
                used_g.add(pos)
                other, d = gmate[pos]
                used_g.add(other)
                dots += d
                side, pos = "f", g_mid_index(other)
        if dots:
            return ()
        coef *= 2
    return tuple((k, v * coef) for k, v in normalize(_canon(new_arcs)))


def compose(f: DTLMorphism, g: DTLMorphism) -> DTLMorphism:
    """``f ∘ g`` for ``g: c^p -> c^m`` and ``f: c^m -> c^n``."""
    if g.n != f.m:
        raise SignatureError(f"cannot compose {f.signature} after {g.signature}")
    out: Dict[Arcs, Q] = {}
    for fa, fc in f.terms.items():
        for ga, gc in g.terms.items():
            c = fc * gc
            for k, v in _compose_diagrams(fa, f.m, f.n, ga, g.m):
                out[k] = out.get(k, 0) + c * v
    return DTLMorphism(g.m, f.n, out)


@lru_cache(maxsize=100_000)
def _tensor_diagrams(f: Arcs, fm: int, fn: int, g: Arcs, gm: int, gn: int) -> Tuple[Tuple[Arcs, Q], ...]:
    m, n = fm + gm, fn + gn

    def fpos(p: int) -> int:
        side, i = _unbend(p, fm, fn)
        return _bend(side, i, m, n)

    def gpos(p: int) -> int:
        side, i = _unbend(p, gm, gn)
        return _bend(side, i + (fm if side == "B" else fn), m, n)

    arcs = []
    for a, b, d in f:
        x, y = fpos(a), fpos(b)
        arcs.append((min(x, y), max(x, y), d))
    for a, b, d in g:
        x, y = gpos(a), gpos(b)
        arcs.append((min(x, y), max(x, y), d))
    return normalize(_canon(arcs))


def tensor(f: DTLMorphism, g: DTLMorphism) -> DTLMorphism:
    """Horizontal juxtaposition, ``f`` on the left."""
    out: Dict[Arcs, Q] = {}
    for fa, fc in f.terms.items():
        for ga, gc in g.terms.items():
            for k, v in _tensor_diagrams(fa, f.m, f.n, ga, g.m, g.n):
                out[k] = out.get(k, 0) + fc * gc * v
    return DTLMorphism(f.m + g.m, f.n + g.n, out)


def tensor_all(*fs: DTLMorphism) -> DTLMorphism:
    out = identity(0)
    for f in fs:
        out = tensor(out, f)
    return out


def _remap(f: DTLMorphism, m: int, n: int, pos_map) -> DTLMorphism:
    out: Dict[Arcs, Q] = {}
    for arcs, c in f.terms.items():
        new = []
        for a, b, d in arcs:
            x, y = pos_map(a), pos_map(b)
            new.append((min(x, y), max(x, y), d))
        for k, v in normalize(_canon(new)):
            out[k] = out.get(k, 0) + c * v
    return DTLMorphism(m, n, out)


def reflect(f: DTLMorphism) -> DTLMorphism:
    """Mirror image across a vertical axis."""
    m, n = f.m, f.n

    def pos(p: int) -> int:
        side, i = _unbend(p, m, n)
        return _bend(side, (m if side == "B" else n) - 1 - i, m, n)

    return _remap(f, m, n, pos)


def flip(f: DTLMorphism) -> DTLMorphism:
    """Mirror image across a horizontal axis: ``c^m -> c^n`` becomes ``c^n -> c^m``."""
    m, n = f.m, f.n

    def pos(p: int) -> int:
        side, i = _unbend(p, m, n)
        return _bend("T" if side == "B" else "B", i, n, m)

    return _remap(f, n, m, pos)


# ---------------------------------------------------------------------------
# generators


@lru_cache(maxsize=None)
def identity(n: int) -> DTLMorphism:
    return DTLMorphism(n, n, {tuple((i, 2 * n - 1 - i, 0) for i in range(n)): 1})


def cup() -> DTLMorphism:
    """``c^0 -> c^2``."""
    return DTLMorphism(0, 2, {((0, 1, 0),): 1})


def cap() -> DTLMorphism:
    """``c^2 -> c^0``."""
    return DTLMorphism(2, 0, {((0, 1, 0),): 1})


def dot() -> DTLMorphism:
    return DTLMorphism(1, 1, {((0, 1, 1),): 1})


def dotted_cup() -> DTLMorphism:
    return DTLMorphism(0, 2, {((0, 1, 1),): 1})


def dotted_cap() -> DTLMorphism:
    return DTLMorphism(2, 0, {((0, 1, 1),): 1})


def _sandwich(left: int, f: DTLMorphism, right: int) -> DTLMorphism:
    return tensor(tensor(identity(left), f), identity(right))


@lru_cache(maxsize=None)
def cup_at(n: int, i: int) -> DTLMorphism:
    """``c^n -> c^{n+2}`` with a cup on top strands ``i, i+1`` (1-based)."""
    if not 1 <= i <= n + 1:
        raise IndexError("cup position out of range")
    return _sandwich(i - 1, cup(), n - i + 1)


@lru_cache(maxsize=None)
def cap_at(n: int, i: int) -> DTLMorphism:
    """``c^n -> c^{n-2}`` capping bottom strands ``i, i+1`` (1-based)."""
    if not 1 <= i <= n - 1:
        raise IndexError("cap position out of range")
    return _sandwich(i - 1, cap(), n - i - 1)


@lru_cache(maxsize=None)
def dot_at(n: int, i: int) -> DTLMorphism:
    """A dot on strand ``i`` (1-based) of ``c^n``."""
    if not 1 <= i <= n:
        raise IndexError("dot position out of range")
    return _sandwich(i - 1, dot(), n - i)


def signed_dot(n: int, i: int) -> DTLMorphism:
    """The signed variable ``(-1)^{i-1} x_i``."""
    return dot_at(n, i).scale((-1) ** (i - 1))


@lru_cache(maxsize=None)
def turnback(n: int, i: int) -> DTLMorphism:
    """``cup ∘ cap`` on strands ``i, i+1`` of ``c^n``."""
    return compose(cup_at(n - 2, i), cap_at(n, i))


@lru_cache(maxsize=None)
def braid_generator(n: int, i: int) -> DTLMorphism:
    """The adjacent transposition ``s_i = id - cup∘cap`` on ``c^n``."""
    if not 1 <= i <= n - 1:
        raise IndexError("braid generator index out of range")
    return identity(n) - turnback(n, i)


@lru_cache(maxsize=None)
def central_z(n: int) -> DTLMorphism:
    out = DTLMorphism.zero(n, n)
    for i in range(1, n + 1):
        out = out + signed_dot(n, i)
    return out


def central_s(n: int) -> DTLMorphism:
    return identity(n).scale((-1) ** n)


def power(f: DTLMorphism, k: int) -> DTLMorphism:
    if f.m != f.n:
        raise SignatureError("power of a non-endomorphism")
    out = identity(f.m)
    for _ in range(k):
        out = compose(f, out)
    return out


def permutation_morphism(n: int, word: Sequence[int]) -> DTLMorphism:
    """Product ``s_{w_1} ∘ s_{w_2} ∘ ...`` of adjacent transpositions."""
    out = identity(n)
    for i in word:
        out = compose(out, braid_generator(n, i))
    return out


# ---------------------------------------------------------------------------
# generator words (layers applied bottom to top)

Layer = Tuple[str, int]  # ("cup"|"cap"|"dot", position)


def apply_layer(f: DTLMorphism, layer: Layer) -> DTLMorphism:
    kind, i = layer
    n = f.n
    g = {"cup": cup_at, "cap": cap_at, "dot": dot_at}[kind](n, i)
    return compose(g, f)


def word_to_morphism(m: int, word: Sequence[Layer]) -> DTLMorphism:
    out = identity(m)
    for layer in word:
        out = apply_layer(out, layer)
    return out


def diagram_to_word(arcs: Arcs, m: int, n: int) -> List[Layer]:
    """Factor one (possibly dotted) diagram into cap, dot and cup layers."""
    word: List[Layer] = []
    bottoms: List[int] = list(range(m))  # current bottom boundary, as original bent positions
    mate = {}
    dots = {}
    for a, b, d in arcs:
        mate[a], mate[b] = b, a
        dots[a] = dots[b] = d
    # peel bottom caps: adjacent bottom points joined to each other
    done_dot = set()
    changed = True
    while changed:
        changed = False
        for k in range(len(bottoms) - 1):
            a, b = bottoms[k], bottoms[k + 1]
            if mate[a] == b:
                for _ in range(dots[a]):
                    word.append(("dot", k + 1))
                done_dot.add(a)
                word.append(("cap", k + 1))
                del bottoms[k:k + 2]
                changed = True
                break
    # now every remaining bottom point is a through strand
    for k, a in enumerate(bottoms):
        for _ in range(dots[a]):
            word.append(("dot", k + 1))
        done_dot.add(a)
    # the through strands end at these top points; everything else on top is a cup
    current = [mate[a] for a in bottoms]
    target = [m + n - 1 - j for j in range(n)]  # top points left to right (bent positions)
    # iterative: find target adjacent pairs that are cups, remove them (record), recurse
    remaining = list(target)
    removed: List[Tuple[int, int, int]] = []
    changed = True
    while changed:
        changed = False
        for k in range(len(remaining) - 1):
            a, b = remaining[k], remaining[k + 1]
            if mate[a] == b:
                removed.append((k, a, b))
                del remaining[k:k + 2]
                changed = True
                break
    if remaining != current:
        raise PlanarityError("diagram is not planar")
    for k, a, b in reversed(removed):
        word.append(("cup", k + 1))
        for _ in range(dots[a]):
            word.append(("dot", k + 1))
    return word


def morphism_as_words(f: DTLMorphism) -> List[Tuple[Q, List[Layer]]]:
    return [(c, diagram_to_word(arcs, f.m, f.n)) for arcs, c in sorted(f.terms.items())]


# ---------------------------------------------------------------------------
# text format

_ARC_RE = re.compile(r"arc\(\s*([BT]\d+)\s*,\s*([BT]\d+)\s*,\s*(\d+)\s*\)")


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 1, col: int = 1):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


def format_diagram(arcs: Arcs, m: int, n: int) -> str:
    body = " ".join(
        f"arc({point_label(a, m, n)},{point_label(b, m, n)},{d})" for a, b, d in sorted(arcs)
    )
    return f"{m} {n} ; {body}".rstrip()


def format_morphism(f: DTLMorphism) -> str:
    if not f.terms:
        return f"0 * {f.m} {f.n} ;"
    return "\n".join(f"{c} * {format_diagram(k, f.m, f.n)}" for k, c in sorted(f.terms.items()))


def parse_diagram(text: str, line: int = 1, col0: int = 1) -> Tuple[int, int, Arcs]:
    if ";" not in text:
        raise ParseError("expected 'm n ; arcs'", line, col0)
    head, body = text.split(";", 1)
    parts = head.split()
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise ParseError("signature must be two natural numbers", line, col0)
    m, n = int(parts[0]), int(parts[1])
    arcs = []
    pos = 0
    body_col = col0 + len(head) + 1
    for mt in _ARC_RE.finditer(body):
        gap = body[pos:mt.start()]
        if gap.strip():
            raise ParseError(f"unexpected text {gap.strip()!r}", line, body_col + pos)
        pos = mt.end()
        try:
            a = label_position(mt.group(1), m, n)
            b = label_position(mt.group(2), m, n)
        except ValueError as e:
            raise ParseError(str(e), line, body_col + mt.start()) from None
        arcs.append((min(a, b), max(a, b), int(mt.group(3))))
    if body[pos:].strip():
        raise ParseError(f"unexpected text {body[pos:].strip()!r}", line, body_col + pos)
    try:
        _check_planar(arcs, m + n)
    except PlanarityError as e:
        raise ParseError(str(e), line, col0) from None
    return m, n, _canon(arcs)


def parse_morphism(text: str) -> DTLMorphism:
    """Parse lines ``coeff * m n ; arc(...) ...`` (a bare diagram means coefficient 1)."""
    result: Optional[DTLMorphism] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        s = raw.split("#", 1)[0]
        if not s.strip():
            continue
        coef = Q(1)
        col = 1
        if "*" in s:
            cstr, s2 = s.split("*", 1)
            try:
                coef = Q(cstr.strip())
            except ValueError:
                raise ParseError(f"bad coefficient {cstr.strip()!r}", lineno, 1) from None
            col = len(cstr) + 2
            s = s2
        m, n, arcs = parse_diagram(s, lineno, col)
        term = DTLMorphism(m, n, {arcs: coef}, normal=False)
        if result is None:
            result = term
        else:
            if result.signature != term.signature:
                raise ParseError("terms with different signatures", lineno, col)
            result = result + term
    if result is None:
        raise ParseError("empty input", 1, 1)
    return result
