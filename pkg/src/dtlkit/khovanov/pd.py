"""Planar diagram codes: parsing, orientations, writhe and blackboard cabling.

A crossing is written ``X a b c d``: the four edge labels around the crossing
listed counterclockwise, starting with the incoming under-strand (so the
under-strand runs from ``a`` to ``c``).  The over-strand runs from ``d`` to
``b`` at a positive crossing and from ``b`` to ``d`` at a negative one; when
the orientation of the over-strand cannot be propagated from elsewhere it may
be fixed explicitly with ``X+`` or ``X-``.  ``LOOP k`` adds ``k`` split
crossingless circles.  ``#`` starts a comment.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

Crossing = Tuple[int, int, int, int]


class PDError(ValueError):
    """Raised for malformed or inconsistent planar diagram codes."""


@dataclass(frozen=True)
class LinkDiagram:
    crossings: Tuple[Crossing, ...]
    signs: Tuple[int, ...]
    loops: int = 0
    name: str = ""
    _components: Tuple[Tuple[int, ...], ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if len(self.signs) != len(self.crossings):
            raise PDError("one sign per crossing is required")
        counts: Dict[int, int] = {}
        for x in self.crossings:
            if len(x) != 4:
                raise PDError(f"crossing {x} does not have four edges")
            for e in x:
                counts[e] = counts.get(e, 0) + 1
        bad = sorted(e for e, c in counts.items() if c != 2)
        if bad:
            raise PDError(f"edges {bad} do not appear exactly twice")
        if any(s not in (1, -1) for s in self.signs):
            raise PDError("crossing signs must be +1 or -1")
        if self.loops < 0:
            raise PDError("negative loop count")
        if not self._components:
            object.__setattr__(self, "_components", _trace_components(self.crossings, self.signs))

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    @property
    def n_plus(self) -> int:
        return sum(1 for s in self.signs if s > 0)

    @property
    def n_minus(self) -> int:
        return sum(1 for s in self.signs if s < 0)

    @property
    def writhe(self) -> int:
        """Blackboard framing of the diagram."""
        return sum(self.signs)

    @property
    def edges(self) -> List[int]:
        return sorted({e for x in self.crossings for e in x})

    @property
    def components(self) -> Tuple[Tuple[int, ...], ...]:
        """Edges of each component with crossings, in the order of travel."""
        return self._components

    @property
    def n_components(self) -> int:
        return len(self._components) + self.loops

    def over_strand(self, i: int) -> Tuple[int, int]:
        """(incoming, outgoing) edges of the over-strand at crossing ``i``."""
        a, b, c, d = self.crossings[i]
        return (d, b) if self.signs[i] > 0 else (b, d)

    def successor(self) -> Dict[int, int]:
        """Map each edge to the next edge along the orientation."""
        nxt: Dict[int, int] = {}
        for i, (a, b, c, d) in enumerate(self.crossings):
            nxt[a] = c
            inc, out = self.over_strand(i)
            nxt[inc] = out
        return nxt

    def to_pd(self) -> str:
        lines = [f"# {self.name}"] if self.name else []
        for x, s in zip(self.crossings, self.signs):
            lines.append(("X+ " if s > 0 else "X- ") + " ".join(map(str, x)))
        if self.loops:
            lines.append(f"LOOP {self.loops}")
        return "\n".join(lines) + "\n"

    def relabel(self, mapping: Dict[int, int]) -> "LinkDiagram":
        xs = tuple(tuple(mapping.get(e, e) for e in x) for x in self.crossings)
        return LinkDiagram(xs, self.signs, self.loops, self.name)

    def mirror(self) -> "LinkDiagram":
        """Switch every crossing; the under-strand becomes the old over-strand."""
        xs = []
        for i, (a, b, c, d) in enumerate(self.crossings):
            inc, _ = self.over_strand(i)
            xs.append((d, a, b, c) if inc == d else (b, c, d, a))
        return LinkDiagram(tuple(xs), tuple(-s for s in self.signs), self.loops, self.name + "*" if self.name else "")

    def disjoint_union(self, other: "LinkDiagram") -> "LinkDiagram":
        offset = max(self.edges, default=0)
        moved = other.relabel({e: e + offset for e in other.edges})
        return LinkDiagram(self.crossings + moved.crossings, self.signs + moved.signs, self.loops + other.loops)


def _trace_components(crossings, signs) -> Tuple[Tuple[int, ...], ...]:
    nxt: Dict[int, int] = {}
    for (a, b, c, d), s in zip(crossings, signs):
        nxt[a] = c
        inc, out = (d, b) if s > 0 else (b, d)
        nxt[inc] = out
    seen = set()
    comps = []
    for start in sorted(nxt):
        if start in seen:
            continue
        comp = []
        e = start
        while e not in seen:
            seen.add(e)
            comp.append(e)
            if e not in nxt:
                raise PDError(f"edge {e} has no successor; orientations are inconsistent")
            e = nxt[e]
        if e != start:
            raise PDError("orientations are inconsistent along a component")
        comps.append(tuple(comp))
    if len(seen) != len(nxt) or set(nxt.values()) != set(nxt):
        raise PDError("orientations are inconsistent along a component")
    return tuple(comps)


def infer_signs(crossings: Sequence[Crossing], fixed: Optional[Dict[int, int]] = None) -> Tuple[int, ...]:
    """Propagate orientations from the under-strands to decide every crossing sign.

    Each edge occurs in two slots; one of them is an incoming slot.  Under
    slots are known, the two over slots of a crossing are opposite, and the
    two slots of an edge are opposite.
    """
    fixed = dict(fixed or {})
    slots: Dict[int, List[Tuple[int, int]]] = {}
    for i, x in enumerate(crossings):
        for k, e in enumerate(x):
            slots.setdefault(e, []).append((i, k))
    incoming: Dict[Tuple[int, int], bool] = {}
    for i in range(len(crossings)):
        incoming[(i, 0)] = True
        incoming[(i, 2)] = False
        if i in fixed:
            incoming[(i, 3)] = fixed[i] > 0
            incoming[(i, 1)] = fixed[i] < 0
    changed = True
    while changed:
        changed = False
        for e, ss in slots.items():
            if len(ss) != 2:
                raise PDError(f"edge {e} does not appear exactly twice")
            s0, s1 = ss
            for u, v in ((s0, s1), (s1, s0)):
                if u in incoming and v not in incoming:
                    incoming[v] = not incoming[u]
                    changed = True
                elif u in incoming and v in incoming and incoming[u] == incoming[v]:
                    raise PDError(f"edge {e} is incoming (or outgoing) at both ends")
        for i in range(len(crossings)):
            for u, v in (((i, 1), (i, 3)), ((i, 3), (i, 1))):
                if u in incoming and v not in incoming:
                    incoming[v] = not incoming[u]
                    changed = True
                elif u in incoming and incoming.get(v) == incoming[u]:
                    raise PDError(f"over-strand at crossing {i} has inconsistent orientation")
    signs = []
    for i in range(len(crossings)):
        if (i, 3) not in incoming:
            raise PDError(f"orientation of the over-strand at crossing {i} is undetermined; mark it X+ or X-")
        signs.append(1 if incoming[(i, 3)] else -1)
    return tuple(signs)


def parse_pd(text: str, name: str = "") -> LinkDiagram:
    crossings: List[Crossing] = []
    fixed: Dict[int, int] = {}
    loops = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.replace(",", " ").split()
        try:
            if head.upper() in ("X", "X+", "X-"):
                if len(rest) != 4:
                    raise PDError(f"line {lineno}: a crossing needs four edge labels")
                if head[1:] == "+":
                    fixed[len(crossings)] = 1
                elif head[1:] == "-":
                    fixed[len(crossings)] = -1
                crossings.append(tuple(int(t) for t in rest))
            elif head.upper() == "LOOP":
                loops += int(rest[0]) if rest else 1
            else:
                raise PDError(f"line {lineno}: unknown record {head!r}")
        except (ValueError, IndexError) as exc:
            if isinstance(exc, PDError):
                raise
            raise PDError(f"line {lineno}: {exc}") from exc
    signs = infer_signs(crossings, fixed)
    for i, s in fixed.items():
        if signs[i] != s:
            raise PDError(f"crossing {i}: explicit sign contradicts the propagated orientation")
    return LinkDiagram(tuple(crossings), signs, loops, name)


def load_pd(path: Union[str, os.PathLike]) -> LinkDiagram:
    path = Path(path)
    return parse_pd(path.read_text(), name=path.stem)


def builtin_names() -> List[str]:
    folder = resources.files("dtlkit.khovanov") / "data"
    return sorted(p.name[:-3] for p in folder.iterdir() if p.name.endswith(".pd"))


def builtin(name: str) -> LinkDiagram:
    """One of the bundled diagrams, e.g. ``"trefoil"`` or ``"figure_eight"``."""
    path = resources.files("dtlkit.khovanov") / "data" / f"{name}.pd"
    if not path.is_file():
        raise KeyError(f"no bundled diagram named {name!r}; choose from {builtin_names()}")
    return parse_pd(path.read_text(), name=name)


def unlink(n: int) -> LinkDiagram:
    return LinkDiagram((), (), n, f"unlink{n}")


# ---------------------------------------------------------------------------
# cabling


@dataclass(frozen=True)
class Cable:
    """A blackboard cable together with the labels of its parallel copies.

    ``copies[e][j]`` is the label of the ``j``-th copy (counted from the left
    of the oriented edge ``e``) in the cabled diagram.
    """

    diagram: LinkDiagram
    base: LinkDiagram
    multiplicities: Tuple[int, ...]
    copies: Dict[int, Tuple[int, ...]]

    def site(self, edge: int, i: int) -> Tuple[int, int]:
        """Labels of copies ``i`` and ``i + 1`` (1-based) over the base edge ``edge``."""
        return self.copies[edge][i - 1], self.copies[edge][i]


def cable(d: LinkDiagram, multiplicities: Optional[Sequence[int]] = None, n: Optional[int] = None) -> Cable:
    """Blackboard parallel of ``d`` with alternating orientations.

    The ``j``-th copy of a component (counting from the left of its
    orientation) runs parallel to it for odd ``j`` and against it for even
    ``j``.  Crossing loops (``LOOP``) are listed after the components with
    crossings in ``multiplicities``.
    """
    ncomp = d.n_components
    if multiplicities is None:
        multiplicities = [1 if n is None else n] * ncomp
    multiplicities = tuple(int(m) for m in multiplicities)
    if len(multiplicities) != ncomp:
        raise PDError(f"expected {ncomp} multiplicities, got {len(multiplicities)}")
    if any(m < 0 for m in multiplicities):
        raise PDError("multiplicities must be non-negative")
    comp_of: Dict[int, int] = {}
    for ci, comp in enumerate(d.components):
        for e in comp:
            comp_of[e] = ci
    mult = {e: multiplicities[comp_of[e]] for e in comp_of}
    fresh = itertools.count(1)
    copies = {e: tuple(next(fresh) for _ in range(mult[e])) for e in d.edges}

    def parallel(j: int) -> int:
        # copy j (0-based) runs with the base orientation when j is even
        return 1 if j % 2 == 0 else -1

    crossings: List[Crossing] = []
    signs: List[int] = []
    for i, (a, b, c, dd) in enumerate(d.crossings):
        nu, no = mult[a], mult[b]
        if nu == 0 or no == 0:
            # strands of one side vanish; the other side's copies pass straight through
            if nu == 0 and no:
                inc, out = d.over_strand(i)
                _join(copies, inc, out)
            elif no == 0 and nu:
                _join(copies, a, c)
            continue
        over_east = d.signs[i] > 0  # over-strand runs from d (west) to b (east)
        # x positions 0..nu-1 from west to east; y positions 0..no-1 from south to north
        vert = {(x, y): next(fresh) for x in range(nu) for y in range(no - 1)}
        horiz = {(x, y): next(fresh) for x in range(nu - 1) for y in range(no)}

        def over_copy(y: int) -> int:
            # copy index of the over-strand lying at height y
            return no - 1 - y if over_east else y

        def south(x, y):
            return copies[a][x] if y == 0 else vert[(x, y - 1)]

        def north(x, y):
            return copies[c][x] if y == no - 1 else vert[(x, y)]

        def west(x, y):
            return copies[dd][over_copy(y)] if x == 0 else horiz[(x - 1, y)]

        def east(x, y):
            return copies[b][over_copy(y)] if x == nu - 1 else horiz[(x, y)]

        for x in range(nu):
            for y in range(no):
                up = parallel(x)
                ov = parallel(over_copy(y))
                if up > 0:
                    crossings.append((south(x, y), east(x, y), north(x, y), west(x, y)))
                else:
                    crossings.append((north(x, y), west(x, y), south(x, y), east(x, y)))
                signs.append(d.signs[i] * up * ov)
    loops = sum(multiplicities[len(d.components):])
    # a component whose every crossing was with a deleted component becomes split loops
    alive = {comp_of[e] for i, x in enumerate(d.crossings) if mult[x[0]] and mult[x[1]] for e in x}
    loops += sum(multiplicities[ci] for ci in range(len(d.components)) if ci not in alive)
    name = f"{d.name}^{','.join(map(str, multiplicities))}" if d.name else ""
    cabled = LinkDiagram(tuple(crossings), tuple(signs), loops, name)
    used = set(cabled.edges)
    kept = {e: v for e, v in copies.items() if v and all(t in used for t in v)}
    return Cable(cabled, d, multiplicities, kept)


def _join(copies: Dict[int, Tuple[int, ...]], e: int, f: int) -> None:
    """Identify the copies of edges ``e`` and ``f`` when a crossing disappears."""
    old, new = copies[f], copies[e]
    ren = dict(zip(old, new))
    for k, v in copies.items():
        copies[k] = tuple(ren.get(t, t) for t in v)
