"""The 2-point category: black strands next to a blue line labelled L or R.

Objects are pairs ``(n, Z)``: ``n`` black strands to the left of a blue line
with side label ``Z``.  dTL acts by placing diagrams on the left.  Besides
that action there are two generators: a dot on the blue line (degree 2,
squaring to zero) and a *merge* of the rightmost black strand into the blue
line, which flips its label (degree 1).

Normal forms:

* same side ``(m, Z) -> (n, Z)``: ``D0 + D1 · y`` where ``y`` is the blue dot
  and ``D0, D1: c^m -> c^n``;
* opposite sides ``(m, Y) -> (n, Z)``: ``merge ∘ (D ⊗ blue)`` with
  ``D: c^m -> c^{n+1}``, the last output strand going into the blue line.

Composition is a finite table derived from the local relations:
a strand entering and leaving the blue line equals a blue dot plus a dot on
the strand; a dot may slide along a merge onto the blue line; and the blue
dot squares to zero.

The independent model used to test all of this is
``Pol(c^n) ⊗ K[y]/(y^2)``, where ``y`` is the blue dot, the merge sends
``x_{n+1} -> y`` and ``1 -> 1``, and the split (a merge bent upward) sends
``a -> x_{n+1} a + y a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from .algebra import Q, RowSpace
from .dtl import (
    DTLMorphism,
    SignatureError,
    basis,
    cap,
    compose,
    cup,
    dot,
    dotted_cap,
    dotted_cup,
    identity,
    tensor,
)
from .karoubi import SYMBOLIC_JW_LIMIT, Check, jones_wenzl
from .polyrep import jw_image_vector, pol_apply, pol_apply_at, popcount, sign_of

SIDES = ("L", "R")


def tau(side: str) -> str:
    """Swap ``L`` and ``R``."""
    if side not in SIDES:
        raise ValueError(f"side must be L or R, not {side!r}")
    return "R" if side == "L" else "L"


@dataclass(frozen=True)
class TpcObject:
    n: int
    side: str

    def __post_init__(self):
        if self.side not in SIDES:
            raise ValueError(f"side must be L or R, not {self.side!r}")
        if self.n < 0:
            raise ValueError("negative strand count")

    def flipped(self) -> "TpcObject":
        return TpcObject(self.n, tau(self.side))


@dataclass(frozen=True)
class TpcMorphism:
    """A morphism in normal form.

    ``parts`` is ``(D0, D1)`` for a same-side morphism ``D0 + D1·y`` and
    ``(D,)`` for a morphism that changes sides.
    """

    source: TpcObject
    target: TpcObject
    parts: Tuple[DTLMorphism, ...]

    def __post_init__(self):
        m, n = self.source.n, self.target.n
        if self.same_side:
            if len(self.parts) != 2 or any(p.signature != (m, n) for p in self.parts):
                raise SignatureError("same-side morphisms are pairs c^m -> c^n")
        else:
            if len(self.parts) != 1 or self.parts[0].signature != (m, n + 1):
                raise SignatureError("side-changing morphisms are single maps c^m -> c^{n+1}")

    @property
    def same_side(self) -> bool:
        return self.source.side == self.target.side

    def __matmul__(self, other: "TpcMorphism") -> "TpcMorphism":
        return tpc_compose(self, other)

    def __add__(self, other: "TpcMorphism") -> "TpcMorphism":
        if (self.source, self.target) != (other.source, other.target):
            raise SignatureError("cannot add morphisms with different signatures")
        return TpcMorphism(self.source, self.target, tuple(a + b for a, b in zip(self.parts, other.parts)))

    def __sub__(self, other: "TpcMorphism") -> "TpcMorphism":
        return self + other.scale(-1)

    def scale(self, c) -> "TpcMorphism":
        return TpcMorphism(self.source, self.target, tuple(p.scale(c) for p in self.parts))

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.parts)

    def degrees(self) -> List[int]:
        """Degrees of the homogeneous pieces (blue dot 2, merge 1)."""
        if self.same_side:
            d0, d1 = self.parts
            return sorted(set(d0.degrees()) | {d + 2 for d in d1.degrees()})
        return sorted({d + 1 for d in self.parts[0].degrees()})

    def flipped(self) -> "TpcMorphism":
        """Apply the involution swapping ``L`` and ``R``."""
        return TpcMorphism(self.source.flipped(), self.target.flipped(), self.parts)


# ---------------------------------------------------------------------------
# constructors


def tpc_identity(obj: TpcObject) -> TpcMorphism:
    return TpcMorphism(obj, obj, (identity(obj.n), DTLMorphism.zero(obj.n, obj.n)))


def blue_dot(obj: TpcObject) -> TpcMorphism:
    return TpcMorphism(obj, obj, (DTLMorphism.zero(obj.n, obj.n), identity(obj.n)))


def same_side(D0: DTLMorphism, side: str, D1: Optional[DTLMorphism] = None) -> TpcMorphism:
    D1 = DTLMorphism.zero(D0.m, D0.n) if D1 is None else D1
    return TpcMorphism(TpcObject(D0.m, side), TpcObject(D0.n, side), (D0, D1))


def merged(D: DTLMorphism, source_side: str) -> TpcMorphism:
    """``merge ∘ (D ⊗ blue)``: the last output strand of ``D`` goes into the blue line."""
    if D.n < 1:
        raise SignatureError("a side change needs an output strand to merge")
    return TpcMorphism(TpcObject(D.m, source_side), TpcObject(D.n - 1, tau(source_side)), (D,))


def merge(n: int, source_side: str) -> TpcMorphism:
    """``(n+1, Y) -> (n, τY)``: the rightmost strand enters the blue line."""
    return merged(identity(n + 1), source_side)


def split(n: int, source_side: str) -> TpcMorphism:
    """``(n, Y) -> (n+1, τY)``: a strand leaves the blue line, upward."""
    return merged(tensor(identity(n), cup()), source_side)


def act(a: DTLMorphism, f: TpcMorphism) -> TpcMorphism:
    """The module action ``a ⊗ f``: place ``a`` to the left of ``f``."""
    src = TpcObject(a.m + f.source.n, f.source.side)
    tgt = TpcObject(a.n + f.target.n, f.target.side)
    return TpcMorphism(src, tgt, tuple(tensor(a, p) for p in f.parts))


# ---------------------------------------------------------------------------
# composition


def _dot_last(p: int) -> DTLMorphism:
    return tensor(identity(p), dot())


def tpc_compose(f: TpcMorphism, g: TpcMorphism) -> TpcMorphism:
    """``f ∘ g`` in normal form."""
    if g.target != f.source:
        raise SignatureError(f"cannot compose: {g.target} is not {f.source}")
    src, tgt = g.source, f.target
    if f.same_side and g.same_side:
        f0, f1 = f.parts
        g0, g1 = g.parts
        # the blue dot commutes with black diagrams and squares to zero
        return TpcMorphism(src, tgt, (compose(f0, g0), compose(f0, g1) + compose(f1, g0)))
    if f.same_side:
        f0, f1 = f.parts
        (G,) = g.parts
        # a blue dot above a merge slides down onto the merged strand
        D = compose(tensor(f0, identity(1)), G) + compose(tensor(f1, dot()), G)
        return TpcMorphism(src, tgt, (D,))
    if g.same_side:
        (F,) = f.parts
        g0, g1 = g.parts
        p = tgt.n
        D = compose(F, g0) + compose(_dot_last(p), compose(F, g1))
        return TpcMorphism(src, tgt, (D,))
    (F,) = f.parts
    (G,) = g.parts
    p = tgt.n
    # write the upper merge as a cap against a split; split∘merge = y + x
    stacked = compose(tensor(F, identity(1)), G)
    D1 = compose(tensor(identity(p), cap()), stacked)
    D0 = compose(tensor(identity(p), dotted_cap()), stacked)
    return TpcMorphism(src, tgt, (D0, D1))


# ---------------------------------------------------------------------------
# the polynomial model Pol ⊗ K[y]/y^2

Vec = Dict[Tuple[int, int], Q]  # (monomial mask, power of y) -> coefficient


def _merge_vec(vec: Vec, n: int) -> Vec:
    """Merge strand ``n+1`` (bit ``n``) into the blue line: ``x -> y``, ``1 -> 1``."""
    out: Vec = {}
    bit = 1 << n
    for (mk, e), c in vec.items():
        if mk & bit:
            if e:
                continue
            key = (mk & ~bit, 1)
        else:
            key = (mk, e)
        out[key] = out.get(key, 0) + c
    return {k: v for k, v in out.items() if v}


def _apply_dtl(D: DTLMorphism, vec: Vec) -> Vec:
    out: Vec = {}
    for (mk, e), c in vec.items():
        for tm, v in pol_apply(D, {mk: Q(1)}).items():
            out[(tm, e)] = out.get((tm, e), 0) + c * v
    return {k: v for k, v in out.items() if v}


def tpc_apply(f: TpcMorphism, vec: Vec) -> Vec:
    """Action of ``f`` in the model ``Pol(c^n) ⊗ K[y]/y^2``."""
    if f.same_side:
        d0, d1 = f.parts
        out = _apply_dtl(d0, vec)
        for (mk, e), c in _apply_dtl(d1, vec).items():
            if not e:
                out[(mk, 1)] = out.get((mk, 1), 0) + c
        return {k: v for k, v in out.items() if v}
    return _merge_vec(_apply_dtl(f.parts[0], vec), f.target.n)


def tpc_matrix(f: TpcMorphism) -> Dict[Tuple[int, int], Vec]:
    """Images of all basis vectors ``x_S y^e`` of the source."""
    return {(mk, e): tpc_apply(f, {(mk, e): Q(1)}) for mk in range(1 << f.source.n) for e in (0, 1)}


def model_equal(f: TpcMorphism, g: TpcMorphism) -> bool:
    if (f.source, f.target) != (g.source, g.target):
        return False
    return tpc_matrix(f) == tpc_matrix(g)


def _flatten(mat: Dict[Tuple[int, int], Vec]) -> Dict[Tuple, Q]:
    return {(src, tgt): v for src, img in mat.items() for tgt, v in img.items()}


# ---------------------------------------------------------------------------
# normal-form bases and dimensions


def normal_form_basis(m: int, n: int, Y: str, Z: str) -> List[TpcMorphism]:
    src, tgt = TpcObject(m, Y), TpcObject(n, Z)
    out = []
    if Y == Z:
        for e in (0, 1):
            for arcs in basis(m, n):
                d = DTLMorphism(m, n, {arcs: 1})
                z = DTLMorphism.zero(m, n)
                out.append(TpcMorphism(src, tgt, (d, z) if e == 0 else (z, d)))
    else:
        for arcs in basis(m, n + 1):
            out.append(TpcMorphism(src, tgt, (DTLMorphism(m, n + 1, {arcs: 1}),)))
    return out


def model_rank(morphisms: List[TpcMorphism]) -> int:
    rs = RowSpace()
    for f in morphisms:
        rs.add(_flatten(tpc_matrix(f)))
    return rs.dim


def dim_check(m: int, n: int, Y: str, Z: str) -> bool:
    """Normal forms are independent in the model and number ``2·|B(m,n)|`` or ``|B(m,n+1)|``."""
    nf = normal_form_basis(m, n, Y, Z)
    expected = 2 * len(basis(m, n)) if Y == Z else len(basis(m, n + 1))
    return len(nf) == expected and model_rank(nf) == expected


def hom_dim(m: int, n: int, Y: str, Z: str) -> int:
    return model_rank(normal_form_basis(m, n, Y, Z))


# ---------------------------------------------------------------------------
# elementary handle slides


def slide_component(n: int, side: str) -> TpcMorphism:
    """``P_n • Z -> P_{n+1} • τZ``: a strand leaves the blue line into ``JW_{n+1}``."""
    D = compose(tensor(jones_wenzl(n + 1), identity(1)), compose(tensor(identity(n), cup()), jones_wenzl(n)))
    return merged(D, side)


def transition(n: int, side: str) -> TpcMorphism:
    """``U_n • id_Z``: the dotted-cup transition ``P_n -> P_{n+2}``."""
    D = compose(jones_wenzl(n + 2), compose(tensor(identity(n), dotted_cup()), jones_wenzl(n)))
    return same_side(D, side)


def dot_on_blue(n: int, side: str) -> TpcMorphism:
    """``id_{P_n} • x_Z``."""
    jw = jones_wenzl(n)
    return same_side(DTLMorphism.zero(n, n), side, jw)


# Coordinates: P_n • Z has the model basis b_j^(n) y^e; a morphism between
# such objects is a matrix on these bases.  This is the route used for large n.

Coords = Dict[Tuple[Tuple[int, int], Tuple[int, int]], Q]


def _read_jw(vec: Vec) -> Dict[Tuple[int, int], Q]:
    """Apply ``JW`` on the black strands and read off ``b_j y^e``."""
    out: Dict[Tuple[int, int], Q] = {}
    for (mk, e), c in vec.items():
        key = (popcount(mk), e)
        out[key] = out.get(key, 0) + c * sign_of(mk)
    return {k: v for k, v in out.items() if v}


def _coords(action, n: int) -> Coords:
    out: Coords = {}
    for j in range(n + 1):
        for e in (0, 1):
            vec = {(mk, e): c for mk, c in jw_image_vector(n, j).items()}
            for key, v in _read_jw(action(vec)).items():
                out[(key, (j, e))] = v
    return out


def _local(f: DTLMorphism, offset: int):
    def run(vec: Vec) -> Vec:
        out: Vec = {}
        for e in (0, 1):
            part = {mk: c for (mk, ee), c in vec.items() if ee == e}
            for mk, c in pol_apply_at(f, part, offset).items():
                out[(mk, e)] = out.get((mk, e), 0) + c
        return out

    return run


@lru_cache(maxsize=None)
def slide_coords(n: int) -> Coords:
    """Coordinates of :func:`slide_component` (independent of the side label)."""
    split_up = _local(cup(), n)
    return _coords(lambda v: _merge_vec(split_up(v), n + 1), n)


@lru_cache(maxsize=None)
def transition_coords(n: int) -> Coords:
    return _coords(_local(dotted_cup(), n), n)


@lru_cache(maxsize=None)
def blue_dot_coords(n: int) -> Coords:
    def mult_y(vec: Vec) -> Vec:
        return {(mk, 1): c for (mk, e), c in vec.items() if e == 0}

    return _coords(mult_y, n)


def coords_mul(a: Coords, b: Coords) -> Coords:
    """Matrix product ``a ∘ b``."""
    by_mid: Dict[Tuple[int, int], List[Tuple[Tuple[int, int], Q]]] = {}
    for (mid, src), v in b.items():
        by_mid.setdefault(mid, []).append((src, v))
    out: Coords = {}
    for (tgt, mid), v in a.items():
        for src, w in by_mid.get(mid, ()):
            out[(tgt, src)] = out.get((tgt, src), 0) + v * w
    return {k: v for k, v in out.items() if v}


def _jw_coords_of(f: TpcMorphism) -> Coords:
    n = f.source.n
    return _coords(lambda v: tpc_apply(f, v), n)


def handle_slide(k: int, side: str, N: int, symbolic: Optional[bool] = None) -> List[Check]:
    """Certify the handle-slide ladder ``ω_k • Z -> ω_{k+1} • τZ`` through level ``N``.

    For each level ``n = k + 2i`` checks that the ladder square commutes,
    that two consecutive slides compose to the transition ``U_n`` of the
    source system, and that the slide commutes with the blue dot.  Every
    check runs on model coordinates; when the projectors involved are small
    enough (``symbolic``), the same identities are also checked on normal
    forms computed with :func:`tpc_compose`.
    """
    if k < 0:
        raise ValueError("winding number must be non-negative")
    tau(side)
    checks: List[Check] = []
    for i in range(N + 1):
        n = k + 2 * i
        params = {"k": k, "side": side, "level": i, "n": n}
        sym = (n + 3 <= SYMBOLIC_JW_LIMIT) if symbolic is None else symbolic
        route = "symbolic+model" if sym else "model"
        h, h_up = slide_coords(n), slide_coords(n + 1)
        # (a) ladder square, only between consecutive levels
        if i < N:
            lhs = coords_mul(transition_coords(n + 1), h)
            rhs = coords_mul(slide_coords(n + 2), transition_coords(n))
            ok = lhs == rhs
            if sym:
                a = tpc_compose(transition(n + 1, tau(side)), slide_component(n, side))
                b = tpc_compose(slide_component(n + 2, side), transition(n, side))
                ok &= _same(a, b)
            checks.append(Check("ladder square", dict(params, route=route), bool(ok)))
        # (b) double slide equals the transition
        ok = coords_mul(h_up, h) == transition_coords(n)
        if sym:
            a = tpc_compose(slide_component(n + 1, tau(side)), slide_component(n, side))
            ok &= _same(a, transition(n, side))
        checks.append(Check("double slide is transition", dict(params, route=route), bool(ok)))
        # (c) naturality with respect to the blue dot
        ok = coords_mul(h, blue_dot_coords(n)) == coords_mul(blue_dot_coords(n + 1), h)
        if sym:
            a = tpc_compose(slide_component(n, side), dot_on_blue(n, side))
            b = tpc_compose(dot_on_blue(n + 1, tau(side)), slide_component(n, side))
            ok &= _same(a, b)
        checks.append(Check("slide commutes with blue dot", dict(params, route=route), bool(ok)))
    return checks


def _same(a: TpcMorphism, b: TpcMorphism) -> bool:
    """Equal as normal forms, and equal in the model."""
    return (a.source, a.target) == (b.source, b.target) and a.parts == b.parts and model_equal(a, b)


def slide_dot_naturality(k: int, N: int) -> List[Check]:
    return [c for side in SIDES for c in handle_slide(k, side, N) if c.name == "slide commutes with blue dot"]
