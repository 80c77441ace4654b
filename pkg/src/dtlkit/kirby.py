"""Kirby objects as truncated directed systems of symmetric objects.

``ω_k`` is the directed system ``q^{-k}P_k -> q^{-k-2}P_{k+2} -> ...`` whose
transitions are the dotted-cup maps ``U``.  Everything here is computed at a
finite truncation level ``N`` (stages ``0..N``) and reported together with
the range in which the answer is already stable.

Grading: ``q^s X`` has its degrees raised by ``s``, so a map ``X -> Y`` of
raw degree ``e`` has degree ``e + t - s`` as a map ``q^s X -> q^t Y``.  Raw
degrees of dTL morphisms are twice the number of dots.  In ``Pol(P_n)`` the
vector ``b_j`` sits in degree ``2j - n``.

Morphisms between symmetric objects are handled through their coordinates on
the bases ``b_j`` (:class:`~dtlkit.karoubi.KarCoords`), and spaces of such
morphisms are spanned by words in the generators ``U``, ``D`` and ``z``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import LaurentPoly, Q, RowSpace, nullspace
from .dtl import DTLMorphism, basis, dot, dotted_cup, identity
from .karoubi import Check, KarCoords, coords_D, coords_U, coords_z
from .kdtl import (
    KMorphism,
    admissible_levels,
    at,
    completed_equal,
    decomp_family,
    family_at,
    kcompose,
    kdtl,
    kid,
    kzero,
    ktensor,
    merge_right,
    nf_equal,
    phi_vectors,
    pi,
    sigma,
    split_right,
)
from .polyrep import jw_image_vector, pol_apply, pol_apply_at, popcount, sign_of

# ---------------------------------------------------------------------------
# generator coordinates


_U, _D, _z = coords_U, coords_D, coords_z


def _vec(c: KarCoords) -> Dict[Tuple[int, int], Q]:
    return c.as_dict()


# ---------------------------------------------------------------------------
# truncated directed systems


@dataclass(frozen=True)
class TruncIndObject:
    """Stages ``q^{shift_i} P_{n_i}`` joined by ``U``; ``k`` is the winding number."""

    k: int
    stages: Tuple[Tuple[int, int], ...]

    @property
    def level(self) -> int:
        return len(self.stages) - 1

    def strands(self, i: int) -> int:
        return self.stages[i][1]

    def shift(self, i: int) -> int:
        return self.stages[i][0]

    def transition(self, i: int) -> KarCoords:
        """The map from stage ``i`` to stage ``i+1``."""
        return _U(self.strands(i))

    def transitions_are_homogeneous(self) -> bool:
        """Every transition has degree 0 once the shifts are taken into account."""
        for i in range(self.level):
            n = self.strands(i)
            raw = 2  # one dot
            if raw + self.shift(i + 1) - self.shift(i) != 0 or self.strands(i + 1) != n + 2:
                return False
        return True

    def restrict(self, start: int) -> "TruncIndObject":
        """Drop the first ``start`` stages (a final subsystem)."""
        return TruncIndObject(self.k + 2 * start, self.stages[start:])

    def describe(self) -> str:
        parts = []
        for s, n in self.stages:
            parts.append(f"q^{s} P{n}" if s else f"P{n}")
        return " -> ".join(parts)


def kirby_object(k: int, N: int) -> TruncIndObject:
    """``q^{-k}P_k -> q^{-k-2}P_{k+2} -> ... -> q^{-k-2N}P_{k+2N}``."""
    if k < 0 or N < 0:
        raise ValueError("winding number and level must be non-negative")
    return TruncIndObject(k, tuple((-(k + 2 * i), k + 2 * i) for i in range(N + 1)))


def total_kirby(N: int) -> Tuple[TruncIndObject, TruncIndObject]:
    """The total Kirby color, kept as its two summands ``(ω0, ω1)``."""
    return kirby_object(0, N), kirby_object(1, N)


def shift_isomorphism_holds(k: int, N: int) -> bool:
    """Past its first stage, ``ω_k`` at level ``N`` is ``ω_{k+2}`` at level ``N-1``."""
    if N < 1:
        raise ValueError("need at least two stages")
    return kirby_object(k, N).restrict(1) == kirby_object(k + 2, N - 1)


# ---------------------------------------------------------------------------
# the polynomial representation on Kirby objects


@dataclass
class KirbyPolReport:
    k: int
    N: int
    union: LaurentPoly
    value: LaurentPoly
    transitions_full_rank: List[bool]
    transitions_homogeneous: bool

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "N": self.N,
            "value": self.value.to_json(),
            "union_of_images": self.union.to_json(),
            "transitions_full_rank": self.transitions_full_rank,
            "transitions_homogeneous": self.transitions_homogeneous,
        }


@lru_cache(maxsize=None)
def _pol_transition(n: int) -> Dict[int, Dict[int, Q]]:
    """``Pol(U_n)`` on image bases: column ``j`` is the image of ``b_j^(n)`` in ``b^(n+2)``.

    The dotted cup is applied to the polynomial ``b_j^(n)`` and the result is
    read off in the image of ``Pol(JW_{n+2})``.
    """
    cols: Dict[int, Dict[int, Q]] = {}
    for j in range(n + 1):
        acc: Dict[int, Q] = {}
        for mk, v in pol_apply_at(dotted_cup(), jw_image_vector(n, j), n).items():
            t = popcount(mk)
            acc[t] = acc.get(t, 0) + v * sign_of(mk)
        cols[j] = {t: v for t, v in acc.items() if v}
    return cols


def kirby_pol_report(k: int, N: int) -> KirbyPolReport:
    """Images of all stages of ``Pol(ω_k)`` pushed into the last stage.

    ``union`` is the graded dimension of the union of the images (the colimit
    through level ``N``, since every transition is injective); its degrees are
    ``0, -2, ..., -2(k+2N)``.  ``value`` is the same space in the grading
    centred on the last stage, restricted to non-positive degrees.
    """
    obj = kirby_object(k, N)
    full_rank = []
    # push every basis vector of every stage to the top stage
    pushed: List[Tuple[int, Dict[int, Q]]] = []  # (shifted degree, vector in top basis)
    top = obj.strands(obj.level)
    for i in range(obj.level + 1):
        n = obj.strands(i)
        vecs = {j: {j: Q(1)} for j in range(n + 1)}
        degs = {j: 2 * j - n + obj.shift(i) for j in range(n + 1)}
        for step in range(i, obj.level):
            m = obj.strands(step)
            cols = _pol_transition(m)
            new = {}
            for j, v in vecs.items():
                out: Dict[int, Q] = {}
                for a, c in v.items():
                    for b, w in cols[a].items():
                        out[b] = out.get(b, 0) + c * w
                new[j] = {b: w for b, w in out.items() if w}
            vecs = new
        pushed.extend((degs[j], vecs[j]) for j in range(n + 1))
    for i in range(obj.level):
        n = obj.strands(i)
        cols = _pol_transition(n)
        rs = RowSpace()
        ok = True
        for j in range(n + 1):
            col = cols[j]
            ok &= rs.add(col)
            # degree preservation: b_j goes to b_{j+2} only
            ok &= set(col) <= {j + 2}
        full_rank.append(bool(ok))
    spaces: Dict[int, RowSpace] = {}
    for d, v in pushed:
        spaces.setdefault(d, RowSpace()).add(v)
    union = LaurentPoly({d: s.dim for d, s in spaces.items() if s.dim})
    centred = union.shift(top)
    value = LaurentPoly({d: c for d, c in centred.items() if d <= 0})
    return KirbyPolReport(k, N, union, value, full_rank, obj.transitions_are_homogeneous())


def pol_of_kirby(k: int, N: int) -> LaurentPoly:
    """Graded dimension of ``Pol(ω_k)`` through level ``N``.

    Reported in the grading centred on the last stage and restricted to
    non-positive degrees, e.g. ``1 + q^-2 + q^-4`` for ``k=0, N=2`` and
    ``q^-1 + q^-3`` for ``k=1, N=1``.  The unnormalized union of images is
    available from :func:`kirby_pol_report`.
    """
    return kirby_pol_report(k, N).value


# ---------------------------------------------------------------------------
# spaces of maps between symmetric objects


def _words(a: int, b: int, length: int, ceiling: int):
    """Words in U/D/z of the given length from height ``a`` to ``b``, staying in ``[0, ceiling]``."""
    if length == 0:
        if a == b:
            yield ()
        return
    for g, step in (("U", 2), ("D", -2), ("z", 0)):
        h = a + step
        if h < 0 or h > ceiling or (g == "D" and a < 2):
            continue
        if abs(h - b) > 2 * (length - 1):
            continue
        for rest in _words(h, b, length - 1, ceiling):
            yield (g,) + rest


def _word_coords(a: int, word: Sequence[str]) -> KarCoords:
    out = KarCoords.identity(a)
    h = a
    for g in word:
        if g == "U":
            out, h = _U(h) @ out, h + 2
        elif g == "D":
            out, h = _D(h) @ out, h - 2
        else:
            out = _z(h) @ out
    return out


@lru_cache(maxsize=None)
def hom_space(a: int, b: int, raw_degree: int) -> Tuple[KarCoords, ...]:
    """A basis of ``Hom(P_a, P_b)`` in the given raw degree.

    Spanned by all generator words of that degree that stay below
    ``max(a, b) + 2``; linearly dependent words are dropped.
    """
    if raw_degree < 0 or raw_degree % 2:
        return ()
    rs = RowSpace()
    out = []
    for w in _words(a, b, raw_degree // 2, max(a, b) + 2):
        c = _word_coords(a, w)
        if not c.is_zero() and rs.add(_vec(c)):
            out.append(c)
    return tuple(out)


# ---------------------------------------------------------------------------
# endomorphisms of Kirby objects


@dataclass(frozen=True)
class TruncIndMorphism:
    """A level-preserving ladder ``f_i: stage_i -> stage_i`` of a fixed degree."""

    source: TruncIndObject
    target: TruncIndObject
    degree: int
    components: Tuple[Optional[KarCoords], ...]

    def is_zero(self) -> bool:
        return all(c is None or c.is_zero() for c in self.components)

    def commutes(self) -> bool:
        for i in range(len(self.components) - 1):
            a, b = self.components[i], self.components[i + 1]
            lhs = _U(self.target.strands(i)) @ a if a is not None else None
            rhs = b @ _U(self.source.strands(i)) if b is not None else None
            if _vec_or_zero(lhs) != _vec_or_zero(rhs):
                return False
        return True


def _vec_or_zero(c: Optional[KarCoords]) -> Dict:
    return {} if c is None else _vec(c)


def end_kirby(k: int, N: int, max_degree: int) -> Dict[int, List[TruncIndMorphism]]:
    """Bases of the degree-``d`` ladder endomorphisms of ``ω_k`` at level ``N``.

    The components are unknown combinations of the spanning words at each
    stage; commutation with the transitions is solved as a linear system.
    """
    obj = kirby_object(k, N)
    out: Dict[int, List[TruncIndMorphism]] = {}
    for d in range(max_degree + 1):
        bases = [hom_space(obj.strands(i), obj.strands(i), d) for i in range(obj.level + 1)]
        unknowns = [(i, t) for i, b in enumerate(bases) for t in range(len(b))]
        rows: Dict[Tuple, Dict] = {}
        for i in range(obj.level):
            n = obj.strands(i)
            for t, c in enumerate(bases[i]):
                for key, v in _vec(_U(n) @ c).items():
                    rows.setdefault((i, key), {})[(i, t)] = v
            for t, c in enumerate(bases[i + 1]):
                for key, v in _vec(c @ _U(n)).items():
                    r = rows.setdefault((i, key), {})
                    r[(i + 1, t)] = r.get((i + 1, t), 0) - v
        sols = nullspace(list(rows.values()), unknowns) if unknowns else []
        ladders = []
        for s in sols:
            comps = []
            for i, b in enumerate(bases):
                acc = None
                for t, c in enumerate(b):
                    coef = s.get((i, t), 0)
                    if coef:
                        term = c.scale(coef)
                        acc = term if acc is None else acc + term
                comps.append(acc)
            ladders.append(TruncIndMorphism(obj, obj, d, tuple(comps)))
        out[d] = ladders
    return out


def end_kirby_dimensions(k: int, N: int, max_degree: int) -> LaurentPoly:
    ends = end_kirby(k, N, max_degree)
    return LaurentPoly({d: len(v) for d, v in ends.items() if v})


# ---------------------------------------------------------------------------
# maps out of Kirby objects


@dataclass
class VanishingReport:
    k: int
    m: int
    N: int
    max_degree: int
    level_dims: Dict[int, LaurentPoly]
    lower_bounds: Dict[int, int]
    bound_respected: bool
    vanishing_level: Dict[int, Optional[int]]
    limit_dims: LaurentPoly

    @property
    def certified(self) -> bool:
        return self.bound_respected and all(v is not None for v in self.vanishing_level.values())

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "m": self.m,
            "N": self.N,
            "level_dims": {str(i): p.to_json() for i, p in self.level_dims.items()},
            "lower_bounds": {str(i): b for i, b in self.lower_bounds.items()},
            "bound_respected": self.bound_respected,
            "vanishing_level": {str(d): v for d, v in self.vanishing_level.items()},
            "limit_dims": self.limit_dims.to_json(),
            "certified": self.certified,
        }


def hom_from_kirby_vanishing(k: int, m: int, N: int, max_degree: int = 8) -> VanishingReport:
    """Degreewise vanishing of ``Hom(ω_k, P_m)`` through level ``N``.

    At level ``i`` (``a = k + 2i`` strands) the maps ``q^{-a}P_a -> P_m`` live
    in degrees ``>= a + |a - m|``; the computed dimensions are checked against
    that bound.  Degree ``d`` is certified to vanish in the limit once some
    level ``i <= N`` has ``a + |a - m| > d``, because the bound only grows with
    ``i``.  ``limit_dims`` is the truncated inverse limit, i.e. the last level.
    """
    obj = kirby_object(k, N)
    level_dims: Dict[int, LaurentPoly] = {}
    bounds: Dict[int, int] = {}
    ok = True
    for i in range(obj.level + 1):
        a = obj.strands(i)
        bounds[i] = a + abs(a - m)
        dims = {}
        for d in range(-max_degree, max_degree + 1):
            dim = len(hom_space(a, m, d - a))
            if dim:
                dims[d] = dim
                ok &= d >= bounds[i]
        level_dims[i] = LaurentPoly(dims)
    vanishing: Dict[int, Optional[int]] = {}
    for d in range(-max_degree, max_degree + 1):
        hit = None
        for i in range(obj.level + 1):
            if bounds[i] > d and all(level_dims[j][d] == 0 for j in range(i, obj.level + 1)):
                hit = i
                break
        vanishing[d] = hit
    return VanishingReport(k, m, N, max_degree, level_dims, bounds, bool(ok), vanishing, level_dims[obj.level])


# ---------------------------------------------------------------------------
# maps into Kirby objects


def hom_into_stage(n: int, a: int) -> LaurentPoly:
    """Graded dimension of ``Hom(c^n, q^{-a}P_a)``, from all dTL diagrams."""
    spaces: Dict[int, RowSpace] = {}
    for arcs in basis(n, a):
        raw = 2 * sum(x for _, _, x in arcs)
        f = DTLMorphism(n, a, {arcs: 1})
        vec: Dict[Tuple[int, int], Q] = {}
        for src in range(1 << n):
            for mk, v in pol_apply(f, {src: Q(1)}).items():
                key = (src, popcount(mk))
                vec[key] = vec.get(key, 0) + v * sign_of(mk)
        spaces.setdefault(raw - a, RowSpace()).add({k: v for k, v in vec.items() if v})
    return LaurentPoly({d: s.dim for d, s in spaces.items() if s.dim})


def hom_into_total_kirby(n: int, N: int) -> LaurentPoly:
    """Graded dimension of ``Hom(c^n, ω)`` computed at the last stage of level ``N``.

    Each transition is injective, so the truncated colimit is the last stage.
    """
    total = LaurentPoly()
    for k in (0, 1):
        if (n - k) % 2 == 0:
            total = total + hom_into_stage(n, kirby_object(k, N).strands(N))
    return total


def pol_dimension(n: int) -> LaurentPoly:
    """Graded dimension of ``Pol(c^n) = (q^-1 + q)^n``."""
    out = LaurentPoly({0: 1})
    for _ in range(n):
        out = out * LaurentPoly({-1: 1, 1: 1})
    return out


def pol_dual_dimension(n: int) -> LaurentPoly:
    """Graded dimension of ``Pol(c^n)^*``."""
    return pol_dimension(n).substitute_inverse()


# ---------------------------------------------------------------------------
# Kirby squared and Kirby tensor a strand


def kirby_square(i: int, j: int, M: int) -> dict:
    """Orthogonal idempotent decomposition of ``κi ⊗ κj`` at inclusion pairs ``<= (M, M)``.

    For each pair of levels ``(a, b)`` report which terms ``sigma_n ∘ pi_n``
    survive and whether they sum to the identity.  Separately,
    ``pi_n ∘ sigma_m = δ_nm`` is checked for ``n, m <= M`` at every
    inclusion level of ``κ_{i+j}`` up to ``2M``.
    """
    fam = decomp_family(i, j)
    ident = kid((i, j))
    src = ident.source
    levels_report = {}
    for levels in admissible_levels(src, M):
        a, b = levels
        terms = [n for n in range(a + b + 1) if phi_vectors(at(fam.member(n), levels), src, levels, src)]
        total = family_at(fam, levels)
        identity_ok = nf_equal(total, at(ident, levels), src, levels, src)
        levels_report[levels] = {"terms": terms, "identity": identity_ok}
    ortho = {}
    for n in range(M + 1):
        for m in range(M + 1):
            lhs = kcompose(pi(n, i, j), sigma(m, i, j))
            tl = lhs.target
            rhs = kid(tl) if n == m else kzero(tl, tl)
            ortho[(n, m)] = completed_equal(lhs, rhs, 2 * M)
    return {"levels": levels_report, "orthogonality": ortho}


def strand_pieces(i: int, n: int) -> List[Tuple[Tuple[int, ...], KMorphism, KMorphism]]:
    """The summands of ``κi ⊗ c^n``: ``(dots, G, F)`` with ``F ∘ G`` idempotent.

    ``dots[s]`` is 1 if strand ``s`` carries its dot below the merge, 0 if
    above the split.  ``G`` merges all strands into ``κ_{i+n}``; ``F`` splits
    them off again.
    """
    if n == 0:
        return [((), kid((i % 2,)), kid((i % 2,)))]
    out = []
    black = kdtl(identity(1))
    dotted = kdtl(dot())
    for lab, G, F in strand_pieces(i, n - 1):
        top = (i + n - 1) % 2
        merge, split = merge_right(top), split_right(top + 1)
        kt = kid((top,))
        lower_G = kcompose(merge, kcompose(ktensor(kt, dotted), ktensor(G, black)))
        lower_F = kcompose(ktensor(F, black), split)
        upper_G = kcompose(merge, ktensor(G, black))
        upper_F = kcompose(ktensor(F, black), kcompose(ktensor(kt, dotted), split))
        out.append((lab + (1,), lower_G, lower_F))
        out.append((lab + (0,), upper_G, upper_F))
    return out


def tensor_with_kirby(n: int, k: int, bound: int) -> dict:
    """``κk ⊗ c^n ≅ Pol(c^n) ⊗ κ`` checked through inclusion level ``bound``.

    Reports the summand degrees (the graded multiplicity, to be compared with
    ``Pol(c^n)``) and whether the idempotents ``F ∘ G`` sum to the identity,
    are orthogonal, and split (``G ∘ F = id``).
    """
    pieces = strand_pieces(k, n)
    word = (k % 2,) + ("c",) * n
    ident = kid(word)
    total = None
    for _, G, F in pieces:
        e = kcompose(F, G)
        total = e if total is None else total + e
    sums = completed_equal(total, ident, bound)
    split_ok = True
    ortho = True
    for (la, Ga, Fa), (lb, Gb, Fb) in product(pieces, repeat=2):
        gf = kcompose(Ga, Fb)
        tgt = gf.target
        rhs = kid(tgt) if la == lb else kzero(tgt, tgt)
        split_ok &= completed_equal(gf, rhs, bound)
        if la != lb:
            ortho &= completed_equal(kcompose(kcompose(Fa, Ga), kcompose(Fb, Gb)), kzero(word, word), bound)
    degrees = LaurentPoly({})
    for _, G, _ in pieces:
        degrees = degrees + LaurentPoly({-G.degree: 1})
    return {
        "n": n,
        "k": k,
        "bound": bound,
        "summand_degrees": degrees,
        "pol_dimension": pol_dimension(n),
        "sums_to_identity": sums,
        "orthogonal": bool(ortho),
        "split": bool(split_ok),
    }


# ---------------------------------------------------------------------------
# checks


def kirby_checks(N: int = 5, max_degree: Optional[int] = None) -> List[Check]:
    out: List[Check] = []
    for k in (0, 1):
        for n in range(N + 1):
            rep = kirby_pol_report(k, n)
            expected = LaurentPoly({-(k + 2 * n) + 2 * t: 1 for t in range((k + 2 * n) // 2 + 1)})
            out.append(Check("Pol of Kirby object", {"k": k, "N": n}, rep.value == expected))
            union = LaurentPoly({-2 * t: 1 for t in range(k + 2 * n + 1)})
            out.append(Check("Pol union of images", {"k": k, "N": n}, rep.union == union))
            out.append(Check("transitions full rank", {"k": k, "N": n}, all(rep.transitions_full_rank)))
    return out
