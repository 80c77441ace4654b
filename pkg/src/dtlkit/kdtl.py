"""Diagrammatics with Kirby-object strands.

Objects are words in the letters ``"c"`` (a black strand) and ``0``/``1``
(the Kirby objects ``κ0``/``κ1``).  Besides ordinary dTL morphisms there are
three new generators, all landing in a Kirby letter:

* ``iota(n)``: ``c^n -> κ_{n mod 2}``, degree ``-n``;
* ``mu(i, j)``: ``κi ⊗ κj -> κ_{i+j}``, degree 0;
* ``kdot(i)``: ``κi -> κi``, degree 2.

Morphisms are kept as expression trees.  A morphism out of a word containing
Kirby letters is only ever inspected after precomposing with a *canonical
inclusion* ``iota_a`` on each Kirby letter; the result is a finite sum
``iota_pattern ∘ D`` with ``D`` an ordinary dTL morphism (see :func:`at`).
Two such sums are compared in the polynomial representation after pushing
every Kirby block to a common level with ``iota_a = iota_{a+2} ∘ (id_a ⊗ dotted cup)``.
Infinite sums are explicit families ``n -> KMorphism`` compared level by level.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import comb, factorial
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .algebra import Q, frac
from .dtl import (
    DTLMorphism,
    SignatureError,
    central_z,
    compose,
    cup,
    dot,
    dotted_cup,
    identity,
    reflect,
    tensor,
    tensor_all,
)
from .karoubi import Check, KarMorphism, KarObject, jones_wenzl
from .polyrep import jw_image_vector, pol_apply_at, popcount, sign_of

Letter = Union[str, int]
KWord = Tuple[Letter, ...]
Pattern = Tuple[int, ...]


class ParityError(ValueError):
    pass


class InfiniteSourceError(ValueError):
    pass


def parse_word(text: Union[str, Sequence]) -> KWord:
    """``"c k0 k1"`` or ``("c", 0, 1)`` -> ``("c", 0, 1)``."""
    if isinstance(text, str):
        items = text.replace(",", " ").split()
    else:
        items = list(text)
    out: List[Letter] = []
    for it in items:
        if it in ("c", "C"):
            out.append("c")
        elif it in (0, 1):
            out.append(int(it))
        elif isinstance(it, str) and it.lower() in ("k0", "κ0", "0"):
            out.append(0)
        elif isinstance(it, str) and it.lower() in ("k1", "κ1", "1"):
            out.append(1)
        else:
            raise ValueError(f"unknown letter {it!r}")
    return tuple(out)


def word_str(word: KWord) -> str:
    return " ".join("c" if x == "c" else f"k{x}" for x in word) or "1"


def kappa_positions(word: KWord) -> Tuple[int, ...]:
    return tuple(i for i, x in enumerate(word) if x != "c")


def is_finite(word: KWord) -> bool:
    return not kappa_positions(word)


def strands(word: KWord, levels: Sequence[int]) -> int:
    return word.count("c") + sum(levels)


def admissible_levels(word: KWord, bound: int) -> List[Tuple[int, ...]]:
    """All inclusion levels ``a_t <= bound`` with ``a_t`` of the parity of the t-th Kirby letter."""
    ranges = [range(x % 2, bound + 1, 2) for x in word if x != "c"]
    return [tuple(p) for p in product(*ranges)]


# ---------------------------------------------------------------------------
# expression trees


@dataclass(frozen=True)
class KMorphism:
    source: KWord
    target: KWord
    kind: str
    args: tuple = ()
    degree: Optional[int] = None

    # -- algebra ---------------------------------------------------------
    def __matmul__(self, other: "KMorphism") -> "KMorphism":
        return kcompose(self, other)

    def __add__(self, other: "KMorphism") -> "KMorphism":
        return klin([(1, self), (1, other)])

    def __sub__(self, other: "KMorphism") -> "KMorphism":
        return klin([(1, self), (-1, other)])

    def __neg__(self) -> "KMorphism":
        return klin([(-1, self)])

    def scale(self, c) -> "KMorphism":
        return klin([(c, self)])

    def tensor(self, other: "KMorphism") -> "KMorphism":
        return ktensor(self, other)

    def at(self, levels: Sequence[int] = ()) -> NormalForm:
        return at(self, tuple(levels))

    def __repr__(self) -> str:
        return f"KMorphism({word_str(self.source)} -> {word_str(self.target)}, {self.kind})"


def _norm_letter(x: Letter) -> Letter:
    return "c" if x == "c" else int(x) % 2


def kid(word) -> KMorphism:
    w = tuple(_norm_letter(x) for x in (word if isinstance(word, tuple) else parse_word(word)))
    return KMorphism(w, w, "id", (), 0)


def kdtl(f: DTLMorphism) -> KMorphism:
    degs = f.degrees()
    return KMorphism(("c",) * f.m, ("c",) * f.n, "dtl", (f,), degs[0] if len(degs) == 1 else None)


def iota(n: int) -> KMorphism:
    if n < 0:
        raise ValueError("iota needs n >= 0")
    return KMorphism(("c",) * n, (n % 2,), "iota", (n,), -n)


def mu(i: int, j: int) -> KMorphism:
    i, j = i % 2, j % 2
    return KMorphism((i, j), ((i + j) % 2,), "mu", (i, j), 0)


def kdot(i: int) -> KMorphism:
    i %= 2
    return KMorphism((i,), (i,), "kdot", (i,), 2)


def kcompose(f: KMorphism, g: KMorphism) -> KMorphism:
    if f.source != g.target:
        raise SignatureError(f"cannot compose {word_str(f.source)} with {word_str(g.target)}")
    deg = None if f.degree is None or g.degree is None else f.degree + g.degree
    return KMorphism(g.source, f.target, "comp", (f, g), deg)


def ktensor(f: KMorphism, g: KMorphism) -> KMorphism:
    deg = None if f.degree is None or g.degree is None else f.degree + g.degree
    return KMorphism(f.source + g.source, f.target + g.target, "tensor", (f, g), deg)


def ktensor_all(*fs: KMorphism) -> KMorphism:
    out = fs[0]
    for f in fs[1:]:
        out = ktensor(out, f)
    return out


def kchain(*fs: KMorphism) -> KMorphism:
    """``fs[0] ∘ fs[1] ∘ ...``."""
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = kcompose(f, out)
    return out


def klin(terms: Iterable[Tuple[object, KMorphism]]) -> KMorphism:
    terms = [(frac(c), f) for c, f in terms]
    if not terms:
        raise ValueError("empty linear combination; use kzero")
    s, t = terms[0][1].source, terms[0][1].target
    for _, f in terms:
        if (f.source, f.target) != (s, t):
            raise SignatureError("linear combination of morphisms with different signatures")
    degs = {f.degree for _, f in terms}
    return KMorphism(s, t, "lin", tuple(terms), degs.pop() if len(degs) == 1 else None)


def kzero(source, target) -> KMorphism:
    return KMorphism(tuple(source), tuple(target), "lin", ())


def kpower(f: KMorphism, k: int) -> KMorphism:
    out = kid(f.source)
    for _ in range(k):
        out = kcompose(f, out)
    return out


# ---------------------------------------------------------------------------
# evaluation at canonical inclusions


@dataclass(frozen=True)
class Chain:
    """A dTL morphism ``c^m -> c^n`` kept as a sequence of local factors.

    Each factor ``(offset, f)`` acts on the strands ``offset .. offset+f.m-1``
    and is the identity elsewhere; factors are applied first to last.  A
    factor may also be an integer ``w``, standing for the central element
    ``z`` on ``w`` strands.  The composite is only formed when asked for
    (:meth:`morphism`), since the polynomial model can apply the factors one
    at a time.
    """

    m: int
    n: int
    factors: Tuple[Tuple[int, Union[DTLMorphism, int]], ...] = ()

    @classmethod
    def of(cls, f: DTLMorphism) -> "Chain":
        return cls(f.m, f.n, ((0, f),))

    @classmethod
    def z(cls, w: int) -> "Chain":
        return cls(w, w, ((0, w),))

    def then(self, other: "Chain") -> "Chain":
        """``other ∘ self``."""
        if other.m != self.n:
            raise SignatureError("chain signatures do not match")
        return Chain(self.m, other.n, self.factors + other.factors)

    def beside(self, other: "Chain") -> "Chain":
        """``self ⊗ other``."""
        shifted = tuple((off + self.n, f) for off, f in other.factors)
        return Chain(self.m + other.m, self.n + other.n, self.factors + shifted)

    def morphism(self) -> DTLMorphism:
        out = identity(self.m)
        width = self.m
        for off, f in self.factors:
            if isinstance(f, int):
                f = central_z(f)
            local = tensor_all(identity(off), f, identity(width - off - f.m))
            out = compose(local, out)
            width += f.n - f.m
        return out

    def apply(self, poly: Dict[int, Q]) -> Dict[int, Q]:
        cur = dict(poly)
        for off, f in self.factors:
            if isinstance(f, int):
                cur = _shifted_z(cur, off, f)
            else:
                cur = pol_apply_at(f, cur, off)
        return cur


def _shifted_z(poly: Dict[int, Q], off: int, w: int) -> Dict[int, Q]:
    out: Dict[int, Q] = {}
    for mk, c in poly.items():
        for i in range(w):
            bit = 1 << (off + i)
            if not mk & bit:
                out[mk | bit] = out.get(mk | bit, 0) + (c if i % 2 == 0 else -c)
    return {k: v for k, v in out.items() if v}


Term = Tuple[Q, Chain]
NormalForm = Dict[Pattern, Tuple[Term, ...]]


def _acc(out: Dict[Pattern, List[Term]], p: Pattern, c, ch: Chain) -> None:
    if c:
        out.setdefault(p, []).append((frac(c), ch))


def _freeze(out: Dict[Pattern, List[Term]]) -> NormalForm:
    return {p: tuple(ts) for p, ts in out.items() if ts}


@lru_cache(maxsize=100_000)
def at(f: KMorphism, levels: Tuple[int, ...]) -> NormalForm:
    """``f ∘ (iota_levels)`` as ``{pattern: terms}`` meaning ``sum iota_pattern ∘ D``.

    ``levels`` assigns a level to each Kirby letter of the source; the
    returned patterns assign a number of strands to every letter of the
    target (always 1 for a ``c`` letter).  This is the factorization of any
    morphism out of a finite object as an inclusion after a dTL morphism;
    ``D`` is given as a sum of coefficient-weighted :class:`Chain` terms.
    """
    kp = kappa_positions(f.source)
    if len(levels) != len(kp):
        raise ValueError(f"{len(kp)} inclusion levels expected, got {len(levels)}")
    for pos, a in zip(kp, levels):
        if a < 0 or a % 2 != f.source[pos]:
            raise ParityError(f"level {a} does not match letter κ{f.source[pos]}")
    k = f.kind
    out: Dict[Pattern, List[Term]] = {}
    if k == "id":
        it = iter(levels)
        pat = tuple(1 if x == "c" else next(it) for x in f.source)
        _acc(out, pat, 1, Chain(sum(pat), sum(pat)))
    elif k == "dtl":
        (d,) = f.args
        if not d.is_zero():
            _acc(out, (1,) * d.n, 1, Chain.of(d))
    elif k == "iota":
        (n,) = f.args
        _acc(out, (n,), 1, Chain(n, n))
    elif k == "mu":
        a, b = levels
        _acc(out, (a + b,), 1, Chain(a + b, a + b))
    elif k == "kdot":
        (a,) = levels
        if a:
            _acc(out, (a,), 1, Chain.z(a))
    elif k == "comp":
        g_, h = f.args
        gkp = kappa_positions(g_.source)
        for p, terms in at(h, levels).items():
            outer = at(g_, tuple(p[t] for t in gkp))
            for c1, ch1 in terms:
                for p2, terms2 in outer.items():
                    for c2, ch2 in terms2:
                        _acc(out, p2, c1 * c2, ch1.then(ch2))
    elif k == "tensor":
        g_, h = f.args
        nk = len(kappa_positions(g_.source))
        left, right = at(g_, levels[:nk]), at(h, levels[nk:])
        for (p1, t1), (p2, t2) in product(left.items(), right.items()):
            for c1, ch1 in t1:
                for c2, ch2 in t2:
                    _acc(out, p1 + p2, c1 * c2, ch1.beside(ch2))
    elif k == "lin":
        for c, g_ in f.args:
            for p, terms in at(g_, levels).items():
                for c1, ch in terms:
                    _acc(out, p, c * c1, ch)
    else:  # pragma: no cover
        raise ValueError(f"unknown node {k}")
    return _freeze(out)


def collapse(nf: NormalForm) -> Dict[Pattern, DTLMorphism]:
    """Form the dTL composites: ``{pattern: D}``."""
    out: Dict[Pattern, DTLMorphism] = {}
    for p, terms in nf.items():
        total = None
        for c, ch in terms:
            d = ch.morphism().scale(c)
            total = d if total is None else total + d
        if total is not None and not total.is_zero():
            out[p] = total
    return out


def kdtl_reduce(f: KMorphism) -> Dict[Pattern, DTLMorphism]:
    """Normal form ``iota ∘ D`` of a morphism out of a finite word."""
    if not is_finite(f.source):
        raise InfiniteSourceError("normal forms are defined for finite sources; precompose with inclusions")
    return collapse(at(f, ()))


# ---------------------------------------------------------------------------
# the polynomial model of a normal form

Seg = Tuple
VecKey = Tuple[Seg, ...]


def _input_basis(word: KWord, levels: Sequence[int]) -> List[Tuple[VecKey, Dict[int, Q]]]:
    """Basis of the image of the source projectors, with explicit polynomials."""
    blocks: List[List[Tuple[Seg, Dict[int, Q], int]]] = []
    it = iter(levels)
    for x in word:
        if x == "c":
            blocks.append([(("F", 0), {0: Q(1)}, 1), (("F", 1), {1: Q(1)}, 1)])
        else:
            a = next(it)
            blocks.append([(("B", a, k), jw_image_vector(a, k), a) for k in range(a + 1)])
    out = []
    for choice in product(*blocks):
        key = tuple(c[0] for c in choice)
        poly: Dict[int, Q] = {0: Q(1)}
        shift = 0
        for _, p, w in choice:
            poly = {m1 | (m2 << shift): c1 * c2 for m1, c1 in poly.items() for m2, c2 in p.items()}
            shift += w
        out.append((key, poly))
    return out


def _to_blocks(poly: Dict[int, Q], target: KWord, pattern: Pattern) -> Dict[VecKey, Q]:
    """Apply the target projectors: free monomial -> symmetric-block key."""
    out: Dict[VecKey, Q] = {}
    for mk, c in poly.items():
        segs: List[Seg] = []
        sign = 1
        pos = 0
        for x, w in zip(target, pattern):
            part = (mk >> pos) & ((1 << w) - 1)
            if x == "c":
                segs.append(("F", part))
            else:
                sign *= sign_of(part)
                segs.append(("B", w, popcount(part)))
            pos += w
        key = tuple(segs)
        out[key] = out.get(key, 0) + sign * c
    return out


def push_sign(steps: int) -> int:
    """``iota_a b_k = (-1)^steps iota_{a+2 steps} b_{k+2 steps}`` (dotted-cup transitions)."""
    return -1 if steps % 2 else 1


def _push(vec: Dict[VecKey, Q], levels: Dict[int, int]) -> Dict[VecKey, Q]:
    out: Dict[VecKey, Q] = {}
    for key, c in vec.items():
        segs = list(key)
        sign = 1
        for t, L in levels.items():
            _, a, k = segs[t]
            steps = (L - a) // 2
            sign *= push_sign(steps)
            segs[t] = ("B", L, k + 2 * steps)
        nk = tuple(segs)
        out[nk] = out.get(nk, 0) + sign * c
    return {k: v for k, v in out.items() if v}


def phi_vectors(nf: NormalForm, source: KWord, levels: Sequence[int], target: KWord,
                target_levels: Optional[Dict[int, int]] = None) -> Dict[VecKey, Dict[VecKey, Q]]:
    """The image of ``nf`` in the polynomial representation, target blocks pushed to ``target_levels``."""
    kt = kappa_positions(target)
    if target_levels is None:
        target_levels = {t: max([p[t] for p in nf] or [target[t]]) for t in kt}
    for p in nf:
        for t in kt:
            if p[t] % 2 != target[t]:
                raise ParityError("pattern parity does not match the target word")
            if p[t] > target_levels[t]:
                raise ValueError("target level below a pattern level")
    out: Dict[VecKey, Dict[VecKey, Q]] = {}
    for key, poly in _input_basis(source, levels):
        acc: Dict[VecKey, Q] = {}
        for p, terms in nf.items():
            img: Dict[int, Q] = {}
            for c, ch in terms:
                for mk, v in ch.apply(poly).items():
                    img[mk] = img.get(mk, 0) + c * v
            for k2, v in _push(_to_blocks(img, target, p), target_levels).items():
                acc[k2] = acc.get(k2, 0) + v
        acc = {k: v for k, v in acc.items() if v}
        if acc:
            out[key] = acc
    return out


def nf_equal(a: NormalForm, b: NormalForm, source: KWord, levels: Sequence[int], target: KWord) -> bool:
    kt = kappa_positions(target)
    tl = {t: max([p[t] for p in list(a) + list(b)] or [target[t]]) for t in kt}
    return phi_vectors(a, source, levels, target, tl) == phi_vectors(b, source, levels, target, tl)


def equal_at(f: KMorphism, g: KMorphism, levels: Sequence[int]) -> bool:
    if (f.source, f.target) != (g.source, g.target):
        raise SignatureError("signatures differ")
    levels = tuple(levels)
    return nf_equal(at(f, levels), at(g, levels), f.source, levels, f.target)


def equal_through(f: KMorphism, g: KMorphism, bound: int) -> bool:
    return all(equal_at(f, g, lv) for lv in admissible_levels(f.source, bound))


def is_zero_at(f: KMorphism, levels: Sequence[int]) -> bool:
    return not phi_vectors(at(f, tuple(levels)), f.source, tuple(levels), f.target)


# ---------------------------------------------------------------------------
# evaluation into the Karoubi envelope


def evaluate_phi(f: KMorphism, levels: Sequence[int] = (), target_levels: Optional[Sequence[int]] = None) -> KarMorphism:
    """``phi(f ∘ iota_levels)`` as a morphism of Kar(dTL) at explicit target levels.

    The source object is the tensor product of ``JW_a`` (Kirby letters) and
    identity strands; the target likewise.  Intended for small levels: the
    projectors are computed symbolically.
    """
    levels = tuple(levels)
    nf = collapse(at(f, levels))
    kt = kappa_positions(f.target)
    if target_levels is None:
        tl = {t: max([p[t] for p in nf] or [f.target[t]]) for t in kt}
    else:
        tl = dict(zip(kt, target_levels))
        for t in kt:
            if tl[t] % 2 != f.target[t]:
                raise ParityError("target level parity")

    def proj(word, lv):
        it = iter(lv)
        return tensor_all(*[identity(1) if x == "c" else jones_wenzl(next(it)) for x in word]) if word else identity(0)

    e_src = proj(f.source, levels)
    e_tgt = proj(f.target, [tl[t] for t in kt])
    total = None
    for p, d in nf.items():
        pushes = []
        for t, x in enumerate(f.target):
            if x == "c":
                pushes.append(identity(1))
            else:
                steps = (tl[t] - p[t]) // 2
                g = identity(p[t])
                for _ in range(steps):
                    g = tensor(g, dotted_cup())
                pushes.append(g)
        term = compose(tensor_all(*pushes), d) if pushes else d
        total = term if total is None else total + term
    n_src = strands(f.source, levels)
    n_tgt = strands(f.target, [tl[t] for t in kt])
    if total is None:
        total = DTLMorphism.zero(n_src, n_tgt)
    return KarMorphism(KarObject(n_src, e_src), KarObject(n_tgt, e_tgt), compose(compose(e_tgt, total), e_src))


# ---------------------------------------------------------------------------
# derived generators


def merge_left(i: int) -> KMorphism:
    """A black strand joining ``κi`` from the left: ``c ⊗ κi -> κ_{i+1}``."""
    return kcompose(mu(1, i), ktensor(iota(1), kid((i % 2,))))


def merge_right(i: int) -> KMorphism:
    """``κi ⊗ c -> κ_{i+1}``."""
    return kcompose(mu(i, 1), ktensor(kid((i % 2,)), iota(1)))


def split_left(i: int) -> KMorphism:
    """A black strand leaving ``κi`` to the upper left: ``κi -> c ⊗ κ_{i+1}``."""
    return kcompose(ktensor(kdtl(identity(1)), merge_left(i)), ktensor(kdtl(cup()), kid((i % 2,))))


def split_right(i: int) -> KMorphism:
    """``κi -> κ_{i+1} ⊗ c``."""
    return kcompose(ktensor(merge_right(i), kdtl(identity(1))), ktensor(kid((i % 2,)), kdtl(cup())))


def nested_cups(n: int, outer_dot: bool = False) -> DTLMorphism:
    """``n`` concentric cups ``c^0 -> c^{2n}``; optionally a dot on the outermost one."""
    if n == 0:
        return identity(0)
    arcs = [(j, 2 * n - 1 - j, 0) for j in range(n)]
    if outer_dot:
        arcs[0] = (0, 2 * n - 1, 1)
    return DTLMorphism(0, 2 * n, {tuple(sorted(arcs)): 1})


def rung_cup(n: int, i: int) -> KMorphism:
    """The Kirby cup ``1 -> κi ⊗ κi`` with ``n`` dots missing."""
    i %= 2
    if n % 2 == i:
        return kcompose(ktensor(iota(n), iota(n)), kdtl(nested_cups(n)))
    return kcompose(ktensor(iota(n + 1), iota(n + 1)), kdtl(nested_cups(n + 1, outer_dot=True)))


def rung(n: int, i: int, k: int, l: int) -> KMorphism:
    """Kirby rung with ``n`` dots missing and label ``i``: ``κk ⊗ κl -> κ_{k+i} ⊗ κ_{l+i}``."""
    return kcompose(
        ktensor(mu(k, i), mu(i, l)),
        ktensor_all(kid((k % 2,)), rung_cup(n, i), kid((l % 2,))),
    )


def sigma(n: int, i: int, j: int) -> KMorphism:
    """Inclusion of the n-th summand ``κ_{i+j} -> κi ⊗ κj``."""
    return kcompose(
        ktensor(mu(i + j, j), kid((j % 2,))),
        ktensor(kid(((i + j) % 2,)), rung_cup(n, j)),
    )


def pi(n: int, i: int, j: int) -> KMorphism:
    """Projection to the n-th summand ``κi ⊗ κj -> κ_{i+j}``."""
    c = Q((-1) ** comb(n, 2), factorial(n))
    return kcompose(mu(i, j), ktensor(kid((i % 2,)), kpower(kdot(j), n))).scale(c)


# ---------------------------------------------------------------------------
# left-right reflection


def _kdot_reflection_sign(i: int) -> int:
    return (-1) ** (i - 1)


@lru_cache(maxsize=None)
def kreflect(f: KMorphism) -> KMorphism:
    """Mirror in a vertical line; a dot on a strand of parity ``i`` picks up ``(-1)^(i-1)``.

    Black strands have parity 1, so ordinary dTL morphisms are simply mirrored.
    """
    s, t = tuple(reversed(f.source)), tuple(reversed(f.target))
    k = f.kind
    if k == "id":
        return kid(s)
    if k == "dtl":
        return kdtl(reflect(f.args[0]))
    if k == "iota":
        return f
    if k == "mu":
        i, j = f.args
        return mu(j, i)
    if k == "kdot":
        (i,) = f.args
        return kdot(i).scale(_kdot_reflection_sign(i))
    if k == "comp":
        return kcompose(kreflect(f.args[0]), kreflect(f.args[1]))
    if k == "tensor":
        return ktensor(kreflect(f.args[1]), kreflect(f.args[0]))
    if k == "lin":
        if not f.args:
            return kzero(s, t)
        return klin([(c, kreflect(g)) for c, g in f.args])
    raise ValueError(k)  # pragma: no cover


# ---------------------------------------------------------------------------
# families (infinite sums) and completed equality


@dataclass
class Family:
    """A formal sum ``sum_n member(n)``; ``tag`` names the closed form it encodes."""

    member: Callable[[int], KMorphism]
    tag: str = ""

    def signature(self) -> Tuple[KWord, KWord]:
        m = self.member(0)
        return m.source, m.target


class FinitenessError(ValueError):
    pass


def family_at(fam: Family, levels: Sequence[int], window: int = 2) -> NormalForm:
    """Sum the members that survive precomposition with ``iota_levels``.

    Members are summed until ``window`` consecutive members vanish after the
    total number of strands has been passed; any nonzero member beyond that
    point raises :class:`FinitenessError`.
    """
    src, tgt = fam.signature()
    levels = tuple(levels)
    limit = strands(src, levels) + 1
    out: Dict[Pattern, List[Term]] = {}
    for n in range(limit + window + 1):
        f = fam.member(n)
        nf = at(f, levels)
        if n > limit and phi_vectors(nf, src, levels, tgt):
            raise FinitenessError(f"{fam.tag or 'family'}: member {n} survives inclusion {levels}")
        for p, terms in nf.items():
            for c, ch in terms:
                _acc(out, p, c, ch)
    return _freeze(out)


def completed_equal(lhs, rhs, bound: int) -> bool:
    """Equality in the completed category through inclusion level ``bound``.

    ``lhs``/``rhs`` are :class:`KMorphism` or :class:`Family`.
    """
    def nf(x, lv):
        return family_at(x, lv) if isinstance(x, Family) else at(x, lv)

    def sig(x):
        return x.signature() if isinstance(x, Family) else (x.source, x.target)

    s, t = sig(lhs)
    if sig(rhs) != (s, t):
        raise SignatureError("signatures differ")
    return all(nf_equal(nf(lhs, lv), nf(rhs, lv), s, lv, t) for lv in admissible_levels(s, bound))


# ---------------------------------------------------------------------------
# relation suites


def _check(name: str, params: dict, lhs, rhs, bound: int) -> Check:
    return Check(name, dict(params, bound=bound), completed_equal(lhs, rhs, bound))


def _k(i: int) -> KMorphism:
    return kid((i % 2,))


def _c() -> KMorphism:
    return kdtl(identity(1))


def defining_relations(bound: int) -> List[Check]:
    """The defining relations of the Kirby-strand category, checked through ``phi``."""
    out: List[Check] = []
    unit = iota(0)
    for i in (0, 1):
        out.append(_check("unit left", {"i": i}, kcompose(mu(0, i), ktensor(unit, _k(i))), _k(i), bound))
        out.append(_check("unit right", {"i": i}, kcompose(mu(i, 0), ktensor(_k(i), unit)), _k(i), bound))
    for i, j, k in product((0, 1), repeat=3):
        lhs = kcompose(mu(i + j, k), ktensor(mu(i, j), _k(k)))
        rhs = kcompose(mu(i, j + k), ktensor(_k(i), mu(j, k)))
        out.append(_check("associativity", {"i": i, "j": j, "k": k}, lhs, rhs, bound))
    for i, j in product((0, 1), repeat=2):
        lhs = kcompose(kdot(i + j), mu(i, j))
        rhs = kcompose(mu(i, j), ktensor(kdot(i), _k(j))) + kcompose(mu(i, j), ktensor(_k(i), kdot(j))).scale((-1) ** i)
        out.append(_check("dot Leibniz", {"i": i, "j": j}, lhs, rhs, bound))
    for n in range(bound + 1):
        out.append(_check("dot on inclusion", {"n": n}, kcompose(kdot(n), iota(n)), kcompose(iota(n), kdtl(central_z(n))), bound))
    for i in range(bound + 1):
        for j in range(bound + 1 - i):
            cap_in = kcompose(iota(i + j + 2), kdtl(tensor_all(identity(i), cup(), identity(j))))
            out.append(Check("undotted turnback into inclusion", {"i": i, "j": j}, is_zero_at(cap_in, ())))
            dcap_in = kcompose(iota(i + j + 2), kdtl(tensor_all(identity(i), dotted_cup(), identity(j))))
            out.append(_check("dotted turnback into inclusion", {"i": i, "j": j}, dcap_in, iota(i + j), bound))
            lhs = kcompose(mu(i, j), ktensor(iota(i), iota(j)))
            out.append(_check("inclusions multiply", {"i": i, "j": j}, lhs, iota(i + j), bound))
    return out


def _with_reflection(name: str, params: dict, lhs, rhs, bound: int) -> List[Check]:
    return [
        _check(name, params, lhs, rhs, bound),
        _check(name + " (reflected)", params, kreflect(lhs), kreflect(rhs), bound),
    ]


def black_rung(k: int, l: int, dotted: bool = False) -> KMorphism:
    """A black strand joining ``κk`` (on its right) to ``κl`` (on its left)."""
    return kcompose(
        ktensor(merge_right(k), merge_left(l)),
        ktensor_all(_k(k), kdtl(dotted_cup() if dotted else cup()), _k(l)),
    )


def secondary_relations(bound: int) -> List[Check]:
    out: List[Check] = []
    for i, j in product((0, 1), repeat=2):
        lhs = kcompose(mu(i + 1, j), ktensor(merge_right(i), _k(j)))
        rhs = kcompose(mu(i, j + 1), ktensor(_k(i), merge_left(j)))
        out += _with_reflection("black strand slides through merge", {"i": i, "j": j}, lhs, rhs, bound)
        lhs = kcompose(mu(i + 1, j), ktensor(merge_left(i), _k(j)))
        rhs = kcompose(merge_left(i + j), ktensor(_c(), mu(i, j)))
        out += _with_reflection("black strand passes the merge point", {"i": i, "j": j}, lhs, rhs, bound)
    for i in (0, 1):
        lhs = kcompose(kdot(i + 1), merge_right(i))
        rhs = kcompose(merge_right(i), ktensor(kdot(i), _c())) + kcompose(
            merge_right(i), ktensor(_k(i), kdtl(dot()))
        ).scale((-1) ** i)
        out += _with_reflection("dot slides past a black strand", {"i": i}, lhs, rhs, bound)
        belly = kchain(merge_left(i + 1), ktensor(_c(), merge_left(i)), ktensor(kdtl(cup()), _k(i)))
        out.append(Check("undotted belly vanishes", {"i": i, "bound": bound},
                         all(is_zero_at(belly, lv) for lv in admissible_levels(belly.source, bound))))
        out.append(Check("undotted belly vanishes (reflected)", {"i": i, "bound": bound},
                         all(is_zero_at(kreflect(belly), lv) for lv in admissible_levels(belly.source, bound))))
        dbelly = kchain(merge_left(i + 1), ktensor(_c(), merge_left(i)), ktensor(kdtl(dotted_cup()), _k(i)))
        out += _with_reflection("dotted belly is the identity", {"i": i}, dbelly, _k(i), bound)
        through = kcompose(split_left(i + 1), merge_left(i))
        rhs = kcompose(ktensor(kdtl(dot()), _k(i)), through) + kcompose(through, ktensor(kdtl(dot()), _k(i)))
        out += _with_reflection("black strand past a Kirby strand", {"i": i}, kid(("c", i)), rhs, bound)
    for k, l in product((0, 1), repeat=2):
        both = kcompose(black_rung(k + 1, l + 1, True), black_rung(k, l, True))
        out += _with_reflection("two dotted black rungs", {"k": k, "l": l}, both, kid((k, l)), bound)
        one = kcompose(black_rung(k + 1, l + 1, True), black_rung(k, l)) + kcompose(
            black_rung(k + 1, l + 1), black_rung(k, l, True)
        )
        out += _with_reflection("one dotted black rung of two", {"k": k, "l": l}, one, kzero((k, l), (k, l)), bound)
    return out


def cup_dot_right(n: int, i: int, m: int = 1) -> KMorphism:
    return kcompose(ktensor(_k(i), kpower(kdot(i), m)), rung_cup(n, i))


def cup_dot_left(n: int, i: int, m: int = 1) -> KMorphism:
    return kcompose(ktensor(kpower(kdot(i), m), _k(i)), rung_cup(n, i))


def teardrop(n: int, m: int, i: int) -> KMorphism:
    return kcompose(mu(i, i), cup_dot_right(n, i, m))


def rungs_on_black(n: int, k_exp: int, i: int, j: int, side: str = "left") -> KMorphism:
    """``n`` parallel black rungs from ``κi`` to ``κj`` carrying ``z_n^k_exp`` on one side."""
    z = kdtl(central_z(n)) if n else kid(())
    box = ktensor(z, kdtl(identity(n))) if side == "left" else ktensor(kdtl(identity(n)), z)
    inner = kchain(ktensor(iota(n), iota(n)), kpower(box, k_exp), kdtl(nested_cups(n)))
    return kcompose(ktensor(mu(i, n), mu(n, j)), ktensor_all(_k(i), inner, _k(j)))


def rung_relations(bound: int) -> List[Check]:
    out: List[Check] = []
    for i in (0, 1):
        for n in range(bound + 1):
            lhs = cup_dot_right(n, i)
            rhs = rung_cup(n - 1, i).scale((-1) ** (n - 1) * n) if n else kzero((), (i, i))
            out.append(_check("dot on a Kirby cup removes a hole", {"n": n, "i": i}, lhs, rhs, bound))
            out.append(_check("dot moves across a Kirby cup", {"n": n, "i": i},
                              lhs, cup_dot_left(n, i).scale((-1) ** (i - 1)), bound))
            for m in range(bound + 1):
                rhs = kzero((), (0,)) if n != m else iota(0).scale((-1) ** comb(n, 2) * factorial(n))
                out.append(_check("dotted teardrop", {"n": n, "m": m, "i": i}, teardrop(n, m, i), rhs, bound))
    for n in range(bound + 1):
        for k in range(n + 1):
            for i, j in product((0, 1), repeat=2):
                lhs = rungs_on_black(n, n - k, i, j, "left")
                rhs = rung(k, n, i, j).scale(Q((-1) ** comb(n - k, 2) * factorial(n), factorial(k)))
                out.append(_check("z on black rungs", {"n": n, "k": k, "i": i, "j": j}, lhs, rhs, bound))
                other = rungs_on_black(n, n - k, i, j, "right").scale((-1) ** (k * (n - k)))
                out.append(_check("z on black rungs, other side", {"n": n, "k": k, "i": i, "j": j}, lhs, other, bound))
    return out


def rewire_family(i: int, j: int, k: int, reflected: bool = False) -> Tuple[KMorphism, Family]:
    """Both sides of the rewiring identity on ``κi ⊗ κj ⊗ κk``."""
    lhs = ktensor(_k(i), mu(j, k))

    def member(n: int) -> KMorphism:
        c = Q((-1) ** comb(n, 2), factorial(n))
        moved = ktensor(kcompose(mu(i, j), ktensor(_k(i), kpower(kdot(j), n))), _k(k))
        return kcompose(rung(n, j, i + j, k), moved).scale(c)

    if not reflected:
        return lhs, Family(member, "rewire, n-th term")
    # the mirror image: κk ⊗ κj ⊗ κi with the middle strand joining the right one
    mirrored_lhs = kreflect(ktensor(_k(i), mu(j, k)))

    def mmember(n: int) -> KMorphism:
        return kreflect(member(n))

    return mirrored_lhs, Family(mmember, "rewire (reflected), n-th term")


def decomp_family(i: int, j: int) -> Family:
    return Family(lambda n: kcompose(sigma(n, i, j), pi(n, i, j)), "identity decomposition, n-th term")


def infrel_family(j: int) -> Tuple[KMorphism, Family]:
    """``iota_0 ⊗ id_κj`` as a sum over Kirby cups."""
    lhs = ktensor(iota(0), _k(j))

    def member(n: int) -> KMorphism:
        c = Q((-1) ** comb(n, 2), factorial(n))
        return kcompose(ktensor(mu(j, j), _k(j)), ktensor(kpower(kdot(j), n), rung_cup(n, j))).scale(c)

    return lhs, Family(member, "unit expansion, n-th term")


def rewire_relations(bound: int) -> List[Check]:
    out = []
    for i, j, k in product((0, 1), repeat=3):
        lhs, fam = rewire_family(i, j, k)
        out.append(_check("rewire", {"i": i, "j": j, "k": k}, lhs, fam, bound))
        lhs, fam = rewire_family(i, j, k, reflected=True)
        out.append(_check("rewire (reflected)", {"i": i, "j": j, "k": k}, lhs, fam, bound))
    for j in (0, 1):
        lhs, fam = infrel_family(j)
        out.append(_check("unit expansion", {"j": j}, lhs, fam, bound))
        rl = kreflect(lhs)
        out.append(_check("unit expansion (reflected)", {"j": j}, rl,
                          Family(lambda n, fam=fam: kreflect(fam.member(n)), "reflected"), bound))
    return out


def decomp_relations(bound: int) -> List[Check]:
    out = []
    for i, j in product((0, 1), repeat=2):
        out.append(_check("identity decomposition", {"i": i, "j": j}, kid((i, j)), decomp_family(i, j), bound))
        fam = decomp_family(i, j)
        out.append(_check("identity decomposition (reflected)", {"i": i, "j": j}, kid((j, i)),
                          Family(lambda n, fam=fam: kreflect(fam.member(n)), "reflected"), bound))
        for n in range(bound + 1):
            for m in range(bound + 1):
                lhs = kcompose(pi(n, i, j), sigma(m, i, j))
                rhs = _k(i + j) if n == m else kzero(((i + j) % 2,), ((i + j) % 2,))
                out.append(_check("projections after inclusions", {"i": i, "j": j, "n": n, "m": m}, lhs, rhs, bound))
    return out


SUITES = {
    "relations": lambda b: defining_relations(b) + secondary_relations(b),
    "rungs": rung_relations,
    "rewire": rewire_relations,
    "decomp": decomp_relations,
}


def verify_suite(name: str, bound: int) -> List[Check]:
    return SUITES[name](bound)
