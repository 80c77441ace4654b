"""Jones-Wenzl projectors, idempotent-truncated objects and their morphisms.

``P_n`` is the image of the symmetrizing idempotent ``JW_n``.  Between these
objects the morphisms are generated by ``U`` (dotted cup, ``P_n -> P_{n+2}``),
``D`` (dotted cap, ``P_n -> P_{n-2}``) and the central element ``z``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .algebra import LaurentPoly, Q, RowSpace, SparseMatrix
from .dtl import (
    DTLMorphism,
    basis,
    braid_generator,
    cap,
    cap_at,
    central_z,
    compose,
    cup,
    cup_at,
    dot_at,
    dotted_cap,
    dotted_cup,
    flip,
    identity,
    tensor,
    tensor_all,
    turnback,
)
from .polyrep import (
    jw_image_vector,
    pol,
    Poly,
    pol_apply,
    pol_apply_at,
    pol_central_z,
    pol_jw_closed,
    sign_of,
)


@lru_cache(maxsize=None)
def _jw_recursive(n: int) -> DTLMorphism:
    if n <= 1:
        return identity(n)
    prev = tensor(_jw_recursive(n - 1), identity(1))
    middle = compose(compose(prev, turnback(n, n - 1)), prev)
    return prev - middle.scale(Q(n - 1, n))


@lru_cache(maxsize=None)
def _jw_symmetrizer(n: int) -> DTLMorphism:
    """``(1/n!) * sum_w w`` with every permutation reached by a reduced word."""
    start = tuple(range(n))
    seen: Dict[Tuple[int, ...], DTLMorphism] = {start: identity(n)}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for i in range(1, n):
            # left multiplication by s_i swaps the values i-1 and i
            v = tuple(i if x == i - 1 else i - 1 if x == i else x for x in w)
            if v not in seen:
                seen[v] = compose(braid_generator(n, i), seen[w])
                queue.append(v)
    total = DTLMorphism.zero(n, n)
    for f in seen.values():
        total = total + f
    return total.scale(Q(1, factorial(n)))


def jones_wenzl(n: int, method: str = "recursion") -> DTLMorphism:
    """The symmetrizing idempotent on ``n`` strands."""
    if method == "recursion":
        return _jw_recursive(n)
    if method == "symmetrizer":
        return _jw_symmetrizer(n)
    raise ValueError(f"unknown method {method!r}")


JW = jones_wenzl


@dataclass(frozen=True)
class KarObject:
    n: int
    e: DTLMorphism

    def is_idempotent(self) -> bool:
        return compose(self.e, self.e) == self.e


def P(n: int) -> KarObject:
    return KarObject(n, jones_wenzl(n))


@dataclass(frozen=True)
class KarMorphism:
    source: KarObject
    target: KarObject
    f: DTLMorphism

    def __post_init__(self):
        if self.f.signature != (self.source.n, self.target.n):
            raise ValueError("morphism signature does not match objects")

    @classmethod
    def sandwich(cls, source: KarObject, target: KarObject, f: DTLMorphism) -> "KarMorphism":
        return cls(source, target, compose(compose(target.e, f), source.e))

    def check(self) -> bool:
        return compose(compose(self.target.e, self.f), self.source.e) == self.f

    def __matmul__(self, other: "KarMorphism") -> "KarMorphism":
        if other.target.n != self.source.n:
            raise ValueError("objects do not match")
        return KarMorphism(other.source, self.target, compose(self.f, other.f))

    def __add__(self, other: "KarMorphism") -> "KarMorphism":
        return KarMorphism(self.source, self.target, self.f + other.f)

    def __sub__(self, other: "KarMorphism") -> "KarMorphism":
        return KarMorphism(self.source, self.target, self.f - other.f)

    def scale(self, c) -> "KarMorphism":
        return KarMorphism(self.source, self.target, self.f.scale(c))

    def __neg__(self) -> "KarMorphism":
        return self.scale(-1)

    def is_zero(self) -> bool:
        return self.f.is_zero()

    def degrees(self) -> List[int]:
        return self.f.degrees()

    def __eq__(self, other) -> bool:
        return isinstance(other, KarMorphism) and self.source.n == other.source.n and self.target.n == other.target.n and self.f == other.f

    def __hash__(self):
        return hash((self.source.n, self.target.n, self.f))


def kar_identity(n: int) -> KarMorphism:
    return KarMorphism(P(n), P(n), jones_wenzl(n))


@lru_cache(maxsize=None)
def _u_morphism(n: int) -> DTLMorphism:
    return compose(jones_wenzl(n + 2), tensor(jones_wenzl(n), dotted_cup()))


@lru_cache(maxsize=None)
def _d_morphism(n: int) -> DTLMorphism:
    return compose(tensor(jones_wenzl(n - 2), dotted_cap()), jones_wenzl(n)).scale(n * (n - 1))


def gen_U(n: int) -> KarMorphism:
    """``P_n -> P_{n+2}``: a dotted cup on the right, sandwiched by projectors."""
    return KarMorphism(P(n), P(n + 2), _u_morphism(n))


def gen_D(n: int) -> KarMorphism:
    """``P_n -> P_{n-2}``: ``n(n-1)`` times a dotted cap on the right."""
    if n < 2:
        raise ValueError("D needs at least two strands")
    return KarMorphism(P(n), P(n - 2), _d_morphism(n))


@lru_cache(maxsize=None)
def _z_morphism(n: int) -> DTLMorphism:
    return compose(central_z(n), jones_wenzl(n))


def gen_z(n: int) -> KarMorphism:
    return KarMorphism(P(n), P(n), _z_morphism(n))


def kar_power(f: KarMorphism, k: int) -> KarMorphism:
    out = kar_identity(f.source.n)
    for _ in range(k):
        out = f @ out
    return out


def signed_variable(n: int, i: int) -> DTLMorphism:
    return dot_at(n, i).scale((-1) ** (i - 1))


def dots_on_first(n: int, k: int) -> DTLMorphism:
    out = identity(n)
    for i in range(1, k + 1):
        out = compose(dot_at(n, i), out)
    return out


# ---------------------------------------------------------------------------
# coordinates of morphisms between symmetric objects


def kar_coordinates(f: Union[DTLMorphism, Callable[[Poly], Poly]], m: int, n: int) -> Dict[Tuple[int, int], Q]:
    """Coordinates of ``JW_n ∘ f ∘ JW_m`` in the basis ``b_k^(m) -> b_j^(n)``.

    ``f`` is applied to the image vector ``b_k^(m)`` of the source projector,
    and the target projector is read off by ``JW_n(x_S) = sign(S) b_|S|``.
    Pol is faithful, so these coordinates determine the morphism.  ``f`` may
    also be given directly as its action on polynomials.
    """
    action = (lambda p: pol_apply(f, p)) if isinstance(f, DTLMorphism) else f
    out: Dict[Tuple[int, int], Q] = {}
    for k in range(m + 1):
        img = action(jw_image_vector(m, k))
        acc: Dict[int, Q] = {}
        for mk, v in img.items():
            j = bin(mk).count("1")
            acc[j] = acc.get(j, 0) + v * sign_of(mk)
        for j, v in acc.items():
            if v:
                out[(j, k)] = v
    return out


def hom_dimension(m: int, n: int) -> LaurentPoly:
    """Graded dimension of ``Hom(P_m, P_n)`` spanned by all projected dTL diagrams."""
    spaces: Dict[int, RowSpace] = {}
    for arcs in basis(m, n):
        d = 2 * sum(x for _, _, x in arcs)
        f = DTLMorphism(m, n, {arcs: 1})
        spaces.setdefault(d, RowSpace()).add(kar_coordinates(f, m, n))
    return LaurentPoly({d: s.dim for d, s in spaces.items() if s.dim})


def predicted_hom_dimension(m: int, n: int) -> LaurentPoly:
    if (m - n) % 2:
        return LaurentPoly()
    return LaurentPoly({abs(m - n) + 2 * i: 1 for i in range(min(m, n) + 1)})


def hom_basis(m: int, n: int) -> Tuple[List[KarMorphism], LaurentPoly]:
    """The spanning family ``U...U z^k`` (m <= n) or ``z^k D...D`` (m >= n).

    Linear independence is certified in :func:`kar_coordinates`; a dependent
    family raises.
    """
    if (m - n) % 2:
        return [], LaurentPoly()
    out: List[KarMorphism] = []
    if m <= n:
        for k in range(m + 1):
            g = kar_power(gen_z(m), k)
            a = m
            while a < n:
                g = gen_U(a) @ g
                a += 2
            out.append(g)
    else:
        for k in range(n + 1):
            g = kar_identity(m)
            a = m
            while a > n:
                g = gen_D(a) @ g
                a -= 2
            out.append(kar_power(gen_z(n), k) @ g)
    spaces: Dict[int, RowSpace] = {}
    for g in out:
        degs = g.degrees()
        if len(degs) != 1:
            raise ArithmeticError("basis element is not homogeneous")
        if not spaces.setdefault(degs[0], RowSpace()).add(kar_coordinates(g.f, m, n)):
            raise ArithmeticError("hom basis is linearly dependent")
    return out, LaurentPoly({d: s.dim for d, s in spaces.items()})


# ---------------------------------------------------------------------------
# identity checks


@dataclass
class Check:
    name: str
    params: dict
    ok: bool

    def to_json(self) -> dict:
        out = {"identity": self.name, "params": self.params, "status": "pass" if self.ok else "fail"}
        if not self.ok:
            # the parameters are enough to replay the failing check
            out["witness"] = self.params
        return out


def _dotted_cup_at(n: int, k: int) -> DTLMorphism:
    """``id_k ⊗ dotted cup ⊗ id_{n-k}``: ``c^n -> c^{n+2}``."""
    return tensor_all(identity(k), dotted_cup(), identity(n - k))


def _chain(factors: Sequence[DTLMorphism]) -> DTLMorphism:
    out = factors[-1]
    for f in reversed(factors[:-1]):
        out = compose(f, out)
    return out


def _pol_chain(factors: Sequence[DTLMorphism]) -> SparseMatrix:
    out = pol(factors[-1])
    for f in reversed(factors[:-1]):
        out = pol(f) @ out
    return out


def verify_jw_identities(n: int, symbolic: bool = True) -> List[Check]:
    """Projector identities on ``n`` strands.

    Each identity is given as two composition chains (leftmost factor applied
    last).  It is checked by rewriting the composites symbolically and,
    independently, by multiplying the Pol matrices of the factors.
    """
    checks: List[Check] = []
    jw = jones_wenzl(n)
    pj = pol(jw)

    def both(name, params, lhs, rhs, lcoef=1, rcoef=1):
        ok = _pol_chain(lhs).scale(lcoef) == _pol_chain(rhs).scale(rcoef)
        if symbolic and ok:
            ok = _chain(lhs).scale(lcoef) == _chain(rhs).scale(rcoef)
        checks.append(Check(name, params, ok))

    checks.append(Check("idempotent", {"n": n}, compose(jw, jw) == jw and pj @ pj == pj))
    checks.append(Check("pol closed form", {"n": n}, pj == pol_jw_closed(n)))
    for i in range(1, n):
        ok = compose(cap_at(n, i), jw).is_zero() and compose(jw, cup_at(n - 2, i)).is_zero()
        checks.append(Check("kills turnbacks", {"n": n, "i": i}, ok))
        ok = compose(braid_generator(n, i), jw) == jw == compose(jw, braid_generator(n, i))
        checks.append(Check("absorbs permutations", {"n": n, "i": i}, ok))
    for i in range(1, n):
        both("PxP", {"n": n, "i": i}, [jw, dot_at(n, i), jw], [jw, dot_at(n, i + 1), jw], 1, -1)
    zn = central_z(n)
    for k in range(n + 1):
        coef = Q((-1) ** comb(k, 2) * factorial(n - k), factorial(n))
        both("PxxxP", {"n": n, "k": k},
             [jw] + [dot_at(n, i) for i in range(1, k + 1)] + [jw],
             [zn] * k + [jw], 1, coef)
    for k in range(0, n - 2):
        lhs = [jw, _dotted_cup_at(n - 2, k)]
        rhs = [jw, _dotted_cup_at(n - 2, k + 1)]
        both("dAwd", {"n": n, "k": k}, lhs, rhs)
        both("dAwd reflected", {"n": n, "k": k}, [flip(f) for f in reversed(lhs)], [flip(f) for f in reversed(rhs)])
    if n >= 1:
        jw1 = jones_wenzl(n - 1)
        trace = [tensor(identity(n - 1), cap()), tensor(jw, dot_at(1, 1)), tensor(identity(n - 1), cup())]
        both("tracedot", {"n": n}, trace, [central_z(n - 1), jw1], 1, Q((-1) ** (n - 1), n))
        if n >= 2:
            both("tracedot middle", {"n": n}, trace, [jw1, dot_at(n - 1, n - 1), jw1], 1, Q(-(n - 1), n))
    for ell in range(2, n + 1):
        for i in range(1, n - ell + 2):
            inner = tensor_all(identity(i - 1), jones_wenzl(ell), identity(n - i - ell + 1))
            both("absorb", {"n": n, "l": ell, "i": i}, [inner, jw], [jw])
            both("absorb right", {"n": n, "l": ell, "i": i}, [jw, inner], [jw])
    return checks


@dataclass(frozen=True)
class KarCoords:
    """A morphism ``P_m -> P_n`` as a matrix on the bases ``b_k^(m)`` and ``b_j^(n)``.

    Since ``b`` spans the image of Pol(JW), composition is matrix product.
    """

    m: int
    n: int
    entries: Tuple[Tuple[Tuple[int, int], Q], ...]

    @classmethod
    def from_dict(cls, m: int, n: int, d: Dict[Tuple[int, int], Q]) -> "KarCoords":
        return cls(m, n, tuple(sorted((k, v) for k, v in d.items() if v)))

    @classmethod
    def of(cls, f: DTLMorphism, scale=1) -> "KarCoords":
        d = kar_coordinates(f, f.m, f.n)
        return cls.from_dict(f.m, f.n, {k: v * scale for k, v in d.items()})

    @classmethod
    def identity(cls, n: int) -> "KarCoords":
        return cls.from_dict(n, n, {(k, k): Q(1) for k in range(n + 1)})

    def as_dict(self) -> Dict[Tuple[int, int], Q]:
        return dict(self.entries)

    def __matmul__(self, other: "KarCoords") -> "KarCoords":
        if other.n != self.m:
            raise ValueError("objects do not match")
        a, b = self.as_dict(), other.as_dict()
        out: Dict[Tuple[int, int], Q] = {}
        for (j, k), v in a.items():
            for (k2, i), w in b.items():
                if k2 == k:
                    out[(j, i)] = out.get((j, i), 0) + v * w
        return KarCoords.from_dict(other.m, self.n, out)

    def __add__(self, other: "KarCoords") -> "KarCoords":
        out = self.as_dict()
        for k, v in other.entries:
            out[k] = out.get(k, 0) + v
        return KarCoords.from_dict(self.m, self.n, out)

    def scale(self, c) -> "KarCoords":
        return KarCoords.from_dict(self.m, self.n, {k: v * c for k, v in self.entries})

    def is_zero(self) -> bool:
        return not self.entries


# The generators act locally, so their coordinates are computed from the
# local polynomial action instead of the (much larger) normal form of the
# tensor product with an identity.


@lru_cache(maxsize=None)
def coords_U(n: int) -> KarCoords:
    d = kar_coordinates(lambda p: pol_apply_at(dotted_cup(), p, n), n, n + 2)
    return KarCoords.from_dict(n, n + 2, d)


@lru_cache(maxsize=None)
def coords_D(n: int) -> KarCoords:
    d = kar_coordinates(lambda p: pol_apply_at(dotted_cap(), p, n - 2), n, n - 2)
    return KarCoords.from_dict(n, n - 2, {k: v * n * (n - 1) for k, v in d.items()})


@lru_cache(maxsize=None)
def coords_z(n: int) -> KarCoords:
    return KarCoords.from_dict(n, n, kar_coordinates(lambda p: pol_central_z(p, n), n, n))


def coords_power(c: KarCoords, k: int) -> KarCoords:
    out = KarCoords.identity(c.m)
    for _ in range(k):
        out = c @ out
    return out


SYMBOLIC_JW_LIMIT = 6


def verify_kar_relations(n: int, symbolic: Optional[bool] = None) -> List[Check]:
    """``z^{n+1} = 0``, ``UD = -z^2 = DU`` and centrality of ``z`` on ``P_n``.

    Every relation is checked in projector coordinates.  When all projectors
    involved have at most ``SYMBOLIC_JW_LIMIT`` strands it is also checked by
    symbolic rewriting.
    """
    if symbolic is None:
        symbolic = n + 2 <= SYMBOLIC_JW_LIMIT
    z = coords_z(n)
    U, Uprev = coords_U(n), coords_U(n - 2) if n >= 2 else None
    D, Dnext = (coords_D(n) if n >= 2 else None), coords_D(n + 2)
    minus_z2 = coords_power(z, 2).scale(-1)
    rel = {
        "z nilpotent": coords_power(z, n + 1).is_zero(),
        "z^n nonzero": not coords_power(z, n).is_zero(),
        "DU = -z^2": Dnext @ U == minus_z2,
        "zU = Uz": coords_z(n + 2) @ U == U @ z,
    }
    if n >= 2:
        rel["UD = -z^2"] = Uprev @ D == minus_z2
        rel["zD = Dz"] = coords_z(n - 2) @ D == D @ z
    if symbolic:
        zn = gen_z(n)
        mz2 = kar_power(zn, 2).scale(-1)
        rel["z nilpotent"] &= kar_power(zn, n + 1).is_zero()
        rel["z^n nonzero"] &= not kar_power(zn, n).is_zero()
        rel["DU = -z^2"] &= gen_D(n + 2) @ gen_U(n) == mz2
        rel["zU = Uz"] &= gen_z(n + 2) @ gen_U(n) == gen_U(n) @ zn
        if n >= 2:
            rel["UD = -z^2"] &= gen_U(n - 2) @ gen_D(n) == mz2
            rel["zD = Dz"] &= gen_z(n - 2) @ gen_D(n) == gen_D(n) @ zn
        rel["U sandwiched, degree 2"] = gen_U(n).check() and gen_U(n).degrees() == [2]
        rel["z sandwiched"] = gen_z(n).check() and gen_z(n).degrees() in ([2], [])
        if n >= 2:
            rel["D sandwiched, degree 2"] = gen_D(n).check() and gen_D(n).degrees() == [2]
    route = "symbolic+pol" if symbolic else "pol"
    return [Check(name, {"n": n, "route": route}, bool(ok)) for name, ok in rel.items()]


def pol_jw_graded_rank(n: int) -> LaurentPoly:
    """Graded dimension of the image of Pol(JW_n), from the closed form."""
    from .polyrep import graded_rank

    return graded_rank(pol_jw_closed(n))


def z_nilpotency_order(n: int) -> int:
    """Smallest ``k`` with ``z^k`` acting as zero on the image of Pol(JW_n)."""
    vec = jw_image_vector(n, 0)
    z = central_z(n)
    k = 0
    while vec:
        vec = pol_apply(z, vec)
        k += 1
    return k
