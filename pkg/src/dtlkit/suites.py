"""Verification suites shared by the command line and the acceptance tests.

Each suite returns a :class:`Report`: a flat list of named checks with the
parameters needed to replay any failure.  Suites only combine routines from
the library; every check compares two independently computed answers or a
computed answer against a closed form.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .algebra import LaurentPoly, rank_of_rows
from .dtl import DTLMorphism, Layer, basis, word_to_morphism
from .karoubi import (
    Check,
    hom_dimension,
    jones_wenzl,
    pol_jw_graded_rank,
    predicted_hom_dimension,
    verify_jw_identities,
    verify_kar_relations,
    z_nilpotency_order,
)
from .polyrep import graded_rank, is_unitriangular, pairing_matrix, pol, pol_is_injective, pol_jw_coset, pol_of_word


@dataclass
class Report:
    suite: str
    checks: List[Check]
    stable_range: Optional[dict] = None
    options: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.ok]

    def to_json(self) -> dict:
        out = {
            "suite": self.suite,
            "options": self.options,
            "status": "pass" if self.ok else "fail",
            "passed": sum(c.ok for c in self.checks),
            "total": len(self.checks),
            "checks": [c.to_json() for c in self.checks],
        }
        if self.stable_range is not None:
            out["stable_range"] = self.stable_range
        return out

    def to_text(self) -> str:
        lines = [f"{self.suite}: {'PASS' if self.ok else 'FAIL'} ({sum(c.ok for c in self.checks)}/{len(self.checks)})"]
        for c in self.checks:
            params = ", ".join(f"{k}={v}" for k, v in c.params.items())
            lines.append(f"  {'ok  ' if c.ok else 'FAIL'} {c.name} [{params}]")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# dotted Temperley-Lieb and the polynomial representation


def random_word(rng: random.Random, max_n: int, length: int) -> Tuple[int, List[Layer]]:
    """A random generator word with every intermediate strand count ``<= max_n``.

    Dots are occasionally doubled so that words which vanish (a squared
    dot, a dotted circle) show up regularly without dominating.
    """
    m = rng.randint(0, max_n)
    n = m
    word: List[Layer] = []
    while len(word) < length:
        options = []
        if n >= 1:
            options.append("dot")
        if n + 2 <= max_n:
            options.append("cup")
        if n >= 2:
            options.append("cap")
        if not options:
            break
        kind = rng.choice(options)
        if kind == "cup":
            word.append(("cup", rng.randint(1, n + 1)))
            n += 2
        elif kind == "cap":
            word.append(("cap", rng.randint(1, n - 1)))
            n -= 2
        else:
            i = rng.randint(1, n)
            word.append(("dot", i))
            if rng.random() < 0.05:
                word.append(("dot", i))
    return m, word


def oracle_coherence(count: int = 1000, max_n: int = 6, seed: int = 0, max_length: int = 10) -> Report:
    """Symbolic reduction of random words against products of generator matrices."""
    rng = random.Random(seed)
    checks = []
    zeros = 0
    for t in range(count):
        m, word = random_word(rng, max_n, rng.randint(0, max_length))
        reduced = word_to_morphism(m, word)
        direct = pol_of_word(m, word)
        params = {"seed": seed, "index": t, "m": m, "word": " ".join(f"{k}{i}" for k, i in word)}
        ok = pol(reduced).entries == direct.entries
        ok &= reduced.is_zero() == direct.is_zero()
        zeros += reduced.is_zero()
        checks.append(Check("pol(reduce(w)) = product of generators", params, bool(ok)))
    checks.append(Check("zero words exercised", {"seed": seed, "zeros": zeros}, zeros > 0))
    return Report("oracle", checks, options={"count": count, "max_n": max_n, "seed": seed})


def pairing(max_k: int = 10) -> Report:
    """Unitriangular pairing matrices, and ``dim Hom = |B|`` by direct rank."""
    checks = []
    for k in range(0, max_k + 1, 2):
        checks.append(Check("pairing matrix unitriangular", {"k": k}, is_unitriangular(pairing_matrix(k))))
    for total in range(0, max_k + 1, 2):
        for m in range(total + 1):
            n = total - m
            B = basis(m, n)
            rows = [dict(pol(DTLMorphism(m, n, {arcs: 1})).entries) for arcs in B]
            ok = rank_of_rows(rows) == len(B) and pol_is_injective(m, n)
            checks.append(Check("dim Hom = |B|", {"m": m, "n": n, "size": len(B)}, bool(ok)))
    return Report("pairing", checks, options={"max_k": max_k})


def jw_relations(max_n: int = 6) -> Report:
    checks = []
    for n in range(max_n + 1):
        same = jones_wenzl(n, "symmetrizer") == jones_wenzl(n, "recursion")
        checks.append(Check("symmetrizer = recursion", {"n": n}, bool(same)))
        checks.extend(verify_jw_identities(n))
        checks.extend(verify_kar_relations(n))
    return Report("jwrels", checks, options={"max_n": max_n})


def hom_tables(max_n: int = 6) -> Report:
    checks = []
    for m in range(max_n + 1):
        for n in range(max_n + 1):
            got = hom_dimension(m, n)
            checks.append(Check("graded Hom(P_m, P_n)", {"m": m, "n": n, "dims": got.to_json()},
                                got == predicted_hom_dimension(m, n)))
    return Report("homtables", checks, options={"max_n": max_n})


def pol_jw(max_n: int = 10, coset_max_n: int = 6) -> Report:
    """Graded rank of ``Pol(JW_n)`` and the nilpotency order of ``z``.

    For ``n <= coset_max_n`` the rank is also computed from the coset
    factorization of the symmetrizer, which never uses the closed form.
    """
    checks = []
    for n in range(max_n + 1):
        rank = pol_jw_graded_rank(n)
        checks.append(Check("graded rank of Pol(JW_n) = [n+1]", {"n": n}, rank == LaurentPoly.quantum_integer(n + 1)))
        if n <= coset_max_n:
            checks.append(Check("coset symmetrizer rank", {"n": n}, graded_rank(pol_jw_coset(n)) == rank))
        checks.append(Check("z nilpotency order = n+1", {"n": n}, z_nilpotency_order(n) == n + 1))
    return Report("poljw", checks, options={"max_n": max_n})


# ---------------------------------------------------------------------------
# Kirby objects, handle slides and diagrams with Kirby strands


def kirby(level: int = 5, max_m: int = 4, max_degree: int = 8) -> Report:
    from .kirby import end_kirby_dimensions, hom_from_kirby_vanishing, kirby_checks

    checks = kirby_checks(level)
    for k in (0, 1):
        for N in range(level + 1):
            dims = end_kirby_dimensions(k, N, 2 * N + 1)
            expected = LaurentPoly({d: 1 for d in range(0, 2 * N + 1, 2)})
            checks.append(Check("End of Kirby object", {"k": k, "N": N, "dims": dims.to_json()}, dims == expected))
        a = k + 2 * level
        for m in range(max_m + 1):
            # degree d can only be certified once some level has a + |a - m| > d
            top = min(max_degree, a + abs(a - m) - 1)
            rep = hom_from_kirby_vanishing(k, m, level, top)
            checks.append(Check("maps out of Kirby object vanish", {"k": k, "m": m, "N": level,
                                                                    "max_degree": top}, rep.certified))
    # later stages only add classes in lower degrees
    stable = {"k=0": [-2 * level, 0], "k=1": [-2 * level - 1, -1]}
    return Report("kirby", checks, stable_range=stable,
                  options={"level": level, "max_m": max_m, "max_degree": max_degree})


def handle_slides(level: int = 5) -> Report:
    from .tpc import SIDES, handle_slide

    checks = [c for k in (0, 1) for side in SIDES for c in handle_slide(k, side, level)]
    return Report("handle-slide", checks, options={"level": level})


KDTL_SUITES = ("relations", "rungs", "rewire", "decomp")


def kdtl(level: int = 4, suites: Sequence[str] = KDTL_SUITES) -> Report:
    from .kdtl import verify_suite
    from .kirby import kirby_square

    checks = [c for name in suites for c in verify_suite(name, level)]
    for i in (0, 1):
        for j in (0, 1):
            sq = kirby_square(i, j, level)
            for levels, info in sorted(sq["levels"].items()):
                checks.append(Check("Kirby squared decomposes the identity",
                                    {"i": i, "j": j, "levels": list(levels)}, info["identity"]))
            for (n, m), ok in sorted(sq["orthogonality"].items()):
                checks.append(Check("Kirby squared orthogonality", {"i": i, "j": j, "n": n, "m": m}, ok))
    return Report("kdtl", checks, options={"level": level, "suites": list(suites)})


# ---------------------------------------------------------------------------
# Khovanov homology


def khovanov(max_n: int = 4, level: int = 3, cable_knot: str = "trefoil") -> Report:
    """Cube against scan against the bracket, and the colored checks.

    The bundled diagrams are checked together with the 2-cable of
    ``cable_knot``, on which the transposition and the projector are also
    compared.
    """
    from .khovanov import (
        builtin,
        builtin_names,
        cable,
        colored_kh,
        cube_complex,
        jones_from_bracket,
        jw_projector_action,
        kirby_colored_unknot,
        scan_homology,
        transposition_action,
        unknot_jw_dimension,
        unlink,
    )
    from .kirby import pol_of_kirby

    checks: List[Check] = []
    knot = builtin(cable_knot)
    doubled = cable(knot, n=2)
    diagrams = [(name, builtin(name)) for name in builtin_names()]
    diagrams.append((f"{cable_knot} 2-cable", doubled.diagram))
    for name, d in diagrams:
        cx = cube_complex(d)
        p = {"diagram": name, "crossings": d.n_crossings}
        checks.append(Check("d^2 = 0", p, cx.d_squared_is_zero()))
        checks.append(Check("differential preserves q", p, cx.preserves_quantum_degree()))
        checks.append(Check("Euler characteristic = bracket", p, cx.euler_characteristic() == jones_from_bracket(d)))
        checks.append(Check("scan = cube", p, scan_homology(d) == cx.homology()))

    unknot_value = {0: LaurentPoly.quantum_integer(2)}
    for name in ("unknot", "unknot_kinks", "unknot_kinks_negative"):
        checks.append(Check("Kh(unknot) = q + 1/q", {"diagram": name}, scan_homology(builtin(name)) == unknot_value))

    for n in range(max_n + 1):
        checks.append(Check("Kh(U^JW_n) = [n+1]", {"n": n}, unknot_jw_dimension(n) == LaurentPoly.quantum_integer(n + 1)))
    for n in range(2, max_n + 1):
        c = cable(unlink(1), n=n)
        for i in range(1, n):
            s = transposition_action(c, i)
            checks.append(Check("sigma^2 = id on Kh(U^n)", {"n": n, "i": i},
                                (s @ s).is_identity() and s.preserves_bidegree()))

    for k in (0, 1):
        for N in range(level + 1):
            rep = kirby_colored_unknot(k, N)
            ok = rep.value == pol_of_kirby(k, N) and all(rep.injective)
            checks.append(Check("Kirby-colored unknot = Pol of Kirby object", {"k": k, "N": N}, ok))

    s = transposition_action(doubled)
    p = {"knot": cable_knot}
    checks.append(Check("sigma^2 = id on Kh(K^2)", p, (s @ s).is_identity() and s.preserves_bidegree()))
    proj = jw_projector_action(doubled)
    checks.append(Check("JW_2 action is idempotent", p,
                        (proj @ proj).matrix == proj.matrix and proj.preserves_bidegree()))
    image = proj.image_dimension()
    checks.append(Check("Kh(K^JW_2) = S_2-invariants of Kh(K^2)", p, image == s.fixed_dimension()))
    checks.append(Check("colored_kh agrees with the projector", p, colored_kh(knot, ["jw:2"]) == image))
    return Report("khovanov", checks, options={"max_n": max_n, "level": level, "cable_knot": cable_knot})


# ---------------------------------------------------------------------------
# registry

SUITES: Dict[str, Callable[..., Report]] = {
    "oracle": oracle_coherence,
    "pairing": pairing,
    "jwrels": jw_relations,
    "homtables": hom_tables,
    "poljw": pol_jw,
    "kirby": kirby,
    "handle-slide": handle_slides,
    "kdtl": kdtl,
    "khovanov": khovanov,
}


def run_suite(name: str, max_n: Optional[int] = None, level: Optional[int] = None,
              seed: Optional[int] = None) -> Report:
    """Run a suite by name, passing only the caps it understands."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    kwargs: dict = {}
    if name == "oracle":
        if max_n is not None:
            kwargs["max_n"] = max_n
        if seed is not None:
            kwargs["seed"] = seed
    elif name == "pairing":
        if max_n is not None:
            kwargs["max_k"] = max_n
    elif name in ("jwrels", "homtables", "poljw"):
        if max_n is not None:
            kwargs["max_n"] = max_n
    elif name in ("kirby", "handle-slide", "kdtl"):
        if level is not None:
            kwargs["level"] = level
    elif name == "khovanov":
        if max_n is not None:
            kwargs["max_n"] = max_n
        if level is not None:
            kwargs["level"] = level
    return SUITES[name](**kwargs)
