"""Acceptance criteria 1-9.

Each criterion runs the corresponding verification suites at full size,
prints exactly one ``criterion N: PASS|FAIL`` line and then asserts.  Run
``python tests/test_acceptance.py`` to get the nine lines without pytest.
"""

import sys
import time

import pytest

from dtlkit import suites

# criterion -> (description, suites to run, time budget in seconds or None)
CRITERIA = {
    1: ("oracle coherence on 1000 random words", lambda: [suites.oracle_coherence(1000, 6, seed=0)], 120),
    2: ("pairing matrices and dim Hom = |B|", lambda: [suites.pairing(10)], None),
    3: ("projector identities and Karoubi relations, n <= 6", lambda: [suites.jw_relations(6)], None),
    4: ("graded Hom tables, m, n <= 6", lambda: [suites.hom_tables(6)], None),
    5: ("Pol(JW_n) = [n+1] and z nilpotency, n <= 10", lambda: [suites.pol_jw(10)], None),
    6: ("Kirby objects: Pol, End, maps out", lambda: [suites.kirby(level=5, max_m=4, max_degree=8)], None),
    7: ("handle slides through level 5", lambda: [suites.handle_slides(5)], 60),
    8: ("Kirby diagrammatics through level 4", lambda: [suites.kdtl(4)], None),
    9: ("Khovanov homology, cables and colors", lambda: [suites.khovanov(max_n=4, level=3)], 600),
}


def run_criterion(number):
    """Run one criterion; returns ``(ok, line)``."""
    description, build, budget = CRITERIA[number]
    start = time.perf_counter()
    reports = build()
    elapsed = time.perf_counter() - start
    checks = [c for r in reports for c in r.checks]
    failed = [c for c in checks if not c.ok]
    in_time = budget is None or elapsed < budget
    ok = not failed and in_time
    detail = f"{len(checks) - len(failed)}/{len(checks)} checks, {elapsed:.1f}s"
    if budget is not None:
        detail += f" (budget {budget}s)"
    if failed:
        first = failed[0]
        detail += f"; first failure: {first.name} {first.params}"
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {description} [{detail}]"
    return ok, line


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    ok, line = run_criterion(number)
    with capsys.disabled():
        print(f"\n{line}")
    assert ok, line


if __name__ == "__main__":
    results = [run_criterion(n) for n in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
