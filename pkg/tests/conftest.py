import random

from hypothesis import HealthCheck, settings, strategies as st

from dtlkit.algebra import LaurentPoly, Q
from dtlkit.suites import random_word

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

rationals = st.builds(lambda a, b: Q(a, b), st.integers(-20, 20), st.integers(1, 6))

laurent_polys = st.dictionaries(st.integers(-6, 6), rationals, max_size=5).map(LaurentPoly)


@st.composite
def words(draw, max_n=5, max_length=8):
    """``(m, word)`` generator words staying within ``max_n`` strands."""
    seed = draw(st.integers(0, 2**32 - 1))
    length = draw(st.integers(0, max_length))
    return random_word(random.Random(seed), max_n, length)


@st.composite
def composable_words(draw, max_n=5, max_length=5):
    """Two words ``w1, w2`` where ``w2`` starts where ``w1`` ends."""
    m, w1 = draw(words(max_n, max_length))
    n = m
    for kind, _ in w1:
        n += {"cup": 2, "cap": -2, "dot": 0}[kind]
    seed = draw(st.integers(0, 2**32 - 1))
    rng = random.Random(seed)
    while True:
        start, w2 = random_word(rng, max_n, draw(st.integers(0, max_length)))
        if start == n:
            return m, w1, w2
