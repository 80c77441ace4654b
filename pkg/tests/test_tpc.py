import random

import pytest
from hypothesis import given, settings, strategies as st

from dtlkit.dtl import SignatureError, cap_at, cup_at, dot_at, identity
from dtlkit.tpc import (
    TpcObject,
    act,
    blue_dot,
    dim_check,
    handle_slide,
    merge,
    model_equal,
    slide_dot_naturality,
    split,
    tau,
    tpc_apply,
    tpc_compose,
    tpc_identity,
    tpc_matrix,
)

MAX_STRANDS = 4


def random_step(rng, obj):
    """A random generator with source ``obj``."""
    n, side = obj.n, obj.side
    options = ["blue", "split"] if n + 1 <= MAX_STRANDS else ["blue"]
    if n >= 1:
        options += ["merge", "dot"]
    if n >= 2:
        options.append("cap")
    if n + 2 <= MAX_STRANDS:
        options.append("cup")
    kind = rng.choice(options)
    if kind == "blue":
        return blue_dot(obj)
    if kind == "merge":
        return merge(n - 1, side)
    if kind == "split":
        return split(n, side)
    ident = tpc_identity(TpcObject(0, side))
    if kind == "dot":
        return act(dot_at(n, rng.randint(1, n)), ident)
    if kind == "cap":
        return act(cap_at(n, rng.randint(1, n - 1)), ident)
    return act(cup_at(n, rng.randint(1, n + 1)), ident)


@st.composite
def chains(draw, length=4):
    rng = random.Random(draw(st.integers(0, 2**32 - 1)))
    obj = TpcObject(draw(st.integers(0, 3)), draw(st.sampled_from("LR")))
    steps = []
    for _ in range(draw(st.integers(1, length))):
        f = random_step(rng, obj)
        steps.append(f)
        obj = f.target
    return steps


def _apply_all(steps, vec):
    for f in steps:
        vec = tpc_apply(f, vec)
    return vec


@settings(max_examples=60)
@given(chains())
def test_model_is_a_functor(steps):
    total = steps[0]
    for f in steps[1:]:
        total = tpc_compose(f, total)
    for key in tpc_matrix(total):
        assert tpc_apply(total, {key: 1}) == _apply_all(steps, {key: 1})


@settings(max_examples=30)
@given(chains(length=3))
def test_composition_is_associative(steps):
    if len(steps) < 3:
        return
    a, b, c = steps
    lhs = tpc_compose(c, tpc_compose(b, a))
    rhs = tpc_compose(tpc_compose(c, b), a)
    assert lhs.parts == rhs.parts


def test_split_then_merge():
    # merging a strand that just left the blue line gives y + x on that line
    obj = TpcObject(1, "L")
    loop = tpc_compose(merge(1, "R"), split(1, "L"))
    assert loop.source == obj and loop.target == obj
    assert not loop.is_zero()


def test_blue_dot_squares_to_zero():
    b = blue_dot(TpcObject(2, "R"))
    assert tpc_compose(b, b).is_zero()


@pytest.mark.parametrize(
    "m,n,Y,Z",
    [(0, 0, "L", "L"), (1, 1, "R", "R"), (2, 0, "L", "L"), (2, 2, "L", "L"), (3, 1, "R", "R"),
     (1, 0, "L", "R"), (0, 1, "R", "L"), (2, 1, "L", "R"), (3, 2, "R", "L")],
)
def test_normal_forms_form_a_basis(m, n, Y, Z):
    assert dim_check(m, n, Y, Z)


@pytest.mark.parametrize("k", [0, 1])
@pytest.mark.parametrize("side", ["L", "R"])
def test_handle_slide_through_level_three(k, side):
    assert all(c.ok for c in handle_slide(k, side, 3))


def test_dot_naturality():
    assert all(c.ok for c in slide_dot_naturality(1, 2))


def test_tau_is_an_involution():
    assert tau(tau("L")) == "L"
    with pytest.raises(ValueError):
        tau("X")


def test_mismatched_composition():
    with pytest.raises(SignatureError):
        tpc_compose(blue_dot(TpcObject(1, "L")), blue_dot(TpcObject(1, "R")))


def test_negative_control_blue_dot_is_not_identity():
    obj = TpcObject(1, "L")
    assert not model_equal(blue_dot(obj), tpc_identity(obj))
    assert not model_equal(act(identity(1), blue_dot(TpcObject(0, "L"))), tpc_identity(obj))
