"""Both transition systems against the literal list reference."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from covparse import (
    ArcSet,
    Configuration,
    IllegalTransitionError,
    Transition,
    TransitionKind,
    initial_config,
    legal_monotonic,
    legal_nonmonotonic,
    path_exists,
    step_monotonic,
    step_nonmonotonic,
    weakly_connected,
)
from covparse.covington import LEFT_ARC, NO_ARC, RIGHT_ARC, SHIFT, apply_nonmonotonic

import reference
from util import to_ref

KIND_TO_REF = {
    SHIFT: reference.SHIFT,
    NO_ARC: reference.NO_ARC,
    LEFT_ARC: reference.LEFT,
    RIGHT_ARC: reference.RIGHT,
}


def config(i, j, n, arcs=()):
    a = ArcSet()
    for h, d, *rest in arcs:
        a.add(h, d, rest[0] if rest else "")
    return Configuration(i, j, n, a)


def test_initial_and_terminal():
    c = initial_config(3)
    assert (c.i, c.j, c.n) == (0, 1, 3)
    assert (c.lambda1, c.lambda2, c.buffer) == ([], [], [1, 2, 3])
    assert not c.is_terminal()
    for _ in range(3):
        c = step_monotonic(c, Transition(SHIFT))
    assert c.is_terminal()
    assert c.buffer == []
    with pytest.raises(IllegalTransitionError):
        step_monotonic(c, Transition(SHIFT))
    with pytest.raises(IllegalTransitionError):
        step_nonmonotonic(c, Transition(SHIFT))


def test_shift_moves_everything_left():
    c = config(1, 3, 4)  # lambda1=[1], lambda2=[2], buffer=[3,4]
    assert (c.lambda1, c.lambda2) == ([1], [2])
    c2 = step_monotonic(c, Transition(SHIFT))
    assert (c2.lambda1, c2.lambda2, c2.buffer) == ([1, 2, 3], [], [4])


def test_legal_monotonic_respects_arcs():
    # single head of 2 blocks RightArc; path 1->2 blocks LeftArc
    c = config(1, 2, 3, [(1, 2)])
    assert legal_monotonic(c) == {SHIFT, NO_ARC}
    # empty lambda1 leaves only Shift
    assert legal_monotonic(initial_config(2)) == {SHIFT}
    assert legal_nonmonotonic(initial_config(2)) == {SHIFT}
    # no arcs, both arcs possible
    c = config(1, 2, 3)
    assert legal_monotonic(c) == {SHIFT, NO_ARC, LEFT_ARC, RIGHT_ARC}


def test_step_monotonic_rejects_cycle_and_second_head():
    c = config(1, 2, 3, [(2, 1)])
    with pytest.raises(IllegalTransitionError, match="acyclicity"):
        step_monotonic(c, Transition(RIGHT_ARC, "x"))
    with pytest.raises(IllegalTransitionError, match="single-head"):
        step_monotonic(c, Transition(LEFT_ARC, "x"))
    with pytest.raises(IllegalTransitionError, match="lambda1"):
        step_monotonic(initial_config(2), Transition(NO_ARC))


def test_monotonic_arc_creation():
    c = config(1, 2, 3)
    left = step_monotonic(c, Transition(LEFT_ARC, "a"))
    assert left.arcs.pairs() == frozenset({(2, 1)})
    assert left.arcs.label_of(1) == "a"
    assert (left.i, left.j) == (0, 2)
    right = step_monotonic(c, Transition(RIGHT_ARC, "b"))
    assert right.arcs.pairs() == frozenset({(1, 2)})
    assert (right.i, right.j) == (0, 2)


def test_nonmono_left_arc_breaks_cycle():
    c = config(1, 2, 3, [(1, 2, "x")])
    nxt, removed = apply_nonmonotonic(c, Transition(LEFT_ARC, "y"))
    assert nxt.arcs.pairs() == frozenset({(2, 1)})
    assert [(a.head, a.dep) for a in removed] == [(1, 2)]


def test_nonmono_right_arc_replaces_head():
    c = config(2, 3, 3, [(1, 3, "x")])
    nxt, removed = apply_nonmonotonic(c, Transition(RIGHT_ARC, "y"))
    assert nxt.arcs.pairs() == frozenset({(2, 3)})
    assert nxt.arcs.label_of(3) == "y"
    assert [(a.head, a.dep) for a in removed] == [(1, 3)]


def test_nonmono_right_arc_breaks_long_cycle():
    c = config(1, 3, 3, [(3, 2, "a"), (2, 1, "b")])
    nxt, removed = apply_nonmonotonic(c, Transition(RIGHT_ARC, "c"))
    assert nxt.arcs.pairs() == frozenset({(1, 3), (3, 2)})
    assert [(a.head, a.dep) for a in removed] == [(2, 1)]


def test_nonmono_relabel_removes_nothing():
    c = config(1, 2, 3, [(2, 1, "old")])
    nxt, removed = apply_nonmonotonic(c, Transition(LEFT_ARC, "new"))
    assert removed == []
    assert nxt.arcs.pairs() == frozenset({(2, 1)})
    assert nxt.arcs.label_of(1) == "new"


def test_nonmono_removal_cap():
    # one old-head removal plus one cycle break is the most a step can do
    c = config(2, 3, 4, [(1, 3, "a"), (3, 2, "b")])
    nxt, removed = apply_nonmonotonic(c, Transition(RIGHT_ARC, "c"))
    assert len(removed) == 2
    assert nxt.arcs.pairs() == frozenset({(2, 3)})


def test_path_and_weak_connectivity():
    a = ArcSet()
    a.add(1, 2)
    a.add(2, 3)
    assert path_exists(a, 1, 3)
    assert path_exists(a, 2, 3)
    assert not path_exists(a, 3, 1)
    assert not path_exists(a, 1, 4)
    assert weakly_connected(a, 3, 1)
    assert not weakly_connected(a, 1, 4)


def test_arcset_mutators():
    a = ArcSet()
    a.add(2, 1, "x")
    assert a.has(2, 1) and a.head_of(1) == 2 and a.label_of(1) == "x"
    a.add(2, 1, "y")  # same arc, new label
    assert a.label_of(1) == "y" and len(a.pairs()) == 1
    gone = a.remove(1)
    assert (gone.head, gone.dep) == (2, 1)
    assert a.head_of(1) is None
    with pytest.raises(ValueError, match="self-loop"):
        a.add(3, 3)


def _random_walk_both(seed, n, system):
    """Step package and reference in lockstep; compare after every move."""
    rng = random.Random(seed)
    c = initial_config(n)
    ref = reference.initial_ref(n)
    legal = legal_monotonic if system == "mono" else legal_nonmonotonic
    step = step_monotonic if system == "mono" else step_nonmonotonic
    while not c.is_terminal():
        kinds = sorted(legal(c))
        assert {KIND_TO_REF[k] for k in kinds} == set(
            reference.legal_ref(ref, system)
        )
        kind = rng.choice(kinds)
        label = rng.choice(["a", "b", ""]) if kind in (LEFT_ARC, RIGHT_ARC) else ""
        c = step(c, Transition(kind, label))
        ref = reference.step_ref(ref, KIND_TO_REF[kind], system, label)
        assert to_ref(c) == ref, f"diverged after {kind.name} (seed {seed})"
    assert reference.is_terminal_ref(ref)


@settings(max_examples=120, deadline=None)
@given(
    st.integers(min_value=0, max_value=2**32 - 1),
    st.integers(min_value=1, max_value=7),
)
def test_lambda_lists_match_reference_mono(seed, n):
    _random_walk_both(seed, n, "mono")


@settings(max_examples=120, deadline=None)
@given(
    st.integers(min_value=0, max_value=2**32 - 1),
    st.integers(min_value=1, max_value=7),
)
def test_lambda_lists_match_reference_nonmono(seed, n):
    _random_walk_both(seed, n, "nonmono")


def _assert_forest(c):
    pairs = c.arcs.pairs()
    deps = [d for _, d in pairs]
    assert len(deps) == len(set(deps)), "in-degree above one"
    for h, d in pairs:
        assert not path_exists(c.arcs, d, h), "cycle in arc set"


@settings(max_examples=80, deadline=None)
@given(
    st.integers(min_value=0, max_value=2**32 - 1),
    st.integers(min_value=2, max_value=8),
)
def test_invariants_along_random_walks(seed, n):
    rng = random.Random(seed)
    for system in ("mono", "nonmono"):
        legal = legal_monotonic if system == "mono" else legal_nonmonotonic
        c = initial_config(n)
        while not c.is_terminal():
            assert 0 <= c.i < c.j <= c.n + 1
            kind = rng.choice(sorted(legal(c)))
            t = Transition(kind, "z" if kind in (LEFT_ARC, RIGHT_ARC) else "")
            if system == "mono":
                before = len(c.arcs.pairs())
                c = step_monotonic(c, t)
                assert len(c.arcs.pairs()) >= before
            else:
                c, removed = apply_nonmonotonic(c, t)
                assert len(removed) <= 2
            _assert_forest(c)


def test_transition_kind_ordering():
    assert (
        TransitionKind.SHIFT
        < TransitionKind.NO_ARC
        < TransitionKind.LEFT_ARC
        < TransitionKind.RIGHT_ARC
    )
