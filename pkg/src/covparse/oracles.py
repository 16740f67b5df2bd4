"""Loss functions and oracles for both list-based transition systems.

The monotonic system admits an exact, efficiently computable loss: the
number of gold arcs that can no longer be built, plus one per cycle that
the still-buildable gold arcs form together with the arcs already built
(each such cycle forces one more arc to be given up).

Under the non-monotonic system an already built arc can be replaced later,
so "can no longer be built" is only a lower bound and the cycle term only
an upper bound.  Counting just the cycles whose resolution necessarily
deletes a gold arc tightens the upper bound; the exact loss always lies
between the lower bound and that tightened upper bound.

All loss accounting runs over arcs between real words.  A token whose gold
head is 0 is attached to the artificial root when output is emitted, which
no transition sequence can preempt, so such arcs never contribute loss
here even though evaluation scores them.
"""

from __future__ import annotations

from enum import Enum
from typing import Callable, Iterable, NamedTuple, Sequence

from .covington import (
    Configuration,
    Transition,
    TransitionKind,
    LEFT_ARC,
    NO_ARC,
    RIGHT_ARC,
    SHIFT,
    legal_monotonic,
    legal_nonmonotonic,
    step_monotonic,
    step_nonmonotonic,
)
from .cycles import InDegreeError, _count_cycles_head_map, classify_cycles
from .treebank import DEFAULT_ROOT_LABEL, Sentence


class GoldTree:
    """Gold heads and labels for one sentence, addressed by token index."""

    __slots__ = ("n", "heads", "labels", "real_arcs")

    def __init__(self, heads: Sequence[int], labels: Sequence[str]):
        self.n = len(heads)
        self.heads = tuple(heads)
        self.labels = tuple(labels)
        if len(self.labels) != self.n:
            raise ValueError("heads and labels must have equal length")
        for k, h in enumerate(self.heads, start=1):
            if not 0 <= h <= self.n:
                raise ValueError(f"head {h} of token {k} out of range 0..{self.n}")
            if h == k:
                raise ValueError(f"token {k} is its own head")
        for k in range(1, self.n + 1):
            node, steps = k, 0
            while node != 0:
                node = self.heads[node - 1]
                steps += 1
                if steps > self.n:
                    raise ValueError(f"head cycle through token {k}")
        self.real_arcs: frozenset[tuple[int, int]] = frozenset(
            (h, d) for d, h in enumerate(self.heads, start=1) if h != 0
        )

    @staticmethod
    def from_sentence(sent: Sentence) -> "GoldTree":
        return GoldTree(
            [t.gold_head for t in sent.tokens], [t.gold_label for t in sent.tokens]
        )

    def head_of(self, dep: int) -> int:
        return self.heads[dep - 1]

    def label_of(self, dep: int) -> str:
        return self.labels[dep - 1]

    def has_arc(self, head: int, dep: int) -> bool:
        return 1 <= dep <= self.n and self.heads[dep - 1] == head

    def __repr__(self) -> str:
        return f"GoldTree(heads={list(self.heads)!r})"


class LossBounds(NamedTuple):
    """Bracketing of the non-monotonic loss: lower <= exact <= pc_upper <= upper."""

    lower: int
    pc_upper: int
    upper: int


class LossVariant(str, Enum):
    """Which bound drives a non-monotonic dynamic oracle."""

    LOWER = "lower"
    PC_UPPER = "pc-upper"
    UPPER = "upper"

    def pick(self, bounds: LossBounds) -> int:
        if self is LossVariant.LOWER:
            return bounds.lower
        if self is LossVariant.PC_UPPER:
            return bounds.pc_upper
        return bounds.upper


def _weak_components(c: Configuration) -> list[int]:
    """Union-find roots over 1..n for the undirected view of built arcs."""
    parent = list(range(c.n + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for h, d in c.arcs.pairs():
        rh, rd = find(h), find(d)
        if rh != rd:
            parent[rh] = rd
    return [find(x) for x in range(c.n + 1)]


def unreachable_mono(c: Configuration, gold: GoldTree) -> frozenset[tuple[int, int]]:
    """Gold arcs no monotonic continuation of c can ever build.

    An unbuilt gold arc x->y is lost when its word pair has already gone
    out of focus, when y has a head already (single-head), or when x and y
    sit in one weakly connected component of the built arcs, so that adding
    the arc would close a cycle or double a head.
    """
    root = _weak_components(c)
    out = []
    for x, y in gold.real_arcs:
        if c.arcs.has(x, y):
            continue
        lo, hi = (x, y) if x < y else (y, x)
        if (
            c.j > hi
            or (c.j == hi and c.i < lo)
            or c.arcs.head_of(y) is not None
            or root[x] == root[y]
        ):
            out.append((x, y))
    return frozenset(out)


def loss_mono(c: Configuration, gold: GoldTree) -> int:
    """Exact loss of c under the monotonic system.

    Kept gold arcs never conflict on a head with built arcs (those
    conflicts are unreachable), so the union stays in-degree <= 1 and its
    cycles are countable in linear time.  Each cycle costs one more arc.
    """
    u = unreachable_mono(c, gold)
    head: dict[int, int] = {}
    for h, d in c.arcs.pairs():
        head[d] = h
    for h, d in gold.real_arcs:
        if (h, d) in u:
            continue
        if head.get(d, h) != h:
            raise InDegreeError(f"kept gold arc {h}->{d} conflicts with built head")
        head[d] = h
    return len(u) + _count_cycles_head_map(head)


def unreachable_nonmono(
    c: Configuration, gold: GoldTree
) -> frozenset[tuple[int, int]]:
    """Gold arcs whose word pair has gone out of focus for good.

    An arc between x and y can only be created while the pair is still
    ahead of the focus; nothing the non-monotonic system does brings a
    pair back, so these are lost under every continuation.
    """
    out = []
    for x, y in gold.real_arcs:
        if c.arcs.has(x, y):
            continue
        lo, hi = (x, y) if x < y else (y, x)
        if c.j > hi or (c.j == hi and c.i < lo):
            out.append((x, y))
    return frozenset(out)


def loss_bounds_nonmono(c: Configuration, gold: GoldTree) -> LossBounds:
    """Bracket the non-monotonic loss of c.

    lower counts the gold arcs already out of reach.  Each cycle formed by
    the remaining gold arcs with the built arcs must be broken, costing at
    most one gold arc each (upper); a cycle is certain to cost one only
    when the arc its closure deletes is itself gold (pc_upper).
    """
    u = unreachable_nonmono(c, gold)
    wanted = gold.real_arcs - u
    n_c, n_pc = classify_cycles(c.arcs, wanted, gold.real_arcs)
    lower = len(u)
    return LossBounds(lower, lower + n_pc, lower + n_c)


def missing_gold_arcs(c: Configuration, gold: GoldTree) -> int:
    """Gold arcs absent from c; at a terminal this is the loss itself."""
    return len(gold.real_arcs - c.arcs.pairs())


def _arc_target(c: Configuration, kind: TransitionKind) -> tuple[int, int]:
    if kind is LEFT_ARC:
        return c.j, c.i
    return c.i, c.j


def _oracle(
    c: Configuration,
    gold: GoldTree,
    kinds: Iterable[TransitionKind],
    step: Callable[[Configuration, Transition], Configuration],
    loss_of: Callable[[Configuration], int],
    default_label: str,
) -> list[Transition]:
    base = loss_of(c)
    scored = [(kind, loss_of(step(c, Transition(kind)))) for kind in sorted(kinds)]
    keep = [kind for kind, loss in scored if loss <= base]
    if not keep:
        # Every move hurts (the lower-bound variant can hit this); take the
        # least damaging ones rather than returning nothing.
        best = min(loss for _, loss in scored)
        keep = [kind for kind, loss in scored if loss == best]
    out = []
    junk = []
    for kind in keep:
        if kind is SHIFT or kind is NO_ARC:
            out.append(Transition(kind))
        else:
            head, dep = _arc_target(c, kind)
            if gold.head_of(dep) == head:
                out.append(Transition(kind, gold.label_of(dep)))
            else:
                junk.append(kind)
    if out:
        return out
    # Only loss-safe moves are arc creations the gold tree does not ask
    # for.  They must stay eligible, under the designated fallback label.
    return [Transition(kind, default_label) for kind in junk]


def oracle_mono(
    c: Configuration, gold: GoldTree, default_label: str = DEFAULT_ROOT_LABEL
) -> list[Transition]:
    """Transitions that keep the exact monotonic loss unchanged.

    Monotonic loss never decreases along a transition, so "unchanged" and
    "not increased" coincide.  Arc transitions survive only when they build
    a gold arc (then carrying its gold label); a no-loss junk arc is kept,
    with the fallback label, only when nothing else qualifies.
    """
    return _oracle(
        c,
        gold,
        legal_monotonic(c),
        step_monotonic,
        lambda cc: loss_mono(cc, gold),
        default_label,
    )


def oracle_nonmono(
    c: Configuration,
    gold: GoldTree,
    variant: LossVariant = LossVariant.UPPER,
    default_label: str = DEFAULT_ROOT_LABEL,
) -> list[Transition]:
    """Transitions that do not increase the chosen non-monotonic bound."""
    return _oracle(
        c,
        gold,
        legal_nonmonotonic(c),
        step_nonmonotonic,
        lambda cc: variant.pick(loss_bounds_nonmono(cc, gold)),
        default_label,
    )


def oracle_transitions(
    c: Configuration,
    gold: GoldTree,
    mode: str = "dyn-nonmono",
    variant: LossVariant = LossVariant.UPPER,
    default_label: str = DEFAULT_ROOT_LABEL,
) -> list[Transition]:
    """Dispatch to the dynamic oracle for the given training mode."""
    if mode == "dyn-mono":
        return oracle_mono(c, gold, default_label)
    if mode == "dyn-nonmono":
        return oracle_nonmono(c, gold, variant, default_label)
    raise ValueError(f"no dynamic oracle for mode {mode!r}")


def _gold_arc_pending_left(c: Configuration, gold: GoldTree) -> bool:
    """A gold arc between some x < i and j is still waiting in this phase."""
    gh = gold.head_of(c.j)
    if 1 <= gh < c.i and not c.arcs.has(gh, c.j):
        return True
    for x in range(1, c.i):
        if gold.head_of(x) == c.j and not c.arcs.has(c.j, x):
            return True
    return False


def static_next(
    c: Configuration, gold: GoldTree, eager_shift: bool = False
) -> Transition:
    """The canonical next transition on the gold path.

    Builds the gold arc at the focus pair when there is one, otherwise
    walks left with NoArc until the pair is exhausted, then shifts.  With
    eager_shift the walk is cut short as soon as no gold arc remains in
    the current phase; both settings reproduce the gold tree exactly when
    followed from the initial configuration.
    """
    if c.is_terminal():
        raise ValueError("terminal configuration has no next transition")
    if c.i >= 1:
        if gold.head_of(c.i) == c.j and not c.arcs.has(c.j, c.i):
            return Transition(LEFT_ARC, gold.label_of(c.i))
        if gold.head_of(c.j) == c.i and not c.arcs.has(c.i, c.j):
            return Transition(RIGHT_ARC, gold.label_of(c.j))
        if eager_shift and not _gold_arc_pending_left(c, gold):
            return Transition(SHIFT)
        return Transition(NO_ARC)
    return Transition(SHIFT)
