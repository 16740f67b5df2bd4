"""List-based non-projective transition systems (Covington style).

A configuration is <lambda1, lambda2, B, A> where lambda1 and lambda2 hold
already visited words, B is the buffer and A the built arc set.  Because
every transition keeps the three lists contiguous, the lists are stored as
two integers: lambda1 = [1..i], lambda2 = [i+1..j-1], B = [j..n].  i == 0
encodes an empty lambda1 and j == n+1 the terminal configuration.

Two variants share the data model:

* monotonic: arc transitions are gated by single-head and acyclicity side
  conditions and A only grows;
* non-monotonic: arc transitions are always available (given a non-empty
  lambda1) and may overwrite a previous head or break a freshly created
  cycle by removing the arc entering the new head.

Arcs are written head -> dep everywhere.
"""

from __future__ import annotations

from enum import IntEnum
from typing import Iterator, NamedTuple


class TransitionKind(IntEnum):
    """Order doubles as the fixed tie-break order for scoring."""

    SHIFT = 0
    NO_ARC = 1
    LEFT_ARC = 2
    RIGHT_ARC = 3


SHIFT = TransitionKind.SHIFT
NO_ARC = TransitionKind.NO_ARC
LEFT_ARC = TransitionKind.LEFT_ARC
RIGHT_ARC = TransitionKind.RIGHT_ARC


class Transition(NamedTuple):
    kind: TransitionKind
    label: str = ""

    def __str__(self) -> str:
        return self.kind.name if not self.label else f"{self.kind.name}({self.label})"


class Arc(NamedTuple):
    head: int
    dep: int
    label: str = ""


class IllegalTransitionError(ValueError):
    """Raised when a transition's preconditions do not hold."""


class ArcSet:
    """Arc set with the single-head invariant baked in.

    Stored as a dep -> (head, label) map, so membership, head lookup and
    removal are O(1) and the in-degree <= 1 invariant cannot be violated.
    Step functions copy before mutating; treat instances as immutable once
    they are attached to a Configuration.
    """

    __slots__ = ("_head",)

    def __init__(self, arcs: Iterator[Arc] | None = None):
        self._head: dict[int, tuple[int, str]] = {}
        if arcs is not None:
            for a in arcs:
                self.add(a.head, a.dep, a.label)

    def copy(self) -> "ArcSet":
        new = ArcSet()
        new._head = dict(self._head)
        return new

    def add(self, head: int, dep: int, label: str = "") -> None:
        if head == dep:
            raise ValueError(f"self-loop arc {head}->{dep}")
        self._head[dep] = (head, label)

    def remove(self, dep: int) -> Arc:
        head, label = self._head.pop(dep)
        return Arc(head, dep, label)

    def head_of(self, dep: int) -> int | None:
        entry = self._head.get(dep)
        return entry[0] if entry is not None else None

    def label_of(self, dep: int) -> str | None:
        entry = self._head.get(dep)
        return entry[1] if entry is not None else None

    def has(self, head: int, dep: int) -> bool:
        entry = self._head.get(dep)
        return entry is not None and entry[0] == head

    def arcs(self) -> list[Arc]:
        return [Arc(h, d, l) for d, (h, l) in self._head.items()]

    def pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset((h, d) for d, (h, _) in self._head.items())

    def key(self) -> tuple[tuple[int, int], ...]:
        """Canonical label-free identity, for memo tables."""
        return tuple(sorted((d, h) for d, (h, _) in self._head.items()))

    def __len__(self) -> int:
        return len(self._head)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ArcSet) and self._head == other._head

    def __repr__(self) -> str:
        inner = ", ".join(f"{h}->{d}" for d, (h, _) in sorted(self._head.items()))
        return f"ArcSet({{{inner}}})"

    def has_path(self, u: int, v: int) -> bool:
        """Possibly empty directed path u ->* v.

        Because in-degree is <= 1, u ->* v holds exactly when u is on the
        head chain of v, so the walk is O(n) without any visited set
        (the chain cannot revisit a node while A is acyclic).
        """
        node: int | None = v
        steps = 0
        limit = len(self._head) + 1
        while node is not None:
            if node == u:
                return True
            entry = self._head.get(node)
            node = entry[0] if entry is not None else None
            steps += 1
            if steps > limit:  # cycle guard for non-acyclic inputs
                raise RuntimeError("head chain does not terminate; arc set cyclic")
        return False

    def weakly_connected(self, x: int, y: int) -> bool:
        """True when x and y touch the same undirected component of A."""
        if x == y:
            return True
        adj: dict[int, list[int]] = {}
        for d, (h, _) in self._head.items():
            adj.setdefault(h, []).append(d)
            adj.setdefault(d, []).append(h)
        if x not in adj or y not in adj:
            return False
        seen = {x}
        stack = [x]
        while stack:
            for nxt in adj[stack.pop()]:
                if nxt == y:
                    return True
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return False

    def children_map(self) -> dict[int, list[int]]:
        """head -> sorted dependents, recomputed by scan (no caching)."""
        out: dict[int, list[int]] = {}
        for d, (h, _) in self._head.items():
            out.setdefault(h, []).append(d)
        for deps in out.values():
            deps.sort()
        return out


def path_exists(arcs: ArcSet, u: int, v: int) -> bool:
    return arcs.has_path(u, v)


def weakly_connected(arcs: ArcSet, x: int, y: int) -> bool:
    return arcs.weakly_connected(x, y)


class Configuration:
    """<lambda1, lambda2, B, A> compressed to (i, j, n, arcs)."""

    __slots__ = ("i", "j", "n", "arcs")

    def __init__(self, i: int, j: int, n: int, arcs: ArcSet):
        if n < 1:
            raise ValueError("sentence length must be >= 1")
        if not 0 <= i < j <= n + 1:
            raise ValueError(f"inconsistent positions i={i}, j={j}, n={n}")
        self.i = i
        self.j = j
        self.n = n
        self.arcs = arcs

    def is_terminal(self) -> bool:
        return self.j > self.n

    @property
    def lambda1(self) -> list[int]:
        return list(range(1, self.i + 1))

    @property
    def lambda2(self) -> list[int]:
        return list(range(self.i + 1, self.j))

    @property
    def buffer(self) -> list[int]:
        return list(range(self.j, self.n + 1))

    def key(self) -> tuple:
        return (self.i, self.j, self.arcs.key())

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Configuration)
            and (self.i, self.j, self.n) == (other.i, other.j, other.n)
            and self.arcs == other.arcs
        )

    def __repr__(self) -> str:
        return f"Configuration(i={self.i}, j={self.j}, n={self.n}, arcs={self.arcs!r})"


def initial_config(n: int) -> Configuration:
    """<[], [], [1..n], {}>"""
    return Configuration(0, 1, n, ArcSet())


def is_terminal(c: Configuration) -> bool:
    return c.is_terminal()


def _require_nonterminal(c: Configuration) -> None:
    if c.is_terminal():
        raise IllegalTransitionError("no transition applies to a terminal configuration")


def legal_monotonic(c: Configuration) -> set[TransitionKind]:
    """Transition kinds whose Fig-style side conditions hold in c.

    Shift is always available before the terminal configuration.  NoArc
    needs a non-empty lambda1.  LeftArc additionally needs the left focus
    word headless and no path i ->* j (acyclicity); RightArc mirrors it.
    """
    _require_nonterminal(c)
    out = {SHIFT}
    if c.i >= 1:
        out.add(NO_ARC)
        if c.arcs.head_of(c.i) is None and not c.arcs.has_path(c.i, c.j):
            out.add(LEFT_ARC)
        if c.arcs.head_of(c.j) is None and not c.arcs.has_path(c.j, c.i):
            out.add(RIGHT_ARC)
    return out


def legal_nonmonotonic(c: Configuration) -> set[TransitionKind]:
    """Non-monotonic legality: list shape only, no arc side conditions."""
    _require_nonterminal(c)
    out = {SHIFT}
    if c.i >= 1:
        out.update((NO_ARC, LEFT_ARC, RIGHT_ARC))
    return out


def _shift(c: Configuration) -> Configuration:
    # <l1, l2, j|B, A>  =>  <l1.l2|j, [], B, A>
    return Configuration(c.j, c.j + 1, c.n, c.arcs)


def _retreat(c: Configuration, arcs: ArcSet) -> Configuration:
    # <l1|i, l2, B, A>  =>  <l1, i|l2, B, A'>
    return Configuration(c.i - 1, c.j, c.n, arcs)


def step_monotonic(c: Configuration, t: Transition) -> Configuration:
    """Apply one Fig-1 style transition, raising on violated side conditions."""
    _require_nonterminal(c)
    kind = t.kind
    if kind == SHIFT:
        return _shift(c)
    if c.i < 1:
        raise IllegalTransitionError(f"{t} needs a non-empty lambda1")
    if kind == NO_ARC:
        return _retreat(c, c.arcs)
    if kind == LEFT_ARC:
        # <l1|i, l2, j|B, A>  =>  <l1, i|l2, j|B, A + {j->i}>
        if c.arcs.head_of(c.i) is not None:
            raise IllegalTransitionError(
                f"{t}: single-head violated, {c.i} already has a head"
            )
        if c.arcs.has_path(c.i, c.j):
            raise IllegalTransitionError(
                f"{t}: acyclicity violated, path {c.i}->*{c.j} exists"
            )
        arcs = c.arcs.copy()
        arcs.add(c.j, c.i, t.label)
        return _retreat(c, arcs)
    if kind == RIGHT_ARC:
        # <l1|i, l2, j|B, A>  =>  <l1, i|l2, j|B, A + {i->j}>
        if c.arcs.head_of(c.j) is not None:
            raise IllegalTransitionError(
                f"{t}: single-head violated, {c.j} already has a head"
            )
        if c.arcs.has_path(c.j, c.i):
            raise IllegalTransitionError(
                f"{t}: acyclicity violated, path {c.j}->*{c.i} exists"
            )
        arcs = c.arcs.copy()
        arcs.add(c.i, c.j, t.label)
        return _retreat(c, arcs)
    raise IllegalTransitionError(f"unknown transition kind {kind!r}")


def apply_nonmonotonic(
    c: Configuration, t: Transition
) -> tuple[Configuration, list[Arc]]:
    """Apply one non-monotonic transition; also report the removed arcs.

    LeftArc:  A <- (A + {j->i}) - {x->i in A} - {k->j in A | i->*k in A}
    RightArc: A <- (A + {i->j}) - {x->j in A} - {k->i in A | j->*k in A}

    Both removal sets are evaluated on the arc set as it stood before the
    transition.  Re-creating an arc that is already present replaces it in
    place and removes nothing.  The path test i ->* k uses the possibly
    empty path convention, so creating i->j on top of j->i removes j->i.
    """
    _require_nonterminal(c)
    kind = t.kind
    if kind == SHIFT:
        return _shift(c), []
    if c.i < 1:
        raise IllegalTransitionError(f"{t} needs a non-empty lambda1")
    if kind == NO_ARC:
        return _retreat(c, c.arcs), []
    if kind == LEFT_ARC:
        head, dep = c.j, c.i
    elif kind == RIGHT_ARC:
        head, dep = c.i, c.j
    else:
        raise IllegalTransitionError(f"unknown transition kind {kind!r}")
    removed: list[Arc] = []
    arcs = c.arcs.copy()
    old_head = c.arcs.head_of(dep)
    if old_head is not None and old_head != head:
        removed.append(arcs.remove(dep))
    # Cycle breaking: the new arc head->dep closes a cycle exactly when the
    # old arc set had a path dep ->* (head of `head`); drop that entering arc.
    k = c.arcs.head_of(head)
    if k is not None and c.arcs.has_path(dep, k):
        removed.append(arcs.remove(head))
    arcs.add(head, dep, t.label)
    return _retreat(c, arcs), removed


def step_nonmonotonic(c: Configuration, t: Transition) -> Configuration:
    return apply_nonmonotonic(c, t)[0]
