"""Cycle counting and enumeration for small dependency graphs.

Two regimes matter here.  Plain arc sets respect the single-head
constraint (in-degree <= 1), where cycles are node-disjoint and countable
in linear time.  The union of an arc set with a set of still-wanted gold
arcs can have in-degree 2, so its elementary cycles are enumerated with
Johnson's algorithm (Johnson 1975) and then classified by which arc the
non-monotonic parser would remove when the cycle gets closed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .covington import ArcSet


class InDegreeError(ValueError):
    """Raised when a graph that must have in-degree <= 1 does not."""


@dataclass(frozen=True)
class Digraph:
    """Arc-list digraph over integer nodes; parallel arcs collapse."""

    arcs: frozenset[tuple[int, int]]
    nodes: frozenset[int] = field(default_factory=frozenset)

    @staticmethod
    def from_arcs(arcs: Iterable[tuple[int, int]]) -> "Digraph":
        arcset = frozenset(arcs)
        for h, d in arcset:
            if h == d:
                raise ValueError(f"self-loop arc {h}->{d}")
        nodes = frozenset(x for arc in arcset for x in arc)
        return Digraph(arcset, nodes)


def _head_map(arcs: Iterable[tuple[int, int]]) -> dict[int, int]:
    head: dict[int, int] = {}
    for h, d in arcs:
        if d in head:
            raise InDegreeError(f"node {d} has two incoming arcs")
        head[d] = h
    return head


def _count_cycles_head_map(head: dict[int, int]) -> int:
    """Cycle count of an in-degree <= 1 graph given as a head map.

    Every node has a unique head chain, so walking head pointers with
    three-colour marking finds each cycle exactly once.
    """
    WHITE, GRAY, BLACK = 0, 1, 2
    color: dict[int, int] = {}
    cycles = 0
    for start in head:
        if color.get(start, WHITE) != WHITE:
            continue
        path = []
        node: int | None = start
        while node is not None and color.get(node, WHITE) == WHITE:
            color[node] = GRAY
            path.append(node)
            node = head.get(node)
        if node is not None and color[node] == GRAY:
            cycles += 1
        for v in path:
            color[v] = BLACK
    return cycles


def count_cycles_indeg1(g: Digraph) -> int:
    """Count the cycles of a graph whose nodes have at most one incoming arc.

    Raises InDegreeError if some node has two incoming arcs.
    """
    return _count_cycles_head_map(_head_map(g.arcs))


def _prune_to_core(
    adj: dict[int, set[int]], radj: dict[int, set[int]], nodes: set[int]
) -> set[int]:
    """Iteratively strip nodes with no incoming or no outgoing arc.

    What survives is the union of all cycles (plus paths between them);
    an acyclic graph prunes to nothing, which is the common fast path.
    """
    core = set(nodes)
    doomed = [v for v in core if not adj.get(v) or not radj.get(v)]
    while doomed:
        v = doomed.pop()
        if v not in core:
            continue
        core.discard(v)
        for w in adj.get(v, ()):
            radj[w].discard(v)
            if w in core and not radj[w]:
                doomed.append(w)
        for w in radj.get(v, ()):
            adj[w].discard(v)
            if w in core and not adj[w]:
                doomed.append(w)
    return core


def _reachable(adj: dict[int, set[int]], src: int, allowed: set[int]) -> set[int]:
    seen = {src}
    stack = [src]
    while stack:
        for nxt in adj.get(stack.pop(), ()):
            if nxt in allowed and nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def _elem_cycles(arcs: Iterable[tuple[int, int]]) -> list[tuple[int, ...]]:
    adj: dict[int, set[int]] = {}
    radj: dict[int, set[int]] = {}
    nodes: set[int] = set()
    for h, d in arcs:
        adj.setdefault(h, set()).add(d)
        radj.setdefault(d, set()).add(h)
        nodes.add(h)
        nodes.add(d)

    core = _prune_to_core(adj, radj, nodes)
    if not core:
        return []

    cycles: list[tuple[int, ...]] = []
    for s in sorted(core):
        allowed = {v for v in core if v >= s}
        comp = _reachable(adj, s, allowed) & _reachable(radj, s, allowed)
        if len(comp) < 2:
            continue

        blocked: set[int] = set()
        unblock_later: dict[int, set[int]] = {v: set() for v in comp}
        path: list[int] = []

        def unblock(v: int) -> None:
            stack = [v]
            while stack:
                u = stack.pop()
                if u in blocked:
                    blocked.discard(u)
                    stack.extend(unblock_later[u])
                    unblock_later[u].clear()

        def circuit(v: int) -> bool:
            found = False
            path.append(v)
            blocked.add(v)
            for w in sorted(adj.get(v, ())):
                if w not in comp:
                    continue
                if w == s:
                    cycles.append(tuple(path))
                    found = True
                elif w not in blocked:
                    if circuit(w):
                        found = True
            if found:
                unblock(v)
            else:
                for w in adj.get(v, ()):
                    if w in comp:
                        unblock_later[w].add(v)
            path.pop()
            return found

        circuit(s)
    cycles.sort()
    return cycles


def elementary_cycles(g: Digraph) -> list[tuple[int, ...]]:
    """All elementary cycles, each rotated to start at its smallest node.

    Johnson's blocked search, run from each node s in increasing order over
    the subgraph restricted to the strongly connected component of s among
    nodes >= s.  That makes s the minimum of every cycle it reports, which
    gives the canonical rotation for free.  The result is sorted.
    """
    return _elem_cycles(g.arcs)


def _covington_order_key(arc: tuple[int, int]) -> tuple[int, int]:
    """Position in the arc-building sweep: later arcs sort higher.

    The sweep visits focus pairs with the right word ascending and, within
    one right word, the left word descending; so an arc is built later when
    its larger endpoint is larger, and for equal larger endpoints when its
    smaller endpoint is smaller.
    """
    h, d = arc
    return (max(h, d), -min(h, d))


def classify_cycles(
    a: ArcSet,
    wanted: Iterable[tuple[int, int]],
    gold_arcs: Iterable[tuple[int, int]],
) -> tuple[int, int]:
    """Count cycles of A union I, and how many of them are problematic.

    `wanted` (I) is the set of gold arcs still considered buildable; it must
    be a subset of gold_arcs.  In each elementary cycle of the union, the
    closing arc x->y is the wanted-but-unbuilt arc that the sweep builds
    last; creating it makes the parser drop the cycle's arc entering x.
    The cycle is problematic when that dropped arc is a gold arc.
    """
    wanted = frozenset(wanted)
    gold_arcs = frozenset(gold_arcs)
    if not wanted <= gold_arcs:
        raise ValueError("wanted arcs must be a subset of the gold arcs")
    built = a.pairs()
    union = built | wanted
    n_c = 0
    n_pc = 0
    for cycle in _elem_cycles(union):
        n_c += 1
        arcs_on_cycle = [
            (cycle[k], cycle[(k + 1) % len(cycle)]) for k in range(len(cycle))
        ]
        closable = [arc for arc in arcs_on_cycle if arc in wanted and arc not in built]
        if not closable:
            raise RuntimeError(
                "cycle with no unbuilt wanted arc; built arc set must be cyclic"
            )
        closing = max(closable, key=_covington_order_key)
        x = closing[0]
        entering_x = [arc for arc in arcs_on_cycle if arc[1] == x]
        assert len(entering_x) == 1, "elementary cycle enters each node once"
        if entering_x[0] in gold_arcs:
            n_pc += 1
    return n_c, n_pc


def cycle_count(arcs: Sequence[tuple[int, int]]) -> int:
    """Convenience wrapper: in-degree-1 cycle count of raw (head, dep) pairs."""
    return count_cycles_indeg1(Digraph.from_arcs(arcs))
