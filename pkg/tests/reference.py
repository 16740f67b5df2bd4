"""Slow, independent reference implementations the tests trust.

Everything in this module is written against the literal list-and-set
picture of the two transition systems, with its own legality checks,
stepping, loss search and cycle enumeration.  Nothing here imports from
the package under test, so agreement between the two is meaningful
evidence rather than a tautology.

Conventions shared with the package: tokens are 1..n, 0 is the implicit
root, an arc is written (head, dep) or (head, dep, label), and a gold
tree is a head vector `heads` where heads[d] is the gold head of token d
(heads[0] is unused).
"""

import itertools
from functools import lru_cache

# ---------------------------------------------------------------------------
# literal list configurations

SHIFT = "shift"
NO_ARC = "noarc"
LEFT = "left"
RIGHT = "right"


def initial_ref(n):
    """<[], [], [1..n], {}> as concrete lists plus a triple set."""
    return ([], [], list(range(1, n + 1)), frozenset())


def is_terminal_ref(cfg):
    return not cfg[2]


def _adjacency(arcs):
    adj = {}
    for h, d, _ in arcs:
        adj.setdefault(h, []).append(d)
    return adj


def _reachable_down(arcs, start):
    """All nodes reachable from start following arcs head-to-dependent.

    The start node itself is included: the removal rule for the
    non-monotonic arc transitions uses the possibly-empty-path reading.
    """
    adj = _adjacency(arcs)
    seen = {start}
    stack = [start]
    while stack:
        for nxt in adj.get(stack.pop(), ()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def _has_path(arcs, u, v):
    """True when a directed (possibly empty) path u ->* v exists."""
    return v in _reachable_down(arcs, u)


def _head_in(arcs, dep):
    for h, d, _ in arcs:
        if d == dep:
            return h
    return None


def legal_ref(cfg, system):
    """Legal transition kinds by the literal side conditions."""
    l1, _, buf, arcs = cfg
    if not buf:
        return []
    kinds = [SHIFT]
    if l1:
        i, j = l1[-1], buf[0]
        kinds.append(NO_ARC)
        if system == "nonmono":
            kinds.extend((LEFT, RIGHT))
        else:
            if _head_in(arcs, i) is None and not (
                i != j and _has_path(arcs, i, j)
            ):
                kinds.append(LEFT)
            if _head_in(arcs, j) is None and not (
                i != j and _has_path(arcs, j, i)
            ):
                kinds.append(RIGHT)
    return kinds


def _nonmono_union(arcs, head, dep, label):
    removed = {(h, d, l) for (h, d, l) in arcs if d == dep}
    reach = _reachable_down(arcs, dep)
    removed |= {(h, d, l) for (h, d, l) in arcs if d == head and h in reach}
    return (arcs - removed) | {(head, dep, label)}


def step_ref(cfg, kind, system, label=""):
    """Apply one transition to a literal configuration.

    Shift:  <l1, l2, j|B, A>  =>  <l1.l2|j, [],   B, A>
    NoArc:  <l1|i, l2, j|B, A> => <l1, i|l2, j|B, A>
    LeftArc adds j->i and RightArc adds i->j before retreating like NoArc;
    the non-monotonic versions also drop the dependent's old head arc and
    any arc into the new head from a node reachable from the dependent.
    """
    l1, l2, buf, arcs = cfg
    if kind == SHIFT:
        return (l1 + l2 + [buf[0]], [], buf[1:], arcs)
    if not l1:
        raise ValueError("empty lambda1")
    i, j = l1[-1], buf[0]
    if kind == NO_ARC:
        return (l1[:-1], [i] + l2, buf, arcs)
    head, dep = (j, i) if kind == LEFT else (i, j)
    if system == "mono":
        if _head_in(arcs, dep) is not None:
            raise ValueError("dependent already has a head")
        if _has_path(arcs, dep, head) and dep != head:
            raise ValueError("arc would close a cycle")
        arcs = arcs | {(head, dep, label)}
    else:
        arcs = _nonmono_union(arcs, head, dep, label)
    return (l1[:-1], [i] + l2, buf, arcs)


# ---------------------------------------------------------------------------
# exhaustive minimum loss over completions

def _mono_arc_ok(arcs, head, dep):
    if any(d == dep for _, d in arcs):
        return None
    # walk down from dep; adding head->dep must not close a cycle
    seen = {dep}
    stack = [dep]
    adj = {}
    for h, d in arcs:
        adj.setdefault(h, []).append(d)
    while stack:
        for nxt in adj.get(stack.pop(), ()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    if head in seen:
        return None
    return frozenset(arcs | {(head, dep)})


def _nonmono_arc(arcs, head, dep):
    seen = {dep}
    stack = [dep]
    adj = {}
    for h, d in arcs:
        adj.setdefault(h, []).append(d)
    while stack:
        for nxt in adj.get(stack.pop(), ()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    keep = {
        (h, d)
        for h, d in arcs
        if d != dep and not (d == head and h in seen)
    }
    keep.add((head, dep))
    return frozenset(keep)


def brute_force_min_loss(i, j, n, arcs, gold, system):
    """Minimum |gold \\ A_final| over every completion from (i, j, A).

    gold and arcs are unlabeled (head, dep) pair sets; labels cannot
    change what is reachable, so they are ignored.  Exponential: meant
    for n <= 4-ish only.
    """
    gold = frozenset(gold)
    memo = {}

    def go(i, j, arcs):
        if j > n:
            return len(gold - arcs)
        key = (i, j, arcs)
        hit = memo.get(key)
        if hit is not None:
            return hit
        best = go(j, j + 1, arcs)
        if i >= 1:
            best = min(best, go(i - 1, j, arcs))
            for head, dep in ((j, i), (i, j)):
                if system == "mono":
                    nxt = _mono_arc_ok(arcs, head, dep)
                    if nxt is None:
                        continue
                else:
                    nxt = _nonmono_arc(arcs, head, dep)
                best = min(best, go(i - 1, j, nxt))
        memo[key] = best
        return best

    return go(i, j, frozenset(arcs))


def reachable_states(n, system):
    """Every (i, j, arc-pair-set) reachable from the initial configuration."""
    start = (0, 1, frozenset())
    seen = {start}
    stack = [start]
    while stack:
        i, j, arcs = stack.pop()
        if j > n:
            continue
        succs = [(j, j + 1, arcs)]
        if i >= 1:
            succs.append((i - 1, j, arcs))
            for head, dep in ((j, i), (i, j)):
                if system == "mono":
                    nxt = _mono_arc_ok(arcs, head, dep)
                    if nxt is None:
                        continue
                else:
                    nxt = _nonmono_arc(arcs, head, dep)
                succs.append((i - 1, j, nxt))
        for s in succs:
            if s not in seen:
                seen.add(s)
                stack.append(s)
    return seen


# ---------------------------------------------------------------------------
# gold trees as head vectors

def heads_acyclic(heads):
    n = len(heads) - 1
    for d in range(1, n + 1):
        seen = set()
        x = d
        while x != 0:
            if x in seen:
                return False
            seen.add(x)
            x = heads[x]
    return True


def all_gold_heads(n):
    """Every head vector over 1..n that forms a forest rooted at 0."""
    out = []
    choices = [[h for h in range(n + 1) if h != d] for d in range(1, n + 1)]
    for combo in itertools.product(*choices):
        heads = [0, *combo]
        if heads_acyclic(heads):
            out.append(heads)
    return out


def random_gold_heads(rng, n):
    """Uniform-ish random forest rooted at 0, by rejection."""
    while True:
        heads = [0] + [
            rng.choice([h for h in range(n + 1) if h != d])
            for d in range(1, n + 1)
        ]
        if heads_acyclic(heads):
            return heads


def real_arcs(heads):
    """The inter-word arcs of a head vector (root attachments dropped)."""
    return frozenset(
        (h, d) for d, h in enumerate(heads) if d >= 1 and h >= 1
    )


@lru_cache(maxsize=None)
def forest_count(n):
    """(n+1)^(n-1): number of forests over 1..n rooted at 0."""
    return (n + 1) ** (n - 1)


# ---------------------------------------------------------------------------
# elementary cycles by brute combinatorics

def brute_force_cycles(arcs):
    """All elementary cycles of a pair-set digraph, one tuple per cycle.

    Tries every node subset and every rotation-canonical arrangement
    (smallest node first), keeping those whose consecutive pairs are all
    arcs.  Factorial in the node count; fine for the tiny graphs the
    tests feed it.
    """
    arcset = {(h, d) for h, d in arcs}
    nodes = sorted({x for a in arcset for x in a})
    found = []
    for size in range(2, len(nodes) + 1):
        for combo in itertools.combinations(nodes, size):
            first, rest = combo[0], combo[1:]
            for perm in itertools.permutations(rest):
                cyc = (first, *perm)
                if all(
                    (cyc[k], cyc[(k + 1) % size]) in arcset
                    for k in range(size)
                ):
                    found.append(cyc)
    return sorted(found)
