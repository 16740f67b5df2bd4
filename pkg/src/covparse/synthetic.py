"""Synthetic non-projective treebanks for tests and demos.

Trees are drawn uniformly over all labelled trees on the root plus n
words (Pruefer sequences), then oriented away from the root.  Uniform
random trees over linearly ordered nodes are heavily non-projective,
which is the point: the monotonic and non-monotonic systems only differ
on crossing structures.

Word forms encode sentence and position, so a parser with lexical
features can memorize the training set; tags and labels are small closed
sets derived deterministically from the structure.
"""

from __future__ import annotations

import random
from heapq import heapify, heappop, heappush

from .treebank import (
    DEFAULT_ROOT_LABEL,
    Corpus,
    Token,
    validate_sentence,
)

_POS_CYCLE = ("NN", "VB", "DT", "JJ", "IN")
_N_LABELS = 6


def _prufer_decode(seq: list[int], m: int) -> list[tuple[int, int]]:
    """Edges of the labelled tree on nodes 0..m-1 with Pruefer code seq."""
    degree = [1] * m
    for v in seq:
        degree[v] += 1
    leaves = [v for v in range(m) if degree[v] == 1]
    heapify(leaves)
    edges = []
    for v in seq:
        leaf = heappop(leaves)
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1:
            heappush(leaves, v)
    u = heappop(leaves)
    w = heappop(leaves)
    edges.append((u, w))
    return edges


def random_heads(rng: random.Random, n: int) -> list[int]:
    """Gold heads of a uniform random tree over the root and n words."""
    if n < 1:
        raise ValueError("need at least one word")
    if n == 1:
        return [0]
    m = n + 1
    seq = [rng.randrange(m) for _ in range(m - 2)]
    adjacency: dict[int, list[int]] = {v: [] for v in range(m)}
    for a, b in _prufer_decode(seq, m):
        adjacency[a].append(b)
        adjacency[b].append(a)
    heads = [0] * n
    stack = [0]
    seen = {0}
    while stack:
        node = stack.pop()
        for nxt in adjacency[node]:
            if nxt not in seen:
                seen.add(nxt)
                heads[nxt - 1] = node
                stack.append(nxt)
    return heads


def _label_for(head: int, dep: int) -> str:
    if head == 0:
        return DEFAULT_ROOT_LABEL
    return f"l{(3 * head + 5 * dep) % _N_LABELS}"


def make_treebank(
    sentences: int = 200,
    seed: int = 0,
    min_len: int = 5,
    max_len: int = 12,
) -> Corpus:
    if not 1 <= min_len <= max_len:
        raise ValueError("need 1 <= min_len <= max_len")
    rng = random.Random(seed)
    out = []
    for sid in range(sentences):
        n = rng.randint(min_len, max_len)
        heads = random_heads(rng, n)
        tokens = [
            Token(
                index=k,
                form=f"w{sid}x{k}",
                lemma=f"w{sid}x{k}",
                cpos=_POS_CYCLE[k % len(_POS_CYCLE)],
                pos=_POS_CYCLE[k % len(_POS_CYCLE)],
                feats="_",
                gold_head=heads[k - 1],
                gold_label=_label_for(heads[k - 1], k),
            )
            for k in range(1, n + 1)
        ]
        out.append(validate_sentence(tokens, sid))
    return Corpus(tuple(out))


def _spans_cross(a: tuple[int, int], b: tuple[int, int]) -> bool:
    (al, ar), (bl, br) = sorted([tuple(sorted(a)), tuple(sorted(b))])
    return al < bl < ar < br


def crossing_fraction(corpus: Corpus) -> float:
    """Fraction of gold arcs (root arcs included) crossed by another arc."""
    total = 0
    crossing = 0
    for sent in corpus:
        arcs = [(t.gold_head, t.index) for t in sent.tokens]
        total += len(arcs)
        for k, arc in enumerate(arcs):
            if any(
                _spans_cross(arc, other)
                for o, other in enumerate(arcs)
                if o != k
            ):
                crossing += 1
    return crossing / total if total else 0.0
