"""Adapters between the reference structures and the package types."""

from covparse import (
    Configuration,
    Corpus,
    GoldTree,
    Sentence,
    Token,
    validate_sentence,
)
from covparse.treebank import DEFAULT_ROOT_LABEL


def label_for(head: int, dep: int) -> str:
    """Deterministic toy label so labeled paths are exercised everywhere."""
    if head == 0:
        return DEFAULT_ROOT_LABEL
    return f"l{(head + 2 * dep) % 4}"


def sentence_from_heads(heads, sid: int = 0) -> Sentence:
    """Build a validated Sentence from a head vector indexed 0..n."""
    n = len(heads) - 1
    tokens = [
        Token(
            index=d,
            form=f"w{sid}x{d}",
            pos=f"P{d % 3}",
            gold_head=heads[d],
            gold_label=label_for(heads[d], d),
        )
        for d in range(1, n + 1)
    ]
    return validate_sentence(tokens, sid)


def corpus_from_heads(head_vectors) -> Corpus:
    return Corpus(
        tuple(
            sentence_from_heads(h, sid) for sid, h in enumerate(head_vectors)
        )
    )


def gold_from_heads(heads) -> GoldTree:
    n = len(heads) - 1
    return GoldTree(
        heads[1:], [label_for(heads[d], d) for d in range(1, n + 1)]
    )


def to_ref(c: Configuration):
    """Project a package configuration onto the literal-list picture."""
    return (
        c.lambda1,
        c.lambda2,
        c.buffer,
        frozenset((a.head, a.dep, a.label) for a in c.arcs.arcs()),
    )
