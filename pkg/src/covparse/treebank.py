"""CoNLL-X treebank reading, validation and writing.

Sentences are blank-line separated blocks of 10 tab-separated columns:
ID, FORM, LEMMA, CPOSTAG, POSTAG, FEATS, HEAD, DEPREL, PHEAD, PDEPREL.
Token indices run 1..n; index 0 is the artificial root and never gets a
row of its own.  PHEAD and PDEPREL are not interpreted, only carried
through verbatim so that emit() round-trips input files byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

DEFAULT_ROOT_LABEL = "ROOT"

N_COLUMNS = 10


class ConllFormatError(ValueError):
    """Raised for malformed CoNLL-X input (wrong column count, bad int, ...)."""


class TreeValidationError(ValueError):
    """Raised when a structurally well-formed block is not a valid tree."""


@dataclass(frozen=True)
class Token:
    """One CoNLL-X row.  gold_head is 0 for tokens attached to the root."""

    index: int
    form: str
    lemma: str = "_"
    cpos: str = "_"
    pos: str = "_"
    feats: str = "_"
    gold_head: int = 0
    gold_label: str = DEFAULT_ROOT_LABEL
    phead: str = "_"
    pdeprel: str = "_"


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]

    def __len__(self) -> int:
        return len(self.tokens)

    def __getitem__(self, i: int) -> Token:
        return self.tokens[i]


@dataclass(frozen=True)
class Corpus:
    sentences: tuple[Sentence, ...]

    def __len__(self) -> int:
        return len(self.sentences)

    def __getitem__(self, i: int) -> Sentence:
        return self.sentences[i]

    def __iter__(self):
        return iter(self.sentences)


def validate_sentence(tokens: Sequence[Token], ordinal: int) -> Sentence:
    """Check index contiguity, head range and acyclicity (forest rooted at 0)."""
    n = len(tokens)
    if n == 0:
        raise TreeValidationError(f"sentence {ordinal}: empty sentence")
    for k, tok in enumerate(tokens, start=1):
        if tok.index != k:
            raise TreeValidationError(
                f"sentence {ordinal}: token ids not contiguous from 1 "
                f"(found {tok.index} at position {k})"
            )
        if not 0 <= tok.gold_head <= n:
            raise TreeValidationError(
                f"sentence {ordinal}: head {tok.gold_head} of token {k} "
                f"out of range 0..{n}"
            )
        if tok.gold_head == k:
            raise TreeValidationError(
                f"sentence {ordinal}: token {k} is its own head"
            )
    # Every head chain must reach 0; a chain longer than n loops.
    for k in range(1, n + 1):
        node, steps = k, 0
        while node != 0:
            node = tokens[node - 1].gold_head
            steps += 1
            if steps > n:
                raise TreeValidationError(
                    f"sentence {ordinal}: head cycle through token {k}"
                )
    return Sentence(tuple(tokens))


def parse_conllx(text: str) -> Corpus:
    """Parse CoNLL-X text into a validated Corpus.

    Lines starting with '#' are skipped.  Raises ConllFormatError with the
    offending line number, or TreeValidationError naming the sentence.
    """
    sentences: list[Sentence] = []
    pending: list[Token] = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r")
        if line.startswith("#"):
            continue
        if not line.strip():
            if pending:
                sentences.append(validate_sentence(pending, len(sentences) + 1))
                pending = []
            continue
        cols = line.split("\t")
        if len(cols) != N_COLUMNS:
            raise ConllFormatError(
                f"line {lineno}: expected {N_COLUMNS} tab-separated columns, "
                f"got {len(cols)}"
            )
        try:
            index = int(cols[0])
            head = int(cols[6])
        except ValueError as exc:
            raise ConllFormatError(f"line {lineno}: non-integer ID or HEAD") from exc
        pending.append(
            Token(
                index=index,
                form=cols[1],
                lemma=cols[2],
                cpos=cols[3],
                pos=cols[4],
                feats=cols[5],
                gold_head=head,
                gold_label=cols[7],
                phead=cols[8],
                pdeprel=cols[9],
            )
        )
    if pending:
        sentences.append(validate_sentence(pending, len(sentences) + 1))
    return Corpus(tuple(sentences))


def emit_conllx(
    corpus: Corpus,
    predictions: Sequence[Sequence[tuple[int, str]]] | None = None,
) -> str:
    """Render a corpus back to CoNLL-X text.

    predictions, when given, supplies (head, label) per token per sentence
    and replaces the HEAD/DEPREL columns; all other columns are copied from
    the input unchanged.  Every token must have a prediction.
    """
    if predictions is not None and len(predictions) != len(corpus):
        raise ValueError(
            f"prediction count {len(predictions)} does not match "
            f"{len(corpus)} sentences"
        )
    blocks: list[str] = []
    for s, sent in enumerate(corpus):
        if predictions is not None and len(predictions[s]) != len(sent):
            raise ValueError(f"sentence {s + 1}: prediction length mismatch")
        lines = []
        for t, tok in enumerate(sent.tokens):
            head, label = (
                (tok.gold_head, tok.gold_label)
                if predictions is None
                else predictions[s][t]
            )
            if head is None:
                raise ValueError(f"sentence {s + 1}: token {t + 1} has no head")
            lines.append(
                "\t".join(
                    (
                        str(tok.index),
                        tok.form,
                        tok.lemma,
                        tok.cpos,
                        tok.pos,
                        tok.feats,
                        str(head),
                        label,
                        tok.phead,
                        tok.pdeprel,
                    )
                )
            )
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n" if blocks else ""


def read_conllx_file(path: str) -> Corpus:
    with open(path, encoding="utf-8") as fh:
        return parse_conllx(fh.read())


def write_conllx_file(
    path: str,
    corpus: Corpus,
    predictions: Sequence[Sequence[tuple[int, str]]] | None = None,
) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(emit_conllx(corpus, predictions))


def gold_predictions(corpus: Corpus) -> list[list[tuple[int, str]]]:
    """Gold heads/labels in prediction shape; handy for round-trip checks."""
    return [[(t.gold_head, t.gold_label) for t in s.tokens] for s in corpus]
