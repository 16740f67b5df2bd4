"""Greedy training with static and dynamic oracles, parsing, evaluation.

Training walks one configuration at a time.  At each one the model scores
every legal action; if the prediction is not sanctioned by the oracle, the
perceptron takes an update toward the best-scoring sanctioned action.
Under a static oracle the walk always follows the canonical gold path.
Under a dynamic oracle the walk may follow the model's own (possibly
wrong) prediction, with probability explore_p once explore_k iterations
have passed, so the model learns to recover from its own mistakes.

Everything is driven by one seeded RNG, so equal seeds give byte-identical
models.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, asdict

from .covington import (
    LEFT_ARC,
    RIGHT_ARC,
    apply_nonmonotonic,
    initial_config,
    legal_monotonic,
    legal_nonmonotonic,
    step_monotonic,
    step_nonmonotonic,
)
from .features import extract_features
from .model import Model, TRAIN_MODES
from .oracles import (
    GoldTree,
    LossVariant,
    oracle_mono,
    oracle_nonmono,
    static_next,
)
from .treebank import DEFAULT_ROOT_LABEL, Corpus, Sentence


@dataclass(frozen=True)
class TrainOptions:
    mode: str = "dyn-nonmono"
    loss: LossVariant = LossVariant.UPPER
    iterations: int = 15
    explore_k: int = 1
    explore_p: float = 0.9
    seed: int = 0
    shuffle: bool = True
    default_label: str = DEFAULT_ROOT_LABEL
    raw_distance: bool = False
    eager_shift: bool = False


def collect_labels(corpus: Corpus, default_label: str = DEFAULT_ROOT_LABEL) -> list[str]:
    labels = {default_label}
    for sent in corpus:
        labels.update(t.gold_label for t in sent.tokens)
    return sorted(labels)


def train(corpus: Corpus, options: TrainOptions = TrainOptions()) -> Model:
    if options.mode not in TRAIN_MODES:
        raise ValueError(f"unknown mode {options.mode!r}; choose from {TRAIN_MODES}")
    if options.iterations < 1:
        raise ValueError("need at least one iteration")
    if not 0.0 <= options.explore_p <= 1.0:
        raise ValueError("explore_p must be a probability")
    if len(corpus) == 0:
        raise ValueError("empty training corpus")
    loss = LossVariant(options.loss)
    snapshot = asdict(options)
    snapshot["loss"] = loss.value
    model = Model(
        labels=collect_labels(corpus, options.default_label),
        mode=options.mode,
        default_label=options.default_label,
        raw_distance=options.raw_distance,
        metadata={"options": snapshot, "sentences": len(corpus)},
    )
    nonmono = options.mode == "dyn-nonmono"
    legal = legal_nonmonotonic if nonmono else legal_monotonic
    step = step_nonmonotonic if nonmono else step_monotonic
    golds = [GoldTree.from_sentence(s) for s in corpus]
    rng = random.Random(options.seed)
    now = 0
    for it in range(options.iterations):
        order = list(range(len(corpus)))
        if options.shuffle:
            rng.shuffle(order)
        for sid in order:
            sent, gold = corpus[sid], golds[sid]
            c = initial_config(len(sent))
            while not c.is_terminal():
                now += 1
                feats = extract_features(c, sent, options.raw_distance)
                scores = model.score_all(feats)
                predicted_aid = model.best_action(scores, legal(c))
                if options.mode == "static":
                    correct = static_next(c, gold, options.eager_shift)
                    correct_aid = model.action_id(correct)
                    if predicted_aid != correct_aid:
                        model.update(now, feats, correct_aid, predicted_aid)
                    follow_aid = correct_aid
                else:
                    if options.mode == "dyn-mono":
                        sanctioned = oracle_mono(c, gold, options.default_label)
                    else:
                        sanctioned = oracle_nonmono(
                            c, gold, loss, options.default_label
                        )
                    oracle_aids = [model.action_id(t) for t in sanctioned]
                    if predicted_aid in oracle_aids:
                        follow_aid = predicted_aid
                    else:
                        correct_aid = min(
                            oracle_aids,
                            key=lambda aid: (
                                -scores[aid],
                                model.actions[aid].kind,
                                model.actions[aid].label,
                            ),
                        )
                        model.update(now, feats, correct_aid, predicted_aid)
                        explore = (
                            it >= options.explore_k
                            and rng.random() < options.explore_p
                        )
                        follow_aid = predicted_aid if explore else correct_aid
                c = step(c, model.actions[follow_aid])
    model.finalize(now)
    return model


@dataclass
class NonmonoStats:
    """What the replacing transitions did, measured against gold arcs."""

    arc_transitions: int = 0
    replacing: int = 0
    gold_creating: int = 0
    harmful: int = 0
    neutral: int = 0

    def merge(self, other: "NonmonoStats") -> None:
        self.arc_transitions += other.arc_transitions
        self.replacing += other.replacing
        self.gold_creating += other.gold_creating
        self.harmful += other.harmful
        self.neutral += other.neutral

    @property
    def replacing_pct(self) -> float:
        return 100.0 * self.replacing / self.arc_transitions if self.arc_transitions else 0.0

    @property
    def gold_creating_pct(self) -> float:
        return 100.0 * self.gold_creating / self.replacing if self.replacing else 0.0

    @property
    def harmful_pct(self) -> float:
        return 100.0 * self.harmful / self.replacing if self.replacing else 0.0

    @property
    def neutral_pct(self) -> float:
        return 100.0 * self.neutral / self.replacing if self.replacing else 0.0

    def to_text(self) -> str:
        return (
            f"arc transitions {self.arc_transitions}, replacing "
            f"{self.replacing_pct:.2f}%; of those: gold-creating "
            f"{self.gold_creating_pct:.2f}%, harmful {self.harmful_pct:.2f}%, "
            f"neutral {self.neutral_pct:.2f}%"
        )


def parse_sentence(
    model: Model,
    sent: Sentence,
    gold: GoldTree | None = None,
    stats: NonmonoStats | None = None,
) -> list[tuple[int, str]]:
    """Greedy parse; any word left headless is attached to the root.

    When stats is given (non-monotonic models only), each arc transition
    that replaced an existing arc is classified: it either created a gold
    arc, or destroyed one without that excuse (harmful), or neither.
    """
    nonmono = model.mode == "dyn-nonmono"
    legal = legal_nonmonotonic if nonmono else legal_monotonic
    c = initial_config(len(sent))
    while not c.is_terminal():
        feats = extract_features(c, sent, model.raw_distance)
        t = model.best_transition(feats, legal(c))
        if nonmono:
            nxt, removed = apply_nonmonotonic(c, t)
            if stats is not None and (t.kind is LEFT_ARC or t.kind is RIGHT_ARC):
                stats.arc_transitions += 1
                if removed:
                    stats.replacing += 1
                    head, dep = (c.j, c.i) if t.kind is LEFT_ARC else (c.i, c.j)
                    if gold is not None and gold.head_of(dep) == head:
                        stats.gold_creating += 1
                    elif gold is not None and any(
                        gold.head_of(arc.dep) == arc.head for arc in removed
                    ):
                        stats.harmful += 1
                    else:
                        stats.neutral += 1
            c = nxt
        else:
            c = step_monotonic(c, t)
    out = []
    for dep in range(1, len(sent) + 1):
        head = c.arcs.head_of(dep)
        if head is None:
            out.append((0, model.default_label))
        else:
            out.append((head, c.arcs.label_of(dep) or model.default_label))
    return out


def parse_corpus(
    model: Model, corpus: Corpus, with_stats: bool = False
) -> tuple[list[list[tuple[int, str]]], NonmonoStats | None]:
    """Parse every sentence; optionally gather non-monotonicity statistics.

    Statistics need gold arcs for the classification, so with_stats reads
    the gold columns of the given corpus; they are only collected for
    non-monotonic models.
    """
    stats = NonmonoStats() if with_stats and model.mode == "dyn-nonmono" else None
    preds = []
    for sent in corpus:
        gold = GoldTree.from_sentence(sent) if stats is not None else None
        preds.append(parse_sentence(model, sent, gold, stats))
    return preds, stats


_LENGTH_BUCKETS = ("1", "2", "3-7", ">7")


def _length_bucket(length: int) -> str:
    if length <= 2:
        return str(length)
    if length <= 7:
        return "3-7"
    return ">7"


@dataclass
class EvalReport:
    uas: float
    las: float
    tokens: int
    bucket_precision: dict[str, tuple[int, int]] = field(default_factory=dict)
    nonmono: NonmonoStats | None = None

    def to_text(self) -> str:
        lines = [f"UAS {self.uas:.2f} LAS {self.las:.2f} ({self.tokens} tokens)"]
        for bucket in _LENGTH_BUCKETS:
            correct, total = self.bucket_precision.get(bucket, (0, 0))
            pct = 100.0 * correct / total if total else 0.0
            lines.append(
                f"arc length {bucket:>3}: precision {pct:6.2f}% ({correct}/{total})"
            )
        if self.nonmono is not None:
            lines.append(self.nonmono.to_text())
        return "\n".join(lines)

    def to_json(self) -> str:
        payload = {
            "uas": self.uas,
            "las": self.las,
            "tokens": self.tokens,
            "bucket_precision": {
                k: {"correct": c, "total": t}
                for k, (c, t) in self.bucket_precision.items()
            },
        }
        if self.nonmono is not None:
            payload["nonmono"] = {
                "arc_transitions": self.nonmono.arc_transitions,
                "replacing_pct": self.nonmono.replacing_pct,
                "gold_creating_pct": self.nonmono.gold_creating_pct,
                "harmful_pct": self.nonmono.harmful_pct,
                "neutral_pct": self.nonmono.neutral_pct,
            }
        return json.dumps(payload, sort_keys=True)


def evaluate(
    corpus: Corpus,
    predictions: list[list[tuple[int, str]]],
    nonmono: NonmonoStats | None = None,
) -> EvalReport:
    """Attachment scores over every token, punctuation included.

    Arc-length precision buckets cover predicted arcs between real words;
    root attachments have no string length in the same sense and are
    excluded from the buckets (never from UAS/LAS).
    """
    if len(predictions) != len(corpus):
        raise ValueError("prediction/corpus length mismatch")
    tokens = 0
    head_hits = 0
    both_hits = 0
    buckets = {b: [0, 0] for b in _LENGTH_BUCKETS}
    for sent, pred in zip(corpus, predictions):
        if len(pred) != len(sent):
            raise ValueError("prediction/sentence length mismatch")
        for tok, (head, label) in zip(sent.tokens, pred):
            tokens += 1
            if head == tok.gold_head:
                head_hits += 1
                if label == tok.gold_label:
                    both_hits += 1
            if head >= 1:
                bucket = buckets[_length_bucket(abs(head - tok.index))]
                bucket[1] += 1
                if head == tok.gold_head:
                    bucket[0] += 1
    if tokens == 0:
        raise ValueError("empty corpus")
    return EvalReport(
        uas=100.0 * head_hits / tokens,
        las=100.0 * both_hits / tokens,
        tokens=tokens,
        bucket_precision={b: (c, t) for b, (c, t) in buckets.items()},
        nonmono=nonmono,
    )


def evaluate_model(
    model: Model, corpus: Corpus, with_stats: bool = True
) -> tuple[list[list[tuple[int, str]]], EvalReport]:
    preds, stats = parse_corpus(model, corpus, with_stats=with_stats)
    return preds, evaluate(corpus, preds, stats)
