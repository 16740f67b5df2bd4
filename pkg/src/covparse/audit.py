"""Exact non-monotonic loss by search, and empirical auditing of the bounds.

The exact loss of a configuration is the best achievable number of missed
gold arcs over all ways of finishing the parse.  The non-monotonic system
makes that expensive to compute in general, but for short sentences a
best-first branch-and-bound settles it quickly: the cheap lower bound
orders the frontier and the tightened upper bound prunes it, and the two
meet almost immediately on near-gold configurations.

audit_bounds drives parses off the gold path on purpose, computes all
three bounds plus the exact loss at every visited configuration, and
refuses to continue if the chain lower <= exact <= pc_upper <= upper ever
breaks.  What it returns is the material for judging how tight the
approximations are in practice.
"""

from __future__ import annotations

import csv
import itertools
import random
from dataclasses import dataclass, field
from heapq import heappop, heappush
from typing import TYPE_CHECKING

from .covington import (
    Configuration,
    LEFT_ARC,
    RIGHT_ARC,
    Transition,
    initial_config,
    legal_nonmonotonic,
    step_nonmonotonic,
)
from .oracles import GoldTree, LossVariant, loss_bounds_nonmono, oracle_nonmono
from .treebank import DEFAULT_ROOT_LABEL, Corpus

if TYPE_CHECKING:
    from .model import Model

DEFAULT_SEARCH_LIMIT = 10

AUDIT_CSV_COLUMNS = (
    "config_count",
    "mean_lower",
    "mean_exact",
    "mean_pc_upper",
    "mean_upper",
    "rel_lower",
    "rel_pc_upper",
    "rel_upper",
)

POLICIES = ("oracle-with-noise", "random-legal", "model-guided")


class SearchSpaceError(ValueError):
    """Raised when a sentence is too long for exact-loss search."""


class BoundViolationError(RuntimeError):
    """Raised when the bound chain fails on an audited configuration."""


def exact_loss(
    c: Configuration, gold: GoldTree, limit: int = DEFAULT_SEARCH_LIMIT
) -> int:
    """Minimum missed gold arcs over all non-monotonic completions of c.

    Best-first over the lower bound; the running incumbent is the smallest
    tightened upper bound seen, which every subtree can realize.  States
    are memoized on (i, j, arcs) since label choices cannot affect loss.
    The state space is exponential in sentence length, hence the hard
    limit; raise it only deliberately.
    """
    if c.n > limit:
        raise SearchSpaceError(
            f"sentence has {c.n} words, over the exact-loss search limit "
            f"of {limit}"
        )
    bounds = loss_bounds_nonmono(c, gold)
    best_upper = bounds.pc_upper
    if bounds.lower >= best_upper:
        return best_upper
    tick = itertools.count()
    heap: list[tuple[int, int, Configuration]] = [(bounds.lower, next(tick), c)]
    seen = {c.key()}
    while heap:
        lower, _, cur = heappop(heap)
        if lower >= best_upper:
            return best_upper
        for kind in sorted(legal_nonmonotonic(cur)):
            nxt = step_nonmonotonic(cur, Transition(kind))
            key = nxt.key()
            if key in seen:
                continue
            seen.add(key)
            nb = loss_bounds_nonmono(nxt, gold)
            if nb.pc_upper < best_upper:
                best_upper = nb.pc_upper
            if nb.lower < best_upper:
                heappush(heap, (nb.lower, next(tick), nxt))
    return best_upper


@dataclass
class BoundAudit:
    """Aggregate of one audit run; records holds (lower, exact, pc_upper, upper)."""

    config_count: int
    mean_lower: float
    mean_exact: float
    mean_pc_upper: float
    mean_upper: float
    rel_lower: float
    rel_pc_upper: float
    rel_upper: float
    skipped_sentences: int = 0
    records: list[tuple[int, int, int, int]] = field(default_factory=list, repr=False)

    def csv_row(self) -> list[str]:
        return [
            str(self.config_count),
            f"{self.mean_lower:.6f}",
            f"{self.mean_exact:.6f}",
            f"{self.mean_pc_upper:.6f}",
            f"{self.mean_upper:.6f}",
            f"{self.rel_lower:.6f}",
            f"{self.rel_pc_upper:.6f}",
            f"{self.rel_upper:.6f}",
        ]

    def to_text(self) -> str:
        lines = [
            f"configurations audited: {self.config_count}",
            f"mean lower / exact / pc_upper / upper: "
            f"{self.mean_lower:.4f} / {self.mean_exact:.4f} / "
            f"{self.mean_pc_upper:.4f} / {self.mean_upper:.4f}",
            f"mean relative difference to exact: lower {self.rel_lower:.4%}, "
            f"pc_upper {self.rel_pc_upper:.4%}, upper {self.rel_upper:.4%}",
        ]
        if self.skipped_sentences:
            lines.append(
                f"sentences skipped over the search limit: {self.skipped_sentences}"
            )
        return "\n".join(lines)


def write_audit_csv(audit: BoundAudit, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(AUDIT_CSV_COLUMNS)
        writer.writerow(audit.csv_row())


def _random_transition(c: Configuration, rng: random.Random, label: str) -> Transition:
    kind = rng.choice(sorted(legal_nonmonotonic(c)))
    if kind is LEFT_ARC or kind is RIGHT_ARC:
        return Transition(kind, label)
    return Transition(kind)


def audit_bounds(
    corpus: Corpus,
    budget: int = 20000,
    policy: str = "oracle-with-noise",
    noise_p: float = 0.1,
    seed: int = 0,
    model: "Model | None" = None,
    limit: int = DEFAULT_SEARCH_LIMIT,
    default_label: str = DEFAULT_ROOT_LABEL,
) -> BoundAudit:
    """Walk non-monotonic parses and check the bounds against exact loss.

    Sentences are cycled in passes until `budget` non-terminal
    configurations have been audited.  The walking policy picks the next
    transition: "oracle-with-noise" follows the dynamic oracle but goes
    rogue with probability noise_p, "random-legal" walks uniformly over
    legal transitions, "model-guided" follows a trained model greedily.
    Every audited configuration is checked hard; a violation raises
    BoundViolationError.  Sentences longer than `limit` words are skipped
    and counted.
    """
    if len(corpus) == 0:
        raise ValueError("empty corpus")
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}; choose from {POLICIES}")
    if policy == "model-guided" and model is None:
        raise ValueError("policy 'model-guided' needs a model")
    if budget <= 0:
        raise ValueError("budget must be positive")

    records: list[tuple[int, int, int, int]] = []
    skipped: set[int] = set()
    for pass_idx in itertools.count():
        progressed = False
        for sid, sent in enumerate(corpus):
            if len(records) >= budget:
                break
            if len(sent) > limit:
                skipped.add(sid)
                continue
            gold = GoldTree.from_sentence(sent)
            rng = random.Random(f"{seed}:{pass_idx}:{sid}")
            c = initial_config(len(sent))
            while not c.is_terminal() and len(records) < budget:
                bounds = loss_bounds_nonmono(c, gold)
                exact = exact_loss(c, gold, limit=limit)
                if not bounds.lower <= exact <= bounds.pc_upper <= bounds.upper:
                    raise BoundViolationError(
                        f"bound chain broken at {c!r}: lower={bounds.lower} "
                        f"exact={exact} pc_upper={bounds.pc_upper} "
                        f"upper={bounds.upper}"
                    )
                records.append((bounds.lower, exact, bounds.pc_upper, bounds.upper))
                progressed = True
                c = step_nonmonotonic(
                    c, _next_by_policy(c, sent, gold, rng, policy, noise_p,
                                        model, default_label)
                )
        if len(records) >= budget:
            break
        if not progressed:
            raise RuntimeError(
                "no sentence fits under the search limit; audit cannot proceed"
            )
    return _aggregate(records, len(skipped))


def _next_by_policy(c, sent, gold, rng, policy, noise_p, model, default_label):
    if policy == "model-guided":
        from .features import extract_features

        feats = extract_features(c, sent, raw_distance=model.raw_distance)
        return model.best_transition(feats, legal_nonmonotonic(c))
    if policy == "oracle-with-noise" and rng.random() >= noise_p:
        return rng.choice(oracle_nonmono(c, gold, LossVariant.UPPER, default_label))
    return _random_transition(c, rng, default_label)


def _aggregate(records, skipped_count: int) -> BoundAudit:
    count = len(records)
    if count == 0:
        raise ValueError("no configurations audited")
    sums = [0.0, 0.0, 0.0, 0.0]
    rels = [0.0, 0.0, 0.0]
    for lower, exact, pc_upper, upper in records:
        sums[0] += lower
        sums[1] += exact
        sums[2] += pc_upper
        sums[3] += upper
        denom = max(exact, 1)
        rels[0] += abs(lower - exact) / denom
        rels[1] += abs(pc_upper - exact) / denom
        rels[2] += abs(upper - exact) / denom
    return BoundAudit(
        config_count=count,
        mean_lower=sums[0] / count,
        mean_exact=sums[1] / count,
        mean_pc_upper=sums[2] / count,
        mean_upper=sums[3] / count,
        rel_lower=rels[0] / count,
        rel_pc_upper=rels[1] / count,
        rel_upper=rels[2] / count,
        skipped_sentences=skipped_count,
        records=records,
    )
