"""Command-line front end.

Subcommands: train, parse, eval, audit-bounds, inspect, synth.  Exit code
0 on success, 2 for usage errors and missing files, 1 for runtime
failures, which are reported on stderr.
"""

from __future__ import annotations

import argparse
import sys

from .audit import (
    DEFAULT_SEARCH_LIMIT,
    POLICIES,
    audit_bounds,
    write_audit_csv,
)
from .model import Model, ModelFormatError, TRAIN_MODES
from .oracles import LossVariant
from .synthetic import crossing_fraction, make_treebank
from .training import (
    TrainOptions,
    evaluate,
    evaluate_model,
    parse_corpus,
    train,
)
from .treebank import (
    DEFAULT_ROOT_LABEL,
    gold_predictions,
    read_conllx_file,
    write_conllx_file,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="covparse",
        description="Non-projective dependency parsing with list-based "
        "transition systems and approximate dynamic oracles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a greedy parser")
    p.add_argument("--train", required=True, metavar="CONLL", help="training treebank")
    p.add_argument("--model", required=True, metavar="FILE", help="model output path")
    p.add_argument("--mode", choices=TRAIN_MODES, default="dyn-nonmono")
    p.add_argument(
        "--loss",
        choices=[v.value for v in LossVariant],
        default=LossVariant.UPPER.value,
        help="bound driving the non-monotonic oracle (default: upper)",
    )
    p.add_argument("--iters", type=int, default=15)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--explore-k", type=int, default=1)
    p.add_argument("--explore-p", type=float, default=0.9)
    p.add_argument("--no-shuffle", action="store_true")
    p.add_argument("--raw-distance", action="store_true")
    p.add_argument("--default-label", default=DEFAULT_ROOT_LABEL)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("parse", help="parse a treebank with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("eval", help="score predictions against gold")
    p.add_argument("--gold", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--pred", help="predicted treebank to score")
    group.add_argument("--model", help="parse the gold file with this model first")
    p.add_argument("--report", action="store_true", help="full report")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("audit-bounds", help="compare loss bounds to exact loss")
    p.add_argument("--input", required=True)
    p.add_argument("--budget", type=int, default=20000)
    p.add_argument("--policy", choices=POLICIES, default="oracle-with-noise")
    p.add_argument("--noise-p", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, metavar="CSV")
    p.add_argument("--model", help="model for the 'model-guided' policy")
    p.add_argument("--limit", type=int, default=DEFAULT_SEARCH_LIMIT)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("inspect", help="print model metadata and top weights")
    p.add_argument("--model", required=True)
    p.add_argument("--top", type=int, default=10)
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("synth", help="generate a synthetic treebank")
    p.add_argument("--out", required=True)
    p.add_argument("--sentences", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-len", type=int, default=5)
    p.add_argument("--max-len", type=int, default=12)
    p.set_defaults(func=cmd_synth)

    return parser


def cmd_train(args) -> int:
    corpus = read_conllx_file(args.train)
    options = TrainOptions(
        mode=args.mode,
        loss=LossVariant(args.loss),
        iterations=args.iters,
        explore_k=args.explore_k,
        explore_p=args.explore_p,
        seed=args.seed,
        shuffle=not args.no_shuffle,
        default_label=args.default_label,
        raw_distance=args.raw_distance,
    )
    model = train(corpus, options)
    model.save(args.model)
    print(
        f"trained {args.mode} on {len(corpus)} sentences, "
        f"{len(model.labels)} labels, {model.nonzero_count()} nonzero weights "
        f"-> {args.model}"
    )
    return 0


def cmd_parse(args) -> int:
    model = Model.load(args.model)
    corpus = read_conllx_file(args.input)
    preds, _ = parse_corpus(model, corpus)
    write_conllx_file(args.output, corpus, preds)
    print(f"parsed {len(corpus)} sentences -> {args.output}")
    return 0


def cmd_eval(args) -> int:
    gold = read_conllx_file(args.gold)
    if args.model:
        model = Model.load(args.model)
        _, report = evaluate_model(model, gold)
    else:
        pred = read_conllx_file(args.pred)
        report = evaluate(gold, gold_predictions(pred))
    print(f"UAS {report.uas:.2f} LAS {report.las:.2f}")
    if args.report:
        print(report.to_text())
    return 0


def cmd_audit(args) -> int:
    corpus = read_conllx_file(args.input)
    model = Model.load(args.model) if args.model else None
    audit = audit_bounds(
        corpus,
        budget=args.budget,
        policy=args.policy,
        noise_p=args.noise_p,
        seed=args.seed,
        model=model,
        limit=args.limit,
    )
    write_audit_csv(audit, args.out)
    print(audit.to_text())
    print(f"csv -> {args.out}")
    return 0


def cmd_inspect(args) -> int:
    model = Model.load(args.model)
    print(f"mode: {model.mode}")
    print(f"labels ({len(model.labels)}): {', '.join(model.labels)}")
    print(f"actions: {len(model.actions)}")
    print(f"nonzero weights: {model.nonzero_count()}")
    if model.metadata:
        print(f"training: {model.metadata}")
    for fid, action, weight in model.top_weights(args.top):
        print(f"  {fid:016x}  {str(action):<24} {weight:+.4f}")
    return 0


def cmd_synth(args) -> int:
    corpus = make_treebank(
        sentences=args.sentences,
        seed=args.seed,
        min_len=args.min_len,
        max_len=args.max_len,
    )
    write_conllx_file(args.out, corpus)
    print(
        f"wrote {len(corpus)} sentences "
        f"({crossing_fraction(corpus):.1%} crossing arcs) -> {args.out}"
    )
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"covparse: file not found: {exc.filename or exc}", file=sys.stderr)
        return 2
    except (ModelFormatError, ValueError, RuntimeError) as exc:
        print(f"covparse: {exc}", file=sys.stderr)
        return 1
