"""Averaged perceptron over hashed features, with a stable on-disk format.

Weights live in a two-level dict: feature id -> action id -> weight.
Averaging is lazy (Daume's trick): each cell keeps an accumulator and the
timestamp of its last change, settled on update and once more at the end,
so the averaged weight costs O(updates) instead of O(updates * cells).

The file format is explicit little-machinery big-endian: magic, version,
a length-prefixed JSON header (label inventory, system mode, options,
training provenance), the weight triples sorted by (feature, action), and
a CRC32 of everything before it.  Identical models serialize to identical
bytes, which the determinism tests rely on.
"""

from __future__ import annotations

import json
import struct
import zlib
from typing import Iterable, Sequence

from .covington import (
    LEFT_ARC,
    NO_ARC,
    RIGHT_ARC,
    SHIFT,
    Transition,
    TransitionKind,
)
from .treebank import DEFAULT_ROOT_LABEL

MAGIC = b"CVPM"
FORMAT_VERSION = 1

_HEAD = struct.Struct(">H")
_LEN = struct.Struct(">I")
_COUNT = struct.Struct(">Q")
_TRIPLE = struct.Struct(">QId")
_CRC = struct.Struct(">I")

TRAIN_MODES = ("static", "dyn-mono", "dyn-nonmono")


class ModelFormatError(ValueError):
    """Raised when a model file is not one of ours or is damaged."""


def build_actions(labels: Sequence[str]) -> tuple[Transition, ...]:
    """The fixed scoring inventory: Shift, NoArc, then labelled arcs."""
    out = [Transition(SHIFT), Transition(NO_ARC)]
    out.extend(Transition(LEFT_ARC, lab) for lab in labels)
    out.extend(Transition(RIGHT_ARC, lab) for lab in labels)
    return tuple(out)


class Model:
    def __init__(
        self,
        labels: Iterable[str],
        mode: str,
        default_label: str = DEFAULT_ROOT_LABEL,
        raw_distance: bool = False,
        metadata: dict | None = None,
    ):
        if mode not in TRAIN_MODES:
            raise ValueError(f"unknown mode {mode!r}; choose from {TRAIN_MODES}")
        self.labels = tuple(sorted(set(labels) | {default_label}))
        self.mode = mode
        self.default_label = default_label
        self.raw_distance = raw_distance
        self.metadata = dict(metadata or {})
        self.actions = build_actions(self.labels)
        self._aid = {
            (t.kind, t.label): aid for aid, t in enumerate(self.actions)
        }
        self.weights: dict[int, dict[int, float]] = {}
        self._acc: dict[int, dict[int, float]] = {}
        self._stamp: dict[int, dict[int, int]] = {}
        self.finalized = False

    def action_id(self, t: Transition) -> int:
        try:
            return self._aid[(t.kind, t.label)]
        except KeyError:
            raise KeyError(f"transition {t} is not in the action inventory")

    def score_all(self, feats: Sequence[int]) -> list[float]:
        totals = [0.0] * len(self.actions)
        weights = self.weights
        for fid in feats:
            row = weights.get(fid)
            if row:
                for aid, w in row.items():
                    totals[aid] += w
        return totals

    def best_action(self, scores: Sequence[float], kinds: set[TransitionKind]) -> int:
        """Highest score wins; ties fall to Shift < NoArc < LeftArc < RightArc,
        then to the lexicographically smallest label."""
        best_key = None
        best_aid = -1
        for aid, t in enumerate(self.actions):
            if t.kind not in kinds:
                continue
            key = (-scores[aid], t.kind, t.label)
            if best_key is None or key < best_key:
                best_key = key
                best_aid = aid
        if best_aid < 0:
            raise ValueError("no legal action to score")
        return best_aid

    def best_transition(
        self, feats: Sequence[int], kinds: set[TransitionKind]
    ) -> Transition:
        return self.actions[self.best_action(self.score_all(feats), kinds)]

    def _bump(self, fid: int, aid: int, delta: float, now: int) -> None:
        row_w = self.weights.setdefault(fid, {})
        row_a = self._acc.setdefault(fid, {})
        row_t = self._stamp.setdefault(fid, {})
        w = row_w.get(aid, 0.0)
        row_a[aid] = row_a.get(aid, 0.0) + w * (now - row_t.get(aid, 0))
        row_t[aid] = now
        row_w[aid] = w + delta

    def update(
        self,
        now: int,
        feats: Sequence[int],
        correct_aid: int,
        predicted_aid: int,
    ) -> None:
        """Standard perceptron step; feats is a multiset of feature ids."""
        if self.finalized:
            raise ValueError("model is finalized; no further updates")
        if correct_aid == predicted_aid:
            return
        for fid in feats:
            self._bump(fid, correct_aid, +1.0, now)
            self._bump(fid, predicted_aid, -1.0, now)

    def finalize(self, horizon: int) -> None:
        """Replace raw weights by their averages over timestamps 1..horizon.

        Idempotent; a model that never saw an update stays all zero.
        """
        if horizon <= 0:
            raise ValueError("averaging horizon must be positive")
        if self.finalized:
            return
        for fid, row_w in self.weights.items():
            row_a = self._acc[fid]
            row_t = self._stamp[fid]
            for aid, w in row_w.items():
                acc = row_a.get(aid, 0.0) + w * (horizon - row_t.get(aid, 0) + 1)
                row_w[aid] = acc / horizon
        self._acc = {}
        self._stamp = {}
        self.finalized = True

    def nonzero_count(self) -> int:
        return sum(
            1 for row in self.weights.values() for w in row.values() if w != 0.0
        )

    def top_weights(self, k: int = 20) -> list[tuple[int, Transition, float]]:
        entries = [
            (fid, aid, w)
            for fid, row in self.weights.items()
            for aid, w in row.items()
            if w != 0.0
        ]
        entries.sort(key=lambda e: (-abs(e[2]), e[0], e[1]))
        return [(fid, self.actions[aid], w) for fid, aid, w in entries[:k]]

    def save(self, path: str) -> None:
        if not self.finalized:
            raise ValueError("only a finalized model can be saved")
        header = {
            "labels": list(self.labels),
            "mode": self.mode,
            "default_label": self.default_label,
            "raw_distance": self.raw_distance,
            "training": self.metadata,
        }
        blob = json.dumps(header, sort_keys=True, separators=(",", ":")).encode(
            "utf-8"
        )
        triples = sorted(
            (fid, aid, w)
            for fid, row in self.weights.items()
            for aid, w in row.items()
            if w != 0.0
        )
        payload = bytearray()
        payload += MAGIC
        payload += _HEAD.pack(FORMAT_VERSION)
        payload += _LEN.pack(len(blob))
        payload += blob
        payload += _COUNT.pack(len(triples))
        for fid, aid, w in triples:
            payload += _TRIPLE.pack(fid, aid, w)
        payload += _CRC.pack(zlib.crc32(bytes(payload)) & 0xFFFFFFFF)
        with open(path, "wb") as fh:
            fh.write(bytes(payload))

    @staticmethod
    def load(path: str) -> "Model":
        with open(path, "rb") as fh:
            raw = fh.read()
        if len(raw) < len(MAGIC) + _HEAD.size + _LEN.size + _CRC.size:
            raise ModelFormatError("model file truncated")
        body, crc_bytes = raw[:-_CRC.size], raw[-_CRC.size:]
        if _CRC.unpack(crc_bytes)[0] != (zlib.crc32(body) & 0xFFFFFFFF):
            raise ModelFormatError("model file checksum mismatch")
        if body[: len(MAGIC)] != MAGIC:
            raise ModelFormatError("not a model file (bad magic)")
        off = len(MAGIC)
        (version,) = _HEAD.unpack_from(body, off)
        off += _HEAD.size
        if version != FORMAT_VERSION:
            raise ModelFormatError(f"unsupported model format version {version}")
        (blob_len,) = _LEN.unpack_from(body, off)
        off += _LEN.size
        if off + blob_len > len(body):
            raise ModelFormatError("model file truncated in header")
        try:
            header = json.loads(body[off : off + blob_len].decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ModelFormatError(f"bad model header: {exc}") from exc
        off += blob_len
        if off + _COUNT.size > len(body):
            raise ModelFormatError("model file truncated before weights")
        (count,) = _COUNT.unpack_from(body, off)
        off += _COUNT.size
        if off + count * _TRIPLE.size != len(body):
            raise ModelFormatError("model file truncated in weights")
        model = Model(
            labels=header["labels"],
            mode=header["mode"],
            default_label=header["default_label"],
            raw_distance=header["raw_distance"],
            metadata=header.get("training", {}),
        )
        if tuple(header["labels"]) != model.labels:
            raise ModelFormatError("label inventory in header is not canonical")
        for _ in range(count):
            fid, aid, w = _TRIPLE.unpack_from(body, off)
            off += _TRIPLE.size
            if aid >= len(model.actions):
                raise ModelFormatError(f"action id {aid} out of range")
            model.weights.setdefault(fid, {})[aid] = w
        model.finalized = True
        return model
