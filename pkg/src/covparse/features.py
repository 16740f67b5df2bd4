"""Feature extraction for scoring transitions.

Templates address the two focus words L0 (left, the top of the first
list) and R0 (right, the front of the buffer), their immediate string
neighbours L1/R1/R2, their heads and grandparents in the arc set built so
far, their outermost and innermost dependents on each side, and the
context words CL/CR: the first and last word strictly between the focus
words whose head lies outside the closed interval [L0, R0] (a headless
word qualifies).

Per word the atoms are form (w), POS tag (p), and the label of its
incoming arc (l); per template there are also the bucketed focus distance
(d), left/right valencies (vl, vr) and the sorted label sets of left and
right dependents (sl, sr).  Exactly one feature fires per template; any
part that does not resolve contributes the NULL marker, and the artificial
root word gets a reserved form/tag of its own.

A feature is identified by a 64-bit blake2b digest of its template index
and part values.  Python's built-in hash() is salted per process, so it
cannot name features in models that must be byte-identical across runs.
"""

from __future__ import annotations

from hashlib import blake2b

from .covington import ArcSet, Configuration
from .treebank import Sentence

NULL = "NULL"

_SEP = "\x1f"

# One spec per template: space-separated parts, each "address:atom" or the
# bare pair-distance atom "d".
_TEMPLATE_SPECS = (
    # focus words and their neighbourhoods, one node at a time
    "L0:w",
    "L0:p",
    "L0:w L0:p",
    "L0:l",
    "L0h:w",
    "L0h:p",
    "L0h:l",
    "L0l':w",
    "L0l':p",
    "L0l':l",
    "L0r':w",
    "L0r':p",
    "L0r':l",
    "L0h2:w",
    "L0h2:p",
    "L0h2:l",
    "L0l:w",
    "L0l:p",
    "L0l:l",
    "L0r:w",
    "L0r:p",
    "L0r:l",
    "L0:w d",
    "L0:p d",
    "L0:w L0:vr",
    "L0:p L0:vr",
    "L0:w L0:vl",
    "L0:p L0:vl",
    "L0:w L0:sl",
    "L0:p L0:sl",
    "L0:w L0:sr",
    "L0:p L0:sr",
    "L1:w",
    "L1:p",
    "L1:w L1:p",
    "R0:w",
    "R0:p",
    "R0:w R0:p",
    "R0h:w",
    "R0h:p",
    "R0h:l",
    "R0h2:w",
    "R0h2:p",
    "R0l':w",
    "R0l':p",
    "R0l':l",
    "R0l:w",
    "R0l:p",
    "R0l:l",
    "R0:w d",
    "R0:p d",
    "R0:w R0:vl",
    "R0:p R0:vl",
    "R0:w R0:sl",
    "R0:p R0:sl",
    "R1:w",
    "R1:p",
    "R1:w R1:p",
    "R2:w",
    "R2:p",
    "R2:w R2:p",
    "CL:w",
    "CL:p",
    "CL:w CL:p",
    "CR:w",
    "CR:p",
    "CR:w CR:p",
    # focus-pair combinations
    "L0:w L0:p R0:w R0:p",
    "L0:w L0:p R0:w",
    "L0:w R0:w R0:p",
    "L0:w L0:p R0:p",
    "L0:p R0:w R0:p",
    "L0:w R0:w",
    "L0:p R0:p",
    "R0:p R1:p",
    "L0:w R0:w d",
    "L0:p R0:p d",
    # second-order POS combinations
    "R0:p R1:p R2:p",
    "L0:p R0:p R1:p",
    "L0h:p L0:p R0:p",
    "L0:p L0l':p R0:p",
    "L0:p L0r':p R0:p",
    "L0:p R0:p R0l':p",
    "L0:p L0l':p L0l:p",
    "L0:p L0r':p L0r:p",
    "L0:p L0h:p L0h2:p",
    "R0:p R0l':p R0l:p",
)


def _parse_spec(spec: str) -> tuple[tuple[str | None, str], ...]:
    parts = []
    for chunk in spec.split():
        if chunk == "d":
            parts.append((None, "d"))
        else:
            addr, atom = chunk.split(":")
            parts.append((addr, atom))
    return tuple(parts)


TEMPLATES: tuple[tuple[str, tuple[tuple[str | None, str], ...]], ...] = tuple(
    (spec, _parse_spec(spec)) for spec in _TEMPLATE_SPECS
)

N_TEMPLATES = len(TEMPLATES)


def distance_bucket(dist: int, raw: bool = False) -> str:
    if raw:
        return str(dist)
    if dist <= 5:
        return str(dist)
    if dist <= 7:
        return "6-7"
    if dist <= 10:
        return "8-10"
    return ">10"


def _resolve(
    addr: str, c: Configuration, kids: dict[int, list[int]]
) -> int | None:
    """Map an address to a word index in 1..n, or None when absent.

    Index 0 never resolves: lambda1 can be exhausted (i = 0) and arcs are
    only ever created between words, so every address either lands on a
    real token or is out of range.
    """
    if addr == "L0":
        return c.i if c.i >= 1 else None
    if addr == "R0":
        return c.j
    if addr == "L1":
        return c.i - 1 if c.i >= 2 else None
    if addr == "R1":
        return c.j + 1 if c.j + 1 <= c.n else None
    if addr == "R2":
        return c.j + 2 if c.j + 2 <= c.n else None
    if addr in ("L0h", "L0h2", "R0h", "R0h2"):
        node = c.i if addr[0] == "L" else c.j
        node = c.arcs.head_of(node) if node >= 1 else None
        if addr.endswith("2") and node is not None:
            node = c.arcs.head_of(node)
        return node
    if addr in ("L0l", "L0l'", "L0r", "L0r'", "R0l", "R0l'"):
        node = c.i if addr[0] == "L" else c.j
        deps = kids.get(node, ())
        if addr[2] == "l":
            left = [d for d in deps if d < node]
            if not left:
                return None
            # outermost left dependent, or the innermost for the primed form
            return max(left) if addr.endswith("'") else min(left)
        right = [d for d in deps if d > node]
        if not right:
            return None
        return min(right) if addr.endswith("'") else max(right)
    if addr in ("CL", "CR"):
        between = range(c.i + 1, c.j) if addr == "CL" else range(c.j - 1, c.i, -1)
        for x in between:
            h = c.arcs.head_of(x)
            if h is None or h < c.i or h > c.j:
                return x
        return None
    raise ValueError(f"unknown address {addr!r}")


def _atom(
    idx: int | None,
    atom: str,
    sent: Sentence,
    arcs: ArcSet,
    kids: dict[int, list[int]],
) -> str:
    if idx is None:
        return NULL
    if atom == "w":
        return sent.tokens[idx - 1].form
    if atom == "p":
        return sent.tokens[idx - 1].pos
    if atom == "l":
        label = arcs.label_of(idx)
        return label if label else NULL
    deps = kids.get(idx, ())
    if atom == "vl":
        return str(sum(1 for d in deps if d < idx))
    if atom == "vr":
        return str(sum(1 for d in deps if d > idx))
    if atom == "sl":
        labels = sorted({arcs.label_of(d) or NULL for d in deps if d < idx})
        return "+".join(labels) if labels else NULL
    if atom == "sr":
        labels = sorted({arcs.label_of(d) or NULL for d in deps if d > idx})
        return "+".join(labels) if labels else NULL
    raise ValueError(f"unknown atom {atom!r}")


def feature_id(template_index: int, values: list[str]) -> int:
    digest = blake2b(
        f"{template_index}{_SEP}{_SEP.join(values)}".encode("utf-8"),
        digest_size=8,
    ).digest()
    return int.from_bytes(digest, "big")


def extract_features(
    c: Configuration, sent: Sentence, raw_distance: bool = False
) -> list[int]:
    """One hashed feature per template for scoring transitions out of c."""
    kids = c.arcs.children_map()
    dist = distance_bucket(c.j - c.i, raw_distance)
    cache: dict[tuple[str | None, str], str] = {}
    out = []
    for tidx, (_, parts) in enumerate(TEMPLATES):
        values = []
        for addr, atom in parts:
            key = (addr, atom)
            val = cache.get(key)
            if val is None:
                if addr is None:
                    val = dist
                else:
                    val = _atom(_resolve(addr, c, kids), atom, sent, c.arcs, kids)
                cache[key] = val
            values.append(val)
        out.append(feature_id(tidx, values))
    return out


def dump_features(
    c: Configuration, sent: Sentence, raw_distance: bool = False
) -> list[str]:
    """Readable form of every template's value, for debugging and tests."""
    kids = c.arcs.children_map()
    dist = distance_bucket(c.j - c.i, raw_distance)
    out = []
    for spec, parts in TEMPLATES:
        values = []
        for addr, atom in parts:
            if addr is None:
                values.append(dist)
            else:
                values.append(_atom(_resolve(addr, c, kids), atom, sent, c.arcs, kids))
        out.append(f"{spec}={'|'.join(values)}")
    return out
