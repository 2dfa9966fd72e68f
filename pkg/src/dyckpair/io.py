"""Text formats for words, re-pairings and pebbling strategies.

Word lines are either literal words over +/- (or brackets) or family
shorthand: ``Z n``, ``X a0 a1 ...``, ``Y m l``, ``frame k <word-or-shorthand>``.
Re-pairing files start with ``N <length>`` followed by one ``l r`` pair
per line, 1-based, in play order.
"""

from __future__ import annotations

import csv
import io
import json
import os
from typing import Iterable, Sequence

from .errors import ParseError
from .words import DyckWord, as_word, frame, parse_signs, x_word, y_word, z_word


def parse_word(text: str) -> DyckWord:
    """One word from a literal or a shorthand line."""
    toks = text.split()
    if not toks:
        raise ParseError("empty word line")
    head = toks[0]
    try:
        if head in ("Z", "X", "Y"):
            nums = [int(t) for t in toks[1:]]
            if head == "Z":
                (n,) = nums
                return z_word(n)
            if head == "X":
                return x_word(*nums)
            m, ell = nums
            return y_word(m, ell)
        if head == "frame":
            return frame(parse_word(" ".join(toks[2:])), int(toks[1]))
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad shorthand {text!r}: {exc}") from None
    if len(toks) != 1:
        raise ParseError(f"cannot parse word line {text!r}")
    try:
        return as_word(parse_signs(head))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def read_words(text: str) -> list[DyckWord]:
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_word(line))
    return out


def word_arg(arg: str) -> DyckWord:
    """A CLI word argument: an existing file (first word) or a word/shorthand."""
    if os.path.isfile(arg):
        with open(arg) as fh:
            words = read_words(fh.read())
        if not words:
            raise ParseError(f"{arg}: no word found")
        return words[0]
    return parse_word(arg)


def format_repairing(n: int, pairs: Iterable[Sequence[int]]) -> str:
    lines = [f"N {n}"]
    lines.extend(f"{int(l)} {int(r)}" for l, r in pairs)
    return "\n".join(lines) + "\n"


def parse_repairing(text: str) -> tuple[int | None, list[tuple[int, int]]]:
    n = None
    pairs = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        try:
            if toks[0] == "N":
                n = int(toks[1])
            else:
                l, r = (int(t) for t in toks)
                pairs.append((l, r))
        except (ValueError, IndexError):
            raise ParseError(f"line {ln}: cannot parse {raw!r}") from None
    return n, pairs


def read_repairing(path: str):
    with open(path) as fh:
        return parse_repairing(fh.read())


def format_moves(moves) -> str:
    return "".join(f"{kind} {v}\n" for kind, v in moves)


def parse_moves(text: str) -> list[tuple[str, int]]:
    out = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 2 or toks[0] not in ("B+", "B-", "W+", "W-", "W->"):
            raise ParseError(f"line {ln}: cannot parse move {raw!r}")
        try:
            out.append((toks[0], int(toks[1])))
        except ValueError:
            raise ParseError(f"line {ln}: bad node in {raw!r}") from None
    return out


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    for row in rows:
        wr.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.6g}"
    return v


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=str) + "\n"


def emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        print(text, end="")
    else:
        with open(path, "w") as fh:
            fh.write(text)
