"""Tokenizer and terminal lattice.

No disambiguation happens here: every reading the lexicon licenses goes
into the lattice and the chart sorts them out.  Lattice positions are
vertices ``(token index, sub)``; a clitic split introduces an inner
vertex ``(i, k)`` between ``(i, 0)`` and ``(i + 1, 0)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .lexicon import Lexicon, WordEntry

UNKNOWN_PENALTY = 2.0

_TOKEN = re.compile(r"\w+['’](?=\w)|\w+(?:-\w+)*|[^\w\s]", re.UNICODE)
_SENTENCE_END = frozenset(".!?")


@dataclass(frozen=True)
class Token:
    index: int
    surface: str
    char_span: tuple

    @property
    def is_punct(self) -> bool:
        return not any(ch.isalnum() for ch in self.surface)


@dataclass(frozen=True)
class TerminalNode:
    first: int
    last: int
    entry: WordEntry
    penalty: float
    start: tuple
    end: tuple
    surface: str
    fallback: bool = False

    @property
    def token_range(self) -> tuple:
        return (self.first, self.last)

    def tsv(self) -> str:
        feats = "|".join(f"{k}={v}" for k, v in sorted(self.entry.morph.items())) or "_"
        rng = f"{self.first}" if self.first == self.last else f"{self.first}-{self.last}"
        if self.start[1] or self.end[1]:
            rng += f".{self.start[1]}"
        return "\t".join([rng, self.entry.pos, self.entry.lemma, feats, f"{self.penalty:g}"])


def tokenize(text: str) -> list[Token]:
    return [Token(i, m.group(), m.span()) for i, m in enumerate(_TOKEN.finditer(text), 1)]


def split_sentences(text: str) -> list[str]:
    """Split on . ! ? outside double quotes; the terminator stays with its sentence."""
    out, buf, quoted = [], [], False
    for ch in text:
        buf.append(ch)
        if ch == '"':
            quoted = not quoted
        elif ch in _SENTENCE_END and not quoted:
            piece = "".join(buf).strip()
            if piece and any(c.isalnum() for c in piece):
                out.append(piece)
            elif out:
                out[-1] += piece
            buf = []
    rest = "".join(buf).strip()
    if rest:
        out.append(rest)
    return out


def build_lattice(tokens: list[Token], lex: Lexicon) -> list[TerminalNode]:
    nodes: list[TerminalNode] = []
    covered: set[int] = set()
    n = len(tokens)
    for pos, tok in enumerate(tokens):
        i = tok.index
        here: list[TerminalNode] = []
        for e in lex.direct(tok.surface):
            here.append(TerminalNode(i, i, e, 0.0, (i, 0), (i + 1, 0), tok.surface))
        for e in lex.multiwords_from(tok.surface):
            k = len(e.multiword)
            window = tokens[pos:pos + k]
            if len(window) == k and all(t.surface.lower() == w.lower()
                                        for t, w in zip(window, e.multiword)):
                last = window[-1].index
                surface = " ".join(t.surface for t in window)
                here.append(TerminalNode(i, last, e, 0.0, (i, 0), (last + 1, 0), surface))
        for k, split in enumerate(lex.split_clitic(tok.surface), 1):
            inner = (i, k)
            here.append(TerminalNode(i, i, split.verb, 0.0, (i, 0), inner, split.stem))
            for ce in split.clitic_entries:
                here.append(TerminalNode(i, i, ce, 0.0, inner, (i + 1, 0), split.clitic))
        if not here and tok.is_punct:
            here.append(TerminalNode(i, i, WordEntry(tok.surface, tok.surface, "Punct", {}),
                                     0.0, (i, 0), (i + 1, 0), tok.surface))
        for node in here:
            covered.update(range(node.first, node.last + 1))
        nodes.extend(here)
    for tok in tokens:
        if tok.index not in covered:
            i = tok.index
            for e in Lexicon.fallback(tok.surface):
                nodes.append(TerminalNode(i, i, e, UNKNOWN_PENALTY, (i, 0), (i + 1, 0),
                                          tok.surface, fallback=True))
    nodes.sort(key=lambda nd: (nd.start, nd.end != nd.start and nd.end[1] == 0, nd.end))
    return _stable_by_start(nodes)


def _stable_by_start(nodes: list[TerminalNode]) -> list[TerminalNode]:
    # Python's sort is stable, so lexicon order survives within one start vertex.
    return sorted(nodes, key=lambda nd: nd.start)


def dump_lattice(nodes: list[TerminalNode]) -> str:
    return "".join(nd.tsv() + "\n" for nd in nodes)
