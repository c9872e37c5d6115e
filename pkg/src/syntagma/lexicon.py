"""Meaning-related lexical database.

Surface forms map to lemmas with morphology; every lemma carries its
meanings, and each meaning its own argument frame and control feature.
File layout (indentation is cosmetic)::

    CLITICS gli la lo le li
    SANDHI e
    LEMMA chiedere POS V
      FORM chiede mdv=ind tmp=pres pers=3 num=sg
      FORM chiedere mdv=inf
      MNG 1.4 ctrl=iobj
        SLOT subj cat=NP
        SLOT arg cat=C mdv=inf conn=di
        SLOT prep.arg conn=a cat=NP opt=true
        SEMTAG ask

A slot may also be written in bracket notation,
``SLOT arg(cat(C), mdv(inf), conn("di"))``.  Quoted lemmas and forms
(``FORM "computer science"``) declare fixed multiword expressions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

CONTROL_VALUES = ("subj", "iobj", "obj", "none")
OPEN_CLASSES = ("N", "V", "Adj", "Adv")

# Which pattern functions may realize a meaning slot.
SLOT_REALIZERS = {
    "subj": frozenset({"subj", "subj_pass"}),
    "obj": frozenset({"obj", "obj_pass"}),
    "arg": frozenset({"obj", "arg", "obj_pass"}),
    "iobj": frozenset({"iobj"}),
    "prep.arg": frozenset({"iobj", "arg"}),
}
ARGUMENT_FUNCTIONS = frozenset({"subj", "obj", "iobj", "arg", "obj_pass", "subj_pass"})


def slot_accepts_function(slot_function: str, child_function: str) -> bool:
    realizers = SLOT_REALIZERS.get(slot_function)
    if realizers is None:
        return slot_function == child_function
    return child_function in realizers


class LexiconError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, path: Optional[str] = None):
        self.message, self.line, self.path = message, line, path
        prefix = ":".join(str(x) for x in (path, line) if x is not None)
        super().__init__(f"{prefix}: {message}" if prefix else message)


@dataclass(frozen=True)
class WordEntry:
    surface: str
    lemma: str
    pos: str
    morph: dict = field(default_factory=dict, hash=False)
    multiword: tuple = ()
    clitic_suffixes: tuple = ()
    order: int = field(default=0, compare=False)

    def describe(self) -> str:
        feats = ",".join(f"{k}={v}" for k, v in sorted(self.morph.items())) or "_"
        return f"{self.pos}({self.lemma!r}, {feats})"


@dataclass(frozen=True)
class ArgSlot:
    function: str
    cat: Optional[str] = None
    conn: Optional[str] = None
    mdv: Optional[str] = None
    opt: bool = False

    def __str__(self) -> str:
        parts = []
        if self.conn is not None:
            parts.append(f'conn("{self.conn}")')
        if self.cat is not None:
            parts.append(f"cat({self.cat})")
        if self.mdv is not None:
            parts.append(f"mdv({self.mdv})")
        if self.opt:
            parts.append("opt(true)")
        return f"{self.function}({','.join(parts)})"


@dataclass(frozen=True)
class MeaningFrame:
    meaning_id: str
    slots: tuple
    ctrl: str = "none"
    sem_ref: Optional[str] = None

    def __str__(self) -> str:
        return f"mng {self.meaning_id} [{', '.join(map(str, self.slots))}] ctrl={self.ctrl}"


@dataclass(frozen=True)
class CliticSplit:
    stem: str
    verb: WordEntry
    clitic: str
    clitic_entries: tuple


_BRACKET_ATTR = re.compile(r"(\w+)\(\s*(\"[^\"]*\"|'[^']*'|[^()]*)\s*\)")


def _parse_slot(text: str, lineno: int) -> ArgSlot:
    text = text.strip()
    attrs: dict[str, str] = {}
    m = re.fullmatch(r"([\w.]+)\((.*)\)", text)
    if m:
        function = m.group(1)
        for name, value in _BRACKET_ATTR.findall(m.group(2)):
            attrs[name] = value.strip().strip("\"'")
    else:
        words = _words(text)
        if not words:
            raise LexiconError("SLOT needs a function", lineno)
        function = words[0]
        for w in words[1:]:
            if "=" not in w:
                raise LexiconError(f"bad slot attribute {w!r}", lineno)
            k, v = w.split("=", 1)
            attrs[k] = v
    unknown = set(attrs) - {"cat", "conn", "mdv", "opt"}
    if unknown:
        raise LexiconError(f"unknown slot attribute {sorted(unknown)[0]!r}", lineno)
    opt = attrs.get("opt", "false").lower()
    if opt not in ("true", "false"):
        raise LexiconError(f"opt must be true or false, not {opt!r}", lineno)
    return ArgSlot(
        function=function,
        cat=attrs.get("cat") or None,
        conn=attrs.get("conn") or None,
        mdv=attrs.get("mdv") or None,
        opt=opt == "true",
    )


class Lexicon:
    """Immutable lexicon; build it with :func:`load_lexicon` or :func:`loads_lexicon`."""

    def __init__(self, entries, meanings, clitics=(), sandhi=()):
        self._entries = tuple(entries)
        self._meanings = {k: tuple(v) for k, v in meanings.items()}
        self.clitics = tuple(sorted(clitics, key=lambda c: (-len(c), c)))
        self.sandhi = tuple(sandhi)
        self._by_surface: dict[str, list[WordEntry]] = {}
        self._multiword: dict[str, list[WordEntry]] = {}
        for e in self._entries:
            if e.multiword:
                self._multiword.setdefault(e.multiword[0].lower(), []).append(e)
            else:
                self._by_surface.setdefault(e.surface, []).append(e)

    def __len__(self) -> int:
        return len(self._entries)

    def entries(self):
        return iter(self._entries)

    def meaning_table(self):
        return sorted(self._meanings.items())

    def direct(self, surface: str) -> list[WordEntry]:
        found = self._by_surface.get(surface)
        if found is None and surface.lower() != surface:
            found = self._by_surface.get(surface.lower())
        return list(found or ())

    def multiwords_from(self, surface: str) -> list[WordEntry]:
        return list(self._multiword.get(surface.lower(), ()))

    def split_clitic(self, surface: str) -> list[CliticSplit]:
        """Infinitive + enclitic readings of an agglutinated token."""
        splits = []
        low = surface.lower()
        for clitic in self.clitics:
            if not low.endswith(clitic) or len(low) == len(clitic):
                continue
            stem = surface[: len(surface) - len(clitic)]
            clitic_entries = tuple(self.direct(clitic))
            if not clitic_entries:
                continue
            for restored in (stem, *(stem + s for s in self.sandhi)):
                for e in self.direct(restored):
                    if e.pos == "V" and clitic in e.clitic_suffixes:
                        splits.append(CliticSplit(stem, e, surface[len(stem):], clitic_entries))
        return splits

    def lookup(self, surface: str) -> list[WordEntry]:
        """Entries for ``surface``: direct forms, multiword starts, clitic splits.

        Unknown words give an empty list; the tagger decides on fallbacks.
        """
        found = self.direct(surface) + self.multiwords_from(surface)
        if found:
            return found
        out: list[WordEntry] = []
        for split in self.split_clitic(surface):
            for e in (split.verb, *split.clitic_entries):
                if e not in out:
                    out.append(e)
        return out

    def meanings_of(self, lemma: str, pos: str) -> list[MeaningFrame]:
        return list(self._meanings.get((lemma, pos), ()))

    def meaning(self, lemma: str, pos: str, meaning_id: str) -> Optional[MeaningFrame]:
        for m in self._meanings.get((lemma, pos), ()):
            if m.meaning_id == meaning_id:
                return m
        return None

    @staticmethod
    def fallback(surface: str) -> list[WordEntry]:
        lemma = surface.lower()
        return [WordEntry(surface, lemma, pos, {}) for pos in OPEN_CLASSES]


_COMMENT = re.compile(r"(^|\s)#.*$")
_WORD = re.compile(r'"[^"]*"|\S+')


def _words(line: str) -> list[str]:
    return [w[1:-1] if w.startswith('"') and w.endswith('"') and len(w) > 1 else w
            for w in _WORD.findall(line)]


def _features(words: list[str], lineno: int) -> dict:
    feats = {}
    for w in words:
        if "=" not in w:
            raise LexiconError(f"bad feature {w!r}", lineno)
        k, v = w.split("=", 1)
        feats[k] = v
    return feats


def loads_lexicon(text: str, path: Optional[str] = None) -> Lexicon:
    entries: list[WordEntry] = []
    meanings: dict[tuple, list[MeaningFrame]] = {}
    clitics: list[str] = []
    sandhi: list[str] = []
    lemma = pos = None
    mng: Optional[dict] = None

    def close_meaning():
        nonlocal mng
        if mng is None:
            return
        functions = [s.function for s in mng["slots"]]
        if len(set(functions)) != len(functions):
            raise LexiconError(f"duplicate slot function in {lemma} {mng['id']}",
                               mng["line"], path)
        meanings.setdefault((lemma, pos), []).append(
            MeaningFrame(mng["id"], tuple(mng["slots"]), mng["ctrl"], mng["sem"]))
        mng = None

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _COMMENT.sub("", raw).strip()
        if not line:
            continue
        words = _words(line)
        key, args = words[0], words[1:]
        try:
            if key == "CLITICS":
                clitics.extend(args)
            elif key == "SANDHI":
                sandhi.extend(args)
            elif key == "LEMMA":
                close_meaning()
                if len(args) != 3 or args[1] != "POS":
                    raise LexiconError("expected LEMMA <lemma> POS <category>", lineno)
                lemma, pos = args[0], args[2]
            elif key == "FORM":
                if lemma is None:
                    raise LexiconError("FORM outside a LEMMA block", lineno)
                if not args:
                    raise LexiconError("FORM needs a surface", lineno)
                surface = args[0]
                morph = _features(args[1:], lineno)
                parts = tuple(surface.split())
                suffixes = tuple(clitics) if pos == "V" and morph.get("mdv") == "inf" else ()
                entries.append(WordEntry(surface, lemma, pos, morph,
                                         parts if len(parts) > 1 else (), suffixes, len(entries)))
            elif key == "MNG":
                close_meaning()
                if lemma is None:
                    raise LexiconError("MNG outside a LEMMA block", lineno)
                if not args:
                    raise LexiconError("MNG needs an id", lineno)
                attrs = _features(args[1:], lineno)
                ctrl = attrs.pop("ctrl", "none")
                if ctrl not in CONTROL_VALUES:
                    raise LexiconError(f"ctrl must be one of {CONTROL_VALUES}, not {ctrl!r}", lineno)
                if attrs.keys() - {"sem"}:
                    raise LexiconError(f"unknown MNG attribute {sorted(attrs)[0]!r}", lineno)
                if any(m.meaning_id == args[0] for m in meanings.get((lemma, pos), ())):
                    raise LexiconError(f"duplicate meaning id {args[0]} for {lemma}", lineno)
                mng = {"id": args[0], "ctrl": ctrl, "sem": attrs.get("sem"),
                       "slots": [], "line": lineno}
            elif key == "SLOT":
                if mng is None:
                    raise LexiconError("SLOT outside an MNG block", lineno)
                mng["slots"].append(_parse_slot(line[len("SLOT"):], lineno))
            elif key == "SEMTAG":
                if mng is None or len(args) != 1:
                    raise LexiconError("SEMTAG needs one node id inside an MNG block", lineno)
                mng["sem"] = args[0]
            else:
                raise LexiconError(f"unknown directive {key!r}", lineno)
        except LexiconError as exc:
            raise LexiconError(exc.message, exc.line or lineno, path) from None
    close_meaning()

    if clitics:
        # CLITICS may come after some FORM lines; re-derive the suffix table.
        entries = [WordEntry(e.surface, e.lemma, e.pos, e.morph, e.multiword,
                             tuple(clitics) if e.pos == "V" and e.morph.get("mdv") == "inf" else (),
                             e.order)
                   for e in entries]
    return Lexicon(entries, meanings, clitics, sandhi)


def load_lexicon(path) -> Lexicon:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise LexiconError(f"cannot read lexicon: {exc.strerror or exc}", None, str(path)) from exc
    return loads_lexicon(text, str(path))
