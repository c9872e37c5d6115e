"""Language-specific grammar: categories, pattern frames and constraints.

A grammar resource is a plain UTF-8 text file.  Blank lines and ``#``
comments are ignored; everything else is one of::

    MAXCYCLES 32
    CATEGORY PP Qnt              # extra categories
    CATEGORY C_rel : C           # subtype, counts as C for valency and cat()
    TERMINAL Num                 # extra lexical (terminal) classes
    TRACE Tv                     # extra trace symbols (never lexical)
    ROOT C NP                    # categories allowed to span a sentence
    PROFILE informal { agr: soft(1.0) }
    PATTERN NP 0 { seq: Det Adj N; dep: 3 3 0; fnct: det rmod head;
                   cst: agr(num,gen) | agr(num,gen) | nil }

Constraint cells use ``,`` for AND and ``/`` for OR; an atom may carry an
explicit severity suffix, ``lex("by")@soft(0.5)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional, Union

__all__ = [
    "Atom",
    "And",
    "Or",
    "NIL",
    "Severity",
    "HARD",
    "Profile",
    "PatternFrame",
    "Grammar",
    "GrammarError",
    "ConstraintSyntaxError",
    "Diagnostic",
    "parse_constraint",
    "format_constraint",
    "evaluate",
    "load_grammar",
    "loads_grammar",
    "print_grammar",
    "validate_grammar",
]

FUNDAMENTAL = ("C", "NP", "AdjP", "AdvP")
SUBTYPES = {"C_inf": "C", "C_ger": "C", "C_part": "C", "C_pass": None,
            "Coord": None, "VP": None, "VP_pass": None}
TERMINALS = ("Det", "Adj", "N", "V", "Adv", "Prep", "Conj", "Pron",
             "PronDat", "Aux", "Punct")
TERMINAL_SUPERTYPES = {"Pron": "NP", "PronDat": "Pron"}
TRACES = ("Ts", "To", "Ti")
ROOT_SYMBOL = "S"
CONNECTIVE_CATEGORIES = frozenset({"Prep", "Conj"})
FINITE_MOODS = frozenset({"ind", "cng", "cnd", "imp"})
DEFAULT_MAX_CYCLES = 32

ATOM_KINDS = ("agr", "lex", "mdv", "tmp", "cat", "conn", "reg", "opt", "nil")
_QUOTED_KINDS = frozenset({"lex", "conn"})


class GrammarError(ValueError):
    """Raised for unreadable, malformed or inconsistent grammar resources."""

    def __init__(self, message: str, line: Optional[int] = None,
                 path: Optional[str] = None):
        self.message = message
        self.line = line
        self.path = path
        where = ""
        if path:
            where = f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}".strip() if where else message)


class ConstraintSyntaxError(GrammarError):
    def __init__(self, message: str, column: int, text: str):
        self.column = column
        self.text = text
        super().__init__(f"{message} at column {column} in {text!r}")


# ---------------------------------------------------------------------------
# Constraint expressions


@dataclass(frozen=True)
class Severity:
    soft: bool = False
    penalty: float = 0.0

    def __str__(self) -> str:
        return f"soft({_fmt_num(self.penalty)})" if self.soft else "hard"


HARD = Severity()


def _fmt_num(x: float) -> str:
    return repr(float(x))


@dataclass(frozen=True)
class Atom:
    kind: str
    args: tuple = ()
    severity: Optional[Severity] = None

    def __str__(self) -> str:
        if self.kind == "nil":
            return "nil"
        if self.kind in _QUOTED_KINDS:
            body = ",".join('"' + a.replace('"', '\\"') + '"' for a in self.args)
        else:
            body = ",".join(str(a) for a in self.args)
        text = f"{self.kind}({body})"
        if self.severity is not None and self.severity.soft:
            text += f"@{self.severity}"
        return text


NIL = Atom("nil")


@dataclass(frozen=True)
class And:
    items: tuple

    def __str__(self) -> str:
        return ",".join(f"({i})" if isinstance(i, Or) else str(i) for i in self.items)


@dataclass(frozen=True)
class Or:
    items: tuple

    def __str__(self) -> str:
        return "/".join(str(i) for i in self.items)


Expr = Union[Atom, And, Or]


def _canonical(expr: Expr) -> Expr:
    if isinstance(expr, Atom):
        return expr
    kind = type(expr)
    flat: list = []
    for item in expr.items:
        item = _canonical(item)
        if isinstance(item, kind):
            flat.extend(item.items)
        else:
            flat.append(item)
    if kind is And:
        flat = [i for i in flat if i != NIL]
        if not flat:
            return NIL
    elif any(i == NIL for i in flat):
        # nil is always satisfied, so any disjunction containing it is too
        return NIL
    if len(flat) == 1:
        return flat[0]
    return kind(tuple(flat))


_TOKEN_RE = re.compile(
    r"""\s*(?:
        (?P<str>"(?:[^"\\]|\\.)*"|'(?:[^'\\]|\\.)*')
      | (?P<num>-?\d+(?:\.\d+)?)
      | (?P<name>[A-Za-z_][\w.]*)
      | (?P<op>[(),/@])
    )""",
    re.VERBOSE,
)


class _ConstraintParser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            m = _TOKEN_RE.match(stripped, pos)
            if not m or m.end() == pos:
                col = pos + 1 + (len(stripped[pos:]) - len(stripped[pos:].lstrip()))
                raise ConstraintSyntaxError("unexpected character", col, text)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind) + 1))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def column(self) -> int:
        tok = self.peek()
        return tok[2] if tok else len(self.text.rstrip()) + 1

    def expect(self, value: str):
        tok = self.peek()
        if tok is None or tok[1] != value:
            raise ConstraintSyntaxError(f"expected {value!r}", self.column(), self.text)
        self.i += 1

    def parse(self) -> Expr:
        if not self.tokens:
            raise ConstraintSyntaxError("empty constraint", 1, self.text)
        expr = self.disjunction()
        if self.peek() is not None:
            raise ConstraintSyntaxError("trailing input", self.column(), self.text)
        return _canonical(expr)

    def disjunction(self) -> Expr:
        items = [self.conjunction()]
        while self.peek() and self.peek()[1] == "/":
            self.i += 1
            items.append(self.conjunction())
        return items[0] if len(items) == 1 else Or(tuple(items))

    def conjunction(self) -> Expr:
        items = [self.unit()]
        while self.peek() and self.peek()[1] == ",":
            self.i += 1
            items.append(self.unit())
        return items[0] if len(items) == 1 else And(tuple(items))

    def unit(self) -> Expr:
        tok = self.peek()
        if tok is None:
            raise ConstraintSyntaxError("unexpected end of constraint", self.column(), self.text)
        if tok[1] == "(":
            self.i += 1
            expr = self.disjunction()
            self.expect(")")
            return expr
        if tok[0] != "name":
            raise ConstraintSyntaxError("expected constraint atom", tok[2], self.text)
        name = tok[1]
        if name not in ATOM_KINDS:
            raise ConstraintSyntaxError(f"unknown atom {name!r}", tok[2], self.text)
        self.i += 1
        if name == "nil":
            return NIL
        args: list[str] = []
        if not (self.peek() and self.peek()[1] == "("):
            # a bare atom name ("agr") is shorthand for the empty argument list
            return Atom(name, (), self._maybe_severity())
        self.expect("(")
        while self.peek() and self.peek()[1] != ")":
            kind, value, col = self.peek()
            if kind == "str":
                value = value[1:-1].replace('\\"', '"').replace("\\'", "'")
            elif kind not in ("name", "num"):
                raise ConstraintSyntaxError("bad atom argument", col, self.text)
            args.append(value)
            self.i += 1
            if self.peek() and self.peek()[1] == ",":
                self.i += 1
                if self.peek() and self.peek()[1] == ")":
                    raise ConstraintSyntaxError("dangling comma", self.column(), self.text)
        self.expect(")")
        return Atom(name, tuple(args), self._maybe_severity())

    def _maybe_severity(self) -> Optional[Severity]:
        if self.peek() and self.peek()[1] == "@":
            self.i += 1
            return self.severity()
        return None

    def severity(self) -> Optional[Severity]:
        tok = self.peek()
        if tok is None or tok[1] not in ("hard", "soft"):
            raise ConstraintSyntaxError("expected hard or soft", self.column(), self.text)
        self.i += 1
        if tok[1] == "hard":
            return None
        self.expect("(")
        tok = self.peek()
        if tok is None or tok[0] != "num" or float(tok[1]) < 0:
            raise ConstraintSyntaxError("soft() needs a non-negative weight",
                                        self.column(), self.text)
        self.i += 1
        self.expect(")")
        return Severity(True, float(tok[1]))


def parse_constraint(text: str) -> Expr:
    """Parse one constraint cell into its canonical expression tree.

    >>> str(parse_constraint('lex("be"),tmp(perf)'))
    'lex("be"),tmp(perf)'
    """
    return _ConstraintParser(text).parse()


def format_constraint(expr: Expr) -> str:
    return str(expr)


# ---------------------------------------------------------------------------
# Profiles and evaluation


@dataclass(frozen=True)
class Profile:
    name: str
    overrides: tuple = ()  # ((atom kind, Severity), ...)
    force_hard: bool = False

    def severity(self, atom: Atom) -> Severity:
        if self.force_hard:
            return HARD
        for kind, sev in self.overrides:
            if kind == atom.kind:
                return sev
        return atom.severity or HARD

    def __str__(self) -> str:
        body = "; ".join(f"{k}: {s}" for k, s in self.overrides)
        return f"PROFILE {self.name} {{ {body} }}"


STRICT = Profile("strict", (), True)
INFORMAL = Profile("informal", (("agr", Severity(True, 1.0)),))


@dataclass(frozen=True)
class Violation:
    atom: Atom
    severity: Severity

    @property
    def hard(self) -> bool:
        return not self.severity.soft


def _agrees(a: Mapping, b: Mapping, features: Iterable[str]) -> bool:
    for f in features:
        x, y = a.get(f), b.get(f)
        if x is not None and y is not None and x != y:
            return False
    return True


def check_atom(atom: Atom, cand, anchor, siblings, grammar: "Grammar") -> bool:
    """True when ``cand`` satisfies ``atom``.

    ``anchor`` is the constituent the candidate depends on inside the frame
    (None for the head position); ``siblings`` holds every position of the
    frame, for numeric ``agr(k)`` references.
    """
    kind = atom.kind
    if kind in ("nil", "opt") or cand.is_trace:
        return True
    if kind == "agr":
        if atom.args and all(str(a).isdigit() for a in atom.args):
            others = [siblings[int(a) - 1] for a in atom.args
                      if 0 < int(a) <= len(siblings)]
            return all(_agrees(cand.features, o.features, ("pers", "num", "gen"))
                       for o in others)
        if anchor is None:
            return True
        feats = atom.args or ("pers", "num")
        return _agrees(cand.features, anchor.features, feats)
    if kind == "lex":
        return any(a in (cand.lemma, cand.surface.lower()) for a in atom.args)
    if kind == "mdv":
        if not atom.args:
            return True
        mood = cand.features.get("mdv")
        want = str(atom.args[0])
        if want == "0":
            return mood in FINITE_MOODS
        return mood == want
    if kind == "tmp":
        return cand.features.get("tmp") in atom.args
    if kind == "cat":
        return any(grammar.category_matches(cand, str(a)) for a in atom.args)
    if kind == "conn":
        return cand.conn in atom.args
    if kind == "reg":
        return cand.category in CONNECTIVE_CATEGORIES
    raise ValueError(f"unknown atom kind {kind!r}")


def evaluate(expr: Expr, cand, anchor, siblings, grammar: "Grammar",
             profile: Profile) -> list[Violation]:
    """Violations of ``expr`` for one frame position; empty means satisfied.

    A disjunction reports the violations of its least damaging branch.
    """
    if isinstance(expr, Atom):
        if check_atom(expr, cand, anchor, siblings, grammar):
            return []
        return [Violation(expr, profile.severity(expr))]
    branches = [evaluate(e, cand, anchor, siblings, grammar, profile) for e in expr.items]
    if isinstance(expr, And):
        return [v for b in branches for v in b]
    return min(branches, key=_violation_cost)


def _violation_cost(violations: list[Violation]) -> tuple:
    hard = sum(1 for v in violations if v.hard)
    return (hard, sum(v.severity.penalty for v in violations if not v.hard))


# ---------------------------------------------------------------------------
# Frames and grammar


@dataclass(frozen=True)
class PatternFrame:
    category: str
    variant: str
    seq: tuple
    dep: tuple
    fnct: tuple
    cst: tuple
    index: int = 0
    line: Optional[int] = field(default=None, compare=False)

    @property
    def id(self) -> str:
        return f"{self.category} {self.variant}"

    @property
    def head(self) -> int:
        """0-based head position."""
        return self.dep.index(0)

    def __len__(self) -> int:
        return len(self.seq)

    def to_text(self) -> str:
        cst = " | ".join(str(c) for c in self.cst)
        return (f"PATTERN {self.category} {self.variant} {{ seq: {' '.join(self.seq)}; "
                f"dep: {' '.join(map(str, self.dep))}; fnct: {' '.join(self.fnct)}; "
                f"cst: {cst} }}")


def frame_problems(frame: PatternFrame) -> list[str]:
    n = len(frame.seq)
    if n == 0:
        return ["empty sequence"]
    if not (len(frame.dep) == len(frame.fnct) == len(frame.cst) == n):
        return [f"set lengths differ (seq {n}, dep {len(frame.dep)}, "
                f"fnct {len(frame.fnct)}, cst {len(frame.cst)})"]
    heads = [i for i, d in enumerate(frame.dep) if d == 0]
    if len(heads) > 1:
        return ["multiple head positions"]
    if not heads:
        return ["no head position"]
    problems = []
    for i, d in enumerate(frame.dep):
        if d == 0:
            continue
        if not 1 <= d <= n:
            problems.append(f"dep {d} at position {i + 1} out of range")
        elif d == i + 1:
            problems.append(f"position {i + 1} depends on itself")
    if problems:
        return problems
    for start in range(n):
        seen = set()
        pos = start
        while frame.dep[pos] != 0:
            if pos in seen:
                return [f"dependency cycle through position {start + 1}"]
            seen.add(pos)
            pos = frame.dep[pos] - 1
    return []


@dataclass(frozen=True)
class Grammar:
    categories: frozenset
    supertypes: tuple          # ((category, parent), ...)
    terminals: frozenset
    traces: frozenset
    roots: tuple
    frames: tuple
    max_cycles: int = DEFAULT_MAX_CYCLES
    profiles: tuple = (STRICT, INFORMAL)
    extra: tuple = field(default=(), compare=False)   # declarations, for printing

    def profile(self, name: str) -> Profile:
        for p in self.profiles:
            if p.name == name:
                return p
        raise KeyError(f"unknown relaxation profile {name!r}")

    @property
    def profile_names(self) -> list[str]:
        return [p.name for p in self.profiles]

    def parent(self, category: str) -> Optional[str]:
        for c, p in self.supertypes:
            if c == category:
                return p
        return None

    def counts_as(self, category: str, wanted: str) -> bool:
        seen = set()
        while category is not None and category not in seen:
            if category == wanted:
                return True
            seen.add(category)
            category = self.parent(category)
        return False

    def category_matches(self, cand, wanted: str) -> bool:
        """Category test used by ``cat()`` atoms and the valency filter.

        A constituent introduced by a connective (a prepositional group, a
        clause with a complementizer) is looked through to its head.
        """
        if cand.is_trace or self.counts_as(cand.category, wanted):
            return True
        if cand.conn_child is not None and cand.head_child is not None:
            return self.category_matches(cand.head_child, wanted)
        return False

    def frames_for(self, category: str) -> list[PatternFrame]:
        return [f for f in self.frames if f.category == category]

    def is_trace(self, category: str) -> bool:
        return category in self.traces


def _split_outside(text: str, sep: str) -> list[str]:
    """Split on ``sep`` outside quotes and parentheses."""
    parts, depth, quote, buf = [], 0, None, []
    for ch in text:
        if quote:
            buf.append(ch)
            if ch == quote:
                quote = None
            continue
        if ch in "\"'":
            quote = ch
        elif ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append("".join(buf))
            buf = []
            continue
        buf.append(ch)
    parts.append("".join(buf))
    return parts


def _strip_comment(line: str) -> str:
    quote = None
    for i, ch in enumerate(line):
        if quote:
            if ch == quote:
                quote = None
        elif ch in "\"'" and (i == 0 or not line[i - 1].isalnum()):
            quote = ch
        elif ch == "#":
            return line[:i]
    return line


def _parse_severity(text: str, line: int) -> Severity:
    text = text.strip()
    if text == "hard":
        return HARD
    m = re.fullmatch(r"soft\(\s*(\d+(?:\.\d+)?)\s*\)", text)
    if not m:
        raise GrammarError(f"bad severity {text!r}", line)
    return Severity(True, float(m.group(1)))


def _parse_frame(header: list[str], body: str, line: int, index: int) -> PatternFrame:
    if len(header) != 2:
        raise GrammarError("PATTERN needs a category and a variant", line)
    category, variant = header
    fields: dict[str, str] = {}
    for part in _split_outside(body, ";"):
        if not part.strip():
            continue
        if ":" not in part:
            raise GrammarError(f"bad frame field {part.strip()!r}", line)
        key, value = part.split(":", 1)
        key = key.strip()
        if key not in ("seq", "dep", "fnct", "cst"):
            raise GrammarError(f"unknown frame field {key!r}", line)
        if key in fields:
            raise GrammarError(f"duplicate frame field {key!r}", line)
        fields[key] = value.strip()
    for key in ("seq", "dep", "fnct"):
        if key not in fields:
            raise GrammarError(f"frame {category} {variant} lacks {key}", line)
    seq = tuple(fields["seq"].split())
    try:
        dep = tuple(int(x) for x in fields["dep"].split())
    except ValueError:
        raise GrammarError(f"frame {category} {variant}: dep must be integers", line) from None
    fnct = tuple(fields["fnct"].split())
    if "cst" in fields:
        cells = [c.strip() for c in _split_outside(fields["cst"], "|")]
        try:
            cst = tuple(parse_constraint(c) for c in cells)
        except ConstraintSyntaxError as exc:
            raise GrammarError(f"frame {category} {variant}: {exc}", line) from None
    else:
        cst = tuple(NIL for _ in seq)
    frame = PatternFrame(category, variant, seq, dep, fnct, cst, index, line)
    problems = frame_problems(frame)
    if problems:
        raise GrammarError(f"frame {frame.id}: {problems[0]}", line)
    return frame


def loads_grammar(text: str, path: Optional[str] = None) -> Grammar:
    categories = set(FUNDAMENTAL) | set(SUBTYPES) | set(TERMINALS) | set(TRACES) | {ROOT_SYMBOL}
    supertypes = {c: p for c, p in SUBTYPES.items() if p}
    supertypes.update(TERMINAL_SUPERTYPES)
    terminals = set(TERMINALS)
    traces = set(TRACES)
    roots: Optional[tuple] = None
    max_cycles = DEFAULT_MAX_CYCLES
    profiles = {"strict": STRICT, "informal": INFORMAL}
    frames: list[PatternFrame] = []
    extra: list[str] = []
    seen_ids: set[str] = set()

    lines = text.splitlines()
    i = 0
    try:
        while i < len(lines):
            lineno = i + 1
            line = _strip_comment(lines[i]).strip()
            i += 1
            if not line:
                continue
            if "{" in line:
                block = line
                while "}" not in _strip_quoted(block):
                    if i >= len(lines):
                        raise GrammarError("unterminated block", lineno)
                    block += " " + _strip_comment(lines[i]).strip()
                    i += 1
                head, rest = block.split("{", 1)
                body, tail = rest.rsplit("}", 1)
                if tail.strip():
                    raise GrammarError("text after closing brace", lineno)
                words = head.split()
                keyword = words[0] if words else ""
                if keyword == "PATTERN":
                    frame = _parse_frame(words[1:], body, lineno, len(frames))
                    if frame.id in seen_ids:
                        raise GrammarError(f"duplicate frame {frame.id}", lineno)
                    seen_ids.add(frame.id)
                    frames.append(frame)
                elif keyword == "PROFILE":
                    if len(words) != 2:
                        raise GrammarError("PROFILE needs a name", lineno)
                    if words[1] == "strict":
                        raise GrammarError("the strict profile cannot be redefined", lineno)
                    overrides = []
                    for part in _split_outside(body, ";"):
                        if not part.strip():
                            continue
                        kind, _, sev = part.partition(":")
                        kind = kind.strip()
                        if kind not in ATOM_KINDS:
                            raise GrammarError(f"unknown atom kind {kind!r}", lineno)
                        overrides.append((kind, _parse_severity(sev, lineno)))
                    profiles[words[1]] = Profile(words[1], tuple(overrides))
                else:
                    raise GrammarError(f"unknown block {keyword!r}", lineno)
                continue
            words = line.split()
            keyword, args = words[0], words[1:]
            if keyword == "MAXCYCLES":
                if len(args) != 1 or not args[0].isdigit() or int(args[0]) < 1:
                    raise GrammarError("MAXCYCLES needs a positive integer", lineno)
                max_cycles = int(args[0])
            elif keyword == "CATEGORY":
                names, parent = args, None
                if ":" in args:
                    k = args.index(":")
                    names, rest = args[:k], args[k + 1:]
                    if len(rest) != 1:
                        raise GrammarError("CATEGORY subtype needs one parent", lineno)
                    parent = rest[0]
                if not names:
                    raise GrammarError("CATEGORY needs at least one name", lineno)
                for n in names:
                    categories.add(n)
                    if parent:
                        supertypes[n] = parent
                extra.append(line)
            elif keyword == "TERMINAL":
                categories.update(args)
                terminals.update(args)
                extra.append(line)
            elif keyword == "TRACE":
                categories.update(args)
                traces.update(args)
                extra.append(line)
            elif keyword == "ROOT":
                if not args:
                    raise GrammarError("ROOT needs at least one category", lineno)
                roots = tuple(args)
            else:
                raise GrammarError(f"unknown directive {keyword!r}", lineno)
    except GrammarError as exc:
        if path and not exc.path:
            raise GrammarError(exc.message, exc.line, path) from None
        raise

    return Grammar(
        categories=frozenset(categories),
        supertypes=tuple(sorted(supertypes.items())),
        terminals=frozenset(terminals),
        traces=frozenset(traces),
        roots=roots if roots is not None else FUNDAMENTAL,
        frames=tuple(frames),
        max_cycles=max_cycles,
        profiles=tuple(profiles[k] for k in sorted(profiles)),
        extra=tuple(extra),
    )


def _strip_quoted(text: str) -> str:
    return re.sub(r'"(?:[^"\\]|\\.)*"|\'(?:[^\'\\]|\\.)*\'', "", text)


def load_grammar(path) -> Grammar:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise GrammarError(f"cannot read grammar: {exc.strerror or exc}", None, str(path)) from exc
    return loads_grammar(text, str(path))


def print_grammar(g: Grammar) -> str:
    """Canonical, byte-stable text form of ``g``."""
    out = [f"MAXCYCLES {g.max_cycles}", "ROOT " + " ".join(g.roots)]
    out.extend(g.extra)
    for p in g.profiles:
        if p.name != "strict":
            out.append(str(p))
    out.extend(f.to_text() for f in g.frames)
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


def _atoms(expr: Expr):
    if isinstance(expr, Atom):
        yield expr
    else:
        for e in expr.items:
            yield from _atoms(e)


class _Probe:
    """Stand-in constituent built from a lexicon entry, for derivability."""

    is_trace = False
    conn = None
    conn_child = None
    head_child = None

    def __init__(self, entry):
        self.category = entry.pos
        self.lemma = entry.lemma
        self.surface = entry.surface
        self.features = entry.morph


def _entry_fits(entry, expr: Expr, g: Grammar) -> bool:
    # only lexical atoms can be checked before any structure exists
    probe = _Probe(entry)
    relevant = [a for a in _atoms(expr) if a.kind in ("lex", "mdv", "tmp")]
    return all(check_atom(a, probe, None, [probe], g) for a in relevant)


def validate_grammar(g: Grammar, lex) -> list[Diagnostic]:
    """Every problem found in the grammar and lexicon pair; [] means clean."""
    from .lexicon import ARGUMENT_FUNCTIONS, slot_accepts_function

    diags: list[Diagnostic] = []
    declared = g.categories

    for c, p in g.supertypes:
        if p not in declared:
            diags.append(Diagnostic("undeclared-category",
                                    f"supertype {p} of {c} is not declared"))
    for r in g.roots:
        if r not in declared:
            diags.append(Diagnostic("undeclared-category", f"root category {r} is not declared"))
    for f in g.frames:
        for cat in (f.category, *f.seq):
            if cat not in declared:
                diags.append(Diagnostic("undeclared-category",
                                        f"frame {f.id} references undeclared category {cat}"))
        if f.category in g.traces:
            diags.append(Diagnostic("trace-produced", f"frame {f.id} produces trace {f.category}"))
        if all(c in g.traces for c in f.seq):
            diags.append(Diagnostic("trace-only", f"frame {f.id} has no overt position"))
        for cell in f.cst:
            for a in _atoms(cell):
                if a.kind == "cat":
                    for c in a.args:
                        if c not in declared:
                            diags.append(Diagnostic(
                                "undeclared-category",
                                f"frame {f.id} constraint cat({c}) names undeclared category"))
        problems = frame_problems(f)
        for pr in problems:
            diags.append(Diagnostic("frame-invariant", f"frame {f.id}: {pr}"))

    entries = list(lex.entries())
    for e in entries:
        if e.pos not in declared:
            diags.append(Diagnostic("undeclared-category",
                                    f"lexicon entry {e.lemma!r} has undeclared category {e.pos}"))
        elif e.pos in g.traces:
            diags.append(Diagnostic("lexical-trace",
                                    f"lexicon entry {e.lemma!r} uses trace symbol {e.pos}"))
    for (lemma, pos), meanings in lex.meaning_table():
        for m in meanings:
            for s in m.slots:
                if s.cat and s.cat not in declared:
                    diags.append(Diagnostic(
                        "undeclared-category",
                        f"meaning {lemma} {m.meaning_id} slot {s.function} needs undeclared {s.cat}"))

    # Head entries each category can be built over, to a fixpoint.
    heads: dict[str, list] = {}
    for e in entries:
        heads.setdefault(e.pos, []).append(e)
    heads.setdefault("Punct", [])
    derivable = set(heads) | set(g.traces)
    presents = _presentations(g)
    realizable_frames: set[str] = set()
    realized_meanings: set = set()
    changed = True
    while changed:
        changed = False
        for f in g.frames:
            if not all(c in derivable for c in f.seq):
                continue
            if any(c not in g.traces and c != "Punct" and not _position_possible(g, heads, c, cell)
                   for c, cell in zip(f.seq, f.cst)):
                continue
            head_cat = f.seq[f.head]
            candidates = [e for e in heads.get(head_cat, []) if _entry_fits(e, f.cst[f.head], g)]
            if head_cat in g.traces:
                candidates = []
            ok, realized = _frame_valency_possible(g, lex, f, candidates, ARGUMENT_FUNCTIONS,
                                                   slot_accepts_function, presents)
            if not ok:
                continue
            realized_meanings |= realized
            if f.id not in realizable_frames:
                realizable_frames.add(f.id)
                changed = True
            known = heads.setdefault(f.category, [])
            for e in candidates:
                if e not in known:
                    known.append(e)
                    changed = True
            if f.category not in derivable:
                derivable.add(f.category)
                changed = True
    for f in g.frames:
        if f.id not in realizable_frames:
            diags.append(Diagnostic("unreachable-frame", f"frame {f.category} unreachable ({f.id})"))
    for (lemma, pos), meanings in lex.meaning_table():
        for m in meanings:
            if (lemma, pos, m.meaning_id) not in realized_meanings and any(
                    not s.opt for s in m.slots):
                diags.append(Diagnostic(
                    "unrealizable-meaning",
                    f"no frame can realize meaning {lemma} {m.meaning_id}"))
    return diags


def _position_possible(g, heads, cat, cell) -> bool:
    if cat not in g.terminals or cat in heads and not heads[cat]:
        return True
    return any(_entry_fits(e, cell, g) for e in heads.get(cat, []))


def _presentations(g: Grammar) -> dict[str, set]:
    """Categories each category can present to a valency slot."""
    presents: dict[str, set] = {}
    for c in g.categories:
        seen, cur = set(), c
        while cur is not None and cur not in seen:
            seen.add(cur)
            cur = g.parent(cur)
        presents[c] = seen
    changed = True
    while changed:
        changed = False
        for f in g.frames:
            if "conn" in f.fnct:
                extra = presents.get(f.seq[f.head], set()) - presents.setdefault(f.category, {f.category})
                if extra:
                    presents[f.category] |= extra
                    changed = True
    return presents


def _frame_valency_possible(g, lex, f, candidates, arg_functions, accepts, presents):
    args = [(f.fnct[i], f.seq[i]) for i in range(len(f.seq))
            if f.dep[i] - 1 == f.head and f.fnct[i] in arg_functions]
    realized = set()
    if not args:
        return True, realized
    if f.seq[f.head] in g.traces:
        return True, realized
    valency_bearing = False
    for e in candidates:
        for m in lex.meanings_of(e.lemma, e.pos):
            valency_bearing = True
            if _abstract_match(g, m, args, accepts, presents):
                realized.add((e.lemma, e.pos, m.meaning_id))
    if not valency_bearing:
        return bool(candidates) or f.seq[f.head] not in g.terminals, realized
    return bool(realized), realized


def _abstract_match(g, meaning, args, accepts, presents) -> bool:
    slots = list(meaning.slots)

    def fits(slot, fn, cat):
        if not accepts(slot.function, fn):
            return False
        if slot.cat is None or cat in g.traces:
            return True
        return slot.cat in presents.get(cat, {cat})

    def assign(k, used):
        if k == len(args):
            return all(s.opt or i in used for i, s in enumerate(slots))
        fn, cat = args[k]
        for i, s in enumerate(slots):
            if i not in used and fits(s, fn, cat):
                if assign(k + 1, used | {i}):
                    return True
        return False

    return assign(0, frozenset())
