"""The general grammar: a bottom-up, cycle-wise chart parser.

Every cycle combines the constituents built in earlier cycles according to
the pattern frames, filters them through the constraint evaluator and the
valency filter, and stops when a cycle adds nothing.  Complete analyses are
flattened into indexed word lists, handed to the binder and ranked.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Optional

from .grammar import FINITE_MOODS, TRACES, Grammar, PatternFrame, Profile, evaluate
from .lexicon import ARGUMENT_FUNCTIONS, Lexicon, MeaningFrame, slot_accepts_function
from .semnet import SemNet
from .tagger import TerminalNode, build_lattice, tokenize

HEAD_FUNCTIONS = frozenset({"head", "v", "v_pass"})
DISCOURSE = "*"
_SENTENCE_TYPES = {".": "assertive", "?": "interrogative", "!": "exclamative"}


# ---------------------------------------------------------------------------
# Constituents


@dataclass(eq=False)
class Constituent:
    category: str
    start: tuple
    end: tuple
    children: tuple = ()
    frame: Optional[PatternFrame] = None
    terminal: Optional[TerminalNode] = None
    is_trace: bool = False
    penalty: float = 0.0
    selections: dict = field(default_factory=dict)   # lexical head -> surviving meanings
    filter_log: tuple = ()
    id: int = -1
    cycle: int = 0
    features: dict = field(default_factory=dict)
    samespan: frozenset = frozenset()

    def __repr__(self) -> str:
        return f"<{self.category}#{self.id} {self.start}-{self.end} {self.lemma!r}>"

    @property
    def span(self) -> tuple:
        return (self.start, self.end)

    @property
    def is_terminal(self) -> bool:
        return self.terminal is not None

    @property
    def functions(self) -> tuple:
        return self.frame.fnct if self.frame else ()

    @property
    def head_child(self) -> Optional["Constituent"]:
        return self.children[self.frame.head] if self.frame else None

    @property
    def lexical_head(self) -> "Constituent":
        c = self
        while c.frame is not None:
            c = c.head_child
        return c

    @property
    def lemma(self) -> str:
        h = self.lexical_head
        return h.terminal.entry.lemma if h.terminal else "-"

    @property
    def surface(self) -> str:
        h = self.lexical_head
        return h.terminal.surface if h.terminal else "-"

    @property
    def conn_child(self) -> Optional["Constituent"]:
        for child, fn in zip(self.children, self.functions):
            if fn == "conn":
                return child
        return None

    @property
    def conn(self) -> Optional[str]:
        c = self
        while c.frame is not None:
            cc = c.conn_child
            if cc is not None:
                return cc.lemma
            c = c.head_child
        return None

    @property
    def meanings(self) -> tuple:
        return self.selections.get(self.lexical_head, ())

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()

    def signature(self) -> str:
        """Structural identity, independent of chart ids."""
        if self.is_trace:
            return f"{self.category}@{_vtx(self.start)}"
        if self.terminal is not None:
            return f"{self.category}:{self.terminal.entry.lemma}@{_vtx(self.start)}"
        inner = " ".join(f"{c.signature()}:{fn}>{d}"
                         for c, fn, d in zip(self.children, self.functions, self.frame.dep))
        return f"{self.category}[{inner}]"


def _vtx(v: tuple) -> str:
    return f"{v[0]}" if v[1] == 0 else f"{v[0]}.{v[1]}"


def terminal_constituent(node: TerminalNode) -> Constituent:
    return Constituent(node.entry.pos, node.start, node.end, terminal=node,
                       penalty=node.penalty, features=dict(node.entry.morph),
                       samespan=frozenset({node.entry.pos}))


def trace_constituent(category: str, vertex: tuple) -> Constituent:
    return Constituent(category, vertex, vertex, is_trace=True, cycle=-1,
                       samespan=frozenset({category}))


@dataclass(frozen=True)
class Rejection:
    frame: PatternFrame
    position: Optional[int]     # 1-based; None for whole-constituent reasons
    reason: str
    atom: Optional[str] = None
    filter_log: tuple = ()

    def __str__(self) -> str:
        where = f" at position {self.position}" if self.position else ""
        return f"reject {self.frame.id}{where}: {self.reason}"


# ---------------------------------------------------------------------------
# Pattern application and the valency filter


def apply_pattern(f: PatternFrame, seq, profile: Profile, grammar: Grammar,
                  lex: Lexicon):
    """Build the constituent ``f`` describes over ``seq``, or explain why not."""
    seq = tuple(seq)
    if len(seq) != len(f.seq):
        return Rejection(f, None, "sequence length differs from frame")
    for i, (cand, want) in enumerate(zip(seq, f.seq)):
        if cand.category != want:
            return Rejection(f, i + 1, f"category {cand.category} is not {want}")
    penalty = sum(c.penalty for c in seq)
    for i, cand in enumerate(seq):
        anchor = seq[f.dep[i] - 1] if f.dep[i] else None
        for v in evaluate(f.cst[i], cand, anchor, seq, grammar, profile):
            if v.hard:
                return Rejection(f, i + 1, "constraint violated", str(v.atom))
            penalty += v.severity.penalty

    overt = [c for c in seq if not c.is_trace]
    start, end = overt[0].start, overt[-1].end
    below = frozenset().union(*(c.samespan for c in overt
                                if c.start == start and c.end == end))
    if f.category in below:
        return Rejection(f, None, f"{f.category} already spans {_vtx(start)}-{_vtx(end)}")

    head = seq[f.head]
    features = dict(head.features)
    for c, fn in zip(seq, f.fnct):
        if fn == "aux":
            for k, v in c.features.items():
                features.setdefault(k, v)
    node = Constituent(f.category, start, end, children=seq, frame=f, penalty=penalty,
                       features=features, samespan=below | {f.category})
    selections: dict = {}
    for c in seq:
        selections.update(c.selections)
    node.selections = selections

    deps = argument_dependents(node, top_only=True)
    log = []
    for lexhead, args in deps.items():
        meanings = lex.meanings_of(lexhead.terminal.entry.lemma, lexhead.category)
        if not meanings:
            continue
        all_args = argument_dependents(node).get(lexhead, args)
        kept = tuple(m for m in meanings if meaning_fits(m, all_args, grammar))
        log.append((lexhead.terminal.entry.lemma,
                    tuple(m.meaning_id for m in kept),
                    tuple(m.meaning_id for m in meanings if m not in kept)))
        if not kept:
            return Rejection(f, None, f"no meaning of {lexhead.terminal.entry.lemma!r} "
                             f"fits the realized arguments", filter_log=tuple(log))
        selections[lexhead] = kept
    node.filter_log = tuple(log)
    return node


def _links(c: Constituent, out: list) -> None:
    if c.frame is None:
        return
    for i, child in enumerate(c.children):
        if i != c.frame.head:
            out.append((c.children[c.frame.dep[i] - 1], child, c.frame.fnct[i]))


def _valency_heads(target: Constituent) -> list:
    """Lexical heads that receive an argument attached to ``target``.

    A head coordination (``V Conj V``) passes its arguments to every conjunct.
    """
    heads = [target.lexical_head]
    c = target
    while c.frame is not None:
        for child, fn in zip(c.children, c.frame.fnct):
            if fn == "coord" and child.category == c.category:
                for h in _valency_heads(child):
                    if h not in heads:
                        heads.append(h)
        c = c.head_child
    return heads


def argument_dependents(node: Constituent, top_only: bool = False) -> dict:
    """Map lexical head -> [(argument constituent, function), ...]."""
    links: list = []
    if top_only:
        _links(node, links)
    else:
        for c in node.walk():
            _links(c, links)
    out: dict = defaultdict(list)
    for target, child, fn in links:
        if fn not in ARGUMENT_FUNCTIONS:
            continue
        for h in _valency_heads(target):
            if h.terminal is not None:
                out[h].append((child, fn))
    return dict(out)


def slot_fits(slot, child: Constituent, fn: str, grammar: Grammar) -> bool:
    if not slot_accepts_function(slot.function, fn):
        return False
    if child.is_trace:
        return True
    if slot.cat is not None and not grammar.category_matches(child, slot.cat):
        return False
    if slot.conn != child.conn:
        return False
    if slot.mdv:
        mood = child.features.get("mdv")
        if slot.mdv == "0":
            return mood in FINITE_MOODS
        return mood == slot.mdv
    return True


def meaning_fits(m: MeaningFrame, args, grammar: Grammar) -> bool:
    """Injective assignment of every argument to a slot, all required slots filled."""
    slots = list(m.slots)
    if len(args) > len(slots):
        return False

    def assign(k: int, used: frozenset) -> bool:
        if k == len(args):
            return all(s.opt or j in used for j, s in enumerate(slots))
        child, fn = args[k]
        return any(j not in used and slot_fits(s, child, fn, grammar)
                   and assign(k + 1, used | {j}) for j, s in enumerate(slots))

    return assign(0, frozenset())


def valency_filter(c: Constituent, lex: Lexicon, grammar: Grammar):
    """Re-run meaning selection for the head of ``c``; the constituent or a rejection."""
    head = c.lexical_head
    if head.terminal is None:
        return c
    meanings = lex.meanings_of(head.terminal.entry.lemma, head.category)
    if not meanings:
        return c
    args = argument_dependents(c).get(head, [])
    kept = tuple(m for m in meanings if meaning_fits(m, args, grammar))
    if not kept:
        return Rejection(c.frame, None, f"no meaning of {head.terminal.entry.lemma!r} fits")
    c.selections = {**c.selections, head: kept}
    return c


# ---------------------------------------------------------------------------
# Chart


class Chart:
    def __init__(self, nodes, grammar: Grammar, lex: Lexicon, profile: Profile,
                 observer: Optional[Callable] = None):
        self.grammar, self.lex, self.profile = grammar, lex, profile
        self.observer = observer
        self.by_start: dict[tuple, list] = defaultdict(list)
        self.items: list[Constituent] = []
        self.seen: set = set()
        self.cycle = 0
        self._traces: dict = {}
        for node in nodes:
            self._add(terminal_constituent(node))

    def _add(self, c: Constituent) -> None:
        c.id = len(self.items)
        c.cycle = self.cycle
        self.items.append(c)
        self.by_start[c.start].append(c)

    @staticmethod
    def key(c: Constituent) -> tuple:
        deps = c.frame.dep if c.frame else ()
        return (c.category, c.start, c.end, c.lemma,
                tuple(zip((ch.id for ch in c.children), c.functions, deps)))

    def trace(self, category: str, vertex: tuple) -> Constituent:
        t = self._traces.get((category, vertex))
        if t is None:
            t = self._traces[(category, vertex)] = trace_constituent(category, vertex)
            t.id = -1 - len(self._traces)
        return t

    @property
    def vertices(self) -> list:
        return sorted(self.by_start)

    def matches(self, f: PatternFrame, snapshot: dict, fresh: int):
        """Contiguous child sequences for ``f`` using at least one constituent of cycle ``fresh``."""
        def extend(i, vertex, acc, has_new):
            if i == len(f.seq):
                if has_new:
                    yield tuple(acc)
                return
            cat = f.seq[i]
            if self.grammar.is_trace(cat):
                yield from extend(i + 1, vertex, acc + [self.trace(cat, vertex)], has_new)
                return
            for c in snapshot.get(vertex, ()):
                if c.category == cat:
                    yield from extend(i + 1, c.end, acc + [c], has_new or c.cycle == fresh)

        if all(self.grammar.is_trace(s) for s in f.seq):
            return
        for v in sorted(snapshot):
            yield from extend(0, v, [], False)


def run_cycle(chart: Chart, g: Optional[Grammar] = None) -> int:
    g = g or chart.grammar
    snapshot = {v: list(cs) for v, cs in chart.by_start.items()}
    fresh = chart.cycle
    chart.cycle += 1
    added = 0
    for f in g.frames:
        for seq in chart.matches(f, snapshot, fresh):
            result = apply_pattern(f, seq, chart.profile, g, chart.lex)
            if isinstance(result, Rejection):
                if chart.observer:
                    chart.observer(f, seq, result)
                continue
            k = chart.key(result)
            if k in chart.seen:
                continue
            chart.seen.add(k)
            chart._add(result)
            added += 1
            if chart.observer:
                chart.observer(f, seq, result)
    return added


# ---------------------------------------------------------------------------
# Analyses


@dataclass
class Row:
    id: str
    form: str
    lemma: str
    cat: str
    feats: dict
    dep: str
    fnct: str
    coref: tuple = ()
    secondary: tuple = ()          # ((head id, function), ...)
    meanings: tuple = ()           # surviving meaning ids
    coord_scope: Optional[str] = None

    @property
    def is_trace(self) -> bool:
        return self.cat in TRACES


@dataclass
class Analysis:
    rows: list
    text: str = ""
    sentence_type: str = "assertive"
    profile: str = "strict"
    score: tuple = (0, 0.0, 0.0, ())
    diagnostics: list = field(default_factory=list)
    gapfills: list = field(default_factory=list)
    resolved: frozenset = frozenset()      # coordination rows already wired by the binder
    root: Optional[Constituent] = field(default=None, compare=False, repr=False)

    def row(self, rid: str) -> Optional[Row]:
        for r in self.rows:
            if r.id == rid:
                return r
        return None

    def rows_by_lemma(self, lemma: str) -> list:
        return [r for r in self.rows if r.lemma == lemma]

    @property
    def penalty(self) -> float:
        return self.score[1]

    def triples(self) -> set:
        """(dependent lemma, function, head lemma) for primary overt links."""
        out = set()
        for r in self.rows:
            head = self.row(r.dep)
            if head is not None and not r.is_trace:
                out.add((r.lemma, r.fnct, head.lemma))
        return out

    def key(self) -> tuple:
        return tuple((r.id, r.form, r.lemma, r.cat, tuple(sorted(r.feats.items())), r.dep,
                      r.fnct, r.coref, r.secondary, r.meanings) for r in self.rows)


@dataclass(frozen=True)
class ParseConfig:
    profile: str = "strict"
    max_cycles: Optional[int] = None
    beam: Optional[int] = None
    pairs: dict = field(default_factory=dict, hash=False, compare=False)


class ParseResult(list):
    """Ranked analyses plus what went wrong on the way."""

    def __init__(self, analyses=(), diagnostics=(), chart=None, tokens=(), lattice=()):
        super().__init__(analyses)
        self.diagnostics = list(diagnostics)
        self.chart = chart
        self.tokens = list(tokens)
        self.lattice = list(lattice)


def flatten(root: Constituent, grammar: Grammar, text: str = "",
            sentence_type: str = "assertive", profile: str = "strict") -> Analysis:
    """Indexed word list for one complete constituent (before binding)."""
    units = []
    for c in root.walk():
        if c.is_trace or c.terminal is not None:
            units.append(c)
    # Traces sit before the overt word starting at their vertex; keep tree order otherwise.
    seq = {id(c): n for n, c in enumerate(units)}
    units = sorted(dict.fromkeys(units), key=lambda c: (c.start, 0 if c.is_trace else 1, seq[id(c)]))
    ids: dict = {}
    last, sub = 0, 0
    for c in units:
        if c.is_trace:
            sub += 1
            ids[c] = f"{last}.{sub}"
        else:
            last, sub = last + 1, 0
            ids[c] = str(last)

    link: dict = {}
    scope: dict = {}

    def visit(c: Constituent, as_head: bool):
        if c.frame is None:
            return
        f = c.frame
        for i, child in enumerate(c.children):
            if i != f.head:
                target = c.children[f.dep[i] - 1]
                link[child.lexical_head] = (target.lexical_head, f.fnct[i])
                if f.fnct[i] == "coord":
                    if as_head:
                        scope[child.lexical_head] = "head"
                    elif grammar.counts_as(c.category, "C"):
                        scope[child.lexical_head] = "clause"
                    else:
                        scope[child.lexical_head] = "dep"
            visit(child, as_head=(i == f.head))

    visit(root, as_head=False)

    root_fn = "head"
    c = root
    while c.frame is not None:
        fn = c.frame.fnct[c.frame.head]
        if fn != "head":
            root_fn = fn
            break
        c = c.head_child

    rows = []
    for c in units:
        if c.is_trace:
            form = lemma = "-"
            feats = {}
        else:
            form, lemma = c.terminal.surface, c.terminal.entry.lemma
            feats = dict(c.terminal.entry.morph)
        if c is root.lexical_head:
            dep, fn = "0", root_fn
        else:
            target, fn = link[c]
            dep = ids[target]
        meanings = tuple(m.meaning_id for m in root.selections.get(c, ()))
        rows.append(Row(ids[c], form, lemma, c.category, feats, dep, fn,
                        meanings=meanings, coord_scope=scope.get(c)))
    return Analysis(rows, text=text, sentence_type=sentence_type, profile=profile, root=root)


def _frame_order(c: Constituent) -> tuple:
    return tuple(n.frame.index for n in c.walk() if n.frame is not None)


def sem_id(row: Row, lex: Optional[Lexicon] = None) -> str:
    if lex is not None and row.meanings:
        m = lex.meaning(row.lemma, row.cat, row.meanings[0])
        if m is not None and m.sem_ref:
            return m.sem_ref
    return row.lemma


def relation_weight(a: Analysis, row: Row, sn: Optional[SemNet], pairs: dict,
                    lex: Optional[Lexicon] = None) -> Optional[float]:
    """Semantic weight of ``row``'s primary attachment: semnet, then pair list."""
    head = a.row(row.dep)
    if head is None or head.is_trace or row.is_trace:
        return None
    conn = next((r.lemma for r in a.rows if r.dep == row.id and r.fnct == "conn"), None)
    label = conn or row.fnct
    if sn is not None:
        w = sn.compatible(sem_id(head, lex), label, sem_id(row, lex))
        if w is not None:
            return w
    return pairs.get((head.lemma, conn, row.lemma))


def semantic_score(a: Analysis, sn: Optional[SemNet], pairs: dict,
                   lex: Optional[Lexicon] = None) -> float:
    from .binder import coordination_congruence
    total = 0.0
    for r in a.rows:
        w = relation_weight(a, r, sn, pairs, lex)
        if w is not None:
            total += w
        if r.coord_scope is not None:
            first = a.row(r.dep) if r.fnct == "coord" else None
            for head_id, rel in r.secondary:
                if rel == "coord":
                    first = a.row(head_id)
            if first is not None:
                total += coordination_congruence(first, r, sn)
    return round(total, 9)


def unfilled_arguments(root: Constituent, lex: Lexicon) -> int:
    count = 0
    for c in root.walk():
        if c.terminal is None or c in root.selections:
            continue
        meanings = lex.meanings_of(c.terminal.entry.lemma, c.category)
        if meanings:
            count += min(sum(1 for s in m.slots if not s.opt) for m in meanings)
    return count


def score(a: Analysis, sn: Optional[SemNet], lex: Optional[Lexicon] = None,
          pairs: Optional[dict] = None) -> tuple:
    """(unfilled required arguments, penalty, semantic score, frame order).

    Lower is better for every component except the semantic score, which is
    compared descending; use :func:`rank_key` for sorting.
    """
    root = a.root
    unfilled = unfilled_arguments(root, lex) if (root is not None and lex is not None) else 0
    penalty = round(root.penalty, 9) if root is not None else 0.0
    order = _frame_order(root) if root is not None else ()
    return (unfilled, penalty, semantic_score(a, sn, pairs or {}, lex), order)


def rank_key(s: tuple) -> tuple:
    return (s[0], s[1], -s[2], s[3])


def _sentence(text: str):
    tokens = tokenize(text)
    stype = "assertive"
    while tokens and tokens[-1].surface in _SENTENCE_TYPES:
        stype = _SENTENCE_TYPES[tokens[-1].surface]
        tokens = tokens[:-1]
    return tokens, stype


def build_chart(text: str, g: Grammar, lex: Lexicon, cfg: ParseConfig = ParseConfig(),
                observer: Optional[Callable] = None):
    profile = g.profile(cfg.profile)
    tokens, stype = _sentence(text)
    lattice = build_lattice(tokens, lex)
    chart = Chart(lattice, g, lex, profile, observer)
    limit = cfg.max_cycles or g.max_cycles
    diagnostics = []
    for _ in range(limit):
        if run_cycle(chart, g) == 0:
            break
    else:
        diagnostics.append(f"cycle budget of {limit} exhausted before fixpoint; "
                           f"results may be partial")
    return chart, tokens, stype, lattice, diagnostics


def roots(chart: Chart, tokens, g: Grammar) -> list:
    if not tokens:
        return []
    first, last = (tokens[0].index, 0), (tokens[-1].index + 1, 0)
    return [c for c in chart.items
            if c.start == first and c.end == last and c.category in g.roots]


def parse(text: str, g: Grammar, lex: Lexicon, sn: Optional[SemNet] = None,
          cfg: ParseConfig = ParseConfig()) -> ParseResult:
    """All complete analyses of one sentence, best first."""
    from . import binder
    chart, tokens, stype, lattice, diagnostics = build_chart(text, g, lex, cfg)
    analyses = []
    seen = set()
    for root in roots(chart, tokens, g):
        a = flatten(root, g, text=text, sentence_type=stype, profile=cfg.profile)
        a = binder.bind_traces(a, lex)
        a = binder.resolve_coordination(a, sn)
        a.score = score(a, sn, lex, cfg.pairs)
        k = a.key()
        if k in seen:
            continue
        seen.add(k)
        analyses.append(a)
    analyses.sort(key=lambda a: rank_key(a.score))
    if cfg.beam:
        analyses = analyses[: cfg.beam]
    if tokens and not analyses:
        diagnostics.append("no analysis covers the whole sentence")
    return ParseResult(analyses, diagnostics, chart, tokens, lattice)
