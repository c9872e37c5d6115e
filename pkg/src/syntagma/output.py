"""Serializers for analyses: indexed table, tab-separated columns, DOT graph."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .engine import Analysis

COLUMNS = ("ID", "FORM", "LEMMA", "CAT", "FEATS", "HEAD", "DEPREL", "COREF", "SECONDARY")
_EMPTY = "_"


class FormatError(ValueError):
    pass


@dataclass(frozen=True)
class TableRow:
    id: str
    form: str
    lemma: str
    cat: str
    feats: tuple          # ((key, value), ...) sorted, meanings under "mng"
    dep: str
    fnct: str
    coref: tuple = ()
    secondary: tuple = ()  # ((head id, function), ...)

    @property
    def lex(self) -> str:
        return "-" if self.cat in ("Ts", "To", "Ti") else self.form


@dataclass(frozen=True)
class AnalysisTable:
    rows: tuple
    text: str = ""
    sentence_type: str = "assertive"
    profile: str = "strict"
    score: str = ""

    def row(self, rid: str) -> Optional[TableRow]:
        return next((r for r in self.rows if r.id == rid), None)


def format_score(score: tuple) -> str:
    unfilled, penalty, semantic, order = score
    return f"{unfilled} {penalty:g} {semantic:g} {'.'.join(map(str, order)) or '-'}"


def _id_key(rid: str) -> tuple:
    main, _, sub = rid.partition(".")
    return (int(main), int(sub or 0))


def to_table(a: Analysis) -> AnalysisTable:
    rows = []
    for r in a.rows:
        feats = dict(r.feats)
        if r.meanings:
            feats["mng"] = ",".join(r.meanings)
        rows.append(TableRow(r.id, r.form, r.lemma, r.cat, tuple(sorted(feats.items())),
                             r.dep, r.fnct, tuple(r.coref), tuple(r.secondary)))
    rows.sort(key=lambda t: _id_key(t.id))
    return AnalysisTable(tuple(rows), a.text, a.sentence_type, a.profile, format_score(a.score))


def _as_table(x) -> AnalysisTable:
    return x if isinstance(x, AnalysisTable) else to_table(x)


def format_table(a) -> str:
    """The indexed word list, one aligned row per word or trace."""
    t = _as_table(a)
    header = ("ID", "LEX", "CAT", "DEP", "FNCT", "COREF", "SECONDARY")
    body = [(r.id, r.lex, r.cat, r.dep, r.fnct, ",".join(r.coref) or _EMPTY,
             "|".join(f"{h}:{f}" for h, f in r.secondary) or _EMPTY) for r in t.rows]
    widths = [max(len(str(row[i])) for row in [header, *body]) for i in range(len(header))]
    lines = [f"S: {t.text}", f"type: {t.sentence_type}  profile: {t.profile}  score: {t.score}"]
    for row in [header, *body]:
        lines.append("  ".join(str(v).ljust(w) for v, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def _feats_text(feats: tuple) -> str:
    return "|".join(f"{k}={v}" for k, v in feats) or _EMPTY


def to_columns(a) -> str:
    t = _as_table(a)
    lines = [f"# text = {t.text}", f"# sentence_type = {t.sentence_type}",
             f"# profile = {t.profile}", f"# score = {t.score}"]
    for r in t.rows:
        cols = [r.id, r.form, r.lemma, r.cat, _feats_text(r.feats), r.dep, r.fnct,
                ",".join(r.coref) or _EMPTY,
                "|".join(f"{h}:{f}" for h, f in r.secondary) or _EMPTY]
        lines.append("\t".join(cols))
    return "\n".join(lines) + "\n"


def _split_pairs(text: str, sep: str, inner: str, lineno: int) -> tuple:
    if text == _EMPTY:
        return ()
    out = []
    for item in text.split(sep):
        k, found, v = item.partition(inner)
        if not found:
            raise FormatError(f"line {lineno}: malformed item {item!r}")
        out.append((k, v))
    return tuple(out)


def read_columns(text: str) -> list:
    """Every table in a column-format text (blocks separated by blank lines)."""
    tables, meta, rows = [], {}, []

    def close():
        if meta or rows:
            tables.append(AnalysisTable(tuple(rows), meta.get("text", ""),
                                        meta.get("sentence_type", "assertive"),
                                        meta.get("profile", "strict"), meta.get("score", "")))

    for lineno, line in enumerate(text.split("\n"), 1):
        if not line.strip():
            close()
            meta, rows = {}, []
            continue
        if line.startswith("# "):
            key, found, value = line[2:].partition(" = ")
            if not found:
                raise FormatError(f"line {lineno}: malformed header {line!r}")
            if rows:
                close()
                meta, rows = {}, []
            meta[key] = value
            continue
        cols = line.split("\t")
        if len(cols) != len(COLUMNS):
            raise FormatError(f"line {lineno}: expected {len(COLUMNS)} columns, got {len(cols)}")
        rid, form, lemma, cat, feats, head, rel, coref, secondary = cols
        rows.append(TableRow(rid, form, lemma, cat, _split_pairs(feats, "|", "=", lineno),
                             head, rel, () if coref == _EMPTY else tuple(coref.split(",")),
                             _split_pairs(secondary, "|", ":", lineno)))
    close()
    return tables


def from_columns(text: str) -> AnalysisTable:
    tables = read_columns(text)
    if len(tables) != 1:
        raise FormatError(f"expected one analysis, found {len(tables)}")
    return tables[0]


def _q(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_graph(a) -> str:
    """DOT digraph: primary edges solid, secondary dashed, coreference dotted."""
    t = _as_table(a)
    lines = ["digraph analysis {", "  rankdir=LR;", f'  {_q("w0")} [label="S"];']
    for r in t.rows:
        lines.append(f"  {_q('w' + r.id)} [label={_q(r.id + ' ' + r.lex)}];")
    for r in t.rows:
        lines.append(f"  {_q('w' + r.dep)} -> {_q('w' + r.id)} "
                     f"[style=solid, label={_q(r.fnct)}];")
        for h, f in r.secondary:
            lines.append(f"  {_q('w' + h)} -> {_q('w' + r.id)} [style=dashed, label={_q(f)}];")
        for c in r.coref:
            if t.row(c) is not None:
                lines.append(f"  {_q('w' + r.id)} -> {_q('w' + c)} "
                             f'[style=dotted, label="coref"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def arcs(a, coref: bool = False) -> list:
    """Primary and secondary arcs as (left, right) positions in row order; S sits at 0.

    With ``coref`` the dotted coreference arcs of the graph are included too.
    """
    t = _as_table(a)
    pos = {r.id: i for i, r in enumerate(t.rows, 1)}
    pos["0"] = 0
    out = []
    for r in t.rows:
        ends = [r.dep, *(h for h, _ in r.secondary)]
        if coref:
            ends.extend(r.coref)
        for h in ends:
            if h in pos:
                out.append(tuple(sorted((pos[h], pos[r.id]))))
    return out


def crossing_arcs(a, coref: bool = False) -> list:
    """Pairs of arcs that cross when drawn above the sentence."""
    edges = sorted(set(arcs(a, coref)))
    return [(x, y) for i, x in enumerate(edges) for y in edges[i + 1:]
            if x[0] < y[0] < x[1] < y[1] or y[0] < x[0] < y[1] < x[1]]
