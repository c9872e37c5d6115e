"""Relations the constituent structure leaves open.

Trace coreference through control features, gap-filling in coordinated
clauses, shared heads and dependents of coordinated words, and the
semantic ordering of competing attachments.  Every function takes an
:class:`~syntagma.engine.Analysis` and returns a new one.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Optional

from .engine import DISCOURSE, Analysis, Row, relation_weight
from .lexicon import ARGUMENT_FUNCTIONS, Lexicon
from .semnet import COORDINATION_THRESHOLD, SHARED_TAG_SCORE, SemNet

PRONOUN_CATEGORIES = ("Pron", "PronDat")
_FAMILIES = {
    "subj": frozenset({"subj", "subj_pass"}),
    "subj_pass": frozenset({"subj", "subj_pass"}),
    "obj": frozenset({"obj", "obj_pass", "arg"}),
    "obj_pass": frozenset({"obj", "obj_pass", "arg"}),
    "arg": frozenset({"obj", "obj_pass", "arg"}),
    "iobj": frozenset({"iobj"}),
}
_CANDIDATE_FUNCTIONS = ARGUMENT_FUNCTIONS | {"ante"}


@dataclass(frozen=True)
class ControlRule:
    verb: str
    meaning_id: str
    ctrl: str
    trace: str = "Ts"


@dataclass(frozen=True)
class GapFill:
    first_head: str
    second_head: str
    copied: tuple        # row ids of the first member's dependents standing in for the gap
    new: tuple           # ((row id, function), ...) supplied by the second member


def _family(fn: str) -> frozenset:
    return _FAMILIES.get(fn, frozenset({fn}))


def _copy(a: Analysis) -> Analysis:
    return dataclasses.replace(a, rows=[dataclasses.replace(r) for r in a.rows],
                               diagnostics=list(a.diagnostics), gapfills=list(a.gapfills))


def _dependents(a: Analysis, head: Row) -> list:
    return [r for r in a.rows if r.dep == head.id]


def _position(a: Analysis, row: Row) -> int:
    return next(i for i, r in enumerate(a.rows) if r is row)


def _overt(a: Analysis, row: Optional[Row]) -> Optional[Row]:
    """Follow trace corefs to an overt row (chain compression)."""
    seen = set()
    while row is not None and row.is_trace:
        if row.id in seen or not row.coref or row.coref[0] == DISCOURSE:
            return None
        seen.add(row.id)
        row = a.row(row.coref[0])
    return row


def control_rule(row: Row, lex: Optional[Lexicon]) -> Optional[ControlRule]:
    if lex is None or not row.meanings:
        return None
    m = lex.meaning(row.lemma, row.cat, row.meanings[0])
    return ControlRule(row.lemma, m.meaning_id, m.ctrl) if m else None


def _clause_coordinated(a: Analysis, verb: Row) -> Optional[tuple]:
    """(first member head, second member head) when ``verb`` heads a coordinated clause."""
    if verb.coord_scope == "clause":
        first = a.row(verb.dep)
        if verb.fnct != "coord":
            first = next((a.row(h) for h, rel in verb.secondary if rel == "coord"), first)
        return (first, verb) if first is not None else None
    for r in _dependents(a, verb):
        if r.coord_scope == "clause" and r.fnct == "coord":
            return (verb, r)
    return None


def _nearest(a: Analysis, upper: Row, lower: Row, trace: Row) -> Optional[Row]:
    """Closest overt argument of ``upper`` (then of each higher clause) for ``trace``."""
    here = _position(a, trace)
    level, exclude = upper, lower
    seen = set()
    while level is not None and level.id not in seen:
        seen.add(level.id)
        cands = [r for r in _dependents(a, level)
                 if r is not exclude and not r.is_trace and r.fnct in _CANDIDATE_FUNCTIONS]
        if cands:
            preferred = [r for r in cands if r.fnct in _family(trace.fnct)] or cands
            return min(preferred, key=lambda r: (abs(_position(a, r) - here), _position(a, r)))
        exclude, level = level, a.row(level.dep)
    return None


def _controlled(a: Analysis, upper: Row, lower: Row, ctrl: str) -> Optional[Row]:
    for r in _dependents(a, upper):
        if r is not lower and r.fnct in _family(ctrl) and (ctrl != "obj" or r.fnct != "arg"):
            return r
    return None


def _gap_fill(a: Analysis, first: Row, second: Row) -> GapFill:
    first_args = [r for r in _dependents(a, first) if r.fnct in ARGUMENT_FUNCTIONS]
    second_args = [r for r in _dependents(a, second) if r.fnct in ARGUMENT_FUNCTIONS]
    new = tuple((r.id, r.fnct) for r in second_args if not r.is_trace)
    supplied = {fn for _, fn in new}
    copied = tuple(r.id for r in first_args
                   if r.fnct not in supplied and _overt(a, r) is not None)

    def bind(trace: Row, pool: list, head: Row):
        if trace.coref:
            return
        target = next((r for r in pool if not r.is_trace and r.fnct in _family(trace.fnct)), None)
        if target is None:
            trace.coref = (DISCOURSE,)
            a.diagnostics.append(f"unresolved {trace.cat} {trace.id} in coordinated clause")
            return
        trace.coref = (target.id,)
        link = (head.id, trace.fnct)
        if link not in target.secondary and target.dep != head.id:
            target.secondary = target.secondary + (link,)

    for t in second_args:
        if t.is_trace:
            bind(t, first_args, second)
    for t in first_args:
        if t.is_trace:
            bind(t, second_args, first)
    return GapFill(first.id, second.id, copied, new)


def _pronoun_candidates(a: Analysis, pron: Row) -> tuple:
    clause = a.row(pron.dep)
    if clause is None:
        return (DISCOURSE,)
    own_subj = next((r for r in _dependents(a, clause) if r.fnct in _family("subj")), None)
    excluded = {pron.id}
    if own_subj is not None:
        ante = _overt(a, own_subj)
        excluded.add(ante.id if ante else own_subj.id)
    out = []
    seen = {clause.id}
    upper = a.row(clause.dep)
    while upper is not None and upper.id not in seen:
        seen.add(upper.id)
        for r in _dependents(a, upper):
            if r.fnct in _family("subj"):
                ante = _overt(a, r)
                if ante is not None and ante.id not in excluded and ante.id not in out:
                    out.append(ante.id)
        upper = a.row(upper.dep)
    return tuple(out) + (DISCOURSE,)


def bind_traces(a: Analysis, lex: Optional[Lexicon] = None) -> Analysis:
    """Saturate the coreference slot of every trace (and rank pronoun antecedents)."""
    a = _copy(a)
    pending = [r for r in a.rows if r.is_trace and not r.coref]
    for t in pending:
        lower = a.row(t.dep)
        if lower is None:
            continue
        pair = _clause_coordinated(a, lower)
        if pair is not None:
            _gap_fill(a, *pair)
            continue
        upper = a.row(lower.dep)
        target = None
        if upper is not None:
            rule = control_rule(upper, lex)
            if t.cat == "Ts" and rule is not None and rule.ctrl != "none":
                target = _controlled(a, upper, lower, rule.ctrl)
            if target is None:
                target = _nearest(a, upper, lower, t)
        if target is None:
            t.coref = (DISCOURSE,)
            a.diagnostics.append(f"no antecedent for {t.cat} {t.id}")
        else:
            t.coref = (target.id,)
    # Chain compression: a trace pointing at a trace points at its overt antecedent.
    for t in a.rows:
        if t.is_trace and t.coref and t.coref[0] != DISCOURSE:
            target = a.row(t.coref[0])
            if target is not None and target.is_trace:
                ante = _overt(a, target)
                t.coref = (ante.id,) if ante else (DISCOURSE,)
    for r in a.rows:
        if r.cat in PRONOUN_CATEGORIES and not r.coref:
            r.coref = _pronoun_candidates(a, r)
    return a


def resolve_coordination(a: Analysis, sn: Optional[SemNet] = None) -> Analysis:
    """Wire the shared heads and dependents implied by coordination."""
    a = _copy(a)
    done = set(a.resolved)
    for r in a.rows:
        if r.coord_scope is None or r.id in done or r.fnct != "coord":
            continue
        first = a.row(r.dep)
        if first is None:
            continue
        done.add(r.id)
        if r.coord_scope == "dep":
            if first.dep != "0":
                r.dep, r.fnct = first.dep, first.fnct
                r.secondary = r.secondary + ((first.id, "coord"),)
        elif r.coord_scope == "head":
            for d in _dependents(a, first):
                if d is r or d.fnct in ("cc", "coord", "punct"):
                    continue
                link = (r.id, d.fnct)
                if link not in d.secondary:
                    d.secondary = d.secondary + (link,)
        elif r.coord_scope == "clause":
            fill = _gap_fill(a, first, r)
            if all((g.first_head, g.second_head) != (fill.first_head, fill.second_head)
                   for g in a.gapfills):
                a.gapfills.append(fill)
    a.resolved = frozenset(done)
    return a


def _get(x, *names, default=None):
    for n in names:
        if hasattr(x, n):
            return getattr(x, n)
    return default


def coordination_congruence(x, y, sn: Optional[SemNet] = None) -> float:
    """0.6 x semantic similarity + 0.2 x category match + 0.2 x morphology.

    Works on rows and constituents alike.  Unknown similarity counts as 0.
    """
    lx, ly = _get(x, "lemma"), _get(y, "lemma")
    cx, cy = _get(x, "cat", "category"), _get(y, "cat", "category")
    fx = _get(x, "feats", "features", default={}) or {}
    fy = _get(y, "feats", "features", default={}) or {}
    if x is y or (lx, cx, fx) == (ly, cy, fy):
        return 1.0
    sim = None
    if sn is not None:
        sim = sn.similarity(lx, ly)
        wholes_x = {r.target for r in sn.nodes[lx].related("meronym")} if lx in sn else set()
        wholes_y = {r.target for r in sn.nodes[ly].related("meronym")} if ly in sn else set()
        if wholes_x & wholes_y:
            sim = max(sim or 0.0, SHARED_TAG_SCORE)
    shared = [k for k in ("pers", "num", "gen") if k in fx and k in fy]
    morph = 1.0 if not shared else sum(fx[k] == fy[k] for k in shared) / len(shared)
    return round(0.6 * (sim or 0.0) + 0.2 * (cx == cy) + 0.2 * morph, 9)


def shares_specifier(first, second, sn: Optional[SemNet] = None) -> bool:
    """Does a specifier after ``second`` also modify ``first``?"""
    return coordination_congruence(first, second, sn) >= COORDINATION_THRESHOLD


def attachment_score(a: Analysis, sn: Optional[SemNet], pairs: Optional[dict] = None,
                     lex: Optional[Lexicon] = None) -> float:
    total = 0.0
    for r in a.rows:
        w = relation_weight(a, r, sn, pairs or {}, lex)
        if w is not None:
            total += w
    return total


def disambiguate_attachment(candidates, sn: Optional[SemNet], pairs: Optional[dict] = None,
                            lex: Optional[Lexicon] = None) -> list:
    """Stable reordering by semantic attachment weight (semnet first, then pair list)."""
    return sorted(candidates, key=lambda a: -attachment_score(a, sn, pairs, lex))
