"""Brute-force reference parser.

No agenda, no cycles, no seen-set keyed on chart ids: every frame is tried
over every contiguous sequence of everything built so far, until nothing
new (by structural signature) appears.  Only the single-frame step
(``apply_pattern``) is shared with the chart parser.
"""

from syntagma.engine import apply_pattern, terminal_constituent, trace_constituent
from syntagma.tagger import build_lattice, tokenize


def _sequences(frame, items, traces, grammar):
    starts = sorted({c.start for c in items})

    def extend(i, vertex, acc):
        if i == len(frame.seq):
            yield list(acc)
            return
        cat = frame.seq[i]
        if grammar.is_trace(cat):
            t = traces.setdefault((cat, vertex), trace_constituent(cat, vertex))
            yield from extend(i + 1, vertex, acc + [t])
            return
        for c in items:
            if c.start == vertex and c.category == cat:
                yield from extend(i + 1, c.end, acc + [c])

    if all(grammar.is_trace(s) for s in frame.seq):
        return
    for v in starts:
        yield from extend(0, v, [])


def brute_force_roots(text, grammar, lex, profile="strict"):
    """Signatures of every root-category constituent spanning the whole sentence."""
    tokens = [t for t in tokenize(text)]
    while tokens and tokens[-1].surface in ".?!":
        tokens.pop()
    items = [terminal_constituent(n) for n in build_lattice(tokens, lex)]
    known = {c.signature() for c in items}
    traces = {}
    prof = grammar.profile(profile)
    changed = True
    while changed:
        changed = False
        for frame in grammar.frames:
            for seq in list(_sequences(frame, list(items), traces, grammar)):
                result = apply_pattern(frame, seq, prof, grammar, lex)
                if hasattr(result, "reason"):
                    continue
                sig = result.signature()
                if sig not in known:
                    known.add(sig)
                    items.append(result)
                    changed = True
    if not tokens:
        return set()
    first, last = (tokens[0].index, 0), (tokens[-1].index + 1, 0)
    return {c.signature() for c in items
            if c.start == first and c.end == last and c.category in grammar.roots}
