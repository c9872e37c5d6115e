import re

import pytest

from syntagma.engine import Analysis
from syntagma.output import (COLUMNS, FormatError, arcs, crossing_arcs, format_table,
                             from_columns, read_columns, to_columns, to_graph, to_table)

FIXTURES = [
    ("en", "Paul wants to eat a hamburger"),
    ("en", "John bought a dog for Bill to give to Mary"),
    ("en", "Paul picks and Mary eats cherries"),
    ("en", "Good drinks and food"),
    ("it", "Paolo chiede a Giovanni di lasciargli prendere l'automobile"),
]


@pytest.fixture
def analyses(en, it, parse_with):
    res = {"en": en, "it": it}
    return [parse_with(res[lang], text)[0] for lang, text in FIXTURES]


def test_table_lists_every_word_and_trace(en, parse_with):
    a = parse_with(en, "Paul wants to eat a hamburger")[0]
    lines = format_table(a).splitlines()
    assert lines[0] == "S: Paul wants to eat a hamburger"
    assert lines[2].split() == ["ID", "LEX", "CAT", "DEP", "FNCT", "COREF", "SECONDARY"]
    body = [l.split() for l in lines[3:]]
    assert [b[0] for b in body] == ["1", "2", "2.1", "3", "4", "5", "6"]
    assert body[2] == ["2.1", "-", "Ts", "4", "subj", "1", "_"]
    assert body[1][:5] == ["2", "wants", "V", "0", "v"]


def test_table_keeps_meanings_in_features(it, parse_with):
    a = parse_with(it, "Paolo chiede a Giovanni di lasciargli prendere l'automobile")[0]
    row = to_table(a).row("2")
    assert ("mng", "1.4") in row.feats


def test_columns_round_trip(analyses):
    for a in analyses:
        text = to_columns(a)
        assert from_columns(text) == to_table(a)
        assert to_columns(from_columns(text)) == text


def test_columns_layout(analyses):
    for a in analyses:
        lines = to_columns(a).splitlines()
        assert [l.split(" = ")[0] for l in lines[:4]] == \
            ["# text", "# sentence_type", "# profile", "# score"]
        assert all(len(l.split("\t")) == len(COLUMNS) for l in lines[4:])


def test_several_tables_in_one_stream(analyses):
    stream = "\n".join(to_columns(a) for a in analyses)
    assert read_columns(stream) == [to_table(a) for a in analyses]


def test_empty_analysis_is_header_only():
    text = to_columns(Analysis(rows=[], text=""))
    assert text.splitlines() == ["# text = ", "# sentence_type = assertive",
                                 "# profile = strict", "# score = 0 0 0 -"]


def test_malformed_columns_are_rejected():
    with pytest.raises(FormatError):
        from_columns("# text = x\n1\tx\tx\tN\n")
    with pytest.raises(FormatError):
        from_columns("1\tx\tx\tN\t_\t0\thead\t_\tbroken\n")


def test_graph_is_deterministic_and_complete(analyses):
    for a in analyses:
        dot = to_graph(a)
        assert dot == to_graph(a)
        t = to_table(a)
        edges = re.findall(r'^  "w[^"]*" -> "w[^"]*" \[style=(\w+)', dot, re.M)
        assert edges.count("solid") == len(t.rows)
        assert edges.count("dashed") == sum(len(r.secondary) for r in t.rows)
        assert edges.count("dotted") == sum(1 for r in t.rows for c in r.coref if c != "*")
        assert dot.startswith("digraph analysis {") and dot.rstrip().endswith("}")


def test_graph_quotes_odd_names(it, parse_with):
    a = parse_with(it, "Paolo chiede a Giovanni di lasciargli prendere l'automobile")[0]
    assert '"w9" [label="9 l\'"];' in to_graph(a)


def test_shared_specifier_arc_crosses_the_root_arc(en, parse_with):
    a = parse_with(en, "Good drinks and food")[0]
    assert crossing_arcs(a) == [((0, 2), (1, 4))]
    b = parse_with(en, "Good drinks and food")[1]
    assert crossing_arcs(b) == []


def test_shared_subject_arcs_cross(en, parse_with):
    a = parse_with(en, "James builds and repairs computers")[0]
    assert (1, 4) in arcs(a)
    assert set(crossing_arcs(a)) == {((0, 2), (1, 4)), ((1, 4), (2, 5))}


def test_gap_coreference_arc_crosses_the_second_clause(en, parse_with):
    a = parse_with(en, "Paul picks and Mary eats cherries")[0]
    assert crossing_arcs(a) == []
    # the object trace after "picks" points at "cherries" across the second clause
    assert ((2, 6), (3, 7)) in crossing_arcs(a, coref=True)


def test_single_word_graph_has_one_node(en, parse_with):
    a = parse_with(en, "hamburger")[0]
    dot = to_graph(a)
    assert dot.count("[label=") == 2          # node declarations: S and the word
    assert '"w0" -> "w1" [style=solid, label="head"];' in dot
    assert len(to_table(a).rows) == 1


def test_want_sentence_has_six_words_and_one_trace(en, parse_with):
    rows = to_table(parse_with(en, "Paul wants to eat a hamburger")[0]).rows
    assert sum(r.lex != "-" for r in rows) == 6 and sum(r.lex == "-" for r in rows) == 1
