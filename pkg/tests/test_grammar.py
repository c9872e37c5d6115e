import pytest
from hypothesis import given, strategies as st

from syntagma.grammar import (And, Atom, ConstraintSyntaxError, GrammarError, NIL, Or, STRICT,
                              Severity, evaluate, format_constraint, load_grammar, loads_grammar,
                              parse_constraint, print_grammar, validate_grammar)
from syntagma.lexicon import loads_lexicon

from conftest import DATA


def test_clause_frame_with_infinitive_loads():
    g = loads_grammar("PATTERN C 0 { seq: NP V NP; dep: 2 0 2; fnct: subj v obj; "
                      "cst: agr(pers,num) | nil | nil }")
    (f,) = g.frames
    assert (f.seq, f.dep, f.fnct) == (("NP", "V", "NP"), (2, 0, 2), ("subj", "v", "obj"))
    assert f.head == 1
    assert f.cst[0] == Atom("agr", ("pers", "num"))


def test_empty_file_has_no_frames_and_default_profiles():
    g = loads_grammar("")
    assert g.frames == ()
    assert g.profile_names == ["informal", "strict"]


@pytest.mark.parametrize("dep, message", [
    ("2 0 0", "multiple head positions"),
    ("2 1 2", "no head position"),
    ("2 0 4", "out of range"),
    ("1 0 2", "depends on itself"),
])
def test_frame_invariants_are_enforced(dep, message):
    with pytest.raises(GrammarError, match=message):
        loads_grammar(f"PATTERN C 0 {{ seq: NP V NP; dep: {dep}; fnct: subj v obj }}")


def test_dependency_cycle_rejected():
    with pytest.raises(GrammarError, match="cycle"):
        loads_grammar("PATTERN C 0 { seq: NP V NP NP; dep: 3 0 4 3; fnct: a v b c }")


def test_set_lengths_must_agree():
    with pytest.raises(GrammarError, match="lengths differ"):
        loads_grammar("PATTERN C 0 { seq: NP V; dep: 2 0; fnct: subj }")


def test_syntax_error_carries_line_number():
    with pytest.raises(GrammarError) as exc:
        loads_grammar("# comment\n\nBOGUS directive\n")
    assert exc.value.line == 3


def test_multiline_block_and_frame_order_preserved():
    g = loads_grammar("PATTERN NP b { seq: N;\n dep: 0;\n fnct: head }\n"
                      "PATTERN NP a { seq: Det N; dep: 2 0; fnct: det head }\n")
    assert [f.id for f in g.frames] == ["NP b", "NP a"]
    assert [f.index for f in g.frames] == [0, 1]


def test_duplicate_frame_id_rejected():
    with pytest.raises(GrammarError, match="duplicate frame"):
        loads_grammar("PATTERN NP 0 { seq: N; dep: 0; fnct: head }\n" * 2)


def test_missing_file_is_reported(tmp_path):
    with pytest.raises(GrammarError, match="cannot read"):
        load_grammar(tmp_path / "nope.sg")


# --- constraint language ----------------------------------------------------

def test_lex_atom():
    assert parse_constraint('lex("have")') == Atom("lex", ("have",))


def test_conjunction_of_two_atoms():
    e = parse_constraint('lex("be"),tmp(perf)')
    assert e == And((Atom("lex", ("be",)), Atom("tmp", ("perf",))))


def test_nil_is_identity():
    assert parse_constraint("nil") is NIL or parse_constraint("nil") == NIL
    assert parse_constraint("nil, mdv(inf)") == Atom("mdv", ("inf",))


def test_or_with_nil_is_nil():
    assert parse_constraint("lex('a') / nil") == NIL


def test_single_quotes_and_bare_atom():
    assert parse_constraint("conn('a'),cat(NP)") == And((Atom("conn", ("a",)),
                                                        Atom("cat", ("NP",))))
    assert parse_constraint("agr") == Atom("agr", ())


def test_severity_annotation():
    a = parse_constraint("agr(num)@soft(1.5)")
    assert a.severity.soft and a.severity.penalty == 1.5
    assert str(a) == "agr(num)@soft(1.5)"


@pytest.mark.parametrize("text, column", [
    ("lex(\"a\"", 8),
    ("lex(\"a\") junk", 10),
    ("frob(x)", 1),
    ("agr(num,)", 9),
    ("agr(num) $", 10),
])
def test_syntax_errors_report_column(text, column):
    with pytest.raises(ConstraintSyntaxError) as exc:
        parse_constraint(text)
    assert exc.value.column == column


_atom = st.builds(
    lambda kind, args: f"{kind}({','.join(args)})",
    st.sampled_from(["agr", "mdv", "tmp", "cat"]),
    st.lists(st.sampled_from(["num", "gen", "pers", "inf", "perf", "NP", "C"]), max_size=3),
) | st.builds(lambda k, w: f'{k}("{w}")', st.sampled_from(["lex", "conn"]),
              st.sampled_from(["a", "di", "to", "by"])) | st.just("nil")


def _expr(children):
    return st.builds(lambda xs, op: op.join(xs), st.lists(children, min_size=2, max_size=3),
                     st.sampled_from([",", "/"])) | st.builds(lambda x: f"({x})", children)


@given(st.recursive(_atom, _expr, max_leaves=6))
def test_constraint_print_parse_round_trip(text):
    e = parse_constraint(text)
    printed = format_constraint(e)
    assert parse_constraint(printed) == e
    assert format_constraint(parse_constraint(printed)) == printed


class _Cand:
    is_trace = False
    conn = None
    conn_child = head_child = None

    def __init__(self, category="N", lemma="x", **features):
        self.category, self.lemma, self.surface, self.features = category, lemma, lemma, features


def _soften(e):
    if isinstance(e, Atom):
        return Atom(e.kind, e.args, Severity(True, 2.0)) if e.kind != "nil" else e
    return type(e)(tuple(_soften(x) for x in e.items))


@given(st.recursive(_atom, _expr, max_leaves=6))
def test_strict_profile_reports_only_hard_violations(text):
    e = _soften(parse_constraint(text))
    cand, anchor = _Cand(num="sg", gen="f"), _Cand("V", num="pl", gen="m", pers="3")
    for v in evaluate(e, cand, anchor, [cand, anchor], loads_grammar(""), STRICT):
        assert v.hard


def test_informal_profile_downgrades_agreement():
    g = loads_grammar("")
    cand, anchor = _Cand(num="sg"), _Cand(num="pl")
    (v,) = evaluate(parse_constraint("agr(num)"), cand, anchor, [cand, anchor], g,
                    g.profile("informal"))
    assert not v.hard and v.severity.penalty == 1.0


def test_unknown_profile():
    with pytest.raises(KeyError):
        loads_grammar("").profile("casual")


# --- printing and validation ------------------------------------------------

@pytest.mark.parametrize("lang", ["en", "it"])
def test_shipped_grammar_round_trips(lang):
    g = load_grammar(DATA / lang / "grammar.sg")
    text = print_grammar(g)
    g2 = loads_grammar(text)
    assert g2 == g
    assert print_grammar(g2) == text


@pytest.mark.parametrize("lang", ["en", "it"])
def test_every_shipped_frame_has_one_head(lang):
    g = load_grammar(DATA / lang / "grammar.sg")
    assert all(list(f.dep).count(0) == 1 for f in g.frames)


def test_undeclared_category_reported():
    g = loads_grammar("PATTERN NP 0 { seq: Qnt N; dep: 2 0; fnct: q head }")
    lex = loads_lexicon("LEMMA dog POS N\nFORM dog\n")
    undeclared = [d for d in validate_grammar(g, lex) if d.code == "undeclared-category"]
    assert len(undeclared) == 1 and "Qnt" in undeclared[0].message


def test_shipped_english_is_clean(en):
    assert validate_grammar(en.grammar, en.lexicon) == []


def test_passive_frame_unreachable_without_passive_verb():
    text = (DATA / "en" / "grammar.sg").read_text()
    g = loads_grammar(text)
    lex = loads_lexicon("""
LEMMA Paul POS N
FORM Paul pers=3 num=sg
LEMMA have POS Aux
FORM has pers=3 num=sg
LEMMA be POS Aux
FORM been tmp=perf
LEMMA sleep POS V
FORM slept mdv=part tmp=past
MNG 1
SLOT subj cat=NP
LEMMA by POS Prep
FORM by
""")
    messages = [d.message for d in validate_grammar(g, lex)]
    assert any(m.startswith("frame C_pass unreachable") for m in messages)
