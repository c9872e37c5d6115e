import pytest
from hypothesis import given, strategies as st

from syntagma.semnet import (COORDINATION_THRESHOLD, DECAY, SHARED_TAG_SCORE, SemNetError,
                             load_semnet, loads_pairs, loads_semnet)

from conftest import DATA

NET = load_semnet(DATA / "en" / "semnet.sg")
IDS = sorted(NET.nodes)


def test_fixture_tags():
    assert "discipline" in NET.tags("linguistics")
    assert "populated-place" in NET.tags("Paris")


def test_self_hypernym_is_a_cycle():
    with pytest.raises(SemNetError, match="cycle"):
        loads_semnet("NODE x\n  REL hypernym x\n")


def test_longer_cycle():
    with pytest.raises(SemNetError, match="cycle"):
        loads_semnet("NODE a\nREL hypernym b\nNODE b\nREL hypernym c\nNODE c\nREL hypernym a\n")


def test_dangling_target():
    with pytest.raises(SemNetError, match="dangling"):
        loads_semnet("NODE a\n  REL meronym ghost\n")


def test_empty_network_knows_nothing():
    net = loads_semnet("")
    assert len(net) == 0
    assert net.similarity("a", "a") is None
    assert net.compatible("a", "*", "b") is None


def test_identity_and_unknown():
    assert NET.similarity("teeth", "teeth") == 1.0
    assert NET.similarity("teeth", "unicorn") is None


def test_teeth_and_bones_above_threshold():
    # both are one hypernym step below body-part: combined distance 2
    expected = SHARED_TAG_SCORE * DECAY ** 2
    assert NET.similarity("teeth", "bones") == pytest.approx(expected, abs=1e-12)
    assert expected > COORDINATION_THRESHOLD


def test_shared_tag():
    assert NET.similarity("Paris", "Rome") == SHARED_TAG_SCORE


def test_unrelated_nodes_unknown():
    assert NET.similarity("wood", "bones") is None


def test_compatible_direct_edge():
    assert NET.compatible("graduate", "locative", "Paris") == pytest.approx(0.9, abs=1e-12)


def test_compatible_label_restricts():
    assert NET.compatible("graduate", "in", "linguistics") == pytest.approx(0.8, abs=1e-12)
    assert NET.compatible("graduate", "with", "linguistics") is None


def test_compatible_inherited_with_decay():
    # eat -> food-item edge reaches hamburger one hypernym level down
    assert NET.compatible("eat", "obj", "hamburger") == pytest.approx(1.0 * DECAY, abs=1e-12)
    assert NET.compatible("eat", "obj", "food-item") == pytest.approx(1.0, abs=1e-12)


def test_compatible_unknown_without_edge():
    assert NET.compatible("teeth", "obj", "bones") is None


def test_meronymy():
    assert NET.is_meronym_of("teeth", "animal")
    assert not NET.is_meronym_of("wood", "animal")


@given(st.sampled_from(IDS), st.sampled_from(IDS))
def test_similarity_symmetric_and_bounded(a, b):
    s = NET.similarity(a, b)
    assert s == NET.similarity(b, a)
    assert s is None or 0.0 <= s <= 1.0


@given(st.integers(min_value=0, max_value=6))
def test_inheritance_decay_is_monotone(depth):
    text = "NODE top\nNODE head\nREL compatible-with top 0.7\n"
    prev = "top"
    for i in range(depth + 1):
        text += f"NODE n{i}\nREL hypernym {prev}\n"
        prev = f"n{i}"
    net = loads_semnet(text)
    weights = [net.compatible("head", "*", f"n{i}") for i in range(depth + 1)]
    assert all(a >= b for a, b in zip(weights, weights[1:]))


def test_pairs_file():
    pairs = loads_pairs("# c\ngraduate\tin\tParis\t0.6\neat\t-\tsalad\t0.2\n")
    assert pairs == {("graduate", "in", "Paris"): 0.6, ("eat", None, "salad"): 0.2}
    with pytest.raises(SemNetError):
        loads_pairs("a\tb\tc\n")
