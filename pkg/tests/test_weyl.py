import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relweyl.root_datum import build_simply_connected
from relweyl.weyl import (WeylError, coxeter_element, coxeter_partition,
                          coxeter_type_from_matrix, from_word, longest_element,
                          minus_w0_permutation, relative_type, relative_weyl_group,
                          same_coxeter_type, simple_reflection, weyl_group_elements)

ORDERS = {"A1": 2, "A3": 24, "B3": 48, "C3": 48, "D4": 192, "G2": 12, "F4": 1152}


@pytest.mark.parametrize("label,order", sorted(ORDERS.items()))
def test_weyl_group_orders(label, order):
    assert len(weyl_group_elements(build_simply_connected(label))) == order


@given(st.sampled_from(["A3", "B3", "G2", "D4"]), st.data())
@settings(max_examples=40, deadline=None)
def test_braid_relations(label, data):
    rd = build_simply_connected(label)
    i = data.draw(st.sampled_from(rd.nodes()))
    j = data.draw(st.sampled_from(rd.nodes()))
    si, sj = simple_reflection(rd, i), simple_reflection(rd, j)
    assert (si * si).is_identity
    m = {0: 2, 1: 3, 2: 4, 3: 6}[rd.cartan[i - 1][j - 1] * rd.cartan[j - 1][i - 1]] if i != j else 1
    assert (si * sj).order() == m


@given(st.sampled_from(["A4", "B3", "D5", "E6"]), st.lists(st.integers(1, 5), max_size=8))
@settings(max_examples=40, deadline=None)
def test_reflections_preserve_pairing(label, word):
    rd = build_simply_connected(label)
    w = from_word(rd, [i for i in word if i <= rd.rank])
    for i in rd.nodes():
        for j in rd.nodes():
            assert rd.pairing(w.act(rd.root(i)), w.act_y(rd.coroot(j))) == rd.cartan[i - 1][j - 1]


def test_minus_w0():
    assert minus_w0_permutation(build_simply_connected("A4")) == {1: 4, 2: 3, 3: 2, 4: 1}
    assert minus_w0_permutation(build_simply_connected("D5"))[4] == 5
    assert minus_w0_permutation(build_simply_connected("D4"))[4] == 4
    assert longest_element(build_simply_connected("B3")).order() == 2


@pytest.mark.parametrize("label,h", [("A3", 4), ("B3", 6), ("D4", 6), ("E6", 12), ("G2", 6)])
def test_coxeter_number(label, h):
    assert coxeter_element(build_simply_connected(label)).order() == h


def test_coxeter_partition_blocks_have_rank_many_heads():
    rd = build_simply_connected("B4")
    part = coxeter_partition(rd)
    assert len(part) == rd.rank
    flat = [r for block in part.values() for r in block]
    assert sorted(flat) == sorted(rd.positive_roots_x)


@pytest.mark.parametrize("label,levi,rtype,order", [
    ("A3", (1, 3), "A1", 2),
    ("A5", (1, 3, 5), "A2", 6),
    ("B7", (1, 3, 5, 7), "B3", 48),
    ("C4", (4,), "B3", 48),
    ("E6", (1, 3, 5, 6), "G2", 12),
    ("E7", (2, 5, 7), "F4", 1152),
])
def test_relative_weyl_groups(label, levi, rtype, order):
    rwg = relative_weyl_group(build_simply_connected(label), levi)
    assert same_coxeter_type(relative_type(rwg), rtype)
    assert rwg.order == order


def test_relative_group_words_round_trip():
    rwg = relative_weyl_group(build_simply_connected("C4"), (4,))
    for w in rwg.elements[:40]:
        assert rwg.from_word(rwg.word_of(w)) == w
    with pytest.raises(WeylError):
        rwg.from_word([4])
    with pytest.raises(WeylError):
        rwg.word_of(simple_reflection(rwg.rd, 4))


def test_coxeter_type_recognition():
    assert coxeter_type_from_matrix([[1, 3], [3, 1]]) == "A2"
    assert coxeter_type_from_matrix([[1, 6], [6, 1]]) == "G2"
    assert same_coxeter_type("B1", "A1") and same_coxeter_type("C2", "B2")
    assert not same_coxeter_type("A3", "B3")
