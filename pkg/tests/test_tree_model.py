import numpy as np
import pytest
from hypothesis import given, settings

from tree_entropy.tree_model import (SENTINEL, Alphabet, BinaryTree, PadPolicy, TermSyntaxError,
                                     Tree, build_tree, decode_fcns, degree_histogram, fcns,
                                     is_binary, size)

from conftest import trees


def test_build_small_term():
    t = build_tree("a(b c(d) e)")
    assert t.size == 5
    assert t.parent.tolist() == [-1, 0, 0, 2, 0]
    assert t.label_texts() == ["a", "b", "c", "d", "e"]
    assert t.degrees.tolist() == [3, 0, 1, 0, 0]
    assert t.depths.tolist() == [0, 1, 1, 2, 1]
    assert t.children(0) == [1, 2, 4]
    assert t.to_term() == "a(b c(d) e)"


@pytest.mark.parametrize("term, position", [
    ("a(b", 3), ("a)b", 1), ("(a)", 0), ("a b", 2), ("", 0), ("a(()", 2),
])
def test_malformed_terms_report_position(term, position):
    with pytest.raises(TermSyntaxError) as info:
        build_tree(term)
    assert info.value.position == position


def test_degree_histogram_and_binary_flag():
    t = build_tree("a(b(c d) e)")
    assert degree_histogram(t) == {0: 3, 2: 2}
    assert is_binary(t)
    assert size(t) == 5
    assert not is_binary(build_tree("a(b)"))
    assert is_binary(build_tree("a"))


def test_binary_tree_rejects_unary_nodes():
    t = build_tree("a(b)")
    with pytest.raises(ValueError):
        BinaryTree(t.parent, t.labels, t.alphabet)


def test_directions_and_children():
    t = build_tree("a(b(d e) c)")
    b = BinaryTree(t.parent, t.labels, t.alphabet)
    assert b.left(0) == 1 and b.right(0) == 4
    assert b.directions.tolist() == [0, 0, 0, 1, 1]


def test_parent_array_must_be_preorder():
    with pytest.raises(ValueError):
        Tree([-1, 0, 2], [0, 0, 0], Alphabet(["a"]))
    with pytest.raises(ValueError):
        Tree([0, 0], [0, 0], Alphabet(["a"]))
    with pytest.raises(ValueError):
        Tree([-1, 0, 1, 0, 2], [0] * 5, Alphabet(["a"]))
    with pytest.raises(ValueError):
        Tree([-1, 0], [0, 3], Alphabet(["a"]))


def test_from_children_renumbers_to_preorder():
    # node 3 is the root, numbered arbitrarily
    children = [[], [0], [], [2, 1]]
    t = Tree.from_children(children, ["x", "y", "z", "r"], root=3)
    assert t.to_term() == "r(z y(x))"


def test_sibling_links():
    t = build_tree("a(b c(d e f) g)")
    assert t.next_sibling.tolist() == [-1, 2, 6, 4, 5, -1, -1]
    assert t.prev_sibling.tolist() == [-1, -1, 1, -1, 3, 4, 2]


def test_pad_policy_parse():
    assert PadPolicy.parse("sentinel").is_sentinel
    assert PadPolicy.parse("SENTINEL") == PadPolicy.sentinel()
    assert PadPolicy.parse("a") == PadPolicy.in_alphabet("a")
    assert PadPolicy.sentinel().symbol is SENTINEL
    with pytest.raises(ValueError):
        PadPolicy.in_alphabet("")


def test_alphabet_resolve_virtual_pad():
    alpha = Alphabet(["a", "b"])
    assert alpha.resolve(PadPolicy.in_alphabet("b")) == 1
    assert alpha.resolve(PadPolicy.sentinel()) == 2
    assert alpha.sigma == 2


def test_fcns_single_node():
    b = fcns(build_tree("a"), PadPolicy.sentinel())
    assert b.to_term() == "a(□ □)"
    assert b.size == 3


def test_fcns_two_children():
    b = fcns(build_tree("a(b c)"), PadPolicy.sentinel())
    assert b.to_term() == "a(b(□ c(□ □)) □)"
    assert b.alphabet.sigma == 3


def test_fcns_comb_with_pad_a():
    t = build_tree("a(b c b c b c)")
    b = fcns(t, PadPolicy.in_alphabet("a"))
    assert b.to_term() == "a(b(a c(a b(a c(a b(a c(a a)))))) a)"


def test_fcns_inner_nodes_are_the_original_nodes():
    t = build_tree("r(x(y z) w(v))")
    b = fcns(t, PadPolicy.sentinel())
    inner = b.degrees == 2
    assert inner.sum() == t.size
    assert [b.alphabet.symbols[i] for i in b.labels[inner]] == t.label_texts()


def test_relabel_and_unlabel():
    t = build_tree("a(b c)")
    u = t.relabeled(str.upper)
    assert u.to_term() == "A(B C)"
    assert t.unlabeled().to_term() == "a(a a)"
    assert t == build_tree("a(b  c)")
    assert t != u


@settings(max_examples=200, deadline=None)
@given(trees())
def test_fcns_size_and_round_trip(t):
    for pad in (PadPolicy.sentinel(), PadPolicy.in_alphabet("a")):
        b = fcns(t, pad)
        assert b.size == 2 * t.size + 1
        assert b.is_binary()
        assert decode_fcns(b) == t


@settings(max_examples=200, deadline=None)
@given(trees())
def test_term_round_trip(t):
    assert build_tree(t.to_term()) == t
    assert np.all(t.parent[1:] < np.arange(1, t.size))
