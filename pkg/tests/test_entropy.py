import math

import pytest
from hypothesis import given, settings

from tree_entropy.entropy import (EntropyReport, degree_entropy, degree_label_entropy,
                                  label_degree_entropy, label_entropy, report, reports,
                                  shape_entropy_binary, shape_entropy_unranked)
from tree_entropy.families import comb, left_chain, two_branch
from tree_entropy.tree_model import BinaryTree, build_tree, fcns

from conftest import A_PAD, BOTH_PADS, SENTINEL_PAD, trees

H3 = math.log2(3) + 2 * math.log2(1.5)  # one node of three against two


def test_single_node_all_zero():
    t = build_tree("a")
    for k in range(1, 4):
        r = report(t, k, SENTINEL_PAD)
        assert r.measures() == dict.fromkeys(r.measures(), 0.0)
    assert degree_entropy(t) == 0.0


def test_single_node_pad_a_shape_collision():
    # fcns gives a(a a); the root and its first pad leaf share every padded history
    t = build_tree("a")
    for k in range(1, 4):
        r = report(t, k, A_PAD)
        assert r.h_shape == pytest.approx(2.0)
        assert r.h_label == r.h_deg == r.h_labeldeg == r.h_deglabel == 0.0


def test_single_node_shape_at_order_zero():
    # a(pad pad): one inner node against two pad leaves under the empty history
    assert shape_entropy_unranked(build_tree("a"), 0, SENTINEL_PAD) == pytest.approx(H3)


def test_two_leaves_by_hand():
    t = build_tree("a(b c)")
    assert degree_entropy(t) == pytest.approx(H3)
    assert label_entropy(t, 1, SENTINEL_PAD) == pytest.approx(2.0)
    assert label_degree_entropy(t, 1, SENTINEL_PAD) == 0.0
    assert degree_label_entropy(t, 1, SENTINEL_PAD) == pytest.approx(2.0)
    assert label_entropy(t, 0, SENTINEL_PAD) == pytest.approx(3 * math.log2(3))


def test_unary_alphabet_has_no_label_entropy():
    t = build_tree("a(a(a a) a)")
    for k in range(4):
        assert label_entropy(t, k, A_PAD) == 0.0
        assert degree_label_entropy(t, k, A_PAD) == 0.0


@pytest.mark.parametrize("n, k", [(3, 2), (3, 1), (5, 4), (6, 7)])
def test_comb_shape_closed_form(n, k):
    m = n - (k - 1) // 2
    expected = (m - 1) * math.log2(m / (m - 1)) + math.log2(m) + 2
    assert shape_entropy_unranked(comb(n), k, A_PAD) == pytest.approx(expected, abs=1e-9)


def test_comb_frozen_value():
    assert report(comb(3), 2, A_PAD).h_shape == pytest.approx(4.754887502163468, abs=1e-9)


@pytest.mark.parametrize("n", [1, 4, 9])
def test_comb_degree_label_is_2n(n):
    assert degree_label_entropy(comb(n), 3, A_PAD) == pytest.approx(2 * n)


@pytest.mark.parametrize("n", [2, 5])
def test_two_branch_label_entropies(n):
    t = two_branch(n)
    assert label_entropy(t, 1, A_PAD) == pytest.approx(3 * math.log2(3))
    assert label_degree_entropy(t, 1, A_PAD) == 0.0


def test_left_chain_shape():
    n = 6
    expected = math.log2(n) + (n - 1) * math.log2(n / (n - 1))
    assert shape_entropy_binary(left_chain(n), 3, A_PAD) == pytest.approx(expected)


def test_reports_share_passes():
    t = build_tree("a(b(c d) c(a b(d)) d)")
    many = reports(t, [4, 0, 2], SENTINEL_PAD)
    assert [r.k for r in many] == [4, 0, 2]
    for r in many:
        assert r == report(t, r.k, SENTINEL_PAD)
    with pytest.raises(ValueError):
        reports(t, [])
    with pytest.raises(ValueError):
        reports(t, [-1])


def test_report_composites_and_normalized():
    r = EntropyReport(1, 4, 1.0, 2.0, 3.0, 0.5, 1.5)
    m = r.measures()
    assert m["H_deg_plus_label"] == 5.0
    assert m["H_label_plus_labeldeg"] == 3.5
    assert m["H_deg_plus_deglabel"] == 3.5
    assert "H_shape_unlabeled" not in m
    assert r.normalized()["H_deg_per_n"] == 0.5


def test_unlabeled_shape_column():
    t = build_tree("a(b c)")
    r = report(t, 1, SENTINEL_PAD, unlabeled_shape=True)
    assert r.h_shape_unlabeled == pytest.approx(
        shape_entropy_unranked(build_tree("a(a a)"), 1, A_PAD))


def test_binary_shape_on_fcns_equals_unranked():
    t = build_tree("a(b c(d e f) b)")
    b = fcns(t, SENTINEL_PAD)
    assert isinstance(b, BinaryTree)
    assert shape_entropy_binary(b, 2) == shape_entropy_unranked(t, 2, SENTINEL_PAD)


@BOTH_PADS
@settings(max_examples=100, deadline=None)
@given(t=trees())
def test_relabeling_invariance(t, pad):
    # a permutation of b and c fixes both pads
    swap = {"a": "a", "b": "c", "c": "b"}
    u = t.relabeled(swap.__getitem__)
    for k in (0, 1, 3):
        assert report(u, k, pad).measures() == pytest.approx(report(t, k, pad).measures(),
                                                             abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(t=trees())
def test_nonnegative(t):
    for r in reports(t, range(4), SENTINEL_PAD):
        assert min(r.measures().values()) >= 0.0
