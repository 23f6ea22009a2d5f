import hypothesis.strategies as st
import pytest

from tree_entropy.tree_model import PadPolicy, Tree

SENTINEL_PAD = PadPolicy.sentinel()
A_PAD = PadPolicy.in_alphabet("a")
BOTH_PADS = pytest.mark.parametrize("pad", [SENTINEL_PAD, A_PAD], ids=["sentinel", "pad_a"])


@st.composite
def trees(draw, max_size=40, symbols="abc"):
    """Random ordered trees: each new node attaches to a random earlier node."""
    n = draw(st.integers(1, max_size))
    children = [[] for _ in range(n)]
    for v in range(1, n):
        children[draw(st.integers(0, v - 1))].append(v)
    labels = draw(st.lists(st.sampled_from(symbols), min_size=n, max_size=n))
    return Tree.from_children(children, labels)


@st.composite
def binary_trees(draw, max_leaves=20, symbols="abc"):
    """Random full binary trees built by splitting random leaves."""
    leaves = draw(st.integers(1, max_leaves))
    children = [[]]
    for _ in range(leaves - 1):
        frontier = [v for v, c in enumerate(children) if not c]
        v = draw(st.sampled_from(frontier))
        children[v] = [len(children), len(children) + 1]
        children += [[], []]
    labels = draw(st.lists(st.sampled_from(symbols), min_size=len(children),
                           max_size=len(children)))
    return Tree.from_children(children, labels)


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in results.values():
            terminalreporter.write_line(line)
