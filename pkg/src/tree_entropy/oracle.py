"""Brute-force reference computations for differential testing.

Nothing here reuses the counting or encoding code of the fast path: every
node's history is rebuilt by walking its root path, fcns is rebuilt from its
inductive definition, and the entropies are summed straight from
``collections.Counter`` tables.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .entropy import EntropyReport
from .tree_model import PadPolicy, Tree

ORACLE_SIZE_CAP = 10_000


class OracleCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class OracleReport(EntropyReport):
    """Same fields as :class:`EntropyReport`, computed the slow way."""


@dataclass
class _Node:
    label: object
    parent: int
    direction: int  # 0 left / first child, 1 right
    children: list


def _nodes_of(t: Tree) -> list[_Node]:
    labels = t.label_texts()
    nodes = [_Node(labels[v], int(t.parent[v]), 0, []) for v in range(t.size)]
    for v in range(1, t.size):
        nodes[nodes[v].parent].children.append(v)
    for node in nodes:
        for pos, c in enumerate(node.children):
            nodes[c].direction = 0 if pos == 0 else 1
    return nodes


def _naive_fcns(nodes: list[_Node], pad) -> list[_Node]:
    """fcns(s) = pad for the empty forest, else a(fcns(children), fcns(rest))."""
    out: list[_Node] = []
    # work items: (original forest as (parent-or-None, start index), binary parent, dir)
    roots = [0]
    stack = [(roots, 0, -1, 0)]
    while stack:
        forest, start, bparent, direction = stack.pop()
        me = len(out)
        if start >= len(forest):
            out.append(_Node(pad, bparent, direction, []))
        else:
            first = forest[start]
            out.append(_Node(nodes[first].label, bparent, direction, []))
            stack.append((forest, start + 1, me, 1))
            stack.append((nodes[first].children, 0, me, 0))
        if bparent >= 0:
            out[bparent].children.append(me)
    return out


def _path_to_root(nodes: list[_Node], v: int) -> list[int]:
    path = []
    while v >= 0:
        path.append(v)
        v = nodes[v].parent
    return path[::-1]


def naive_label_histories(t: Tree, k: int, pad: PadPolicy) -> list[tuple]:
    nodes = _nodes_of(t)
    out = []
    for v in range(len(nodes)):
        path = _path_to_root(nodes, v)
        word = [pad.symbol] * k + [nodes[u].label for u in path[:-1]]
        out.append(tuple(word[len(word) - k:]))
    return out


def naive_full_histories(nodes: list[_Node], k: int, pad: PadPolicy) -> list[tuple]:
    out = []
    for v in range(len(nodes)):
        path = _path_to_root(nodes, v)
        word = [(pad.symbol, 0)] * k
        for u, w in zip(path, path[1:]):
            word.append((nodes[u].label, nodes[w].direction))
        out.append(tuple(word[len(word) - k:]))
    return out


def naive_label_tables(t: Tree, k: int, pad: PadPolicy) -> dict[str, Counter]:
    hist = naive_label_histories(t, k, pad)
    nodes = _nodes_of(t)
    tables = {name: Counter() for name in ("n_z", "n_za", "n_i", "n_zi", "n_zia")}
    for v, node in enumerate(nodes):
        z, a, i = hist[v], node.label, len(node.children)
        tables["n_z"][z] += 1
        tables["n_za"][(z, a)] += 1
        tables["n_i"][i] += 1
        tables["n_zi"][(z, i)] += 1
        tables["n_zia"][(z, i, a)] += 1
    return tables


def naive_full_tables_of_nodes(nodes: list[_Node], k: int, pad: PadPolicy) -> dict[str, Counter]:
    hist = naive_full_histories(nodes, k, pad)
    tables = {"m_z": Counter(), "m_za": Counter()}
    for v, node in enumerate(nodes):
        tables["m_z"][hist[v]] += 1
        tables["m_za"][(hist[v], node.label, len(node.children))] += 1
    return tables


def naive_full_tables(b: Tree, k: int, pad: PadPolicy) -> dict[str, Counter]:
    """k-history tables of ``b`` read as a binary tree."""
    return naive_full_tables_of_nodes(_nodes_of(b), k, pad)


def naive_fcns_term(t: Tree, pad: PadPolicy) -> str:
    nodes = _naive_fcns(_nodes_of(t), pad.symbol)

    def term(v):
        label = str(nodes[v].label)
        if not nodes[v].children:
            return label
        return label + "(" + " ".join(term(c) for c in nodes[v].children) + ")"

    return term(0)


def _h(joint: Counter, marginal_of) -> float:
    total = 0.0
    for key, c in joint.items():
        total += c * math.log2(marginal_of(key) / c)
    return total


def naive_report(t: Tree, k: int, pad: PadPolicy | None = None, *,
                 size_cap: int = ORACLE_SIZE_CAP) -> OracleReport:
    if t.size > size_cap:
        raise OracleCapExceeded(f"tree has {t.size} nodes; the oracle is capped at {size_cap}")
    pad = pad if pad is not None else t.alphabet.pad
    lt = naive_label_tables(t, k, pad)
    n = t.size
    h_deg = _h(lt["n_i"], lambda i: n)
    h_label = _h(lt["n_za"], lambda za: lt["n_z"][za[0]])
    za = Counter()
    for (z, i, a), c in lt["n_zia"].items():
        za[(z, a)] += c
    h_labeldeg = _h(lt["n_zia"], lambda zia: za[(zia[0], zia[2])])
    h_deglabel = _h(lt["n_zia"], lambda zia: lt["n_zi"][(zia[0], zia[1])])
    ft = naive_full_tables_of_nodes(_naive_fcns(_nodes_of(t), pad.symbol), k, pad)
    h_shape = _h(ft["m_za"], lambda key: ft["m_z"][key[0]])
    return OracleReport(k, n, h_shape, h_deg, h_label, h_labeldeg, h_deglabel)


def naive_shape_entropy_binary(b: Tree, k: int, pad: PadPolicy | None = None) -> float:
    pad = pad if pad is not None else b.alphabet.pad
    ft = naive_full_tables(b, k, pad)
    return _h(ft["m_za"], lambda key: ft["m_z"][key[0]])


def log_sum_check(a, b, tol: float = 1e-9) -> bool:
    """Whether a*log2(b_sum/a_sum) >= sum a_i*log2(b_i/a_i) - tol.

    Terms with a_i = 0 vanish; a_i > 0 with b_i = 0 sends the right side to
    minus infinity, so the inequality holds trivially.
    """
    a, b = list(a), list(b)
    if len(a) != len(b):
        raise ValueError("a and b must have equal length")
    if any(x < 0 for x in a) or any(x < 0 for x in b):
        raise ValueError("entries must be non-negative")
    rhs = 0.0
    for ai, bi in zip(a, b):
        if ai == 0:
            continue
        if bi == 0:
            return True
        rhs += ai * math.log2(bi / ai)
    a_sum, b_sum = sum(a), sum(b)
    lhs = 0.0 if a_sum == 0 else a_sum * math.log2(b_sum / a_sum)
    return lhs >= rhs - tol
