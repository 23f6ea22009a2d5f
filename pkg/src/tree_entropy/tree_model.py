"""Ordered labeled trees stored as preorder arenas, plus the fcns encoding.

A tree with ``n`` nodes is two arrays: ``parent`` (``-1`` for the root) and
``labels`` (ids into an :class:`Alphabet`).  Node ids are preorder positions,
so the root is node 0 and the first child of ``v`` (if any) is ``v + 1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class _Sentinel:
    """Pad symbol that lies outside every alphabet of ingested labels."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "SENTINEL"

    def __str__(self) -> str:
        return PAD_DISPLAY

    def __reduce__(self):
        return (_Sentinel, ())


SENTINEL = _Sentinel()
PAD_DISPLAY = "□"  # how the sentinel prints in term syntax


@dataclass(frozen=True)
class PadPolicy:
    """How short histories are padded and how fcns labels its fresh leaves.

    ``label=None`` selects the reserved sentinel; otherwise the pad is the
    named alphabet symbol (added to the alphabet if the tree lacks it).
    """

    label: str | None = None

    @classmethod
    def sentinel(cls) -> "PadPolicy":
        return cls(None)

    @classmethod
    def in_alphabet(cls, label: str) -> "PadPolicy":
        if not label:
            raise ValueError("pad label must be a non-empty string")
        return cls(label)

    @classmethod
    def parse(cls, text: str) -> "PadPolicy":
        """``"sentinel"`` or a label name, as accepted on the command line."""
        if text.lower() == "sentinel":
            return cls.sentinel()
        return cls.in_alphabet(text)

    @property
    def is_sentinel(self) -> bool:
        return self.label is None

    @property
    def symbol(self):
        return SENTINEL if self.label is None else self.label

    def __str__(self) -> str:
        return "sentinel" if self.label is None else f"in_alphabet({self.label})"


class Alphabet:
    """Interned symbols; ids are dense and assigned in first-occurrence order."""

    def __init__(self, symbols: Iterable = (), pad: PadPolicy | None = None):
        self.symbols: list = []
        self.index: dict = {}
        self.pad = pad if pad is not None else PadPolicy.sentinel()
        for s in symbols:
            self.intern(s)

    def intern(self, symbol) -> int:
        i = self.index.get(symbol)
        if i is None:
            i = len(self.symbols)
            self.index[symbol] = i
            self.symbols.append(symbol)
        return i

    def __len__(self) -> int:
        return len(self.symbols)

    def __getitem__(self, i: int):
        return self.symbols[i]

    def __contains__(self, symbol) -> bool:
        return symbol in self.index

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __repr__(self) -> str:
        return f"Alphabet({self.symbols!r}, pad={self.pad})"

    @property
    def sigma(self) -> int:
        """Number of real symbols (the sentinel is not a member of the alphabet)."""
        return len(self.symbols) - (SENTINEL in self.index)

    def resolve(self, pad: PadPolicy) -> int:
        """Id of the pad symbol; ``len(self)`` if the alphabet does not hold it yet."""
        return self.index.get(pad.symbol, len(self.symbols))

    def copy(self) -> "Alphabet":
        return Alphabet(self.symbols, self.pad)


class TermSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class Tree:
    """Immutable ordered rooted tree in preorder layout."""

    def __init__(self, parent, labels, alphabet: Alphabet, *, check: bool = True):
        parent = np.asarray(parent, dtype=np.int64)
        labels = np.asarray(labels, dtype=np.int64)
        if parent.ndim != 1 or parent.shape != labels.shape:
            raise ValueError("parent and labels must be 1-d arrays of equal length")
        if len(parent) == 0:
            raise ValueError("a tree has at least one node")
        if check:
            _check_preorder(parent)
            if labels.min() < 0 or labels.max() >= len(alphabet):
                raise ValueError("label id outside the alphabet")
        parent.flags.writeable = False
        labels.flags.writeable = False
        self.parent = parent
        self.labels = labels
        self.alphabet = alphabet

    @classmethod
    def from_children(cls, children: Sequence[Sequence[int]], labels: Sequence,
                      root: int = 0) -> "Tree":
        """Build from adjacency lists in any node numbering; renumbers to preorder.

        ``labels[v]`` are symbols (strings), interned in preorder.
        """
        alphabet = Alphabet()
        parent, lab = [], []
        stack = [(root, -1)]
        while stack:
            v, p = stack.pop()
            parent.append(p)
            lab.append(alphabet.intern(labels[v]))
            me = len(parent) - 1
            for c in reversed(children[v]):
                stack.append((c, me))
        if len(parent) != len(children):
            raise ValueError("children lists do not describe a single tree")
        return cls(parent, lab, alphabet, check=False)

    # -- basic structure -------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.parent)

    def __len__(self) -> int:
        return len(self.parent)

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.bincount(self.parent[1:], minlength=self.size)

    @cached_property
    def depths(self) -> np.ndarray:
        p = self.parent.tolist()
        d = [0] * len(p)
        for v in range(1, len(p)):
            d[v] = d[p[v]] + 1
        return np.asarray(d, dtype=np.int64)

    @cached_property
    def _sibling_order(self) -> np.ndarray:
        # non-root nodes grouped by parent; preorder keeps siblings in order
        return np.argsort(self.parent[1:], kind="stable") + 1

    @cached_property
    def _child_offsets(self) -> np.ndarray:
        return np.concatenate(([0], np.cumsum(self.degrees)))

    @cached_property
    def next_sibling(self) -> np.ndarray:
        order = self._sibling_order
        nxt = np.full(self.size, -1, dtype=np.int64)
        same = self.parent[order[:-1]] == self.parent[order[1:]]
        nxt[order[:-1][same]] = order[1:][same]
        return nxt

    @cached_property
    def prev_sibling(self) -> np.ndarray:
        order = self._sibling_order
        prv = np.full(self.size, -1, dtype=np.int64)
        same = self.parent[order[:-1]] == self.parent[order[1:]]
        prv[order[1:][same]] = order[:-1][same]
        return prv

    def children(self, v: int) -> list[int]:
        off = self._child_offsets
        return self._sibling_order[off[v]:off[v + 1]].tolist()

    def label(self, v: int):
        return self.alphabet.symbols[self.labels[v]]

    def label_texts(self) -> list:
        syms = self.alphabet.symbols
        return [syms[i] for i in self.labels.tolist()]

    def degree_histogram(self) -> dict[int, int]:
        values, counts = np.unique(self.degrees, return_counts=True)
        return dict(zip(values.tolist(), counts.tolist()))

    def is_binary(self) -> bool:
        d = self.degrees
        return bool(np.all((d == 0) | (d == 2)))

    def relabeled(self, mapping) -> "Tree":
        """Copy with every symbol ``s`` replaced by ``mapping(s)``."""
        alphabet = Alphabet(pad=self.alphabet.pad)
        ids = [alphabet.intern(mapping(s)) for s in self.alphabet.symbols]
        return type(self)(self.parent, np.asarray(ids)[self.labels], alphabet, check=False)

    def unlabeled(self, symbol: str = "a") -> "Tree":
        """The underlying shape, every node labeled ``symbol``."""
        return Tree(self.parent, np.zeros(self.size, dtype=np.int64),
                    Alphabet([symbol], PadPolicy.in_alphabet(symbol)), check=False)

    # -- equality and printing -------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tree):
            return NotImplemented
        return (np.array_equal(self.parent, other.parent)
                and self.label_texts() == other.label_texts())

    __hash__ = None

    def __repr__(self) -> str:
        if self.size <= 40:
            return f"{type(self).__name__}({self.to_term()!r})"
        return f"{type(self).__name__}(<{self.size} nodes>)"

    def to_term(self) -> str:
        """Serialize as ``a(b c(d))``; the sentinel prints as ``□``."""
        parent = self.parent.tolist()
        depth = self.depths.tolist()
        deg = self.degrees.tolist()
        syms = [str(s) for s in self.alphabet.symbols]
        lab = self.labels.tolist()
        out = []
        open_ = 0
        for v in range(len(parent)):
            if v:
                out.append(")" * (open_ - depth[v]))
                open_ = depth[v]
                if parent[v] != v - 1:
                    out.append(" ")
            out.append(syms[lab[v]])
            if deg[v]:
                out.append("(")
                open_ += 1
        out.append(")" * open_)
        return "".join(out)


class BinaryTree(Tree):
    """Tree in which every node has degree 0 or 2."""

    def __init__(self, parent, labels, alphabet: Alphabet, *, check: bool = True):
        super().__init__(parent, labels, alphabet, check=check)
        if not self.is_binary():
            raise ValueError("every node of a binary tree must have degree 0 or 2")

    @cached_property
    def directions(self) -> np.ndarray:
        """0 for a left (first) child, 1 for a right child; 0 for the root."""
        d = np.ones(self.size, dtype=np.int64)
        d[0] = 0
        d[1:][self.parent[1:] == np.arange(self.size - 1)] = 0
        return d

    def left(self, v: int) -> int:
        return v + 1 if self.degrees[v] else -1

    def right(self, v: int) -> int:
        return int(self.next_sibling[v + 1]) if self.degrees[v] else -1


def _check_preorder(parent: np.ndarray) -> None:
    if parent[0] != -1:
        raise ValueError("node 0 must be the root")
    if np.any(parent[1:] < 0):
        raise ValueError("only node 0 may lack a parent")
    # parent[v] must lie on the current root path when v is opened
    path = [0]
    for v, p in enumerate(parent[1:].tolist(), start=1):
        while path and path[-1] != p:
            path.pop()
        if not path:
            raise ValueError(f"parent array is not in preorder at node {v}")
        path.append(v)


_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def build_tree(term: str, alphabet: Alphabet | None = None) -> Tree:
    """Parse ``a(b c(d))`` style terms; children are whitespace separated."""
    alphabet = alphabet if alphabet is not None else Alphabet()
    parent: list[int] = []
    labels: list[int] = []
    stack: list[int] = []
    last = None
    for m in _TOKEN.finditer(term):
        tok = m.group()
        if tok == "(":
            if last is None:
                raise TermSyntaxError("'(' must follow a label", m.start())
            stack.append(last)
            last = None
        elif tok == ")":
            if not stack:
                raise TermSyntaxError("unbalanced ')'", m.start())
            stack.pop()
            last = None
        else:
            if parent and not stack:
                raise TermSyntaxError("more than one root", m.start())
            parent.append(stack[-1] if stack else -1)
            labels.append(alphabet.intern(tok))
            last = len(parent) - 1
    if stack:
        raise TermSyntaxError("unclosed '('", len(term))
    if not parent:
        raise TermSyntaxError("empty term", 0)
    return Tree(parent, labels, alphabet, check=False)


def size(t: Tree) -> int:
    return t.size


def degree_histogram(t: Tree) -> dict[int, int]:
    return t.degree_histogram()


def is_binary(t: Tree) -> bool:
    return t.is_binary()


def fcns(t: Tree, pad: PadPolicy | None = None) -> BinaryTree:
    """First-child next-sibling encoding of ``t``.

    The nodes of ``t`` become the inner nodes (in the same relative order);
    ``|t| + 1`` fresh leaves labeled with the pad symbol are added.
    """
    pad = pad if pad is not None else t.alphabet.pad
    alphabet = t.alphabet.copy()
    pad_id = alphabet.intern(pad.symbol)
    alphabet.pad = pad

    parent = t.parent.tolist()
    lab = t.labels.tolist()
    leaf = (t.degrees == 0).tolist()
    nxt = t.next_sibling.tolist()
    prv = t.prev_sibling.tolist()

    out_parent: list[int] = []
    out_label: list[int] = []
    pos = [0] * len(parent)
    for v in range(len(parent)):
        p = parent[v]
        if p < 0:
            bp = -1
        elif prv[v] < 0:
            bp = pos[p]
        else:
            bp = pos[prv[v]]
        pos[v] = len(out_parent)
        out_parent.append(bp)
        out_label.append(lab[v])
        if leaf[v]:
            out_parent.append(pos[v])  # no first child
            out_label.append(pad_id)
            u = v
            while u >= 0 and nxt[u] < 0:  # close every subtree ending at v
                out_parent.append(pos[u])
                out_label.append(pad_id)
                u = parent[u]
    return BinaryTree(out_parent, out_label, alphabet, check=False)


def decode_fcns(b: BinaryTree) -> Tree:
    """Inverse of :func:`fcns`: inner nodes back to an unranked tree."""
    bparent = b.parent.tolist()
    inner = (b.degrees == 2).tolist()
    direction = b.directions.tolist()
    new_id = [-1] * len(bparent)
    parent: list[int] = []
    labels: list[int] = []
    for w in range(len(bparent)):
        if not inner[w]:
            continue
        bp = bparent[w]
        if bp < 0:
            tp = -1
        elif direction[w] == 0:
            tp = new_id[bp]
        else:
            tp = parent[new_id[bp]]
        new_id[w] = len(parent)
        parent.append(tp)
        labels.append(int(b.labels[w]))
    if not parent:
        raise ValueError("a single leaf does not encode a tree")
    alphabet = b.alphabet.copy()
    return Tree(parent, labels, alphabet, check=False)
