"""k-label-histories, k-histories and the counting tables built from them.

Histories are never materialized as strings.  Each node gets a dense class
id such that two nodes share an id iff their histories are equal.  The ids
for order ``j`` are derived from the order ``j - 1`` ids of the parent plus
the symbol on the parent edge, one vectorized pass per order.  The root's
parent is a virtual node that is its own parent and carries the pad symbol,
which yields the ``pad^k`` prefix for shallow nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

import numpy as np

from .tree_model import BinaryTree, PadPolicy, Tree


def _rank(keys: np.ndarray) -> np.ndarray:
    return np.unique(keys, return_inverse=True)[1].reshape(-1)


def iter_history_classes(parent: np.ndarray, edge_symbol: np.ndarray,
                         pad_symbol: int, k_max: int) -> Iterator[np.ndarray]:
    """Yield per-node history class ids for orders ``0..k_max``.

    ``edge_symbol[v]`` is the symbol appended when descending into ``v``
    (ignored for the root, which always receives ``pad_symbol``).
    """
    n = len(parent)
    ext_parent = np.empty(n + 1, dtype=np.int64)
    ext_parent[:n] = parent
    ext_parent[0] = n
    ext_parent[n] = n
    ext_symbol = np.empty(n + 1, dtype=np.int64)
    ext_symbol[:n] = edge_symbol
    ext_symbol[0] = pad_symbol
    ext_symbol[n] = pad_symbol
    radix = int(ext_symbol.max()) + 1
    ids = np.zeros(n + 1, dtype=np.int64)
    yield ids[:n]
    for _ in range(k_max):
        ids = _rank(ids[ext_parent] * radix + ext_symbol)
        yield ids[:n]


def _label_edges(t: Tree) -> np.ndarray:
    sym = np.empty(t.size, dtype=np.int64)
    sym[1:] = t.labels[t.parent[1:]]
    sym[0] = 0
    return sym


def _full_edges(b: BinaryTree) -> np.ndarray:
    sym = np.empty(b.size, dtype=np.int64)
    sym[1:] = 2 * b.labels[b.parent[1:]] + b.directions[1:]
    sym[0] = 0
    return sym


def label_history_classes(t: Tree, k_max: int, pad: PadPolicy) -> Iterator[np.ndarray]:
    return iter_history_classes(t.parent, _label_edges(t), t.alphabet.resolve(pad), k_max)


def full_history_classes(b: BinaryTree, k_max: int, pad: PadPolicy) -> Iterator[np.ndarray]:
    return iter_history_classes(b.parent, _full_edges(b), 2 * b.alphabet.resolve(pad), k_max)


@dataclass(frozen=True)
class CountTable:
    """Sparse table: one row of key columns per occurring combination."""

    keys: tuple[np.ndarray, ...]
    counts: np.ndarray

    @classmethod
    def of(cls, *columns: np.ndarray) -> "CountTable":
        combined = np.zeros(len(columns[0]), dtype=np.int64)
        for col in columns:
            combined = _rank(combined * (int(col.max()) + 1) + col)
        _, first, counts = np.unique(combined, return_index=True, return_counts=True)
        return cls(tuple(col[first] for col in columns), counts)

    def __len__(self) -> int:
        return len(self.counts)

    def total(self) -> int:
        return int(self.counts.sum())


@dataclass
class HistoryCounts:
    """Counting tables for one tree and one order ``k``.

    Unranked mode (``mode == "label"``) fills ``n_z``, ``n_za``, ``n_i``,
    ``n_zi`` and ``n_zia``; binary mode (``mode == "full"``) fills ``m_z`` and
    ``m_za`` (keyed by history, label, degree).
    """

    k: int
    mode: str
    tree: Tree
    pad: PadPolicy
    history: np.ndarray
    tables: dict[str, CountTable] = field(default_factory=dict)

    def __getitem__(self, name: str) -> CountTable:
        return self.tables[name]

    @cached_property
    def representatives(self) -> np.ndarray:
        return np.unique(self.history, return_index=True)[1]

    def decode(self, z: int) -> tuple:
        """Explicit history of class ``z`` as a tuple of symbols.

        Label mode gives ``k`` labels; full mode gives ``k`` (label, direction)
        pairs, oldest first.
        """
        v = int(self.representatives[z])
        t = self.tree
        pad = self.pad.symbol
        out = []
        for _ in range(self.k):
            p = int(t.parent[v]) if v >= 0 else -1
            sym = t.label(p) if p >= 0 else pad
            if self.mode == "label":
                out.append(sym)
            else:
                out.append((sym, int(t.directions[v]) if v >= 0 else 0))
            v = p
        return tuple(reversed(out))

    def as_dicts(self) -> dict[str, dict]:
        """Tables keyed by decoded histories, labels and degrees."""
        names = self.tree.alphabet.symbols
        hist = {z: self.decode(z) for z in range(int(self.history.max()) + 1)}
        out = {}
        for name, table in self.tables.items():
            rows = {}
            for row, c in zip(zip(*(col.tolist() for col in table.keys)), table.counts.tolist()):
                rows[_decode_key(name, row, hist, names)] = c
            out[name] = rows
        return out


def _decode_key(name: str, row: tuple, hist: dict, names: list):
    parts = []
    for col, value in zip(_COLUMNS[name], row):
        if col == "z":
            parts.append(hist[value])
        elif col == "a":
            parts.append(names[value])
        else:
            parts.append(value)
    return tuple(parts) if len(parts) > 1 else parts[0]


_COLUMNS = {
    "n_z": ("z",), "n_za": ("z", "a"), "n_i": ("i",), "n_zi": ("z", "i"),
    "n_zia": ("z", "i", "a"), "m_z": ("z",), "m_za": ("z", "a", "i"),
}


def _label_tables(t: Tree, z: np.ndarray) -> dict[str, CountTable]:
    a, i = t.labels, t.degrees
    return {
        "n_z": CountTable.of(z),
        "n_za": CountTable.of(z, a),
        "n_i": CountTable.of(i),
        "n_zi": CountTable.of(z, i),
        "n_zia": CountTable.of(z, i, a),
    }


def _full_tables(b: BinaryTree, z: np.ndarray) -> dict[str, CountTable]:
    return {"m_z": CountTable.of(z), "m_za": CountTable.of(z, b.labels, b.degrees)}


def label_history_counts(t: Tree, k: int, pad: PadPolicy | None = None) -> HistoryCounts:
    """Tables n_z, n_{z,a}, n_i, n_{z,i}, n_{z,i,a} over k-label-histories."""
    if k < 0:
        raise ValueError("k must be non-negative")
    pad = pad if pad is not None else t.alphabet.pad
    *_, z = label_history_classes(t, k, pad)
    return HistoryCounts(k, "label", t, pad, z, _label_tables(t, z))


def full_history_counts(b: BinaryTree, k: int, pad: PadPolicy | None = None) -> HistoryCounts:
    """Tables m_z and m_{z,ã} over k-histories of a binary tree."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if not isinstance(b, BinaryTree):
        b = BinaryTree(b.parent, b.labels, b.alphabet, check=False)
    pad = pad if pad is not None else b.alphabet.pad
    *_, z = full_history_classes(b, k, pad)
    return HistoryCounts(k, "full", b, pad, z, _full_tables(b, z))


def iter_label_counts(t: Tree, ks, pad: PadPolicy) -> Iterator[HistoryCounts]:
    """Counts for several orders sharing one incremental pass (ascending ``ks``)."""
    wanted = sorted(set(ks))
    for j, z in enumerate(label_history_classes(t, wanted[-1], pad)):
        if j in wanted:
            yield HistoryCounts(j, "label", t, pad, z, _label_tables(t, z))


def iter_full_counts(b: BinaryTree, ks, pad: PadPolicy) -> Iterator[HistoryCounts]:
    wanted = sorted(set(ks))
    for j, z in enumerate(full_history_classes(b, wanted[-1], pad)):
        if j in wanted:
            yield HistoryCounts(j, "full", b, pad, z, _full_tables(b, z))
