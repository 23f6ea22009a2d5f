"""The five empirical tree entropies and the composite bounds built from them.

All values are unnormalized bit counts.  Every sum runs over occurring
count combinations only, which implements ``0 log 0 = 0``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Iterable

import numpy as np

from .histories import (HistoryCounts, _rank, full_history_counts, iter_full_counts,
                        iter_label_counts, label_history_counts)
from .tree_model import Alphabet, BinaryTree, PadPolicy, Tree, fcns

MEASURES = ("H_shape", "H_deg", "H_label", "H_labeldeg", "H_deglabel",
            "H_deg_plus_label", "H_label_plus_labeldeg", "H_deg_plus_deglabel")


def _conditional(counts: np.ndarray, *group: np.ndarray) -> float:
    """sum of c * log2(N_g / c) where N_g totals the counts sharing ``group``."""
    counts = counts.astype(np.float64)
    if not group:
        totals = np.full(len(counts), counts.sum())
    else:
        g = np.zeros(len(counts), dtype=np.int64)
        for col in group:
            g = _rank(g * (int(col.max()) + 1) + col)
        totals = np.bincount(g, weights=counts)[g]
    return math.fsum((counts * np.log2(totals / counts)).tolist())


def entropies_from_label_counts(c: HistoryCounts) -> tuple[float, float, float, float]:
    """(H^deg, H^l_k, H^{l,deg}_k, H^{deg,l}_k) from unranked-mode tables."""
    n_i, n_za, n_zia = c["n_i"], c["n_za"], c["n_zia"]
    z, a = n_za.keys
    zz, ii, aa = n_zia.keys
    return (
        _conditional(n_i.counts),
        _conditional(n_za.counts, z),
        _conditional(n_zia.counts, zz, aa),
        _conditional(n_zia.counts, zz, ii),
    )


def shape_entropy_from_counts(c: HistoryCounts) -> float:
    m_za = c["m_za"]
    return _conditional(m_za.counts, m_za.keys[0])


def _default_pad(t: Tree, pad: PadPolicy | None) -> PadPolicy:
    return pad if pad is not None else t.alphabet.pad


def degree_entropy(t: Tree) -> float:
    _, counts = np.unique(t.degrees, return_counts=True)
    return _conditional(counts)


def label_entropy(t: Tree, k: int, pad: PadPolicy | None = None) -> float:
    return entropies_from_label_counts(label_history_counts(t, k, _default_pad(t, pad)))[1]


def label_degree_entropy(t: Tree, k: int, pad: PadPolicy | None = None) -> float:
    return entropies_from_label_counts(label_history_counts(t, k, _default_pad(t, pad)))[2]


def degree_label_entropy(t: Tree, k: int, pad: PadPolicy | None = None) -> float:
    return entropies_from_label_counts(label_history_counts(t, k, _default_pad(t, pad)))[3]


def shape_entropy_binary(b: BinaryTree, k: int, pad: PadPolicy | None = None) -> float:
    return shape_entropy_from_counts(full_history_counts(b, k, _default_pad(b, pad)))


def shape_entropy_unranked(t: Tree, k: int, pad: PadPolicy | None = None) -> float:
    pad = _default_pad(t, pad)
    return shape_entropy_binary(fcns(t, pad), k, pad)


@dataclass(frozen=True)
class EntropyReport:
    k: int
    size: int
    h_shape: float
    h_deg: float
    h_label: float
    h_labeldeg: float
    h_deglabel: float
    h_shape_unlabeled: float | None = None

    @property
    def h_deg_plus_label(self) -> float:
        return self.h_deg + self.h_label

    @property
    def h_label_plus_labeldeg(self) -> float:
        return self.h_label + self.h_labeldeg

    @property
    def h_deg_plus_deglabel(self) -> float:
        return self.h_deg + self.h_deglabel

    def measures(self) -> dict[str, float]:
        """The eight entropy columns keyed by their output names."""
        out = {
            "H_shape": self.h_shape,
            "H_deg": self.h_deg,
            "H_label": self.h_label,
            "H_labeldeg": self.h_labeldeg,
            "H_deglabel": self.h_deglabel,
            "H_deg_plus_label": self.h_deg_plus_label,
            "H_label_plus_labeldeg": self.h_label_plus_labeldeg,
            "H_deg_plus_deglabel": self.h_deg_plus_deglabel,
        }
        if self.h_shape_unlabeled is not None:
            out["H_shape_unlabeled"] = self.h_shape_unlabeled
        return out

    def normalized(self) -> dict[str, float]:
        return {f"{name}_per_n": v / self.size for name, v in self.measures().items()}

    def fields(self) -> dict:
        return asdict(self)


def reports(t: Tree, ks: Iterable[int], pad: PadPolicy | None = None, *,
            unlabeled_shape: bool = False) -> list[EntropyReport]:
    """Reports for several orders, sharing the fcns encoding and history passes."""
    ks = list(ks)
    if not ks or min(ks) < 0:
        raise ValueError("k values must be non-negative and at least one is required")
    pad = _default_pad(t, pad)
    h_deg = degree_entropy(t)
    label_part = {c.k: entropies_from_label_counts(c) for c in iter_label_counts(t, ks, pad)}
    b = fcns(t, pad)
    shape = {c.k: shape_entropy_from_counts(c) for c in iter_full_counts(b, ks, pad)}
    bare = {}
    if unlabeled_shape:
        # every symbol, the pad included, collapses to one label
        ub = BinaryTree(b.parent, np.zeros(b.size, dtype=np.int64),
                        Alphabet(["a"], PadPolicy.in_alphabet("a")), check=False)
        bare = {c.k: shape_entropy_from_counts(c)
                for c in iter_full_counts(ub, ks, PadPolicy.in_alphabet("a"))}
    out = []
    for k in ks:
        _, h_label, h_labeldeg, h_deglabel = label_part[k]
        out.append(EntropyReport(k, t.size, shape[k], h_deg, h_label, h_labeldeg,
                                 h_deglabel, bare.get(k)))
    return out


def report(t: Tree, k: int, pad: PadPolicy | None = None, *,
           unlabeled_shape: bool = False) -> EntropyReport:
    return reports(t, [k], pad, unlabeled_shape=unlabeled_shape)[0]
