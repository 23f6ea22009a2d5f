"""Machine checks of the inequalities relating the tree entropies.

Each check compares ``lhs <= rhs`` with slack ``ABS_TOL + REL_TOL * scale``;
the inequalities are exact in real arithmetic, so the slack only absorbs
floating point rounding.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .entropy import EntropyReport, report, reports, shape_entropy_binary
from .families import (FAMILY_PAD, ClosedForm, FamilySpec, RandomTreeParams, closed_forms,
                       random_tree)
from .tree_model import BinaryTree, PadPolicy, Tree, fcns

ABS_TOL = 1e-6
REL_TOL = 1e-9


@dataclass(frozen=True)
class Check:
    name: str
    lhs: float
    rhs: float

    @property
    def ok(self) -> bool:
        scale = max(1.0, abs(self.lhs), abs(self.rhs))
        return self.lhs <= self.rhs + ABS_TOL + REL_TOL * scale


def general_checks(r: EntropyReport) -> list[Check]:
    """Inequalities valid for every unranked labeled tree."""
    return [
        Check("nonnegative", -min(r.h_shape, r.h_deg, r.h_label, r.h_labeldeg, r.h_deglabel), 0.0),
        Check("labeldeg_le_deg", r.h_labeldeg, r.h_deg),
        Check("deglabel_le_label", r.h_deglabel, r.h_label),
        Check("label_pair_le_degree_pair", r.h_label_plus_labeldeg, r.h_deg_plus_deglabel),
        Check("degree_pair_le_deg_plus_label", r.h_deg_plus_deglabel, r.h_deg_plus_label),
        Check("deg_plus_label_le_double_deg", r.h_deg_plus_label, 2 * r.h_deg + r.h_deglabel),
    ]


def binary_checks(b: BinaryTree, k: int, pad: PadPolicy) -> list[Check]:
    """Label-shape entropy of a binary tree against the label/degree sums."""
    r = report(b, k, pad)
    h = shape_entropy_binary(b, k, pad)
    return [
        Check("binary_shape_le_label_plus_labeldeg", h, r.h_label_plus_labeldeg),
        Check("binary_shape_le_deg_plus_deglabel", h, r.h_deg_plus_deglabel),
    ]


def fcns_shape_check(b: BinaryTree, k: int, pad: PadPolicy) -> Check:
    """H_{2k}(fcns(b)) <= H_{k-1}(b) for k >= 1."""
    return Check("fcns_shape_le_binary_shape",
                 shape_entropy_binary(fcns(b, pad), 2 * k, pad),
                 shape_entropy_binary(b, k - 1, pad))


def unlabeled_bound_check(t: Tree, k: int) -> Check:
    """Unlabeled unranked trees, |t| >= 2, k >= 1."""
    r = report(t, k, PadPolicy.in_alphabet(t.alphabet.symbols[0]))
    return Check("unlabeled_shape_bound", r.h_shape, 2 * r.h_deg + 2 * math.log2(t.size) + 4)


def measure_closed_form(t: Tree, cf: ClosedForm, cache: dict | None = None) -> float:
    """The measured counterpart of a closed form, on the family pad."""
    if cf.quantity == "size":
        return float(t.size)
    order = cf.k if cf.k is not None else 0
    if cf.quantity == "H_shape" and isinstance(t, BinaryTree):
        return shape_entropy_binary(t, order, FAMILY_PAD)
    cache = {} if cache is None else cache
    if order not in cache:
        cache[order] = report(t, order, FAMILY_PAD)
    return cache[order].measures()[cf.quantity]


def family_checks(spec: FamilySpec, k: int | None) -> tuple[Tree, list[Check]]:
    """The family tree and its closed forms as checks (equalities two-sided)."""
    t = spec.build()
    out = []
    cache: dict[int, EntropyReport] = {}
    for cf in closed_forms(spec, k):
        measured = measure_closed_form(t, cf, cache)
        name = f"{spec.name}:{cf.quantity}:{cf.kind}"
        if cf.kind != "lower_bound":
            out.append(Check(name, measured, cf.value))
        if cf.kind != "upper_bound":
            out.append(Check(name, cf.value, measured))
    return t, out


@dataclass
class SuiteResult:
    passed: Counter = field(default_factory=Counter)
    failed: Counter = field(default_factory=Counter)
    counterexamples: dict = field(default_factory=dict)

    def record(self, check: Check, tree: Tree, context: str) -> None:
        if check.ok:
            self.passed[check.name] += 1
        else:
            self.failed[check.name] += 1
            self.counterexamples.setdefault(
                check.name, (tree.to_term(), context, check.lhs, check.rhs))

    @property
    def ok(self) -> bool:
        return not self.failed

    def names(self) -> list[str]:
        return sorted(set(self.passed) | set(self.failed))


def _trial_seed(seed: int, i: int) -> int:
    return seed * 1_000_003 + i


def suite_trees(trials: int, max_size: int, sigma: int, seed: int, *, labeled: bool = True,
                binary: bool = True, unlabeled: bool = True):
    """Yield ``(kind, tree)`` for the random trials; ``kind`` is labeled/binary/unlabeled.

    Trial ``i`` uses alphabet size ``1 + i % sigma``.
    """
    for i in range(trials):
        s = 1 + i % sigma
        if labeled:
            yield "labeled", random_tree(RandomTreeParams(_trial_seed(seed, i), max_size, s))
        if binary:
            yield "binary", random_tree(
                RandomTreeParams(_trial_seed(seed, i) + 7, max_size, s, binary=True))
        if unlabeled:
            yield "unlabeled", random_tree(
                RandomTreeParams(_trial_seed(seed, i) + 13, max_size, 1))


def run_random_suites(trials: int, max_size: int, sigma: int, k_max: int, seed: int, *,
                      labeled: bool = True, binary: bool = True, unlabeled: bool = True,
                      pads: tuple[PadPolicy, ...] = (PadPolicy.sentinel(), FAMILY_PAD),
                      fcns_pads: tuple[PadPolicy, ...] = (PadPolicy.sentinel(),),
                      result: SuiteResult | None = None) -> SuiteResult:
    """Every applicable inequality on seeded random trees.

    The fcns inequality is checked for ``1 <= k`` with ``2k <= max(k_max, 2)``
    and only under ``fcns_pads``: with an in-alphabet pad the padded
    histories of shallow pad leaves can coincide with real paths (already
    ``a`` alone gives ``H_2(a(a a)) = 2 > H_0(a) = 0``), so the inequality is
    only claimed for a reserved sentinel.
    """
    res = result if result is not None else SuiteResult()
    ks = list(range(k_max + 1))
    fcns_ks = range(1, max(1, k_max // 2) + 1)
    for kind, t in suite_trees(trials, max_size, sigma, seed, labeled=labeled,
                               binary=binary, unlabeled=unlabeled):
        if kind == "labeled":
            for pad in pads:
                for r in reports(t, ks, pad):
                    for c in general_checks(r):
                        res.record(c, t, f"labeled k={r.k} pad={pad}")
        elif kind == "binary":
            for pad in pads:
                for k in ks:
                    for c in binary_checks(t, k, pad):
                        res.record(c, t, f"binary k={k} pad={pad}")
                if pad not in fcns_pads:
                    continue
                for k in fcns_ks:
                    res.record(fcns_shape_check(t, k, pad), t, f"binary k={k} pad={pad}")
        elif t.size >= 2:
            for k in range(1, k_max + 1):
                res.record(unlabeled_bound_check(t, k), t, f"unlabeled k={k}")
    return res


def family_grid(*, comb_n: int = 50, two_branch_n: int = 50, left_chain_n: int = 200,
                k_max: int = 10, perm_n: int = 6, perm_k: int = 3) -> list[tuple[FamilySpec, int | None]]:
    """(family, order) pairs; orders outside a closed form's valid range are left out."""
    grid = []
    for n in range(1, comb_n + 1):
        grid += [(FamilySpec("comb", n), k) for k in range(1, min(k_max, 2 * n) + 1)]
    for n in range(1, two_branch_n + 1):
        grid += [(FamilySpec("two_branch", n), k) for k in range(1, min(k_max, n) + 1)]
    for n in range(2, left_chain_n + 1):
        grid += [(FamilySpec("left_chain", n), k) for k in sorted({1, min(n, k_max), n})]
    for n in range(1, perm_n + 1):
        grid += [(FamilySpec("permutation", n, k), None) for k in range(1, min(n, perm_k) + 1)]
    return grid


def run_family_suites(result: SuiteResult | None = None, **grid_options) -> SuiteResult:
    """Closed forms of every family over :func:`family_grid`."""
    res = result if result is not None else SuiteResult()
    for spec, k in family_grid(**grid_options):
        tree, checks = family_checks(spec, k)
        for c in checks:
            res.record(c, tree, f"{spec} k={k}")
    return res
