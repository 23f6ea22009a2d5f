"""Separation families, their exact entropy expressions, and random trees."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .tree_model import Alphabet, BinaryTree, PadPolicy, Tree

FAMILY_PAD = PadPolicy.in_alphabet("a")
MAX_FAMILY_SIZE = 20_000_000
FAMILIES = ("left_chain", "comb", "two_branch", "permutation")


class FamilyRangeError(ValueError):
    pass


class _Builder:
    """Appends nodes in preorder."""

    def __init__(self):
        self.alphabet = Alphabet(pad=FAMILY_PAD)
        self.parent: list[int] = []
        self.labels: list[int] = []

    def add(self, label: str, parent: int) -> int:
        self.parent.append(parent)
        self.labels.append(self.alphabet.intern(label))
        return len(self.parent) - 1

    def build(self, cls=Tree) -> Tree:
        return cls(self.parent, self.labels, self.alphabet, check=False)


def left_chain(n: int) -> BinaryTree:
    """t_1 = a, t_n = a(t_{n-1}, a): left-degenerate, n leaves."""
    if n < 1:
        raise FamilyRangeError("left_chain needs n >= 1")
    parent = list(range(-1, n - 1)) + list(range(n - 2, -1, -1))
    alphabet = Alphabet(["a"], FAMILY_PAD)
    return BinaryTree(parent, [0] * len(parent), alphabet, check=False)


def comb(n: int) -> Tree:
    """a((b c)^n): a root with 2n leaf children labeled b, c, b, c, ..."""
    if n < 1:
        raise FamilyRangeError("comb needs n >= 1")
    b = _Builder()
    root = b.add("a", -1)
    for _ in range(n):
        b.add("b", root)
        b.add("c", root)
    return b.build()


def two_branch(n: int) -> Tree:
    """a(b(d^n) c(d(e)^n))."""
    if n < 1:
        raise FamilyRangeError("two_branch needs n >= 1")
    b = _Builder()
    root = b.add("a", -1)
    left = b.add("b", root)
    for _ in range(n):
        b.add("d", left)
    right = b.add("c", root)
    for _ in range(n):
        b.add("e", b.add("d", right))
    return b.build()


def falling_factorial(n: int, k: int) -> int:
    return math.perm(n, k)


def permutation_size(n: int, k: int) -> int:
    m = falling_factorial(n, k)
    return 1 + m + k * n * m


def permutation_family(n: int, k: int) -> Tree:
    """a(t_u1 ... t_um) with t_u = b_u((c_i1 ... c_ik)^n) over all k-tuples u of
    distinct indices from 1..n, in lexicographic order.

    Labels are ``b_i1_..._ik`` and ``c_i`` so they stay valid XML names.
    """
    if not 1 <= k <= n:
        raise FamilyRangeError("permutation family needs 1 <= k <= n")
    size = permutation_size(n, k)
    if size > MAX_FAMILY_SIZE:
        raise FamilyRangeError(
            f"permutation family ({n}, {k}) has {size} nodes, above the limit {MAX_FAMILY_SIZE}")
    b = _Builder()
    root = b.add("a", -1)
    for u in itertools.permutations(range(1, n + 1), k):
        bu = b.add("b_" + "_".join(map(str, u)), root)
        word = [f"c_{i}" for i in u]
        for _ in range(n):
            for label in word:
                b.add(label, bu)
    return b.build()


@dataclass(frozen=True)
class FamilySpec:
    name: str
    n: int
    k: int | None = None  # tuple length, permutation family only

    def __post_init__(self):
        if self.name not in FAMILIES:
            raise FamilyRangeError(f"unknown family {self.name!r}; expected one of {FAMILIES}")
        if self.n < 1:
            raise FamilyRangeError("n must be >= 1")
        if self.name == "permutation" and (self.k is None or not 1 <= self.k <= self.n):
            raise FamilyRangeError("permutation family needs 1 <= k <= n")

    def build(self) -> Tree:
        if self.name == "left_chain":
            return left_chain(self.n)
        if self.name == "comb":
            return comb(self.n)
        if self.name == "two_branch":
            return two_branch(self.n)
        return permutation_family(self.n, self.k)


EQUALITY, LOWER, UPPER = "equality", "lower_bound", "upper_bound"


@dataclass(frozen=True)
class ClosedForm:
    family: str
    quantity: str  # an EntropyReport measure name, or "size"
    k: int | None
    value: float
    kind: str

    def holds(self, measured: float, rel: float = 1e-9, abs_: float = 1e-9) -> bool:
        slack = abs_ + rel * max(1.0, abs(self.value))
        if self.kind == EQUALITY:
            return abs(measured - self.value) <= slack
        if self.kind == LOWER:
            return measured >= self.value - slack
        return measured <= self.value + slack

    def status(self, measured: float) -> str:
        ok = self.holds(measured)
        word = {EQUALITY: ("match", "MISMATCH"),
                LOWER: ("holds", "VIOLATED"),
                UPPER: ("holds", "VIOLATED")}[self.kind][0 if ok else 1]
        return f"{self.kind.split('_')[0]}: {word}"


def _xlog(count: float, total: float) -> float:
    return count * math.log2(total / count) if count else 0.0


def _check_k(k, lo, hi, what):
    if k is None or not lo <= k <= hi:
        raise FamilyRangeError(f"{what} requires {lo} <= k <= {hi}, got k={k}")


def closed_forms(spec: FamilySpec, k: int | None = None) -> list[ClosedForm]:
    """Exact values and bounds proved for the family, for comparison with reports.

    For the permutation family the entropy orders are fixed by the
    construction (``H_{k-1}`` and ``H^l_1``) and ``k`` is ignored.
    """
    n, name = spec.n, spec.name
    out: list[ClosedForm] = []

    def add(quantity, order, value, kind=EQUALITY):
        out.append(ClosedForm(name, quantity, order, float(value), kind))

    if name == "left_chain":
        _check_k(k, 1, n, "left_chain")
        add("size", None, 2 * n - 1)
        shape = 0.0 if n == 1 else math.log2(n) + (n - 1) * math.log2(n / (n - 1))
        add("H_shape", k, shape)
        add("H_shape", k, math.log2(math.e * n), UPPER)
        h_deg = _xlog(n, 2 * n - 1) + _xlog(n - 1, 2 * n - 1)
        add("H_deg", None, h_deg)
        add("H_labeldeg", k, h_deg)
        add("H_label", k, 0.0)
        add("H_deglabel", k, 0.0)
    elif name == "comb":
        _check_k(k, 1, 2 * n, "comb")
        add("size", None, 2 * n + 1)
        m = n - (k - 1) // 2
        add("H_shape", k, _xlog(m - 1, m) + math.log2(m) + 2)
        add("H_shape", k, math.log2(math.e) + math.log2(m) + 2, UPPER)
        add("H_deglabel", k, 2 * n)
        add("H_deg_plus_deglabel", k, 2 * n, LOWER)
        add("H_label", k, 2 * n, LOWER)
        add("H_label_plus_labeldeg", k, 2 * n, LOWER)
    elif name == "two_branch":
        _check_k(k, 1, n, "two_branch")
        add("size", None, 3 * n + 3)
        add("H_shape", k, 2 * (n - k + 1), LOWER)
        add("H_deg_plus_deglabel", k, 2 * n, LOWER)
        add("H_label", k, 3 * math.log2(3))
        add("H_labeldeg", k, 0.0)
        add("H_label_plus_labeldeg", k, 3 * math.log2(3))
        if n >= 3:  # for n <= 2 some of the four degree classes coincide
            s = 3 * n + 3
            add("H_deg", None, math.log2(s) + _xlog(2, s) + _xlog(n, s) + _xlog(2 * n, s))
    else:
        kk = spec.k
        m = falling_factorial(n, kk)
        size = permutation_size(n, kk)
        add("size", None, size)
        lower = m * ((n + (n - 1) * (kk - 1)) * math.log2(n - kk + 1)
                     + math.log2(n + 1 + (n - 1) * (kk - 1)))
        add("H_shape", kk - 1, lower, LOWER)
        add("H_label", 1, (1 + m) * math.log2(1 + m) + n * m * kk * math.log2(kk))
        if m != kk * n:  # otherwise the b-nodes share the root's degree
            add("H_deg", None, _xlog(1, size) + _xlog(m, size) + _xlog(kk * n * m, size))
    return out


@dataclass(frozen=True)
class RandomTreeParams:
    seed: int
    max_size: int
    sigma: int = 3
    binary: bool = False
    mean_degree: float = 2.0
    branch_probability: float = 0.6  # binary mode: chance a node gets two children

    def __post_init__(self):
        if self.max_size < 1 or self.sigma < 1:
            raise ValueError("max_size and sigma must be >= 1")


def symbol_names(sigma: int) -> list[str]:
    if sigma <= 26:
        return [chr(ord("a") + i) for i in range(sigma)]
    return [f"s{i}" for i in range(sigma)]


def random_tree(params: RandomTreeParams) -> Tree:
    """Seeded random tree with at most ``max_size`` nodes.

    A target size is drawn uniformly from 1..max_size; nodes are expanded in
    random frontier order with geometric degrees (or 0/2 degrees in binary
    mode), truncated so the target is never exceeded.
    """
    rng = np.random.default_rng(params.seed)
    target = int(rng.integers(1, params.max_size + 1))
    children: list[list[int]] = [[]]
    frontier = [0]
    p_geom = 1.0 / (1.0 + params.mean_degree)
    while frontier and len(children) < target:
        j = int(rng.integers(len(frontier)))
        frontier[j], frontier[-1] = frontier[-1], frontier[j]
        v = frontier.pop()
        budget = target - len(children)
        if params.binary:
            d = 2 if budget >= 2 and rng.random() < params.branch_probability else 0
        else:
            d = min(int(rng.geometric(p_geom)) - 1, budget)
        for _ in range(d):
            children.append([])
            children[v].append(len(children) - 1)
            frontier.append(len(children) - 1)
    names = symbol_names(params.sigma)
    labels = [names[i] for i in rng.integers(params.sigma, size=len(children)).tolist()]
    t = Tree.from_children(children, labels)
    if params.binary:
        return BinaryTree(t.parent, t.labels, t.alphabet, check=False)
    return t
