"""Exhaustive search for the best degree-carrying tree of bounded cost.

The cost of a tree counts one unit per degree pair on every node, so a cost
bound n also bounds the node count by n.  The family of candidate trees is
therefore finite and small for desk-scale n, and the minimum is exact: every
mesh tree within the node budget is enumerated by deciding, for each node in
creation order, whether it stays a leaf or is refined by one admissible rule.
Degree assignments are folded in afterwards by a knapsack over the leaves,
since a leaf of degree p charges its whole ancestor chain.

Two independent implementations are provided: the flat enumeration with a
per-tree knapsack, and a recursive budget-splitting search.  They must agree,
which the tests exercise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

from .errors import LocalErrorModel, evaluate
from .exceptions import BoundTooLargeError, InputError
from .indices import ROOT, QIndex, admissible_rules, children, chosen_child
from .trees import QuarkletTree, Tree, triangle

__all__ = [
    "TreeBounds",
    "enumerate_trees",
    "near_best_bound",
    "sigma_n",
    "sigma_n_recursive",
    "sigma_table",
]

_INF = float("inf")

HARD_CAP = 14


@dataclass(frozen=True)
class TreeBounds:
    """Finite search bounds for tree enumeration."""

    max_refinements: int
    max_degree: int
    max_cardinality: int

    def __post_init__(self) -> None:
        if min(self.max_refinements, self.max_degree, self.max_cardinality) < 0:
            raise InputError("enumeration bounds must be nonnegative")


def _mesh_trees(
    max_nodes: int, max_refinements: int, root: QIndex = ROOT
) -> Iterator[Tree]:
    """All mesh trees within the bounds, each exactly once.

    Nodes are decided in creation order: keep as leaf, or refine by one of
    the admissible rules.  Distinct decision sequences give distinct trees,
    so the stream is duplicate free.  The yielded tree is mutable workspace;
    callers must copy whatever they keep.
    """
    tree = Tree(root)

    def walk(pos: int, nodes_left: int, refinements_left: int) -> Iterator[Tree]:
        if pos == len(tree.nodes):
            yield tree
            return
        node = tree.nodes[pos]
        yield from walk(pos + 1, nodes_left, refinements_left)
        if refinements_left == 0:
            return
        for rule in admissible_rules(node):
            kids = children(node, rule)
            if len(kids) > nodes_left:
                continue
            tree.refine(node, rule)
            yield from walk(pos + 1, nodes_left - len(kids), refinements_left - 1)
            tree.undo_last()

    yield from walk(1, max_nodes - 1, max_refinements)


def enumerate_trees(
    bounds: TreeBounds, root: QIndex = ROOT
) -> Iterator[QuarkletTree]:
    """Every degree-carrying tree within the bounds, duplicate free.

    Trees appear in a canonical order: mesh trees by their creation-order
    decision sequence, then leaf degree vectors counted up last leaf first.
    """
    for tree in _mesh_trees(bounds.max_cardinality, bounds.max_refinements, root):
        snapshot = Tree.from_records(tree.to_records())
        leaves = snapshot.leaves()
        chain_lengths = [len(snapshot.upsilon(leaf)) for leaf in leaves]
        degrees = [0] * len(leaves)

        def cost() -> int:
            return sum(
                length * triangle(p) for length, p in zip(chain_lengths, degrees)
            )

        while True:
            if cost() <= bounds.max_cardinality:
                yield QuarkletTree(snapshot, dict(zip(leaves, degrees)))
            i = len(degrees) - 1
            while i >= 0:
                degrees[i] += 1
                if degrees[i] <= bounds.max_degree and cost() <= bounds.max_cardinality:
                    break
                degrees[i] = 0
                i -= 1
            if i < 0:
                break


def _check_budget(n: int, cap: int) -> None:
    if n < 1:
        raise InputError(f"cardinality bound {n} must be at least 1")
    if n > cap:
        raise BoundTooLargeError(
            f"cardinality bound {n} exceeds the exhaustive-search cap {cap}"
        )


def _degree_vector(
    model: LocalErrorModel, chain: tuple[QIndex, ...], budget: int
) -> list[float]:
    """v[c] = least error of this leaf using chain cost at most c."""
    leaf = chain[0]
    length = len(chain)
    v = [_INF] * (budget + 1)
    p = 0
    while length * triangle(p) <= budget:
        err = evaluate(model, leaf, p, chain)
        for c in range(length * triangle(p), budget + 1):
            if err < v[c]:
                v[c] = err
        p += 1
    return v


def _min_plus(a: list[float], b: list[float], budget: int) -> list[float]:
    out = [_INF] * (budget + 1)
    for ca, ea in enumerate(a):
        if ea == _INF:
            continue
        top = min(len(b) - 1, budget - ca)
        for cb in range(top + 1):
            s = ea + b[cb]
            if s < out[ca + cb]:
                out[ca + cb] = s
    return out


def sigma_table(
    model: LocalErrorModel,
    n_max: int,
    root: QIndex = ROOT,
    cap: int = HARD_CAP,
) -> tuple[float, ...]:
    """Best achievable error for every cost bound 1..n_max, exact minima."""
    _check_budget(n_max, cap)
    best = [_INF] * (n_max + 1)
    for tree in _mesh_trees(n_max, (n_max - 1) // 2, root):
        combined = [0.0] + [_INF] * n_max
        combined[0] = 0.0
        for leaf in tree.leaves():
            chain = tree.upsilon(leaf)
            combined = _min_plus(
                combined, _degree_vector(model, chain, n_max), n_max
            )
        for c in range(1, n_max + 1):
            if combined[c] < best[c]:
                best[c] = combined[c]
    for c in range(2, n_max + 1):
        if best[c - 1] < best[c]:
            best[c] = best[c - 1]
    return tuple(best[1:])


def sigma_n(
    model: LocalErrorModel,
    n: int,
    root: QIndex = ROOT,
    cap: int = HARD_CAP,
) -> float:
    """Least global error over all degree-carrying trees of cost at most n."""
    return sigma_table(model, n, root=root, cap=cap)[n - 1]


def sigma_n_recursive(
    model: LocalErrorModel,
    n: int,
    root: QIndex = ROOT,
    cap: int = HARD_CAP,
) -> float:
    """Independent recursive route to sigma_n, for cross-checking.

    The recursion decides one node at a time: close the current node as a
    leaf at some affordable degree, or refine it and split the remaining
    budget over the children by a min-plus convolution.  The chosen child
    continues the ancestor chain, the other children start fresh ones.
    """
    _check_budget(n, cap)
    memo: dict[tuple[tuple[QIndex, ...], int], list[float]] = {}

    def rec(chain: tuple[QIndex, ...], budget: int) -> list[float]:
        key = (chain, budget)
        cached = memo.get(key)
        if cached is not None:
            return cached
        node = chain[0]
        v = _degree_vector(model, chain, budget)
        for rule in admissible_rules(node):
            kids = children(node, rule)
            chosen = chosen_child(node, rule)
            others = len(kids) - 1
            conv: list[float] | None = None
            for kid in kids:
                if kid == chosen:
                    kid_chain = (kid,) + chain
                else:
                    kid_chain = (kid,)
                floor_rest = sum(
                    len(chain) + 1 if other == chosen else 1
                    for other in kids
                    if other != kid
                )
                kid_budget = budget - floor_rest
                if kid_budget < len(kid_chain):
                    conv = None
                    break
                vec = rec(kid_chain, kid_budget)
                conv = vec if conv is None else _min_plus(conv, vec, budget)
            if conv is None:
                continue
            for c in range(budget + 1):
                if c < len(conv) and conv[c] < v[c]:
                    v[c] = conv[c]
        memo[key] = v
        return v

    return min(rec((root,), n))


def near_best_bound(n: int, n_run: int, sigma: float) -> float:
    """Certified ceiling for the error after n_run growth steps.

    For any n <= n_run the grown tree's global error is at most
    (3 n_run + 1) / (n_run - 2 n / 3 + 1 / 2) times sigma_n.
    """
    if n < 1 or n > n_run:
        raise InputError(f"need 1 <= n <= {n_run}, got {n}")
    denominator = n_run - 2.0 * n / 3.0 + 0.5
    return (3.0 * n_run + 1.0) / denominator * sigma
