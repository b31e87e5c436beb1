"""Refinement trees over enhanced indices and degree-carrying quarklet trees.

A Tree records its own construction: every node keeps the list position of
the node whose refinement created it, the rule that later refined it (if
any), and whether it is the chosen child of that refinement.  The node set
of a valid tree determines this history uniquely, which keeps serialization
simple: dumping the nodes in creation order and replaying the recorded rules
reproduces the tree bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .exceptions import InputError, NoAvailableRefinementError, NotALeafError, NotASubtreeError
from .indices import (
    QIndex,
    ROOT,
    RULES,
    children,
    chosen_child,
)

__all__ = ["Tree", "QuarkletTree", "trim_degrees", "triangle"]


def triangle(p: int) -> int:
    """Number of degree pairs (p1, p2) with p1 + p2 <= p."""
    return (p + 1) * (p + 2) // 2


@dataclass
class Tree:
    """A refinement tree rooted at a mesh index, with full history."""

    root: QIndex = ROOT
    nodes: list[QIndex] = field(init=False)
    _pos: dict[QIndex, int] = field(init=False, repr=False)
    _parent: list[int | None] = field(init=False, repr=False)
    _rule: list[str | None] = field(init=False, repr=False)
    _children: list[tuple[int, ...]] = field(init=False, repr=False)
    _chosen: list[bool] = field(init=False, repr=False)
    history: list[tuple[QIndex, str]] = field(init=False)

    def __post_init__(self) -> None:
        self.root = self.root.wavelet()
        self.nodes = [self.root]
        self._pos = {self.root: 0}
        self._parent = [None]
        self._rule = [None]
        self._children = [()]
        self._chosen = [False]
        self.history = []

    # -- queries -----------------------------------------------------------

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, node: QIndex) -> bool:
        return node.wavelet() in self._pos

    def position(self, node: QIndex) -> int:
        try:
            return self._pos[node.wavelet()]
        except KeyError:
            raise NotALeafError(f"{node} is not a tree node") from None

    def is_leaf(self, node: QIndex) -> bool:
        return self._rule[self.position(node)] is None

    def rule_of(self, node: QIndex) -> str | None:
        """The rule that refined this node, or None while it is a leaf."""
        return self._rule[self.position(node)]

    def parent_of(self, node: QIndex) -> QIndex | None:
        """The tree parent (the node whose refinement created this one)."""
        par = self._parent[self.position(node)]
        return None if par is None else self.nodes[par]

    def children_of(self, node: QIndex) -> tuple[QIndex, ...]:
        return tuple(self.nodes[c] for c in self._children[self.position(node)])

    def leaves(self) -> tuple[QIndex, ...]:
        """The unrefined nodes, in creation order."""
        return tuple(
            node for node, rule in zip(self.nodes, self._rule) if rule is None
        )

    def refined_nodes(self) -> tuple[QIndex, ...]:
        return tuple(
            node for node, rule in zip(self.nodes, self._rule) if rule is not None
        )

    def upsilon(self, node: QIndex) -> tuple[QIndex, ...]:
        """The ancestor chain of a node: ascend while it is the chosen child.

        The chains of the leaves partition the node set.
        """
        pos = self.position(node)
        chain = [self.nodes[pos]]
        while self._chosen[pos]:
            pos = self._parent[pos]
            chain.append(self.nodes[pos])
        return tuple(chain)

    def subtree_positions(self, node: QIndex) -> list[int]:
        """List positions of the node and all its tree descendants."""
        stack = [self.position(node)]
        out = []
        while stack:
            pos = stack.pop()
            out.append(pos)
            stack.extend(self._children[pos])
        return out

    # -- mutation ----------------------------------------------------------

    def refine(self, node: QIndex, rule: str) -> tuple[QIndex, ...]:
        """Split a leaf by a rule and return the new children in order."""
        pos = self.position(node)
        node = self.nodes[pos]
        if self._rule[pos] is not None:
            raise NotALeafError(f"{node} was already refined by {self._rule[pos]}")
        kids = children(node, rule)
        if not kids:
            raise NoAvailableRefinementError(f"rule {rule} unavailable at {node}")
        marked = chosen_child(node, rule)
        positions = []
        for kid in kids:
            if kid in self._pos:
                raise NotALeafError(f"child {kid} already present in the tree")
            cpos = len(self.nodes)
            self.nodes.append(kid)
            self._pos[kid] = cpos
            self._parent.append(pos)
            self._rule.append(None)
            self._children.append(())
            self._chosen.append(kid == marked)
            positions.append(cpos)
        self._rule[pos] = rule
        self._children[pos] = tuple(positions)
        self.history.append((node, rule))
        return kids

    def undo_last(self) -> tuple[QIndex, str]:
        """Remove the children added by the most recent refinement."""
        if not self.history:
            raise NotALeafError("no refinement to undo")
        node, rule = self.history.pop()
        pos = self._pos[node]
        for cpos in reversed(self._children[pos]):
            if cpos != len(self.nodes) - 1 or self._rule[cpos] is not None:
                raise NotALeafError("later refinements must be undone first")
            kid = self.nodes.pop()
            del self._pos[kid]
            self._parent.pop()
            self._rule.pop()
            self._children.pop()
            self._chosen.pop()
        self._rule[pos] = None
        self._children[pos] = ()
        return node, rule

    # -- serialization -----------------------------------------------------

    def to_records(self) -> list[dict]:
        """Nodes in creation order as plain dictionaries."""
        out = []
        for pos, node in enumerate(self.nodes):
            out.append(
                {
                    "p1": node.p1,
                    "j1": node.j1,
                    "k1": node.k1,
                    "p2": node.p2,
                    "j2": node.j2,
                    "k2": node.k2,
                    "alpha": node.alpha,
                    "parent": self._parent[pos],
                    "rule": self._rule[pos],
                }
            )
        return out

    def to_json(self) -> str:
        return json.dumps({"version": 1, "nodes": self.to_records()}, indent=2)

    @classmethod
    def from_records(cls, records: list[dict]) -> "Tree":
        if not records:
            raise InputError("tree dump holds no nodes")
        first = records[0]
        tree = cls(
            QIndex(
                0,
                int(first["j1"]),
                int(first["k1"]),
                0,
                int(first["j2"]),
                int(first["k2"]),
                int(first.get("alpha", 0)),
            )
        )
        pos = 1
        while pos < len(records):
            par = records[pos].get("parent")
            if not isinstance(par, int) or not 0 <= par < pos:
                raise InputError(f"node {pos} has no valid parent position")
            rule = records[par].get("rule")
            if rule not in RULES:
                raise InputError(f"unknown rule {rule!r} in tree dump")
            try:
                kids = tree.refine(tree.nodes[par], rule)
            except (NotALeafError, NoAvailableRefinementError) as exc:
                raise InputError(f"tree dump does not replay: {exc}") from None
            pos += len(kids)
        for pos, rec in enumerate(records):
            node = QIndex(
                0,
                int(rec["j1"]),
                int(rec["k1"]),
                0,
                int(rec["j2"]),
                int(rec["k2"]),
                int(rec.get("alpha", 0)),
            )
            if tree.nodes[pos] != node:
                raise InputError(f"tree dump node {pos} does not replay to {node}")
            if pos and tree._parent[pos] != rec.get("parent"):
                raise InputError(f"tree dump parent of node {pos} is inconsistent")
            if tree._rule[pos] != rec.get("rule"):
                raise InputError(f"tree dump rule of node {pos} is inconsistent")
        return tree

    @classmethod
    def from_json(cls, text: str) -> "Tree":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"tree dump is not valid JSON: {exc}") from None
        if not isinstance(payload, dict) or "nodes" not in payload:
            raise InputError("tree dump must be an object with a 'nodes' list")
        return cls.from_records(payload["nodes"])

    def to_dot(self) -> str:
        """Graphviz digraph of the tree; chosen-child edges drawn bold."""
        lines = ["digraph tree {", "  node [shape=box, fontsize=10];"]
        for pos, node in enumerate(self.nodes):
            label = (
                f"({node.j1},{node.k1})x({node.j2},{node.k2})"
                f"{'' if node.alpha == 0 else f' a{node.alpha}'}"
            )
            lines.append(f'  n{pos} [label="{label}"];')
        for pos in range(len(self.nodes)):
            par = self._parent[pos]
            if par is None:
                continue
            style = " [penwidth=2]" if self._chosen[pos] else ""
            lines.append(f"  n{par} -> n{pos}{style};")
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class QuarkletTree:
    """A refinement tree with a maximal polynomial degree on every leaf chain.

    The degree of an inner node is inherited from the unique leaf whose
    ancestor chain contains it, so the degree map is constant on chains.
    """

    tree: Tree
    leaf_degrees: dict[QIndex, int]

    def __post_init__(self) -> None:
        leaves = set(self.tree.leaves())
        if set(self.leaf_degrees) != leaves:
            raise InputError("degree map must cover exactly the leaves")
        if any(p < 0 for p in self.leaf_degrees.values()):
            raise InputError("degrees must be nonnegative")

    def node_degrees(self) -> dict[QIndex, int]:
        """Degree of every node, propagated along the leaf chains."""
        out: dict[QIndex, int] = {}
        for leaf, p in self.leaf_degrees.items():
            for node in self.tree.upsilon(leaf):
                out[node] = p
        return out

    def cardinality(self) -> int:
        """Total number of degree-carrying indices in the tree."""
        return sum(triangle(p) for p in self.node_degrees().values())


def trim_degrees(sub: Tree, sup: Tree) -> QuarkletTree:
    """Assign to each leaf of the subtree the refinement count pruned below it.

    The degree of a kept leaf equals the number of refinements the supertree
    performed inside the subtree hanging from that leaf (the leaf's own
    refinement included).
    """
    if sub.root != sup.root:
        raise NotASubtreeError("trees do not share a root")
    for node in sub.nodes:
        if node not in sup:
            raise NotASubtreeError(f"{node} missing from the supertree")
    degrees: dict[QIndex, int] = {}
    for leaf in sub.leaves():
        pruned = sup.subtree_positions(leaf)
        degrees[leaf] = sum(1 for pos in pruned if sup._rule[pos] is not None)
    return QuarkletTree(sub, degrees)
