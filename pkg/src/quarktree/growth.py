"""Greedy near-best tree growth and the subsequent trimming pass.

Each iteration refines the leaf currently carrying the largest penalized
error, choosing the split direction with the smaller cumulated child error
when the leaf leaves both open.  Afterwards the walk back to the root
refreshes the adaptive minima, so the next iteration's decision is read off
the root in constant time.  Trimming converts the grown tree into a
degree-carrying one by cutting where polynomial enrichment matched or beat
further subdivision.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import LocalErrorModel, NodeState, evaluate
from .exceptions import InputError, NoAvailableRefinementError
from .indices import (
    PENDING_X,
    PENDING_Y,
    ROOT,
    SPLIT_X,
    SPLIT_Y,
    QIndex,
    children,
    chosen_child,
)
from .trees import QuarkletTree, Tree, trim_degrees

__all__ = ["StepRecord", "GrowthRun", "grow", "trim"]

_INF = float("inf")


@dataclass(frozen=True)
class StepRecord:
    """Snapshot logged after the initialization and after each iteration."""

    n: int
    tree_size: int
    cardinality: int
    global_error: float
    a_root: float
    steps: int
    leaf: QIndex | None = None
    rule: str | None = None
    a_split_x: float | None = None
    a_split_y: float | None = None


@dataclass
class GrowthRun:
    """A completed growth: the tree, all node states and the iteration log."""

    model: LocalErrorModel
    tree: Tree
    states: dict[QIndex, NodeState]
    steps: int
    log: list[StepRecord] = field(default_factory=list)

    def state(self, node: QIndex) -> NodeState:
        return self.states[node.wavelet()]

    def predicted_step_count(self) -> int:
        """The closed-form step count sum over nodes of (r + 1)."""
        return sum(self.states[node].r + 1 for node in self.tree.nodes)


def _candidate_chain(
    child: QIndex, parent_chain: tuple[QIndex, ...], chosen: QIndex
) -> tuple[QIndex, ...]:
    return (child,) + parent_chain if child == chosen else (child,)


def _trim_positions(run: GrowthRun) -> list[QIndex]:
    """Nodes at which the trimming pass cuts, in discovery order."""
    cuts = []
    stack = [run.tree.root]
    while stack:
        node = stack.pop()
        state = run.states[node]
        if state.E == state.e_r:
            cuts.append(node)
        else:
            stack.extend(reversed(run.tree.children_of(node)))
    return cuts


def trim(run: GrowthRun) -> QuarkletTree:
    """Cut the grown tree wherever enrichment matches further subdivision.

    Descends from the root and keeps refining only while the children sum
    is strictly better than the enriched local error; every cut leaf gets
    the number of refinements pruned below it as its maximal degree.
    """
    cut = set(_trim_positions(run))
    kept = Tree(run.tree.root)
    stack = [run.tree.root]
    while stack:
        node = stack.pop()
        if node in cut:
            continue
        rule = run.tree.rule_of(node)
        kept.refine(node, rule)
        stack.extend(reversed(run.tree.children_of(node)))
    return trim_degrees(kept, run.tree)


def _trimmed_snapshot(run: GrowthRun) -> tuple[int, float]:
    """Cardinality and global error of the current trimmed tree."""
    quarklet = trim(run)
    error = sum(run.states[leaf].e_r for leaf in quarklet.tree.leaves())
    return quarklet.cardinality(), error


def grow(model: LocalErrorModel, n_max: int, root: QIndex = ROOT) -> GrowthRun:
    """Run the greedy growth for n_max iterations (or none if already exact).

    Returns the run with its per-iteration log; iteration N refines the leaf
    b(root) delivered by the previous upward walk.
    """
    if n_max < 0:
        raise InputError("iteration budget must be nonnegative")
    tree = Tree(root)
    root = tree.root
    root_chain = (root,)
    e0 = evaluate(model, root, 0, root_chain)
    states = {root: NodeState.fresh_leaf(root, root_chain, e0, None)}
    run = GrowthRun(model=model, tree=tree, states=states, steps=1)
    card, err = _trimmed_snapshot(run)
    run.log.append(
        StepRecord(
            n=0,
            tree_size=1,
            cardinality=card,
            global_error=err,
            a_root=states[root].a,
            steps=run.steps,
        )
    )
    if e0 == 0.0:
        return run
    for n in range(1, n_max + 1):
        leaf = states[root].b
        leaf_state = states[leaf]
        a_split_x = a_split_y = None
        if leaf.alpha == 0:
            candidates = {}
            for rule in (SPLIT_X, SPLIT_Y):
                kids = children(leaf, rule)
                if not kids:
                    candidates[rule] = (_INF, None)
                    continue
                chosen = chosen_child(leaf, rule)
                total = 0.0
                errors = []
                for kid in kids:
                    chain = _candidate_chain(kid, leaf_state.chain, chosen)
                    value = evaluate(model, kid, 0, chain)
                    errors.append(value)
                    total += value
                candidates[rule] = (total, errors)
            a_split_x = candidates[SPLIT_X][0]
            a_split_y = candidates[SPLIT_Y][0]
            if a_split_x == _INF and a_split_y == _INF:
                raise NoAvailableRefinementError(f"leaf {leaf} cannot be refined")
            rule = SPLIT_X if a_split_x <= a_split_y else SPLIT_Y
            child_errors = candidates[rule][1]
        elif leaf.alpha == 1:
            rule, child_errors = PENDING_X, None
        else:
            rule, child_errors = PENDING_Y, None
        kids = tree.refine(leaf, rule)
        chosen = chosen_child(leaf, rule)
        for pos, kid in enumerate(kids):
            chain = _candidate_chain(kid, leaf_state.chain, chosen)
            if child_errors is None:
                e0 = evaluate(model, kid, 0, chain)
            else:
                e0 = child_errors[pos]
            states[kid] = NodeState.fresh_leaf(kid, chain, e0, leaf_state.tilde_e)
            run.steps += 1
        node = leaf
        while node is not None:
            state = states[node]
            kid_states = [states[c] for c in tree.children_of(node)]
            e_r = evaluate(model, node, state.r + 1, state.chain)
            state.revisit(kid_states, e_r)
            run.steps += 1
            node = tree.parent_of(node)
        card, err = _trimmed_snapshot(run)
        run.log.append(
            StepRecord(
                n=n,
                tree_size=len(tree),
                cardinality=card,
                global_error=err,
                a_root=states[root].a,
                steps=run.steps,
                leaf=leaf,
                rule=rule,
                a_split_x=a_split_x,
                a_split_y=a_split_y,
            )
        )
    return run
