"""Penalized error functionals driving the adaptive refinement decisions.

The growth loop maintains one record per tree node.  A node's plain local
error can be lowered either by refining below it (captured by E, the better
of the children sum and the enriched local error) or by raising degrees
(captured by the e_r sequence).  The penalized quantities tilde_e and
tilde_E combine a value with everything along the path to the root through
harmonic sums, which is what makes the greedy choice of the next leaf
near-best rather than merely greedy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol

from .exceptions import ConstraintError
from .indices import QIndex

__all__ = ["LocalErrorModel", "NodeState", "harmonic", "evaluate"]


class LocalErrorModel(Protocol):
    """Local approximation error of a node at a given maximal degree.

    The chain argument is the node's ancestor chain (itself first); models
    whose error depends on the inherited degree structure read it, others
    ignore it.  Implementations must be subadditive under refinement at
    degree zero and non-increasing in the degree.
    """

    def local_error(
        self, node: QIndex, degree: int, chain: tuple[QIndex, ...]
    ) -> float: ...


def harmonic(x: float, y: float) -> float:
    """Harmonic combination xy/(x+y), extended by 0 when either input is 0."""
    assert x >= 0.0 and y >= 0.0
    if x == 0.0 or y == 0.0:
        return 0.0
    return x * y / (x + y)


def evaluate(
    model: LocalErrorModel, node: QIndex, degree: int, chain: tuple[QIndex, ...]
) -> float:
    """Query the model and reject values outside [0, inf)."""
    value = float(model.local_error(node, degree, chain))
    if not 0.0 <= value < float("inf"):
        raise ConstraintError(
            f"local error of {node} at degree {degree} is {value!r}"
        )
    return value


@dataclass
class NodeState:
    """Per-node bookkeeping of a growth run."""

    node: QIndex
    chain: tuple[QIndex, ...]
    e0: float
    tilde_e: float
    r: int = 0
    e_r: float = 0.0
    E: float = 0.0
    tilde_E: float = 0.0
    a: float = 0.0
    b: QIndex | None = None
    E_history: list[float] = field(default_factory=list)

    @classmethod
    def fresh_leaf(
        cls,
        node: QIndex,
        chain: tuple[QIndex, ...],
        e0: float,
        parent_tilde_e: float | None,
    ) -> "NodeState":
        """State of a just-created leaf; the root passes parent_tilde_e=None."""
        tilde_e = e0 if parent_tilde_e is None else harmonic(e0, parent_tilde_e)
        return cls(
            node=node,
            chain=chain,
            e0=e0,
            tilde_e=tilde_e,
            r=0,
            e_r=e0,
            E=e0,
            tilde_E=tilde_e,
            a=tilde_e,
            b=node,
        )

    def revisit(self, children: list["NodeState"], e_r: float) -> None:
        """One pass of the upward walk after a refinement below this node."""
        self.r += 1
        self.e_r = e_r
        self.E = min(sum(c.E for c in children), e_r)
        self.E_history.append(self.E)
        self.tilde_E = harmonic(self.E, self.tilde_E)
        best = max(range(len(children)), key=lambda i: children[i].a)
        self.a = min(children[best].a, self.tilde_E)
        self.b = children[best].b
