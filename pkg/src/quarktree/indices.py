"""Enhanced bivariate indices, refinement rules and reachability.

A node of the refinement mesh is an enhanced index: two (level, translation)
pairs addressing a dyadic reference rectangle in [0,1)^2, an option marker
alpha, and two polynomial degrees (zero for pure mesh nodes).  alpha = 0
leaves both split directions open, alpha = 1 commits the node to a later
direction-1 split, alpha = 2 to a later direction-2 split.

One global lock keeps generation histories unique: as soon as a rectangle has
been refined in direction 2 (j2 >= 1), direction-1 refinement is forbidden
below it.  The lock removes the direction-1 rules entirely and drops the
direction-1 option child from the direction-2 split.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

from .exceptions import IndexRangeError, RuleAlphaMismatchError

__all__ = [
    "QIndex",
    "ROOT",
    "SPLIT_X",
    "SPLIT_Y",
    "PENDING_X",
    "PENDING_Y",
    "RULES",
    "children",
    "admissible_rules",
    "rule_for",
    "chosen_child",
    "parent",
    "generating_parents",
    "is_descendant",
    "in_J",
    "ell_translation",
    "generator_cells",
]


@dataclass(frozen=True, order=True)
class QIndex:
    """Enhanced index ((p1, j1, k1), (p2, j2, k2), alpha)."""

    p1: int
    j1: int
    k1: int
    p2: int
    j2: int
    k2: int
    alpha: int = 0

    def __post_init__(self) -> None:
        if self.alpha not in (0, 1, 2):
            raise IndexRangeError(f"option marker must be 0, 1 or 2, got {self.alpha}")
        if self.p1 < 0 or self.p2 < 0:
            raise IndexRangeError("degrees must be nonnegative")

    @property
    def level_sum(self) -> int:
        return self.j1 + self.j2

    @property
    def degree_sum(self) -> int:
        return self.p1 + self.p2

    def wavelet(self) -> "QIndex":
        """The same mesh node with both degrees dropped to zero."""
        if self.p1 == 0 and self.p2 == 0:
            return self
        return replace(self, p1=0, p2=0)

    def rectangle(self) -> tuple[int, int, int, int]:
        """The dyadic box as integers (j1, k1, j2, k2)."""
        return (self.j1, self.k1, self.j2, self.k2)

    def box(self) -> tuple[float, float, float, float]:
        """Rectangle corners (x_lo, x_hi, y_lo, y_hi) as floats."""
        return (
            self.k1 * 2.0**-self.j1,
            (self.k1 + 1) * 2.0**-self.j1,
            self.k2 * 2.0**-self.j2,
            (self.k2 + 1) * 2.0**-self.j2,
        )

    def validate_mesh_range(self) -> None:
        """Check 0 <= k_i < 2^j_i, the range of mesh translations."""
        if not 0 <= self.k1 < 2**self.j1 or not 0 <= self.k2 < 2**self.j2:
            raise IndexRangeError(f"translations of {self} outside the unit square")


ROOT = QIndex(0, 0, 0, 0, 0, 0, 0)

SPLIT_X = "split-x"
SPLIT_Y = "split-y"
PENDING_X = "pending-x"
PENDING_Y = "pending-y"
RULES = (SPLIT_X, SPLIT_Y, PENDING_X, PENDING_Y)

_RULE_ALPHA = {SPLIT_X: 0, SPLIT_Y: 0, PENDING_X: 1, PENDING_Y: 2}


def _x_children(node: QIndex) -> tuple[QIndex, QIndex]:
    return (
        QIndex(0, node.j1 + 1, 2 * node.k1, 0, node.j2, node.k2, 0),
        QIndex(0, node.j1 + 1, 2 * node.k1 + 1, 0, node.j2, node.k2, 0),
    )


def _y_children(node: QIndex) -> tuple[QIndex, QIndex]:
    return (
        QIndex(0, node.j1, node.k1, 0, node.j2 + 1, 2 * node.k2, 0),
        QIndex(0, node.j1, node.k1, 0, node.j2 + 1, 2 * node.k2 + 1, 0),
    )


def children(node: QIndex, rule: str) -> tuple[QIndex, ...]:
    """Child indices produced by a rule, after applying the direction lock.

    Raises if the rule does not match the node's option marker; returns an
    empty tuple if the lock removes the rule entirely.
    """
    if rule not in _RULE_ALPHA:
        raise RuleAlphaMismatchError(f"unknown rule {rule!r}")
    node = node.wavelet()
    if _RULE_ALPHA[rule] != node.alpha:
        raise RuleAlphaMismatchError(
            f"rule {rule} requires marker {_RULE_ALPHA[rule]}, "
            f"node has {node.alpha}"
        )
    locked = node.j2 >= 1
    if rule == SPLIT_X:
        if locked:
            return ()
        return _x_children(node) + (replace(node, alpha=2),)
    if rule == SPLIT_Y:
        kids = _y_children(node)
        if locked:
            return kids
        return kids + (replace(node, alpha=1),)
    if rule == PENDING_X:
        if locked:
            return ()
        return _x_children(node)
    return _y_children(node)


def admissible_rules(node: QIndex) -> tuple[str, ...]:
    """Rules that produce at least one child for this node."""
    node = node.wavelet()
    if node.alpha == 1:
        return () if node.j2 >= 1 else (PENDING_X,)
    if node.alpha == 2:
        return (PENDING_Y,)
    return (SPLIT_Y,) if node.j2 >= 1 else (SPLIT_X, SPLIT_Y)


def rule_for(node: QIndex) -> dict[str, tuple[QIndex, ...]]:
    """All admissible rules with their child tuples."""
    return {rule: children(node, rule) for rule in admissible_rules(node)}


def chosen_child(node: QIndex, rule: str) -> QIndex:
    """The child that continues the node's degree chain.

    Whenever the rule refines direction 2, the chain follows the even-k2
    child; a direction-1 split keeps its option marker on the chain, and the
    committed direction-1 rule follows the even-k1 child.
    """
    kids = children(node, rule)
    if not kids:
        raise RuleAlphaMismatchError(f"rule {rule} unavailable at {node}")
    if rule == SPLIT_X:
        return kids[2]
    return kids[0]


def parent(node: QIndex) -> QIndex | None:
    """The canonical parent (the alpha = 0 generating parent); None at the root.

    Option markers hang below their own rectangle's plain node; a plain node
    detaches the most recent dyadic split, direction 2 first.
    """
    node = node.wavelet()
    if node.alpha != 0:
        return replace(node, alpha=0)
    if node.j2 >= 1:
        return QIndex(0, node.j1, node.k1, 0, node.j2 - 1, node.k2 // 2, 0)
    if node.j1 >= 1:
        return QIndex(0, node.j1 - 1, node.k1 // 2, 0, 0, 0, 0)
    return None


def generating_parents(node: QIndex) -> tuple[tuple[QIndex, str], ...]:
    """All (parent, rule) pairs whose child list contains this node.

    A freshly split child has two generating parents, the plain one and the
    matching option marker; option children have exactly one.
    """
    node = node.wavelet()
    out: list[tuple[QIndex, str]] = []
    if node.alpha == 1:
        cand = replace(node, alpha=0)
        if node in children(cand, SPLIT_Y):
            out.append((cand, SPLIT_Y))
        return tuple(out)
    if node.alpha == 2:
        cand = replace(node, alpha=0)
        if node in children(cand, SPLIT_X):
            out.append((cand, SPLIT_X))
        return tuple(out)
    if node.j2 >= 1:
        base = QIndex(0, node.j1, node.k1, 0, node.j2 - 1, node.k2 // 2, 0)
        for par, rule in ((base, SPLIT_Y), (replace(base, alpha=2), PENDING_Y)):
            if node in children(par, rule):
                out.append((par, rule))
    elif node.j1 >= 1:
        base = QIndex(0, node.j1 - 1, node.k1 // 2, 0, 0, 0, 0)
        for par, rule in ((base, SPLIT_X), (replace(base, alpha=1), PENDING_X)):
            if node in children(par, rule):
                out.append((par, rule))
    return tuple(out)


def _box_leq(jc: int, kc: int, jp: int, kp: int) -> bool:
    """Dyadic interval containment [2^-jc kc, ...) inside [2^-jp kp, ...)."""
    return jc >= jp and (kc >> (jc - jp)) == kp


def is_descendant(mu: QIndex, lam: QIndex) -> bool:
    """Strictly smaller rectangle, or the same rectangle with a later marker."""
    mu = mu.wavelet()
    lam = lam.wavelet()
    inside = _box_leq(mu.j1, mu.k1, lam.j1, lam.k1) and _box_leq(
        mu.j2, mu.k2, lam.j2, lam.k2
    )
    if not inside:
        return False
    if mu.rectangle() != lam.rectangle():
        return True
    return (mu.alpha != 0) > (lam.alpha != 0)


@lru_cache(maxsize=None)
def in_J(mu: QIndex, lam: QIndex) -> bool:
    """Whether mu lies in some complete refinement tree rooted at lam.

    Computed by a memoized backward walk from mu over all generating parents;
    rectangle containment prunes branches that left lam's box.
    """
    mu = mu.wavelet()
    lam = lam.wavelet()
    if mu == lam:
        return True
    if not is_descendant(mu, lam):
        return False
    return any(in_J(par, lam) for par, _ in generating_parents(mu))


def ell_translation(j0: int, m: int, k: int) -> int:
    """Nearest-integer target assigning the level-(j0-1) slot k to a level-j0
    one.

    Exact half values round to even.  The map sends -m+1 to 0 and 2^j0 - 1 to
    itself, and is monotone in between.
    """
    if m < 2 or j0 < 0:
        raise IndexRangeError("need m >= 2 and j0 >= 0")
    value = Fraction((2**j0 - 1) * (k + m - 1), 2**j0 + m - 2)
    return round(value)


def generator_cells(j0: int, m: int) -> dict[int, tuple[int, ...]]:
    """Partition of the level-(j0-1) translations by their assigned target."""
    cells: dict[int, list[int]] = {}
    for k in range(-m + 1, 2**j0):
        cells.setdefault(ell_translation(j0, m, k), []).append(k)
    return {khat: tuple(ks) for khat, ks in sorted(cells.items())}
