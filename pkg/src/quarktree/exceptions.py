"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: input errors (malformed or inconsistent
user data) exit with 2, constraint violations (unsupported parameters, range
errors, misuse of tree operations) exit with 3, and a failed near-best
certification exits with 4.
"""

from __future__ import annotations

__all__ = [
    "QuarktreeError",
    "InputError",
    "ConstraintError",
    "UnsupportedOrderError",
    "InvalidDeltaError",
    "LevelTooCoarseError",
    "IndexRangeError",
    "RuleAlphaMismatchError",
    "NotALeafError",
    "NoAvailableRefinementError",
    "NotASubtreeError",
    "AmbiguousBoundarySystemError",
    "UnreachableCoefficientError",
    "BoundTooLargeError",
    "CertificationError",
]


class QuarktreeError(Exception):
    """Base class for all package errors."""


class InputError(QuarktreeError):
    """Malformed or inconsistent user-supplied data (CLI exit code 2)."""


class ConstraintError(QuarktreeError):
    """Violated parameter or usage constraint (CLI exit code 3)."""


class UnsupportedOrderError(ConstraintError):
    """The requested spline order pair has no shipped filter bank."""


class InvalidDeltaError(ConstraintError):
    """The weight exponent must be strictly larger than 1."""


class LevelTooCoarseError(ConstraintError):
    """The minimal level is too small for well-separated boundary functions."""


class IndexRangeError(ConstraintError):
    """A translation or level index lies outside its admissible range."""


class RuleAlphaMismatchError(ConstraintError):
    """The refinement rule does not apply to the node's option marker."""


class NotALeafError(ConstraintError):
    """Refinement was requested at a node that already has children."""


class NoAvailableRefinementError(ConstraintError):
    """The requested rule produces no children for this node."""


class NotASubtreeError(ConstraintError):
    """The smaller tree is not contained in the larger one."""


class AmbiguousBoundarySystemError(ConstraintError):
    """The boundary moment system has a nullspace of dimension above one."""


class UnreachableCoefficientError(ConstraintError):
    """A coefficient sits on an index no admissible tree can ever capture."""


class BoundTooLargeError(ConstraintError):
    """The exhaustive search bound exceeds the hard cap."""


class CertificationError(QuarktreeError):
    """A near-best certification check failed (CLI exit code 4)."""
