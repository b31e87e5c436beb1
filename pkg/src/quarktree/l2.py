"""Coefficient-space error model over the tensor quarklet frame.

Input is a finite sequence of weighted frame coefficients.  Every entry is
folded onto a wavelet-level target index: entries on the generator slot
(level j0 - 1) are absorbed by the level-j0 index their translation is
assigned to, entries on wavelet levels stay where they are.  The squared
target values drive the local errors: a node's error collects the energy
above its degree budget along its ancestor chain plus all energy reachable
strictly below it.  Trees capture energy through the same assignment, which
makes the leaf-sum error and the energy difference two routes to the same
number whenever no mass sits on marked indices a tree has refined past;
the residue of that situation is reported separately as stranded energy.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass

from .exceptions import (
    IndexRangeError,
    InputError,
    InvalidDeltaError,
    LevelTooCoarseError,
    UnreachableCoefficientError,
)
from .frame import min_level, tensor_value, wavelet_taps, weight
from .indices import QIndex, ROOT, ell_translation, generator_cells, in_J
from .trees import QuarkletTree

__all__ = ["CoefficientSequence", "L2Model"]


def _entry_from_record(rec: dict) -> tuple[QIndex, float]:
    try:
        index = QIndex(
            int(rec["p1"]),
            int(rec["j1"]),
            int(rec["k1"]),
            int(rec["p2"]),
            int(rec["j2"]),
            int(rec["k2"]),
            int(rec.get("alpha", 0)),
        )
        value = float(rec["c"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad coefficient record {rec!r}: {exc}") from None
    except IndexRangeError as exc:
        raise InputError(f"bad coefficient record {rec!r}: {exc}") from None
    return index, value


@dataclass(frozen=True)
class CoefficientSequence:
    """Finite weighted coefficient sequence with its frame parameters."""

    m: int
    mt: int
    j0: int
    delta: float
    entries: dict[QIndex, float]

    def __post_init__(self) -> None:
        wavelet_taps(self.m, self.mt)
        if self.j0 < 0:
            raise InputError(f"minimal level {self.j0} must be nonnegative")
        if not self.delta > 1.0:
            raise InvalidDeltaError(f"weight exponent {self.delta} must exceed 1")
        for entry in self.entries:
            self._validate(entry)

    def _validate(self, entry: QIndex) -> None:
        j0 = self.j0
        for j, k in ((entry.j1, entry.k1), (entry.j2, entry.k2)):
            if j < j0 - 1:
                raise InputError(f"{entry}: level {j} below the generator slot")
            if j == j0 - 1:
                if not -self.m + 1 <= k < 2**j0:
                    raise InputError(f"{entry}: generator translation {k} out of range")
            elif not 0 <= k < 2**j:
                raise InputError(f"{entry}: translation {k} out of range on level {j}")
        mesh = self.target(entry).wavelet()
        if not in_J(mesh, ROOT):
            raise UnreachableCoefficientError(
                f"{entry}: target {mesh} cannot occur in any refinement tree"
            )

    def target(self, entry: QIndex) -> QIndex:
        """The wavelet-level index whose d-value absorbs this entry."""
        j1, k1 = entry.j1, entry.k1
        if j1 == self.j0 - 1:
            j1, k1 = self.j0, ell_translation(self.j0, self.m, k1)
        j2, k2 = entry.j2, entry.k2
        if j2 == self.j0 - 1:
            j2, k2 = self.j0, ell_translation(self.j0, self.m, k2)
        return QIndex(entry.p1, j1, k1, entry.p2, j2, k2, entry.alpha)

    def total_energy(self) -> float:
        return sum(c * c for c in self.entries.values())

    # -- serialization -----------------------------------------------------

    def to_records(self) -> list[dict]:
        out = []
        for entry in sorted(self.entries):
            out.append(
                {
                    "p1": entry.p1,
                    "j1": entry.j1,
                    "k1": entry.k1,
                    "p2": entry.p2,
                    "j2": entry.j2,
                    "k2": entry.k2,
                    "alpha": entry.alpha,
                    "c": self.entries[entry],
                }
            )
        return out

    def to_json(self) -> str:
        return json.dumps({"version": 1, "entries": self.to_records()}, indent=2)

    @classmethod
    def from_json(
        cls, text: str, m: int, mt: int, j0: int, delta: float
    ) -> "CoefficientSequence":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"coefficient file is not valid JSON: {exc}") from None
        if not isinstance(payload, dict) or "entries" not in payload:
            raise InputError("coefficient file must be an object with 'entries'")
        if not isinstance(payload["entries"], list):
            raise InputError("'entries' must be a list of records")
        entries: dict[QIndex, float] = {}
        for rec in payload["entries"]:
            if not isinstance(rec, dict):
                raise InputError(f"coefficient record {rec!r} is not an object")
            index, value = _entry_from_record(rec)
            if index in entries:
                raise InputError(f"duplicate coefficient index {index}")
            entries[index] = value
        return cls(m=m, mt=mt, j0=j0, delta=delta, entries=entries)


class L2Model:
    """Local and global errors induced by a coefficient sequence."""

    def __init__(self, sequence: CoefficientSequence):
        self.sequence = sequence
        self.d_squares: dict[QIndex, float] = {}
        for entry, c in sequence.entries.items():
            tgt = sequence.target(entry)
            self.d_squares[tgt] = self.d_squares.get(tgt, 0.0) + c * c
        by_mesh: dict[QIndex, dict[int, float]] = {}
        for tgt, square in self.d_squares.items():
            by_mesh.setdefault(tgt.wavelet(), {}).setdefault(tgt.degree_sum, 0.0)
            by_mesh[tgt.wavelet()][tgt.degree_sum] += square
        self._by_mesh: dict[QIndex, tuple[list[int], list[float]]] = {}
        self._mesh_total: dict[QIndex, float] = {}
        for mesh, sums in by_mesh.items():
            degrees = sorted(sums)
            suffix = [0.0] * (len(degrees) + 1)
            for i in range(len(degrees) - 1, -1, -1):
                suffix[i] = suffix[i + 1] + sums[degrees[i]]
            self._by_mesh[mesh] = (degrees, suffix)
            self._mesh_total[mesh] = suffix[0]
        self._below: dict[QIndex, float] = {}

    # -- local errors ------------------------------------------------------

    def energy_above_degree(self, mesh: QIndex, degree: int) -> float:
        """Energy at one mesh index with combined degree exceeding the bound."""
        stored = self._by_mesh.get(mesh.wavelet())
        if stored is None:
            return 0.0
        degrees, suffix = stored
        return suffix[bisect_right(degrees, degree)]

    def energy_below(self, node: QIndex) -> float:
        """All-degree energy at indices strictly below a node."""
        node = node.wavelet()
        cached = self._below.get(node)
        if cached is None:
            cached = sum(
                total
                for mesh, total in self._mesh_total.items()
                if mesh != node and in_J(mesh, node)
            )
            self._below[node] = cached
        return cached

    def local_error(
        self, node: QIndex, degree: int, chain: tuple[QIndex, ...] | None = None
    ) -> float:
        """Energy a leaf at this degree budget fails to capture.

        The chain is the node's ancestor chain within its tree, the node
        itself first; omitting it treats the node as starting its own chain.
        """
        node = node.wavelet()
        if chain is None:
            chain = (node,)
        chain = tuple(link.wavelet() for link in chain)
        if chain[0] != node:
            raise InputError(f"chain of {node} must start at the node itself")
        total = sum(self.energy_above_degree(link, degree) for link in chain)
        return total + self.energy_below(node)

    # -- global errors -----------------------------------------------------

    def global_error(self, quarklet: QuarkletTree) -> float:
        """Leaf-summed uncaptured energy of a degree-carrying tree."""
        tree = quarklet.tree
        return sum(
            self.local_error(leaf, p, tree.upsilon(leaf))
            for leaf, p in quarklet.leaf_degrees.items()
        )

    def captured_energy(self, quarklet: QuarkletTree) -> float:
        """Energy of the coefficients the tree keeps."""
        degrees = quarklet.node_degrees()
        total = 0.0
        for entry, c in self.sequence.entries.items():
            p_max = degrees.get(self.sequence.target(entry).wavelet())
            if p_max is not None and entry.degree_sum <= p_max:
                total += c * c
        return total

    def energy_gap(self, quarklet: QuarkletTree) -> float:
        """Total energy minus captured energy.

        Agrees with the leaf-summed global error up to the stranded energy:
        mass on a marked index whose node the tree refined in the other
        direction is neither kept nor below any leaf.  Plain entries are
        never stranded, so for them the two routes coincide exactly.
        """
        return self.sequence.total_energy() - self.captured_energy(quarklet)

    def stranded_energy(self, quarklet: QuarkletTree) -> float:
        """Energy on marked indices no extension of this tree can reach.

        Refining a node consumes its other direction marker: once a tree
        splits a rectangle in one direction, the marked copy for the other
        direction is outside the tree yet below none of its leaves.
        """
        tree = quarklet.tree
        nodes = set(tree.nodes)
        leaves = tree.leaves()
        total = 0.0
        for mesh, energy in self._mesh_total.items():
            if mesh.alpha == 0 or mesh in nodes:
                continue
            if not any(in_J(mesh, leaf) for leaf in leaves):
                total += energy
        return total

    def tilde_indices(self, quarklet: QuarkletTree) -> frozenset[QIndex]:
        """The kept index set: tree indices plus their generator attachments."""
        j0 = self.sequence.j0
        cells = generator_cells(j0, self.sequence.m)
        out: set[QIndex] = set()
        for node, p_max in quarklet.node_degrees().items():
            if node.j1 < j0 or node.j2 < j0:
                continue
            dir1 = [(node.j1, node.k1)]
            dir2 = [(node.j2, node.k2)]
            if node.j1 == j0:
                dir1 += [(j0 - 1, l) for l in cells.get(node.k1, ())]
            if node.j2 == j0:
                dir2 += [(j0 - 1, l) for l in cells.get(node.k2, ())]
            for lvl1, pos1 in dir1:
                for lvl2, pos2 in dir2:
                    for p1 in range(p_max + 1):
                        for p2 in range(p_max + 1 - p1):
                            out.add(
                                QIndex(p1, lvl1, pos1, p2, lvl2, pos2, node.alpha)
                            )
        return frozenset(out)

    def reconstruct(self, indices, x1, x2):
        """Evaluate the kept part of the expansion at a point."""
        seq = self.sequence
        if seq.j0 < min_level(seq.m, seq.mt):
            raise LevelTooCoarseError(
                f"minimal level {seq.j0} too coarse to evaluate "
                f"order ({seq.m}, {seq.mt}) frame members"
            )
        total = 0.0
        for entry in indices:
            c = seq.entries.get(entry, 0.0)
            if c == 0.0:
                continue
            scale = c / weight(entry.p1, entry.p2, seq.delta)
            total = total + scale * tensor_value(
                seq.m,
                seq.mt,
                seq.j0,
                entry.p1,
                entry.j1,
                entry.k1,
                entry.p2,
                entry.j2,
                entry.k2,
                x1,
                x2,
            )
        return total
