"""Tests for the penalized error functionals and the growth/trim algorithms."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quarktree.errors import NodeState, harmonic
from quarktree.exceptions import ConstraintError, InputError
from quarktree.growth import grow, trim
from quarktree.indices import ROOT, SPLIT_X, QIndex
from quarktree.trees import triangle


def mesh(j1, k1, j2, k2, alpha=0):
    return QIndex(0, j1, k1, 0, j2, k2, alpha)


class PseudoRandomModel:
    """Deterministic positive noise; no structural properties whatsoever."""

    def __init__(self, seed: int = 0):
        self.seed = seed

    def local_error(self, node, degree, chain):
        x = (
            (node.j1 + 1) * 73856093
            ^ (node.k1 + 1) * 19349663
            ^ (node.j2 + 1) * 83492791
            ^ (node.k2 + 1) * 2971215073
            ^ (node.alpha + 1) * 7919
            ^ (degree + 1) * 104729
            ^ (self.seed + 1) * 15485863
        )
        x = (x * 2654435761) % 2**32
        return 0.1 + x / 2**32


class StrictSplitModel:
    """Strictly subadditive, constant in the degree: trimming keeps all nodes."""

    def local_error(self, node, degree, chain):
        base = 0.125 ** (node.j1 + node.j2)
        return base * (0.5 if node.alpha else 1.0)


class TieModel:
    """Children sums equal the enriched error exactly: trimming cuts the root."""

    def local_error(self, node, degree, chain):
        base = 0.25 ** (node.j1 + node.j2)
        return base * (0.5 if node.alpha else 1.0)


class EnrichmentWinsModel:
    """Any degree raise removes the whole error."""

    def local_error(self, node, degree, chain):
        if degree >= 1:
            return 0.0
        return 0.125 ** (node.j1 + node.j2) * (0.5 if node.alpha else 1.0)


class ZeroModel:
    def local_error(self, node, degree, chain):
        return 0.0


class TestHarmonic:
    def test_values(self):
        assert harmonic(1.0, 1.0) == 0.5
        assert harmonic(0.0, 5.0) == 0.0
        assert harmonic(0.0, 0.0) == 0.0
        assert math.isclose(harmonic(0.25, 0.5), 1 / 6)

    @given(
        st.floats(0.0, 1e6, allow_nan=False),
        st.floats(0.0, 1e6, allow_nan=False),
    )
    def test_bounded_by_both_arguments(self, x, y):
        h = harmonic(x, y)
        assert h >= 0.0
        if x > 0.0 and y > 0.0:
            assert h <= min(x, y) * (1.0 + 1e-15)


class TestNodeState:
    def make_parent(self):
        return NodeState.fresh_leaf(ROOT, (ROOT,), 1.0, None)

    def test_fresh_leaf_fields(self):
        state = self.make_parent()
        assert state.e0 == state.e_r == state.E == 1.0
        assert state.tilde_e == state.tilde_E == state.a == 1.0
        assert state.b == ROOT
        assert state.r == 0 and state.E_history == []

    def test_fresh_leaf_penalizes_through_parent(self):
        state = NodeState.fresh_leaf(mesh(1, 0, 0, 0), (mesh(1, 0, 0, 0),), 1.0, 1.0)
        assert state.tilde_e == 0.5

    def test_revisit_prefers_enrichment_value(self):
        state = self.make_parent()
        kids = [
            NodeState.fresh_leaf(mesh(1, 0, 0, 0), (), 0.2, 1.0),
            NodeState.fresh_leaf(mesh(1, 1, 0, 0), (), 0.3, 1.0),
        ]
        state.revisit(kids, 0.4)
        assert state.E == 0.4
        assert state.r == 1 and state.E_history == [0.4]

    def test_revisit_prefers_children_sum(self):
        state = self.make_parent()
        kids = [
            NodeState.fresh_leaf(mesh(1, 0, 0, 0), (), 0.1, 1.0),
            NodeState.fresh_leaf(mesh(1, 1, 0, 0), (), 0.1, 1.0),
        ]
        state.revisit(kids, 0.5)
        assert math.isclose(state.E, 0.2)

    def test_revisit_a_b_update(self):
        state = self.make_parent()
        left = NodeState.fresh_leaf(mesh(1, 0, 0, 0), (), 0.5, 1.0)
        right = NodeState.fresh_leaf(mesh(1, 1, 0, 0), (), 0.5, 1.0)
        left.a, right.a = 0.3, 0.7
        state.revisit([left, right], 1.0)
        assert state.tilde_E == 0.5
        assert state.a == 0.5
        assert state.b == right.b == mesh(1, 1, 0, 0)

    def test_revisit_argmax_tie_takes_first(self):
        state = self.make_parent()
        left = NodeState.fresh_leaf(mesh(1, 0, 0, 0), (), 0.5, 1.0)
        right = NodeState.fresh_leaf(mesh(1, 1, 0, 0), (), 0.5, 1.0)
        left.a = right.a = 0.25
        state.revisit([left, right], 1.0)
        assert state.b == mesh(1, 0, 0, 0)


class TestGrow:
    def test_zero_budget_keeps_root(self):
        run = grow(PseudoRandomModel(), 0)
        assert len(run.tree) == 1
        assert run.steps == 1
        assert [rec.n for rec in run.log] == [0]

    def test_negative_budget_rejected(self):
        with pytest.raises(InputError):
            grow(PseudoRandomModel(), -1)

    def test_exact_root_short_circuits(self):
        run = grow(ZeroModel(), 5)
        assert len(run.tree) == 1
        assert run.log[0].global_error == 0.0
        assert len(run.log) == 1

    def test_direction_tie_takes_first_direction(self):
        run = grow(StrictSplitModel(), 1)
        assert run.log[1].rule == SPLIT_X
        assert run.log[1].a_split_x == run.log[1].a_split_y

    def test_one_step_counts_five(self):
        run = grow(StrictSplitModel(), 1)
        assert len(run.tree) == 4
        assert run.steps == 5
        assert run.predicted_step_count() == 5

    def test_refined_leaf_is_b_target(self):
        run = grow(PseudoRandomModel(3), 8)
        for rec in run.log[1:]:
            assert rec.leaf is not None
            assert rec.rule is not None

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_tree_grows_by_two_or_three(self, seed):
        run = grow(PseudoRandomModel(seed), 20)
        sizes = [rec.tree_size for rec in run.log]
        for prev, cur in zip(sizes, sizes[1:]):
            assert cur - prev in (2, 3)

    @pytest.mark.parametrize("seed", [0, 5, 11])
    def test_step_counter_matches_formula(self, seed):
        run = grow(PseudoRandomModel(seed), 25)
        assert run.steps == run.predicted_step_count()
        assert run.steps == sum(run.states[n].r + 1 for n in run.tree.nodes)

    @pytest.mark.parametrize("seed", [0, 7])
    def test_root_a_value_never_increases(self, seed):
        run = grow(PseudoRandomModel(seed), 30)
        values = [rec.a_root for rec in run.log]
        for prev, cur in zip(values, values[1:]):
            assert cur <= prev + 1e-15

    @pytest.mark.parametrize("seed", [2, 9])
    def test_harmonic_identity_along_root_paths(self, seed):
        run = grow(PseudoRandomModel(seed), 18)
        for node in run.tree.nodes:
            state = run.states[node]
            total = 0.0
            walk = node
            while walk is not None:
                total += 1.0 / run.states[walk].e0
                walk = run.tree.parent_of(walk)
            assert math.isclose(1.0 / state.tilde_e, total, rel_tol=1e-12)

    @pytest.mark.parametrize("seed", [4, 13])
    def test_telescoping_identity(self, seed):
        run = grow(PseudoRandomModel(seed), 18)
        for node in run.tree.nodes:
            state = run.states[node]
            if state.r == 0:
                assert state.tilde_E == state.tilde_e
                continue
            total = sum(1.0 / e for e in state.E_history)
            total += 1.0 / state.tilde_e
            assert math.isclose(1.0 / state.tilde_E, total, rel_tol=1e-12)

    @pytest.mark.parametrize("seed", [1, 6])
    def test_penalized_bounds(self, seed):
        run = grow(PseudoRandomModel(seed), 15)
        for node in run.tree.nodes:
            state = run.states[node]
            assert state.tilde_E <= state.E + 1e-15
            assert state.tilde_E <= state.tilde_e + 1e-15

    def test_monotone_model_has_nonincreasing_E(self):
        run = grow(StrictSplitModel(), 20)
        for node in run.tree.nodes:
            state = run.states[node]
            history = [state.e0] + state.E_history
            for prev, cur in zip(history, history[1:]):
                assert cur <= prev + 1e-15


class TestTrim:
    def test_strict_model_keeps_everything(self):
        run = grow(StrictSplitModel(), 12)
        quarklet = trim(run)
        assert len(quarklet.tree) == len(run.tree)
        assert set(quarklet.leaf_degrees.values()) == {0}

    def test_enrichment_model_cuts_at_root(self):
        run = grow(EnrichmentWinsModel(), 6)
        quarklet = trim(run)
        assert len(quarklet.tree) == 1
        assert quarklet.leaf_degrees[ROOT] == 6
        assert quarklet.cardinality() == triangle(6)

    def test_tie_prefers_enrichment(self):
        run = grow(TieModel(), 4)
        quarklet = trim(run)
        assert len(quarklet.tree) == 1
        assert quarklet.leaf_degrees[ROOT] == 4

    def test_idempotent(self):
        run = grow(PseudoRandomModel(8), 10)
        first = trim(run)
        second = trim(run)
        assert first.tree.nodes == second.tree.nodes
        assert first.leaf_degrees == second.leaf_degrees

    def test_log_snapshot_matches_final_trim(self):
        run = grow(StrictSplitModel(), 9)
        quarklet = trim(run)
        last = run.log[-1]
        assert last.cardinality == quarklet.cardinality()
        total = sum(run.states[leaf].e_r for leaf in quarklet.tree.leaves())
        assert math.isclose(last.global_error, total, rel_tol=1e-12)

    def test_zero_model_snapshot(self):
        run = grow(ZeroModel(), 3)
        assert run.log[0].cardinality == 1
        assert run.log[0].global_error == 0.0


@given(st.integers(0, 500), st.integers(1, 14))
@settings(max_examples=40, deadline=None)
def test_growth_is_deterministic(seed, steps):
    first = grow(PseudoRandomModel(seed), steps)
    second = grow(PseudoRandomModel(seed), steps)
    assert first.tree.nodes == second.tree.nodes
    assert first.log == second.log


def test_model_values_validated():
    class NegativeModel:
        def local_error(self, node, degree, chain):
            return -1.0

    with pytest.raises(ConstraintError):
        grow(NegativeModel(), 1)
