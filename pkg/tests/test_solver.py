import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import (AB, BC, CA, E12, E13, E23, E24, E34, brute_f, example_w,
                     random_partition_instance, random_uniform_instance, triangle)
from indmst import (BuildPlan, ExchangePair, Graph, Instance, PreconditionViolated, UniformMatroid,
                    basis_update, efficient_scan, efficient_solve, enumerate_exchange_pairs, f_eval,
                    greedy_solve, min_weight_basis, objective_value, simplified_greedy_solve)
from indmst.io import gen_corpus, gen_random

SOLVERS = [greedy_solve, simplified_greedy_solve, lambda inst: efficient_solve(inst)[0]]


class TestFEval:
    @pytest.mark.parametrize("added, expected", [((), 15), ((E13,), 11), ((E13, E24), 7)])
    def test_example_w(self, added, expected):
        inst = example_w()
        assert brute_f(inst, added) == expected
        assert f_eval(inst, added) == expected

    def test_rejects_existing(self):
        with pytest.raises(PreconditionViolated):
            f_eval(example_w(), [E12])


class TestBasisUpdate:
    def test_first_diagonal(self):
        inst = example_w()
        basis, removed = basis_update(inst, {E12, E23, E34}, E13)
        assert removed == E23
        assert basis == {E12, E34, E13}
        assert inst.weight(basis) == 11

    def test_second_diagonal(self):
        inst = example_w()
        basis, removed = basis_update(inst, {E12, E34, E13}, E24)
        assert removed == E34
        assert basis == {E12, E13, E24}
        assert inst.weight(basis) == 7

    def test_heavy_element_removes_itself(self):
        g = Graph(3, [(0, 1, 1, True), (1, 2, 1, True), (2, 0, 9, False)])
        inst = Instance.from_graph(g)
        basis, removed = basis_update(inst, {0, 1}, 2)
        assert removed == 2 and basis == {0, 1}

    def test_rejects_present(self):
        with pytest.raises(PreconditionViolated):
            basis_update(example_w(), {E12, E23, E34}, E12)

    def test_weight_matches_fresh_basis(self):
        for g in gen_corpus(150, 4):
            inst = Instance.from_graph(g)
            rng = random.Random(g.m)
            order = list(inst.potential)
            rng.shuffle(order)
            basis = min_weight_basis(inst.oracle, inst.existing, inst.weights)
            for i, e in enumerate(order, start=1):
                basis, _ = basis_update(inst, basis, e)
                assert inst.weight(basis) == f_eval(inst, order[:i])


class TestExchangePairs:
    def test_tree_has_none(self):
        g = Graph(3, [(0, 1, 1, True), (1, 2, 1, True)])
        assert enumerate_exchange_pairs(Instance.from_graph(g), {0, 1}) == []

    def test_example_w_restricted(self):
        pairs = enumerate_exchange_pairs(example_w(), {E12, E23, E34},
                                         restrict_to={E12, E13, E24})
        assert [(p.removed, p.added, p.gain) for p in pairs] == [
            (E23, E13, 4), (E34, E24, 4), (E12, E13, 3), (E23, E24, 3)]

    def test_restricted_to_basis_is_empty(self):
        x = {E12, E23, E34}
        assert enumerate_exchange_pairs(example_w(), x, restrict_to=x) == []

    def test_pairs_are_exchanges(self):
        for g in gen_corpus(40, 6):
            inst = Instance.from_graph(g)
            x = min_weight_basis(inst.oracle, inst.existing, inst.weights)
            for p in enumerate_exchange_pairs(inst, x):
                swapped = (x - {p.removed}) | {p.added}
                assert len(swapped) == len(x) and inst.oracle.is_independent(swapped)


class TestGreedy:
    def test_no_potential(self):
        g = Graph(3, [(0, 1, 2, True), (1, 2, 3, True)])
        plan = greedy_solve(Instance.from_graph(g))
        assert plan.order == () and plan.objective == 5

    def test_triangle(self):
        plan = greedy_solve(triangle())
        assert plan.order == (CA,)
        assert plan.step_weights == (8, 4)
        assert plan.objective == 12

    def test_example_w(self):
        plan = greedy_solve(example_w())
        assert plan.step_weights == (15, 11, 7)
        assert plan.objective == 33
        # equal gains; removed id 23 < 34 decides
        assert plan.order == (E13, E24)


class TestSimplified:
    def test_no_potential(self):
        g = Graph(2, [(0, 1, 2, True)])
        assert simplified_greedy_solve(Instance.from_graph(g)).objective == 2

    def test_example_w(self):
        plan = simplified_greedy_solve(example_w())
        assert plan.step_weights == (15, 11, 7) and plan.objective == 33

    def test_triangle_matches_greedy(self):
        assert simplified_greedy_solve(triangle()).order == greedy_solve(triangle()).order


class TestEfficient:
    def test_example_w(self):
        result = efficient_scan(example_w(), want_trace=True)
        assert result.initial == {E12, E23, E34}
        assert result.ultimate == {E13, E24, E12}
        # inserted (23,13) then (34,24); equal gains -> later insertion first
        assert result.exchanges == [ExchangePair(E34, E24, 4), ExchangePair(E23, E13, 4)]
        assert result.plan.order == (E24, E13)
        assert result.plan.step_weights == (15, 11, 7)
        assert result.plan.objective == 33
        assert [s.element for s in result.trace] == [E13, E24, E12, E23, E34, 3]

    def test_triangle(self):
        result = efficient_scan(triangle())
        assert result.initial == {AB, BC}
        assert result.ultimate == {CA, BC}
        assert result.exchanges == [ExchangePair(AB, CA, 4)]
        assert result.plan.step_weights == (8, 4)

    def test_existing_already_optimal(self):
        g = Graph(3, [(0, 1, 1, True), (1, 2, 1, True), (0, 2, 5, False)])
        plan, _ = efficient_solve(Instance.from_graph(g))
        assert plan.k == 0 and plan.objective == 2 * plan.ultimate_weight

    def test_fast_and_oracle_paths_agree(self):
        for g in gen_corpus(200, 8):
            inst = Instance.from_graph(g)
            fast = efficient_scan(inst, want_trace=True, fast=True)
            slow = efficient_scan(inst, want_trace=True, fast=False)
            assert fast.exchanges == slow.exchanges
            assert fast.trace == slow.trace

    def test_no_trace_by_default(self):
        assert efficient_solve(example_w())[1] is None


class TestObjective:
    def test_idle_periods(self):
        assert objective_value(BuildPlan((), (10,), 10, 3)) == 40

    def test_example_w(self):
        assert objective_value(BuildPlan((E24, E13), (15, 11, 7), 7, 2)) == 33

    def test_triangle(self):
        assert objective_value(BuildPlan((CA,), (8, 4), 4, 1)) == 12


def _instances():
    rng = random.Random(31)
    out = [Instance.from_graph(g) for g in gen_corpus(60, 12)]
    out += [random_uniform_instance(rng) for _ in range(20)]
    out += [random_partition_instance(rng) for _ in range(20)]
    return out


@pytest.mark.parametrize("solve", SOLVERS, ids=["greedy", "simplified", "efficient"])
def test_plan_invariants(solve):
    for inst in _instances():
        plan = solve(inst)
        w = plan.step_weights
        assert all(a > b for a, b in zip(w, w[1:]))
        assert w[-1] == plan.ultimate_weight
        assert plan.k <= inst.horizon
        assert len(set(plan.order)) == plan.k
        assert set(plan.order) <= set(inst.potential)
        # replayed bases stay bases and are optimal for what has been built
        for i, basis in enumerate(plan.bases()):
            assert inst.oracle.is_independent(basis)
            assert len(basis) == len(plan.initial_basis)
            assert inst.weight(basis) == w[i] == f_eval(inst, plan.order[:i])
        assert all(p.removed in inst.existing for p in plan.exchanges)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(0, 6), st.integers(0, 10**6), st.integers(1, 4))
def test_solvers_agree_hypothesis(n, extra, seed, spread):
    g = gen_random(n, n - 1 + extra, seed, (-spread, spread), 0.4)
    inst = Instance.from_graph(g)
    objectives = {solve(inst).objective for solve in SOLVERS}
    assert len(objectives) == 1


def test_oracle_instance_without_graph():
    inst = Instance.from_oracle(UniformMatroid(2, 4), [5, 4, 1, 2], [0, 1])
    plan, _ = efficient_solve(inst)
    assert plan.order == (2, 3) and plan.step_weights == (9, 5, 3)
