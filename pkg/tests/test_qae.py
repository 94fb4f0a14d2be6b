import random

import pytest
from hypothesis import given, settings, strategies as st

import hdrr.catalog  # noqa: F401
from hdrr.catalog.qae import deficient, reduce_qae_gamma, reduce_qae_multistage, reduce_qae_xor
from hdrr.distance import Measure
from hdrr.errors import BlockCountMismatch, BudgetExceeded
from hdrr.framework import lift_to_robust
from hdrr.instance import brute_solve
from hdrr.qbf import QaeFormula, eval_qbf, formula_of, qae_instance, random_qae
from hdrr.robust import solve_robust
from hdrr.scenarios import count_scenarios, expand


@pytest.mark.parametrize("blocks, clauses, value", [
    ([("x",)], [("x", "x", "x")], True),
    ([("x",), ("y",), ("z",)], [("x", "y", "z"), ("~x", "~y", "~z")], True),
    ([(), ("y",), ("z",)], [("y", "y", "y")], False),
    ([("x",), ("y",), ()], [("x", "y"), ("~x", "y")], False),
    ([("x",), ("y",), ("z",)], [("z", "y"), ("~z", "~y")], True),
])
def test_eval_qbf(blocks, clauses, value):
    assert eval_qbf(QaeFormula(blocks, clauses)) == value


@pytest.mark.parametrize("blocks, clauses", [
    ([("x",), ("y",)], []),
    ([("x",), ("x",), ("z",)], []),
    ([("x",)], [("q",)]),
    ([("x",)], [("x", "x", "x", "x")]),
])
def test_formula_validation(blocks, clauses):
    with pytest.raises(ValueError):
        QaeFormula(blocks, clauses)


def test_qbf_cap():
    f = QaeFormula([tuple(f"x{i}" for i in range(30))])
    with pytest.raises(BudgetExceeded):
        eval_qbf(f)


def test_instance_round_trip():
    f = random_qae(random.Random(1), [2, 1, 2], 4)
    back = formula_of(qae_instance(f))
    assert back.blocks == f.blocks and set(back.clauses) == set(f.clauses)


def test_xor_sizes():
    f = QaeFormula([("x",), ("y",), ("z",)], [("x", "y", "z")])
    ri = reduce_qae_xor(f)
    assert ri.meta["Z'"] == {1: 5}
    assert ri.meta["X'"] == {1: 6}
    assert ri.stages[0].kappa == 6
    assert reduce_qae_xor(f, Measure.SYMMETRIC).stages[0].kappa == 12
    assert count_scenarios(ri.stages[0].scenarios) == 2


def test_gamma_shape():
    f = QaeFormula([("x",), ("y",), ("z",)], [("x", "y", "z")])
    scen = reduce_qae_gamma(f).stages[0].scenarios
    assert scen.gamma == 1 and len(scen.groups) == 2
    empty = reduce_qae_gamma(QaeFormula([("x",), (), ("z",)], [("x", "z")]))
    assert empty.stages[0].scenarios.gamma == 0
    assert count_scenarios(empty.stages[0].scenarios) == 1


@pytest.mark.parametrize("reduce", [reduce_qae_xor, reduce_qae_gamma])
@pytest.mark.parametrize("clauses", [[], [("x", "z")], [("x",), ("~x",)], [("~z",), ("x", "z")]])
def test_empty_universal_block(reduce, clauses):
    f = QaeFormula([("x",), (), ("z",)], clauses)
    assert solve_robust(reduce(f)).decision == eval_qbf(f)


def test_deficient_scenarios_escape():
    f = QaeFormula([("x",), ("y",), ("z",)], [("y", "y", "y")])
    ri = reduce_qae_gamma(f)
    kinds = []
    for active in expand(ri.stages[0].scenarios):
        kinds.append(deficient(ri, active))
        if deficient(ri, active):
            assert brute_solve(ri.scenario_instance(active)) is not None
    assert kinds.count(False) == 2 and kinds.count(True) == 1


def test_multistage_base_case():
    f = random_qae(random.Random(3), [1, 2, 1], 3)
    assert reduce_qae_multistage(f, 1, "xor") == reduce_qae_xor(f)
    assert reduce_qae_multistage(f, 1, "gamma") == reduce_qae_gamma(f)


def test_block_count():
    with pytest.raises(BlockCountMismatch):
        reduce_qae_multistage(QaeFormula([("x",), ("y",), ("z",)]), 2)


@pytest.mark.parametrize("clauses", [[("a", "b")], [("a",), ("~a", "c")], [("a",), ("~a",)]])
def test_multistage_without_universals(clauses):
    f = QaeFormula([("a",), (), ("b",), (), ("c",)], clauses)
    ri = reduce_qae_multistage(f, 2)
    assert len(ri.stages) == 2
    assert solve_robust(ri).decision == eval_qbf(f)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["xor", "gamma"]), st.sampled_from(list(Measure)))
def test_random_sweep(seed, encoding, measure):
    rng = random.Random(seed)
    f = random_qae(rng, [rng.randint(0, 2) for _ in range(3)], rng.randint(0, 5))
    assert solve_robust(reduce_qae_multistage(f, 1, encoding, measure)).decision == eval_qbf(f)


@pytest.mark.parametrize("seed", range(4))
def test_lift_of_qae_construction(seed):
    rng = random.Random(seed)
    f = random_qae(rng, [1, 1, 1], rng.randint(1, 2))
    lifted = lift_to_robust("3sat-is", reduce_qae_xor(f))
    assert solve_robust(lifted).decision == eval_qbf(f)
