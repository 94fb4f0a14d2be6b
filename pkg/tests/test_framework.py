import random

import pytest
from hypothesis import given, settings, strategies as st

import hdrr.catalog  # noqa: F401
from hdrr.catalog.ustcon import reduce_uhc_to_robust_ustcon
from hdrr.corpus import removable, sat_corpus
from hdrr.distance import Measure
from hdrr.elements import arc, const, edge, gadget
from hdrr.errors import FamilyMismatch, GraphTooSmall, InconsistentStats, NotAGraph, PoolNotGadgetAligned
from hdrr.framework import (CATALOG, GadgetTable, SatStats, SizeFunction, apply_reduction,
                            check_modularity, check_preimage_uniqueness, compose, evaluate_size,
                            get_entry, lift_to_robust)
from hdrr.instance import brute_solve, enumerate_solutions, remove_element
from hdrr.io import random_3sat
from hdrr.problems.graphs import graph
from hdrr.problems.sat import lit, sat_instance
from hdrr.robust import RobustInstance, Stage, solve_robust
from hdrr.scenarios import Explicit

PAPER = sat_instance(["l1", "l2", "l3"], [["l1", "l2", "l3"], ["~l1", "~l2", "l3"]])


def triangle(problem="VertexCover", **params):
    return graph("abc", [("a", "b"), ("b", "c"), ("a", "c")], problem, params=params)


# -- registry

def test_catalog_has_every_listed_entry():
    assert len(CATALOG) == 20
    for e in CATALOG.values():
        assert e.size is not None or e.base is not None
    with pytest.raises(KeyError):
        get_entry("no-such-entry")


# -- worked examples

def test_vertex_cover_example():
    res = apply_reduction("3sat-vc", PAPER)
    assert len(res.target.universe) == 12
    assert len(res.target.rel("edge")) == 15
    assert res.target.param("k") == 7 == res.size
    sol = brute_solve(res.target)
    assert sol is not None and len(sol) == 7


def test_three_colouring_of_empty_formula():
    res = apply_reduction("3sat-3col", sat_instance([], []))
    assert len(res.target.universe) == 3 and len(res.target.rel("edge")) == 3
    assert res.table.constant == res.target.elements()


def test_dominating_set_on_triangle():
    res = apply_reduction("vc-ds", triangle(k=2))
    assert len(res.target.universe) == 6 and len(res.target.rel("edge")) == 9
    assert res.target.param("k") == 2


@pytest.mark.parametrize("name, expected", [("3sat-vc", 7), ("3sat-is", 5), ("3sat-3col", 21)])
def test_evaluate_size_examples(name, expected):
    assert evaluate_size(name, {"L": 6, "C": 2}) == expected


def test_two_disjoint_paths_size_is_witnessed():
    src = sat_instance(["x"], [["x"]])
    want = evaluate_size("3sat-2ddp", SatStats.of(src))
    assert want == 12
    target = apply_reduction("3sat-2ddp", src).target
    assert any(len(s) == want for s in enumerate_solutions(target))


@given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 3), st.integers(0, 3))
def test_size_function_is_affine(n, c, rn, rc):
    f = SizeFunction(constant=2, variable=(2, 4), clause=(4, 0), removed_variable=(2, 0), removed_clause=(2, 0))
    stats = SatStats(2 * n, c, 2 * (n + rn), c + rc)
    cp = c + rc
    assert f(stats) == 2 + n * (2 + 4 * cp) + 4 * c + 2 * rn + 2 * rc


@pytest.mark.parametrize("stats", [(1, 0, 2, 0), (2, 3, 2, 1), (4, 0, 2, 0), (-2, 0, 0, 0)])
def test_inconsistent_stats(stats):
    with pytest.raises(InconsistentStats):
        SatStats(*stats)


# -- pre-image checks

def test_preimage_negative_cases():
    res = apply_reduction("3sat-vc", PAPER)
    t = res.table
    some = next(iter(t.gadgets))
    y = next(iter(t.gadgets[some]))
    other = next(k for k in t.gadgets if k != some and t.gadgets[k])
    doubled = GadgetTable(t.constant, {**t.gadgets, other: t.gadgets[other] | {y}}, t.removals)
    assert not check_preimage_uniqueness(doubled, res.target)
    missing = GadgetTable(t.constant, {**t.gadgets, some: t.gadgets[some] - {y}}, t.removals)
    assert not check_preimage_uniqueness(missing, res.target)
    assert t.preimage(y) == some


# -- modularity

def test_vertex_cover_is_strong():
    for r in removable(PAPER):
        assert check_modularity("3sat-vc", PAPER, r)
    assert apply_reduction("3sat-vc", remove_element(PAPER, lit("l1"))).table.strength == "strong"


def test_subset_sum_is_weak():
    res = apply_reduction("3sat-ss", remove_element(PAPER, lit("l1")))
    assert res.table.strength == "weak"
    assert check_modularity("3sat-ss", PAPER, lit("l1"))


def test_ham_path_bypass():
    res = apply_reduction("3sat-dhp", remove_element(PAPER, lit("l2")))
    bypass = res.table.removals[lit("l2")]
    x, xp = gadget(lit("l2"), "x"), gadget(lit("l2"), "x'")
    assert {arc(x, xp), arc(xp, x)} <= bypass
    assert check_modularity("3sat-dhp", PAPER, lit("l2"))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(sorted(n for n, e in CATALOG.items() if e.source == "ThreeSat")))
def test_modularity_on_random_formulas(seed, name):
    src = random_3sat(random.Random(seed), 3, 2)
    for r in removable(src):
        assert check_modularity(name, src, r)


# -- composition

def test_compose_vc_ds():
    c = compose("3sat-vc", "vc-ds")
    assert c.source == "ThreeSat" and c.target == "DominatingSet"
    for src in list(sat_corpus(2, 1))[:20]:
        res = apply_reduction(c, src)
        assert check_preimage_uniqueness(res.table, res.target)
        assert (brute_solve(src) is None) == (brute_solve(res.target) is None)


def test_compose_with_no_op_widening():
    src = sat_instance(["x"], [["x", "~x"]])
    plain = apply_reduction("3sat-2ddp", src)
    same = apply_reduction(compose("3sat-2ddp", "2ddp-kddp"), src, k=2)
    assert same.target.same_structure(plain.target)
    assert same.table.constant == plain.table.constant


def test_compose_colouring_constant():
    res = apply_reduction(compose("3sat-3col", "3col-kcol"), sat_instance([], []))
    new = const("new4")
    tri = apply_reduction("3sat-3col", sat_instance([], [])).target.universe
    assert tri | {new} <= res.table.constant
    assert {edge(v, new) for v in tri} <= res.table.constant
    assert res.target.param("k") == 4


def test_compose_mismatch():
    with pytest.raises(ValueError):
        compose("3sat-vc", "is-clique")


# -- lifting

def test_lift_single_variable():
    f = sat_instance(["x", "y"], [["x"]])
    ys = {lit("y"), lit("~y")}
    ri = RobustInstance(f, ys, (), [Stage(Explicit([ys]), 1, Measure.ADDITIONS)])
    lifted = lift_to_robust("3sat-vc", ri)
    verts = {x for x in lifted.pool if x in lifted.instance.universe}
    assert len(verts) == 2 and lifted.pool == verts | {edge(*sorted(verts))}
    assert solve_robust(lifted).decision == solve_robust(ri).decision


def test_lift_without_scenarios_is_the_plain_reduction():
    lifted = lift_to_robust("3sat-is", RobustInstance(PAPER, (), ()))
    assert lifted.stages == () and lifted.pool == frozenset()
    assert lifted.base.same_structure(apply_reduction("3sat-is", PAPER).target)


def test_lift_errors():
    f = sat_instance(["x"], [])
    half = RobustInstance(f, {lit("x")}, (), [Stage(Explicit([{lit("x")}]), 1)])
    with pytest.raises(PoolNotGadgetAligned):
        lift_to_robust("3sat-vc", half)
    with pytest.raises(FamilyMismatch):
        lift_to_robust("vc-ds", RobustInstance(f, (), ()))


# -- UstCon construction

@pytest.mark.parametrize("edges", [
    [("a", "b"), ("b", "c"), ("a", "c")],
    [("a", "b"), ("b", "c"), ("c", "d"), ("a", "d"), ("a", "c")],
    [("a", "b"), ("a", "c"), ("a", "d")],
])
def test_ustcon_base_has_one_path(edges):
    verts = sorted({v for e in edges for v in e})
    ri = reduce_uhc_to_robust_ustcon(graph(verts, edges, "UndirectedHamCycle"))
    assert len(list(enumerate_solutions(ri.base))) == 1
    assert ri.stages[0].kappa == 2 * len(verts)
    assert len(ri.stages[0].scenarios.sets[0]) == 4 * len(edges)


def test_ustcon_errors():
    with pytest.raises(GraphTooSmall):
        reduce_uhc_to_robust_ustcon(graph("ab", [("a", "b")], "UndirectedHamCycle"))
    with pytest.raises(NotAGraph):
        reduce_uhc_to_robust_ustcon(graph("abc", [("a", "b")], "DirectedHamCycle", "arc"))
