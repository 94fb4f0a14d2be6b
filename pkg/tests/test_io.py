import json
import random

import pytest
from hypothesis import given, settings, strategies as st

import hdrr.catalog  # noqa: F401
from hdrr import io
from hdrr.catalog.qae import reduce_qae_gamma, reduce_qae_xor
from hdrr.catalog.ustcon import reduce_uhc_to_robust_ustcon
from hdrr.distance import Measure
from hdrr.elements import Rel, atom, const, gadget, removal
from hdrr.errors import NotAGraph, ParseError, SchemaVersionError, WidthError
from hdrr.framework import apply_reduction
from hdrr.instance import brute_solve
from hdrr.problems.graphs import graph
from hdrr.problems.sat import sat_instance
from hdrr.qbf import QaeFormula, eval_qbf, random_qae
from hdrr.robust import solve_robust

seeds = st.integers(0, 10 ** 6)

leaf = st.one_of(st.text(max_size=4).map(atom), st.text(max_size=4).map(const))
elements = st.recursive(
    leaf,
    lambda inner: st.one_of(
        st.tuples(inner, st.text(max_size=3)).map(lambda t: gadget(*t)),
        st.tuples(inner, st.text(max_size=3)).map(lambda t: removal(*t)),
        st.tuples(st.sampled_from(["edge", "arc", "clause"]), st.lists(inner, min_size=1, max_size=3))
        .map(lambda t: Rel(t[0], tuple(t[1])))),
    max_leaves=6)


@given(elements)
def test_element_round_trip(e):
    assert io.decode(json.loads(json.dumps(io.encode(e)))) == e


@given(st.recursive(st.one_of(st.integers(), st.text(max_size=3), elements),
                    lambda inner: st.one_of(st.lists(inner, max_size=3).map(tuple),
                                            st.frozensets(st.integers(), max_size=3),
                                            st.dictionaries(st.text(max_size=3), inner, max_size=3)),
                    max_leaves=8))
def test_value_round_trip(x):
    assert io.decode(json.loads(json.dumps(io.encode(x)))) == x


def instances(seed):
    rng = random.Random(seed)
    kind = rng.randrange(4)
    if kind == 0:
        return io.random_3sat(rng, rng.randint(1, 4), rng.randint(0, 5))
    if kind == 1:
        return io.random_graph(rng, rng.randint(0, 6), 0.5, "VertexCover", k=2)
    if kind == 2:
        return io.random_numbers(rng, rng.randint(0, 5), 9, "SubsetSum")
    return apply_reduction("3sat-dhp", io.random_3sat(rng, 2, 2)).target


@given(seeds)
def test_instance_documents(seed):
    inst = instances(seed)
    text = io.dumps(inst)
    assert io.loads(text) == inst
    assert io.dumps(io.loads(text)) == text


@settings(max_examples=30, deadline=None)
@given(seeds, st.sampled_from(list(Measure)))
def test_robust_and_witness_documents(seed, measure):
    rng = random.Random(seed)
    ri = io.random_robust_sat(rng, 3, 3, 3, measure)
    assert io.loads(io.dumps(ri)) == ri
    res = solve_robust(ri)
    if res.decision:
        back = io.loads(io.dumps(res.witness))
        assert back == res.witness
    q = random_qae(rng, [1, 1, 1], 2)
    for ri in (reduce_qae_xor(q, measure), reduce_qae_gamma(q, measure)):
        assert io.loads(io.dumps(ri)) == ri


def test_table_and_formula_documents():
    res = apply_reduction("3sat-ss", sat_instance(["x", "y"], [["x", "~y"]]))
    back = io.loads(io.dumps(res.table))
    assert back.constant == res.table.constant and back.gadgets == res.table.gadgets
    f = random_qae(random.Random(0), [2, 1, 1], 3)
    assert io.loads(io.dumps(f)) == f


def test_schema_errors():
    doc = json.loads(io.dumps(graph("ab", [("a", "b")])))
    doc["schema"] = 99
    with pytest.raises(SchemaVersionError):
        io.loads(json.dumps(doc))
    with pytest.raises(ParseError):
        io.loads("{not json")
    with pytest.raises(ParseError):
        io.loads(json.dumps({"schema": 1, "kind": "mystery", "body": {}}))


# -- DIMACS

def test_dimacs_examples():
    one = io.parse_dimacs_cnf("p cnf 1 1\n1 0\n")
    assert len(one.rel("clause")) == 1 and len(one.universe) == 2
    two = io.parse_dimacs_cnf("c comment\np cnf 2 2\n1 -2 0\n-1 2 0\n")
    assert len(two.rel("clause")) == 2
    assert all(len(c.members) == 3 for c in two.rel("clause"))


@pytest.mark.parametrize("text, error", [
    ("p cnf x 1\n1 0", ParseError),
    ("p cnf 1 1\n2 0", ParseError),
    ("1 0", ParseError),
    ("p cnf 4 1\n1 2 3 4 0", WidthError),
    ("p cnf 1 2\n1 0", ParseError),
])
def test_dimacs_errors(text, error):
    with pytest.raises(error):
        io.parse_dimacs_cnf(text)


@given(seeds)
def test_dimacs_round_trip(seed):
    rng = random.Random(seed)
    f = io.random_3sat(rng, rng.randint(1, 5), rng.randint(0, 6))
    back = io.parse_dimacs_cnf(io.emit_dimacs_cnf(f))
    assert (brute_solve(back) is None) == (brute_solve(f) is None)
    assert len(back.rel("clause")) == len(f.rel("clause"))


def test_qdimacs_examples():
    assert io.emit_qdimacs(QaeFormula([("x",)], [("x",)])).split("\n")[:3] == ["p cnf 1 1", "e 1 0", "1 0"]
    text = io.emit_qdimacs(QaeFormula([("x",), ("y",), ("z",)], [("x", "~y", "z")]))
    assert [line[0] for line in text.splitlines()[1:4]] == ["e", "a", "e"]


@given(seeds)
def test_qdimacs_round_trip(seed):
    rng = random.Random(seed)
    f = random_qae(rng, [rng.randint(0, 2) for _ in range(3)], rng.randint(0, 4))
    back = io.parse_qdimacs(io.emit_qdimacs(f))
    assert eval_qbf(back) == eval_qbf(f)
    # the format has no empty quantifier blocks, so neighbours around one merge
    assert len(back.variables()) == len(f.variables())
    if all(f.blocks):
        assert [len(b) for b in back.blocks] == [len(b) for b in f.blocks]


# -- dot

def test_dot_triangle_and_empty():
    text = io.emit_dot(graph("abc", [("a", "b"), ("b", "c"), ("a", "c")]))
    assert text.count(" -- ") == 3 and text.count(";") == 6
    assert io.emit_dot(graph("", [])).split() == ["graph", "G", "{", "}"]


def test_dot_clusters_gadgets():
    src = sat_instance(["l1", "l2", "l3"], [["l1", "l2", "l3"], ["~l1", "~l2", "l3"]])
    res = apply_reduction("3sat-vc", src)
    text = io.emit_dot(res.target, res.table)
    assert text.count("subgraph cluster") == len([g for g in res.table.gadgets.values() if g])
    with pytest.raises(NotAGraph):
        io.emit_dot(io.random_numbers(random.Random(0), 3))


def test_dot_of_ustcon_marks():
    verts = [f"v{i}" for i in range(4)]
    g = graph(verts, [(verts[i], verts[(i + 1) % 4]) for i in range(4)], "UndirectedHamCycle")
    text = io.emit_dot(reduce_uhc_to_robust_ustcon(g).instance)
    assert "xlabel" in text


# -- generators

def test_generators_are_seeded():
    assert io.random_3sat(random.Random(5), 4, 6) == io.random_3sat(random.Random(5), 4, 6)
    a = io.random_robust_sat(random.Random(5), 3, 4, 3, "additions")
    assert a == io.random_robust_sat(random.Random(5), 3, 4, 3, "additions")
    g = io.random_graph(random.Random(1), 5, 1.0, "VertexCover", k=3)
    assert len(g.rel("edge")) == 10 and g.param("k") == 3


def test_random_3sat_uses_distinct_literal_triples():
    f = io.random_3sat(random.Random(2), 4, 30)
    for c in f.rel("clause"):
        assert len({m.label.lstrip("~") for m in c.members}) == 3
