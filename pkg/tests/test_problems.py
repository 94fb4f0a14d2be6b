from itertools import combinations, permutations, product

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from hdrr.elements import Rel, arc, atom, edge, mark
from hdrr.instance import Instance, Solution, brute_solve, enumerate_solutions, verify
from hdrr.problems.graphs import colour_item, graph
from hdrr.problems.numbers import numbers_instance
from hdrr.problems.paths import terminal_labels
from hdrr.problems.sat import lit, sat_instance


@st.composite
def graphs(draw, max_n=5, directed=False):
    n = draw(st.integers(0, max_n))
    verts = [f"v{i}" for i in range(n)]
    pairs = list(permutations(verts, 2)) if directed else list(combinations(verts, 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return verts, [p for p, keep in zip(pairs, mask) if keep]


def nx_graph(verts, edges, directed=False):
    g = nx.DiGraph() if directed else nx.Graph()
    g.add_nodes_from(verts)
    g.add_edges_from(edges)
    return g


def subsets(items, sizes=None):
    items = sorted(items)
    sizes = range(len(items) + 1) if sizes is None else sizes
    for k in sizes:
        for c in combinations(items, k):
            yield frozenset(c)


def solution_sets(inst):
    sols = [s.elements for s in enumerate_solutions(inst)]
    assert len(sols) == len(set(sols))
    return set(sols)


def with_marks(inst, **marks):
    rels = dict(inst.relations)
    for label, v in marks.items():
        rels[label] = {mark(label, atom(v))}
    return inst.replace(relations=rels)


# -- vertex selection families: enumerator agrees with verify

@settings(max_examples=40, deadline=None)
@given(graphs(), st.integers(0, 5),
       st.sampled_from(["VertexCover", "DominatingSet", "IndependentSet", "Clique"]))
def test_vertex_families_enumerate_exactly_the_verified_sets(g, k, problem):
    verts, edges = g
    label = "non-edge" if problem == "Clique" else "edge"
    inst = graph(verts, edges, problem, label, {"k": k})
    expected = {s for s in subsets(inst.universe) if verify(inst, Solution(s))}
    assert solution_sets(inst) == expected


@settings(max_examples=30, deadline=None)
@given(graphs(max_n=4, directed=True), st.integers(0, 4))
def test_feedback_vertex_set(g, k):
    verts, arcs = g
    inst = graph(verts, arcs, "FeedbackVertexSet", "arc", {"k": k})
    digraph = nx_graph(verts, arcs, True)
    for s in subsets(inst.universe):
        acyclic = nx.is_directed_acyclic_graph(digraph.subgraph(set(verts) - {v.label for v in s}))
        assert verify(inst, Solution(s)) == (acyclic and len(s) <= k)
    assert solution_sets(inst) == {s for s in subsets(inst.universe) if verify(inst, Solution(s))}


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=6), st.integers(0, 6))
def test_independent_set_matches_networkx(g, k):
    verts, edges = g
    inst = graph(verts, edges, "IndependentSet", params={"k": k})
    best = max((len(c) for c in nx.find_cliques(nx.complement(nx_graph(verts, edges)))), default=0)
    assert (brute_solve(inst) is not None) == (k <= best)


def test_hitting_set():
    a, b, c = atom("a"), atom("b"), atom("c")
    inst = Instance("HittingSet", [a, b, c], {"set": [Rel("set", (a, b)), Rel("set", (b, c))]}, {"k": 1})
    assert [s.elements for s in enumerate_solutions(inst)] == [frozenset({b})]


# -- colourings

@settings(max_examples=30, deadline=None)
@given(graphs(max_n=5), st.integers(1, 3))
def test_colouring_matches_brute_force(g, k):
    verts, edges = g
    inst = graph(verts, edges, "KColoring", params={"k": k})
    ok = any(all(col[verts.index(u)] != col[verts.index(v)] for u, v in edges)
             for col in product(range(k), repeat=len(verts)))
    assert (brute_solve(inst) is not None) == ok
    for s in enumerate_solutions(inst):
        assert verify(inst, s) and len(s) == len(verts)


def test_colour_items_and_clique_cover():
    inst = graph("ab", [("a", "b")], "CliqueCover", "non-edge", {"k": 2})
    sols = solution_sets(inst)
    assert sols and all(len(s) == 2 for s in sols)
    one = graph("a", [], "KColoring", params={"k": 1})
    assert [s.elements for s in enumerate_solutions(one)] == [frozenset({colour_item(atom("a"), 0)})]
    assert brute_solve(graph("ab", [("a", "b")], "CliqueCover", "non-edge", {"k": 1})) is None


# -- Hamiltonian families

def ham_cycle(verts, edges, directed):
    g = nx_graph(verts, edges, directed)
    if len(verts) < 3 and not directed:
        return False
    if not verts:
        return False
    first = verts[0]
    for rest in permutations(verts[1:]):
        order = (first,) + rest
        if all(g.has_edge(order[i], order[(i + 1) % len(order)]) for i in range(len(order))):
            if len(order) > 1 or g.has_edge(first, first):
                return True
    return False


def ham_path(verts, edges, s, t, directed):
    g = nx_graph(verts, edges, directed)
    for order in permutations(verts):
        if order[0] == s and order[-1] == t and all(g.has_edge(a, b) for a, b in zip(order, order[1:])):
            return True
    return False


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=5))
def test_undirected_ham_cycle(g):
    verts, edges = g
    inst = graph(verts, edges, "UndirectedHamCycle")
    assert (brute_solve(inst) is not None) == ham_cycle(verts, edges, False)
    for s in enumerate_solutions(inst):
        assert verify(inst, s) and len(s) == len(verts)


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=4, directed=True))
def test_directed_ham_cycle(g):
    verts, arcs = g
    inst = graph(verts, arcs, "DirectedHamCycle", "arc")
    assert (brute_solve(inst) is not None) == ham_cycle(verts, arcs, True)


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=5, directed=True), st.data())
def test_directed_ham_path(g, data):
    verts, arcs = g
    if len(verts) < 2:
        return
    s, t = data.draw(st.permutations(verts))[:2]
    inst = with_marks(graph(verts, arcs, "DirectedHamPath", "arc"), s=s, t=t)
    assert (brute_solve(inst) is not None) == ham_path(verts, arcs, s, t, True)
    for sol in enumerate_solutions(inst):
        assert verify(inst, sol)


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=5), st.data())
def test_undirected_ham_path(g, data):
    verts, edges = g
    if len(verts) < 2:
        return
    s, t = data.draw(st.permutations(verts))[:2]
    inst = with_marks(graph(verts, edges, "UndirectedHamPath"), s=s, t=t)
    assert (brute_solve(inst) is not None) == ham_path(verts, edges, s, t, False)


@settings(max_examples=30, deadline=None)
@given(graphs(max_n=5), st.data())
def test_ustcon_paths(g, data):
    verts, edges = g
    if len(verts) < 2:
        return
    s, t = data.draw(st.permutations(verts))[:2]
    inst = with_marks(graph(verts, edges, "UstCon"), s=s, t=t)
    expected = {frozenset(edge(atom(a), atom(b)) for a, b in zip(p, p[1:]))
                for p in nx.all_simple_paths(nx_graph(verts, edges), s, t)}
    assert solution_sets(inst) == expected


def test_tsp_weights():
    verts = "abc"
    inst = graph(verts, [("a", "b"), ("b", "c"), ("a", "c")], "TravelingSalesman", params={"threshold": 3})
    inst = inst.replace(values={e: 1 for e in inst.rel("edge")})
    assert brute_solve(inst) is not None
    assert brute_solve(inst.replace(params={"threshold": 2})) is None


def test_two_disjoint_paths():
    labels = terminal_labels(2)
    verts = ["a", "b", "c", "d", "m"]
    base = graph(verts, [("a", "m"), ("m", "b"), ("c", "d")], "KDisjointDirectedPath", "arc", {"k": 2})
    inst = with_marks(base, **dict(zip(labels, ["a", "c", "b", "d"])))
    sol = brute_solve(inst)
    assert sol is not None and len(sol) == 3
    shared = graph(verts, [("a", "m"), ("m", "b"), ("c", "m"), ("m", "d")], "KDisjointDirectedPath", "arc", {"k": 2})
    assert brute_solve(with_marks(shared, **dict(zip(labels, ["a", "c", "b", "d"])))) is None
    assert arc(atom("a"), atom("m")) in sol.elements


# -- numbers

values = st.lists(st.integers(0, 6), max_size=6)


@given(values, st.integers(0, 20))
def test_subset_sum(vals, target):
    inst = numbers_instance("SubsetSum", vals, {"target": target})
    expected = {s for s in subsets(inst.universe) if sum(inst.values[e] for e in s) == target}
    assert solution_sets(inst) == expected


@given(values)
def test_partition(vals):
    inst = numbers_instance("Partition", vals)
    ok = any(2 * sum(vals[i] for i in c) == sum(vals)
             for k in range(len(vals) + 1) for c in combinations(range(len(vals)), k))
    assert (brute_solve(inst) is not None) == ok


@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), max_size=5), st.integers(0, 12), st.integers(0, 12))
def test_knapsack(items, capacity, threshold):
    inst = numbers_instance("Knapsack", items, {"capacity": capacity, "threshold": threshold})
    expected = {s for s in subsets(inst.universe) if verify(inst, Solution(s))}
    assert solution_sets(inst) == expected


@given(values)
def test_scheduling_uses_half_the_total(vals):
    inst = numbers_instance("TwoMachineScheduling", vals)
    total = sum(vals)
    best = min((max(sum(vals[i] for i in c), total - sum(vals[i] for i in c))
                for k in range(len(vals) + 1) for c in combinations(range(len(vals)), k)), default=0)
    assert (brute_solve(inst) is not None) == (best <= -(-total // 2))


# -- 3SAT

@st.composite
def formulas(draw):
    n = draw(st.integers(1, 3))
    names = [f"x{i}" for i in range(1, n + 1)]
    lits = names + ["~" + v for v in names]
    clauses = draw(st.lists(st.lists(st.sampled_from(lits), min_size=1, max_size=3), max_size=5))
    return names, clauses


@given(formulas())
def test_sat_matches_truth_tables(f):
    names, clauses = f
    inst = sat_instance(names, clauses)
    models = set()
    for bits in product((True, False), repeat=len(names)):
        val = dict(zip(names, bits))
        if all(any(val[l.lstrip("~")] != l.startswith("~") for l in c) for c in clauses):
            models.add(frozenset(lit(v if b else "~" + v) for v, b in val.items()))
    assert solution_sets(inst) == models


@pytest.mark.parametrize("clauses, sat", [([["x"]], True), ([["x"], ["~x"]], False), ([], True)])
def test_sat_examples(clauses, sat):
    assert (brute_solve(sat_instance(["x"], clauses)) is not None) == sat
