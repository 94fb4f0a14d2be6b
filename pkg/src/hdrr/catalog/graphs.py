"""Catalog entries into vertex-selection and colouring families."""
from __future__ import annotations

from ..elements import Rel, const, edge, gadget
from ..framework import CatalogEntry, SizeFunction, TargetBuilder, register_entry
from ..problems.sat import CLAUSE, LIT_CLAUSE, NEG, clauses, variables


def _lit_vertices(tb, src):
    verts = {}
    for p, n in variables(src):
        for l in (p, n):
            verts[l] = tb.add(l, gadget(l, "v"))
        tb.add(Rel(NEG, (p, n)), edge(verts[p], verts[n]))
    return verts


def _lit_clause(c, l):
    return Rel(LIT_CLAUSE, (l, c))


def _negations(src):
    out = {}
    for p, n in variables(src):
        out[p], out[n] = n, p
    return out


def _triangle_clauses(tb, src, verts, wire_to_negation):
    neg = _negations(src)
    for c in clauses(src):
        corners = [tb.add(c, gadget(c, str(i))) for i in range(3)]
        tb.add(c, *[edge(corners[i], corners[j]) for i, j in ((0, 1), (0, 2), (1, 2))])
        for i, l in enumerate(c.members):
            other = neg[l] if wire_to_negation else l
            tb.add(_lit_clause(c, l), edge(verts[other], corners[i]))


def sat_to_vc(src, **_):
    tb = TargetBuilder("VertexCover")
    verts = _lit_vertices(tb, src)
    _triangle_clauses(tb, src, verts, wire_to_negation=False)
    tb.params["k"] = len(variables(src)) + 2 * len(clauses(src))
    return tb.finish(src)


def sat_to_is(src, **_):
    tb = TargetBuilder("IndependentSet")
    verts = _lit_vertices(tb, src)
    _triangle_clauses(tb, src, verts, wire_to_negation=True)
    tb.params["k"] = len(variables(src)) + len(clauses(src))
    return tb.finish(src)


def _copy_vertices(tb, src):
    for v in sorted(src.universe):
        tb.add(v, v)


def vc_to_ds(src, **_):
    tb = TargetBuilder("DominatingSet")
    _copy_vertices(tb, src)
    touched = set()
    for e in sorted(src.rel("edge")):
        u, v = e.members
        touched |= {u, v}
        mid = tb.add(e, gadget(e, "uv"))
        tb.add(e, edge(u, v), edge(u, mid), edge(mid, v))
    isolated = len(src.universe - touched)
    tb.params["k"] = src.param("k", 0) + isolated
    return tb.finish(src)


def vc_to_hs(src, **_):
    tb = TargetBuilder("HittingSet")
    _copy_vertices(tb, src)
    for e in sorted(src.rel("edge")):
        tb.add(e, Rel("set", e.members))
    tb.params["k"] = src.param("k", 0)
    return tb.finish(src)


def vc_to_fvs(src, **_):
    tb = TargetBuilder("FeedbackVertexSet")
    _copy_vertices(tb, src)
    for e in sorted(src.rel("edge")):
        u, v = e.members
        tb.add(e, Rel("arc", (u, v)), Rel("arc", (v, u)))
    tb.params["k"] = src.param("k", 0)
    return tb.finish(src)


def _complement_label(src, problem, label_in, label_out, **params):
    tb = TargetBuilder(problem, params)
    _copy_vertices(tb, src)
    for e in sorted(src.rel(label_in)):
        tb.add(e, edge(*e.members, label=label_out))
    return tb.finish(src)


def is_to_clique(src, **_):
    return _complement_label(src, "Clique", "edge", "non-edge", k=src.param("k", 0))


def kcol_to_cc(src, **_):
    return _complement_label(src, "CliqueCover", "edge", "non-edge", k=src.param("k", 3))


def sat_to_3col(src, **_):
    tb = TargetBuilder("KColoring", {"k": 3})
    B, F, T = const("B"), const("F"), const("T")
    tb.add(None, B, F, T, edge(B, F), edge(B, T), edge(F, T))
    verts = {}
    for p, n in variables(src):
        for l in (p, n):
            verts[l] = tb.add(l, gadget(l, "v"))
            tb.add(l, edge(verts[l], B))
        tb.add(Rel(NEG, (p, n)), edge(verts[p], verts[n]))
    for c in clauses(src):
        a = [tb.add(c, gadget(c, f"a{i}")) for i in range(3)]
        b = [tb.add(c, gadget(c, f"b{i}")) for i in range(3)]
        tb.add(c, edge(a[0], a[1]), edge(a[0], a[2]), edge(a[1], a[2]),
               edge(b[0], b[1]), edge(b[0], b[2]), edge(b[1], b[2]),
               edge(a[2], b[1]), edge(b[2], B), edge(b[2], F))
        l1, l2, l3 = c.members
        # one OR-triangle on the first two literals, the second adds the third
        for l, corner in ((l1, a[0]), (l2, a[1]), (l3, b[0])):
            tb.add(_lit_clause(c, l), edge(verts[l], corner))
    return tb.finish(src)


def kcol_to_next(src, **_):
    k = src.param("k", 3)
    tb = TargetBuilder("KColoring", {"k": k + 1})
    new = tb.add(None, const(f"new{k + 1}"))
    for v in sorted(src.universe):
        tb.add(v, v, edge(v, new))
    for e in sorted(src.rel("edge")):
        tb.add(e, e)
    return tb.finish(src)


def _same(s, **_):
    return s


def _plus(n):
    def f(s, **_):
        return s + n
    return f


for _entry in (
    CatalogEntry("3sat-vc", "ThreeSat", "VertexCover", sat_to_vc,
                 size=SizeFunction(variable=(1, 0), clause=(2, 0)), threshold="k"),
    CatalogEntry("vc-ds", "VertexCover", "DominatingSet", vc_to_ds, size_map=_same, base="3sat-vc",
                 threshold="k"),
    CatalogEntry("vc-hs", "VertexCover", "HittingSet", vc_to_hs, size_map=_same, base="3sat-vc",
                 threshold="k"),
    CatalogEntry("vc-fvs", "VertexCover", "FeedbackVertexSet", vc_to_fvs, size_map=_same,
                 base="3sat-vc", threshold="k"),
    CatalogEntry("3sat-is", "ThreeSat", "IndependentSet", sat_to_is,
                 size=SizeFunction(variable=(1, 0), clause=(1, 0)), threshold="k"),
    CatalogEntry("is-clique", "IndependentSet", "Clique", is_to_clique, size_map=_same,
                 base="3sat-is", threshold="k"),
    CatalogEntry("3sat-3col", "ThreeSat", "KColoring", sat_to_3col,
                 size=SizeFunction(constant=3, variable=(2, 0), clause=(6, 0))),
    CatalogEntry("3col-kcol", "KColoring", "KColoring", kcol_to_next, size_map=_plus(1),
                 base="3sat-3col"),
    CatalogEntry("kcol-cc", "KColoring", "CliqueCover", kcol_to_cc, size_map=_same, base="3col-kcol"),
):
    register_entry(_entry)
