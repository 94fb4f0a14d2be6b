"""Instance documents, DIMACS / QDIMACS / DOT text formats and seeded generators."""
from __future__ import annotations

import json
import random
from itertools import combinations

from .distance import Measure
from .elements import ElementId, Rel, atom
from .errors import NotAGraph, ParseError, SchemaVersionError, WidthError
from .framework import GadgetTable, _Multi
from .instance import Instance, Solution, family
from .problems.graphs import graph
from .problems.numbers import numbers_instance
from .problems.sat import clauses as sat_clauses, sat_instance, variables
from .qbf import QaeFormula
from .robust import RobustInstance, Stage, ThresholdRule, WitnessNode
from .scenarios import Explicit, GammaSets, XorDependencies

SCHEMA_VERSION = 1

# -- tagged value encoding


def encode(x):
    if isinstance(x, ElementId):
        if x.source is None:
            return {"$" + x.kind: x.label}
        return {"$" + x.kind: [encode(x.source), x.local]}
    if isinstance(x, Rel):
        return {"$rel": [x.label, [encode(m) for m in x.members]]}
    if isinstance(x, Measure):
        return x.value
    if isinstance(x, (frozenset, set)):
        return {"$set": [encode(v) for v in sorted(x, key=_sort_key)]}
    if isinstance(x, tuple):
        return {"$tuple": [encode(v) for v in x]}
    if isinstance(x, list):
        return [encode(v) for v in x]
    if isinstance(x, dict):
        return {"$map": [[encode(k), encode(v)] for k, v in sorted(x.items(), key=lambda kv: _sort_key(kv[0]))]}
    if x is None or isinstance(x, (bool, int, str)):
        return x
    raise TypeError(f"cannot encode {type(x).__name__}")


def _sort_key(x):
    # elements sort by their structural key; plain values by type name then value
    if isinstance(x, (ElementId, Rel)):
        return (0, x.key)
    return (1, type(x).__name__, repr(x))


def decode(x):
    if isinstance(x, list):
        return [decode(v) for v in x]
    if not isinstance(x, dict):
        return x
    if len(x) != 1:
        raise ParseError(f"tagged value expected, got keys {sorted(x)}")
    (tag, body), = x.items()
    if tag in ("$atom", "$const"):
        return ElementId(tag[1:], body)
    if tag in ("$gadget", "$removal"):
        return ElementId(tag[1:], source=decode(body[0]), local=body[1])
    if tag == "$rel":
        return Rel(body[0], [decode(m) for m in body[1]])
    if tag == "$set":
        return frozenset(decode(v) for v in body)
    if tag == "$tuple":
        return tuple(decode(v) for v in body)
    if tag == "$map":
        return {decode(k): decode(v) for k, v in body}
    raise ParseError(f"unknown tag {tag!r}")


# -- documents

def _instance_doc(inst: Instance):
    return {"problem": inst.problem, "universe": encode(inst.universe),
            "relations": {k: encode(v) for k, v in sorted(inst.relations.items())},
            "params": encode(inst.params), "values": encode(inst.values)}


def _instance_of(d):
    return Instance(d["problem"], decode(d["universe"]),
                    {k: decode(v) for k, v in d["relations"].items()},
                    decode(d["params"]), decode(d["values"]))


def _scenarios_doc(s):
    if isinstance(s, Explicit):
        return {"encoding": "explicit", "sets": encode(list(s.sets))}
    if isinstance(s, XorDependencies):
        return {"encoding": "xor", "fixed": encode(s.fixed), "pairs": encode(list(s.pairs))}
    if isinstance(s, GammaSets):
        return {"encoding": "gamma", "fixed": encode(s.fixed), "groups": encode(list(s.groups)),
                "gamma": s.gamma}
    raise TypeError(f"unknown scenario encoding {type(s).__name__}")


def _scenarios_of(d):
    kind = d["encoding"]
    if kind == "explicit":
        return Explicit(decode(d["sets"]))
    if kind == "xor":
        return XorDependencies(decode(d["fixed"]), decode(d["pairs"]))
    if kind == "gamma":
        return GammaSets(decode(d["fixed"]), decode(d["groups"]), d["gamma"])
    raise ParseError(f"unknown scenario encoding {kind!r}")


def _robust_doc(ri: RobustInstance):
    doc = {"instance": _instance_doc(ri.instance), "pool": encode(ri.pool),
           "base_active": encode(ri.base_active),
           "stages": [{"kappa": st.kappa, "measure": st.measure.value,
                       "scenarios": _scenarios_doc(st.scenarios)} for st in ri.stages]}
    if ri.rule is not None:
        doc["rule"] = {"param": ri.rule.param, "constant": ri.rule.constant,
                       "weights": encode(ri.rule.weights)}
    return doc


def _robust_of(d):
    stages = [Stage(_scenarios_of(s["scenarios"]), s["kappa"], s["measure"]) for s in d["stages"]]
    rule = None
    if "rule" in d:
        r = d["rule"]
        rule = ThresholdRule(r["param"], r["constant"], decode(r["weights"]))
    return RobustInstance(_instance_of(d["instance"]), decode(d["pool"]), decode(d["base_active"]),
                          stages, rule)


def _witness_doc(w: WitnessNode):
    return {"solution": encode(w.solution.elements),
            "children": [[j, _witness_doc(c)] for j, c in sorted(w.children.items())]}


def _witness_of(d):
    return WitnessNode(Solution(decode(d["solution"])),
                       {j: _witness_of(c) for j, c in d["children"]})


def _table_doc(t: GadgetTable):
    return {"constant": encode(frozenset(t.constant)),
            "gadgets": [[encode(x), encode(frozenset(img))] for x, img in t.gadgets.items()],
            "removals": [[encode(x), encode(frozenset(img))] for x, img in t.removals.items()]}


def _table_of(d):
    return GadgetTable(_Multi(decode(d["constant"])),
                       {decode(x): _Multi(decode(img)) for x, img in d["gadgets"]},
                       {decode(x): _Multi(decode(img)) for x, img in d["removals"]})


def _qae_doc(f: QaeFormula):
    return {"blocks": [list(b) for b in f.blocks], "clauses": [list(c) for c in f.clauses]}


def _qae_of(d):
    return QaeFormula(d["blocks"], d["clauses"])


_KINDS = [
    ("robust", RobustInstance, _robust_doc, _robust_of),
    ("instance", Instance, _instance_doc, _instance_of),
    ("witness", WitnessNode, _witness_doc, _witness_of),
    ("table", GadgetTable, _table_doc, _table_of),
    ("qae", QaeFormula, _qae_doc, _qae_of),
]


def to_document(obj) -> dict:
    for kind, cls, emit, _ in _KINDS:
        if isinstance(obj, cls):
            return {"schema": SCHEMA_VERSION, "kind": kind, "body": emit(obj)}
    raise TypeError(f"no document form for {type(obj).__name__}")


def from_document(doc: dict):
    if not isinstance(doc, dict) or "schema" not in doc:
        raise ParseError("not an instance document")
    if doc["schema"] != SCHEMA_VERSION:
        raise SchemaVersionError(f"unsupported schema version {doc['schema']!r}")
    for kind, _, _, parse in _KINDS:
        if doc.get("kind") == kind:
            try:
                return parse(doc["body"])
            except (KeyError, TypeError, IndexError) as exc:
                raise ParseError(f"malformed {kind} document: {exc}") from exc
    raise ParseError(f"unknown document kind {doc.get('kind')!r}")


def dumps(obj, indent=None) -> str:
    return json.dumps(to_document(obj), sort_keys=True, indent=indent)


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc), exc.lineno) from exc
    return from_document(doc)


# -- DIMACS / QDIMACS

def _dimacs_tokens(text):
    """(line number, header or clause tokens) pairs, comments dropped."""
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        yield no, line


def _read_cnf(text, allow_quantifiers=False):
    header, blocks, clauses, pending = None, [], [], []
    for no, line in _dimacs_tokens(text):
        parts = line.split()
        if parts[0] == "p":
            if header is not None:
                raise ParseError("second problem line", no)
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"malformed header {line!r}", no)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise ParseError(f"malformed header {line!r}", no) from None
            if min(header) < 0:
                raise ParseError("negative counts in header", no)
            continue
        if header is None:
            raise ParseError("clause before problem line", no)
        if parts[0] in ("e", "a"):
            if not allow_quantifiers or clauses or pending:
                raise ParseError("unexpected quantifier line", no)
            blocks.append((parts[0], _ints(parts[1:], no, header[0], terminated=True)))
            continue
        for v in _ints(parts, no, header[0]):
            if v == 0:
                if len(pending) > 3:
                    raise WidthError(f"clause of width {len(pending)} (at most 3)", no)
                if not pending:
                    raise ParseError("empty clause", no)
                clauses.append(tuple(pending))
                pending = []
            else:
                pending.append(v)
    if header is None:
        raise ParseError("missing problem line")
    if pending:
        raise ParseError("last clause is not terminated by 0")
    if len(clauses) != header[1]:
        raise ParseError(f"header announces {header[1]} clauses, found {len(clauses)}")
    return header[0], blocks, clauses


def _ints(parts, no, n_vars, terminated=False):
    try:
        vals = [int(p) for p in parts]
    except ValueError:
        raise ParseError(f"non-integer token in {' '.join(parts)!r}", no) from None
    if terminated:
        if not vals or vals[-1] != 0:
            raise ParseError("quantifier line must end with 0", no)
        vals = vals[:-1]
    for v in vals:
        if abs(v) > n_vars:
            raise ParseError(f"variable {abs(v)} exceeds header count {n_vars}", no)
    return vals


def _lit_text(v):
    return f"x{abs(v)}" if v > 0 else f"~x{abs(v)}"


def parse_dimacs_cnf(text: str) -> Instance:
    n, _, clauses = _read_cnf(text)
    # distinct literals per clause; duplicates are padding anyway
    return sat_instance([f"x{i}" for i in range(1, n + 1)],
                        [list(dict.fromkeys(_lit_text(v) for v in c)) for c in clauses])


def emit_dimacs_cnf(inst: Instance) -> str:
    names = [p.label for p, _ in variables(inst)]
    num = {name: i for i, name in enumerate(names, 1)}
    lines = [f"p cnf {len(names)} {len(inst.rel('clause'))}"]
    for c in sat_clauses(inst):
        lits = dict.fromkeys(l.label for l in c.members)
        lines.append(" ".join(str(-num[l[1:]] if l.startswith("~") else num[l]) for l in lits) + " 0")
    return "\n".join(lines) + "\n"


def parse_qdimacs(text: str) -> QaeFormula:
    n, blocks, clauses = _read_cnf(text, allow_quantifiers=True)
    quantified = [v for _, b in blocks for v in b]
    if len(set(quantified)) != len(quantified):
        raise ParseError("variable quantified twice")
    free = [v for v in range(1, n + 1) if v not in set(quantified)]
    # free variables are existential and outermost
    merged = []
    for q, b in ([("e", free)] if free else []) + blocks:
        if merged and merged[-1][0] == q:
            merged[-1][1].extend(b)
        else:
            merged.append((q, list(b)))
    if not merged or merged[0][0] != "e":
        merged.insert(0, ("e", []))
    if merged[-1][0] != "e":
        merged.append(("e", []))
    return QaeFormula([[f"x{v}" for v in b] for _, b in merged],
                      [tuple(_lit_text(v) for v in c) for c in clauses])


def emit_qdimacs(f: QaeFormula) -> str:
    names = f.variables()
    num = {v: i for i, v in enumerate(names, 1)}
    body = []
    for c in f.clauses:
        lits = dict.fromkeys(c)
        body.append(" ".join(str(-num[l[1:]] if l.startswith("~") else num[l]) for l in lits) + " 0")
    lines = [f"p cnf {len(names)} {len(body)}"]
    for i, b in enumerate(f.blocks):
        if b:
            lines.append(("e " if i % 2 == 0 else "a ") + " ".join(str(num[v]) for v in b) + " 0")
    return "\n".join(lines + body) + "\n"


# -- DOT

_LINKS = {"edge": "--", "non-edge": "--", "arc": "->"}


def _dot_id(x):
    return json.dumps(repr(x))


def emit_dot(inst: Instance, table: GadgetTable = None) -> str:
    links = [r for label in _LINKS for r in sorted(inst.rel(label))]
    if not any(label in inst.relations for label in _LINKS) and family(inst).ground not in (
            "vertices", "edges", "arcs"):
        raise NotAGraph(f"{inst.problem} is not a graph family")
    directed = "arc" in inst.relations
    kind, op = ("digraph", "->") if directed else ("graph", "--")
    marks = {}
    for label, items in sorted(inst.relations.items()):
        if label in _LINKS:
            continue
        for r in items:
            if len(r.members) == 1:
                marks.setdefault(r.members[0], []).append(label)

    def node(v):
        if v in marks:
            return f"{_dot_id(v)} [xlabel={json.dumps(','.join(sorted(marks[v])))}];"
        return f"{_dot_id(v)};"

    def link(r):
        a, b = r.members[:2]
        style = " [style=dashed]" if r.label == "non-edge" else ""
        return f"{_dot_id(a)} {op} {_dot_id(b)}{style};"

    lines = [f"{kind} G {{"]
    placed = set()
    if table is not None:
        groups = [("constant", table.constant)]
        groups += [(repr(x), img) for x, img in table.gadgets.items()]
        groups += [(f"removal {x!r}", img) for x, img in table.removals.items()]
        n = 0
        for name, img in groups:
            inner = [y for y in sorted(img) if y in inst.universe or y in links]
            if not inner:
                continue
            lines.append(f"  subgraph cluster_{n} {{")
            lines.append(f"    label={json.dumps(name)};")
            for y in inner:
                lines.append("    " + (link(y) if isinstance(y, Rel) else node(y)))
                placed.add(y)
            lines.append("  }")
            n += 1
    for v in sorted(inst.universe):
        if v not in placed:
            lines.append("  " + node(v))
    for r in links:
        if r not in placed:
            lines.append("  " + link(r))
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- seeded generators

def random_3sat(rng: random.Random, n_vars: int, n_clauses: int, width: int = 3) -> Instance:
    """Clauses drawn uniformly over sets of distinct variables with random signs."""
    names = [f"x{i}" for i in range(1, n_vars + 1)]
    clauses = []
    for _ in range(n_clauses if names else 0):
        picks = rng.sample(names, min(width, len(names)))
        clauses.append([v if rng.random() < 0.5 else "~" + v for v in picks])
    return sat_instance(names, clauses)


def random_graph(rng: random.Random, n: int, p: float = 0.5, problem="VertexCover",
                 directed=False, **params) -> Instance:
    verts = [f"v{i}" for i in range(n)]
    pairs = [(a, b) for a in verts for b in verts if a != b] if directed else list(combinations(verts, 2))
    chosen = [e for e in pairs if rng.random() < p]
    return graph(verts, chosen, problem, "arc" if directed else "edge", params)


def random_numbers(rng: random.Random, n: int, top: int = 9, problem="SubsetSum", **params) -> Instance:
    values = [rng.randint(0, top) for _ in range(n)]
    if problem == "Knapsack":
        values = [(v, rng.randint(0, top)) for v in values]
    if problem == "SubsetSum" and "target" not in params:
        params["target"] = sum(v for v in values if rng.random() < 0.5)
    return numbers_instance(problem, values, params)


def random_robust_sat(rng: random.Random, n_vars: int = 3, n_clauses: int = 3, n_scenarios: int = 3,
                      measure=Measure.ADDITIONS) -> RobustInstance:
    """One-stage robust 3SAT whose scenarios all switch on the same number of
    pool variables and pool clauses, starting from a base without them.

    The uniform shape keeps every lifted budget constant across scenarios.
    """
    measure = Measure.parse(measure)
    names = [f"x{i}" for i in range(1, n_vars + 1)]
    # mixed widths: short clauses make NO instances reasonably common
    picks = [rng.sample(names, rng.randint(1, min(3, n_vars))) for _ in range(n_clauses)]
    full = sat_instance(names, [[v if rng.random() < 0.5 else "~" + v for v in c] for c in picks])
    vars_ = variables(full)
    n_pool = rng.randint(1, len(vars_))
    pool_vars = rng.sample(vars_, n_pool)
    pool_names = {p for p, _ in pool_vars}
    # clauses touching a pool variable are pool clauses
    pool_clauses = [c for c in sat_clauses(full)
                    if any(atom(l.label.lstrip("~")) in pool_names for l in c.members)]
    pool = frozenset([l for pair in pool_vars for l in pair] + pool_clauses)
    k_vars = rng.randint(1, n_pool)
    options = []
    for vs in combinations(sorted(pool_vars), k_vars):
        names = {p for p, _ in vs}
        supported = [c for c in pool_clauses
                     if all(atom(l.label.lstrip("~")) in names or atom(l.label.lstrip("~")) not in pool_names
                            for l in c.members)]
        options.append((vs, supported))
    k_clauses = rng.randint(0, min(len(s) for _, s in options))
    scen = set()
    for vs, supported in options:
        for cs in combinations(supported, k_clauses):
            scen.add(frozenset([l for pair in vs for l in pair] + list(cs)))
    scen = sorted(scen, key=lambda s: sorted(s))
    rng.shuffle(scen)
    scen = scen[:n_scenarios]
    stage = Stage(Explicit(scen), k_vars, measure)
    return RobustInstance(full, pool, frozenset(), [stage])
