"""Universe gadget reductions: gadget tables, property checks, composition,
solution sizes and the lift of a reduction to robust instances."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

from .distance import Measure
from .elements import Rel
from .errors import FamilyMismatch, InconsistentStats, PoolNotGadgetAligned
from .instance import Instance, family, remove_element
from .problems.sat import NEG, layout, variables
from .robust import RobustInstance, Stage, ThresholdRule
from .scenarios import EXPANSION_CAP, Explicit, expand

STRONG, WEAK = "strong", "weak"


@dataclass(frozen=True, eq=False)
class GadgetTable:
    constant: frozenset
    gadgets: Dict[object, frozenset]
    removals: Dict[object, frozenset] = field(default_factory=dict)

    @property
    def strength(self) -> str:
        return WEAK if any(self.removals.values()) else STRONG

    def images(self):
        yield self.constant
        yield from self.gadgets.values()
        yield from self.removals.values()

    def preimage(self, y):
        """Source element (or 'const' / ('removal', r)) owning target element y."""
        if y in self.constant:
            return "const"
        for x, img in self.gadgets.items():
            if y in img:
                return x
        for x, img in self.removals.items():
            if y in img:
                return ("removal", x)
        return None


class TargetBuilder:
    """Collects target elements together with the gadget that owns them.

    owner None means the constant gadget; removed=True files the elements
    under the removal gadget of `owner`.
    """

    def __init__(self, problem: str, params=None):
        self.problem = problem
        self.universe = set()
        self.relations = defaultdict(set)
        self.values = {}
        self.params = dict(params or {})
        self._const = []
        self._gadgets = defaultdict(list)
        self._removals = defaultdict(list)

    def add(self, owner, *elements, removed=False, value=None):
        if owner is None:
            bucket = self._const
        else:
            bucket = (self._removals if removed else self._gadgets)[owner]
        for e in elements:
            if isinstance(e, Rel):
                self.relations[e.label].add(e)
            else:
                self.universe.add(e)
            if value is not None:
                self.values[e] = value
            bucket.append(e)
        return elements[0] if len(elements) == 1 else elements

    def finish(self, src: Instance) -> Tuple[Instance, "GadgetTable"]:
        stray = set(self._gadgets) - src.elements()
        if stray:
            raise ValueError(f"gadgets keyed by non-source elements: {sorted(stray)[:3]}")
        inst = Instance(self.problem, self.universe, self.relations, self.params, self.values)
        # buckets keep duplicates so a double assignment stays visible to the check
        table = GadgetTable(
            _Multi(self._const),
            {x: _Multi(self._gadgets.get(x, ())) for x in sorted(src.elements())},
            {x: _Multi(v) for x, v in sorted(self._removals.items())},
        )
        return inst, table


class _Multi(frozenset):
    """frozenset that remembers how many times elements were filed."""

    def __new__(cls, items=()):
        items = list(items)
        obj = super().__new__(cls, items)
        obj.filed = len(items)
        return obj


def _filed(img) -> int:
    return getattr(img, "filed", len(img))


@dataclass(frozen=True)
class SatStats:
    """|L|, |C| of an instance and |L'|, |C'| of its originating full formula."""
    L: int
    C: int
    Lp: int
    Cp: int

    def __post_init__(self):
        if min(self.L, self.C, self.Lp, self.Cp) < 0:
            raise InconsistentStats("negative counts")
        if self.L % 2 or self.Lp % 2:
            raise InconsistentStats("literal counts must be even")
        if self.L > self.Lp or self.C > self.Cp:
            raise InconsistentStats("sub-instance larger than its originating instance")

    @classmethod
    def of(cls, inst: Instance) -> "SatStats":
        lits, cls_ = layout(inst)
        return cls(2 * len(inst.rel(NEG)), len(inst.rel("clause")), 2 * len(lits), len(cls_))

    @classmethod
    def coerce(cls, stats) -> "SatStats":
        if isinstance(stats, SatStats):
            return stats
        stats = dict(stats)
        L, C = stats["L"], stats["C"]
        return cls(L, C, stats.get("Lp", stats.get("L'", L)), stats.get("Cp", stats.get("C'", C)))


@dataclass(frozen=True)
class SizeFunction:
    """Target solution size as a sum of per-gadget contributions.

    Each contribution is a pair (a, b) meaning a + b * |C'|.
    """
    constant: int = 0
    variable: Tuple[int, int] = (0, 0)
    clause: Tuple[int, int] = (0, 0)
    removed_variable: Tuple[int, int] = (0, 0)
    removed_clause: Tuple[int, int] = (0, 0)

    def part(self, kind: str, cp: int) -> int:
        a, b = getattr(self, kind)
        return a + b * cp

    def counts(self, n_var, n_clause, n_rvar, n_rclause, cp) -> int:
        return (self.constant + n_var * self.part("variable", cp) + n_clause * self.part("clause", cp)
                + n_rvar * self.part("removed_variable", cp)
                + n_rclause * self.part("removed_clause", cp))

    def __call__(self, stats) -> int:
        s = SatStats.coerce(stats)
        return self.counts(s.L // 2, s.C, (s.Lp - s.L) // 2, s.Cp - s.C, s.Cp)


@dataclass(eq=False)
class CatalogEntry:
    name: str
    source: str
    target: str
    build: Callable
    size: Optional[SizeFunction] = None
    size_map: Optional[Callable] = None
    base: Optional[str] = None
    threshold: Optional[str] = None
    options: dict = field(default_factory=dict)
    parts: tuple = ()
    note: str = ""

    @property
    def ground(self) -> str:
        return family(self.target).ground

    def __repr__(self):
        return f"CatalogEntry({self.name}: {self.source} -> {self.target})"


CATALOG: Dict[str, CatalogEntry] = {}


def register_entry(entry: CatalogEntry) -> CatalogEntry:
    CATALOG[entry.name] = entry
    return entry


def get_entry(name) -> CatalogEntry:
    if isinstance(name, CatalogEntry):
        return name
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(CATALOG)}") from None


@dataclass
class ReductionResult:
    target: Instance
    table: GadgetTable
    size: Optional[int]


def apply_reduction(entry, src: Instance, **opts) -> ReductionResult:
    e = get_entry(entry)
    if src.problem != e.source:
        raise FamilyMismatch(f"{e.name} expects {e.source}, got {src.problem}")
    merged = {**e.options, **opts}
    target, table = e.build(src, **merged)
    size = None
    if e.size is not None:
        size = e.size(SatStats.of(src))
    elif e.size_map is not None and src.param("size") is not None:
        size = e.size_map(src.param("size"), **merged)
    if size is not None:
        params = dict(target.params)
        params["size"] = size
        target = target.replace(params=params)
    return ReductionResult(target, table, size)


def check_preimage_uniqueness(table: GadgetTable, target: Instance) -> bool:
    images = list(table.images())
    union = frozenset().union(*images)
    return union == target.elements() and sum(_filed(i) for i in images) == len(union)


def check_modularity(entry, src: Instance, r, **opts) -> bool:
    """Reducing src without r equals deleting the gadgets of everything r takes
    with it from the full reduction and adding r's removal gadgets."""
    e = get_entry(entry)
    sub = remove_element(src, r)
    full = apply_reduction(e, src, **opts)
    part = apply_reduction(e, sub, **opts)
    dropped = src.elements() - sub.elements()
    expected = set(full.target.elements())
    for d in dropped:
        expected -= full.table.gadgets.get(d, frozenset())
    gained = set()
    for x, img in part.table.removals.items():
        if x not in full.table.removals:
            gained |= img
    expected |= gained
    if expected != part.target.elements():
        return False
    # element values agree outside the constant gadget
    for y, v in part.target.values.items():
        if y in full.table.constant or y in gained:
            continue
        if full.target.values.get(y) != v:
            return False
    return True


def compose(f, g, name=None) -> CatalogEntry:
    f, g = get_entry(f), get_entry(g)
    if f.target != g.source:
        raise FamilyMismatch(f"{f.name} produces {f.target}, {g.name} expects {g.source}")

    def build(src, **opts):
        first = apply_reduction(f, src, **{k: v for k, v in opts.items() if k in f.options})
        second = apply_reduction(g, first.target, **{k: v for k, v in opts.items() if k in g.options})
        t1, t2 = first.table, second.table

        def through(img):
            out = []
            for y in sorted(img):
                out.extend(t2.gadgets.get(y, ()))
            return out

        const = through(t1.constant) + list(t2.constant)
        gadgets = {x: _Multi(through(img)) for x, img in t1.gadgets.items()}
        removals = {x: _Multi(through(img)) for x, img in t1.removals.items()}
        for x, img in t2.removals.items():
            removals[("removal", x)] = img
        target = second.target
        params = {k: v for k, v in target.params.items() if k != "size"}
        return target.replace(params=params), GadgetTable(_Multi(const), gadgets, removals)

    return CatalogEntry(name or f"{f.name}+{g.name}", f.source, g.target, build,
                        options={**f.options, **g.options}, threshold=g.threshold,
                        parts=(f.parts or (f,)) + (g.parts or (g,)))


def evaluate_size(entry, stats, **opts) -> int:
    """Solution size of the target for a 3SAT source with the given stats.

    Entries that do not start at 3SAT are evaluated along their canonical
    chain back to a 3SAT entry.
    """
    e = get_entry(entry)
    stats = SatStats.coerce(stats)
    if e.parts:
        value = None
        for p in e.parts:
            value = evaluate_size(p, stats, **opts) if value is None else p.size_map(value, **{**p.options, **opts})
        return value
    if e.size is not None:
        return e.size(stats)
    if e.base is None or e.size_map is None:
        raise ValueError(f"{e.name} has no solution size function")
    return e.size_map(evaluate_size(e.base, stats, **opts), **{**e.options, **opts})


# -- lifting to robust instances

def _var_names(inst):
    return {p for p, _ in variables(inst)}


def _aligned(ri: RobustInstance, active):
    for p, n in variables(ri.instance):
        if (p in ri.pool or n in ri.pool) and ((p in active) != (n in active)):
            raise PoolNotGadgetAligned(f"scenario toggles only one literal of {p!r}")


def lift_to_robust(entry, ri: RobustInstance, cap: int = EXPANSION_CAP, **opts) -> RobustInstance:
    """Map a robust 3SAT instance to a robust instance of the entry's target.

    Every scenario instance is reduced; the target's full instance is the
    union of those reductions, so each target scenario is exactly the
    reduction of the matching source scenario.  Scenarios are emitted as
    explicit sets.
    """
    e = get_entry(entry)
    if e.source != "ThreeSat":
        raise FamilyMismatch(f"{e.name} does not start at ThreeSat")
    size_fn = e.size
    if size_fn is None and not e.parts:
        raise ValueError(f"{e.name} has no solution size function")
    levels = [[ri.base_active]] + [list(expand(st.scenarios, cap)) for st in ri.stages]
    for lvl in levels:
        for act in lvl:
            _aligned(ri, act)

    full = apply_reduction(e, ri.instance, **opts)
    reduced = {}
    for lvl in levels:
        for act in lvl:
            if act not in reduced:
                reduced[act] = apply_reduction(e, ri.scenario_instance(act), **opts)

    universe, relations, values = set(full.target.universe), defaultdict(set), dict(full.target.values)
    for label, items in full.target.relations.items():
        relations[label] |= items
    for res in reduced.values():
        universe |= res.target.universe
        for label, items in res.target.relations.items():
            relations[label] |= items
        for y, v in res.target.values.items():
            if values.setdefault(y, v) != v:
                raise ValueError(f"value of {y!r} differs between scenarios")
    params = {k: v for k, v in full.target.params.items() if k != "size"}
    target = Instance(e.target, universe, relations, params, values)
    always = set.intersection(*[res.target.elements() for res in reduced.values()])
    pool = target.elements() - always

    def act_of(act):
        return frozenset(reduced[act].target.elements() & pool)

    rule = _threshold_rule(e, full, ri, reduced, opts) if e.threshold else None
    stages = []
    for i, st in enumerate(ri.stages):
        kappa = _lifted_kappa(e, ri, levels[i], levels[i + 1], st, opts)
        stages.append(Stage(Explicit([act_of(a) for a in levels[i + 1]]), kappa, st.measure))
    return RobustInstance(target, pool, act_of(ri.base_active), stages, rule)


def _size(e, n_var, n_clause, n_rvar, n_rclause, cp, opts):
    if e.size is not None:
        return e.size.counts(n_var, n_clause, n_rvar, n_rclause, cp)
    # composite: push the 3SAT size through the affine maps
    first = e.parts[0].size.counts(n_var, n_clause, n_rvar, n_rclause, cp)
    for p in e.parts[1:]:
        first = p.size_map(first, **{**p.options, **opts})
    return first


def _lifted_kappa(e, ri, prev_level, level, st, opts):
    lits, all_clauses = layout(ri.instance)
    all_vars, all_clauses = set(lits), set(all_clauses)
    cp = len(all_clauses)
    src_budgets, budgets = set(), set()
    for p in prev_level:
        pi = ri.scenario_instance(p)
        pv, pc = _var_names(pi), set(pi.rel("clause"))
        for s in level:
            si = ri.scenario_instance(s)
            sv, sc = _var_names(si), set(si.rel("clause"))
            add, dele = len(sv - pv), len(pv - sv)
            src_budgets.add(add + (dele if st.measure is Measure.SYMMETRIC else 0))
            common = _size(e, len(sv & pv), len(sc & pc), len(all_vars - sv - pv),
                           len(all_clauses - sc - pc), cp, opts)
            k = _size(e, len(sv), len(sc), len(all_vars - sv), len(all_clauses - sc), cp, opts) - common
            if st.measure is Measure.SYMMETRIC:
                k += _size(e, len(pv), len(pc), len(all_vars - pv), len(all_clauses - pc), cp, opts) - common
            budgets.add(k)
    if src_budgets and src_budgets != {st.kappa}:
        raise ValueError(f"stage budget {st.kappa} is not the locking budget {sorted(src_budgets)}")
    if len(budgets) > 1:
        raise ValueError(f"scenarios need different target budgets {sorted(budgets)}")
    return budgets.pop() if budgets else 0


def _threshold_rule(e, full, ri, reduced, opts):
    """Threshold = size: one representative target element per source gadget."""
    sizes = e.parts[0].size if e.parts else e.size
    lits, all_clauses = layout(ri.instance)
    cp = len(all_clauses)
    weights = []
    tables = [full.table] + [r.table for r in reduced.values()]

    def rep(key, removed, weight):
        if not weight:
            return
        for t in tables:
            img = (t.removals if removed else t.gadgets).get(key)
            if img:
                weights.append((min(img), weight))
                return
        raise ValueError(f"no target element represents {key!r}")

    for p in lits:
        rep(p, False, sizes.part("variable", cp))
        rep(p, True, sizes.part("removed_variable", cp))
    for c in all_clauses:
        rep(c, False, sizes.part("clause", cp))
        rep(c, True, sizes.part("removed_clause", cp))
    rule = ThresholdRule(e.threshold, _size(e, 0, 0, 0, 0, cp, opts), tuple(weights))
    for res in reduced.values():
        if rule.apply(res.target).param(e.threshold) != res.target.param(e.threshold):
            raise ValueError("threshold is not additive over gadgets")
    return rule
