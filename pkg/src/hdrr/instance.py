"""Instances, solutions, element removal and the per-family registry."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Iterator, Mapping, Optional

from .distance import Measure, hamming
from .elements import ElementId, Rel
from .errors import BudgetExceeded, MalformedCandidate, NotRemovable, UnknownElement

# hard limit on ground items any exhaustive enumerator will accept
HARD_LIMIT = 400


def _freeze(value):
    if isinstance(value, dict):
        return tuple(sorted((k, _freeze(v)) for k, v in value.items()))
    if isinstance(value, list):
        return tuple(_freeze(v) for v in value)
    return value


class Instance:
    """Immutable problem instance: universe, labelled relations, params, values.

    `values` attaches integers (or tuples) to elements, e.g. the value of a
    number in SubsetSum.  `params` holds thresholds and bookkeeping such as
    the originating layout of a 3SAT formula.
    """

    __slots__ = ("problem", "universe", "relations", "params", "values", "_hash")

    def __init__(self, problem: str, universe: Iterable[ElementId] = (),
                 relations: Optional[Mapping[str, Iterable[Rel]]] = None,
                 params: Optional[Mapping[str, Any]] = None,
                 values: Optional[Mapping[Any, Any]] = None):
        self.problem = problem
        self.universe = frozenset(universe)
        rels = {}
        for label, items in (relations or {}).items():
            rels[label] = frozenset(items)
        self.relations = rels
        self.params = dict(params or {})
        self.values = dict(values or {})
        self._hash = None

    # -- views
    def rel(self, label) -> frozenset:
        return self.relations.get(label, frozenset())

    def all_relation_elements(self) -> set:
        out = set()
        for items in self.relations.values():
            out |= items
        return out

    def elements(self) -> set:
        return set(self.universe) | self.all_relation_elements()

    def param(self, name, default=None):
        return self.params.get(name, default)

    def structure_key(self):
        rels = tuple(sorted((k, tuple(sorted(v))) for k, v in self.relations.items() if v))
        vals = tuple(sorted(self.values.items(), key=lambda kv: kv[0].key))
        return (self.problem, tuple(sorted(self.universe)), rels, vals)

    def key(self):
        return self.structure_key() + (_freeze(self.params),)

    def same_structure(self, other: "Instance") -> bool:
        """Equality of universe, relations and element values (params ignored)."""
        return self.structure_key() == other.structure_key()

    def __eq__(self, other):
        return isinstance(other, Instance) and self.key() == other.key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def replace(self, **kw) -> "Instance":
        fields = dict(problem=self.problem, universe=self.universe, relations=self.relations,
                      params=self.params, values=self.values)
        fields.update(kw)
        return Instance(**fields)

    def __repr__(self):
        sizes = ", ".join(f"{k}={len(v)}" for k, v in sorted(self.relations.items()))
        return f"Instance({self.problem}, |U|={len(self.universe)}, {sizes})"


@dataclass(frozen=True)
class Solution:
    elements: frozenset
    structure: Any = None

    def __post_init__(self):
        object.__setattr__(self, "elements", frozenset(self.elements))

    def __len__(self):
        return len(self.elements)


def drop_elements(inst: Instance, removed: set) -> Instance:
    """Remove a set of elements and close the relations transitively."""
    removed = set(removed)
    universe = inst.universe - removed
    dead_cache: dict = {}

    def dead(e):
        if e in removed:
            return True
        if isinstance(e, Rel):
            hit = dead_cache.get(e)
            if hit is None:
                hit = any(dead(m) for m in e.members)
                dead_cache[e] = hit
            return hit
        return False

    relations = {label: frozenset(r for r in items if not dead(r))
                 for label, items in inst.relations.items()}
    values = {k: v for k, v in inst.values.items() if not dead(k)}
    return inst.replace(universe=universe, relations=relations, values=values)


class Problem:
    """Per-family behaviour.  Subclasses override the hooks they need."""

    tag = ""
    ground = "vertices"
    labels: tuple = ()
    fixed_marks: tuple = ()  # relation labels whose members cannot be removed

    # -- structure
    def ground_items(self, inst: Instance) -> set:
        return set(inst.universe)

    def removal_set(self, inst: Instance, r) -> set:
        if r not in inst.universe and r not in inst.all_relation_elements():
            raise UnknownElement(r)
        for label in self.fixed_marks:
            for m in inst.rel(label):
                if r == m or r in m.members:
                    raise NotRemovable(f"{r!r} is a schema-mandatory element")
        return {r}

    def after_removal(self, before: Instance, after: Instance) -> Instance:
        return after

    # -- solutions
    def check_candidate(self, inst: Instance, cand: Solution):
        extra = set(cand.elements) - self.ground_items(inst)
        if extra:
            raise MalformedCandidate(f"elements not in instance: {sorted(extra)[:5]}")

    def verify(self, inst: Instance, cand: Solution) -> bool:
        raise NotImplementedError

    def solutions(self, inst: Instance) -> Iterator[Solution]:
        raise NotImplementedError

    def near(self, inst: Instance, ref, measure: Measure, budget: int,
             keep=None) -> Iterator[Solution]:
        """Solutions within distance `budget` of `ref`.

        Implementations may skip solutions that agree with an already yielded
        one on (size, footprint & keep) and are not closer to ref.
        """
        for s in self.solutions(inst):
            if hamming(ref, s.elements, measure) <= budget:
                yield s

    def guard(self, inst: Instance, n: int):
        if n > HARD_LIMIT:
            raise BudgetExceeded(f"{self.tag}: {n} ground items above limit {HARD_LIMIT}")


REGISTRY: dict = {}


def register(cls):
    REGISTRY[cls.tag] = cls()
    return cls


def family(tag_or_inst) -> Problem:
    tag = tag_or_inst.problem if isinstance(tag_or_inst, Instance) else tag_or_inst
    try:
        return REGISTRY[tag]
    except KeyError:
        raise ValueError(f"unknown problem family {tag!r}") from None


def verify(inst: Instance, cand: Solution) -> bool:
    fam = family(inst)
    fam.check_candidate(inst, cand)
    return fam.verify(inst, cand)


def enumerate_solutions(inst: Instance, cap: Optional[int] = None) -> Iterator[Solution]:
    for i, s in enumerate(family(inst).solutions(inst)):
        if cap is not None and i >= cap:
            return
        yield s


def brute_solve(inst: Instance) -> Optional[Solution]:
    return next(iter(family(inst).solutions(inst)), None)


def remove_element(inst: Instance, r) -> Instance:
    fam = family(inst)
    doomed = fam.removal_set(inst, r)
    return fam.after_removal(inst, drop_elements(inst, doomed))


def distance_ground_kind(tag: str) -> str:
    return family(tag).ground
