"""Robust instances and the exact quantifier-expansion solver."""
from __future__ import annotations

import signal
import threading
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from .distance import Measure, hamming
from .errors import BudgetExceeded, MalformedCandidate, ShapeMismatch, SolverTimeout
from .instance import Instance, Solution, enumerate_solutions, family, verify
from .scenarios import EXPANSION_CAP, apply_scenario, count_scenarios, expand


@dataclass(frozen=True)
class Stage:
    scenarios: object
    kappa: int
    measure: Measure = Measure.SYMMETRIC

    def __post_init__(self):
        object.__setattr__(self, "measure", Measure.parse(self.measure))
        if self.kappa < 0:
            raise ValueError("kappa must be non-negative")


@dataclass(frozen=True)
class ThresholdRule:
    """Scenario-dependent threshold: param = constant + sum of weights of present elements.

    Lifted instances need this because a reduction's threshold (e.g. the
    cover size k) depends on which source elements are active.
    """
    param: str
    constant: int
    weights: Tuple[Tuple[object, int], ...]

    def apply(self, inst: Instance) -> Instance:
        present = inst.elements()
        value = self.constant + sum(w for e, w in self.weights if e in present)
        params = dict(inst.params)
        params[self.param] = value
        return inst.replace(params=params)


class RobustInstance:
    """Full instance + uncertain pool + base activation + ordered stages."""

    def __init__(self, instance: Instance, pool, base_active, stages=(), rule: Optional[ThresholdRule] = None):
        self.instance = instance
        self.pool = frozenset(pool)
        self.base_active = frozenset(base_active)
        self.stages = tuple(stages)
        self.rule = rule
        self._cache: Dict[frozenset, Instance] = {}

    @property
    def ground(self) -> str:
        return family(self.instance).ground

    @property
    def m(self) -> int:
        return len(self.stages)

    def scenario_instance(self, active) -> Instance:
        active = frozenset(active)
        hit = self._cache.get(active)
        if hit is None:
            hit = apply_scenario(self.instance, active, self.pool)
            if self.rule is not None:
                hit = self.rule.apply(hit)
            self._cache[active] = hit
        return hit

    @property
    def base(self) -> Instance:
        return self.scenario_instance(self.base_active)

    def key(self):
        return (self.instance.key(), tuple(sorted(self.pool)), tuple(sorted(self.base_active)),
                self.stages, self.rule)

    def __eq__(self, other):
        return isinstance(other, RobustInstance) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"RobustInstance({self.instance!r}, pool={len(self.pool)}, stages={len(self.stages)})"


@dataclass
class WitnessNode:
    solution: Solution
    children: Dict[int, "WitnessNode"] = field(default_factory=dict)


Witness = WitnessNode


@dataclass
class RobustResult:
    decision: bool
    witness: Optional[Witness] = None
    explored: int = 0


class _Clock:
    def __init__(self, timeout, node_cap):
        self.deadline = None if timeout is None else time.monotonic() + timeout
        self.node_cap = node_cap
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.node_cap is not None and self.nodes > self.node_cap:
            raise BudgetExceeded(f"more than {self.node_cap} candidate solutions examined")
        if self.deadline is not None and self.nodes % 64 == 0 and time.monotonic() > self.deadline:
            raise SolverTimeout("solver timeout")


@contextmanager
def _alarm(timeout):
    """Hard deadline via SIGALRM; enumerators may search long without yielding."""
    if timeout is None or not hasattr(signal, "setitimer") \
            or threading.current_thread() is not threading.main_thread():
        yield
        return

    def fire(signum, frame):
        raise SolverTimeout(f"solver timeout after {timeout}s")

    old = signal.signal(signal.SIGALRM, fire)
    signal.setitimer(signal.ITIMER_REAL, max(timeout, 1e-6))
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def stage_grounds(ri: RobustInstance, cap=EXPANSION_CAP):
    """Ground items reachable in each stage (plus an empty sentinel)."""
    out = []
    for st in ri.stages:
        widest = set(st.scenarios.members()) & ri.pool
        inst = apply_scenario(ri.instance, widest, ri.pool)
        out.append(frozenset(family(inst).ground_items(inst)))
    out.append(frozenset())
    return out


def solve_robust(ri: RobustInstance, timeout: Optional[float] = None, cap: int = EXPANSION_CAP,
                 node_cap: Optional[int] = None) -> RobustResult:
    with _alarm(timeout):
        return _solve(ri, _Clock(timeout, node_cap), cap)


def _solve(ri: RobustInstance, clock: "_Clock", cap: int) -> RobustResult:
    scen = [list(expand(st.scenarios, cap)) for st in ri.stages]
    grounds = stage_grounds(ri, cap)
    m = ri.m
    memo: dict = {}

    def good(i, prev: frozenset) -> bool:
        if i == m:
            return True
        key = (i, len(prev), prev & grounds[i])
        if key in memo:
            return memo[key] is not None
        st = ri.stages[i]
        nxt = grounds[i + 1]
        choice = {}
        for j, act in enumerate(scen[i]):
            inst = ri.scenario_instance(act)
            found, seen = None, set()
            for s in family(inst).near(inst, prev, st.measure, st.kappa, keep=nxt):
                clock.tick()
                proj = (len(s.elements), s.elements & nxt)
                if proj in seen:
                    continue
                seen.add(proj)
                if good(i + 1, s.elements):
                    found = s
                    break
            if found is None:
                memo[key] = None
                return False
            choice[j] = found
        memo[key] = choice
        return True

    def build(i, prev: frozenset) -> Dict[int, WitnessNode]:
        if i == m:
            return {}
        choice = memo[(i, len(prev), prev & grounds[i])]
        return {j: WitnessNode(s, build(i + 1, s.elements)) for j, s in choice.items()}

    base = ri.base
    seen = set()
    first = grounds[0]
    for s0 in family(base).near(base, frozenset(), Measure.ADDITIONS, 10 ** 9, keep=first):
        clock.tick()
        proj = (len(s0.elements), s0.elements & first)
        if proj in seen:
            continue
        seen.add(proj)
        if good(0, s0.elements):
            return RobustResult(True, WitnessNode(s0, build(0, s0.elements)), clock.nodes)
    return RobustResult(False, None, clock.nodes)


def verify_witness(ri: RobustInstance, w: Witness, cap: int = EXPANSION_CAP) -> bool:
    scen = [list(expand(st.scenarios, cap)) for st in ri.stages]

    def feasible(inst, sol):
        try:
            return verify(inst, sol)
        except MalformedCandidate:
            return False

    def check(i, node) -> bool:
        if i == ri.m:
            if node.children:
                raise ShapeMismatch("witness deeper than the number of stages")
            return True
        if sorted(node.children) != list(range(len(scen[i]))):
            raise ShapeMismatch(f"stage {i + 1} expects {len(scen[i])} children")
        st = ri.stages[i]
        for j, act in enumerate(scen[i]):
            child = node.children[j]
            if not feasible(ri.scenario_instance(act), child.solution):
                return False
            if hamming(node.solution.elements, child.solution.elements, st.measure) > st.kappa:
                return False
            if not check(i + 1, child):
                return False
        return True

    if not feasible(ri.base, w.solution):
        return False
    return check(0, w)


def naive_solve(ri: RobustInstance, cap: int = EXPANSION_CAP) -> bool:
    """Reference semantics: materialise every scenario instance and solution list."""
    levels = []
    for st in ri.stages:
        lists = [list(enumerate_solutions(ri.scenario_instance(a))) for a in expand(st.scenarios, cap)]
        levels.append((st, lists))

    def ok(i, prev):
        if i == len(levels):
            return True
        st, lists = levels[i]
        return all(any(hamming(prev, s.elements, st.measure) <= st.kappa and ok(i + 1, s.elements)
                       for s in sols) for sols in lists)

    return any(ok(0, s0.elements) for s0 in enumerate_solutions(ri.base))


def scenario_count(ri: RobustInstance):
    return [count_scenarios(st.scenarios) for st in ri.stages]
