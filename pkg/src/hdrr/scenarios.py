"""Scenario encodings and scenario application."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterator, Tuple

from .errors import BudgetExceeded, UnknownElement
from .instance import Instance, drop_elements, family

EXPANSION_CAP = 2 ** 16


def _fs(items=()):
    return frozenset(items)


@dataclass(frozen=True)
class Explicit:
    sets: Tuple[frozenset, ...]

    def __init__(self, sets):
        object.__setattr__(self, "sets", tuple(_fs(s) for s in sets))

    def members(self) -> frozenset:
        return _fs().union(*self.sets) if self.sets else _fs()


@dataclass(frozen=True)
class XorDependencies:
    fixed: frozenset
    pairs: Tuple[Tuple[frozenset, frozenset], ...]

    def __init__(self, fixed=(), pairs=()):
        object.__setattr__(self, "fixed", _fs(fixed))
        object.__setattr__(self, "pairs", tuple((_fs(a), _fs(b)) for a, b in pairs))
        parts = [self.fixed] + [p for pair in self.pairs for p in pair]
        if sum(map(len, parts)) != len(_fs().union(*parts)):
            raise ValueError("xor fixed set and pair members must be pairwise disjoint")

    def members(self) -> frozenset:
        return self.fixed.union(*[a | b for a, b in self.pairs])


@dataclass(frozen=True)
class GammaSets:
    fixed: frozenset
    groups: Tuple[frozenset, ...]
    gamma: int = field(default=0)

    def __init__(self, fixed=(), groups=(), gamma=0):
        object.__setattr__(self, "fixed", _fs(fixed))
        object.__setattr__(self, "groups", tuple(_fs(g) for g in groups))
        object.__setattr__(self, "gamma", int(gamma))
        parts = [self.fixed] + list(self.groups)
        if sum(map(len, parts)) != len(_fs().union(*parts)):
            raise ValueError("gamma fixed set and groups must be pairwise disjoint")
        if not 0 <= self.gamma <= len(self.groups):
            raise ValueError("gamma must lie between 0 and the number of groups")

    def members(self) -> frozenset:
        return self.fixed.union(*self.groups)


def count_scenarios(s) -> int:
    if isinstance(s, Explicit):
        return len(s.sets)
    if isinstance(s, XorDependencies):
        return 2 ** len(s.pairs)
    return sum(comb(len(s.groups), k) for k in range(s.gamma + 1))


def colex_subsets(n, size):
    return sorted(combinations(range(n), size), key=lambda c: c[::-1])


def expand(s, cap: int = EXPANSION_CAP) -> Iterator[frozenset]:
    total = count_scenarios(s)
    if total > cap:
        raise BudgetExceeded(f"{total} scenarios above cap {cap}")
    if isinstance(s, Explicit):
        yield from s.sets
    elif isinstance(s, XorDependencies):
        for b in range(total):
            active = set(s.fixed)
            for i, (left, right) in enumerate(s.pairs):
                active |= right if b >> i & 1 else left
            yield _fs(active)
    else:
        for size in range(s.gamma + 1):
            for idx in colex_subsets(len(s.groups), size):
                yield s.fixed.union(*[s.groups[i] for i in idx])


def apply_scenario(base: Instance, active, pool) -> Instance:
    """Deactivate every pool element not in `active` (with relation closure)."""
    active, pool = _fs(active), _fs(pool)
    stray = active - pool
    if stray:
        raise UnknownElement(f"active elements outside the pool: {sorted(stray)[:5]}")
    fam = family(base)
    present = base.elements()
    doomed = set()
    for e in sorted(pool - active):
        if e in present and e not in doomed:
            doomed |= fam.removal_set(base, e)
    if not doomed:
        return base
    return fam.after_removal(base, drop_elements(base, doomed))


def gamma_element_scenarios(base: Instance, pool, gamma: int, cap: int = EXPANSION_CAP) -> Explicit:
    """All activations deviating from the base in at most gamma pool elements.

    Pool elements active in `base` may be switched off, inactive ones on.
    """
    pool = sorted(pool)
    present = base.elements()
    start = _fs(e for e in pool if e in present)
    groups = GammaSets((), [[e] for e in pool], min(gamma, len(pool)))
    out = []
    for flip in expand(groups, cap):
        out.append(start ^ flip)
    return Explicit(out)
