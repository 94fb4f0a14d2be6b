"""Structured identifiers for universe and relation elements.

Every target element produced by a reduction carries the source element it
came from, so partition and modularity checks reduce to set comparisons.
"""
from __future__ import annotations

from typing import Iterable, Union

_RANK = {"atom": 0, "const": 1, "gadget": 2, "removal": 3}
_REL_RANK = 5


class _Keyed:
    __slots__ = ("_key", "_hash")

    def __eq__(self, other):
        return isinstance(other, _Keyed) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self._key < other._key

    def __le__(self, other):
        return self._key <= other._key

    def __gt__(self, other):
        return self._key > other._key

    def __ge__(self, other):
        return self._key >= other._key

    @property
    def key(self):
        return self._key


class ElementId(_Keyed):
    """atom(label) | const(label) | gadget(source, local) | removal(source, local)."""

    __slots__ = ("kind", "label", "source", "local")

    def __init__(self, kind: str, label: str = "", source=None, local: str = ""):
        if kind not in _RANK:
            raise ValueError(f"unknown element kind {kind!r}")
        if kind in ("gadget", "removal") and not isinstance(source, _Keyed):
            raise ValueError(f"{kind} ids need a source element")
        self.kind = kind
        self.label = str(label)
        self.source = source
        self.local = str(local)
        if source is None:
            key = (_RANK[kind], self.label)
        else:
            key = (_RANK[kind], source.key, self.local)
        self._key = key
        self._hash = hash(key)

    def __repr__(self):
        if self.kind == "atom":
            return self.label
        if self.kind == "const":
            return "#" + self.label
        mark = "g" if self.kind == "gadget" else "r"
        return f"{mark}({self.source!r}:{self.local})"

    def origin(self):
        """Source element of a gadget/removal id, None otherwise."""
        return self.source


class Rel(_Keyed):
    """Relation element: a label plus an ordered tuple of member elements."""

    __slots__ = ("label", "members")

    def __init__(self, label: str, members: Iterable):
        self.label = label
        self.members = tuple(members)
        for m in self.members:
            if not isinstance(m, _Keyed):
                raise TypeError(f"relation member {m!r} is not an element")
        self._key = (_REL_RANK, label, tuple(m.key for m in self.members))
        self._hash = hash(self._key)

    def __repr__(self):
        return f"{self.label}({', '.join(map(repr, self.members))})"


Element = Union[ElementId, Rel]


def atom(label) -> ElementId:
    return ElementId("atom", label)


def const(label) -> ElementId:
    return ElementId("const", label)


def gadget(source, local="") -> ElementId:
    return ElementId("gadget", source=source, local=local)


def removal(source, local="") -> ElementId:
    return ElementId("removal", source=source, local=local)


def edge(u, v, label="edge") -> Rel:
    """Undirected relation element, members sorted."""
    a, b = sorted((u, v))
    return Rel(label, (a, b))


def arc(u, v) -> Rel:
    return Rel("arc", (u, v))


def mark(label, v) -> Rel:
    return Rel(label, (v,))


def mentions(rel: Rel, e) -> bool:
    """True when e occurs anywhere inside rel (recursively)."""
    for m in rel.members:
        if m == e or (isinstance(m, Rel) and mentions(m, e)):
            return True
    return False
