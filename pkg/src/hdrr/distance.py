from __future__ import annotations

from enum import Enum


class Measure(str, Enum):
    SYMMETRIC = "symmetric"
    ADDITIONS = "additions"

    @classmethod
    def parse(cls, value) -> "Measure":
        if isinstance(value, Measure):
            return value
        aliases = {"symmetric-difference": "symmetric", "additions-only": "additions"}
        return cls(aliases.get(value, value))


def hamming(a, b, measure=Measure.SYMMETRIC) -> int:
    """Distance from predecessor footprint a to successor footprint b."""
    a, b = set(a), set(b)
    if Measure.parse(measure) is Measure.ADDITIONS:
        return len(b - a)
    return len(a ^ b)
