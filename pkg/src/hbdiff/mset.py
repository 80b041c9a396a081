"""Multisets (bags) with non-negative real multiplicities."""

from __future__ import annotations

import math
import numbers
from collections.abc import Hashable, Iterator, Mapping
from typing import Iterable, Union

__all__ = ["Multiset", "m_cardinality", "support", "is_submset", "combine"]


class Multiset(Mapping):
    """Frozen multiset mapping elements to multiplicities.

    Zero multiplicities are dropped on construction, so two multisets compare
    equal exactly when their multiplicity functions agree everywhere. Looking
    up an element that is not stored returns 0 instead of raising.

    >>> Multiset({"a": 2, "b": 0})
    Multiset({'a': 2})
    >>> Multiset(["a", "a", "b"])["a"]
    2
    """

    __slots__ = ("_entries", "_hash")

    def __init__(self, entries: Union[Mapping, Iterable[Hashable], None] = None):
        data = {}
        if entries is None:
            pass
        elif isinstance(entries, Mapping):
            for key, mult in entries.items():
                mult = _check_multiplicity(key, mult)
                if mult != 0:
                    data[key] = mult
        else:
            for key in entries:
                data[key] = data.get(key, 0) + 1
        self._entries = data
        self._hash = None

    def __getitem__(self, key):
        return self._entries.get(key, 0)

    def __contains__(self, key):
        return key in self._entries

    def __iter__(self) -> Iterator:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other):
        if isinstance(other, Multiset):
            return self._entries == other._entries
        if isinstance(other, Mapping):
            return self == Multiset(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._entries.items()))
        return self._hash

    def __repr__(self):
        return f"Multiset({self._entries!r})"

    def __le__(self, other: "Multiset") -> bool:
        return is_submset(self, other)

    def __or__(self, other: "Multiset") -> "Multiset":
        return combine(self, other, "union")

    def __and__(self, other: "Multiset") -> "Multiset":
        return combine(self, other, "intersection")

    def __add__(self, other: "Multiset") -> "Multiset":
        return combine(self, other, "sum")

    def items(self):
        return self._entries.items()

    @property
    def m_cardinality(self) -> float:
        return m_cardinality(self)

    @property
    def support(self) -> frozenset:
        return support(self)

    def to_dict(self) -> dict:
        return dict(self._entries)


def _check_multiplicity(key, mult):
    if isinstance(mult, bool) or not isinstance(mult, (int, float)):
        if isinstance(mult, numbers.Integral) and not isinstance(mult, bool):
            mult = int(mult)
        elif isinstance(mult, numbers.Real):
            mult = float(mult)
        else:
            raise TypeError(f"multiplicity of {key!r} is not a number: {mult!r}")
    if not math.isfinite(mult) or mult < 0:
        raise ValueError(f"multiplicity of {key!r} must be finite and >= 0, got {mult!r}")
    return mult


def m_cardinality(ms: Mapping) -> float:
    """Sum of all multiplicities."""
    return sum(ms.values())


def support(ms: Mapping) -> frozenset:
    """Elements with strictly positive multiplicity."""
    return frozenset(k for k, m in ms.items() if m > 0)


def is_submset(a: Mapping, b: Mapping) -> bool:
    """True iff every multiplicity in ``a`` is at most the one in ``b``."""
    return all(m <= b.get(k, 0) for k, m in a.items())


_COMBINERS = {
    "union": max,
    "intersection": min,
    "sum": lambda x, y: x + y,
}


def combine(a: Mapping, b: Mapping, kind: str) -> Multiset:
    """Pointwise max (``union``), min (``intersection``) or addition (``sum``)."""
    try:
        op = _COMBINERS[kind]
    except KeyError:
        raise ValueError(f"unknown multiset operation {kind!r}") from None
    keys = list(a.keys()) + [k for k in b.keys() if k not in a]
    return Multiset({k: op(a.get(k, 0), b.get(k, 0)) for k in keys})
