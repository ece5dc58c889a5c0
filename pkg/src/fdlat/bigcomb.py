"""Exact arbitrary-precision combinatorial primitives.

Everything in this package is plain Python ``int`` arithmetic: no floats
on any value-bearing path, no modular shortcuts.  Values of ~10^1800
digits show up in the large tables, so the helpers here are written to
keep intermediates small and to reuse a process-wide factorial table.

The factorial table grows on demand (it is only ever appended to, so
sharing the list is safe for concurrent readers) and can be persisted
to disk in a small length-prefixed binary format, see
:class:`FactorialTable`.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

__all__ = [
    "ConstraintViolation",
    "binom",
    "fsp",
    "factorial",
    "factorial_list",
    "multinomial",
    "FactorialTable",
]


class ConstraintViolation(ValueError):
    """An argument violates a documented precondition."""


def binom(n: int, k: int) -> int:
    """Binomial coefficient C(n, k) with the out-of-range convention.

    Returns 0 unless ``0 <= k <= n`` and ``n >= 0``; any integers are
    accepted.  In range, the value is computed by ``math.comb``, which
    runs the usual product/divide loop over ``min(k, n-k)`` factors and
    so never builds intermediates larger than the result.
    """
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


def fsp(n: int) -> int:
    """Central binomial coefficient C(n, floor(n/2))."""
    if n < 0:
        raise ConstraintViolation(f"fsp requires n >= 0, got {n}")
    return math.comb(n, n // 2)


# Process-wide factorial table; _FACT[i] == i!.  Append-only.
_FACT: list[int] = [1]


def _grow(n: int) -> None:
    while len(_FACT) <= n:
        _FACT.append(_FACT[-1] * len(_FACT))


def factorial(n: int) -> int:
    """n!, backed by the process-wide table."""
    if n < 0:
        raise ConstraintViolation(f"factorial requires n >= 0, got {n}")
    _grow(n)
    return _FACT[n]


def factorial_list(n_max: int) -> list[int]:
    """The shared list [0!, 1!, ..., n_max!, ...].

    The returned list is the live process-wide table (it may be longer
    than requested).  Callers must treat it as read-only.
    """
    if n_max < 0:
        raise ConstraintViolation(f"factorial_list requires n_max >= 0, got {n_max}")
    _grow(n_max)
    return _FACT


def multinomial(i: int, parts: list[int]) -> int:
    """i! / (parts[0]! * ... * parts[-1]!) for nonnegative parts summing to i."""
    if i < 0:
        raise ConstraintViolation(f"multinomial requires i >= 0, got {i}")
    total = 0
    for p in parts:
        if p < 0:
            raise ConstraintViolation(f"multinomial parts must be >= 0, got {p}")
        total += p
    if total != i:
        raise ConstraintViolation(
            f"multinomial parts sum to {total}, expected {i}"
        )
    _grow(i)
    result = _FACT[i]
    for p in parts:
        result //= _FACT[p]
    return result


_MAGIC = b"FDLATFT1"


@dataclass
class FactorialTable:
    """A frozen prefix of the factorial sequence, persistable to disk.

    File format (all integers little-endian):

    * 8 magic bytes ``FDLATFT1``
    * u64 number of entries (``n_max + 1``)
    * per entry: u64 byte length, then that many little-endian bytes of
      the unsigned value ``i!``.
    """

    n_max: int
    table: list[int]

    @classmethod
    def build(cls, n_max: int) -> "FactorialTable":
        shared = factorial_list(n_max)
        return cls(n_max=n_max, table=shared[: n_max + 1])

    def save(self, path: str) -> None:
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<Q", self.n_max + 1))
            for value in self.table:
                raw = value.to_bytes((value.bit_length() + 7) // 8 or 1, "little")
                fh.write(struct.pack("<Q", len(raw)))
                fh.write(raw)

    @classmethod
    def load(cls, path: str) -> "FactorialTable":
        with open(path, "rb") as fh:
            magic = fh.read(len(_MAGIC))
            if magic != _MAGIC:
                raise ValueError(f"{path}: not a factorial table file")
            (count,) = struct.unpack("<Q", fh.read(8))
            table = []
            for _ in range(count):
                (length,) = struct.unpack("<Q", fh.read(8))
                table.append(int.from_bytes(fh.read(length), "little"))
        tab = cls(n_max=count - 1, table=table)
        tab._spot_check()
        return tab

    def _spot_check(self) -> None:
        # Full re-verification would cost as much as recomputing, so
        # check the recurrence on a prefix and at the far end.
        if not self.table or self.table[0] != 1:
            raise ValueError("corrupt factorial table: table[0] != 1")
        for i in range(1, min(self.n_max, 64) + 1):
            if self.table[i] != i * self.table[i - 1]:
                raise ValueError(f"corrupt factorial table at index {i}")
        if self.n_max >= 1 and self.table[self.n_max] != self.n_max * self.table[self.n_max - 1]:
            raise ValueError("corrupt factorial table at the last index")

    def adopt(self) -> None:
        """Install this table as the process-wide cache if it is longer."""
        global _FACT
        if self.n_max + 1 > len(_FACT):
            _FACT = list(self.table)
