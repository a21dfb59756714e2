"""GF(2) linear algebra on int bitsets.

Vectors are Python ints; bit i is coordinate i. An echelon basis is kept
fully reduced with pivots at the lowest set bit of each row, so reducing a
vector against it yields a canonical coset representative.
"""

from __future__ import annotations

from typing import Iterable, Iterator


def lowest_bit(x: int) -> int:
    """Index of the lowest set bit (x must be nonzero)."""
    return (x & -x).bit_length() - 1


class F2Space:
    """Row-reduced span of a set of bit-vectors, with optional tags.

    Tags ride along under the same XOR combinations as the vectors; they are
    used to carry preimages (e.g. a cochain c with delta(c) = row).
    """

    def __init__(self) -> None:
        self._pivot_rows: dict[int, int] = {}
        self._pivot_tags: dict[int, int] = {}

    @property
    def dim(self) -> int:
        return len(self._pivot_rows)

    def rows(self) -> list[int]:
        """Echelon rows ordered by increasing pivot index."""
        return [self._pivot_rows[p] for p in sorted(self._pivot_rows)]

    def tagged_rows(self) -> list[tuple[int, int]]:
        return [(self._pivot_rows[p], self._pivot_tags[p]) for p in sorted(self._pivot_rows)]

    def reduce(self, vec: int) -> int:
        """Canonical representative of vec modulo the span."""
        for p, row in self._pivot_rows.items():
            if (vec >> p) & 1:
                vec ^= row
        return vec

    def reduce_tagged(self, vec: int, tag: int = 0) -> tuple[int, int]:
        for p, row in self._pivot_rows.items():
            if (vec >> p) & 1:
                vec ^= row
                tag ^= self._pivot_tags[p]
        return vec, tag

    def contains(self, vec: int) -> bool:
        return self.reduce(vec) == 0

    def add(self, vec: int, tag: int = 0) -> bool:
        """Insert vec into the span; returns True if the dimension grew."""
        vec, tag = self.reduce_tagged(vec, tag)
        if vec == 0:
            return False
        p = lowest_bit(vec)
        # keep the basis fully reduced: clear bit p from existing rows
        for q, row in list(self._pivot_rows.items()):
            if (row >> p) & 1:
                self._pivot_rows[q] = row ^ vec
                self._pivot_tags[q] ^= tag
        self._pivot_rows[p] = vec
        self._pivot_tags[p] = tag
        # keep pivot iteration order sorted so reduce() is deterministic
        self._pivot_rows = dict(sorted(self._pivot_rows.items()))
        self._pivot_tags = dict(sorted(self._pivot_tags.items()))
        return True


def echelon(vectors: Iterable[int]) -> list[int]:
    """Fully reduced echelon basis of the span of the given vectors."""
    space = F2Space()
    for v in vectors:
        space.add(v)
    return space.rows()


def iter_span_gray(rows: list[int]) -> Iterator[int]:
    """All 2^len(rows) span elements, one XOR apart (Gray-code order)."""
    acc = 0
    yield acc
    for i in range(1, 1 << len(rows)):
        acc ^= rows[lowest_bit(i)]
        yield acc


def iter_bits(x: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while x:
        b = x & -x
        yield b.bit_length() - 1
        x ^= b
