"""Packed binary strings and subsequence-embedding counts.

A string of length ``n`` is stored as an integer whose most significant of the
``n`` low bits is the leftmost symbol, so for a fixed length the integer order
is the lexicographic order.  Strings of mixed length are ordered by length
first, then lexicographically ("column order").

Every string also has a *code* ``(1 << length) | value``.  Codes enumerate
``{0,1}^{<=n}`` in column order starting from 1 (the empty string), and
appending a bit ``b`` to the string with code ``c`` gives code ``2c + b``.
The batched counting routines index their arrays by code.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import InputError

MAX_N = 24


def _check_length(n: int) -> None:
    if n < 0 or n > MAX_N:
        raise InputError(f"string length {n} outside [0, {MAX_N}]")


@dataclass(frozen=True, order=True)
class BitString:
    length: int
    value: int = 0

    def __post_init__(self):
        _check_length(self.length)
        if self.value < 0 or self.value >> self.length:
            raise InputError(f"value {self.value} does not fit in {self.length} bits")

    @classmethod
    def parse(cls, text: str) -> "BitString":
        if len(text) > MAX_N:
            raise InputError(f"string of length {len(text)} exceeds MAX_N={MAX_N}")
        if text.strip("01"):
            raise InputError(f"not a binary string: {text!r}")
        return cls(len(text), int(text, 2) if text else 0)

    @classmethod
    def from_code(cls, code: int) -> "BitString":
        if code < 1:
            raise InputError(f"invalid string code {code}")
        length = code.bit_length() - 1
        return cls(length, code ^ (1 << length))

    @classmethod
    def zeros(cls, n: int) -> "BitString":
        return cls(n, 0)

    @classmethod
    def ones(cls, n: int) -> "BitString":
        return cls(n, (1 << n) - 1)

    @property
    def code(self) -> int:
        return (1 << self.length) | self.value

    def __len__(self) -> int:
        return self.length

    def __str__(self) -> str:
        return self.render()

    def render(self) -> str:
        return format(self.value, f"0{self.length}b") if self.length else ""

    def bit(self, i: int) -> int:
        """Symbol at 1-based position ``i`` (1 = leftmost)."""
        if not 1 <= i <= self.length:
            raise InputError(f"index {i} outside [1, {self.length}]")
        return (self.value >> (self.length - i)) & 1

    def bits(self) -> tuple[int, ...]:
        return tuple(self.bit(i) for i in range(1, self.length + 1))

    def flip(self) -> "BitString":
        return BitString(self.length, self.value ^ ((1 << self.length) - 1))

    def reverse(self) -> "BitString":
        return BitString(self.length, reverse_bits(self.value, self.length))

    def weight(self) -> int:
        return bin(self.value).count("1")

    def substring(self, i: int, j: int) -> "BitString":
        """The 1-based inclusive substring from ``i`` to ``j`` (empty if j < i)."""
        if j < i:
            return BitString(0)
        if not (1 <= i and j <= self.length):
            raise InputError(f"substring [{i}, {j}] outside [1, {self.length}]")
        width = j - i + 1
        return BitString(width, (self.value >> (self.length - j)) & ((1 << width) - 1))

    def __add__(self, other: "BitString") -> "BitString":
        """Elementwise sum mod 2 of two strings of equal length."""
        if not isinstance(other, BitString):
            return NotImplemented
        if other.length != self.length:
            raise InputError("mod-2 addition needs equal lengths")
        return BitString(self.length, self.value ^ other.value)


def parse(text: str) -> BitString:
    return BitString.parse(text)


def render(x: BitString) -> str:
    return x.render()


def reverse_bits(value: int, n: int) -> int:
    out = 0
    for _ in range(n):
        out = (out << 1) | (value & 1)
        value >>= 1
    return out


def all_strings(n: int) -> Iterator[BitString]:
    """``{0,1}^n`` in lexicographic order."""
    _check_length(n)
    for v in range(1 << n):
        yield BitString(n, v)


def count_embeddings(x: BitString, y: BitString) -> int:
    """Number of increasing index tuples at which ``y`` occurs in ``x`` as a subsequence."""
    _check_length(x.length)
    _check_length(y.length)
    xs, ys = x.bits(), y.bits()
    # ways[j]: embeddings of y[:j] into the prefix of x consumed so far
    ways = [1] + [0] * len(ys)
    for a in xs:
        for j in range(len(ys), 0, -1):
            if ys[j - 1] == a:
                ways[j] += ways[j - 1]
    return ways[len(ys)]


def subsequence_count_table(values, n: int) -> np.ndarray:
    """Embedding counts for a batch of length-``n`` inputs, indexed by output code.

    Row ``r`` holds ``count_embeddings(x_r, y)`` at column ``code(y)`` for
    every ``y`` of length ``<= n``; column 0 is unused and always zero.
    """
    _check_length(n)
    values = np.asarray(values, dtype=np.int64).reshape(-1)
    table = np.zeros((values.size, 1 << (n + 1)), dtype=np.int64)
    table[:, 1] = 1
    for j in range(n):
        b = ((values >> (n - 1 - j)) & 1)[:, None]
        size = 1 << (j + 1)
        prev = table[:, :size].copy()
        table[:, 1 : 2 * size : 2] += prev * b
        table[:, 0 : 2 * size : 2] += prev * (1 - b)
    return table


def subsequence_count_vector(x: BitString) -> np.ndarray:
    return subsequence_count_table([x.value], x.length)[0]


def all_subsequence_counts(x: BitString) -> dict[BitString, int]:
    """Every distinct subsequence of ``x`` mapped to its embedding count, in column order."""
    counts = subsequence_count_vector(x)
    return {BitString.from_code(int(c)): int(counts[c]) for c in np.flatnonzero(counts)}


def distinct_outputs_of_length(x: BitString, k: int) -> int:
    if not 0 <= k <= x.length:
        raise InputError(f"k={k} outside [0, {x.length}]")
    counts = subsequence_count_vector(x)
    return int(np.count_nonzero(counts[1 << k : 1 << (k + 1)]))


def code_lengths(n: int) -> np.ndarray:
    """Length of the string with each code ``0 .. 2^{n+1}-1`` (code 0 maps to -1)."""
    lengths = np.full(1 << (n + 1), -1, dtype=np.int64)
    for k in range(n + 1):
        lengths[1 << k : 1 << (k + 1)] = k
    return lengths

