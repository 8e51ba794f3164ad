"""Group elements acting on {0,1}^n, orbits, and symmetry searches for the two channels.

Two families of input maps are represented:

* the four blocklength-generic maps generated by bit-flip and reversal
  (a Klein four-group), and
* index permutations at a fixed blocklength, written in one-line 1-based
  notation ``(pi(1), ..., pi(n))`` with ``g(x) = x_{pi(1)} x_{pi(2)} ... x_{pi(n)}``.

Arbitrary bijections of ``{0,1}^n`` are passed around as *tables*: a tuple
whose entry ``v`` is the value of the image of the length-``n`` string with
value ``v``.
"""

from __future__ import annotations

import itertools
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .bitstring import BitString, all_strings, reverse_bits
from .channel import BDC, BSC, ChannelParam, output_distribution, transition_matrix
from .errors import InputError, UnsupportedCompositionError

IDENTITY_KIND = "Identity"
FLIP_KIND = "BitFlip"
REVERSAL_KIND = "Reversal"
FLIP_REVERSAL_KIND = "FlipReversal"
PERMUTATION_KIND = "IndexPermutation"

# (flips bits, reverses order) for each named element
_KLEIN = {
    IDENTITY_KIND: (False, False),
    FLIP_KIND: (True, False),
    REVERSAL_KIND: (False, True),
    FLIP_REVERSAL_KIND: (True, True),
}
_KLEIN_BY_FLAGS = {flags: kind for kind, flags in _KLEIN.items()}

MAX_GROUP_ELEMENT_N = 10
MAX_TABLE_N = 4


@dataclass(frozen=True)
class GroupElement:
    kind: str
    perm: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind == PERMUTATION_KIND:
            if self.perm is None:
                raise InputError("an index permutation needs its one-line array")
            perm = tuple(int(i) for i in self.perm)
            if sorted(perm) != list(range(1, len(perm) + 1)):
                raise InputError(f"{perm} is not a permutation of 1..{len(perm)}")
            object.__setattr__(self, "perm", perm)
        elif self.kind in _KLEIN:
            if self.perm is not None:
                raise InputError(f"{self.kind} takes no permutation")
        else:
            raise InputError(f"unknown group element kind {self.kind!r}")

    @classmethod
    def permutation(cls, perm: Sequence[int]) -> "GroupElement":
        return cls(PERMUTATION_KIND, tuple(perm))

    @property
    def blocklength(self) -> int | None:
        return len(self.perm) if self.perm is not None else None

    def __str__(self) -> str:
        if self.kind == PERMUTATION_KIND:
            return "[" + ",".join(map(str, self.perm)) + "]"
        return self.kind


IDENTITY = GroupElement(IDENTITY_KIND)
BIT_FLIP = GroupElement(FLIP_KIND)
REVERSAL = GroupElement(REVERSAL_KIND)
FLIP_REVERSAL = GroupElement(FLIP_REVERSAL_KIND)
KLEIN_GROUP = (IDENTITY, BIT_FLIP, REVERSAL, FLIP_REVERSAL)


def apply(g: GroupElement, x: BitString) -> BitString:
    if g.kind == PERMUTATION_KIND:
        if x.length != len(g.perm):
            raise InputError(f"permutation of blocklength {len(g.perm)} applied to length {x.length}")
        value = 0
        for i in g.perm:
            value = (value << 1) | x.bit(i)
        return BitString(x.length, value)
    flip, rev = _KLEIN[g.kind]
    if rev:
        x = x.reverse()
    if flip:
        x = x.flip()
    return x


def compose(g1: GroupElement, g2: GroupElement) -> GroupElement:
    """The element acting as ``g1`` after ``g2``."""
    if g1.kind in _KLEIN and g2.kind in _KLEIN:
        f1, r1 = _KLEIN[g1.kind]
        f2, r2 = _KLEIN[g2.kind]
        return GroupElement(_KLEIN_BY_FLAGS[(f1 != f2, r1 != r2)])
    if g1.kind == PERMUTATION_KIND and g2.kind == PERMUTATION_KIND:
        if len(g1.perm) != len(g2.perm):
            raise UnsupportedCompositionError("permutations of different blocklengths")
        # (g1 g2 x)_i = (g2 x)_{pi1(i)} = x_{pi2(pi1(i))}
        return GroupElement.permutation(tuple(g2.perm[i - 1] for i in g1.perm))
    raise UnsupportedCompositionError(f"cannot compose {g1} with {g2}")


def inverse(g: GroupElement) -> GroupElement:
    if g.kind in _KLEIN:
        return g
    inv = [0] * len(g.perm)
    for i, j in enumerate(g.perm, start=1):
        inv[j - 1] = i
    return GroupElement.permutation(inv)


def as_table(g: GroupElement, n: int) -> tuple[int, ...]:
    return tuple(apply(g, x).value for x in all_strings(n))


def reversal_permutation(n: int) -> tuple[int, ...]:
    return tuple(range(n, 0, -1))


def identity_permutation(n: int) -> tuple[int, ...]:
    return tuple(range(1, n + 1))


def klein_table_check(n: int = 5) -> bool:
    """Is {Identity, BitFlip, Reversal, FlipReversal} a Klein four-group?

    Checked twice: symbolically through :func:`compose` (closure, self-inverse,
    commutativity, associativity, identity) and pointwise through
    :func:`apply` on every string of length ``n``.
    """
    group = set(KLEIN_GROUP)
    for a in KLEIN_GROUP:
        if compose(a, a) != IDENTITY or inverse(a) != a:
            return False
        if compose(IDENTITY, a) != a or compose(a, IDENTITY) != a:
            return False
        for b in KLEIN_GROUP:
            ab = compose(a, b)
            if ab not in group or ab != compose(b, a):
                return False
            for c in KLEIN_GROUP:
                if compose(compose(a, b), c) != compose(a, compose(b, c)):
                    return False
    for x in all_strings(n):
        for a in KLEIN_GROUP:
            if apply(a, apply(a, x)) != x:
                return False
            for b in KLEIN_GROUP:
                if apply(compose(a, b), x) != apply(a, apply(b, x)):
                    return False
                if apply(a, apply(b, x)) != apply(b, apply(a, x)):
                    return False
    # at n = 1 reversal is the identity map, so the four elements collapse pointwise
    return n < 2 or len({as_table(a, n) for a in KLEIN_GROUP}) == 4


@dataclass(frozen=True)
class Orbit:
    members: tuple[BitString, ...]

    @property
    def representative(self) -> BitString:
        return self.members[0]

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x) -> bool:
        return x in self.members


def orbit(x: BitString) -> Orbit:
    """Orbit of ``x`` under the flip/reversal group, members sorted lexicographically."""
    return Orbit(tuple(sorted({apply(g, x) for g in KLEIN_GROUP})))


@dataclass(frozen=True)
class Partition:
    """Disjoint cover of ``{0,1}^n``; classes sorted by their smallest member."""

    n: int
    classes: tuple[tuple[BitString, ...], ...]
    label: str = "orbit"

    def __post_init__(self):
        seen = sorted(x.value for c in self.classes for x in c)
        if seen != list(range(1 << self.n)):
            raise ValueError("classes are not a disjoint cover of {0,1}^n")

    @classmethod
    def from_keys(cls, n: int, keys: Sequence, label: str) -> "Partition":
        """Group the strings of length ``n`` by ``keys[value]``."""
        groups: dict = {}
        for v, key in enumerate(keys):
            groups.setdefault(key, []).append(v)
        classes = sorted(tuple(BitString(n, v) for v in vs) for vs in groups.values())
        return cls(n, tuple(classes), label)

    def __len__(self) -> int:
        return len(self.classes)

    def class_ids(self) -> list[int]:
        """Index of the class containing each string, indexed by string value."""
        ids = [0] * (1 << self.n)
        for i, c in enumerate(self.classes):
            for x in c:
                ids[x.value] = i
        return ids

    def size_histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(len(c) for c in self.classes).items()))

    def as_sets(self) -> frozenset[frozenset[BitString]]:
        return frozenset(frozenset(c) for c in self.classes)


def orbit_keys(n: int) -> np.ndarray:
    """Smallest value in the flip/reversal orbit of every string of length ``n``."""
    v = np.arange(1 << n, dtype=np.int64)
    rev = np.array([reverse_bits(int(u), n) for u in v], dtype=np.int64)
    mask = (1 << n) - 1
    return np.minimum.reduce([v, v ^ mask, rev, rev ^ mask])


def orbit_partition(n: int) -> Partition:
    if n < 1:
        raise InputError("orbit partition needs n >= 1")
    return Partition.from_keys(n, orbit_keys(n).tolist(), "orbit")


def orbit_count_burnside(n: int) -> int:
    """Orbit count from fixed points: flip fixes nothing, reversal fixes palindromes,
    flip-reversal fixes anti-palindromes (none for odd ``n``)."""
    if n < 1:
        raise InputError("Burnside count needs n >= 1")
    fixed = (1 << n) + (1 << ((n + 1) // 2)) + ((1 << (n // 2)) if n % 2 == 0 else 0)
    assert fixed % 4 == 0
    return fixed // 4


def _neighbours(i: int, j: int) -> bool:
    return abs(i - j) == 1


def satisfies_local_property(perm: Sequence[int]) -> bool:
    """Does ``perm`` keep adjacent indices adjacent, and non-adjacent ones apart?"""
    n = len(perm)
    for i in range(n):
        for j in range(i + 1, n):
            if _neighbours(i, j) != _neighbours(perm[i], perm[j]):
                return False
    return True


def lp_permutations(n: int) -> list[tuple[int, ...]]:
    if not 1 <= n <= 9:
        raise InputError(f"lp enumeration blocklength {n} outside [1, 9]")
    return [p for p in itertools.permutations(range(1, n + 1)) if satisfies_local_property(p)]


# -- commutation with a channel ------------------------------------------------


def _column_signature(nums: np.ndarray) -> list:
    """Sorted canonical serialisations of the columns of an integer matrix.

    Entries share one denominator, so the integer column is already the
    reduced exact column up to that common factor.
    """
    if nums.dtype == object:
        return sorted(tuple(int(v) for v in col) for col in nums.T)
    cols = np.ascontiguousarray(nums.T)
    width = cols.shape[1] * cols.itemsize
    flat = cols.view(np.dtype((np.void, width))).ravel()
    return sorted(c.tobytes() for c in flat)


def _table_from(g, n: int) -> tuple[int, ...]:
    if isinstance(g, GroupElement):
        if n > MAX_GROUP_ELEMENT_N:
            raise InputError(f"group-element commutation limited to n <= {MAX_GROUP_ELEMENT_N}")
        return as_table(g, n)
    if n > MAX_TABLE_N:
        raise InputError(f"explicit-table commutation limited to n <= {MAX_TABLE_N}")
    if isinstance(g, dict):
        table = [None] * (1 << n)
        for x, y in g.items():
            x = BitString.parse(x) if isinstance(x, str) else x
            y = BitString.parse(y) if isinstance(y, str) else y
            if x.length != n or y.length != n:
                raise InputError("bijection entries must have length n")
            table[x.value] = y.value
        if None in table:
            raise InputError("bijection table does not cover {0,1}^n")
        g = table
    table = tuple(int(v) for v in g)
    if len(table) != 1 << n or sorted(table) != list(range(1 << n)):
        raise InputError("input map is not a bijection of {0,1}^n")
    return table


class _Commutation:
    """Reusable state for testing many input maps against one channel matrix."""

    def __init__(self, n: int, param: ChannelParam):
        self.n = n
        self.param = param
        self.nums = transition_matrix(n, param).numerators
        self.reference = _column_signature(self.nums)

    def passes(self, table: Sequence[int]) -> bool:
        # row x of A is the law of Ch(g x), i.e. row g(x) of M
        permuted = self.nums[np.asarray(table, dtype=np.int64)]
        return _column_signature(permuted) == self.reference


def commutes_with_channel(g, n: int, param: ChannelParam) -> bool:
    """Does some output bijection ``h`` make ``h . Ch . g`` equal to ``Ch`` in law on ``{0,1}^n``?

    ``g`` is a :class:`GroupElement` (``n <= 10``) or an explicit bijection
    (``n <= 4``) given as a table or a ``{input: output}`` mapping.  Such an
    ``h`` exists exactly when the columns of ``A[x][z] = P(Ch gx = z)`` and of
    ``M[x][y] = P(Ch x = y)`` agree as multisets.
    """
    table = _table_from(g, n)
    return _Commutation(n, param).passes(table)


def output_bijection(g, n: int, param: ChannelParam) -> dict[BitString, BitString] | None:
    """A witness ``h`` (mapping each output ``z`` of ``Ch g`` to ``h(z)``), or None."""
    table = _table_from(g, n)
    m = transition_matrix(n, param)
    permuted = m.numerators[np.asarray(table, dtype=np.int64)]
    labels = m.columns
    pool: dict = {}
    for j in range(m.shape[1]):
        pool.setdefault(tuple(int(v) for v in m.numerators[:, j]), []).append(labels[j])
    h = {}
    for j in range(m.shape[1]):
        bucket = pool.get(tuple(int(v) for v in permuted[:, j]))
        if not bucket:
            return None
        h[labels[j]] = bucket.pop()
    return h


def _search_chunk(args):
    n, param, tables = args
    check = _Commutation(n, param)
    return [t for t in tables if check.passes(t)]


def _parallel_filter(n: int, param: ChannelParam, tables: list, workers: int) -> list:
    if workers <= 1 or len(tables) < 64:
        return _search_chunk((n, param, tables))
    size = -(-len(tables) // (workers * 4))
    chunks = [(n, param, tables[i : i + size]) for i in range(0, len(tables), size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_search_chunk, chunks))
    return [t for part in parts for t in part]


@dataclass
class SearchReport:
    n: int
    param: ChannelParam
    candidates_tested: int
    passing: list
    elapsed_ms: float
    orbit_histogram: dict[int, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        if self.passing and isinstance(self.passing[0], dict):
            passing = self.passing
        else:
            passing = [list(p) for p in self.passing]
        out = {
            "n": self.n,
            "channel": self.param.kind,
            "param": self.param.text(),
            "candidates_tested": self.candidates_tested,
            "passing": passing,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }
        if self.orbit_histogram:
            out["orbit_histogram"] = {str(k): v for k, v in self.orbit_histogram.items()}
        return out


def perm_symmetry_search(n: int, param: ChannelParam, workers: int = 1) -> list[tuple[int, ...]]:
    """All index permutations whose induced input map commutes with the channel."""
    return perm_symmetry_report(n, param, workers).passing


def perm_symmetry_report(n: int, param: ChannelParam, workers: int = 1) -> SearchReport:
    if not 2 <= n <= 7:
        raise InputError(f"permutation search blocklength {n} outside [2, 7]")
    start = time.perf_counter()
    perms = list(itertools.permutations(range(1, n + 1)))
    tables = [as_table(GroupElement.permutation(p), n) for p in perms]
    by_table = dict(zip(tables, perms))
    passing_tables = _parallel_filter(n, param, tables, workers)
    passing = sorted(by_table[t] for t in passing_tables)
    return SearchReport(n, param, len(perms), passing, (time.perf_counter() - start) * 1e3)


def _closure(tables: Iterable[tuple[int, ...]], n: int) -> set[tuple[int, ...]]:
    group = {tuple(range(1 << n))}
    frontier = set(tables) - group
    group |= frontier
    gens = list(frontier)
    while frontier:
        new = set()
        for a in frontier:
            for b in gens:
                c = tuple(a[b[v]] for v in range(1 << n))
                if c not in group:
                    new.add(c)
        group |= new
        frontier = new
    return group


def orbit_histogram(tables: Iterable[tuple[int, ...]], n: int) -> dict[int, int]:
    """Orbit-size histogram of ``{0,1}^n`` under the group generated by ``tables``."""
    group = _closure(tables, n)
    seen = set()
    sizes = Counter()
    for v in range(1 << n):
        if v in seen:
            continue
        orb = {g[v] for g in group}
        seen |= orb
        sizes[len(orb)] += 1
    return dict(sorted(sizes.items()))


def table_to_pairs(table: Sequence[int], n: int) -> dict[str, str]:
    return {BitString(n, v).render(): BitString(n, w).render() for v, w in enumerate(table)}


def exhaustive_symmetry_search(n: int, param: ChannelParam, workers: int = 1) -> SearchReport:
    """Every bijection of ``{0,1}^n`` passing the commutation test, with the orbit
    histogram of the group they generate.  Only a blocklength-local statement:
    a passing map need not extend to a symmetry at all lengths."""
    if not 1 <= n <= 3:
        raise InputError(f"exhaustive search blocklength {n} outside [1, 3]")
    start = time.perf_counter()
    tables = list(itertools.permutations(range(1 << n)))
    passing = sorted(_parallel_filter(n, param, tables, workers))
    hist = orbit_histogram(passing, n)
    return SearchReport(
        n,
        param,
        len(tables),
        passing,
        (time.perf_counter() - start) * 1e3,
        hist,
    )


# -- proof gadgets -------------------------------------------------------------


def step_string(n: int, i: int) -> BitString:
    """``1^{i+1} 0^{n-i-1}``."""
    if not 1 <= i <= n - 1:
        raise InputError(f"step index {i} outside [1, {n - 1}]")
    return BitString.parse("1" * (i + 1) + "0" * (n - i - 1))


def step_support_size(n: int, i: int, param: ChannelParam | None = None) -> int:
    """Support size of the BDC output on the step string."""
    param = param or ChannelParam.bdc("1/2")
    if param.kind != BDC:
        raise InputError("step support is defined for the deletion channel")
    return len(output_distribution(step_string(n, i), param).mass)


def bsc_translation_check(t: BitString, n: int, param: ChannelParam) -> bool:
    """``P(BSC(x+t) = y) == P(BSC x = y+t)`` for all ``x, y`` in ``{0,1}^n``, exactly."""
    if param.kind != BSC:
        raise InputError("translation check applies to the BSC")
    if t.length != n:
        raise InputError(f"translation of length {t.length} for blocklength {n}")
    if n > 8:
        raise InputError("translation check limited to n <= 8")
    nums = transition_matrix(n, param).numerators
    idx = np.arange(1 << n) ^ t.value
    # left side: row x+t, column y; right side: row x, column y+t
    return bool(np.array_equal(nums[idx, :], nums[:, idx]))


def bsc_permutation_check(perm: Sequence[int], param: ChannelParam) -> bool:
    """Index permutation with ``h = g^{-1}``: ``P(BSC(gx) = gy) == P(BSC x = y)`` for all ``x, y``."""
    if param.kind != BSC:
        raise InputError("permutation check applies to the BSC")
    n = len(perm)
    nums = transition_matrix(n, param).numerators
    idx = np.asarray(as_table(GroupElement.permutation(perm), n), dtype=np.int64)
    return bool(np.array_equal(nums[np.ix_(idx, idx)], nums))
