"""Partition {0,1}^n by exact BDC output-law fingerprints and by output entropy,
and compare both against the flip/reversal orbits."""

from __future__ import annotations

import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bitstring import BitString, code_lengths, subsequence_count_table
from .channel import BDC, ChannelParam, entropy_bits, length_weights, probability_floats
from .errors import InputError
from .symmetry import Partition, orbit_count_burnside, orbit_partition

MAX_CLASSIFY_N = 14
DEFAULT_ENTROPY_TOL = 1e-9
_CHUNK = 256


class ResolutionWarning(UserWarning):
    """Two entropy classes sit closer together than 100 x the grouping tolerance."""


@dataclass(frozen=True)
class Fingerprint:
    """Multiset of exact output probabilities of the BDC on one input.

    Held as ``(numerator, multiplicity)`` pairs over the common denominator
    ``b**n``, ascending by numerator.
    """

    denominator: int
    items: tuple[tuple[int, int], ...]

    def probabilities(self) -> list[tuple[Fraction, int]]:
        return [(Fraction(num, self.denominator), mult) for num, mult in self.items]

    def total(self) -> Fraction:
        return sum((Fraction(num * mult, self.denominator) for num, mult in self.items), Fraction(0))

    def serialize(self) -> str:
        return ";".join(f"{p.numerator}/{p.denominator}x{m}" for p, m in self.probabilities())

    def __str__(self) -> str:
        return self.serialize()


def _as_bdc(d) -> ChannelParam:
    if isinstance(d, ChannelParam):
        if d.kind != BDC:
            raise InputError("classification uses the deletion channel")
        return d
    return ChannelParam.bdc(d)


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_CLASSIFY_N:
        raise InputError(f"classification blocklength {n} outside [1, {MAX_CLASSIFY_N}]")


def _row_fingerprint(counts: np.ndarray, lengths: np.ndarray, weights) -> tuple[np.ndarray, np.ndarray]:
    nums = counts * weights[lengths]
    return np.unique(nums, return_counts=True)


def _scan_chunk(args):
    """Fingerprint keys and entropies for the inputs ``start .. stop-1``."""
    n, param, start, stop, want_entropy = args
    lengths_all = code_lengths(n)
    big = param.denominator**n > 2**62
    weights = np.array(length_weights(n, param), dtype=object if big else np.int64)
    table = subsequence_count_table(np.arange(start, stop), n)
    keys, entropies = [], []
    for row in table:
        codes = np.flatnonzero(row)
        counts = row[codes]
        lengths = lengths_all[codes]
        nums, mult = _row_fingerprint(counts.astype(object) if big else counts, lengths, weights)
        keys.append(tuple(zip((int(v) for v in nums), (int(m) for m in mult))))
        if want_entropy:
            entropies.append(entropy_bits(probability_floats(counts, lengths, n, param)))
    return keys, entropies


@dataclass
class ScanResult:
    n: int
    param: ChannelParam
    keys: list = field(repr=False)
    entropies: list[float] = field(repr=False)


def scan(n: int, d, workers: int = 1, entropy: bool = True) -> ScanResult:
    """Fingerprint (and optionally entropy) of every input of length ``n``.

    Work is cut into fixed-size blocks of consecutive inputs and merged in
    block order, so the result does not depend on ``workers``.
    """
    _check_n(n)
    param = _as_bdc(d)
    total = 1 << n
    jobs = [(n, param, s, min(s + _CHUNK, total), entropy) for s in range(0, total, _CHUNK)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_scan_chunk, jobs))
    else:
        parts = [_scan_chunk(job) for job in jobs]
    keys = [k for part in parts for k in part[0]]
    entropies = [h for part in parts for h in part[1]]
    return ScanResult(n, param, keys, entropies)


def fingerprint(x: BitString, d) -> Fingerprint:
    param = _as_bdc(d)
    keys, _ = _scan_chunk((x.length, param, x.value, x.value + 1, False))
    return Fingerprint(param.denominator**x.length, keys[0])


def fingerprint_partition(n: int, d, workers: int = 1, result: ScanResult | None = None) -> Partition:
    result = result or scan(n, d, workers, entropy=False)
    return Partition.from_keys(n, result.keys, "fingerprint")


def _group_sorted(values: list[float], tol: float) -> tuple[list[int], float]:
    """Single-linkage grouping of reals: neighbours in sorted order at most ``tol`` apart
    share a group.  Returns group ids (by input index) and the smallest gap between groups."""
    order = sorted(range(len(values)), key=lambda i: (values[i], i))
    ids = [0] * len(values)
    group = 0
    min_gap = float("inf")
    for prev, cur in zip(order, order[1:]):
        gap = values[cur] - values[prev]
        if gap > tol:
            group += 1
            min_gap = min(min_gap, gap)
        ids[cur] = group
    return ids, min_gap


def entropy_partition(
    n: int, d, tol: float = DEFAULT_ENTROPY_TOL, workers: int = 1, result: ScanResult | None = None
) -> Partition:
    if tol <= 0:
        raise InputError("entropy tolerance must be positive")
    result = result or scan(n, d, workers)
    ids, min_gap = _group_sorted(result.entropies, tol)
    if min_gap < 100 * tol:
        warnings.warn(
            f"entropy classes at n={n} are separated by only {min_gap:.3g} bits (tol={tol:g})",
            ResolutionWarning,
            stacklevel=2,
        )
    return Partition.from_keys(n, ids, "entropy")


def partitions_equal(p1: Partition, p2: Partition) -> bool:
    if p1.n != p2.n:
        raise InputError(f"partitions of different blocklengths {p1.n} and {p2.n}")
    return p1.classes == p2.classes


def refines(fine: Partition, coarse: Partition) -> bool:
    """Is every class of ``fine`` contained in a single class of ``coarse``?"""
    if fine.n != coarse.n:
        raise InputError(f"partitions of different blocklengths {fine.n} and {coarse.n}")
    ids = coarse.class_ids()
    return all(len({ids[x.value] for x in c}) == 1 for c in fine.classes)


@dataclass
class ConjectureReport:
    n: int
    d: ChannelParam
    orbit: Partition = field(repr=False)
    fingerprint: Partition = field(repr=False)
    entropy: Partition = field(repr=False)
    entropies: list[float] = field(repr=False)
    elapsed_ms: float

    @property
    def equal_orbit_fingerprint(self) -> bool:
        return partitions_equal(self.orbit, self.fingerprint)

    @property
    def equal_fingerprint_entropy(self) -> bool:
        return partitions_equal(self.fingerprint, self.entropy)

    @property
    def orbit_refines_fingerprint(self) -> bool:
        return refines(self.orbit, self.fingerprint)

    @property
    def burnside_matches(self) -> bool:
        return len(self.orbit) == orbit_count_burnside(self.n)

    @property
    def all_equal(self) -> bool:
        return self.equal_orbit_fingerprint and self.equal_fingerprint_entropy

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d.text(),
            "orbit_classes": len(self.orbit),
            "fingerprint_classes": len(self.fingerprint),
            "entropy_classes": len(self.entropy),
            "burnside_count": orbit_count_burnside(self.n),
            "equal_orbit_fingerprint": self.equal_orbit_fingerprint,
            "equal_fingerprint_entropy": self.equal_fingerprint_entropy,
            "orbit_refines_fingerprint": self.orbit_refines_fingerprint,
            "class_size_histogram": {str(k): v for k, v in self.orbit.size_histogram().items()},
            "elapsed_ms": round(self.elapsed_ms, 3),
        }

    def rows(self):
        """``(input, orbit_id, fingerprint_class_id, entropy_bits)`` for every input."""
        orbit_ids = self.orbit.class_ids()
        fp_ids = self.fingerprint.class_ids()
        for v in range(1 << self.n):
            yield BitString(self.n, v), orbit_ids[v], fp_ids[v], self.entropies[v]


def verify_conjecture(n: int, d="1/2", tol: float = DEFAULT_ENTROPY_TOL, workers: int = 1) -> ConjectureReport:
    """Orbit, fingerprint and entropy partitions of ``{0,1}^n`` from a single scan."""
    start = time.perf_counter()
    result = scan(n, d, workers)
    orbits = orbit_partition(n)
    fps = fingerprint_partition(n, d, result=result)
    ents = entropy_partition(n, d, tol, result=result)
    return ConjectureReport(
        n, result.param, orbits, fps, ents, result.entropies, (time.perf_counter() - start) * 1e3
    )
