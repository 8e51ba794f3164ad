"""Exact output laws and transition matrices of the binary deletion and symmetric channels.

All probabilities are exact.  For a parameter ``a/b`` and blocklength ``n``
every probability the two channels can produce is an integer multiple of
``1/b**n``, so distributions and matrices are held as integer numerators over
that common denominator and only turned into :class:`~fractions.Fraction`
objects at the API surface.  Floats appear only in :func:`output_entropy`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping

import numpy as np

from .bitstring import BitString, code_lengths, subsequence_count_table
from .errors import InputError
from .linalg import integer_rank

BDC = "BDC"
BSC = "BSC"
MAX_MATRIX_N = 12
_INT64_LIMIT = 2**63 - 1


@dataclass(frozen=True)
class ChannelParam:
    """Channel kind plus its probability: deletion ``d`` for BDC, crossover ``p`` for BSC."""

    kind: str
    value: Fraction

    def __post_init__(self):
        if self.kind not in (BDC, BSC):
            raise InputError(f"unknown channel kind {self.kind!r}")
        value = Fraction(self.value)
        if not 0 < value < 1:
            raise InputError(f"channel parameter {value} outside (0, 1)")
        object.__setattr__(self, "value", value)

    @classmethod
    def bdc(cls, d) -> "ChannelParam":
        return cls(BDC, parse_rational(d))

    @classmethod
    def bsc(cls, p) -> "ChannelParam":
        return cls(BSC, parse_rational(p))

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator

    def text(self) -> str:
        return f"{self.value.numerator}/{self.value.denominator}"

    def __str__(self) -> str:
        return f"{self.kind}({self.text()})"


def parse_rational(text) -> Fraction:
    """Accept a Fraction, an int, ``"a/b"`` or a finite decimal such as ``"0.11"``."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, float):
        # floats go through their shortest repr so 0.11 means 11/100
        text = repr(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse rational {text!r}") from exc


def length_weights(n: int, param: ChannelParam) -> list[int]:
    """Numerators over ``b**n`` of one specific outcome with ``k`` survivors (BDC) or ``k`` non-flips (BSC).

    ``w[k] = a**(n-k) * (b-a)**k``: for the BDC this is the probability of a
    fixed deletion pattern keeping ``k`` bits; for the BSC it is the
    probability of a fixed error pattern with ``n-k`` flips.
    """
    a, b = param.numerator, param.denominator
    return [a ** (n - k) * (b - a) ** k for k in range(n + 1)]


def _numerator_dtype(param: ChannelParam, n: int):
    return np.int64 if param.denominator**n <= _INT64_LIMIT else object


@dataclass(frozen=True)
class OutputDistribution:
    input: BitString
    param: ChannelParam
    mass: Mapping[BitString, Fraction]

    def __post_init__(self):
        if any(p <= 0 for p in self.mass.values()):
            raise ValueError("output masses must be strictly positive")
        if sum(self.mass.values(), Fraction(0)) != 1:
            raise ValueError("output masses do not sum to 1")

    def support(self) -> list[BitString]:
        return list(self.mass)

    def __getitem__(self, y: BitString) -> Fraction:
        return self.mass.get(y, Fraction(0))


def _bdc_numerators(x: BitString, param: ChannelParam) -> dict[int, int]:
    """Map output code -> numerator over ``b**|x|`` for the BDC."""
    counts = subsequence_count_table([x.value], x.length)[0]
    weights = length_weights(x.length, param)
    out = {}
    for code in np.flatnonzero(counts):
        k = int(code).bit_length() - 1
        out[int(code)] = int(counts[code]) * weights[k]
    return out


def _bsc_numerators(x: BitString, param: ChannelParam) -> dict[int, int]:
    n = x.length
    weights = length_weights(n, param)
    return {
        (1 << n) | y: weights[n - bin(x.value ^ y).count("1")] for y in range(1 << n)
    }


def output_distribution(x: BitString, param: ChannelParam) -> OutputDistribution:
    if param.kind == BDC:
        nums = _bdc_numerators(x, param)
    else:
        nums = _bsc_numerators(x, param)
    den = param.denominator**x.length
    mass = {BitString.from_code(c): Fraction(v, den) for c, v in sorted(nums.items())}
    return OutputDistribution(x, param, mass)


def output_columns(n: int, kind: str) -> list[BitString]:
    """Column labels of the ``n``-th transition matrix in the global column order."""
    if kind == BDC:
        return [BitString.from_code(c) for c in range(1, 1 << (n + 1))]
    return [BitString(n, v) for v in range(1 << n)]


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """Exact ``n``-th transition matrix, stored as integer numerators over ``denominator``.

    Rows are the inputs ``{0,1}^n`` in lexicographic order.  Columns are
    ``{0,1}^{<=n}`` in column order for the BDC and ``{0,1}^n`` for the BSC.
    """

    n: int
    param: ChannelParam
    numerators: np.ndarray = field(repr=False)
    denominator: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.numerators.shape

    @property
    def rows(self) -> list[BitString]:
        return [BitString(self.n, v) for v in range(1 << self.n)]

    @property
    def columns(self) -> list[BitString]:
        return output_columns(self.n, self.param.kind)

    def entry(self, x: BitString, y: BitString) -> Fraction:
        col = y.code - 1 if self.param.kind == BDC else y.value
        if x.length != self.n:
            raise InputError("row label has the wrong length")
        return Fraction(int(self.numerators[x.value, col]), self.denominator)

    def row(self, x: BitString) -> list[Fraction]:
        return [Fraction(int(v), self.denominator) for v in self.numerators[x.value]]

    def iter_rows(self) -> Iterator[tuple[BitString, list[Fraction]]]:
        for x in self.rows:
            yield x, self.row(x)

    def to_float(self) -> np.ndarray:
        if self.numerators.dtype == object:
            return np.array(
                [[float(Fraction(int(v), self.denominator)) for v in r] for r in self.numerators]
            )
        return self.numerators.astype(np.float64) / float(self.denominator)

    def row_sums_exact(self) -> list[Fraction]:
        return [Fraction(int(s), self.denominator) for s in self.numerators.sum(axis=1)]


def transition_matrix(n: int, param: ChannelParam) -> TransitionMatrix:
    if not 1 <= n <= MAX_MATRIX_N:
        raise InputError(f"transition matrix blocklength {n} outside [1, {MAX_MATRIX_N}]")
    weights = length_weights(n, param)
    dtype = _numerator_dtype(param, n)
    w = np.array(weights, dtype=dtype)
    if param.kind == BDC:
        counts = subsequence_count_table(np.arange(1 << n), n)[:, 1:]
        k = code_lengths(n)[1:]
        nums = counts.astype(dtype) * w[k]
    else:
        v = np.arange(1 << n, dtype=np.int64)
        xor = v[:, None] ^ v[None, :]
        flips = np.zeros_like(xor)
        for i in range(n):
            flips += (xor >> i) & 1
        nums = w[n - flips]
    return TransitionMatrix(n, param, nums, param.denominator**n)


def rank_exact(m: TransitionMatrix) -> int:
    """Rank over the rationals; scaling by the common denominator leaves it unchanged."""
    return integer_rank(m.numerators.tolist())


def probability_floats(nums: np.ndarray, lengths: np.ndarray, n: int, param: ChannelParam) -> np.ndarray:
    """Float probabilities from BDC embedding counts: ``count * float(d^(n-k) (1-d)^k)``.

    Each per-length weight is rounded once and multiplied by the integer
    count, so the same output always gets the same float wherever it is
    computed.
    """
    den = param.denominator**n
    wf = np.array([float(Fraction(w, den)) for w in length_weights(n, param)])
    return nums.astype(np.float64) * wf[lengths]


def entropy_bits(probs: np.ndarray) -> float:
    """Shannon entropy in bits of positive probabilities, summed in array order."""
    return float(-np.sum(probs * np.log2(probs)))


def output_entropy(x: BitString, param: ChannelParam) -> float:
    if param.kind == BDC:
        counts = subsequence_count_table([x.value], x.length)[0]
        codes = np.flatnonzero(counts)
        probs = probability_floats(counts[codes], code_lengths(x.length)[codes], x.length, param)
    else:
        dist = output_distribution(x, param)
        probs = np.array([float(p) for p in dist.mass.values()])
    return entropy_bits(probs)


def _bernoulli_mask(rng: np.random.Generator, shape, prob: Fraction) -> np.ndarray:
    # exact Bernoulli(a/b): uniform integer in [0, b) falls below a
    return rng.integers(0, prob.denominator, size=shape) < prob.numerator


def sample_output_codes(x: BitString, param: ChannelParam, trials: int, seed: int) -> np.ndarray:
    """Codes of ``trials`` independent channel draws from PCG64 seeded with ``seed``."""
    rng = np.random.Generator(np.random.PCG64(seed))
    events = _bernoulli_mask(rng, (trials, x.length), param.value)
    bits = np.array(x.bits(), dtype=np.int64)
    codes = np.ones(trials, dtype=np.int64)
    if param.kind == BSC:
        received = bits[None, :] ^ events
        for j in range(x.length):
            codes = (codes << 1) | received[:, j]
        return codes
    keep = ~events
    for j in range(x.length):
        # a kept bit appends to the output, a deleted bit leaves the code alone
        codes = np.where(keep[:, j], (codes << 1) | bits[j], codes)
    return codes


def sample_output(x: BitString, param: ChannelParam, seed: int) -> BitString:
    return BitString.from_code(int(sample_output_codes(x, param, 1, seed)[0]))


def sample_outputs(x: BitString, param: ChannelParam, trials: int, seed: int) -> list[BitString]:
    return [BitString.from_code(int(c)) for c in sample_output_codes(x, param, trials, seed)]


def sampling_check(x: BitString, param: ChannelParam, trials: int, seed: int, sigmas: float = 3.0) -> list[dict]:
    """Compare empirical output frequencies of ``trials`` seeded draws with the exact law.

    One row per output in the support (plus any impossible output that was
    drawn), each with its binomial standard deviation and a ``within`` flag.
    """
    if trials < 1:
        raise InputError("need at least one trial")
    exact = output_distribution(x, param).mass
    codes, counts = np.unique(sample_output_codes(x, param, trials, seed), return_counts=True)
    seen = {int(c): int(k) for c, k in zip(codes, counts)}
    labels = sorted(set(exact) | {BitString.from_code(c) for c in seen})
    rows = []
    for y in labels:
        p = float(exact.get(y, 0))
        freq = seen.get(y.code, 0) / trials
        sigma = (p * (1 - p) / trials) ** 0.5
        rows.append(
            {
                "output": y.render() or "-",
                "exact": p,
                "empirical": freq,
                "sigma": sigma,
                "z": (freq - p) / sigma if sigma else (0.0 if freq == p else float("inf")),
                "within": abs(freq - p) <= sigmas * sigma,
            }
        )
    return rows
