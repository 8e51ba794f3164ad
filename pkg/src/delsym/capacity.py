"""Blahut-Arimoto maximisation of I(X;Y) over input laws on {0,1}^n, plus the
orbit-symmetrisation and invariance measurements used to check that the
maximiser is fixed by the channel's symmetries."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bitstring import reverse_bits
from .channel import TransitionMatrix, parse_rational
from .errors import InputError
from .symmetry import orbit_keys

PROB_FLOOR = 1e-300
DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100_000


@dataclass
class InputDistribution:
    n: int
    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=np.float64)
        if probs.shape != (1 << self.n,):
            raise InputError(f"expected {1 << self.n} probabilities, got {probs.shape}")
        if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-12:
            raise InputError("input distribution must be nonnegative and sum to 1")
        self.probs = probs

    @classmethod
    def uniform(cls, n: int) -> "InputDistribution":
        return cls(n, np.full(1 << n, 1.0 / (1 << n)))

    @classmethod
    def point_mass(cls, n: int, value: int) -> "InputDistribution":
        probs = np.zeros(1 << n)
        probs[value] = 1.0
        return cls(n, probs)

    @classmethod
    def random(cls, n: int, seed: int) -> "InputDistribution":
        rng = np.random.Generator(np.random.PCG64(seed))
        probs = rng.random(1 << n) + 1e-3
        return cls(n, probs / probs.sum())


@dataclass
class MIResult:
    mi_per_symbol: float
    distribution: InputDistribution
    iterations: int
    converged: bool
    invariance_gap: float
    bound_gap: float = math.nan
    max_decrease: float = 0.0
    trace: list[float] = field(default_factory=list, repr=False)

    @property
    def mutual_information(self) -> float:
        return self.mi_per_symbol * self.distribution.n


def _float_matrix(m) -> np.ndarray:
    if isinstance(m, TransitionMatrix):
        return m.to_float()
    return np.asarray(m, dtype=np.float64)


def _entropy_rows(w: np.ndarray) -> np.ndarray:
    safe = np.where(w > 0, w, 1.0)
    return -(w * np.log2(safe)).sum(axis=1)


def mutual_information(dist: InputDistribution, m) -> float:
    """``H(M^T p) - sum_x p(x) H(row_x)`` in bits."""
    w = _float_matrix(m)
    if w.shape[0] != dist.probs.size:
        raise InputError(f"matrix has {w.shape[0]} rows, distribution {dist.probs.size} entries")
    q = dist.probs @ w
    hq = -np.sum(np.where(q > 0, q * np.log2(np.maximum(q, PROB_FLOOR)), 0.0))
    return float(hq - dist.probs @ _entropy_rows(w))


def _divergences(w: np.ndarray, logw: np.ndarray, p: np.ndarray) -> np.ndarray:
    """``D(W_x || q)`` in nats for every input ``x``, where ``q = p W``."""
    q = p @ w
    return (w * (logw - np.log(np.maximum(q, PROB_FLOOR)))).sum(axis=1)


def blahut_arimoto(
    m,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    init: InputDistribution | None = None,
    keep_trace: bool = False,
) -> MIResult:
    """Maximise I(X;Y) over input laws for the row-stochastic matrix ``m``.

    Stops once the capacity sandwich ``max_x D(W_x||q) - I`` is below ``tol``
    bits and no input probability moved by more than ``tol`` in the last
    step.  Hitting ``max_iter`` returns the last iterate with
    ``converged=False``.  Inputs with zero initial mass stay at zero.
    """
    if tol <= 0 or max_iter < 1:
        raise InputError("need tol > 0 and max_iter >= 1")
    w = _float_matrix(m)
    if np.any(w < 0) or np.max(np.abs(w.sum(axis=1) - 1.0)) > 1e-12:
        raise InputError("transition matrix is not row-stochastic")
    n_inputs = w.shape[0]
    n = int(round(math.log2(n_inputs)))
    if 1 << n != n_inputs:
        raise InputError("number of inputs is not a power of two")
    p = (init or InputDistribution.uniform(n)).probs.copy()
    logw = np.log(np.where(w > 0, w, 1.0))

    ln2 = math.log(2)
    prev_mi = -math.inf
    max_decrease = 0.0
    trace = []
    converged = False
    gap = math.inf
    it = 0
    for it in range(1, max_iter + 1):
        div = _divergences(w, logw, p)
        mi = float(p @ div) / ln2
        gap = float(div.max()) / ln2 - mi
        max_decrease = max(max_decrease, prev_mi - mi)
        prev_mi = mi
        if keep_trace:
            trace.append(mi)
        # multiplicative update, shifted by the max exponent for stability
        scaled = p * np.exp(div - div.max())
        new_p = scaled / scaled.sum()
        step = float(np.max(np.abs(new_p - p)))
        p = new_p
        if gap < tol and step < tol:
            converged = True
            break

    dist = InputDistribution(n, p / p.sum())
    final = mutual_information(dist, w)
    return MIResult(
        mi_per_symbol=final / n,
        distribution=dist,
        iterations=it,
        converged=converged,
        invariance_gap=invariance_gap(dist),
        bound_gap=gap,
        max_decrease=max(max_decrease, prev_mi - final),
        trace=trace,
    )


def orbit_symmetrize(dist: InputDistribution) -> InputDistribution:
    """Replace every probability by the mean over its flip/reversal orbit."""
    keys = orbit_keys(dist.n)
    sums = np.bincount(keys, weights=dist.probs, minlength=1 << dist.n)
    sizes = np.bincount(keys, minlength=1 << dist.n)
    return InputDistribution(dist.n, sums[keys] / sizes[keys])


def invariance_gap(dist: InputDistribution) -> float:
    """``max |P(x) - P(gx)|`` over the flip/reversal group."""
    n = dist.n
    v = np.arange(1 << n)
    mask = (1 << n) - 1
    rev = np.array([reverse_bits(int(u), n) for u in v])
    p = dist.probs
    return float(max(np.max(np.abs(p - p[img])) for img in (v ^ mask, rev, rev ^ mask)))


def binary_entropy(p: float) -> float:
    if p <= 0 or p >= 1:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def bsc_capacity_closed_form(p) -> float:
    """``1 - h2(p)`` bits per use."""
    value = parse_rational(p) if not isinstance(p, float) else p
    if not 0 < value < 1:
        raise InputError(f"crossover probability {p} outside (0, 1)")
    return 1.0 - binary_entropy(float(value))


def matrix_condition(m) -> float:
    """2-norm condition number of the float transition matrix (ratio of extreme singular values)."""
    s = np.linalg.svd(_float_matrix(m), compute_uv=False)
    return float(s[0] / s[-1])


@dataclass
class CapacityReport:
    channel: str
    param: str
    n: int
    result: MIResult
    condition_number: float

    def to_dict(self) -> dict:
        r = self.result
        return {
            "channel": self.channel,
            "param": self.param,
            "n": self.n,
            "mi_per_symbol": r.mi_per_symbol,
            "iterations": r.iterations,
            "converged": r.converged,
            "invariance_gap": r.invariance_gap,
            "bound_gap": r.bound_gap,
            "condition_number": self.condition_number,
            "distribution": [float(v) for v in r.distribution.probs],
        }


def capacity_report(m: TransitionMatrix, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, init=None) -> CapacityReport:
    result = blahut_arimoto(m, tol, max_iter, init)
    return CapacityReport(m.param.kind, m.param.text(), m.n, result, matrix_condition(m))
