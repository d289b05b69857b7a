"""Δ:n by the merged infinite product

    Δ:n = α^n ∏_{k≥0} (a+kb)/(a+(n+k)b) · [(α+(k+1)b)/(α+kb)]^n

evaluated as a compensated sum of log factors with a tail correction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .core import (
    Accelerated,
    AlphaStrategy,
    Custom,
    DefaultA,
    EvalProblem,
    EvalResult,
    NoConvergence,
    ParamError,
    SeriesParams,
)

__all__ = [
    "FixedTerms",
    "Adaptive",
    "TruncationSpec",
    "resolve_alpha",
    "log_factor",
    "log_factors",
    "partial_product",
    "eval_product",
    "adaptive_log_sum",
    "MIN_TERMS",
    "compensated_sum",
]

MIN_TERMS = 16
# vectorised chunks are capped so memory stays bounded at large budgets
_CHUNK = 1 << 20
_BLOCK = 1024


@dataclass(frozen=True)
class FixedTerms:
    i: int

    def __post_init__(self) -> None:
        if isinstance(self.i, bool) or int(self.i) != self.i or self.i < 1:
            raise ParamError(f"FixedTerms needs an integer i >= 1, got {self.i!r}")
        object.__setattr__(self, "i", int(self.i))


@dataclass(frozen=True)
class Adaptive:
    tol: float = 1e-10
    max_terms: int = 1 << 24

    def __post_init__(self) -> None:
        if not 0 < self.tol < 1:
            raise ParamError(f"tol must lie in (0, 1), got {self.tol!r}")
        if int(self.max_terms) != self.max_terms or self.max_terms < MIN_TERMS:
            raise ParamError(f"max_terms must be an integer >= {MIN_TERMS}")
        object.__setattr__(self, "max_terms", int(self.max_terms))


TruncationSpec = Union[FixedTerms, Adaptive]


def resolve_alpha(strategy: AlphaStrategy, params: SeriesParams, n: float) -> float:
    if isinstance(strategy, DefaultA):
        return params.a
    if isinstance(strategy, Accelerated):
        alpha = params.a + (n - 1) * params.b / 2
        return alpha if alpha > 0 else params.a
    if isinstance(strategy, Custom):
        # Custom validates itself, but a hand-built instance may bypass that
        if not strategy.alpha > 0:
            raise ParamError(f"alpha must be > 0, got {strategy.alpha}")
        return float(strategy.alpha)
    raise ParamError(f"unknown alpha strategy {strategy!r}")


def _check_factor_domain(a: float, b: float, n: float, alpha: float, k: int) -> None:
    for name, v in (
        ("a+kb", a + k * b),
        ("a+(n+k)b", a + (n + k) * b),
        ("alpha+kb", alpha + k * b),
    ):
        if not v > 0:
            raise ParamError(f"{name} = {v} is not positive at k={k}")


def log_factor(params: SeriesParams, n: float, alpha: float, k: int) -> float:
    """Log of the k-th merged factor ``(a+kb)/(a+(n+k)b) · ((α+(k+1)b)/(α+kb))^n``.

    Both ratios are close to one for large k, so they go through log1p.
    """
    a, b = params.a, params.b
    _check_factor_domain(a, b, n, alpha, k)
    return -math.log1p(n * b / (a + k * b)) + n * math.log1p(b / (alpha + k * b))


def log_factors(params: SeriesParams, n: float, alpha: float, start: int, stop: int) -> np.ndarray:
    """Vectorised :func:`log_factor` for ``k = start, ..., stop-1``."""
    a, b = params.a, params.b
    if stop <= start:
        return np.empty(0)
    # the factors are monotone in k, so checking the first index suffices
    _check_factor_domain(a, b, n, alpha, start)
    k = np.arange(start, stop, dtype=np.float64)
    return -np.log1p(n * b / (a + k * b)) + n * np.log1p(b / (alpha + k * b))


def compensated_sum(values: np.ndarray) -> float:
    """Sum with error control: pairwise within blocks of 1024, exact across blocks.

    Iterating ``math.fsum`` over millions of numpy scalars is the bottleneck
    otherwise; the block sums carry ~10 ulp of their own block, which is far
    below the accuracy of the terms themselves.
    """
    if values.size == 0:
        return 0.0
    blocks = np.add.reduceat(values, np.arange(0, values.size, _BLOCK))
    return math.fsum(blocks.tolist())


def _fsum_range(terms: Callable[[int, int], np.ndarray], start: int, stop: int) -> float:
    parts = []
    for lo in range(start, stop, _CHUNK):
        parts.append(compensated_sum(terms(lo, min(stop, lo + _CHUNK))))
    return math.fsum(parts)


def partial_product(params: SeriesParams, n: float, alpha: float, i: int) -> float:
    """The finite product with ``i`` quotient factors and tail power ``(α+ib)^n``.

    ``i = 1, 2, 3, ...`` gives the successive approximations I, II, III, ...
    """
    if isinstance(i, bool) or int(i) != i or i < 1:
        raise ParamError(f"i must be a positive integer, got {i!r}")
    if not alpha > 0:
        raise ParamError(f"alpha must be > 0, got {alpha}")
    a, b = params.a, params.b
    _check_factor_domain(a, b, n, alpha, 0)

    def ratios(lo: int, hi: int) -> np.ndarray:
        k = np.arange(lo, hi, dtype=np.float64)
        return -np.log1p(n * b / (a + k * b))

    return math.exp(_fsum_range(ratios, 0, int(i)) + n * math.log(alpha + i * b))


@dataclass(frozen=True)
class LogSum:
    """Outcome of summing a log-factor series with tail correction."""

    total: float  # corrected sum of logs
    terms: int
    error_estimate: float


def adaptive_log_sum(
    terms: Callable[[int, int], np.ndarray],
    trunc: TruncationSpec,
) -> LogSum:
    """Sum ``Σ_{k≥0} f(k)`` for a series whose terms decay like ``1/k²``.

    ``terms(lo, hi)`` returns ``f(lo), ..., f(hi-1)``. The tail beyond the
    first ``K`` terms is estimated as ``K·f(K)``.

    FixedTerms(i) returns the plain sum of ``i`` terms and reports the tail
    estimate as its error. Adaptive doubles ``K`` from 16 and compares the
    corrected sums at ``K/2`` and ``K``; since the corrected sum converges
    like ``1/K²`` their difference is about three times the remaining error.
    It stops once that difference is below ``tol/2`` and the previous one
    was below ``2·tol``, which rejects an accidental early sign crossing.
    """
    if isinstance(trunc, FixedTerms):
        i = trunc.i
        total = _fsum_range(terms, 0, i)
        tail = i * float(terms(i, i + 1)[0])
        return LogSum(total, i, abs(tail))

    if not isinstance(trunc, Adaptive):
        raise ParamError(f"unknown truncation spec {trunc!r}")

    parts: list[float] = []
    done = 0
    size = MIN_TERMS
    prev_corrected = None
    prev_diff = math.inf
    while True:
        parts.append(_fsum_range(terms, done, size))
        done = size
        head = math.fsum(parts)
        corrected = head + size * float(terms(size, size + 1)[0])
        if prev_corrected is not None:
            diff = abs(corrected - prev_corrected)
            if diff < trunc.tol / 2 and prev_diff < 2 * trunc.tol:
                return LogSum(corrected, size, diff)
            prev_diff = diff
        prev_corrected = corrected
        if 2 * size > trunc.max_terms:
            raise NoConvergence(
                f"no convergence to tol={trunc.tol:g} within {trunc.max_terms} terms "
                f"(last change {prev_diff:.3g})"
            )
        size *= 2


def eval_product(
    problem: EvalProblem,
    strategy: AlphaStrategy = DefaultA(),
    trunc: TruncationSpec = Adaptive(),
) -> EvalResult:
    """Evaluate Δ:n by the infinite product.

    ``error_estimate`` is a relative error estimate (an absolute error on
    the log of the value).
    """
    if not isinstance(problem, EvalProblem):
        raise ParamError("eval_product needs a validated EvalProblem")
    params, n = problem.params, problem.n
    if n == 0:
        return EvalResult(1.0, "product", 0, 0.0)
    alpha = resolve_alpha(strategy, params, n)

    s = adaptive_log_sum(lambda lo, hi: log_factors(params, n, alpha, lo, hi), trunc)
    log_value = n * math.log(alpha) + s.total
    try:
        value = math.exp(log_value)
    except OverflowError as exc:
        raise OverflowError(f"Δ:{n} = exp({log_value:.6g}) is not representable") from exc
    return EvalResult(value, "product", s.terms, s.error_estimate)
