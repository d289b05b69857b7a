"""Closed-form Gamma oracle and the quotient series Δ:n / Γ:n.

The oracle uses Δ:n = b^n Γ(a/b + n) / Γ(a/b) with a self-contained
Lanczos log-gamma, so it shares no code with the product or integral
routes it is meant to check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    Divergent,
    DivergentMarker,
    EvalProblem,
    EvalResult,
    ParamError,
    SeriesParams,
    validate,
)
from .integral import PQSpec, QuadratureSpec, pq_integral
from .product import Adaptive, TruncationSpec, adaptive_log_sum

__all__ = [
    "lanczos_lngamma",
    "lanczos_gamma",
    "gamma_oracle",
    "eval_oracle",
    "QuotientParams",
    "quotient_log_factors",
    "quotient_term_product",
    "quotient_term_integral",
]

# g = 7, n = 9 (Godfrey's coefficient set)
_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.91893853320467274178


def lanczos_lngamma(z: float) -> float:
    """ln Γ(z) for real z > 0."""
    if not z > 0:
        raise ParamError(f"lanczos_lngamma needs z > 0, got {z}")
    if z < 0.5:
        # the coefficient set is tuned for z >= 1/2; step up with Γ(z) = Γ(z+1)/z
        return lanczos_lngamma(z + 1.0) - math.log(z)
    z -= 1.0
    series = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        series += _LANCZOS[i] / (z + i)
    t = z + _G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * math.log(t) - t + math.log(series)


def lanczos_gamma(z: float) -> float:
    return math.exp(lanczos_lngamma(z))


def gamma_oracle(params: SeriesParams, n: float) -> float:
    """Δ:n from the Gamma function. Raises :class:`Divergent` if a + n b <= 0."""
    problem = validate(params, n)
    if isinstance(problem, DivergentMarker):
        raise Divergent(problem)
    if problem.n == 0:
        return 1.0
    a, b, n = problem.a, problem.b, problem.n
    z = a / b
    return math.exp(n * math.log(b) + lanczos_lngamma(z + n) - lanczos_lngamma(z))


@dataclass(frozen=True)
class QuotientParams:
    """The quotient of two progressions with common difference b.

    Its term at index n is Δ:n / Γ:n, where Δ starts at ``a`` and Γ at ``c``.
    """

    a: float
    c: float
    b: float
    n: float

    def __post_init__(self) -> None:
        for name in ("a", "c", "b", "n"):
            v = getattr(self, name)
            try:
                v = float(v)
            except (TypeError, ValueError) as exc:
                raise ParamError(f"{name} must be a real number, got {v!r}") from exc
            if not math.isfinite(v):
                raise ParamError(f"{name} must be finite, got {v}")
            object.__setattr__(self, name, v)
        if self.a <= 0 or self.c <= 0 or self.b <= 0:
            raise ParamError("a, c and b must all be > 0")
        if self.a + self.n * self.b <= 0 or self.c + self.n * self.b <= 0:
            raise ParamError("a + n b and c + n b must both be > 0")


def quotient_log_factors(qp: QuotientParams, start: int, stop: int) -> np.ndarray:
    """Logs of ``(a+kb)(c+(n+k)b) / ((a+(n+k)b)(c+kb))`` for k in [start, stop)."""
    if stop <= start:
        return np.empty(0)
    a, c, b, n = qp.a, qp.c, qp.b, qp.n
    k = np.arange(start, stop, dtype=np.float64)
    return -np.log1p(n * b / (a + k * b)) + np.log1p(n * b / (c + k * b))


def quotient_term_product(qp: QuotientParams, trunc: TruncationSpec = Adaptive()) -> float:
    """Δ:n / Γ:n from the α-free product (the α^n powers of the two series cancel)."""
    if qp.a == qp.c or qp.n == 0:
        return 1.0
    s = adaptive_log_sum(lambda lo, hi: quotient_log_factors(qp, lo, hi), trunc)
    return math.exp(s.total)


def quotient_term_integral(qp: QuotientParams, quad: QuadratureSpec = QuadratureSpec()) -> float:
    """Δ:n / Γ:n as a ratio of two P/Q integrals with step b and offset n b.

    Only 0 < n < 1, where the weight (1 - x^b)^(n-1) is integrable and the
    ratio needs no shift.
    """
    if not 0 < qp.n < 1:
        raise ParamError(f"the integral quotient route needs 0 < n < 1, got n={qp.n}")
    m = qp.n * qp.b
    p_val = pq_integral(PQSpec(p=qp.c, m=m, step=qp.b), quad)
    q_val = pq_integral(PQSpec(p=qp.a, m=m, step=qp.b), quad)
    return p_val / q_val


def eval_oracle(problem: EvalProblem) -> EvalResult:
    """:func:`gamma_oracle` packaged as an :class:`EvalResult`."""
    value = gamma_oracle(problem.params, problem.n)
    # Lanczos (g=7, 9 terms) plus rounding of the exponent
    err = 1e-15 * (1.0 + abs(math.log(value)))
    return EvalResult(value, "oracle", 1, err)
