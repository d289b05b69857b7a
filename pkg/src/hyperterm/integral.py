"""Beta-type integral reductions of Δ:½ and Δ:⅓.

All integrals run over (0, 1) and carry algebraic endpoint singularities,
so they go through a tanh-sinh rule. The rule hands the integrand both
``x`` and ``1 - x`` computed without cancellation; near ``x = 1`` the
singular factor must be evaluated from the latter, since ``x`` itself
rounds to 1 long before the weights become negligible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .core import (
    DomainError,
    EvalProblem,
    EvalResult,
    NoConvergence,
    ParamError,
    SeriesParams,
    shift,
)

__all__ = [
    "QuadratureSpec",
    "PQSpec",
    "tanh_sinh",
    "tanh_sinh_levels",
    "pq_integrand",
    "pq_integral",
    "pq_ratio_product",
    "eval_half",
    "third_integrals",
    "eval_third",
    "integral_supported",
    "eval_integral",
]

# beyond this abscissa min(x, 1-x) drops below ~1e-300
_T_MAX = 6.0
# non-finite integrand values closer than this to an endpoint are dropped
_EDGE = 1e-150
_MIN_LEVEL = 3


@dataclass(frozen=True)
class QuadratureSpec:
    tol: float = 1e-12
    max_level: int = 12

    def __post_init__(self) -> None:
        if not 0 < self.tol < 1:
            raise ParamError(f"tol must lie in (0, 1), got {self.tol!r}")
        if int(self.max_level) != self.max_level or not 1 <= self.max_level <= 16:
            raise ParamError(f"max_level must be an integer in [1, 16], got {self.max_level!r}")
        object.__setattr__(self, "max_level", int(self.max_level))


@dataclass(frozen=True)
class PQSpec:
    """Parameters of ∫₀¹ x^(p-1) (1 - x^step)^(m/step - 1) dx."""

    p: float
    m: float
    step: float

    def __post_init__(self) -> None:
        for name in ("p", "m", "step"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and v > 0):
                raise ParamError(f"{name} must be finite and > 0, got {v}")
            object.__setattr__(self, name, v)


Integrand = Callable[..., np.ndarray]


def _nodes(h: float, odd_only: bool) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Abscissae x, complements 1-x and weights (without the factor h)."""
    j_max = int(_T_MAX / h)
    j = np.arange(-j_max, j_max + 1)
    if odd_only:
        j = j[j % 2 != 0]
    t = j * h
    u = 0.5 * math.pi * np.sinh(t)
    e = np.exp(-2.0 * np.abs(u))
    big = 1.0 / (1.0 + e)
    small = e / (1.0 + e)
    x = np.where(u >= 0, big, small)
    xc = np.where(u >= 0, small, big)
    w = math.pi * np.cosh(t) * e / (1.0 + e) ** 2
    return x, xc, w


def _weighted_sum(integrand: Integrand, h: float, odd_only: bool, complement: bool) -> float:
    x, xc, w = _nodes(h, odd_only)
    keep = (x > 0) & (xc > 0) & (w > 0)
    x, xc, w = x[keep], xc[keep], w[keep]
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        fx = np.asarray(integrand(x, xc) if complement else integrand(x), dtype=np.float64)
        contrib = w * fx
    bad = ~np.isfinite(contrib)
    if bad.any():
        edge = np.minimum(x, xc) < _EDGE
        if not complement:
            # x alone cannot resolve the endpoint once it rounds to 0 or 1
            edge |= (x == 1.0) | (x == 0.0)
        if (bad & ~edge).any():
            where = x[bad & ~edge][0]
            raise DomainError(f"integrand is not finite at x={where!r}")
        contrib = np.where(bad, 0.0, contrib)
    return math.fsum(contrib.tolist())


def tanh_sinh_levels(
    integrand: Integrand, max_level: int, *, complement: bool = False
) -> Iterator[float]:
    """Yield the tanh-sinh estimate at levels 0, 1, ..., max_level.

    Level L uses step 2^-L on the t axis; each level only evaluates the new
    (odd) nodes and reuses the previous sum.
    """
    h = 1.0
    total = _weighted_sum(integrand, h, False, complement)
    yield h * total
    for _ in range(max_level):
        h /= 2
        total += _weighted_sum(integrand, h, True, complement)
        yield h * total


def _integrate(
    integrand: Integrand, spec: QuadratureSpec, complement: bool
) -> tuple[float, float, int]:
    prev = None
    err = math.inf
    for level, value in enumerate(tanh_sinh_levels(integrand, spec.max_level, complement=complement)):
        if prev is not None:
            err = abs(value - prev)
            if level >= _MIN_LEVEL and err < spec.tol * max(1.0, abs(value)):
                return value, err, level
        prev = value
    raise NoConvergence(
        f"tanh-sinh did not reach tol={spec.tol:g} by level {spec.max_level} (last change {err:.3g})"
    )


def tanh_sinh(
    integrand: Integrand,
    spec: QuadratureSpec = QuadratureSpec(),
    *,
    complement: bool = False,
) -> tuple[float, float]:
    """Integrate over (0, 1); returns ``(value, err)``.

    ``integrand`` is called with a numpy array of abscissae, or with
    ``(x, 1 - x)`` when ``complement`` is true. ``err`` is the last
    level-to-level change; convergence means ``err < tol·max(1, |value|)``.
    """
    value, err, _ = _integrate(integrand, spec, complement)
    return value, err


def pq_integrand(spec: PQSpec) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    """``x^(p-1) (1 - x^step)^(m/step - 1)`` as a function of ``(x, 1 - x)``."""
    p, step = spec.p, spec.step
    expo = spec.m / step - 1.0

    def f(x: np.ndarray, xc: np.ndarray) -> np.ndarray:
        lnx = np.where(x > 0.5, np.log1p(-xc), np.log(x))
        one_minus = -np.expm1(step * lnx)
        return np.exp((p - 1.0) * lnx + expo * np.log(one_minus))

    return f


def _pq(spec: PQSpec, quad: QuadratureSpec) -> tuple[float, float, int]:
    return _integrate(pq_integrand(spec), quad, True)


def pq_integral(spec: PQSpec, quad: QuadratureSpec = QuadratureSpec()) -> float:
    return _pq(spec, quad)[0]


def pq_ratio_product(p: float, q: float, m: float, step: float, terms: int) -> float:
    """First ``terms`` factors of ∏ (q+ks)(m+p+ks) / ((p+ks)(m+q+ks)), s = step.

    In the limit this is the ratio of the P/Q integrals with exponents p and q.
    """
    if isinstance(terms, bool) or int(terms) != terms or terms < 1:
        raise ParamError(f"terms must be a positive integer, got {terms!r}")
    for name, v in (("p", p), ("q", q), ("m", m), ("step", step)):
        if not (math.isfinite(v) and v > 0):
            raise ParamError(f"{name} must be finite and > 0, got {v}")
    from .product import _fsum_range

    def logs(lo: int, hi: int) -> np.ndarray:
        k = np.arange(lo, hi, dtype=np.float64) * step
        # (q+ks)/(p+ks) and (m+p+ks)/(m+q+ks), each as log1p of a small ratio
        return np.log1p((q - p) / (p + k)) + np.log1p((p - q) / (m + q + k))

    return math.exp(_fsum_range(logs, 0, int(terms)))


def eval_half(params: SeriesParams, quad: QuadratureSpec = QuadratureSpec()) -> EvalResult:
    """Δ:½ = sqrt(a P / Q) with P, Q taken at exponents 2a+b and 2a (m = b, step = 2b)."""
    a, b = params.a, params.b
    p_val, p_err, p_lvl = _pq(PQSpec(p=2 * a + b, m=b, step=2 * b), quad)
    q_val, q_err, q_lvl = _pq(PQSpec(p=2 * a, m=b, step=2 * b), quad)
    value = math.sqrt(a * p_val / q_val)
    rel = 0.5 * (p_err / p_val + q_err / q_val)
    return EvalResult(value, "integral", max(p_lvl, q_lvl), rel * value)


def third_integrals(params: SeriesParams, quad: QuadratureSpec = QuadratureSpec()) -> dict:
    """The four integrals P, Q, P', Q' behind Δ:⅓, keyed by name.

    With c = b/3 and step 3c: P and Q use m = c at exponents a-c and a;
    P' and Q' use m = 2c at exponents a+c and a-c.
    """
    a, b = params.a, params.b
    c = b / 3
    if not a - c > 0:
        raise ParamError(f"the Δ:⅓ reduction needs a > b/3, got a={a}, b={b}")
    specs = {
        "P": PQSpec(p=a - c, m=c, step=b),
        "Q": PQSpec(p=a, m=c, step=b),
        "P'": PQSpec(p=a + c, m=2 * c, step=b),
        "Q'": PQSpec(p=a - c, m=2 * c, step=b),
    }
    return {name: _pq(spec, quad) for name, spec in specs.items()}


def eval_third(params: SeriesParams, quad: QuadratureSpec = QuadratureSpec()) -> EvalResult:
    """Δ:⅓ = cbrt(a P P' / (Q Q'))."""
    ints = third_integrals(params, quad)
    (p, pe, _), (q, qe, _) = ints["P"], ints["Q"]
    (p2, p2e, _), (q2, q2e, _) = ints["P'"], ints["Q'"]
    value = (params.a * p * p2 / (q * q2)) ** (1.0 / 3.0)
    rel = (pe / p + qe / q + p2e / p2 + q2e / q2) / 3.0
    level = max(lvl for _, _, lvl in ints.values())
    return EvalResult(value, "integral", level, rel * value)


def _unit_reduction(n: float) -> tuple[str, int] | None:
    """Split n = base + m with base in {1/2, 1/3}; None if n is neither."""
    m = math.floor(n)
    frac = n - m
    if frac == 0.5:
        return "half", m
    if abs(frac - 1.0 / 3.0) <= 4 * math.ulp(1.0) * max(1.0, abs(n)):
        return "third", m
    return None


def integral_supported(n: float) -> bool:
    return _unit_reduction(n) is not None


def eval_integral(problem: EvalProblem, quad: QuadratureSpec = QuadratureSpec()) -> EvalResult:
    """Δ:n for n = ½ + m or ⅓ + m (m any integer) via the integral reductions and a shift."""
    reduction = _unit_reduction(problem.n)
    if reduction is None:
        raise ParamError(f"the integral route covers n = 1/2 + m or 1/3 + m only, got n={problem.n}")
    kind, m = reduction
    params = problem.params
    if kind == "half":
        base, base_n = eval_half(params, quad), 0.5
    else:
        base, base_n = eval_third(params, quad), 1.0 / 3.0
    value = shift(params, base_n, m, base.value)
    rel = base.error_estimate / base.value
    return EvalResult(value, "integral", base.effort, rel * value)
