"""Domain types, validation and integer-index machinery.

A progression ``a, a(a+b), a(a+b)(a+2b), ...`` is described by
:class:`SeriesParams`; its (interpolated) term at index ``n`` is written
``Δ:n`` throughout the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Union

__all__ = [
    "ParamError",
    "NoConvergence",
    "DomainError",
    "Divergent",
    "SeriesParams",
    "EvalProblem",
    "DivergentMarker",
    "DefaultA",
    "Accelerated",
    "Custom",
    "AlphaStrategy",
    "EvalResult",
    "validate",
    "direct_term",
    "shift",
]

# ln(sys.float_info.max)
_LOG_MAX = 709.782712893384


class ParamError(ValueError):
    """Invalid parameters (non-positive a or b, non-finite input, bad factor)."""


class NoConvergence(ArithmeticError):
    """An iterative evaluation hit its budget before meeting its tolerance."""


class DomainError(ValueError):
    """An integrand produced a non-finite value away from the endpoints."""


def _finite(name: str, x: float) -> float:
    try:
        x = float(x)
    except (TypeError, ValueError) as exc:
        raise ParamError(f"{name} must be a real number, got {x!r}") from exc
    if not math.isfinite(x):
        raise ParamError(f"{name} must be finite, got {x!r}")
    return x


@dataclass(frozen=True)
class SeriesParams:
    a: float
    b: float

    def __post_init__(self) -> None:
        a = _finite("a", self.a)
        b = _finite("b", self.b)
        if a <= 0:
            raise ParamError(f"a must be > 0, got {a}")
        if b <= 0:
            raise ParamError(f"b must be > 0, got {b}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def factor(self, x: float) -> float:
        """The progression factor ``a + x*b``."""
        return self.a + x * self.b


@dataclass(frozen=True)
class EvalProblem:
    """A validated ``(params, n)`` pair; guarantees ``a + n*b > 0``.

    Build one through :func:`validate`, not directly.
    """

    params: SeriesParams
    n: float

    @property
    def a(self) -> float:
        return self.params.a

    @property
    def b(self) -> float:
        return self.params.b


@dataclass(frozen=True)
class DivergentMarker:
    """Returned by :func:`validate` when ``a + n*b <= 0``: Δ:n is infinite."""

    params: SeriesParams
    n: float

    @property
    def first_factor(self) -> float:
        return self.params.factor(self.n)


class Divergent(ArithmeticError):
    """Raised by evaluators that cannot return a marker."""

    def __init__(self, marker: DivergentMarker):
        super().__init__(
            f"index n={marker.n} is divergent for a={marker.params.a}, "
            f"b={marker.params.b} (a + n*b = {marker.first_factor})"
        )
        self.marker = marker


# Strategies for the free parameter α of the infinite product.


@dataclass(frozen=True)
class DefaultA:
    """α = a."""


@dataclass(frozen=True)
class Accelerated:
    """α = a + (n-1)b/2, which cancels the 1/k² term of every log factor."""


@dataclass(frozen=True)
class Custom:
    alpha: float

    def __post_init__(self) -> None:
        alpha = _finite("alpha", self.alpha)
        if alpha <= 0:
            raise ParamError(f"alpha must be > 0, got {alpha}")
        object.__setattr__(self, "alpha", alpha)


AlphaStrategy = Union[DefaultA, Accelerated, Custom]

Method = Literal["product", "integral", "oracle"]


@dataclass(frozen=True)
class EvalResult:
    value: float
    method: Method
    effort: int
    error_estimate: float
    divergent: bool = False

    def __post_init__(self) -> None:
        if self.divergent:
            if self.value != math.inf:
                raise ValueError("a divergent result must carry value=inf")
        elif not self.error_estimate >= 0:
            raise ValueError(f"error_estimate must be >= 0, got {self.error_estimate}")

    @classmethod
    def divergent_result(cls, method: Method) -> "EvalResult":
        return cls(math.inf, method, 0, math.nan, True)


def validate(params: SeriesParams, n: float) -> Union[EvalProblem, DivergentMarker]:
    """Check an index against a progression.

    Raises :class:`ParamError` for non-finite ``n``; ``params`` is already
    checked by its constructor.
    """
    if not isinstance(params, SeriesParams):
        raise ParamError(f"expected SeriesParams, got {type(params).__name__}")
    n = _finite("n", n)
    if params.factor(n) > 0:
        return EvalProblem(params, n)
    return DivergentMarker(params, n)


def direct_term(params: SeriesParams, k: int) -> float:
    """``a (a+b) ... (a+(k-1)b)``, the term made of ``k`` factors.

    The logarithm is accumulated first so that an out-of-range result is
    reported as :class:`OverflowError` instead of ``inf``; in range, the
    plain product is returned because it carries less rounding than
    ``exp`` of a large log-sum.
    """
    if isinstance(k, bool) or int(k) != k or k < 0:
        raise ParamError(f"k must be a nonnegative integer, got {k!r}")
    k = int(k)
    if k == 0:
        return 1.0
    factors = [params.a + j * params.b for j in range(k)]
    log_total = math.fsum(math.log(f) for f in factors)
    if log_total > _LOG_MAX:
        raise OverflowError(f"Δ:{k} = exp({log_total:.6g}) is not representable")
    return math.prod(factors)


def shift(params: SeriesParams, n: float, m: int, value_at_n: float) -> float:
    """Δ:(n+m) from Δ:n via the recurrence Δ:(n+1) = (a + n b) Δ:n.

    Negative ``m`` runs the recurrence backwards (divides by the factors),
    which is how indices below the unit interval are reached.
    """
    if isinstance(m, bool) or int(m) != m:
        raise ParamError(f"m must be an integer, got {m!r}")
    m = int(m)
    value = float(value_at_n)
    if m >= 0:
        for j in range(m):
            f = params.factor(n + j)
            if f <= 0:
                raise ParamError(f"shift factor a + (n+{j})b = {f} is not positive")
            value *= f
    else:
        for j in range(1, -m + 1):
            f = params.factor(n - j)
            if f <= 0:
                raise ParamError(f"shift factor a + (n-{j})b = {f} is not positive")
            value /= f
    return value
