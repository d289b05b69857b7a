"""Interpolated terms Δ:n of the progression a, a(a+b), a(a+b)(a+2b), ...

Three independent routes are provided: the merged infinite product
(:mod:`hyperterm.product`), Beta-type integral reductions for n = ½ and ⅓
(:mod:`hyperterm.integral`) and a Lanczos Gamma oracle
(:mod:`hyperterm.reference`).
"""

from .core import (
    Accelerated,
    AlphaStrategy,
    Custom,
    DefaultA,
    Divergent,
    DivergentMarker,
    DomainError,
    EvalProblem,
    EvalResult,
    NoConvergence,
    ParamError,
    SeriesParams,
    direct_term,
    shift,
    validate,
)
from .integral import (
    PQSpec,
    QuadratureSpec,
    eval_half,
    eval_integral,
    eval_third,
    integral_supported,
    pq_integral,
    pq_ratio_product,
    tanh_sinh,
)
from .product import (
    Adaptive,
    FixedTerms,
    eval_product,
    log_factor,
    partial_product,
    resolve_alpha,
)
from .reference import (
    QuotientParams,
    eval_oracle,
    gamma_oracle,
    quotient_term_integral,
    quotient_term_product,
)

__version__ = "0.1.0"


def evaluate(a: float, b: float, n: float, method: str = "auto", **kwargs) -> EvalResult:
    """One-call evaluation of Δ:n; divergent indices give ``divergent=True``.

    ``method`` is one of ``auto`` (= ``product``), ``product``, ``integral``
    or ``oracle``. Extra keywords go to the chosen evaluator (``strategy`` and
    ``trunc`` for the product, ``quad`` for the integral route).
    """
    if method == "auto":
        method = "product"
    if method not in ("product", "integral", "oracle"):
        raise ParamError(f"unknown method {method!r}")
    problem = validate(SeriesParams(a, b), n)
    if isinstance(problem, DivergentMarker):
        return EvalResult.divergent_result(method)
    if method == "product":
        return eval_product(problem, **kwargs)
    if method == "integral":
        return eval_integral(problem, **kwargs)
    return eval_oracle(problem)
