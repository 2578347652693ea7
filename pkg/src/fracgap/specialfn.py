"""Special functions and constant extractors.

The offset logarithmic integral, harmonic numbers and zeta partial sums act
as in-repo oracles; the two extractor operations recover zeta(n) and
1 - gamma from closed-form fractional-part integrals of the ``c*x^(-1/n)``
and ``a/x`` families.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_CONFIG, Config
from .errors import DomainError
from .fracint import integrate_frac_exact
from .funcspec import reciprocal_power, scaled_reciprocal
from .numerics import Neumaier, adaptive_integral, compensated_array_sum, require_converged

LI_BASE = 2.0  # all consumers take differences, making the base point immaterial


def li_offset(x: float, tol: float | None = None, config: Config = DEFAULT_CONFIG) -> float:
    """Offset logarithmic integral: the integral of 1/log(t) from 2 to x.

    Evaluated by adaptive quadrature with an absolute tolerance (default
    ``config.li_quad_tol``), honored down to the roundoff floor of the
    integral's magnitude.
    """
    x = float(x)
    if x < LI_BASE:
        raise DomainError(f"li_offset requires x >= 2, got {x!r}")
    if x == LI_BASE:
        return 0.0
    res = adaptive_integral(
        lambda t: 1.0 / np.log(t),
        LI_BASE,
        x,
        tol=config.li_quad_tol if tol is None else tol,
        max_depth=config.quad_max_depth,
    )
    return require_converged(res, f"li_offset({x})")


def harmonic(n: int, config: Config = DEFAULT_CONFIG) -> float:
    """H_n = sum of 1/k for k <= n, by chunked compensated summation."""
    n = int(n)
    if n < 1:
        raise DomainError(f"harmonic requires n >= 1, got {n}")
    acc = Neumaier()
    for start in range(1, n + 1, config.sum_chunk):
        stop = min(start + config.sum_chunk, n + 1)
        acc.add(compensated_array_sum(1.0 / np.arange(start, stop, dtype=np.float64)))
    return acc.value


def zeta_series(n: int, terms: int, config: Config = DEFAULT_CONFIG) -> float:
    """Partial sum of k^(-n) for k <= terms; requires integer n >= 2."""
    n = int(n)
    if n < 2:
        raise DomainError(f"zeta_series requires n >= 2, got {n}")
    terms = int(terms)
    if terms < 1:
        raise DomainError(f"terms must be positive, got {terms}")
    acc = Neumaier()
    for start in range(1, terms + 1, config.sum_chunk):
        stop = min(start + config.sum_chunk, terms + 1)
        ks = np.arange(start, stop, dtype=np.float64)
        acc.add(compensated_array_sum(ks ** -float(n)))
    return acc.value


@dataclass(frozen=True)
class ConstantEstimate:
    """A constant recovered at finite truncation, with a predicted error scale."""

    value: float
    parameter: int
    predicted_error: float
    method: str


def zeta_via_fracint(
    n: int,
    c: int,
    config: Config = DEFAULT_CONFIG,
    threads: int = 1,
) -> ConstantEstimate:
    """Estimate zeta(n) as n/(n-1) minus the scaled fractional-part integral
    of c*x^(-1/n) over [1, c^n].

    The returned value equals c^(1-n)/(n-1) + sum_{k<=c} k^(-n) up to
    roundoff, so it approaches zeta(n) from above with an error near
    c^(1-n)/(n-1); the predicted error is the one-step decrement of that
    tail proxy.
    """
    n = int(n)
    c = int(c)
    if n < 2:
        raise DomainError(f"zeta extraction requires n >= 2, got {n}")
    if c < 1:
        raise DomainError(f"truncation parameter must be >= 1, got {c}")
    if c == 1:
        integral = 0.0  # degenerate range [1, 1]
    else:
        spec = reciprocal_power(float(c), n)
        integral = integrate_frac_exact(spec, 1.0, float(c) ** n, config, threads)
    value = n / (n - 1.0) - integral / float(c) ** n
    predicted = (c ** (1.0 - n) - (c + 1.0) ** (1.0 - n)) / (n - 1.0)
    return ConstantEstimate(value, c, predicted, "zeta-frac-integral")


def gamma_via_fracint(
    a: int,
    config: Config = DEFAULT_CONFIG,
    threads: int = 1,
) -> ConstantEstimate:
    """Estimate 1 - gamma as the mean of {a/x} over [1, a].

    Equals log(a) - H_a + 1 exactly, hence converges to 1 - gamma like
    1/(2a) from below.
    """
    a = int(a)
    if a < 1:
        raise DomainError(f"truncation parameter must be >= 1, got {a}")
    if a == 1:
        value = 0.0  # zero-width interval
    else:
        spec = scaled_reciprocal(float(a))
        value = integrate_frac_exact(spec, 1.0, float(a), config, threads) / a
    return ConstantEstimate(value, a, 1.0 / (2.0 * a), "gamma-frac-integral")
