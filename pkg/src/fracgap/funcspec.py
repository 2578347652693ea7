"""Monotone function bundles: evaluator, inverse, antiderivative, direction, domain.

Every integrand handled by this package is described by a ``FuncSpec``: a
strictly monotone function on an open interval of positive reals, together
with its exact inverse and antiderivative. The built-in catalog covers the
functions the gap statistics need; parameterized families (``a/x`` and
``c*x^(-1/n)``) are built through factory functions. Arbitrary user-supplied
expressions are deliberately not parsed.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .config import DEFAULT_CONFIG, Config
from .errors import DomainError

INCREASING = "increasing"
DECREASING = "decreasing"


@dataclass(frozen=True)
class FuncSpec:
    """A strictly monotone function with exact inverse and antiderivative.

    ``eval``, ``inverse_eval`` and ``antideriv_eval`` accept scalars or
    ndarrays. ``antideriv_eval`` is F with F' = f. For increasing catalog
    members two optional reciprocal helpers are supplied because the sequence
    machinery integrates 1/f constantly:

    * ``recip_antideriv_eval``: an antiderivative of 1/f (for the log family
      this is built on the offset logarithmic integral, so it requires
      x >= 2; only differences of it are ever consumed).
    * ``recip_antideriv_diff``: stable evaluation of the difference
      ``integral of 1/f over (lo, hi)`` where a naive subtraction of
      antiderivative values would cancel.
    """

    name: str
    direction: str
    domain: tuple[float, float]
    eval: Callable
    inverse_eval: Callable
    antideriv_eval: Callable
    recip_antideriv_eval: Callable | None = None
    recip_antideriv_diff: Callable | None = None

    @property
    def increasing(self) -> bool:
        return self.direction == INCREASING

    def contains(self, x: float) -> bool:
        lo, hi = self.domain
        return lo < x < hi

    def require_in_domain(self, *points: float) -> None:
        for x in points:
            if not self.contains(x):
                raise DomainError(
                    f"{x!r} outside the domain {self.domain} of {self.name!r}"
                )


@dataclass(frozen=True)
class ReciprocalSpec(FuncSpec):
    """The decreasing function g(x) = numerator / base(x) for an increasing base.

    g inherits the base's domain, inverts through g^-1(y) = base^-1(numerator/y)
    and integrates through numerator times an antiderivative of 1/base.
    """

    base: FuncSpec | None = None
    numerator: float = 0.0


def make_reciprocal(base: FuncSpec, numerator: float) -> ReciprocalSpec:
    """Compose ``numerator / base(x)`` as a full decreasing FuncSpec."""
    if not base.increasing:
        raise DomainError(
            f"reciprocal composition requires an increasing base, got {base.name!r}"
        )
    if not numerator > 0:
        raise DomainError(f"numerator must be positive, got {numerator!r}")
    if base.recip_antideriv_eval is None:
        raise DomainError(
            f"base {base.name!r} carries no antiderivative of its reciprocal"
        )
    c = float(numerator)
    f, finv, recip = base.eval, base.inverse_eval, base.recip_antideriv_eval
    return ReciprocalSpec(
        name=f"{c:g}/{base.name}",
        direction=DECREASING,
        domain=base.domain,
        eval=lambda x: c / np.asarray(f(x), dtype=np.float64),
        inverse_eval=lambda y: finv(c / np.asarray(y, dtype=np.float64)),
        antideriv_eval=lambda x: c * recip(x),
        base=base,
        numerator=c,
    )


# ---------------------------------------------------------------------------
# Built-in catalog
# ---------------------------------------------------------------------------

_INF = math.inf


def identity_spec() -> FuncSpec:
    return FuncSpec(
        name="identity",
        direction=INCREASING,
        domain=(0.0, _INF),
        eval=np.positive,
        inverse_eval=np.positive,
        antideriv_eval=lambda x: 0.5 * np.square(x),
        recip_antideriv_eval=np.log,
        # log(hi/lo) without cancellation for hi close to lo
        recip_antideriv_diff=lambda lo, hi: np.log1p((hi - lo) / lo),
    )


def sqrt_spec() -> FuncSpec:
    return FuncSpec(
        name="sqrt",
        direction=INCREASING,
        domain=(0.0, _INF),
        eval=np.sqrt,
        inverse_eval=np.square,
        antideriv_eval=lambda x: (2.0 / 3.0) * np.power(x, 1.5),
        recip_antideriv_eval=lambda x: 2.0 * np.sqrt(x),
        recip_antideriv_diff=lambda lo, hi: 2.0 * (hi - lo) / (np.sqrt(hi) + np.sqrt(lo)),
    )


def _li(x):
    from .specialfn import li_offset  # deferred: specialfn depends on fracint

    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 0:
        return li_offset(float(arr))
    return np.array([li_offset(v) for v in arr.tolist()])


_LOG2 = math.log(2.0)


def log_spec() -> FuncSpec:
    return FuncSpec(
        name="log",
        direction=INCREASING,
        domain=(1.0, _INF),
        eval=np.log,
        inverse_eval=np.exp,
        antideriv_eval=lambda x: x * np.log(x) - x,
        recip_antideriv_eval=_li,
    )


def log2_spec() -> FuncSpec:
    # antiderivative of 1/(log x)^2 = li(x) - x/log(x), anchored to 0 at x=2
    return FuncSpec(
        name="log2",
        direction=INCREASING,
        domain=(1.0, _INF),
        eval=lambda x: np.square(np.log(x)),
        inverse_eval=lambda y: np.exp(np.sqrt(y)),
        antideriv_eval=lambda x: x * (np.square(np.log(x)) - 2.0 * np.log(x) + 2.0),
        recip_antideriv_eval=lambda x: _li(x) - x / np.log(x) + 2.0 / _LOG2,
    )


def log3_spec() -> FuncSpec:
    # reduction: 2 * antideriv(1/log^3) = antideriv(1/log^2) - x/log(x)^2
    def recip(x):
        lx = np.log(x)
        anchor = 2.0 / _LOG2 + 2.0 / (_LOG2 * _LOG2)
        return 0.5 * (_li(x) - x / lx - x / np.square(lx) + anchor)

    return FuncSpec(
        name="log3",
        direction=INCREASING,
        domain=(1.0, _INF),
        eval=lambda x: np.power(np.log(x), 3),
        inverse_eval=lambda y: np.exp(np.cbrt(y)),
        antideriv_eval=lambda x: x
        * (np.power(np.log(x), 3) - 3.0 * np.square(np.log(x)) + 6.0 * np.log(x) - 6.0),
        recip_antideriv_eval=recip,
    )


def scaled_reciprocal(a: float) -> FuncSpec:
    """The decreasing family f(x) = a/x with a > 0; self-similar inverse a/y."""
    if not a > 0:
        raise DomainError(f"scale must be positive, got {a!r}")
    a = float(a)
    return FuncSpec(
        name=f"{a:g}/x",
        direction=DECREASING,
        domain=(0.0, _INF),
        eval=lambda x: np.divide(a, x),
        inverse_eval=lambda y: np.divide(a, y),
        antideriv_eval=lambda x: a * np.log(x),
    )


def reciprocal_power(c: float, n: int) -> FuncSpec:
    """The decreasing family f(x) = c * x^(-1/n) with inverse (c/y)^n, n >= 2."""
    if not c > 0:
        raise DomainError(f"scale must be positive, got {c!r}")
    n = int(n)
    if n < 2:
        raise DomainError(f"power denominator must be >= 2, got {n}")
    c = float(c)
    return FuncSpec(
        name=f"{c:g}x^(-1/{n})",
        direction=DECREASING,
        domain=(0.0, _INF),
        eval=lambda x: c * np.power(x, -1.0 / n),
        inverse_eval=lambda y: np.power(np.divide(c, y), n),
        antideriv_eval=lambda x: c * (n / (n - 1.0)) * np.power(x, (n - 1.0) / n),
    )


def builtin_catalog() -> list[FuncSpec]:
    """All fixed catalog members plus one representative of each family."""
    return [
        identity_spec(),
        sqrt_spec(),
        log_spec(),
        log2_spec(),
        log3_spec(),
        scaled_reciprocal(4.0),
        reciprocal_power(2.0, 2),
    ]


_FIXED = {
    "identity": identity_spec,
    "sqrt": sqrt_spec,
    "log": log_spec,
    "log2": log2_spec,
    "log3": log3_spec,
}

_A_OVER_X = re.compile(r"^(\d+(?:\.\d+)?)/x$")
_C_X_POW = re.compile(r"^(\d+(?:\.\d+)?)x\^\(-1/(\d+)\)$")


def lookup(name: str) -> FuncSpec:
    """Resolve a catalog name or family pattern like ``4/x`` or ``2x^(-1/3)``."""
    maker = _FIXED.get(name)
    if maker is not None:
        return maker()
    m = _A_OVER_X.match(name)
    if m:
        return scaled_reciprocal(float(m.group(1)))
    m = _C_X_POW.match(name)
    if m:
        return reciprocal_power(float(m.group(1)), int(m.group(2)))
    known = ", ".join(sorted(_FIXED))
    raise DomainError(f"unknown function {name!r}; catalog: {known}, A/x, Cx^(-1/N)")


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    spec_name: str
    n_points: int
    max_roundtrip_error: float      # relative to 1 + |x|
    monotone_violations: int
    max_antideriv_fd_error: float   # relative to |f(x)|
    passed: bool


def validate(
    spec: FuncSpec,
    grid: Sequence[float],
    config: Config = DEFAULT_CONFIG,
) -> ValidationReport:
    """Check inverse round-trips, strict monotonicity, and F' = f on a grid."""
    if len(grid) == 0:
        raise DomainError("validation grid must not be empty")
    xs = np.sort(np.asarray(grid, dtype=np.float64))
    spec.require_in_domain(*xs.tolist())

    fx = np.asarray(spec.eval(xs), dtype=np.float64)
    back = np.asarray(spec.inverse_eval(fx), dtype=np.float64)
    roundtrip = float(np.max(np.abs(back - xs) / (1.0 + np.abs(xs))))

    steps = np.diff(fx)
    violations = int(np.sum(steps <= 0) if spec.increasing else np.sum(steps >= 0))

    h = config.fd_step_rel * xs
    lo_pts, hi_pts = xs - h, xs + h
    dlo, dhi = spec.domain
    ok = (lo_pts > dlo) & (hi_pts < dhi)
    if np.any(ok):
        fd = (
            np.asarray(spec.antideriv_eval(hi_pts[ok]), dtype=np.float64)
            - np.asarray(spec.antideriv_eval(lo_pts[ok]), dtype=np.float64)
        ) / (2.0 * h[ok])
        fd_err = float(np.max(np.abs(fd - fx[ok]) / np.abs(fx[ok])))
    else:
        fd_err = math.inf

    passed = (
        roundtrip <= config.roundtrip_rtol
        and violations == 0
        and fd_err <= config.fd_rtol
    )
    return ValidationReport(
        spec_name=spec.name,
        n_points=int(xs.size),
        max_roundtrip_error=roundtrip,
        monotone_violations=violations,
        max_antideriv_fd_error=fd_err,
        passed=passed,
    )
