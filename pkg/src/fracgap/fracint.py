"""Exact and quadrature integration of fractional/floor parts of monotone functions.

For strictly monotone f on [a, b] with alpha = floor(f(a)), beta = floor(f(b)),
the floor integral telescopes into endpoint terms plus a sum of inverse values
at the integer levels crossed:

    increasing:  integral of floor(f) = (b*beta - a*alpha) - sum_{k=alpha+1..beta} f^-1(k)
    decreasing:  integral of floor(f) = (b*beta - a*alpha) + sum_{k=beta+1..alpha} f^-1(k)

and the fractional part follows from {f} = f - floor(f). Endpoints are
accepted as arbitrary positive reals: nothing in the telescoping uses
integrality of a or b. Breakpoint sums run compensated and chunked so that
multi-million-term level sums keep ~1e-12 relative accuracy, and a hard cap
turns runaway level counts into an explicit error instead of a hang.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .config import DEFAULT_CONFIG, Config
from .errors import BudgetError, DomainError, QuadratureError
from .funcspec import FuncSpec
from .numerics import (
    Neumaier,
    adaptive_integral,
    compensated_array_sum,
    ordered_parallel_map,
)


@dataclass(frozen=True)
class FloorDecomposition:
    """Integer level crossings of f on [a, b].

    ``k_lo..k_hi`` (inclusive) are the levels whose preimages split [a, b]
    into panels on which floor(f) is constant; the range is empty when the
    endpoints share a floor. Breakpoints are materialized on demand, clamped
    into [a, b], and ascend in x regardless of direction.
    """

    spec: FuncSpec
    a: float
    b: float
    alpha: int
    beta: int
    k_lo: int
    k_hi: int

    @property
    def count(self) -> int:
        return max(self.k_hi - self.k_lo + 1, 0)

    def _levels_ascending_x(self) -> tuple[int, int, int]:
        # increasing f: x grows with k; decreasing f: x grows as k falls
        if self.spec.increasing:
            return self.k_lo, self.k_hi + 1, 1
        return self.k_hi, self.k_lo - 1, -1

    def iter_breakpoint_chunks(self, chunk: int) -> Iterator[np.ndarray]:
        """Clamped breakpoints in ascending x order, ``chunk`` levels at a time."""
        start, stop, step = self._levels_ascending_x()
        for first in range(start, stop, step * chunk):
            last = first + step * chunk
            if step > 0:
                last = min(last, stop)
            else:
                last = max(last, stop)
            ks = np.arange(first, last, step, dtype=np.float64)
            xs = np.asarray(self.spec.inverse_eval(ks), dtype=np.float64)
            yield np.clip(xs, self.a, self.b)

    def breakpoints(self, cap: int = DEFAULT_CONFIG.breakpoint_cap) -> np.ndarray:
        if self.count > cap:
            raise BudgetError(
                f"{self.count} breakpoints exceed the cap of {cap}"
            )
        if self.count == 0:
            return np.zeros(0, dtype=np.float64)
        chunks = list(self.iter_breakpoint_chunks(max(self.count, 1)))
        return np.concatenate(chunks)


def decompose(
    spec: FuncSpec,
    a: float,
    b: float,
    config: Config = DEFAULT_CONFIG,
) -> FloorDecomposition:
    """Locate the integer levels of f crossed on [a, b]."""
    a, b = float(a), float(b)
    if not a < b:
        raise DomainError(f"need a < b, got a={a!r}, b={b!r}")
    spec.require_in_domain(a, b)
    fa = float(spec.eval(a))
    fb = float(spec.eval(b))
    alpha = math.floor(fa)
    beta = math.floor(fb)
    if spec.increasing:
        k_lo, k_hi = alpha + 1, beta
    else:
        k_lo, k_hi = beta + 1, alpha
    dec = FloorDecomposition(spec, a, b, alpha, beta, k_lo, k_hi)
    if dec.count > 0:
        # sanity: extreme breakpoints may only overshoot [a, b] by roundoff
        slack = config.breakpoint_edge_rtol * max(abs(a), abs(b))
        edges = np.asarray(
            spec.inverse_eval(np.array([k_lo, k_hi], dtype=np.float64)),
            dtype=np.float64,
        )
        if edges.min() < a - slack or edges.max() > b + slack:
            raise DomainError(
                f"inverse of {spec.name!r} places level breakpoints "
                f"[{edges.min()!r}, {edges.max()!r}] outside [{a!r}, {b!r}]"
            )
    return dec


def _breakpoint_sum(
    dec: FloorDecomposition,
    config: Config,
    threads: int,
) -> float:
    if dec.count == 0:
        return 0.0
    if dec.count > config.breakpoint_cap:
        raise BudgetError(
            f"integral over [{dec.a}, {dec.b}] needs {dec.count} breakpoints, "
            f"more than the configured cap of {config.breakpoint_cap}"
        )
    chunks = list(dec.iter_breakpoint_chunks(config.sum_chunk))
    partials = ordered_parallel_map(compensated_array_sum, chunks, threads)
    acc = Neumaier()
    acc.extend(partials)
    return acc.value


def _parts(spec, a, b, config, threads):
    dec = decompose(spec, a, b, config)
    plain = float(spec.antideriv_eval(b)) - float(spec.antideriv_eval(a))
    endpoint = b * dec.beta - a * dec.alpha
    bsum = _breakpoint_sum(dec, config, threads)
    if spec.increasing:
        floor_part = endpoint - bsum
    else:
        floor_part = endpoint + bsum
    return plain, floor_part


def integrate_floor(
    spec: FuncSpec,
    a: float,
    b: float,
    config: Config = DEFAULT_CONFIG,
    threads: int = 1,
) -> float:
    """Closed-form integral of floor(f) over [a, b]."""
    _, floor_part = _parts(spec, float(a), float(b), config, threads)
    return floor_part


def integrate_frac_exact(
    spec: FuncSpec,
    a: float,
    b: float,
    config: Config = DEFAULT_CONFIG,
    threads: int = 1,
) -> float:
    """Closed-form integral of the fractional part {f} over [a, b].

    The result always lies in [0, b - a); negative roundoff residue within
    ``config.frac_clamp_rtol`` of zero is clamped to exactly 0.
    """
    a, b = float(a), float(b)
    plain, floor_part = _parts(spec, a, b, config, threads)
    frac = plain - floor_part
    if -config.frac_clamp_rtol * (1.0 + b - a) < frac < 0.0:
        frac = 0.0
    return frac


def integrate_frac_quadrature(
    spec: FuncSpec,
    a: float,
    b: float,
    tol: float = DEFAULT_CONFIG.quad_tol,
    config: Config = DEFAULT_CONFIG,
    threads: int = 1,
) -> float:
    """Adaptive quadrature of {f} over [a, b]; independent of the exact path.

    The interval is pre-split at every floor breakpoint, so each panel
    integrates f minus its constant floor level, which is smooth. Raises
    ``QuadratureError`` carrying the best estimate and achieved bound if the
    absolute target cannot be met.
    """
    a, b = float(a), float(b)
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    dec = decompose(spec, a, b, config)
    cuts = dec.breakpoints(config.breakpoint_cap)
    # enforce ascending panel edges despite roundoff in the inverse
    edges = np.concatenate(([a], np.maximum.accumulate(cuts), [b]))
    widths = np.diff(edges)
    keep = widths > 0
    span = b - a
    f = spec.eval

    def one_panel(i: int) -> tuple[float, float, bool]:
        lo, hi = float(edges[i]), float(edges[i + 1])
        level = math.floor(float(f(0.5 * (lo + hi))))
        res = adaptive_integral(
            lambda x: np.asarray(f(x), dtype=np.float64) - level,
            lo,
            hi,
            tol=tol * (hi - lo) / span,
            max_depth=config.quad_max_depth,
            # the integrand cancels f (magnitude ~level) down to [0, 1)
            noise_scale=abs(level) + 1.0,
        )
        return res.value, res.error_bound, res.converged

    idx = [i for i in range(widths.size) if keep[i]]
    results = ordered_parallel_map(one_panel, idx, threads)
    total = Neumaier()
    bound = 0.0
    all_converged = True
    for value, err, converged in results:
        total.add(value)
        bound += err
        all_converged &= converged
    estimate = total.value
    if not all_converged:
        raise QuadratureError(
            f"fractional-part quadrature on [{a}, {b}] achieved only "
            f"{bound:.3e} against target {tol:.3e}",
            estimate=estimate,
            error_bound=bound,
        )
    return estimate
