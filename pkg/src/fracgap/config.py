"""Shared configuration: every tolerance and resource cap lives in one record."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Config:
    """Tolerances and budgets used throughout the library.

    The numeric tolerances are chosen for double precision arithmetic; the
    caps make expensive operations fail loudly instead of hanging.
    """

    # funcspec validation
    roundtrip_rtol: float = 1e-9          # |f^-1(f(x)) - x| <= rtol * (1 + |x|)
    fd_rtol: float = 1e-6                 # antiderivative finite-difference check
    fd_step_rel: float = 1e-5             # h = fd_step_rel * x

    # floor decomposition / exact integration
    breakpoint_edge_rtol: float = 1e-12   # breakpoints may overshoot [a, b] by this * scale
    breakpoint_cap: int = 10**8           # hard cap on breakpoint count per integral
    frac_clamp_rtol: float = 1e-9         # negative results within this of 0 clamp to 0

    # quadrature
    quad_tol: float = 1e-10               # default absolute tolerance
    quad_max_depth: int = 60
    li_quad_tol: float = 1e-12            # offset logarithmic integral target

    # sieving
    sieve_max_limit: int = 10**9
    sieve_segment_odds: int = 1 << 21     # odd slots per segment (~2 MiB masks)
    memory_budget_bytes: int = 4 << 30

    # summation / sweeps
    sum_chunk: int = 1 << 20              # elements per compensated-summation chunk
    panel_max_width: float = 64.0         # sub-panel width for composite Gauss rules
    min_prime_extrema: int = 11           # skip p_n below this in running sup/inf


DEFAULT_CONFIG = Config()
