"""Gap statistics for strictly increasing integer sequences, primes chiefly.

For an increasing positive f and a sequence a_1 < a_2 < ... with gaps
d_i = a_{i+1} - a_i, three coupled quantities are computed:

    r_n = (1/a_n) * integral of {a_n / f(x)} over [a_1, a_n]
    s_n = integral of 1/f over [a_1, a_n] - sum_{i<n} d_i / f(a_i)
    t_n = integral of 1/f over [a_1, a_n] - sum_{i<n} d_i / f(a_{i+1})

The provable relations are s_n <= r_n, s_n <= t_n, 0 <= r_n < 1 - a_1/a_n and
r_n < t_n + (1 - a_1/a_n). The tempting tighter bound r_n <= t_n is *not*
implied by floor(y) >= y - 1 and indeed fails (first primes, f identity,
n = 3), so it is only measured, never asserted. Per-gap residuals
(integral of 1/f over a gap minus d_n/f(a_n)), telescoped assumption sums,
prime-interval scans and the classical gap statistics build on the same
vectorized helpers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_CONFIG, Config
from .errors import DomainError
from .fracint import integrate_frac_exact
from .funcspec import FuncSpec, make_reciprocal
from .numerics import Neumaier, compensated_array_sum, panel_integrals
from .primes import PrimeTable, gap_arrays


# ---------------------------------------------------------------------------
# Sequence sources
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeqSource:
    """A named strictly increasing sequence of positive integers."""

    name: str
    terms: np.ndarray

    def __post_init__(self):
        t = self.terms
        if t.size == 0:
            raise DomainError("sequence must not be empty")
        if int(t[0]) < 1 or np.any(np.diff(t) <= 0):
            raise DomainError(
                f"sequence {self.name!r} must be strictly increasing and positive"
            )

    @property
    def count(self) -> int:
        return int(self.terms.size)

    def a(self, n: int) -> int:
        """The n-th term, 1-indexed."""
        if not 1 <= n <= self.count:
            raise DomainError(f"index {n} outside 1..{self.count}")
        return int(self.terms[n - 1])

    def prefix(self, n: int) -> np.ndarray:
        if not 1 <= n <= self.count:
            raise DomainError(f"index {n} outside 1..{self.count}")
        return self.terms[:n]


def sequence_from_list(name: str, values) -> SeqSource:
    return SeqSource(name, np.asarray(list(values), dtype=np.int64))


def primes_sequence(table: PrimeTable) -> SeqSource:
    return SeqSource("primes", table.primes)


def squares_sequence(limit: int, first: int = 2) -> SeqSource:
    """Perfect squares k^2 for k >= first (default 4, 9, 16, ...) up to limit.

    The default starts at 2^2 so the sequence stays inside the domain of the
    log-family catalog members, which need x > 1.
    """
    if first < 1:
        raise DomainError(f"first square root must be >= 1, got {first}")
    top = math.isqrt(int(limit))
    if top < first:
        raise DomainError(f"no squares of k >= {first} below {limit}")
    ks = np.arange(first, top + 1, dtype=np.int64)
    return SeqSource("squares", ks * ks)


# ---------------------------------------------------------------------------
# Reciprocal integrals
# ---------------------------------------------------------------------------


def integral_of_reciprocal(f: FuncSpec, lo: float, hi: float,
                           config: Config = DEFAULT_CONFIG) -> float:
    """Integral of 1/f over [lo, hi] through f's reciprocal antiderivative.

    Falls back to composite Gauss panels when f carries none.
    """
    if hi < lo:
        raise DomainError(f"need lo <= hi, got {lo!r} > {hi!r}")
    if hi == lo:
        return 0.0
    if f.recip_antideriv_diff is not None:
        return float(f.recip_antideriv_diff(float(lo), float(hi)))
    if f.recip_antideriv_eval is not None:
        return float(f.recip_antideriv_eval(float(hi))) - float(
            f.recip_antideriv_eval(float(lo))
        )
    vals = panel_integrals(
        lambda x: 1.0 / np.asarray(f.eval(x), dtype=np.float64),
        np.array([lo]), np.array([hi]), max_width=config.panel_max_width,
    )
    return float(vals[0])


def interval_reciprocal_integrals(
    f: FuncSpec,
    lo: np.ndarray,
    hi: np.ndarray,
    config: Config = DEFAULT_CONFIG,
) -> np.ndarray:
    """Vectorized integral of 1/f over each [lo_i, hi_i].

    Narrow intervals dominate here (consecutive sequence terms), so values
    are formed directly from node evaluations or stable difference formulas,
    never as differences of large antiderivative values.
    """
    if f.recip_antideriv_diff is not None:
        return np.asarray(f.recip_antideriv_diff(lo, hi), dtype=np.float64)
    return panel_integrals(
        lambda x: 1.0 / np.asarray(f.eval(x), dtype=np.float64),
        lo, hi, max_width=config.panel_max_width,
    )


def _require_increasing_positive(f: FuncSpec, a1: float) -> None:
    if not f.increasing:
        raise DomainError(f"sequence statistics require increasing f, got {f.name!r}")
    f.require_in_domain(a1)
    if not float(f.eval(a1)) > 0.0:
        raise DomainError(f"{f.name!r} must be positive from {a1!r} onward")


# ---------------------------------------------------------------------------
# Sandwich values r_n, s_n, t_n
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SandwichValues:
    seq_name: str
    f_name: str
    n: int
    a1: int
    an: int
    r: float
    s: float
    t: float

    @property
    def upper_slack(self) -> float:
        """The width 1 - a1/an of the provable upper bound r < t + slack."""
        return 1.0 - self.a1 / self.an


def compute_rst(
    seq: SeqSource,
    f: FuncSpec,
    n: int,
    config: Config = DEFAULT_CONFIG,
    threads: int = 1,
) -> SandwichValues:
    """Sandwich triple at index n; r costs about a_n / f(a_1) breakpoints."""
    if n < 2:
        raise DomainError(f"sandwich values need n >= 2, got {n}")
    a1 = seq.a(1)
    an = seq.a(n)
    _require_increasing_positive(f, a1)

    gspec = make_reciprocal(f, float(an))
    r = integrate_frac_exact(gspec, float(a1), float(an), config, threads) / an

    pref = seq.prefix(n).astype(np.float64)
    d = np.diff(pref)
    fv = np.asarray(f.eval(pref), dtype=np.float64)
    plain = integral_of_reciprocal(f, float(a1), float(an), config)
    s = plain - compensated_array_sum(d / fv[:-1])
    t = plain - compensated_array_sum(d / fv[1:])
    return SandwichValues(seq.name, f.name, n, a1, an, r, s, t)


def default_rst_grid(n_max: int, base: float = 2.0) -> list[int]:
    """Small indices, a geometric ramp, and the endpoint itself."""
    if n_max < 2:
        raise DomainError(f"grid needs n_max >= 2, got {n_max}")
    if base <= 1.0:
        raise DomainError(f"geometric base must exceed 1, got {base!r}")
    grid = {n for n in (2, 3, 4, 5) if n <= n_max}
    x = 8.0
    while x < n_max:
        grid.add(int(x))
        x *= base
    grid.add(n_max)
    return sorted(grid)


# ---------------------------------------------------------------------------
# Per-gap residuals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResidualSample:
    f_name: str
    n: int
    a: int
    a_next: int
    d: int
    residual: float      # integral of 1/f over the gap, minus d/f(a)
    lower_bound: float   # -(d/f(a) - d/f(a_next)); residual lies in [lower, 0]


def residual(seq: SeqSource, f: FuncSpec, n: int,
             config: Config = DEFAULT_CONFIG) -> ResidualSample:
    if n < 1:
        raise DomainError(f"residual index must be >= 1, got {n}")
    a = seq.a(n)
    a_next = seq.a(n + 1)
    _require_increasing_positive(f, a)
    d = a_next - a
    value = integral_of_reciprocal(f, float(a), float(a_next), config) - d / float(
        f.eval(a)
    )
    lower = -(d / float(f.eval(a)) - d / float(f.eval(a_next)))
    return ResidualSample(f.name, n, a, a_next, d, value, lower)


@dataclass(frozen=True)
class ResidualSweep:
    f_name: str
    n: np.ndarray
    a: np.ndarray
    a_next: np.ndarray
    d: np.ndarray
    residual: np.ndarray
    lower_bound: np.ndarray


def residual_sweep(
    seq: SeqSource,
    f: FuncSpec,
    n_lo: int = 1,
    n_hi: int | None = None,
    config: Config = DEFAULT_CONFIG,
) -> ResidualSweep:
    """Vectorized residuals for every gap with n_lo <= n <= n_hi."""
    last = seq.count - 1 if n_hi is None else min(int(n_hi), seq.count - 1)
    if not 1 <= n_lo <= last:
        raise DomainError(f"gap range {n_lo}..{last} invalid for {seq.count} terms")
    _require_increasing_positive(f, seq.a(n_lo))
    n = np.arange(n_lo, last + 1, dtype=np.int64)
    a = seq.terms[n_lo - 1 : last].astype(np.float64)
    a_next = seq.terms[n_lo : last + 1].astype(np.float64)
    d = a_next - a
    fa = np.asarray(f.eval(a), dtype=np.float64)
    fa_next = np.asarray(f.eval(a_next), dtype=np.float64)
    integrals = interval_reciprocal_integrals(f, a, a_next, config)
    return ResidualSweep(
        f_name=f.name,
        n=n,
        a=a,
        a_next=a_next,
        d=d,
        residual=integrals - d / fa,
        lower_bound=-(d / fa - d / fa_next),
    )


# ---------------------------------------------------------------------------
# Assumption sums
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AssumptionPartialSums:
    """Partial telescoped gap sums; nonnegative and nondecreasing in n_terms."""

    n_terms: int
    l1: float          # sum of d_i * (1/p_i - 1/p_{i+1})
    l2: float          # sum of d_i * (1/log p_i - 1/log p_{i+1})
    lf: float | None   # same with a caller-chosen f
    f_name: str | None


def assumption_partial_sums(
    table: PrimeTable,
    n_terms: int,
    f: FuncSpec | None = None,
    config: Config = DEFAULT_CONFIG,
) -> AssumptionPartialSums:
    if n_terms < 1:
        raise DomainError(f"need at least one term, got {n_terms}")
    if n_terms + 1 > table.count:
        raise DomainError(
            f"{n_terms} terms need {n_terms + 1} primes, table has {table.count}"
        )
    if f is not None:
        _require_increasing_positive(f, float(table.primes[0]))

    acc1, acc2, accf = Neumaier(), Neumaier(), Neumaier()
    chunk = config.sum_chunk
    for start in range(1, n_terms + 1, chunk):
        stop = min(start + chunk, n_terms + 1)
        p = table.primes[start - 1 : stop - 1].astype(np.float64)
        q = table.primes[start : stop].astype(np.float64)
        d = q - p
        acc1.add(compensated_array_sum(d * d / (p * q)))  # d*(1/p - 1/q) exactly
        lp, lq = np.log(p), np.log(q)
        acc2.add(compensated_array_sum(d * np.log1p(d / p) / (lp * lq)))
        if f is not None:
            fp = np.asarray(f.eval(p), dtype=np.float64)
            fq = np.asarray(f.eval(q), dtype=np.float64)
            accf.add(compensated_array_sum(d * (1.0 / fp - 1.0 / fq)))
    return AssumptionPartialSums(
        n_terms=n_terms,
        l1=acc1.value,
        l2=acc2.value,
        lf=accf.value if f is not None else None,
        f_name=f.name if f is not None else None,
    )


def assumption_audit(
    table: PrimeTable,
    checkpoints: list[int],
    f: FuncSpec | None = None,
    config: Config = DEFAULT_CONFIG,
) -> list[AssumptionPartialSums]:
    """Partial sums at increasing checkpoints. Renders no convergence verdict:
    whether the full sums converge is an assumption, not a desk-checkable fact.
    """
    if sorted(checkpoints) != list(checkpoints):
        raise DomainError("checkpoints must be increasing")
    return [assumption_partial_sums(table, n, f, config) for n in checkpoints]


def loglog_slopes(samples: list[AssumptionPartialSums]) -> list[tuple[float, float]]:
    """Growth slopes of (l1, l2) in log-log space between consecutive checkpoints."""
    out = []
    for prev, cur in zip(samples, samples[1:]):
        dn = math.log(cur.n_terms) - math.log(prev.n_terms)
        out.append(
            (
                (math.log(cur.l1) - math.log(prev.l1)) / dn,
                (math.log(cur.l2) - math.log(prev.l2)) / dn,
            )
        )
    return out


# ---------------------------------------------------------------------------
# Term comparison d_k/log vs d_k/log^2
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComparisonTerms:
    k: int
    p: int
    p_next: int
    d: int
    a_term: float          # d*(1/log p - 1/log p_next)
    b_term: float          # d*(1/log^2 p - 1/log^2 p_next)
    condition_holds: bool  # log p + log p_next < log p * log p_next
    b_below_a: bool        # 0 < b_term < a_term


def comparison_terms(table: PrimeTable, k: int) -> ComparisonTerms:
    if k < 1 or k + 1 > table.count:
        raise DomainError(f"comparison index {k} outside 1..{table.count - 1}")
    p = table.p(k)
    q = table.p(k + 1)
    d = q - p
    lp, lq = math.log(p), math.log(q)
    a_term = d * (1.0 / lp - 1.0 / lq)
    b_term = d * (1.0 / lp**2 - 1.0 / lq**2)
    return ComparisonTerms(
        k=k,
        p=p,
        p_next=q,
        d=d,
        a_term=a_term,
        b_term=b_term,
        condition_holds=lp + lq < lp * lq,
        b_below_a=0.0 < b_term < a_term,
    )


def comparison_sweep(
    table: PrimeTable, k_lo: int = 1, k_hi: int | None = None
) -> dict[str, np.ndarray]:
    """Vectorized comparison terms for k_lo <= k <= k_hi."""
    k, p, q = gap_arrays(table, k_lo, k_hi)
    p = p.astype(np.float64)
    q = q.astype(np.float64)
    d = q - p
    lp, lq = np.log(p), np.log(q)
    a_term = d * (1.0 / lp - 1.0 / lq)
    b_term = d * (1.0 / np.square(lp) - 1.0 / np.square(lq))
    return {
        "k": k,
        "p": p.astype(np.int64),
        "p_next": q.astype(np.int64),
        "d": d.astype(np.int64),
        "a_term": a_term,
        "b_term": b_term,
        "condition_holds": lp + lq < lp * lq,
        "b_below_a": (0.0 < b_term) & (b_term < a_term),
    }


# ---------------------------------------------------------------------------
# Interval scan: primes in (p_m, (1+theta) p_m]
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThetaScan:
    theta: float
    m_max: int
    counts: np.ndarray        # primes in (p_m, (1+theta) p_m] for each m
    violations: np.ndarray    # indices m with an empty interval
    largest_violating_p: int | None


def theta_interval_scan(
    table: PrimeTable, theta: float, m_max: int | None = None
) -> ThetaScan:
    if not theta > 0:
        raise DomainError(f"theta must be positive, got {theta!r}")
    scale = 1.0 + theta
    if m_max is None:
        # largest m whose interval still fits in the table; the searchsorted
        # guess can overshoot by an ulp of scale * p_m, so walk it back
        m_max = int(np.searchsorted(table.primes, table.limit / scale, side="right"))
        while m_max > 0 and scale * float(table.primes[m_max - 1]) > table.limit:
            m_max -= 1
        if m_max < 1:
            raise DomainError(f"no interval fits below limit {table.limit}")
    if not 1 <= m_max <= table.count:
        raise DomainError(f"m_max {m_max} outside 1..{table.count}")
    p = table.primes[:m_max]
    hi = scale * p
    if float(hi[-1]) > table.limit:
        raise DomainError(
            f"(1+theta)*p_m = {float(hi[-1])!r} exceeds table limit {table.limit}"
        )
    counts = (
        np.searchsorted(table.primes, hi, side="right")
        - np.arange(1, m_max + 1)
    )
    violations = np.flatnonzero(counts == 0) + 1
    largest = int(p[violations[-1] - 1]) if violations.size else None
    return ThetaScan(theta, m_max, counts, violations, largest)


# ---------------------------------------------------------------------------
# Statistics sweeps
# ---------------------------------------------------------------------------

SWEEP_KINDS = ("westzynthius", "cramer", "merit3")


@dataclass(frozen=True)
class StatSweep:
    """Per-gap statistic columns with running extrema over tracked indices.

    Gaps with p_n below ``min_prime`` are emitted but excluded from the
    running sup/inf (small-prime transients dominate otherwise); their
    running entries are NaN until the first tracked index.
    """

    which: str
    min_prime: int
    n: np.ndarray
    p: np.ndarray
    p_next: np.ndarray
    columns: dict[str, np.ndarray]
    tracked: np.ndarray
    running_sup: dict[str, np.ndarray]
    running_inf: dict[str, np.ndarray]

    def final_sup(self, column: str) -> float:
        return float(self.running_sup[column][-1])

    def final_inf(self, column: str) -> float:
        return float(self.running_inf[column][-1])


def _running(values: np.ndarray, tracked: np.ndarray):
    sup = np.maximum.accumulate(np.where(tracked, values, -np.inf))
    inf = np.minimum.accumulate(np.where(tracked, values, np.inf))
    sup = np.where(np.isfinite(sup), sup, np.nan)
    inf = np.where(np.isfinite(inf), inf, np.nan)
    return sup, inf


def stat_sweep(
    table: PrimeTable,
    which: str,
    n_lo: int = 1,
    n_hi: int | None = None,
    min_prime: int | None = None,
    config: Config = DEFAULT_CONFIG,
) -> StatSweep:
    """One of the classical gap statistics over a gap index range.

    * ``westzynthius``: d_n/log p_n paired with the logarithmic-integral
      difference over the gap (their limit superiors agree).
    * ``cramer``: d_n/log(p_n)^2 against the comparand
      (p_{n+1}/log p_{n+1}) * (log p_{n+1}/log p_n - 1), their absolute
      difference, and the chain bound term p_{n+1}/((n+1) log p_{n+1}).
    * ``merit3``: d_n/log(p_n)^3.
    """
    if which not in SWEEP_KINDS:
        raise DomainError(f"unknown sweep {which!r}; expected one of {SWEEP_KINDS}")
    if min_prime is None:
        min_prime = config.min_prime_extrema
    n, p_int, q_int = gap_arrays(table, n_lo, n_hi)
    p = p_int.astype(np.float64)
    q = q_int.astype(np.float64)
    d = q - p
    lp = np.log(p)
    lq = np.log(q)

    if which == "westzynthius":
        from .funcspec import log_spec

        li_gap = interval_reciprocal_integrals(log_spec(), p, q, config)
        columns = {"merit": d / lp, "li_gap": li_gap}
        tracked_cols = ("merit", "li_gap")
    elif which == "cramer":
        comparand = q * np.log1p(d / p) / (lp * lq)
        merit2 = d / np.square(lp)
        columns = {
            "merit2": merit2,
            "comparand": comparand,
            "abs_diff": np.abs(comparand - merit2),
            "chain_term": q / ((n + 1) * lq),
        }
        tracked_cols = ("merit2", "comparand", "abs_diff")
    else:
        columns = {"merit3": d / lp**3}
        tracked_cols = ("merit3",)

    tracked = p_int >= min_prime
    running_sup = {}
    running_inf = {}
    for name in tracked_cols:
        running_sup[name], running_inf[name] = _running(columns[name], tracked)
    return StatSweep(
        which=which,
        min_prime=min_prime,
        n=n,
        p=p_int,
        p_next=q_int,
        columns=columns,
        tracked=tracked,
        running_sup=running_sup,
        running_inf=running_inf,
    )
