"""Prime generation, gap extraction, and counting.

A segmented odd-only sieve produces an immutable ``PrimeTable``; gap records
stream from it one consecutive pair at a time so statistics sweeps never
materialize per-gap objects in bulk. An optional binary cache file round-trips
tables bit-exactly across platforms.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .config import DEFAULT_CONFIG, Config
from .errors import BudgetError, CacheFormatError, DomainError
from .numerics import ordered_parallel_map

CACHE_MAGIC = b"FRGP"
CACHE_VERSION = 1
_HEADER = struct.Struct("<4sIQQ")  # magic, version u32, limit u64, count u64


@dataclass(frozen=True)
class PrimeTable:
    """All primes up to ``limit`` as a strictly increasing int64 array."""

    limit: int
    primes: np.ndarray

    @property
    def count(self) -> int:
        return int(self.primes.size)

    def p(self, n: int) -> int:
        """The n-th prime, 1-indexed."""
        if not 1 <= n <= self.count:
            raise DomainError(f"prime index {n} outside 1..{self.count}")
        return int(self.primes[n - 1])

    def pi(self, x: float) -> int:
        """Number of primes <= x."""
        if x > self.limit:
            raise DomainError(f"pi({x!r}) beyond table limit {self.limit}")
        return int(np.searchsorted(self.primes, x, side="right"))

    def count_between(self, lo: float, hi: float) -> int:
        """Number of primes p with lo < p <= hi."""
        if lo > hi:
            raise DomainError(f"need lo <= hi, got {lo!r} > {hi!r}")
        if hi > self.limit:
            raise DomainError(f"range end {hi!r} beyond table limit {self.limit}")
        return self.pi(hi) - self.pi(lo)

    def restrict(self, limit: int) -> "PrimeTable":
        """View of this table truncated to a smaller limit."""
        limit = int(limit)
        if limit > self.limit:
            raise DomainError(f"cannot extend table from {self.limit} to {limit}")
        k = int(np.searchsorted(self.primes, limit, side="right"))
        return PrimeTable(limit, self.primes[:k])


def simple_sieve(limit: int) -> np.ndarray:
    """Plain boolean sieve; supplies base primes for the segmented pass."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask).astype(np.int64)


def _sieve_segment(low: int, high: int, base_odd: np.ndarray) -> np.ndarray:
    """Primes in [low, high) for odd ``low``; mask covers odd numbers only."""
    n_odd = (high - low + 1) // 2
    mask = np.ones(n_odd, dtype=bool)
    for p in base_odd:
        p = int(p)
        start = max(p * p, ((low + p - 1) // p) * p)
        if start >= high:
            if p * p >= high:
                break
            continue
        if start % 2 == 0:
            start += p
        if start >= high:
            continue
        mask[(start - low) // 2 :: p] = False
    return low + 2 * np.flatnonzero(mask).astype(np.int64)


def sieve(
    limit: int,
    config: Config = DEFAULT_CONFIG,
    threads: int = 1,
    segment_odds: int | None = None,
) -> PrimeTable:
    """Segmented sieve of all primes up to ``limit`` (inclusive).

    Output is identical regardless of segment size or thread count: segments
    are fixed, disjoint, and concatenated in order.
    """
    limit = int(limit)
    if limit < 2:
        raise DomainError(f"sieve limit must be >= 2, got {limit}")
    if limit > config.sieve_max_limit:
        raise BudgetError(
            f"sieve limit {limit} exceeds configured maximum {config.sieve_max_limit}"
        )
    # upfront estimate of output size; fail loudly rather than thrash
    approx_count = int(limit / max(math.log(limit) - 1.1, 1.0)) + 100
    if approx_count * 8 > config.memory_budget_bytes:
        raise BudgetError(
            f"~{approx_count} primes need more than the "
            f"{config.memory_budget_bytes} byte budget"
        )

    base = simple_sieve(math.isqrt(limit))
    base_odd = base[base > 2]
    span = 2 * (segment_odds or config.sieve_segment_odds)
    segments = []
    low = 3
    while low <= limit:
        segments.append((low, min(low + span, limit + 1)))
        low += span

    parts = ordered_parallel_map(
        lambda seg: _sieve_segment(seg[0], seg[1], base_odd), segments, threads
    )
    head = [np.array([2], dtype=np.int64)] if limit >= 2 else []
    primes = np.concatenate(head + parts) if head + parts else np.zeros(0, np.int64)
    return PrimeTable(limit, primes)


def is_prime_trial(m: int) -> bool:
    """Trial division spot check, for validation at small scales."""
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    if m % 3 == 0:
        return m == 3
    f = 5
    while f * f <= m:
        if m % f == 0 or m % (f + 2) == 0:
            return False
        f += 6
    return True


@dataclass(frozen=True)
class GapRecord:
    """One consecutive-prime pair and its gap merits."""

    n: int
    p: int
    p_next: int
    d: int
    merit: float    # d / log p
    merit2: float   # d / log(p)^2
    merit3: float   # d / log(p)^3


def gaps(table: PrimeTable, n_lo: int = 1, n_hi: int | None = None) -> Iterator[GapRecord]:
    """Stream gap records for consecutive primes (1-indexed by the lower prime)."""
    if table.count < 2:
        raise DomainError("gap extraction needs at least two primes")
    last = table.count - 1 if n_hi is None else min(n_hi, table.count - 1)
    if n_lo < 1:
        raise DomainError(f"gap index must be >= 1, got {n_lo}")
    ps = table.primes
    for i in range(n_lo - 1, last):
        p = int(ps[i])
        q = int(ps[i + 1])
        lp = math.log(p)
        d = q - p
        yield GapRecord(i + 1, p, q, d, d / lp, d / lp**2, d / lp**3)


def gap_arrays(
    table: PrimeTable, n_lo: int = 1, n_hi: int | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(n, p_n, p_{n+1}) as arrays for vectorized sweeps; n is 1-indexed."""
    if table.count < 2:
        raise DomainError("gap extraction needs at least two primes")
    last = table.count - 1 if n_hi is None else min(int(n_hi), table.count - 1)
    if not 1 <= n_lo <= last:
        raise DomainError(f"gap range {n_lo}..{last} invalid for {table.count} primes")
    n = np.arange(n_lo, last + 1, dtype=np.int64)
    return n, table.primes[n_lo - 1 : last], table.primes[n_lo:last + 1]


# ---------------------------------------------------------------------------
# Binary cache: header + delta-encoded varint gaps, bit-exact across platforms
# ---------------------------------------------------------------------------


def _encode_varints(values: np.ndarray) -> bytes:
    out = bytearray()
    for v in values.tolist():
        while v >= 0x80:
            out.append((v & 0x7F) | 0x80)
            v >>= 7
        out.append(v)
    return bytes(out)


def _decode_varints(buf: bytes, count: int) -> np.ndarray:
    values = np.empty(count, dtype=np.int64)
    pos = 0
    for i in range(count):
        shift = 0
        v = 0
        while True:
            if pos >= len(buf):
                raise CacheFormatError("truncated varint stream in prime cache")
            byte = buf[pos]
            pos += 1
            v |= (byte & 0x7F) << shift
            if byte < 0x80:
                break
            shift += 7
        values[i] = v
    if pos != len(buf):
        raise CacheFormatError("trailing bytes after prime cache varint stream")
    return values


def write_cache(table: PrimeTable, path) -> None:
    """Serialize a prime table: 'FRGP' header then first prime and gap deltas."""
    deltas = np.diff(table.primes, prepend=np.int64(0))
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(CACHE_MAGIC, CACHE_VERSION, table.limit, table.count))
        fh.write(_encode_varints(deltas))


def read_cache(path) -> PrimeTable:
    """Load a prime table written by :func:`write_cache`."""
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) != _HEADER.size:
            raise CacheFormatError("prime cache shorter than its header")
        magic, version, limit, count = _HEADER.unpack(header)
        if magic != CACHE_MAGIC:
            raise CacheFormatError(f"bad magic {magic!r} in prime cache")
        if version != CACHE_VERSION:
            raise CacheFormatError(f"unsupported prime cache version {version}")
        deltas = _decode_varints(fh.read(), count)
    primes = np.cumsum(deltas, dtype=np.int64)
    if count and (primes[-1] > limit or np.any(np.diff(primes) <= 0)):
        raise CacheFormatError("prime cache contents fail monotonicity bounds")
    return PrimeTable(int(limit), primes)
