"""Monte Carlo estimates of the probability that a random subset is shattered.

For a prime q and size n, ``estimate_p`` draws uniform n-subsets of F_q
and reports the fraction shattered by translates of the squares table.
``interface_scan`` fixes n and sweeps primes q with n/log2(q) inside a
ratio window, thinning the prime list at random so each scan yields a
target number of points.

All randomness flows through numpy's PCG64 generator.  Per-point seeds
are derived from (master seed, n, q), so any single point can be
reproduced in isolation and reruns are bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NTooLarge
from .field import ZeroConvention, log2, make_field, squares_table
from .primes import primes_in_range, require_prime
from .shatter import MAX_WIDTH, ResidueTable, shatter_report

DEFAULT_TRIALS = 1000


@dataclass(frozen=True)
class ProbPoint:
    """One estimated shattering probability at a (q, n) pair."""

    q: int
    n: int
    trials: int
    hits: int
    ratio: float
    p_hat: float
    seed: int


def sample_subset(rng: np.random.Generator, q: int, n: int) -> list[int]:
    """Uniform n-subset of {0, ..., q-1} by partial Fisher-Yates.

    Only the displaced pool entries are stored, so memory is O(n).
    """
    displaced: dict[int, int] = {}
    out = []
    for i in range(n):
        j = int(rng.integers(i, q))
        vi = displaced.get(i, i)
        displaced[i] = displaced.get(j, j)
        displaced[j] = vi
        out.append(displaced[i])
    out.sort()
    return out


def point_seed(master_seed: int, n: int, q: int) -> int:
    """Deterministic per-point seed derived from the master seed."""
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(n, q))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def estimate_p(q: int, n: int, trials: int = DEFAULT_TRIALS, seed: int = 0,
               conv: ZeroConvention = ZeroConvention.ZERO_IN,
               table: ResidueTable | None = None) -> ProbPoint:
    """Estimate the probability that a uniform n-subset of F_q is shattered."""
    require_prime(q, minimum=3)
    if n > MAX_WIDTH:
        raise NTooLarge(f"subset size {n} exceeds the {MAX_WIDTH}-bit pattern bound")
    if not 2 <= n <= q:
        raise ValueError(f"need 2 <= n <= q, got n={n}, q={q}")
    if trials < 1:
        raise ValueError("trials must be positive")
    T = squares_table(make_field(q), conv) if table is None else table
    rng = np.random.default_rng(seed)
    hits = 0
    for _ in range(trials):
        Y = sample_subset(rng, q, n)
        if shatter_report(Y, T).shattered:
            hits += 1
    return ProbPoint(q=q, n=n, trials=trials, hits=hits, ratio=n / log2(q),
                     p_hat=hits / trials, seed=seed)


def scan_primes(n: int, ratio_lo: float, ratio_hi: float) -> list[int]:
    """Primes q whose ratio n/log2(q) falls in [ratio_lo, ratio_hi]."""
    q_lo = 2 ** (n / ratio_hi)
    q_hi = 2 ** (n / ratio_lo)
    qs = primes_in_range(max(5, int(np.ceil(q_lo))), int(np.floor(q_hi)))
    return [q for q in qs
            if ratio_lo <= n / log2(q) <= ratio_hi]


def interface_scan(n: int, ratio_lo: float = 0.7, ratio_hi: float = 0.85,
                   density: float = 100, trials: int = DEFAULT_TRIALS,
                   seed: int = 0,
                   conv: ZeroConvention = ZeroConvention.ZERO_IN) -> list[ProbPoint]:
    """Estimate p at randomly thinned primes across one ratio window.

    Each prime in the window is kept with probability density/#primes, so
    the expected number of points is about ``density``.  Selection and
    per-point estimation are both deterministic in ``seed``.
    """
    if ratio_lo <= 0 or ratio_hi <= ratio_lo:
        raise ValueError("need 0 < ratio_lo < ratio_hi")
    qs = scan_primes(n, ratio_lo, ratio_hi)
    if not qs or density <= 0:
        return []
    keep_p = min(1.0, density / len(qs))
    thin_rng = np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(n,)))
    kept = [q for q in qs if thin_rng.random() < keep_p]
    return [estimate_p(q, n, trials, seed=point_seed(seed, n, q), conv=conv)
            for q in kept]
