"""Exact VC-dimension search, testing dimension, and shattered-prefix length.

The search walks the tree of subsets rooted at a canonical seed: a node Y
has children Y + {m} for m > max(Y), visited in increasing order.  Two
prunes cut the walk:

- generation bound: the largest descendant of Y has size
  |Y| + q - 1 - max(Y), so a subtree whose bound cannot beat the best
  known size is skipped;
- index bound: a shattered Y with minimum pattern count c can only grow
  by floor(log2 c) elements and stay shattered, so descendants are
  explored only when |Y| + floor(log2 c) exceeds the best known size.

Canonicalization uses translation invariance (exact under every zero
convention) plus dilation invariance where the convention supports it:
ZERO_IN and STRICT search supersets of {0, 1}; ZERO_OUT, whose
non-residue dilations are not exact, searches supersets of {0} only.
"""

from __future__ import annotations

import itertools
import threading
import time
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .field import (ResidueTable, ZeroConvention, log2, log2_floor,
                    make_field, squares_table)
from .primes import primes_in_range, require_prime
from .shatter import (batch_min_counts, fold_patterns, pattern_counts,
                      reflected_doubled, shatter_report, signatures)


@dataclass(frozen=True)
class VcResult:
    """Outcome of the VC-dimension search for one prime."""

    q: int
    vcdim: int
    alpha_q: float
    convention: ZeroConvention
    witness: tuple[int, ...]
    elapsed_ms: float
    exact: bool


@dataclass(frozen=True)
class ApResult:
    """Longest shattered initial segment {0, ..., n-1} for one prime."""

    q: int
    longest: int
    ratio: float


def canonical_root(conv: ZeroConvention) -> tuple[int, ...]:
    """Seed of the search tree licensed by the convention's invariances."""
    if conv is ZeroConvention.ZERO_OUT:
        return (0,)
    return (0, 1)


class _TreeSearch:
    """Shared state for one prime's subset-tree walk (thread-safe)."""

    def __init__(self, T: ResidueTable, early_exit_at: int | None):
        self.T = T
        self.q = T.q
        self.strict = T.convention is ZeroConvention.STRICT
        self.doubled = reflected_doubled(T)
        self.xs = np.arange(self.q, dtype=np.int64)
        self.early_exit_at = early_exit_at
        # The walk only compares best against the target, so a sentinel
        # above any reachable size disables early exit cheaply.
        self.exit_at = early_exit_at if early_exit_at is not None else 1 << 62
        self.best = 0
        self.witness: tuple[int, ...] = ()
        self.cut_short = False
        self._lock = threading.Lock()

    def record(self, size: int, elems: tuple[int, ...]) -> None:
        with self._lock:
            if size > self.best:
                self.best = size
                self.witness = elems

    def hit_exit(self) -> bool:
        if self.best >= self.exit_at:
            self.cut_short = True
            return True
        return False

    def child_block(self, Y: list[int], sig: np.ndarray, ms: np.ndarray):
        """Signatures and minimum pattern counts of Y + {m} for each m."""
        q, n = self.q, len(Y)
        cols = self.doubled[q - ms[:, None] + self.xs[None, :]]
        np.left_shift(cols, n, out=cols)
        cols += sig
        width = 1 << (n + 1)
        m_rows = ms.shape[0]
        rows = np.arange(m_rows)
        offsets = (rows.astype(np.int64) * width)[:, None]
        cols += offsets
        counts = np.bincount(cols.ravel(),
                             minlength=m_rows * width).reshape(m_rows, width)
        cols -= offsets
        if self.strict:
            # Discard translates landing on the subset: one per element.
            for y in Y:
                np.subtract.at(counts, (rows, cols[:, y]), 1)
            np.subtract.at(counts, (rows, cols[rows, ms]), 1)
        return cols, counts.min(axis=1)

    def expand(self, Y: list[int], sig: np.ndarray, k: int) -> None:
        """Depth-first walk below a shattered node Y with index k."""
        q, n = self.q, len(Y)
        best = self.best
        if best >= self.exit_at:
            self.cut_short = True
            return
        if n + k <= best:
            return
        lo = Y[-1] + 1
        hi = min(q - 1, q + n - best - 1)
        if lo > hi:
            return
        ms = np.arange(lo, hi + 1, dtype=np.int64)
        csig, mins = self.child_block(Y, sig, ms)
        mins = mins.tolist()
        size = n + 1
        for i, c in enumerate(mins):
            best = self.best
            if best >= self.exit_at:
                self.cut_short = True
                return
            m = lo + i
            if size + (q - 1 - m) <= best:
                return  # bound is monotone in m: later siblings fail too
            if c == 0:
                continue
            child = Y + [m]
            if size > best:
                self.record(size, tuple(child))
            k_child = c.bit_length() - 1
            if size + k_child > self.best and m + 1 < q:
                self.expand(child, csig[i], k_child)


def _search(T: ResidueTable, root: tuple[int, ...],
            early_exit_at: int | None, jobs: int):
    """Run the tree walk; returns (best, witness, cut_short)."""
    state = _TreeSearch(T, early_exit_at)
    rep0 = shatter_report([root[0]], T)
    if rep0.shattered:
        state.record(1, (root[0],))
    if len(root) == 2:
        rep = shatter_report(root, T)
        if not rep.shattered:
            return state.best, state.witness, state.cut_short
        state.record(2, root)
        seed, k = list(root), rep.index
    else:
        if not rep0.shattered:
            return state.best, state.witness, state.cut_short
        seed, k = list(root), rep0.index
    if state.hit_exit():
        return state.best, state.witness, True
    if jobs <= 1:
        state.expand(seed, signatures(seed, T, state.doubled), k)
        return state.best, state.witness, state.cut_short

    # Split the root's children round-robin across threads; the shared
    # best is a lower bound of the truth at all times, so every prune
    # stays sound regardless of update timing.
    n = len(seed)
    sig = signatures(seed, T, state.doubled)
    ms__ = np.arange(seed[-1] + 1, state.q, dtype=np.int64)

    def worker(offset: int) -> None:
        for m in ms__[offset::jobs]:
            m = int(m)
            if state.hit_exit():
                return
            if (n + 1) + (state.q - 1 - m) <= state.best:
                return
            csig, mins = state.child_block(seed, sig, np.array([m], dtype=np.int64))
            c = int(mins[0])
            if c == 0:
                continue
            state.record(n + 1, tuple(seed + [m]))
            state.expand(seed + [m], csig[0], c.bit_length() - 1)

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        list(pool.map(worker, range(jobs)))
    return state.best, state.witness, state.cut_short


def vc_dimension(q: int, conv: ZeroConvention = ZeroConvention.ZERO_IN,
                 early_exit_at: int | None = None, jobs: int = 1,
                 check_canonical: bool = False) -> VcResult:
    """Exact VC dimension of the squares table of F_q under ``conv``.

    ``early_exit_at`` stops the walk once a shattered set of that size is
    found; the result is then flagged as a lower bound (``exact=False``).
    ``check_canonical`` reruns the search from the translation-only root
    {0} (sound under every convention) and raises if the dilation-based
    canonicalization ever disagrees.
    """
    require_prime(q)
    start = time.perf_counter()
    T = squares_table(make_field(q), conv)
    root = canonical_root(conv)
    best, witness, cut = _search(T, root, early_exit_at, jobs)
    if check_canonical:
        ref_best, _, _ = _search(T, (0,), None, 1)
        if not cut and ref_best != best:
            raise RuntimeError(
                f"canonicalized search found {best} but translation-only "
                f"search found {ref_best} at q={q} under {conv.value}")
    elapsed_ms = (time.perf_counter() - start) * 1e3
    assert best <= log2_floor(q)
    assert not witness or shatter_report(witness, T).shattered
    return VcResult(q=q, vcdim=best, alpha_q=best / log2(q), convention=conv,
                    witness=witness, elapsed_ms=elapsed_ms, exact=not cut)


def testing_dimension(q: int, conv: ZeroConvention, cap: int) -> int:
    """Largest n <= cap such that every subset of size <= n is shattered.

    Pairs and larger sets are canonicalized to contain 0 by translation
    (exact under every convention); STRICT additionally pins 1 as the
    second element via its full affine invariance.
    """
    require_prime(q)
    if cap < 0:
        raise ValueError("cap must be non-negative")
    T = squares_table(make_field(q), conv)
    for n in range(1, cap + 1):
        if n > q or not _all_n_subsets_shattered(T, n):
            return n - 1
    return cap


def _all_n_subsets_shattered(T: ResidueTable, n: int) -> bool:
    q = T.q
    allowed = q - n if T.convention is ZeroConvention.STRICT else q
    if (1 << n) > allowed:
        return False
    if n == 1:
        return bool(shatter_report([0], T).shattered)
    if T.convention is ZeroConvention.STRICT:
        prefix, rest = (0, 1), range(2, q)
    else:
        prefix, rest = (0,), range(1, q)
    combos = itertools.combinations(rest, n - len(prefix))
    while True:
        block = list(itertools.islice(combos, 100_000))
        if not block:
            return True
        arr = np.array([prefix + c for c in block], dtype=np.int64)
        if not (batch_min_counts(arr, T) > 0).all():
            return False


def longest_shattered_ap(q: int,
                         conv: ZeroConvention = ZeroConvention.ZERO_IN) -> ApResult:
    """Largest n with {0, ..., n-1} shattered; covers every arithmetic
    progression of that length via affine invariance.

    For ZERO_IN and ZERO_OUT a single pattern tally at the maximum width
    floor(log2 q) is folded down until every pattern is realized: the OR
    of the two halves is exactly the realized vector of the one-shorter
    prefix.  Under STRICT the discarded translates differ per width, so
    the fold is only a lower bound; each width is checked directly there.
    """
    require_prime(q)
    T = squares_table(make_field(q), conv)
    n = log2_floor(q)
    if conv is ZeroConvention.STRICT:
        while n > 0 and not shatter_report(range(n), T).shattered:
            n -= 1
    else:
        vec = pattern_counts(range(n), T).counts > 0
        while n > 0 and not vec.all():
            vec = fold_patterns(vec)
            n -= 1
    return ApResult(q=q, longest=n, ratio=n / log2(q))


def _sweep_worker(args) -> VcResult:
    q, conv_name, early_exit = args
    conv = ZeroConvention.parse(conv_name)
    target = log2_floor(q) - 1 if early_exit else None
    return vc_dimension(q, conv, early_exit_at=target)


def vc_sweep(q_lo: int, q_hi: int,
             conv: ZeroConvention = ZeroConvention.ZERO_IN,
             early_exit: bool = False, jobs: int = 1,
             skip: frozenset[int] = frozenset(), on_error=None):
    """Yield a VcResult for each prime in [q_lo, q_hi], ascending.

    Primes in ``skip`` are omitted (checkpoint resume); per-prime failures
    are reported through ``on_error(q, exc)`` and skipped.  With jobs > 1
    the primes are solved in a process pool but still emitted in order.
    """
    qs = [q for q in primes_in_range(q_lo, q_hi) if q not in skip]
    if jobs <= 1:
        for q in qs:
            try:
                yield _sweep_worker((q, conv.value, early_exit))
            except Exception as exc:  # noqa: BLE001 - per-prime isolation
                if on_error is not None:
                    on_error(q, exc)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        args = [(q, conv.value, early_exit) for q in qs]
        futures = {q: pool.submit(_sweep_worker, a) for q, a in zip(qs, args)}
        for q in qs:
            try:
                yield futures[q].result()
            except Exception as exc:  # noqa: BLE001
                if on_error is not None:
                    on_error(q, exc)
