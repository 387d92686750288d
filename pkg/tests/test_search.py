import numpy as np
import pytest

from residuevc.errors import NotPrime, TooSmall
from residuevc.field import ZeroConvention, log2_floor, make_field, squares_table
from residuevc.primes import primes_in_range
from residuevc import search
from residuevc.search import (canonical_root, longest_shattered_ap,
                              vc_dimension, vc_sweep)
from residuevc.shatter import is_shattered, pattern_counts, shattering_index

from oracles import naive_all_shattered, naive_vc

CONVS = list(ZeroConvention)


def member(q, conv):
    return squares_table(make_field(q), conv).member


# ---------------------------------------------------------------------------
# vc_dimension
# ---------------------------------------------------------------------------

def test_q5_zero_in():
    r = vc_dimension(5, ZeroConvention.ZERO_IN)
    assert r.vcdim == 2
    assert r.witness == (0, 1)
    assert r.exact


def test_q7_matches_plain_brute_force():
    for conv in CONVS:
        r = vc_dimension(7, conv)
        assert r.vcdim == naive_vc(7, member(7, conv), conv)


def test_rejects_bad_modulus():
    with pytest.raises(NotPrime):
        vc_dimension(15)
    with pytest.raises(TooSmall):
        vc_dimension(3)


def test_upper_bound_and_witness():
    for q in [11, 31, 61]:
        for conv in CONVS:
            r = vc_dimension(q, conv)
            assert r.vcdim <= log2_floor(q)
            assert len(r.witness) == r.vcdim
            T = squares_table(make_field(q), conv)
            assert r.vcdim == 0 or is_shattered(list(r.witness), T)
            assert r.alpha_q == pytest.approx(r.vcdim / np.log2(q))


def test_matches_naive_small_primes():
    for q in primes_in_range(5, 31):
        for conv in CONVS:
            got = vc_dimension(q, conv, check_canonical=True).vcdim
            assert got == naive_vc(q, member(q, conv), conv), (q, conv)


def test_zero_out_root_is_translation_only():
    assert canonical_root(ZeroConvention.ZERO_OUT) == (0,)
    assert canonical_root(ZeroConvention.ZERO_IN) == (0, 1)
    # q = 5 zero-out is the case needing it: {0,2} shattered, {0,1} not
    assert vc_dimension(5, ZeroConvention.ZERO_OUT).vcdim == 2


def test_strict_q5_is_one():
    r = vc_dimension(5, ZeroConvention.STRICT)
    assert r.vcdim == 1


def test_early_exit_finds_near_max_at_257():
    r = vc_dimension(257, ZeroConvention.ZERO_IN,
                     early_exit_at=log2_floor(257) - 1)
    assert len(r.witness) >= 7


def test_early_exit_flags_lower_bound():
    q = 61
    target = log2_floor(q) - 1
    r = vc_dimension(q, ZeroConvention.ZERO_IN, early_exit_at=target)
    assert r.vcdim >= target
    full = vc_dimension(q, ZeroConvention.ZERO_IN)
    assert full.exact
    assert r.vcdim <= full.vcdim
    if r.vcdim < full.vcdim:
        assert not r.exact


def test_parallel_equals_sequential():
    for q in [37, 61]:
        for conv in CONVS:
            seq = vc_dimension(q, conv, jobs=1)
            par = vc_dimension(q, conv, jobs=4)
            assert seq.vcdim == par.vcdim
            T = squares_table(make_field(q), conv)
            assert par.vcdim == 0 or is_shattered(list(par.witness), T)


# ---------------------------------------------------------------------------
# prune soundness
# ---------------------------------------------------------------------------

def test_shattering_index_bounds_supersets():
    rng = np.random.default_rng(31)
    for q in [61, 101]:
        T = squares_table(make_field(q), ZeroConvention.ZERO_IN)
        for _ in range(30):
            n = int(rng.integers(2, 5))
            Y = sorted(rng.choice(q, size=n, replace=False).tolist())
            k = shattering_index(Y, T)
            if k < 0:
                continue
            pool = [v for v in range(q) if v not in Y]
            for _ in range(10):
                extra = rng.choice(len(pool), size=min(k + 1, len(pool)),
                                   replace=False)
                sup = sorted(Y + [pool[i] for i in extra])
                if len(sup) == n + k + 1:
                    assert not is_shattered(sup, T)


def test_generation_bound_is_exact():
    # the largest descendant of Y adds every element above max(Y)
    q = 31
    Y = [0, 1, 5]
    assert len(Y) + q - 1 - max(Y) == len(Y + list(range(6, q)))


# ---------------------------------------------------------------------------
# testing_dimension
# ---------------------------------------------------------------------------

def test_testing_dimension_pairs_zero_in():
    # q = 5 is the one small prime where a pair ({0,2}, a non-residue
    # dilation of {0,1}) fails, so m_5 = 1; from q = 7 on every pair works.
    assert search.testing_dimension(5, ZeroConvention.ZERO_IN, cap=2) == 1
    for q in primes_in_range(7, 61):
        assert search.testing_dimension(q, ZeroConvention.ZERO_IN, cap=2) == 2


def test_testing_dimension_q5():
    # no 3-subset fits anyway: 8 patterns but only 5 translates
    assert search.testing_dimension(5, ZeroConvention.ZERO_IN, cap=5) == 1
    assert search.testing_dimension(7, ZeroConvention.ZERO_IN, cap=5) == 2


def test_testing_dimension_matches_uncanonicalized_oracle():
    for q in [29, 101]:
        for conv in CONVS:
            cap = 3
            got = search.testing_dimension(q, conv, cap=cap)
            vec = member(q, conv)
            expect = 0
            for n in range(1, cap + 1):
                if not naive_all_shattered(q, n, vec, conv):
                    break
                expect = n
            assert got == expect, (q, conv)


def test_testing_dimension_respects_cap():
    assert search.testing_dimension(101, ZeroConvention.ZERO_IN, cap=2) == 2


def test_testing_dimension_requires_prime():
    with pytest.raises(NotPrime):
        search.testing_dimension(21, ZeroConvention.ZERO_IN, cap=2)
    with pytest.raises(NotPrime):
        longest_shattered_ap(21)


# ---------------------------------------------------------------------------
# longest_shattered_ap
# ---------------------------------------------------------------------------

def test_ap_q5():
    r = longest_shattered_ap(5, ZeroConvention.ZERO_IN)
    assert r.longest == 2
    assert r.ratio == pytest.approx(2 / np.log2(5))


def test_ap_fold_agrees_with_direct_checks():
    for q in primes_in_range(5, 101):
        for conv in CONVS:
            T = squares_table(make_field(q), conv)
            n = longest_shattered_ap(q, conv).longest
            assert 1 <= n <= log2_floor(q)
            assert is_shattered(list(range(n)), T)
            if n + 1 <= log2_floor(q):
                assert not is_shattered(list(range(n + 1)), T)


def test_ap_equals_brute_prefix_scan():
    for q in primes_in_range(5, 61):
        for conv in CONVS:
            vec = member(q, conv)
            T = squares_table(make_field(q), conv)
            best = 0
            for n in range(1, log2_floor(q) + 1):
                if is_shattered(list(range(n)), T):
                    best = n
            # prefixes are monotone, so the scan and the fold agree
            assert longest_shattered_ap(q, conv).longest == best


# ---------------------------------------------------------------------------
# vc_sweep
# ---------------------------------------------------------------------------

def test_sweep_empty_range():
    assert list(vc_sweep(14, 16)) == []


def test_sweep_order_and_resume_skip():
    res = list(vc_sweep(5, 31, ZeroConvention.ZERO_IN))
    assert [r.q for r in res] == primes_in_range(5, 31)
    partial = list(vc_sweep(5, 31, ZeroConvention.ZERO_IN,
                            skip=frozenset([5, 11, 31])))
    assert [r.q for r in partial] == [7, 13, 17, 19, 23, 29]


def test_sweep_records_errors():
    seen = []
    res = list(vc_sweep(2, 7, on_error=lambda q, e: seen.append(q)))
    assert [r.q for r in res] == [5, 7]
    assert seen == [2, 3]


def test_sweep_parallel_matches_serial():
    serial = [(r.q, r.vcdim) for r in vc_sweep(5, 61)]
    parallel = [(r.q, r.vcdim) for r in vc_sweep(5, 61, jobs=3)]
    assert serial == parallel
