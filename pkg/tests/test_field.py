import numpy as np
import pytest

from residuevc.errors import EvenPrime, IndexNotDividing, NotPrime
from residuevc.field import (ZERO_EXP, ZeroConvention, character_table,
                             coset_representatives, make_field, residue_table)
from residuevc.primes import is_prime, primes_in_range

from oracles import legendre, member_vector, powers_mod

SMALL_PRIMES = primes_in_range(3, 101)


# ---------------------------------------------------------------------------
# make_field
# ---------------------------------------------------------------------------

def test_primitive_root_q7():
    F = make_field(7)
    assert F.g in (3, 5)  # the primitive roots mod 7
    assert sorted(pow(F.g, k, 7) for k in range(6)) == [1, 2, 3, 4, 5, 6]


def test_primitive_root_q3():
    assert make_field(3).g == 2


def test_not_prime_rejected():
    with pytest.raises(NotPrime):
        make_field(9)
    with pytest.raises(NotPrime):
        make_field(1)


def test_q2_rejected():
    with pytest.raises(EvenPrime):
        make_field(2)


def test_dlog_table_inverts_powers():
    for q in SMALL_PRIMES:
        F = make_field(q)
        for a in range(q - 1):
            assert F.dlog[pow(F.g, a, q)] == a
        assert F.dlog[0] == -1


def test_pinned_root_must_be_primitive():
    with pytest.raises(ValueError):
        make_field(7, root=2)  # 2 has order 3 mod 7
    assert make_field(7, root=5).g == 5


def test_tables_immutable():
    F = make_field(11)
    with pytest.raises(ValueError):
        F.dlog[0] = 5
    T = residue_table(F, 2, 1, ZeroConvention.ZERO_OUT)
    with pytest.raises(ValueError):
        T.member[0] = 1


# ---------------------------------------------------------------------------
# residue_table
# ---------------------------------------------------------------------------

def test_squares_q7():
    T = residue_table(make_field(7), 2, 1, ZeroConvention.ZERO_OUT)
    assert set(np.nonzero(T.member)[0]) == {1, 2, 4}


def test_nonresidue_coset_q7():
    T = residue_table(make_field(7), 2, 3, ZeroConvention.ZERO_OUT)
    assert set(np.nonzero(T.member)[0]) == {3, 5, 6}


def test_squares_q5_zero_in():
    T = residue_table(make_field(5), 2, 1, ZeroConvention.ZERO_IN)
    assert set(np.nonzero(T.member)[0]) == {0, 1, 4}


def test_index_must_divide():
    with pytest.raises(IndexNotDividing):
        residue_table(make_field(7), 4, 1, ZeroConvention.ZERO_OUT)


def test_member_counts_and_zero_flag():
    for q in SMALL_PRIMES:
        F = make_field(q)
        for r in (2, 3, 4, 5):
            if (q - 1) % r:
                continue
            for conv in ZeroConvention:
                T = residue_table(F, r, 1, conv)
                assert int(T.member[1:].sum()) == (q - 1) // r
                assert T.member[0] == (1 if conv is ZeroConvention.ZERO_IN else 0)


def test_tables_match_enumeration_oracle():
    for q in [13, 31, 61]:
        F = make_field(q)
        for r in (2, 3, 5):
            if (q - 1) % r:
                continue
            for t in (1, 2, q - 1):
                T = residue_table(F, r, t, ZeroConvention.ZERO_OUT)
                assert np.array_equal(
                    T.member.astype(np.int64),
                    member_vector(q, r, t, ZeroConvention.ZERO_OUT))


def test_cosets_partition_units():
    for q in [13, 29, 97]:
        F = make_field(q)
        for r in (2, 4):
            if (q - 1) % r:
                continue
            union = np.zeros(q, dtype=np.int64)
            for t in coset_representatives(F, r):
                union += residue_table(F, r, t, ZeroConvention.ZERO_OUT).member
            assert union[0] == 0
            assert (union[1:] == 1).all()


# ---------------------------------------------------------------------------
# character_table
# ---------------------------------------------------------------------------

def test_quadratic_character_is_legendre():
    for q in SMALL_PRIMES:
        C = character_table(make_field(q), 2)
        vals = C.values()
        for x in range(q):
            assert vals[x] == pytest.approx(legendre(x, q))


def test_character_zero_marker():
    C = character_table(make_field(7), 2)
    assert C.exp_of[0] == ZERO_EXP
    assert C.values()[0] == 0


def test_trivial_power_is_all_ones():
    C = character_table(make_field(13), 3)
    assert (C.values(0) == 1).all()
    assert np.array_equal(C.values(3), C.values(0))


def test_cubic_character_constant_on_cosets_q13():
    C = character_table(make_field(13), 3)
    cubes = powers_mod(13, 3)
    exps = {}
    for x in range(1, 13):
        coset = min((x * c) % 13 for c in cubes)
        exps.setdefault(coset, set()).add(int(C.exp_of[x]))
    assert all(len(s) == 1 for s in exps.values())
    counts = np.bincount(C.exp_of[1:], minlength=3)
    assert list(counts) == [4, 4, 4]


def test_exponent_multiplicativity_exhaustive():
    for q in SMALL_PRIMES:
        F = make_field(q)
        for r in [r for r in (2, 3, 4, 5, 7) if (q - 1) % r == 0]:
            C = character_table(F, r)
            xs = np.arange(1, q, dtype=np.int64)
            prod = (xs[:, None] * xs[None, :]) % q
            lhs = C.exp_of[prod]
            rhs = (C.exp_of[xs][:, None] + C.exp_of[xs][None, :]) % r
            assert (lhs == rhs).all()


def test_character_has_exact_order():
    for q, r in [(13, 3), (13, 4), (29, 7), (31, 5)]:
        C = character_table(make_field(q), r)
        exps = C.exp_of[1:]
        for k in range(1, r):
            assert (exps * k % r != 0).any()
        assert (exps * r % r == 0).all()


def test_orthogonality_all_pairs():
    """(1/r)(1 + sum_k chi^k(x) conj(chi^k(t))) is the coset indicator."""
    for q in SMALL_PRIMES:
        F = make_field(q)
        for r in [r for r in (2, 3, 4, 6) if (q - 1) % r == 0]:
            C = character_table(F, r)
            acc = np.ones((q - 1, q - 1), dtype=complex)
            for k in range(1, r):
                v = C.values(k)[1:]
                acc += v[:, None] * np.conj(v)[None, :]
            acc /= r
            same_coset = (C.exp_of[1:, None] == C.exp_of[None, 1:])
            assert np.abs(acc - same_coset).max() < 1e-9


def test_character_invariant_under_root_choice():
    # Different primitive roots induce possibly different generators of
    # the dual group, but the coset partition they define is identical.
    q = 13
    roots = [g for g in range(2, q) if all(
        pow(g, (q - 1) // p, q) != 1 for p in (2, 3))]
    assert len(roots) > 1
    partitions = []
    for g in roots:
        C = character_table(make_field(q, root=g), 3)
        partitions.append(frozenset(
            frozenset(int(x) for x in np.nonzero(C.exp_of == e)[0])
            for e in range(3)))
    assert len(set(partitions)) == 1


def test_miller_rabin_agrees_with_trial_division():
    def slow(n):
        return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))

    for n in range(1000):
        assert is_prime(n) == slow(n)
    for n in [2**31 - 1, 10**12 + 39, 10**12 + 61]:
        assert is_prime(n)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2,3,5,7
