"""Primality testing, prime enumeration, and factorization helpers.

All moduli handled by the package are desk-scale (well under 64 bits), so a
deterministic Miller-Rabin witness set and trial-division factorization are
enough.
"""

from __future__ import annotations

from .errors import NotPrime, TooSmall

# Sufficient for every n < 3.3 * 10^24, which covers all 64-bit inputs.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for 64-bit integers."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def require_prime(q: int, minimum: int = 5) -> None:
    """Raise NotPrime / TooSmall unless q is a prime >= minimum."""
    if not is_prime(q):
        raise NotPrime(f"{q} is not prime")
    if q < minimum:
        raise TooSmall(f"q must be at least {minimum}, got {q}")


def primes_in_range(lo: int, hi: int) -> list[int]:
    """All primes p with lo <= p <= hi, by sieve of Eratosthenes."""
    if hi < 2 or hi < lo:
        return []
    sieve = bytearray([1]) * (hi + 1)
    sieve[0:2] = b"\x00\x00"
    p = 2
    while p * p <= hi:
        if sieve[p]:
            start = p * p
            sieve[start : hi + 1 : p] = b"\x00" * ((hi - start) // p + 1)
        p += 1
    return [i for i in range(max(lo, 2), hi + 1) if sieve[i]]


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n, by trial division."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out
