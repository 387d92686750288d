"""Prime-field arithmetic, residue-set tables, and multiplicative characters.

A ``PrimeField`` carries an odd prime modulus q, a primitive root g, and the
full discrete-log table base g.  From it one builds:

- ``ResidueTable``: the 0/1 membership vector of a multiplicative coset
  t * G_r, where G_r is the index-r subgroup of rth powers in F_q^x.  The
  element 0 is neither in nor out of such a coset on its own; a
  ``ZeroConvention`` decides how it is treated.
- ``CharacterTable``: an order-r multiplicative character chi_r stored as an
  exponent table (chi_r(x) = exp(2*pi*i*exp_of[x]/r)), with chi_r(0) = 0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EvenPrime, IndexNotDividing, NotPrime
from .primes import is_prime, prime_factors

#: Sentinel exponent stored at index 0 of a CharacterTable (chi(0) = 0).
ZERO_EXP = -1


class ZeroConvention(enum.Enum):
    """Policy for the element 0 and for translates that land on the subset.

    ZERO_IN   0 is a full member of every residue table; all q translates
              are allowed.
    ZERO_OUT  0 is a non-member; all q translates are allowed.
    STRICT    0 is a non-member and translates x that belong to the tested
              subset Y are discarded (q - |Y| allowed translates).
    """

    ZERO_IN = "zero-in"
    ZERO_OUT = "zero-out"
    STRICT = "strict"

    @classmethod
    def parse(cls, name: str) -> "ZeroConvention":
        for conv in cls:
            if conv.value == name:
                return conv
        raise ValueError(f"unknown zero convention {name!r}; "
                         f"expected one of {[c.value for c in cls]}")


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PrimeField:
    """An odd prime modulus with a primitive root and discrete-log table.

    ``dlog[x]`` is the index a in {0, ..., q-2} with g^a = x (mod q) for
    x != 0; ``dlog[0]`` holds -1 and must never be read as a logarithm.
    """

    q: int
    g: int
    dlog: np.ndarray = field(repr=False)

    def __post_init__(self):
        _freeze(self.dlog)


@dataclass(frozen=True)
class ResidueTable:
    """Length-q membership vector of the coset ``coset_rep * G_r``."""

    q: int
    r: int
    coset_rep: int
    member: np.ndarray = field(repr=False)
    convention: ZeroConvention

    def __post_init__(self):
        _freeze(self.member)

    @property
    def nonzero_count(self) -> int:
        """Number of nonzero members; always (q - 1) / r."""
        return (self.q - 1) // self.r


@dataclass(frozen=True)
class CharacterTable:
    """Order-r multiplicative character as an exponent table.

    ``exp_of[x]`` is dlog(x) mod r for x != 0 and ``ZERO_EXP`` at x = 0.
    The complex character value is exp(2*pi*i*exp_of[x]/r), and 0 at x = 0.
    """

    q: int
    r: int
    exp_of: np.ndarray = field(repr=False)

    def __post_init__(self):
        _freeze(self.exp_of)

    def values(self, power: int = 1) -> np.ndarray:
        """Complex values of chi_r**power on all of F_q.

        Nontrivial powers vanish at 0; the trivial power (power = 0 mod r)
        is identically 1, including at 0.
        """
        k = power % self.r
        if k == 0:
            return np.ones(self.q, dtype=complex)
        omega = np.exp(2j * np.pi * k / self.r)
        vals = omega ** np.where(self.exp_of == ZERO_EXP, 0, self.exp_of)
        vals[self.exp_of == ZERO_EXP] = 0.0
        return vals


def _find_primitive_root(q: int, factors: list[int]) -> int:
    for g in range(2, q):
        if all(pow(g, (q - 1) // p, q) != 1 for p in factors):
            return g
    raise NotPrime(f"no primitive root modulo {q}; modulus is not prime")


def make_field(q: int, root: int | None = None) -> PrimeField:
    """Build a PrimeField for an odd prime q.

    The primitive root is the smallest one unless ``root`` pins a specific
    (validated) choice, which downstream character tables then inherit.
    """
    if q == 2:
        raise EvenPrime("q = 2 has no index-r subgroup with r >= 2")
    if not is_prime(q):
        raise NotPrime(f"{q} is not prime")
    factors = prime_factors(q - 1)
    if root is None:
        g = _find_primitive_root(q, factors)
    else:
        if not 1 < root < q or any(pow(root, (q - 1) // p, q) == 1 for p in factors):
            raise ValueError(f"{root} is not a primitive root modulo {q}")
        g = root
    dlog = np.full(q, -1, dtype=np.int64)
    x = 1
    for a in range(q - 1):
        dlog[x] = a
        x = x * g % q
    return PrimeField(q=q, g=g, dlog=dlog)


def _check_index(F: PrimeField, r: int) -> None:
    if r < 2 or (F.q - 1) % r != 0:
        raise IndexNotDividing(f"index r={r} must be >= 2 and divide q-1={F.q - 1}")


def residue_table(F: PrimeField, r: int, t: int = 1,
                  conv: ZeroConvention = ZeroConvention.ZERO_IN) -> ResidueTable:
    """Membership table of the coset t * G_r, with 0 handled per ``conv``.

    x != 0 lies in t * G_r exactly when dlog(x) = dlog(t) (mod r).
    """
    _check_index(F, r)
    t %= F.q
    if t == 0:
        raise ValueError("coset representative t must be nonzero")
    member = np.zeros(F.q, dtype=np.uint8)
    target = int(F.dlog[t]) % r
    member[1:] = (F.dlog[1:] % r == target)
    if conv is ZeroConvention.ZERO_IN:
        member[0] = 1
    return ResidueTable(q=F.q, r=r, coset_rep=t, member=member, convention=conv)


def squares_table(F: PrimeField,
                  conv: ZeroConvention = ZeroConvention.ZERO_IN) -> ResidueTable:
    """The table of nonzero squares (r = 2, trivial coset)."""
    return residue_table(F, 2, 1, conv)


def character_table(F: PrimeField, r: int) -> CharacterTable:
    """An order-r character pinned by the field's primitive root.

    For r = 2 the induced +-1 values are the Legendre symbol.
    """
    _check_index(F, r)
    exp_of = np.empty(F.q, dtype=np.int64)
    exp_of[0] = ZERO_EXP
    exp_of[1:] = F.dlog[1:] % r
    return CharacterTable(q=F.q, r=r, exp_of=exp_of)


def coset_representatives(F: PrimeField, r: int) -> list[int]:
    """One representative per coset of G_r, ordered by coset index g^0..g^(r-1)."""
    _check_index(F, r)
    return [pow(F.g, k, F.q) for k in range(r)]


def log2_floor(q: int) -> int:
    return q.bit_length() - 1


def log2(q: int) -> float:
    return math.log2(q)
