"""Arithmetic of imaginary quadratic fields.

Places of K = Q(sqrt d) are described by :class:`PlaceInfo`.  A rational
prime p is split, inert or ramified according to the Kronecker symbol
(D/p); p = 2 is handled by the usual Kronecker convention so that every
finite place is available to the global sums.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional

import numpy as np

CLASS_NUMBER_ONE = frozenset({-3, -4, -7, -8, -11, -19, -43, -67, -163})

SPLIT = "split"
INERT = "inert"
RAMIFIED = "ramified"
COMPLEX = "complex"


def is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


def is_fundamental_discriminant(D: int) -> bool:
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return is_squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


@dataclass(frozen=True)
class FieldSpec:
    d: int
    D: int
    class_number_one: bool

    def __post_init__(self):
        if self.d >= 0 or not is_squarefree(self.d):
            raise ValueError(f"d must be a negative squarefree integer, got {self.d}")
        expected = self.d if self.d % 4 == 1 else 4 * self.d
        if self.D != expected:
            raise ValueError(f"D={self.D} inconsistent with d={self.d}")

    @property
    def label(self) -> str:
        return f"Q(sqrt({self.d}))"


@dataclass(frozen=True)
class PlaceInfo:
    """One place of the field.  ``p`` is None for the complex place."""

    p: Optional[int]
    kind: str
    norm: Optional[int]
    different_norm: int = 1
    places_above: int = 1

    @property
    def is_finite(self) -> bool:
        return self.kind != COMPLEX

    @property
    def q(self) -> int:
        """Residue field size N(p)."""
        if self.norm is None:
            raise ValueError("the complex place has no residue field")
        return self.norm

    @property
    def label(self) -> str:
        if self.kind == COMPLEX:
            return "complex"
        return f"{self.kind} p={self.p} N={self.norm}"


COMPLEX_PLACE = PlaceInfo(p=None, kind=COMPLEX, norm=None, different_norm=1, places_above=1)


def discriminant(d: int) -> FieldSpec:
    """Field data for Q(sqrt d), d negative and squarefree."""
    d = int(d)
    if d >= 0:
        raise ValueError(f"d must be negative, got {d}")
    if not is_squarefree(d):
        raise ValueError(f"d must be squarefree, got {d}")
    D = d if d % 4 == 1 else 4 * d
    return FieldSpec(d=d, D=D, class_number_one=D in CLASS_NUMBER_ONE)


def field_from_discriminant(D: int) -> FieldSpec:
    """Inverse of :func:`discriminant` for a negative fundamental discriminant."""
    if D >= 0 or not is_fundamental_discriminant(D):
        raise ValueError(f"{D} is not a negative fundamental discriminant")
    return discriminant(D if D % 4 == 1 else D // 4)


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D/n) for n >= 1."""
    if n == 0:
        raise ValueError("kronecker symbol undefined for n = 0")
    if n < 0:
        raise ValueError("n must be positive")
    if math.gcd(D, n) != 1:
        return 0
    result = 1
    # factor out powers of 2 with (D/2) = +1 if D = +-1 mod 8, -1 if D = +-3 mod 8
    while n % 2 == 0:
        n //= 2
        if D % 8 in (3, 5):
            result = -result
    # Jacobi symbol (D/n) for odd n
    a = D % n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@lru_cache(maxsize=8)
def _sieve(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for i in range(2, int(limit**0.5) + 1):
        if flags[i]:
            flags[i * i :: i] = False
    return np.nonzero(flags)[0]


def primes_up_to(n: int) -> List[int]:
    if n < 2:
        return []
    return [int(p) for p in _sieve(int(n))]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def _ord(p: int, n: int) -> int:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def splitting_type(field: FieldSpec, p: int) -> PlaceInfo:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    symbol = kronecker(field.D, p)
    if symbol == 1:
        return PlaceInfo(p=p, kind=SPLIT, norm=p, different_norm=1, places_above=2)
    if symbol == -1:
        return PlaceInfo(p=p, kind=INERT, norm=p * p, different_norm=1, places_above=1)
    return PlaceInfo(p=p, kind=RAMIFIED, norm=p, different_norm=p ** _ord(p, abs(field.D)), places_above=1)


def ramified_places(field: FieldSpec) -> List[PlaceInfo]:
    return [splitting_type(field, p) for p in primes_up_to(abs(field.D)) if field.D % p == 0]


def places_up_to(field: FieldSpec, X: int) -> List[PlaceInfo]:
    """Finite places of norm <= X (split primes listed twice) and the complex place."""
    if X < 2:
        raise ValueError("X must be at least 2")
    places = []
    for p in primes_up_to(int(X)):
        place = splitting_type(field, p)
        if place.norm <= X:
            places.extend([place] * place.places_above)
    places.sort(key=lambda v: (v.norm, v.p))
    places.append(COMPLEX_PLACE)
    return places
