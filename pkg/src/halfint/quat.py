"""Definite rational quaternion algebras with exact arithmetic.

An algebra here is B = (-a, -b | Q) with a, b positive integers:
i^2 = -a, j^2 = -b, k = ij = -ji, k^2 = -ab.  Elements are 4-tuples of
Fractions in the basis (1, i, j, k).  Definiteness (a, b > 0) makes the
reduced norm positive definite, which everything downstream relies on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import EvenRootNumberError, SearchExhaustedError
from .numth import hilbert, hilbert_support, is_prime

Quat = tuple[Fraction, Fraction, Fraction, Fraction]


def qelt(x0=0, x1=0, x2=0, x3=0) -> Quat:
    """Coerce four rationals into an element tuple."""
    return (Fraction(x0), Fraction(x1), Fraction(x2), Fraction(x3))


ZERO: Quat = qelt()
ONE: Quat = qelt(1)
I: Quat = qelt(0, 1)
J: Quat = qelt(0, 0, 1)
K: Quat = qelt(0, 0, 0, 1)


def qadd(x: Quat, y: Quat) -> Quat:
    return (x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3])


def qsub(x: Quat, y: Quat) -> Quat:
    return (x[0] - y[0], x[1] - y[1], x[2] - y[2], x[3] - y[3])


def qscale(c, x: Quat) -> Quat:
    c = Fraction(c)
    return (c * x[0], c * x[1], c * x[2], c * x[3])


def conj(x: Quat) -> Quat:
    """Standard involution: fixes 1, negates i, j, k."""
    return (x[0], -x[1], -x[2], -x[3])


def trd(x: Quat) -> Fraction:
    """Reduced trace x + conj(x)."""
    return 2 * x[0]


@lru_cache(maxsize=64)
def _ramified(a: int, b: int) -> tuple[int, ...]:
    return tuple(
        p for p in hilbert_support(-a, -b) if hilbert(-a, -b, p) == -1
    )


@dataclass(frozen=True)
class QuaternionAlgebra:
    """B = (-a, -b) over Q, with a, b > 0 (definite)."""

    a: int
    b: int

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise ValueError("definite algebras need a, b > 0")

    def mul(self, x: Quat, y: Quat) -> Quat:
        a, b = self.a, self.b
        x0, x1, x2, x3 = x
        y0, y1, y2, y3 = y
        return (
            x0 * y0 - a * x1 * y1 - b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 + b * (x2 * y3 - x3 * y2),
            x0 * y2 + x2 * y0 - a * (x1 * y3 - x3 * y1),
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        )

    def nrd(self, x: Quat) -> Fraction:
        """Reduced norm x * conj(x)."""
        a, b = self.a, self.b
        return x[0] ** 2 + a * x[1] ** 2 + b * x[2] ** 2 + a * b * x[3] ** 2

    def pair(self, x: Quat, y: Quat) -> Fraction:
        """Polarization of the norm form: trd(x * conj(y)) / 2."""
        a, b = self.a, self.b
        return x[0] * y[0] + a * x[1] * y[1] + b * x[2] * y[2] + a * b * x[3] * y[3]

    @property
    def ramified(self) -> tuple[int, ...]:
        """Finite primes where B does not split (sorted)."""
        return _ramified(self.a, self.b)

    @property
    def discriminant(self) -> int:
        """Product of the finite ramified primes."""
        out = 1
        for p in self.ramified:
            out *= p
        return out

    def describe(self) -> dict:
        return {"a": self.a, "b": self.b, "ramified": list(self.ramified)}


def algebra_ramified_at(
    finite_primes: Iterable[int], search_bound: int = 10**6
) -> QuaternionAlgebra:
    """Definite algebra with finite ramification exactly `finite_primes`.

    The set must consist of distinct primes, odd in number (the infinite
    place makes the total even).  Presentations are scanned by a*b
    ascending, then a ascending, so the result is canonical.
    """
    target = tuple(sorted(set(finite_primes)))
    if len(target) % 2 == 0:
        raise EvenRootNumberError(
            f"no definite algebra ramifies exactly at {list(target)}: "
            "an odd number of finite primes is required"
        )
    for p in target:
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
    for prod in itertools.count(1):
        if prod > search_bound:
            raise SearchExhaustedError(
                f"no presentation with a*b <= {search_bound} ramifies at {list(target)}"
            )
        for a in range(1, prod + 1):
            if prod % a:
                continue
            b = prod // a
            if _ramified(a, b) == target:
                return QuaternionAlgebra(a, b)


def algebra_for_level(N: int, signs: dict[int, int]) -> QuaternionAlgebra:
    """Definite algebra attached to level N and involution signs.

    `signs` maps each prime p | N to +1 or -1; the algebra ramifies
    exactly where the sign is -1.  An even number of -1s is the
    obstructed case and raises EvenRootNumberError.
    """
    from .numth import prime_factors  # local import to avoid cycle noise

    ps = prime_factors(N)
    if sorted(signs) != ps:
        raise ValueError(f"signs must cover exactly the primes {ps} of {N}")
    if any(s not in (1, -1) for s in signs.values()):
        raise ValueError("signs must be +1 or -1")
    S = [p for p in ps if signs[p] == -1]
    return algebra_ramified_at(S)
