"""Prime-field scalars and the modular combinatorics used throughout.

Polynomial code stores coefficients as plain ``int`` residues for speed; the
:class:`Fp` value type is the checked, immutable scalar used at API edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DivisionByZero, DomainError, StructuralError

DEFAULT_PRIME_CAP = 19


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


def check_prime(p: int, cap: int = DEFAULT_PRIME_CAP) -> int:
    """Validate ``p`` as a supported characteristic and return it."""
    if not isinstance(p, int) or not is_prime(p):
        raise DomainError(f"p={p!r} is not a prime")
    if p > cap:
        raise DomainError(f"p={p} exceeds the configured cap {cap}")
    return p


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise DivisionByZero(f"0 has no inverse modulo {p}")
    return pow(a, p - 2, p)


@dataclass(frozen=True, slots=True)
class Fp:
    """An element of the prime field with ``p`` elements."""

    value: int
    p: int

    def __post_init__(self) -> None:
        check_prime(self.p)
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other: Fp | int) -> int:
        if isinstance(other, Fp):
            if other.p != self.p:
                raise StructuralError(f"modulus mismatch: {self.p} vs {other.p}")
            return other.value
        if isinstance(other, int):
            return other % self.p
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: Fp | int) -> Fp:
        return Fp(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other: Fp | int) -> Fp:
        return Fp(self.value - self._coerce(other), self.p)

    def __rsub__(self, other: Fp | int) -> Fp:
        return Fp(self._coerce(other) - self.value, self.p)

    def __mul__(self, other: Fp | int) -> Fp:
        return Fp(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self) -> Fp:
        return Fp(-self.value, self.p)

    def __truediv__(self, other: Fp | int) -> Fp:
        return self * inv(Fp(self._coerce(other), self.p))

    def __pow__(self, k: int) -> Fp:
        if k < 0:
            return inv(self) ** (-k)
        return Fp(pow(self.value, k, self.p), self.p)

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"Fp({self.value}, p={self.p})"


def inv(a: Fp) -> Fp:
    """Multiplicative inverse; raises :class:`DivisionByZero` on zero."""
    return Fp(inv_mod(a.value, a.p), a.p)


def dp_coeff(p: int, i: int) -> int:
    """Return ``(p-1)! / (i! (p-i)!)`` reduced mod ``p``, for ``1 <= i <= p-1``.

    This is the coefficient of ``X1^i X2^(p-i)`` in the reduction mod ``p`` of the
    Tate-Oort polynomial ``D_p``; equivalently ``binom(p, i) / p``.
    """
    check_prime(p)
    if not 1 <= i <= p - 1:
        raise DomainError(f"dp_coeff needs 1 <= i <= p-1, got i={i}, p={p}")
    exact = math.factorial(p - 1) // (math.factorial(i) * math.factorial(p - i))
    return exact % p


def binom(n: int, k: int) -> int:
    """Exact binomial coefficient over the integers (0 when ``k > n``)."""
    if n < 0 or k < 0:
        raise DomainError("binom needs non-negative arguments")
    return math.comb(n, k)


def binom_mod_p(n: int, k: int, p: int) -> int:
    """``C(n, k) mod p`` by Lucas' theorem."""
    if n < 0 or k < 0:
        raise DomainError("binom_mod_p needs non-negative arguments")
    result = 1
    while n or k:
        ni, ki = n % p, k % p
        if ki > ni:
            return 0
        result = result * math.comb(ni, ki) % p
        n //= p
        k //= p
    return result
