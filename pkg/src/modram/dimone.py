"""Ramification in dimension one: automorphisms of k[[u]] of order p.

Univariate truncated series are composed with numpy convolutions; the
public objects are still :class:`~modram.poly.SeriesTrunc` values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DomainError, NotTotallyRamifiedError, PreconditionError
from .gfp import check_prime
from .poly import AtLeast, Poly, PolyRing, SeriesTrunc, implicit_solve

DEFAULT_PRECISION = 64


# ---------------------------------------------------------------- univariate helpers


def _to_array(f: SeriesTrunc) -> np.ndarray:
    if f.ring.nvars != 1:
        raise DomainError("expected a univariate series")
    arr = np.zeros(f.precision, dtype=np.int64)
    for (k,), c in f.poly._t.items():
        arr[k] = c
    return arr


def _from_array(arr: np.ndarray, ring: PolyRing) -> SeriesTrunc:
    return SeriesTrunc(ring.poly({(k,): int(c) for k, c in enumerate(arr) if c}), len(arr))


def _mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    n = len(a)
    return np.convolve(a, b)[:n] % p


def _compose(f: np.ndarray, g: np.ndarray, p: int) -> np.ndarray:
    """``f(g)`` modulo ``u^N`` for ``g`` without constant term (Horner)."""
    if g[0] % p:
        raise PreconditionError("inner series must have zero constant term")
    n = len(f)
    out = np.zeros(n, dtype=np.int64)
    for k in range(n - 1, -1, -1):
        out = _mul(out, g, p)
        out[0] = (out[0] + f[k]) % p
    return out


# ---------------------------------------------------------------- automorphisms


@dataclass
class LocalAutomorphism:
    """``u -> sigma(u) = u + (terms of order >= 2)`` of order p, known to precision N."""

    image: SeriesTrunc
    p: int
    _array: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        check_prime(self.p)
        if self.image.ring.p != self.p:
            raise DomainError("series characteristic does not match p")
        arr = _to_array(self.image)
        self._array = arr
        ident = np.zeros(len(arr), dtype=np.int64)
        if len(arr) > 1:
            ident[1] = 1
        diff = (arr - ident) % self.p
        if diff[:2].any():
            raise PreconditionError("sigma(u) - u must have order >= 2")
        if not np.array_equal(self.power_array(self.p), ident):
            raise PreconditionError("sigma^p is not the identity at this precision")

    @property
    def precision(self) -> int:
        return self.image.precision

    @property
    def variable(self) -> str:
        return self.image.ring.names[0]

    def power_array(self, k: int) -> np.ndarray:
        cur = np.zeros(len(self._array), dtype=np.int64)
        if len(cur) > 1:
            cur[1] = 1
        for _ in range(k):
            cur = _compose(cur, self._array, self.p)
        return cur

    def apply(self, f: SeriesTrunc) -> SeriesTrunc:
        """``sigma(f) = f(sigma(u))``."""
        n = min(f.precision, self.precision)
        arr = _to_array(SeriesTrunc(f.poly, n))
        return _from_array(_compose(arr, self._array[:n], self.p), f.ring)


def ramification_break(sigma: LocalAutomorphism) -> int | AtLeast:
    """``m = ord(sigma(u) - u) - 1``; indeterminate when the difference vanishes to precision."""
    diff = sigma.image - SeriesTrunc(sigma.image.ring.var(0), sigma.precision)
    o = diff.ord()
    if isinstance(o, AtLeast):
        return AtLeast(o.bound - 1)
    return o - 1


class EffectiveModel(NamedTuple):
    r: int
    i: int

    @property
    def torsor(self) -> bool:
        return self.i == 0


def effective_model_exponent(m: int, p: int) -> EffectiveModel:
    """Unique ``r >= 0, 0 <= i < p`` with ``m + 1 = p r + i``."""
    check_prime(p)
    if m < 1:
        raise DomainError("the break must be positive")
    r, i = divmod(m + 1, p)
    return EffectiveModel(r, i)


# ---------------------------------------------------------------- Artin-Schreier data


def x_ring(p: int) -> PolyRing:
    return PolyRing(p, ["x"])


@dataclass(frozen=True)
class ASData:
    """``z^p - z = x^(-mu) f(x)`` with ``f(0) != 0``.

    ``shift`` lists the pairs ``(c, r)`` of the substitutions
    ``z -> z - c x^(-r)`` applied so far, in order.
    """

    mu: int
    f: Poly
    shift: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.f.ring.names != ("x",):
            object.__setattr__(self, "f", x_ring(self.f.ring.p).coerce(self.f))
        if not self.f.constant_term():
            raise DomainError("f(0) must be nonzero")


def normalize_artin_schreier(data: ASData, p: int) -> ASData:
    """Shift ``z`` until ``mu`` is prime to p.

    When ``mu = p r`` the leading coefficient ``l = f(0)`` is its own p-th power,
    and ``z' = z - l x^(-r)`` satisfies the same kind of equation with numerator
    ``f - l + l x^(mu - r)``; the new ``mu`` drops by that numerator's order.
    """
    check_prime(p)
    ring = x_ring(p)
    mu, f, shifts = data.mu, ring.coerce(data.f), list(data.shift)
    if mu <= 0:
        raise NotTotallyRamifiedError("mu <= 0: the extension is not totally ramified")
    while mu % p == 0:
        r = mu // p
        lam = f.constant_term()
        g = f - lam + ring.monomial((mu - r,), lam)
        if not g:
            raise NotTotallyRamifiedError("the right-hand side becomes an Artin-Schreier coboundary")
        o = int(g.ord())
        mu -= o
        f = g.divexact(ring.monomial((o,)))
        shifts.append((lam, r))
        if mu <= 0:
            raise NotTotallyRamifiedError("mu dropped to <= 0: the extension is unramified or split")
    return ASData(mu, f, tuple(shifts))


# ---------------------------------------------------------------- moderate presentations


@dataclass
class ModeratePresentation:
    sigma: LocalAutomorphism
    x_of_s: SeriesTrunc
    r: int
    f: Poly
    invariant_checked: bool


def build_moderate_presentation_full(
    r: int, f: Poly | str, p: int, precision: int = DEFAULT_PRECISION
) -> ModeratePresentation:
    """Solve ``s^p - x^(r(p-1)) s - x f(x) = 0`` for ``x(s)`` and set ``sigma(s) = s + x(s)^r``."""
    check_prime(p)
    if r < 1:
        raise DomainError("r must be at least 1")
    fx = x_ring(p).parse(f) if isinstance(f, str) else x_ring(p).coerce(f)
    if not fx.constant_term():
        raise DomainError("f(0) must be nonzero")
    target = p * r - 1
    prec = max(precision, 2)
    while True:
        ring = PolyRing(p, ["x", "s"])
        xv, sv = ring.gens()
        rel = sv**p - xv ** (r * (p - 1)) * sv - xv * ring.coerce(fx)
        xs = implicit_solve(rel, "x", prec)
        sring = xs.ring
        img = SeriesTrunc(sring.var("s"), prec) + xs**r
        sigma = LocalAutomorphism(img, p)
        m = ramification_break(sigma)
        if isinstance(m, int):
            break
        prec *= 2
    assert m == target, f"break {m} differs from p*r - 1 = {target}"
    invariant = sigma.apply(xs) == xs
    assert invariant, "x(s) is not fixed by sigma"
    return ModeratePresentation(sigma, xs, r, fx, invariant)


def build_moderate_presentation(r: int, f: Poly | str, p: int, precision: int = DEFAULT_PRECISION) -> LocalAutomorphism:
    return build_moderate_presentation_full(r, f, p, precision).sigma


# ---------------------------------------------------------------- valuation route


@dataclass(frozen=True)
class ValuationBreak:
    mu: int
    c: int
    d: int
    terms: tuple[tuple[int, int], ...]
    minimizer: int

    @property
    def value(self) -> int:
        return self.mu


def break_via_valuation_details(i: int, r: int, f: Poly | str, p: int) -> ValuationBreak:
    """Break of ``s -> s + x^r`` on ``k[[x]][s]/(s^p - x^(r(p-1)) s - x^i f(x))``.

    With ``val(x) = p`` and ``val(s) = i``, the uniformizer is ``s^c / x^d`` where
    ``c i - d p = 1``.  The break is ``val((s + x^r)^c - s^c) - d p - 1``.
    """
    check_prime(p)
    if not 0 < i < p:
        raise DomainError("need 0 < i < p")
    if r < 1 or p * r - i <= 0:
        raise DomainError("need r >= 1 and p*r - i > 0")
    fx = x_ring(p).parse(f) if isinstance(f, str) else x_ring(p).coerce(f)
    if not fx.constant_term():
        raise DomainError("f(0) must be nonzero")
    # Newton polygon of the relation: val(s^p) = p*i beats val(x^(r(p-1)) s) since i < p*r
    assert p * i < p * r * (p - 1) + i
    c = next(c for c in range(1, p) if (c * i) % p == 1)
    d = (c * i - 1) // p
    # expand (s + x^r)^c - s^c over k[x]: coefficient of s^j is binom(c, j) x^(r(c-j)), j < c
    ring = PolyRing(p, ["x", "s"])
    xv, sv = ring.gens()
    diff = (sv + xv**r) ** c - sv**c
    coeffs: dict[int, int] = {}
    for (ex, es), _ in diff._t.items():
        coeffs[es] = min(coeffs.get(es, ex), ex)
    vals = {j: p * ox + j * i for j, ox in coeffs.items()}
    best = min(vals.values())
    minimizers = [j for j, v in vals.items() if v == best]
    assert len(minimizers) == 1, "valuation minimum must be attained once"
    mu = best - d * p - 1
    assert mu == p * r - i, f"valuation break {mu} differs from p*r - i"
    return ValuationBreak(mu, c, d, tuple(sorted(vals.items())), minimizers[0])


def break_via_valuation(i: int, r: int, f: Poly | str, p: int) -> int:
    return break_via_valuation_details(i, r, f, p).mu
