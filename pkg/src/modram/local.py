"""Decision procedures in the local ring k[[x1..xn]] by truncated linear algebra.

Lengths of quotients by m-primary ideals are read off from the sequence
``d(N) = dim k[[x]]/(I + m^N)``.  Once ``d(N) = d(N+1)`` we have
``m^N ⊆ I + m^(N+1)``, so Nakayama gives ``m^N ⊆ I`` and ``d(N)`` is the length.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import linalg
from .errors import DomainError, NotAPGroupError, PreconditionError, StructuralError
from .poly import Poly, PolyRing, SeriesTrunc
from .report import Truth

DEFAULT_LENGTH_CAP = 64


@lru_cache(maxsize=None)
def monomials_below(n: int, bound: int) -> tuple[tuple[int, ...], ...]:
    """All exponent vectors in ``n`` variables of total degree ``< bound``, by degree."""
    out: list[tuple[int, ...]] = []
    for d in range(bound):
        out.extend(monomials_of_degree(n, d))
    return tuple(out)


@lru_cache(maxsize=None)
def monomials_of_degree(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    out = []
    for bars in itertools.combinations(range(d + n - 1), n - 1):
        prev = -1
        e = []
        for b in bars:
            e.append(b - prev - 1)
            prev = b
        e.append(d + n - 1 - prev - 1)
        out.append(tuple(e))
    out.sort(reverse=True)
    return tuple(out)


@dataclass(frozen=True)
class LengthResult:
    """Either ``Finite(length)`` or ``IndeterminateAtCap(cap)``."""

    length: int | None
    cap: int | None = None
    sequence: tuple[int, ...] = ()

    @classmethod
    def finite(cls, length: int, sequence: Sequence[int] = ()) -> LengthResult:
        return cls(length, None, tuple(sequence))

    @classmethod
    def indeterminate(cls, cap: int, sequence: Sequence[int] = ()) -> LengthResult:
        return cls(None, cap, tuple(sequence))

    @property
    def is_finite(self) -> bool:
        return self.length is not None

    def __str__(self) -> str:
        if self.is_finite:
            return f"Finite({self.length})"
        return f"IndeterminateAtCap({self.cap})"


def _as_poly(g: Poly | SeriesTrunc) -> tuple[Poly, int | None]:
    if isinstance(g, SeriesTrunc):
        return g.poly, g.precision
    return g, None


def colength_below(gens: Sequence[Poly], bound: int) -> int:
    """``d(N) = dim k[x]/(I + m^N)`` for ``N = bound``."""
    if not gens:
        raise PreconditionError("need at least one generator")
    ring = gens[0].ring
    n = ring.nvars
    mons = monomials_below(n, bound)
    if not mons:
        return 0
    col = {e: i for i, e in enumerate(mons)}
    rows = []
    for g in gens:
        g = g.truncate(bound)
        if not g:
            continue
        o = int(g.ord())
        gt = list(g._t.items())
        for beta in monomials_below(n, bound - o):
            row = np.zeros(len(mons), dtype=np.int64)
            bd = sum(beta)
            for e, c in gt:
                if sum(e) + bd < bound:
                    row[col[tuple(x + y for x, y in zip(e, beta))]] = c
            rows.append(row)
    if not rows:
        return len(mons)
    return len(mons) - linalg.rank(np.array(rows), ring.p)


def local_length(
    gens: Sequence[Poly | SeriesTrunc],
    cap: int = DEFAULT_LENGTH_CAP,
    precision: int | None = None,
) -> LengthResult:
    """Length of ``k[[x]]/(gens)`` or an indeterminate verdict at ``cap``.

    Series generators (or an explicit ``precision``) are only known modulo
    ``m^precision``; then ``d(N)`` is trusted for ``N <= precision`` only.
    """
    polys = []
    prec = precision
    ring: PolyRing | None = None
    for g in gens:
        poly, gp = _as_poly(g)
        if ring is None:
            ring = poly.ring
        elif poly.ring != ring:
            raise StructuralError("generators live in different rings")
        if poly.constant_term():
            raise PreconditionError("generator has a nonzero constant term")
        if gp is not None:
            prec = gp if prec is None else min(prec, gp)
        polys.append(poly)
    if not polys:
        raise PreconditionError("need at least one generator")
    limit = cap if prec is None else min(cap, prec)
    seq: list[int] = []
    prev = None
    for big_n in range(1, limit + 1):
        d = colength_below(polys, big_n)
        seq.append(d)
        if prev is not None and d == prev:
            return LengthResult.finite(d, seq)
        prev = d
    return LengthResult.indeterminate(limit, seq)


def _generator_count_check(gens: Sequence[Poly | SeriesTrunc]) -> PolyRing:
    if not gens:
        raise PreconditionError("need n generators")
    ring = _as_poly(gens[0])[0].ring
    if len(gens) != ring.nvars:
        raise PreconditionError(f"expected {ring.nvars} generators, got {len(gens)}")
    for g in gens:
        if _as_poly(g)[0].constant_term():
            raise PreconditionError("generator has a nonzero constant term")
    return ring


def linear_rank(gens: Sequence[Poly | SeriesTrunc]) -> int:
    polys = [_as_poly(g)[0] for g in gens]
    ring = polys[0].ring
    return linalg.rank(np.array([g.linear_part() for g in polys], dtype=np.int64), ring.p)


def is_regular_sop(gens: Sequence[Poly | SeriesTrunc]) -> bool:
    """The generators' linear parts are linearly independent."""
    _generator_count_check(gens)
    for g in gens:
        _, prec = _as_poly(g)
        if prec is not None and prec < 2:
            raise PreconditionError("linear parts need precision >= 2")
    return linear_rank(gens) == len(gens)


def vanishing_linear_subspace(gens: Sequence[Poly]) -> np.ndarray | None:
    """A nonzero linear subspace on which every (exact) generator vanishes, if the
    common kernel of the linear parts is such a subspace; otherwise ``None``."""
    ring = gens[0].ring
    p = ring.p
    lin = np.array([g.linear_part() for g in gens], dtype=np.int64)
    ker = linalg.nullspace(lin, p, ncols=ring.nvars)
    if ker.shape[0] == 0:
        return None
    t = PolyRing(p, [f"t{k}" for k in range(ker.shape[0])])
    tv = t.gens()
    assign = {}
    for i, nm in enumerate(ring.names):
        img = t.zero()
        for k in range(ker.shape[0]):
            if ker[k, i]:
                img = img + tv[k].scale(int(ker[k, i]))
        assign[nm] = img
    for g in gens:
        if g.substitute(assign, ring=t):
            return None
    return ker


def is_system_of_parameters(
    gens: Sequence[Poly | SeriesTrunc],
    cap: int = DEFAULT_LENGTH_CAP,
) -> Truth:
    """``TRUE`` iff the quotient has finite length.

    ``FALSE`` is certified only by a positive-dimensional linear subspace inside
    the zero locus of the (exact) generators; otherwise a non-terminating
    length computation is reported as ``INDETERMINATE``.
    """
    _generator_count_check(gens)
    res = local_length(gens, cap)
    if res.is_finite:
        return Truth.TRUE
    exact = [g for g in gens if isinstance(g, Poly)]
    if len(exact) == len(gens) and vanishing_linear_subspace(exact) is not None:
        return Truth.FALSE
    return Truth.INDETERMINATE


# ---------------------------------------------------------------- substitution actions


@dataclass
class SubstitutionAction:
    """A k-automorphism of k[[u1..un]] of order p given by the images of the u_i.

    With ``exact=True`` the images are polynomials and ``sigma^p = id`` is checked
    without truncation; otherwise everything holds modulo ``m^precision``.
    """

    p: int
    ring: PolyRing
    images: list[SeriesTrunc]
    exact: bool = False
    _powers: list[list[SeriesTrunc]] = field(default_factory=list, repr=False)

    def __post_init__(self) -> None:
        if self.ring.p != self.p:
            raise StructuralError("ring characteristic does not match p")
        if len(self.images) != self.ring.nvars:
            raise PreconditionError("need one image per variable")
        for img in self.images:
            if img.ring != self.ring:
                raise StructuralError("image lives in a different ring")
            if img.poly.constant_term():
                raise PreconditionError("image has a nonzero constant term")
        ident = [SeriesTrunc(v, self.precision) for v in self.ring.gens()]
        pw = [ident]
        for _ in range(self.p):
            pw.append(self._compose_once(pw[-1]))
        if pw[self.p] != ident:
            raise PreconditionError("sigma^p is not the identity at the stored precision")
        self._powers = pw[: self.p]

    @classmethod
    def from_polys(cls, p: int, images: Sequence[Poly], precision: int | None = None) -> SubstitutionAction:
        ring = images[0].ring
        if precision is None:
            # exact polynomial images; record a precision beyond every degree met in sigma^p
            deg = max(max(g.degree(), 1) for g in images)
            precision = deg**p + 2
            return cls(p, ring, [SeriesTrunc(g, precision) for g in images], exact=True)
        return cls(p, ring, [SeriesTrunc(g, precision) for g in images])

    @property
    def precision(self) -> int:
        return min(img.precision for img in self.images)

    @property
    def n(self) -> int:
        return self.ring.nvars

    def _compose_once(self, cur: list[SeriesTrunc]) -> list[SeriesTrunc]:
        assign = {nm: img for nm, img in zip(self.ring.names, self.images)}
        return [c.compose(assign) for c in cur]

    def power_image(self, j: int, i: int) -> SeriesTrunc:
        """``sigma^j(u_i)``."""
        return self._powers[j % self.p][i]

    def tangent_matrix(self) -> np.ndarray:
        return np.array([img.poly.linear_part() for img in self.images], dtype=np.int64)

    def tuples(self):
        for js in itertools.product(range(self.p), repeat=self.n):
            yield js, [self.power_image(j, i) for i, j in enumerate(js)]


def is_admissible(action: SubstitutionAction) -> bool:
    """Every tuple ``(sigma^{j_1}(u_1), ..., sigma^{j_n}(u_n))`` is a regular sop."""
    if action.precision < 2:
        raise PreconditionError("need precision >= 2 for linear parts")
    return all(is_regular_sop(imgs) for _, imgs in action.tuples())


@dataclass(frozen=True)
class AdmissibilityVerdict:
    truth: Truth
    precision: int
    failing_tuple: tuple[int, ...] | None = None


def is_weakly_admissible(action: SubstitutionAction, cap: int = DEFAULT_LENGTH_CAP) -> AdmissibilityVerdict:
    """Every tuple is a system of parameters, certified at the action's precision."""
    undecided = None
    for js, imgs in action.tuples():
        if action.exact:
            truth = is_system_of_parameters([img.poly for img in imgs], cap)
        else:
            res = local_length(imgs, cap)
            truth = Truth.TRUE if res.is_finite else Truth.INDETERMINATE
        if truth is Truth.FALSE:
            return AdmissibilityVerdict(Truth.FALSE, action.precision, js)
        if truth is Truth.INDETERMINATE and undecided is None:
            undecided = js
    if undecided is not None:
        return AdmissibilityVerdict(Truth.INDETERMINATE, action.precision, undecided)
    return AdmissibilityVerdict(Truth.TRUE, action.precision)


# ---------------------------------------------------------------- p-group triangularization


def matrix_order_is_p_power(m: np.ndarray, p: int) -> bool:
    n = m.shape[0]
    ident = np.eye(n, dtype=np.int64)
    cur = np.mod(m, p)
    for _ in range(n * n + 1):
        if np.array_equal(cur, ident):
            return True
        nxt = ident
        for _ in range(p):
            nxt = linalg.matmul(nxt, cur, p)
        cur = nxt
    return False


def triangularize(mats: Sequence[Sequence[Sequence[int]] | np.ndarray], p: int) -> np.ndarray:
    """Matrix ``P`` with every ``P M P^-1`` upper unitriangular.

    Builds a flag of common fixed vectors on successive quotients; ``P`` is the
    inverse of the matrix whose columns are the flag basis.
    """
    ms = [np.mod(np.asarray(m, dtype=np.int64), p) for m in mats]
    if not ms:
        raise DomainError("need at least one matrix")
    n = ms[0].shape[0]
    for m in ms:
        if m.shape != (n, n):
            raise DomainError("matrices must be square of equal size")
        if not matrix_order_is_p_power(m, p):
            raise NotAPGroupError("a generator does not have p-power order")
    ident = np.eye(n, dtype=np.int64)
    basis: list[np.ndarray] = []
    while len(basis) < n:
        if basis:
            w = np.array(basis, dtype=np.int64)
            q = linalg.nullspace(w, p, ncols=n)
        else:
            w = np.zeros((0, n), dtype=np.int64)
            q = ident
        stacked = np.vstack([linalg.matmul(q, m - ident, p) for m in ms])
        kernel = linalg.nullspace(stacked, p, ncols=n)
        pick = None
        for v in kernel:
            if not linalg.in_row_space(w, v, p):
                pick = v
                break
        if pick is None:
            raise NotAPGroupError("no common fixed vector on a quotient: the group is not a p-group")
        basis.append(np.mod(pick, p))
    b = np.array(basis, dtype=np.int64).T
    return linalg.inverse(b, p)


def is_upper_unitriangular(m: np.ndarray, p: int) -> bool:
    m = np.mod(m, p)
    n = m.shape[0]
    return all(m[i, i] == 1 for i in range(n)) and not np.any(np.tril(m, -1))
