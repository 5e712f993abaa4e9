"""The algebra A = R[u1..un]/(u_i^p - (mu a_i)^(p-1) u_i - x_i) over R = F_p[x1..xn].

A is free over R with basis the monomials u^e, 0 <= e_i < p.  Elements are
stored as polynomials in x1..xn, u1..un whose u-exponents are reduced; the
group H = F_p^n acts by u_j -> u_j + h_j mu a_j.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DomainError, PreconditionError, StructuralError
from .gfp import check_prime
from .local import DEFAULT_LENGTH_CAP, LengthResult, local_length
from .poly import Poly, PolyRing, SeriesTrunc, implicit_solve_system
from .report import Truth

GroupVector = tuple[int, ...]


def x_names(n: int) -> list[str]:
    return [f"x{i}" for i in range(1, n + 1)]


def u_names(n: int) -> list[str]:
    return [f"u{i}" for i in range(1, n + 1)]


class ActionSpec:
    """Structure constants ``(p, n, a_1..a_n, mu)`` of the action."""

    def __init__(
        self,
        p: int,
        a: Sequence[Poly | str],
        mu: Poly | str | int = 1,
        coprime_asserted: bool = False,
    ):
        check_prime(p)
        n = len(a)
        if n < 1:
            raise DomainError("need at least one a_i")
        self.p = p
        self.n = n
        self.R = PolyRing(p, x_names(n))
        self.A = PolyRing(p, x_names(n) + u_names(n))
        self.U = PolyRing(p, u_names(n))
        self.a = tuple(self._to_r(ai) for ai in a)
        self.mu = self._to_r(mu)
        for i, ai in enumerate(self.a):
            if not ai:
                raise DomainError(f"a_{i + 1} is zero")
            if ai.constant_term():
                raise DomainError(f"a_{i + 1} has a nonzero constant term")
        if not self.mu:
            raise DomainError("mu is zero")
        self.coprime_asserted = coprime_asserted
        self._sop: Truth | None = None
        self._params: Truth | None = None
        # reduction data: (mu a_i)^(p-1) as terms in the x-variables
        self.mua = tuple(self.mu * ai for ai in self.a)
        self._lead = [list(((m ** (p - 1)))._t.items()) for m in self.mua]
        self._act_cache: dict[GroupVector, dict[str, Poly]] = {}

    def _to_r(self, f: Poly | str | int) -> Poly:
        if isinstance(f, str):
            return self.R.parse(f)
        return self.R.coerce(f)

    @property
    def key(self) -> tuple:
        return (self.p, tuple(self.a), self.mu)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ActionSpec) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"ActionSpec(p={self.p}, a={[str(x) for x in self.a]}, mu={str(self.mu)!r})"

    # ----- certification
    def certify_sop(self, cap: int = DEFAULT_LENGTH_CAP) -> Truth:
        """Whether ``(mu a_1, ..., mu a_n)`` is a system of parameters of R."""
        if self._sop is None:
            from .local import is_system_of_parameters

            self._sop = is_system_of_parameters(list(self.mua), cap)
        return self._sop

    def certify_parameters(self, cap: int = DEFAULT_LENGTH_CAP) -> Truth:
        """Whether ``(a_1, ..., a_n)`` is a system of parameters of R."""
        if self._params is None:
            from .local import is_system_of_parameters

            self._params = is_system_of_parameters(list(self.a), cap)
        return self._params

    # ----- element constructors
    def element(self, f: Poly | str | int) -> AElement:
        if isinstance(f, str):
            f = self.A.parse(f)
        return AElement(self, self.reduce(self.A.coerce(f)))

    def one(self) -> AElement:
        return AElement(self, self.A.one())

    def zero(self) -> AElement:
        return AElement(self, self.A.zero())

    def u(self, i: int) -> AElement:
        """The generator ``u_i`` (1-based)."""
        return AElement(self, self.A.var(f"u{i}"))

    def x(self, i: int) -> AElement:
        return AElement(self, self.A.var(f"x{i}"))

    def scalar(self, r: Poly | str | int) -> AElement:
        return AElement(self, self.A.coerce(self._to_r(r)))

    def basis_monomial(self, e: Sequence[int]) -> AElement:
        if len(e) != self.n or any(not 0 <= k < self.p for k in e):
            raise DomainError(f"exponent {tuple(e)} is not reduced")
        return AElement(self, self.A.monomial((0,) * self.n + tuple(e)))

    def basis_exponents(self) -> list[tuple[int, ...]]:
        return list(itertools.product(range(self.p), repeat=self.n))

    # ----- reduction
    def reduce(self, f: Poly) -> Poly:
        """Normal form modulo ``u_i^p -> (mu a_i)^(p-1) u_i + x_i``."""
        if f.ring != self.A:
            raise StructuralError("polynomial is not in the ring of A")
        n, p = self.n, self.p
        pending = dict(f._t)
        done: dict[tuple[int, ...], int] = {}
        while pending:
            nxt: dict[tuple[int, ...], int] = {}
            for e, c in pending.items():
                i = next((j for j in range(n) if e[n + j] >= p), None)
                if i is None:
                    v = (done.get(e, 0) + c) % p
                    if v:
                        done[e] = v
                    else:
                        done.pop(e, None)
                    continue
                k = e[n + i]
                e1 = list(e)
                e1[n + i] = k - p
                e1[i] += 1
                t1 = tuple(e1)
                nxt[t1] = (nxt.get(t1, 0) + c) % p
                for ex, cc in self._lead[i]:
                    e2 = [e[j] + ex[j] for j in range(n)] + list(e[n:])
                    e2[n + i] = k - p + 1
                    t2 = tuple(e2)
                    nxt[t2] = (nxt.get(t2, 0) + c * cc) % p
            pending = {e: c for e, c in nxt.items() if c}
        return Poly._raw(self.A, done)

    def action_images(self, h: GroupVector) -> dict[str, Poly]:
        h = self.group_vector(h)
        if h not in self._act_cache:
            imgs = {}
            for j in range(self.n):
                shift = self.A.coerce(self.mua[j]).scale(h[j])
                imgs[f"u{j + 1}"] = self.A.var(f"u{j + 1}") + shift
            for nm in self.R.names:
                imgs[nm] = self.A.var(nm)
            self._act_cache[h] = imgs
        return self._act_cache[h]

    def group_vector(self, h: Iterable[int]) -> GroupVector:
        h = tuple(int(v) % self.p for v in h)
        if len(h) != self.n:
            raise DomainError(f"group vector must have length {self.n}")
        return h

    def diagonal(self) -> GroupVector:
        return (1,) * self.n

    def unit_vector(self, i: int) -> GroupVector:
        """``e_i`` (1-based)."""
        return tuple(1 if j == i - 1 else 0 for j in range(self.n))


@dataclass(frozen=True, eq=False)
class AElement:
    """An element of A in reduced form."""

    spec: ActionSpec
    poly: Poly

    def _check(self, other: AElement | Poly | int) -> AElement:
        if isinstance(other, AElement):
            if other.spec is not self.spec and other.spec != self.spec:
                raise StructuralError("elements belong to different algebras")
            return other
        if isinstance(other, (int, Poly)):
            return self.spec.element(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        other = self._check(other)
        return AElement(self.spec, self.poly + other.poly)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return AElement(self.spec, self.poly - other.poly)

    def __rsub__(self, other):
        return self._check(other) - self

    def __neg__(self):
        return AElement(self.spec, -self.poly)

    def __mul__(self, other):
        if isinstance(other, int):
            return AElement(self.spec, self.poly.scale(other))
        return a_mul(self, self._check(other), self.spec)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> AElement:
        if k < 0:
            raise DomainError("negative exponent")
        result = self.spec.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = self.spec.element(other)
        if not isinstance(other, AElement):
            return NotImplemented
        return self.spec == other.spec and self.poly == other.poly

    def __hash__(self) -> int:
        return hash(self.poly)

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __bool__(self) -> bool:
        return bool(self.poly)

    @property
    def coeffs(self) -> dict[tuple[int, ...], Poly]:
        """Map from reduced u-exponent to the R-coefficient."""
        n = self.spec.n
        R = self.spec.R
        parts: dict[tuple[int, ...], dict] = {}
        for e, c in self.poly._t.items():
            parts.setdefault(e[n:], {})[e[:n]] = c
        return {k: R.poly(v) for k, v in sorted(parts.items())}

    def coefficient(self, e: Sequence[int]) -> Poly:
        return self.coeffs.get(tuple(e), self.spec.R.zero())

    def is_in_R(self) -> bool:
        n = self.spec.n
        return all(not any(e[n:]) for e in self.poly._t)

    def __str__(self) -> str:
        return str(self.poly)

    def __repr__(self) -> str:
        return f"AElement({self.poly!s})"


def a_mul(f: AElement, g: AElement, spec: ActionSpec) -> AElement:
    """Product in A, fully reduced."""
    if f.spec != spec or g.spec != spec:
        raise StructuralError("spec mismatch in a_mul")
    return AElement(spec, spec.reduce(f.poly * g.poly))


def act(h: Iterable[int], f: AElement, spec: ActionSpec) -> AElement:
    """Image of ``f`` under ``u_j -> u_j + h_j mu a_j``.

    Exponents of each u_j never grow, so the image is already reduced.
    """
    if f.spec != spec:
        raise StructuralError("spec mismatch in act")
    imgs = spec.action_images(tuple(h))
    return AElement(spec, f.poly.substitute(imgs, ring=spec.A))


def _orbit(f: AElement, h: Iterable[int], spec: ActionSpec) -> list[AElement]:
    h = spec.group_vector(h)
    if not any(h):
        raise PreconditionError("h must be nonzero")
    return [act(tuple(j * v for v in h), f, spec) for j in range(spec.p)]


def norm(f: AElement, h: Iterable[int], spec: ActionSpec) -> AElement:
    """Product of the images of ``f`` under the cyclic group generated by ``h``."""
    out = spec.one()
    for g in _orbit(f, h, spec):
        out = out * g
    return out


def trace(f: AElement, h: Iterable[int], spec: ActionSpec) -> AElement:
    out = spec.zero()
    for g in _orbit(f, h, spec):
        out = out + g
    return out


# ---------------------------------------------------------------- coordinates


def express_x_in_u(spec: ActionSpec, precision: int) -> list[SeriesTrunc]:
    """Series ``X_i(u)`` with ``X_i = u_i^p - (mu a_i(X))^(p-1) u_i`` modulo degree ``precision``."""
    if precision < spec.p + 1:
        raise PreconditionError(f"precision must be at least p+1 = {spec.p + 1}")
    p = spec.p
    rels = []
    for i in range(spec.n):
        ui = spec.A.var(f"u{i + 1}")
        xi = spec.A.var(f"x{i + 1}")
        rels.append(ui**p - spec.A.coerce(spec.mua[i]) ** (p - 1) * ui - xi)
    sols = implicit_solve_system(rels, spec.R.names, precision)
    out = [SeriesTrunc(spec.U.coerce(s.poly), s.precision) for s in sols]
    for s in out:
        assert s.ord() == p, "X_i must have order p"
    return out


def r_to_u(f: Poly, spec: ActionSpec, xs: Sequence[SeriesTrunc]) -> SeriesTrunc:
    """Rewrite an element of R as a series in the u-coordinates."""
    prec = min(s.precision for s in xs)
    assign = {nm: s.poly for nm, s in zip(spec.R.names, xs)}
    return SeriesTrunc(spec.R.coerce(f).substitute(assign, ring=spec.U, precision=prec), prec)


def a_to_u(f: AElement, spec: ActionSpec, xs: Sequence[SeriesTrunc]) -> SeriesTrunc:
    prec = min(s.precision for s in xs)
    assign = {nm: s.poly for nm, s in zip(spec.R.names, xs)}
    for nm in spec.U.names:
        assign[nm] = spec.U.var(nm)
    return SeriesTrunc(f.poly.substitute(assign, ring=spec.U, precision=prec), prec)


def norm_elements_in_u(spec: ActionSpec, precision: int) -> list[SeriesTrunc]:
    """The norms ``x_i = N(u_i)`` as series in u, via the implicit solve."""
    return express_x_in_u(spec, precision)


def norm_length(spec: ActionSpec, cap: int = DEFAULT_LENGTH_CAP, precision: int | None = None) -> LengthResult:
    """Length of ``k[[u]]/(x_1, ..., x_n)``, raising the precision until certified."""
    prec = precision or (spec.n * (spec.p - 1) + 3)
    while True:
        xs = express_x_in_u(spec, max(prec, spec.p + 1))
        res = local_length(xs, cap)
        if res.is_finite or prec >= cap:
            return res
        prec = min(cap, 2 * prec)


@dataclass
class FixedIdealReport:
    containment: bool
    orders: list[int | str]
    length: LengthResult
    base_length: LengthResult
    precision: int
    multiple_of_pn: bool | None
    matches_rank: bool | None
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.containment and self.multiple_of_pn and self.matches_rank)


def fixed_ideal_report(
    spec: ActionSpec,
    precision: int | None = None,
    cap: int = DEFAULT_LENGTH_CAP,
) -> FixedIdealReport:
    """Check ``I = (mu a_i) A ⊆ m_A^p`` and that ``length(A/I)`` is a multiple of ``p^n``.

    The length is computed in the u-coordinates of ``A = k[[u]]`` and compared
    with ``p^n`` times the colength of ``(mu a_i)`` in R (A is free of rank p^n).
    """
    if spec.certify_sop(cap) is not Truth.TRUE:
        raise PreconditionError("(mu a_1, ..., mu a_n) is not certified as a system of parameters")
    p, n = spec.p, spec.n
    base = local_length(list(spec.mua), cap)
    prec = max(precision or 0, p + 2)
    while True:
        xs = express_x_in_u(spec, prec)
        gens = [r_to_u(m, spec, xs) for m in spec.mua]
        res = local_length(gens, cap)
        if res.is_finite or prec >= cap:
            break
        prec = min(cap, 2 * prec)
    orders = [g.ord() for g in gens]
    containment = all(isinstance(o, int) is False or o >= p for o in orders)
    mult = None if not res.is_finite else res.length % (p**n) == 0
    match = None
    if res.is_finite and base.is_finite:
        match = res.length == p**n * base.length
    return FixedIdealReport(
        containment=containment,
        orders=[o if isinstance(o, int) else str(o) for o in orders],
        length=res,
        base_length=base,
        precision=prec,
        multiple_of_pn=mult,
        matches_rank=match,
    )


@dataclass(frozen=True)
class ElementClass:
    kind: str
    support: tuple[int, ...]
    ideal: tuple[Poly, ...]
    note: str = ""


def classify_element(h: Iterable[int], spec: ActionSpec) -> ElementClass:
    """Classify ``h`` by its fixed-scheme ideal ``(mu a_i : h_i != 0)``.

    One active coordinate gives a principal ideal (pseudo-reflection).  With
    two or more, the ideal lies in the principal ideal ``(mu)`` exactly when
    ``mu`` is a non-unit (generalized reflection); for a unit ``mu`` and sop
    data the fixed locus has codimension at least two and the element acts
    freely in codimension one.
    """
    h = spec.group_vector(h)
    if not any(h):
        raise PreconditionError("h must be nonzero")
    support = tuple(i + 1 for i, v in enumerate(h) if v)
    ideal = tuple(spec.mua[i - 1] for i in support)
    if len(support) == 1:
        return ElementClass("pseudo-reflection", support, ideal, "principal fixed ideal")
    if spec.certify_parameters() is not Truth.TRUE:
        raise PreconditionError("(a_1, ..., a_n) is not certified as a system of parameters")
    if spec.mu.constant_term() == 0:
        return ElementClass(
            "generalized-reflection", support, ideal, f"fixed ideal contained in ({spec.mu})"
        )
    return ElementClass("free-acting", support, ideal, "fixed locus of codimension >= 2")
