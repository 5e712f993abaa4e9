"""Sparse multivariate polynomials over the prime field and truncated series.

A :class:`Poly` is an immutable map from exponent tuples to nonzero residues,
tied to a :class:`PolyRing` that fixes the prime and the ordered variable names.
Canonical ordering is degree-reverse-lexicographic, so printed forms are stable.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from . import linalg
from .errors import (
    DivisionByZero,
    DomainError,
    NonContractiveError,
    ParseError,
    PreconditionError,
    SingularError,
    StructuralError,
)
from .gfp import Fp, check_prime, inv_mod

Exp = tuple[int, ...]
Scalar = Union[int, Fp]


def degrevlex_key(e: Exp) -> tuple:
    return (sum(e), tuple(-x for x in reversed(e)))


@dataclass(frozen=True)
class PolyRing:
    """The polynomial ring over F_p in the given ordered variables."""

    p: int
    names: tuple[str, ...]

    def __init__(self, p: int, names: Iterable[str]):
        check_prime(p)
        names = tuple(names)
        if len(set(names)) != len(names):
            raise DomainError(f"duplicate variable names in {names}")
        for nm in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", nm):
                raise DomainError(f"invalid variable name {nm!r}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "names", names)

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise StructuralError(f"variable {name!r} not in ring {self.names}") from None

    def poly(self, terms: Mapping[Exp, int]) -> Poly:
        p = self.p
        clean = {}
        for e, c in terms.items():
            c %= p
            if c:
                clean[tuple(e)] = c
        return Poly._raw(self, clean)

    def zero(self) -> Poly:
        return Poly._raw(self, {})

    def one(self) -> Poly:
        return self.const(1)

    def const(self, c: Scalar) -> Poly:
        c = int(c) % self.p
        return Poly._raw(self, {(0,) * self.nvars: c} if c else {})

    def monomial(self, exp: Sequence[int], c: Scalar = 1) -> Poly:
        if len(exp) != self.nvars:
            raise StructuralError("exponent length does not match ring arity")
        if any(x < 0 for x in exp):
            raise DomainError("negative exponent")
        c = int(c) % self.p
        return Poly._raw(self, {tuple(exp): c} if c else {})

    def var(self, name: str | int) -> Poly:
        i = name if isinstance(name, int) else self.index(name)
        e = [0] * self.nvars
        e[i] = 1
        return Poly._raw(self, {tuple(e): 1})

    def gens(self) -> tuple[Poly, ...]:
        return tuple(self.var(i) for i in range(self.nvars))

    def coerce(self, f: Poly | Scalar) -> Poly:
        """Bring ``f`` into this ring, renaming by variable name if needed."""
        if isinstance(f, Poly):
            if f.ring == self:
                return f
            if f.ring.p != self.p:
                raise StructuralError(f"modulus mismatch: {f.ring.p} vs {self.p}")
            pos = [self.index(nm) for nm in f.ring.names]
            out = {}
            for e, c in f._t.items():
                ne = [0] * self.nvars
                for j, x in zip(pos, e):
                    ne[j] = x
                out[tuple(ne)] = c
            return Poly._raw(self, out)
        if isinstance(f, (int, Fp)):
            if isinstance(f, Fp) and f.p != self.p:
                raise StructuralError("modulus mismatch")
            return self.const(int(f))
        raise StructuralError(f"cannot coerce {type(f).__name__} into a polynomial")

    def parse(self, text: str) -> Poly:
        return _Parser(self, text).parse()

    def __repr__(self) -> str:
        return f"PolyRing(p={self.p}, names={list(self.names)})"


class Poly:
    """Immutable sparse polynomial; coefficients are residues in ``[1, p)``."""

    __slots__ = ("ring", "_t", "_hash")

    ring: PolyRing
    _t: dict[Exp, int]

    @classmethod
    def _raw(cls, ring: PolyRing, terms: dict[Exp, int]) -> Poly:
        obj = object.__new__(cls)
        obj.ring = ring
        obj._t = terms
        obj._hash = None
        return obj

    # ----- inspection
    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def terms(self) -> dict[Exp, int]:
        return dict(self._t)

    def items(self) -> list[tuple[Exp, int]]:
        """Terms in canonical (descending degrevlex) order."""
        return sorted(self._t.items(), key=lambda kv: degrevlex_key(kv[0]), reverse=True)

    def coeff(self, exp: Sequence[int]) -> int:
        return self._t.get(tuple(exp), 0)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def __len__(self) -> int:
        return len(self._t)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._t)

    def constant_term(self) -> int:
        return self._t.get((0,) * self.ring.nvars, 0)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._t), default=-1)

    def degree_in(self, name: str) -> int:
        i = self.ring.index(name)
        return max((e[i] for e in self._t), default=-1)

    def ord(self) -> int | float:
        """Minimal total degree of a term; ``math.inf`` for zero."""
        return min((sum(e) for e in self._t), default=math.inf)

    def variables(self) -> list[str]:
        used = set()
        for e in self._t:
            used.update(i for i, x in enumerate(e) if x)
        return [self.ring.names[i] for i in sorted(used)]

    def linear_part(self) -> list[int]:
        out = []
        for i in range(self.ring.nvars):
            e = [0] * self.ring.nvars
            e[i] = 1
            out.append(self._t.get(tuple(e), 0))
        return out

    def homogeneous_part(self, d: int) -> Poly:
        return Poly._raw(self.ring, {e: c for e, c in self._t.items() if sum(e) == d})

    def truncate(self, n: int) -> Poly:
        """Drop every term of total degree ``>= n``."""
        return Poly._raw(self.ring, {e: c for e, c in self._t.items() if sum(e) < n})

    def leading(self) -> tuple[Exp, int]:
        if not self._t:
            raise DomainError("zero polynomial has no leading term")
        e = max(self._t, key=degrevlex_key)
        return e, self._t[e]

    # ----- arithmetic
    def _other(self, g: Poly | Scalar) -> Poly:
        if isinstance(g, Poly):
            if g.ring != self.ring:
                if g.ring.p != self.ring.p:
                    raise StructuralError(f"modulus mismatch: {self.ring.p} vs {g.ring.p}")
                raise StructuralError(f"ring mismatch: {self.ring.names} vs {g.ring.names}")
            return g
        if isinstance(g, Fp):
            if g.p != self.p:
                raise StructuralError("modulus mismatch")
            return self.ring.const(g.value)
        if isinstance(g, int):
            return self.ring.const(g)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, g: Poly | Scalar) -> Poly:
        g = self._other(g)
        if g is NotImplemented:
            return NotImplemented
        p = self.p
        out = dict(self._t)
        for e, c in g._t.items():
            v = (out.get(e, 0) + c) % p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        p = self.p
        return Poly._raw(self.ring, {e: p - c for e, c in self._t.items()})

    def __sub__(self, g: Poly | Scalar) -> Poly:
        g = self._other(g)
        if g is NotImplemented:
            return NotImplemented
        return self + (-g)

    def __rsub__(self, g: Poly | Scalar) -> Poly:
        return (-self) + g

    def scale(self, c: Scalar) -> Poly:
        c = int(c) % self.p
        if c == 0:
            return self.ring.zero()
        p = self.p
        return Poly._raw(self.ring, {e: v * c % p for e, v in self._t.items()})

    def __mul__(self, g: Poly | Scalar) -> Poly:
        if isinstance(g, (int, Fp)):
            return self.scale(int(g) if isinstance(g, int) else g.value)
        g = self._other(g)
        if g is NotImplemented:
            return NotImplemented
        return self.mul_trunc(g, None)

    __rmul__ = __mul__

    def mul_trunc(self, g: Poly, n: int | None) -> Poly:
        """Product with every term of total degree ``>= n`` discarded."""
        g = self._other(g)
        p = self.p
        out: dict[Exp, int] = {}
        a, b = self._t, g._t
        if len(a) < len(b):
            a, b = b, a
        if n is None:
            for e1, c1 in a.items():
                for e2, c2 in b.items():
                    e = tuple(x + y for x, y in zip(e1, e2))
                    out[e] = (out.get(e, 0) + c1 * c2) % p
        else:
            bl = [(e2, c2, sum(e2)) for e2, c2 in b.items()]
            for e1, c1 in a.items():
                d1 = sum(e1)
                if d1 >= n:
                    continue
                for e2, c2, d2 in bl:
                    if d1 + d2 >= n:
                        continue
                    e = tuple(x + y for x, y in zip(e1, e2))
                    out[e] = (out.get(e, 0) + c1 * c2) % p
        return Poly._raw(self.ring, {e: c for e, c in out.items() if c})

    def pow_trunc(self, k: int, n: int | None) -> Poly:
        if k < 0:
            raise DomainError("negative exponent")
        result = self.ring.one()
        base = self if n is None else self.truncate(n)
        while k:
            if k & 1:
                result = result.mul_trunc(base, n)
            k >>= 1
            if k:
                base = base.mul_trunc(base, n)
        return result if n is None else result.truncate(n)

    def __pow__(self, k: int) -> Poly:
        return self.pow_trunc(k, None)

    def __eq__(self, g: object) -> bool:
        if isinstance(g, (int, Fp)):
            return self == self.ring.coerce(g)
        if not isinstance(g, Poly):
            return NotImplemented
        return self.ring == g.ring and self._t == g._t

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._t.items())))
        return self._hash

    # ----- calculus and substitution
    def derivative(self, name: str) -> Poly:
        i = self.ring.index(name)
        p = self.p
        out = {}
        for e, c in self._t.items():
            k = e[i]
            v = c * k % p
            if v:
                ne = list(e)
                ne[i] = k - 1
                out[tuple(ne)] = v
        return Poly._raw(self.ring, out)

    def substitute(
        self,
        assignment: Mapping[str, Poly | Scalar],
        ring: PolyRing | None = None,
        precision: int | None = None,
        keep_unassigned: bool = False,
    ) -> Poly:
        """Evaluate at ``assignment`` (variable name to image).

        Every variable occurring in ``self`` needs an image unless
        ``keep_unassigned`` is set, in which case it maps to the variable of the
        same name in the target ring. ``precision`` truncates in the target ring.
        """
        target = ring
        if target is None:
            for v in assignment.values():
                if isinstance(v, Poly):
                    target = v.ring
                    break
        if target is None:
            target = self.ring
        images: list[Poly | None] = []
        for nm in self.ring.names:
            if nm in assignment:
                images.append(target.coerce(assignment[nm]))
            elif keep_unassigned:
                images.append(target.var(nm))
            else:
                images.append(None)
        nv = self.ring.nvars
        for e in self._t:
            for i in range(nv):
                if e[i] and images[i] is None:
                    raise StructuralError(f"no assignment for variable {self.ring.names[i]!r}")
        powers: list[dict[int, Poly]] = [{0: target.one()} for _ in range(nv)]

        def power(i: int, k: int) -> Poly:
            cache = powers[i]
            if k not in cache:
                best = max(j for j in cache if j < k)
                cur = cache[best]
                for j in range(best + 1, k + 1):
                    cur = cur.mul_trunc(images[i], precision)  # type: ignore[arg-type]
                    cache[j] = cur
            return cache[k]

        acc: dict[Exp, int] = {}
        p = self.p
        for e, c in self._t.items():
            term = target.const(c)
            for i in range(nv):
                if e[i]:
                    term = term.mul_trunc(power(i, e[i]), precision)
                    if not term:
                        break
            for te, tc in term._t.items():
                acc[te] = (acc.get(te, 0) + tc) % p
        return Poly._raw(target, {e: c for e, c in acc.items() if c})

    def divexact(self, g: Poly) -> Poly:
        """Exact quotient ``self / g``; raises :class:`DomainError` if ``g`` does not divide."""
        g = self._other(g)
        if not g:
            raise DivisionByZero("division by the zero polynomial")
        p = self.p
        ge, gc = g.leading()
        ginv = inv_mod(gc, p)
        rem = dict(self._t)
        quot: dict[Exp, int] = {}
        while rem:
            re_, rc = max(rem.items(), key=lambda kv: degrevlex_key(kv[0]))
            qe = tuple(x - y for x, y in zip(re_, ge))
            if any(x < 0 for x in qe):
                raise DomainError("polynomial division is not exact")
            qc = rc * ginv % p
            quot[qe] = qc
            for e2, c2 in g._t.items():
                e = tuple(x + y for x, y in zip(qe, e2))
                v = (rem.get(e, 0) - qc * c2) % p
                if v:
                    rem[e] = v
                else:
                    rem.pop(e, None)
        return Poly._raw(self.ring, quot)

    # ----- printing
    def __str__(self) -> str:
        if not self._t:
            return "0"
        parts = []
        for e, c in self.items():
            factors = []
            for nm, k in zip(self.ring.names, e):
                if k == 1:
                    factors.append(nm)
                elif k > 1:
                    factors.append(f"{nm}^{k}")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r}, p={self.p})"


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class _Parser:
    """Recursive-descent parser for ``+ - * ^``, parentheses, integers and variables."""

    def __init__(self, ring: PolyRing, text: str):
        self.ring = ring
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        for m in _TOKEN.finditer(text):
            if m.group(1) is not None:
                self.tokens.append(("int", m.group(1), m.start(1)))
            elif m.group(2) is not None:
                self.tokens.append(("name", m.group(2), m.start(2)))
            elif m.group(3) is not None:
                ch = m.group(3)
                if ch not in "+-*^()":
                    raise ParseError(f"unexpected character {ch!r}", text, m.start(3))
                self.tokens.append(("op", ch, m.start(3)))
        self.pos = 0

    def _peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _fail(self, msg: str) -> ParseError:
        tok = self._peek()
        return ParseError(msg, self.text, tok[2] if tok else len(self.text))

    def parse(self) -> Poly:
        if not self.tokens:
            raise ParseError("empty polynomial string", self.text, 0)
        out = self._expr()
        if self._peek() is not None:
            raise self._fail("trailing input")
        return out

    def _expr(self) -> Poly:
        acc = self._term()
        while (tok := self._peek()) and tok[0] == "op" and tok[1] in "+-":
            self.pos += 1
            rhs = self._term()
            acc = acc + rhs if tok[1] == "+" else acc - rhs
        return acc

    def _term(self) -> Poly:
        acc = self._factor()
        while (tok := self._peek()) and tok == ("op", "*", tok[2]):
            self.pos += 1
            acc = acc * self._factor()
        return acc

    def _factor(self) -> Poly:
        tok = self._peek()
        if tok and tok[0] == "op" and tok[1] in "+-":
            self.pos += 1
            inner = self._factor()
            return -inner if tok[1] == "-" else inner
        base = self._atom()
        tok = self._peek()
        if tok and tok[0] == "op" and tok[1] == "^":
            self.pos += 1
            ex = self._peek()
            if ex is None or ex[0] != "int":
                raise self._fail("exponent must be a non-negative integer literal")
            self.pos += 1
            return base ** int(ex[1])
        return base

    def _atom(self) -> Poly:
        tok = self._peek()
        if tok is None:
            raise self._fail("unexpected end of input")
        kind, val, where = tok
        if kind == "int":
            self.pos += 1
            return self.ring.const(int(val))
        if kind == "name":
            if val not in self.ring.names:
                raise ParseError(f"unknown variable {val!r}", self.text, where)
            self.pos += 1
            return self.ring.var(val)
        if val == "(":
            self.pos += 1
            inner = self._expr()
            close = self._peek()
            if close is None or close[1] != ")":
                raise self._fail("missing closing parenthesis")
            self.pos += 1
            return inner
        raise self._fail(f"unexpected token {val!r}")


def parse_poly(text: str, ring: PolyRing) -> Poly:
    return ring.parse(text)


# ---------------------------------------------------------------- series


@dataclass(frozen=True)
class AtLeast:
    """An order that is only known to be ``>= bound`` (value lost to truncation)."""

    bound: int

    def __str__(self) -> str:
        return f">={self.bound}"


@dataclass(frozen=True)
class SeriesTrunc:
    """A power series known modulo terms of total degree ``>= precision``."""

    poly: Poly
    precision: int

    def __post_init__(self) -> None:
        if self.precision < 0:
            raise DomainError("precision must be non-negative")
        object.__setattr__(self, "poly", self.poly.truncate(self.precision))

    @property
    def ring(self) -> PolyRing:
        return self.poly.ring

    def _coerce(self, g: SeriesTrunc | Poly | Scalar) -> SeriesTrunc:
        if isinstance(g, SeriesTrunc):
            if g.ring != self.ring:
                raise StructuralError("series live in different rings")
            return g
        if isinstance(g, Poly):
            return SeriesTrunc(self.poly._other(g), self.precision)
        return SeriesTrunc(self.ring.coerce(g), self.precision)

    def __add__(self, g):
        g = self._coerce(g)
        return SeriesTrunc(self.poly + g.poly, min(self.precision, g.precision))

    __radd__ = __add__

    def __sub__(self, g):
        g = self._coerce(g)
        return SeriesTrunc(self.poly - g.poly, min(self.precision, g.precision))

    def __rsub__(self, g):
        return (-self) + g

    def __neg__(self):
        return SeriesTrunc(-self.poly, self.precision)

    def __mul__(self, g):
        g = self._coerce(g)
        n = min(self.precision, g.precision)
        return SeriesTrunc(self.poly.mul_trunc(g.poly, n), n)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return SeriesTrunc(self.poly.pow_trunc(k, self.precision), self.precision)

    def __eq__(self, g: object) -> bool:
        if not isinstance(g, SeriesTrunc):
            return NotImplemented
        return self.precision == g.precision and self.poly == g.poly

    def __hash__(self) -> int:
        return hash((self.poly, self.precision))

    def ord(self) -> int | AtLeast:
        o = self.poly.ord()
        return AtLeast(self.precision) if o == math.inf else int(o)

    def is_zero(self) -> bool:
        """True when the series vanishes to its full precision."""
        return self.poly.is_zero()

    def compose(self, assignment: Mapping[str, SeriesTrunc | Poly], keep_unassigned: bool = True) -> SeriesTrunc:
        """Substitute series with zero constant term; precision is preserved."""
        polys = {}
        prec = self.precision
        ring = None
        for k, v in assignment.items():
            if isinstance(v, SeriesTrunc):
                if v.poly.constant_term():
                    raise PreconditionError("substituted series must have zero constant term")
                polys[k] = v.poly
                # order >= 1 images known mod deg N keep the result known mod deg N
                prec = min(prec, v.precision)
                ring = v.ring
            else:
                polys[k] = v
                ring = v.ring
        out = self.poly.substitute(polys, ring=ring or self.ring, precision=prec, keep_unassigned=keep_unassigned)
        return SeriesTrunc(out, prec)

    def __str__(self) -> str:
        return f"{self.poly} + O(deg {self.precision})"


def series(f: Poly, precision: int) -> SeriesTrunc:
    return SeriesTrunc(f, precision)


def ord_of(f: Poly | SeriesTrunc) -> int | float | AtLeast:
    return f.ord()


# ---------------------------------------------------------------- implicit solves


def _drop_ring(ring: PolyRing, unknowns: Sequence[str]) -> PolyRing:
    for u in unknowns:
        ring.index(u)
    return PolyRing(ring.p, [nm for nm in ring.names if nm not in set(unknowns)])


def implicit_solve_system(
    relations: Sequence[Poly],
    unknowns: Sequence[str],
    precision: int,
    max_iterations: int | None = None,
) -> list[SeriesTrunc]:
    """Solve ``F(Y, knowns) = 0`` for ``Y`` near the origin as truncated series.

    The constant Jacobian ``J0 = dF/dY (0)`` must be invertible. The iteration
    ``Y <- Y - J0^{-1} F(Y)`` starts at ``Y = 0`` and gains at least one
    degree of accuracy per step; every step is checked for that gain and the
    result is back-substituted before it is returned.
    """
    if len(relations) != len(unknowns) or not relations:
        raise PreconditionError("need as many relations as unknowns")
    ring = relations[0].ring
    for f in relations:
        if f.ring != ring:
            raise StructuralError("relations must share one ring")
    if precision < 1:
        raise DomainError("precision must be positive")
    p = ring.p
    m = len(unknowns)
    known = _drop_ring(ring, unknowns)
    origin = {nm: 0 for nm in ring.names}
    for f in relations:
        if f.constant_term():
            raise PreconditionError("relation does not vanish at the origin")
    j0 = np.array(
        [[f.derivative(y).substitute(origin, ring=known).constant_term() for y in unknowns] for f in relations],
        dtype=np.int64,
    )
    try:
        j0inv = linalg.inverse(j0, p)
    except SingularError:
        raise SingularError("relations cannot be solved for the unknowns at first order") from None
    current = [known.zero() for _ in range(m)]

    def residuals(vals: list[Poly]) -> list[Poly]:
        assign: dict[str, Poly] = {y: v for y, v in zip(unknowns, vals)}
        for nm in known.names:
            assign[nm] = known.var(nm)
        return [f.substitute(assign, ring=known, precision=precision) for f in relations]

    res = residuals(current)
    last = min(r.ord() for r in res)
    limit = max_iterations if max_iterations is not None else precision + 2
    steps = 0
    while any(res):
        steps += 1
        if steps > limit:
            raise NonContractiveError("iteration limit reached before convergence")
        nxt = []
        for i in range(m):
            upd = current[i]
            for j in range(m):
                c = int(j0inv[i, j])
                if c:
                    upd = upd - res[j].scale(c)
            nxt.append(upd)
        current = nxt
        res = residuals(current)
        o = min(r.ord() for r in res)
        if o <= last:
            raise NonContractiveError(f"no precision gain: residual order stayed at {o}")
        last = o
    check = residuals(current)
    assert not any(check), "back-substitution failed"
    return [SeriesTrunc(v, precision) for v in current]


def implicit_solve(relation: Poly, unknown: str, precision: int) -> SeriesTrunc:
    """Single-relation form of :func:`implicit_solve_system`."""
    return implicit_solve_system([relation], [unknown], precision)[0]
