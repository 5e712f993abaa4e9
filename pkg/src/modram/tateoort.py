"""Tate-Oort group schemes of order p in characteristic p, and their torsors.

``G_{alpha,beta}`` has coordinate algebra ``base[T]/(T^p - alpha T)`` with
``alpha beta = 0`` and group law

    s * s' = s + s' + beta * sum_{i=1}^{p-1} c_i s^i s'^(p-i),   c_i = binom(p, i)/p mod p.

Identities are checked in ``base[s1, s2, ...]`` modulo ``s_k^p -> alpha s_k``
and, for symbolic groups, modulo the monomial ``alpha*beta``.  The leading
terms of these relations are pairwise coprime, so the rewriting is confluent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import PreconditionError, StructuralError
from .gfp import check_prime, dp_coeff, inv_mod
from .poly import Poly, PolyRing
from .report import Check, Report, Verdict


def _divides(m: tuple[int, ...], e: tuple[int, ...]) -> bool:
    return all(x <= y for x, y in zip(m, e))


@dataclass
class TateOortGroup:
    """``G_{alpha,beta}`` over a polynomial base, optionally modulo monomial relations."""

    base: PolyRing
    alpha: Poly
    beta: Poly
    killed: tuple[tuple[int, ...], ...] = ()
    _rings: dict[int, PolyRing] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self.alpha = self.base.coerce(self.alpha)
        self.beta = self.base.coerce(self.beta)
        if self.kill(self.alpha * self.beta):
            raise PreconditionError("alpha*beta must vanish")

    @property
    def p(self) -> int:
        return self.base.p

    @classmethod
    def symbolic(cls, p: int) -> TateOortGroup:
        """Generic group over ``F_p[alpha, beta]/(alpha beta)``."""
        check_prime(p)
        base = PolyRing(p, ["alpha", "beta"])
        return cls(base, base.var("alpha"), base.var("beta"), ((1, 1),))

    @classmethod
    def over(cls, p: int, names: Sequence[str], alpha: str | Poly, beta: str | Poly) -> TateOortGroup:
        base = PolyRing(p, names)
        a = base.parse(alpha) if isinstance(alpha, str) else alpha
        b = base.parse(beta) if isinstance(beta, str) else beta
        return cls(base, a, b)

    def kill(self, f: Poly) -> Poly:
        """Drop monomials divisible by a killed base monomial."""
        if not self.killed:
            return f
        nb = self.base.nvars
        return f.ring.poly({e: c for e, c in f._t.items() if not any(_divides(m, e[:nb]) for m in self.killed)})

    def ring(self, k: int) -> PolyRing:
        """``base[s1, ..., sk]``."""
        if k not in self._rings:
            self._rings[k] = PolyRing(self.p, list(self.base.names) + [f"s{i}" for i in range(1, k + 1)])
        return self._rings[k]

    def reduce(self, f: Poly) -> Poly:
        """Normal form modulo ``s_i^p - alpha s_i`` and the killed monomials."""
        ring = f.ring
        nb = self.base.nvars
        p = self.p
        alpha_terms = list(self.alpha._t.items())
        pending = dict(self.kill(f)._t)
        done: dict[tuple[int, ...], int] = {}
        while pending:
            nxt: dict[tuple[int, ...], int] = {}
            for e, c in pending.items():
                i = next((j for j in range(nb, ring.nvars) if e[j] >= p), None)
                if i is None:
                    v = (done.get(e, 0) + c) % p
                    if v:
                        done[e] = v
                    else:
                        done.pop(e, None)
                    continue
                for ea, ca in alpha_terms:
                    ne = [x + y for x, y in zip(e[:nb], ea)] + list(e[nb:])
                    ne[i] = e[i] - p + 1
                    t = tuple(ne)
                    nxt[t] = (nxt.get(t, 0) + c * ca) % p
            pending = {e: c for e, c in self.kill(ring.poly(nxt))._t.items()}
        return ring.poly(done)

    def star(self, f: Poly, g: Poly) -> Poly:
        """Group law applied to two elements of a coordinate ring, reduced."""
        p = self.p
        ring = f.ring
        beta = ring.coerce(self.beta)
        fp = [ring.one()]
        gp = [ring.one()]
        for _ in range(p - 1):
            fp.append(self.reduce(fp[-1] * f))
            gp.append(self.reduce(gp[-1] * g))
        d = ring.zero()
        for i in range(1, p):
            d = d + self.reduce(fp[i] * gp[p - i]).scale(dp_coeff(p, i))
        return self.reduce(f + g + beta * d)

    def star_polynomial(self) -> Poly:
        """The law ``s1 * s2`` as a polynomial of degree ``< p`` in each variable."""
        ring = self.ring(2)
        return self.star(ring.var("s1"), ring.var("s2"))

    def inverse(self, f: Poly) -> Poly:
        """The ``(p-1)``-fold star of ``f`` (the group is killed by p)."""
        out = f
        for _ in range(self.p - 2):
            out = self.star(out, f)
        return out

    def power(self, f: Poly, k: int) -> Poly:
        out = self.reduce(f)
        for _ in range(k - 1):
            out = self.reduce(out * f)
        return out


def star(s: Poly, t: Poly, group: TateOortGroup) -> Poly:
    return group.star(s, t)


def _residual_check(check_id: str, about: str, residual: Poly) -> Check:
    ok = residual.is_zero()
    return Check(check_id, about, Verdict.of(ok), None if ok else str(residual))


def _first_nonzero(*residuals: Poly) -> Poly:
    return next((r for r in residuals if r), residuals[0])


def verify_group_axioms(group: TateOortGroup) -> Report:
    """Closure, associativity, neutrality, inverses and commutativity as exact identities."""
    p = group.p
    ring = group.ring(3)
    s1, s2, s3 = (ring.var(f"s{i}") for i in (1, 2, 3))
    rep = Report(f"Tate-Oort axioms p={p}")
    alpha = ring.coerce(group.alpha)
    prod = group.star(s1, s2)
    rep.add(_residual_check("closure", "the law respects T^p = alpha*T",
                            group.reduce(group.power(prod, p) - alpha * prod)))
    left = group.star(prod, s3)
    right = group.star(s1, group.star(s2, s3))
    rep.add(_residual_check("associativity", "(s1*s2)*s3 = s1*(s2*s3)", group.reduce(left - right)))
    zero = ring.zero()
    rep.add(_residual_check("neutral", "s*0 = 0*s = s",
                            _first_nonzero(group.reduce(group.star(s1, zero) - s1),
                                           group.reduce(group.star(zero, s1) - s1))))
    inv = group.inverse(s1)
    rep.add(_residual_check("inverse", "the (p-1)-fold star is a two-sided inverse",
                            _first_nonzero(group.star(s1, inv), group.star(inv, s1))))
    rep.add(_residual_check("commutativity", "s1*s2 = s2*s1", group.reduce(prod - group.star(s2, s1))))
    deg_ok = all(max(e[group.base.nvars:]) < p for e in group.star_polynomial()._t)
    rep.add(Check("degree-bound", "law has degree < p in each variable", Verdict.of(deg_ok)))
    return rep


@dataclass
class ScalingResult:
    group: TateOortGroup
    epsilon: int
    report: Report


def scaling_iso(epsilon: int, group: TateOortGroup) -> ScalingResult:
    """``G_{alpha,beta} -> G_{eps^(p-1) alpha, eps^(1-p) beta}``, ``T -> eps T``, with the hom check."""
    p = group.p
    eps = int(epsilon) % p
    if eps == 0:
        raise PreconditionError("epsilon must be invertible")
    e_up = pow(eps, p - 1, p)
    e_down = pow(inv_mod(eps, p), p - 1, p)
    target = TateOortGroup(group.base, group.alpha.scale(e_up), group.beta.scale(e_down), group.killed)
    ring = group.ring(2)
    s1, s2 = ring.var("s1"), ring.var("s2")
    lhs = group.star(s1, s2).scale(eps)
    rhs = target.star(s1.scale(eps), s2.scale(eps))
    rep = Report("scaling isomorphism")
    rep.add(_residual_check("scaling-hom", "eps*(s1*s2) = (eps*s1)*'(eps*s2)", group.reduce(lhs - rhs)))
    rel = group.reduce(s1**p - ring.coerce(group.alpha) * s1)
    img = group.reduce((s1.scale(eps)) ** p - ring.coerce(target.alpha) * s1.scale(eps))
    rep.add(_residual_check("scaling-algebra", "T -> eps*T carries T^p - alpha'T to eps^p (T^p - alpha T)",
                            img - rel.scale(pow(eps, p, p))))
    return ScalingResult(target, eps, rep)


# ---------------------------------------------------------------- torsors


@dataclass
class TorsorScheme:
    """``base[u]/(u^p - a^(p-1) u - b)`` with ``a != 0``."""

    base: PolyRing
    a: Poly
    b: Poly

    def __post_init__(self) -> None:
        self.a = self.base.coerce(self.a)
        self.b = self.base.coerce(self.b)
        if not self.a:
            raise PreconditionError("a must be nonzero")

    @property
    def p(self) -> int:
        return self.base.p

    def natural_group(self) -> TateOortGroup:
        return TateOortGroup(self.base, self.a ** (self.p - 1), self.base.zero())

    def ring(self, zs: int = 1) -> PolyRing:
        names = list(self.base.names) + [f"z{i}" for i in range(1, zs + 1)] + ["u"]
        return PolyRing(self.p, names)

    def reduce(self, f: Poly) -> Poly:
        """Modulo ``z_k^p -> a^(p-1) z_k`` and ``u^p -> a^(p-1) u + b``."""
        ring = f.ring
        p = self.p
        c = ring.coerce(self.a ** (p - 1))
        b = ring.coerce(self.b)
        nb = self.base.nvars
        out = ring.zero()
        pending = f
        while pending:
            rest = {}
            done = {}
            for e, cf in pending._t.items():
                i = next((j for j in range(nb, ring.nvars) if e[j] >= p), None)
                if i is None:
                    done[e] = cf
                else:
                    rest[e] = cf
            out = out + ring.poly(done)
            if not rest:
                break
            new = ring.zero()
            for e, cf in rest.items():
                i = next(j for j in range(nb, ring.nvars) if e[j] >= p)
                lower = list(e)
                lower[i] -= p
                mono = ring.monomial(lower, cf)
                v = ring.var(ring.names[i])
                repl = c * v + (b if ring.names[i] == "u" else ring.zero())
                new = new + mono * repl
            pending = new
        return out


def _check_acting_group(torsor: TorsorScheme, group: TateOortGroup) -> None:
    if group.base != torsor.base:
        raise StructuralError("group and torsor live over different bases")
    if group.alpha != torsor.a ** (torsor.p - 1) or group.beta:
        raise StructuralError("the acting group must be G_{a^(p-1), 0}")


def torsor_action(torsor: TorsorScheme, group: TateOortGroup) -> Report:
    """The coaction ``u -> z + u`` and its axioms as exact identities."""
    _check_acting_group(torsor, group)
    p = torsor.p
    rep = Report("torsor action")
    ring = torsor.ring(2)
    u, z1, z2 = ring.var("u"), ring.var("z1"), ring.var("z2")
    c = ring.coerce(torsor.a ** (p - 1))
    b = ring.coerce(torsor.b)
    img = z1 + u
    well = torsor.reduce(img**p - c * img - b)
    rep.add(_residual_check("coaction-defined", "u -> z+u preserves u^p - a^(p-1)u - b", well))
    twice = img.substitute({"u": z2 + u}, keep_unassigned=True)
    # group law with beta = 0 is addition
    lawful = (z1 + z2) + u
    rep.add(_residual_check("coaction-compatible", "acting by z1 then z2 equals acting by z1*z2",
                            torsor.reduce(twice - lawful)))
    neutral = img.substitute({"z1": ring.zero()}, keep_unassigned=True) - u
    rep.add(_residual_check("coaction-neutral", "z = 0 acts trivially", neutral))
    return rep


def _poly_det(mat: list[list[Poly]]) -> Poly:
    """Fraction-free (Bareiss) determinant, preferring constant pivots."""
    m = [row[:] for row in mat]
    size = len(m)
    if size == 0:
        raise PreconditionError("empty matrix")
    ring = m[0][0].ring
    sign = 1
    prev = ring.one()
    for k in range(size - 1):
        best = None
        for i in range(k, size):
            for j in range(k, size):
                e = m[i][j]
                if e:
                    score = 0 if e.is_constant() else 1 + len(e)
                    if best is None or score < best[0]:
                        best = (score, i, j)
                    if score == 0:
                        break
            if best is not None and best[0] == 0:
                break
        if best is None:
            return ring.zero()
        _, pi, pj = best
        if pi != k:
            m[k], m[pi] = m[pi], m[k]
            sign = -sign
        if pj != k:
            for row in m:
                row[k], row[pj] = row[pj], row[k]
            sign = -sign
        piv = m[k][k]
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                num = piv * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = num.divexact(prev) if not prev.is_constant() else num.scale(inv_mod(prev.constant_term(), ring.p))
            m[i][k] = ring.zero()
        prev = piv
    return m[size - 1][size - 1].scale(sign)


def torsor_matrix(torsor: TorsorScheme, group: TateOortGroup) -> list[list[Poly]]:
    """Matrix of ``u^i (x) u^j -> (z+u)^i u^j`` in the bases ``u^i u^j`` and ``z^k u^l``."""
    _check_acting_group(torsor, group)
    p = torsor.p
    ring = torsor.ring(1)
    u, z = ring.var("u"), ring.var("z1")
    nb = torsor.base.nvars
    zi, ui = ring.index("z1"), ring.index("u")
    rows = []
    for i in range(p):
        for j in range(p):
            img = torsor.reduce((z + u) ** i * u**j)
            row = [torsor.base.zero() for _ in range(p * p)]
            buckets: dict[int, dict] = {}
            for e, c in img._t.items():
                col = e[zi] * p + e[ui]
                buckets.setdefault(col, {})[e[:nb]] = c
            for col, terms in buckets.items():
                row[col] = torsor.base.poly(terms)
            rows.append(row)
    return rows


def torsor_determinant(torsor: TorsorScheme, group: TateOortGroup | None = None) -> Poly:
    """Determinant of ``B (x) B -> O(G) (x) B``; a unit exactly when B is a torsor."""
    group = group or torsor.natural_group()
    return _poly_det(torsor_matrix(torsor, group))
