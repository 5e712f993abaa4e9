"""Invariant elements of A and their relations, checked as exact identities.

Covers minors ``z_ij = a_i u_j - a_j u_i``, the elements ``z_s`` attached to a
nonzero ``s`` in F_p^n, trace elements of relevant tuples, the closed-form
embedding dimensions, and graded generation of the vector invariants of
``B = F_p[u, a]`` under ``u_i -> u_i + a_i``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg
from .errors import DomainError, PreconditionError
from .gfp import binom
from .local import monomials_of_degree
from .poly import Poly, PolyRing
from .report import Check, Report, Verdict
from .ringa import ActionSpec, AElement, act, trace

DEFAULT_DEGREE_CAP = 8


def _check(check_id: str, about: str, residual: AElement | Poly, **details) -> Check:
    ok = residual.is_zero()
    return Check(check_id, about, Verdict.of(ok), None if ok else str(residual), dict(details))


# ---------------------------------------------------------------- minors


def minor(i: int, j: int, spec: ActionSpec) -> AElement:
    """``z_ij = a_i u_j - a_j u_i`` (1-based indices)."""
    if i == j:
        raise DomainError("minor needs i != j")
    for k in (i, j):
        if not 1 <= k <= spec.n:
            raise DomainError(f"index {k} out of range")
    ai = spec.scalar(spec.a[i - 1])
    aj = spec.scalar(spec.a[j - 1])
    return ai * spec.u(j) - aj * spec.u(i)


def verify_minor_relations(spec: ActionSpec) -> Report:
    """Both families of minor relations, for every index pair and triple."""
    p = spec.p
    rep = Report("minor relations")
    mu = spec.scalar(spec.mu)
    a = [spec.scalar(ai) for ai in spec.a]
    z = {}
    for i, j in itertools.combinations(range(1, spec.n + 1), 2):
        z[i, j] = minor(i, j, spec)
        lhs = z[i, j] ** p
        rhs = (mu * a[i - 1] * a[j - 1]) ** (p - 1) * z[i, j] + a[i - 1] ** p * spec.x(j) - a[j - 1] ** p * spec.x(i)
        rep.add(_check(f"minor-power-{i}{j}", "p-th power relation of a minor", lhs - rhs, indices=[i, j]))
    for i, j, k in itertools.combinations(range(1, spec.n + 1), 3):
        res = a[i - 1] * z[j, k] - a[j - 1] * z[i, k] + a[k - 1] * z[i, j]
        rep.add(_check(f"minor-syzygy-{i}{j}{k}", "linear syzygy among minors", res, indices=[i, j, k]))
    for (i, j), zij in z.items():
        rep.add(_check(f"minor-invariant-{i}{j}", "minor fixed by the diagonal action",
                       act(spec.diagonal(), zij, spec) - zij))
    return rep


# ---------------------------------------------------------------- z_s


@dataclass
class ZsResult:
    s: tuple[int, ...]
    z: AElement
    relation: Poly
    residual: AElement
    stabilizer: list[tuple[int, ...]]
    expected_stabilizer: list[tuple[int, ...]]

    @property
    def relation_holds(self) -> bool:
        return self.residual.is_zero()

    @property
    def stabilizer_matches(self) -> bool:
        return self.stabilizer == self.expected_stabilizer

    @property
    def passed(self) -> bool:
        return self.relation_holds and self.stabilizer_matches


def z_s_element(s: Sequence[int], spec: ActionSpec) -> AElement:
    """``z_s = sum_{s_i != 0} s_i alpha_i u_i`` with ``alpha_i = prod_{j != i, s_j != 0} a_j``."""
    s = spec.group_vector(s)
    supp = [i for i, v in enumerate(s) if v]
    if not supp:
        raise PreconditionError("s must be nonzero")
    out = spec.zero()
    for i in supp:
        alpha_i = spec.R.one()
        for j in supp:
            if j != i:
                alpha_i = alpha_i * spec.a[j]
        out = out + spec.scalar(alpha_i.scale(s[i])) * spec.u(i + 1)
    return out


def z_s_relation(s: Sequence[int], spec: ActionSpec) -> Poly:
    """``f_s(z) = z^p - (mu alpha)^(p-1) z - sum s_i alpha_i^p x_i`` in ``R[z]``."""
    s = spec.group_vector(s)
    supp = [i for i, v in enumerate(s) if v]
    ring = PolyRing(spec.p, list(spec.R.names) + ["z"])
    alpha = spec.R.one()
    for i in supp:
        alpha = alpha * spec.a[i]
    zv = ring.var("z")
    rel = zv**spec.p - ring.coerce(spec.mu * alpha) ** (spec.p - 1) * zv
    for i in supp:
        alpha_i = alpha.divexact(spec.a[i])
        rel = rel - ring.coerce(alpha_i**spec.p * spec.R.var(i)).scale(s[i])
    return rel


def evaluate_in_z(rel: Poly, z: AElement, spec: ActionSpec) -> AElement:
    """Evaluate a polynomial in ``R[z]`` at an element of A (Horner in z)."""
    deg = rel.degree_in("z")
    zi = rel.ring.index("z")
    coeffs: dict[int, Poly] = {}
    for e, c in rel._t.items():
        k = e[zi]
        ex = e[:zi] + e[zi + 1 :]
        coeffs[k] = coeffs.get(k, spec.R.zero()) + spec.R.monomial(ex, c)
    out = spec.zero()
    for k in range(deg, -1, -1):
        out = out * z + spec.scalar(coeffs.get(k, spec.R.zero()))
    return out


def z_s(s: Sequence[int], spec: ActionSpec) -> ZsResult:
    """``z_s``, its monic relation, the residual of the relation and the stabilizer."""
    s = spec.group_vector(s)
    z = z_s_element(s, spec)
    rel = z_s_relation(s, spec)
    residual = evaluate_in_z(rel, z, spec)
    stab, expected = [], []
    for h in itertools.product(range(spec.p), repeat=spec.n):
        if act(h, z, spec) == z:
            stab.append(h)
        if sum(a * b for a, b in zip(h, s)) % spec.p == 0:
            expected.append(h)
    return ZsResult(s, z, rel, residual, stab, expected)


# ---------------------------------------------------------------- relevant tuples and counts


def relevant_tuples(p: int, n: int) -> list[tuple[int, ...]]:
    """Exponent tuples in ``[0, p-1]^n`` with sum exceeding ``2p - 2``."""
    return [e for e in itertools.product(range(p), repeat=n) if sum(e) > 2 * p - 2]


def relevant_count_formula(p: int, n: int) -> int:
    return p**n - binom(2 * p + n - 2, n) + n * binom(p + n - 2, n)


def count_check(p: int, n: int) -> bool:
    return len(relevant_tuples(p, n)) == relevant_count_formula(p, n)


@dataclass(frozen=True)
class EdimRecord:
    p: int
    n: int
    edim_B: int
    edim_AG: int


def edim_formulas(p: int, n: int) -> EdimRecord:
    """Closed-form embedding dimensions of ``B^G`` and of ``A^G``."""
    count = relevant_count_formula(p, n)
    pairs = binom(n, 2)
    edim_b = 2 * n + pairs + count
    edim_ag = n + pairs + count
    assert edim_b - edim_ag == n
    return EdimRecord(p, n, edim_b, edim_ag)


def trace_element(eps: Sequence[int], spec: ActionSpec) -> AElement:
    """Trace of ``u^eps`` under the diagonal action."""
    if len(eps) != spec.n or any(not 0 <= e < spec.p for e in eps):
        raise DomainError(f"tuple {tuple(eps)} must have entries in [0, p-1]")
    return trace(spec.basis_monomial(eps), spec.diagonal(), spec)


# ---------------------------------------------------------------- graded invariants of B


def vector_ring(p: int, n: int) -> PolyRing:
    return PolyRing(p, [f"u{i}" for i in range(1, n + 1)] + [f"a{i}" for i in range(1, n + 1)])


def vector_sigma(f: Poly, n: int) -> Poly:
    ring = f.ring
    imgs = {}
    for i in range(1, n + 1):
        imgs[f"u{i}"] = ring.var(f"u{i}") + ring.var(f"a{i}")
        imgs[f"a{i}"] = ring.var(f"a{i}")
    return f.substitute(imgs, ring=ring)


def default_generators(p: int, n: int, include_traces: bool = True) -> list[tuple[str, Poly]]:
    """``a_i``, norms ``x_i = u_i^p - a_i^(p-1) u_i``, minors and relevant traces in B."""
    ring = vector_ring(p, n)
    u = [ring.var(f"u{i}") for i in range(1, n + 1)]
    a = [ring.var(f"a{i}") for i in range(1, n + 1)]
    gens: list[tuple[str, Poly]] = [(f"a{i + 1}", a[i]) for i in range(n)]
    gens += [(f"x{i + 1}", u[i] ** p - a[i] ** (p - 1) * u[i]) for i in range(n)]
    gens += [(f"z{i + 1}{j + 1}", a[i] * u[j] - a[j] * u[i]) for i, j in itertools.combinations(range(n), 2)]
    if include_traces:
        for eps in relevant_tuples(p, n):
            mono = ring.one()
            for i, e in enumerate(eps):
                mono = mono * u[i] ** e
            tr = ring.zero()
            cur = mono
            for _ in range(p):
                tr = tr + cur
                cur = vector_sigma(cur, n)
            gens.append(("t" + "".join(map(str, eps)), tr))
    return gens


@dataclass
class GradedInvariantTable:
    p: int
    n: int
    max_degree: int
    generator_names: list[str]
    invariant_dims: list[int]
    generated_dims: list[int]
    minimal: bool
    redundant: list[str] = field(default_factory=list)

    @property
    def first_defect(self) -> int | None:
        for d, (i, g) in enumerate(zip(self.invariant_dims, self.generated_dims)):
            if i != g:
                return d
        return None

    @property
    def generates(self) -> bool:
        return self.first_defect is None


def _vectorize(polys: Sequence[Poly], index: dict[tuple[int, ...], int]) -> np.ndarray:
    mat = np.zeros((len(polys), len(index)), dtype=np.int64)
    for r, f in enumerate(polys):
        for e, c in f._t.items():
            mat[r, index[e]] = c
    return mat


def _polys_from_rows(rows: np.ndarray, mons: Sequence[tuple[int, ...]], ring: PolyRing) -> list[Poly]:
    out = []
    for row in rows:
        nz = np.flatnonzero(row)
        out.append(ring.poly({mons[k]: int(row[k]) for k in nz}))
    return out


def invariant_dimension(p: int, n: int, d: int) -> int:
    """``dim (B^G)_d`` as the kernel dimension of ``sigma - id`` in degree ``d``."""
    ring = vector_ring(p, n)
    mons = monomials_of_degree(2 * n, d)
    index = {e: k for k, e in enumerate(mons)}
    cols = [vector_sigma(ring.monomial(e), n) - ring.monomial(e) for e in mons]
    if not cols:
        return 0
    mat = _vectorize(cols, index)
    return len(mons) - linalg.rank(mat, p)


def graded_invariant_table(
    p: int,
    n: int,
    max_degree: int,
    generators: Sequence[tuple[str, Poly]] | None = None,
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> GradedInvariantTable:
    """Compare ``dim (B^G)_d`` with the span of products of ``generators``, ``d <= max_degree``.

    Minimality is tested degree by degree: a generator of degree ``k`` is
    redundant when it lies in the span of products of two positive-degree
    elements of the generated subalgebra together with the other generators.
    """
    if max_degree > degree_cap:
        raise PreconditionError(f"degree {max_degree} exceeds the cap {degree_cap}")
    ring = vector_ring(p, n)
    gens = list(generators) if generators is not None else default_generators(p, n)
    degs = []
    for name, g in gens:
        g = ring.coerce(g)
        d = g.degree()
        if d < 1 or g.homogeneous_part(d) != g:
            raise PreconditionError(f"generator {name} is not homogeneous of positive degree")
        if vector_sigma(g, n) != g:
            raise PreconditionError(f"generator {name} is not invariant")
        degs.append(d)
    gpolys = [ring.coerce(g) for _, g in gens]
    inv_dims, gen_dims = [], []
    span_basis: dict[int, list[Poly]] = {0: [ring.one()]}
    redundant: list[str] = []
    for d in range(max_degree + 1):
        inv_dims.append(invariant_dimension(p, n, d))
        if d == 0:
            gen_dims.append(1)
            continue
        mons = monomials_of_degree(2 * n, d)
        index = {e: k for k, e in enumerate(mons)}
        decomposable: list[Poly] = []
        own: list[int] = []
        for k, (g, dg) in enumerate(zip(gpolys, degs)):
            if dg == d:
                own.append(k)
            elif dg < d:
                decomposable.extend(g * v for v in span_basis[d - dg])
        dec_mat = _vectorize(decomposable, index)
        own_mat = _vectorize([gpolys[k] for k in own], index)
        full = np.vstack([dec_mat, own_mat])
        basis = linalg.row_basis(full, p) if full.shape[0] else full
        span_basis[d] = _polys_from_rows(basis, mons, ring)
        gen_dims.append(basis.shape[0])
        if own:
            for k in own:
                others = [gpolys[j] for j in own if j != k]
                base = np.vstack([dec_mat, _vectorize(others, index)])
                r0 = linalg.rank(base, p) if base.shape[0] else 0
                r1 = linalg.rank(np.vstack([base, _vectorize([gpolys[k]], index)]), p)
                if r1 == r0:
                    redundant.append(gens[k][0])
    return GradedInvariantTable(
        p, n, max_degree, [nm for nm, _ in gens], inv_dims, gen_dims, not redundant, redundant
    )


# ---------------------------------------------------------------- identities in A


def _cheap_common_factor(a: Poly, b: Poly) -> bool:
    """Detects the obvious non-coprime cases: one divides the other or a shared variable."""
    for f, g in ((a, b), (b, a)):
        if not g.is_constant():
            try:
                f.divexact(g)
                return True
            except DomainError:
                pass
    shared = set(a.variables()) & set(b.variables())
    for v in shared:
        i = a.ring.index(v)
        if all(e[i] for e in a._t) and all(e[i] for e in b._t):
            return True
    return False


def hypersurface_check(a: Poly | str, b: Poly | str, mu: Poly | str | int, p: int) -> Report:
    """For ``z = a u2 - b u1``: ``z^p - (mu a b)^(p-1) z - a^p x2 + b^p x1 = 0`` in A."""
    spec = ActionSpec(p, [a, b], mu)
    z = minor(1, 2, spec)
    av, bv, muv = (spec.scalar(t) for t in (spec.a[0], spec.a[1], spec.mu))
    res = z**p - (muv * av * bv) ** (p - 1) * z - av**p * spec.x(2) + bv**p * spec.x(1)
    rep = Report("two-dimensional hypersurface relation")
    chk = _check("hypersurface", "z = a*u2 - b*u1 satisfies z^p - (mu*a*b)^(p-1)*z - a^p*x2 + b^p*x1 = 0", res,
                 a=str(spec.a[0]), b=str(spec.a[1]), mu=str(spec.mu), convention="z12 = a*u2 - b*u1")
    if _cheap_common_factor(spec.a[0], spec.a[1]):
        chk.details["warning"] = "a and b share a factor: the coprimality assumption fails (identity is formal)"
    rep.add(chk)
    return rep


def nonfactorial_product_check(alpha1: Poly | str, alpha2: Poly | str, mu: Poly | str | int = 1, p: int | None = None,
                               spec: ActionSpec | None = None) -> Report:
    """``alpha1^p x2 - alpha2^p x1 = prod_{i in F_p} (z12 - i mu alpha1 alpha2)`` in A."""
    if spec is None:
        if p is None:
            raise PreconditionError("need p or a spec")
        spec = ActionSpec(p, [alpha1, alpha2], mu)
    p = spec.p
    z = minor(1, 2, spec)
    c = spec.scalar(spec.mu * spec.a[0] * spec.a[1])
    prod = spec.one()
    for i in range(p):
        prod = prod * (z - c * i)
    lhs = spec.scalar(spec.a[0]) ** p * spec.x(2) - spec.scalar(spec.a[1]) ** p * spec.x(1)
    rep = Report("non-factoriality product identity")
    rep.add(_check("product-identity", "alpha1^p*x2 - alpha2^p*x1 factors into p translates of z12",
                   lhs - prod, factors=p))
    return rep


def rational_factorization_check(p: int) -> Report:
    """``y x^p - x y^p = x y prod_{i in F_p^*} (x - i y)`` in ``F_p[x, y]``."""
    ring = PolyRing(p, ["x", "y"])
    x, y = ring.gens()
    rhs = x * y
    for i in range(1, p):
        rhs = rhs * (x - y.scale(i))
    rep = Report("factorization of y*x^p - x*y^p")
    rep.add(_check("rational-factorization", "y*x^p - x*y^p is a product of p+1 linear forms",
                   y * x**p - x * y**p - rhs, factors=p + 1))
    return rep


def reflection_deltas(spec: ActionSpec) -> Report:
    """Differences ``act(e_k, z_ij) - z_ij`` and, at ``p = 2, n = 3``, ``act(e_1, t) - t``.

    For the trace ``t = u1 u2 u3 + sigma(u1 u2 u3)`` the difference is
    ``mu^2 a1 z23 + mu^3 a1 a2 a3``; at ``mu = 1`` this is ``a1 z23 + a1 a2 a3``.
    """
    rep = Report("generalized reflection deltas")
    mu = spec.scalar(spec.mu)
    a = [spec.scalar(ai) for ai in spec.a]
    for i, j in itertools.combinations(range(1, spec.n + 1), 2):
        zij = minor(i, j, spec)
        for k in range(1, spec.n + 1):
            delta = act(spec.unit_vector(k), zij, spec) - zij
            if k == i:
                expected = -(mu * a[i - 1] * a[j - 1])
            elif k == j:
                expected = mu * a[i - 1] * a[j - 1]
            else:
                expected = spec.zero()
            rep.add(_check(f"delta-e{k}-z{i}{j}", "translate of a minor by a coordinate reflection",
                           delta - expected))
    if spec.p == 2 and spec.n == 3:
        t = trace_element((1, 1, 1), spec)
        delta = act(spec.unit_vector(1), t, spec) - t
        expected = mu**2 * a[0] * minor(2, 3, spec) + mu**3 * a[0] * a[1] * a[2]
        rep.add(_check("delta-e1-t", "translate of the trace element t by the first reflection",
                       delta - expected))
    return rep
