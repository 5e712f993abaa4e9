"""The skew group ring A*G for G generated by the diagonal action.

An element is ``sum_i X_i sigma^i`` with ``X_i`` in A; multiplication follows
``(X sigma^i)(Y sigma^j) = X sigma^i(Y) sigma^(i+j)``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .errors import StructuralError
from .ringa import ActionSpec, AElement, act
from .report import Check, Report, Verdict


@dataclass(frozen=True, eq=False)
class SkewElement:
    spec: ActionSpec
    parts: tuple[AElement, ...]

    def __post_init__(self) -> None:
        if len(self.parts) != self.spec.p:
            raise StructuralError("need one A-coefficient per group power")

    @classmethod
    def from_parts(cls, spec: ActionSpec, parts: dict[int, AElement]) -> SkewElement:
        out = [spec.zero() for _ in range(spec.p)]
        for i, x in parts.items():
            out[i % spec.p] = out[i % spec.p] + x
        return cls(spec, tuple(out))

    @classmethod
    def basis(cls, spec: ActionSpec, e: Sequence[int], i: int) -> SkewElement:
        return cls.from_parts(spec, {i: spec.basis_monomial(e)})

    @classmethod
    def of(cls, x: AElement, i: int = 0) -> SkewElement:
        return cls.from_parts(x.spec, {i: x})

    @classmethod
    def sigma(cls, spec: ActionSpec, i: int = 1) -> SkewElement:
        return cls.from_parts(spec, {i: spec.one()})

    @property
    def coeffs(self) -> dict[tuple[tuple[int, ...], int], object]:
        out = {}
        for i, x in enumerate(self.parts):
            for e, c in x.coeffs.items():
                out[(e, i)] = c
        return out

    def __add__(self, other: SkewElement) -> SkewElement:
        _same(self, other)
        return SkewElement(self.spec, tuple(a + b for a, b in zip(self.parts, other.parts)))

    def __sub__(self, other: SkewElement) -> SkewElement:
        _same(self, other)
        return SkewElement(self.spec, tuple(a - b for a, b in zip(self.parts, other.parts)))

    def __mul__(self, other: SkewElement) -> SkewElement:
        return skew_mul(self, other, self.spec)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SkewElement):
            return NotImplemented
        return self.spec == other.spec and all(a == b for a, b in zip(self.parts, other.parts))

    def __hash__(self) -> int:
        return hash(tuple(hash(x) for x in self.parts))

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.parts)

    def __str__(self) -> str:
        terms = [f"({x})*sigma^{i}" for i, x in enumerate(self.parts) if x]
        return " + ".join(terms) if terms else "0"


def _same(x: SkewElement, y: SkewElement) -> None:
    if x.spec is not y.spec and x.spec != y.spec:
        raise StructuralError("skew elements over different algebras")


def _power_vector(spec: ActionSpec, i: int) -> tuple[int, ...]:
    return tuple(i % spec.p for _ in range(spec.n))


def skew_mul(x: SkewElement, y: SkewElement, spec: ActionSpec) -> SkewElement:
    _same(x, y)
    if x.spec != spec:
        raise StructuralError("spec mismatch in skew_mul")
    p = spec.p
    out = [spec.zero() for _ in range(p)]
    for i, xi in enumerate(x.parts):
        if not xi:
            continue
        for j, yj in enumerate(y.parts):
            if not yj:
                continue
            out[(i + j) % p] = out[(i + j) % p] + xi * act(_power_vector(spec, i), yj, spec)
    return SkewElement(spec, tuple(out))


def phi(x: SkewElement, spec: ActionSpec | None = None):
    """The R-coefficient of ``u^(p-1, ..., p-1) sigma^0``."""
    spec = spec or x.spec
    return x.parts[0].coefficient((spec.p - 1,) * spec.n)


def basis_elements(spec: ActionSpec) -> list[tuple[tuple[tuple[int, ...], int], SkewElement]]:
    return [((e, i), SkewElement.basis(spec, e, i)) for e in spec.basis_exponents() for i in range(spec.p)]


def random_skew_element(spec: ActionSpec, rng: random.Random, degree_cap: int, density: float = 0.5) -> SkewElement:
    """A random element whose R-coefficients have total degree at most ``degree_cap``."""
    n, p = spec.n, spec.p
    parts: dict[int, AElement] = {}
    for i in range(p):
        acc = spec.zero()
        for e in spec.basis_exponents():
            if rng.random() >= density:
                continue
            coeff = spec.R.zero()
            for _ in range(rng.randint(1, 3)):
                d = rng.randint(0, degree_cap)
                ex = [0] * n
                for _ in range(d):
                    ex[rng.randrange(n)] += 1
                coeff = coeff + spec.R.monomial(ex, rng.randrange(1, p))
            acc = acc + spec.scalar(coeff) * spec.basis_monomial(e)
        parts[i] = acc
    return SkewElement.from_parts(spec, parts)


def check_trace_symmetry(spec: ActionSpec, degree_cap: int = 2, sample_count: int = 100, seed: int = 0) -> Report:
    """``phi(xy) = phi(yx)`` on all basis pairs and on seeded random pairs."""
    rep = Report("trace form symmetry")
    basis = basis_elements(spec)
    bad = None
    for (kx, x), (ky, y) in itertools.product(basis, repeat=2):
        if phi(x * y) != phi(y * x):
            bad = (kx, ky)
            break
    rep.add(Check("phi-basis-sweep", "phi(xy) = phi(yx) for all basis pairs", Verdict.of(bad is None),
                  None if bad is None else str(bad), {"pairs": len(basis) ** 2}))
    rng = random.Random(seed)
    bad = None
    for k in range(sample_count):
        x = random_skew_element(spec, rng, degree_cap)
        y = random_skew_element(spec, rng, degree_cap)
        if phi(x * y) != phi(y * x):
            bad = k
            break
    rep.add(Check("phi-random-pairs", "phi(xy) = phi(yx) for random pairs", Verdict.of(bad is None),
                  None if bad is None else f"sample {bad}", {"samples": sample_count, "seed": seed,
                                                             "degree_cap": degree_cap}))
    sig = SkewElement.sigma(spec)
    central = all((SkewElement.of(spec.x(i)) * sig) == (sig * SkewElement.of(spec.x(i))) for i in range(1, spec.n + 1))
    rep.add(Check("norms-central", "x_i sigma = sigma x_i", Verdict.of(central)))
    return rep


def pairing_matrix_mod_m(spec: ActionSpec) -> np.ndarray:
    """``M[z][y]`` = constant term of ``phi(z y)`` over the reduced basis."""
    basis = basis_elements(spec)
    size = len(basis)
    mat = np.zeros((size, size), dtype=np.int64)
    for r, (_, z) in enumerate(basis):
        for c, (_, y) in enumerate(basis):
            mat[r, c] = phi(z * y).constant_term()
    return mat


def check_pairing_nondegenerate_mod_m(spec: ActionSpec) -> Report:
    rep = Report("trace pairing modulo the maximal ideal")
    mat = pairing_matrix_mod_m(spec)
    rk = linalg.rank(mat, spec.p)
    rep.add(Check("pairing-invertible", "pairing matrix on A*G mod m is invertible",
                  Verdict.of(rk == mat.shape[0]), None if rk == mat.shape[0] else f"rank {rk}",
                  {"size": mat.shape[0], "rank": rk}))
    return rep
