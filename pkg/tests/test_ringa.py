from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_poly
from modram.errors import DomainError, PreconditionError, StructuralError
from modram.poly import PolyRing
from modram.ringa import (
    ActionSpec,
    act,
    classify_element,
    express_x_in_u,
    fixed_ideal_report,
    norm,
    norm_length,
    trace,
)

SPEC_22 = ActionSpec(2, ["x1", "x2"])
SPEC_32 = ActionSpec(3, ["x1 + x2^2", "x2"], "1 + x1")
SPEC_23 = ActionSpec(2, ["x1", "x2", "x3"])


def random_element(spec: ActionSpec, rng: random.Random):
    out = spec.zero()
    for e in spec.basis_exponents():
        if rng.random() < 0.6:
            out = out + spec.scalar(random_poly(spec.R, rng, 2, 2)) * spec.basis_monomial(e)
    return out


class TestConstruction:
    def test_bad_data(self):
        with pytest.raises(DomainError):
            ActionSpec(2, ["x1", "0"])
        with pytest.raises(DomainError):
            ActionSpec(2, ["x1 + 1", "x2"])
        with pytest.raises(DomainError):
            ActionSpec(2, ["x1", "x2"], "0")
        with pytest.raises(DomainError):
            ActionSpec(4, ["x1"])

    def test_mixing_algebras(self):
        other = ActionSpec(2, ["x1", "x2 + x1^2"])
        with pytest.raises(StructuralError):
            SPEC_22.u(1) + other.u(1)


class TestReduction:
    def test_defining_relation(self):
        for spec in (SPEC_22, SPEC_32):
            p = spec.p
            for i in range(1, spec.n + 1):
                lead = spec.scalar(spec.mua[i - 1] ** (p - 1))
                assert spec.u(i) ** (p - 1) * spec.u(i) == lead * spec.u(i) + spec.x(i)

    def test_char_two_square(self):
        assert SPEC_22.u(1) * SPEC_22.u(1) == SPEC_22.x(1) * SPEC_22.u(1) + SPEC_22.x(1)

    def test_one_is_neutral(self):
        rng = random.Random(1)
        f = random_element(SPEC_32, rng)
        assert SPEC_32.one() * f == f

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10**6))
    def test_associative_commutative(self, seed):
        rng = random.Random(seed)
        spec = SPEC_32
        f, g, h = (random_element(spec, rng) for _ in range(3))
        assert (f * g) * h == f * (g * h)
        assert f * g == g * f

    def test_reduced_form_exponents(self):
        rng = random.Random(2)
        f = random_element(SPEC_32, rng) ** 3
        assert f.coeffs and all(max(e) < 3 for e in f.coeffs)


class TestAction:
    def test_generators(self):
        for spec in (SPEC_22, SPEC_32):
            for i in range(1, spec.n + 1):
                e = spec.unit_vector(i)
                assert act(e, spec.u(i), spec) == spec.u(i) + spec.scalar(spec.mua[i - 1])
                f = spec.u(1) * spec.u(spec.n) + spec.x(1)
                assert act((0,) * spec.n, f, spec) == f

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 10**6))
    def test_homomorphism(self, seed):
        rng = random.Random(seed)
        spec = SPEC_32
        f, g = random_element(spec, rng), random_element(spec, rng)
        h = tuple(rng.randrange(3) for _ in range(2))
        k = tuple(rng.randrange(3) for _ in range(2))
        assert act(h, f * g, spec) == act(h, f, spec) * act(h, g, spec)
        assert act(h, f + g, spec) == act(h, f, spec) + act(h, g, spec)
        hk = tuple((a + b) % 3 for a, b in zip(h, k))
        assert act(h, act(k, f, spec), spec) == act(hk, f, spec)

    def test_order_p(self):
        spec = SPEC_32
        f = spec.u(1) ** 2 * spec.u(2) + spec.u(2)
        g = f
        for _ in range(3):
            g = act(spec.diagonal(), g, spec)
        assert g == f


class TestNormTrace:
    def test_norm_of_u(self):
        for spec in (SPEC_22, SPEC_32, SPEC_23):
            for i in range(1, spec.n + 1):
                assert norm(spec.u(i), spec.diagonal(), spec) == spec.x(i)

    def test_trace_of_u(self):
        for i in range(1, 3):
            assert trace(SPEC_32.u(i), SPEC_32.diagonal(), SPEC_32).is_zero()
        spec = ActionSpec(2, ["x1"], "1 + x1")
        assert trace(spec.u(1), spec.diagonal(), spec) == spec.scalar(spec.mua[0])

    def test_invariance(self):
        rng = random.Random(3)
        spec = SPEC_32
        f = random_element(spec, rng)
        for out in (norm(f, spec.diagonal(), spec), trace(f, spec.diagonal(), spec)):
            assert act(spec.diagonal(), out, spec) == out

    def test_zero_h(self):
        with pytest.raises(PreconditionError):
            norm(SPEC_22.u(1), (0, 0), SPEC_22)


class TestNormalForm:
    def test_one_variable_char_two(self):
        spec = ActionSpec(2, ["x1"])
        (x,) = express_x_in_u(spec, 9)
        u = spec.U.var(0)
        assert x.poly == sum((u**k for k in range(2, 9)), spec.U.zero())

    def test_starts_with_p_th_power(self):
        spec = ActionSpec(3, ["x1", "x2"])
        xs = express_x_in_u(spec, 8)
        for i, x in enumerate(xs):
            assert x.ord() == 3 and x.poly.homogeneous_part(3) == spec.U.var(i) ** 3

    def test_low_precision(self):
        with pytest.raises(PreconditionError):
            express_x_in_u(SPEC_32, 3)

    @pytest.mark.parametrize("p, n", [(2, 2), (3, 2), (2, 3)])
    def test_norm_length_is_degree(self, p, n):
        spec = ActionSpec(p, [f"x{i}" for i in range(1, n + 1)])
        res = norm_length(spec)
        assert res.is_finite and res.length == p**n


class TestFixedIdeal:
    def test_char_two(self):
        rep = fixed_ideal_report(SPEC_22)
        assert rep.passed and rep.containment and rep.length.length == 4

    def test_char_three(self):
        rep = fixed_ideal_report(ActionSpec(3, ["x1", "x2"]))
        assert rep.passed and rep.length.length % 9 == 0

    def test_non_sop_refused(self):
        spec = ActionSpec(2, ["x1", "x1*x2"])
        with pytest.raises(PreconditionError):
            fixed_ideal_report(spec, cap=12)


class TestClassify:
    def test_pseudo_reflection(self):
        c = classify_element((1, 0), SPEC_22)
        assert c.kind == "pseudo-reflection" and c.support == (1,) and c.ideal == (SPEC_22.mua[0],)

    def test_diagonal_non_unit_mu(self):
        spec = ActionSpec(3, ["x1", "x2"], "x1 + x2")
        c = classify_element(spec.diagonal(), spec)
        assert c.kind == "generalized-reflection" and c.support == (1, 2)

    def test_diagonal_unit_mu(self):
        c = classify_element(SPEC_22.diagonal(), SPEC_22)
        assert c.kind == "free-acting"

    def test_zero(self):
        with pytest.raises(PreconditionError):
            classify_element((0, 0), SPEC_22)
