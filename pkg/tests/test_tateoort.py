from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import modram.tateoort as tateoort_module
from conftest import random_poly
from modram.errors import PreconditionError, StructuralError
from modram.poly import PolyRing
from modram.tateoort import (
    TateOortGroup,
    TorsorScheme,
    scaling_iso,
    star,
    torsor_action,
    torsor_determinant,
    verify_group_axioms,
)


class TestLaw:
    def test_additive_when_beta_zero(self):
        g = TateOortGroup.over(3, ["x"], "x", "0")
        ring = g.ring(2)
        assert g.star_polynomial() == ring.var("s1") + ring.var("s2")

    def test_char_two(self):
        g = TateOortGroup.symbolic(2)
        assert str(g.star_polynomial()) == "beta*s1*s2 + s1 + s2"

    def test_char_three(self):
        g = TateOortGroup.symbolic(3)
        ring = g.ring(2)
        beta, s1, s2 = ring.var("beta"), ring.var("s1"), ring.var("s2")
        assert g.star_polynomial() == s1 + s2 + beta * (s1**2 * s2 + s1 * s2**2)

    def test_alpha_beta_must_vanish(self):
        with pytest.raises(PreconditionError):
            TateOortGroup.over(3, ["x"], "x", "x")

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 10**6))
    def test_commutes_on_random_elements(self, seed):
        rng = random.Random(seed)
        g = TateOortGroup.over(5, ["x"], "0", "1 + x")
        ring = g.ring(2)
        f, h = random_poly(ring, rng, 3, 3), random_poly(ring, rng, 3, 3)
        assert star(f, h, g) == star(h, f, g)


class TestAxioms:
    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_symbolic(self, p):
        rep = verify_group_axioms(TateOortGroup.symbolic(p))
        assert rep.passed
        assert {c.check_id for c in rep.checks} >= {"closure", "associativity", "neutral", "inverse"}

    def test_constant_group(self):
        g = TateOortGroup.over(3, ["x"], "1", "0")
        assert verify_group_axioms(g).passed

    def test_wrong_coefficients_break_associativity(self, monkeypatch):
        monkeypatch.setattr(tateoort_module, "dp_coeff", lambda p, i: 1)
        rep = verify_group_axioms(TateOortGroup.symbolic(5))
        failed = {c.check_id for c in rep.failures()}
        assert failed == {"associativity"}


class TestScaling:
    def test_identity(self):
        g = TateOortGroup.symbolic(3)
        res = scaling_iso(1, g)
        assert res.report.passed and res.group.alpha == g.alpha and res.group.beta == g.beta

    def test_char_three_over_x(self):
        g = TateOortGroup.over(3, ["x"], "x", "0")
        res = scaling_iso(2, g)
        assert res.report.passed and res.group.alpha == g.alpha and not res.group.beta

    @settings(max_examples=15, deadline=None)
    @given(p=st.sampled_from([2, 3, 5]), data=st.data())
    def test_hom_for_random_epsilon(self, p, data):
        eps = data.draw(st.integers(1, p - 1))
        g = TateOortGroup.symbolic(p)
        res = scaling_iso(eps, g)
        assert res.report.passed
        inv = scaling_iso(pow(eps, -1, p), res.group)
        ring = g.ring(1)
        assert inv.group.alpha == g.alpha and inv.group.beta == g.beta
        assert ring.var("s1").scale(eps * inv.epsilon) == ring.var("s1")

    def test_zero_epsilon(self):
        with pytest.raises(PreconditionError):
            scaling_iso(0, TateOortGroup.symbolic(3))


class TestTorsors:
    def test_natural_action(self):
        t = TorsorScheme(PolyRing(3, ["x"]), PolyRing(3, ["x"]).parse("x^2"), PolyRing(3, ["x"]).parse("x + x^2"))
        assert torsor_action(t, t.natural_group()).passed

    def test_wrong_group(self):
        base = PolyRing(3, ["x"])
        t = TorsorScheme(base, base.var(0), base.var(0))
        with pytest.raises(StructuralError):
            torsor_action(t, TateOortGroup.over(3, ["x"], "x", "0"))

    def test_determinant_examples(self):
        base = PolyRing(2, ["x", "y"])
        t = TorsorScheme(base, base.var("x"), base.var("y"))
        assert torsor_determinant(t) == base.one()

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_determinant_random(self, p):
        rng = random.Random(p)
        base = PolyRing(p, ["x", "y"])
        for _ in range(3):
            a = random_poly(base, rng, 2, 2) or base.var("x")
            b = random_poly(base, rng, 3, 3)
            assert torsor_determinant(TorsorScheme(base, a, b)) == base.one()

    def test_zero_a(self):
        base = PolyRing(3, ["x"])
        with pytest.raises(PreconditionError):
            TorsorScheme(base, base.zero(), base.var(0))
