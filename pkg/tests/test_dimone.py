from __future__ import annotations

import random
from collections import defaultdict

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modram.dimone import (
    ASData,
    LocalAutomorphism,
    break_via_valuation,
    break_via_valuation_details,
    build_moderate_presentation,
    build_moderate_presentation_full,
    effective_model_exponent,
    normalize_artin_schreier,
    ramification_break,
    x_ring,
)
from modram.errors import DomainError, NotTotallyRamifiedError, PreconditionError
from modram.poly import AtLeast, PolyRing, SeriesTrunc


def auto(text: str, p: int, precision: int) -> LocalAutomorphism:
    ring = PolyRing(p, ["u"])
    return LocalAutomorphism(SeriesTrunc(ring.parse(text), precision), p)


def laurent_rhs(mu: int, f, shifts, p: int) -> dict[int, int]:
    """Coefficients of ``x^-mu f - sum c (x^(-p r) - x^(-r))`` as an exponent map."""
    out: dict[int, int] = defaultdict(int)
    for (k,), c in f.terms.items():
        out[k - mu] += c
    for c, r in shifts:
        out[-p * r] -= c
        out[-r] += c
    return {k: v % p for k, v in out.items() if v % p}


class TestBreak:
    def test_examples(self):
        assert ramification_break(auto("u + u^2", 2, 4)) == 1
        assert ramification_break(auto("u + u^4 + u^5", 2, 8)) == 3

    def test_identity_is_indeterminate(self):
        m = ramification_break(auto("u", 3, 10))
        assert isinstance(m, AtLeast) and m.bound == 9

    def test_rejects_linear_change(self):
        with pytest.raises(PreconditionError):
            auto("2*u", 3, 6)

    def test_rejects_wrong_order(self):
        with pytest.raises(PreconditionError):
            auto("u + u^2", 2, 12)


class TestEffectiveModel:
    @pytest.mark.parametrize("m, p, expected", [(1, 2, (1, 0)), (5, 3, (2, 0)), (4, 3, (1, 2))])
    def test_examples(self, m, p, expected):
        model = effective_model_exponent(m, p)
        assert tuple(model) == expected and model.torsor == (expected[1] == 0)


class TestModeratePresentation:
    @pytest.mark.parametrize("p, r, f, m", [(2, 1, "1", 1), (3, 1, "1", 2), (2, 2, "1 + x", 3)])
    def test_examples(self, p, r, f, m):
        assert ramification_break(build_moderate_presentation(r, f, p)) == m

    def test_char_two_series(self):
        pres = build_moderate_presentation_full(1, "1", 2, 16)
        s = pres.sigma.image.ring.var(0)
        assert pres.sigma.image.poly.truncate(4) == s + s**2 + s**3
        assert pres.invariant_checked

    @settings(max_examples=10, deadline=None)
    @given(p=st.sampled_from([2, 3, 5]), r=st.integers(1, 3), seed=st.integers(0, 10**6))
    def test_break_is_pr_minus_one(self, p, r, seed):
        rng = random.Random(seed)
        ring = x_ring(p)
        f = ring.const(rng.randrange(1, p)) + sum((ring.monomial((k,), rng.randrange(p)) for k in range(1, 4)), ring.zero())
        assert ramification_break(build_moderate_presentation(r, f, p)) == p * r - 1

    def test_bad_input(self):
        with pytest.raises(DomainError):
            build_moderate_presentation(0, "1", 3)
        with pytest.raises(DomainError):
            build_moderate_presentation(1, "x", 3)


class TestValuation:
    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_i_one(self, p):
        d = break_via_valuation_details(1, 1, "1", p)
        assert (d.c, d.d, d.mu) == (1, 0, p - 1)

    def test_examples(self):
        d = break_via_valuation_details(2, 1, "1", 3)
        assert (d.c, d.d, d.mu) == (2, 1, 1)
        assert break_via_valuation(3, 2, "1", 5) == 7

    def test_constraints(self):
        with pytest.raises(DomainError):
            break_via_valuation(0, 1, "1", 3)
        with pytest.raises(DomainError):
            break_via_valuation(3, 1, "1", 3)


class TestArtinSchreier:
    def test_coprime_unchanged(self):
        data = ASData(5, x_ring(3).parse("1 + x"))
        assert normalize_artin_schreier(data, 3) == data

    @pytest.mark.parametrize("p, mu, f, mu_out", [(2, 4, "1", 1), (3, 3, "1 + x", 2), (2, 6, "1 + x^2", 3)])
    def test_examples(self, p, mu, f, mu_out):
        ring = x_ring(p)
        out = normalize_artin_schreier(ASData(mu, ring.parse(f)), p)
        assert out.mu == mu_out and out.mu % p

    def test_char_two_needs_two_shifts(self):
        out = normalize_artin_schreier(ASData(4, x_ring(2).one()), 2)
        assert out.shift == ((1, 2), (1, 1))

    @settings(max_examples=40, deadline=None)
    @given(p=st.sampled_from([2, 3, 5]), k=st.integers(1, 4), coeffs=st.lists(st.integers(0, 4), min_size=1, max_size=8),
           lead=st.integers(1, 4))
    def test_substitution_oracle(self, p, k, coeffs, lead):
        ring = x_ring(p)
        mu = p * k
        f = ring.const(lead % p or 1) + sum((ring.monomial((j + 1,), c) for j, c in enumerate(coeffs)), ring.zero())
        try:
            out = normalize_artin_schreier(ASData(mu, f), p)
        except NotTotallyRamifiedError:
            return
        expected = {e - out.mu: c for (e,), c in out.f.terms.items()}
        assert laurent_rhs(mu, f, out.shift, p) == expected
        assert out.mu % p and out.f.constant_term()

    def test_split(self):
        ring = x_ring(2)
        with pytest.raises(NotTotallyRamifiedError):
            normalize_artin_schreier(ASData(2, ring.parse("1 + x")), 2)

    def test_nonpositive(self):
        with pytest.raises(NotTotallyRamifiedError):
            normalize_artin_schreier(ASData(0, x_ring(3).one()), 3)
