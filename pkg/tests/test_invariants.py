from __future__ import annotations

import itertools
import math

import pytest

from modram.errors import DomainError, PreconditionError
from modram.invariants import (
    default_generators,
    edim_formulas,
    evaluate_in_z,
    graded_invariant_table,
    hypersurface_check,
    invariant_dimension,
    minor,
    nonfactorial_product_check,
    rational_factorization_check,
    reflection_deltas,
    relevant_count_formula,
    relevant_tuples,
    trace_element,
    verify_minor_relations,
    z_s,
    z_s_element,
    z_s_relation,
)
from modram.ringa import ActionSpec, act


class TestMinors:
    def test_definition(self):
        spec = ActionSpec(2, ["x1", "x2"])
        assert minor(1, 2, spec) == spec.x(1) * spec.u(2) - spec.x(2) * spec.u(1)
        with pytest.raises(DomainError):
            minor(1, 1, spec)

    def test_char_two_relation(self):
        spec = ActionSpec(2, ["x1", "x2"])
        z = minor(1, 2, spec)
        x, y = spec.x(1), spec.x(2)
        assert (z**2 - x * y * z - x**2 * y + y**2 * x).is_zero()

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_all_families(self, p):
        assert verify_minor_relations(ActionSpec(p, ["x1", "x2", "x3"])).passed

    def test_non_monomial(self):
        spec = ActionSpec(3, ["x1 + x2^2", "x2 - x3^2", "x3 + x1*x2"], "1 + x3")
        assert verify_minor_relations(spec).passed

    def test_syzygy(self):
        spec = ActionSpec(3, ["x1", "x2 + x1^2", "x3"])
        a = [spec.scalar(t) for t in spec.a]
        res = a[0] * minor(2, 3, spec) - a[1] * minor(1, 3, spec) + a[2] * minor(1, 2, spec)
        assert res.is_zero()


class TestZs:
    def test_minor_up_to_sign(self):
        spec = ActionSpec(3, ["x1", "x2", "x3 + x1^2"])
        z = z_s_element((2, 1, 0), spec)  # s = e2 - e1 at p = 3
        assert z == minor(1, 2, spec) or z == -minor(1, 2, spec)

    @pytest.mark.parametrize("p", [2, 3])
    def test_all_nonzero_s(self, p):
        spec = ActionSpec(p, ["x1", "x2", "x3"])
        for s in itertools.product(range(p), repeat=3):
            if any(s):
                assert z_s(s, spec).passed, s

    def test_moved_by_non_orthogonal(self):
        spec = ActionSpec(3, ["x1", "x2", "x3"])
        s = (1, 1, 0)
        z = z_s_element(s, spec)
        assert act(s, z, spec) != z

    def test_wrong_sign_is_caught(self):
        spec = ActionSpec(3, ["x1", "x2", "x3"])
        s = (1, 2, 1)
        rel = z_s_relation(s, spec)
        zv = rel.ring.var("z")
        # flip the sign of the linear term
        lin = rel - zv**3 - (rel - zv**3).substitute({"z": rel.ring.zero()}, keep_unassigned=True)
        bad = rel - lin.scale(2)
        assert evaluate_in_z(rel, z_s_element(s, spec), spec).is_zero()
        assert not evaluate_in_z(bad, z_s_element(s, spec), spec).is_zero()

    def test_zero_s(self):
        with pytest.raises(PreconditionError):
            z_s_element((0, 0, 0), ActionSpec(2, ["x1", "x2", "x3"]))


class TestCounts:
    def test_examples(self):
        assert relevant_tuples(2, 3) == [(1, 1, 1)]
        for p in (2, 3, 5, 7):
            assert relevant_tuples(p, 2) == []
        assert len(relevant_tuples(3, 3)) == 4 == (3**3 - 3) // 6

    @pytest.mark.parametrize("p", [2, 3, 5, 7])
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_formula(self, p, n):
        expected = p**n - math.comb(2 * p + n - 2, n) + n * math.comb(p + n - 2, n)
        assert len(relevant_tuples(p, n)) == relevant_count_formula(p, n) == expected

    def test_edim(self):
        assert edim_formulas(2, 3).edim_AG == 7
        assert edim_formulas(3, 3).edim_AG == 10
        for p in (2, 3, 5):
            assert edim_formulas(p, 2).edim_AG == 3
        for p in (2, 3, 5, 7):
            for n in (1, 2, 3, 4):
                e = edim_formulas(p, n)
                assert e.edim_B - e.edim_AG == n


class TestTraces:
    def test_char_two_product(self):
        spec = ActionSpec(2, ["x1", "x2", "x3"])
        u = [spec.u(i) for i in (1, 2, 3)]
        a = [spec.scalar(t) for t in spec.a]
        expected = u[0] * u[1] * u[2] + (u[0] + a[0]) * (u[1] + a[1]) * (u[2] + a[2])
        assert trace_element((1, 1, 1), spec) == expected

    def test_trace_of_one(self):
        spec = ActionSpec(3, ["x1", "x2"])
        assert trace_element((0, 0), spec).is_zero()

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            trace_element((2, 0), ActionSpec(2, ["x1", "x2"]))


class TestGradedGeneration:
    def test_invariant_dimension_low_degrees(self):
        # degree 0: constants; degree 1: the a_i
        assert invariant_dimension(2, 2, 0) == 1
        assert invariant_dimension(2, 2, 1) == 2

    def test_two_variables(self):
        t = graded_invariant_table(2, 2, 6)
        assert t.generates and t.minimal
        assert t.invariant_dims == [1, 2, 6, 10, 19, 28, 44]

    def test_three_variables(self):
        t = graded_invariant_table(2, 3, 6)
        assert t.generates and t.minimal and "t111" in t.generator_names

    def test_trace_is_needed(self):
        gens = default_generators(2, 3, include_traces=False)
        t = graded_invariant_table(2, 3, 6, generators=gens)
        assert t.first_defect == 3

    def test_redundant_generator_detected(self):
        gens = default_generators(2, 2)
        extra = ("a1sq", gens[0][1] ** 2)
        t = graded_invariant_table(2, 2, 4, generators=gens + [extra])
        assert t.generates and not t.minimal and t.redundant == ["a1sq"]

    def test_cap(self):
        with pytest.raises(PreconditionError):
            graded_invariant_table(2, 2, 9)


class TestHypersurface:
    def test_examples(self):
        assert hypersurface_check("x1", "x2", 1, 2).passed
        assert hypersurface_check("x1 + x2^2", "x2", 1, 3).passed
        assert hypersurface_check("x1", "x2", "1 + x1 + x2", 5).passed

    def test_non_coprime_warns(self):
        rep = hypersurface_check("x1", "x1", 1, 3)
        assert rep.passed and "warning" in rep.checks[0].details


class TestNonFactorial:
    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_product_identity(self, p):
        assert nonfactorial_product_check("x1", "x2", p=p).passed
        assert nonfactorial_product_check("x1 + x2^2", "x2", "1 + x1", p=p).passed

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_rational_factorization(self, p):
        assert rational_factorization_check(p).passed

    def test_needs_prime(self):
        with pytest.raises(PreconditionError):
            nonfactorial_product_check("x1", "x2")


class TestReflectionDeltas:
    def test_char_two_three_variables(self):
        rep = reflection_deltas(ActionSpec(2, ["x1", "x2", "x3"]))
        assert rep.passed and any(c.check_id == "delta-e1-t" for c in rep.checks)

    def test_char_two_minor_delta(self):
        spec = ActionSpec(2, ["x1", "x2"])
        z = minor(1, 2, spec)
        assert act((1, 0), z, spec) - z == spec.x(1) * spec.x(2)

    def test_general_mu(self):
        assert reflection_deltas(ActionSpec(2, ["x1", "x2", "x3 + x1^2"], "1 + x2")).passed
        assert reflection_deltas(ActionSpec(3, ["x1", "x2", "x3"], "1 + x1")).passed
