from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modram import linalg
from modram.errors import NotAPGroupError, PreconditionError, SingularError
from modram.local import (
    SubstitutionAction,
    colength_below,
    is_admissible,
    is_regular_sop,
    is_system_of_parameters,
    is_upper_unitriangular,
    is_weakly_admissible,
    local_length,
    triangularize,
)
from modram.poly import PolyRing, SeriesTrunc
from modram.report import Truth

R2 = PolyRing(2, ["x", "y"])
R3 = PolyRing(3, ["x", "y", "z"])


def staircase_count(exps: list[tuple[int, ...]], n: int, bound: int) -> int:
    """Monomials of degree < bound not divisible by any generator exponent."""
    count = 0
    for e in itertools.product(range(bound), repeat=n):
        if sum(e) < bound and not any(all(a >= b for a, b in zip(e, g)) for g in exps):
            count += 1
    return count


class TestLinalg:
    def test_rank_and_nullspace(self):
        m = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
        assert linalg.rank(m, 7) == 2
        ker = linalg.nullspace(m, 7)
        assert ker.shape == (1, 3)
        assert not (np.array(m) @ ker[0] % 7).any()

    def test_inverse_and_det(self):
        m = np.array([[2, 1], [1, 1]])
        inv = linalg.inverse(m, 5)
        assert np.array_equal(linalg.matmul(m, inv, 5), np.eye(2, dtype=np.int64))
        assert linalg.det(m, 5) == 1
        with pytest.raises(SingularError):
            linalg.inverse([[1, 2], [2, 4]], 5)


class TestLength:
    def test_examples(self):
        x, y = R2.gens()
        assert str(local_length([x, y])) == "Finite(1)"
        assert str(local_length([x**2, y**2])) == "Finite(4)"

    def test_not_finite(self):
        x, y = R2.gens()
        res = local_length([x, x * y], cap=10)
        assert not res.is_finite and str(res) == "IndeterminateAtCap(10)"

    def test_constant_generator_rejected(self):
        x, y = R2.gens()
        with pytest.raises(PreconditionError):
            local_length([x + 1, y])

    @settings(max_examples=40, deadline=None)
    @given(a=st.integers(1, 4), b=st.integers(1, 4), c=st.integers(1, 4), extra=st.tuples(st.integers(0, 3), st.integers(0, 3)))
    def test_monomial_staircase_oracle(self, a, b, c, extra):
        exps = [(a, 0, 0), (0, b, 0), (0, 0, c)]
        if sum(extra):
            exps.append((extra[0], extra[1], 1))
        gens = [R3.monomial(e) for e in exps]
        res = local_length(gens)
        assert res.is_finite
        assert res.length == staircase_count(exps, 3, a + b + c + 1)

    def test_colength_sequence_stabilizes(self):
        x, y = R2.gens()
        gens = [x**2 + y**3, y**2]
        assert [colength_below(gens, n) for n in range(1, 6)] == [1, 3, 4, 4, 4]

    def test_series_generators_trust_precision(self):
        x, y = R2.gens()
        res = local_length([SeriesTrunc(x, 3), SeriesTrunc(y**3, 3)])
        assert not res.is_finite


class TestSystemOfParameters:
    def test_examples(self):
        x, y = R2.gens()
        assert is_regular_sop([x, y])
        assert is_system_of_parameters([x, y]) is Truth.TRUE
        assert not is_regular_sop([x**2, y])
        assert is_system_of_parameters([x**2, y]) is Truth.TRUE
        assert is_system_of_parameters([x, x * y], cap=12) is Truth.FALSE

    def test_wrong_count(self):
        x, _ = R2.gens()
        with pytest.raises(PreconditionError):
            is_system_of_parameters([x])

    def test_truth_has_no_bool(self):
        with pytest.raises(TypeError):
            bool(Truth.INDETERMINATE)


class TestAdmissibility:
    def test_not_of_order_p(self):
        x, y = R2.gens()
        with pytest.raises(PreconditionError):
            SubstitutionAction.from_polys(2, [x + x**2, y])

    def test_swap_is_not_weakly_admissible(self):
        x, y = R2.gens()
        act = SubstitutionAction.from_polys(2, [y, x])
        assert not is_admissible(act)
        verdict = is_weakly_admissible(act)
        assert verdict.truth is Truth.FALSE and verdict.failing_tuple == (0, 1)

    def test_unipotent_polynomial_action(self):
        x, y = R2.gens()
        act = SubstitutionAction.from_polys(2, [x + y**2, y])
        assert is_admissible(act)
        assert is_weakly_admissible(act).truth is Truth.TRUE


class TestTriangularize:
    @staticmethod
    def conj(p_mat, m, p):
        return linalg.matmul(linalg.matmul(p_mat, m, p), linalg.inverse(p_mat, p), p)

    def test_swap(self):
        m = np.array([[0, 1], [1, 0]])
        pm = triangularize([m], 2)
        assert is_upper_unitriangular(self.conj(pm, m, 2), 2)
        # the flag starts at the fixed vector e1 + e2
        assert list(linalg.inverse(pm, 2)[:, 0]) == [1, 1]

    def test_identity_and_jordan(self):
        ident = np.eye(3, dtype=np.int64)
        assert np.array_equal(triangularize([ident], 3) % 3, ident)
        jordan = np.array([[1, 1, 0], [0, 1, 1], [0, 0, 1]])
        pm = triangularize([jordan], 3)
        assert np.array_equal(pm % 3, ident)

    def test_group_of_two(self):
        a = np.array([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
        b = np.array([[1, 0, 1], [0, 1, 0], [0, 0, 1]])
        pm = triangularize([a.T, b.T], 3)
        for m in (a.T, b.T):
            assert is_upper_unitriangular(self.conj(pm, m, 3), 3)

    def test_not_a_p_group(self):
        with pytest.raises(NotAPGroupError):
            triangularize([np.array([[2, 0], [0, 1]])], 3)
