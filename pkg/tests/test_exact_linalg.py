from fractions import Fraction

import pytest

from refined_euler.errors import BitCapExceeded, DimensionMismatchError
from refined_euler.exact_linalg import (
    IntMatrix,
    RatMatrix,
    as_fraction,
    elementary_divisors_oracle,
    hnf,
    kernel_basis,
    snf,
    solve_integral,
    solve_mixed,
    unit_vector,
)

pytestmark = pytest.mark.unit


class TestMatrices:
    def test_as_fraction_accepts_strings(self):
        assert as_fraction("3/4") == Fraction(3, 4)
        assert as_fraction(-2) == Fraction(-2)

    def test_determinants(self):
        assert IntMatrix.from_rows([[1, 2], [3, 4]]).det() == -2
        assert RatMatrix.from_rows([["1/2", 0], [0, 4]]).det() == 2

    def test_inverse(self):
        A = RatMatrix.from_rows([[1, 2], [3, 4]])
        assert A @ A.inverse() == RatMatrix.identity(2)

    def test_rank_and_nullspace(self):
        A = RatMatrix.from_rows([[1, 1], [2, 2]])
        assert A.rank() == 1
        N = A.nullspace()
        assert N.cols == 1
        assert (A @ N).is_zero()

    def test_ragged_rows_are_rejected(self):
        with pytest.raises(DimensionMismatchError):
            IntMatrix.from_rows([[1, 2], [3]])

    def test_denominator(self):
        assert RatMatrix.from_rows([["1/2", "1/3"]]).denominator() == 6

    def test_unit_vector(self):
        assert unit_vector(1, 3) == [0, 1, 0]


class TestNormalForms:
    def test_snf_of_small_matrix(self):
        A = IntMatrix.from_rows([[2, 4], [6, 8]])
        dec = snf(A)
        assert dec.diagonal == (2, 4)
        assert dec.U @ A @ dec.V == dec.D
        assert abs(dec.U.det()) == 1
        assert abs(dec.V.det()) == 1

    def test_snf_agrees_with_determinantal_divisors(self):
        A = IntMatrix.from_rows([[4, 6, 2], [2, 8, 10], [6, 2, 0]])
        assert snf(A).invariant_factors == elementary_divisors_oracle(A)

    def test_snf_of_rank_deficient_matrix(self):
        A = IntMatrix.from_rows([[1, 2, 3], [2, 4, 6]])
        dec = snf(A)
        assert dec.rank == 1
        assert dec.invariant_factors == (1,)

    def test_snf_of_empty_matrix(self):
        dec = snf(IntMatrix.zeros(0, 3))
        assert dec.rank == 0
        assert dec.V.rows == 3

    def test_hnf(self):
        A = IntMatrix.from_rows([[2, 4], [6, 8]])
        dec = hnf(A)
        assert dec.U @ A == dec.H
        assert abs(dec.U.det()) == 1

    def test_kernel_basis(self):
        A = IntMatrix.from_rows([[2, 4]])
        K = kernel_basis(A)
        assert K.cols == 1
        assert (A @ K).is_zero()


class TestSolvers:
    def test_solve_integral(self):
        A = IntMatrix.from_rows([[2, 4], [6, 8]])
        assert solve_integral(A, [10, 22]) == (1, 2)

    def test_solve_integral_without_solution(self):
        assert solve_integral(IntMatrix.from_rows([[2]]), [1]) is None

    def test_solve_integral_checks_length(self):
        with pytest.raises(DimensionMismatchError):
            solve_integral(IntMatrix.from_rows([[2]]), [1, 2])

    def test_solve_mixed(self):
        # 2x + y = 1 with x integral, y rational
        solution = solve_mixed(RatMatrix.from_rows([[2]]), RatMatrix.from_rows([[1]]), [1])
        assert solution is not None
        x, y = solution
        assert 2 * x[0] + y[0] == 1


class TestBitCap:
    def test_large_entries_exceed_the_cap(self, monkeypatch):
        monkeypatch.setenv("NPC_MAX_BITS", "8")
        with pytest.raises(BitCapExceeded):
            snf(IntMatrix.from_rows([[1000]]))

    def test_small_entries_pass(self, monkeypatch):
        monkeypatch.setenv("NPC_MAX_BITS", "8")
        assert snf(IntMatrix.from_rows([[100]])).diagonal == (100,)
