from fractions import Fraction

import pytest

from refined_euler.errors import ContractViolation, DimensionMismatchError
from refined_euler.exact_linalg import RatMatrix
from refined_euler.lattices import Subgroup, Subquotient

pytestmark = pytest.mark.unit


def lattice(*generators):
    return Subgroup.from_generators(len(generators[0]), (), [list(g) for g in generators])


class TestSubgroup:
    def test_membership_in_a_lattice(self):
        S = lattice([2, 0], [0, 3])
        assert S.contains([2, 3])
        assert S.contains([-4, 0])
        assert not S.contains([1, 0])

    def test_membership_with_a_subspace(self):
        S = Subgroup.from_generators(2, [[1, 1]], [[1, 0]])
        assert S.contains([Fraction(5, 2), Fraction(7, 2)])
        assert not S.contains([Fraction(1, 2), 0])

    def test_normal_form_is_canonical(self):
        a = lattice([2, 0], [0, 2])
        b = lattice([2, 2], [0, 2])
        assert a.equals(b)
        assert a == b

    def test_generators_reduced_modulo_space(self):
        S = Subgroup.from_generators(2, [[0, 1]], [[1, Fraction(1, 3)]])
        assert S.lattice_generators() == [(Fraction(1), Fraction(0))]

    def test_sum_and_intersection(self):
        two, three = lattice([2]), lattice([3])
        assert (two + three).equals(lattice([1]))
        assert two.intersection(three).equals(lattice([6]))

    def test_preimage(self):
        Z = lattice([1])
        back = Z.preimage(RatMatrix.from_rows([[2]]), lattice([4]))
        assert back.equals(lattice([2]))

    def test_wrong_length_is_rejected(self):
        with pytest.raises(DimensionMismatchError):
            Subgroup.from_generators(2, (), [[1, 2, 3]])


class TestSubquotient:
    def test_cyclic_quotient(self):
        Q = Subquotient.of(lattice([1]), lattice([6]))
        assert (Q.free_rank, Q.torsion, Q.q_rank, Q.qz_rank) == (0, (6,), 0, 0)

    def test_rationals_modulo_integers(self):
        Q = Subquotient.of(Subgroup.from_generators(1, [[1]]), lattice([1]))
        assert (Q.free_rank, Q.torsion, Q.q_rank, Q.qz_rank) == (0, (), 0, 1)

    def test_mixed_quotient(self):
        Q = Subquotient.of(lattice([1, 0], [0, 1]), lattice([2, 4]))
        assert (Q.free_rank, Q.torsion) == (1, (2,))

    def test_rational_quotient(self):
        Q = Subquotient.of(Subgroup.from_generators(2, [[1, 0], [0, 1]]), Subgroup.from_generators(2, [[1, 1]]))
        assert (Q.free_rank, Q.q_rank, Q.qz_rank) == (0, 1, 0)

    def test_project_inverts_lift(self):
        Q = Subquotient.of(lattice([1, 0], [0, 1]), lattice([2, 4]))
        assert Q.project @ Q.lift == RatMatrix.identity(Q.dim)

    def test_denominator_must_be_contained(self):
        with pytest.raises(ContractViolation):
            Subquotient.of(lattice([2]), lattice([1]))
