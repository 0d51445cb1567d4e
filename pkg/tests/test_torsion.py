from fractions import Fraction

import pytest

from refined_euler.complexes import BoundedComplex, direct_sum_complex
from refined_euler.errors import DiagramError, DimensionMismatchError, PreconditionError
from refined_euler.exact_linalg import RatMatrix
from refined_euler.ladic import chi_l
from refined_euler.mixedmod import MixedModule
from refined_euler.npc import NearlyPerfectComplex, TauMap, chi, validate
from refined_euler.relk import PosRational
from refined_euler.torsion import (
    Filtration,
    GradedTrivialization,
    SectionDiagram,
    SplittingChoice,
    canonical_section,
    check_filtered_quasi_iso_invariance,
    chi_rel_npc,
    chi_rel_perfect,
    compatible_section,
    graded_class,
    module_class,
    rational_acyclic_class,
    refined_class,
    trivialization_change_holds,
    trivialization_ranks,
)

pytestmark = pytest.mark.unit

Z = MixedModule.free(1)
Z2 = MixedModule.free(2)
EMPTY = GradedTrivialization()


def m(*rows):
    return RatMatrix.from_rows([list(r) for r in rows])


@pytest.fixture
def two_points():
    """Z in degrees 0 and 1 with zero differential."""
    return BoundedComplex.from_matrices(0, [Z, Z], [m([0])])


@pytest.fixture
def two_planes():
    """Z^2 in degrees 0 and 1 with zero differential."""
    return BoundedComplex.from_matrices(0, [Z2, Z2], [m([0, 0], [0, 0])])


@pytest.fixture
def kernel_and_torsion():
    """Z^2 -diag(2, 0)-> Z^2: H^0 = Z, H^1 = Z/2 + Z."""
    return BoundedComplex.from_matrices(0, [Z2, Z2], [m([2, 0], [0, 0])])


@pytest.fixture
def wrapped_degree3():
    """Z -> Z^2 + Q/Z, 1 -> (2, 0, 1/3), in degrees 2 and 3 with L_3 = Z onto the Q/Z summand."""
    target = MixedModule(free_rank=2, qz_rank=1)
    C = BoundedComplex.from_matrices(2, [Z, target], [m([2], [0], [Fraction(1, 3)])])
    return NearlyPerfectComplex(C, {3: 1}, {3: TauMap("qz", m([0], [0], [1]))})


class TestTrivializations:
    def test_must_be_invertible(self):
        with pytest.raises(PreconditionError):
            GradedTrivialization.from_rows([[1, 2], [2, 4]])

    def test_must_be_square(self):
        with pytest.raises(PreconditionError):
            GradedTrivialization(RatMatrix.zeros(1, 2))

    def test_inverse(self):
        lam = GradedTrivialization.from_rows([[2, 1], [1, 1]])
        assert lam.inverse().matrix @ lam.matrix == RatMatrix.identity(2)


class TestPerfectComplexes:
    def test_cyclic_cohomology(self, times_three):
        expected = PosRational.of("1/3")
        F = Filtration.trivial()
        assert chi_rel_perfect(times_three, F, EMPTY) == expected
        assert module_class(times_three, F, EMPTY) == expected
        assert graded_class(times_three, F, EMPTY) == expected
        assert rational_acyclic_class(times_three) == expected

    def test_scalar_trivialization(self, two_points):
        lam = GradedTrivialization.scalar(Fraction(5, 3))
        assert chi_rel_perfect(two_points, Filtration.trivial(), lam) == PosRational.of("5/3")

    def test_torsion_and_free_cohomology(self, kernel_and_torsion):
        lam = GradedTrivialization.scalar(3)
        assert chi_rel_perfect(kernel_and_torsion, Filtration.trivial(), lam) == PosRational.of("3/2")

    @pytest.mark.parametrize("seed", [1, 7, 42])
    def test_independent_of_splittings(self, kernel_and_torsion, seed):
        lam = GradedTrivialization.scalar(3)
        F = Filtration.trivial()
        canonical = chi_rel_perfect(kernel_and_torsion, F, lam)
        assert chi_rel_perfect(kernel_and_torsion, F, lam, SplittingChoice.random(seed)) == canonical

    def test_trivialization_change(self, kernel_and_torsion):
        F = Filtration.trivial()
        lam, other = GradedTrivialization.scalar(3), GradedTrivialization.scalar(-7)
        assert trivialization_change_holds(kernel_and_torsion, F, lam, other)

    def test_needs_a_perfect_complex(self, z5_npc):
        with pytest.raises(PreconditionError):
            chi_rel_perfect(z5_npc.complex, Filtration.trivial(), EMPTY)

    def test_rational_acyclicity_is_required(self, two_points):
        with pytest.raises(PreconditionError):
            rational_acyclic_class(two_points)


class TestFiltrations:
    LAMBDA = GradedTrivialization.from_rows([[1, 2], [3, 4]])

    def test_saturated_step(self, two_planes):
        F = Filtration.two_step({1: [[1, 1]]})
        assert graded_class(two_planes, F, self.LAMBDA) == PosRational.of(2)
        assert chi_rel_perfect(two_planes, F, self.LAMBDA) == PosRational.of(2)

    def test_non_saturated_step(self, two_planes):
        F = Filtration.two_step({1: [[2, 0]]})
        assert graded_class(two_planes, F, self.LAMBDA) == PosRational.one()
        assert chi_rel_perfect(two_planes, F, self.LAMBDA) == PosRational.one()

    def test_module_class_agrees(self, two_planes):
        F = Filtration.two_step({1: [[2, 0]]})
        assert module_class(two_planes, F, self.LAMBDA) == chi_rel_perfect(two_planes, F, self.LAMBDA)

    def test_steps_must_lie_in_cohomology(self, two_planes):
        F = Filtration.two_step({1: [[Fraction(1, 2), 0]]})
        with pytest.raises(PreconditionError):
            graded_class(two_planes, F, self.LAMBDA)

    def test_length(self):
        F = Filtration.two_step({1: [[1, 0]]})
        assert F.length(1) == 2
        assert F.length(0) == 1


class TestQuasiIsoInvariance:
    def test_acyclic_summand(self, times_three):
        acyclic = BoundedComplex.from_matrices(0, [Z, Z], [m([1])])
        _, _, projections = direct_sum_complex(times_three, acyclic)
        report = check_filtered_quasi_iso_invariance(projections[0], Filtration.trivial(), EMPTY)
        assert report.holds
        assert report.target_class == PosRational.of("1/3")

    def test_with_trivialization(self, two_points):
        acyclic = BoundedComplex.from_matrices(0, [Z2, Z2], [m([1, 1], [0, 1])])
        _, _, projections = direct_sum_complex(two_points, acyclic)
        lam = GradedTrivialization.scalar(3)
        report = check_filtered_quasi_iso_invariance(
            projections[0], Filtration.trivial(), lam, SplittingChoice.random(5)
        )
        assert report.holds
        assert report.source_class == PosRational.of(3)


class TestSections:
    EPSILON = m([1, 0, 0], [0, 1, 0])

    def test_canonical_section(self):
        sigma = canonical_section(self.EPSILON)
        assert self.EPSILON @ sigma == RatMatrix.identity(2)

    def test_compatible_section(self):
        K = m([1], [0], [1])
        diagram = SectionDiagram(self.EPSILON, K, self.EPSILON @ K)
        sigma = compatible_section(diagram)
        assert self.EPSILON @ sigma == RatMatrix.identity(2)
        assert K.solve(sigma.column(0)) is not None

    def test_non_commuting_diagram(self):
        diagram = SectionDiagram(self.EPSILON, m([1], [0], [1]), m([0], [1]))
        with pytest.raises(DiagramError):
            compatible_section(diagram)

    def test_initial_map_must_be_a_section(self):
        K = m([1], [0], [1])
        diagram = SectionDiagram(self.EPSILON, K, self.EPSILON @ K)
        with pytest.raises(PreconditionError):
            compatible_section(diagram, initial=RatMatrix.zeros(3, 2))

    def test_shapes_must_fit(self):
        diagram = SectionDiagram(self.EPSILON, m([1], [0]), m([1], [0]))
        with pytest.raises(DimensionMismatchError):
            compatible_section(diagram)


class TestNearlyPerfectComplexes:
    def test_finite_group(self, z5_npc):
        assert chi_rel_npc(z5_npc, EMPTY) == PosRational.of(5)

    def test_perfect_input(self, times_three_npc):
        assert chi_rel_npc(times_three_npc, EMPTY) == PosRational.of("1/3")

    def test_ranks(self, z_plus_qz_degree3):
        assert trivialization_ranks(z_plus_qz_degree3) == {2: (1, 0), 3: (0, 1)}

    def test_lattice_and_free_cohomology(self, z_plus_qz_degree3):
        result = refined_class(z_plus_qz_degree3, GradedTrivialization.scalar(3))
        assert result.value == PosRational.of(3)
        assert result.prime_route == PosRational.of(3)
        assert result.forgetful == PosRational.of(3)
        assert result.valuations == {3: 1}
        assert result.local(3) == 1
        assert result.local(2) == 0
        assert result.chi == 0
        assert result.consistent

    def test_alternate_trivialization(self, z_plus_qz_degree3):
        lam = GradedTrivialization.scalar(3)
        assert chi_rel_npc(z_plus_qz_degree3, lam, alternate=GradedTrivialization.scalar(5)) == PosRational.of(3)

    def test_random_splitting(self, z_plus_qz_degree3):
        result = refined_class(z_plus_qz_degree3, GradedTrivialization.scalar(3), s=SplittingChoice.random(4))
        assert result.value == PosRational.of(3)

    def test_no_trivialization_exists(self, qz_degree3):
        with pytest.raises(PreconditionError):
            chi_rel_npc(qz_degree3, EMPTY)

    def test_wrong_size(self, z_plus_qz_degree3):
        with pytest.raises(DimensionMismatchError):
            chi_rel_npc(z_plus_qz_degree3, GradedTrivialization.from_rows([[1, 0], [0, 1]]))

    def test_mixed_differential(self, wrapped_degree3):
        assert validate(wrapped_degree3).valid
        assert chi(wrapped_degree3) == 0
        assert [chi_l(wrapped_degree3, l) for l in (2, 3)] == [0, 0]
        result = refined_class(wrapped_degree3, GradedTrivialization.scalar(3), s=SplittingChoice.random(7))
        assert result.value == PosRational.of("3/2")
        assert result.rational_route == result.prime_route == result.forgetful == PosRational.of("3/2")
        assert result.consistent

    def test_mixed_differential_matches_split_form(self, wrapped_degree3):
        split = NearlyPerfectComplex(
            BoundedComplex.concentrated(MixedModule(free_rank=1, torsion=(2,), qz_rank=1), 3),
            {3: 1},
            {3: TauMap("qz", m([0], [0], [1]))},
        )
        lam = GradedTrivialization.scalar(3)
        assert chi_rel_npc(wrapped_degree3, lam) == chi_rel_npc(split, lam)
