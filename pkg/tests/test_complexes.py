import pytest

from refined_euler.complexes import (
    BoundedComplex,
    ChainMap,
    cohomology,
    cohomology_euler_rank,
    cone,
    direct_sum_complex,
    euler_rank,
    induced_on_cohomology,
    is_acyclic,
    is_quasi_iso,
    lift_through_quasi_iso,
    perfect_replacement,
    torsion_free_replacement,
)
from refined_euler.errors import DiagramError, PreconditionError
from refined_euler.exact_linalg import RatMatrix
from refined_euler.mixedmod import MixedModule, ModuleHom

pytestmark = pytest.mark.unit

Z = MixedModule.free(1)


def m(*rows):
    return RatMatrix.from_rows([list(r) for r in rows])


class TestBoundedComplex:
    def test_d_squared_must_vanish(self):
        with pytest.raises(DiagramError):
            BoundedComplex.from_matrices(0, [Z, Z, Z], [m([1]), m([1])])

    def test_terms_outside_the_range_are_zero(self, times_three):
        assert times_three.term(5).is_zero()
        assert times_three.differential(5).is_zero()

    def test_shift(self, times_three):
        shifted = times_three.shift(1)
        assert shifted.min_degree == -1
        assert shifted.differential(-1).matrix == m([-3])

    def test_trimmed(self):
        C = BoundedComplex(0, (MixedModule.zero(), Z, MixedModule.zero()), (
            ModuleHom.zero(MixedModule.zero(), Z),
            ModuleHom.zero(Z, MixedModule.zero()),
        ))
        assert C.trimmed() == BoundedComplex.concentrated(Z, 1)


class TestCohomology:
    def test_times_three(self, times_three):
        record = cohomology(times_three)
        assert record.H(0).is_zero()
        assert record.H(1) == MixedModule(torsion=(3,))
        assert record.H(7).is_zero()
        assert cohomology_euler_rank(times_three) == 0

    def test_rationals_onto_qz(self):
        C = BoundedComplex.from_matrices(0, [MixedModule(q_rank=1), MixedModule(qz_rank=1)], [m([1])])
        record = cohomology(C)
        assert record.H(0) == Z
        assert record.H(1).is_zero()

    def test_cocycles_and_coboundaries(self, times_three):
        record = cohomology(times_three)
        assert record[1].is_cocycle([1])
        assert record[1].is_coboundary([3])
        assert not record[1].is_coboundary([1])


class TestChainMaps:
    def test_identity_is_a_quasi_isomorphism(self, times_three):
        assert is_quasi_iso(ChainMap.identity(times_three))

    def test_non_commuting_components_are_rejected(self, times_three):
        with pytest.raises(DiagramError):
            ChainMap(times_three, times_three, {0: ModuleHom.identity(Z)})

    def test_cone_of_zero_map_splits(self, times_three):
        K = cone(ChainMap(times_three, times_three)).complex
        record = cohomology(K)
        assert record.H(0) == MixedModule(torsion=(3,))
        assert record.H(1) == MixedModule(torsion=(3,))
        assert record.H(-1).is_zero()

    def test_induced_on_cohomology(self, times_three):
        f = ChainMap(times_three, times_three, {i: ModuleHom.identity(Z).scale(2) for i in times_three.degrees()})
        on_h1 = induced_on_cohomology(f, 1)
        assert on_h1.source == MixedModule(torsion=(3,))
        assert on_h1.is_injective() and on_h1.is_surjective()
        assert induced_on_cohomology(f, 0).is_zero()

    def test_direct_sum(self, times_three):
        S, injections, projections = direct_sum_complex(times_three, times_three)
        assert cohomology(S).H(1) == MixedModule(torsion=(3, 3))
        for inj, proj in zip(injections, projections):
            assert is_quasi_iso(proj.compose(inj))


class TestReplacements:
    def test_perfect_replacement_of_finite_group(self):
        C = BoundedComplex.concentrated(MixedModule(torsion=(5,)), 0)
        P, phi = perfect_replacement(C)
        assert P.is_perfect()
        assert is_quasi_iso(phi)
        assert euler_rank(P) == 0

    def test_perfect_replacement_is_minimal(self):
        C = BoundedComplex.from_matrices(0, [MixedModule(q_rank=1), MixedModule(qz_rank=1)], [m([1])])
        P, _ = perfect_replacement(C)
        assert sum(P.term(i).free_rank for i in P.degrees()) == 1
        assert euler_rank(P) == 1

    def test_perfect_complexes_are_kept(self, times_three):
        P, phi = perfect_replacement(times_three)
        assert P == times_three
        assert phi == ChainMap.identity(P)

    def test_infinite_cohomology_has_no_perfect_replacement(self):
        with pytest.raises(PreconditionError):
            perfect_replacement(BoundedComplex.concentrated(MixedModule(qz_rank=1), 0))

    def test_torsion_free_replacement(self):
        C = BoundedComplex.concentrated(MixedModule(free_rank=1, torsion=(5,), qz_rank=1), 0)
        P, phi = torsion_free_replacement(C, check=True)
        assert P.is_torsion_free()
        assert is_quasi_iso(phi)

    def test_lift_through_quasi_iso(self):
        C = BoundedComplex.concentrated(MixedModule(torsion=(4,)), 2)
        P, phi = perfect_replacement(C)
        lift = lift_through_quasi_iso(phi, phi)
        assert is_quasi_iso(lift.h)

    def test_acyclic(self):
        C = BoundedComplex.from_matrices(0, [Z, Z], [m([1])])
        assert is_acyclic(C)
