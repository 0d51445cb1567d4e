import pytest

from refined_euler.complexes import BoundedComplex, ChainMap
from refined_euler.errors import PreconditionError
from refined_euler.exact_linalg import RatMatrix
from refined_euler.mixedmod import MixedModule
from refined_euler.npc import (
    NearlyPerfectComplex,
    TauMap,
    build_cone,
    chi,
    chi_ckps_single_degree,
    divisible_lift,
    direct_sum_npc,
    transport,
    validate,
)

pytestmark = pytest.mark.unit

QZ = MixedModule(qz_rank=1)


def invariants(npc):
    return {issue.invariant for issue in validate(npc).issues}


class TestValidation:
    def test_worked_instances_are_valid(self, qz_degree3, z_plus_qz_degree3, z5_npc, times_three_npc, q_onto_qz):
        for npc in (qz_degree3, z_plus_qz_degree3, z5_npc, times_three_npc, q_onto_qz):
            assert validate(npc).valid

    def test_missing_lattice(self):
        npc = NearlyPerfectComplex(BoundedComplex.concentrated(QZ, 3))
        assert "div-rank" in invariants(npc)

    def test_missing_tau(self):
        npc = NearlyPerfectComplex(BoundedComplex.concentrated(QZ, 3), {3: 1})
        assert invariants(npc) == {"tau-missing"}

    def test_tau_must_be_injective(self):
        npc = NearlyPerfectComplex(
            BoundedComplex.concentrated(QZ, 3), {3: 1}, {3: TauMap("qz", RatMatrix.from_rows([[2]]))}
        )
        assert invariants(npc) == {"tau-injective"}

    def test_uniquely_divisible_cohomology(self):
        npc = NearlyPerfectComplex(BoundedComplex.concentrated(MixedModule(q_rank=1), 0))
        assert "uniquely-divisible" in invariants(npc)

    def test_tau_without_lattice(self):
        npc = NearlyPerfectComplex(
            BoundedComplex.concentrated(MixedModule.free(1), 0), {}, {0: TauMap("q", RatMatrix.zeros(1, 0))}
        )
        assert invariants(npc) == {"tau-without-lattice"}

    def test_issues_name_the_degree(self):
        report = validate(NearlyPerfectComplex(BoundedComplex.concentrated(QZ, 3)))
        assert any(line.startswith("degree 3") for line in report.summary())

    def test_unknown_tau_source(self):
        with pytest.raises(PreconditionError):
            TauMap("z", RatMatrix.zeros(1, 1))


class TestCone:
    def test_sequences_are_exact(self, qz_degree3):
        data = build_cone(qz_degree3)
        witness = data.witnesses[2]
        assert witness.dual == MixedModule.free(1)
        assert witness.middle == MixedModule.free(1)
        assert witness.codiv.is_zero()
        assert all(w.is_exact() for w in data.witnesses.values())

    def test_cone_has_finitely_generated_cohomology(self, z_plus_qz_degree3):
        data = build_cone(z_plus_qz_degree3)
        assert data.cohomology.is_finitely_generated()

    def test_invalid_instances_are_rejected(self):
        with pytest.raises(PreconditionError):
            build_cone(NearlyPerfectComplex(BoundedComplex.concentrated(QZ, 3)))


class TestEulerCharacteristic:
    def test_worked_values(self, qz_degree3, z_plus_qz_degree3, z5_npc, times_three_npc, q_onto_qz):
        assert chi(qz_degree3) == 1
        assert chi(z_plus_qz_degree3) == 0
        assert chi(z5_npc) == 0
        assert chi(times_three_npc) == 0
        assert chi(q_onto_qz) == 1

    def test_single_degree_formula_agrees(self, qz_degree3, z_plus_qz_degree3, z5_npc):
        for npc in (qz_degree3, z_plus_qz_degree3, z5_npc):
            assert chi_ckps_single_degree(npc) == chi(npc)

    def test_single_degree_formula_needs_one_degree(self, times_three_npc):
        with pytest.raises(PreconditionError):
            chi_ckps_single_degree(times_three_npc)

    def test_additive_under_direct_sums(self, qz_degree3, z5_npc, q_onto_qz):
        total = direct_sum_npc(qz_degree3, z5_npc, q_onto_qz)
        assert validate(total).valid
        assert total.rank(3) == 1
        assert chi(total) == chi(qz_degree3) + chi(z5_npc) + chi(q_onto_qz)

    def test_divisible_lift(self, z_plus_qz_degree3):
        alpha = divisible_lift(z_plus_qz_degree3, 3)
        assert alpha.source == MixedModule(q_rank=1)
        assert alpha.matrix == RatMatrix.from_rows([[0], [1]])
        assert divisible_lift(z_plus_qz_degree3, 2).source.is_zero()

    def test_transport_along_identity(self, qz_degree3):
        moved = transport(qz_degree3, ChainMap.identity(qz_degree3.complex))
        assert validate(moved).valid
        assert chi(moved) == chi(qz_degree3)
