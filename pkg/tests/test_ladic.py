import pytest

from refined_euler.complexes import BoundedComplex, ChainMap, torsion_free_replacement
from refined_euler.errors import PreconditionError
from refined_euler.ladic import (
    chi_l,
    complete_chain_map,
    complete_complex,
    is_quasi_iso_ladic,
    prop22_naturality,
    ladic_minimal_replacement,
    prop22_sequence,
    snake_sign_check,
)
from refined_euler.mixedmod import LAdicModule, MixedModule, ModuleHom
from refined_euler.npc import chi

pytestmark = pytest.mark.unit

PRIMES = (2, 3, 5)


class TestChiL:
    def test_agrees_with_chi(self, qz_degree3, z_plus_qz_degree3, z5_npc, times_three_npc, q_onto_qz):
        for npc in (qz_degree3, z_plus_qz_degree3, z5_npc, times_three_npc, q_onto_qz):
            expected = chi(npc)
            for l in PRIMES:
                assert chi_l(npc, l) == expected

    def test_needs_a_prime(self, qz_degree3):
        with pytest.raises(PreconditionError):
            chi_l(qz_degree3, 6)


class TestCompletionSequence:
    @pytest.fixture
    def replacement(self):
        C = BoundedComplex.concentrated(MixedModule(torsion=(4,), qz_rank=1), 0)
        P, _ = torsion_free_replacement(C)
        return P

    def test_torsion_degree(self, replacement):
        witness = prop22_sequence(replacement, 2, 0)
        assert witness.exact
        assert witness.codiv == LAdicModule(2, 0, (2,))
        assert witness.tate.is_zero()
        assert witness.splits

    def test_tate_degree(self, replacement):
        witness = prop22_sequence(replacement, 2, -1)
        assert witness.exact
        assert witness.codiv.is_zero()
        assert witness.tate == LAdicModule(2, 1)
        assert witness.middle == LAdicModule(2, 1)

    def test_prime_away_from_torsion(self, replacement):
        witness = prop22_sequence(replacement, 3, 0)
        assert witness.codiv.is_zero()
        assert witness.splits

    def test_needs_torsion_free_terms(self):
        C = BoundedComplex.concentrated(MixedModule(torsion=(4,)), 0)
        with pytest.raises(PreconditionError):
            prop22_sequence(C, 2, 0)

    @pytest.mark.parametrize("factor", [1, 2, 3])
    def test_natural_in_the_complex(self, times_three, factor):
        f = ChainMap(
            times_three,
            times_three,
            {i: ModuleHom.identity(MixedModule.free(1)).scale(factor) for i in times_three.degrees()},
        )
        for i in (-1, 0, 1):
            assert prop22_naturality(f, 3, i)


class TestSnakeSign:
    def test_connecting_map_is_minus_identity(self, qz_degree3):
        check = snake_sign_check(qz_degree3, 2, 3, 2)
        assert check.matrix == ((7,),)
        assert check.is_negative_identity()

    def test_other_precision(self, qz_degree3):
        assert snake_sign_check(qz_degree3, 5, 2, 2).is_negative_identity()

    def test_degrees_without_lattice(self, z5_npc):
        assert snake_sign_check(z5_npc, 3, 1, 0).matrix == ()

    def test_precision_must_be_positive(self, qz_degree3):
        with pytest.raises(PreconditionError):
            snake_sign_check(qz_degree3, 2, 0, 2)


class TestLAdicQuasiIso:
    def test_multiplication_by_three(self):
        Z = BoundedComplex.concentrated(MixedModule.free(1), 0)
        f = ChainMap(Z, Z, {0: ModuleHom.identity(MixedModule.free(1)).scale(3)})
        assert is_quasi_iso_ladic(f, 2)
        assert not is_quasi_iso_ladic(f, 3)


class TestMinimalReplacement:
    def test_cyclic_cohomology(self, times_three):
        replacement = ladic_minimal_replacement(complete_complex(times_three, 3))
        assert replacement.elementary[0] == (1,)
        assert replacement.ranks[0] == replacement.ranks[1] == 1
        assert replacement.euler == 0

    def test_prime_away_from_torsion(self, times_three):
        replacement = ladic_minimal_replacement(complete_complex(times_three, 2))
        assert all(r == 0 for r in replacement.ranks.values())

    @pytest.mark.parametrize("factor,l,expected", [(2, 3, True), (2, 2, True), (3, 3, False), (3, 2, True)])
    def test_scaled_identity(self, times_three, factor, l, expected):
        f = ChainMap(
            times_three,
            times_three,
            {i: ModuleHom.identity(MixedModule.free(1)).scale(factor) for i in times_three.degrees()},
        )
        assert complete_chain_map(f, l).source.prime == l
        assert is_quasi_iso_ladic(f, l) is expected
