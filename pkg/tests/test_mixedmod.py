from fractions import Fraction

import pytest

from refined_euler.errors import InvalidHomomorphismError, PreconditionError
from refined_euler.exact_linalg import RatMatrix
from refined_euler.mixedmod import (
    LAdicModule,
    MixedModule,
    ModuleHom,
    codivisible_quotient,
    cokernel,
    complete,
    complete_by_limit,
    completion_is_cohomologically_trivial,
    direct_sum,
    exact_at,
    image,
    invariant_factors,
    is_cohomologically_trivial,
    kernel,
    n_torsion,
    reduce_mod_n,
    solve_lift,
    tate_module,
)

pytestmark = pytest.mark.unit

Z = MixedModule.free(1)
Q = MixedModule(q_rank=1)
QZ = MixedModule(qz_rank=1)


def hom(source, target, *rows):
    return ModuleHom(source, target, RatMatrix.from_rows([list(r) for r in rows], cols=source.dim))


class TestModules:
    def test_invariant_factors(self):
        assert invariant_factors([2, 3]) == (6,)
        assert invariant_factors([2, 4, 3]) == (2, 12)

    def test_torsion_must_form_a_chain(self):
        with pytest.raises(PreconditionError):
            MixedModule(torsion=(2, 3))

    def test_from_invariants_drops_trivial_factors(self):
        assert MixedModule.from_invariants(orders=[2, 3, 1]).torsion == (6,)

    def test_str(self):
        assert str(MixedModule(1, (6,), 0, 1)) == "Z + Z/6 + Q/Z"
        assert str(MixedModule.zero()) == "0"

    def test_order(self):
        assert MixedModule(torsion=(2, 4)).order() == 8
        assert Z.order() is None


class TestHomomorphisms:
    def test_torsion_to_free_is_rejected(self):
        with pytest.raises(InvalidHomomorphismError):
            hom(MixedModule(torsion=(2,)), Z, [1])

    def test_rationals_to_free_is_rejected(self):
        with pytest.raises(InvalidHomomorphismError):
            hom(Q, Z, [1])

    def test_divisible_block_must_be_integral(self):
        with pytest.raises(InvalidHomomorphismError):
            hom(QZ, QZ, [Fraction(1, 2)])

    def test_entries_into_qz_reduce_mod_one(self):
        f = hom(Z, QZ, [Fraction(3, 2)])
        assert f.matrix[0, 0] == Fraction(1, 2)

    def test_inverse(self):
        f = hom(MixedModule.free(2), MixedModule.free(2), [1, 1], [0, 1])
        assert f.inverse().matrix == RatMatrix.from_rows([[1, -1], [0, 1]])

    def test_inverse_of_non_isomorphism(self):
        with pytest.raises(PreconditionError):
            hom(Z, Z, [2]).inverse()

    def test_solve_lift(self):
        f = hom(Z, Z, [3])
        assert solve_lift(f, [6]) == (2,)
        assert solve_lift(f, [1]) is None


class TestKernelsAndCokernels:
    def test_kernel_of_multiplication_on_cyclic_group(self):
        Z4 = MixedModule(torsion=(4,))
        K, inclusion = kernel(hom(Z4, Z4, [2]))
        assert K == MixedModule(torsion=(2,))
        assert inclusion.is_injective()

    def test_cokernel_of_diagonal(self):
        Z2 = MixedModule.free(2)
        C, projection = cokernel(hom(Z2, Z2, [2, 0], [0, 3]))
        assert C == MixedModule(torsion=(6,))
        assert projection.is_surjective()

    def test_kernel_of_rationals_onto_qz(self):
        K, _ = kernel(hom(Q, QZ, [1]))
        assert K == Z

    def test_cokernel_of_integers_into_rationals(self):
        C, _ = cokernel(hom(Z, Q, [1]))
        assert C == QZ

    def test_image(self):
        I, _, _ = image(hom(Z, MixedModule(torsion=(6,)), [2]))
        assert I == MixedModule(torsion=(3,))

    def test_exactness(self):
        Z2 = MixedModule(torsion=(2,))
        assert exact_at(hom(Z, Z, [2]), hom(Z, Z2, [1]))
        assert not exact_at(hom(Z, Z, [4]), hom(Z, Z2, [1]))

    def test_direct_sum(self):
        total, injections, projections = direct_sum(MixedModule(torsion=(2,)), MixedModule(torsion=(3,)))
        assert total == MixedModule(torsion=(6,))
        for inj, proj in zip(injections, projections):
            assert proj.compose(inj) == ModuleHom.identity(inj.source)

    def test_codivisible_quotient(self):
        C, projection = codivisible_quotient(MixedModule(free_rank=1, qz_rank=1))
        assert C == Z
        assert projection.is_surjective()

    def test_torsion_and_reduction(self):
        assert n_torsion(MixedModule(torsion=(4,), qz_rank=1), 2) == MixedModule(torsion=(2, 2))
        assert reduce_mod_n(MixedModule(free_rank=1, torsion=(4,)), 2) == MixedModule(torsion=(2, 2))


class TestCompletion:
    def test_complete_cyclic(self):
        assert complete(MixedModule(torsion=(12,)), 2) == LAdicModule(2, 0, (2,))

    def test_complete_kills_divisible_part(self):
        assert complete(MixedModule(free_rank=1, q_rank=2, qz_rank=1), 3) == LAdicModule(3, 1)

    def test_limit_agrees_with_direct_completion(self):
        M = MixedModule(free_rank=1, torsion=(4, 24))
        for l in (2, 3, 5):
            assert complete_by_limit(M, l) == complete(M, l)

    def test_tate_module(self):
        assert tate_module(MixedModule(qz_rank=2, torsion=(3,)), 3) == LAdicModule(3, 2)

    def test_completion_needs_a_prime(self):
        with pytest.raises(PreconditionError):
            complete(Z, 4)


class TestGroupActions:
    def test_induced_module_is_cohomologically_trivial(self):
        swap = MixedModule.free(2).with_action(RatMatrix.from_rows([[0, 1], [1, 0]]), 2)
        assert is_cohomologically_trivial(swap)

    def test_trivial_action_on_integers(self):
        trivial = Z.with_action(RatMatrix.identity(1), 2)
        assert not is_cohomologically_trivial(trivial)
        assert completion_is_cohomologically_trivial(trivial, 3)
        assert not completion_is_cohomologically_trivial(trivial, 2)

    def test_action_order_is_checked(self):
        with pytest.raises(PreconditionError):
            MixedModule.free(2).with_action(RatMatrix.from_rows([[0, -1], [1, 0]]), 2)
