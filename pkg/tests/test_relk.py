from fractions import Fraction

import pytest

from refined_euler.errors import DimensionMismatchError, PreconditionError
from refined_euler.exact_linalg import RatMatrix
from refined_euler.mixedmod import MixedModule, ModuleHom
from refined_euler.relk import (
    PosRational,
    TripleClass,
    assemble,
    boundary,
    finite_module_class,
    g0_class,
    k0_class,
    localize,
    product,
    torsion_module_class,
)

pytestmark = pytest.mark.unit

Z = MixedModule.free(1)


def free_triple(*rows):
    return TripleClass.free(RatMatrix.from_rows([list(r) for r in rows]))


class TestPosRational:
    def test_text_form(self):
        assert str(PosRational.of("2/3")) == "2/3"
        assert str(PosRational.of(5)) == "5/1"

    def test_must_be_positive(self):
        with pytest.raises(PreconditionError):
            PosRational.of(0)
        with pytest.raises(PreconditionError):
            PosRational.of(-2)

    def test_arithmetic(self):
        a, b = PosRational.of(6), PosRational.of("3/4")
        assert a * b == PosRational.of("9/2")
        assert a / b == PosRational.of(8)
        assert b.inverse() == PosRational.of("4/3")

    def test_valuations(self):
        assert PosRational.of("12/5").to_valuations() == {2: 2, 3: 1, 5: -1}
        assert PosRational.one().to_valuations() == {}

    def test_localize_and_assemble(self):
        assert localize(PosRational.of(12), 2) == 2
        assert localize(PosRational.of(12), 5) == 0
        assert assemble({5: 2, 2: -1}) == PosRational.of("25/2")

    def test_assemble_inverts_valuations(self):
        q = PosRational.of("360/77")
        assert assemble(q.to_valuations()) == q

    def test_assemble_needs_primes(self):
        with pytest.raises(PreconditionError):
            assemble({4: 1})


class TestK0:
    def test_determinant(self):
        assert k0_class(free_triple([3, 0], [0, Fraction(1, 2)])) == PosRational.of("3/2")
        assert k0_class(free_triple([2, 0], [0, 4])) == PosRational.of(8)

    def test_sign_is_dropped(self):
        assert k0_class(free_triple([0, 1], [1, 0])) == PosRational.one()

    def test_composition_multiplies(self):
        first, second = free_triple([2]), free_triple([3])
        assert k0_class(first.then(second)) == k0_class(first) * k0_class(second)

    def test_needs_free_modules(self):
        with pytest.raises(PreconditionError):
            k0_class(TripleClass(MixedModule(torsion=(2,)), MixedModule.zero()))

    def test_singular_g_is_rejected(self):
        with pytest.raises(PreconditionError):
            free_triple([1, 2], [2, 4])


class TestG0:
    def test_torsion_modules(self):
        assert torsion_module_class(MixedModule(torsion=(2,))) == PosRational.of(2)
        t = TripleClass(MixedModule(torsion=(3,)), MixedModule(torsion=(2,)))
        assert g0_class(t) == PosRational.of("2/3")

    def test_agrees_with_k0_on_free_modules(self):
        t = free_triple([Fraction(1, 2)])
        assert g0_class(t) == k0_class(t) == PosRational.of("1/2")

    def test_independent_of_the_integral_pair(self):
        t = free_triple([Fraction(1, 2)])
        h = ModuleHom(Z, Z, RatMatrix.from_rows([[3]]))
        assert g0_class(t, h, 6) == g0_class(t)

    def test_pair_must_induce_g(self):
        t = free_triple([Fraction(1, 2)])
        h = ModuleHom(Z, Z, RatMatrix.from_rows([[2]]))
        with pytest.raises(PreconditionError):
            g0_class(t, h, 6)

    def test_mixed_triple(self):
        A = MixedModule(free_rank=1, torsion=(3,))
        B = MixedModule(free_rank=1, torsion=(4,))
        t = TripleClass(A, B, RatMatrix.from_rows([[5]]))
        assert g0_class(t) == PosRational.of("20/3")

    def test_modules_must_be_finitely_generated(self):
        with pytest.raises(PreconditionError):
            TripleClass(MixedModule(qz_rank=1), MixedModule.zero())

    def test_shape_must_match_free_ranks(self):
        with pytest.raises(DimensionMismatchError):
            TripleClass(Z, Z)


class TestBoundary:
    def test_scalars(self):
        assert boundary(5) == PosRational.of(5)
        assert boundary(-6) == PosRational.of(6)

    def test_matrices(self):
        assert boundary(RatMatrix.from_rows([[2, 0], [0, -3]])) == PosRational.of(6)

    def test_non_units(self):
        with pytest.raises(PreconditionError):
            boundary(0)


class TestFiniteModules:
    def test_order(self):
        assert finite_module_class(MixedModule(torsion=(2, 4))) == PosRational.of(8)

    def test_infinite_module(self):
        with pytest.raises(PreconditionError):
            finite_module_class(Z)

    def test_product(self):
        assert product([PosRational.of(2), PosRational.of("1/3")]) == PosRational.of("2/3")
        assert product([]) == PosRational.one()
