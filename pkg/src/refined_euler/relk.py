"""
Relative K-groups over (Z, Q) as positive rationals.

K_0(Z, Q) and G_0(Z, Q) are both isomorphic to the multiplicative group of
positive rationals: a finite module goes to its order and a triple
[A, g, B] of free modules to |det g|. Classes localize to l-adic valuations
and reassemble from finitely supported valuation vectors.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Dict, Optional, Union

from sympy import factorint

from refined_euler.errors import ContractViolation, DimensionMismatchError, PreconditionError
from refined_euler.exact_linalg import Number, RatMatrix, as_fraction
from refined_euler.mixedmod import (
    Z,
    MixedModule,
    ModuleHom,
    cokernel,
    kernel,
    n_torsion,
    reduce_mod_n,
    require_prime,
)


@dataclass(frozen=True, order=True)
class PosRational:
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", as_fraction(self.value))
        if self.value <= 0:
            raise PreconditionError("class must be a positive rational", value=str(self.value))

    @classmethod
    def one(cls) -> "PosRational":
        return cls(Fraction(1))

    @classmethod
    def of(cls, value: Union[int, str, Fraction]) -> "PosRational":
        return cls(as_fraction(value))

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator

    def __mul__(self, other: "PosRational") -> "PosRational":
        return PosRational(self.value * other.value)

    def __truediv__(self, other: "PosRational") -> "PosRational":
        return PosRational(self.value / other.value)

    def inverse(self) -> "PosRational":
        return PosRational(1 / self.value)

    def to_valuations(self) -> Dict[int, int]:
        """Finitely supported prime -> exponent map."""
        out = {int(p): int(e) for p, e in factorint(self.numerator).items()}
        for p, e in factorint(self.denominator).items():
            out[int(p)] = -int(e)
        return dict(sorted(out.items()))

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


def localize(q: PosRational, l: int) -> int:
    """The l-adic valuation v_l(q)."""
    require_prime(l)
    return q.to_valuations().get(l, 0)


def assemble(valuations: Dict[int, int]) -> PosRational:
    """Product of l^v over a finitely supported valuation vector."""
    value = Fraction(1)
    for l, v in valuations.items():
        require_prime(l)
        value *= Fraction(l) ** v
    return PosRational(value)


@dataclass(frozen=True)
class TripleClass:
    """[A, g, B]: finitely generated A, B and a rational isomorphism g : A_Q -> B_Q on free coordinates."""

    source: MixedModule
    target: MixedModule
    g: RatMatrix = field(default_factory=lambda: RatMatrix.zeros(0, 0))

    def __post_init__(self):
        for M in (self.source, self.target):
            if not M.is_finitely_generated:
                raise PreconditionError("triple modules must be finitely generated", module=str(M))
        if self.g.shape != (self.target.free_rank, self.source.free_rank):
            raise DimensionMismatchError(
                "g does not map the rational source to the rational target",
                shape=self.g.shape,
                source=str(self.source),
                target=str(self.target),
            )
        if self.g.rows and self.g.det() == 0:
            raise PreconditionError("g is not invertible")

    @classmethod
    def free(cls, g: RatMatrix) -> "TripleClass":
        return cls(MixedModule.free(g.cols), MixedModule.free(g.rows), g)

    def then(self, other: "TripleClass") -> "TripleClass":
        """[A, hg, C] from [A, g, B] and [B, h, C]."""
        if other.source != self.target:
            raise DimensionMismatchError("triples are not composable")
        return TripleClass(self.source, other.target, other.g @ self.g)


def _integral_pair(t: TripleClass):
    n = t.g.denominator()
    return t.g.scale(n), n


def _free_to_free(t: TripleClass, h: RatMatrix) -> ModuleHom:
    A, B = t.source, t.target
    rows = [[Fraction(0)] * A.dim for _ in range(B.dim)]
    for r, i in enumerate(B.indices(Z)):
        for c, j in enumerate(A.indices(Z)):
            rows[i][j] = h[r, c]
    return ModuleHom(A, B, RatMatrix.from_rows(rows, cols=A.dim))


def g0_class(t: TripleClass, h: Optional[ModuleHom] = None, n: Optional[int] = None) -> PosRational:
    """
    Class in G_0(Z, Q) of a triple, as |coker h| |nB| / (|ker h| |B/nB|).

    h and n are integral data with h = n g on free coordinates; by default n
    clears the denominators of g and h is zero on torsion.

    Raises:
        PreconditionError: If h/n does not induce g
    """
    if (h is None) != (n is None):
        raise PreconditionError("pass both h and n or neither")
    if h is None:
        scaled, n = _integral_pair(t)
        h = _free_to_free(t, scaled)
    else:
        if h.source != t.source or h.target != t.target:
            raise DimensionMismatchError("h does not map A to B")
        free_block = h.matrix.submatrix(t.target.indices(Z), t.source.indices(Z))
        if n < 1 or free_block != t.g.scale(n):
            raise PreconditionError("h / n does not induce g", n=n)
    coker, _ = cokernel(h)
    ker, _ = kernel(h)
    if not (coker.is_finite and ker.is_finite):
        raise PreconditionError("h is not a rational isomorphism")
    B = t.target
    value = Fraction(coker.order() * n_torsion(B, n).order(), ker.order() * reduce_mod_n(B, n).order())
    return PosRational(value)


def k0_class(t: TripleClass) -> PosRational:
    """
    Class in K_0(Z, Q) of a triple of free modules: |det g|.

    The value is cross-checked against |coker(n g)| / |P / nP|.

    Raises:
        PreconditionError: If A or B is not free
    """
    if not (t.source.is_free and t.target.is_free):
        raise PreconditionError("k0 classes need free modules", source=str(t.source), target=str(t.target))
    if t.source.free_rank != t.target.free_rank:
        raise DimensionMismatchError("free modules of different ranks")
    det = abs(t.g.det()) if t.g.rows else Fraction(1)
    scaled, n = _integral_pair(t)
    coker, _ = cokernel(ModuleHom(t.source, t.target, scaled))
    formula = Fraction(coker.order(), n**t.source.free_rank)
    if formula != det:
        raise ContractViolation("determinant and cokernel formula disagree", det=str(det), formula=str(formula))
    return PosRational(det)


def finite_module_class(M: MixedModule) -> PosRational:
    """
    |M| for a finite module, checked through the resolution Z^t -diag-> Z^t.

    Raises:
        PreconditionError: If M is infinite
    """
    if not M.is_finite:
        raise PreconditionError("module is not finite", module=str(M))
    resolution = TripleClass.free(RatMatrix.diagonal([Fraction(n) for n in M.torsion]))
    value = k0_class(resolution)
    if value.value != M.order():
        raise ContractViolation("resolution class differs from the order", module=str(M))
    return value


def torsion_module_class(M: MixedModule) -> PosRational:
    """[M] -> [0, 0, M] in G_0(Z, Q)."""
    return g0_class(TripleClass(MixedModule.zero(), M))


def boundary(u: Union[Number, RatMatrix]) -> PosRational:
    """Image of an element of K_1(Q) = Q^x: |u|, or |det u| for a matrix."""
    if isinstance(u, RatMatrix):
        value = u.det() if u.rows else Fraction(1)
    else:
        value = as_fraction(u)
    if value == 0:
        raise PreconditionError("boundary of a non-unit")
    return PosRational(abs(value))


def product(classes) -> PosRational:
    return PosRational(prod((c.value for c in classes), start=Fraction(1)))

