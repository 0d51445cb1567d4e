"""
Bounded cochain complexes of mixed modules.

Provides cohomology with divisible/codivisible parts, mapping cones,
quasi-isomorphism testing, perfect and torsion-free replacements, lifting
of maps through quasi-isomorphisms up to homotopy, and the Euler
characteristic of perfect complexes.

Cone convention: Cone(f)^i = A^{i+1} + B^i with d(a, b) = (-d_A a, f a + d_B b).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import structlog

from refined_euler.errors import (
    ContractViolation,
    DiagramError,
    DimensionMismatchError,
    PreconditionError,
)
from refined_euler.exact_linalg import RatMatrix, unit_vector
from refined_euler.lattices import Subgroup, Subquotient
from refined_euler.mixedmod import (
    MixedModule,
    ModuleHom,
    codivisible_quotient,
    direct_sum,
    direct_sum_hom,
    divisible_part,
    image_subgroup,
    kernel_subgroup,
    solve_lift,
    subquotient_module,
)

logger = structlog.get_logger()


@dataclass(frozen=True)
class BoundedComplex:
    """
    C^min_degree -> ... -> C^max_degree.

    ``differentials[k]`` goes from ``terms[k]`` to ``terms[k + 1]``.
    """

    min_degree: int
    terms: Tuple[MixedModule, ...]
    differentials: Tuple[ModuleHom, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "differentials", tuple(self.differentials))
        if len(self.differentials) != max(len(self.terms) - 1, 0):
            raise DimensionMismatchError(
                "a complex needs one differential between consecutive terms",
                terms=len(self.terms),
                differentials=len(self.differentials),
            )
        for k, d in enumerate(self.differentials):
            if d.source != self.terms[k] or d.target != self.terms[k + 1]:
                raise DimensionMismatchError(
                    "differential does not connect consecutive terms", degree=self.min_degree + k
                )
        for k in range(len(self.differentials) - 1):
            if not self.differentials[k + 1].compose(self.differentials[k]).is_zero():
                raise DiagramError("d o d is not zero", degree=self.min_degree + k)

    def __eq__(self, other: object) -> bool:
        # perfect complexes compare equal to the plain complex with the same data
        if not isinstance(other, BoundedComplex):
            return NotImplemented
        return (self.min_degree, self.terms, self.differentials) == (
            other.min_degree,
            other.terms,
            other.differentials,
        )

    def __hash__(self) -> int:
        return hash((self.min_degree, self.terms, self.differentials))

    @classmethod
    def from_matrices(
        cls, min_degree: int, terms: Sequence[MixedModule], matrices: Sequence[RatMatrix]
    ) -> "BoundedComplex":
        diffs = [ModuleHom(terms[k], terms[k + 1], m) for k, m in enumerate(matrices)]
        return cls(min_degree, tuple(terms), tuple(diffs))

    @classmethod
    def concentrated(cls, module: MixedModule, degree: int) -> "BoundedComplex":
        return cls(degree, (module,), ())

    @classmethod
    def zero(cls, degree: int = 0) -> "BoundedComplex":
        return cls(degree, (), ())

    @property
    def max_degree(self) -> int:
        return self.min_degree + len(self.terms) - 1

    def degrees(self) -> range:
        return range(self.min_degree, self.max_degree + 1)

    def term(self, i: int) -> MixedModule:
        if self.min_degree <= i <= self.max_degree:
            return self.terms[i - self.min_degree]
        return MixedModule.zero()

    def differential(self, i: int) -> ModuleHom:
        """d^i : C^i -> C^{i+1}."""
        if self.min_degree <= i < self.max_degree:
            return self.differentials[i - self.min_degree]
        return ModuleHom.zero(self.term(i), self.term(i + 1))

    def is_perfect(self) -> bool:
        return all(m.is_free for m in self.terms)

    def is_torsion_free(self) -> bool:
        return all(m.is_torsion_free for m in self.terms)

    def shift(self, k: int) -> "BoundedComplex":
        """C[k] with (C[k])^i = C^{i+k} and differential (-1)^k d."""
        sign = -1 if k % 2 else 1
        return BoundedComplex(
            self.min_degree - k,
            self.terms,
            tuple(d.scale(sign) for d in self.differentials),
        )

    def trimmed(self) -> "BoundedComplex":
        """Drop zero terms at both ends."""
        nonzero = [i for i in self.degrees() if not self.term(i).is_zero()]
        if not nonzero:
            return BoundedComplex.zero(self.min_degree)
        return restrict(self, nonzero[0], nonzero[-1])


class PerfectComplex(BoundedComplex):
    """A bounded complex of finitely generated free abelian groups."""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_perfect():
            raise PreconditionError("perfect complexes have free finitely generated terms")

    @classmethod
    def of(cls, C: BoundedComplex) -> "PerfectComplex":
        return cls(C.min_degree, C.terms, C.differentials)


def restrict(C: BoundedComplex, low: int, high: int) -> BoundedComplex:
    """The same complex written over the degree range [low, high]; dropped terms must be zero."""
    for i in C.degrees():
        if not low <= i <= high and not C.term(i).is_zero():
            raise PreconditionError("cannot drop a nonzero term", degree=i)
    terms = tuple(C.term(i) for i in range(low, high + 1))
    diffs = tuple(C.differential(i) for i in range(low, high))
    return type(C)(low, terms, diffs) if isinstance(C, PerfectComplex) else BoundedComplex(low, terms, diffs)


def spanning(*complexes: BoundedComplex) -> Tuple[int, int]:
    lows = [C.min_degree for C in complexes if C.terms]
    highs = [C.max_degree for C in complexes if C.terms]
    if not lows:
        return (0, -1)
    return min(lows), max(highs)


@dataclass(frozen=True)
class ChainMap:
    """Degreewise maps commuting with the differentials."""

    source: BoundedComplex
    target: BoundedComplex
    components: Dict[int, ModuleHom] = field(default_factory=dict)
    check: bool = field(default=True, compare=False)

    def __post_init__(self):
        low, high = spanning(self.source, self.target)
        filled = {}
        for i in range(low, high + 1):
            f = self.components.get(i)
            if f is None:
                f = ModuleHom.zero(self.source.term(i), self.target.term(i))
            elif f.source != self.source.term(i) or f.target != self.target.term(i):
                raise DimensionMismatchError("component has the wrong ends", degree=i)
            filled[i] = f
        object.__setattr__(self, "components", filled)
        if self.check:
            for i in range(low - 1, high + 1):
                left = self.target.differential(i).compose(self.component(i))
                right = self.component(i + 1).compose(self.source.differential(i))
                if left != right:
                    raise DiagramError("chain map does not commute with differentials", degree=i)

    def component(self, i: int) -> ModuleHom:
        if i in self.components:
            return self.components[i]
        return ModuleHom.zero(self.source.term(i), self.target.term(i))

    @classmethod
    def identity(cls, C: BoundedComplex) -> "ChainMap":
        return cls(C, C, {i: ModuleHom.identity(C.term(i)) for i in C.degrees()})

    def compose(self, first: "ChainMap") -> "ChainMap":
        """self after first."""
        low, high = spanning(first.source, self.target)
        return ChainMap(
            first.source,
            self.target,
            {i: self.component(i).compose(first.component(i)) for i in range(low, high + 1)},
        )

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        low, high = spanning(self.source, self.target)
        return ChainMap(
            self.source,
            self.target,
            {i: self.component(i) - other.component(i) for i in range(low, high + 1)},
        )


@dataclass(frozen=True)
class DegreeCohomology:
    """Z^i, B^i and H^i = Z^i / B^i with coordinate maps, in lifted coordinates of C^i."""

    degree: int
    cycles: Subgroup
    boundaries: Subgroup
    module: MixedModule
    coordinates: Subquotient

    @property
    def div(self) -> MixedModule:
        return divisible_part(self.module)[0]

    @property
    def codiv(self) -> MixedModule:
        return codivisible_quotient(self.module)[0]

    def project(self, vector: Sequence) -> Tuple[Fraction, ...]:
        """Class of a cocycle, as a reduced element of H^i."""
        return self.module.reduce(self.coordinates.project.apply(vector))

    def lift(self, element: Sequence) -> Tuple[Fraction, ...]:
        """A cocycle representing the given element of H^i."""
        return self.coordinates.lift.apply(element)

    def is_cocycle(self, vector: Sequence) -> bool:
        return self.cycles.contains(vector)

    def is_coboundary(self, vector: Sequence) -> bool:
        return self.boundaries.contains(vector)


@dataclass(frozen=True)
class CohomologyRecord:
    complex: BoundedComplex
    degrees: Dict[int, DegreeCohomology]

    def __getitem__(self, i: int) -> DegreeCohomology:
        if i in self.degrees:
            return self.degrees[i]
        return _zero_cohomology(i, self.complex.term(i))

    def H(self, i: int) -> MixedModule:
        return self[i].module

    def is_acyclic(self) -> bool:
        return all(d.module.is_zero() for d in self.degrees.values())

    def is_finitely_generated(self) -> bool:
        return all(d.module.is_finitely_generated for d in self.degrees.values())

    def summary(self) -> Dict[int, str]:
        return {i: str(d.module) for i, d in self.degrees.items()}


def _zero_cohomology(i: int, term: MixedModule) -> DegreeCohomology:
    lattice = term.lattice()
    empty = Subquotient(0, (), 0, 0, RatMatrix.zeros(0, term.dim), RatMatrix.zeros(term.dim, 0))
    return DegreeCohomology(i, lattice, lattice, MixedModule.zero(), empty)


def cohomology(C: BoundedComplex) -> CohomologyRecord:
    """
    Cohomology of a bounded complex.

    Z^i is the preimage of the relations of C^{i+1} under d^i inside the
    lattice of C^i, B^i the image of d^{i-1} plus the relations of C^i.

    Raises:
        OutsideModuleClassError: If a subquotient leaves the representable class
    """
    out = {}
    for i in C.degrees():
        Zi = kernel_subgroup(C.differential(i))
        Bi = image_subgroup(C.differential(i - 1))
        H, sq = subquotient_module(Zi, Bi)
        out[i] = DegreeCohomology(i, Zi, Bi, H, sq)
    logger.debug("cohomology computed", degrees={i: str(d.module) for i, d in out.items()})
    return CohomologyRecord(C, out)


def induced_on_cohomology(
    f: ChainMap,
    i: int,
    source: Optional[CohomologyRecord] = None,
    target: Optional[CohomologyRecord] = None,
) -> ModuleHom:
    """H^i(f) : H^i(A) -> H^i(B)."""
    source = source or cohomology(f.source)
    target = target or cohomology(f.target)
    a, b = source[i], target[i]
    matrix = b.coordinates.project @ f.component(i).matrix @ a.coordinates.lift
    return ModuleHom(a.module, b.module, matrix)


@dataclass(frozen=True)
class Cone:
    """Mapping cone of f : A -> B with the canonical maps B -> Cone -> A[1]."""

    complex: BoundedComplex
    inclusion: ChainMap
    projection: ChainMap
    injections_source: Dict[int, ModuleHom]
    injections_target: Dict[int, ModuleHom]
    projections_source: Dict[int, ModuleHom]
    projections_target: Dict[int, ModuleHom]


def cone(f: ChainMap) -> Cone:
    """
    Mapping cone Cone^i = A^{i+1} + B^i, d(a, b) = (-d_A a, f a + d_B b).

    The inclusion B -> Cone and the projection Cone -> A[1] form a
    degreewise split short exact sequence of complexes.
    """
    A, B = f.source, f.target
    low, high = spanning(A.shift(1), B)
    if low > high:
        zero = BoundedComplex.zero()
        return Cone(zero, ChainMap(B, zero), ChainMap(zero, A.shift(1)), {}, {}, {}, {})
    terms, inj_a, inj_b, proj_a, proj_b = [], {}, {}, {}, {}
    for i in range(low, high + 1):
        total, (ia, ib), (pa, pb) = direct_sum(A.term(i + 1), B.term(i))
        terms.append(total)
        inj_a[i], inj_b[i], proj_a[i], proj_b[i] = ia, ib, pa, pb
    diffs = []
    for k, i in enumerate(range(low, high)):
        d = (
            inj_a[i + 1].compose(A.differential(i + 1).scale(-1)).compose(proj_a[i])
            + inj_b[i + 1].compose(f.component(i + 1)).compose(proj_a[i])
            + inj_b[i + 1].compose(B.differential(i)).compose(proj_b[i])
        )
        diffs.append(d)
    K = BoundedComplex(low, tuple(terms), tuple(diffs))
    shifted = A.shift(1)
    inclusion = ChainMap(B, K, {i: inj_b[i] for i in range(low, high + 1)})
    projection = ChainMap(K, shifted, {i: proj_a[i] for i in range(low, high + 1)})
    return Cone(K, inclusion, projection, inj_a, inj_b, proj_a, proj_b)


def is_acyclic(C: BoundedComplex) -> bool:
    return cohomology(C).is_acyclic()


def is_quasi_iso(f: ChainMap) -> bool:
    """True iff the mapping cone of f is acyclic."""
    return is_acyclic(cone(f).complex)


def euler_rank(P: BoundedComplex) -> int:
    """Sum of (-1)^i rank P^i, the Euler characteristic in K_0(Z) = Z."""
    if not P.is_perfect():
        raise PreconditionError("euler_rank needs a perfect complex")
    return sum((-1) ** (i % 2) * P.term(i).free_rank for i in P.degrees())


def cohomology_euler_rank(C: BoundedComplex, record: Optional[CohomologyRecord] = None) -> int:
    """Sum of (-1)^i rank H^i for complexes with finitely generated cohomology."""
    record = record or cohomology(C)
    if not record.is_finitely_generated():
        raise PreconditionError("cohomology is not finitely generated")
    return sum((-1) ** (i % 2) * d.module.free_rank for i, d in record.degrees.items())


def direct_sum_complex(*complexes: BoundedComplex) -> Tuple[BoundedComplex, List[ChainMap], List[ChainMap]]:
    """Degreewise direct sum with its injection and projection chain maps."""
    low, high = spanning(*complexes)
    if low > high:
        zero = BoundedComplex.zero()
        return zero, [ChainMap(C, zero) for C in complexes], [ChainMap(zero, C) for C in complexes]
    terms, injections, projections = [], [], []
    for i in range(low, high + 1):
        total, inj, proj = direct_sum(*[C.term(i) for C in complexes])
        terms.append(total)
        injections.append(inj)
        projections.append(proj)
    diffs = [direct_sum_hom(*[C.differential(i) for C in complexes]) for i in range(low, high)]
    S = BoundedComplex(low, tuple(terms), tuple(diffs))
    inj_maps = [
        ChainMap(C, S, {i: injections[i - low][n] for i in range(low, high + 1)})
        for n, C in enumerate(complexes)
    ]
    proj_maps = [
        ChainMap(S, C, {i: projections[i - low][n] for i in range(low, high + 1)})
        for n, C in enumerate(complexes)
    ]
    return S, inj_maps, proj_maps


def perfect_replacement(C: BoundedComplex, check: bool = True) -> Tuple[PerfectComplex, ChainMap]:
    """
    A perfect complex P with a quasi-isomorphism P -> C.

    Perfect inputs are returned unchanged with the identity. Otherwise, for
    each degree i with H^i = Z^a + (+)Z/n_k, P gets Z^{a+t} in degree i
    mapping to cocycle lifts of the generators and Z^t in degree i-1
    mapping to preimages of n_k times the torsion generators.

    Raises:
        PreconditionError: If some H^i is not finitely generated
        ContractViolation: If the result is not a quasi-isomorphism
    """
    if C.is_perfect():
        P = PerfectComplex.of(C)
        return P, ChainMap.identity(P)
    record = cohomology(C)
    if not record.is_finitely_generated():
        raise PreconditionError(
            "cohomology is not finitely generated", degrees=record.summary()
        )
    low, high = C.min_degree - 1, C.max_degree
    gens: Dict[int, List[Tuple[Fraction, ...]]] = {i: [] for i in range(low, high + 1)}
    rels: Dict[int, List[Tuple[Fraction, ...]]] = {i: [] for i in range(low, high + 1)}
    orders: Dict[int, List[int]] = {i: [] for i in range(low, high + 1)}
    for i in C.degrees():
        H = record[i]
        for k in range(H.module.free_rank + len(H.module.torsion)):
            gens[i].append(H.lift(unit_vector(k, H.module.dim)))
        for k, n in enumerate(H.module.torsion):
            z = gens[i][H.module.free_rank + k]
            w = solve_lift(C.differential(i - 1), [n * x for x in z])
            if w is None:
                raise ContractViolation("torsion relation has no preimage", degree=i)
            rels[i - 1].append(w)
            orders[i].append(n)
    # P^i = Z^{gens_i} + Z^{rels_i}; relation generators of degree i-1 hit torsion generators of degree i
    terms = [MixedModule.free(len(gens[i]) + len(rels[i])) for i in range(low, high + 1)]
    diffs = []
    for i in range(low, high):
        src, tgt = terms[i - low], terms[i + 1 - low]
        M = [[Fraction(0)] * src.dim for _ in range(tgt.dim)]
        base = len(gens[i])
        free = record.H(i + 1).free_rank
        for k, n in enumerate(orders[i + 1]):
            M[free + k][base + k] = Fraction(n)
        diffs.append(ModuleHom(src, tgt, RatMatrix.from_rows(M, cols=src.dim)))
    P = PerfectComplex(low, tuple(terms), tuple(diffs))
    components = {}
    for i in range(low, high + 1):
        cols = [list(v) for v in gens[i] + rels[i]]
        components[i] = ModuleHom(P.term(i), C.term(i), RatMatrix.from_columns(cols, C.term(i).dim))
    phi = ChainMap(P, C, components)
    if check and not is_quasi_iso(phi):
        raise ContractViolation("perfect replacement is not a quasi-isomorphism")
    logger.debug("perfect replacement", ranks=[m.free_rank for m in P.terms], low=low)
    return P, phi


def _relation_columns(M: MixedModule) -> List[List[Fraction]]:
    """Images of the relation generators Z^{t+c} -> Z^{a+t} + Q^{b+c}."""
    cols = []
    for i in M.indices("T"):
        v = [Fraction(0)] * M.dim
        v[i] = Fraction(M.modulus(i))
        cols.append(v)
    for i in M.indices("QZ"):
        cols.append(unit_vector(i, M.dim))
    return cols


def _relation_coefficients(M: MixedModule, v: Sequence[Fraction]) -> List[Fraction]:
    """Coefficients of a vector of the relation subgroup in the relation generators."""
    if any(v[i] for i in M.indices("Z") + M.indices("Q")):
        raise ContractViolation("vector is not a combination of relations")
    out = []
    for i in M.indices("T"):
        c = v[i] / M.modulus(i)
        if c.denominator != 1:
            raise ContractViolation("torsion coordinate is not a multiple of the order")
        out.append(c)
    for i in M.indices("QZ"):
        if v[i].denominator != 1:
            raise ContractViolation("Q/Z coordinate of a relation is not integral")
        out.append(v[i])
    return out


def torsion_free_replacement(C: BoundedComplex, check: bool = False) -> Tuple[BoundedComplex, ChainMap]:
    """
    A quasi-isomorphic complex with terms Z^x + Q^y.

    Every term M = Z^a + (+)Z/n + Q^b + (Q/Z)^c is resolved by
    0 -> Z^{t+c} -> Z^{a+t} + Q^{b+c} -> M -> 0 and the replacement is the
    total complex P^i = F0^i + F1^{i+1} with
    d(x, y) = (D x + rho y, -h x - d1 y), where rho d1 = D rho and
    rho h = D D.
    """
    low, high = C.min_degree - 1, C.max_degree
    if not C.terms:
        return C, ChainMap.identity(C)

    def f0_dim(i: int) -> int:
        return C.term(i).dim

    def f1_dim(i: int) -> int:
        M = C.term(i)
        return len(M.torsion) + M.qz_rank

    def zt(i: int) -> int:
        M = C.term(i)
        return M.free_rank + len(M.torsion)

    def relations(i: int) -> RatMatrix:
        return RatMatrix.from_columns(_relation_columns(C.term(i)), C.term(i).dim)

    def extract(i: int, vectors: Iterable[Sequence[Fraction]]) -> RatMatrix:
        return RatMatrix.from_columns(
            [_relation_coefficients(C.term(i), v) for v in vectors], f1_dim(i)
        )

    terms, perms = [], {}
    for i in range(low, high + 1):
        a = zt(i) + f1_dim(i + 1)
        b = f0_dim(i) - zt(i)
        terms.append(MixedModule(free_rank=a, q_rank=b))
        # module order (F0-ZT, F1, F0-div) from block order (F0, F1)
        order = list(range(zt(i))) + list(range(f0_dim(i), f0_dim(i) + f1_dim(i + 1))) + list(range(zt(i), f0_dim(i)))
        perms[i] = RatMatrix.from_rows([unit_vector(j, len(order)) for j in order], cols=len(order))

    diffs = []
    for i in range(low, high):
        D = C.differential(i).matrix
        D1 = C.differential(i + 1).matrix
        rho_next = relations(i + 1)
        d1 = extract(i + 2, (D1 @ relations(i + 1)).columns())
        h = extract(i + 2, (D1 @ D).columns())
        block = RatMatrix.vstack(
            RatMatrix.hstack(D, rho_next, rows=f0_dim(i + 1)),
            RatMatrix.hstack(-h, -d1, rows=f1_dim(i + 2)),
            cols=f0_dim(i) + f1_dim(i + 1),
        )
        matrix = perms[i + 1] @ block @ perms[i].transpose()
        diffs.append(ModuleHom(terms[i - low], terms[i + 1 - low], matrix))
    P = BoundedComplex(low, tuple(terms), tuple(diffs))
    components = {}
    for i in range(low, high + 1):
        pi = RatMatrix.hstack(
            RatMatrix.identity(f0_dim(i)),
            RatMatrix.zeros(f0_dim(i), f1_dim(i + 1)),
            rows=f0_dim(i),
        )
        components[i] = ModuleHom(P.term(i), C.term(i), pi @ perms[i].transpose())
    phi = ChainMap(P, C, components)
    if check and not is_quasi_iso(phi):
        raise ContractViolation("torsion-free replacement is not a quasi-isomorphism")
    return P, phi


@dataclass(frozen=True)
class HomotopyLift:
    """h : P -> Q with beta h - alpha = d s + s d, s^i : P^i -> C^{i-1}."""

    h: ChainMap
    homotopy: Dict[int, ModuleHom]


def lift_through_quasi_iso(alpha: ChainMap, beta: ChainMap) -> HomotopyLift:
    """
    Lift alpha : P -> C through a quasi-isomorphism beta : Q -> C.

    Maps Psi^i = (h^i, -s^i) : P^i -> Cone(beta)^{i-1} are found from the
    top degree down by solving d Psi^i = (0, alpha^i) - Psi^{i+1} d_P,
    which is possible because the cone is acyclic and P is free.

    Raises:
        PreconditionError: If P is not perfect
        DiagramError: If beta is not a quasi-isomorphism or the maps do not share a target
        ContractViolation: If the homotopy identity fails
    """
    P, C, Qc = alpha.source, alpha.target, beta.source
    if not P.is_perfect():
        raise PreconditionError("source of alpha must be a perfect complex")
    if beta.target != C:
        raise DiagramError("alpha and beta have different targets")
    K = cone(beta)
    if not is_acyclic(K.complex):
        raise DiagramError("beta is not a quasi-isomorphism")
    Kc = K.complex
    psi: Dict[int, ModuleHom] = {}
    for i in reversed(list(P.degrees())):
        Pi = P.term(i)
        wanted = K.injections_target.get(i, None)
        target_map = (
            wanted.compose(alpha.component(i))
            if wanted is not None
            else ModuleHom.zero(Pi, Kc.term(i))
        )
        if i + 1 in psi:
            target_map = target_map - psi[i + 1].compose(P.differential(i))
        cols = []
        d = Kc.differential(i - 1)
        for j in range(Pi.dim):
            y = solve_lift(d, target_map.matrix.column(j))
            if y is None:
                raise ContractViolation("homotopy lifting step has no solution", degree=i)
            cols.append(list(y))
        psi[i] = ModuleHom(Pi, Kc.term(i - 1), RatMatrix.from_columns(cols, Kc.term(i - 1).dim))
    h_components, s_components = {}, {}
    for i in P.degrees():
        pa = K.projections_source.get(i - 1)
        pb = K.projections_target.get(i - 1)
        h_components[i] = (
            pa.compose(psi[i]) if pa is not None else ModuleHom.zero(P.term(i), Qc.term(i))
        )
        s_components[i] = (
            pb.compose(psi[i]).scale(-1) if pb is not None else ModuleHom.zero(P.term(i), C.term(i - 1))
        )
    try:
        h = ChainMap(P, Qc, h_components)
    except DiagramError as exc:
        raise ContractViolation("lifted map is not a chain map") from exc
    for i in P.degrees():
        s_i = s_components[i]
        s_next = s_components.get(i + 1, ModuleHom.zero(P.term(i + 1), C.term(i)))
        lhs = beta.component(i).compose(h.component(i)) - alpha.component(i)
        rhs = C.differential(i - 1).compose(s_i) + s_next.compose(P.differential(i))
        if lhs != rhs:
            raise ContractViolation("homotopy identity fails", degree=i)
    return HomotopyLift(h, s_components)
