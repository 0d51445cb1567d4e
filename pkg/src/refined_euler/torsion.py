"""
Refined Euler characteristics.

A complex M with finitely generated terms, a finite filtration F on its
cohomology and a rational isomorphism lambda : Gr(H^-)_Q -> Gr(H^+)_Q
determine an isomorphism lambda_M : M^-_Q -> M^+_Q by splitting

    0 -> B^i -> Z^i -> H^i -> 0,    0 -> Z^i -> M^i -> B^{i+1} -> 0

and the filtration steps. The class [M^-, lambda_M, M^+] does not depend
on the splittings. For nearly perfect complexes the class is computed on
the cone of the divisible lifts with the two-step filtration coming from

    0 -> H^i(C)_codiv -> H^i(Cone) -> Hom(L_{i+1}, Z) -> 0,

and once more prime by prime through the codivisible quotient of a
torsion-free replacement.

Graded coordinates are ordered by ascending degree, then ascending
filtration index, then the free basis of each graded piece. Odd degrees
form the source side and even degrees the target side.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from random import Random
from typing import Dict, List, Optional, Sequence, Tuple

import structlog

from refined_euler.complexes import (
    BoundedComplex,
    ChainMap,
    CohomologyRecord,
    PerfectComplex,
    cohomology,
    euler_rank,
    induced_on_cohomology,
    is_acyclic,
    is_quasi_iso,
    perfect_replacement,
    spanning,
    torsion_free_replacement,
)
from refined_euler.errors import (
    ContractViolation,
    DiagramError,
    DimensionMismatchError,
    PreconditionError,
)
from refined_euler.exact_linalg import Number, RatMatrix, as_fraction, unit_vector
from refined_euler.ladic import codivisible_complex, completion_maps
from refined_euler.lattices import Subgroup, Subquotient
from refined_euler.mixedmod import (
    QZ,
    Z,
    MixedModule,
    ModuleHom,
    codivisible_quotient,
    codivisible_section,
    direct_sum,
    kernel,
    kernel_subgroup,
    solve_lift,
    subquotient_module,
)
from refined_euler.npc import ConeData, NearlyPerfectComplex, build_cone, chi, induced_tau
from refined_euler.relk import PosRational, TripleClass, assemble, boundary, g0_class, k0_class, localize

logger = structlog.get_logger()

ODD, EVEN = 1, 0

Vector = Tuple[Fraction, ...]


def _vector(values: Sequence[Number]) -> Vector:
    return tuple(as_fraction(x) for x in values)


@dataclass(frozen=True)
class Filtration:
    """
    Decreasing filtrations H^i = F^0 > F^1 > ... > F^k = 0.

    ``steps[i]`` lists generators of F^1, ..., F^{k-1} in cohomology
    coordinates of H^i; the relations of H^i are added to every step.
    Degrees without steps carry the trivial filtration.
    """

    steps: Dict[int, Tuple[Tuple[Vector, ...], ...]] = field(default_factory=dict)

    @classmethod
    def trivial(cls) -> "Filtration":
        return cls()

    @classmethod
    def two_step(cls, generators: Dict[int, Sequence[Sequence[Number]]]) -> "Filtration":
        """F^1 spanned by the given generators in each listed degree."""
        return cls({i: (tuple(_vector(g) for g in gens),) for i, gens in generators.items()})

    def length(self, i: int) -> int:
        """Number of graded pieces in degree i."""
        return len(self.steps.get(i, ())) + 1


@dataclass(frozen=True)
class GradedTrivialization:
    """lambda : Gr(H^-)_Q -> Gr(H^+)_Q in canonical graded coordinates."""

    matrix: RatMatrix = field(default_factory=lambda: RatMatrix.zeros(0, 0))

    def __post_init__(self):
        if not self.matrix.is_square():
            raise PreconditionError(
                "no trivialization exists at the given ranks",
                rows=self.matrix.rows,
                cols=self.matrix.cols,
            )
        if self.matrix.rows and self.matrix.det() == 0:
            raise PreconditionError("trivialization is not invertible")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Number]]) -> "GradedTrivialization":
        return cls(RatMatrix.from_rows([list(r) for r in rows], cols=len(rows[0]) if rows else 0))

    @classmethod
    def scalar(cls, value: Number) -> "GradedTrivialization":
        return cls(RatMatrix.diagonal([value]))

    @property
    def size(self) -> int:
        return self.matrix.rows

    def inverse(self) -> "GradedTrivialization":
        return GradedTrivialization(self.matrix.inverse())


@dataclass(frozen=True)
class SplittingChoice:
    """
    Rational sections used to split the term sequences.

    The canonical choice takes unit vectors at the pivots of the rational
    differentials and unperturbed cocycle lifts. A seeded choice adds random
    rational combinations of the directions each section may move in.
    """

    seed: Optional[int] = None
    spread: int = 3

    @classmethod
    def canonical(cls) -> "SplittingChoice":
        return cls()

    @classmethod
    def random(cls, seed: int, spread: int = 3) -> "SplittingChoice":
        return cls(seed, spread)

    def rng(self) -> Optional[Random]:
        return None if self.seed is None else Random(self.seed)

    def perturb(
        self, vector: Sequence[Fraction], directions: Sequence[Sequence[Fraction]], rng: Optional[Random]
    ) -> List[Fraction]:
        out = list(vector)
        if rng is None:
            return out
        for direction in directions:
            c = Fraction(rng.randint(-self.spread, self.spread), rng.randint(1, self.spread))
            if c:
                out = [x + c * y for x, y in zip(out, direction)]
        return out


@dataclass(frozen=True)
class GradedPiece:
    """Gr^n(H^i) = F^n / F^{n+1} with coordinates relative to H^i."""

    degree: int
    index: int
    module: MixedModule
    coordinates: Subquotient

    @property
    def rank(self) -> int:
        return self.module.free_rank

    def graded(self, h: Sequence[Number]) -> Vector:
        """Free coordinates in Gr^n of an element h of F^n."""
        image = self.coordinates.project.apply(h)
        return tuple(image[k] for k in self.module.indices(Z))

    def lifts(self) -> List[Vector]:
        """Elements of F^n lifting the free basis of Gr^n."""
        return [self.coordinates.lift.column(k) for k in self.module.indices(Z)]


@dataclass(frozen=True)
class FilteredCohomology:
    complex: BoundedComplex
    record: CohomologyRecord
    pieces: Dict[int, Tuple[GradedPiece, ...]]

    def rank(self, i: int) -> int:
        return sum(p.rank for p in self.pieces.get(i, ()))

    def parity_rank(self, parity: int) -> int:
        return sum(self.rank(i) for i in self.pieces if i % 2 == parity)

    def graded_vector(self, i: int, n: int, h: Sequence[Number]) -> List[Fraction]:
        """Coordinates of h in F^n inside the degree-i block of Gr(H)_Q."""
        pieces = self.pieces[i]
        offset = sum(p.rank for p in pieces[:n])
        out = [Fraction(0)] * self.rank(i)
        out[offset : offset + pieces[n].rank] = pieces[n].graded(h)
        return out

    def graded_module(self, parity: int) -> MixedModule:
        """Gr(H^-) or Gr(H^+) as one finitely generated module in canonical order."""
        orders = [n for i, row in self.pieces.items() if i % 2 == parity for p in row for n in p.module.torsion]
        return MixedModule.from_invariants(self.parity_rank(parity), orders)


def _filtration_chain(F: Filtration, i: int, H: MixedModule) -> List[Subgroup]:
    relations = H.relations()
    chain = [H.lattice()]
    for generators in F.steps.get(i, ()):
        chain.append(Subgroup.from_generators(H.dim, (), list(generators)) + relations)
    chain.append(relations)
    for n, (upper, lower) in enumerate(zip(chain, chain[1:])):
        if not upper.contains_subgroup(lower):
            raise PreconditionError("filtration is not decreasing", degree=i, step=n + 1)
    return chain


def filtered_cohomology(
    M: BoundedComplex, F: Filtration, record: Optional[CohomologyRecord] = None
) -> FilteredCohomology:
    """
    Graded pieces of the filtration on H(M).

    Raises:
        PreconditionError: If H(M) is not finitely generated or the
            filtration is not decreasing
        DimensionMismatchError: If a generator has the wrong length
    """
    record = record or cohomology(M)
    if not record.is_finitely_generated():
        raise PreconditionError("filtered cohomology needs finitely generated cohomology", degrees=record.summary())
    for i, chain in F.steps.items():
        if i not in M.degrees() and any(any(g) for step in chain for g in step):
            raise PreconditionError("filtration given in a degree outside the complex", degree=i)
    pieces = {}
    for i in M.degrees():
        chain = _filtration_chain(F, i, record.H(i))
        row = []
        for n, (upper, lower) in enumerate(zip(chain, chain[1:])):
            module, sq = subquotient_module(upper, lower)
            row.append(GradedPiece(i, n, module, sq))
        pieces[i] = tuple(row)
    return FilteredCohomology(M, record, pieces)


def rational_differential(M: BoundedComplex, i: int) -> RatMatrix:
    """d^i tensored with Q: the block between free coordinates."""
    d = M.differential(i)
    return d.matrix.submatrix(d.target.indices(Z), d.source.indices(Z))


def _free_part(M: MixedModule, vector: Sequence[Fraction]) -> List[Fraction]:
    return [vector[k] for k in M.indices(Z)]


def _parity_degrees(degrees, parity: int) -> List[int]:
    return [i for i in degrees if i % 2 == parity]


def _layout(degrees: List[int], counts: Dict[int, Tuple[int, int, int]]) -> Tuple[Dict[tuple, range], int]:
    positions: Dict[tuple, range] = {}
    offset = 0
    for i in degrees:
        for key, size in zip((("gr", i), ("b", i), ("b", i + 1)), counts[i]):
            positions[key] = range(offset, offset + size)
            offset += size
    return positions, offset


def _frames(
    M: BoundedComplex, fc: FilteredCohomology, s: SplittingChoice
) -> Tuple[Dict[int, RatMatrix], Dict[int, Tuple[int, int, int]]]:
    """Per degree, the basis [graded lifts, B^i, sections of B^{i+1}] of M^i_Q."""
    rng = s.rng()
    D = {i: rational_differential(M, i) for i in range(M.min_degree - 1, M.max_degree + 1)}
    pivots = {i: D[i].rref()[1] for i in D}
    boundaries = {i + 1: [D[i].column(p) for p in pivots[i]] for i in D}
    frames, counts = {}, {}
    for i in M.degrees():
        term = M.term(i)
        rank = term.free_rank
        H = fc.record[i]
        lifts = [[_free_part(term, H.lift(h)) for h in piece.lifts()] for piece in fc.pieces[i]]
        graded = []
        for n, row in enumerate(lifts):
            directions = list(boundaries[i]) + [v for later in lifts[n + 1 :] for v in later]
            graded.extend(s.perturb(v, directions, rng) for v in row)
        cycles = D[i].nullspace().columns()
        sections = []
        for p, beta in zip(pivots[i], boundaries[i + 1]):
            sigma = s.perturb(unit_vector(p, rank), cycles, rng)
            if D[i].apply(sigma) != tuple(beta):
                raise ContractViolation("splitting is not a section of the differential", degree=i)
            sections.append(sigma)
        columns = graded + [list(b) for b in boundaries[i]] + sections
        frame = RatMatrix.from_columns(columns, rank)
        if len(columns) != rank or frame.rank() != rank:
            raise ContractViolation("splittings do not decompose the term", degree=i, rank=rank, columns=len(columns))
        frames[i] = frame
        counts[i] = (len(graded), len(boundaries[i]), len(sections))
    return frames, counts


def lambda_on_terms(
    M: BoundedComplex,
    F: Filtration,
    lam: GradedTrivialization,
    s: Optional[SplittingChoice] = None,
    filtered: Optional[FilteredCohomology] = None,
) -> RatMatrix:
    """
    The isomorphism lambda_M : M^-_Q -> M^+_Q.

    Each M^i_Q is written as Gr(H^i)_Q + B^i_Q + B^{i+1}_Q through the
    splittings; lambda acts on the graded parts and every B^j, which occurs
    once on each side, is mapped identically.

    Raises:
        PreconditionError: If a term is not finitely generated
        DimensionMismatchError: If lambda does not match the graded ranks
        ContractViolation: If a chosen splitting is not a section
    """
    if not all(t.is_finitely_generated for t in M.terms):
        raise PreconditionError("terms must be finitely generated")
    s = s or SplittingChoice.canonical()
    fc = filtered or filtered_cohomology(M, F)
    odd_rank, even_rank = fc.parity_rank(ODD), fc.parity_rank(EVEN)
    if lam.matrix.shape != (even_rank, odd_rank):
        raise DimensionMismatchError(
            "trivialization does not match the graded ranks",
            shape=lam.matrix.shape,
            odd=odd_rank,
            even=even_rank,
        )
    frames, counts = _frames(M, fc, s)
    odd_degrees = _parity_degrees(M.degrees(), ODD)
    even_degrees = _parity_degrees(M.degrees(), EVEN)
    odd_pos, odd_dim = _layout(odd_degrees, counts)
    even_pos, even_dim = _layout(even_degrees, counts)
    if odd_dim != even_dim:
        raise DimensionMismatchError("odd and even terms have different rational ranks", odd=odd_dim, even=even_dim)

    middle = [[Fraction(0)] * odd_dim for _ in range(even_dim)]
    odd_graded = [p for i in odd_degrees for p in odd_pos[("gr", i)]]
    even_graded = [p for i in even_degrees for p in even_pos[("gr", i)]]
    for r, row in enumerate(even_graded):
        for c, col in enumerate(odd_graded):
            middle[row][col] = lam.matrix[r, c]
    for key, cols in odd_pos.items():
        if key[0] != "b" or not cols:
            continue
        rows = even_pos.get(key, range(0))
        if len(rows) != len(cols):
            raise ContractViolation("boundary occurs with different ranks on the two sides", degree=key[1])
        for row, col in zip(rows, cols):
            middle[row][col] = Fraction(1)

    E_odd = RatMatrix.block_diag(*[frames[i] for i in odd_degrees])
    E_even = RatMatrix.block_diag(*[frames[i] for i in even_degrees])
    result = E_even @ RatMatrix.from_rows(middle, cols=odd_dim) @ E_odd.inverse()
    logger.debug("lambda on terms", size=result.rows, seed=s.seed)
    return result


def _side(M: BoundedComplex, parity: int) -> MixedModule:
    terms = [M.term(i) for i in _parity_degrees(M.degrees(), parity)]
    return MixedModule.from_invariants(sum(t.free_rank for t in terms), [n for t in terms for n in t.torsion])


def chi_rel_perfect(
    P: BoundedComplex,
    F: Filtration,
    lam: GradedTrivialization,
    s: Optional[SplittingChoice] = None,
) -> PosRational:
    """
    The class [P^-, lambda_P, P^+] in K_0(Z, Q).

    Raises:
        PreconditionError: If P is not perfect
    """
    if not P.is_perfect():
        raise PreconditionError("refined class of a non-perfect complex")
    return k0_class(TripleClass.free(lambda_on_terms(P, F, lam, s)))


def module_class(
    M: BoundedComplex,
    F: Filtration,
    lam: GradedTrivialization,
    s: Optional[SplittingChoice] = None,
) -> PosRational:
    """[M^-, lambda_M, M^+] in G_0(Z, Q) for finitely generated terms."""
    return g0_class(TripleClass(_side(M, ODD), _side(M, EVEN), lambda_on_terms(M, F, lam, s)))


def graded_class(M: BoundedComplex, F: Filtration, lam: GradedTrivialization) -> PosRational:
    """[Gr(H^-), lambda, Gr(H^+)] in G_0(Z, Q)."""
    fc = filtered_cohomology(M, F)
    return g0_class(TripleClass(fc.graded_module(ODD), fc.graded_module(EVEN), lam.matrix))


def rational_acyclic_class(M: BoundedComplex) -> PosRational:
    """
    prod |H^even| / prod |H^odd| for a complex with finite cohomology.

    Raises:
        PreconditionError: If some cohomology group is infinite
    """
    record = cohomology(M)
    if not all(d.module.is_finite for d in record.degrees.values()):
        raise PreconditionError("complex is not rationally acyclic", degrees=record.summary())
    even = prod(d.module.order() for i, d in record.degrees.items() if i % 2 == EVEN)
    odd = prod(d.module.order() for i, d in record.degrees.items() if i % 2 == ODD)
    return PosRational(Fraction(even, odd))


def trivialization_change_holds(
    P: BoundedComplex,
    F: Filtration,
    lam: GradedTrivialization,
    other: GradedTrivialization,
    s: Optional[SplittingChoice] = None,
) -> bool:
    """chi(P, other) / chi(P, lam) equals the boundary of lam^{-1} other."""
    ratio = chi_rel_perfect(P, F, other, s) / chi_rel_perfect(P, F, lam, s)
    return ratio == boundary(lam.matrix.inverse() @ other.matrix)


@dataclass(frozen=True)
class Surjectification:
    """T with quasi-isomorphisms beta : T -> Q and gamma : T -> P, gamma surjective."""

    complex: PerfectComplex
    beta: ChainMap
    gamma: ChainMap


def surjectify(alpha: ChainMap, check: bool = True) -> Surjectification:
    """
    Replace alpha : Q -> P by a surjective quasi-isomorphism.

    T^i = P^{i-1} + P^i + Q^i with d(x, y, q) = (y, 0, dq), beta the
    projection to Q and gamma(x, y, q) = dx + y + alpha(q).

    Raises:
        PreconditionError: If Q or P is not perfect
        DiagramError: If alpha is not a quasi-isomorphism
        ContractViolation: If a surjectivity or cohomology check fails
    """
    Q, P = alpha.source, alpha.target
    if not (Q.is_perfect() and P.is_perfect()):
        raise PreconditionError("surjectify needs perfect complexes")
    if not is_quasi_iso(alpha):
        raise DiagramError("surjectify needs a quasi-isomorphism")
    low, high = spanning(Q, P)
    if P.terms:
        high = max(high, P.max_degree + 1)
    degrees = range(low, high + 1)
    sums = {i: direct_sum(P.term(i - 1), P.term(i), Q.term(i)) for i in degrees}
    diffs = []
    for i in degrees[:-1]:
        _, _, proj = sums[i]
        _, inj, _ = sums[i + 1]
        diffs.append(inj[0].compose(proj[1]) + inj[2].compose(Q.differential(i)).compose(proj[2]))
    T = PerfectComplex(low, tuple(sums[i][0] for i in degrees), tuple(diffs))
    beta = ChainMap(T, Q, {i: sums[i][2][2] for i in degrees})
    gamma = ChainMap(
        T,
        P,
        {
            i: P.differential(i - 1).compose(sums[i][2][0]) + sums[i][2][1] + alpha.component(i).compose(sums[i][2][2])
            for i in degrees
        },
    )
    if check:
        _check_surjectification(alpha, T, beta, gamma)
    return Surjectification(T, beta, gamma)


def _check_surjectification(alpha: ChainMap, T: PerfectComplex, beta: ChainMap, gamma: ChainMap) -> None:
    P = gamma.target
    if not (is_quasi_iso(beta) and is_quasi_iso(gamma)):
        raise ContractViolation("surjectification maps are not quasi-isomorphisms")
    t_record, p_record = cohomology(T), cohomology(P)
    through = alpha.compose(beta)
    for i in T.degrees():
        g = gamma.component(i)
        if not g.is_surjective():
            raise ContractViolation("gamma is not surjective", degree=i)
        cycles = kernel_subgroup(T.differential(i)).image(g.matrix)
        if not cycles.contains_subgroup(kernel_subgroup(P.differential(i))):
            raise ContractViolation("gamma is not surjective on cocycles", degree=i)
        on_gamma = induced_on_cohomology(gamma, i, t_record, p_record)
        on_through = induced_on_cohomology(through, i, t_record, p_record)
        if on_gamma != on_through:
            raise ContractViolation("H(alpha beta) differs from H(gamma)", degree=i)
    logger.debug("surjectification checked", degrees=len(T.degrees()))


def kernel_complex(gamma: ChainMap) -> Tuple[PerfectComplex, ChainMap]:
    """
    Degreewise kernel of a surjective map of perfect complexes.

    Raises:
        ContractViolation: If the differential leaves the kernel
    """
    T = gamma.source
    kernels = {i: kernel(gamma.component(i)) for i in T.degrees()}
    diffs = []
    for i in T.degrees()[:-1]:
        (Ki, inc), (Kn, inc_next) = kernels[i], kernels[i + 1]
        columns = []
        for j in range(Ki.dim):
            x = solve_lift(inc_next, T.differential(i).matrix.apply(inc.matrix.column(j)))
            if x is None:
                raise ContractViolation("differential leaves the kernel", degree=i)
            columns.append(x)
        diffs.append(ModuleHom(Ki, Kn, RatMatrix.from_columns(columns, Kn.dim)))
    K = PerfectComplex(T.min_degree, tuple(kernels[i][0] for i in T.degrees()), tuple(diffs))
    return K, ChainMap(K, T, {i: kernels[i][1] for i in T.degrees()})


@dataclass(frozen=True)
class SectionDiagram:
    """
    A surjection epsilon : V -> V'' over Q with subspaces K of V and K'' of V''.

    ``subspace`` and ``target_subspace`` hold spanning columns; epsilon must
    map K onto K''.
    """

    epsilon: RatMatrix
    subspace: RatMatrix
    target_subspace: RatMatrix


def _independent_columns(A: RatMatrix) -> List[Vector]:
    _, pivots = A.rref()
    return [A.column(p) for p in pivots]


def _extend_basis(vectors: List[Vector], n: int) -> List[Vector]:
    basis = list(vectors)
    for j in range(n):
        candidate = basis + [tuple(unit_vector(j, n))]
        if RatMatrix.from_columns(candidate, n).rank() == len(candidate):
            basis = candidate
    return basis


def canonical_section(epsilon: RatMatrix) -> RatMatrix:
    """Columns are the particular solutions of epsilon x = e_j."""
    columns = []
    for j in range(epsilon.rows):
        x = epsilon.solve(unit_vector(j, epsilon.rows))
        if x is None:
            raise DiagramError("map is not surjective")
        columns.append(x)
    return RatMatrix.from_columns(columns, epsilon.cols)


def compatible_section(diagram: SectionDiagram, initial: Optional[RatMatrix] = None) -> RatMatrix:
    """
    A section sigma of epsilon with sigma(K'') inside K.

    Starting from any section, each basis vector k of K'' is corrected by the
    difference between its image and a preimage of k in K; the correction
    vanishes on a complement of K''.

    Raises:
        DimensionMismatchError: If the diagram shapes do not fit
        DiagramError: If epsilon is not surjective or does not map K onto K''
        PreconditionError: If the initial map is not a section
        ContractViolation: If the corrected map fails either section identity
    """
    eps, K, K2 = diagram.epsilon, diagram.subspace, diagram.target_subspace
    if K.rows != eps.cols or K2.rows != eps.rows:
        raise DimensionMismatchError("diagram shapes do not fit", epsilon=eps.shape, K=K.shape, K2=K2.shape)
    if eps.rank() != eps.rows:
        raise DiagramError("rows are not exact: epsilon is not surjective")
    restricted = eps @ K
    for column in restricted.columns():
        if K2.solve(column) is None:
            raise DiagramError("diagram does not commute: epsilon does not map K into K''")
    if restricted.rank() != K2.rank():
        raise DiagramError("rows are not exact: K does not surject onto K''")

    sigma0 = canonical_section(eps) if initial is None else initial
    if eps @ sigma0 != RatMatrix.identity(eps.rows):
        raise PreconditionError("initial map is not a section")
    targets = _independent_columns(K2)
    basis = _extend_basis(targets, eps.rows)
    images = []
    for m, b in enumerate(basis):
        start = sigma0.apply(b)
        if m < len(targets):
            kappa = K.apply(restricted.solve(b))
            correction = [x - y for x, y in zip(start, kappa)]
            images.append([x - y for x, y in zip(start, correction)])
        else:
            images.append(list(start))
    sigma = RatMatrix.from_columns(images, eps.cols) @ RatMatrix.from_columns(basis, eps.rows).inverse()

    if eps @ sigma != RatMatrix.identity(eps.rows):
        raise ContractViolation("corrected map is not a section")
    for column in targets:
        if K.solve(sigma.apply(column)) is None:
            raise ContractViolation("section does not send K'' into K")
    return sigma


def pull_back(
    f: ChainMap, F: Filtration, lam: GradedTrivialization
) -> Tuple[Filtration, GradedTrivialization]:
    """
    Filtration and trivialization on the source of a quasi-isomorphism.

    The filtration is the preimage under H(f), and lambda becomes
    Gr(H^+(f))^{-1} lambda Gr(H^-(f)).
    """
    A, B = f.source, f.target
    a_record, b_record = cohomology(A), cohomology(B)
    low, high = spanning(A, B)
    on = {i: induced_on_cohomology(f, i, a_record, b_record) for i in range(low, high + 1)}
    steps = {}
    for i, chain in F.steps.items():
        if i not in A.degrees():
            continue
        back = on[i].inverse()
        steps[i] = tuple(tuple(back.apply(g) for g in step) for step in chain)
    F_a = Filtration(steps)
    fc_a = filtered_cohomology(A, F_a, a_record)
    fc_b = filtered_cohomology(B, F, b_record)
    blocks = {}
    for i in range(low, high + 1):
        columns = [
            fc_b.graded_vector(i, piece.index, on[i].apply(h))
            for piece in fc_a.pieces.get(i, ())
            for h in piece.lifts()
        ]
        blocks[i] = RatMatrix.from_columns(columns, fc_b.rank(i))
    G_odd = RatMatrix.block_diag(*[blocks[i] for i in _parity_degrees(blocks, ODD)])
    G_even = RatMatrix.block_diag(*[blocks[i] for i in _parity_degrees(blocks, EVEN)])
    return F_a, GradedTrivialization(G_even.inverse() @ lam.matrix @ G_odd)


@dataclass(frozen=True)
class InvarianceReport:
    """Classes of one trivialized complex computed along a quasi-isomorphism alpha : Q -> P."""

    target_class: PosRational
    source_class: PosRational
    surjectified_class: PosRational
    kernel_class: PosRational
    sections: Dict[int, RatMatrix]

    @property
    def holds(self) -> bool:
        return (
            self.source_class == self.target_class == self.surjectified_class
            and self.kernel_class == PosRational.one()
        )


def _boundary_diagram(T: PerfectComplex, inclusion: ChainMap, i: int) -> SectionDiagram:
    """T^i_Q -> B^{i+1}(T)_Q with the kernel complex sitting above."""
    D = rational_differential(T, i)
    reduced, pivots = D.rref()
    epsilon = reduced.submatrix(range(len(pivots)), range(D.cols))
    inc = inclusion.component(i)
    K = inc.matrix.submatrix(inc.target.indices(Z), inc.source.indices(Z))
    return SectionDiagram(epsilon, K, epsilon @ K)


def check_filtered_quasi_iso_invariance(
    alpha: ChainMap,
    F: Filtration,
    lam: GradedTrivialization,
    s: Optional[SplittingChoice] = None,
) -> InvarianceReport:
    """
    Compare the refined class on P with the class on Q for alpha : Q -> P.

    The comparison runs through the surjectification T -> P, whose kernel
    complex is acyclic with class one, and builds compatible sections of
    T^i -> B^{i+1}(T) for the kernel sequence in every degree.
    """
    Q, P = alpha.source, alpha.target
    target_class = chi_rel_perfect(P, F, lam, s)
    F_q, lam_q = pull_back(alpha, F, lam)
    source_class = chi_rel_perfect(Q, F_q, lam_q, s)
    surj = surjectify(alpha)
    F_t, lam_t = pull_back(surj.gamma, F, lam)
    surjectified_class = chi_rel_perfect(surj.complex, F_t, lam_t, s)
    K, inclusion = kernel_complex(surj.gamma)
    if not is_acyclic(K):
        raise ContractViolation("kernel of the surjectification is not acyclic")
    kernel_class = chi_rel_perfect(K, Filtration.trivial(), GradedTrivialization(), s)
    sections = {i: compatible_section(_boundary_diagram(surj.complex, inclusion, i)) for i in surj.complex.degrees()}
    report = InvarianceReport(target_class, source_class, surjectified_class, kernel_class, sections)
    logger.debug("quasi-isomorphism invariance", holds=report.holds, value=str(target_class))
    return report


def trivialization_ranks(npc: NearlyPerfectComplex, data: Optional[ConeData] = None) -> Dict[int, Tuple[int, int]]:
    """
    Per degree i, the ranks of Hom(L_{i+1}, Q) and of H^i(C)_codiv tensor Q.

    In the external order the coordinates of degree i are Hom(L_{i+1}, Q)
    first, then the free basis of H^i(C)_codiv; odd i form the source.
    """
    data = data or build_cone(npc)
    degrees = sorted(set(data.complex.degrees()) | set(npc.complex.degrees()))
    out = {}
    for i in degrees:
        codiv, _ = codivisible_quotient(data.source_cohomology.H(i))
        out[i] = (npc.rank(i + 1), codiv.free_rank)
    return out


def _external_rank(ranks: Dict[int, Tuple[int, int]], parity: int) -> int:
    return sum(sum(r) for i, r in ranks.items() if i % 2 == parity)


def _check_shape(lam: GradedTrivialization, ranks: Dict[int, Tuple[int, int]]) -> None:
    odd, even = _external_rank(ranks, ODD), _external_rank(ranks, EVEN)
    if odd != even:
        raise PreconditionError("no trivialization exists at the given ranks", odd=odd, even=even)
    if lam.matrix.shape != (even, odd):
        raise DimensionMismatchError("trivialization has the wrong size", shape=lam.matrix.shape, rank=odd)


External = Dict[int, Tuple[List[Sequence[Fraction]], List[Sequence[Fraction]]]]


def _external_to_internal(fc: FilteredCohomology, externals: External) -> Tuple[RatMatrix, RatMatrix]:
    """Change of basis from the external order to graded coordinates of a two-step filtration."""
    blocks = {}
    for i in sorted(set(fc.pieces) | set(externals)):
        dual, codiv = externals.get(i, ([], []))
        columns = [fc.graded_vector(i, 0, x) for x in dual] + [fc.graded_vector(i, 1, y) for y in codiv]
        block = RatMatrix.from_columns(columns, fc.rank(i))
        if len(columns) != fc.rank(i) or block.rank() != fc.rank(i):
            raise ContractViolation("external basis does not match the graded pieces", degree=i)
        blocks[i] = block
    T_odd = RatMatrix.block_diag(*[blocks[i] for i in _parity_degrees(blocks, ODD)])
    T_even = RatMatrix.block_diag(*[blocks[i] for i in _parity_degrees(blocks, EVEN)])
    return T_odd, T_even


def _rational_route(
    data: ConeData, lam: GradedTrivialization, s: Optional[SplittingChoice]
) -> Tuple[PosRational, PerfectComplex]:
    """The class on a perfect replacement of the cone."""
    P, phi = perfect_replacement(data.complex)
    p_record = cohomology(P)
    generators, externals = {}, {}
    for i in P.degrees():
        witness = data.witnesses.get(i)
        if witness is None:
            continue
        back = induced_on_cohomology(phi, i, p_record, data.cohomology).inverse()
        a, b = witness.into_cone, witness.onto_dual
        generators[i] = [back.apply(c) for c in a.matrix.columns()]
        dual = []
        for k in range(b.target.dim):
            x = solve_lift(b, unit_vector(k, b.target.dim))
            if x is None:
                raise ContractViolation("dual basis vector has no preimage in the cone", degree=i)
            dual.append(back.apply(x))
        codiv = [back.apply(a.apply(unit_vector(j, a.source.dim))) for j in a.source.indices(Z)]
        externals[i] = (dual, codiv)
    F = Filtration.two_step(generators)
    fc = filtered_cohomology(P, F, p_record)
    T_odd, T_even = _external_to_internal(fc, externals)
    internal = GradedTrivialization(T_even @ lam.matrix @ T_odd.inverse())
    return chi_rel_perfect(P, F, internal, s), P


def _prime_route(
    npc: NearlyPerfectComplex, data: ConeData, lam: GradedTrivialization, s: Optional[SplittingChoice]
) -> PosRational:
    """
    The class on the codivisible quotient X of a torsion-free replacement.

    X computes the completions at every prime at once; the filtration is the
    image of H(P)_codiv in H(X) and Gr^0 is identified with Hom(L, Z)
    through the Q/Z coordinates of the next cohomology group and tau.
    """
    C = npc.complex
    c_record = data.source_cohomology
    P, phi = torsion_free_replacement(C)
    X, to_x = codivisible_complex(P)
    p_record, x_record = cohomology(P), cohomology(X)
    generators, externals = {}, {}
    for i in X.degrees():
        left, right = completion_maps(P, i, to_x, p_record, x_record)
        generators[i] = list(left.matrix.columns())
        back = induced_on_cohomology(phi, i, p_record, c_record).inverse()
        _, to_codiv = codivisible_quotient(p_record.H(i))
        Hc = c_record.H(i)
        codiv_c, _ = codivisible_quotient(Hc)
        section = codivisible_section(Hc)
        codiv = [
            left.apply(to_codiv.apply(back.apply(section.apply(unit_vector(j, codiv_c.dim)))))
            for j in codiv_c.indices(Z)
        ]
        dual = []
        r = npc.rank(i + 1)
        if r:
            back_next = induced_on_cohomology(phi, i + 1, p_record, c_record).inverse()
            tau = back_next.compose(induced_tau(npc, i + 1, c_record))
            qz = tau.target.indices(QZ)
            for k in range(r):
                x = solve_lift(right, [tau.matrix[q, k] for q in qz])
                if x is None:
                    raise ContractViolation("lattice dual has no preimage in H(X)", degree=i)
                dual.append(x)
        externals[i] = (dual, codiv)
    F = Filtration.two_step(generators)
    fc = filtered_cohomology(X, F, x_record)
    T_odd, T_even = _external_to_internal(fc, externals)
    internal = GradedTrivialization(T_even @ lam.matrix @ T_odd.inverse())
    return chi_rel_perfect(X, F, internal, s)


def _forgetful_class(data: ConeData, lam: GradedTrivialization, ranks: Dict[int, Tuple[int, int]]) -> PosRational:
    def side(parity: int) -> MixedModule:
        orders = []
        for i in _parity_degrees(ranks, parity):
            codiv, _ = codivisible_quotient(data.source_cohomology.H(i))
            orders.extend(codiv.torsion)
        return MixedModule.from_invariants(_external_rank(ranks, parity), orders)

    return g0_class(TripleClass(side(ODD), side(EVEN), lam.matrix))


@dataclass(frozen=True)
class RefinedClass:
    """The refined class of a trivialized nearly perfect complex with its cross-checks."""

    value: PosRational
    rational_route: PosRational
    prime_route: PosRational
    forgetful: PosRational
    valuations: Dict[int, int]
    euler: int
    chi: int

    @property
    def routes_agree(self) -> bool:
        return self.rational_route == self.prime_route and assemble(self.valuations) == self.rational_route

    @property
    def forgetful_agrees(self) -> bool:
        return self.forgetful == self.value

    @property
    def rank_agrees(self) -> bool:
        return self.euler == self.chi

    @property
    def consistent(self) -> bool:
        return self.routes_agree and self.forgetful_agrees and self.rank_agrees

    def local(self, l: int) -> int:
        return localize(self.value, l)


def refined_class(
    npc: NearlyPerfectComplex,
    lam: GradedTrivialization,
    alternate: Optional[GradedTrivialization] = None,
    s: Optional[SplittingChoice] = None,
) -> RefinedClass:
    """
    Compute the refined class along both routes.

    With an alternate trivialization the classes are computed for it and
    corrected by the boundary of alternate^{-1} lam.

    Raises:
        PreconditionError: If the ranks admit no trivialization or the
            complex is invalid
        DimensionMismatchError: If lambda has the wrong size
    """
    data = build_cone(npc)
    ranks = trivialization_ranks(npc, data)
    _check_shape(lam, ranks)
    used = lam
    correction = PosRational.one()
    if alternate is not None:
        _check_shape(alternate, ranks)
        used = alternate
        correction = boundary(alternate.matrix.inverse() @ lam.matrix)
    rational, P = _rational_route(data, used, s)
    prime = _prime_route(npc, data, used, s)
    rational, prime = rational * correction, prime * correction
    result = RefinedClass(
        value=rational,
        rational_route=rational,
        prime_route=prime,
        forgetful=_forgetful_class(data, lam, ranks),
        valuations=prime.to_valuations(),
        euler=euler_rank(P),
        chi=chi(npc, data),
    )
    logger.debug(
        "refined class",
        value=str(result.value),
        routes_agree=result.routes_agree,
        forgetful_agrees=result.forgetful_agrees,
    )
    return result


def chi_rel_npc(
    npc: NearlyPerfectComplex,
    lam: GradedTrivialization,
    alternate: Optional[GradedTrivialization] = None,
    s: Optional[SplittingChoice] = None,
) -> PosRational:
    """
    Refined Euler characteristic of a trivialized nearly perfect complex.

    Raises:
        PreconditionError: If the ranks admit no trivialization
        ContractViolation: If the two routes, the forgetful image or the
            rank image disagree
    """
    result = refined_class(npc, lam, alternate, s)
    if not result.routes_agree:
        raise ContractViolation(
            "rational and per-prime routes disagree",
            rational=str(result.rational_route),
            prime=str(result.prime_route),
        )
    if not result.forgetful_agrees:
        raise ContractViolation("forgetful image differs", value=str(result.value), forgetful=str(result.forgetful))
    if not result.rank_agrees:
        raise ContractViolation("rank image differs from chi", euler=result.euler, chi=result.chi)
    return result.value
