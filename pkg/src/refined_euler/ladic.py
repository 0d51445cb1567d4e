"""
l-adic completion of complexes.

Completion kills divisible summands and is exact on finitely generated
modules, so the completion of a complex C is the completion of its
codivisible quotient complex X, a complex of finitely generated groups with
the Z/T blocks of the differentials. Z_l is never represented elementwise:
cohomology of the completed complex is the completion of H(X).
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

import structlog

from refined_euler.complexes import (
    BoundedComplex,
    ChainMap,
    CohomologyRecord,
    cohomology,
    cone,
    induced_on_cohomology,
    torsion_free_replacement,
)
from refined_euler.errors import ContractViolation, InvalidHomomorphismError, PreconditionError
from refined_euler.exact_linalg import RatMatrix, unit_vector
from refined_euler.mixedmod import (
    QZ,
    LAdicModule,
    MixedModule,
    ModuleHom,
    codivisible_quotient,
    codivisible_section,
    complete,
    exact_at,
    n_torsion,
    reduce_mod_n,
    require_prime,
    solve_lift,
    tate_module,
)
from refined_euler.npc import NearlyPerfectComplex, build_cone, divisible_lift, induced_tau, require_valid

logger = structlog.get_logger()


@dataclass(frozen=True)
class LAdicComplex:
    """The l-adic completion of a complex, held through its integral model."""

    prime: int
    integral: BoundedComplex

    @property
    def min_degree(self) -> int:
        return self.integral.min_degree

    def degrees(self) -> range:
        return self.integral.degrees()

    @property
    def terms(self) -> Tuple[LAdicModule, ...]:
        return tuple(complete(M, self.prime) for M in self.integral.terms)

    def differential(self, i: int) -> ModuleHom:
        return self.integral.differential(i)

    def cohomology(self) -> Dict[int, LAdicModule]:
        record = cohomology(self.integral)
        return {i: complete(record.H(i), self.prime) for i in self.degrees()}

    def is_acyclic(self) -> bool:
        return all(H.is_zero() for H in self.cohomology().values())


@dataclass(frozen=True)
class LAdicChainMap:
    source: LAdicComplex
    target: LAdicComplex
    integral: ChainMap


def codivisible_complex(C: BoundedComplex) -> Tuple[BoundedComplex, ChainMap]:
    """C / C_div termwise, with the projection C -> C / C_div."""
    if not C.terms:
        return C, ChainMap.identity(C)
    quotients, projections, sections = [], {}, {}
    for i in C.degrees():
        X, proj = codivisible_quotient(C.term(i))
        quotients.append(X)
        projections[i] = proj
        sections[i] = codivisible_section(C.term(i))
    diffs = tuple(
        projections[i + 1].compose(C.differential(i)).compose(sections[i]) for i in range(C.min_degree, C.max_degree)
    )
    X = BoundedComplex(C.min_degree, tuple(quotients), diffs)
    return X, ChainMap(C, X, projections)


def complete_complex(C: BoundedComplex, l: int) -> LAdicComplex:
    """Termwise l-adic completion."""
    require_prime(l)
    X, _ = codivisible_complex(C)
    return LAdicComplex(l, X)


def complete_chain_map(f: ChainMap, l: int) -> LAdicChainMap:
    """Completion of a chain map, induced on the codivisible quotients."""
    A, B = complete_complex(f.source, l), complete_complex(f.target, l)
    components = {}
    for i in f.source.degrees():
        section = codivisible_section(f.source.term(i))
        _, proj = codivisible_quotient(f.target.term(i))
        components[i] = proj.compose(f.component(i)).compose(section)
    return LAdicChainMap(A, B, ChainMap(A.integral, B.integral, components))


def is_quasi_iso_ladic(f: ChainMap, l: int) -> bool:
    """True iff the completed map is a quasi-isomorphism."""
    completed = complete_chain_map(f, l)
    K = cone(completed.integral).complex
    return LAdicComplex(l, K).is_acyclic()


@dataclass(frozen=True)
class Prop22Witness:
    """
    0 -> H^i(P)_codiv^ -> H^i(P^) -> T_l(H^{i+1}(P)_div) -> 0.

    The maps are integral: ``left`` is induced by P -> X and ``right`` sends
    a class x to the Q/Z coordinates of d(x, 0) in H^{i+1}(P), a Bockstein.
    Completion of the integral sequence gives the l-adic one.
    """

    degree: int
    prime: int
    codiv: LAdicModule
    middle: LAdicModule
    tate: LAdicModule
    left: ModuleHom
    right: ModuleHom
    exact: bool

    @property
    def splits(self) -> bool:
        return self.codiv + self.tate == self.middle


def _check_finiteness(H: MixedModule, l: int, degree: int) -> None:
    if not (n_torsion(H, l).is_finite and reduce_mod_n(H, l).is_finite):
        raise PreconditionError("l-torsion or H/l is infinite", degree=degree, module=str(H))


def completion_maps(
    P: BoundedComplex,
    i: int,
    to_x: ChainMap,
    record: CohomologyRecord,
    x_record: CohomologyRecord,
) -> Tuple[ModuleHom, ModuleHom]:
    """
    Integral maps H^i(P)_codiv -> H^i(X) -> Z^c for X = P / P_div.

    The right map lifts a class of X to P^i, applies d and reads the Q/Z
    coordinates of the class in H^{i+1}(P).

    Raises:
        ContractViolation: If the block data is not a homomorphism
    """
    Hi, Hn, Xi = record[i], record[i + 1], x_record[i]
    codiv, _ = codivisible_quotient(Hi.module)
    section = codivisible_section(Hi.module)
    left_matrix = Xi.coordinates.project @ to_x.component(i).matrix @ Hi.coordinates.lift @ section.matrix
    embed = codivisible_section(P.term(i))
    raw = Hn.coordinates.project @ P.differential(i).matrix @ embed.matrix @ Xi.coordinates.lift
    qz_rows = Hn.module.indices(QZ)
    right_matrix = RatMatrix.from_rows([raw.row(j) for j in qz_rows], cols=Xi.module.dim)
    try:
        left = ModuleHom(codiv, Xi.module, left_matrix)
        right = ModuleHom(Xi.module, MixedModule.free(len(qz_rows)), right_matrix)
    except InvalidHomomorphismError as exc:
        raise ContractViolation("completion sequence maps are not homomorphisms", degree=i) from exc
    return left, right


def prop22_sequence(P: BoundedComplex, l: int, i: int, check: bool = True) -> Prop22Witness:
    """
    Witness the completion sequence for a complex with terms Z^a + Q^b.

    Raises:
        PreconditionError: If P has torsion or Q/Z terms or l is not prime
        ContractViolation: If the integral sequence is not exact
    """
    require_prime(l)
    if not P.is_torsion_free():
        raise PreconditionError("completion sequence needs terms Z^a + Q^b")
    record = cohomology(P)
    for j in (i, i + 1):
        _check_finiteness(record.H(j), l, j)
    X, to_x = codivisible_complex(P)
    left, right = completion_maps(P, i, to_x, record, cohomology(X))
    codiv, Xi, Hn = left.source, right.source, record.H(i + 1)
    exact = left.is_injective() and exact_at(left, right) and right.is_surjective()
    if check and not exact:
        raise ContractViolation("completion sequence is not exact", degree=i, prime=l)
    witness = Prop22Witness(
        i,
        l,
        complete(codiv, l),
        complete(Xi, l),
        tate_module(Hn, l),
        left,
        right,
        exact,
    )
    logger.debug("completion sequence", degree=i, prime=l, middle=str(witness.middle))
    return witness


def prop22_naturality(f: ChainMap, l: int, i: int) -> bool:
    """The maps induced by f commute with both maps of the completion sequences."""
    w, w2 = prop22_sequence(f.source, l, i), prop22_sequence(f.target, l, i)
    fx = complete_chain_map(f, l).integral
    on_x = induced_on_cohomology(fx, i)
    on_h = induced_on_cohomology(f, i)
    _, proj = codivisible_quotient(on_h.target)
    on_codiv = proj.compose(on_h).compose(codivisible_section(on_h.source))
    nxt = induced_on_cohomology(f, i + 1)
    rows, cols = nxt.target.indices(QZ), nxt.source.indices(QZ)
    on_tate = ModuleHom(w.right.target, w2.right.target, nxt.matrix.submatrix(rows, cols))
    left_ok = on_x.compose(w.left) == w2.left.compose(on_codiv)
    right_ok = w2.right.compose(on_x) == on_tate.compose(w.right)
    return left_ok and right_ok


@dataclass(frozen=True)
class LAdicReplacement:
    """Minimal perfect Z_l complex: each Z/l^k in H^i is a pair Z_l -l^k-> Z_l in degrees i-1, i."""

    prime: int
    ranks: Dict[int, int]
    elementary: Dict[int, Tuple[int, ...]]

    @property
    def euler(self) -> int:
        return sum((-1) ** (i % 2) * r for i, r in self.ranks.items())


def ladic_minimal_replacement(C: LAdicComplex) -> LAdicReplacement:
    H = C.cohomology()
    if not H:
        return LAdicReplacement(C.prime, {}, {})
    low, high = min(H) - 1, max(H)
    ranks, elementary = {}, {}
    for i in range(low, high + 1):
        here = H.get(i, LAdicModule(C.prime))
        above = H.get(i + 1, LAdicModule(C.prime))
        ranks[i] = here.free_rank + len(here.exponents) + len(above.exponents)
        elementary[i] = above.exponents
    return LAdicReplacement(C.prime, ranks, elementary)


def chi_l(npc: NearlyPerfectComplex, l: int) -> int:
    """
    l-adic Euler characteristic.

    C is replaced by a complex P with terms Z^a + Q^b, completed, and the
    completed complex by its minimal perfect Z_l replacement.

    Raises:
        ContractViolation: If the minimal replacement disagrees with the
            rank sum of the completed complex
    """
    require_prime(l)
    require_valid(npc)
    P, _ = torsion_free_replacement(npc.complex)
    completed = complete_complex(P, l)
    minimal = ladic_minimal_replacement(completed)
    direct = sum((-1) ** (i % 2) * completed.integral.term(i).free_rank for i in completed.degrees())
    if minimal.euler != direct:
        raise ContractViolation("l-adic replacement changes the Euler characteristic", prime=l)
    logger.debug("l-adic euler characteristic", prime=l, value=direct)
    return minimal.euler


@dataclass(frozen=True)
class SnakeCheck:
    prime: int
    precision: int
    degree: int
    matrix: Tuple[Tuple[int, ...], ...]

    @property
    def modulus(self) -> int:
        return self.prime**self.precision

    def is_negative_identity(self) -> bool:
        m = self.modulus
        return all(
            x % m == ((-1 if j == k else 0) % m) for j, row in enumerate(self.matrix) for k, x in enumerate(row)
        )


def snake_sign_check(npc: NearlyPerfectComplex, l: int, k: int, i: int) -> SnakeCheck:
    """
    The connecting automorphism of Hom(L_{i+1}, Z/l^k).

    For a basis vector e: alpha(e) is a coboundary d(p); the class of
    alpha(e / l^k) is tau(e / l^k) and equals the connecting image of p mod
    l^k; the cone cocycle (-e, p) reduces to p mod l^k and is sent to -e by
    the projection of H^i(Cone) onto Hom(L_{i+1}, Z).

    Raises:
        PreconditionError: If l is not prime or k < 1
        ContractViolation: If a step of the chase fails
    """
    require_prime(l)
    if k < 1:
        raise PreconditionError("precision must be positive", precision=k)
    r = npc.rank(i + 1)
    if r == 0:
        return SnakeCheck(l, k, i, ())
    data = build_cone(npc)
    C = npc.complex
    modulus = l**k
    alpha = divisible_lift(npc, i + 1)
    H = data.source_cohomology[i + 1]
    tau_h = induced_tau(npc, i + 1, data.source_cohomology)
    K = data.cone
    Hk = data.cohomology[i]
    b = data.witnesses[i].onto_dual
    columns: List[List[int]] = []
    for col in range(r):
        e = unit_vector(col, r)
        v = alpha.matrix.column(col)
        p = solve_lift(C.differential(i), v)
        if p is None:
            raise ContractViolation("tau of an integral vector is not a coboundary", degree=i + 1)
        scaled = [x / modulus for x in v]
        connecting = H.project(scaled)
        if connecting != tau_h.apply([x / modulus for x in e]):
            raise ContractViolation("connecting image differs from tau", degree=i + 1)
        z = [
            x + y
            for x, y in zip(
                K.injections_source[i].matrix.apply([-x for x in e]),
                K.injections_target[i].matrix.apply(p),
            )
        ]
        if not Hk.is_cocycle(z):
            raise ContractViolation("cone element is not a cocycle", degree=i)
        image = b.apply(Hk.project(z))
        columns.append([_integral(x) % modulus for x in image])
    matrix = tuple(tuple(columns[c][row] for c in range(r)) for row in range(r))
    return SnakeCheck(l, k, i, matrix)


def _integral(x: Fraction) -> int:
    if x.denominator != 1:
        raise ContractViolation("dual coordinate is not integral", value=str(x))
    return x.numerator
