"""
Nearly perfect complexes.

A nearly perfect complex is a bounded complex C together with lattice ranks
r_i and maps tau_i identifying (Q/Z)^{r_i} = Hom(L_i, Q/Z) with the maximal
divisible subgroup of H^i(C). This module validates that data, builds the
mapping cone of the divisible lifts Q^{r_i} -> C^i, witnesses the short
exact sequences

    0 -> H^i(C)_codiv -> H^i(Cone) -> Hom(L_{i+1}, Z) -> 0

and computes the Euler characteristic through a perfect replacement of the
cone.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import structlog

from refined_euler.complexes import (
    BoundedComplex,
    ChainMap,
    CohomologyRecord,
    Cone,
    cohomology,
    cone,
    direct_sum_complex,
    euler_rank,
    is_quasi_iso,
    perfect_replacement,
)
from refined_euler.errors import (
    ContractViolation,
    DimensionMismatchError,
    InvalidHomomorphismError,
    PreconditionError,
    RefinedEulerError,
)
from refined_euler.exact_linalg import RatMatrix
from refined_euler.mixedmod import (
    MixedModule,
    ModuleHom,
    action_hom,
    codivisible_quotient,
    codivisible_section,
    cokernel,
    exact_at,
    is_cohomologically_trivial,
    kernel,
)

logger = structlog.get_logger()

TAU_SOURCES = ("qz", "q")


@dataclass(frozen=True)
class TauMap:
    """
    Lattice identification in degree i.

    With source ``qz`` the matrix is a homomorphism (Q/Z)^r -> C^i landing in
    the cocycles; with source ``q`` it is a lift Q^r -> C^i whose restriction
    to Z^r lands in the coboundaries.
    """

    source: str
    matrix: RatMatrix

    def __post_init__(self):
        if self.source not in TAU_SOURCES:
            raise PreconditionError("tau source must be 'qz' or 'q'", source=self.source)


@dataclass(frozen=True)
class NearlyPerfectComplex:
    complex: BoundedComplex
    lattices: Dict[int, int] = field(default_factory=dict)
    tau: Dict[int, TauMap] = field(default_factory=dict)

    def rank(self, i: int) -> int:
        return self.lattices.get(i, 0)

    def lattice_degrees(self) -> List[int]:
        return sorted(i for i, r in self.lattices.items() if r > 0)


@dataclass(frozen=True)
class ValidationIssue:
    degree: Optional[int]
    invariant: str
    message: str

    def __str__(self) -> str:
        where = "global" if self.degree is None else f"degree {self.degree}"
        return f"{where}: {self.invariant}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    issues: Tuple[ValidationIssue, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.issues

    def summary(self) -> List[str]:
        return [str(issue) for issue in self.issues]


def divisible_lift(npc: NearlyPerfectComplex, i: int) -> ModuleHom:
    """
    The lift alpha^i : Q^{r_i} -> C^i of tau_i.

    For a ``qz`` map the lift is tau composed with Q^r -> (Q/Z)^r, which has
    the same matrix.

    Raises:
        PreconditionError: If r_i > 0 and no tau is given
        DimensionMismatchError: If the matrix has the wrong shape
        InvalidHomomorphismError: If the matrix is not a homomorphism
    """
    r = npc.rank(i)
    target = npc.complex.term(i)
    source = MixedModule(q_rank=r)
    if r == 0:
        return ModuleHom.zero(source, target)
    if i not in npc.tau:
        raise PreconditionError("lattice without tau", degree=i)
    tau = npc.tau[i]
    if tau.matrix.shape != (target.dim, r):
        raise DimensionMismatchError("tau matrix has the wrong shape", degree=i, shape=tau.matrix.shape)
    if tau.source == "qz":
        tau_hom = ModuleHom(MixedModule(qz_rank=r), target, tau.matrix)
        return ModuleHom(source, target, tau_hom.matrix)
    return ModuleHom(source, target, tau.matrix)


def induced_tau(npc: NearlyPerfectComplex, i: int, record: CohomologyRecord) -> ModuleHom:
    """tau_i as a map (Q/Z)^{r_i} -> H^i(C)."""
    r = npc.rank(i)
    H = record[i]
    alpha = divisible_lift(npc, i)
    return ModuleHom(MixedModule(qz_rank=r), H.module, H.coordinates.project @ alpha.matrix)


def _action_issues(C: BoundedComplex) -> List[ValidationIssue]:
    issues = []
    with_action = [i for i in C.degrees() if C.term(i).action is not None]
    if not with_action:
        return issues
    orders = {C.term(i).action.order for i in with_action}
    if len(with_action) != len(C.terms) or len(orders) != 1:
        issues.append(ValidationIssue(None, "action", "every term needs an action of the same order"))
        return issues
    for i in C.degrees():
        if not is_cohomologically_trivial(C.term(i)):
            issues.append(ValidationIssue(i, "cohomologically-trivial", "term has nonvanishing Tate cohomology"))
    for i in range(C.min_degree, C.max_degree):
        d = C.differential(i)
        if action_hom(C.term(i + 1)).compose(d) != d.compose(action_hom(C.term(i))):
            issues.append(ValidationIssue(i, "equivariant", "differential does not commute with the action"))
    return issues


def validate(npc: NearlyPerfectComplex) -> ValidationReport:
    """
    Check every invariant of a nearly perfect complex.

    Each failure becomes an issue naming the degree and the invariant.
    Only ContractViolation (including BitCapExceeded) propagates.
    """
    issues: List[ValidationIssue] = []
    C = npc.complex
    for i, r in sorted(npc.lattices.items()):
        if r < 0:
            issues.append(ValidationIssue(i, "lattice-rank", f"negative lattice rank {r}"))
    for i in sorted(npc.tau):
        if npc.rank(i) == 0:
            issues.append(ValidationIssue(i, "tau-without-lattice", "tau given for a degree with r_i = 0"))
    if issues:
        return ValidationReport(tuple(issues))

    try:
        record = cohomology(C)
    except ContractViolation:
        raise
    except RefinedEulerError as exc:
        return ValidationReport((ValidationIssue(None, "cohomology", str(exc)),))

    degrees = sorted(set(C.degrees()) | set(npc.lattice_degrees()))
    for i in degrees:
        H = record[i].module
        r = npc.rank(i)
        if H.q_rank:
            issues.append(ValidationIssue(i, "uniquely-divisible", f"H^{i} = {H} has a Q summand"))
        if H.qz_rank != r:
            issues.append(
                ValidationIssue(i, "div-rank", f"H^{i}_div has Q/Z-rank {H.qz_rank} but r_{i} = {r}")
            )
            continue
        if r == 0:
            continue
        if i not in npc.tau:
            issues.append(ValidationIssue(i, "tau-missing", f"r_{i} = {r} but no tau is given"))
            continue
        try:
            alpha = divisible_lift(npc, i)
        except ContractViolation:
            raise
        except RefinedEulerError as exc:
            issues.append(ValidationIssue(i, "tau-homomorphism", str(exc)))
            continue
        if not C.differential(i).compose(alpha).is_zero():
            issues.append(ValidationIssue(i, "tau-cocycle", "tau does not land in the cocycles"))
            continue
        if not all(record[i].is_coboundary(alpha.matrix.column(k)) for k in range(r)):
            issues.append(ValidationIssue(i, "tau-well-defined", "tau does not vanish on Z^r"))
            continue
        try:
            tau_h = induced_tau(npc, i, record)
        except InvalidHomomorphismError as exc:
            issues.append(ValidationIssue(i, "tau-into-div", str(exc)))
            continue
        if not kernel(tau_h)[0].is_zero():
            issues.append(ValidationIssue(i, "tau-injective", "tau is not injective on cohomology"))
        rest, _ = cokernel(tau_h)
        if rest.qz_rank or rest.q_rank:
            issues.append(ValidationIssue(i, "tau-onto-div", "tau does not hit all of H_div"))
    issues.extend(_action_issues(C))
    logger.debug("validated nearly perfect complex", issues=len(issues), degrees=degrees)
    return ValidationReport(tuple(issues))


def require_valid(npc: NearlyPerfectComplex) -> None:
    report = validate(npc)
    if not report.valid:
        raise PreconditionError("nearly perfect complex is invalid", issues=report.summary())


@dataclass(frozen=True)
class SequenceWitness:
    """0 -> H^i(C)_codiv -a-> H^i(Cone) -b-> Hom(L_{i+1}, Z) -> 0 with recomputed exactness."""

    degree: int
    codiv: MixedModule
    middle: MixedModule
    dual: MixedModule
    into_cone: ModuleHom
    onto_dual: ModuleHom

    def is_exact(self) -> bool:
        return (
            self.into_cone.is_injective()
            and exact_at(self.into_cone, self.onto_dual)
            and self.onto_dual.is_surjective()
        )


@dataclass(frozen=True)
class ConeData:
    npc: NearlyPerfectComplex
    divisible: BoundedComplex
    alpha: ChainMap
    cone: Cone
    source_cohomology: CohomologyRecord
    cohomology: CohomologyRecord
    witnesses: Dict[int, SequenceWitness]

    @property
    def complex(self) -> BoundedComplex:
        return self.cone.complex


def build_cone(npc: NearlyPerfectComplex, check: bool = True) -> ConeData:
    """
    Cone of the divisible lifts (Q^{r_i})_i -> C with zero differential on Q.

    Q^{r_i} plays the role of Hom(L_i, Q) and the cone has finitely generated
    cohomology. For each degree the maps of the short exact sequence are
    built from coordinates: a sends a codivisible class to the class of its
    cocycle lift in the cone, b reads off the Q-component of a cone cocycle.

    Raises:
        PreconditionError: If the nearly perfect complex is invalid
        ContractViolation: If a witnessed sequence is not exact or the cone
            cohomology is not finitely generated
    """
    require_valid(npc)
    C = npc.complex
    if C.terms:
        q_terms = tuple(MixedModule(q_rank=npc.rank(i)) for i in C.degrees())
        q_diffs = tuple(ModuleHom.zero(q_terms[k], q_terms[k + 1]) for k in range(len(q_terms) - 1))
        divisible = BoundedComplex(C.min_degree, q_terms, q_diffs)
    else:
        divisible = BoundedComplex.zero(C.min_degree)
    alpha = ChainMap(divisible, C, {i: divisible_lift(npc, i) for i in C.degrees()})
    K = cone(alpha)
    source_record = cohomology(C)
    record = cohomology(K.complex)
    if not record.is_finitely_generated():
        raise ContractViolation("cone cohomology is not finitely generated", degrees=record.summary())

    witnesses = {}
    for i in K.complex.degrees():
        Hc, Hk = source_record[i], record[i]
        codiv, _ = codivisible_quotient(Hc.module)
        section = codivisible_section(Hc.module)
        a_matrix = Hk.coordinates.project @ K.inclusion.component(i).matrix @ Hc.coordinates.lift @ section.matrix
        dual = MixedModule.free(npc.rank(i + 1))
        try:
            a = ModuleHom(codiv, Hk.module, a_matrix)
            b = ModuleHom(Hk.module, dual, K.projections_source[i].matrix @ Hk.coordinates.lift)
        except InvalidHomomorphismError as exc:
            raise ContractViolation("sequence maps are not homomorphisms", degree=i) from exc
        witness = SequenceWitness(i, codiv, Hk.module, dual, a, b)
        if check and not witness.is_exact():
            raise ContractViolation("codivisible/dual sequence is not exact", degree=i)
        witnesses[i] = witness
    logger.debug("built cone", degrees=record.summary())
    return ConeData(npc, divisible, alpha, K, source_record, record, witnesses)


def chi(npc: NearlyPerfectComplex, data: Optional[ConeData] = None) -> int:
    """Euler characteristic: alternating rank sum of a perfect replacement of the cone."""
    data = data or build_cone(npc)
    P, _ = perfect_replacement(data.complex)
    return euler_rank(P)


def chi_ckps_single_degree(npc: NearlyPerfectComplex) -> int:
    """
    Euler characteristic of a complex concentrated in one degree d.

    With F = Z^{a+t} surjecting onto C_codiv and M the kernel of
    Q^{r_d} + F -> C, (q, f) -> alpha q + f, the value is
    (-1)^d (rank F - rank M).

    Raises:
        PreconditionError: If C is not concentrated in one degree or is invalid
        ContractViolation: If M is not a lattice
    """
    C = npc.complex
    nonzero = [i for i in C.degrees() if not C.term(i).is_zero()]
    if len(nonzero) != 1:
        raise PreconditionError("complex must be nonzero in exactly one degree", degrees=nonzero)
    require_valid(npc)
    d = nonzero[0]
    M = C.term(d).without_action()
    r = npc.rank(d)
    generators = M.free_rank + len(M.torsion)
    phi = codivisible_section(M)
    alpha = divisible_lift(npc, d)
    source = MixedModule(free_rank=generators, q_rank=r)
    g = ModuleHom(source, M, RatMatrix.hstack(phi.matrix, alpha.matrix, rows=M.dim))
    pullback, _ = kernel(g)
    if not pullback.is_free:
        raise ContractViolation("pullback kernel is not free", module=str(pullback))
    return (-1) ** (d % 2) * (generators - pullback.free_rank)


def direct_sum_npc(*parts: NearlyPerfectComplex) -> NearlyPerfectComplex:
    """Degreewise direct sum; lattices add and the lifts are placed blockwise."""
    S, injections, _ = direct_sum_complex(*[p.complex for p in parts])
    degrees = sorted({i for p in parts for i in p.lattice_degrees()})
    lattices, tau = {}, {}
    for i in degrees:
        blocks = [inj.component(i).matrix @ divisible_lift(p, i).matrix for p, inj in zip(parts, injections)]
        total = sum(p.rank(i) for p in parts)
        lattices[i] = total
        tau[i] = TauMap("q", RatMatrix.hstack(*blocks, rows=S.term(i).dim))
    return NearlyPerfectComplex(S, lattices, tau)


def transport(npc: NearlyPerfectComplex, f: ChainMap, check: bool = True) -> NearlyPerfectComplex:
    """
    Push the lattice data along a quasi-isomorphism f : C -> C'.

    Raises:
        PreconditionError: If f does not start at the complex of npc or is
            not a quasi-isomorphism
    """
    if f.source != npc.complex:
        raise PreconditionError("chain map does not start at the complex")
    if check and not is_quasi_iso(f):
        raise PreconditionError("transport needs a quasi-isomorphism")
    tau = {
        i: TauMap("q", f.component(i).compose(divisible_lift(npc, i)).matrix)
        for i in npc.lattice_degrees()
    }
    return NearlyPerfectComplex(f.target, dict(npc.lattices), tau)
