"""
The property suites behind ``refined-euler check``.

Each suite lists a handful of properties; every property is checked
with exact arithmetic on freshly generated cases.
"""

from fractions import Fraction
from random import Random
from typing import Dict, List, Optional, Type

from refined_euler.checks.base import MultiPropertySuite, PropertySuite, expect
from refined_euler.checks.generators import (
    Bounds,
    balanced_npc,
    graded_rank,
    random_filtration,
    random_finitely_generated,
    random_induced_module,
    random_int_matrix,
    random_invertible,
    random_npc,
    random_perfect,
    random_quasi_iso,
    random_rational,
    random_section_diagram,
    random_single_degree,
    random_trivialization,
    with_lattice,
)
from refined_euler.complexes import BoundedComplex, cohomology, direct_sum_complex, torsion_free_replacement
from refined_euler.exact_linalg import IntMatrix, RatMatrix, elementary_divisors_oracle, hnf, snf, solve_integral
from refined_euler.ladic import chi_l, is_quasi_iso_ladic, prop22_naturality, prop22_sequence, snake_sign_check
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
    is_cohomologically_trivial,
    kernel,
)
from refined_euler.npc import NearlyPerfectComplex, build_cone, chi, chi_ckps_single_degree, direct_sum_npc
from refined_euler.relk import (
    PosRational,
    TripleClass,
    assemble,
    boundary,
    finite_module_class,
    g0_class,
    k0_class,
    localize,
    torsion_module_class,
)
from refined_euler.torsion import (
    Filtration,
    GradedTrivialization,
    SplittingChoice,
    canonical_section,
    check_filtered_quasi_iso_invariance,
    chi_rel_perfect,
    compatible_section,
    graded_class,
    module_class,
    rational_acyclic_class,
    refined_class,
    trivialization_change_holds,
)

PRIMES = (2, 3, 5, 7)


def chi_from_cohomology(npc: NearlyPerfectComplex) -> int:
    """sum (-1)^i (rank H^i(C)_codiv + r_{i+1}), read off the cohomology of C."""
    C = npc.complex
    record = cohomology(C)
    degrees = set(C.degrees()) | {i - 1 for i in npc.lattice_degrees()}
    return sum((-1) ** (i % 2) * (record.H(i).free_rank + npc.rank(i + 1)) for i in degrees)


def truncate(M: LAdicModule, level: int) -> LAdicModule:
    """M / l^level M, with cyclic factors of order l^level counted as free."""
    free = M.free_rank + sum(1 for k in M.exponents if k >= level)
    return LAdicModule(M.prime, free, tuple(k for k in M.exponents if k < level))


def free_hom(matrix: IntMatrix) -> ModuleHom:
    return ModuleHom(MixedModule.free(matrix.cols), MixedModule.free(matrix.rows), matrix.to_rat())


class LinalgSuite(MultiPropertySuite):
    """Smith and Hermite normal forms and integral solving."""

    name = "linalg"
    kinds = ("snf", "hnf", "solve")

    def _matrix(self, rng: Random) -> IntMatrix:
        b = self.bounds
        return random_int_matrix(rng, rng.randint(1, b.matrix), rng.randint(1, b.matrix), b.entry)

    def _generate_snf(self, rng: Random) -> IntMatrix:
        return self._matrix(rng)

    def _check_snf(self, A: IntMatrix) -> None:
        dec = snf(A)
        expect((dec.U @ A @ dec.V).to_rat() == dec.D.to_rat(), "U A V != D")
        expect(abs(dec.U.det()) == 1 and abs(dec.V.det()) == 1, "transforms are not unimodular")
        D = dec.D
        expect(
            all(D[i, j] == 0 for i in range(D.rows) for j in range(D.cols) if i != j), "D is not diagonal"
        )
        diagonal = dec.diagonal
        expect(all(d >= 0 for d in diagonal), "negative diagonal entry", diagonal=diagonal)
        nonzero = list(dec.invariant_factors)
        expect(diagonal[: len(nonzero)] == tuple(nonzero), "zero diagonal entry before a nonzero one")
        expect(all(b % a == 0 for a, b in zip(nonzero, nonzero[1:])), "no divisibility chain", diagonal=diagonal)
        oracle = elementary_divisors_oracle(A)
        expect(tuple(nonzero) == oracle, "SNF differs from determinantal divisors", snf=nonzero, oracle=oracle)

    def _generate_hnf(self, rng: Random) -> IntMatrix:
        return self._matrix(rng)

    def _check_hnf(self, A: IntMatrix) -> None:
        dec = hnf(A)
        H = dec.H
        expect((dec.U @ A).to_rat() == H.to_rat(), "U A != H")
        expect(abs(dec.U.det()) == 1, "transform is not unimodular")
        for r, p in enumerate(dec.pivots):
            expect(H[r, p] > 0, "pivot is not positive", row=r)
            expect(all(H[r, j] == 0 for j in range(p)), "entries left of a pivot", row=r)
            expect(all(0 <= H[i, p] < H[r, p] for i in range(r)), "entries above a pivot are not reduced", row=r)
        expect(all(H[i, j] == 0 for i in range(len(dec.pivots), H.rows) for j in range(H.cols)), "nonzero tail")

    def _generate_solve(self, rng: Random):
        A = self._matrix(rng)
        x = [rng.randint(-self.bounds.entry, self.bounds.entry) for _ in range(A.cols)]
        return A, A.apply(x)

    def _check_solve(self, data) -> None:
        A, b = data
        y = solve_integral(A, b)
        expect(y is not None, "solvable system reported unsolvable")
        expect(tuple(A.apply(y)) == tuple(b), "integral solution does not solve the system")


class MixedSuite(MultiPropertySuite):
    """Mixed modules: exactness of kernels and cokernels, completion, Tate cohomology."""

    name = "mixed"
    kinds = ("exact", "completion", "tate")

    def _generate_exact(self, rng: Random) -> IntMatrix:
        b = self.bounds
        return random_int_matrix(rng, rng.randint(1, b.matrix), rng.randint(1, b.matrix), b.entry)

    def _check_exact(self, A: IntMatrix) -> None:
        f = free_hom(A)
        K, inclusion = kernel(f)
        C, projection = cokernel(f)
        expect(inclusion.is_injective(), "kernel inclusion is not injective")
        expect(projection.is_surjective(), "cokernel projection is not surjective")
        expect(exact_at(inclusion, f), "not exact at the source")
        expect(exact_at(f, projection), "not exact at the target")
        rank = A.to_rat().rank()
        expect(K.free_rank == A.cols - rank, "kernel rank differs", kernel=str(K))
        expect(C.free_rank == A.rows - rank, "cokernel rank differs", cokernel=str(C))
        expect(
            tuple(n for n in snf(A).invariant_factors if n > 1) == C.torsion,
            "cokernel torsion differs from the Smith form",
            cokernel=str(C),
        )

    def _generate_completion(self, rng: Random) -> MixedModule:
        return random_finitely_generated(rng, self.bounds)

    def _check_completion(self, M: MixedModule) -> None:
        for l in PRIMES:
            closed = complete(M, l)
            expect(closed == complete_by_limit(M, l), "completion differs from the limit", prime=l, module=str(M))
            for level in range(1, 5):
                expect(
                    truncate(closed, level) == complete_by_limit(M, l, level),
                    "completion differs from the quotient at a finite level",
                    prime=l,
                    level=level,
                    module=str(M),
                )

    def _generate_tate(self, rng: Random) -> MixedModule:
        return random_induced_module(rng, rng.choice((2, 3, 4)))

    def _check_tate(self, M: MixedModule) -> None:
        expect(is_cohomologically_trivial(M), "induced module is not cohomologically trivial", module=str(M))
        for l in (2, 3):
            expect(
                completion_is_cohomologically_trivial(M, l),
                "completion is not cohomologically trivial",
                prime=l,
                module=str(M),
            )


class ConeSuite(MultiPropertySuite):
    """Euler characteristics through the cone of the divisible lifts."""

    name = "cone"
    kinds = ("single", "sequence", "additive")

    def _generate_single(self, rng: Random) -> NearlyPerfectComplex:
        return random_single_degree(rng, self.bounds)

    def _check_single(self, npc: NearlyPerfectComplex) -> None:
        value = chi(npc)
        expect(value == chi_ckps_single_degree(npc), "cone and pullback definitions differ", chi=value)
        expect(value == chi_from_cohomology(npc), "chi differs from the cohomology ranks", chi=value)

    def _generate_sequence(self, rng: Random) -> NearlyPerfectComplex:
        return random_npc(rng, self.bounds, rng.randint(-2, 2))

    def _check_sequence(self, npc: NearlyPerfectComplex) -> None:
        data = build_cone(npc, check=False)
        for i, witness in data.witnesses.items():
            expect(witness.is_exact(), "codivisible/dual sequence is not exact", degree=i)
        value = chi(npc, data)
        expect(value == chi_from_cohomology(npc), "chi differs from the cohomology ranks", chi=value)

    def _generate_additive(self, rng: Random):
        return random_npc(rng, self.bounds), random_single_degree(rng, self.bounds, degree=rng.randint(0, 2))

    def _check_additive(self, data) -> None:
        a, b = data
        total = chi(direct_sum_npc(a, b))
        expect(total == chi(a) + chi(b), "chi is not additive on direct sums", total=total)


class LadicSuite(MultiPropertySuite):
    """l-adic Euler characteristics, the completion sequence and the snake sign."""

    name = "ladic"
    kinds = ("chi_l", "sequence", "snake", "quasi_iso")

    def _generate_chi_l(self, rng: Random) -> NearlyPerfectComplex:
        if rng.random() < 0.5:
            return random_single_degree(rng, self.bounds)
        return random_npc(rng, self.bounds)

    def _check_chi_l(self, npc: NearlyPerfectComplex) -> None:
        value = chi(npc)
        for l in PRIMES:
            local = chi_l(npc, l)
            expect(local == value, "chi_l differs from chi", prime=l, chi=value, chi_l=local)

    def _generate_sequence(self, rng: Random):
        return random_npc(rng, self.bounds), rng.choice(PRIMES)

    def _check_sequence(self, data) -> None:
        npc, l = data
        P, _ = torsion_free_replacement(npc.complex)
        record = cohomology(P)
        for i in P.degrees():
            witness = prop22_sequence(P, l, i)
            expect(witness.exact and witness.splits, "completion sequence is not split exact", degree=i, prime=l)
            codiv, _ = codivisible_quotient(record.H(i))
            for level in range(1, 5):
                expect(
                    truncate(complete(codiv, l), level) == complete_by_limit(codiv, l, level),
                    "completion of the codivisible part differs from the limit",
                    degree=i,
                    prime=l,
                    level=level,
                )

    def _generate_snake(self, rng: Random):
        npc = with_lattice(rng, self.bounds)
        degree = rng.choice(npc.lattice_degrees())
        return npc, rng.choice((2, 3, 5)), rng.choice((1, 2, 3)), degree - 1

    def _check_snake(self, data) -> None:
        npc, l, k, i = data
        check = snake_sign_check(npc, l, k, i)
        expect(check.is_negative_identity(), "connecting map is not -1", prime=l, precision=k, degree=i)

    def _generate_quasi_iso(self, rng: Random):
        return random_quasi_iso(rng, self.bounds), rng.choice(PRIMES)

    def _check_quasi_iso(self, data) -> None:
        alpha, l = data
        expect(is_quasi_iso_ladic(alpha, l), "completion of a quasi-isomorphism is not one", prime=l)
        for i in alpha.source.degrees():
            expect(prop22_naturality(alpha, l, i), "completion sequence is not natural", prime=l, degree=i)


class RelkSuite(MultiPropertySuite):
    """Relative K-groups over (Z, Q): determinants, cokernels, boundaries, valuations."""

    name = "relk"
    kinds = ("k0", "cokernel", "g0", "boundary", "valuations", "finite")

    def _generate_k0(self, rng: Random):
        n = rng.randint(0, self.bounds.rank)
        return random_invertible(rng, n), random_invertible(rng, n)

    def _check_k0(self, data) -> None:
        g, h = data
        first, second = TripleClass.free(g), TripleClass.free(h)
        det = abs(g.det()) if g.rows else Fraction(1)
        expect(k0_class(first).value == det, "k0 class is not |det|")
        expect(k0_class(first.then(second)) == k0_class(first) * k0_class(second), "k0 is not multiplicative")

    def _generate_cokernel(self, rng: Random) -> IntMatrix:
        n = rng.randint(1, self.bounds.matrix)
        while True:
            A = random_int_matrix(rng, n, n, self.bounds.entry)
            if A.det():
                return A

    def _check_cokernel(self, A: IntMatrix) -> None:
        C, _ = cokernel(free_hom(A))
        value = k0_class(TripleClass.free(A.to_rat()))
        expect(C.is_finite and value.value == C.order(), "class differs from the cokernel order", cokernel=str(C))

    def _generate_g0(self, rng: Random):
        b = self.bounds
        free = rng.randint(0, b.rank)
        parts = []
        for _ in range(2):
            a = MixedModule.from_invariants(free, [rng.randint(2, b.torsion) for _ in range(rng.randint(0, 2))])
            c = MixedModule.from_invariants(free, [rng.randint(2, b.torsion) for _ in range(rng.randint(0, 2))])
            parts.append((a, c, random_invertible(rng, free)))
        return parts, rng.randint(1, 3)

    def _check_g0(self, data) -> None:
        parts, k = data
        classes = []
        for A, B, g in parts:
            t = TripleClass(A, B, g)
            value = g0_class(t)
            n = g.denominator() * k
            scaled = g.scale(n)
            rows = [[Fraction(0)] * A.dim for _ in range(B.dim)]
            for r in range(B.free_rank):
                for c in range(A.free_rank):
                    rows[r][c] = scaled[r, c]
            h = ModuleHom(A, B, RatMatrix.from_rows(rows, cols=A.dim))
            expect(g0_class(t, h, n) == value, "class depends on the integral representative", n=n)
            classes.append(value)
        (A1, B1, g1), (A2, B2, g2) = parts
        source, _, _ = direct_sum(A1, A2)
        target, _, _ = direct_sum(B1, B2)
        total = g0_class(TripleClass(source, target, RatMatrix.block_diag(g1, g2)))
        expect(total == classes[0] * classes[1], "g0 class is not additive on direct sums")

    def _generate_boundary(self, rng: Random):
        n = rng.randint(1, self.bounds.rank)
        u = Fraction(0)
        while not u:
            u = random_rational(rng, self.bounds.entry)
        return random_invertible(rng, n), random_invertible(rng, n), u

    def _check_boundary(self, data) -> None:
        g, h, u = data
        expect(boundary(g @ h) == boundary(g) * boundary(h), "boundary is not multiplicative")
        expect(boundary(u).value == abs(u), "boundary of a unit is not its absolute value")
        expect(boundary(g) == k0_class(TripleClass.free(g)), "boundary differs from the equal-ends triple")

    def _generate_valuations(self, rng: Random) -> PosRational:
        return PosRational(Fraction(rng.randint(1, self.bounds.torsion), rng.randint(1, self.bounds.torsion)))

    def _check_valuations(self, q: PosRational) -> None:
        valuations = q.to_valuations()
        expect(assemble(valuations) == q, "assembled valuations differ", value=str(q))
        for l in PRIMES:
            expect(localize(q, l) == valuations.get(l, 0), "local valuation differs", prime=l, value=str(q))

    def _generate_finite(self, rng: Random) -> MixedModule:
        return MixedModule.from_invariants(0, [rng.randint(2, self.bounds.torsion) for _ in range(rng.randint(0, 3))])

    def _check_finite(self, M: MixedModule) -> None:
        expect(finite_module_class(M).value == M.order(), "resolution class differs", module=str(M))
        expect(torsion_module_class(M).value == M.order(), "G0 class of a finite module differs", module=str(M))


class TorsionSuite(MultiPropertySuite):
    """Refined Euler characteristics of perfect and nearly perfect complexes."""

    name = "torsion"
    kinds = ("splitting", "acyclic", "change", "rational_acyclic", "module", "quasi_iso", "section", "npc")

    def _trivialized(self, rng: Random, P: BoundedComplex):
        F = random_filtration(rng, P)
        return P, F, random_trivialization(rng, graded_rank(P, 1))

    def _generate_splitting(self, rng: Random):
        P, F, lam = self._trivialized(rng, random_perfect(rng, self.bounds, rng.randint(-1, 1)))
        return P, F, lam, [rng.randrange(1 << 30) for _ in range(5)]

    def _check_splitting(self, data) -> None:
        P, F, lam, seeds = data
        value = chi_rel_perfect(P, F, lam)
        for seed in seeds:
            other = chi_rel_perfect(P, F, lam, SplittingChoice.random(seed))
            expect(other == value, "class depends on the splitting", seed=seed, canonical=str(value), other=str(other))

    def _generate_acyclic(self, rng: Random) -> BoundedComplex:
        return random_perfect(rng, self.bounds, rng.randint(-1, 1), free_pairs=0, torsion_pairs=0)

    def _check_acyclic(self, P: BoundedComplex) -> None:
        value = chi_rel_perfect(P, Filtration.trivial(), GradedTrivialization())
        expect(value == PosRational.one(), "acyclic complex has a nontrivial class", value=str(value))

    def _generate_change(self, rng: Random):
        P, F, lam = self._trivialized(rng, random_perfect(rng, self.bounds, 0, free_pairs=1))
        u = Fraction(0)
        while not u:
            u = random_rational(rng, self.bounds.entry)
        line = rng.randrange(lam.size) if lam.size else None
        return P, F, lam, u, line

    def _check_change(self, data) -> None:
        P, F, lam, u, line = data
        if line is None:
            expect(trivialization_change_holds(P, F, lam, lam), "class changes without a change of lambda")
            return
        scale = RatMatrix.diagonal([u if k == line else Fraction(1) for k in range(lam.size)])
        other = GradedTrivialization(lam.matrix @ scale)
        ratio = chi_rel_perfect(P, F, other) / chi_rel_perfect(P, F, lam)
        expect(ratio.value == abs(u), "scaling a graded line does not scale the class", u=str(u), ratio=str(ratio))
        expect(trivialization_change_holds(P, F, lam, other), "class change differs from the boundary")

    def _generate_rational_acyclic(self, rng: Random):
        P = random_perfect(rng, self.bounds, rng.randint(-1, 1), free_pairs=0)
        return P, random_filtration(rng, P)

    def _check_rational_acyclic(self, data) -> None:
        P, F = data
        value = chi_rel_perfect(P, F, GradedTrivialization())
        expected = rational_acyclic_class(P)
        expect(value == expected, "class differs from the cohomology orders", value=str(value), orders=str(expected))

    def _generate_module(self, rng: Random):
        low = rng.randint(-1, 1)
        P = random_perfect(rng, self.bounds, low)
        high = low + self.bounds.length - 1
        points = [
            BoundedComplex.concentrated(
                MixedModule(torsion=(rng.randint(2, self.bounds.torsion),)), rng.randint(low, high)
            )
            for _ in range(rng.randint(1, 2))
        ]
        M, _, _ = direct_sum_complex(P, *points)
        F, lam = random_filtration(rng, M), random_trivialization(rng, graded_rank(M, 1))
        return M, F, lam, rng.randrange(1 << 30)

    def _check_module(self, data) -> None:
        M, F, lam, seed = data
        value = module_class(M, F, lam, SplittingChoice.random(seed))
        expected = graded_class(M, F, lam)
        expect(value == expected, "term class differs from the graded class", terms=str(value), graded=str(expected))

    def _generate_quasi_iso(self, rng: Random):
        alpha = random_quasi_iso(rng, self.bounds, rng.randint(-1, 1))
        P = alpha.target
        return alpha, random_filtration(rng, P), random_trivialization(rng, graded_rank(P, 1))

    def _check_quasi_iso(self, data) -> None:
        alpha, F, lam = data
        report = check_filtered_quasi_iso_invariance(alpha, F, lam)
        expect(
            report.holds,
            "class is not invariant under the quasi-isomorphism",
            target=str(report.target_class),
            source=str(report.source_class),
            surjectified=str(report.surjectified_class),
            kernel=str(report.kernel_class),
        )

    def _generate_section(self, rng: Random):
        diagram = random_section_diagram(rng, self.bounds)
        null = diagram.epsilon.nullspace()
        mix = random_int_matrix(rng, null.cols, diagram.epsilon.rows, 2).to_rat() if null.cols else None
        return diagram, mix

    def _check_section(self, data) -> None:
        diagram, mix = data
        initial = canonical_section(diagram.epsilon)
        if mix is not None:
            initial = initial + diagram.epsilon.nullspace() @ mix
        for start in (None, initial):
            sigma = compatible_section(diagram, start)
            identity = RatMatrix.identity(diagram.epsilon.rows)
            expect(diagram.epsilon @ sigma == identity, "not a section")
            for column in diagram.target_subspace.columns():
                expect(diagram.subspace.solve(sigma.apply(column)) is not None, "section leaves the subspace")

    def _generate_npc(self, rng: Random):
        npc, n = balanced_npc(rng, self.bounds, rng.randint(-1, 1))
        lam = random_trivialization(rng, n)
        alternates = [random_trivialization(rng, n) for _ in range(3)]
        return npc, lam, alternates, rng.randrange(1 << 30)

    def _check_npc(self, data) -> None:
        npc, lam, alternates, seed = data
        result = refined_class(npc, lam, s=SplittingChoice.random(seed))
        expect(
            result.routes_agree,
            "rational and per-prime routes disagree",
            rational=str(result.rational_route),
            prime=str(result.prime_route),
        )
        expect(assemble(result.valuations) == result.value, "valuation vector does not assemble to the class")
        expect(result.rank_agrees, "rank image differs from chi", euler=result.euler, chi=result.chi)
        expect(
            result.forgetful_agrees,
            "forgetful image differs",
            value=str(result.value),
            forgetful=str(result.forgetful),
        )
        for k, other in enumerate(alternates):
            value = refined_class(npc, lam, alternate=other).value
            expect(value == result.value, "class depends on the alternate trivialization", alternate=k)


SUITES: Dict[str, Type[PropertySuite]] = {
    suite.name: suite for suite in (LinalgSuite, MixedSuite, ConeSuite, LadicSuite, RelkSuite, TorsionSuite)
}


def resolve(name: str, bounds: Optional[Bounds] = None) -> List[PropertySuite]:
    """Instantiate one suite by name, or every suite for ``all``."""
    if name == "all":
        return [cls(bounds) for cls in SUITES.values()]
    if name not in SUITES:
        raise KeyError(f"unknown suite: {name}")
    return [SUITES[name](bounds)]
