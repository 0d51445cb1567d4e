"""
Seeded random instances for the property suites.

Everything here draws from a caller-supplied ``random.Random`` so a suite run
is reproducible from its seed. Complexes are assembled from small pieces
whose cohomology is known (points, multiplication pairs, divisible points,
lattice cokernels). Perfect parts are scrambled by unimodular changes of
basis in every degree and nearly perfect ones by random automorphisms of
every term, which mixes the pieces and their lattice lifts.
"""

from fractions import Fraction
from random import Random
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field

from refined_euler.complexes import BoundedComplex, ChainMap, cohomology, direct_sum_complex
from refined_euler.exact_linalg import IntMatrix, RatMatrix
from refined_euler.mixedmod import Q, QZ, T, Z, MixedModule, ModuleHom
from refined_euler.npc import NearlyPerfectComplex, TauMap, direct_sum_npc, transport
from refined_euler.torsion import Filtration, GradedTrivialization, SectionDiagram, trivialization_ranks


class Bounds(BaseModel):
    """Size limits for generated instances; the defaults keep a 100-case run fast."""

    length: int = Field(default=3, ge=1, le=6)
    rank: int = Field(default=3, ge=1, le=8)
    torsion: int = Field(default=30, ge=2, le=1000)
    lattice: int = Field(default=2, ge=0, le=3)
    entry: int = Field(default=5, ge=1, le=50)
    matrix: int = Field(default=5, ge=1, le=8)


# pieces are (kind, degree, parameter)
Piece = Tuple[str, int, int]


def random_int_matrix(rng: Random, rows: int, cols: int, bound: int) -> IntMatrix:
    return IntMatrix.from_rows([[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)], cols=cols)


def random_unimodular(rng: Random, n: int, steps: int = 4) -> RatMatrix:
    """Product of elementary operations with small coefficients."""
    a = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    if n < 2:
        return RatMatrix.from_rows(a, cols=n)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-2, -1, 1, 2))
        a[i] = [x + c * y for x, y in zip(a[i], a[j])]
        if rng.random() < 0.25:
            a[i], a[j] = a[j], a[i]
    return RatMatrix.from_rows(a, cols=n)


def random_rational(rng: Random, spread: int) -> Fraction:
    return Fraction(rng.randint(-spread, spread), rng.randint(1, spread))


def random_invertible(rng: Random, n: int, spread: int = 3) -> RatMatrix:
    while True:
        m = RatMatrix.from_rows([[random_rational(rng, spread) for _ in range(n)] for _ in range(n)], cols=n)
        if not n or m.det() != 0:
            return m


def random_trivialization(rng: Random, n: int, spread: int = 3) -> GradedTrivialization:
    return GradedTrivialization(random_invertible(rng, n, spread))


def _order(rng: Random, bounds: Bounds) -> int:
    return rng.randint(2, bounds.torsion)


def perfect_from_pieces(pieces: Sequence[Piece], low: int, high: int) -> BoundedComplex:
    """
    Perfect complex from free points ("free", i, _) and pairs ("pair", i, n).

    A pair is Z -n-> Z in degrees i, i + 1.
    """
    slots: Dict[int, List[int]] = {i: [] for i in range(low, high + 1)}
    arrows = []
    for k, (kind, i, n) in enumerate(pieces):
        slots[i].append(k)
        if kind == "pair":
            slots[i + 1].append(k)
            arrows.append((i, k, n))
    terms = [MixedModule.free(len(slots[i])) for i in range(low, high + 1)]
    matrices = []
    for i in range(low, high):
        rows = [[0] * len(slots[i]) for _ in slots[i + 1]]
        for degree, k, n in arrows:
            if degree == i:
                rows[slots[i + 1].index(k)][slots[i].index(k)] = n
        matrices.append(RatMatrix.from_rows(rows, cols=len(slots[i])))
    return BoundedComplex.from_matrices(low, terms, matrices)


def scramble(rng: Random, P: BoundedComplex) -> Tuple[BoundedComplex, ChainMap]:
    """
    An isomorphic copy of a perfect complex and the isomorphism back to P.

    Each degree changes basis by a random unimodular g_i, so the new
    differential is g_{i+1} d g_i^{-1}.
    """
    g = {i: random_unimodular(rng, P.term(i).dim) for i in P.degrees()}
    g_inv = {i: m.inverse() for i, m in g.items()}
    matrices = [g[i + 1] @ P.differential(i).matrix @ g_inv[i] for i in range(P.min_degree, P.max_degree)]
    S = BoundedComplex.from_matrices(P.min_degree, list(P.terms), matrices)
    back = ChainMap(S, P, {i: ModuleHom(S.term(i), P.term(i), g_inv[i]) for i in P.degrees()})
    return S, back


def perfect_pieces(
    rng: Random,
    bounds: Bounds,
    low: int,
    free_pairs: int = 0,
    torsion_pairs: int = 0,
    acyclic_pairs: int = 0,
) -> List[Piece]:
    """
    Free points come in (even, odd) couples so that the rational Euler
    characteristic of the result is zero.
    """
    high = low + bounds.length - 1
    pieces: List[Piece] = []
    evens = [i for i in range(low, high + 1) if i % 2 == 0]
    odds = [i for i in range(low, high + 1) if i % 2 == 1]
    if evens and odds:
        for _ in range(free_pairs):
            pieces.append(("free", rng.choice(evens), 0))
            pieces.append(("free", rng.choice(odds), 0))
    if high > low:
        for _ in range(torsion_pairs):
            pieces.append(("pair", rng.randint(low, high - 1), _order(rng, bounds)))
        for _ in range(acyclic_pairs):
            pieces.append(("pair", rng.randint(low, high - 1), 1))
    return pieces


def random_perfect(
    rng: Random,
    bounds: Bounds,
    low: int = 0,
    free_pairs: Optional[int] = None,
    torsion_pairs: Optional[int] = None,
    acyclic_pairs: Optional[int] = None,
) -> BoundedComplex:
    """Scrambled perfect complex; unspecified piece counts are drawn at random."""
    cap = max(bounds.rank // 2, 1)
    pieces = perfect_pieces(
        rng,
        bounds,
        low,
        rng.randint(0, cap) if free_pairs is None else free_pairs,
        rng.randint(0, cap) if torsion_pairs is None else torsion_pairs,
        rng.randint(0, cap) if acyclic_pairs is None else acyclic_pairs,
    )
    P = perfect_from_pieces(pieces, low, low + bounds.length - 1)
    S, _ = scramble(rng, P)
    return S


def random_filtration(rng: Random, M: BoundedComplex, steps: int = 2) -> Filtration:
    """
    Random decreasing filtrations on H(M).

    F^1 is spanned by random integral vectors; a deeper step is spanned by
    multiples of some of them, so every step contains the next.
    """
    record = cohomology(M)
    out: Dict[int, Tuple[Tuple[Tuple[Fraction, ...], ...], ...]] = {}
    for i in M.degrees():
        dim = record.H(i).dim
        if not dim or rng.random() < 0.4:
            continue
        first = [tuple(Fraction(rng.randint(-2, 2)) for _ in range(dim)) for _ in range(rng.randint(1, 2))]
        chain = [tuple(first)]
        if steps > 1 and rng.random() < 0.5:
            factor = rng.randint(2, 3)
            chain.append(tuple(tuple(factor * x for x in v) for v in first[: rng.randint(1, len(first))]))
        out[i] = tuple(chain)
    return Filtration(out)


def graded_rank(M: BoundedComplex, parity: int) -> int:
    record = cohomology(M)
    return sum(record.H(i).free_rank for i in M.degrees() if i % 2 == parity)


def random_quasi_iso(rng: Random, bounds: Bounds, low: int = 0) -> ChainMap:
    """
    alpha : Q -> P with Q a scrambled P + A for an acyclic A and alpha the projection.
    """
    P = random_perfect(rng, bounds, low, free_pairs=rng.randint(0, 1))
    A = perfect_from_pieces(
        perfect_pieces(rng, bounds, low, acyclic_pairs=rng.randint(0, 2)), low, low + bounds.length - 1
    )
    S, _, projections = direct_sum_complex(P, A)
    Q, back = scramble(rng, S)
    return projections[0].compose(back)


def random_section_diagram(rng: Random, bounds: Bounds) -> SectionDiagram:
    """Surjection epsilon : Q^n -> Q^m, a random subspace K of Q^n and K'' = epsilon(K)."""
    m = rng.randint(1, bounds.matrix - 1) if bounds.matrix > 1 else 1
    n = rng.randint(m, bounds.matrix)
    while True:
        eps = random_int_matrix(rng, m, n, 3).to_rat()
        if eps.rank() == m:
            break
    k = rng.randint(0, n)
    K = random_int_matrix(rng, n, k, 3).to_rat() if k else RatMatrix.zeros(n, 0)
    return SectionDiagram(eps, K, eps @ K)


def _point(module: MixedModule, degree: int) -> NearlyPerfectComplex:
    return NearlyPerfectComplex(BoundedComplex.concentrated(module, degree))


def npc_piece(rng: Random, bounds: Bounds, kind: str, degree: int) -> NearlyPerfectComplex:
    """
    One summand of a random nearly perfect complex.

    ``divisible``: Q/Z in one degree with lattice rank 1. ``cokernel``: Z -m-> Q
    with H = Q/mZ. ``onto``: Q -> Q/Z with H = Z in the lower degree.
    ``wrap``: Z -1/m-> Q/Z with H = mZ below and the divisible quotient
    (Q/Z)/(1/m)Z above, lifted by q -> q/m.
    """
    if kind == "free":
        return _point(MixedModule.free(1), degree)
    if kind == "torsion":
        return _point(MixedModule(torsion=(_order(rng, bounds),)), degree)
    if kind == "divisible":
        C = BoundedComplex.concentrated(MixedModule(qz_rank=1), degree)
        return NearlyPerfectComplex(C, {degree: 1}, {degree: TauMap("qz", RatMatrix.identity(1))})
    if kind == "cokernel":
        m = rng.randint(1, bounds.entry)
        C = BoundedComplex.from_matrices(
            degree, [MixedModule.free(1), MixedModule(q_rank=1)], [RatMatrix.diagonal([m])]
        )
        return NearlyPerfectComplex(C, {degree + 1: 1}, {degree + 1: TauMap("q", RatMatrix.diagonal([m]))})
    if kind == "onto":
        C = BoundedComplex.from_matrices(
            degree, [MixedModule(q_rank=1), MixedModule(qz_rank=1)], [RatMatrix.identity(1)]
        )
        return NearlyPerfectComplex(C)
    if kind == "wrap":
        shrink = RatMatrix.diagonal([Fraction(1, rng.randint(2, max(bounds.entry, 2)))])
        C = BoundedComplex.from_matrices(degree, [MixedModule.free(1), MixedModule(qz_rank=1)], [shrink])
        return NearlyPerfectComplex(C, {degree + 1: 1}, {degree + 1: TauMap("q", shrink)})
    raise ValueError(f"unknown piece kind: {kind}")


NPC_POINT_KINDS = ("free", "torsion", "divisible")
NPC_ARROW_KINDS = ("cokernel", "onto", "wrap")
LATTICE_KINDS = ("divisible", "cokernel", "wrap")


def random_automorphism(rng: Random, M: MixedModule, spread: int = 3) -> ModuleHom:
    """
    A random automorphism of M, block lower triangular in the order Z, Z/n, Q, Q/Z.

    The diagonal is unimodular on Z^a and (Q/Z)^c, the identity on the
    torsion and invertible on Q^b. Below it sit integral Z -> Z/n entries,
    rational Z -> Q, Z -> Q/Z and Q -> Q/Z entries and k/n entries from Z/n
    to Q/Z.
    """
    if not M.dim:
        return ModuleHom.identity(M)
    diagonal = RatMatrix.block_diag(
        random_unimodular(rng, M.free_rank),
        RatMatrix.identity(len(M.torsion)),
        random_invertible(rng, M.q_rank, spread),
        random_unimodular(rng, M.qz_rank),
    )
    rows = diagonal.to_rows()
    kinds = M.kinds()
    for j, source in enumerate(kinds):
        for i, target in enumerate(kinds):
            if rng.random() < 0.5:
                continue
            if source == Z and target == T:
                rows[i][j] = Fraction(rng.randrange(M.modulus(i)))
            elif (source == Z and target in (Q, QZ)) or (source == Q and target == QZ):
                rows[i][j] = random_rational(rng, spread)
            elif source == T and target == QZ:
                n = M.modulus(j)
                rows[i][j] = Fraction(rng.randrange(n), n)
    return ModuleHom(M, M, RatMatrix.from_rows(rows, cols=M.dim))


def scramble_npc(rng: Random, npc: NearlyPerfectComplex) -> NearlyPerfectComplex:
    """
    An isomorphic copy of a nearly perfect complex whose pieces are mixed.

    Every term changes by a random automorphism g_i, the differential becomes
    g_{i+1} d g_i^{-1} and the lattice lifts are pushed along g. Terms must
    not carry a group action.
    """
    C = npc.complex
    g = {i: random_automorphism(rng, C.term(i)) for i in C.degrees()}
    diffs = [
        g[i + 1].compose(C.differential(i)).compose(g[i].inverse() if C.term(i).dim else g[i])
        for i in range(C.min_degree, C.max_degree)
    ]
    mixed = BoundedComplex(C.min_degree, C.terms, tuple(diffs))
    return transport(npc, ChainMap(C, mixed, g), check=False)


def random_npc(
    rng: Random, bounds: Bounds, low: int = 0, pieces: Optional[int] = None, mixed: bool = True
) -> NearlyPerfectComplex:
    """
    Random pieces on top of a scrambled perfect part, with at most ``bounds.lattice`` lattices.

    With ``mixed`` the direct sum is scrambled by ``scramble_npc``; otherwise
    it is returned as is.
    """
    high = low + bounds.length - 1
    parts = [NearlyPerfectComplex(random_perfect(rng, bounds, low, free_pairs=rng.randint(0, 1)))]
    lattices = 0
    for _ in range(rng.randint(1, 3) if pieces is None else pieces):
        kinds = list(NPC_POINT_KINDS) + (list(NPC_ARROW_KINDS) if high > low else [])
        kind = rng.choice(kinds)
        if kind in LATTICE_KINDS:
            if lattices >= bounds.lattice:
                kind = "free"
            else:
                lattices += 1
        top = high - 1 if kind in NPC_ARROW_KINDS else high
        parts.append(npc_piece(rng, bounds, kind, rng.randint(low, top)))
    total = direct_sum_npc(*parts)
    return scramble_npc(rng, total) if mixed else total


def random_single_degree(rng: Random, bounds: Bounds, degree: Optional[int] = None) -> NearlyPerfectComplex:
    """
    Z^a + (+)Z/n + (Q/Z)^c in one degree with tau a random automorphism of (Q/Z)^c.
    """
    d = rng.randint(-2, 3) if degree is None else degree
    a = rng.randint(0, bounds.rank)
    orders = [_order(rng, bounds) for _ in range(rng.randint(0, 2))]
    c = rng.randint(0, bounds.lattice)
    if a + len(orders) + c == 0:
        a = 1
    M = MixedModule.from_invariants(a, orders, 0, c)
    if not c:
        return _point(M, d)
    U = random_unimodular(rng, c)
    rows = [[Fraction(0)] * c for _ in range(M.dim - c)] + U.to_rows()
    tau = TauMap("qz", RatMatrix.from_rows(rows, cols=c))
    return NearlyPerfectComplex(BoundedComplex.concentrated(M, d), {d: c}, {d: tau})


def with_lattice(rng: Random, bounds: Bounds, low: int = 0) -> NearlyPerfectComplex:
    """A random nearly perfect complex with a lattice in some degree above ``low``."""
    high = low + max(bounds.length, 2) - 1
    shape = bounds.model_copy(update={"length": high - low + 1})
    kind = rng.choice(LATTICE_KINDS)
    degree = rng.randint(low + 1, high) if kind == "divisible" else rng.randint(low, high - 1)
    piece = npc_piece(rng, shape, kind, degree)
    rest = random_npc(rng, shape, low, pieces=rng.randint(0, 1), mixed=False)
    return scramble_npc(rng, direct_sum_npc(rest, piece))


def balanced_npc(rng: Random, bounds: Bounds, low: int = 0) -> Tuple[NearlyPerfectComplex, int]:
    """
    A random nearly perfect complex whose odd and even trivialization ranks agree.

    Free points are added in a degree of the deficient parity until the two
    sides match, then the whole sum is scrambled. Returns the complex and the
    common rank.
    """
    npc = random_npc(rng, bounds, low, mixed=False)
    while True:
        ranks = trivialization_ranks(npc)
        odd = sum(sum(r) for i, r in ranks.items() if i % 2 == 1)
        even = sum(sum(r) for i, r in ranks.items() if i % 2 == 0)
        if odd == even:
            return scramble_npc(rng, npc), odd
        parity = 1 if odd < even else 0
        degree = low if low % 2 == parity else low + 1
        points = [npc_piece(rng, bounds, "free", degree) for _ in range(abs(odd - even))]
        npc = direct_sum_npc(npc, *points)


def cyclic_permutation(n: int) -> RatMatrix:
    return RatMatrix.from_rows([[1 if i == (j + 1) % n else 0 for j in range(n)] for i in range(n)], cols=n)


def random_induced_module(rng: Random, order: int) -> MixedModule:
    """
    Z[G]^k + Q[G]^m for the cyclic group of the given order, the integral
    part in a random basis.
    """
    k = rng.randint(0, 2)
    m = rng.randint(0 if k else 1, 1)
    perm = cyclic_permutation(order)
    integral = RatMatrix.block_diag(*[perm] * k)
    g = random_unimodular(rng, integral.rows)
    sigma = RatMatrix.block_diag(g @ integral @ g.inverse(), *[perm] * m)
    return MixedModule(free_rank=k * order, q_rank=m * order).with_action(sigma, order)


def random_finitely_generated(rng: Random, bounds: Bounds) -> MixedModule:
    orders = [_order(rng, bounds) for _ in range(rng.randint(0, 3))]
    return MixedModule.from_invariants(rng.randint(0, bounds.rank), orders)
