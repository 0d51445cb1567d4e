"""
Mixed modules Z^a + (+)Z/n_i + Q^b + (Q/Z)^c and their homomorphisms.

A module is presented in lifted coordinates: a vector of a + t + b + c
rationals. The lattice L of admissible lifts has integral Z and T
coordinates and arbitrary Q and Q/Z coordinates; the relations R are
generated by n_i e_T and the unit vectors of the Q/Z block. A homomorphism is
a rational matrix F with F(L) in L' and F(R) in R', stored in a canonical
reduced form so that equal maps have equal matrices.
"""

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import zip_longest
from math import gcd, prod
from typing import Dict, List, Optional, Sequence, Tuple

import structlog
from sympy import divisors, factorint, isprime, multiplicity

from refined_euler.errors import (
    DimensionMismatchError,
    InvalidHomomorphismError,
    PreconditionError,
)
from refined_euler.exact_linalg import IntMatrix, Number, RatMatrix, as_fraction, snf, solve_mixed, unit_vector
from refined_euler.lattices import Subgroup, Subquotient

logger = structlog.get_logger()

Z, T, Q, QZ = "Z", "T", "Q", "QZ"


def invariant_factors(orders: Sequence[int]) -> Tuple[int, ...]:
    """
    Normalize a list of cyclic orders into a divisibility chain.

    >>> invariant_factors([2, 3])
    (6,)
    """
    exponents: Dict[int, List[int]] = defaultdict(list)
    for n in orders:
        if n < 1:
            raise PreconditionError("cyclic orders must be positive", order=n)
        for p, e in factorint(n).items():
            exponents[int(p)].append(int(e))
    columns = zip_longest(
        *[[p**e for e in sorted(es, reverse=True)] for p, es in sorted(exponents.items())],
        fillvalue=1,
    )
    return tuple(sorted(prod(c) for c in columns))


@dataclass(frozen=True)
class CyclicAction:
    """A generator of a cyclic group action, as a matrix in lifted coordinates."""

    order: int
    matrix: RatMatrix


@dataclass(frozen=True)
class MixedModule:
    free_rank: int = 0
    torsion: Tuple[int, ...] = ()
    q_rank: int = 0
    qz_rank: int = 0
    action: Optional[CyclicAction] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(n) for n in self.torsion))
        if min(self.free_rank, self.q_rank, self.qz_rank) < 0:
            raise PreconditionError("ranks must be nonnegative", module=str(self))
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise PreconditionError("torsion factors must form a divisibility chain", torsion=self.torsion)
        if any(n < 2 for n in self.torsion):
            raise PreconditionError("torsion factors must be at least 2", torsion=self.torsion)

    @classmethod
    def from_invariants(
        cls, free_rank: int = 0, orders: Sequence[int] = (), q_rank: int = 0, qz_rank: int = 0
    ) -> "MixedModule":
        """Build a module from arbitrary cyclic orders (1 allowed, dropped)."""
        return cls(free_rank, tuple(n for n in invariant_factors(orders) if n > 1), q_rank, qz_rank)

    @classmethod
    def free(cls, rank: int) -> "MixedModule":
        return cls(free_rank=rank)

    @classmethod
    def zero(cls) -> "MixedModule":
        return cls()

    def with_action(self, matrix: RatMatrix, order: int) -> "MixedModule":
        """
        Attach a cyclic action.

        Raises:
            InvalidHomomorphismError: If the matrix is not an endomorphism
            PreconditionError: If its order-th power is not the identity
        """
        plain = self.without_action()
        sigma = ModuleHom(plain, plain, matrix)
        power = ModuleHom.identity(plain)
        for _ in range(order):
            power = sigma.compose(power)
        if power != ModuleHom.identity(plain):
            raise PreconditionError("action generator does not have the stated order", order=order)
        return MixedModule(self.free_rank, self.torsion, self.q_rank, self.qz_rank, CyclicAction(order, sigma.matrix))

    def without_action(self) -> "MixedModule":
        return MixedModule(self.free_rank, self.torsion, self.q_rank, self.qz_rank)

    @property
    def dim(self) -> int:
        return self.free_rank + len(self.torsion) + self.q_rank + self.qz_rank

    def kinds(self) -> List[str]:
        return [Z] * self.free_rank + [T] * len(self.torsion) + [Q] * self.q_rank + [QZ] * self.qz_rank

    def indices(self, kind: str) -> List[int]:
        return [i for i, k in enumerate(self.kinds()) if k == kind]

    def modulus(self, i: int) -> int:
        """Order of the cyclic torsion coordinate i."""
        return self.torsion[i - self.free_rank]

    @property
    def is_finitely_generated(self) -> bool:
        return self.q_rank == 0 and self.qz_rank == 0

    @property
    def is_free(self) -> bool:
        return not self.torsion and self.q_rank == 0 and self.qz_rank == 0

    @property
    def is_torsion_free(self) -> bool:
        return not self.torsion and self.qz_rank == 0

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0 and self.is_finitely_generated

    def is_zero(self) -> bool:
        return self.dim == 0

    def order(self) -> Optional[int]:
        """Cardinality for finite modules, otherwise None."""
        return prod(self.torsion) if self.is_finite else None

    def lattice(self) -> Subgroup:
        kinds = self.kinds()
        return Subgroup.from_generators(
            self.dim,
            [unit_vector(i, self.dim) for i, k in enumerate(kinds) if k in (Q, QZ)],
            [unit_vector(i, self.dim) for i, k in enumerate(kinds) if k in (Z, T)],
        )

    def relations(self) -> Subgroup:
        gens = []
        for i, k in enumerate(self.kinds()):
            if k == T:
                gens.append([Fraction(self.modulus(i)) if t == i else Fraction(0) for t in range(self.dim)])
            elif k == QZ:
                gens.append(unit_vector(i, self.dim))
        return Subgroup.from_generators(self.dim, (), gens)

    def reduce(self, vector: Sequence[Number]) -> Tuple[Fraction, ...]:
        """Canonical lift of an element: torsion coordinates mod n, Q/Z coordinates mod 1."""
        out = []
        for i, (k, x) in enumerate(zip(self.kinds(), vector)):
            x = as_fraction(x)
            if k == T:
                x = x % self.modulus(i)
            elif k == QZ:
                x = x % 1
            out.append(x)
        return tuple(out)

    def is_element(self, vector: Sequence[Number]) -> bool:
        return len(vector) == self.dim and self.lattice().contains(vector)

    def is_zero_element(self, vector: Sequence[Number]) -> bool:
        return not any(self.reduce(vector))

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts.extend(f"Z/{n}" for n in self.torsion)
        if self.q_rank:
            parts.append("Q" if self.q_rank == 1 else f"Q^{self.q_rank}")
        if self.qz_rank:
            parts.append("Q/Z" if self.qz_rank == 1 else f"(Q/Z)^{self.qz_rank}")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class ModuleHom:
    """
    A rationally representable homomorphism source -> target.

    The matrix acts on lifted coordinates (rows indexed by target
    coordinates). Construction validates the block rules and reduces the
    matrix: torsion rows mod n and Q/Z rows mod 1 in the columns of the
    finitely generated part.
    """

    source: MixedModule
    target: MixedModule
    matrix: RatMatrix

    def __post_init__(self):
        F = self.matrix
        if not isinstance(F, RatMatrix):
            F = F.to_rat()
        if F.shape != (self.target.dim, self.source.dim):
            raise DimensionMismatchError(
                "matrix shape does not match modules",
                shape=F.shape,
                source=str(self.source),
                target=str(self.target),
            )
        object.__setattr__(self, "matrix", _canonical(self.source, self.target, F))

    @classmethod
    def identity(cls, module: MixedModule) -> "ModuleHom":
        return cls(module, module, RatMatrix.identity(module.dim))

    @classmethod
    def zero(cls, source: MixedModule, target: MixedModule) -> "ModuleHom":
        return cls(source, target, RatMatrix.zeros(target.dim, source.dim))

    @classmethod
    def from_rows(cls, source: MixedModule, target: MixedModule, rows: Sequence[Sequence[Number]]) -> "ModuleHom":
        return cls(source, target, RatMatrix.from_rows(rows, cols=source.dim))

    def compose(self, first: "ModuleHom") -> "ModuleHom":
        """self after first."""
        if first.target != self.source:
            raise DimensionMismatchError(
                "maps are not composable", left=str(first.target), right=str(self.source)
            )
        return ModuleHom(first.source, self.target, self.matrix @ first.matrix)

    def __add__(self, other: "ModuleHom") -> "ModuleHom":
        self._same_ends(other)
        return ModuleHom(self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other: "ModuleHom") -> "ModuleHom":
        self._same_ends(other)
        return ModuleHom(self.source, self.target, self.matrix - other.matrix)

    def __neg__(self) -> "ModuleHom":
        return ModuleHom(self.source, self.target, -self.matrix)

    def scale(self, k: int) -> "ModuleHom":
        return ModuleHom(self.source, self.target, self.matrix.scale(k))

    def _same_ends(self, other: "ModuleHom") -> None:
        if self.source != other.source or self.target != other.target:
            raise DimensionMismatchError("maps have different source or target")

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def apply(self, vector: Sequence[Number]) -> Tuple[Fraction, ...]:
        return self.target.reduce(self.matrix.apply(vector))

    def inverse(self) -> "ModuleHom":
        """
        Inverse of an isomorphism.

        Columns of the finitely generated part are found with a mixed
        integral/rational solve, columns of the divisible part with an exact
        rational solve on the divisible block.

        Raises:
            PreconditionError: If the map is not an isomorphism
        """
        N, M = self.target, self.source
        div_cols = M.indices(Q) + M.indices(QZ)
        columns = []
        for j, kind in enumerate(N.kinds()):
            e = unit_vector(j, N.dim)
            if kind in (Z, T):
                x = solve_lift(self, e)
            else:
                sub = self.matrix.submatrix(range(N.dim), div_cols)
                y = sub.solve(e)
                if y is None:
                    x = None
                else:
                    x = [Fraction(0)] * M.dim
                    for idx, c in zip(div_cols, y):
                        x[idx] = c
            if x is None:
                raise PreconditionError("map is not surjective, no inverse", source=str(M), target=str(N))
            columns.append(list(x))
        try:
            g = ModuleHom(N, M, RatMatrix.from_columns(columns, M.dim))
        except InvalidHomomorphismError as exc:
            raise PreconditionError("map is not an isomorphism") from exc
        if g.compose(self) != ModuleHom.identity(M) or self.compose(g) != ModuleHom.identity(N):
            raise PreconditionError("map is not an isomorphism", source=str(M), target=str(N))
        return g

    def is_injective(self) -> bool:
        return kernel(self)[0].is_zero()

    def is_surjective(self) -> bool:
        return cokernel(self)[0].is_zero()

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()


def _canonical(source: MixedModule, target: MixedModule, F: RatMatrix) -> RatMatrix:
    skinds, tkinds = source.kinds(), target.kinds()
    rows = F.to_rows()
    for j, sk in enumerate(skinds):
        for i, tk in enumerate(tkinds):
            x = rows[i][j]
            bad = False
            if sk == Z:
                bad = tk in (Z, T) and x.denominator != 1
            elif sk == T:
                n = source.modulus(j)
                if tk in (Z, Q):
                    bad = x != 0
                elif tk == T:
                    bad = x.denominator != 1 or (n * x) % target.modulus(i) != 0
                else:
                    bad = (n * x).denominator != 1
            elif sk == Q:
                bad = tk in (Z, T) and x != 0
            else:
                bad = (tk != QZ and x != 0) or (tk == QZ and x.denominator != 1)
            if bad:
                raise InvalidHomomorphismError(
                    "matrix entry is not a homomorphism block entry",
                    row=i,
                    column=j,
                    source_kind=sk,
                    target_kind=tk,
                    entry=str(x),
                )
            if sk in (Z, T):
                if tk == T:
                    rows[i][j] = x % target.modulus(i)
                elif tk == QZ:
                    rows[i][j] = x % 1
    return RatMatrix.from_rows(rows, cols=F.cols)


def solve_lift(f: ModuleHom, y: Sequence[Number]) -> Optional[Tuple[Fraction, ...]]:
    """
    Find x in the lattice of f.source with F x - y in the relations of f.target.

    Returns:
        The lift x, or None if y is not in the image of f
    """
    M, N = f.source, f.target
    if len(y) != N.dim:
        raise DimensionMismatchError("vector length does not match target", dim=N.dim, length=len(y))
    zt = M.indices(Z) + M.indices(T)
    div = M.indices(Q) + M.indices(QZ)
    relations = N.relations().lattice_generators()
    A_int = RatMatrix.hstack(
        f.matrix.submatrix(range(N.dim), zt),
        -RatMatrix.from_columns([list(r) for r in relations], N.dim),
        rows=N.dim,
    )
    A_rat = f.matrix.submatrix(range(N.dim), div)
    solution = solve_mixed(A_int, A_rat, y)
    if solution is None:
        return None
    xi, xq = solution
    x = [Fraction(0)] * M.dim
    for idx, c in zip(zt, xi):
        x[idx] = Fraction(c)
    for idx, c in zip(div, xq):
        x[idx] = c
    return tuple(x)


def subquotient_module(S1: Subgroup, S2: Subgroup) -> Tuple[MixedModule, Subquotient]:
    """Normal form module of S1 / S2 together with its coordinate maps."""
    sq = Subquotient.of(S1, S2)
    return MixedModule(sq.free_rank, sq.torsion, sq.q_rank, sq.qz_rank), sq


def kernel(f: ModuleHom) -> Tuple[MixedModule, ModuleHom]:
    """Kernel of f with its inclusion into f.source."""
    M, N = f.source, f.target
    cycles = M.lattice().preimage(f.matrix, N.relations())
    K, sq = subquotient_module(cycles, M.relations())
    return K, ModuleHom(K, M, sq.lift)


def cokernel(f: ModuleHom) -> Tuple[MixedModule, ModuleHom]:
    """Cokernel of f with its projection from f.target."""
    M, N = f.source, f.target
    boundaries = M.lattice().image(f.matrix) + N.relations()
    C, sq = subquotient_module(N.lattice(), boundaries)
    return C, ModuleHom(N, C, sq.project)


def image(f: ModuleHom) -> Tuple[MixedModule, ModuleHom, ModuleHom]:
    """Image of f with the corestriction source -> image and the inclusion image -> target."""
    M, N = f.source, f.target
    boundaries = M.lattice().image(f.matrix) + N.relations()
    I, sq = subquotient_module(boundaries, N.relations())
    return I, ModuleHom(M, I, sq.project @ f.matrix), ModuleHom(I, N, sq.lift)


def kernel_subgroup(f: ModuleHom) -> Subgroup:
    """Lifts of kernel elements, including the relations of the source."""
    return f.source.lattice().preimage(f.matrix, f.target.relations())


def image_subgroup(f: ModuleHom) -> Subgroup:
    """Lifts of image elements, including the relations of the target."""
    return f.source.lattice().image(f.matrix) + f.target.relations()


def exact_at(f: ModuleHom, g: ModuleHom) -> bool:
    """True when A -f-> B -g-> C is exact at B."""
    if f.target != g.source:
        raise DimensionMismatchError("maps are not composable")
    if not g.compose(f).is_zero():
        return False
    return kernel_subgroup(g).equals(image_subgroup(f))


def direct_sum(*modules: MixedModule) -> Tuple[MixedModule, List[ModuleHom], List[ModuleHom]]:
    """
    Direct sum in normal form with its injections and projections.

    Coordinates of the summands are concatenated block by block; the torsion
    block is brought into a divisibility chain with the Smith form of the
    diagonal of orders.
    """
    free = sum(m.free_rank for m in modules)
    orders = [n for m in modules for n in m.torsion]
    qr = sum(m.q_rank for m in modules)
    qzr = sum(m.qz_rank for m in modules)
    t = len(orders)
    dec = snf(IntMatrix.diagonal(orders))
    diag = dec.diagonal
    keep = [i for i in range(t) if diag[i] > 1]
    total = MixedModule(free, tuple(diag[i] for i in keep), qr, qzr)
    U = dec.U.to_rat()
    Uinv = U.inverse()

    # concatenated coordinates (Z-blocks, T-blocks, Q-blocks, QZ-blocks) -> normal form
    flat = free + t + qr + qzr
    merge = RatMatrix.block_diag(
        RatMatrix.identity(free),
        U.submatrix(keep, range(t)),
        RatMatrix.identity(qr + qzr),
    )
    split = RatMatrix.block_diag(
        RatMatrix.identity(free),
        Uinv.submatrix(range(t), keep),
        RatMatrix.identity(qr + qzr),
    )
    offsets = {Z: 0, T: free, Q: free + t, QZ: free + t + qr}
    injections, projections = [], []
    for m in modules:
        positions = []
        for kind in (Z, T, Q, QZ):
            count = len(m.indices(kind))
            positions.extend(range(offsets[kind], offsets[kind] + count))
            offsets[kind] += count
        embed = RatMatrix.from_columns([unit_vector(p, flat) for p in positions], flat)
        injections.append(ModuleHom(m, total, merge @ embed))
        projections.append(ModuleHom(total, m, embed.transpose() @ split))
    if modules and all(m.action is not None for m in modules):
        order = modules[0].action.order
        if all(m.action.order == order for m in modules):
            sigma = RatMatrix.zeros(total.dim, total.dim)
            for m, inj, proj in zip(modules, injections, projections):
                sigma = sigma + inj.matrix @ m.action.matrix @ proj.matrix
            total = total.with_action(sigma, order)
            injections = [ModuleHom(m, total, i.matrix) for m, i in zip(modules, injections)]
            projections = [ModuleHom(total, m, p.matrix) for m, p in zip(modules, projections)]
    return total, injections, projections


def direct_sum_hom(*maps: ModuleHom) -> ModuleHom:
    """Block diagonal sum of maps between the direct sums of sources and targets."""
    source, s_inj, s_proj = direct_sum(*[f.source for f in maps])
    target, t_inj, _ = direct_sum(*[f.target for f in maps])
    matrix = RatMatrix.zeros(target.dim, source.dim)
    for f, p, i in zip(maps, s_proj, t_inj):
        matrix = matrix + i.matrix @ f.matrix @ p.matrix
    return ModuleHom(source, target, matrix)


def divisible_part(M: MixedModule) -> Tuple[MixedModule, ModuleHom]:
    """The summand Q^b + (Q/Z)^c with its inclusion."""
    D = MixedModule(q_rank=M.q_rank, qz_rank=M.qz_rank)
    cols = [unit_vector(i, M.dim) for i in M.indices(Q) + M.indices(QZ)]
    return D, ModuleHom(D, M, RatMatrix.from_columns(cols, M.dim))


def codivisible_quotient(M: MixedModule) -> Tuple[MixedModule, ModuleHom]:
    """M / M_div with its projection."""
    C = MixedModule(M.free_rank, M.torsion)
    rows = [unit_vector(i, M.dim) for i in M.indices(Z) + M.indices(T)]
    return C, ModuleHom(M, C, RatMatrix.from_rows(rows, cols=M.dim))


def codivisible_section(M: MixedModule) -> ModuleHom:
    """Splitting M_codiv -> M of the codivisible projection."""
    C, proj = codivisible_quotient(M)
    return ModuleHom(C, M, proj.matrix.transpose())


def n_torsion(M: MixedModule, n: int) -> MixedModule:
    """The subgroup of elements killed by n."""
    if n < 1:
        raise PreconditionError("n must be positive", n=n)
    orders = [gcd(m, n) for m in M.torsion] + [n] * M.qz_rank
    return MixedModule.from_invariants(0, orders)


def reduce_mod_n(M: MixedModule, n: int) -> MixedModule:
    """M tensor Z/n."""
    if n < 1:
        raise PreconditionError("n must be positive", n=n)
    orders = [n] * M.free_rank + [gcd(m, n) for m in M.torsion]
    return MixedModule.from_invariants(0, orders)


@dataclass(frozen=True)
class LAdicModule:
    """Z_l^free_rank + (+)Z/l^k for the listed exponents."""

    prime: int
    free_rank: int = 0
    exponents: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(sorted(int(k) for k in self.exponents)))
        if any(k < 1 for k in self.exponents):
            raise PreconditionError("l-adic torsion exponents must be positive", exponents=self.exponents)

    def __add__(self, other: "LAdicModule") -> "LAdicModule":
        if self.prime != other.prime:
            raise DimensionMismatchError("l-adic modules at different primes", left=self.prime, right=other.prime)
        return LAdicModule(self.prime, self.free_rank + other.free_rank, self.exponents + other.exponents)

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.exponents

    def torsion_order(self) -> int:
        return self.prime ** sum(self.exponents)

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append(f"Z_{self.prime}" + (f"^{self.free_rank}" if self.free_rank > 1 else ""))
        parts.extend(f"Z/{self.prime}^{k}" for k in self.exponents)
        return " + ".join(parts) if parts else "0"


def require_prime(l: int) -> None:
    if not isprime(l):
        raise PreconditionError("l must be prime", l=l)


def tate_module(M: MixedModule, l: int) -> LAdicModule:
    """T_l(M): only the Q/Z summands contribute, each a copy of Z_l."""
    require_prime(l)
    return LAdicModule(l, M.qz_rank)


def complete(M: MixedModule, l: int) -> LAdicModule:
    """l-adic completion: Z -> Z_l, Z/n -> Z/l^v_l(n), divisible summands -> 0."""
    require_prime(l)
    return LAdicModule(l, M.free_rank, tuple(multiplicity(l, n) for n in M.torsion if n % l == 0))


def complete_by_limit(M: MixedModule, l: int, depth: Optional[int] = None) -> LAdicModule:
    """
    Completion read off from M / l^depth M, computed as a cokernel.

    With depth beyond every l-exponent of the torsion, cyclic factors of
    order l^depth come from free summands and smaller ones from torsion.
    """
    require_prime(l)
    if not M.is_finitely_generated:
        raise PreconditionError("limit oracle needs a finitely generated module", module=str(M))
    if depth is None:
        depth = 1 + max((multiplicity(l, n) for n in M.torsion), default=0)
    quotient, _ = cokernel(ModuleHom.identity(M).scale(l**depth))
    free, exponents = 0, []
    for n in quotient.torsion:
        k = multiplicity(l, n)
        if k == depth:
            free += 1
        elif k:
            exponents.append(k)
    return LAdicModule(l, free, tuple(exponents))


def action_hom(M: MixedModule) -> ModuleHom:
    if M.action is None:
        raise PreconditionError("module has no group action", module=str(M))
    plain = M.without_action()
    return ModuleHom(plain, plain, M.action.matrix)


@dataclass(frozen=True)
class TateGroups:
    subgroup_order: int
    h0: MixedModule
    h1: MixedModule

    def vanish(self) -> bool:
        return self.h0.is_zero() and self.h1.is_zero()


def tate_cohomology(M: MixedModule, subgroup_order: int) -> TateGroups:
    """
    Tate cohomology of the subgroup of the given order.

    With tau the generator of that subgroup and N its norm,
    H^0 = ker(tau - 1) / im N and H^1 = ker N / im(tau - 1).
    """
    sigma = action_hom(M)
    m = M.action.order
    if m % subgroup_order:
        raise PreconditionError("subgroup order must divide the group order", order=m, subgroup=subgroup_order)
    plain = sigma.source
    tau = ModuleHom.identity(plain)
    for _ in range(m // subgroup_order):
        tau = sigma.compose(tau)
    one = ModuleHom.identity(plain)
    norm = ModuleHom.zero(plain, plain)
    power = one
    for _ in range(subgroup_order):
        norm = norm + power
        power = tau.compose(power)
    diff = tau - one
    h0, _ = subquotient_module(kernel_subgroup(diff), image_subgroup(norm))
    h1, _ = subquotient_module(kernel_subgroup(norm), image_subgroup(diff))
    return TateGroups(subgroup_order, h0, h1)


def is_cohomologically_trivial(M: MixedModule) -> bool:
    """Tate cohomology vanishes in degrees 0 and 1 for every subgroup of the cyclic group."""
    if M.action is None:
        raise PreconditionError("cohomological triviality needs a group action", module=str(M))
    for h in divisors(M.action.order):
        if h == 1:
            continue
        groups = tate_cohomology(M, int(h))
        if not groups.vanish():
            logger.debug("nontrivial tate cohomology", subgroup=h, h0=str(groups.h0), h1=str(groups.h1))
            return False
    return True


def codivisible_action(M: MixedModule) -> MixedModule:
    """M_codiv with the induced action."""
    sigma = action_hom(M)
    C, proj = codivisible_quotient(M.without_action())
    section = codivisible_section(M.without_action())
    return C.with_action(proj.compose(sigma).compose(section).matrix, M.action.order)


def completed_tate_groups(M: MixedModule, l: int) -> List[Tuple[int, LAdicModule, LAdicModule]]:
    """
    Tate groups of the l-adic completion with the induced action.

    Completion is exact on finitely generated modules and kills the
    divisible part, so these are the completions of the Tate groups of
    M_codiv.
    """
    C = codivisible_action(M)
    out = []
    for h in divisors(C.action.order):
        if h == 1:
            continue
        groups = tate_cohomology(C, int(h))
        out.append((int(h), complete(groups.h0, l), complete(groups.h1, l)))
    return out


def completion_is_cohomologically_trivial(M: MixedModule, l: int) -> bool:
    return all(h0.is_zero() and h1.is_zero() for _, h0, h1 in completed_tate_groups(M, l))
