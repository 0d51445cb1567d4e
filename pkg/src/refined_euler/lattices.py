"""
Subgroups of Q^N of the form W + Lambda and their subquotients.

Every mixed module is presented as L / R inside a rational coordinate space,
with L and R subgroups of this shape: W a Q-subspace and Lambda a lattice
independent modulo W. Kernels, cokernels, images and cohomology are all
subquotients S1 / S2 of such subgroups, and ``Subquotient`` turns one into
normal form together with explicit projection and lift matrices.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import List, Sequence, Tuple

import structlog

from refined_euler.errors import ContractViolation, DimensionMismatchError, OutsideModuleClassError
from refined_euler.exact_linalg import (
    IntMatrix,
    Number,
    RatMatrix,
    as_fraction,
    hnf,
    integral_kernel,
    snf,
    unit_vector,
)

logger = structlog.get_logger()


def _reduce_mod_space(vector: Sequence[Fraction], space: RatMatrix, pivots: Tuple[int, ...]) -> List[Fraction]:
    v = list(vector)
    for r, p in enumerate(pivots):
        if v[p]:
            f = v[p]
            v = [x - f * w for x, w in zip(v, space.row(r))]
    return v


def _lattice_basis(generators: List[List[Fraction]], dim: int) -> RatMatrix:
    """Canonical (Hermite) basis of the lattice spanned by the given rows."""
    if not generators:
        return RatMatrix.zeros(0, dim)
    scale = lcm(1, *(x.denominator for g in generators for x in g))
    ints = IntMatrix.from_rows([[int(x * scale) for x in g] for g in generators], cols=dim)
    H = hnf(ints).H
    rows = [[Fraction(x, scale) for x in H.row(i)] for i in range(H.rows) if any(H.row(i))]
    return RatMatrix.from_rows(rows, cols=dim)


@dataclass(frozen=True)
class Subgroup:
    """
    The subgroup W + Lambda of Q^dim.

    ``space`` holds the reduced row echelon basis of W (rows) with its pivot
    columns, ``lattice`` the Hermite basis of Lambda reduced modulo W.
    Both are canonical, so equal subgroups have equal fields.
    """

    dim: int
    space: RatMatrix
    pivots: Tuple[int, ...]
    lattice: RatMatrix

    @classmethod
    def from_generators(
        cls,
        dim: int,
        space_generators: Sequence[Sequence[Number]] = (),
        lattice_generators: Sequence[Sequence[Number]] = (),
    ) -> "Subgroup":
        for g in list(space_generators) + list(lattice_generators):
            if len(g) != dim:
                raise DimensionMismatchError("generator has the wrong length", dim=dim, length=len(g))
        space_rows = RatMatrix.from_rows([list(g) for g in space_generators], cols=dim)
        reduced, pivots = space_rows.rref()
        space = reduced.submatrix(range(len(pivots)), range(dim))
        lattice_rows = []
        for g in lattice_generators:
            v = _reduce_mod_space([as_fraction(x) for x in g], space, pivots)
            if any(v):
                lattice_rows.append(v)
        return cls(dim=dim, space=space, pivots=pivots, lattice=_lattice_basis(lattice_rows, dim))

    @classmethod
    def zero(cls, dim: int) -> "Subgroup":
        return cls.from_generators(dim)

    @property
    def space_dim(self) -> int:
        return self.space.rows

    @property
    def lattice_rank(self) -> int:
        return self.lattice.rows

    def space_generators(self) -> List[Tuple[Fraction, ...]]:
        return [self.space.row(i) for i in range(self.space.rows)]

    def lattice_generators(self) -> List[Tuple[Fraction, ...]]:
        return [self.lattice.row(i) for i in range(self.lattice.rows)]

    def reduce(self, vector: Sequence[Number]) -> List[Fraction]:
        """Reduce a vector modulo the subspace part."""
        return _reduce_mod_space([as_fraction(x) for x in vector], self.space, self.pivots)

    def in_space(self, vector: Sequence[Number]) -> bool:
        return not any(self.reduce(vector))

    def contains(self, vector: Sequence[Number]) -> bool:
        if len(vector) != self.dim:
            raise DimensionMismatchError("vector has the wrong length", dim=self.dim, length=len(vector))
        v = self.reduce(vector)
        if not any(v):
            return True
        if self.lattice.rows == 0:
            return False
        coefficients = self.lattice.transpose().solve(v)
        return coefficients is not None and all(c.denominator == 1 for c in coefficients)

    def contains_subgroup(self, other: "Subgroup") -> bool:
        return all(self.in_space(g) for g in other.space_generators()) and all(
            self.contains(g) for g in other.lattice_generators()
        )

    def equals(self, other: "Subgroup") -> bool:
        return self.contains_subgroup(other) and other.contains_subgroup(self)

    def __add__(self, other: "Subgroup") -> "Subgroup":
        if self.dim != other.dim:
            raise DimensionMismatchError("sum of subgroups in different spaces", left=self.dim, right=other.dim)
        return Subgroup.from_generators(
            self.dim,
            self.space_generators() + other.space_generators(),
            self.lattice_generators() + other.lattice_generators(),
        )

    def image(self, F: RatMatrix) -> "Subgroup":
        """F(self) as a subgroup of Q^F.rows."""
        if F.cols != self.dim:
            raise DimensionMismatchError("map does not start at this space", dim=self.dim, cols=F.cols)
        return Subgroup.from_generators(
            F.rows,
            [F.apply(g) for g in self.space_generators()],
            [F.apply(g) for g in self.lattice_generators()],
        )

    def preimage(self, F: RatMatrix, target: "Subgroup") -> "Subgroup":
        """
        The subgroup {v in self : F v in target}.

        Writes v = W^T a + Lambda^T c and F v = W'^T a' + Lambda'^T c'; the
        rational unknowns are eliminated through the left null space of
        [F W^T | -W'^T] and the integral unknowns solved with an integral
        kernel.
        """
        if F.cols != self.dim or F.rows != target.dim:
            raise DimensionMismatchError("map shape does not fit the subgroups", rows=F.rows, cols=F.cols)
        W = self.space.transpose()
        Lam = self.lattice.transpose()
        W2 = target.space.transpose()
        Lam2 = target.lattice.transpose()
        Q = RatMatrix.hstack(F @ W, -W2, rows=F.rows)
        Lmat = RatMatrix.hstack(F @ Lam, -Lam2, rows=F.rows)
        k = self.space_dim
        r = self.lattice_rank

        space_gens = [W.apply(col[:k]) for col in Q.nullspace().columns()]

        if Q.cols:
            P = Q.left_nullspace()
        else:
            P = RatMatrix.identity(F.rows)
        kernel = integral_kernel(P @ Lmat) if Lmat.cols else IntMatrix.zeros(0, 0)
        lattice_gens = []
        for col in kernel.columns():
            c = col[:r]
            rhs = (-Lmat).apply(col)
            a = Q.solve(rhs)
            if a is None:
                raise ContractViolation("preimage elimination left an unsolvable system")
            lattice_gens.append([x + y for x, y in zip(W.apply(a[:k]), Lam.apply(c))])
        return Subgroup.from_generators(self.dim, space_gens, lattice_gens)

    def intersection(self, other: "Subgroup") -> "Subgroup":
        return self.preimage(RatMatrix.identity(self.dim), other)


@dataclass(frozen=True)
class Subquotient:
    """
    Normal form of S1 / S2 for subgroups S2 inside S1.

    The quotient is Z^free + (+)Z/n_i + Q^q + (Q/Z)^qz. ``project`` maps
    vectors of S1 to lifted coordinates of the quotient; ``lift`` maps lifted
    coordinates back into S1, and project(lift(x)) == x.
    """

    free_rank: int
    torsion: Tuple[int, ...]
    q_rank: int
    qz_rank: int
    project: RatMatrix
    lift: RatMatrix

    @property
    def dim(self) -> int:
        return self.free_rank + len(self.torsion) + self.q_rank + self.qz_rank

    @classmethod
    def of(cls, S1: Subgroup, S2: Subgroup, check: bool = True) -> "Subquotient":
        if S1.dim != S2.dim:
            raise DimensionMismatchError("subquotient of subgroups in different spaces", left=S1.dim, right=S2.dim)
        if check and not S1.contains_subgroup(S2):
            raise ContractViolation("subquotient denominator is not contained in numerator")
        N = S1.dim

        # quotient by the subspace of S2: coordinates off its pivots
        keep = [j for j in range(N) if j not in S2.pivots]
        rho_rows = []
        for j in keep:
            row = [Fraction(0)] * N
            row[j] = Fraction(1)
            for r, p in enumerate(S2.pivots):
                row[p] = -S2.space[r, j]
            rho_rows.append(row)
        rho = RatMatrix.from_rows(rho_rows, cols=N)
        emb = RatMatrix.from_columns([unit_vector(j, N) for j in keep], N)
        Nk = len(keep)

        bw_cols = [c for c in (rho.apply(g) for g in S1.space_generators())]
        bw = _independent_columns(bw_cols, Nk)
        bl = [rho.apply(g) for g in S1.lattice_generators()]
        n1, k1 = len(bw), len(bl)
        B = RatMatrix.from_columns(bw + bl, Nk)
        coord = _left_inverse(B)

        beta_rows, gamma_cols = [], []
        for g in S2.lattice_generators():
            x = coord.apply(rho.apply(g))
            gamma = x[n1:]
            if any(c.denominator != 1 for c in gamma):
                raise OutsideModuleClassError("subquotient relation is not integral in numerator coordinates")
            beta_rows.append(x[:n1])
            gamma_cols.append([int(c) for c in gamma])
        m2 = len(gamma_cols)
        Gamma = IntMatrix.from_columns(gamma_cols, k1)
        Bmat = RatMatrix.from_columns(beta_rows, n1)
        dec = snf(Gamma)
        U, V = dec.U, dec.V
        d = dec.diagonal
        s = dec.rank
        Bp = Bmat @ V if m2 else RatMatrix.zeros(n1, 0)

        shear = RatMatrix.from_columns(
            [
                [-x / d[j] for x in Bp.column(j)] if j < s else [Fraction(0)] * n1
                for j in range(k1)
            ],
            n1,
        )
        lam_gens = [list(Bp.column(j)) for j in range(s, m2)]
        E = _lattice_basis(lam_gens, n1)
        rho_rank = E.rows
        _, epivots = E.rref()
        complement = [i for i in range(n1) if i not in epivots]
        basis = RatMatrix.from_columns(
            [list(E.row(i)) for i in range(rho_rank)]
            + [unit_vector(i, n1) for i in complement],
            n1,
        )
        inv = basis.inverse() if n1 else RatMatrix.zeros(0, 0)

        torsion_index = [j for j in range(s) if d[j] > 1]
        free_index = list(range(s, k1))
        torsion = tuple(d[j] for j in torsion_index)
        free_rank = len(free_index)
        q_rank = n1 - rho_rank
        qz_rank = rho_rank
        dim = free_rank + len(torsion) + q_rank + qz_rank

        Uq = U.to_rat()
        # (beta; gamma) -> (beta_hat; gamma_tilde)
        to_tilde = RatMatrix.vstack(
            RatMatrix.hstack(RatMatrix.identity(n1), shear @ Uq, rows=n1),
            RatMatrix.hstack(RatMatrix.zeros(k1, n1), Uq, rows=k1),
            cols=n1 + k1,
        )
        # (beta_hat; gamma_tilde) -> (u; w; gamma_tilde)
        to_uw = RatMatrix.block_diag(inv, RatMatrix.identity(k1))
        select_rows = []
        for j in free_index + torsion_index:
            select_rows.append(unit_vector(n1 + j, n1 + k1))
        for i in range(rho_rank, n1):
            select_rows.append(unit_vector(i, n1 + k1))
        for i in range(rho_rank):
            select_rows.append(unit_vector(i, n1 + k1))
        select = RatMatrix.from_rows(select_rows, cols=n1 + k1)
        project = select @ to_uw @ to_tilde @ coord @ rho

        Uinv = Uq.inverse()
        lift_cols = []
        for position in range(dim):
            e = [Fraction(0)] * dim
            e[position] = Fraction(1)
            gt = [Fraction(0)] * k1
            for idx, j in enumerate(free_index + torsion_index):
                gt[j] = e[idx]
            offset = free_rank + len(torsion)
            w = e[offset : offset + q_rank]
            u = e[offset + q_rank :]
            beta_hat = basis.apply(list(u) + list(w))
            gamma = Uinv.apply(gt)
            beta = [x - y for x, y in zip(beta_hat, shear.apply(gt))]
            lift_cols.append(emb.apply(B.apply(list(beta) + list(gamma))))
        lift = RatMatrix.from_columns(lift_cols, N)
        logger.debug(
            "subquotient",
            free=free_rank,
            torsion=torsion,
            q=q_rank,
            qz=qz_rank,
        )
        return cls(free_rank, torsion, q_rank, qz_rank, project, lift)


def _independent_columns(columns: List[Tuple[Fraction, ...]], dim: int) -> List[List[Fraction]]:
    """Basis of the span of the given vectors (rref rows)."""
    if not columns:
        return []
    reduced, pivots = RatMatrix.from_rows([list(c) for c in columns], cols=dim).rref()
    return [list(reduced.row(i)) for i in range(len(pivots))]


def _left_inverse(B: RatMatrix) -> RatMatrix:
    """Left inverse of a full column rank matrix, supported on independent rows."""
    if B.cols == 0:
        return RatMatrix.zeros(0, B.rows)
    _, rows = B.transpose().rref()
    if len(rows) != B.cols:
        raise ContractViolation("numerator coordinates are not independent")
    square = B.submatrix(rows, range(B.cols)).inverse()
    out = [[Fraction(0)] * B.rows for _ in range(B.cols)]
    for a, r in enumerate(rows):
        for i in range(B.cols):
            out[i][r] = square[i, a]
    return RatMatrix.from_rows(out, cols=B.rows)
