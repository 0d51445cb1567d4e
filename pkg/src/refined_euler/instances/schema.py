"""
Pydantic models of instance and trivialization documents.

Rationals are integers or ``"num/den"`` strings. Matrices are lists of rows
in lifted coordinates, rows indexed by target coordinates.
"""

from typing import Annotated, Dict, List, Literal, Optional, Sequence, Union

from pydantic import AfterValidator, BaseModel, ConfigDict, Field, StrictInt, field_validator, model_validator

from refined_euler.complexes import BoundedComplex
from refined_euler.exact_linalg import RatMatrix, as_fraction
from refined_euler.mixedmod import MixedModule
from refined_euler.npc import NearlyPerfectComplex, TauMap
from refined_euler.torsion import GradedTrivialization


def _check_rational(value: Union[int, str]) -> Union[int, str]:
    try:
        as_fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {value!r}") from exc
    return value


Rational = Annotated[Union[StrictInt, str], AfterValidator(_check_rational)]
Matrix = List[List[Rational]]


def to_matrix(rows: Sequence[Sequence[Union[int, str]]], n_rows: int, n_cols: int) -> RatMatrix:
    if not n_rows:
        return RatMatrix.zeros(0, n_cols)
    return RatMatrix.from_rows([[as_fraction(x) for x in row] for row in rows], cols=n_cols)


def _check_shape(rows: Sequence[Sequence[object]], n_rows: int, n_cols: int, what: str) -> None:
    if len(rows) != n_rows:
        raise ValueError(f"{what} needs {n_rows} rows, got {len(rows)}")
    for k, row in enumerate(rows):
        if len(row) != n_cols:
            raise ValueError(f"{what} row {k} needs {n_cols} entries, got {len(row)}")


class ModuleModel(BaseModel):
    """Z^a + (+)Z/n + Q^b + (Q/Z)^c with torsion factors in a divisibility chain."""

    model_config = ConfigDict(extra="forbid")

    free_rank: int = Field(default=0, ge=0)
    torsion: List[int] = Field(default_factory=list)
    q_rank: int = Field(default=0, ge=0)
    qz_rank: int = Field(default=0, ge=0)

    @field_validator("torsion")
    @classmethod
    def _divisibility_chain(cls, torsion: List[int]) -> List[int]:
        if any(n < 2 for n in torsion):
            raise ValueError("torsion factors must be at least 2")
        for a, b in zip(torsion, torsion[1:]):
            if b % a:
                raise ValueError(f"torsion factors must form a divisibility chain ({a} does not divide {b})")
        return torsion

    @property
    def dim(self) -> int:
        return self.free_rank + len(self.torsion) + self.q_rank + self.qz_rank

    def to_module(self) -> MixedModule:
        return MixedModule(self.free_rank, tuple(self.torsion), self.q_rank, self.qz_rank)


class ComplexModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    min_degree: int = 0
    terms: List[ModuleModel] = Field(default_factory=list)
    differentials: List[Matrix] = Field(default_factory=list)

    @model_validator(mode="after")
    def _differential_shapes(self) -> "ComplexModel":
        expected = max(len(self.terms) - 1, 0)
        if len(self.differentials) != expected:
            raise ValueError(f"{len(self.terms)} terms need {expected} differentials, got {len(self.differentials)}")
        for k, rows in enumerate(self.differentials):
            _check_shape(rows, self.terms[k + 1].dim, self.terms[k].dim, f"differential {self.min_degree + k}")
        return self

    def degree_of(self, k: int) -> int:
        return self.min_degree + k


class TauModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    source: Literal["qz", "q"] = "qz"
    matrix: Matrix


class ActionModel(BaseModel):
    """Generator of a cyclic group action, one matrix per degree."""

    model_config = ConfigDict(extra="forbid")

    order: int = Field(ge=1)
    generators: Dict[int, Matrix] = Field(default_factory=dict)


class InstanceModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: Optional[str] = None
    complex: ComplexModel
    lattices: Dict[int, int] = Field(default_factory=dict)
    tau: Dict[int, TauModel] = Field(default_factory=dict)
    action: Optional[ActionModel] = None

    @field_validator("lattices")
    @classmethod
    def _nonnegative_ranks(cls, lattices: Dict[int, int]) -> Dict[int, int]:
        for i, r in lattices.items():
            if r < 0:
                raise ValueError(f"lattice rank in degree {i} is negative")
        return lattices

    @model_validator(mode="after")
    def _tau_shapes(self) -> "InstanceModel":
        terms = self.complex.terms
        low = self.complex.min_degree
        for i, tau in self.tau.items():
            dim = terms[i - low].dim if 0 <= i - low < len(terms) else 0
            _check_shape(tau.matrix, dim, self.lattices.get(i, 0), f"tau in degree {i}")
        if self.action is not None:
            for i, rows in self.action.generators.items():
                dim = terms[i - low].dim if 0 <= i - low < len(terms) else 0
                _check_shape(rows, dim, dim, f"action generator in degree {i}")
        return self

    def to_npc(self) -> NearlyPerfectComplex:
        """
        Build the nearly perfect complex; the data is not validated here.

        Raises:
            RefinedEulerError: If the matrices do not define homomorphisms
        """
        c = self.complex
        modules = [t.to_module() for t in c.terms]
        if self.action is not None:
            generators = self.action.generators
            modules = [
                M.with_action(
                    to_matrix(generators.get(c.degree_of(k), _identity(M.dim)), M.dim, M.dim),
                    self.action.order,
                )
                for k, M in enumerate(modules)
            ]
        matrices = [
            to_matrix(rows, modules[k + 1].dim, modules[k].dim) for k, rows in enumerate(c.differentials)
        ]
        if modules:
            complex_ = BoundedComplex.from_matrices(c.min_degree, modules, matrices)
        else:
            complex_ = BoundedComplex.zero(c.min_degree)
        tau = {
            i: TauMap(t.source, to_matrix(t.matrix, complex_.term(i).dim, self.lattices.get(i, 0)))
            for i, t in self.tau.items()
        }
        return NearlyPerfectComplex(complex_, dict(self.lattices), tau)


def _identity(n: int) -> List[List[int]]:
    return [[1 if r == c else 0 for c in range(n)] for r in range(n)]


class TrivializationModel(BaseModel):
    """lambda and optional alternates, odd to even in the external order."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    lambda_: Matrix = Field(alias="lambda")
    alternates: List[Matrix] = Field(default_factory=list)

    @field_validator("lambda_")
    @classmethod
    def _square(cls, rows: List[List[Union[int, str]]]) -> List[List[Union[int, str]]]:
        _check_shape(rows, len(rows), len(rows), "lambda")
        return rows

    @field_validator("alternates")
    @classmethod
    def _square_alternates(cls, alternates: List[List[List[Union[int, str]]]]) -> List[List[List[Union[int, str]]]]:
        for k, rows in enumerate(alternates):
            _check_shape(rows, len(rows), len(rows), f"alternate {k}")
        return alternates

    def trivialization(self) -> GradedTrivialization:
        return _graded(self.lambda_)

    def alternate_trivializations(self) -> List[GradedTrivialization]:
        return [_graded(rows) for rows in self.alternates]


def _graded(rows: Sequence[Sequence[Union[int, str]]]) -> GradedTrivialization:
    n = len(rows)
    return GradedTrivialization(to_matrix(rows, n, n))
