"""
Pytest configuration and shared fixtures.

The worked instances below have hand-computed invariants and are reused by
several test modules.
"""

from pathlib import Path
from random import Random

import pytest

from refined_euler.complexes import BoundedComplex
from refined_euler.exact_linalg import RatMatrix
from refined_euler.mixedmod import MixedModule
from refined_euler.npc import NearlyPerfectComplex, TauMap
from refined_euler.utils.config import get_settings

INSTANCES_DIR = Path(__file__).parent.parent / "instances"

Z = MixedModule.free(1)
QZ = MixedModule(qz_rank=1)


def matrix(*rows):
    return RatMatrix.from_rows([list(r) for r in rows])


@pytest.fixture(autouse=True)
def fresh_settings():
    """Settings are cached per process; tests that patch the environment need a clean cache."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng():
    return Random(0)


@pytest.fixture
def instances_dir():
    return INSTANCES_DIR


@pytest.fixture
def times_three():
    """Z -3-> Z in degrees 0 and 1: H^1 = Z/3, everything else vanishes."""
    return BoundedComplex.from_matrices(0, [Z, Z], [matrix([3])])


@pytest.fixture
def times_three_npc(times_three):
    return NearlyPerfectComplex(times_three)


@pytest.fixture
def z5_npc():
    """Z/5 in degree 0."""
    return NearlyPerfectComplex(BoundedComplex.concentrated(MixedModule(torsion=(5,)), 0))


@pytest.fixture
def qz_degree3():
    """Q/Z in degree 3 with L_3 = Z and tau the identity."""
    return NearlyPerfectComplex(
        BoundedComplex.concentrated(QZ, 3),
        {3: 1},
        {3: TauMap("qz", matrix([1]))},
    )


@pytest.fixture
def z_plus_qz_degree3():
    """Z + Q/Z in degree 3 with L_3 = Z mapped onto the Q/Z summand."""
    return NearlyPerfectComplex(
        BoundedComplex.concentrated(MixedModule(free_rank=1, qz_rank=1), 3),
        {3: 1},
        {3: TauMap("qz", matrix([0], [1]))},
    )


@pytest.fixture
def q_onto_qz():
    """Q -> Q/Z in degrees 0 and 1; H^0 = Z, acyclic elsewhere."""
    return NearlyPerfectComplex(BoundedComplex.from_matrices(0, [MixedModule(q_rank=1), QZ], [matrix([1])]))
