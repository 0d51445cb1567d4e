from random import Random

import pytest
from pydantic import ValidationError

from refined_euler.checks import SUITES, Bounds, Case, PropertySuite, SuiteRunner, resolve
from refined_euler.checks.base import expect
from refined_euler.checks.generators import (
    npc_piece,
    perfect_from_pieces,
    random_automorphism,
    random_npc,
    scramble_npc,
    with_lattice,
)
from refined_euler.ladic import chi_l
from refined_euler.mixedmod import QZ, MixedModule, ModuleHom
from refined_euler.npc import NearlyPerfectComplex, chi, direct_sum_npc, validate
from refined_euler.torsion import GradedTrivialization, chi_rel_npc

SMALL = Bounds(length=2, rank=2, torsion=12, lattice=1, entry=3, matrix=3)


class AlwaysFails(PropertySuite):
    name = "fails"

    def generate(self, rng: Random, kind: str) -> Case:
        return Case("coin", rng.randint(0, 1))

    def check(self, case: Case) -> None:
        expect(False, "never holds", value=case.data)


class Recording(PropertySuite):
    name = "recording"
    kinds = ("left", "right")

    def __init__(self):
        super().__init__()
        self.seen = []

    def generate(self, rng: Random, kind: str) -> Case:
        return Case(kind, rng.random())

    def check(self, case: Case) -> None:
        self.seen.append((case.kind, case.data))


@pytest.mark.unit
class TestRunner:
    def test_failures_are_collected(self):
        result = SuiteRunner(seed=0, cases=3, progress=False).run(AlwaysFails())
        assert not result.ok
        assert (result.passed, result.failed, result.total) == (0, 3, 3)
        assert all("never holds" in f for f in result.failures)
        assert result.failures[0].startswith("case 0 (coin)")

    def test_cases_count_per_property(self):
        suite = Recording()
        result = SuiteRunner(seed=0, cases=4, progress=False).run(suite)
        assert result.total == 8
        assert [kind for kind, _ in suite.seen] == ["left"] * 4 + ["right"] * 4

    def test_runs_are_deterministic(self):
        first, second = Recording(), Recording()
        SuiteRunner(seed=11, cases=4, progress=False).run(first)
        SuiteRunner(seed=11, cases=4, progress=False).run(second)
        assert first.seen == second.seen

    def test_seed_changes_the_cases(self):
        first, second = Recording(), Recording()
        SuiteRunner(seed=1, cases=4, progress=False).run(first)
        SuiteRunner(seed=2, cases=4, progress=False).run(second)
        assert first.seen != second.seen

    def test_properties_do_not_share_a_generator(self):
        both, alone = Recording(), Recording()
        SuiteRunner(seed=5, cases=3, progress=False).run(both)
        SuiteRunner(seed=5, cases=3, progress=False).run(alone, ["right"])
        assert alone.seen == both.seen[3:]

    def test_unknown_property(self):
        with pytest.raises(KeyError):
            SuiteRunner(seed=0, cases=1, progress=False).run(Recording(), ["middle"])


@pytest.mark.unit
class TestResolve:
    def test_all(self):
        suites = resolve("all")
        assert [s.name for s in suites] == list(SUITES)
        assert set(SUITES) == {"linalg", "mixed", "cone", "ladic", "relk", "torsion"}

    def test_single(self):
        (suite,) = resolve("relk", SMALL)
        assert suite.bounds == SMALL

    def test_unknown(self):
        with pytest.raises(KeyError):
            resolve("nope")

    def test_bounds_are_validated(self):
        with pytest.raises(ValidationError):
            Bounds(length=0)
        with pytest.raises(ValidationError):
            Bounds(torsion=1)
        with pytest.raises(ValidationError):
            Bounds(entry=51)


@pytest.mark.unit
class TestGenerators:
    @pytest.mark.parametrize("seed", range(5))
    def test_automorphism(self, seed):
        M = MixedModule(free_rank=2, torsion=(4,), q_rank=1, qz_rank=2)
        g = random_automorphism(Random(seed), M)
        assert g.compose(g.inverse()) == ModuleHom.identity(M)

    @pytest.mark.parametrize("seed", range(5))
    def test_scrambling_keeps_the_invariants(self, z_plus_qz_degree3, seed):
        rng = Random(seed)
        mixed = scramble_npc(rng, z_plus_qz_degree3)
        assert validate(mixed).valid
        assert chi(mixed) == chi(z_plus_qz_degree3) == 0
        assert [chi_l(mixed, l) for l in (2, 3)] == [0, 0]
        lam = GradedTrivialization.scalar(3)
        assert chi_rel_npc(mixed, lam) == chi_rel_npc(z_plus_qz_degree3, lam)

    @pytest.mark.parametrize("seed", range(5))
    def test_wrapped_piece(self, seed):
        rng = Random(seed)
        pieces = [("wrap", 2), ("free", 3), ("free", 3)]
        npc = direct_sum_npc(*[npc_piece(rng, Bounds(), kind, degree) for kind, degree in pieces])
        mixed = scramble_npc(rng, npc)
        assert validate(npc).valid
        assert validate(mixed).valid
        assert chi(mixed) == chi(npc) == 0
        assert chi_l(mixed, 2) == 0
        lam = GradedTrivialization.from_rows([[3, 1], [0, 2]])
        assert chi_rel_npc(mixed, lam) == chi_rel_npc(npc, lam)

    def test_scrambling_mixes_the_differential(self, qz_degree3):
        """Z -2-> Z under a Q/Z summand picks up a nonzero Z -> Q/Z entry for some seed."""
        pair = NearlyPerfectComplex(perfect_from_pieces([("pair", 2, 2)], 2, 3))
        npc = direct_sum_npc(pair, qz_degree3)
        rows = npc.complex.term(3).indices(QZ)
        mixed = [scramble_npc(Random(seed), npc).complex.differential(2).matrix for seed in range(100)]
        assert any(d[row, 0] != 0 for d in mixed for row in rows)

    @pytest.mark.parametrize("seed", range(6))
    def test_random_instances_are_valid(self, seed):
        rng = Random(seed)
        assert validate(random_npc(rng, SMALL)).valid
        assert validate(with_lattice(rng, SMALL)).valid


@pytest.mark.integration
@pytest.mark.parametrize("name", ["linalg", "mixed", "relk"])
def test_fast_suites_pass(name):
    (suite,) = resolve(name, SMALL)
    result = SuiteRunner(seed=0, cases=4, progress=False).run(suite)
    assert result.ok, result.failures
    assert result.total == 4 * len(suite.kinds)


@pytest.mark.integration
@pytest.mark.slow
@pytest.mark.parametrize("name", ["cone", "ladic", "torsion"])
def test_complex_suites_pass(name):
    (suite,) = resolve(name, SMALL)
    result = SuiteRunner(seed=0, cases=3, progress=False).run(suite)
    assert result.ok, result.failures


@pytest.mark.integration
@pytest.mark.slow
def test_default_bounds_across_seeds():
    runner = SuiteRunner(seed=2024, cases=2, progress=False)
    for suite in resolve("all"):
        result = runner.run(suite)
        assert result.ok, (suite.name, result.failures)


@pytest.mark.integration
@pytest.mark.slow
@pytest.mark.parametrize(
    "name,kind,cases,bounds",
    [
        ("linalg", "snf", 500, Bounds(entry=50, matrix=8)),
        ("cone", "single", 200, Bounds()),
        ("cone", "sequence", 100, Bounds()),
        ("ladic", "sequence", 100, Bounds()),
        ("mixed", "completion", 100, Bounds()),
        ("ladic", "chi_l", 200, Bounds()),
        ("torsion", "splitting", 100, Bounds()),
        ("torsion", "acyclic", 50, Bounds()),
        ("torsion", "change", 100, Bounds()),
        ("torsion", "rational_acyclic", 100, Bounds()),
        ("torsion", "quasi_iso", 50, Bounds()),
        ("ladic", "snake", 50, Bounds()),
        ("torsion", "npc", 50, Bounds()),
        ("mixed", "tate", 90, Bounds()),
    ],
)
def test_property_at_full_count(name, kind, cases, bounds):
    (suite,) = resolve(name, bounds)
    result = SuiteRunner(seed=7, cases=cases, progress=False).run(suite, [kind])
    assert result.total == cases
    assert result.ok, result.failures[:5]
