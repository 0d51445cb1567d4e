"""
Property suite base classes and the seeded runner.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from random import Random
from typing import Any, List, Optional, Sequence, Tuple

import structlog
from tqdm import tqdm

from refined_euler.checks.generators import Bounds
from refined_euler.errors import ContractViolation

logger = structlog.get_logger()


def expect(condition: bool, message: str, **context: Any) -> None:
    """Raise a contract violation unless the property holds."""
    if not condition:
        raise ContractViolation(message, **context)


@dataclass(frozen=True)
class Case:
    """One generated case: the property to check and its inputs."""

    kind: str
    data: Any


class PropertySuite(ABC):
    """
    A family of properties checked on randomly generated cases.

    ``kinds`` names the properties; the runner draws the same number of cases
    for each of them.
    """

    name: str = ""
    kinds: Tuple[str, ...] = ("default",)

    def __init__(self, bounds: Optional[Bounds] = None):
        self.bounds = bounds or Bounds()
        self.logger = logger.bind(suite=self.name)

    @abstractmethod
    def generate(self, rng: Random, kind: str) -> Case:
        """Draw one case of the given property from the seeded generator."""
        pass

    @abstractmethod
    def check(self, case: Case) -> None:
        """Raise ContractViolation (or any package error) if the case fails."""
        pass


class MultiPropertySuite(PropertySuite):
    """
    A suite of several properties.

    Subclasses list ``kinds`` and implement ``_generate_<kind>(rng)`` and
    ``_check_<kind>(data)`` for each of them.
    """

    def generate(self, rng: Random, kind: str) -> Case:
        return Case(kind, getattr(self, f"_generate_{kind}")(rng))

    def check(self, case: Case) -> None:
        getattr(self, f"_check_{case.kind}")(case.data)


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failed: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.passed + self.failed

    @property
    def ok(self) -> bool:
        return self.failed == 0


class SuiteRunner:
    """Runs a fixed number of deterministic cases for every property of a suite."""

    def __init__(self, seed: int, cases: int, progress: bool = True):
        self.seed = seed
        self.cases = cases
        self.progress = progress
        self.logger = logger.bind(component="checks")

    def run(self, suite: PropertySuite, kinds: Optional[Sequence[str]] = None) -> SuiteResult:
        """
        Run one suite, or only the listed properties of it.

        Every property draws from its own generator seeded with ``seed`` and
        the property name, so its cases do not depend on which other suites
        or properties ran before it.

        Raises:
            KeyError: If a listed property is not one of the suite's kinds
        """
        selected = tuple(kinds) if kinds else suite.kinds
        unknown = [k for k in selected if k not in suite.kinds]
        if unknown:
            raise KeyError(f"unknown properties for {suite.name}: {', '.join(unknown)}")
        result = SuiteResult(suite.name)
        self.logger.info("Starting suite", suite=suite.name, seed=self.seed, cases=self.cases, kinds=selected)
        with tqdm(
            total=self.cases * len(selected),
            desc=f"Checking {suite.name}",
            unit="cases",
            disable=not self.progress,
        ) as bar:
            for kind in selected:
                rng = Random(f"{self.seed}:{suite.name}:{kind}")
                for index in range(self.cases):
                    self._run_case(suite, kind, index, rng, result)
                    bar.update(1)
        self.logger.info("Completed suite", suite=suite.name, passed=result.passed, failed=result.failed)
        return result

    def _run_case(self, suite: PropertySuite, kind: str, index: int, rng: Random, result: SuiteResult) -> None:
        case: Optional[Case] = None
        try:
            case = suite.generate(rng, kind)
            suite.check(case)
        except Exception as e:
            label = case.kind if case is not None else kind
            result.failed += 1
            result.failures.append(f"case {index} ({label}): {e}")
            self.logger.error("Property failed", suite=suite.name, case=index, kind=label, error=str(e))
            return
        result.passed += 1
