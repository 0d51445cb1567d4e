"""Randomized property suites checking the invariants of the library."""

from refined_euler.checks.base import Case, PropertySuite, SuiteResult, SuiteRunner
from refined_euler.checks.generators import Bounds
from refined_euler.checks.suites import SUITES, resolve

__all__ = ["Bounds", "Case", "PropertySuite", "SUITES", "SuiteResult", "SuiteRunner", "resolve"]
