"""
Machine-readable reports.

A report is a plain mapping dumped as YAML: validation result, chi, chi_l
per prime and, with a trivialization, the refined class with its valuation
vector and agreement flags. Timings are added only on request so that
default reports are identical across runs.
"""

import time
from contextlib import contextmanager
from typing import Any, Dict, Iterator, List, Optional, Sequence

import structlog
import yaml

from refined_euler.ladic import chi_l
from refined_euler.npc import NearlyPerfectComplex, build_cone, chi, validate
from refined_euler.relk import PosRational
from refined_euler.torsion import GradedTrivialization, refined_class

logger = structlog.get_logger()


def rational_text(q: PosRational) -> str:
    return str(q)


class _Timer:
    def __init__(self, enabled: bool):
        self.enabled = enabled
        self.timings: Dict[str, float] = {}

    @contextmanager
    def section(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            if self.enabled:
                self.timings[name] = round(time.perf_counter() - start, 6)


def build_report(
    npc: NearlyPerfectComplex,
    primes: Sequence[int],
    lam: Optional[GradedTrivialization] = None,
    alternates: Sequence[GradedTrivialization] = (),
    timing: bool = False,
) -> Dict[str, Any]:
    """
    Compute every invariant of an instance.

    Invalid instances produce a report holding only the validation section.

    Raises:
        ContractViolation: If a cross-check fails while computing
    """
    timer = _Timer(timing)
    report: Dict[str, Any] = {}
    with timer.section("validation"):
        validation = validate(npc)
    report["validation"] = {"valid": validation.valid, "issues": validation.summary()}
    if not validation.valid:
        return report

    with timer.section("chi"):
        data = build_cone(npc)
        report["chi"] = chi(npc, data)
    report["chi_l"] = {}
    with timer.section("chi_l"):
        for l in primes:
            report["chi_l"][l] = chi_l(npc, l)
    report["chi_l_agrees"] = all(v == report["chi"] for v in report["chi_l"].values())

    if lam is not None:
        with timer.section("chi_rel"):
            result = refined_class(npc, lam)
            report["chi_rel"] = {
                "value": rational_text(result.value),
                "num": result.value.numerator,
                "den": result.value.denominator,
                "rational_route": rational_text(result.rational_route),
                "prime_route": rational_text(result.prime_route),
                "valuations": dict(result.valuations),
                "local": {l: result.local(l) for l in primes},
                "routes_agree": result.routes_agree,
                "forgetful_agrees": result.forgetful_agrees,
                "rank_agrees": result.rank_agrees,
            }
            alternate_values: List[str] = []
            for other in alternates:
                alternate_values.append(rational_text(refined_class(npc, lam, alternate=other).value))
            if alternates:
                report["chi_rel"]["alternates"] = alternate_values
                report["chi_rel"]["alternates_agree"] = all(v == report["chi_rel"]["value"] for v in alternate_values)
    if timing:
        report["timings"] = timer.timings
    logger.debug("report built", sections=list(report))
    return report


def report_is_consistent(report: Dict[str, Any]) -> bool:
    """True when every agreement flag in the report holds."""
    flags = [report.get("chi_l_agrees", True)]
    rel = report.get("chi_rel", {})
    flags += [rel.get(k, True) for k in ("routes_agree", "forgetful_agrees", "rank_agrees", "alternates_agree")]
    return all(flags)


def dump_report(report: Dict[str, Any]) -> str:
    return yaml.safe_dump(report, sort_keys=False, default_flow_style=False)
