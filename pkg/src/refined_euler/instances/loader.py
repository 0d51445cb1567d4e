"""
Reading instance and trivialization files.

Documents are parsed twice: once into plain data for the pydantic models and
once into the YAML node graph, which is used to attach a line and column to
schema errors.
"""

from pathlib import Path
from typing import Any, List, Optional, Sequence, Tuple, Type, TypeVar, Union

import structlog
import yaml
from pydantic import BaseModel, ValidationError

from refined_euler.errors import ContractViolation, InstanceParseError, RefinedEulerError
from refined_euler.instances.schema import InstanceModel, TrivializationModel
from refined_euler.npc import NearlyPerfectComplex
from refined_euler.torsion import GradedTrivialization

logger = structlog.get_logger()

ModelT = TypeVar("ModelT", bound=BaseModel)


def _read_yaml(text: str) -> Tuple[Any, Optional[yaml.Node]]:
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        line = mark.line + 1 if mark else None
        column = mark.column + 1 if mark else None
        raise InstanceParseError(f"YAML syntax error: {exc.problem}", line=line, column=column) from exc
    except yaml.YAMLError as exc:
        raise InstanceParseError(f"YAML error: {exc}") from exc
    return data, node


def _locate(node: Optional[yaml.Node], loc: Sequence[Union[int, str]]) -> Optional[yaml.Node]:
    """Deepest node along a pydantic error location."""
    current = node
    for part in loc:
        if isinstance(current, yaml.MappingNode):
            match = next((v for k, v in current.value if str(k.value) == str(part)), None)
        elif isinstance(current, yaml.SequenceNode) and isinstance(part, int) and part < len(current.value):
            match = current.value[part]
        else:
            match = None
        if match is None:
            break
        current = match
    return current


def _validate(model: Type[ModelT], data: Any, node: Optional[yaml.Node], what: str) -> ModelT:
    if not isinstance(data, dict):
        line = node.start_mark.line + 1 if node is not None else 1
        column = node.start_mark.column + 1 if node is not None else 1
        raise InstanceParseError(f"{what} must be a mapping", line=line, column=column)
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        error = exc.errors()[0]
        loc = list(error["loc"])
        target = _locate(node, loc)
        mark = target.start_mark if target is not None else None
        raise InstanceParseError(
            error["msg"],
            line=mark.line + 1 if mark else None,
            column=mark.column + 1 if mark else None,
            field=".".join(str(p) for p in error["loc"]) or what,
        ) from exc


def parse_instance(text: str) -> NearlyPerfectComplex:
    """
    Parse an instance document.

    Raises:
        InstanceParseError: On YAML syntax errors, schema errors or matrices
            that do not define homomorphisms
    """
    data, node = _read_yaml(text)
    model = _validate(InstanceModel, data, node, "instance")
    try:
        npc = model.to_npc()
    except ContractViolation:
        raise
    except RefinedEulerError as exc:
        target = _locate(node, ["complex"])
        mark = target.start_mark if target is not None else None
        raise InstanceParseError(
            str(exc),
            line=mark.line + 1 if mark else None,
            column=mark.column + 1 if mark else None,
        ) from exc
    logger.debug("parsed instance", name=model.name, degrees=list(npc.complex.degrees()))
    return npc


def load_instance(path: Union[str, Path]) -> NearlyPerfectComplex:
    return parse_instance(Path(path).read_text())


def parse_trivialization(text: str) -> Tuple[GradedTrivialization, List[GradedTrivialization]]:
    """
    Parse a trivialization document into lambda and its alternates.

    Raises:
        InstanceParseError: On syntax or schema errors, or singular matrices
    """
    data, node = _read_yaml(text)
    model = _validate(TrivializationModel, data, node, "trivialization")
    try:
        return model.trivialization(), model.alternate_trivializations()
    except ContractViolation:
        raise
    except RefinedEulerError as exc:
        target = _locate(node, ["lambda"])
        mark = target.start_mark if target is not None else None
        raise InstanceParseError(
            str(exc),
            line=mark.line + 1 if mark else None,
            column=mark.column + 1 if mark else None,
        ) from exc


def load_trivialization(path: Union[str, Path]) -> Tuple[GradedTrivialization, List[GradedTrivialization]]:
    return parse_trivialization(Path(path).read_text())
