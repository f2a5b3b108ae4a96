"""
Instance Files
==============

JSON instance documents:

    {"num_agents": 4,
     "domains": [[-10, 10], ...],
     "objective": "min",
     "functions": [{"id": 12, "scope": [0, 1], "expr": "(- (^ x0 2) (^ x1 2))"}, ...]}

Expressions use the prefix grammar of cdcop.expression (see docs/instance_format.md).
"""
import json
import logging
from pathlib import Path

from cdcop.expression import format_expression
from cdcop.instance import CdcopInstance, CostFunction, Domain, validate_instance
from errors import ConfigError, InvalidInstance, PcdError

logger = logging.getLogger(__name__)

# The four-agent example: x1..x4 are agents 0..3, all domains [-10, 10].
FIG1_DOCUMENT = {
    "num_agents": 4,
    "domains": [[-10.0, 10.0]] * 4,
    "objective": "min",
    "functions": [
        {"id": 12, "scope": [0, 1], "expr": "(- (^ x0 2) (^ x1 2))"},
        {"id": 13, "scope": [0, 2], "expr": "(+ (^ x0 2) (* 2 x0 x1))"},
        {"id": 14, "scope": [0, 3], "expr": "(- (* 2 (^ x0 2)) (* 2 (^ x1 2)))"},
        {"id": 34, "scope": [2, 3], "expr": "(+ (^ x0 2) (* 3 (^ x1 2)))"},
    ],
}


def instance_from_document(document, validate=True) -> CdcopInstance:
    try:
        inst = CdcopInstance(
            num_agents=int(document["num_agents"]),
            domains=tuple(Domain(float(lb), float(ub)) for lb, ub in document["domains"]),
            functions=tuple(
                CostFunction.from_text(f["id"], f["scope"], f["expr"])
                for f in document["functions"]
            ),
            objective=document.get("objective", "min"),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"malformed instance document: {e!r}") from e
    if validate:
        violations = validate_instance(inst)
        if violations:
            raise InvalidInstance(violations)
    return inst


def instance_to_document(inst: CdcopInstance) -> dict:
    """Inverse of instance_from_document; functions keep their original sign."""
    return {
        "num_agents": inst.num_agents,
        "domains": [[d.lb, d.ub] for d in inst.domains],
        "objective": inst.objective.value,
        "functions": [
            {"id": f.id, "scope": list(f.scope), "expr": format_expression(f.expr)}
            for f in inst.functions
        ],
    }


def dumps_instance(inst: CdcopInstance) -> str:
    return json.dumps(instance_to_document(inst), indent=2, sort_keys=True) + "\n"


def dump_instance(inst: CdcopInstance, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_instance(inst), encoding="utf-8")
    return path


def load_instance(path) -> CdcopInstance:
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"instance file not found at {path}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"could not parse instance file {path}: {e}") from e
    try:
        inst = instance_from_document(document)
    except PcdError as e:
        raise type(e)(*_error_args(e, path)) from e
    logger.info(
        "Loaded %s: %d agents, %d functions, objective %s",
        path, inst.num_agents, inst.num_edges, inst.objective.value,
    )
    return inst


def _error_args(error, path):
    if isinstance(error, InvalidInstance):
        return ([{**v, "description": f"{path}: {v['description']}"} for v in error.violations],)
    return (f"{path}: {error}",)


def example_instance() -> CdcopInstance:
    return instance_from_document(FIG1_DOCUMENT)
