"""
C-DCOP Model
============

Instances, cost expressions and instance files.
"""
from cdcop.expression import eval_expr, format_expression, parse_expression
from cdcop.instance import (
    CdcopInstance,
    CostFunction,
    Domain,
    Objective,
    constraint_cost,
    global_cost,
    incident_functions,
    validate_instance,
)
from cdcop.instance_file import dump_instance, example_instance, load_instance

__all__ = [
    "CdcopInstance",
    "CostFunction",
    "Domain",
    "Objective",
    "constraint_cost",
    "dump_instance",
    "eval_expr",
    "example_instance",
    "format_expression",
    "global_cost",
    "incident_functions",
    "load_instance",
    "parse_expression",
    "validate_instance",
]
