import json

import numpy as np
import pytest

from cdcop.instance import (
    CdcopInstance,
    CostFunction,
    Domain,
    check_assignment,
    constraint_cost,
    global_cost,
    incident_functions,
    validate_instance,
)
from cdcop.expression import parse_expression
from cdcop.instance_file import (
    FIG1_DOCUMENT,
    dump_instance,
    dumps_instance,
    instance_from_document,
    load_instance,
)
from errors import ConfigError, InvalidInstance
from tests.conftest import make_instance


def issue_types(inst):
    return {issue["type"] for issue in validate_instance(inst)}


def test_example_is_valid(example):
    assert validate_instance(example) == []
    assert example.num_edges == 4
    assert example.neighbors(0) == (1, 2, 3)
    assert example.neighbors(3) == (0, 2)


def test_example_global_cost(example, example_positions):
    expected = [14.56, 18.0, 7.0, 9.64]
    np.testing.assert_allclose(global_cost(example, example_positions), expected)
    for row, cost in zip(example_positions, expected):
        assert global_cost(example, row) == pytest.approx(cost)


def test_example_constraint_cost(example):
    assert constraint_cost(example, 14, [-1.0, 1.2, -2.0, 2.0]) == pytest.approx(-6.0)
    assert global_cost(example, [0.0, 0.0, 0.0, 0.0]) == 0.0


def test_example_global_minimum(example):
    assert global_cost(example, [0.0, 10.0, 0.0, 0.0]) == pytest.approx(-100.0)
    assert global_cost(example, [0.0, -10.0, 0.0, 0.0]) == pytest.approx(-100.0)


def test_incident_functions(example):
    assert incident_functions(example, 0) == (12, 13, 14)
    assert incident_functions(example, 2) == (13, 34)


def test_maximisation_is_negated_internally():
    inst = make_instance(2, [((0, 1), "(+ x0 x1)")], objective="max")
    assert inst.maximize
    assert global_cost(inst, [1.0, 2.0]) == pytest.approx(-3.0)
    assert inst.to_reported(global_cost(inst, [1.0, 2.0])) == pytest.approx(3.0)


def test_check_assignment(example):
    assert check_assignment(example, [0.0, 0.0, 0.0, 0.0]) == []
    assert check_assignment(example, [0.0, 0.0])[0]["type"] == "incomplete assignment"
    assert check_assignment(example, [0.0, 11.0, 0.0, 0.0])[0]["type"] == "out of domain"


def test_validation_reports_every_problem():
    inst = CdcopInstance(
        3,
        (Domain(0.0, 1.0), Domain(1.0, 1.0), Domain(0.0, float("inf"))),
        [
            CostFunction(1, (0, 1), parse_expression("(+ x0 x1)")),
            CostFunction(1, (1, 0), parse_expression("(* x0 x1)")),
            CostFunction(2, (2, 2), parse_expression("(+ x0 x1)")),
            CostFunction(3, (0, 5), parse_expression("(+ x0 x1)")),
        ],
    )
    assert issue_types(inst) == {
        "degenerate domain",
        "non-finite domain",
        "duplicate id",
        "duplicate scope",
        "self-loop",
        "unknown agent",
    }


def test_validation_scope_mismatch_and_disconnected():
    inst = make_instance(4, [((0, 1), "(+ x0 3)"), ((2, 3), "(* x0 x1)")])
    assert issue_types(inst) == {"scope mismatch", "disconnected graph"}


def test_domain_count_mismatch():
    inst = CdcopInstance(2, (Domain(0.0, 1.0),), [CostFunction(0, (0, 1), parse_expression("(+ x0 x1)"))])
    assert "domain count" in issue_types(inst)


def test_single_agent_without_functions_is_valid():
    inst = CdcopInstance(1, (Domain(-1.0, 1.0),), [])
    assert validate_instance(inst) == []


def test_file_round_trip(tmp_path, example):
    path = dump_instance(example, tmp_path / "example.json")
    loaded = load_instance(path)
    assert loaded.num_agents == 4
    assert [f.id for f in loaded.functions] == [12, 13, 14, 34]
    assert dumps_instance(loaded) == path.read_text(encoding="utf-8")


def test_dump_is_deterministic(example):
    assert dumps_instance(example) == dumps_instance(instance_from_document(FIG1_DOCUMENT))
    assert json.loads(dumps_instance(example))["objective"] == "min"


def test_load_invalid_instance(tmp_path):
    document = dict(FIG1_DOCUMENT, functions=FIG1_DOCUMENT["functions"][:1])
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(document), encoding="utf-8")
    with pytest.raises(InvalidInstance) as info:
        load_instance(path)
    assert info.value.violations[0]["type"] == "disconnected graph"
    assert str(path) in str(info.value)


def test_load_missing_or_malformed(tmp_path):
    with pytest.raises(ConfigError):
        load_instance(tmp_path / "missing.json")
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_instance(path)
    path.write_text(json.dumps({"num_agents": 2}), encoding="utf-8")
    with pytest.raises(ConfigError):
        load_instance(path)
