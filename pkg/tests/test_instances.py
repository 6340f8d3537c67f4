import pytest

from combmag.fixtures import example_category, grid_six_points, boolean_lattice_b2
from combmag.instances import (
    InstanceError,
    category_instance,
    dumps_instance,
    metric_instance,
    parse_instance,
    poset_instance,
    serialize_instance,
    to_category,
    to_matrix,
    to_metric,
)

SAMPLES = [
    {"kind": "matrix", "entries": [["1", "2/3"], [0, -1]]},
    {"kind": "category", "objects": ["a", "b"], "hom": {"a->b": 2}, "flags": {"skeletal": True}},
    {"kind": "poset", "elements": ["a", "b", "c"], "covers": [["a", "b"], ["b", "c"]]},
    {"kind": "metric", "points": {"x1": [0, 0], "x2": [3, 4]}, "norm": "l1"},
    {"kind": "metric", "distances": [[0, 1], [1, 0]], "options": {"t": [0.5, 1]}},
]


@pytest.mark.parametrize("data", SAMPLES)
def test_round_trip(data):
    spec = parse_instance(data)
    again = parse_instance(serialize_instance(spec))
    assert again == spec
    assert dumps_instance(again) == dumps_instance(spec)


def test_domain_round_trips():
    for spec in (category_instance(example_category()), poset_instance(boolean_lattice_b2()),
                 metric_instance(grid_six_points())):
        assert parse_instance(dumps_instance(spec)) == spec


def test_category_defaults():
    C = to_category(parse_instance(SAMPLES[1]))
    assert C.hom_count("a", "a") == 1 and C.hom_count("b", "a") == 0


def test_conversions():
    assert to_matrix(parse_instance(SAMPLES[0])).rows[0][1] == pytest.approx(2 / 3)
    assert to_metric(parse_instance(SAMPLES[3])).d("x1", "x2") == 7.0


@pytest.mark.parametrize("bad", [
    "not json",
    "[]",
    {"kind": "tensor"},
    {"kind": "matrix", "entries": [[1, 2]]},
    {"kind": "category", "objects": ["a"], "hom": {"ab": 1}},
    {"kind": "metric"},
    {"kind": "metric", "distances": [[0]], "options": {"t": [0]}},
])
def test_parse_errors(bad):
    with pytest.raises(InstanceError):
        parse_instance(bad)
