import pytest

from conditor.graph import neighborhood
from conditor.model import Association, Topic, TopicMap


def chain_map():
    # 1 <-> 2 -> 3, plus isolated 4 and an unresolved string target
    return TopicMap(
        topics={i: Topic(i, f"T{i}", instance_of=38) for i in (1, 2, 3, 4)},
        associations=[
            Association(1, 2, "mención", "TwoWay"),
            Association(2, 3, "referencia", "OneWay"),
            Association(2, "taifa", "mención", "OneWay"),
        ],
    )


def test_missing_root_raises():
    with pytest.raises(KeyError):
        neighborhood(chain_map(), 99, 1)


def test_depth_zero_is_root_only():
    export = neighborhood(chain_map(), 1, 0)
    assert [n["id"] for n in export.nodes] == [1]
    assert export.edges == []


def test_depth_limits_expansion():
    export = neighborhood(chain_map(), 1, 1)
    assert [n["id"] for n in export.nodes] == [1, 2]
    assert [(e["source"], e["target"], e["direction"]) for e in export.edges] == [
        (1, 2, "two-way")
    ]


def test_two_way_traversable_backwards_one_way_not():
    tm = chain_map()
    # from 2 we can reach 1 (two-way) and 3 (one-way forward)
    export = neighborhood(tm, 2, 1)
    assert [n["id"] for n in export.nodes] == [1, 2, 3]
    # from 3 the one-way edge cannot be traversed backwards
    export = neighborhood(tm, 3, 5)
    assert [n["id"] for n in export.nodes] == [3]


def test_string_targets_excluded():
    export = neighborhood(chain_map(), 1, 5)
    for e in export.edges:
        assert isinstance(e["target"], int)


def test_node_shape():
    export = neighborhood(chain_map(), 1, 1)
    assert export.nodes[0] == {"id": 1, "label": "T1", "kind": "38"}
