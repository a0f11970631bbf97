import jsonschema
import pytest
from treetransfer.tree_model import (ExplicitTree, AutomatonTree,
                                     InvalidAddress, InvalidSpec, child_count,
                                     validate, vertices_to_depth,
                                     regular_tree, from_edge_list,
                                     load_tree_spec, address_to_key,
                                     key_to_address, TreeSpec)

BINARY_JSON = ('{"kind": "programmatic", "states": ["q"], "initial": "q", '
               '"counts": {"q": 2}, "delta": {"q": ["q", "q"]}}')


def test_regular_tree_child_counts(binary):
    assert child_count(binary, ()) == 2
    assert child_count(binary, (1, 0, 1)) == 2
    with pytest.raises(InvalidAddress):
        child_count(binary, (2,))


def test_alternating_tree_child_counts(alternating):
    assert child_count(alternating, ()) == 3
    assert child_count(alternating, (2,)) == 1
    assert child_count(alternating, (2, 0)) == 3
    with pytest.raises(InvalidAddress):
        child_count(alternating, (0, 1))


def test_explicit_tree_implicit_leaves(small_explicit):
    assert child_count(small_explicit, ()) == 2
    assert child_count(small_explicit, (0,)) == 1
    assert child_count(small_explicit, (0, 0)) == 0
    assert child_count(small_explicit, (1,)) == 0
    with pytest.raises(InvalidAddress):
        child_count(small_explicit, (2,))
    with pytest.raises(InvalidAddress):
        child_count(small_explicit, (1, 0))


def test_validate_explicit_tree(small_explicit):
    report = validate(small_explicit)
    assert report.valid
    assert report.vertex_count == 4
    assert report.max_depth == 2
    assert not report.infinite


def test_validate_reports_missing_prefix():
    report = validate(ExplicitTree({(): 1, (0, 0): 1}))
    assert not report.valid
    assert any("not prefix-closed" in v for v in report.violations)


def test_validate_reports_index_out_of_range():
    report = validate(ExplicitTree({(): 1, (1,): 1}))
    assert any("index out of range" in v for v in report.violations)


def test_validate_reports_missing_transition():
    spec = AutomatonTree(['q'], 'q', {'q': 2}, {'q': ['q']})
    report = validate(spec)
    assert not report.valid
    assert "missing transition for ('q', 1)" in report.violations
    with pytest.raises(InvalidSpec) as info:
        spec.require_valid()
    assert info.value.violations == report.violations


def test_validate_reports_unknown_states():
    spec = AutomatonTree(['q'], 'p', {'q': 1}, {'q': ['r']})
    violations = validate(spec).violations
    assert any("initial state 'p'" in v for v in violations)
    assert any("unknown state 'r'" in v for v in violations)


def test_infinite_trees(binary, alternating):
    assert binary.is_infinite()
    assert alternating.is_infinite()
    assert validate(binary).infinite
    assert not regular_tree(0).is_infinite()


def test_dead_states_are_not_live():
    spec = AutomatonTree(['a', 'b', 'c'], 'a', {'a': 2, 'b': 0, 'c': 1},
                         {'a': ['b', 'c'], 'b': [], 'c': ['c']})
    assert spec.live_states() == {'a', 'c'}
    assert spec.is_infinite()
    finite = AutomatonTree(['a', 'b'], 'a', {'a': 1, 'b': 0},
                           {'a': ['b'], 'b': []})
    assert finite.live_states() == set()
    assert not finite.is_infinite()


def test_vertices_to_depth_is_breadth_first(binary):
    assert list(vertices_to_depth(binary, 2)) == [
        (), (0,), (1,), (0, 0), (0, 1), (1, 0), (1, 1)]
    assert len(list(vertices_to_depth(binary, 8))) == 511


def test_from_edge_list():
    spec, labels = from_edge_list(
        [('r', 'b'), ('r', 'a'), ('a', 'c')], 'r')
    assert spec.children == {(): 2, (0,): 1, (1,): 0, (0, 0): 0}
    assert labels[(0,)] == 'a'
    assert labels[(0, 0)] == 'c'
    assert validate(spec).vertex_count == 4


@pytest.mark.parametrize("edges", [
    [('r', 'a'), ('a', 'b'), ('b', 'r')],
    [('r', 'a'), ('x', 'y')],
    [('r', 'r')],
    [('r', 'a'), ('a', 'r')],
])
def test_from_edge_list_rejects_non_trees(edges):
    with pytest.raises(InvalidSpec):
        from_edge_list(edges, 'r')


def test_address_keys():
    assert address_to_key((0, 1)) == "01"
    assert address_to_key((1, 12)) == "1.12"
    assert key_to_address("") == ()
    assert key_to_address("01") == (0, 1)
    assert key_to_address("1.12") == (1, 12)


def test_load_programmatic_spec():
    spec = load_tree_spec(BINARY_JSON)
    assert isinstance(spec, AutomatonTree)
    assert spec.child_count((0, 1)) == 2


def test_load_spec_with_indexed_transitions():
    spec = load_tree_spec({
        "kind": "programmatic", "states": ["a", "b"], "initial": "a",
        "counts": {"a": 2, "b": 1},
        "delta": {"a": {"1": "a", "0": "b"}, "b": {"0": "a"}}})
    assert spec.delta['a'] == ['b', 'a']
    assert spec.child_count((0,)) == 1


def test_load_explicit_spec_file(write_json):
    path = write_json('tree.json', {"kind": "explicit",
                                    "children": {"": 2, "0": 1}})
    spec = load_tree_spec(path)
    assert isinstance(spec, ExplicitTree)
    assert validate(spec).vertex_count == 4
    assert TreeSpec.from_json_dict(spec.to_json_dict()).children == \
        spec.children


def test_schema_rejects_malformed_spec():
    with pytest.raises(jsonschema.ValidationError):
        load_tree_spec('{"kind": "explicit"}')
    with pytest.raises(jsonschema.ValidationError):
        load_tree_spec({"kind": "explicit", "children": {"a": 1}})


def test_address_keys_with_wide_roots():
    assert address_to_key((11,)) == "11."
    assert key_to_address("11.") == (11,)
    assert key_to_address("11") == (1, 1)
    spec = ExplicitTree({(): 12, (11,): 2})
    data = spec.to_json_dict()
    assert set(data['children']) == {"", "11."}
    reloaded = load_tree_spec(data)
    assert reloaded.children == spec.children
    assert validate(reloaded).valid
    assert reloaded.child_count((11,)) == 2


def test_indexed_transitions_keep_gaps():
    spec = load_tree_spec({
        "kind": "programmatic", "states": ["a", "b"], "initial": "a",
        "counts": {"a": 3, "b": 0},
        "delta": {"a": {"0": "a", "2": "b"}, "b": []}})
    assert spec.delta['a'] == ['a', None, 'b']
    assert validate(spec).violations == ["missing transition for ('a', 1)"]
