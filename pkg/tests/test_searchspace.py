import json
from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mlcplan.errors import (
    DuplicateComponent,
    ExplosionGuard,
    LeafNode,
    MalformedParam,
    NotALeaf,
    UnknownInterface,
    UnsatisfiableInterface,
)
from mlcplan.searchspace import (
    RESTRICTED_LEAF_COUNT,
    ComponentInstance,
    ParamDef,
    RefineNumeric,
    ResolveInterface,
    SearchNode,
    builtin_document,
    builtin_registry,
    chain_registry,
    count_leaves,
    edge_count,
    enumerate_leaves,
    export_dag_dot,
    load_registry,
    materialize,
    random_completion,
    reachable_leaves,
    restricted_registry,
    root_node,
    successors,
    toy_registry,
)


def hand_chain_count(n_pre, max_chain):
    # chains of length 0..max_chain over n_pre preprocessors, one terminal learner
    return sum(n_pre ** k for k in range(max_chain + 1))


@pytest.mark.parametrize("make,expected", [
    (toy_registry, 4),
    (chain_registry, hand_chain_count(3, 2)),
    (restricted_registry, 2 * (3 + 2 * 2)),
])
def test_reachable_equals_enumerated(make, expected):
    reg = make()
    enumerated = enumerate_leaves(reg)
    reached = reachable_leaves(reg)
    assert len(enumerated) == expected == count_leaves(reg)
    assert len({i.key() for i in enumerated}) == expected
    assert sorted(i.key() for i in reached) == sorted(i.key() for i in enumerated)


def test_restricted_count_constant_matches_hand_count():
    assert RESTRICTED_LEAF_COUNT == 14


def test_builtin_registry_validates():
    reg = builtin_registry()
    assert "MLC" in reg.interfaces
    assert len(successors(reg, root_node(reg))) == 6
    assert load_registry(reg.to_json()).to_dict() == reg.to_dict()


def test_load_errors():
    doc = {"components": [{"name": "cc", "provides": "MLC",
                           "requires": [{"slot": "base", "interface": "SLC-binary"}]}]}
    with pytest.raises(UnsatisfiableInterface):
        load_registry(doc)
    with pytest.raises(MalformedParam):
        load_registry({"components": [{"name": "x", "provides": "MLC",
                                       "params": [{"name": "a", "kind": "numeric", "min": 1, "max": 1}]}]})
    with pytest.raises(MalformedParam):
        load_registry({"components": [{"name": "x", "provides": "MLC",
                                       "params": [{"name": "a", "kind": "categorical", "values": []}]}]})
    with pytest.raises(DuplicateComponent):
        load_registry({"components": [{"name": "x", "provides": "MLC"}, {"name": "x", "provides": "MLC"}]})


def test_unbounded_recursion_is_unsatisfiable():
    doc = {"components": [{"name": "loop", "provides": "MLC",
                           "requires": [{"slot": "inner", "interface": "MLC"}]}]}
    with pytest.raises(UnsatisfiableInterface):
        load_registry(doc)


def test_root_node():
    reg = builtin_registry()
    node = root_node(reg)
    assert node.network == (ResolveInterface((), "MLC"),) and node.prefix == ()
    assert len(root_node(reg, "SLC-binary").network) == 1
    with pytest.raises(UnknownInterface):
        root_node(reg, "FOO")


def test_successors_of_leaf_raise():
    reg = toy_registry()
    leaf = SearchNode((("component", (), "br"),), ())
    with pytest.raises(LeafNode):
        successors(reg, leaf)


def test_resolve_interface_one_child_per_provider():
    reg = restricted_registry()
    node = successors(reg, root_node(reg))[0]
    assert len(successors(reg, node)) == 2
    reg3 = toy_registry().with_components(extra=builtin_registry().components[-3:-2])
    # adds standardize which provides Preprocessor, not SLC-binary
    assert len(successors(reg3, successors(reg3, root_node(reg3))[0])) == 2


def test_refine_numeric_halving_rule():
    reg = load_registry({"components": [{"name": "x", "provides": "MLC",
                                         "params": [{"name": "a", "kind": "numeric", "min": 0, "max": 1,
                                                     "g": 0.25}]}]})
    node = successors(reg, root_node(reg))[0]
    assert node.network == (RefineNumeric((), "a", 0.0, 1.0),)
    kids = successors(reg, node)
    assert [(c.network[0].lo, c.network[0].hi) for c in kids] == [(0.0, 0.5), (0.5, 1.0)]
    quarter = successors(reg, kids[0])[0]
    assert (quarter.network[0].lo, quarter.network[0].hi) == (0.0, 0.25)
    fixed = successors(reg, quarter)
    assert len(fixed) == 1 and fixed[0].is_leaf
    assert materialize(fixed[0], reg).param_dict == {"a": 0.125}


def test_log_scale_uses_geometric_midpoint():
    p = ParamDef("lr", "numeric", min=1e-4, max=1.0, log=True, g=0.5)
    (a, b), (c, d) = p.halves(1e-4, 1.0)
    assert b == pytest.approx(1e-2) and c == b


def test_materialize_defaults_and_errors():
    reg = builtin_registry()
    leaf = SearchNode((("component", (), "br"), ("component", ("base",), "tree"),
                       ("param", ("base",), "max_depth", 4)), ())
    inst = materialize(leaf, reg)
    assert inst.name == "br"
    tree = inst.child_dict["base"]
    assert tree.name == "tree" and tree.param_dict == {"max_depth": 4, "min_leaf": 10}
    assert inst.size() == 2
    with pytest.raises(NotALeaf):
        materialize(root_node(reg), reg)


def test_random_completion_from_leaf_is_identity():
    reg = toy_registry()
    leaf = SearchNode((("component", (), "br"), ("component", ("base",), "tree"),
                       ("param", ("base",), "max_depth", 3)), ())
    assert random_completion(reg, leaf, 0) == materialize(leaf, reg)


def test_random_completion_descend_frequencies():
    reg = toy_registry()
    counts = Counter(random_completion(reg, root_node(reg), s, mode="descend").key() for s in range(1000))
    assert len(counts) == 4
    # every leaf sits behind two binary choices, so each has probability 1/4;
    # the tolerance is 10 percentage points (about 7 standard errors)
    for c in counts.values():
        assert abs(c / 1000 - 0.25) <= 0.10


@given(st.integers(0, 2**32 - 1), st.sampled_from(["sample", "descend"]))
def test_random_completion_is_sound_and_deterministic(seed, mode):
    reg = builtin_registry()
    a = random_completion(reg, root_node(reg), seed, mode=mode)
    assert a == random_completion(reg, root_node(reg), seed, mode=mode)

    def check(inst):
        comp = reg.by_name[inst.name]
        assert {p.name for p in comp.params} == set(inst.param_dict)
        for p in comp.params:
            v = inst.param_dict[p.name]
            if p.kind == "categorical":
                assert v in p.values
            else:
                assert p.min <= v <= p.max
        assert {s for s, _ in comp.requires} == set(inst.child_dict)
        for slot, iface in comp.requires:
            child = inst.child_dict[slot]
            assert iface in reg.by_name[child.name].provides
            check(child)
    check(a)


@given(st.integers(0, 2**32 - 1))
def test_descend_emits_enumerated_leaves(seed):
    reg = restricted_registry()
    keys = {i.key() for i in enumerate_leaves(reg)}
    assert random_completion(reg, root_node(reg), seed, mode="descend").key() in keys


@given(st.lists(st.integers(0, 10**6), min_size=1, max_size=40))
def test_prefix_monotonicity(choices):
    reg = builtin_registry()
    node = root_node(reg)
    for c in choices:
        if node.is_leaf:
            break
        kids = successors(reg, node)
        assert kids
        for kid in kids:
            assert kid.prefix[:-1] == node.prefix
            assert kid.network[len(kid.network) - len(node.network) + 1:] == node.network[1:]
        node = kids[c % len(kids)]


def test_explosion_guard():
    with pytest.raises(ExplosionGuard):
        enumerate_leaves(builtin_registry(), cap=1000)
    assert enumerate_leaves(toy_registry(), count_only=True) == 4


def test_dot_export():
    text = export_dag_dot(toy_registry())
    assert text.startswith("digraph")
    assert text.count("->") == 2
    assert text.count("[label=\"") - text.count("->") == 3
    reg = builtin_registry()
    hand = sum(len([c for c in reg.components if i in c.provides])
               for comp in builtin_document()["components"] for r in comp.get("requires", [])
               for i in [r["interface"]])
    assert edge_count(reg) == hand == export_dag_dot(reg).count("->")
    flat = load_registry({"components": [{"name": "a", "provides": "MLC"}]})
    assert "->" not in export_dag_dot(flat)


def test_instance_roundtrip():
    reg = builtin_registry()
    inst = random_completion(reg, root_node(reg), 3)
    again = ComponentInstance.from_dict(json.loads(json.dumps(inst.to_dict())))
    assert again == inst and again.key() == inst.key()
