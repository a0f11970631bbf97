"""
Shared tree fixtures.
"""

import json
import pytest
from treetransfer.tree_model import (ExplicitTree, regular_tree,
                                     alternating_tree)
from treetransfer.geometry import Point


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "slow: full-size runs of the acceptance workloads")


@pytest.fixture
def unary():
    return regular_tree(1)


@pytest.fixture
def binary():
    return regular_tree(2)


@pytest.fixture
def ternary():
    return regular_tree(3)


@pytest.fixture
def alternating():
    return alternating_tree()


@pytest.fixture
def small_explicit():
    # x0 has two children; the first has one child.
    return ExplicitTree({(): 2, (0,): 1})


@pytest.fixture
def explicit_binary():
    """
    Complete binary trees of a given depth as explicit tables.
    """
    def build(depth):
        children = {}
        for level in range(depth):
            for code in range(1 << level):
                address = tuple((code >> (level - 1 - i)) & 1
                                for i in range(level))
                children[address] = 2
        return ExplicitTree(children)
    return build


@pytest.fixture
def figure_two():
    """
    A depth-4 and a depth-5 vertex of the binary tree whose geodesics part
    at the depth-2 vertex z.
    """
    return Point((0, 0, 0, 0)), Point((0, 0, 1, 0, 0))


@pytest.fixture
def write_json(tmp_path):
    def write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding='utf-8')
        return str(path)
    return write
