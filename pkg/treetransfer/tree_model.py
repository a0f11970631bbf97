#!/usr/bin/env python3

"""
Rooted locally finite trees: explicit finite child tables and trees generated
by a finite-state branching program.

A vertex is addressed by the word of child indices read from the root x0, so
the empty tuple is x0 itself and the depth of a vertex is the length of its
address.
"""

import dataclasses
from abc import ABC, abstractmethod
from collections import deque
from beartype import beartype
from beartype.typing import (Dict, Hashable, Iterable, Iterator, List,
                             Mapping, Optional, Sequence, Tuple, Union)
from treetransfer.log import vprint
from treetransfer.json_validation import load_json_argument

VertexAddress = Tuple[int, ...]

ROOT: VertexAddress = ()


class InvalidAddress(Exception):
    """
    An address leaves the tree: some index is not below the child count of
    the vertex addressed by the preceding prefix.
    """

    def __init__(self, address, reason):
        super().__init__(f"Invalid address {list(address)}: {reason}")
        self.address = tuple(address)


class InvalidSpec(Exception):
    """
    A tree spec violates its invariants. Carries the list of violations.
    """

    def __init__(self, violations):
        super().__init__("Invalid tree spec: " + "; ".join(violations))
        self.violations = list(violations)


@dataclasses.dataclass
class ValidationReport:
    """
    Result of validating a tree spec. Violations are collected, never raised.
    """
    kind: str
    violations: List[str]
    # Only known for explicit finite trees.
    vertex_count: Optional[int] = None
    max_depth: Optional[int] = None
    infinite: bool = False

    @property
    def valid(self) -> bool:
        return not self.violations

    def to_json_dict(self):
        return {
            'kind': self.kind,
            'valid': self.valid,
            'violations': list(self.violations),
            'vertex_count': self.vertex_count,
            'max_depth': self.max_depth,
            'infinite': self.infinite,
        }


def address_to_key(address: Sequence[int]) -> str:
    """
    Serialize an address as a table key: dot-free digits when every index is
    a single digit, otherwise dot separated. A lone index of 10 or more takes
    a trailing dot so that "11." is never read back as [1, 1].
    """
    if all(i < 10 for i in address):
        return ''.join(str(i) for i in address)
    if len(address) == 1:
        return f"{address[0]}."
    return '.'.join(str(i) for i in address)


def key_to_address(key: str) -> VertexAddress:
    """
    Inverse of address_to_key. "" is the root.
    """
    if key == '':
        return ROOT
    if '.' in key:
        parts = key.split('.')
        if parts[-1] == '':
            parts.pop()
        return tuple(int(i) for i in parts)
    return tuple(int(c) for c in key)


class TreeSpec(ABC):
    """
    Abstract rooted locally finite tree.
    """
    kind: str = ''

    @abstractmethod
    def child_count(self, address: Sequence[int]) -> int:
        """
        Number of children of the vertex at address. Raises InvalidAddress
        when the address is not in the tree.
        """

    @abstractmethod
    def violations(self) -> List[str]:
        """
        Invariant violations of the spec itself, empty when valid.
        """

    @abstractmethod
    def is_infinite(self) -> bool:
        """
        Whether the tree has infinitely many vertices (equivalently, by
        local finiteness, whether its boundary is non-empty).
        """

    @abstractmethod
    def to_json_dict(self) -> dict:
        """
        The JSON form accepted by from_json_dict.
        """

    def check_address(self, address: Sequence[int]):
        """
        Raise InvalidAddress unless address is a vertex of the tree.
        """
        self.child_count(address)

    def require_valid(self):
        """
        Raise InvalidSpec if the spec has any violation.
        """
        violations = self.violations()
        if violations:
            raise InvalidSpec(violations)

    @staticmethod
    def from_json_dict(data: dict) -> 'TreeSpec':
        """
        Build a spec from its JSON form (see tree_spec_schema.json).
        """
        kind = data['kind']
        if kind == 'explicit':
            return ExplicitTree.from_json_dict(data)
        if kind == 'programmatic':
            return AutomatonTree.from_json_dict(data)
        raise InvalidSpec([f"Unknown tree spec kind '{kind}'"])


class ExplicitTree(TreeSpec):
    """
    A finite tree given by its table of child counts. Vertices that are
    children of a listed vertex but not listed themselves are leaves.
    """
    kind = 'explicit'

    @beartype
    def __init__(self, children: Mapping[Tuple[int, ...], int]):
        self._children: Dict[VertexAddress, int] = {
            tuple(address): count for address, count in children.items()}
        if ROOT not in self._children:
            self._children[ROOT] = 0

    @property
    def children(self) -> Dict[VertexAddress, int]:
        return dict(self._children)

    def _count_at(self, address: VertexAddress) -> int:
        if address in self._children:
            return self._children[address]
        return 0

    def child_count(self, address: Sequence[int]) -> int:
        address = tuple(address)
        for depth, index in enumerate(address):
            prefix = address[:depth]
            if prefix not in self._children or \
                    index >= self._children[prefix]:
                raise InvalidAddress(
                    address, f"index {index} at position {depth} is out of "
                    f"range")
        return self._count_at(address)

    def violations(self) -> List[str]:
        violations = []
        for address, count in sorted(self._children.items()):
            if count < 0:
                violations.append(
                    f"vertex {list(address)} has negative child count")
            if not address:
                continue
            parent = address[:-1]
            if parent not in self._children:
                violations.append(
                    f"not prefix-closed: {list(address)} is listed but "
                    f"{list(parent)} is not")
            elif address[-1] >= self._children[parent]:
                violations.append(
                    f"index out of range: {list(address)} but "
                    f"{list(parent)} has {self._children[parent]} children")
        return violations

    def is_infinite(self) -> bool:
        return False

    def vertices(self) -> List[VertexAddress]:
        """
        All vertices, implicit leaves included, in breadth-first order.
        """
        return list(vertices_to_depth(self, None))

    def to_json_dict(self) -> dict:
        return {
            'kind': 'explicit',
            'children': {address_to_key(address): count
                         for address, count in sorted(self._children.items())},
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> 'ExplicitTree':
        return cls({key_to_address(key): count
                    for key, count in data['children'].items()})


class AutomatonTree(TreeSpec):
    """
    An infinite (or finite) tree generated by a finite-state branching
    program: a vertex in state q has counts[q] children, the i-th of which is
    in state delta[q][i].
    """
    kind = 'programmatic'

    @beartype
    def __init__(self, states: Sequence[Hashable], initial: Hashable,
                 counts: Mapping[Hashable, int],
                 delta: Mapping[Hashable, Sequence[Hashable]]):
        self.states = list(states)
        self.initial = initial
        self.counts = dict(counts)
        self.delta = {state: list(targets) for state, targets in delta.items()}
        self._live = None

    def state_at(self, address: Sequence[int]):
        """
        Run the automaton along address and return the state reached.
        """
        state = self.initial
        for depth, index in enumerate(address):
            count = self.counts.get(state, 0)
            if index < 0 or index >= count:
                raise InvalidAddress(
                    address, f"index {index} at position {depth} is out of "
                    f"range for state '{state}' with {count} children")
            state = self.delta[state][index]
        return state

    def step(self, state, index: int):
        """
        One transition, raising InvalidAddress when index is out of range.
        """
        count = self.counts.get(state, 0)
        if index < 0 or index >= count:
            raise InvalidAddress(
                (index,), f"index {index} is out of range for state "
                f"'{state}' with {count} children")
        return self.delta[state][index]

    def child_count(self, address: Sequence[int]) -> int:
        return self.counts[self.state_at(address)]

    def violations(self) -> List[str]:
        violations = []
        known = set(self.states)
        if self.initial not in known:
            violations.append(f"initial state '{self.initial}' is not a state")
        for state in self.states:
            if state not in self.counts:
                violations.append(f"state '{state}' has no child count")
                continue
            count = self.counts[state]
            if count < 0:
                violations.append(f"state '{state}' has negative child count")
            targets = self.delta.get(state, [])
            for index in range(len(targets), count):
                violations.append(
                    f"missing transition for ('{state}', {index})")
            for index in range(count, len(targets)):
                violations.append(
                    f"transition for ('{state}', {index}) is defined beyond "
                    f"child count {count}")
            for index, target in enumerate(targets):
                if target is None:
                    violations.append(
                        f"missing transition for ('{state}', {index})")
                elif target not in known:
                    violations.append(
                        f"transition ('{state}', {index}) leads to unknown "
                        f"state '{target}'")
        for state in self.counts:
            if state not in known:
                violations.append(f"child count given for unknown state "
                                  f"'{state}'")
        return violations

    def live_states(self) -> set:
        """
        States from which an infinite path exists, i.e. the greatest set of
        states with a transition into the set.
        """
        if self._live is None:
            live = {state for state in self.states
                    if self.counts.get(state, 0) > 0}
            changed = True
            while changed:
                changed = False
                for state in list(live):
                    targets = self.delta.get(state, [])[
                        :self.counts.get(state, 0)]
                    if not any(target in live for target in targets):
                        live.discard(state)
                        changed = True
            self._live = frozenset(live)
        return set(self._live)

    def is_infinite(self) -> bool:
        # The reachable part restricted to states with children has a cycle
        # iff some path from the initial state stays in live states forever.
        return self.initial in self.live_states()

    def to_json_dict(self) -> dict:
        return {
            'kind': 'programmatic',
            'states': list(self.states),
            'initial': self.initial,
            'counts': dict(self.counts),
            'delta': {state: list(targets)
                      for state, targets in self.delta.items()},
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> 'AutomatonTree':
        delta = {}
        for state, targets in data['delta'].items():
            if isinstance(targets, dict):
                # {"0": "b", "1": "a"} style, keyed by child index.
                # Gaps stay as None so validation names the missing index.
                indexed = {int(index): target
                           for index, target in targets.items()}
                targets = [indexed.get(i)
                           for i in range(max(indexed, default=-1) + 1)]
            delta[state] = targets
        return cls(states=data['states'], initial=data['initial'],
                   counts=data['counts'], delta=delta)


def child_count(spec: TreeSpec, address: Sequence[int]) -> int:
    """
    Number of children of the vertex at address.

    @param spec The tree.
    @param address The vertex address, a word of child indices.
    @return The child count. Raises InvalidAddress for addresses outside
            the tree.
    """
    return spec.child_count(address)


def validate(spec: TreeSpec) -> ValidationReport:
    """
    Check the invariants of a spec and describe it.

    @param spec The tree spec to check.
    @return A ValidationReport; violations are listed, not raised.
    """
    violations = spec.violations()
    report = ValidationReport(kind=spec.kind, violations=violations)
    if violations:
        return report
    report.infinite = spec.is_infinite()
    if isinstance(spec, ExplicitTree):
        vertices = spec.vertices()
        report.vertex_count = len(vertices)
        report.max_depth = max(len(address) for address in vertices)
    vprint(f"Validated {spec.kind} tree spec: infinite={report.infinite}")
    return report


def vertices_to_depth(spec: TreeSpec,
                      max_depth: Optional[int]) -> Iterator[VertexAddress]:
    """
    Breadth-first enumeration of all vertices of depth <= max_depth (all
    vertices when max_depth is None, which only terminates on finite trees).
    Siblings come in child-index order.
    """
    queue = deque([ROOT])
    while queue:
        address = queue.popleft()
        yield address
        if max_depth is not None and len(address) >= max_depth:
            continue
        for index in range(spec.child_count(address)):
            queue.append(address + (index,))


def regular_tree(branching: int) -> AutomatonTree:
    """
    The tree in which every vertex has the same number of children.
    """
    return AutomatonTree(states=['q'], initial='q', counts={'q': branching},
                         delta={'q': ['q'] * branching})


def alternating_tree() -> AutomatonTree:
    """
    Vertices alternate between three children and one child.
    """
    return AutomatonTree(states=['a', 'b'], initial='a',
                         counts={'a': 3, 'b': 1},
                         delta={'a': ['b', 'b', 'b'], 'b': ['a']})


def from_edge_list(edges: Iterable[Tuple[Hashable, Hashable]],
                   root: Hashable) -> Tuple[ExplicitTree,
                                            Dict[VertexAddress, Hashable]]:
    """
    Root an undirected tree at a declared vertex.

    @param edges Undirected edges between arbitrary vertex labels.
    @param root The label chosen as x0.
    @return The explicit tree and the label of every address. Children are
            numbered in sorted label order. Raises InvalidSpec for cycles,
            self loops, repeated edges or disconnected input.
    """
    neighbours: Dict[Hashable, List[Hashable]] = {root: []}
    seen_edges = set()
    for left, right in edges:
        if left == right:
            raise InvalidSpec([f"self loop at '{left}'"])
        key = frozenset((left, right))
        if key in seen_edges:
            raise InvalidSpec([f"repeated edge '{left}'-'{right}'"])
        seen_edges.add(key)
        neighbours.setdefault(left, []).append(right)
        neighbours.setdefault(right, []).append(left)
    labels: Dict[VertexAddress, Hashable] = {ROOT: root}
    children: Dict[VertexAddress, int] = {}
    visited = {root: ROOT}
    queue = deque([(root, None)])
    while queue:
        label, parent = queue.popleft()
        address = visited[label]
        below = sorted((n for n in neighbours[label] if n != parent), key=str)
        children[address] = len(below)
        for index, child in enumerate(below):
            if child in visited:
                raise InvalidSpec([f"cycle through '{child}'"])
            visited[child] = address + (index,)
            labels[address + (index,)] = child
            queue.append((child, label))
    unreached = set(neighbours) - set(visited)
    if unreached:
        raise InvalidSpec(
            [f"disconnected: {sorted(map(str, unreached))} not reachable "
             f"from root '{root}'"])
    return ExplicitTree(children), labels


@beartype
def load_tree_spec(source: Union[str, dict]) -> TreeSpec:
    """
    Load a tree spec from a JSON file path, an inline JSON string or an
    already decoded dict, validating it against tree_spec_schema.json.
    """
    data = load_json_argument(source, 'tree_spec')
    spec = TreeSpec.from_json_dict(data)
    vprint(f"Loaded {spec.kind} tree spec")
    return spec
