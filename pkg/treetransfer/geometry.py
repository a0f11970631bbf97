#!/usr/bin/env python3

"""
The geometric realization (T, d) of a rooted tree.

The edge into a depth-k vertex has length 1/2^k, so a depth-n vertex sits at
distance 1 - 1/2^n from the root x0 and the whole tree lies in the open unit
ball around x0. A point is the deeper endpoint of the edge carrying it plus
the fraction t in (0, 1] of the way along that edge from the parent.
"""

import dataclasses
from beartype import beartype
from beartype.typing import Sequence, Tuple
from treetransfer.dyadic import Dyadic, ZERO, ONE, parse
from treetransfer.tree_model import TreeSpec, VertexAddress, ROOT


class OutOfRange(ValueError):
    """
    A numeric argument is outside the range an operation accepts.
    """


class InvalidPoint(ValueError):
    """
    A point is not in canonical form: offset outside (0, 1], or the root
    given with an offset other than 1.
    """


@dataclasses.dataclass(frozen=True)
class Point:
    """
    A point of the geometric realization. offset = 1 means the point is the
    vertex itself, which makes the representation unique.
    """
    vertex: VertexAddress
    offset: Dyadic = ONE

    def __post_init__(self):
        object.__setattr__(self, 'vertex', tuple(self.vertex))
        if not ZERO < self.offset <= ONE:
            raise InvalidPoint(
                f"Offset {self.offset} of {list(self.vertex)} is not in (0, 1]")
        if not self.vertex and self.offset != ONE:
            raise InvalidPoint("The root has no carrying edge, its offset "
                               "must be 1")

    @property
    def depth(self) -> int:
        return len(self.vertex)

    @property
    def is_root(self) -> bool:
        return not self.vertex

    @property
    def is_vertex(self) -> bool:
        return self.offset == ONE

    def to_json_dict(self) -> dict:
        if self.is_root:
            return {'root': True}
        return {'vertex': list(self.vertex), 't': str(self.offset)}

    @classmethod
    def from_json_dict(cls, data: dict) -> 'Point':
        if data.get('root'):
            return ROOT_POINT
        return cls(tuple(data['vertex']), parse(data.get('t', 1)))

    def __str__(self):
        if self.is_root:
            return 'x0'
        return f"{list(self.vertex)}@{self.offset}"


ROOT_POINT = Point(ROOT, ONE)


def edge_length(depth: int) -> Dyadic:
    """
    Length of the edge joining a depth-(depth - 1) vertex to a depth-depth
    vertex.
    """
    return Dyadic.power_of_two(-depth)


def vertex_norm(depth: int) -> Dyadic:
    """
    Distance from x0 to any vertex of the given depth: 1 - 1/2^depth.
    """
    return ONE - Dyadic.power_of_two(-depth)


def vertex_point(address: Sequence[int]) -> Point:
    """
    The point located at a vertex.
    """
    return Point(tuple(address), ONE)


def point_norm(p: Point) -> Dyadic:
    """
    norm without checking the address against a spec.
    """
    depth = len(p.vertex)
    if depth == 0:
        return ZERO
    return vertex_norm(depth - 1) + p.offset.scale(-depth)


def norm(spec: TreeSpec, p: Point) -> Dyadic:
    """
    The distance d(p, x0).

    @param spec The tree.
    @param p A point of the tree.
    @return 1 - 1/2^(n-1) + t/2^n for a point at offset t on the edge into a
            depth-n vertex, and 0 at the root. Always below 1.
    """
    spec.check_address(p.vertex)
    return point_norm(p)


def common_prefix_length(left: Sequence[int], right: Sequence[int]) -> int:
    length = 0
    for a, b in zip(left, right):
        if a != b:
            break
        length += 1
    return length


def point_meet(p: Point, q: Point) -> Point:
    """
    meet without checking the addresses against a spec.
    """
    if p.vertex == q.vertex:
        return p if p.offset <= q.offset else q
    common = common_prefix_length(p.vertex, q.vertex)
    # One carrying edge lies on the root geodesic of the other point.
    if common == len(p.vertex):
        return p
    if common == len(q.vertex):
        return q
    return vertex_point(p.vertex[:common])


def meet(spec: TreeSpec, p: Point, q: Point) -> Point:
    """
    The deepest point lying on both geodesics [x0, p] and [x0, q].

    @param spec The tree.
    @param p First point.
    @param q Second point.
    @return The branch vertex when the addresses diverge, otherwise the
            shallower of the two points.
    """
    spec.check_address(p.vertex)
    spec.check_address(q.vertex)
    return point_meet(p, q)


def dist(spec: TreeSpec, p: Point, q: Point) -> Dyadic:
    """
    The tree distance d(p, q) = norm(p) + norm(q) - 2 norm(meet(p, q)).
    """
    branch = meet(spec, p, q)
    return point_norm(p) + point_norm(q) - 2 * point_norm(branch)


def gromov(spec: TreeSpec, p: Point, q: Point) -> Dyadic:
    """
    The Gromov product (p|q) = (d(p) + d(q) - d(p, q)) / 2 based at x0.
    """
    return (norm(spec, p) + norm(spec, q) - dist(spec, p, q)).half()


def gromov_via_meet(spec: TreeSpec, p: Point, q: Point) -> Dyadic:
    """
    The Gromov product computed as the norm of the branch point. Must agree
    exactly with gromov; the verification suites check that it does.
    """
    return point_norm(meet(spec, p, q))


def depth_for_distance(s: Dyadic) -> int:
    """
    The depth n of the edge carrying the point at distance s from x0, i.e.
    1 - 1/2^(n-1) < s <= 1 - 1/2^n. Zero for s = 0.
    """
    if s < ZERO or s >= ONE:
        raise OutOfRange(f"Distance {s} from x0 is not in [0, 1)")
    if s == ZERO:
        return 0
    # Least n with 1/2^n <= 1 - s.
    return -(ONE - s).floor_log2()


def point_on_word(word: Sequence[int], s: Dyadic) -> Point:
    """
    The point at distance s from x0 on the path spelled by word, which must
    be at least depth_for_distance(s) letters long.
    """
    depth = depth_for_distance(s)
    if depth > len(word):
        raise OutOfRange(
            f"Distance {s} lies beyond the end of the word {list(word)}")
    if depth == 0:
        return ROOT_POINT
    offset = (s - vertex_norm(depth - 1)).scale(depth)
    return Point(tuple(word[:depth]), offset)


@beartype
def geodesic_point(spec: TreeSpec, p: Point, s: Dyadic) -> Point:
    """
    The unique point on the geodesic [x0, p] at distance s from x0.

    @param spec The tree.
    @param p The far end of the geodesic.
    @param s A distance with 0 <= s <= norm(p).
    @return The point; raises OutOfRange outside [0, norm(p)].
    """
    total = norm(spec, p)
    if s < ZERO or s > total:
        raise OutOfRange(f"Distance {s} is not in [0, {total}]")
    if s == total:
        return p
    return point_on_word(p.vertex, s)


def in_ball(spec: TreeSpec, p: Point, radius: Dyadic) -> bool:
    """
    Whether p lies in the closed ball of the given radius around x0.
    """
    return norm(spec, p) <= radius


def path_vertices(p: Point) -> Tuple[VertexAddress, ...]:
    """
    The vertices x0, x1, ... on the geodesic from x0 up to p's vertex.
    """
    return tuple(p.vertex[:i] for i in range(len(p.vertex) + 1))
