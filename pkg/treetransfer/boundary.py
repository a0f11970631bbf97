#!/usr/bin/env python3

"""
The boundary of the tree as eventually periodic rays from x0, the Gromov
product extended to the compactification, and its metric.

Every boundary point sits at distance exactly 1 from x0. Two rays that share
their first m vertices have Gromov product 1 - 1/2^m and are at distance
2/2^m, the sum of the lengths of the two tails past the branch vertex.
"""

import dataclasses
import functools
import math
from beartype import beartype
from beartype.typing import Tuple, Union
from treetransfer.dyadic import Dyadic, ZERO, ONE
from treetransfer.tree_model import (TreeSpec, AutomatonTree, InvalidAddress,
                                     VertexAddress)
from treetransfer.geometry import (Point, point_norm, vertex_norm,
                                   vertex_point, point_on_word, geodesic_point,
                                   depth_for_distance, gromov, OutOfRange,
                                   common_prefix_length)
from treetransfer.json_validation import load_json_argument

INFINITE = math.inf


class InvalidRay(Exception):
    """
    A ray leaves the tree: an index exceeds a child count, or the periodic
    part runs into a leaf.
    """


@dataclasses.dataclass(frozen=True)
class Ray:
    """
    The infinite child-index word prefix . cycle . cycle . ... read from x0.
    """
    prefix: VertexAddress
    cycle: VertexAddress

    def __post_init__(self):
        object.__setattr__(self, 'prefix', tuple(self.prefix))
        object.__setattr__(self, 'cycle', tuple(self.cycle))
        if not self.cycle:
            raise InvalidRay("A ray needs a non-empty cycle")

    def letter(self, position: int) -> int:
        """
        The child index taken at the given depth (0-based).
        """
        if position < len(self.prefix):
            return self.prefix[position]
        return self.cycle[(position - len(self.prefix)) % len(self.cycle)]

    def word(self, length: int) -> VertexAddress:
        """
        The first length letters, i.e. the address of the depth-length vertex.
        """
        if length <= len(self.prefix):
            return self.prefix[:length]
        return self.prefix + tuple(
            self.cycle[i % len(self.cycle)]
            for i in range(length - len(self.prefix)))

    def to_json_dict(self) -> dict:
        return {'prefix': list(self.prefix), 'cycle': list(self.cycle)}

    @classmethod
    def from_json_dict(cls, data: dict) -> 'Ray':
        return cls(tuple(data['prefix']), tuple(data['cycle']))

    def __str__(self):
        prefix = ''.join(f'{i},' for i in self.prefix)
        return f"[{prefix}({','.join(map(str, self.cycle))})*]"


ExtPoint = Union[Point, Ray]


def is_boundary(a: ExtPoint) -> bool:
    return isinstance(a, Ray)


def check_ray(spec: TreeSpec, ray: Ray):
    """
    Raise InvalidRay unless every prefix of the infinite word is a vertex.

    For an automaton the state reached at each pass through the cycle is
    tracked until a state recurs, after which the walk repeats verbatim.
    Rays already accepted for a spec are remembered.
    """
    _check_ray_once(spec, ray)


@functools.lru_cache(maxsize=1 << 14)
def _check_ray_once(spec: TreeSpec, ray: Ray):
    if not isinstance(spec, AutomatonTree):
        if not spec.is_infinite():
            raise InvalidRay(f"Ray {ray} cannot exist: the tree is finite")
        raise InvalidRay(f"Cannot check rays on a {spec.kind} tree")
    try:
        state = spec.state_at(ray.prefix)
        seen = set()
        while state not in seen:
            seen.add(state)
            for index in ray.cycle:
                state = spec.step(state, index)
    except InvalidAddress as exc:
        raise InvalidRay(f"Ray {ray} leaves the tree: {exc}") from exc


def canonical_ray(ray: Ray) -> Ray:
    """
    Primitive cycle and shortest prefix, without consulting a spec.
    """
    cycle = ray.cycle
    length = len(cycle)
    for period in range(1, length + 1):
        if length % period == 0 and cycle == cycle[:period] * (length // period):
            cycle = cycle[:period]
            break
    prefix = ray.prefix
    # Absorb a trailing copy of the cycle's last letter by rotating it in.
    while prefix and prefix[-1] == cycle[-1]:
        prefix = prefix[:-1]
        cycle = cycle[-1:] + cycle[:-1]
    return Ray(prefix, cycle)


@beartype
def ray_normalize(spec: TreeSpec, ray: Ray) -> Ray:
    """
    The canonical form of a ray; two rays are the same boundary point iff
    their canonical forms are equal.

    @param spec The tree.
    @param ray A ray valid in spec.
    @return The ray with a primitive cycle and a minimal prefix.
    """
    check_ray(spec, ray)
    return canonical_ray(ray)


@beartype
def lcp_depth(spec: TreeSpec, first: Ray, second: Ray) -> Union[int, float]:
    """
    Depth of the deepest vertex common to two rays, INFINITE when they are
    the same boundary point.

    @param spec The tree.
    @param first A ray.
    @param second Another ray.
    @return The number of leading letters the words share.
    """
    check_ray(spec, first)
    check_ray(spec, second)
    bound = (len(first.prefix) + len(second.prefix)
             + math.lcm(len(first.cycle), len(second.cycle)))
    for position in range(bound):
        if first.letter(position) != second.letter(position):
            return position
    return INFINITE


def ext_norm(spec: TreeSpec, a: ExtPoint) -> Dyadic:
    """
    Distance from x0: 1 for boundary points, geometry.norm otherwise.
    """
    if isinstance(a, Ray):
        check_ray(spec, a)
        return ONE
    spec.check_address(a.vertex)
    return point_norm(a)


def canonical(spec: TreeSpec, a: ExtPoint) -> ExtPoint:
    """
    The unique representation of a point of the compactification.
    """
    if isinstance(a, Ray):
        return ray_normalize(spec, a)
    spec.check_address(a.vertex)
    return a


def same_point(spec: TreeSpec, a: ExtPoint, b: ExtPoint) -> bool:
    return canonical(spec, a) == canonical(spec, b)


def _ray_point_product(spec: TreeSpec, ray: Ray, p: Point) -> Dyadic:
    check_ray(spec, ray)
    spec.check_address(p.vertex)
    common = common_prefix_length(ray.word(len(p.vertex)), p.vertex)
    if common == len(p.vertex):
        # The whole geodesic [x0, p] runs along the ray.
        return point_norm(p)
    return vertex_norm(common)


@beartype
def gromov_ext(spec: TreeSpec, a: ExtPoint, b: ExtPoint) -> Dyadic:
    """
    The Gromov product on the compactification.

    @param spec The tree.
    @param a A point or a ray.
    @param b A point or a ray.
    @return 1 - 1/2^m for rays sharing m vertices past x0 (1 for equal
            rays), the norm of the deepest point of [x0, p] on the ray for a
            ray and a point, and geometry.gromov for two points.
    """
    if isinstance(a, Ray) and isinstance(b, Ray):
        depth = lcp_depth(spec, a, b)
        if depth == INFINITE:
            return ONE
        return vertex_norm(depth)
    if isinstance(a, Ray):
        return _ray_point_product(spec, a, b)
    if isinstance(b, Ray):
        return _ray_point_product(spec, b, a)
    return gromov(spec, a, b)


@beartype
def dist_bar(spec: TreeSpec, a: ExtPoint, b: ExtPoint) -> Dyadic:
    """
    The metric of the compactification,
    ext_norm(a) + ext_norm(b) - 2 (a|b).

    @param spec The tree.
    @param a A point or a ray.
    @param b A point or a ray.
    @return The exact distance, at most 2. Equals geometry.dist on two
            points and 2 (1 - (a|b)) on two rays.
    """
    return ext_norm(spec, a) + ext_norm(spec, b) - 2 * gromov_ext(spec, a, b)


def ray_vertex(spec: TreeSpec, ray: Ray, depth: int) -> Point:
    """
    The vertex x_depth of the ray's vertex sequence.
    """
    check_ray(spec, ray)
    return vertex_point(ray.word(depth))


def point_along(spec: TreeSpec, a: ExtPoint, s: Dyadic) -> ExtPoint:
    """
    The point at distance s from x0 on the geodesic [x0, a]. Returns a
    itself for s = ext_norm(a), so boundary points stay on the boundary.
    """
    total = ext_norm(spec, a)
    if s < ZERO or s > total:
        raise OutOfRange(f"Distance {s} is not in [0, {total}]")
    if s == total:
        return a
    if isinstance(a, Ray):
        return point_on_word(a.word(depth_for_distance(s)), s)
    return geodesic_point(spec, a, s)


def ext_point_from_json_dict(data: dict) -> ExtPoint:
    """
    Decode the tagged union: {"root": true}, {"vertex": .., "t": ..} or
    {"prefix": .., "cycle": ..}.
    """
    if 'cycle' in data:
        return Ray.from_json_dict(data)
    return Point.from_json_dict(data)


def load_ext_point(source: Union[str, dict]) -> ExtPoint:
    """
    Load a point or ray from a file, inline JSON or a decoded dict.
    """
    return ext_point_from_json_dict(load_json_argument(source, 'ext_point'))


def vertex_sequence(ray: Ray, count: int) -> Tuple[Point, ...]:
    """
    The first count vertices x1, x2, ... of the ray (x0 excluded).
    """
    return tuple(vertex_point(ray.word(i)) for i in range(1, count + 1))

