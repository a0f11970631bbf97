#!/usr/bin/env python3

"""
Retraction of the compactified tree onto a finite subtree and the
certificate that it is a 1-transfer space.

For a tolerance delta the ball of radius sigma_N = 1 - 1/2^(N+1) around x0
is exactly the subtree of depth <= N+1, a finite 1-dimensional complex K.
Every point is pulled along its geodesic towards x0 until it reaches that
ball; the track of a point is a geodesic segment of length
max(0, norm - sigma_N) <= 1/2^(N+1) < delta.
"""

import dataclasses
import json
from collections import deque
from fractions import Fraction
from beartype import beartype
from beartype.typing import Dict, List, Optional, Tuple, Union
from treetransfer.dyadic import Dyadic, ZERO, ONE, dmax, dmin, floor_log2
from treetransfer.tree_model import (TreeSpec, VertexAddress,
                                     vertices_to_depth)
from treetransfer.geometry import Point, ROOT_POINT, OutOfRange, vertex_point
from treetransfer.boundary import ExtPoint, Ray, ext_norm, point_along
from treetransfer.sampling import SampleConfig, ExtPointSampler, map_samples
from treetransfer.support.validators import validate_rational
from treetransfer.log import vprint

Delta = Union[Dyadic, Fraction]


@dataclasses.dataclass
class Complex1D:
    """
    A finite simplicial complex of dimension at most 1: vertices are tree
    addresses and every edge joins a vertex to its parent.
    """
    vertices: List[VertexAddress]
    edges: List[Tuple[VertexAddress, VertexAddress]]

    def __post_init__(self):
        self._vertex_set = frozenset(self.vertices)

    @property
    def dimension(self) -> int:
        return 1 if self.edges else 0

    def simplices(self) -> List[Tuple[VertexAddress, ...]]:
        """
        All simplices: the vertices as 1-tuples, then the edges.
        """
        return [(vertex,) for vertex in self.vertices] + \
            [tuple(edge) for edge in self.edges]

    def _neighbours(self) -> Dict[VertexAddress, List[VertexAddress]]:
        neighbours = {vertex: [] for vertex in self.vertices}
        for left, right in self.edges:
            neighbours[left].append(right)
            neighbours[right].append(left)
        return neighbours

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        neighbours = self._neighbours()
        seen = {self.vertices[0]}
        queue = deque([self.vertices[0]])
        while queue:
            for other in neighbours[queue.popleft()]:
                if other not in seen:
                    seen.add(other)
                    queue.append(other)
        return len(seen) == len(self._vertex_set)

    def is_acyclic(self) -> bool:
        # Union-find; an edge inside one component closes a cycle.
        parent = {vertex: vertex for vertex in self.vertices}

        def find(vertex):
            while parent[vertex] != vertex:
                parent[vertex] = parent[parent[vertex]]
                vertex = parent[vertex]
            return vertex

        for left, right in self.edges:
            left_root, right_root = find(left), find(right)
            if left_root == right_root:
                return False
            parent[left_root] = right_root
        return True

    def contains_point(self, p: Point) -> bool:
        """
        Whether p lies in the realization of the complex, i.e. on an edge
        whose lower vertex is in the complex.
        """
        return p.vertex in self._vertex_set

    def to_json_dict(self) -> dict:
        return {'vertices': len(self.vertices), 'edges': len(self.edges)}


def delta_to_string(delta: Delta) -> str:
    """
    "m/2^k" for dyadic tolerances, "p/q" otherwise.
    """
    if isinstance(delta, Dyadic):
        return str(delta)
    return f"{delta.numerator}/{delta.denominator}"


def parse_delta(text: Union[str, int, Dyadic, Fraction]) -> Delta:
    """
    Parse a tolerance: "m/2^k" stays exact as a Dyadic, any other rational
    such as "1/100" becomes a Fraction. Range is checked by compute_N.
    """
    return validate_rational(text, 'delta')


@beartype
def compute_N(delta: Union[Dyadic, Fraction, int]) -> int:
    """
    The truncation depth parameter for a tolerance.

    @param delta A rational with 0 < delta <= 1.
    @return The least N >= 1 with 1/2^N <= delta.
    """
    if delta <= 0 or delta > 1:
        raise OutOfRange(f"delta {delta} is not in (0, 1]")
    # 1/2^N <= delta iff N >= -log2(delta).
    return max(1, -floor_log2(delta))


def sigma(n: int) -> Dyadic:
    """
    The retraction radius sigma_N = 1/2 + ... + 1/2^(N+1) = 1 - 1/2^(N+1).
    """
    return ONE - Dyadic.power_of_two(-(n + 1))


@beartype
def truncation(spec: TreeSpec, n: int) -> Complex1D:
    """
    The closed ball of radius sigma_N around x0 as a complex.

    @param spec A valid tree.
    @param n The parameter N >= 1.
    @return The subtree of all vertices of depth <= N+1.
    """
    if n < 1:
        raise OutOfRange(f"N must be positive, got {n}")
    spec.require_valid()
    vertices = list(vertices_to_depth(spec, n + 1))
    edges = [(vertex[:-1], vertex) for vertex in vertices if vertex]
    vprint(f"Truncation at depth {n + 1}: {len(vertices)} vertices")
    return Complex1D(vertices, edges)


def _check_sigma(value: Dyadic):
    if value < ZERO or value >= ONE:
        raise OutOfRange(f"sigma {value} is not in [0, 1)")


@beartype
def project(spec: TreeSpec, a: Union[Point, Ray], radius: Dyadic) -> Point:
    """
    Nearest point projection onto the closed ball of the given radius.

    @param spec The tree.
    @param a A point or a ray.
    @param radius The ball radius, 0 <= radius < 1.
    @return a itself when it lies in the ball, otherwise the point at
            distance radius from x0 on the geodesic [x0, a].
    """
    _check_sigma(radius)
    if isinstance(a, Point) and ext_norm(spec, a) <= radius:
        return a
    return point_along(spec, a, radius)


@beartype
def homotopy_eval(spec: TreeSpec, a: Union[Point, Ray], t: Dyadic,
                  radius: Dyadic) -> ExtPoint:
    """
    The constant speed retraction H(a, t) between the identity (t = 0) and
    the projection (t = 1).
    """
    if t < ZERO or t > ONE:
        raise OutOfRange(f"t {t} is not in [0, 1]")
    _check_sigma(radius)
    total = ext_norm(spec, a)
    target = (ONE - t) * total + t * dmin(total, radius)
    return point_along(spec, a, target)


@beartype
def track_diameter(spec: TreeSpec, a: ExtPoint, radius: Dyadic) -> Dyadic:
    """
    Diameter of {H(a, t) : t in [0, 1]}, the length of the segment
    between a and its projection.
    """
    _check_sigma(radius)
    return dmax(ZERO, ext_norm(spec, a) - radius)


def include(spec: TreeSpec, complex_: Complex1D, a: ExtPoint,
            radius: Dyadic) -> Point:
    """
    The map i from the compactification into the realization of K: the
    projection, whose image always lies in K.
    """
    image = project(spec, a, radius)
    if not complex_.contains_point(image):
        raise OutOfRange(f"{image} is not in the complex; radius {radius} "
                         "does not match its depth")
    return image


def realize(spec: TreeSpec, complex_: Complex1D, p: Point) -> Point:
    """
    The map p from the realization of K back into the compactification,
    the inclusion of the subtree.
    """
    spec.check_address(p.vertex)
    if not complex_.contains_point(p):
        raise OutOfRange(f"{p} is not in the complex")
    return p


@dataclasses.dataclass
class CertificateSample:
    point: ExtPoint
    projection: Point
    track: Dyadic

    def to_json_dict(self) -> dict:
        return {
            'point': self.point.to_json_dict(),
            'projection': self.projection.to_json_dict(),
            'track': str(self.track),
        }


@dataclasses.dataclass
class TransferCertificate:
    """
    The data witnessing that the tree retracts onto K with tracks no longer
    than delta.
    """
    delta: Delta
    n: int
    sigma_n: Dyadic
    complex: Complex1D
    samples: List[CertificateSample]
    max_track_diameter: Dyadic

    @property
    def verdict(self) -> str:
        passed = self.max_track_diameter <= self.delta and \
            self.complex.dimension <= 1
        return 'pass' if passed else 'fail'

    @property
    def passed(self) -> bool:
        return self.verdict == 'pass'

    def to_json_dict(self, omit_samples: bool = False) -> dict:
        data = {
            'delta': delta_to_string(self.delta),
            'N': self.n,
            'sigma': str(self.sigma_n),
            'complex': self.complex.to_json_dict(),
            'max_track': str(self.max_track_diameter),
            'verdict': self.verdict,
            'samples': [] if omit_samples else
            [sample.to_json_dict() for sample in self.samples],
        }
        return data


def _anchor_samples(spec: TreeSpec, complex_: Complex1D, n: int,
                    sampler: ExtPointSampler) -> List[ExtPoint]:
    """
    Samples that must always be present: the root, points of K on its outer
    sphere and inside an edge, a point beyond K and a boundary ray.
    """
    anchors = [ROOT_POINT]
    outer = [vertex for vertex in complex_.vertices if len(vertex) == n + 1]
    if outer:
        anchors.append(vertex_point(outer[0]))
        anchors.append(Point(outer[0], Dyadic(1, 1)))
    for vertex in outer:
        if spec.child_count(vertex) > 0:
            anchors.append(vertex_point(vertex + (0,)))
            anchors.append(Point(vertex + (0,), Dyadic(1, 2)))
            break
    if sampler.has_boundary:
        anchors.append(sampler.ray(0))
    return anchors


@beartype
def certify(spec: TreeSpec, delta: Union[Dyadic, Fraction, int],
            sampler_config: SampleConfig,
            workers: int = 1) -> TransferCertificate:
    """
    Build K for delta and check the track bound over a sample set.

    @param spec A valid tree.
    @param delta The tolerance, 0 < delta <= 1.
    @param sampler_config Drives the random part of the sample set.
    @param workers Threads used to evaluate samples.
    @return The certificate; its verdict is computed from the exact maximum
            track diameter, never assumed.
    """
    n = compute_N(delta)
    radius = sigma(n)
    complex_ = truncation(spec, n)
    sampler = ExtPointSampler(spec, sampler_config)
    points = _anchor_samples(spec, complex_, n, sampler) + map_samples(
        sampler.point, sampler_config.count, workers)

    def evaluate(index: int) -> CertificateSample:
        a = points[index]
        return CertificateSample(a, project(spec, a, radius),
                                 track_diameter(spec, a, radius))

    samples = map_samples(evaluate, len(points), workers)
    max_track = max((sample.track for sample in samples), default=ZERO)
    certificate = TransferCertificate(delta, n, radius, complex_, samples,
                                      max_track)
    vprint(f"delta {delta_to_string(delta)}: N = {n}, sigma = {radius}, "
           f"max track {max_track}, {certificate.verdict}")
    return certificate


def boundary_tracks(certificate: TransferCertificate) -> List[Dyadic]:
    """
    Track diameters of the sampled boundary rays.
    """
    return [sample.track for sample in certificate.samples
            if isinstance(sample.point, Ray)]


def certificate_to_json(certificate: TransferCertificate,
                        omit_samples: bool = False,
                        indent: Optional[int] = 4) -> str:
    """
    Deterministic JSON text of a certificate.
    """
    return json.dumps(certificate.to_json_dict(omit_samples), indent=indent,
                      sort_keys=True)
