#!/usr/bin/env python3

"""
SVG drawing of the compactified tree in the unit disk.

A vertex is drawn at radius equal to its exact norm 1 - 1/2^n, the boundary
is the unit circle, and every vertex owns an angular wedge that is split
evenly among its children. Radii and wedge fractions are exact until the
pixel coordinates are emitted.
"""

import dataclasses
import math
from fractions import Fraction
import svgwrite
from beartype import beartype
from beartype.typing import List, Optional, Sequence, Tuple
from treetransfer.dyadic import Dyadic, ONE
from treetransfer.tree_model import TreeSpec, vertices_to_depth
from treetransfer.geometry import vertex_norm, point_norm
from treetransfer.boundary import (ExtPoint, Ray, ext_norm, gromov_ext,
                                   point_along)
from treetransfer.support.validators import InvalidParameter, validate_int
from treetransfer.log import vprint

_MARGIN = 10
_VERTEX_RADIUS = 2
# Extra letters read past the drawn depth to place a ray on the circle.
_RAY_LOOKAHEAD = 16
_PRECISION = 3


@dataclasses.dataclass(frozen=True)
class RenderConfig:
    """
    What to draw: vertices down to max_depth on a square image of size
    pixels, optionally two highlighted points with their geodesics and
    branch point.
    """
    max_depth: int = 6
    size: int = 800
    highlight: Optional[Tuple[ExtPoint, ExtPoint]] = None

    def __post_init__(self):
        validate_int(self.max_depth, 'max_depth', lower=1)
        validate_int(self.size, 'size', lower=4 * _MARGIN)
        if self.highlight is not None and len(self.highlight) != 2:
            raise InvalidParameter('highlight', self.highlight,
                                   "A pair of points")


def wedge(spec: TreeSpec, address: Sequence[int]) -> Tuple[Fraction,
                                                            Fraction]:
    """
    The angular wedge of a vertex as fractions of a full turn.
    """
    spec.check_address(address)
    low, width = Fraction(0), Fraction(1)
    for depth, index in enumerate(address):
        width /= spec.child_count(address[:depth])
        low += index * width
    return low, low + width


class _Canvas:
    def __init__(self, spec: TreeSpec, cfg: RenderConfig):
        self.spec = spec
        self.cfg = cfg
        self.center = cfg.size / 2
        self.scale = cfg.size / 2 - _MARGIN
        self.drawing = svgwrite.Drawing(size=(f'{cfg.size}px',
                                              f'{cfg.size}px'))
        self.drawing.add(self.drawing.rect(insert=(0, 0),
                                           size=(cfg.size, cfg.size),
                                           fill='white'))

    def position(self, radius: Dyadic, turn: Fraction) -> Tuple[float, float]:
        angle = 2 * math.pi * float(turn)
        length = radius.to_float() * self.scale
        return (round(self.center + length * math.cos(angle), _PRECISION),
                round(self.center - length * math.sin(angle), _PRECISION))

    def vertex_position(self, address) -> Tuple[float, float]:
        low, high = wedge(self.spec, address)
        return self.position(vertex_norm(len(address)), (low + high) / 2)

    def point_position(self, a: ExtPoint) -> Tuple[float, float]:
        if isinstance(a, Ray):
            word = a.word(self.cfg.max_depth + _RAY_LOOKAHEAD)
            low, high = wedge(self.spec, word)
            return self.position(ONE, (low + high) / 2)
        if a.is_root or a.is_vertex:
            return self.vertex_position(a.vertex)
        # Along the straight edge drawn from the parent.
        start = self.vertex_position(a.vertex[:-1])
        end = self.vertex_position(a.vertex)
        t = a.offset.to_float()
        return (round(start[0] + t * (end[0] - start[0]), _PRECISION),
                round(start[1] + t * (end[1] - start[1]), _PRECISION))

    def path(self, a: ExtPoint) -> List[Tuple[float, float]]:
        """
        Pixel polyline of the geodesic [x0, a], cut at max_depth.
        """
        depth = self.cfg.max_depth if isinstance(a, Ray) else \
            min(len(a.vertex) - 1, self.cfg.max_depth)
        word = a.word(depth) if isinstance(a, Ray) else a.vertex
        points = [self.vertex_position(word[:i]) for i in range(depth + 1)]
        points.append(self.point_position(a))
        return points


@beartype
def render(spec: TreeSpec, cfg: RenderConfig) -> svgwrite.Drawing:
    """
    Draw the tree.

    @param spec A valid tree.
    @param cfg What to draw.
    @return The SVG drawing. Each vertex is a circle of class "vertex" whose
            title holds its address and exact norm.
    """
    spec.require_valid()
    if cfg.highlight is not None:
        for point in cfg.highlight:
            ext_norm(spec, point)
    canvas = _Canvas(spec, cfg)
    drawing = canvas.drawing
    if spec.is_infinite():
        drawing.add(drawing.circle(center=(canvas.center, canvas.center),
                                   r=canvas.scale, fill='none',
                                   stroke='black', class_='boundary'))
    edges = drawing.add(drawing.g(stroke='gray', class_='edges'))
    vertices = drawing.add(drawing.g(fill='black', class_='vertices'))
    count = 0
    for address in vertices_to_depth(spec, cfg.max_depth):
        here = canvas.vertex_position(address)
        if address:
            edges.add(drawing.line(start=canvas.vertex_position(address[:-1]),
                                   end=here))
        circle = drawing.circle(center=here, r=_VERTEX_RADIUS,
                                class_='vertex')
        circle.set_desc(title=f"{list(address)} norm "
                        f"{vertex_norm(len(address))}")
        vertices.add(circle)
        count += 1
    if cfg.highlight is not None:
        _highlight(canvas, *cfg.highlight)
    vprint(f"Rendered {count} vertices to depth {cfg.max_depth}")
    return drawing


def _highlight(canvas: _Canvas, a: ExtPoint, b: ExtPoint):
    drawing = canvas.drawing
    spec = canvas.spec
    for name, point in (('a', a), ('b', b)):
        drawing.add(drawing.polyline(canvas.path(point), fill='none',
                                     stroke='blue', stroke_width=2,
                                     class_=f'geodesic-{name}'))
    branch = branch_point(spec, a, b)
    where = canvas.point_position(branch)
    marker = drawing.circle(center=where, r=2 * _VERTEX_RADIUS, fill='red',
                            class_='branch')
    radius = ONE if isinstance(branch, Ray) else point_norm(branch)
    marker.set_desc(title=f"z norm {radius}")
    drawing.add(marker)
    drawing.add(drawing.text('z', insert=(where[0] + 6, where[1] - 6),
                             fill='red', font_size='12px'))


def render_svg(spec: TreeSpec, cfg: RenderConfig) -> str:
    """
    The SVG document as text.
    """
    return render(spec, cfg).tostring()


def branch_point(spec: TreeSpec, a: ExtPoint, b: ExtPoint) -> ExtPoint:
    """
    The deepest point common to the geodesics [x0, a] and [x0, b]: the
    point of [x0, a] at distance (a|b) from x0.
    """
    return point_along(spec, a, gromov_ext(spec, a, b))
