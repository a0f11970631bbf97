#!/usr/bin/env python3

"""
Deterministic seeded samplers over points, rays and points of the
compactification, and the worker pool the verification suites and the
certificate run them on.

Every sample index owns its own numpy generator seeded with (seed, index,
stream), so the sample sequence does not depend on the number of workers or
on the order in which they finish.
"""

import dataclasses
from multiprocessing.pool import ThreadPool
import numpy as np
from beartype import beartype
from beartype.typing import Callable, Dict, List, Tuple, TypeVar
from treetransfer.dyadic import Dyadic, ZERO, ONE, HALF
from treetransfer.tree_model import TreeSpec, AutomatonTree, VertexAddress
from treetransfer.geometry import Point, ROOT_POINT
from treetransfer.boundary import Ray, ExtPoint, InvalidRay, check_ray
from treetransfer.support.validators import (InvalidParameter, validate_int,
                                             validate_dyadic)
from treetransfer.log import vprint

_SEED_MASK = (1 << 64) - 1
# Independent streams drawn from the same (seed, index).
_TRIPLE_STREAM = 0
_POINT_STREAM = 1
_RAY_STREAM = 2
_INTERIOR_STREAM = 3
# Free for callers drawing their own per-sample parameters.
PARAMETER_STREAM = 4
_MAX_CYCLE = 4
_MAX_OFFSET_EXPONENT = 6
_CYCLE_ATTEMPTS = 8

Result = TypeVar('Result')


@dataclasses.dataclass(frozen=True)
class SampleConfig:
    """
    Parameters of the samplers. Equal configs give equal sample sequences.
    """
    seed: int = 0
    count: int = 1000
    max_depth: int = 12
    boundary_fraction: Dyadic = HALF

    def __post_init__(self):
        validate_int(self.seed, 'seed', lower=-(1 << 63), upper=_SEED_MASK)
        validate_int(self.count, 'count', lower=1)
        validate_int(self.max_depth, 'max_depth', lower=1)
        validate_dyadic(self.boundary_fraction, 'boundary_fraction',
                        lower=ZERO, upper=ONE, max_exponent=32)

    @property
    def seed_u64(self) -> int:
        return self.seed & _SEED_MASK

    def to_json_dict(self) -> dict:
        return {
            'seed': self.seed,
            'count': self.count,
            'max_depth': self.max_depth,
            'boundary_fraction': str(self.boundary_fraction),
        }

    @classmethod
    def from_config(cls, config) -> 'SampleConfig':
        """
        Build from a validated treetransfer.support.config.Config.
        """
        return cls(seed=config.seed, count=config.count,
                   max_depth=config.max_depth,
                   boundary_fraction=config.boundary_fraction)


class ExtPointSampler:
    """
    Draws interior points, rays and points of the compactification of one
    tree.

    Interior addresses come from uniform child choices with a geometrically
    distributed depth capped at max_depth; half of the points are vertices,
    the rest sit at a random dyadic offset on their edge. Rays get a prefix of
    at most max_depth letters and a cycle of 1 to 4 letters, all chosen among
    children from which an infinite path continues.
    """

    def __init__(self, spec: TreeSpec, cfg: SampleConfig):
        self.spec = spec
        self.cfg = cfg
        self.has_boundary = spec.is_infinite()
        # Mean depth about max_depth / 2, so deep edges get their share.
        self._depth_p = 2.0 / (cfg.max_depth + 2)
        self._live_choices: Dict[object, List[int]] = {}
        self._lassos: Dict[object, Tuple[VertexAddress, VertexAddress]] = {}
        if self.has_boundary:
            if not isinstance(spec, AutomatonTree):
                raise InvalidRay(f"Cannot sample rays of a {spec.kind} tree")
            live = spec.live_states()
            for state in live:
                targets = spec.delta[state][:spec.counts[state]]
                self._live_choices[state] = [
                    index for index, target in enumerate(targets)
                    if target in live]
            for state in live:
                self._lassos[state] = self._lasso(state)

    def _lasso(self, state) -> Tuple[VertexAddress, VertexAddress]:
        """
        A path from state into a cycle of live states, always taking the
        first live child. Returns (path word, cycle word).
        """
        seen = {state: 0}
        word = []
        while True:
            index = self._live_choices[state][0]
            word.append(index)
            state = self.spec.delta[state][index]
            if state in seen:
                start = seen[state]
                return tuple(word[:start]), tuple(word[start:])
            seen[state] = len(word)

    def rng(self, index: int, stream: int) -> np.random.Generator:
        return np.random.default_rng([self.cfg.seed_u64, index, stream])

    def _draw_boundary(self, rng: np.random.Generator) -> bool:
        if not self.has_boundary:
            return False
        fraction = self.cfg.boundary_fraction
        if fraction == ZERO:
            return False
        draw = int(rng.integers(0, fraction.denominator))
        return draw < fraction.mantissa

    def draw_interior(self, rng: np.random.Generator) -> Point:
        target = min(int(rng.geometric(self._depth_p)) - 1,
                     self.cfg.max_depth)
        address = ()
        for _ in range(target):
            count = self.spec.child_count(address)
            if count == 0:
                break
            address += (int(rng.integers(0, count)),)
        if not address:
            return ROOT_POINT
        if rng.integers(0, 2) == 0:
            return Point(address, ONE)
        exponent = int(rng.integers(1, _MAX_OFFSET_EXPONENT + 1))
        # Odd numerators keep the exponent of the offset exact.
        numerator = 2 * int(rng.integers(0, 1 << (exponent - 1))) + 1
        return Point(address, Dyadic(numerator, exponent))

    def _live_walk(self, rng, state, length):
        word = []
        for _ in range(length):
            choices = self._live_choices[state]
            index = choices[int(rng.integers(0, len(choices)))]
            word.append(index)
            state = self.spec.delta[state][index]
        return tuple(word), state

    def draw_ray(self, rng: np.random.Generator) -> Ray:
        if not self.has_boundary:
            raise InvalidRay("A finite tree has no boundary rays")
        length = int(rng.integers(0, self.cfg.max_depth + 1))
        prefix, state = self._live_walk(rng, self.spec.initial, length)
        for _ in range(_CYCLE_ATTEMPTS):
            cycle, _ = self._live_walk(
                rng, state, int(rng.integers(1, _MAX_CYCLE + 1)))
            ray = Ray(prefix, cycle)
            try:
                check_ray(self.spec, ray)
            except InvalidRay:
                continue
            return ray
        path, cycle = self._lassos[state]
        return Ray(prefix + path, cycle)

    def draw(self, rng: np.random.Generator) -> ExtPoint:
        if self._draw_boundary(rng):
            return self.draw_ray(rng)
        return self.draw_interior(rng)

    def point(self, index: int) -> ExtPoint:
        """
        The index-th sample of the compactification.
        """
        return self.draw(self.rng(index, _POINT_STREAM))

    def ray(self, index: int) -> Ray:
        """
        The index-th boundary sample.
        """
        return self.draw_ray(self.rng(index, _RAY_STREAM))

    def interior(self, index: int) -> Point:
        """
        The index-th interior sample.
        """
        return self.draw_interior(self.rng(index, _INTERIOR_STREAM))

    def triple(self, index: int) -> Tuple[ExtPoint, ExtPoint, ExtPoint]:
        """
        The index-th triple. One triple in sixteen repeats a point in one of
        the four possible patterns.
        """
        rng = self.rng(index, _TRIPLE_STREAM)
        pattern = int(rng.integers(0, 64))
        a = self.draw(rng)
        if pattern == 0:
            return a, a, a
        b = self.draw(rng)
        if pattern == 1:
            return a, a, b
        if pattern == 2:
            return a, b, a
        if pattern == 3:
            return b, a, a
        return a, b, self.draw(rng)


@beartype
def map_samples(function: Callable[[int], Result], count: int,
                workers: int = 1) -> List[Result]:
    """
    Apply function to the sample indices 0..count-1, optionally sharded over
    a thread pool.

    @param function A pure function of the sample index.
    @param count The number of samples.
    @param workers The number of threads; 1 runs inline.
    @return The results in index order, whatever the number of workers.
    """
    if workers < 1:
        raise InvalidParameter('workers', workers, "Integer >= 1")
    if workers == 1 or count < 2:
        return [function(index) for index in range(count)]
    chunksize = max(1, count // (workers * 4))
    vprint(f"Sharding {count} samples over {workers} workers")
    with ThreadPool(workers) as pool:
        return pool.map(function, range(count), chunksize)
