#!/usr/bin/env python3

"""
Verification suites for the compactified tree.

Each suite samples points of the compactification with an ExtPointSampler,
checks one family of properties with exact dyadic comparisons and collects
every failure with its witnesses. Suites never raise for a failing
property. The metric and Gromov product under test can be swapped for a
perturbed version, which is how the harness itself is tested.
"""

import dataclasses
import json
from collections import deque
from beartype import beartype
from beartype.typing import Any, Callable, Dict, List, Optional, Tuple
from treetransfer.dyadic import Dyadic, ZERO, ONE, dabs, dmin
from treetransfer.tree_model import (TreeSpec, ExplicitTree, InvalidSpec,
                                     VertexAddress)
from treetransfer.geometry import (Point, ROOT_POINT, OutOfRange, dist,
                                   edge_length, gromov_via_meet, point_norm,
                                   vertex_norm, vertex_point, point_on_word)
from treetransfer.boundary import (ExtPoint, Ray, dist_bar, gromov_ext,
                                   ext_norm, same_point, point_along,
                                   ray_normalize, is_boundary)
from treetransfer import transfer
from treetransfer.sampling import (SampleConfig, ExtPointSampler,
                                   PARAMETER_STREAM, map_samples)
from treetransfer.log import vprint

Metric = Callable[[TreeSpec, ExtPoint, ExtPoint], Dyadic]
_GRID_EXPONENT = 6
_HOMOTOPY_TIMES = tuple(Dyadic(i, 2) for i in range(5))
_CONVERGENCE_DEPTH = 8


class NoBoundary(Exception):
    """
    A boundary suite was run on a finite tree.
    """


@dataclasses.dataclass
class Failure:
    """
    One violated check, with the inputs that witness it and the exact
    values compared.
    """
    index: int
    check: str
    witnesses: Dict[str, Any]
    values: Dict[str, str]

    def to_json_dict(self) -> dict:
        return {
            'index': self.index,
            'check': self.check,
            'witnesses': self.witnesses,
            'values': self.values,
        }


@dataclasses.dataclass
class SuiteReport:
    """
    Result of one suite run. The verdict is pass iff there are no failures.
    """
    suite: str
    checks: int = 0
    failures: List[Failure] = dataclasses.field(default_factory=list)
    parameters: Dict[str, Any] = dataclasses.field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return 'fail' if self.failures else 'pass'

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json_dict(self) -> dict:
        return {
            'suite': self.suite,
            'checks': self.checks,
            'failures': [failure.to_json_dict()
                         for failure in self.failures],
            'parameters': self.parameters,
            'verdict': self.verdict,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=4, sort_keys=True)


class _Checker:
    """
    Collects the outcome of the checks made on one sample.
    """

    def __init__(self, index: int, witnesses: Dict[str, ExtPoint]):
        self.index = index
        self.witnesses = {name: point.to_json_dict()
                          for name, point in witnesses.items()}
        self.checks = 0
        self.failures: List[Failure] = []

    def expect(self, condition: bool, check: str, **values):
        self.checks += 1
        if not condition:
            self.failures.append(Failure(
                self.index, check, self.witnesses,
                {name: str(value) for name, value in values.items()}))

    def outcome(self) -> Tuple[int, List[Failure]]:
        return self.checks, self.failures


def _merge(suite: str, outcomes, parameters: Dict[str, Any]) -> SuiteReport:
    report = SuiteReport(suite, parameters=parameters)
    for checks, failures in outcomes:
        report.checks += checks
        report.failures.extend(failures)
    report.failures.sort(key=lambda failure: (failure.index, failure.check))
    vprint(f"Suite '{suite}': {report.checks} checks, "
           f"{len(report.failures)} failures")
    return report


def _parameters(spec: TreeSpec, cfg: Optional[SampleConfig],
                **extra) -> Dict[str, Any]:
    parameters = {'tree': spec.kind}
    if cfg is not None:
        parameters['sampling'] = cfg.to_json_dict()
    parameters.update({name: str(value) for name, value in extra.items()})
    return parameters


def _draw_unit(rng, closed: bool = True) -> Dyadic:
    """
    A dyadic j/2^6 in [0, 1], or in [0, 1) when closed is False.
    """
    top = (1 << _GRID_EXPONENT) + (1 if closed else 0)
    return Dyadic(int(rng.integers(0, top)), _GRID_EXPONENT)


@beartype
def check_metric_axioms(spec: TreeSpec, cfg: SampleConfig, workers: int = 1,
                        metric: Metric = dist_bar) -> SuiteReport:
    """
    Non-negativity, identity of indiscernibles, symmetry and the triangle
    inequality on sampled triples.

    @param spec A valid tree.
    @param cfg The sampler configuration; count is the number of triples.
    @param workers Threads to shard the triples over.
    @param metric The metric under test.
    @return The suite report.
    """
    spec.require_valid()
    sampler = ExtPointSampler(spec, cfg)

    def evaluate(index):
        a, b, c = sampler.triple(index)
        checker = _Checker(index, {'a': a, 'b': b, 'c': c})
        pairs = {'ab': (a, b), 'bc': (b, c), 'ac': (a, c)}
        distances = {}
        for name, (x, y) in pairs.items():
            distance = metric(spec, x, y)
            distances[name] = distance
            checker.expect(distance >= ZERO, f'nonnegative {name}',
                           distance=distance)
            checker.expect((distance == ZERO) == same_point(spec, x, y),
                           f'identity {name}', distance=distance)
            reverse = metric(spec, y, x)
            checker.expect(distance == reverse, f'symmetry {name}',
                           forward=distance, backward=reverse)
        for left, middle, right in (('ab', 'bc', 'ac'), ('ab', 'ac', 'bc'),
                                    ('ac', 'bc', 'ab')):
            checker.expect(
                distances[right] <= distances[left] + distances[middle],
                f'triangle {right}', side=distances[right],
                first=distances[left], second=distances[middle])
        return checker.outcome()

    return _merge('metric', map_samples(evaluate, cfg.count, workers),
                  _parameters(spec, cfg))


@beartype
def check_hyperbolicity(spec: TreeSpec, cfg: SampleConfig, workers: int = 1,
                        product: Metric = gromov_ext) -> SuiteReport:
    """
    The 0-hyperbolic inequality (x|y) >= min{(x|z), (z|y)} for all three
    rotations of each sampled triple. On interior pairs the product is also
    compared with the norm of the branch point.
    """
    spec.require_valid()
    sampler = ExtPointSampler(spec, cfg)

    def evaluate(index):
        a, b, c = sampler.triple(index)
        checker = _Checker(index, {'a': a, 'b': b, 'c': c})
        for x, y, z, name in ((a, b, c, 'ab|c'), (b, c, a, 'bc|a'),
                              (c, a, b, 'ca|b')):
            left = product(spec, x, y)
            first = product(spec, x, z)
            second = product(spec, z, y)
            checker.expect(left >= dmin(first, second), f'hyperbolic {name}',
                           product=left, first=first, second=second)
        for x, y, name in ((a, b, 'ab'), (b, c, 'bc'), (a, c, 'ac')):
            if isinstance(x, Point) and isinstance(y, Point):
                value = product(spec, x, y)
                branch = gromov_via_meet(spec, x, y)
                checker.expect(value == branch, f'branch point {name}',
                               product=value, branch=branch)
        return checker.outcome()

    return _merge('hyperbolicity', map_samples(evaluate, cfg.count, workers),
                  _parameters(spec, cfg))


@beartype
def check_boundary_proposition(spec: TreeSpec, cfg: SampleConfig,
                               workers: int = 1,
                               metric: Metric = dist_bar) -> SuiteReport:
    """
    Boundary points are at distance 1 from x0, and two rays are at distance
    2 exactly when they leave x0 through different children.

    @param spec A valid infinite tree.
    @param cfg The sampler configuration; count is the number of ray pairs.
    @param workers Threads to shard the pairs over.
    @param metric The metric under test.
    @return The suite report. Raises NoBoundary on a finite tree.
    """
    spec.require_valid()
    if not spec.is_infinite():
        raise NoBoundary(f"The {spec.kind} tree is finite and has no "
                         "boundary")
    sampler = ExtPointSampler(spec, cfg)

    def evaluate(index):
        first = sampler.ray(index)
        second = sampler.ray(index + cfg.count)
        checker = _Checker(index, {'first': first, 'second': second})
        to_root = metric(spec, first, ROOT_POINT)
        checker.expect(to_root == ONE, 'distance to x0', distance=to_root)
        between = metric(spec, first, second)
        diverge = first.letter(0) != second.letter(0)
        checker.expect((between == 2) == diverge, 'distance 2 iff first '
                       'letters differ', distance=between)
        normal = ray_normalize(spec, first)
        to_normal = metric(spec, first, normal)
        checker.expect(to_normal == ZERO, 'normal form', distance=to_normal)
        return checker.outcome()

    return _merge('boundary', map_samples(evaluate, cfg.count, workers),
                  _parameters(spec, cfg))


def net_depth(eps: Dyadic) -> int:
    """
    The least depth D with 1/2^D <= eps.
    """
    if eps <= ZERO or eps > ONE:
        raise OutOfRange(f"eps {eps} is not in (0, 1]")
    return max(0, -eps.floor_log2())


def build_net(spec: TreeSpec, eps: Dyadic) -> frozenset:
    """
    All vertices of depth <= D and points at most eps apart along each edge
    between them, where D = net_depth(eps).
    """
    depth = net_depth(eps)
    net = set()
    queue = deque([()])
    while queue:
        address = queue.popleft()
        net.add(vertex_point(address))
        if address:
            # Edge into depth k is 1/2^k long, cut into 2^(D-k) pieces.
            pieces = depth - len(address)
            for step in range(1, 1 << pieces):
                net.add(Point(address, Dyadic(step, pieces)))
        if len(address) < depth:
            for index in range(spec.child_count(address)):
                queue.append(address + (index,))
    return frozenset(net)


def _snap_to_net(a: ExtPoint, depth: int) -> Point:
    """
    A net point on the geodesic [x0, a] within eps of a.
    """
    if isinstance(a, Ray) or a.depth > depth:
        word = a.word(depth) if isinstance(a, Ray) else a.vertex[:depth]
        return vertex_point(word)
    if a.is_root:
        return a
    pieces = depth - a.depth
    step = (a.offset.mantissa << pieces) >> a.offset.exponent
    if step == 0:
        return vertex_point(a.vertex[:-1])
    return Point(a.vertex, Dyadic(step, pieces))


@beartype
def check_net(spec: TreeSpec, eps: Dyadic, cfg: SampleConfig,
              workers: int = 1, metric: Metric = dist_bar) -> SuiteReport:
    """
    Total boundedness: every sample lies within eps of the finite net.

    @param spec A valid tree.
    @param eps The net mesh, 0 < eps <= 1.
    @param cfg The sampler configuration.
    @param workers Threads to shard the samples over.
    @param metric The metric under test.
    @return The suite report.
    """
    spec.require_valid()
    depth = net_depth(eps)
    net = build_net(spec, eps)
    sampler = ExtPointSampler(spec, cfg)
    vprint(f"Net for eps {eps}: depth {depth}, {len(net)} points")

    def evaluate(index):
        a = sampler.point(index)
        checker = _Checker(index, {'a': a})
        near = _snap_to_net(a, depth)
        checker.expect(near in net, 'net member', point=near)
        distance = metric(spec, a, near)
        checker.expect(distance <= eps, 'covered', distance=distance, eps=eps)
        return checker.outcome()

    parameters = _parameters(spec, cfg, eps=eps)
    parameters['net_size'] = len(net)
    return _merge('net', map_samples(evaluate, cfg.count, workers),
                  parameters)


def contract(spec: TreeSpec, a: ExtPoint, s: Dyadic) -> ExtPoint:
    """
    The global contraction C(a, s): the point at distance s * norm(a) from
    x0 on [x0, a]. C(a, 1) = a and C(a, 0) = x0.
    """
    return point_along(spec, a, s * ext_norm(spec, a))


@beartype
def check_contraction(spec: TreeSpec, cfg: SampleConfig, workers: int = 1,
                      metric: Metric = dist_bar) -> SuiteReport:
    """
    Endpoints, exact modulus of continuity and preservation of the balls
    around x0 for the contraction C.
    """
    spec.require_valid()
    sampler = ExtPointSampler(spec, cfg)
    three_quarters = Dyadic(3, 2)

    def evaluate(index):
        a = sampler.point(index)
        rng = sampler.rng(index, PARAMETER_STREAM)
        s, other, radius = _draw_unit(rng), _draw_unit(rng), \
            _draw_unit(rng, closed=False)
        checker = _Checker(index, {'a': a})
        total = ext_norm(spec, a)
        checker.expect(same_point(spec, contract(spec, a, ONE), a),
                       'C(a, 1) = a')
        start = contract(spec, a, ZERO)
        checker.expect(start == ROOT_POINT, 'C(a, 0) = x0', point=start)
        here, there = contract(spec, a, s), contract(spec, a, other)
        distance = metric(spec, here, there)
        expected = dabs(s - other) * total
        checker.expect(distance == expected, 'modulus', s=s, other=other,
                       distance=distance, expected=expected)
        norm_here = ext_norm(spec, here)
        checker.expect(norm_here == s * total, 'norm scales', s=s,
                       norm=norm_here)
        for bound in (radius, three_quarters):
            if total <= bound:
                checker.expect(norm_here <= bound, 'ball preserved', s=s,
                               radius=bound, norm=norm_here)
        return checker.outcome()

    return _merge('contraction', map_samples(evaluate, cfg.count, workers),
                  _parameters(spec, cfg))


def path_length_table(spec: ExplicitTree) -> Dict[VertexAddress,
                                                  Dict[VertexAddress, Dyadic]]:
    """
    Distances between all pairs of vertices by summing edge lengths along
    breadth-first paths in the undirected graph of the tree.
    """
    neighbours: Dict[VertexAddress, List[Tuple[VertexAddress, Dyadic]]] = {}
    for address in spec.vertices():
        neighbours.setdefault(address, [])
        if address:
            length = edge_length(len(address))
            neighbours[address].append((address[:-1], length))
            neighbours[address[:-1]].append((address, length))
    table = {}
    for source in neighbours:
        lengths = {source: ZERO}
        queue = deque([source])
        while queue:
            current = queue.popleft()
            for other, length in neighbours[current]:
                if other not in lengths:
                    lengths[other] = lengths[current] + length
                    queue.append(other)
        table[source] = lengths
    return table


@beartype
def check_oracle_equivalence(spec: TreeSpec, workers: int = 1,
                             metric: Metric = dist) -> SuiteReport:
    """
    Exhaustive comparison of dist with path summation, and of the Gromov
    product with the norm of the branch point, over all vertex pairs of a
    finite explicit tree.
    """
    if not isinstance(spec, ExplicitTree):
        raise InvalidSpec([f"Oracle comparison needs an explicit tree, got "
                           f"a {spec.kind} tree"])
    spec.require_valid()
    table = path_length_table(spec)
    vertices = sorted(table, key=lambda address: (len(address), address))

    def evaluate(index):
        u = vertices[index]
        p = vertex_point(u)
        outcomes = []
        for v in vertices:
            q = vertex_point(v)
            checker = _Checker(index, {'p': p, 'q': q})
            distance = metric(spec, p, q)
            checker.expect(distance == table[u][v], 'path sum',
                           distance=distance, oracle=table[u][v])
            product = (table[()][u] + table[()][v] - table[u][v]).half()
            branch = gromov_via_meet(spec, p, q)
            checker.expect(product == branch, 'branch point',
                           product=product, branch=branch)
            outcomes.append(checker.outcome())
        return (sum(checks for checks, _ in outcomes),
                [failure for _, failures in outcomes for failure in failures])

    parameters = _parameters(spec, None)
    parameters['vertices'] = len(vertices)
    return _merge('oracle', map_samples(evaluate, len(vertices), workers),
                  parameters)


@beartype
def check_transfer_contract(spec: TreeSpec, delta: transfer.Delta,
                            cfg: SampleConfig,
                            workers: int = 1,
                            metric: Metric = dist_bar) -> SuiteReport:
    """
    The retraction for delta: endpoints of the homotopy, constant tracks on
    the subtree K, the closed form of the track diameter against the sampled
    track, the track bound, monotone tracks, the 1-Lipschitz projection and
    p o i = identity on K.
    """
    spec.require_valid()
    n = transfer.compute_N(delta)
    radius = transfer.sigma(n)
    complex_ = transfer.truncation(spec, n)
    bound = ONE - radius
    sampler = ExtPointSampler(spec, cfg)

    def evaluate(index):
        a = sampler.point(index)
        b = sampler.point(index + cfg.count)
        checker = _Checker(index, {'a': a, 'b': b})
        projected = transfer.project(spec, a, radius)
        track = [transfer.homotopy_eval(spec, a, t, radius)
                 for t in _HOMOTOPY_TIMES]
        checker.expect(same_point(spec, track[0], a), 'H(a, 0) = a')
        checker.expect(track[-1] == projected, 'H(a, 1) = P(a)',
                       end=track[-1], projection=projected)
        diameter = transfer.track_diameter(spec, a, radius)
        closed_form = max(ZERO, ext_norm(spec, a) - radius)
        checker.expect(diameter == closed_form, 'closed form',
                       diameter=diameter, expected=closed_form)
        sampled = max(metric(spec, x, y) for x in track for y in track)
        checker.expect(sampled == diameter, 'sampled track',
                       sampled=sampled, diameter=diameter)
        checker.expect(diameter <= bound and diameter < delta, 'track bound',
                       diameter=diameter, bound=bound, delta=delta)
        norms = [ext_norm(spec, x) for x in track]
        checker.expect(all(left >= right for left, right in
                           zip(norms, norms[1:])), 'monotone track')
        inside = not is_boundary(a) and point_norm(a) <= radius
        if inside:
            checker.expect(all(x == a for x in track), 'constant on K')
            checker.expect(diameter == ZERO, 'zero track on K',
                           diameter=diameter)
            image = transfer.realize(
                spec, complex_, transfer.include(spec, complex_, a, radius))
            checker.expect(image == a, 'p o i = id', image=image)
        checker.expect(complex_.contains_point(projected), 'image in K',
                       projection=projected)
        other = transfer.project(spec, b, radius)
        before, after = metric(spec, a, b), metric(spec, projected, other)
        checker.expect(after <= before, '1-Lipschitz', before=before,
                       after=after)
        return checker.outcome()

    parameters = _parameters(spec, cfg, delta=delta)
    parameters['N'] = n
    return _merge('transfer', map_samples(evaluate, cfg.count, workers),
                  parameters)


@beartype
def check_convergence(spec: TreeSpec, cfg: SampleConfig, workers: int = 1,
                      product: Metric = gromov_ext) -> SuiteReport:
    """
    The vertices x1, x2, ... of a ray converge to it: (x_n | x_m) =
    1 - 1/2^min(n, m), (x_n | ray) = 1 - 1/2^n, and every point p on the ray
    is at distance 1 - norm(p) from it.
    """
    spec.require_valid()
    if not spec.is_infinite():
        raise NoBoundary(f"The {spec.kind} tree is finite and has no "
                         "boundary")
    sampler = ExtPointSampler(spec, cfg)

    def evaluate(index):
        ray = sampler.ray(index)
        rng = sampler.rng(index, PARAMETER_STREAM)
        checker = _Checker(index, {'ray': ray})
        for n in range(1, _CONVERGENCE_DEPTH + 1):
            x_n = vertex_point(ray.word(n))
            for m in range(n, _CONVERGENCE_DEPTH + 1):
                value = product(spec, x_n, vertex_point(ray.word(m)))
                checker.expect(value == vertex_norm(n), f'(x{n}|x{m})',
                               product=value)
            value = product(spec, x_n, ray)
            checker.expect(value == vertex_norm(n), f'(x{n}|ray)',
                           product=value)
        s = _draw_unit(rng, closed=False)
        p = point_on_word(ray.word(_GRID_EXPONENT + 1), s)
        distance = dist_bar(spec, p, ray)
        checker.expect(distance == ONE - s, 'ancestor distance', s=s,
                       distance=distance)
        return checker.outcome()

    return _merge('convergence', map_samples(evaluate, cfg.count, workers),
                  _parameters(spec, cfg))


SUITES = ('metric', 'hyperbolicity', 'boundary', 'net', 'contraction',
          'oracle', 'transfer', 'convergence')


@beartype
def run_suite(name: str, spec: TreeSpec, cfg: SampleConfig, workers: int = 1,
              eps: Optional[Dyadic] = None,
              delta: Optional[transfer.Delta] = None) -> SuiteReport:
    """
    Run a suite by name, as the command line does.

    @param name One of SUITES.
    @param spec The tree.
    @param cfg The sampler configuration.
    @param workers Threads to shard samples over.
    @param eps Net mesh for 'net' (default 1/2^4).
    @param delta Tolerance for 'transfer' (default 1/2^7).
    @return The report.
    """
    if name == 'metric':
        return check_metric_axioms(spec, cfg, workers)
    if name == 'hyperbolicity':
        return check_hyperbolicity(spec, cfg, workers)
    if name == 'boundary':
        return check_boundary_proposition(spec, cfg, workers)
    if name == 'net':
        return check_net(spec, eps if eps is not None else Dyadic(1, 4),
                         cfg, workers)
    if name == 'contraction':
        return check_contraction(spec, cfg, workers)
    if name == 'oracle':
        return check_oracle_equivalence(spec, workers)
    if name == 'transfer':
        return check_transfer_contract(
            spec, delta if delta is not None else Dyadic(1, 7), cfg, workers)
    if name == 'convergence':
        return check_convergence(spec, cfg, workers)
    raise ValueError(f"Unknown suite '{name}', expected one of "
                     f"{', '.join(SUITES)}")
