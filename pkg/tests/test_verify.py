import json
import pytest
from treetransfer.dyadic import Dyadic, ONE, HALF
from treetransfer.tree_model import InvalidSpec
from treetransfer.geometry import OutOfRange, vertex_point
from treetransfer.boundary import Ray, dist_bar, ext_norm, gromov_ext
from treetransfer.sampling import SampleConfig
from treetransfer import verify

TREES = ['unary', 'binary', 'ternary', 'alternating']


def no_factor_two(spec, a, b):
    return ext_norm(spec, a) + ext_norm(spec, b) - gromov_ext(spec, a, b)


@pytest.fixture(params=TREES)
def tree(request):
    return request.getfixturevalue(request.param)


def test_metric_axioms_hold(tree):
    report = verify.check_metric_axioms(tree, SampleConfig(seed=1, count=300))
    assert report.passed, report.to_json()
    # Three pairs with three checks each plus three triangles.
    assert report.checks == 300 * 12


def test_hyperbolicity_holds(tree):
    report = verify.check_hyperbolicity(tree, SampleConfig(seed=2, count=300))
    assert report.verdict == 'pass', report.to_json()


def test_boundary_proposition_holds(tree):
    report = verify.check_boundary_proposition(
        tree, SampleConfig(seed=3, count=200))
    assert report.passed, report.to_json()


def test_contraction_holds(tree):
    report = verify.check_contraction(tree, SampleConfig(seed=4, count=200))
    assert report.passed, report.to_json()


def test_convergence_holds(tree):
    report = verify.check_convergence(tree, SampleConfig(seed=5, count=50))
    assert report.passed, report.to_json()


@pytest.mark.parametrize("delta", [ONE, HALF, Dyadic(1, 7)])
def test_transfer_contract_holds(tree, delta):
    report = verify.check_transfer_contract(
        tree, delta, SampleConfig(seed=6, count=150))
    assert report.passed, report.to_json()
    assert report.parameters['N'] == max(1, -delta.floor_log2())


def test_net_covers_samples(tree):
    report = verify.check_net(tree, Dyadic(1, 4),
                              SampleConfig(seed=7, count=200))
    assert report.passed, report.to_json()
    assert report.parameters['eps'] == '1/2^4'


@pytest.mark.parametrize("exponent", [2, 4, 6])
def test_net_covers_boundary_rays_on_the_binary_tree(binary, exponent):
    report = verify.check_net(binary, Dyadic(1, exponent),
                              SampleConfig(seed=8, count=1000))
    assert report.passed, report.to_json()
    assert report.checks == 2000


def test_metric_without_factor_two_is_caught(binary):
    report = verify.check_metric_axioms(binary, SampleConfig(count=400),
                                        metric=no_factor_two)
    assert not report.passed
    assert report.verdict == 'fail'
    assert any(failure.check.startswith('identity')
               for failure in report.failures)


def test_distance_used_as_product_is_caught(binary):
    report = verify.check_hyperbolicity(binary, SampleConfig(count=400),
                                        product=dist_bar)
    assert not report.passed
    failure = report.failures[0]
    assert set(failure.witnesses) == {'a', 'b', 'c'}
    assert all(isinstance(value, str) for value in failure.values.values())


def test_failures_are_ordered_by_index(binary):
    report = verify.check_metric_axioms(binary, SampleConfig(count=400),
                                        metric=no_factor_two)
    keys = [(failure.index, failure.check) for failure in report.failures]
    assert keys == sorted(keys)


def test_boundary_suites_need_an_infinite_tree(small_explicit):
    with pytest.raises(verify.NoBoundary):
        verify.check_boundary_proposition(small_explicit,
                                          SampleConfig(count=10))
    with pytest.raises(verify.NoBoundary):
        verify.check_convergence(small_explicit, SampleConfig(count=10))


def test_interior_suites_run_on_a_finite_explicit_tree(explicit_binary):
    spec = explicit_binary(3)
    assert verify.check_metric_axioms(spec, SampleConfig(count=100)).passed
    assert verify.check_net(spec, HALF, SampleConfig(count=100)).passed


def test_build_net(binary):
    assert len(verify.build_net(binary, Dyadic(1, 2))) == 9
    assert verify.build_net(binary, ONE) == frozenset([vertex_point(())])
    assert verify.net_depth(Dyadic(3, 3)) == 2
    with pytest.raises(OutOfRange):
        verify.net_depth(Dyadic(3, 1))


def test_contract_endpoints(binary):
    ray = Ray((1,), (0,))
    assert verify.contract(binary, ray, ONE) is ray
    assert verify.contract(binary, ray, HALF) == vertex_point((1,))


@pytest.mark.parametrize("depth", [4, 5])
def test_oracle_equivalence(explicit_binary, depth):
    spec = explicit_binary(depth)
    report = verify.check_oracle_equivalence(spec, workers=2)
    vertices = (1 << (depth + 1)) - 1
    assert report.parameters['vertices'] == vertices
    assert report.checks == 2 * vertices * vertices
    assert report.passed, report.to_json()


def test_oracle_needs_an_explicit_tree(binary):
    with pytest.raises(InvalidSpec):
        verify.check_oracle_equivalence(binary)


def test_path_length_table(small_explicit):
    table = verify.path_length_table(small_explicit)
    assert table[(0, 0)][(1,)] == Dyadic(5, 2)
    assert table[()][(0, 0)] == Dyadic(3, 2)


def test_reports_do_not_depend_on_workers(alternating):
    cfg = SampleConfig(seed=99, count=250)
    inline = verify.check_metric_axioms(alternating, cfg,
                                        metric=no_factor_two)
    sharded = verify.check_metric_axioms(alternating, cfg, workers=4,
                                         metric=no_factor_two)
    assert inline.to_json() == sharded.to_json()


def test_report_json(binary):
    report = verify.run_suite('net', binary, SampleConfig(count=20))
    data = json.loads(report.to_json())
    assert data['suite'] == 'net'
    assert data['verdict'] == 'pass'
    assert data['failures'] == []
    assert data['parameters']['tree'] == 'programmatic'
    assert data['parameters']['sampling']['count'] == 20
    assert data['parameters']['net_size'] == len(
        verify.build_net(binary, Dyadic(1, 4)))


def test_run_suite_by_name(binary):
    for name in verify.SUITES:
        if name == 'oracle':
            continue
        report = verify.run_suite(name, binary, SampleConfig(count=20))
        assert report.suite == name
        assert report.passed
    report = verify.run_suite('transfer', binary, SampleConfig(count=20),
                              delta=HALF)
    assert report.parameters['N'] == 1


def test_run_suite_rejects_unknown_names(binary):
    with pytest.raises(ValueError):
        verify.run_suite('curvature', binary, SampleConfig(count=5))


@pytest.mark.slow
@pytest.mark.parametrize("name", ['unary', 'binary', 'alternating'])
@pytest.mark.parametrize("suite", ['metric', 'hyperbolicity', 'boundary',
                                   'transfer'])
def test_full_size_runs(request, name, suite):
    spec = request.getfixturevalue(name)
    report = verify.run_suite(suite, spec, SampleConfig(count=10000),
                              workers=4)
    assert report.passed
