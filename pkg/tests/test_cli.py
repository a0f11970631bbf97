import json
import pytest
from treetransfer import cli

BINARY = json.dumps({"kind": "programmatic", "states": ["q"], "initial": "q",
                     "counts": {"q": 2}, "delta": {"q": ["q", "q"]}})
ROOT = '{"root": true}'
RAY = '{"prefix": [], "cycle": [0]}'


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in ('SEED', 'COUNT', 'MAX_DEPTH', 'BOUNDARY_FRACTION', 'WORKERS',
                 'VERBOSE', 'CONFIG_FILE', 'CONFIG_TRACE'):
        monkeypatch.delenv(f'TREETRANSFER_{name}', raising=False)


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


def test_dist_of_the_root_to_itself(capsys):
    code, out = run(capsys, 'dist', BINARY, ROOT, ROOT)
    assert code == cli.EXIT_OK
    assert out.splitlines() == ['0/2^0', '0']


def test_dist_of_a_ray_to_the_root(capsys):
    code, out = run(capsys, 'dist', BINARY, RAY, ROOT)
    assert code == cli.EXIT_OK
    assert out.splitlines()[0] == '1/2^0'


def test_dist_of_the_figure_pair(capsys):
    code, out = run(capsys, 'dist', BINARY, '{"vertex": [0, 0, 0, 0]}',
                    '{"vertex": [0, 0, 1, 0, 0]}')
    assert code == cli.EXIT_OK
    assert out.splitlines() == ['13/2^5', '0.40625']


def test_gromov(capsys):
    code, out = run(capsys, 'gromov', BINARY, '{"vertex": [0, 0, 0, 0]}',
                    '{"vertex": [0, 0, 1, 0, 0]}')
    assert code == cli.EXIT_OK
    assert out.splitlines() == ['3/2^2', '0.75']


def test_dist_reads_points_from_files(capsys, write_json):
    spec = write_json('binary.json', json.loads(BINARY))
    a = write_json('a.json', {"prefix": [0], "cycle": [1]})
    b = write_json('b.json', {"prefix": [], "cycle": [1]})
    code, out = run(capsys, 'dist', spec, a, b)
    assert code == cli.EXIT_OK
    assert out.splitlines()[0] == '2/2^0'


def test_dist_rejects_bad_points(capsys):
    assert cli.main(['dist', BINARY, '{"vertex": [2]}', ROOT]) == \
        cli.EXIT_USAGE
    assert cli.main(['dist', BINARY, '{"vertex": [0], "t": "0/2^0"}',
                     ROOT]) == cli.EXIT_USAGE
    assert cli.main(['dist', BINARY, '{"color": 1}', ROOT]) == \
        cli.EXIT_USAGE


def test_project(capsys):
    code, out = run(capsys, 'project', BINARY, RAY, '--sigma', '3/2^2')
    assert code == cli.EXIT_OK
    assert json.loads(out) == {'vertex': [0, 0], 't': '1/2^0'}
    code, out = run(capsys, 'project', BINARY, RAY, '--delta', '1/100')
    assert json.loads(out)['vertex'] == [0] * 8


def test_project_needs_a_radius(capsys):
    assert cli.main(['project', BINARY, RAY]) == cli.EXIT_USAGE
    assert cli.main(['project', BINARY, RAY, '--sigma', '1']) == \
        cli.EXIT_USAGE


@pytest.mark.parametrize("delta, n", [('1/2', 1), ('1/100', 7)])
def test_certify(capsys, delta, n):
    code, out = run(capsys, 'certify', BINARY, '--delta', delta,
                    '--count', '50', '--omit-samples')
    assert code == cli.EXIT_OK
    certificate = json.loads(out)
    assert certificate['N'] == n
    assert certificate['verdict'] == 'pass'
    assert certificate['samples'] == []


def test_certify_writes_to_a_file(capsys, tmp_path):
    output = tmp_path / 'certificate.json'
    code, out = run(capsys, 'certify', BINARY, '--delta', '1/2^3',
                    '--count', '20', '--output', str(output))
    assert code == cli.EXIT_OK
    assert out == ''
    certificate = json.loads(output.read_text(encoding='utf-8'))
    assert certificate['sigma'] == '15/2^4'
    assert len(certificate['samples']) > 20


@pytest.mark.parametrize("delta", ['0', '3/2', 'tiny'])
def test_certify_rejects_bad_tolerances(delta):
    assert cli.main(['certify', BINARY, '--delta', delta]) == cli.EXIT_USAGE


def test_verify(capsys):
    code, out = run(capsys, 'verify', 'metric', BINARY, '--count', '50')
    assert code == cli.EXIT_OK
    report = json.loads(out)
    assert report['suite'] == 'metric'
    assert report['verdict'] == 'pass'


def test_verify_boundary_on_a_finite_tree():
    finite = '{"kind": "explicit", "children": {"": 2}}'
    assert cli.main(['verify', 'boundary', finite]) == cli.EXIT_USAGE


def test_verify_unknown_suite():
    assert cli.main(['verify', 'curvature', BINARY]) == cli.EXIT_USAGE


def test_validate(capsys):
    code, out = run(capsys, 'validate', BINARY)
    assert code == cli.EXIT_OK
    assert json.loads(out)['valid'] is True
    broken = '{"kind": "explicit", "children": {"": 1, "00": 1}}'
    code, out = run(capsys, 'validate', broken)
    assert code == cli.EXIT_FAILURE
    assert json.loads(out)['valid'] is False


def test_seed_precedence(capsys, monkeypatch, write_json):
    def seed(*extra):
        code, out = run(capsys, 'verify', 'net', BINARY, '--count', '5',
                        *extra)
        assert code == cli.EXIT_OK
        return json.loads(out)['parameters']['sampling']['seed']

    assert seed() == 0
    config_file = write_json('config.yaml', {'seed': 3})
    assert seed('--config-file', config_file) == 3
    monkeypatch.setenv('TREETRANSFER_SEED', '5')
    assert seed('--config-file', config_file) == 5
    assert seed('--seed', '7', '--config-file', config_file) == 7


def test_unused_config_keys_are_an_error(write_json):
    config_file = write_json('config.yaml', {'colour': 'red'})
    assert cli.main(['verify', 'net', BINARY, '--config-file',
                     config_file]) == cli.EXIT_USAGE


def test_same_seed_gives_the_same_report(capsys):
    first = run(capsys, 'verify', 'hyperbolicity', BINARY, '--count', '40',
                '--seed', '12')
    second = run(capsys, 'verify', 'hyperbolicity', BINARY, '--count', '40',
                 '--seed', '12', '--workers', '3')
    assert first == second


def test_render(capsys, tmp_path):
    output = tmp_path / 'tree.svg'
    code, _ = run(capsys, 'render', BINARY, '--max-depth', '6', '--output',
                  str(output))
    assert code == cli.EXIT_OK
    svg = output.read_text(encoding='utf-8')
    assert svg.count('class="vertex"') == 127


def test_render_highlight(capsys):
    code, out = run(capsys, 'render', BINARY, '--max-depth', '5',
                    '--highlight', '{"vertex": [0, 0, 0, 0]}',
                    '{"vertex": [0, 0, 1, 0, 0]}')
    assert code == cli.EXIT_OK
    assert 'z norm 3/2^2' in out


def test_render_rejects_highlights_outside_the_tree(capsys):
    finite = '{"kind": "explicit", "children": {"": 2}}'
    assert cli.main(['render', finite, '--highlight', RAY, ROOT]) == \
        cli.EXIT_USAGE
    assert cli.main(['render', finite, '--highlight', '{"vertex": [0, 0]}',
                     ROOT]) == cli.EXIT_USAGE
    assert capsys.readouterr().out == ''


def test_usage_errors():
    assert cli.main([]) == cli.EXIT_USAGE
    assert cli.main(['dist', BINARY]) == cli.EXIT_USAGE
    assert cli.main(['certify', BINARY, '--delta', '1/2', '--count',
                     '0']) == cli.EXIT_USAGE
