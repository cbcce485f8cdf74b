#!/usr/bin/env python
"""
End-to-end tests of the pyows command line through run_command.
"""
import io
import json

import pytest

from pyows import encode
from pyows.api import make_rng
from pyows.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, run_command
from pyows.config import OUTPUT_DIR_ENV

from tests.utils import key_with_positive, small_params, tree_sequence


@pytest.fixture(autouse=True)
def no_output_dir(monkeypatch):
    monkeypatch.delenv(OUTPUT_DIR_ENV, raising=False)


def run(*argv):
    stdout, stderr = io.StringIO(), io.StringIO()
    code = run_command(list(argv), stdout=stdout, stderr=stderr)
    return code, stdout.getvalue(), stderr.getvalue()


def test_lemmas():
    code, out, _ = run('lemmas', '--m-max', '5', '--universe', '4', '--n-max', '2',
                       '--samples', '3')
    assert code == EXIT_OK
    report = json.loads(out)
    assert report['experiment'] == 'lemmas'
    assert report['passed'] is True
    assert report['params']['m_max'] == 5


def test_usage_errors():
    assert run('lemmas', '--bogus')[0] == EXIT_USAGE
    assert run('teleport')[0] == EXIT_USAGE
    code, _, err = run('pac', '--alpha', '1.5')
    assert code == EXIT_USAGE
    assert 'alpha' in err
    code, _, err = run('lemmas', '--m-max', '9')
    assert code == EXIT_USAGE
    assert 'BudgetExceeded' in err
    assert run('forward', '--d', '49', '--i', '3')[0] == EXIT_USAGE
    assert run('learn', '--d', '25')[0] == EXIT_USAGE


def test_keys():
    code, out, _ = run('keys', '--d', '49', '--count', '3', '--seed', '1')
    assert code == EXIT_OK
    rows = json.loads(out)['rows']
    assert len(rows) == 3
    assert all(row['k'] == 6 and len(row['seed_key']) == 2 for row in rows)
    assert run('keys', '--d', '49', '--count', '3', '--seed', '1')[1] == out


def test_csv_format():
    code, out, _ = run('keys', '--d', '49', '--count', '2', '--format', 'csv')
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == 'k,seed_key'
    assert len(lines) == 3


def test_derive_then_forward():
    _, out, _ = run('derive', '--d', '49', '--seed-key', '94', '--i', '3', '5')
    rows = json.loads(out)['rows']
    assert [row['i'] for row in rows] == [3, 5]
    code, out, _ = run('forward', '--d', '49', '--i', '3', '--sigma', rows[0]['sigma'],
                       '--j', '5')
    assert code == EXIT_OK
    forwarded = json.loads(out)['rows'][0]
    assert forwarded == {'j': 5, 'sigma': rows[1]['sigma'], 'fbit': rows[1]['fbit']}
    assert run('forward', '--d', '49', '--i', '5', '--sigma', rows[1]['sigma'],
               '--j', '3')[0] == EXIT_USAGE


def write_dataset(path, n=20000):
    params = small_params(4)
    s = key_with_positive(params, minimum=4, seed=30)
    sequence = tree_sequence(params, s)
    rng = make_rng(31)
    sample = [sequence[position] for position in rng.integers(len(sequence), size=n)]
    with open(str(path), 'w') as fp:
        encode.dump_dataset(params, sample, fp)
    return params


def test_learn_and_eval(tmp_path):
    data = tmp_path / 'data.jsonl'
    params = write_dataset(data)
    for name in ('h.bin', 'h.json'):
        hypothesis = tmp_path / name
        code, out, _ = run('learn', '--d', str(params.d), '--in', str(data),
                           '--out', str(hypothesis), '--seed', '2')
        assert code == EXIT_OK
        assert hypothesis.exists()
        learned = json.loads(out)
        assert [row['step'] for row in learned['rows']] == ['count', 'robust_min',
                                                            'most_frequent']
        assert learned['summary']['budget'] == {'epsilon': 1.0, 'delta': 0.0}

        code, out, _ = run('eval', '--d', str(params.d), '--hypothesis', str(hypothesis),
                           '--in', str(data))
        assert code == EXIT_OK
        evaluated = json.loads(out)
        assert evaluated['trials'] == 20000
        assert evaluated['summary']['hypothesis'] == learned['summary']['hypothesis']['type']
        assert evaluated['summary']['sample_loss'] == learned['summary']['sample_loss']


def test_eval_rejects_garbage(tmp_path):
    data = tmp_path / 'data.jsonl'
    params = write_dataset(data, n=10)
    bad = tmp_path / 'h.bin'
    bad.write_bytes(b'\x07')
    code, _, err = run('eval', '--d', str(params.d), '--hypothesis', str(bad), '--in', str(data))
    assert code == EXIT_USAGE
    assert err.startswith('pyows eval:')
    assert run('eval', '--d', str(params.d), '--hypothesis', str(tmp_path / 'none.bin'),
               '--in', str(data))[0] == EXIT_USAGE


def test_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / 'reports'))
    code, out, _ = run('keys', '--d', '49')
    assert code == EXIT_OK
    assert out == ''
    assert json.loads((tmp_path / 'reports' / 'keys.json').read_text())['experiment'] == 'keys'
    target = tmp_path / 'mine.csv'
    run('keys', '--d', '49', '--format', 'csv', '--out', str(target))
    assert target.read_text().startswith('k,seed_key')


def test_config_file(tmp_path):
    path = tmp_path / 'pyows.json'
    path.write_text(json.dumps({'d': 49, 'seed': 5, 'keys': {'count': 2}}))
    _, out, _ = run('keys', '--config', str(path))
    report = json.loads(out)
    assert len(report['rows']) == 2
    assert report['seed'] == 5
    _, out, _ = run('keys', '--config', str(path), '--count', '4')
    assert len(json.loads(out)['rows']) == 4
    path.write_text('{"keys": {"colour": 1}}')
    assert run('keys', '--config', str(path))[0] == EXIT_USAGE


def test_same_seed_same_bytes():
    argv = ('pac', '--d', '25', '--n', '5000', '--trials', '3', '--mc-samples', '200',
            '--indices', '5', '--seed', '4')
    first = run(*argv)
    second = run(*argv)
    assert first[0] in (EXIT_OK, EXIT_FAILED)
    assert first == second


def test_duel_exit_code_follows_verdict():
    code, out, _ = run('duel', '--d', '64', '--T', '100', '--games', '2',
                       '--baseline', 'omniscient', '--seed', '6')
    assert code == EXIT_OK
    assert json.loads(out)['summary']['omniscient']['mistakes'] == 0


def test_mech_audit():
    code, out, _ = run('mech-audit', '--epsilons', '0.5', '2', '--window', '10')
    assert code == EXIT_OK
    report = json.loads(out)
    assert report['passed'] is True
    assert set(report['summary']) == {'0.5', '2.0'}
    assert len(report['rows']) == 2 * len([row for row in report['rows']
                                           if row['epsilon'] == 0.5])


def test_mech_audit_rejects_huge_epsilon():
    code, _, err = run('mech-audit', '--epsilons', '800', '--window', '5')
    assert code == EXIT_USAGE
    assert 'epsilon' in err


def test_advantage_defaults_to_a_short_suffix():
    code, out, _ = run('advantage', '--trials', '50', '--seed', '3')
    assert code in (EXIT_OK, EXIT_FAILED)
    report = json.loads(out)
    assert report['params']['d'] == 1024
    assert report['params']['t'] == (1 << 31) - 1 - 32
    assert report['trials'] == 50
    assert run('advantage', '--d', '1024', '--t', '5', '--trials', '1')[0] == EXIT_USAGE


def test_pac_auto_n_overrides_configured_n():
    argv = ('pac', '--d', '25', '--n', '500', '--trials', '1', '--mc-samples', '100',
            '--indices', '5')
    _, out, _ = run(*argv)
    assert json.loads(out)['params']['n'] == 500
    _, out, _ = run(*(argv + ('--auto-n',)))
    assert json.loads(out)['params']['n'] > 500
