import json
import math

import pytest

from conftest import noiseless_document
from src.experiment_cli import build_parser, main

WORKED = {'K': 1, 'snr_db': [20.0, 20.0], 'inr_db': [20.0]}


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_rate_reports_worked_instance(capsys, write_json, tmp_path):
    config = write_json('rate.json', {'instance': WORKED, 'config': {'qmf_set': [1]}})
    out = tmp_path / 'report.json'
    code, stdout, _ = run(capsys, ['rate', config, '--out', str(out)])
    assert code == 0
    report = json.loads(stdout)
    assert report['symmetric_rate'] == pytest.approx(math.log2(1 + 100 / 2.01), abs=1e-9)
    assert report['quant_noise']['1'] == pytest.approx(1.01, abs=1e-9)
    assert report['scenarios'] == {'0': 'III', '1': 'I'}
    assert json.loads(out.read_text(encoding='utf-8')) == report


def test_rate_defaults_to_pure_decoding(capsys, write_json):
    config = write_json('rate.json', {'instance': WORKED})
    code, stdout, _ = run(capsys, ['rate', config])
    assert code == 0
    assert json.loads(stdout)['config']['qmf_set'] == []


def test_rate_rejects_split_on_quantizing_stage(capsys, write_json):
    config = write_json('rate.json', {'instance': WORKED, 'config': {'qmf_set': [1], 'theta': [0.5]}})
    code, stdout, stderr = run(capsys, ['rate', config])
    assert code == 2
    assert stdout == ''
    assert 'theta_k must equal 1' in stderr


@pytest.mark.parametrize('content', ['{"instance": ', '{"instance": {"K": 1}}', '{"instance": {}, "extra": 1}'])
def test_rate_rejects_malformed_files(capsys, tmp_path, content):
    path = tmp_path / 'bad.json'
    path.write_text(content, encoding='utf-8')
    code, _, stderr = run(capsys, ['rate', str(path)])
    assert code == 2
    assert stderr.startswith('error: ')


def test_missing_file_is_an_input_error(capsys, tmp_path):
    code, _, stderr = run(capsys, ['rate', str(tmp_path / 'missing.json')])
    assert code == 2
    assert 'missing.json' in stderr


def test_optimize_small_instance(capsys, write_json):
    config = write_json('opt.json', {
        'instance': WORKED,
        'search': {'theta_search': {'kind': 'grid', 'points_per_dim': 11}},
    })
    code, stdout, _ = run(capsys, ['optimize', config])
    assert code == 0
    report = json.loads(stdout)
    assert len(report['per_config_rates']) == 2
    assert report['rate'] >= math.log2(1 + 100 / 2.01) - 1e-12
    assert report['search']['theta_search']['points_per_dim'] == 11


@pytest.mark.parametrize('n, expected', [('1', 1.0), ('3', 1.5), ('inf', 2.0)])
def test_schedule(capsys, n, expected):
    code, stdout, _ = run(capsys, ['schedule', '--r', '4', '--K', '1', '--N', n])
    assert code == 0
    report = json.loads(stdout)
    assert report['throughput'] == pytest.approx(expected, abs=1e-12)
    assert report['asymptote'] == 2.0


def test_schedule_rejects_zero_messages(capsys):
    code, _, stderr = run(capsys, ['schedule', '--r', '4', '--K', '1', '--N', '0'])
    assert code == 2
    assert 'N must be >= 1' in stderr


def test_argument_errors_exit_with_usage(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(['schedule', '--r', '1', '--K', '1', '--N', 'many'])
    assert excinfo.value.code == 2
    with pytest.raises(SystemExit):
        main([])


def test_sweep_rejects_unknown_scheme(capsys):
    code, _, stderr = run(capsys, ['sweep', '--k-list', '1', '--trials', '1', '--schemes', 'mixed,cut_set', '--quiet'])
    assert code == 2
    assert 'cut_set' in stderr


def test_sweep_writes_csv_and_sidecars(capsys, tmp_path, write_json):
    ensemble = write_json('ensemble.json', {'snr_db': 20.0, 'alpha_lo': 0.0, 'alpha_hi': 1.0, 'trials': 5, 'seed': 4})
    out = tmp_path / 'rates.csv'
    code, stdout, _ = run(capsys, [
        'sweep', '--ensemble', ensemble, '--trials', '2', '--k-list', '1,2',
        '--schemes', 'pure_df,hop_bound', '--out', str(out), '--quiet',
    ])
    assert code == 0
    assert stdout.splitlines()[0] == 'K,scheme,decoder,variant,mean_rate_bits,std_error,trials'
    assert len(out.read_text(encoding='utf-8').splitlines()) == 1 + 2 * 2 * 2
    meta = json.loads((tmp_path / 'rates.meta.json').read_text(encoding='utf-8'))
    assert meta['ensemble'] == {'snr_db': 20.0, 'alpha_lo': 0.0, 'alpha_hi': 1.0, 'trials': 2, 'seed': 4}
    assert (tmp_path / 'rates.summary.csv').exists()


def test_sweep_without_out_prints_rows(capsys):
    code, stdout, _ = run(capsys, ['sweep', '--k-list', '1', '--trials', '2', '--schemes', 'hop_bound', '--quiet'])
    assert code == 0
    assert stdout.splitlines()[0] == 'K,trial,scheme,decoder,variant,rate_bits'
    assert len(stdout.splitlines()) == 3


def test_dm_eval_on_noiseless_network(capsys, write_json):
    spec = write_json('net.json', noiseless_document())
    code, stdout, _ = run(capsys, ['dm-eval', spec, '--qmf-set', '1', '--decoder', 'jd'])
    assert code == 0
    report = json.loads(stdout)
    assert report['symmetric_rate'] == pytest.approx(1.0, abs=1e-12)
    assert report['modes'] == [[1], [1]]
    assert report['decoder'] == 'jd'


def test_dm_eval_reports_spec_violations(capsys, write_json):
    document = noiseless_document()
    document['paths'][0]['channels'][1]['pmf'] = [[0.5, 0.4], [0.0, 1.0]]
    code, _, stderr = run(capsys, ['dm-eval', write_json('net.json', document)])
    assert code == 2
    assert 'row sum' in stderr


def test_parser_defaults():
    args = build_parser().parse_args(['dm-eval', 'net.json'])
    assert args.qmf_set == []
    assert args.qmf_set_2 is None
    assert args.decoder == 'sd'
