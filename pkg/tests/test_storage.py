import json

import pandas as pd
import pytest

from cr_regular_spheres.catalog import make_preset, verify_ar_identity
from cr_regular_spheres.certifier import sigma_histogram, sweep
from cr_regular_spheres.config import SweepConfig
from cr_regular_spheres.errors import SerializationError
from cr_regular_spheres.storage import (
    file_sha256, identity_to_dict, load_embedding, load_polynomial, load_report, manifest_path, read_json,
    save_embedding, save_histogram, save_polynomial, save_report,
)
from cr_regular_spheres.structures import RunManifest, Verdict


def test_polynomial_file(tmp_path):
    P = make_preset('ar').f[0]
    path = tmp_path / 'p.json'
    save_polynomial(path, P)
    assert load_polynomial(path) == P
    assert path.read_text().endswith('\n')


def test_embedding_file_is_stable(tmp_path):
    E = make_preset('q-block', n=2)
    a, b = tmp_path / 'a.json', tmp_path / 'b.json'
    save_embedding(a, E)
    save_embedding(b, load_embedding(a))
    assert a.read_bytes() == b.read_bytes()
    assert file_sha256(a) == file_sha256(b)


def test_read_json_rejects_garbage(tmp_path):
    path = tmp_path / 'bad.json'
    path.write_text('{"m": 2, ')
    with pytest.raises(SerializationError):
        read_json(path)
    path.write_text('[1, 2]')
    with pytest.raises(SerializationError):
        load_embedding(path)


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_embedding(tmp_path / 'nowhere.json')


def test_report_and_sidecar_manifest(tmp_path):
    report = sweep(make_preset('ar'), SweepConfig(samples=500, seed=1, workers=1)).report
    manifest = RunManifest(command='verify', config={'samples': 500}, inputs={'embedding': 'abc'}, version='0.1',
                           wall_time=1.5)
    path = tmp_path / 'out' / 'report.json'
    save_report(path, report, manifest)

    sidecar = manifest_path(path)
    assert sidecar.name == 'report.manifest.json'
    assert json.loads(sidecar.read_text())['wall_time'] == 1.5

    data = json.loads(path.read_text())
    assert 'wall_time' not in data['manifest']
    assert data['manifest']['sidecar'] == 'report.manifest.json'
    assert data['config'] == {'samples': 500, 'seed': 1, 'tol': 1e-08, 'restarts': 0}

    loaded, embedded = load_report(path)
    assert loaded.verdict is Verdict.ALL_REGULAR
    assert loaded.min_sigma == report.min_sigma
    assert list(loaded.argmin_z) == list(report.argmin_z)
    assert embedded['command'] == 'verify'


def test_report_bytes_do_not_depend_on_wall_time(tmp_path):
    report = sweep(make_preset('ar'), SweepConfig(samples=200, seed=2, workers=1)).report
    first, second = tmp_path / 'a' / 'r.json', tmp_path / 'b' / 'r.json'
    save_report(first, report, RunManifest('verify', {}, {}, '0.1', wall_time=1.0))
    save_report(second, report, RunManifest('verify', {}, {}, '0.1', wall_time=9.0))
    assert first.read_bytes() == second.read_bytes()


def test_load_report_rejects_malformed(tmp_path):
    path = tmp_path / 'r.json'
    path.write_text('{"label": "x"}')
    with pytest.raises(SerializationError):
        load_report(path)


def test_identity_dict():
    data = identity_to_dict(verify_ar_identity())
    assert data['holds'] is True
    assert data['residual'] == {'m': 2, 'terms': []}
    assert len(data['lhs']['terms']) == 3


def test_histogram_csv(tmp_path):
    path = tmp_path / 'h.csv'
    save_histogram(path, sigma_histogram([0.1, 0.2, 0.2, 0.9], bins=4))
    frame = pd.read_csv(path)
    assert list(frame.columns) == ['bin_left', 'bin_right', 'count']
    assert frame['count'].sum() == 4
