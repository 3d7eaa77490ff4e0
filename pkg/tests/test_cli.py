"""
Tests for the typer command-line interface: payloads and exit codes.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any

import pytest
from typer.testing import CliRunner

from src.cli.main import app
from tests.conftest import INPUTS_DIR

runner = CliRunner()


def invoke_json(*args: str) -> Any:
    result = runner.invoke(app, list(args))
    assert result.exit_code == 0, result.output
    return json.loads(result.stdout)


# ==============================================================================
# Successful commands
# ==============================================================================


def test_intrinsic_reports_fraction() -> None:
    payload = invoke_json('ase', 'intrinsic', '--dim', '4', '--flavor', 'even')
    assert payload['fraction'] == '17/35'
    assert payload['value'] == pytest.approx(17 / 35, abs=1e-11)


def test_t_state_entropy() -> None:
    payload = invoke_json('se', 'state', '--state', 't')
    assert payload['M'] == pytest.approx(0.25, abs=1e-11)
    assert 'linear' not in payload
    assert payload['space']['flavor'] == 'multiqubit'


def test_extrinsic_from_projector_file() -> None:
    payload = invoke_json(
        'ase', 'extrinsic', '--projector', str(INPUTS_DIR / 'gss_projector.json'), '--small-flavor', 'multiqubit'
    )
    assert payload['small_dim'] == 2
    assert payload['extrinsic'] == pytest.approx(5 / 9, abs=1e-9)
    assert payload['gap'] == pytest.approx(16 / 45, abs=1e-9)


def test_gap_from_embedding_file() -> None:
    payload = invoke_json('ase', 'gap', '--embedding', str(INPUTS_DIR / 'qubit_in_qutrit.json'))
    assert payload['small_flavor'] == 'multiqubit'
    assert payload['intrinsic'] == pytest.approx(0.2, abs=1e-11)


def test_builtin_code_analysis() -> None:
    payload = invoke_json('code', 'analyze', '--builtin', '422')
    assert payload['classification'] == 'zero'
    assert payload['a_set_size'] == 64
    assert payload['extrinsic'] == pytest.approx(3 / 7, abs=1e-9)


def test_gap_code_shortcut() -> None:
    payload = invoke_json('gap', 'code', '--builtin', '422', '--small-flavor', 'multiqubit')
    assert payload['closed_form_gap'] == pytest.approx(0.0, abs=1e-12)
    assert payload['gap'] == pytest.approx(0.0, abs=1e-9)


def test_code_file_with_phases() -> None:
    payload = invoke_json('code', 'analyze', '--file', str(INPUTS_DIR / 'odd_parity_code.json'))
    assert payload['trivial_phases'] is False
    assert payload['closed_form_gap'] is None
    assert payload['codespace_dim'] == 2


def test_gauge_a_set_listing() -> None:
    payload = invoke_json('code', 'a-set', '--gauge', '3,2')
    assert payload['size'] == 3
    assert sorted(map(tuple, payload['indices'])) == [(0, 0, 0, 0), (1, 0, 1, 0), (2, 0, 2, 0)]


def test_polyhedron_example() -> None:
    payload = invoke_json('examples', 'polyhedron', '--faces', '4', '--spin', '0.5')
    assert payload['small_dim'] == 2
    assert payload['extrinsic'] == pytest.approx(17 / 45, abs=1e-9)
    assert payload['gap'] == pytest.approx(8 / 45, abs=1e-9)


def test_422_example_lists_three_reports() -> None:
    payload = invoke_json('examples', '422')
    assert [row['name'] for row in payload] == ['422', '422', '412']
    assert payload[1]['closed_form_fraction'] == '-2/35'


def test_random_curve_as_csv() -> None:
    result = runner.invoke(app, ['ase', 'random-curve', '--d', '3', '--format', 'csv'])
    assert result.exit_code == 0, result.output
    rows = list(csv.DictReader(io.StringIO(result.stdout)))
    assert [row['small_dim'] for row in rows] == ['1', '2', '3']
    assert float(rows[-1]['expected_gap']) == pytest.approx(0.0, abs=1e-12)


def test_output_file_is_written(tmp_path: Path) -> None:
    target = tmp_path / 'gss.json'
    result = runner.invoke(app, ['examples', 'gss', '--output', str(target)])
    assert result.exit_code == 0, result.output
    assert json.loads(target.read_text())['extrinsic'] == pytest.approx(5 / 9, abs=1e-9)


# ==============================================================================
# Exit codes
# ==============================================================================


def test_missing_file_exits_two(tmp_path: Path) -> None:
    result = runner.invoke(app, ['ase', 'extrinsic', '--projector', str(tmp_path / 'absent.json')])
    assert result.exit_code == 2


def test_invalid_json_exits_two(tmp_path: Path) -> None:
    broken = tmp_path / 'broken.json'
    broken.write_text('{"d": 2, "n": ')
    result = runner.invoke(app, ['ase', 'extrinsic', '--projector', str(broken)])
    assert result.exit_code == 2


def test_schema_mismatch_exits_one(tmp_path: Path) -> None:
    wrong = tmp_path / 'wrong.json'
    wrong.write_text(json.dumps({'d': 2, 'n': 1, 'matrix': [[[1, 0]]]}))
    result = runner.invoke(app, ['ase', 'extrinsic', '--projector', str(wrong)])
    assert result.exit_code == 1


def test_non_projector_exits_one(tmp_path: Path) -> None:
    bad = tmp_path / 'bad.json'
    bad.write_text(json.dumps({'d': 2, 'n': 1, 'matrix': [[[1, 0], [1, 0]], [[0, 0], [1, 0]]]}))
    result = runner.invoke(app, ['ase', 'extrinsic', '--projector', str(bad)])
    assert result.exit_code == 1


@pytest.mark.parametrize(
    'args',
    [
        ['ase', 'extrinsic'],
        ['code', 'analyze', '--builtin', '999'],
        ['code', 'analyze', '--gauge', '3'],
        ['ase', 'intrinsic', '--dim', '3', '--flavor', 'multiqubit'],
        ['se', 'state', '--d', '3', '--state', 'sic'],
    ],
    ids=['no-subspace', 'unknown-code', 'bad-gauge', 'flavor-mismatch', 'qubit-only-state'],
)
def test_domain_errors_exit_one(args: list[str]) -> None:
    result = runner.invoke(app, args)
    assert result.exit_code == 1
