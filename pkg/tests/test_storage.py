"""
Tests for JSON storage backends and the complex-number schema types.
"""

from __future__ import annotations

from pathlib import Path

import orjson
import pydantic
import pytest

from src.exceptions import InputFileError
from src.schemas.base import csv_text
from src.schemas.operations.inputs import StateFile, parse_index_key
from src.schemas.operations.results import McResult
from src.storage import LocalFileSystemStorage, OutputBackend, StdoutStorage, backend_for, encode_json, load_json


def test_complex_pairs_decode() -> None:
    model = StateFile.model_validate({'amplitudes': [[0.6, 0], [0, 0.8]]})
    assert list(model.amplitudes) == [0.6 + 0j, 0.8j]


def test_complex_serializes_as_pair() -> None:
    model = StateFile.model_validate({'amplitudes': [[0.6, 0.0], [0.0, 0.8]]})
    assert orjson.loads(encode_json(model)) == {'amplitudes': [[0.6, 0.0], [0.0, 0.8]]}


@pytest.mark.parametrize('entry', [[1, 2, 3], 'x', [True, 0]], ids=['triple', 'string', 'bool'])
def test_malformed_complex_rejected(entry: object) -> None:
    with pytest.raises(pydantic.ValidationError):
        StateFile.model_validate({'amplitudes': [entry]})


def test_results_are_strict() -> None:
    with pytest.raises(pydantic.ValidationError):
        McResult.model_validate({'mean': 0.5, 'stderr': 0.1, 'samples': '10', 'seed': 1})
    with pytest.raises(pydantic.ValidationError):
        McResult(mean=0.5, stderr=-1.0, samples=10, seed=1)


def test_record_rounds_to_twelve_digits() -> None:
    record = McResult(mean=1 / 3, stderr=0.0, samples=10, seed=1).record()
    assert record['mean'] == 0.333333333333
    assert record['samples'] == 10


def test_csv_text_needs_flat_rows() -> None:
    assert csv_text([{'a': 1, 'b': 2 / 3}]) == 'a,b\n1,0.666666666667\n'
    with pytest.raises(ValueError, match='flat'):
        csv_text([{'a': [1, 2]}])
    with pytest.raises(ValueError, match='at least one row'):
        csv_text([])


def test_index_key_parsing() -> None:
    assert parse_index_key('1,0,2,1') == (1, 0, 2, 1)
    with pytest.raises(ValueError, match='not a comma-separated'):
        parse_index_key('1;0')


def test_round_trip_through_local_backend(tmp_path: Path) -> None:
    backend, name = backend_for(str(tmp_path / 'out.json'))
    assert isinstance(backend, OutputBackend)
    location = backend.save(name, encode_json({'value': 1.5}))
    assert Path(location).exists()
    assert load_json(location) == {'value': 1.5}


def test_stdout_backend_for_dash() -> None:
    backend, name = backend_for('-')
    assert isinstance(backend, StdoutStorage)
    assert name == '-'
    with pytest.raises(InputFileError):
        backend.load('-')


def test_local_backend_requires_directory(tmp_path: Path) -> None:
    with pytest.raises(ValueError, match='does not exist'):
        LocalFileSystemStorage(tmp_path / 'missing')


def test_load_json_errors(tmp_path: Path) -> None:
    with pytest.raises(InputFileError):
        load_json(str(tmp_path / 'absent.json'))
    with pytest.raises(InputFileError):
        load_json(str(tmp_path / 'no_dir' / 'x.json'))
    truncated = tmp_path / 'truncated.json'
    truncated.write_bytes(b'[1, 2')
    with pytest.raises(InputFileError):
        load_json(str(truncated))
