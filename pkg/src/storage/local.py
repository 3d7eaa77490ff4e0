"""
Local filesystem and stdout backends, plus JSON encode/decode helpers.

Implements OutputBackend for the CLI's --output and input-file arguments.
"""

from __future__ import annotations

import pathlib
import sys
from typing import Any

import orjson
import pydantic

from src.exceptions import InputFileError

JSON_OPTIONS = orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY


class LocalFileSystemStorage:
    """Local filesystem backend rooted at a directory."""

    def __init__(self, base_path: pathlib.Path) -> None:
        """
        Initialize local filesystem storage.

        Args:
            base_path: Base directory for results

        Raises:
            ValueError: If base_path doesn't exist (fail-fast)
        """
        if not base_path.exists():
            raise ValueError(f'Storage path does not exist: {base_path}. Please create it first.')

        if not base_path.is_dir():
            raise ValueError(f'Storage path is not a directory: {base_path}')

        self.base_path = base_path

    def save(self, filename: str, data: bytes) -> str:
        file_path = self.base_path / filename
        try:
            file_path.write_bytes(data)
        except OSError as e:
            raise InputFileError(str(file_path), f'cannot write: {e}') from e
        return str(file_path.absolute())

    def exists(self, filename: str) -> bool:
        return (self.base_path / filename).exists()

    def load(self, filename: str) -> bytes:
        file_path = self.base_path / filename
        if not file_path.exists():
            raise InputFileError(str(file_path), 'file not found')
        try:
            return file_path.read_bytes()
        except OSError as e:
            raise InputFileError(str(file_path), f'cannot read: {e}') from e


class StdoutStorage:
    """Writes results to stdout (the '-' output target); cannot load."""

    def save(self, filename: str, data: bytes) -> str:
        del filename
        sys.stdout.buffer.write(data if data.endswith(b'\n') else data + b'\n')
        sys.stdout.flush()
        return '-'

    def exists(self, filename: str) -> bool:
        del filename
        return False

    def load(self, filename: str) -> bytes:
        raise InputFileError(filename, 'stdout backend does not support loading')


def backend_for(path: str) -> tuple[LocalFileSystemStorage | StdoutStorage, str]:
    """Backend and file name for an --output argument ('-' means stdout)."""
    if path == '-':
        return StdoutStorage(), '-'
    target = pathlib.Path(path).expanduser()
    try:
        return LocalFileSystemStorage(target.parent.resolve()), target.name
    except ValueError as e:
        raise InputFileError(path, str(e)) from e


def encode_json(payload: pydantic.BaseModel | Any) -> bytes:
    if isinstance(payload, pydantic.BaseModel):
        payload = payload.model_dump(mode='json')
    elif isinstance(payload, list) and payload and isinstance(payload[0], pydantic.BaseModel):
        payload = [item.model_dump(mode='json') for item in payload]
    return orjson.dumps(payload, option=JSON_OPTIONS)


def load_json(path: str) -> Any:
    """
    Read and decode a JSON file.

    Raises:
        InputFileError: If the file is missing, unreadable, truncated or not JSON
    """
    file_path = pathlib.Path(path).expanduser()
    backend = LocalFileSystemStorage(file_path.parent.resolve()) if file_path.parent.exists() else None
    if backend is None:
        raise InputFileError(path, 'directory not found')
    data = backend.load(file_path.name)
    try:
        return orjson.loads(data)
    except orjson.JSONDecodeError as e:
        raise InputFileError(path, f'invalid JSON: {e}') from e
