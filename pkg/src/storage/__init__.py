"""Output backends for results and input files."""

from __future__ import annotations

from src.storage.local import LocalFileSystemStorage, StdoutStorage, backend_for, encode_json, load_json
from src.storage.protocol import OutputBackend

__all__ = ['LocalFileSystemStorage', 'OutputBackend', 'StdoutStorage', 'backend_for', 'encode_json', 'load_json']
