"""
Output backend protocol for analysis results and input files.

Defines the interface shared by the local-filesystem and stdout backends.
"""

from __future__ import annotations

from typing import Protocol, runtime_checkable


@runtime_checkable
class OutputBackend(Protocol):
    """Protocol for result/input storage backends."""

    def save(self, filename: str, data: bytes) -> str:
        """
        Save result data.

        Args:
            filename: Name of the result file
            data: Encoded JSON or CSV bytes

        Returns:
            Final path (or '-' for stdout) where the data went

        Raises:
            InputFileError: If the location cannot be written
        """
        ...

    def exists(self, filename: str) -> bool:
        """True if the file exists in this backend."""
        ...

    def load(self, filename: str) -> bytes:
        """
        Load file contents.

        Raises:
            InputFileError: If the file is missing or unreadable
        """
        ...
