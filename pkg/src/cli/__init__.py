"""CLI entry point for subspace-magic."""

from __future__ import annotations

from src.cli.main import app, main

__all__ = ['app', 'main']
