"""Configuration module for subspace-magic."""

from __future__ import annotations

from src.config.compute import ComputeSettings, settings

__all__ = ['ComputeSettings', 'settings']
