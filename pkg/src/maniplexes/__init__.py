"""Maniplexes, polytopes and voltage constructions on edge-colored dart graphs."""

from __future__ import annotations

__version__ = "0.1.0"
