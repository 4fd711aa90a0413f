"""Helpers shared across test modules."""

from __future__ import annotations

import numpy as np

from tcfilm.spectral_core import PeriodicField, grid

_ACCEPTANCE_LINES: list[str] = []


def make_field(n: int, c: float = 1.0, modes: dict[int, float] | None = None) -> PeriodicField:
    """Field c + sum_k amp_k cos(k theta) on an n-point grid."""
    th = grid(n)
    vals = np.full(n, float(c))
    for k, amp in (modes or {}).items():
        vals += amp * np.cos(k * th)
    return PeriodicField(vals)


def record_acceptance(name: str, ok: bool, detail: str) -> bool:
    """Queue one pass/fail line for the end-of-run acceptance summary."""
    _ACCEPTANCE_LINES.append(f"{name}: {'PASS' if ok else 'FAIL'} - {detail}")
    return ok
