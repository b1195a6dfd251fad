"""Kernel selection: compiled extension when present, pure-Python otherwise.

Both backends implement identical contracts and produce identical outputs;
see benchmarks/compare_kernels.py for the speed comparison.
"""

from __future__ import annotations

from . import _fallback

try:
    from . import _speedups  # type: ignore[attr-defined]

    BACKEND = "compiled"
    seq_sweep = _speedups.seq_sweep
    pair_scan_counts = _speedups.pair_scan_counts
except ImportError:  # pragma: no cover - depends on build environment
    _speedups = None
    BACKEND = "fallback"
    seq_sweep = _fallback.seq_sweep
    pair_scan_counts = _fallback.pair_scan_counts

fallback = _fallback
compiled = _speedups
