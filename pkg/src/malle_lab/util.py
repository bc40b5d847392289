"""Shared plumbing: deterministic chunked parallel map."""

from __future__ import annotations

import os

__all__ = ["pmap", "worker_count"]


def worker_count(explicit: int | None = None) -> int:
    """Resolve the worker count: explicit arg, else MALLE_LAB_WORKERS, else 1."""
    if explicit is not None and explicit >= 1:
        return explicit
    env = os.environ.get("MALLE_LAB_WORKERS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def pmap(fn, items, workers: int = 1):
    """Order-preserving map; results are identical for any worker count."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    import multiprocessing as mp

    with mp.Pool(min(workers, len(items))) as pool:
        return pool.map(fn, items)
