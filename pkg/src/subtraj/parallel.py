"""Worker-count handling for the embarrassingly parallel build loops."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

ENV_VAR = "SUBTRAJ_THREADS"


def worker_count(requested: int | None = None) -> int:
    """Resolve the worker count: explicit request, else $SUBTRAJ_THREADS, else 1.

    A value of 0 means one worker per CPU.
    """
    if requested is None:
        raw = os.environ.get(ENV_VAR, "").strip()
        if not raw:
            return 1
        try:
            requested = int(raw)
        except ValueError as exc:
            raise ValueError(f"{ENV_VAR} must be an integer, got {raw!r}") from exc
    if requested < 0:
        raise ValueError("worker count must be non-negative")
    return requested or (os.cpu_count() or 1)


def pmap(fn, items, workers: int | None = None) -> list:
    """Ordered map; results do not depend on the worker count."""
    items = list(items)
    n = worker_count(workers)
    if n <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (4 * n))
    with ProcessPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items, chunksize=chunk))
