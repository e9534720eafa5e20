"""Deterministic fan-out of independent checks."""

import os
from concurrent.futures import ProcessPoolExecutor


def job_count(jobs=None):
    if jobs is None:
        jobs = os.environ.get("SHIFTED_MANIN_JOBS", "1")
    try:
        jobs = int(jobs)
    except (TypeError, ValueError):
        raise ValueError(f"bad job count {jobs!r}") from None
    if jobs < 1:
        raise ValueError("job count must be positive")
    return jobs


def run_all(fn, items, jobs=None):
    """[fn(*item) for item in items], in order, optionally across processes."""
    items = list(items)
    jobs = job_count(jobs)
    if jobs == 1 or len(items) < 2:
        return [fn(*it) for it in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as ex:
        futures = [ex.submit(fn, *it) for it in items]
        return [f.result() for f in futures]
