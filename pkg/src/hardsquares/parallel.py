"""Deterministic process-pool mapping.

Work is split into an ordered list of jobs; results come back in job
order, so reductions are independent of the worker count and outputs are
byte-identical at any parallelism level.
"""

from __future__ import annotations

import multiprocessing
import os


def default_threads():
    return os.cpu_count() or 1


def pmap(fn, jobs, threads):
    "Map fn over jobs, in order; forks worker processes when threads > 1."
    jobs = list(jobs)
    if threads <= 1 or len(jobs) <= 1:
        return [fn(job) for job in jobs]
    ctx = multiprocessing.get_context("fork")
    with ctx.Pool(processes=min(threads, len(jobs))) as pool:
        return pool.map(fn, jobs)
