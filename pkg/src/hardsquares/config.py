"""Runtime limits and thread configuration.

Precedence: explicit keyword overrides (CLI flags), then the environment
variables HARDSQ_THREADS and HARDSQ_CELL_CAP, then an optional JSON config
file, then defaults.
"""

from __future__ import annotations

import dataclasses
import json
import os

from .morse import DEFAULT_FLOW_BUDGET
from .oracle import DEFAULT_CELL_CAP
from .parallel import default_threads

DEFAULT_VERTEX_CAP = 10_000_000


@dataclasses.dataclass
class Config:
    threads: int = 1
    cell_cap: int = DEFAULT_CELL_CAP
    flow_budget: int = DEFAULT_FLOW_BUDGET
    vertex_cap: int = DEFAULT_VERTEX_CAP


def load_config(path=None, env=None, **overrides):
    env = os.environ if env is None else env
    values = {
        "threads": default_threads(),
        "cell_cap": DEFAULT_CELL_CAP,
        "flow_budget": DEFAULT_FLOW_BUDGET,
        "vertex_cap": DEFAULT_VERTEX_CAP,
    }
    if path:
        with open(path) as fh:
            data = json.load(fh)
        for key in values:
            if key in data:
                values[key] = int(data[key])
    if "HARDSQ_THREADS" in env:
        values["threads"] = int(env["HARDSQ_THREADS"])
    if "HARDSQ_CELL_CAP" in env:
        values["cell_cap"] = int(env["HARDSQ_CELL_CAP"])
    for key, val in overrides.items():
        if val is not None:
            values[key] = int(val)
    return Config(**values)
