"""Run configuration: packaged defaults overridden by command-line flags."""

from __future__ import annotations

import copy
import json
import os
from dataclasses import dataclass, field
from importlib import resources

from .errors import MalformedInputError
from .linalg import Norm


def load_defaults() -> dict:
    text = resources.files("speclab").joinpath("defaults.json").read_text(encoding="utf-8")
    return json.loads(text)


@dataclass
class RunConfig:
    command: str = "verify"
    inputs: list = field(default_factory=list)
    vector: str | None = None
    pair: str | None = None
    suite: str | None = None
    norm: str = "l2"
    alpha: float | None = None
    seed: int = 12648430
    t_max: float = 200.0
    step: float = 0.05
    derivation_step: float = 0.1
    n_max: int = 50
    K: int = 5000
    cluster_tol: float = 1e-8
    defective_cluster_tol: float = 1e-3
    quad_tol: float = 1e-9
    inequality_slack: float = 0.0
    tolerances: dict = field(default_factory=dict)
    suite_sizes: dict = field(default_factory=dict)
    alphas: list = field(default_factory=lambda: [0.0, 0.3, 0.7])
    norms: list = field(default_factory=lambda: ["l1", "l2", "linf"])
    out: str | None = None
    format: str = "json"
    workers: int = 1

    def __post_init__(self):
        Norm.parse(self.norm)
        for n in self.norms:
            Norm.parse(n)
        bad = {k: v for k, v in self.tolerances.items() if not v > 0}
        if bad:
            raise MalformedInputError(f"tolerances must be > 0: {bad}")
        if not (self.t_max > 0 and self.step > 0 and self.t_max >= self.step):
            raise MalformedInputError("grid must be nonempty (t_max >= step > 0)")
        if self.n_max < 1 or self.K < 1:
            raise MalformedInputError("n_max and K must be >= 1")
        if self.inequality_slack < 0:
            raise MalformedInputError("inequality slack must be >= 0")
        if self.format not in ("json", "csv"):
            raise MalformedInputError(f"unknown format {self.format!r}")

    def tol(self, key: str) -> float:
        return float(self.tolerances[key])

    def size(self, suite: str) -> int:
        return int(self.suite_sizes[suite])

    def to_dict(self) -> dict:
        """Fields that determine results (paths and worker count excluded)."""
        keys = ("norm", "alpha", "seed", "t_max", "step", "derivation_step", "n_max", "K", "cluster_tol", "defective_cluster_tol",
                "quad_tol", "inequality_slack", "tolerances", "suite_sizes", "alphas", "norms")
        return {k: copy.deepcopy(getattr(self, k)) for k in keys}


def worker_cap() -> int:
    raw = os.environ.get("SPECLAB_WORKERS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise MalformedInputError(f"SPECLAB_WORKERS must be an integer, got {raw!r}") from exc
    return max(1, n)


def make_config(**overrides) -> RunConfig:
    base = load_defaults()
    base["workers"] = worker_cap()
    for k, v in overrides.items():
        if v is None:
            continue
        if k in ("tolerances", "suite_sizes"):
            base[k] = {**base[k], **v}
        else:
            base[k] = v
    return RunConfig(**base)
