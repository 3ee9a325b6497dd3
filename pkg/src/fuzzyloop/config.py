"""Run configuration and report records for the batch runner."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, asdict
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional

from .errors import ConfigError

DEFAULT_K_LIST = [2, 4, 8, 16, 32, 64, 128]
ASYMPTOTIC_K_LIST = [8, 16, 32, 64, 128]

DEFAULT_TOLERANCES: Dict[str, float] = {
    "slope_lo": -1.3,
    "slope_hi": -0.7,
    "norm_bound_slack": 1e-9,
    "float_match_rel": 1e-12,
    "positivity_floor": 1e-10,
    "pointwise_eval": 1e-10,
    "reality_imag": 1e-10,
}

DEFAULT_SWEEP_SETS = [
    {
        "name": "su2-pair",
        "twisted": False,
        "F": [
            {"n": 1, "l": 1, "m": 0, "re": "1/2", "im": "0"},
            {"n": -1, "l": 1, "m": 0, "re": "1/2", "im": "0"},
        ],
        "G": [
            {"n": 1, "l": 1, "m": 0, "re": "0", "im": "-1/2"},
            {"n": -1, "l": 1, "m": 0, "re": "0", "im": "1/2"},
        ],
    },
    {
        "name": "l2-pair",
        "twisted": False,
        "F": [
            {"n": 1, "l": 2, "m": 0, "re": "1/2", "im": "0"},
            {"n": -1, "l": 2, "m": 0, "re": "1/2", "im": "0"},
        ],
        "G": [
            {"n": 1, "l": 2, "m": 0, "re": "0", "im": "-1/2"},
            {"n": -1, "l": 2, "m": 0, "re": "0", "im": "1/2"},
        ],
    },
    {
        "name": "twisted-pair",
        "twisted": True,
        "F": [
            {"n": 1, "l": 2, "m": 0, "re": "1/2", "im": "0"},
            {"n": -1, "l": 2, "m": 0, "re": "1/2", "im": "0"},
        ],
        "G": [
            {"n": 1, "l": 2, "m": 0, "re": "0", "im": "-1/2"},
            {"n": -1, "l": 2, "m": 0, "re": "0", "im": "1/2"},
            {"n": 2, "l": 3, "m": 1, "re": "1/4", "im": "0"},
            {"n": -2, "l": 3, "m": 1, "re": "1/4", "im": "0"},
        ],
    },
]


@dataclass
class RunConfig:
    lmax: int = 8
    span: int = 8
    k_list: List[int] = field(default_factory=lambda: list(DEFAULT_K_LIST))
    exact_k_max: int = 12
    tolerances: Dict[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    out_dir: str = "out"
    twist: bool = True
    timing: bool = False
    jobs: int = 1
    sweeps: List[dict] = field(default_factory=lambda: [dict(s) for s in DEFAULT_SWEEP_SETS])

    def validate(self) -> "RunConfig":
        if self.lmax < 1:
            raise ConfigError(f"lmax must be >= 1, got {self.lmax}")
        if self.span < 1:
            raise ConfigError(f"span must be >= 1, got {self.span}")
        if not self.k_list:
            raise ConfigError("k_list must not be empty")
        if any(k < 1 for k in self.k_list):
            raise ConfigError("k_list entries must be >= 1")
        if sorted(self.k_list) != list(self.k_list):
            raise ConfigError("k_list must be sorted ascending")
        if self.exact_k_max < 1:
            raise ConfigError("exact_k_max must be >= 1")
        for name, tol in self.tolerances.items():
            if name.startswith("slope"):
                continue
            if tol <= 0:
                raise ConfigError(f"tolerance {name} must be positive, got {tol}")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        return self

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**data)
        # merge user tolerances over the defaults
        tol = dict(DEFAULT_TOLERANCES)
        tol.update(cfg.tolerances)
        cfg.tolerances = tol
        return cfg.validate()

    def with_overrides(self, **kw) -> "RunConfig":
        data = asdict(self)
        for key, val in kw.items():
            if val is not None:
                data[key] = val
        return RunConfig.from_dict(data)

    def cache_dir(self) -> Path:
        env = os.environ.get("FUZZYLOOP_CACHE_DIR")
        if env:
            return Path(env)
        return Path(self.out_dir) / "cache"


@dataclass
class ReportEntry:
    """One verification check with measured/expected values.

    Status is "fail" exactly when the measured value misses the expected one
    beyond the tolerance (or mismatches at all for exact checks); "warn" is
    reserved for soft instrumentation, "skip" for disabled groups.
    """

    check_id: str
    status: str
    measured: str
    expected: str
    tolerance: str
    anchor: str

    def to_dict(self) -> dict:
        return asdict(self)

    def line(self) -> str:
        mark = {"pass": "PASS", "fail": "FAIL", "warn": "WARN", "skip": "SKIP"}[self.status]
        return f"[{mark}] {self.check_id}: measured={self.measured} expected={self.expected} tol={self.tolerance} ({self.anchor})"
