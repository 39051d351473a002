"""File-backed run configuration (JSON).

Schema::

    {
      "cminus": [re, im], "cplus": [re, im], "dminus": [re, im], "dplus": [re, im],
      "phi": float,            # coherent-state phase, also the Bell reference phase
      "nbar": float,           # mean photon number |alpha|^2
      "g": float,              # coupling, default 1
      "cutoff": int | null,    # Fock cutoff override
      "grid": null | {"re_min", "re_max", "im_min", "im_max", "n_re", "n_im"},
      "out": str | null        # default output path
    }

Defaults are the atomic amplitudes and ``alpha = sqrt(36.16) exp(1.37 i)``
used for the default Wigner snapshots.
"""

from __future__ import annotations

import dataclasses
import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .fock import AtomicState
from .wigner import GridSpec

log = logging.getLogger(__name__)

NORM_NOTICE_TOL = 1e-6

DEFAULT_AMPLITUDES = {
    "cminus": (0.5554, 0.0),
    "cplus": (0.3213, 0.5004),
    "dminus": (-0.2053, 0.3726),
    "dplus": (0.1046, 0.3819),
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    cminus: tuple[float, float] = DEFAULT_AMPLITUDES["cminus"]
    cplus: tuple[float, float] = DEFAULT_AMPLITUDES["cplus"]
    dminus: tuple[float, float] = DEFAULT_AMPLITUDES["dminus"]
    dplus: tuple[float, float] = DEFAULT_AMPLITUDES["dplus"]
    phi: float = 1.37
    nbar: float = 36.16
    g: float = 1.0
    cutoff: int | None = None
    grid: GridSpec | None = None
    out: str | None = None

    def __post_init__(self):
        for name in ("cminus", "cplus", "dminus", "dplus"):
            value = getattr(self, name)
            if len(value) != 2 or not all(math.isfinite(float(x)) for x in value):
                raise ConfigError(f"{name} must be a pair of finite reals [re, im]")
            object.__setattr__(self, name, (float(value[0]), float(value[1])))
        if not self.nbar >= 0:
            raise ConfigError("nbar must be non-negative")
        if not self.g > 0:
            raise ConfigError("g must be positive")
        if self.cutoff is not None and int(self.cutoff) < 1:
            raise ConfigError("cutoff must be a positive integer")
        if self.amplitude_norm == 0:
            raise ConfigError("atomic amplitudes are all zero")

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array(
            [complex(*getattr(self, k)) for k in ("cminus", "cplus", "dminus", "dplus")]
        )

    @property
    def amplitude_norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    @property
    def alpha(self) -> complex:
        return math.sqrt(self.nbar) * complex(math.cos(self.phi), math.sin(self.phi))

    def atom(self) -> AtomicState:
        """Normalized atomic state; renormalization is reported when it is not a no-op."""
        norm = self.amplitude_norm
        if abs(norm - 1.0) > NORM_NOTICE_TOL:
            log.warning("atomic amplitudes have norm %.8f; renormalizing", norm)
        return AtomicState(*(self.amplitudes / norm), phi=self.phi)

    def grid_spec(self) -> GridSpec:
        return self.grid if self.grid is not None else GridSpec.default(self.nbar)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        for k in ("cminus", "cplus", "dminus", "dplus"):
            d[k] = list(d[k])
        return d

    @classmethod
    def from_dict(cls, data: dict) -> RunConfig:
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        data = dict(data)
        grid = data.get("grid")
        if grid is not None:
            try:
                data["grid"] = GridSpec(**grid)
            except TypeError as exc:
                raise ConfigError(f"bad grid spec: {exc}") from None
        for k in ("cminus", "cplus", "dminus", "dplus"):
            if k in data:
                data[k] = tuple(data[k])
        try:
            return cls(**data)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None


def load_config(path) -> RunConfig:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return RunConfig.from_dict(data)


def dump_config(config: RunConfig, path) -> None:
    Path(path).write_text(json.dumps(config.to_dict(), indent=2, sort_keys=True) + "\n")
