"""Configuration loading for wedgecasimir."""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple

from .errors import ConfigError, InputError
from .geometry import Medium, UnitSystem
from .quadrature import ExtrapolationSpec, QuadratureSpec

log = logging.getLogger(__name__)

CONFIG_DIR = Path.home() / ".wedgecasimir"
CONFIG_FILE = CONFIG_DIR / "config.json"

OUTPUT_FORMATS = ("table", "csv", "json")

DEFAULT_CONFIG: dict = {
    "eps": 1.0,
    "mu": 1.0,
    "units": "natural",
    "format": "table",
    "rel_tol": 1e-9,
    "abs_tol": 1e-14,
    "tail_cutoff_scale": 60.0,
    "max_subdivisions": 200,
    "splittings": [0.2, 0.1, 0.05, 0.025],
    "richardson_order": 2,
    "extrapolation_tol": 1e-5,
    "workers": 1,
    "p_max": 50,
}


@dataclass
class Config:
    eps: float
    mu: float
    units: str
    format: str
    rel_tol: float
    abs_tol: float
    tail_cutoff_scale: float
    max_subdivisions: int
    splittings: Tuple[float, ...]
    richardson_order: int
    extrapolation_tol: float
    workers: int
    p_max: int

    def medium(self) -> Medium:
        return Medium(self.eps, self.mu)

    def unit_system(self) -> UnitSystem:
        return UnitSystem(self.units)

    def quadrature_spec(self) -> QuadratureSpec:
        return QuadratureSpec(
            rel_tol=self.rel_tol,
            abs_tol=self.abs_tol,
            tail_cutoff_scale=self.tail_cutoff_scale,
            max_subdivisions=self.max_subdivisions,
        )

    def extrapolation_spec(self) -> ExtrapolationSpec:
        return ExtrapolationSpec(
            splittings=self.splittings,
            order=self.richardson_order,
            tol=self.extrapolation_tol,
            abs_tol=self.abs_tol,
        )


def _read(path: Path) -> dict:
    try:
        with open(path) as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: not valid JSON ({e})") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    return data


def load_config(path: Optional[Path] = None) -> Config:
    """Load config from ~/.wedgecasimir/config.json (created with defaults if
    absent) or from an explicit path, which must exist."""
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file {path} does not exist")
        data = _read(path)
    else:
        CONFIG_DIR.mkdir(parents=True, exist_ok=True)
        path = CONFIG_FILE
        if not path.exists():
            with open(path, "w") as f:
                json.dump(DEFAULT_CONFIG, f, indent=2)
            log.info("Created default config at %s", path)
            data = DEFAULT_CONFIG.copy()
        else:
            data = _read(path)

    unknown = sorted(set(data) - set(DEFAULT_CONFIG))
    if unknown:
        log.warning("Ignoring unknown config keys in %s: %s", path, ", ".join(unknown))
    # Fill in any missing keys with defaults
    for k, v in DEFAULT_CONFIG.items():
        data.setdefault(k, v)

    try:
        cfg = Config(
            eps=float(data["eps"]),
            mu=float(data["mu"]),
            units=str(data["units"]).lower(),
            format=str(data["format"]).lower(),
            rel_tol=float(data["rel_tol"]),
            abs_tol=float(data["abs_tol"]),
            tail_cutoff_scale=float(data["tail_cutoff_scale"]),
            max_subdivisions=int(data["max_subdivisions"]),
            splittings=tuple(float(s) for s in data["splittings"]),
            richardson_order=int(data["richardson_order"]),
            extrapolation_tol=float(data["extrapolation_tol"]),
            workers=int(data["workers"]),
            p_max=int(data["p_max"]),
        )
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{path}: bad value ({e})") from e

    if cfg.units not in {u.value for u in UnitSystem}:
        raise ConfigError(f"{path}: unknown units {cfg.units!r}")
    if cfg.format not in OUTPUT_FORMATS:
        raise ConfigError(f"{path}: unknown format {cfg.format!r}")
    if cfg.workers < 1:
        raise ConfigError(f"{path}: workers must be >= 1")
    try:
        cfg.medium()
        cfg.quadrature_spec()
        cfg.extrapolation_spec()
    except InputError as e:
        raise ConfigError(f"{path}: {e}") from e
    return cfg
