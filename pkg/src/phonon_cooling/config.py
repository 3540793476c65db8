"""Sweep configuration: flat ``key = value`` text files or JSON."""
from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .coeffs import CROSS_CONVENTIONS
from .errors import ConfigError
from .liouville.operators import FockConfig
from .params import SystemParams, fig2_params

MODELS = ("moments", "secular", "reduced-oracle", "secular-oracle", "full-oracle")
SWEEP_VARIABLES = ("Delta1", "nbar", "Omega", "lambda", "g")
FORMATS = ("csv", "json")
PARAM_KEYS = tuple(SystemParams().as_dict())


@dataclass(frozen=True)
class SweepConfig:
    base: SystemParams
    sweep_variable: str = "Delta1"
    start: float = -65.0
    stop: float = -35.0
    count: int = 301
    models: tuple = ("moments", "secular")
    # None: oracles pick truncations per point
    fock: FockConfig | None = None
    output_path: str | None = None
    format: str = "csv"
    cross_convention: str = "conjugate"

    def __post_init__(self):
        if self.sweep_variable not in SWEEP_VARIABLES:
            raise ConfigError(f"sweep_variable must be one of {SWEEP_VARIABLES}")
        if int(self.count) != self.count or self.count < 2:
            raise ConfigError("count must be an integer >= 2")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ConfigError("sweep bounds must be finite")
        if not self.models:
            raise ConfigError("at least one model must be selected")
        bad = [m for m in self.models if m not in MODELS]
        if bad:
            raise ConfigError(f"unknown models {bad}; choose from {MODELS}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")
        if self.cross_convention not in CROSS_CONVENTIONS:
            raise ConfigError(f"cross_convention must be one of {CROSS_CONVENTIONS}")

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, int(self.count))

    def point(self, value: float) -> SystemParams:
        return self.base.replace(**{self.sweep_variable: float(value)})

    def replace(self, **changes) -> "SweepConfig":
        return dataclasses.replace(self, **changes)

    def to_mapping(self) -> dict:
        out = dict(self.base.as_dict())
        out.update(sweep_variable=self.sweep_variable, start=self.start, stop=self.stop,
                   count=int(self.count), models=",".join(self.models), format=self.format,
                   cross_convention=self.cross_convention)
        if self.fock is not None:
            out.update(n_photon_max=self.fock.n_photon_max,
                       n_phonon_max=self.fock.n_phonon_max, tail_tol=self.fock.tail_tol)
        if self.output_path is not None:
            out["output_path"] = self.output_path
        return out

    @classmethod
    def from_mapping(cls, data: dict) -> "SweepConfig":
        """Missing physical parameters default to the reference set."""
        data = dict(data)
        try:
            given = {k: float(data.pop(k)) for k in PARAM_KEYS if k in data}
            base = fig2_params().replace(**given)
            kwargs = {}
            for key, conv in (("sweep_variable", str), ("start", float), ("stop", float),
                              ("count", int), ("format", str), ("output_path", str),
                              ("cross_convention", str)):
                if key in data:
                    kwargs[key] = conv(data.pop(key))
            if "models" in data:
                kwargs["models"] = parse_models(data.pop("models"))
            fock_keys = ("n_photon_max", "n_phonon_max", "tail_tol")
            if any(k in data for k in fock_keys):
                fk = {k: data.pop(k) for k in fock_keys if k in data}
                kwargs["fock"] = FockConfig(
                    n_photon_max=int(fk.get("n_photon_max", 6)),
                    n_phonon_max=int(fk.get("n_phonon_max", 40)),
                    tail_tol=float(fk.get("tail_tol", 1e-8)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        if data:
            raise ConfigError(f"unknown config keys: {sorted(data)}")
        return cls(base=base, **kwargs)


def parse_models(value) -> tuple:
    if isinstance(value, str):
        value = [v.strip() for v in value.split(",")]
    return tuple(v for v in value if v)


def _coerce(text: str):
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def parse_text(text: str) -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        out[key] = _coerce(value)
    return out


def dump_text(cfg: SweepConfig) -> str:
    lines = []
    for key, value in cfg.to_mapping().items():
        lines.append(f"{key} = {value!r}" if isinstance(value, float) else f"{key} = {value}")
    return "\n".join(lines) + "\n"


def load_config(path) -> SweepConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    if path.suffix.lower() == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: top level must be an object")
    else:
        data = parse_text(text)
    return SweepConfig.from_mapping(data)


def save_config(cfg: SweepConfig, path) -> None:
    path = Path(path)
    if path.suffix.lower() == ".json":
        path.write_text(json.dumps(cfg.to_mapping(), indent=2) + "\n")
    else:
        path.write_text(dump_text(cfg))


def fig23_preset(nbar: float = 10.0) -> SweepConfig:
    """Delta1 sweep over [-65, -35] with 301 points for the reference parameter set."""
    return SweepConfig(base=fig2_params(nbar=float(nbar)), sweep_variable="Delta1",
                       start=-65.0, stop=-35.0, count=301, models=("moments", "secular"))
