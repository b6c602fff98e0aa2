"""Run configuration: a flat YAML mapping of named fields with defaults.

Every key is optional. Missing keys take the defaults below, which
reproduce the reference setup: 10 MHz bandwidth at -160 dBm/Hz
(i.e. -90 dBm noise), eta = 0.8, a two-element half-wavelength ULA at
source and relay, -60 dB source-relay and relay-destination path loss,
-15 dB loop path loss, and departure angles of 10 and 5 degrees.
"""

import math
from dataclasses import asdict, dataclass, field, fields

import yaml

from .channels import GeometryConfig, dbm_to_watts
from .link_model import SystemParams
from .oracle import GridSpec


class ConfigError(ValueError):
    """Raised for unreadable or invalid configuration files."""


@dataclass(frozen=True)
class SweepRange:
    ps_dbm_start: float = 20.0
    ps_dbm_stop: float = 50.0
    ps_dbm_step: float = 1.0

    def __post_init__(self):
        if not self.ps_dbm_step > 0:
            raise ConfigError(f"ps_dbm_step must be > 0, got {self.ps_dbm_step}")
        if self.ps_dbm_start > self.ps_dbm_stop:
            raise ConfigError(
                f"ps_dbm_start ({self.ps_dbm_start}) must not exceed ps_dbm_stop ({self.ps_dbm_stop})"
            )

    def points(self):
        """Source powers in dBm, ascending, stop included when on the grid."""
        n = int(math.floor((self.ps_dbm_stop - self.ps_dbm_start) / self.ps_dbm_step + 1e-9)) + 1
        return [round(self.ps_dbm_start + i * self.ps_dbm_step, 12) for i in range(n)]


@dataclass(frozen=True)
class RunConfig:
    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    ps_dbm: float = 30.0
    sigma_r2_dbm: float = -90.0
    sigma_d2_dbm: float = -90.0
    eta: float = 0.8
    t_block: float = 1.0
    bandwidth_hz: float = 10e6
    noise_psd_dbm_hz: float = -160.0
    sweep: SweepRange = field(default_factory=SweepRange)
    bisection_tol: float = 1e-12
    grid: GridSpec = field(default_factory=GridSpec)
    output_path: str = ""

    def system_params(self, ps_dbm=None):
        """:class:`SystemParams` in watts, at `ps_dbm` or the configured single point."""
        ps_dbm = self.ps_dbm if ps_dbm is None else ps_dbm
        return SystemParams(
            ps=float(dbm_to_watts(ps_dbm)),
            sigma_r2=float(dbm_to_watts(self.sigma_r2_dbm)),
            sigma_d2=float(dbm_to_watts(self.sigma_d2_dbm)),
            eta=self.eta,
            t_block=self.t_block,
        )

    def to_flat_dict(self):
        out = {}
        for key, value in asdict(self).items():
            if isinstance(value, dict):
                out.update(value)
            else:
                out[key] = value
        return out


_SECTIONS = {"geometry": GeometryConfig, "sweep": SweepRange, "grid": GridSpec}
_TOP = [f.name for f in fields(RunConfig) if f.name not in _SECTIONS]
_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig) if f.name in _TOP}
for _cls in _SECTIONS.values():
    _FIELD_TYPES.update({f.name: f.type for f in fields(_cls)})


def _coerce(key, value):
    kind = _FIELD_TYPES[key]
    kind = kind if isinstance(kind, str) else kind.__name__
    try:
        if kind == "int":
            if isinstance(value, bool) or not float(value).is_integer():
                raise ValueError("not an integer")
            return int(value)
        if kind == "float":
            if isinstance(value, bool):
                raise ValueError("not a number")
            return float(value)
        if kind == "str":
            return "" if value is None else str(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"field '{key}': cannot use {value!r} ({exc})") from None
    return value


def config_from_mapping(mapping):
    """Build a :class:`RunConfig` from a flat mapping, filling defaults."""
    mapping = dict(mapping or {})
    unknown = sorted(set(mapping) - set(_FIELD_TYPES))
    if unknown:
        raise ConfigError(f"unknown field(s): {', '.join(unknown)}")
    values = {k: _coerce(k, v) for k, v in mapping.items()}
    try:
        sections = {
            name: cls(**{f.name: values[f.name] for f in fields(cls) if f.name in values})
            for name, cls in _SECTIONS.items()
        }
        top = {k: values[k] for k in _TOP if k in values}
        config = RunConfig(**sections, **top)
        config.system_params()
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    if not config.bisection_tol > 0:
        raise ConfigError(f"bisection_tol must be > 0, got {config.bisection_tol}")
    return config


def load_config(path):
    """Read a flat YAML configuration file.

    An empty file gives the default configuration.

    Raises
    ------
    ConfigError
        On YAML syntax errors (with line and column), non-mapping
        documents, unknown keys, or values that violate a field's
        constraints.
    """
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        raise ConfigError(f"{path}: YAML parse error{where}: {getattr(exc, 'problem', exc)}") from None
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a key-value mapping, got {type(data).__name__}")
    return config_from_mapping(data)
