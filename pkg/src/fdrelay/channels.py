"""Deterministic line-of-sight channels and dB/linear conversions.

All powers are handled in watts inside the library; dB and dBm only
appear at the configuration boundary.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from ._validation import as_complex_vector, check_positive_int, check_scalar
from .exceptions import DegenerateChannelError


def db_to_linear(x):
    """Convert a power ratio in dB to linear scale. ``-inf`` maps to 0."""
    return np.power(10.0, np.divide(x, 10.0))


def linear_to_db(x):
    """Convert a linear power ratio to dB."""
    return 10.0 * np.log10(x)


def dbm_to_watts(x):
    """Convert an absolute power in dBm to watts."""
    return db_to_linear(np.subtract(x, 30.0))


def watts_to_dbm(x):
    return linear_to_db(x) + 30.0


def _path_gain(path_loss_db):
    # -inf dB is an explicit "no path" sentinel and gives an exact zero
    if path_loss_db == -np.inf:
        return 0.0
    return np.sqrt(db_to_linear(check_scalar(path_loss_db, "path_loss_db")))


def make_los_channel(n, d_over_lambda, aod_deg, path_loss_db):
    """Line-of-sight channel of an `n`-element uniform linear array.

    Entry ``k`` is ``sqrt(beta) * exp(j 2 pi (d/lambda) k sin(aod))``.

    Parameters
    ----------
    n : int
        Number of array elements.
    d_over_lambda : float
        Element spacing in carrier wavelengths.
    aod_deg : float
        Angle of departure in degrees.
    path_loss_db : float
        Path loss in dB (typically negative).

    Returns
    -------
    ndarray of complex, shape (n,)
    """
    n = check_positive_int(n, "n")
    d_over_lambda = check_scalar(d_over_lambda, "d_over_lambda", low=0.0, low_inclusive=False)
    aod = np.deg2rad(check_scalar(aod_deg, "aod_deg"))
    k = np.arange(n)
    return _path_gain(path_loss_db) * np.exp(1j * 2.0 * np.pi * d_over_lambda * k * np.sin(aod))


def make_loop_channel(n, beta_rr_db):
    """Flat loop channel ``sqrt(beta_rr) * [1, ..., 1]``.

    Pass ``-inf`` for `beta_rr_db` to get an exact zero vector (no loop path).
    """
    n = check_positive_int(n, "n")
    return np.full(n, _path_gain(beta_rr_db), dtype=np.complex128)


def effective_angle_cos(f, g):
    """Cosine of the effective angle between the loop channel `f` and `g`.

    Returns ``|f^H g| / (||f|| ||g||)``, clipped to [0, 1]. A zero `f`
    gives 0 so that downstream formulas reduce to the no-recycling case.
    """
    f = as_complex_vector(f, "f")
    g = as_complex_vector(g, "g", allow_zero=False)
    if f.shape != g.shape:
        raise ValueError(f"f and g must have the same length, got {f.size} and {g.size}")
    nf = np.linalg.norm(f)
    if nf == 0.0:
        return 0.0
    return float(min(1.0, abs(np.vdot(f, g)) / (nf * np.linalg.norm(g))))


@dataclass(frozen=True)
class GeometryConfig:
    """Antenna geometry and path losses used to build a :class:`ChannelSet`."""

    num_source_antennas: int = 2
    num_relay_tx_antennas: int = 2
    element_spacing_over_wavelength: float = 0.5
    aod_h: float = 10.0
    aod_g: float = 5.0
    beta_sr: float = -60.0
    beta_rd: float = -60.0
    beta_rr: float = -15.0

    def __post_init__(self):
        check_positive_int(self.num_source_antennas, "num_source_antennas")
        check_positive_int(self.num_relay_tx_antennas, "num_relay_tx_antennas")
        check_scalar(self.element_spacing_over_wavelength, "element_spacing_over_wavelength",
                     low=0.0, low_inclusive=False)
        check_scalar(self.aod_h, "aod_h")
        check_scalar(self.aod_g, "aod_g")
        for name in ("beta_sr", "beta_rd", "beta_rr"):
            value = getattr(self, name)
            if name == "beta_rr" and value == -np.inf:
                continue
            if check_scalar(value, name) > 0:
                warnings.warn(f"{name} = {value} dB is a gain, not a loss", stacklevel=3)


@dataclass(frozen=True)
class ChannelSet:
    """Source-relay channel `h`, relay-destination channel `g` and loop channel `f`."""

    h: np.ndarray
    g: np.ndarray
    f: np.ndarray

    def __post_init__(self):
        h = as_complex_vector(self.h, "h")
        g = as_complex_vector(self.g, "g")
        f = as_complex_vector(self.f, "f")
        for name, arr in (("h", h), ("g", g)):
            if not np.any(arr):
                raise DegenerateChannelError(f"channel {name} is zero")
        if f.shape != g.shape:
            raise ValueError(f"f and g must have the same length, got {f.size} and {g.size}")
        for name, arr in (("h", h), ("g", g), ("f", f)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def num_relay_tx_antennas(self):
        return self.g.size

    @classmethod
    def from_geometry(cls, geometry):
        """Build the three line-of-sight channels described by `geometry`."""
        d = geometry.element_spacing_over_wavelength
        h = make_los_channel(geometry.num_source_antennas, d, geometry.aod_h, geometry.beta_sr)
        g = make_los_channel(geometry.num_relay_tx_antennas, d, geometry.aod_g, geometry.beta_rd)
        f = make_loop_channel(geometry.num_relay_tx_antennas, geometry.beta_rr)
        return cls(h=h, g=g, f=f)
