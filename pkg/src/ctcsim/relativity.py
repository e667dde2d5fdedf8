"""Relativistic formulas: Unruh and Hawking temperatures, Rindler coordinates,
the Rindler-mode expansion of the Minkowski vacuum, Schwarzschild clock rates
and Morris-Thorne wormhole transit.

Rindler and vacuum-mode functions use natural units (c = 1). Temperatures,
masses and the wormhole use SI units via :class:`PhysicalConstants`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .exceptions import InvalidStateError
from .quantum import DensityOperator, PureState, von_neumann_entropy

TAIL_WARN = 1e-9
DEFAULT_N_MAX = 60
TIDAL_LENGTH = 1e8  # metres


class TruncationWarning(UserWarning):
    """The truncated mode expansion discards noticeable probability mass."""


class HorizonError(ValueError):
    """Radius at or inside the Schwarzschild horizon."""


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float
    k_boltzmann: float
    c: float
    G: float

    def __post_init__(self):
        for name in ("hbar", "k_boltzmann", "c", "G"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


CODATA2018 = PhysicalConstants(
    hbar=1.054571817e-34,
    k_boltzmann=1.380649e-23,
    c=299_792_458.0,
    G=6.67430e-11,
)


def _positive(value: float, name: str) -> float:
    value = float(value)
    if not value > 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def unruh_temperature(a: float, constants: PhysicalConstants = CODATA2018) -> float:
    """Temperature (K) seen by an observer with proper acceleration ``a`` (m/s^2)."""
    a = _positive(a, "acceleration")
    k = constants
    return a * k.hbar / (2.0 * math.pi * k.k_boltzmann * k.c)


def unruh_acceleration(T: float, constants: PhysicalConstants = CODATA2018) -> float:
    """Acceleration (m/s^2) whose Unruh temperature is ``T`` (K)."""
    T = _positive(T, "temperature")
    k = constants
    return 2.0 * math.pi * k.k_boltzmann * k.c * T / k.hbar


def hawking_temperature(M: float, constants: PhysicalConstants = CODATA2018) -> float:
    """Hawking temperature (K) of a black hole of mass ``M`` (kg)."""
    M = _positive(M, "mass")
    k = constants
    return k.hbar * k.c**3 / (8.0 * math.pi * k.G * M * k.k_boltzmann)


def geometric_mass(M: float, constants: PhysicalConstants = CODATA2018) -> float:
    """Mass in metres, ``G M / c^2``."""
    return constants.G * _positive(M, "mass") / constants.c**2


def rindler_to_minkowski(eta: float, xi: float, a: float, wedge: str = "right") -> tuple[float, float]:
    """Minkowski ``(t, z)`` of Rindler coordinates ``(eta, xi)`` (c = 1)."""
    a = _positive(a, "a")
    r = math.exp(a * xi) / a
    t, z = r * math.sinh(a * eta), r * math.cosh(a * eta)
    if wedge == "right":
        return t, z
    if wedge == "left":
        return -t, -z
    raise ValueError(f"wedge must be 'right' or 'left', got {wedge!r}")


def bose_occupation(omega_over_a: float) -> float:
    """Thermal mean occupation ``1 / (exp(2 pi omega / a) - 1)``."""
    return 1.0 / math.expm1(2.0 * math.pi * _positive(omega_over_a, "omega_over_a"))


def unruh_occupation(omega: float, a: float, constants: PhysicalConstants = CODATA2018) -> float:
    """Bose factor at the Unruh temperature for angular frequency ``omega`` (rad/s)."""
    T = unruh_temperature(a, constants)
    return 1.0 / math.expm1(constants.hbar * _positive(omega, "omega") / (constants.k_boltzmann * T))


def thermal_distribution(omega_over_a: float, n_max: int) -> np.ndarray:
    """Closed-form geometric occupation probabilities ``(1 - q^2) q^(2n)``, n <= n_max."""
    q2 = math.exp(-2.0 * math.pi * _positive(omega_over_a, "omega_over_a"))
    n = np.arange(n_max + 1)
    return (1.0 - q2) * q2**n


def thermal_entropy_bits(nbar: float) -> float:
    """``(n+1) log2(n+1) - n log2 n`` for mean occupation ``n``."""
    if nbar <= 0.0:
        return 0.0
    return (nbar + 1.0) * math.log2(nbar + 1.0) - nbar * math.log2(nbar)


@dataclass(frozen=True)
class TwoModeSqueezedState:
    """One frequency of the Minkowski vacuum in right/left Rindler modes.

    Amplitudes ``c q^n`` on ``|n>_R |n>_L`` for ``n = 0..n_max``, with
    ``q = exp(-pi omega / a)`` and ``c`` fixed by unit norm after
    truncation. ``tail_mass`` is the probability the truncation discards.
    """

    q: float
    n_max: int
    amplitudes: np.ndarray
    tail_mass: float

    def __post_init__(self):
        if not 0.0 <= self.q < 1.0:
            raise InvalidStateError(f"Boltzmann weight q must lie in [0, 1), got {self.q}")

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def state_vector(self) -> PureState:
        """Joint state on (n_max+1) x (n_max+1) right/left Fock levels."""
        d = self.n_max + 1
        psi = np.zeros(d * d, dtype=np.complex128)
        psi[np.arange(d) * (d + 1)] = self.amplitudes
        return PureState.normalized(psi, (d, d))

    def reduced_state(self) -> DensityOperator:
        """Single-wedge state; diagonal by construction of the Schmidt form."""
        d = self.n_max + 1
        return DensityOperator.from_numerical(np.diag(self.probabilities).astype(np.complex128), (d,))

    def mean_occupation(self) -> float:
        return float(np.dot(np.arange(self.n_max + 1), self.probabilities))

    def entanglement_entropy(self) -> float:
        """Entropy (bits) of either wedge."""
        return von_neumann_entropy(self.reduced_state())


def vacuum_mode_state(omega_over_a: float, n_max: int = DEFAULT_N_MAX) -> TwoModeSqueezedState:
    """Truncated Rindler expansion of one vacuum mode of frequency ratio ``omega/a``."""
    omega_over_a = _positive(omega_over_a, "omega_over_a")
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    q = math.exp(-math.pi * omega_over_a)
    amps = q ** np.arange(n_max + 1, dtype=float)
    amps = amps / np.linalg.norm(amps)
    tail = q ** (2 * (n_max + 1))
    if tail > TAIL_WARN:
        warnings.warn(
            f"truncation at n_max={n_max} discards probability {tail:.2e}",
            TruncationWarning,
            stacklevel=2,
        )
    return TwoModeSqueezedState(q, n_max, amps, tail)


def schwarzschild_dilation(M_geometric: float, r: float) -> float:
    """Proper-time rate ``sqrt(1 - 2M/r)`` of a static clock at radius ``r``."""
    M = _positive(M_geometric, "M_geometric")
    r = float(r)
    if r <= 2.0 * M:
        raise HorizonError(f"r = {r} is not outside the horizon r = 2M = {2.0 * M}")
    return math.sqrt(1.0 - 2.0 * M / r)


@dataclass(frozen=True)
class WormholeGeometry:
    b0: float  # throat radius, m
    a0: float  # transition-shell thickness, m
    v: float  # radial speed, m/s

    def __post_init__(self):
        if not (self.b0 > 0 and self.a0 > 0):
            raise ValueError("b0 and a0 must be positive")
        if not 0 < self.v < CODATA2018.c:
            raise ValueError("speed must satisfy 0 < v < c")

    def shape(self, r: float) -> float:
        """Shape function ``b(r)`` (zero red-shift solution)."""
        if r < self.b0:
            raise ValueError("r lies inside the throat")
        if r < self.b0 + self.a0:
            return self.b0 * (1.0 - (r - self.b0) / self.a0) ** 2
        return 0.0


class WormholeTransit(NamedTuple):
    tau: float  # seconds
    tidal_ok: bool
    lower_bound: float  # seconds


def wormhole_transit(g: WormholeGeometry, constants: PhysicalConstants = CODATA2018) -> WormholeTransit:
    """Transit time ``pi a0 / v``, the tidal check and the ``sqrt(a0/b0)`` s bound.

    The tidal check ``(v/c)^2 <= a0 b0 / (1e8 m)^2`` is evaluated as
    ``v <= tidal_speed_limit`` so it flips exactly at the computed limit. The
    bound is reported separately rather than folded into ``tau``.
    """
    tau = math.pi * g.a0 / g.v
    tidal_ok = g.v <= tidal_speed_limit(g.a0, g.b0, constants)
    return WormholeTransit(tau, tidal_ok, math.sqrt(g.a0 / g.b0))


def tidal_speed_limit(a0: float, b0: float, constants: PhysicalConstants = CODATA2018) -> float:
    """Largest speed (m/s) satisfying the tidal condition."""
    return constants.c * math.sqrt(a0 * b0) / TIDAL_LENGTH
