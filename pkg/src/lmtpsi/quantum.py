"""Momentum grids, harmonic-oscillator eigenstates, and thermal ensembles.

The trapped cloud is expanded over the trap's energy eigenstates; each
eigenstate is represented on a uniform 1D momentum grid and evolved
independently. All wavefunctions are normalized so that
sum |psi(k)|^2 dk = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import HBAR, KB, AtomSpecies
from .errors import ConfigError, ResolutionError

MAX_HERMITE_ORDER = 128


@dataclass(frozen=True)
class MomentumGrid:
    """Uniform symmetric momentum grid, FFT-friendly (even count, k=0 on grid)."""

    n_points: int
    spacing: float
    dimension: int = 1

    def __post_init__(self):
        if self.dimension != 1:
            raise ConfigError(
                f"grid dimension {self.dimension} not supported; only 1D grids "
                "are implemented"
            )
        if self.n_points < 2 or self.n_points % 2 != 0:
            raise ValueError("grid point count must be even and >= 2")
        if not (self.spacing > 0 and math.isfinite(self.spacing)):
            raise ValueError("grid spacing must be positive and finite")

    @classmethod
    def from_extent(cls, extent: float, n_points: int = 4096) -> "MomentumGrid":
        return cls(n_points=n_points, spacing=extent / (n_points - 1))

    @property
    def extent(self) -> float:
        return (self.n_points - 1) * self.spacing

    @property
    def k(self) -> np.ndarray:
        return self.spacing * (np.arange(self.n_points) - self.n_points // 2)

    @property
    def position_spacing(self) -> float:
        """Spacing of the conjugate position grid."""
        return 2.0 * math.pi / (self.n_points * self.spacing)

    @property
    def x(self) -> np.ndarray:
        return self.position_spacing * (np.arange(self.n_points) - self.n_points // 2)


def default_grid(species: AtomSpecies, trap_size: float, temperature: float,
                 n_points: int = 4096) -> MomentumGrid:
    """Default grid rule: extent 16/a or 8x the thermal wavenumber, whichever
    is larger."""
    extent = max(16.0 / trap_size, 8.0 * species.thermal_wavenumber(temperature))
    return MomentumGrid.from_extent(extent, n_points)


@dataclass(frozen=True)
class MomentumWavefunction:
    grid: MomentumGrid
    amplitudes: np.ndarray  # complex, one per grid point

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2) * self.grid.spacing)

    def write_csv(self, path) -> None:
        """Export as CSV rows of (k, Re psi, Im psi)."""
        with open(path, "w", encoding="utf-8") as f:
            f.write("k_1_m,re,im\n")
            for kv, av in zip(self.grid.k, self.amplitudes):
                f.write(f"{kv:.17g},{av.real:.17g},{av.imag:.17g}\n")


def hermite(n: int, x):
    """Physicists' Hermite polynomial H_n(x) via the three-term recurrence.

    Stable for moderate n; orders beyond MAX_HERMITE_ORDER are refused
    because the recurrence overflows double precision there.
    """
    if n < 0 or int(n) != n:
        raise ValueError("Hermite order must be a non-negative integer")
    if n > MAX_HERMITE_ORDER:
        raise ConfigError(f"Hermite order {n} beyond supported maximum {MAX_HERMITE_ORDER}")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * x
    for j in range(1, n):
        h, h_prev = 2.0 * x * h - 2.0 * j * h_prev, h
    return h if h.ndim else float(h)


def _hermite_function(n: int, x: np.ndarray) -> np.ndarray:
    """Normalized Hermite function H_n(x) exp(-x^2/2)/sqrt(2^n n! sqrt(pi)).

    Uses the normalized recurrence, which avoids overflow of 2^n n!.
    """
    phi_prev = np.pi ** -0.25 * np.exp(-0.5 * x**2)
    if n == 0:
        return phi_prev
    phi = math.sqrt(2.0) * x * phi_prev
    for j in range(1, n):
        phi, phi_prev = (
            x * math.sqrt(2.0 / (j + 1)) * phi - math.sqrt(j / (j + 1)) * phi_prev,
            phi,
        )
    return phi


def ho_momentum_eigenstate(n: int, trap_size: float,
                           grid: MomentumGrid) -> MomentumWavefunction:
    """Harmonic-trap eigenstate n in momentum space, proportional to
    H_n(k a) exp(-(k a)^2 / 2).

    Raises ResolutionError if the grid captures less than 0.999 of the norm.
    """
    if n > MAX_HERMITE_ORDER:
        raise ConfigError(f"eigenstate order {n} beyond supported maximum")
    k = grid.k
    psi = math.sqrt(trap_size) * _hermite_function(n, k * trap_size)
    captured = float(np.sum(psi**2) * grid.spacing)
    if captured < 0.999:
        raise ResolutionError(
            f"grid captures only {captured:.4f} of eigenstate n={n}; "
            "increase the grid extent"
        )
    return MomentumWavefunction(grid, (psi / math.sqrt(captured)).astype(complex))


def thermal_weights(trap_frequency: float, temperature: float, n_max: int,
                    mode: str = "linear-boltzmann", strict: bool = False) -> np.ndarray:
    """Normalized occupation weights of the trap eigenstates.

    mode "linear-boltzmann" uses exp(-hbar w (n+1/2) / kB T). Mode
    "paper-squared" exponentiates -[hbar w (n+1/2)]^2 / kB T instead; the
    exponent then carries units of energy, and evaluated in SI it is
    vanishingly small, so the weights come out nearly uniform. It exists
    only as a verbatim-reproduction mode.
    """
    if trap_frequency <= 0 or temperature <= 0:
        raise ValueError("trap frequency and temperature must be positive")
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    n = np.arange(n_max + 1, dtype=float)
    energy = HBAR * trap_frequency * (n + 0.5)
    if mode == "linear-boltzmann":
        log_w = -energy / (KB * temperature)
    elif mode == "paper-squared":
        log_w = -(energy**2) / (KB * temperature)
    else:
        raise ValueError(f"unknown weight mode {mode!r}")
    log_w -= log_w.max()
    w = np.exp(log_w)
    w /= w.sum()
    if strict and n_max > 0 and w[-1] > 1e-3 * w[0]:
        raise ConfigError(
            f"truncation at n_max={n_max} leaves tail weight "
            f"{w[-1] / w[0]:.2e} of w0 (strict mode limit is 1e-3); "
            "increase n_max or lower the temperature"
        )
    return w


@dataclass(frozen=True)
class ThermalEnsemble:
    """Harmonic-trap thermal ensemble: trap scale, temperature, and weights."""

    trap_frequency: float   # omega [rad/s]
    trap_size: float        # a = sqrt(hbar / m omega) [m]
    temperature: float      # [K]
    n_max: int
    weights: np.ndarray
    weight_mode: str = "linear-boltzmann"

    @classmethod
    def for_species(cls, species: AtomSpecies, temperature: float, n_max: int = 32,
                    trap_size: float | None = None,
                    trap_frequency: float | None = None,
                    weight_mode: str = "linear-boltzmann",
                    strict: bool = False) -> "ThermalEnsemble":
        """Build from either the trap size a or the trap frequency omega."""
        if (trap_size is None) == (trap_frequency is None):
            raise ValueError("specify exactly one of trap_size, trap_frequency")
        if trap_size is not None:
            trap_frequency = HBAR / (species.mass * trap_size**2)
        else:
            trap_size = math.sqrt(HBAR / (species.mass * trap_frequency))
        w = thermal_weights(trap_frequency, temperature, n_max, weight_mode, strict)
        return cls(trap_frequency, trap_size, temperature, n_max, w, weight_mode)

    @classmethod
    def point_source(cls, species: AtomSpecies, trap_size: float,
                     temperature: float = 1e-9) -> "ThermalEnsemble":
        """Single ground-state atom cloud of size a (pure-state limit)."""
        return cls.for_species(species, temperature, n_max=0, trap_size=trap_size)

    def eigenstates(self, grid: MomentumGrid):
        return [ho_momentum_eigenstate(n, self.trap_size, grid)
                for n in range(self.n_max + 1)]


def free_evolution_phase(grid: MomentumGrid, t: float, mass: float) -> np.ndarray:
    """Free kinetic phase factors exp(-i hbar k^2 t / 2m) on the grid."""
    if t < 0:
        raise ValueError("evolution time must be >= 0")
    return np.exp(-1j * HBAR * grid.k**2 * t / (2.0 * mass))


def momentum_to_position(grid: MomentumGrid, amplitudes: np.ndarray) -> np.ndarray:
    """Unitary transform to the conjugate position grid,
    psi(x) = (2pi)^(-1/2) integral psi(k) exp(ikx) dk.

    Parseval holds exactly: sum |psi(x)|^2 dx = sum |psi(k)|^2 dk.
    """
    n = grid.n_points
    shifted = np.fft.ifftshift(amplitudes)
    psi_x = np.fft.fftshift(np.fft.ifft(shifted)) * n * grid.spacing / math.sqrt(2.0 * math.pi)
    return psi_x
