"""Spatial fringe assembly, Fourier-domain signals, and peak metrics.

The detected signal is the position-space ground-state population after the
cloud expands for the full interferometer time 2T. Rotation shows up as a
sinusoidal fringe riding the expansion envelope; its Fourier transform has
a central envelope peak and a side peak at the fringe wavenumber whose
height carries the sensitivity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.signal import find_peaks

from .constants import HBAR, AtomSpecies
from .errors import DetectionError, ResolutionError
from .interferometer import EvolvedState
from .quantum import MomentumGrid, MomentumWavefunction, momentum_to_position


@dataclass(frozen=True)
class InterferometerSignal:
    position: np.ndarray            # r axis [m]
    ground_population: np.ndarray   # <P_g(r)> density [1/m]
    expansion_time: float           # 2T [s]
    fourier_axis: np.ndarray | None = None       # k~ [1/m]
    fourier_amplitude: np.ndarray | None = None  # complex P~_g(k~)

    @property
    def position_spacing(self) -> float:
        return float(self.position[1] - self.position[0])

    def normalized(self) -> np.ndarray:
        """Spatial signal scaled to [0, 1] for display."""
        peak = float(self.ground_population.max())
        return self.ground_population / peak if peak > 0 else self.ground_population

    def write_spatial_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write("r_m,p_g\n")
            for r, p in zip(self.position, self.ground_population):
                f.write(f"{r:.17g},{p:.17g}\n")

    def write_fourier_csv(self, path) -> None:
        if self.fourier_amplitude is None:
            raise ValueError("fourier part not computed yet")
        with open(path, "w", encoding="utf-8") as f:
            f.write("ktilde_1_m,magnitude,re,im\n")
            for kt, a in zip(self.fourier_axis, self.fourier_amplitude):
                f.write(f"{kt:.17g},{abs(a):.17g},{a.real:.17g},{a.imag:.17g}\n")


def _ground_class_arrays(state) -> list:
    if isinstance(state, EvolvedState):
        return list(state.ground_classes.values())
    if isinstance(state, MomentumWavefunction):
        return [state.amplitudes]
    raise TypeError(f"unsupported state type {type(state).__name__}")


def _state_grid(state) -> MomentumGrid:
    return state.grid


def spatial_signal(states, weights, expansion_time: float,
                   species: AtomSpecies,
                   edge_power_limit: float = 1e-3) -> InterferometerSignal:
    """Ensemble-weighted spatial ground-state distribution,
    <P_g(r)> = sum_n w_n |F[psi_n(k) exp(-i hbar k^2 (2T) / 2m)]|^2.

    Momentum classes within one state add incoherently (imaging averages
    over the optical-wavelength beat between arm momenta). Raises
    ResolutionError when signal power reaches the spatial box edges.
    """
    states = list(states)
    weights = np.asarray(list(weights), dtype=float)
    if len(states) != len(weights):
        raise ValueError("states and weights must have equal length")
    if not math.isclose(float(weights.sum()), 1.0, rel_tol=1e-9):
        raise ValueError("weights must be normalized")
    if expansion_time < 0:
        raise ValueError("expansion time must be >= 0")
    grid = _state_grid(states[0])
    envelope = np.exp(-1j * HBAR * grid.k**2 * expansion_time / (2.0 * species.mass))
    total = np.zeros(grid.n_points)
    for w, state in zip(weights, states):
        if _state_grid(state) is not grid and _state_grid(state) != grid:
            raise ValueError("all states must share one grid")
        for amplitudes in _ground_class_arrays(state):
            psi_x = momentum_to_position(grid, amplitudes * envelope)
            total += w * np.abs(psi_x) ** 2

    edge = (total[:2].sum() + total[-2:].sum()) / max(total.sum(), 1e-300)
    if edge > edge_power_limit:
        raise ResolutionError(
            f"signal power fraction {edge:.2e} within 2 bins of the spatial "
            "boundary; the expanded cloud aliases (reduce the expansion time "
            "or refine the momentum grid)"
        )
    return InterferometerSignal(position=grid.x, ground_population=total,
                                expansion_time=expansion_time)


def fourier_signal(signal: InterferometerSignal) -> InterferometerSignal:
    """Attach the Fourier-domain signal P~_g(k~) = integral dr e^{-i k~ r} P_g(r).

    For a real spatial signal P~_g(-k~) = conj(P~_g(k~)); Parseval holds as
    sum |P|^2 dr = sum |P~|^2 dk~ / 2pi.
    """
    p = signal.ground_population
    if not np.all(np.isfinite(p)):
        raise ValueError("spatial signal must be finite")
    n = len(p)
    dx = signal.position_spacing
    amp = np.fft.fftshift(np.fft.fft(np.fft.ifftshift(p))) * dx
    dkt = 2.0 * math.pi / (n * dx)
    axis = dkt * (np.arange(n) - n // 2)
    return replace(signal, fourier_axis=axis, fourier_amplitude=amp)


@dataclass(frozen=True)
class PeakMetrics:
    height: float           # side-peak amplitude h (1/4 in the ideal case)
    width: float            # FWHM gamma [1/m]
    separation: float       # side-peak position = measured k_Omega [1/m]
    contrast: float         # 2h / central amplitude, clipped to [0, 1]
    spurious_ratio: float   # largest off-peak feature / h
    central_height: float

    def to_json_dict(self) -> dict:
        return {
            "height": self.height,
            "width_1_m": self.width,
            "separation_1_m": self.separation,
            "contrast": self.contrast,
            "spurious_ratio": self.spurious_ratio,
            "central_height": self.central_height,
        }


def _refine_peak(mag: np.ndarray, idx: int, axis: np.ndarray) -> tuple:
    """Parabolic sub-bin refinement of a local maximum."""
    if 0 < idx < len(mag) - 1:
        y0, y1, y2 = mag[idx - 1], mag[idx], mag[idx + 1]
        denom = y0 - 2.0 * y1 + y2
        if denom < 0:
            off = 0.5 * (y0 - y2) / denom
            spacing = axis[1] - axis[0]
            return axis[idx] + off * spacing, y1 - 0.25 * (y0 - y2) * off
    return axis[idx], mag[idx]


def _fwhm(mag: np.ndarray, idx: int, spacing: float) -> float:
    """Full width at half maximum by linear interpolation around idx."""
    half = mag[idx] / 2.0
    left = idx
    while left > 0 and mag[left] > half:
        left -= 1
    if mag[left] > half:
        return math.nan
    frac_l = (half - mag[left]) / (mag[left + 1] - mag[left])
    right = idx
    while right < len(mag) - 1 and mag[right] > half:
        right += 1
    if mag[right] > half:
        return math.nan
    frac_r = (half - mag[right]) / (mag[right - 1] - mag[right])
    return ((right - frac_r) - (left + frac_l)) * spacing


def peak_metrics(signal: InterferometerSignal, k_omega_hint: float,
                 noise_floor: float = 1e-6,
                 spurious_exclusion: float | None = None) -> PeakMetrics:
    """Locate the fringe side peak nearest the hint and measure it.

    spurious_exclusion is the half-width around the three main peaks
    (0 and +-k_Omega) ignored when searching for spurious features; it
    defaults to 5x the measured side-peak FWHM, which covers the envelope's
    own structure (for thermal ensembles the trap eigenstates imprint
    ripples on the envelope that are not pulse artifacts).
    """
    if signal.fourier_amplitude is None:
        signal = fourier_signal(signal)
    mag = np.abs(signal.fourier_amplitude)
    axis = signal.fourier_axis
    n = len(mag)
    center = n // 2
    spacing = axis[1] - axis[0]

    peaks, _ = find_peaks(mag)
    side_candidates = peaks[np.abs(peaks - center) > 1]
    if len(side_candidates) == 0:
        raise DetectionError("no side peak found in the Fourier signal")
    idx = side_candidates[int(np.argmin(np.abs(axis[side_candidates] - k_omega_hint)))]
    separation, height = _refine_peak(mag, idx, axis)
    if height < noise_floor:
        raise DetectionError(
            f"side peak amplitude {height:.2e} below noise floor {noise_floor:.0e}"
        )
    width = _fwhm(mag, idx, spacing)
    central = float(mag[center])
    contrast = min(1.0, 2.0 * height / central) if central > 0 else 0.0

    if spurious_exclusion is None:
        spurious_exclusion = 5.0 * width if math.isfinite(width) else 10 * spacing
    sep = abs(separation)
    spurious = 0.0
    for p in peaks:
        kp = axis[p]
        if min(abs(kp), abs(kp - sep), abs(kp + sep)) <= spurious_exclusion:
            continue
        spurious = max(spurious, float(mag[p]))
    return PeakMetrics(
        height=float(height),
        width=float(width),
        separation=float(abs(separation)),
        contrast=float(contrast),
        spurious_ratio=float(spurious / height),
        central_height=central,
    )


def apply_decay(value, gamma_eff: float, tau: float):
    """Scale fringe (side-peak) quantities by the coherent survival fraction
    exp(-Gamma_eff tau); the central (incoherent) peak is unaffected.

    Accepts a PeakMetrics (returns a scaled copy) or a bare height.
    """
    if gamma_eff < 0 or tau < 0:
        raise ValueError("gamma_eff and tau must be >= 0")
    survival = math.exp(-gamma_eff * tau)
    if isinstance(value, PeakMetrics):
        return replace(
            value,
            height=value.height * survival,
            contrast=min(1.0, value.contrast * survival),
        )
    return value * survival
