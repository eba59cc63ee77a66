"""Three-level Raman physics: adiabatic elimination, effective decay, pulse
propagators, and a direct integrator of the three-level dynamics.

The three-level system (ground |g>, intermediate |i>, excited |e>) driven by
a far-detuned beam pair reduces to an effective two-level system with
coupling Omega_eff = Omega1 Omega2 / 2 Delta~, Doppler detuning
delta_k = hbar k (k1-k2)/m, and light shifts Omega_i^2 / 4 Delta~, where
Delta~ = Delta0 - hbar(k+k1)^2/2m. The reduction is trusted only in the
far-detuned regime |Delta~| >= 5 Omega0 (configurable); the direct
integrator exists to validate it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import HBAR, AtomSpecies, LaserParams
from .errors import RegimeError, ResolutionError

DETUNING_RATIO_DEFAULT = 5.0
# Relative slack on the regime gate so parameter sets sitting exactly on the
# boundary are not rejected by the tiny recoil correction to Delta~.
_GATE_SLACK = 1e-2


def detuning_tilde(k, laser: LaserParams, species: AtomSpecies,
                   include_recoil: bool = True):
    """Intermediate-state detuning Delta~ = Delta0 - hbar(k+k1)^2/2m."""
    if not include_recoil:
        return laser.one_photon_detuning
    k1 = laser.k1_sign * species.wavenumber
    return laser.one_photon_detuning - HBAR * (np.asarray(k) + k1) ** 2 / (2.0 * species.mass)


@dataclass(frozen=True)
class EffectiveTwoLevel:
    """Effective two-level parameters at one momentum."""

    omega_eff: float          # Omega1 Omega2 / 2 Delta~ [rad/s]
    doppler_detuning: float   # hbar k (k1-k2) / m [rad/s]
    detuning_tilde: float     # Delta~ [rad/s]
    light_shift_ground: float   # Omega1^2 / 4 Delta~ [rad/s]
    light_shift_excited: float  # Omega2^2 / 4 Delta~ [rad/s]

    def total_detuning(self, include_light_shift: bool = True) -> float:
        """Detuning entering the pulse propagator; the light shifts cancel
        for equal beam intensities."""
        delta = self.doppler_detuning
        if include_light_shift:
            delta = delta + self.light_shift_excited - self.light_shift_ground
        return delta


def check_regime(laser: LaserParams, species: AtomSpecies, k: float = 0.0,
                 min_ratio: float = DETUNING_RATIO_DEFAULT,
                 include_recoil: bool = True) -> None:
    """Raise RegimeError when |Delta~| < min_ratio * Omega0 at momentum k."""
    dt = detuning_tilde(k, laser, species, include_recoil)
    if abs(dt) < min_ratio * laser.rabi_0 * (1.0 - _GATE_SLACK):
        raise RegimeError(
            f"adiabatic elimination untrustworthy: |Delta~| = {abs(dt):.3e} rad/s "
            f"< {min_ratio:g} x Omega0 = {min_ratio * laser.rabi_0:.3e} rad/s "
            f"at k = {k:.3e} 1/m"
        )


def effective_two_level(k: float, laser: LaserParams, species: AtomSpecies,
                        min_ratio: float = DETUNING_RATIO_DEFAULT,
                        include_recoil: bool = True) -> EffectiveTwoLevel:
    """Adiabatic elimination of the intermediate state at momentum k."""
    check_regime(laser, species, k, min_ratio, include_recoil)
    dt = detuning_tilde(k, laser, species, include_recoil)
    return EffectiveTwoLevel(
        omega_eff=laser.rabi_1 * laser.rabi_2 / (2.0 * dt),
        doppler_detuning=HBAR * k * laser.k_diff(species) / species.mass,
        detuning_tilde=dt,
        light_shift_ground=laser.rabi_1**2 / (4.0 * dt),
        light_shift_excited=laser.rabi_2**2 / (4.0 * dt),
    )


@dataclass(frozen=True)
class DecayModel:
    """Off-resonant spontaneous emission during the pulse train."""

    gamma_eff: float          # Gamma Omega0^2 / 4 Delta~^2 [rad/s]
    gamma_ground_to_excited: float
    gamma_excited_to_ground: float
    pulse_duration: float     # total Raman pulse exposure tau [s]

    @property
    def survival(self) -> float:
        """Coherent fraction exp(-Gamma_eff tau)."""
        return math.exp(-self.gamma_eff * self.pulse_duration)


def effective_decay(laser: LaserParams, species: AtomSpecies,
                    pulse_duration: float, k: float = 0.0,
                    min_ratio: float = DETUNING_RATIO_DEFAULT) -> DecayModel:
    """Effective decay rates from the steady intermediate-state population
    Omega0^2 / 4 Delta~^2."""
    check_regime(laser, species, k, min_ratio)
    if pulse_duration < 0:
        raise ValueError("pulse duration must be >= 0")
    dt = detuning_tilde(k, laser, species)
    population = laser.rabi_0**2 / (4.0 * dt**2)
    return DecayModel(
        gamma_eff=species.linewidth * population,
        gamma_ground_to_excited=species.branching_to_excited * population,
        gamma_excited_to_ground=species.branching_to_ground * population,
        pulse_duration=pulse_duration,
    )


def pulse_propagator(omega_eff, delta, t):
    """Two-level pulse propagator for coupling omega_eff and detuning delta.

    Returns the unitary
        [[cos(W t/2) - i (delta/W) sin(W t/2), -i (omega_eff/W) sin(W t/2)],
         [-i (omega_eff/W) sin(W t/2), cos(W t/2) + i (delta/W) sin(W t/2)]]
    with W = sqrt(omega_eff^2 + delta^2); the diagonal entries are complex
    conjugates, so det U = 1. Inputs may be arrays (broadcast together);
    the matrix axes are appended last.
    """
    omega_eff, delta, t = np.broadcast_arrays(
        np.asarray(omega_eff, float), np.asarray(delta, float), np.asarray(t, float)
    )
    if np.any(t < 0):
        raise ValueError("pulse duration must be >= 0")
    w = np.hypot(omega_eff, delta)
    half = 0.5 * w * t
    c = np.cos(half)
    # sin(W t/2)/W, finite at W = 0
    with np.errstate(invalid="ignore", divide="ignore"):
        sinc = np.where(w > 0, np.sin(half) / np.where(w > 0, w, 1.0), 0.5 * t)
    u = np.empty(omega_eff.shape + (2, 2), dtype=complex)
    u[..., 0, 0] = c - 1j * delta * sinc
    u[..., 0, 1] = -1j * omega_eff * sinc
    u[..., 1, 0] = -1j * omega_eff * sinc
    u[..., 1, 1] = c + 1j * delta * sinc
    return u


def three_level_hamiltonian(k: float, laser: LaserParams,
                            species: AtomSpecies) -> np.ndarray:
    """Raman Hamiltonian / hbar in the basis (|g,k>, |i,k+k1>, |e,k+k1-k2>),
    in the frame rotating with the lasers [rad/s]."""
    k1 = laser.k1_sign * species.wavenumber
    k2 = laser.k2_sign * species.wavenumber
    kin = lambda p: HBAR * p**2 / (2.0 * species.mass)
    return np.array([
        [kin(k) + laser.delta0 / 2.0, laser.rabi_1 / 2.0, 0.0],
        [laser.rabi_1 / 2.0, kin(k + k1) - laser.one_photon_detuning, laser.rabi_2 / 2.0],
        [0.0, laser.rabi_2 / 2.0, kin(k + k1 - k2) - laser.delta0 / 2.0],
    ], dtype=complex)


def _rk4_step_matrix(h_over_hbar: np.ndarray, step: float) -> np.ndarray:
    """One-step RK4 matrix for the linear system i dpsi/dt = H psi.

    For a constant Hamiltonian, classical RK4 equals the order-4 Taylor
    polynomial of exp(-i H step), so stepping reduces to a matrix power.
    """
    m = -1j * h_over_hbar * step
    a = np.eye(h_over_hbar.shape[0], dtype=complex)
    term = a.copy()
    for order in range(1, 5):
        term = term @ m / order
        a = a + term
    return a


def integrate_three_level(psi0, k: float, laser: LaserParams,
                          species: AtomSpecies, t: float,
                          step: float | None = None) -> np.ndarray:
    """Propagate a three-component state under the Raman Hamiltonian for
    time t with fixed-step RK4.

    Used as the independent oracle validating the adiabatic elimination;
    the step must resolve the fastest scale, step <= 0.01/max(Omega, Delta).
    """
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (3,):
        raise ValueError("initial state must have 3 components")
    if t < 0:
        raise ValueError("integration time must be >= 0")
    h = three_level_hamiltonian(k, laser, species)
    scale = max(laser.rabi_1, laser.rabi_2, abs(laser.one_photon_detuning),
                float(np.max(np.abs(np.diagonal(h)))))
    limit = 0.01 / scale
    if step is None:
        step = 0.2 * limit
    elif step > limit:
        raise ResolutionError(
            f"integration step {step:.3e} s too coarse; need <= {limit:.3e} s"
        )
    if t == 0:
        return psi0.copy()
    n_steps = max(1, int(math.ceil(t / step)))
    a = _rk4_step_matrix(h, t / n_steps)
    return np.linalg.matrix_power(a, n_steps) @ psi0
