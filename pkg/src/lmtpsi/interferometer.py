"""Momentum-ladder pulse sequences and the full interferometer evolution.

The sequence is the usual pi/2 - pi - pi/2 skeleton with four ramps of
alternating-direction pi pulses: an acceleration ramp after the first
beamsplitter, a deceleration ramp before the mirror, and their mirror
images in the second half. Ladder order N (odd) gives a peak arm
separation of N * k_eff.

Evolution model, per trap eigenstate and per grid momentum k:

* The state lives on a ladder of momentum classes j (arm momentum
  k + j*k_eff) with internal label g or e. A pulse of direction d couples
  the disjoint pairs (g, j) <-> (e, j+d) through the two-level propagator
  with detuning d * (hbar k k_eff/m) + n * recoil_rate, where n is the
  pulse's ladder rung (the same detuning rule that fixes the compensated
  pulse areas).
* Between pulses each class acquires its kinetic phase relative to the
  symmetric arm picture (ladder referenced to the midpoint j = 1/2 of the
  base pair, so the two main arms stay degenerate and the closed
  interferometer accumulates no net phase). Pulses are treated as
  instantaneous for this external phase.
* Rotation about the axis normal to the beams enters as the class-indexed
  phase exp(i (j - 1/2) r_Omega k / N) at the start of the second drift,
  giving the two fully separated arms the relative phase r_Omega * k with
  r_Omega = 2 hbar k_t Omega T^2 / m.
* The common exp(-i hbar k^2 t / 2m) expansion envelope is deferred to the
  signal stage; outputs here are in that interaction picture.

All steps are unitary, so the norm over classes is conserved exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .constants import HBAR, AtomSpecies, LaserParams
from .errors import LmtPsiError, RegimeError
from .quantum import MomentumGrid, MomentumWavefunction, ThermalEnsemble
from .raman import check_regime, detuning_tilde


@dataclass(frozen=True)
class Pulse:
    area: float          # nominal area for resonant atoms [rad]
    direction: int       # sign of k1 - k2 for this pulse
    start_time: float    # [s]
    duration: float      # [s]
    ladder_index: int    # rung n addressed (0 for the pi/2 and mirror pulses)

    def __post_init__(self):
        if not (0.0 < self.area <= 2.0 * math.pi):
            raise ValueError(f"pulse area must be in (0, 2pi], got {self.area}")
        if self.duration <= 0:
            raise ValueError("pulse duration must be positive")


@dataclass(frozen=True)
class PulseSequence:
    pulses: tuple           # time-ordered Pulse objects
    order: int              # ladder order N (odd)
    half_time: float        # interrogation half-time T [s]
    rotation_time: float    # when the rotation phase is applied [s]
    omega_eff: float        # design effective Rabi frequency at k = 0 [rad/s]
    k_transfer: float       # k_t = N * k_eff [1/m]
    compensation: bool

    @property
    def total_pulse_duration(self) -> float:
        """tau, the summed duration of all pulses [s]."""
        return sum(p.duration for p in self.pulses)

    @property
    def ladder_pulse_duration(self) -> float:
        """Summed duration of the ramp pi pulses only (the decay exposure
        entering the closed-form peak-height model)."""
        return sum(p.duration for p in self.pulses if p.ladder_index > 0)

    @property
    def ladder_betas(self) -> list:
        """beta at each rung 1 .. (N-1)/2 implied by the compensated areas."""
        out = []
        for p in self.pulses:
            if p.ladder_index > 0 and p.ladder_index > len(out):
                out.append((math.pi / p.area) ** 2 - 1.0)
        return out

    def to_json_dict(self) -> dict:
        return {
            "order": self.order,
            "half_time_s": self.half_time,
            "rotation_time_s": self.rotation_time,
            "omega_eff_rad_s": self.omega_eff,
            "k_transfer_1_m": self.k_transfer,
            "compensation": self.compensation,
            "total_pulse_duration_s": self.total_pulse_duration,
            "pulses": [
                {
                    "start_time_s": p.start_time,
                    "duration_s": p.duration,
                    "area_rad": p.area,
                    "direction": p.direction,
                    "ladder_index": p.ladder_index,
                }
                for p in self.pulses
            ],
        }

    def write_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_json_dict(), f, indent=2, sort_keys=True)
            f.write("\n")


def build_lmt_sequence(n_order: int, half_time: float, laser: LaserParams,
                       species: AtomSpecies, compensation: bool = True,
                       pulse_gap: float = 0.0) -> PulseSequence:
    """Construct the N-th order ladder sequence.

    Ramp pulses are placed back to back (configurable dead time via
    pulse_gap) immediately around the beamsplitter and mirror pulses, so
    the total pulse duration matches the decay-exposure accounting of the
    closed-form model. With compensation on, the rung-n pulse area is
    pi/sqrt(1 + beta_n) so its transfer probability is 1/(1+beta_n).
    """
    if n_order < 1 or n_order % 2 == 0:
        raise ValueError(f"ladder order must be an odd integer >= 1, got {n_order}")
    if half_time <= 0:
        raise ValueError("half_time must be positive")
    if pulse_gap < 0:
        raise ValueError("pulse_gap must be >= 0")
    omega_eff = laser.rabi_0**2 / (2.0 * detuning_tilde(0.0, laser, species))
    if omega_eff <= 0:
        raise ValueError("effective Rabi frequency must be positive (check detuning sign)")
    n_half = (n_order - 1) // 2

    def rung_area(n):
        if not compensation:
            return math.pi
        beta = (n * species.recoil_rate / omega_eff) ** 2
        return math.pi / math.sqrt(1.0 + beta)

    # Rung direction alternates through each ramp, starting opposite to the
    # beamsplitters; a deceleration ramp repeats its acceleration ramp in
    # reverse order with the same directions (each pulse toggles its pair).
    ramp_up = [(rung_area(n), -1 if n % 2 == 1 else +1, n)
               for n in range(1, n_half + 1)]
    ramp_down = list(reversed(ramp_up))

    pulses = []
    clock = 0.0

    def emit(area, direction, rung):
        nonlocal clock
        duration = area / omega_eff
        pulses.append(Pulse(area=area, direction=direction, start_time=clock,
                            duration=duration, ladder_index=rung))
        clock += duration + pulse_gap

    emit(math.pi / 2.0, +1, 0)
    for a, d, n in ramp_up:
        emit(a, d, n)
    clock += half_time
    for a, d, n in ramp_down:
        emit(a, d, n)
    emit(math.pi, +1, 0)
    for a, d, n in ramp_up:
        emit(a, d, n)
    rotation_time = clock
    clock += half_time
    for a, d, n in ramp_down:
        emit(a, d, n)
    emit(math.pi / 2.0, +1, 0)

    seq = PulseSequence(
        pulses=tuple(pulses),
        order=n_order,
        half_time=half_time,
        rotation_time=rotation_time,
        omega_eff=omega_eff,
        k_transfer=n_order * species.k_eff,
        compensation=compensation,
    )
    if seq.total_pulse_duration >= half_time / 10.0:
        raise ValueError(
            f"pulse train duration {seq.total_pulse_duration:.3e} s is not small "
            f"against the half-time {half_time:.3e} s (need tau < T/10)"
        )
    return seq


@dataclass(frozen=True)
class EvolvedState:
    """Final state of one trap eigenstate after the pulse sequence.

    ground_classes maps the ladder class j to the complex amplitude array
    over the momentum grid for atoms ending in the ground state with arm
    momentum k + j*k_eff; imaging adds the classes incoherently.
    """

    grid: MomentumGrid
    ground_classes: dict
    excited_population: float

    @property
    def main(self) -> MomentumWavefunction:
        """Ground-state amplitude in the unshifted momentum class."""
        return MomentumWavefunction(self.grid, self.ground_classes.get(
            0, np.zeros(self.grid.n_points, complex)))

    @property
    def ground_population(self) -> float:
        dk = self.grid.spacing
        return float(sum(np.sum(np.abs(a) ** 2) * dk
                         for a in self.ground_classes.values()))


class _LadderState:
    """Two-component amplitudes over (class j, grid k) for one eigenstate."""

    def __init__(self, psi0: np.ndarray, grid: MomentumGrid, j_span: int):
        self.grid = grid
        self.j_span = j_span
        n = grid.n_points
        self.g = np.zeros((2 * j_span + 1, n), dtype=complex)
        self.e = np.zeros_like(self.g)
        self.g[j_span] = psi0

    def _ji(self, j: int) -> int:
        return self.j_span + j

    def apply_pulse(self, pulse: Pulse, omega_eff_k, thermal_rate, recoil_rate,
                    light_shift, ideal: bool) -> None:
        d = pulse.direction
        g_new = self.g.copy()
        e_new = self.e.copy()
        if ideal:
            c = math.cos(pulse.area / 2.0)
            s = math.sin(pulse.area / 2.0)
            a_gg, a_ge, a_ee = c, -1j * s, c
        else:
            delta = pulse.ladder_index * recoil_rate + d * thermal_rate + light_shift
            w = np.hypot(omega_eff_k, delta)
            half = 0.5 * w * pulse.duration
            c = np.cos(half)
            s = np.sin(half) / w
            a_gg = c - 1j * delta * s
            a_ge = -1j * omega_eff_k * s
            a_ee = c + 1j * delta * s
        for j in range(-self.j_span, self.j_span + 1):
            je = j + d
            if abs(je) > self.j_span:
                continue
            cg = self.g[self._ji(j)]
            ce = self.e[self._ji(je)]
            if not (cg.any() or ce.any()):
                continue
            g_new[self._ji(j)] = a_gg * cg + a_ge * ce
            e_new[self._ji(je)] = a_ge * cg + a_ee * ce
        self.g = g_new
        self.e = e_new

    def free_evolve(self, t: float, k_eff: float, mass: float) -> None:
        if t <= 0:
            return
        k = self.grid.k
        for j in range(-self.j_span, self.j_span + 1):
            row = self._ji(j)
            if not (self.g[row].any() or self.e[row].any()):
                continue
            jc = (j - 0.5) * k_eff  # symmetric-picture ladder momentum
            phase = np.exp(-1j * (2.0 * jc * k + jc**2) * HBAR * t / (2.0 * mass))
            self.g[row] *= phase
            self.e[row] *= phase

    def apply_rotation(self, r_omega: float, n_order: int) -> None:
        k = self.grid.k
        for j in range(-self.j_span, self.j_span + 1):
            phase = np.exp(1j * (j - 0.5) * r_omega * k / n_order)
            self.g[self._ji(j)] *= phase
            self.e[self._ji(j)] *= phase

    def norm(self) -> float:
        dk = self.grid.spacing
        return float((np.sum(np.abs(self.g) ** 2) + np.sum(np.abs(self.e) ** 2)) * dk)


def run_interferometer(ensemble: ThermalEnsemble, sequence: PulseSequence,
                       rotation_rate: float, laser: LaserParams,
                       species: AtomSpecies, grid: MomentumGrid,
                       ideal_pulses: bool = False,
                       include_thermal_doppler: bool = True,
                       include_light_shift: bool = True,
                       include_recoil: bool = True) -> list:
    """Evolve every ensemble eigenstate through the pulse sequence.

    Returns one EvolvedState per eigenstate n = 0 .. n_max, in the
    free-expansion interaction picture (apply the envelope phase at the
    signal stage). With ideal_pulses the propagators become exact
    rotations by the nominal areas and all detunings are ignored.
    """
    if not ideal_pulses:
        # elimination must hold out to the largest ladder momentum; a sign
        # change of Delta~ across the ladder means the intermediate state
        # comes into resonance somewhere inside it
        k_top = sequence.order * species.k_eff
        dt_0 = detuning_tilde(0.0, laser, species, include_recoil)
        dt_top = detuning_tilde(k_top, laser, species, include_recoil)
        if dt_0 * dt_top <= 0:
            raise RegimeError(
                "intermediate-state detuning changes sign across the ladder "
                f"(Delta~ = {dt_0:.3e} rad/s at k = 0, {dt_top:.3e} rad/s at "
                f"k = {k_top:.3e} 1/m)"
            )
        check_regime(laser, species, k=0.0, include_recoil=include_recoil)
        check_regime(laser, species, k=k_top, include_recoil=include_recoil)

    k = grid.k
    if ideal_pulses:
        omega_eff_k = None
        light_shift = 0.0
    else:
        dt_k = detuning_tilde(k, laser, species, include_recoil)
        omega_eff_k = laser.rabi_1 * laser.rabi_2 / (2.0 * dt_k)
        if include_light_shift:
            light_shift = (laser.rabi_2**2 - laser.rabi_1**2) / (4.0 * dt_k)
        else:
            light_shift = 0.0
    thermal_rate = (HBAR * k * laser.k_diff(species) / species.mass
                    if include_thermal_doppler else np.zeros_like(k))
    r_omega = 2.0 * HBAR * sequence.k_transfer * rotation_rate \
        * sequence.half_time**2 / species.mass

    # class span: every pulse moves amplitude at most one rung
    j_span = len(sequence.pulses) // 2 + 2
    norm_tol = 1e-8 if ideal_pulses else 1e-6

    events = [(p.start_time, "pulse", p) for p in sequence.pulses]
    events.append((sequence.rotation_time, "rotation", None))
    events.sort(key=lambda ev: (ev[0], ev[1] == "pulse"))

    results = []
    for psi in ensemble.eigenstates(grid):
        state = _LadderState(psi.amplitudes.copy(), grid, j_span)
        clock = 0.0
        for time, kind, payload in events:
            state.free_evolve(time - clock, species.k_eff, species.mass)
            if kind == "rotation":
                state.apply_rotation(r_omega, sequence.order)
                clock = time
            else:
                state.apply_pulse(payload, omega_eff_k, thermal_rate,
                                  species.recoil_rate, light_shift, ideal_pulses)
                # instantaneous for external phases: free evolution resumes
                # only after the pulse's wall-clock window
                clock = time + payload.duration
        drift = abs(state.norm() - 1.0)
        if drift > norm_tol:
            raise LmtPsiError(
                f"norm drift {drift:.2e} exceeds {norm_tol:.0e}; evolution unsound"
            )
        ground = {
            j: state.g[state._ji(j)].copy()
            for j in range(-j_span, j_span + 1)
            if state.g[state._ji(j)].any()
        }
        dk = grid.spacing
        excited = float(np.sum(np.abs(state.e) ** 2) * dk)
        results.append(EvolvedState(grid=grid, ground_classes=ground,
                                    excited_population=excited))
    return results


def conventional_signal(r, k_omega: float):
    """Spatial fringe pattern of the classical-trajectory model,
    (1 + cos(k_omega r)) / 2."""
    return (1.0 + np.cos(k_omega * np.asarray(r))) / 2.0


def fringe_wavenumber(n_order: int, rotation_rate: float, half_time: float,
                      species: AtomSpecies) -> float:
    """Expected fringe wavenumber k_Omega = N k_eff Omega T."""
    return n_order * species.k_eff * rotation_rate * half_time
