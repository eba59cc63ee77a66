"""Large-momentum-transfer point-source atom interferometry toolkit.

Simulates cold-atom ensembles evolving through momentum-ladder Raman pulse
sequences, assembles rotation fringe signals in position and Fourier space,
and evaluates the closed-form sensitivity-improvement model with its
optimal-parameter search.
"""

__version__ = "0.1.0"

from .constants import (HBAR, KB, AtomSpecies, LaserParams,
                        intensity_rabi_convert, intensity_to_rabi,
                        rabi_to_intensity, raman_path_ratio, rb87)
from .errors import (ConfigError, DetectionError, LmtPsiError, RegimeError,
                     ResolutionError)
from .interferometer import (EvolvedState, Pulse, PulseSequence,
                             build_lmt_sequence, conventional_signal,
                             fringe_wavenumber, run_interferometer)
from .quantum import (MomentumGrid, MomentumWavefunction, ThermalEnsemble,
                      default_grid, free_evolution_phase, hermite,
                      ho_momentum_eigenstate, momentum_to_position,
                      thermal_weights)
from .raman import (DecayModel, EffectiveTwoLevel, effective_decay,
                    effective_two_level, integrate_three_level,
                    pulse_propagator, three_level_hamiltonian)
from .sensitivity import (LadderEfficiency, OptimalParams, SensitivityCurve,
                          beta_and_efficiency, improvement_factor,
                          optimal_detuning, optimal_params, peak_height_model,
                          scan_improvement)
from .signals import (InterferometerSignal, PeakMetrics, apply_decay,
                      fourier_signal, peak_metrics, spatial_signal)

__all__ = [
    "__version__",
    "HBAR", "KB", "AtomSpecies", "LaserParams",
    "intensity_rabi_convert", "intensity_to_rabi", "rabi_to_intensity",
    "raman_path_ratio", "rb87",
    "LmtPsiError", "ConfigError", "RegimeError", "ResolutionError",
    "DetectionError",
    "MomentumGrid", "MomentumWavefunction", "ThermalEnsemble", "default_grid",
    "free_evolution_phase", "hermite", "ho_momentum_eigenstate",
    "momentum_to_position", "thermal_weights",
    "DecayModel", "EffectiveTwoLevel", "effective_decay", "effective_two_level",
    "integrate_three_level", "pulse_propagator", "three_level_hamiltonian",
    "Pulse", "PulseSequence", "EvolvedState", "build_lmt_sequence",
    "conventional_signal", "fringe_wavenumber", "run_interferometer",
    "InterferometerSignal", "PeakMetrics", "apply_decay", "fourier_signal",
    "peak_metrics", "spatial_signal",
    "LadderEfficiency", "OptimalParams", "SensitivityCurve",
    "beta_and_efficiency", "improvement_factor", "optimal_detuning",
    "optimal_params", "peak_height_model", "scan_improvement",
]
