"""Built-in scenario presets.

Desk-scale parameter sets shaped after the reference signal regimes: an
ideal-pulse point source (fig4), the low and high one-photon Rabi
frequency ensembles at third order (fig5, fig6), a seventh-order run
(fig7), and the sensitivity scan at Omega0 = 2pi x 200 MHz (fig8).
Rotation rate and half-time are chosen so the fringes resolve cleanly on a
4096-point grid; physical laser and trap parameters follow the quoted
values.
"""

import math

TWO_PI = 2.0 * math.pi

_POINT_SOURCE_TRAP = {"size": 0.1e-6, "temperature": 1e-9, "n_max": 0}
_THERMAL_TRAP = {
    "size": 0.1e-6,
    "temperature": 6e-6,
    "n_max": 16,
    "weight_mode": "linear-boltzmann",
}

PRESETS = {
    "fig4": {
        "species": "rb87",
        "rotation_rate": 74.5,
        "laser": {"rabi_0": TWO_PI * 100e6, "delta0": TWO_PI * 500e6},
        "trap": dict(_POINT_SOURCE_TRAP),
        "sequence": {
            "order": 3,
            "half_time": 1.0e-3,
            "ideal_pulses": True,
            "compensation": False,
        },
        "grid": {"points": 4096, "extent": 16.0 / 0.1e-6},
    },
    "fig5": {
        "species": "rb87",
        "rotation_rate": 276.0,
        "laser": {"rabi_0": TWO_PI * 10 * math.sqrt(10) * 1e6,
                  "delta0": TWO_PI * 500e6},
        "trap": dict(_THERMAL_TRAP),
        "sequence": {"order": 3, "half_time": 1.5e-4},
        "grid": {"points": 4096},
    },
    "fig6": {
        "species": "rb87",
        "rotation_rate": 276.0,
        "laser": {"rabi_0": TWO_PI * 100e6, "delta0": TWO_PI * 500e6},
        "trap": dict(_THERMAL_TRAP),
        "sequence": {"order": 3, "half_time": 1.5e-4},
        "grid": {"points": 4096},
    },
    "fig7": {
        "species": "rb87",
        "rotation_rate": 276.0,
        "laser": {"rabi_0": TWO_PI * 100e6, "delta0": TWO_PI * 500e6},
        "trap": dict(_THERMAL_TRAP),
        "sequence": {"order": 7, "half_time": 1.5e-4},
        "grid": {"points": 4096},
    },
    "fig8": {
        "species": "rb87",
        "laser": {"rabi_0": TWO_PI * 200e6},
        "scan": {"n_start": 1, "n_stop": 199, "policy": "per-N-optimal"},
    },
}
