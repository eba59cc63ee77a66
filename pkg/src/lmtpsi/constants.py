"""Physical constants, rubidium-87 data, and laser intensity conversions.

Values not derivable from the model are taken from CODATA 2018 and from
Steck, "Rubidium 87 D Line Data" (https://steck.us/alkalidata/), stored to
at least 6 significant figures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ConfigError

HBAR = 1.054571817e-34  # reduced Planck constant [J s], CODATA 2018 (exact h/2pi)
KB = 1.380649e-23       # Boltzmann constant [J/K], exact since 2019 SI

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class AtomSpecies:
    """Atomic species data for two-photon Raman interferometry.

    Dipole matrix elements are given relative to the D2 cycling transition
    element, as (ground leg, excited leg) pairs per intermediate-state path.
    """

    name: str
    mass: float                 # kg
    linewidth: float            # excited-state decay rate Gamma [rad/s]
    wavenumber: float           # single-photon wavenumber k_L [1/m]
    branching_to_ground: float  # Gamma_{i->g} [rad/s]
    branching_to_excited: float  # Gamma_{i->e} [rad/s]
    raman_elements: dict = field(default_factory=dict)

    def __post_init__(self):
        total = self.branching_to_ground + self.branching_to_excited
        if not math.isclose(total, self.linewidth, rel_tol=1e-9):
            raise ValueError("branching ratios must sum to the linewidth")
        for v in (self.mass, self.linewidth, self.wavenumber):
            if not (v > 0 and math.isfinite(v)):
                raise ValueError("species constants must be positive and finite")

    @property
    def k_eff(self) -> float:
        """Effective two-photon wavenumber, 2 k_L [1/m]."""
        return 2.0 * self.wavenumber

    @property
    def recoil_rate(self) -> float:
        """Doppler ladder frequency step, hbar k_eff^2 / m [rad/s]."""
        return HBAR * self.k_eff**2 / self.mass

    def thermal_wavenumber(self, temperature: float) -> float:
        """Typical thermal momentum sqrt(m kB T)/hbar at temperature T [1/m]."""
        return math.sqrt(self.mass * KB * temperature) / HBAR

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "mass_kg": self.mass,
            "linewidth_rad_s": self.linewidth,
            "wavenumber_1_m": self.wavenumber,
            "k_eff_1_m": self.k_eff,
            "recoil_rate_rad_s": self.recoil_rate,
            "branching_to_ground_rad_s": self.branching_to_ground,
            "branching_to_excited_rad_s": self.branching_to_excited,
            "raman_elements": {k: list(v) for k, v in self.raman_elements.items()},
        }


def rb87() -> AtomSpecies:
    """Rubidium-87 on the D2 line.

    Mass from Steck; the linewidth is rounded to 2pi x 6.0 MHz as is usual
    for estimates. Matrix elements are the sigma+ couplings from the
    F=1,2 (mF=0) ground states through the two P3/2 intermediate levels,
    in units of the cycling-transition element.
    """
    gamma = TWO_PI * 6.0e6
    return AtomSpecies(
        name="Rb87",
        mass=1.443e-25,                       # Steck: 1.44316e-25 kg
        linewidth=gamma,
        wavenumber=TWO_PI / 780e-9,           # D2 780 nm
        branching_to_ground=gamma / 2.0,      # split between hyperfine ground states
        branching_to_excited=gamma / 2.0,
        raman_elements={
            # path -> (|g> leg, |e> leg) relative dipole elements
            "upper": (math.sqrt(1.0 / 8.0), math.sqrt(1.0 / 8.0)),
            "lower": (math.sqrt(5.0 / 24.0), math.sqrt(1.0 / 120.0)),
        },
    )


@dataclass(frozen=True)
class LaserParams:
    """Raman beam pair parameters.

    delta_g0 and delta_e0 are the one-photon detunings of each beam from
    its leg; the usual combinations follow as properties:
    delta0 = delta_g0 - delta_e0 (two-photon), Delta0 = (delta_g0+delta_e0)/2.
    """

    rabi_1: float        # one-photon Rabi frequency of beam 1 [rad/s]
    rabi_2: float        # one-photon Rabi frequency of beam 2 [rad/s]
    delta_g0: float      # [rad/s]
    delta_e0: float      # [rad/s]
    k1_sign: int = +1    # beam direction signs along the axis
    k2_sign: int = -1

    @property
    def rabi_0(self) -> float:
        """Common one-photon Rabi frequency (geometric mean if unequal)."""
        return math.sqrt(self.rabi_1 * self.rabi_2)

    @property
    def delta0(self) -> float:
        return self.delta_g0 - self.delta_e0

    @property
    def one_photon_detuning(self) -> float:
        return 0.5 * (self.delta_g0 + self.delta_e0)

    def k_diff(self, species: AtomSpecies) -> float:
        """Signed two-photon wavenumber k1 - k2 along the axis [1/m]."""
        return (self.k1_sign - self.k2_sign) * species.wavenumber

    @classmethod
    def symmetric(cls, rabi_0: float, one_photon_detuning: float,
                  two_photon_detuning: float = 0.0) -> "LaserParams":
        """Equal-intensity beams with given Delta0 and delta0."""
        return cls(
            rabi_1=rabi_0,
            rabi_2=rabi_0,
            delta_g0=one_photon_detuning + two_photon_detuning / 2.0,
            delta_e0=one_photon_detuning - two_photon_detuning / 2.0,
        )

    @classmethod
    def recoil_compensated(cls, rabi_0: float, one_photon_detuning: float,
                           species: AtomSpecies) -> "LaserParams":
        """Two-photon detuning set to the recoil shift hbar(k1-k2)^2/2m."""
        delta0 = HBAR * species.k_eff**2 / (2.0 * species.mass)
        return cls.symmetric(rabi_0, one_photon_detuning, delta0)

    def to_json_dict(self) -> dict:
        return {
            "rabi_1_rad_s": self.rabi_1,
            "rabi_2_rad_s": self.rabi_2,
            "one_photon_detuning_rad_s": self.one_photon_detuning,
            "two_photon_detuning_rad_s": self.delta0,
            "k1_sign": self.k1_sign,
            "k2_sign": self.k2_sign,
        }


# Intensity <-> Rabi anchors, fixed to the quoted reference pairs rather than
# re-derived from matrix elements: the cycling transition reaches Omega0 =
# Gamma at 3.34 mW/cm^2; driving the upper Raman path alone needs 3.7 W/cm^2
# for Omega0 = 2pi x 100 MHz; using both paths lowers that intensity by the
# factor (upper)/(upper+lower) = 3/4 of the summed effective couplings.
_GAMMA_RB = TWO_PI * 6.0e6
_CONVERSION_ANCHORS = {
    "cycling": (3.34e-3, _GAMMA_RB),
    "upper-raman": (3.7, TWO_PI * 100e6),
    "both-raman": (3.7 * 0.75, TWO_PI * 100e6),
}


def intensity_rabi_convert(value: float, direction: str, transition: str) -> float:
    """Convert laser intensity [W/cm^2] to one-photon Rabi frequency [rad/s]
    or back.

    direction is "to-rabi" or "to-intensity"; transition is one of
    "cycling", "upper-raman", "both-raman". Rabi frequency scales as the
    square root of intensity, so the round trip is an identity.
    """
    if not (value > 0 and math.isfinite(value)):
        raise ValueError(f"conversion input must be positive, got {value!r}")
    try:
        i_ref, rabi_ref = _CONVERSION_ANCHORS[transition]
    except KeyError:
        raise ValueError(
            f"unknown transition {transition!r}; expected one of "
            f"{sorted(_CONVERSION_ANCHORS)}"
        ) from None
    if direction == "to-rabi":
        return rabi_ref * math.sqrt(value / i_ref)
    if direction == "to-intensity":
        return i_ref * (value / rabi_ref) ** 2
    raise ValueError(f"direction must be 'to-rabi' or 'to-intensity', got {direction!r}")


def intensity_to_rabi(intensity: float, transition: str = "both-raman") -> float:
    return intensity_rabi_convert(intensity, "to-rabi", transition)


def rabi_to_intensity(rabi: float, transition: str = "both-raman") -> float:
    return intensity_rabi_convert(rabi, "to-intensity", transition)


def raman_path_ratio(species: AtomSpecies) -> float:
    """Factor by which the lower Raman path coupling is weaker than the upper.

    Computed as the ratio of the products of the two legs' dipole elements;
    equals 3 for the rb87 table.
    """
    elements = species.raman_elements
    if not elements or "upper" not in elements or "lower" not in elements:
        raise ConfigError(
            f"species {species.name!r} has no Raman matrix-element table"
        )
    up = elements["upper"]
    lo = elements["lower"]
    return (up[0] * up[1]) / (lo[0] * lo[1])
