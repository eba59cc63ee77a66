import math

import numpy as np
import pytest

from lmtpsi import (HBAR, KB, MomentumGrid, ThermalEnsemble,
                    free_evolution_phase, hermite, ho_momentum_eigenstate,
                    momentum_to_position, thermal_weights)
from lmtpsi.errors import ConfigError, ResolutionError

A = 0.1e-6  # reference trap size [m]


class TestMomentumGrid:
    def test_basic_geometry(self):
        g = MomentumGrid.from_extent(1.6e8, 4096)
        assert g.extent == pytest.approx(1.6e8, rel=1e-12)
        assert len(g.k) == 4096
        assert g.k[4096 // 2] == 0.0
        assert np.allclose(np.diff(g.k), g.spacing)

    def test_odd_count_rejected(self):
        with pytest.raises(ValueError):
            MomentumGrid(n_points=4095, spacing=1e4)

    def test_too_few_points_rejected(self):
        with pytest.raises(ValueError):
            MomentumGrid(n_points=0, spacing=1e4)

    def test_2d_not_supported(self):
        with pytest.raises(ConfigError):
            MomentumGrid(n_points=64, spacing=1e4, dimension=2)

    def test_position_grid_conjugate(self):
        g = MomentumGrid.from_extent(1.6e8, 1024)
        assert g.position_spacing == pytest.approx(
            2 * math.pi / (1024 * g.spacing), rel=1e-12)


class TestHermite:
    def test_zeroth_is_one(self):
        assert hermite(0, 1.7) == pytest.approx(1.0)

    def test_first_odd_at_origin(self):
        assert hermite(1, 0.0) == pytest.approx(0.0, abs=1e-30)

    def test_h3_closed_form(self):
        # 8 x^3 - 12 x at x = 2
        assert hermite(3, 2.0) == pytest.approx(40.0, rel=1e-12)

    @pytest.mark.parametrize("n", [2, 5, 10, 64])
    def test_recurrence_against_numpy(self, n):
        x = np.linspace(-3, 3, 31)
        coeffs = np.zeros(n + 1)
        coeffs[n] = 1.0
        expected = np.polynomial.hermite.hermval(x, coeffs)
        assert np.allclose(hermite(n, x), expected, rtol=1e-10)

    def test_order_beyond_support_rejected(self):
        with pytest.raises(ConfigError):
            hermite(129, 0.5)

    def test_negative_order_rejected(self):
        with pytest.raises(ValueError):
            hermite(-1, 0.5)


class TestEigenstates:
    def test_ground_state_is_gaussian(self, point_grid):
        psi = ho_momentum_eigenstate(0, A, point_grid)
        assert psi.norm == pytest.approx(1.0, abs=1e-9)
        # RMS momentum width 1/(a sqrt(2))
        k = point_grid.k
        p = np.abs(psi.amplitudes) ** 2 * point_grid.spacing
        sigma = math.sqrt(float(np.sum(p * k**2)))
        assert sigma == pytest.approx(1.0 / (A * math.sqrt(2)), rel=1e-6)

    def test_first_excited_vanishes_at_zero(self, point_grid):
        psi = ho_momentum_eigenstate(1, A, point_grid)
        assert abs(psi.amplitudes[point_grid.n_points // 2]) < 1e-20

    @pytest.mark.parametrize("n", [0, 1, 2, 3, 7])
    def test_parity(self, n, point_grid):
        psi = ho_momentum_eigenstate(n, A, point_grid).amplitudes.real
        flipped = psi[::-1]
        # grid has one unpaired point at the most negative k
        sign = (-1) ** n
        assert np.allclose(psi[1:], sign * flipped[:-1], atol=1e-12)

    def test_zero_two_overlap(self, point_grid):
        psi0 = ho_momentum_eigenstate(0, A, point_grid)
        psi2 = ho_momentum_eigenstate(2, A, point_grid)
        overlap = np.sum(np.conj(psi0.amplitudes) * psi2.amplitudes) \
            * point_grid.spacing
        assert abs(overlap) < 1e-8

    def test_orthonormality_up_to_20(self, point_grid):
        states = [ho_momentum_eigenstate(n, A, point_grid).amplitudes
                  for n in range(21)]
        dk = point_grid.spacing
        for i in range(21):
            for j in range(i, 21):
                overlap = abs(np.sum(np.conj(states[i]) * states[j]) * dk)
                expected = 1.0 if i == j else 0.0
                assert abs(overlap - expected) <= 1e-6

    def test_narrow_grid_rejected(self):
        grid = MomentumGrid.from_extent(2.0 / A, 256)  # far below 8/a
        with pytest.raises(ResolutionError):
            ho_momentum_eigenstate(0, A, grid)


class TestThermalWeights:
    def test_single_state(self):
        w = thermal_weights(1e5, 6e-6, 0)
        assert w.tolist() == [1.0]

    def test_zero_temperature_limit(self):
        w = thermal_weights(1e5, 1e-12, 8)
        assert w[0] == pytest.approx(1.0, abs=1e-12)
        assert np.all(w[1:] == 0.0)

    def test_geometric_ratio_linear_mode(self):
        # hbar w / kB T = ln 2 makes successive weights halve
        temperature = 1e-6
        omega = math.log(2.0) * KB * temperature / HBAR
        w = thermal_weights(omega, temperature, 10, mode="linear-boltzmann")
        ratios = w[1:] / w[:-1]
        assert np.allclose(ratios, 0.5, rtol=1e-12)

    def test_normalization_exact(self):
        w = thermal_weights(7.3e4, 6e-6, 32)
        assert abs(w.sum() - 1.0) < 1e-12

    def test_non_increasing(self):
        for mode in ("linear-boltzmann", "paper-squared"):
            w = thermal_weights(7.3e4, 6e-6, 16, mode=mode)
            assert np.all(np.diff(w) <= 1e-15)

    def test_paper_squared_near_uniform_in_si(self):
        # the verbatim squared-energy exponent is ~1e-30 in SI units
        w = thermal_weights(7.3e4, 6e-6, 4, mode="paper-squared")
        assert np.allclose(w, 0.2, rtol=1e-6)

    def test_strict_truncation_rejected(self):
        with pytest.raises(ConfigError):
            thermal_weights(7.3e4, 6e-6, 8, strict=True)

    def test_bad_args_rejected(self):
        with pytest.raises(ValueError):
            thermal_weights(-1.0, 6e-6, 4)
        with pytest.raises(ValueError):
            thermal_weights(1e5, 0.0, 4)
        with pytest.raises(ValueError):
            thermal_weights(1e5, 6e-6, 4, mode="bogus")


class TestEnsemble:
    def test_size_frequency_consistency(self, species):
        ens = ThermalEnsemble.for_species(species, 6e-6, n_max=4, trap_size=A)
        assert ens.trap_size == pytest.approx(
            math.sqrt(HBAR / (species.mass * ens.trap_frequency)), rel=1e-12)
        ens2 = ThermalEnsemble.for_species(
            species, 6e-6, n_max=4, trap_frequency=ens.trap_frequency)
        assert ens2.trap_size == pytest.approx(ens.trap_size, rel=1e-12)

    def test_needs_exactly_one_scale(self, species):
        with pytest.raises(ValueError):
            ThermalEnsemble.for_species(species, 6e-6, trap_size=A,
                                        trap_frequency=1e5)
        with pytest.raises(ValueError):
            ThermalEnsemble.for_species(species, 6e-6)

    def test_point_source_single_state(self, species):
        ens = ThermalEnsemble.point_source(species, A)
        assert ens.n_max == 0
        assert ens.weights.tolist() == [1.0]


class TestFreeEvolution:
    def test_zero_time_identity(self, species, point_grid):
        ph = free_evolution_phase(point_grid, 0.0, species.mass)
        assert np.all(ph == 1.0)

    def test_zero_momentum_unchanged(self, species, point_grid):
        ph = free_evolution_phase(point_grid, 3.2e-3, species.mass)
        assert ph[point_grid.n_points // 2] == pytest.approx(1.0, abs=1e-15)

    def test_unit_modulus(self, species, point_grid):
        ph = free_evolution_phase(point_grid, 1.7e-3, species.mass)
        assert np.allclose(np.abs(ph), 1.0, atol=1e-12)

    def test_negative_time_rejected(self, species, point_grid):
        with pytest.raises(ValueError):
            free_evolution_phase(point_grid, -1.0, species.mass)

    def test_gaussian_expansion_width(self, species, point_grid):
        """Free expansion of the trap ground state reproduces the ballistic
        analytic width to 1%."""
        t = 2.0e-3
        psi = ho_momentum_eigenstate(0, A, point_grid)
        phased = psi.amplitudes * free_evolution_phase(point_grid, t, species.mass)
        psi_x = momentum_to_position(point_grid, phased)
        x = point_grid.x
        dx = point_grid.position_spacing
        p = np.abs(psi_x) ** 2 * dx
        p /= p.sum()
        sigma = math.sqrt(float(np.sum(p * x**2)))
        expansion = HBAR * t / (species.mass * A**2)
        expected = A * math.sqrt(1.0 + expansion**2) / math.sqrt(2.0)
        assert sigma == pytest.approx(expected, rel=0.01)

    def test_parseval_of_position_transform(self, point_grid):
        psi = ho_momentum_eigenstate(3, A, point_grid)
        psi_x = momentum_to_position(point_grid, psi.amplitudes)
        norm_x = np.sum(np.abs(psi_x) ** 2) * point_grid.position_spacing
        assert norm_x == pytest.approx(psi.norm, rel=1e-12)


class TestWavefunctionExport:
    def test_csv_round_trip(self, point_grid, tmp_path):
        psi = ho_momentum_eigenstate(2, A, point_grid)
        path = tmp_path / "psi.csv"
        psi.write_csv(path)
        data = np.loadtxt(path, delimiter=",", skiprows=1)
        assert np.allclose(data[:, 0], point_grid.k)
        assert np.allclose(data[:, 1] + 1j * data[:, 2], psi.amplitudes)
