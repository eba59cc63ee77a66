import json
import math

import pytest

from lmtpsi.cli import (main, parse_angular_frequency, parse_config,
                        validate_config)
from lmtpsi.errors import ConfigError
from lmtpsi.presets import PRESETS

TWO_PI = 2.0 * math.pi

FIG5_TOML = """
species = "rb87"
rotation_rate = 276.0

[laser]
rabi_0 = "2pi x 31.6227766 MHz"
delta0 = "2pi x 500 MHz"

[trap]
size = 0.1e-6
temperature = 6e-6
n_max = 8

[sequence]
order = 3
half_time = 1.5e-4

[grid]
points = 2048
"""


class TestAngularFrequency:
    def test_plain_number_passthrough(self):
        assert parse_angular_frequency(6.28e8) == pytest.approx(6.28e8)

    @pytest.mark.parametrize("text,value", [
        ("2pi x 100 MHz", TWO_PI * 100e6),
        ("2pi x 1.7 GHz", TWO_PI * 1.7e9),
        ("2pi x 30.2 kHz", TWO_PI * 30.2e3),
        ("2pi*500 MHz", TWO_PI * 500e6),
    ])
    def test_string_forms(self, text, value):
        assert parse_angular_frequency(text) == pytest.approx(value, rel=1e-12)

    def test_garbage_rejected(self):
        with pytest.raises(ValueError):
            parse_angular_frequency("100 furlongs")


class TestParseConfig:
    def test_fig5_preset_parses(self):
        cfg = parse_config(FIG5_TOML)
        assert cfg.rabi_0 == pytest.approx(TWO_PI * 10 * math.sqrt(10) * 1e6,
                                           rel=1e-8)
        assert cfg.delta0 == pytest.approx(TWO_PI * 500e6, rel=1e-12)
        assert cfg.order == 3
        assert cfg.trap_size == pytest.approx(0.1e-6)
        assert cfg.temperature == pytest.approx(6e-6)

    def test_json_accepted(self):
        text = json.dumps({
            "species": "rb87",
            "laser": {"rabi_0": "2pi x 200 MHz"},
            "scan": {"n_start": 1, "n_stop": 99},
        })
        cfg = parse_config(text)
        assert cfg.rabi_0 == pytest.approx(TWO_PI * 200e6, rel=1e-12)
        assert cfg.scan_stop == 99

    def test_even_order_rejected_with_path(self):
        bad = FIG5_TOML.replace("order = 3", "order = 4")
        with pytest.raises(ConfigError) as err:
            parse_config(bad)
        assert any("sequence.order" in v and "odd" in v
                   for v in err.value.violations)

    def test_all_violations_collected(self):
        with pytest.raises(ConfigError) as err:
            validate_config({
                "species": "cs133",
                "rotation_rate": "fast",
                "laser": {"rabi_0": -5.0, "delta0": "2pi x 500 MHz"},
                "sequence": {"order": 4},
                "grid": {"points": 999},
            })
        fields = "\n".join(err.value.violations)
        for expected in ("species", "rotation_rate", "laser.rabi_0",
                         "sequence.order", "grid.points"):
            assert expected in fields
        assert len(err.value.violations) >= 5

    def test_unknown_keys_rejected(self):
        with pytest.raises(ConfigError) as err:
            validate_config({"laser": {"rabi_0": 1e8, "delta0": 1e9,
                                       "wavelength": 780}})
        assert any("laser.wavelength" in v for v in err.value.violations)

    def test_missing_delta0_with_optimal_fill(self, species):
        cfg = validate_config({
            "laser": {"rabi_0": "2pi x 200 MHz", "optimal_detuning": True},
            "sequence": {"order": 69, "half_time": 1e-3},
        })
        from lmtpsi.cli import _resolve_laser
        laser = _resolve_laser(cfg, species)
        # filled from the closed-form optimum: 2pi x 1.7 GHz at N = 69
        assert laser.one_photon_detuning == pytest.approx(TWO_PI * 1.7e9,
                                                          rel=0.05)

    def test_missing_delta0_without_flag_rejected(self, species):
        cfg = validate_config({"laser": {"rabi_0": 1e8}})
        from lmtpsi.cli import _resolve_laser
        with pytest.raises(ConfigError):
            _resolve_laser(cfg, species)

    def test_explicit_two_photon_detuning(self, species):
        cfg = validate_config({
            "laser": {"rabi_0": "2pi x 100 MHz", "delta0": "2pi x 500 MHz",
                      "two_photon": 1.2e5},
        })
        from lmtpsi.cli import _resolve_laser
        laser = _resolve_laser(cfg, species)
        assert laser.delta0 == pytest.approx(1.2e5, rel=1e-6)

    def test_syntax_error_reported(self):
        with pytest.raises(ConfigError) as err:
            parse_config("{ not valid json or toml")
        assert "syntax" in str(err.value).lower()


class TestCliRuns:
    def test_convert_both_raman(self, capsys):
        code = main(["convert", "--rabi", "16.7G", "--transition", "both-raman"])
        assert code == 0
        out = json.loads(capsys.readouterr().out)
        assert out["intensity_w_cm2"] == pytest.approx(2.8, abs=0.1)

    def test_convert_round_trip(self, capsys):
        code = main(["convert", "--intensity", "3.34e-3",
                     "--transition", "cycling"])
        assert code == 0
        out = json.loads(capsys.readouterr().out)
        assert out["rabi_rad_s"] == pytest.approx(TWO_PI * 6e6, rel=1e-9)

    def test_convert_species_json(self, capsys):
        code = main(["convert", "--species-json"])
        assert code == 0
        out = json.loads(capsys.readouterr().out)
        assert out["raman_path_ratio"] == pytest.approx(3.0)
        assert out["species"]["name"] == "Rb87"

    def test_convert_needs_one_value(self, capsys):
        assert main(["convert"]) == 2
        assert main(["convert", "--rabi", "1e8", "--intensity", "1.0"]) == 2

    def test_optimum_run(self, tmp_path, capsys):
        cfg = tmp_path / "opt.json"
        cfg.write_text(json.dumps({"laser": {"rabi_0": "2pi x 200 MHz"}}))
        code = main(["optimum", "--config", str(cfg), "--out",
                     str(tmp_path / "out")])
        assert code == 0
        data = json.loads((tmp_path / "out" / "optimum.json").read_text())
        assert data["epsilon_max"] == pytest.approx(39.0, abs=2.0)

    def test_sensitivity_preset_outputs(self, tmp_path):
        code = main(["sensitivity", "--preset", "fig8", "--out",
                     str(tmp_path / "s")])
        assert code == 0
        rows = (tmp_path / "s" / "sensitivity.csv").read_text().splitlines()
        best = max(rows[1:], key=lambda r: float(r.split(",")[1]))
        n_best, eps_best, _ = best.split(",")
        assert abs(int(n_best) - 69) <= 2
        assert float(eps_best) == pytest.approx(39.0, abs=2.0)
        summary = json.loads((tmp_path / "s" / "summary.json").read_text())
        assert summary["closed_form"]["n_opt_odd"] == int(n_best)

    def test_simulate_zero_rotation_flat(self, tmp_path):
        cfg = tmp_path / "run.toml"
        cfg.write_text(FIG5_TOML.replace("rotation_rate = 276.0",
                                         "rotation_rate = 0.0"))
        out = tmp_path / "out"
        code = main(["simulate", "--config", str(cfg), "--out", str(out),
                     "--format", "csv,json"])
        assert code == 0
        metrics = json.loads((out / "metrics.json").read_text())
        assert metrics["metrics"] is None
        spatial = (out / "spatial.csv").read_text().splitlines()
        assert spatial[0] == "r_m,p_g"
        assert len(spatial) == 1 + 2048

    def test_simulate_manifest_complete_and_reproducible(self, tmp_path):
        cfg = tmp_path / "run.toml"
        cfg.write_text(FIG5_TOML)
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["simulate", "--config", str(cfg), "--out", str(out1),
                     "--format", "csv,json"]) == 0
        assert main(["simulate", "--config", str(cfg), "--out", str(out2),
                     "--format", "csv,json"]) == 0
        for name in ("spatial.csv", "fourier.csv", "metrics.json",
                     "manifest.json", "sequence.json"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
        manifest = json.loads((out1 / "manifest.json").read_text())
        derived = manifest["derived"]
        for key in ("omega_eff_rad_s", "gamma_eff_rad_s", "survival_factor",
                    "tau_s", "ladder_betas", "expected_k_omega_1_m",
                    "ensemble_weights"):
            assert key in derived
        assert derived["omega_eff_rad_s"] == pytest.approx(TWO_PI * 1e6,
                                                           rel=1e-3)

    def test_simulate_order_guardrail(self, tmp_path):
        cfg = tmp_path / "run.toml"
        cfg.write_text(FIG5_TOML.replace("order = 3", "order = 11"))
        code = main(["simulate", "--config", str(cfg), "--out",
                     str(tmp_path / "out")])
        assert code == 2

    def test_regime_violation_exit_code(self, tmp_path):
        # Delta0 only 2.5x Omega0: the elimination gate must fail with code 3
        cfg = tmp_path / "run.toml"
        cfg.write_text(FIG5_TOML.replace('"2pi x 31.6227766 MHz"',
                                         '"2pi x 200 MHz"'))
        code = main(["simulate", "--config", str(cfg), "--out",
                     str(tmp_path / "out")])
        assert code == 3

    def test_aliasing_exit_code(self, tmp_path):
        # a coarse grid cannot hold the expanded cloud: resolution error
        text = FIG5_TOML.replace("points = 2048", "points = 512") \
                        .replace("half_time = 1.5e-4", "half_time = 8e-4")
        cfg = tmp_path / "run.toml"
        cfg.write_text(text)
        code = main(["simulate", "--config", str(cfg), "--out",
                     str(tmp_path / "out")])
        assert code == 4

    def test_no_fringe_exit_code(self, tmp_path):
        # rotation far too slow for any side peak: detection error
        text = FIG5_TOML.replace("rotation_rate = 276.0",
                                 "rotation_rate = 1e-6") \
                        .replace("n_max = 8", "n_max = 0")
        cfg = tmp_path / "run.toml"
        cfg.write_text(text)
        code = main(["simulate", "--config", str(cfg), "--out",
                     str(tmp_path / "out")])
        assert code == 5

    def test_strict_mode_truncation(self, tmp_path):
        cfg = tmp_path / "run.toml"
        cfg.write_text(FIG5_TOML)
        code = main(["simulate", "--config", str(cfg), "--out",
                     str(tmp_path / "out"), "--strict"])
        assert code == 2  # n_max = 8 tail is far above the strict threshold

    def test_unknown_preset_rejected(self, capsys):
        assert main(["simulate", "--preset", "fig99"]) == 2

    def test_presets_are_valid(self):
        for name, preset in PRESETS.items():
            validate_config(preset)

    def test_svg_outputs(self, tmp_path):
        code = main(["sensitivity", "--preset", "fig8", "--out",
                     str(tmp_path / "s"), "--format", "svg"])
        assert code == 0
        svg = (tmp_path / "s" / "sensitivity.svg").read_text()
        assert svg.startswith("<?xml")
        assert "dc:date" not in svg
