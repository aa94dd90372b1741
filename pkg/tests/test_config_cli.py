"""Experiment file parsing, preset fidelity, CLI behavior and exit codes."""

import math

import numpy as np
import pytest

from fransonsim import ConfigParseError, parse_experiment, preset_experiment
from fransonsim.cli import main

FULL_CONFIG = """\
[spectrum]
model = sinc2
fwhm_nm = 1.6
center_wavelength_nm = 1560
span_radps = 11.6

[signal_arm]
delta_t_ns = 4.77
phase_rad = 0.0
long = SMF:2875.0
short = SMF:1900.0

[idler_arm]
delta_t_ns = 4.77
phase_rad = 0.0
long = LEAF:2695.0, SMF:180.0
short = SMF:1900.0

[noise]
alpha = 0.0024

[detector]
efficiency = 0.2
gate_rate_mhz = 628.5
dark_prob = 2e-6
afterpulse_prob = 0.06
jitter_rms_ps = 100.0

[run]
seed = 7
gates = 100000
batches = 5
phases = 16
method = integral
"""


class TestParseExperiment:
    def test_full_document(self):
        exp = parse_experiment(FULL_CONFIG)
        assert exp.noise.alpha == 0.0024
        assert exp.detector.gate_rate_mhz == 628.5
        assert exp.run.seed == 7
        assert exp.run.phases == 16
        sig = exp.franson.signal_arm
        assert sig.delta_t_ns == 4.77
        assert sig.long.segments[0].fiber.name == "SMF"
        assert sig.long.segments[0].length_mm == 2875.0
        idl = exp.franson.idler_arm
        assert [s.fiber.name for s in idl.long.segments] == ["LEAF", "SMF"]
        assert exp.franson.spectrum.model == "sinc2"

    def test_defaults_for_optional_sections(self):
        text = "\n".join(
            FULL_CONFIG.splitlines()[:17]
        )  # spectrum + arms only, drop noise/detector/run
        exp = parse_experiment(text)
        assert exp.noise.alpha == 0.0
        assert exp.detector.efficiency == 0.20
        assert exp.run.method == "integral"

    def test_unknown_key_rejected_with_line(self):
        bad = FULL_CONFIG.replace("alpha = 0.0024", "alpha = 0.0024\nbeta = 1")
        with pytest.raises(ConfigParseError) as exc_info:
            parse_experiment(bad)
        assert "beta" in str(exc_info.value)
        assert "line" in str(exc_info.value)

    def test_unknown_section_rejected(self):
        with pytest.raises(ConfigParseError):
            parse_experiment(FULL_CONFIG + "\n[pump]\npower_mw = 1\n")

    def test_missing_required_section(self):
        with pytest.raises(ConfigParseError):
            parse_experiment("[spectrum]\nmodel = sinc2\nfwhm_nm = 1.6\n")

    def test_non_numeric_value(self):
        with pytest.raises(ConfigParseError):
            parse_experiment(FULL_CONFIG.replace("alpha = 0.0024", "alpha = lots"))

    def test_unknown_fiber(self):
        with pytest.raises(ConfigParseError) as exc_info:
            parse_experiment(FULL_CONFIG.replace("SMF:2875.0", "PCF:2875.0"))
        assert "PCF" in str(exc_info.value)

    def test_tabulated_spectrum_file(self, tmp_path):
        csv = tmp_path / "meas.csv"
        lam = np.linspace(1556, 1564, 101)
        sigma = 1.6 / (2 * math.sqrt(2 * math.log(2)))
        rows = "\n".join(
            f"{l},{math.exp(-((l - 1560.0) ** 2) / (2 * sigma ** 2))}" for l in lam
        )
        csv.write_text("wavelength_nm,intensity\n" + rows + "\n")
        text = FULL_CONFIG.replace(
            "model = sinc2\nfwhm_nm = 1.6\ncenter_wavelength_nm = 1560\nspan_radps = 11.6",
            f"model = tabulated\nfile = {csv}\ncenter_wavelength_nm = 1560",
        )
        exp = parse_experiment(text)
        assert exp.franson.spectrum.model == "tabulated"
        assert abs(exp.franson.spectrum.integral() - 1.0) <= 1e-9

    def test_filter_keys(self):
        text = FULL_CONFIG.replace(
            "span_radps = 11.6", "span_radps = 11.6\nfilter_fwhm_nm = 0.36\nfilter_shape = flattop"
        )
        exp = parse_experiment(text)
        assert exp.franson.spectrum.passband_fraction < 0.5


class TestPresetFidelity:
    def test_shared_parameters(self):
        for name in ("fig4a", "fig4b", "fig4c", "fig4d"):
            exp = preset_experiment(name)
            assert exp.franson.signal_arm.delta_t_ns == 4.77
            assert exp.franson.idler_arm.delta_t_ns == 4.77
            assert exp.noise.alpha == 0.0024
            assert exp.detector.efficiency == 0.20
            assert exp.detector.gate_rate_mhz == 628.5
            assert exp.detector.dark_prob == 2e-6
            assert exp.detector.afterpulse_prob == 0.06
            assert exp.franson.spectrum.fwhm_nm == 1.6
            assert exp.franson.spectrum.center_wavelength_nm == 1560.0

    def test_fig4a_arms_all_smf(self):
        exp = preset_experiment("fig4a")
        for arm in (exp.franson.signal_arm, exp.franson.idler_arm):
            assert {s.fiber.name for s in arm.long.segments + arm.short.segments} == {"SMF"}
            d = arm.differential()
            assert d.d_beta2_l_ps2 == pytest.approx(-22.5 * 975.0 * 1e-6, rel=1e-12)

    def test_fig4b_filter(self):
        exp = preset_experiment("fig4b")
        s = exp.franson.spectrum
        assert s.passband_fraction < 0.5
        from fransonsim import width_nm_to_radps

        assert s.fwhm_radps() / width_nm_to_radps(1.0, 1560.0) == pytest.approx(0.36, rel=0.02)

    def test_fig4c_both_arms_null(self):
        exp = preset_experiment("fig4c")
        for arm in (exp.franson.signal_arm, exp.franson.idler_arm):
            assert abs(arm.differential().d_beta2_l_ps2) <= 1e-10

    def test_fig4d_published_lengths(self):
        exp = preset_experiment("fig4d")
        idl = exp.franson.idler_arm
        assert [(s.fiber.name, s.length_mm) for s in idl.long.segments] == [
            ("LEAF", 2695.0),
            ("SMF", 180.0),
        ]
        assert [(s.fiber.name, s.length_mm) for s in idl.short.segments] == [("SMF", 1900.0)]
        assert idl.differential().d_beta2_l_ps2 == pytest.approx(2.201795e-2, rel=1e-12)
        sig = exp.franson.signal_arm
        assert sig.differential().d_beta2_l_ps2 == pytest.approx(-2.19375e-2, rel=1e-12)

    def test_unknown_preset(self):
        from fransonsim import ConfigurationError

        with pytest.raises(ConfigurationError):
            preset_experiment("fig5")


class TestCli:
    def test_presets_list(self, capsys):
        assert main(["presets", "list"]) == 0
        out = capsys.readouterr().out
        for name in ("fig4a", "fig4b", "fig4c", "fig4d"):
            assert name in out

    def _value(self, out, key):
        for line in out.splitlines():
            if line.startswith(key):
                return float(line.split()[-1])
        raise AssertionError(f"{key} not in output:\n{out}")

    def test_visibility_fig4c(self, capsys):
        assert main(["visibility", "--preset", "fig4c"]) == 0
        out = capsys.readouterr().out
        assert abs(self._value(out, "observed_visibility") - 0.9976) <= 5e-4

    def test_visibility_fig4d_matches_fig4c(self, capsys):
        main(["visibility", "--preset", "fig4c"])
        v_c = self._value(capsys.readouterr().out, "observed_visibility")
        main(["visibility", "--preset", "fig4d"])
        v_d = self._value(capsys.readouterr().out, "observed_visibility")
        assert abs(v_c - v_d) <= 1e-4

    def test_visibility_fig4a_band(self, capsys):
        assert main(["visibility", "--preset", "fig4a"]) == 0
        out = capsys.readouterr().out
        assert 0.980 <= self._value(out, "observed_visibility") <= 0.988

    def test_visibility_reports_passband(self, capsys):
        main(["visibility", "--preset", "fig4b"])
        out = capsys.readouterr().out
        assert "passband_fraction" in out

    def test_config_file_input(self, tmp_path, capsys):
        cfg = tmp_path / "exp.ini"
        cfg.write_text(FULL_CONFIG)
        assert main(["visibility", "--config", str(cfg)]) == 0

    def test_requires_exactly_one_source(self, capsys):
        assert main(["visibility"]) == 2
        assert main(["visibility", "--preset", "fig4a", "--config", "x.ini"]) == 2

    def test_fringe_csv_deterministic(self, tmp_path):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["fringe", "--preset", "fig4a", "--points", "64", "--out", str(out1)]) == 0
        assert main(["fringe", "--preset", "fig4a", "--points", "64", "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        lines = out1.read_text().splitlines()
        assert lines[0] == "phi_rad,coincidence_rate"
        assert len(lines) == 65

    def test_alpha_sweep_csv_and_fit(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        code = main(["alpha-sweep", "--preset", "fig4c", "--out", str(out)])
        assert code == 0
        report = capsys.readouterr().out
        slope = self._value(report, "fitted_slope_analytic")
        intercept = self._value(report, "fitted_intercept_analytic")
        assert slope == pytest.approx(-1.0, abs=0.01)
        assert intercept == pytest.approx(1.0, abs=0.001)
        lines = out.read_text().splitlines()
        assert lines[0] == "alpha,V_analytic,V_montecarlo,sigma_mc"
        alphas = [float(l.split(",")[0]) for l in lines[1:]]
        assert alphas == sorted(alphas)

    def test_alpha_sweep_empty_list(self, capsys):
        assert main(["alpha-sweep", "--preset", "fig4c", "--alphas", ""]) == 2

    def test_alpha_sweep_fig4a_intercept(self, capsys):
        assert main(["alpha-sweep", "--preset", "fig4a"]) == 0
        out = capsys.readouterr().out
        assert abs(self._value(out, "fitted_intercept_analytic") - 0.987) <= 0.007

    def test_alpha_sweep_montecarlo_columns(self, tmp_path, capsys):
        out = tmp_path / "sweep_mc.csv"
        code = main(
            [
                "alpha-sweep", "--preset", "fig4c", "--montecarlo",
                "--alphas", "0.01,0.04",
                "--gates", "64000", "--batches", "2", "--phases", "8",
                "--seed", "2", "--out", str(out),
            ]
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 3
        for line in lines[1:]:
            fields = line.split(",")
            assert "nan" not in fields[2]
        assert "fitted_slope_montecarlo" in capsys.readouterr().out

    def test_montecarlo_exports(self, tmp_path, capsys):
        events = tmp_path / "ev.csv"
        hist = tmp_path / "hist.csv"
        fringe = tmp_path / "fringe.csv"
        code = main(
            [
                "montecarlo", "--preset", "fig4c",
                "--gates", "160000", "--batches", "2", "--phases", "8",
                "--seed", "3",
                "--out", str(fringe), "--events", str(events), "--histogram", str(hist),
            ]
        )
        assert code == 0
        assert events.read_text().startswith("detector,gate_index")
        assert hist.read_text().startswith("offset,counts")
        assert fringe.read_text().startswith("phi_rad,offset_-3")

    def test_montecarlo_statistics_error(self, tmp_path, capsys):
        cfg = tmp_path / "quiet.ini"
        cfg.write_text(FULL_CONFIG.replace("alpha = 0.0024", "alpha = 0.0"))
        code = main(
            ["montecarlo", "--config", str(cfg), "--gates", "16000", "--batches", "2"]
        )
        assert code == 5

    def test_design_roundtrip(self, tmp_path, capsys):
        prob = tmp_path / "problem.ini"
        prob.write_text(
            "[problem]\ntarget_d_beta2_l_ps2 = 0.022018\ndelta_t_ns = 4.77\n"
            "short_fiber = SMF\nshort_length_mm = 1900.0\nlong_fibers = LEAF, SMF\n"
        )
        assert main(["design", "--problem", str(prob), "--emit-arm", "idler_arm"]) == 0
        out = capsys.readouterr().out
        assert abs(self._value(out, "residual_d_beta2_l_ps2")) <= 1e-5
        assert "[idler_arm]" in out

    def test_design_infeasible_exit_code(self, tmp_path, capsys):
        prob = tmp_path / "problem.ini"
        prob.write_text(
            "[problem]\ntarget_d_beta2_l_ps2 = 1.0\ndelta_t_ns = 4.77\n"
            "short_fiber = SMF\nshort_length_mm = 1900.0\nlong_fibers = LEAF, SMF\n"
        )
        assert main(["design", "--problem", str(prob)]) == 4

    def test_design_singular_exit_code(self, tmp_path, capsys):
        prob = tmp_path / "problem.ini"
        prob.write_text(
            "[problem]\ntarget_d_beta2_l_ps2 = 0.0\ndelta_t_ns = 4.77\n"
            "short_fiber = SMF\nshort_length_mm = 1900.0\nlong_fibers = SMF, SMF\n"
        )
        assert main(["design", "--problem", str(prob)]) == 3

    def test_parse_error_exit_code(self, tmp_path, capsys):
        cfg = tmp_path / "broken.ini"
        cfg.write_text(FULL_CONFIG.replace("alpha = 0.0024", "alpha = often"))
        assert main(["visibility", "--config", str(cfg)]) == 2
        assert "error" in capsys.readouterr().err

    def test_physics_error_exit_code(self, tmp_path, capsys):
        cfg = tmp_path / "mismatch.ini"
        cfg.write_text(FULL_CONFIG.replace("delta_t_ns = 4.77\nphase_rad = 0.0\nlong = SMF:2875.0", "delta_t_ns = 4.80\nphase_rad = 0.0\nlong = SMF:2875.0"))
        assert main(["visibility", "--config", str(cfg)]) == 3
