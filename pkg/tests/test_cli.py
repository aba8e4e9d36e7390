"""CLI: configuration, subcommands, output formats, exit codes."""

import json

import numpy as np
import pytest

from stiraplink.cli import (
    EXIT_CONFIG,
    EXIT_INFEASIBLE,
    EXIT_OK,
    ConfigError,
    ExperimentConfig,
    main,
)

FAST_SCHEDULE = {"n_points": 801}


def write_config(path, **overrides):
    payload = {"schedule": FAST_SCHEDULE}
    payload.update(overrides)
    path.write_text(json.dumps(payload))
    return str(path)


def read_csv(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    rows = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    return header, rows


class TestConfig:
    def test_defaults_reproduce_reference_parameters(self):
        config = ExperimentConfig.default()
        assert config.params.sigma * config.params.gamma == 10.0
        assert config.params.gamma * (config.params.t_max - config.params.t0) == 25.0
        assert config.params.delta1 == config.params.delta2 == 0.0
        assert abs(config.channel.alpha) == 1.0
        assert config.fig3_omegas == (2.0, 5.0, 10.0)

    def test_full_config_round_trip(self, tmp_path):
        payload = {
            "params": {
                "gamma": 2.0, "omega": 16.0, "delta1": 0.5, "delta2": -0.5,
                "sigma": 5.0, "t0": 1.0, "t_max": 13.5, "t_end": 26.0,
            },
            "channel": {"alpha_re": 0.6, "alpha_im": 0.3, "tau": 2.5},
            "schedule": {"target": "gaussian", "n_points": 1001,
                         "denominator_floor": 1e-5},
            "sweeps": {"fig3_omegas": [3, 9], "fig4_omegas": [4, 8],
                       "hscan_omegas": [6, 12]},
            "output_dir": "elsewhere",
            "seed": 7,
        }
        path = tmp_path / "full.json"
        path.write_text(json.dumps(payload))
        config = ExperimentConfig.from_file(path)
        assert config.params.gamma == 2.0 and config.params.omega == 16.0
        assert config.params.delta2 == -0.5 and config.params.t0 == 1.0
        assert config.channel.alpha == 0.6 + 0.3j and config.channel.tau == 2.5
        assert config.n_points == 1001 and config.denominator_floor == 1e-5
        assert config.fig3_omegas == (3.0, 9.0)
        assert config.fig4_omegas == (4.0, 8.0)
        assert config.hscan_omegas == (6.0, 12.0)
        assert config.output_dir == "elsewhere" and config.seed == 7

    def test_unknown_top_level_key_rejected(self):
        with pytest.raises(ConfigError, match="unknown keys"):
            ExperimentConfig.from_dict({"paramz": {}})

    def test_unknown_nested_key_rejected(self):
        with pytest.raises(ConfigError, match="unknown keys"):
            ExperimentConfig.from_dict({"params": {"gamma": 1.0, "Gamma": 2.0}})
        with pytest.raises(ConfigError, match="unknown keys"):
            ExperimentConfig.from_dict({"channel": {"alpha": 1.0}})

    def test_invalid_sigma_exits_with_validation_code(self, tmp_path):
        cfg = write_config(tmp_path / "c.json", params={"sigma": -1.0})
        assert main(["--config", cfg, "--out", str(tmp_path / "o"), "design"]) == EXIT_CONFIG

    def test_bad_json_rejected(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text("{not json")
        assert main(["--config", str(path), "design"]) == EXIT_CONFIG


class TestDesign:
    def test_schedule_csv_shape(self, tmp_path):
        out = tmp_path / "out"
        assert main(["--out", str(out), "design"]) == EXIT_OK
        text = (out / "schedule.csv").read_text(encoding="utf-8")
        lines = text.splitlines()
        assert lines[0] == "t,theta,omega1,omega2"
        assert len(lines) == 4002  # header + default grid
        assert "\r" not in text
        report = json.loads((out / "adiabaticity.json").read_text())
        assert report["passes"] is True

    def test_rerun_byte_identical(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        cfg = write_config(tmp_path / "c.json")
        assert main(["--config", cfg, "--out", str(a), "design"]) == EXIT_OK
        assert main(["--config", cfg, "--out", str(b), "design"]) == EXIT_OK
        assert (a / "schedule.csv").read_bytes() == (b / "schedule.csv").read_bytes()
        assert (a / "target_envelope.csv").read_bytes() == (b / "target_envelope.csv").read_bytes()

    def test_reload_and_reemit_byte_identical(self, tmp_path):
        # 17 significant digits: parse -> format is the identity after the
        # first write.
        out = tmp_path / "out"
        cfg = write_config(tmp_path / "c.json")
        main(["--config", cfg, "--out", str(out), "design"])
        path = out / "schedule.csv"
        original = path.read_text(encoding="utf-8")
        lines = original.splitlines()
        rewritten = [lines[0]]
        for line in lines[1:]:
            rewritten.append(",".join(format(float(v), ".16e") for v in line.split(",")))
        assert "\n".join(rewritten) + "\n" == original

    @pytest.mark.filterwarnings("ignore:sigma")
    def test_infeasible_design_exit_code_and_message(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path / "c.json",
            params={"sigma": 0.1, "t_max": 2.0, "t_end": 4.0},
        )
        code = main(["--config", cfg, "--out", str(tmp_path / "o"), "design"])
        assert code == EXIT_INFEASIBLE
        err = capsys.readouterr().err
        assert "infeasible" in err and "t=" in err


class TestFig3:
    def test_outputs(self, tmp_path):
        out = tmp_path / "out"
        cfg = write_config(tmp_path / "c.json")
        assert main(["--config", cfg, "--out", str(out), "fig3", "--omegas", "2,5"]) == EXIT_OK
        header, rows = read_csv(out / "fig3_omega_2.csv")
        assert header == ["t", "P_g1", "P_g2_coherent", "P_h", "P_r", "Re_f", "Im_f"]
        assert rows.shape == (801, 7)
        assert (out / "fig3_ideal.csv").exists()
        summary = json.loads((out / "fig3_summary.json").read_text())
        assert summary["l_inf_to_ideal"]["2"] > summary["l_inf_to_ideal"]["5"]
        assert summary["ideal_peak"] == pytest.approx(np.sqrt(2.0 / (np.pi * 100.0)), rel=1e-3)

    def test_empty_omega_list_rejected(self, tmp_path):
        cfg = write_config(tmp_path / "c.json")
        code = main(["--config", cfg, "--out", str(tmp_path / "o"), "fig3", "--omegas", ""])
        assert code == EXIT_CONFIG


class TestFig4:
    def test_zero_channel_gives_zero_success(self, tmp_path):
        out = tmp_path / "out"
        cfg = write_config(tmp_path / "c.json")
        code = main(
            ["--config", cfg, "--out", str(out), "fig4", "--omegas", "2,5", "--alpha", "0"]
        )
        assert code == EXIT_OK
        header, rows = read_csv(out / "fig4_success.csv")
        assert header == ["omega_over_gamma", "success_probability"]
        assert np.all(rows[:, 1] == 0.0)

    def test_rerun_byte_identical(self, tmp_path):
        cfg = write_config(tmp_path / "c.json")
        a, b = tmp_path / "a", tmp_path / "b"
        for dest in (a, b):
            assert main(
                ["--config", cfg, "--out", str(dest), "fig4", "--omegas", "2,5"]
            ) == EXIT_OK
        assert (a / "fig4_success.csv").read_bytes() == (b / "fig4_success.csv").read_bytes()
        summary = json.loads((a / "fig4_summary.json").read_text())
        assert summary["strictly_increasing"] is True

    def test_receiver_shift_degrades_success(self, tmp_path):
        cfg = write_config(tmp_path / "c.json")
        results = {}
        for name, args in (("mirror", []), ("late", ["--receiver-shift", "5.0"])):
            out = tmp_path / name
            assert main(
                ["--config", cfg, "--out", str(out), "fig4", "--omegas", "10", *args]
            ) == EXIT_OK
            _, rows = read_csv(out / "fig4_success.csv")
            results[name] = rows[0, 1]
        assert results["late"] < results["mirror"]

    def test_csv_round_trip_lossless(self, tmp_path):
        out = tmp_path / "out"
        cfg = write_config(tmp_path / "c.json")
        main(["--config", cfg, "--out", str(out), "fig4", "--omegas", "3"])
        _, rows = read_csv(out / "fig4_success.csv")
        from stiraplink.core import PhysicalParams
        from stiraplink.transfer_protocol import ChannelModel, sweep_omega

        curve = sweep_omega([3.0], PhysicalParams.reference(), ChannelModel(alpha=1.0 + 0.0j), 801)
        assert rows[0, 1] == curve[0][1]  # exact equality through the text format


class TestTransfer:
    def test_polarization_loss_separation(self, tmp_path):
        cfg = write_config(tmp_path / "c.json")
        outs = {}
        for name, alpha in (("full", "1"), ("lossy", str(np.sqrt(0.3)))):
            out = tmp_path / name
            code = main(
                [
                    "--config", cfg, "--out", str(out),
                    "transfer", "--protocol", "polarization",
                    "--qubit-a", "0.6", "--qubit-b", "0.8", "--alpha", alpha,
                ]
            )
            assert code == EXIT_OK
            outs[name] = json.loads((out / "transfer_polarization.json").read_text())
        assert outs["full"]["fidelity"] == pytest.approx(outs["lossy"]["fidelity"], abs=1e-9)
        assert outs["lossy"]["success_probability"] == pytest.approx(
            0.3 * outs["full"]["success_probability"], abs=1e-9
        )
        assert outs["full"]["heralded"] is True

    def test_simple_pure_b(self, tmp_path):
        out = tmp_path / "out"
        cfg = write_config(tmp_path / "c.json")
        code = main(
            ["--config", cfg, "--out", str(out), "transfer",
             "--protocol", "simple", "--qubit-a", "0", "--qubit-b", "1"]
        )
        assert code == EXIT_OK
        payload = json.loads((out / "transfer_simple.json").read_text())
        assert payload["fidelity"] == pytest.approx(1.0, abs=1e-12)
        assert payload["heralded"] is False
        assert sum(payload["branch_probabilities"].values()) == pytest.approx(1.0, abs=1e-9)

    def test_unnormalised_qubit_rejected(self, tmp_path):
        cfg = write_config(tmp_path / "c.json")
        code = main(
            ["--config", cfg, "--out", str(tmp_path / "o"), "transfer",
             "--qubit-a", "1", "--qubit-b", "1"]
        )
        assert code == EXIT_CONFIG

    def test_unparseable_amplitude_rejected(self, tmp_path):
        cfg = write_config(tmp_path / "c.json")
        code = main(
            ["--config", cfg, "--out", str(tmp_path / "o"), "transfer",
             "--qubit-a", "zzz", "--qubit-b", "0"]
        )
        assert code == EXIT_CONFIG


class TestHscanValidate:
    def test_hscan_outputs(self, tmp_path):
        out = tmp_path / "out"
        cfg = write_config(tmp_path / "c.json")
        assert main(["--config", cfg, "--out", str(out), "hscan", "--omegas", "5,10"]) == EXIT_OK
        header, rows = read_csv(out / "hscan.csv")
        assert header == ["omega_over_gamma", "max_h_population"]
        assert rows[0, 1] > rows[1, 1] > 0.0
        summary = json.loads((out / "hscan_summary.json").read_text())
        assert "loglog_slope" in summary

    def test_validate_writes_report(self, tmp_path):
        out = tmp_path / "out"
        cfg = write_config(tmp_path / "c.json")
        assert main(["--config", cfg, "--out", str(out), "validate"]) == EXIT_OK
        report = json.loads((out / "adiabaticity.json").read_text())
        assert set(report) == {
            "max_theta_dot", "bound_plus", "bound_minus",
            "margin_ratio", "threshold", "passes",
        }

    def test_unknown_subcommand_is_config_error(self):
        assert main(["frobnicate"]) == EXIT_CONFIG
