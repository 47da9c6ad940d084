"""End-to-end tests of the command line interface.

Every JSON payload the CLI emits is validated against the schemas
shipped in docs/, and exit codes follow the 0/1/2 contract (success,
usage or input error, partial numerical failure).
"""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema
import numpy as np
import pytest

import snth.cli as cli_mod
from snth.cli import main
from snth.data import read_csv
from snth.distribution import SnthParams
from snth.inference import FitResult

DOCS = Path(__file__).resolve().parent.parent / "docs"

PARAMS2 = {
    "xi": [0.5, -1.0],
    "omega": [1.5, 2.0],
    "psi_bar": [[1.0, 0.4], [0.4, 1.0]],
    "eta": [1.2, -0.8],
    "h": [0.05, 0.1],
}


def _schema(name):
    with open(DOCS / name, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _validate(payload, schema_name):
    jsonschema.validate(payload, _schema(schema_name),
                        cls=jsonschema.Draft202012Validator)


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def params_file(tmp_path):
    f = tmp_path / "params.json"
    f.write_text(json.dumps(PARAMS2))
    return str(f)


@pytest.fixture()
def sample_csv(tmp_path, params_file, capsys):
    code, out, _ = run_cli(["simulate", "--params", params_file,
                            "--n", "400", "--seed", "7"], capsys)
    assert code == 0
    f = tmp_path / "sample.csv"
    f.write_text(out)
    return str(f)


class TestSimulate:
    def test_emits_reproducible_csv(self, params_file, capsys, tmp_path):
        code1, out1, _ = run_cli(["simulate", "--params", params_file,
                                  "--n", "25", "--seed", "3"], capsys)
        code2, out2, _ = run_cli(["simulate", "--params", params_file,
                                  "--n", "25", "--seed", "3"], capsys)
        assert code1 == 0 and code2 == 0
        assert out1 == out2
        f = tmp_path / "x.csv"
        f.write_text(out1)
        d = read_csv(f)
        assert d.shape == (25, 2)
        assert d.columns == ("y1", "y2")

    def test_seed_random_changes_output(self, params_file, capsys):
        _, out1, _ = run_cli(["simulate", "--params", params_file,
                              "--n", "10", "--seed", "random"], capsys)
        _, out2, _ = run_cli(["simulate", "--params", params_file,
                              "--n", "10", "--seed", "random"], capsys)
        assert out1 != out2

    def test_inline_parameter_flags(self, capsys):
        code, out, _ = run_cli(["simulate", "--xi", "0,1", "--eta", "1,-1",
                                "--h", "0.05,0.1", "--omega", "2,3",
                                "--psi", "1,0.4;0.4,1", "--n", "5"], capsys)
        assert code == 0
        assert out.startswith("y1,y2\n")
        assert len(out.strip().splitlines()) == 6

    def test_zero_rows_is_usage_error(self, params_file, capsys):
        code, _, err = run_cli(["simulate", "--params", params_file,
                                "--n", "0"], capsys)
        assert code == 1

    def test_malformed_params_json(self, tmp_path, capsys):
        f = tmp_path / "bad.json"
        f.write_text('{"xi": [0,')
        code, _, err = run_cli(["simulate", "--params", str(f),
                                "--n", "5"], capsys)
        assert code == 1
        assert "JSON" in err

    def test_invalid_parameter_values(self, tmp_path, capsys):
        f = tmp_path / "neg.json"
        f.write_text(json.dumps({**PARAMS2, "omega": [1.0, -2.0]}))
        code, _, err = run_cli(["simulate", "--params", str(f),
                                "--n", "5"], capsys)
        assert code == 1

    def test_bad_seed_string(self, params_file, capsys):
        code, _, err = run_cli(["simulate", "--params", params_file,
                                "--n", "5", "--seed", "maybe"], capsys)
        assert code == 1
        assert "seed" in err


class TestFit:
    def test_roundtrip_and_schema(self, sample_csv, capsys, tmp_path):
        out_file = tmp_path / "fit.json"
        code, out, _ = run_cli(["fit", "--input", sample_csv,
                                "--seed", "1", "--json-out",
                                str(out_file)], capsys)
        assert code == 0
        payload = json.loads(out)
        _validate(payload, "fit_result.schema.json")
        _validate(payload["params"], "params.schema.json")
        assert payload["stage"] == "joint_mle"
        assert payload["converged"] is True
        assert payload["n_rows"] == 400
        assert payload["n_dropped_rows"] == 0
        assert payload["wall_time_s"] > 0
        # the file copy matches stdout
        assert json.loads(out_file.read_text()) == payload
        # loose recovery sanity on the simulated truth
        assert np.allclose(payload["params"]["xi"], PARAMS2["xi"], atol=1.0)
        assert np.allclose(payload["params"]["h"], PARAMS2["h"], atol=0.12)

    def test_no_joint_stops_at_em(self, sample_csv, capsys):
        code, out, _ = run_cli(["fit", "--input", sample_csv,
                                "--no-joint"], capsys)
        payload = json.loads(out)
        _validate(payload, "fit_result.schema.json")
        assert payload["stage"] == "marginal_em"
        assert payload["stderr"] is None
        assert payload["em_iterations"] >= 1

    def test_dropped_rows_are_counted(self, tmp_path, capsys):
        rng = np.random.default_rng(5)
        rows = ["a,b"] + [f"{x:.6f},{y:.6f}"
                          for x, y in rng.standard_normal((60, 2))]
        rows.insert(10, ",1.0")
        f = tmp_path / "gappy.csv"
        f.write_text("\n".join(rows) + "\n")
        code, out, _ = run_cli(["fit", "--input", str(f),
                                "--no-joint"], capsys)
        assert code == 0
        payload = json.loads(out)
        assert payload["n_rows"] == 60
        assert payload["n_dropped_rows"] == 1

    def test_missing_file_is_input_error(self, capsys):
        code, _, err = run_cli(["fit", "--input", "/nope/missing.csv"],
                               capsys)
        assert code == 1
        assert "cannot read" in err

    def test_non_numeric_input_is_input_error(self, tmp_path, capsys):
        f = tmp_path / "text.csv"
        f.write_text("a,b\nfoo,bar\nbaz,qux\n")
        code, _, _ = run_cli(["fit", "--input", str(f)], capsys)
        assert code == 1

    def test_partial_failure_exits_two_with_payload(self, sample_csv,
                                                    capsys, monkeypatch):
        real_fit = cli_mod.fit

        def not_converged(data, config):
            r = real_fit(data, config)
            return FitResult(params=r.params, stderr=None, loglik=r.loglik,
                             aic=r.aic, stage=r.stage, em_trace=r.em_trace,
                             converged=False)

        monkeypatch.setattr(cli_mod, "fit", not_converged)
        code, out, _ = run_cli(["fit", "--input", sample_csv], capsys)
        assert code == 2
        payload = json.loads(out)  # partial result still emitted
        _validate(payload, "fit_result.schema.json")
        assert payload["converged"] is False


class TestGrid:
    def test_csv_surface_and_levels(self, params_file, capsys, tmp_path):
        lv_file = tmp_path / "levels.json"
        code, out, _ = run_cli(["grid", "--params", params_file,
                                "--range", "-16:16:65",
                                "--range", "-24:20:67",
                                "--levels", "0.5,0.9",
                                "--json-out", str(lv_file)], capsys)
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "x,y,pdf"
        assert len(lines) == 1 + 65 * 67
        table = np.array([[float(c) for c in ln.split(",")]
                          for ln in lines[1:]])
        dx = (16 - (-16)) / 64
        dy = (20 - (-24)) / 66
        mass = table[:, 2].sum() * dx * dy
        assert abs(mass - 1.0) < 0.01  # box holds nearly all probability
        payload = json.loads(lv_file.read_text())
        _validate(payload, "levels.schema.json")
        for row in payload["levels"]:
            # threshold really encloses ~ the requested probability
            inside = table[table[:, 2] >= row["threshold"], 2].sum()
            assert abs(inside * dx * dy - row["coverage"]) < 0.03

    def test_single_range_covers_both_axes(self, params_file, capsys):
        code, out, _ = run_cli(["grid", "--params", params_file,
                                "--range", "-5:5:11"], capsys)
        assert code == 0
        assert len(out.strip().splitlines()) == 1 + 11 * 11

    def test_accepts_fit_result_payload(self, sample_csv, capsys, tmp_path):
        # the fit --json-out file should feed grid/simulate directly
        fit_file = tmp_path / "fit.json"
        code, _, _ = run_cli(["fit", "--input", sample_csv,
                              "--json-out", str(fit_file)], capsys)
        assert code == 0
        code, out, _ = run_cli(["grid", "--params", str(fit_file),
                                "--range", "-5:5:9"], capsys)
        assert code == 0
        assert len(out.strip().splitlines()) == 1 + 9 * 9

    def test_trivariate_marginalizes_pair(self, tmp_path, capsys):
        p3 = {
            "xi": [0.8, -0.6, 1.3],
            "omega": [3.0, 5.0, 2.0],
            "psi_bar": [[1.0, -0.5, 0.3], [-0.5, 1.0, -0.2],
                        [0.3, -0.2, 1.0]],
            "eta": [-1.5, 2.0, 0.5],
            "h": [0.02, 0.08, 0.03],
        }
        f = tmp_path / "p3.json"
        f.write_text(json.dumps(p3))
        code, out, _ = run_cli(["grid", "--params", str(f),
                                "--pair", "0,2",
                                "--range", "-30:30:21"], capsys)
        assert code == 0
        table = np.array([[float(c) for c in ln.split(",")]
                          for ln in out.strip().splitlines()[1:]])
        # marginalized surface must match the bivariate marginal density
        from snth.distribution import snth_log_pdf, snth_marginal
        marg = snth_marginal(SnthParams(
            xi=np.array(p3["xi"]), omega_diag=np.array(p3["omega"]),
            psi_bar=np.array(p3["psi_bar"]), eta=np.array(p3["eta"]),
            h=np.array(p3["h"])), [0, 2])
        ref = np.exp(snth_log_pdf(table[:, :2], marg))
        assert np.allclose(table[:, 2], ref, rtol=1e-12)

    def test_bad_range_is_usage_error(self, params_file, capsys):
        for spec in ("5:1:10", "0:1:1", "a:b:c", "0:1"):
            code, _, err = run_cli(["grid", "--params", params_file,
                                    "--range", spec], capsys)
            assert code == 1, spec

    def test_bad_pair_is_usage_error(self, params_file, capsys):
        code, _, _ = run_cli(["grid", "--params", params_file,
                              "--pair", "0,5", "--range", "-1:1:5"],
                             capsys)
        assert code == 1

    def test_univariate_params_rejected(self, tmp_path, capsys):
        f = tmp_path / "p1.json"
        f.write_text(json.dumps({"xi": [0.0], "omega": [1.0],
                                 "psi_bar": [[1.0]], "eta": [0.5],
                                 "h": [0.1]}))
        code, _, _ = run_cli(["grid", "--params", str(f),
                              "--range", "-1:1:5"], capsys)
        assert code == 1


class TestTestCommand:
    def test_gaussian_null_json(self, tmp_path, capsys):
        rng = np.random.default_rng(11)
        f = tmp_path / "gauss.csv"
        np.savetxt(f, rng.standard_normal((300, 2)), delimiter=",",
                   fmt="%.10g")
        code, out, _ = run_cli(["test", "--input", str(f),
                                "--mode", "joint"], capsys)
        assert code == 0
        payload = json.loads(out)
        _validate(payload, "test_result.schema.json")
        assert payload["mode"] == "joint_bonferroni"
        assert payload["df"] == 2
        assert payload["p_value"] > 0.001

    def test_alternative_rejects(self, sample_csv, capsys):
        code, out, _ = run_cli(["test", "--input", sample_csv,
                                "--mode", "eta"], capsys)
        assert code == 0
        payload = json.loads(out)
        _validate(payload, "test_result.schema.json")
        assert payload["mode"] == "eta_given_h"
        assert payload["p_value"] < 0.01

    def test_invalid_mode_is_usage_error(self, sample_csv, capsys):
        code, _, err = run_cli(["test", "--input", sample_csv,
                                "--mode", "bogus"], capsys)
        assert code == 1
        assert "Invalid value" in err


class TestEntryPoint:
    def test_unknown_command(self, capsys):
        code, _, err = run_cli(["frobnicate"], capsys)
        assert code == 1

    def test_help_exits_zero(self, capsys):
        code, out, _ = run_cli(["--help"], capsys)
        assert code == 0
        assert "fit" in out and "simulate" in out
