import json
import math

import pytest

from cli.commands.output import manifest_path, number
from cli.manifest import RunManifest, canonical_json, sha256_hex
from tests.base import BaseCliTest


class TestSweep(BaseCliTest):

    def test_rational_point_has_no_witness(self, run):
        code, out, _ = run("sweep", "--ab-min", 0.5, "--ab-max", 2.0, "--steps", 4, "--qmax", 20)
        header, rows = self.read_csv(out)

        assert code == 0
        assert header == ["sqrt_ab", "dof_eq36", "dof_eq53", "best_p", "best_q", "best_gamma"]
        assert [float(row[0]) for row in rows] == [0.5, 1.0, 1.5, 2.0]
        assert float(rows[1][1]) == 0.0
        assert rows[1][3:] == ["", "", ""]

    def test_three_halves(self, run):
        _, out, _ = run("sweep", "--ab-min", 1.4, "--ab-max", 1.6, "--steps", 3)
        _, rows = self.read_csv(out)

        assert float(rows[1][1]) == pytest.approx(0.1099, abs=1e-4)
        assert (rows[1][3], rows[1][4]) == ("1", "1")

    def test_rerun_is_byte_identical(self, run, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"

        run("sweep", "--ab-min", 0.6, "--ab-max", 1.9, "--steps", 25, "--out", first)
        run("sweep", "--ab-min", 0.6, "--ab-max", 1.9, "--steps", 25, "--out", second)

        assert first.read_bytes() == second.read_bytes()

    def test_sidecar_manifest(self, run, tmp_path):
        out = tmp_path / "sweep.csv"

        code, stdout, _ = run("sweep", "--ab-min", 0.6, "--ab-max", 1.9, "--steps", 5, "--variant", "eq53", "--out", out)
        manifest = RunManifest.deserialize(manifest_path(out).read_bytes())

        assert code == 0
        assert stdout == ""
        assert manifest.subcommand == "sweep"
        assert manifest.parameters["variant"] == "eq53"
        assert manifest.parameters["steps"] == 5
        assert manifest.checksum == sha256_hex(out.read_bytes())

    @pytest.mark.parametrize(
        "argv",
        [
            ("--ab-min", 2.0, "--ab-max", 1.0),
            ("--ab-min", 0.0, "--ab-max", 1.0),
            ("--steps", 1),
            ("--qmax", 0),
            ("--steps", "many"),
        ],
    )
    def test_usage_errors(self, run, argv):
        code, _, err = run("sweep", *argv)

        assert code == 1
        assert "usage error" in err


class TestFq(BaseCliTest):

    def test_two_rows(self, run):
        code, out, _ = run("fq", "--qmax", 2)
        header, rows = self.read_csv(out)

        assert code == 0
        assert header == ["Q", "f_Q", "lemma1_bound", "reference"]
        assert rows[0][:2] == ["1", "0.0"]
        assert rows[1][:2] == ["2", "0.5"]
        assert float(rows[0][2]) == pytest.approx(0.2546, abs=1e-4)
        assert float(rows[1][2]) == pytest.approx(0.658, abs=1e-3)
        assert [row[3] for row in rows] == ["0.8", "0.8"]

    def test_every_row_below_bound(self, run):
        _, out, _ = run("fq", "--qmax", 64)
        _, rows = self.read_csv(out)

        assert len(rows) == 64
        assert all(float(row[1]) <= float(row[2]) < 0.8 for row in rows)

    def test_zero_qmax(self, run):
        code, _, _ = run("fq", "--qmax", 0)

        assert code == 1


class TestConfigDocument(BaseCliTest):

    def test_document_supplies_parameters(self, run, tmp_path):
        document = tmp_path / "params.json"
        document.write_text(json.dumps({"qmax": 3}))

        _, out, _ = run("fq", "--config", document)

        assert len(self.read_csv(out)[1]) == 3

    def test_flags_override_document(self, run, tmp_path):
        document = tmp_path / "params.yaml"
        document.write_text("qmax: 3\n")

        _, out, _ = run("fq", "--config", document, "--qmax", 5)

        assert len(self.read_csv(out)[1]) == 5

    def test_document_output_path(self, run, tmp_path):
        out = tmp_path / "fq.csv"
        document = tmp_path / "params.json"
        document.write_text(json.dumps({"qmax": 2, "out": str(out)}))

        code, stdout, _ = run("fq", "--config", document)

        assert code == 0
        assert stdout == ""
        assert out.read_text().startswith("Q,f_Q")

    def test_missing_document(self, run, tmp_path):
        code, _, _ = run("fq", "--config", tmp_path / "absent.json")

        assert code == 1


class TestJsonReports(BaseCliTest):

    @pytest.mark.timeout(20)
    def test_theorem6(self, run):
        code, out, _ = run("theorem6", "--grid", 2000)
        document = self.read_json(out)
        result = document["result"]

        assert code == 0
        assert result["grid"] == 2000
        assert result["value"] == pytest.approx(0.1095, abs=5e-4)
        assert result["p2_star"] == pytest.approx(1 - result["p1_star"], abs=3e-3)

    def test_manifest_checks_result(self, run):
        _, out, _ = run("complex", "--psi", math.pi / 2)
        document = self.read_json(out)
        manifest = RunManifest.model_validate(document["manifest"])

        assert manifest.subcommand == "complex"
        assert manifest.checksum == sha256_hex(canonical_json(document["result"]))
        assert manifest.parameters["psi"] == math.pi / 2

    def test_complex(self, run):
        code, out, _ = run("complex", "--psi", math.pi / 2, "--b", 1, "--p1", 1, "--p2", 1)
        result = self.read_json(out)["result"]

        assert code == 0
        assert result["eq7_rate"] == pytest.approx(0.4240, abs=1e-4)
        assert abs(result["dof_ratio_100x"] - 1) < abs(result["dof_ratio_10x"] - 1)

    def test_complex_low_power(self, run):
        code, out, _ = run("complex", "--psi", math.pi / 2, "--p1", 0.05, "--p2", 0.05)
        result = self.read_json(out)["result"]

        assert code == 0
        assert result["dof_ratio_10x"] is None
        assert result["dof_ratio_100x"] > 0

    def test_complex_real_phase(self, run):
        code, out, _ = run("complex", "--psi", 0)

        assert code == 2
        assert self.read_json(out)["error"] == "DomainError"

    def test_sdof_layered(self, run):
        _, out, _ = run("sdof", "--a", 2.25, "--b", 1)
        result = self.read_json(out)["result"]

        assert result["scheme"] == "layered_theorem7"
        assert result["value"] == pytest.approx(0.1099, abs=1e-4)
        assert (result["witness"]["p"], result["witness"]["q"]) == (1, 1)

    def test_sdof_degraded_and_complex(self, run):
        _, degraded, _ = run("sdof", "--a", 1, "--b", 1, "--sign=+")
        _, rotated, _ = run("sdof", "--a", 1, "--b", 1, "--psi", 1.0)

        assert self.read_json(degraded)["result"]["scheme"] == "degraded_zero"
        assert self.read_json(rotated)["result"]["value"] == 1.0

    def test_sdof_overflowing_gain(self, run):
        code, out, _ = run("sdof", "--a", 1e300, "--b", 1e300)

        assert code == 2
        assert self.read_json(out)["error"] == "DomainError"

    def test_sdof_bad_sign(self, run):
        code, _, _ = run("sdof", "--a", 2, "--sign", "sideways")

        assert code == 1


class TestSimulate(BaseCliTest):

    ARGS = ("simulate", "--gamma", 0.05, "--layers", 2, "--backoff", 1.0, "--trials", 2000, "--seed", 9)

    def test_noiseless(self, run):
        code, out, _ = run(*self.ARGS, "--noiseless")
        document = self.read_json(out)

        assert code == 0
        assert document["result"]["report"]["chain_success"] == 1.0
        assert document["result"]["allocation"]["m_layers"] == 2
        assert document["manifest"]["seed"] == 9
        assert document["manifest"]["parameters"]["noiseless"] is True

    def test_stdout_is_reproducible(self, run):
        _, first, _ = run(*self.ARGS)
        _, second, _ = run(*self.ARGS)

        assert first == second

    def test_infeasible_gamma(self, run):
        code, out, _ = run("simulate", "--gamma", 0.8, "--trials", 10)
        error = self.read_json(out)

        assert code == 2
        assert error["error"] == "InfeasibleError"
        assert "gamma" in error["message"]

    def test_missing_gamma(self, run):
        code, _, err = run("simulate", "--trials", 10)

        assert code == 1
        assert "gamma" in err


class TestRatesAndLeakage(BaseCliTest):

    @pytest.mark.timeout(60)
    def test_rates(self, run):
        code, out, _ = run("rates", "--powers", "1e2,1e3", "--sqrt-ab", math.sqrt(2), "--epsilon", 0.05)
        header, rows = self.read_csv(out)

        assert code == 0
        assert header == ["P", "structured_mi_diff", "gaussian_baseline"]
        assert [float(row[0]) for row in rows] == [1e2, 1e3]
        assert all(float(row[1]) >= 0 and float(row[2]) >= 0 for row in rows)

    def test_rates_descending_powers(self, run):
        code, _, _ = run("rates", "--powers", "1e4,1e2")

        assert code == 2

    def test_leakage(self, run):
        code, out, _ = run("leakage", "--kmax", 4, "--refinements", "2,4")
        header, rows = self.read_csv(out)

        assert code == 0
        assert header == ["K", "refinement", "mi_mod", "mi_full"]
        assert [(row[0], row[1]) for row in rows] == [(str(k), str(m)) for k in (2, 3, 4) for m in (2, 4)]
        assert all(float(row[2]) <= 1e-12 and float(row[3]) <= 1 + 1e-12 for row in rows)


class TestPlotscript(BaseCliTest):

    def test_sweep_script(self, run, tmp_path):
        table = tmp_path / "sweep.csv"
        run("sweep", "--ab-min", 0.6, "--ab-max", 1.9, "--steps", 5, "--out", table)

        code, out, _ = run("plotscript", table, "--kind", "sweep")

        assert code == 0
        assert "using 1:2" in out and "using 1:3" in out
        assert str(table) in out

    def test_fq_reference_line(self, run, tmp_path):
        table = tmp_path / "fq.csv"
        run("fq", "--qmax", 8, "--out", table)

        _, out, _ = run("plotscript", table, "--kind", "fq")

        assert "0.8 with lines" in out

    def test_missing_file(self, run, tmp_path):
        code, _, _ = run("plotscript", tmp_path / "absent.csv", "--kind", "fq")

        assert code == 1

    def test_kind_must_match_table(self, run, tmp_path):
        table = tmp_path / "fq.csv"
        run("fq", "--qmax", 3, "--out", table)

        assert run("plotscript", table, "--kind", "sweep")[0] == 1
        assert run("plotscript", table, "--kind", "histogram")[0] == 1


class TestMisuse(BaseCliTest):

    def test_unknown_subcommand(self, run):
        code, _, err = run("render")

        assert code == 1
        assert "usage error" in err

    def test_unwritable_output(self, run, tmp_path):
        code, _, _ = run("fq", "--qmax", 2, "--out", tmp_path / "missing" / "fq.csv")

        assert code == 1


class TestNumberFormat:

    @pytest.mark.parametrize("value", [0.1, 1 / 3, 2 * math.pi, 1e-300, 123456789.125, -0.0])
    def test_round_trip(self, value):
        assert float(number(value)) == value

    def test_integers_and_missing(self):
        assert number(7) == "7"
        assert number(None) == ""
