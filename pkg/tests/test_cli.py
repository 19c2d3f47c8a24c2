import json
import math

import pytest

from brennanlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


class TestExponentsCommand:
    def test_basic_report(self, capsys):
        code, payload, _ = run_json(capsys, "exponents", "--p", "4", "--s", "2")
        assert code == 0
        assert payload["command"] == "exponents"
        assert payload["result"]["q"] == pytest.approx(2.0)
        assert payload["result"]["alpha_range"] == [pytest.approx(2.0 / 3.0),
                                                    pytest.approx(2.0)]
        assert payload["result"]["known_bounds"]["hedenmalm_shimorin"] == 3.752

    def test_p_three_alpha_range(self, capsys):
        code, payload, _ = run_json(capsys, "exponents", "--p", "3")
        assert code == 0
        assert payload["result"]["alpha_range"] == [pytest.approx(4.0 / 3.0),
                                                    pytest.approx(4.0)]

    def test_p_two_is_domain_error(self, capsys):
        code, out, err = run(capsys, "exponents", "--p", "2")
        assert code == 2
        assert "p = 2" in err


class TestIntegrateCommand:
    def test_area_identity(self, capsys):
        code, payload, _ = run_json(capsys, "integrate", "--map", "koebe", "--s", "2")
        assert code == 0
        assert payload["result"]["value"] == pytest.approx(math.pi, abs=1e-8)
        assert payload["result"]["classification"] == "converged"

    def test_divergent_exit_code(self, capsys):
        code, payload, _ = run_json(capsys, "integrate", "--map", "koebe", "--s", "4.1")
        assert code == 1
        assert payload["result"]["classification"] == "diverging"

    def test_inverse_exponent_flag(self, capsys):
        code, payload, _ = run_json(capsys, "integrate", "--map", "identity", "--r", "5")
        assert code == 0
        assert payload["result"]["value"] == pytest.approx(math.pi, abs=1e-8)

    def test_sector_below_one_has_no_upper_threshold(self, capsys):
        code, payload, _ = run_json(capsys, "integrate", "--map", "sector:0.5",
                                    "--s", "10")
        assert code == 0
        assert payload["result"]["classification"] == "converged"

    def test_unknown_map(self, capsys):
        code, _, err = run(capsys, "integrate", "--map", "torus", "--s", "2")
        assert code == 2
        assert "unknown map family" in err

    def test_requires_exactly_one_exponent(self, capsys):
        code, _, _ = run(capsys, "integrate", "--map", "koebe")
        assert code == 2
        code, _, _ = run(capsys, "integrate", "--map", "koebe", "--s", "2", "--r", "1")
        assert code == 2


class TestScanCommand:
    def test_koebe_sweep(self, capsys):
        code, out, _ = run(capsys, "scan", "--map", "koebe", "--s-from", "1.0",
                           "--s-to", "4.5", "--step", "0.5")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "s,value,tail,classification"
        assert len(lines) == 9  # header + 8 rows
        first = lines[1].split(",")
        last = lines[-1].split(",")
        assert first[-1] == "diverging"
        assert last[-1] == "diverging"

    def test_identity_constant_value(self, capsys):
        code, out, _ = run(capsys, "scan", "--map", "identity", "--s-from", "1",
                           "--s-to", "3", "--step", "1")
        rows = [line.split(",") for line in out.strip().splitlines()[1:]]
        assert all(r[-1] == "converged" for r in rows)
        for r in rows:
            assert float(r[1]) == pytest.approx(math.pi, abs=1e-8)

    def test_cardioid_upper_threshold(self, capsys):
        # s = 4.0 sits exactly on the threshold: logarithmically divergent
        code, out, _ = run(capsys, "scan", "--map", "cardioid", "--s-from", "3.5",
                           "--s-to", "4.5", "--step", "0.5")
        rows = [line.split(",")[-1] for line in out.strip().splitlines()[1:]]
        assert rows == ["converged", "diverging", "diverging"]

    def test_invalid_range(self, capsys):
        code, _, _ = run(capsys, "scan", "--map", "koebe", "--s-from", "3",
                         "--s-to", "1", "--step", "0.5")
        assert code == 2


class TestCriticalCommand:
    def test_koebe_upper(self, capsys):
        code, payload, _ = run_json(capsys, "critical", "--map", "koebe",
                                    "--side", "upper")
        assert code == 0
        assert payload["result"]["s_star"] == pytest.approx(4.0, abs=0.05)
        assert payload["diagnostics"]["oracle"]["upper"] == pytest.approx(4.0)

    def test_koebe_lower(self, capsys):
        code, payload, _ = run_json(capsys, "critical", "--map", "koebe",
                                    "--side", "lower")
        assert code == 0
        assert payload["result"]["s_star"] == pytest.approx(4.0 / 3.0, abs=0.05)

    def test_sector_upper(self, capsys):
        code, payload, _ = run_json(capsys, "critical", "--map", "sector:1.25",
                                    "--side", "upper", "--tol", "0.1")
        assert code == 0
        assert payload["result"]["s_star"] == pytest.approx(10.0, abs=0.1)

    def test_no_threshold_is_an_error(self, capsys):
        code, _, err = run(capsys, "critical", "--map", "identity", "--side", "upper")
        assert code == 2
        assert "no upper threshold" in err


class TestVerifyCommand:
    def test_identity_attains_bound(self, capsys):
        code, payload, _ = run_json(capsys, "verify-composition", "--map", "identity",
                                    "--p", "4", "--q", "2")
        assert code == 0
        res = payload["result"]
        assert res["bound_satisfied"] is True
        assert res["max_ratio"] == pytest.approx(math.pi ** 0.25, rel=1e-6)
        assert res["max_ratio"] == pytest.approx(res["bound_kpq"], rel=1e-4)

    def test_regime_violation_exits_two(self, capsys):
        code, _, err = run(capsys, "verify-composition", "--map", "koebe",
                           "--p", "2", "--q", "3")
        assert code == 2
        assert "no bounded composition operator" in err

    def test_infinite_bound_is_informational(self, capsys):
        code, payload, _ = run_json(capsys, "verify-composition", "--map", "koebe",
                                    "--p", "4", "--q", "3")
        assert code == 0
        assert payload["result"]["bound_kpq"] == "inf"


class TestIsometryCommand:
    def test_identity(self, capsys):
        code, payload, _ = run_json(capsys, "isometry", "--map", "identity",
                                    "--function", "harmonic_poly:2")
        assert code == 0
        assert payload["result"]["max_deviation"] < 1e-4

    def test_koebe_default_family(self, capsys):
        code, payload, _ = run_json(capsys, "isometry", "--map", "koebe")
        assert code == 0
        assert len(payload["result"]["ratios"]) == 3
        assert payload["result"]["within_tolerance"] is True


class TestDualityCommand:
    def test_identity(self, capsys):
        code, payload, _ = run_json(capsys, "duality", "--map", "identity",
                                    "--p", "4", "--q", "3")
        assert code == 0
        assert payload["result"]["lhs"] == pytest.approx(math.pi, rel=1e-8)
        assert payload["result"]["rhs"] == pytest.approx(math.pi, rel=1e-8)

    def test_koebe_joint_divergence(self, capsys):
        code, payload, _ = run_json(capsys, "duality", "--map", "koebe",
                                    "--p", "4", "--q", "3")
        assert code == 0
        assert payload["result"]["lhs_classification"] == "diverging"
        assert payload["result"]["agree"] is True

    def test_regime_error(self, capsys):
        code, _, _ = run(capsys, "duality", "--map", "koebe", "--p", "3", "--q", "1")
        assert code == 2


class TestEquivalenceCommand:
    def test_koebe_json(self, capsys):
        code, payload, _ = run_json(capsys, "equivalence", "--map", "koebe",
                                    "--s", "2.5")
        assert code == 0
        rows = payload["result"]["rows"]
        assert [r["p"] for r in rows] == [2.5, 3.0, 4.0, 6.0, 10.0]
        values = {r["integral_value"] for r in rows}
        assert len(values) == 1  # identical after 12-digit normalization
        assert payload["result"]["consistent"] is True

    def test_csv_format(self, capsys):
        code, out, _ = run(capsys, "equivalence", "--map", "identity", "--s", "3",
                           "--p-grid", "3,4", "--format", "csv")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "p,q,s_roundtrip,integral_value,classification,kpq"
        assert len(lines) == 3


class TestDeterminismAndOutput:
    def test_byte_identical_json(self, capsys):
        _, first, _ = run(capsys, "integrate", "--map", "koebe", "--s", "2.5")
        _, second, _ = run(capsys, "integrate", "--map", "koebe", "--s", "2.5")
        assert first == second

    def test_byte_identical_csv(self, capsys):
        _, first, _ = run(capsys, "scan", "--map", "cardioid", "--s-from", "1",
                          "--s-to", "3", "--step", "0.5")
        _, second, _ = run(capsys, "scan", "--map", "cardioid", "--s-from", "1",
                           "--s-to", "3", "--step", "0.5")
        assert first == second

    def test_out_file(self, tmp_path, capsys):
        target = tmp_path / "report.json"
        code, out, _ = run(capsys, "integrate", "--map", "identity", "--s", "2",
                           "--out", str(target))
        assert code == 0
        assert out == ""
        payload = json.loads(target.read_text())
        assert payload["command"] == "integrate"

    def test_out_dir_env(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("BRENNANLAB_OUT_DIR", str(tmp_path))
        code, _, _ = run(capsys, "integrate", "--map", "identity", "--s", "2",
                         "--out", "r.json")
        assert code == 0
        assert (tmp_path / "r.json").exists()

    def test_help_lists_grading_defaults(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["integrate", "--help"])
        assert exc.value.code == 0
        out = capsys.readouterr().out
        assert "--eps-min" in out and "1e-08" in out
        assert "--annulus-ratio" in out and "0.5" in out
        assert "--radial-order" in out and "16" in out
        assert "--angular-base" in out and "64" in out
