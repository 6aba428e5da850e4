import json
import math

import pytest

from lprim.cli import dispatch, load_descriptor, main, render_csv
from lprim.errors import SchemaError
from lprim.expr import FunctionExpr
from lprim.lpspace import DeltaTrain, Multiplier, PrimitiveDistribution


def run(*argv):
    return dispatch(list(argv))


def rows(report):
    return {label: value for label, value, _ in report.outputs}


class TestDescriptors:
    def test_dsl_string(self):
        e = load_descriptor("exp(-x^2)")
        assert isinstance(e, FunctionExpr)

    def test_primitive_json(self):
        obj = load_descriptor(json.dumps({"primitive": {"expr": "exp(-x^2)"}, "p": 2}))
        assert isinstance(obj, PrimitiveDistribution) and obj.p == 2.0

    def test_density_json(self):
        obj = load_descriptor(json.dumps({"density": "exp(-abs(x))", "q": 2}))
        assert isinstance(obj, Multiplier)

    def test_atoms_json(self):
        obj = load_descriptor(json.dumps({"atoms": [[1.0, 0.0, 1.0]]}))
        assert isinstance(obj, DeltaTrain)

    def test_p_below_one_rejected(self):
        with pytest.raises(SchemaError):
            load_descriptor(json.dumps({"primitive": "indicator(0,1)", "p": 0.5}))

    def test_bad_json_rejected(self):
        with pytest.raises(SchemaError):
            load_descriptor("{not json")

    def test_unknown_shape_rejected(self):
        with pytest.raises(SchemaError):
            load_descriptor(json.dumps({"something": 1}))

    def test_support_override(self):
        obj = load_descriptor(
            json.dumps({"expr": "cos(x)", "support": [-1.0, 1.0]})
        )
        assert obj.support == (-1.0, 1.0)


class TestExitCodes:
    def test_norm_success(self):
        report, code = run("norm", "--p", "2", "--f", "indicator(0,1)")
        assert code == 0
        assert rows(report)["norm"] == pytest.approx(1.0, abs=1e-10)

    def test_usage_error(self):
        report, code = run("norm", "--p", "2")
        assert code == 1
        assert report.command == "usage-error"

    def test_unknown_subcommand(self):
        _, code = run("frobnicate")
        assert code == 1

    def test_malformed_expression(self):
        report, code = run("norm", "--p", "2", "--f", "exp(-x^2")
        assert code == 1
        assert "error" in rows(report)

    def test_bad_exponent_is_input_error(self):
        _, code = run("norm", "--p", "0.5", "--f", "indicator(0,1)")
        assert code == 1

    def test_verify_suite_passes(self):
        report, code = run("verify", "--suite", "star-algebra")
        assert code == 0
        assert report.pass_fail and all(ok for _, ok, _ in report.pass_fail)

    def test_unknown_suite_is_input_error(self):
        _, code = run("verify", "--suite", "nonexistent")
        assert code == 1


class TestSubcommands:
    def test_pair(self):
        report, code = run(
            "pair", "--p", "1", "--F", "indicator(0,1)", "--g", "indicator(-5,5)"
        )
        assert code == 0
        assert rows(report)["pair"] == pytest.approx(-1.0, abs=1e-10)

    def test_pair_atoms(self):
        atoms = json.dumps({"atoms": [[1.0, 0.0, 1.0]]})
        report, code = run(
            "pair", "--p", "1", "--F", atoms, "--g", "indicator(-5,5)"
        )
        assert code == 0

    def test_dualnorm(self):
        report, code = run("dualnorm", "--p", "2", "--f", "indicator(0,1)")
        assert code == 0
        assert rows(report)["dualnorm"] == pytest.approx(1.0, rel=1e-6)

    def test_reconstruct(self):
        report, code = run(
            "reconstruct", "--p", "1", "--F", "indicator(0,1)", "--x", "0.5",
            "--ns", "2,4"
        )
        assert code == 0
        vals = list(rows(report).values())
        assert all(v == pytest.approx(1.0, abs=1e-9) for v in vals)

    def test_fourier_header_and_values(self):
        report, code = run("fourier", "--F", "indicator(-1,1)", "--s", "1,2")
        assert code == 0
        assert report.header == "s,re,im"
        for (label, re, im) in report.outputs:
            s = float(label)
            assert complex(re, im) == pytest.approx(
                2j * math.sin(s), abs=1e-9
            )

    def test_parseval(self):
        report, code = run(
            "parseval", "--F", "exp(-x^2)", "--G", "exp(-x^2)"
        )
        assert code == 0
        assert rows(report)["gap"] <= 1e-4

    def test_poisson(self):
        report, code = run(
            "poisson", "--F", "indicator(0,1)", "--x", "0.5", "--y", "1"
        )
        assert code == 0
        expected = 2 * math.atan(0.5) / math.pi
        assert rows(report)["u(0.5,1)"] == pytest.approx(expected, abs=1e-9)

    def test_membership(self):
        report, code = run("membership", "--p", "2", "--f", "x*indicator(-1,1)")
        assert code == 0
        assert rows(report)["verdict"] == "certified"

    def test_star_leading_dash_density(self):
        report, code = run(
            "star", "--F=indicator(0,1)", "--G=exp(-x^2)", "--x=0"
        )
        assert code == 0
        assert rows(report)["density(0)"] == pytest.approx(
            1 - math.exp(-1), abs=1e-7
        )


class TestOutputContract:
    def test_deterministic_csv(self):
        a, _ = run("norm", "--p", "2", "--f", "exp(-x^2)")
        b, _ = run("norm", "--p", "2", "--f", "exp(-x^2)")
        assert render_csv(a) == render_csv(b)

    def test_out_file(self, tmp_path, capsys):
        path = tmp_path / "result.csv"
        code = main(["norm", "--p", "2", "--f", "indicator(0,1)",
                     "--out", str(path)])
        assert code == 0
        text = path.read_text()
        assert text.startswith("label,value,err_est\n")
        value = float(text.splitlines()[1].split(",")[1])
        assert value == pytest.approx(1.0, abs=1e-10)
        assert capsys.readouterr().out == ""

    def test_tolerance_flags_accepted_after_subcommand(self):
        _, code = run("norm", "--p", "2", "--f", "indicator(0,1)",
                      "--abs-tol", "1e-8")
        assert code == 0

    def test_env_tolerances(self, monkeypatch):
        monkeypatch.setenv("LPRIM_ABS_TOL", "1e-6")
        _, code = run("norm", "--p", "2", "--f", "indicator(0,1)")
        assert code == 0
