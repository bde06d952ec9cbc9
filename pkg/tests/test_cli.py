import io
import json

import numpy as np
import pytest
from rich.console import Console

from interplab.cli.args_parsers import (
    SpecArgs,
    load_step_function,
    parse_couple,
    parse_forcing,
    parse_function,
    parse_grid,
    parse_operator,
    parse_spec,
    parse_space,
    parse_weight,
)
from interplab.cli.report_writer import emit_csv, format_csv
from interplab.config import LabConfig
from interplab.main import dispatch
from interplab.models.couple import DiagonalCouple, DomainCouple, FiniteDimCouple
from interplab.models.exceptions import SpecFormatError
from interplab.models.grid import LogGrid
from interplab.models.report import ReportDocument
from interplab.models.spaces import Lorentz, Lp
from interplab.models.weight import PiecewisePower, Power

GRID = LogGrid(1e-3, 1e3, 121)


@pytest.fixture
def console():
    return Console(file=io.StringIO(), width=120)


class TestSpecParsing:
    """Test mini-language parsers"""

    def test_parse_spec(self):
        assert parse_spec(" Pow:0.5 ") == ("pow", ["0.5"])
        assert parse_spec("pp:-0.5, -1") == ("pp", ["-0.5", "-1"])
        assert parse_spec("file:/tmp/a:b.csv") == ("file", ["/tmp/a:b.csv"])
        assert parse_spec("") == ("empty", [])

    def test_spec_args(self):
        args = SpecArgs("weight", "pow:x", ["x"], "pow:ALPHA")
        with pytest.raises(SpecFormatError):
            args.get_float()
        args = SpecArgs("weight", "pow:1,2", ["1", "2"], "pow:ALPHA")
        assert args.get_float() == 1.0
        with pytest.raises(SpecFormatError):
            args.finish()

    def test_spec_error_message(self):
        with pytest.raises(SpecFormatError, match="Expected pow:ALPHA"):
            parse_weight("cosh:2")

    def test_parse_weight(self):
        assert parse_weight("pow:-0.5") == Power(-0.5)
        assert parse_weight("pp:-0.5,-1") == PiecewisePower(-0.5, -1.0)
        assert parse_weight("one") == Power(0.0)

    @pytest.mark.parametrize("text", ["pow:a", "pow:1,2", "pp:1", "pow:inf"])
    def test_parse_weight_errors(self, text):
        with pytest.raises(SpecFormatError):
            parse_weight(text)

    def test_weight_file(self, tmp_path):
        path = tmp_path / "w.csv"
        ts = np.geomspace(1e-2, 1e2, 41)
        np.savetxt(path, np.column_stack([ts, ts ** -0.5]), delimiter=",")
        weight = parse_weight(f"file:{path}")
        assert weight.end_exponents() == pytest.approx((-0.5, -0.5), abs=1e-6)

    def test_parse_space(self):
        space = parse_space("lp:2@pow:-0.5")
        assert isinstance(space.base, Lp)
        assert space.weight == Power(-0.5)
        assert isinstance(parse_space("lorentz:2,4").base, Lorentz)

    @pytest.mark.parametrize("text", ["lorentz:1,2", "lp:0.5", "lq:2", "lp:2,3"])
    def test_parse_space_errors(self, text):
        with pytest.raises(SpecFormatError):
            parse_space(text)

    def test_parse_grid(self):
        assert parse_grid("1e-3,1e3,101") == (1e-3, 1e3, 101)
        with pytest.raises(SpecFormatError):
            parse_grid("1,0.5,10")
        with pytest.raises(SpecFormatError):
            parse_grid("1e-3,1e3")

    def test_parse_operator(self):
        assert parse_operator("jordan:5").matrix[0, 1] == 5.0
        with pytest.raises(SpecFormatError):
            parse_operator("diag:-1,2")

    def test_operator_file(self, tmp_path):
        path = tmp_path / "a.csv"
        np.savetxt(path, np.array([[2.0, 1.0], [0.0, 3.0]]), delimiter=",")
        operator = parse_operator(str(path))
        assert operator.dim == 2
        assert operator.invertible

    def test_parse_couple(self):
        assert isinstance(parse_couple("domain:diag:1,4", GRID), DomainCouple)
        assert isinstance(parse_couple("diag:1,2", GRID), DiagonalCouple)
        assert isinstance(parse_couple("general:2,1,2", GRID), FiniteDimCouple)
        with pytest.raises(SpecFormatError):
            parse_couple("triv:2", GRID)

    def test_parse_function(self):
        assert parse_function("mobius:2").name == "((z-1)/(z+1))^2"
        assert parse_function("gamma").name == "z^0.5/(1+z)"
        with pytest.raises(SpecFormatError):
            parse_function("gamma:2")
        with pytest.raises(SpecFormatError):
            parse_function("e:1")

    def test_parse_forcing(self):
        forcing = parse_forcing("step:1,2,3", GRID, 2)
        assert forcing.values.shape == (GRID.n, 2)
        assert np.all(forcing.values[GRID.nodes >= 1.0] == 0.0)
        with pytest.raises(SpecFormatError):
            parse_forcing("const:1", GRID, 2)
        assert not np.any(parse_forcing("zero", GRID, 3).values)

    def test_load_step_function(self, tmp_path):
        path = tmp_path / "f.csv"
        path.write_text("0.01,2\n1,5\n")
        f = load_step_function(str(path), GRID)
        assert f.values[0] == 0.0
        assert f.values[-1] == 5.0
        assert f.values[np.searchsorted(GRID.nodes, 0.1)] == 2.0

    def test_load_step_function_order(self, tmp_path):
        path = tmp_path / "f.csv"
        path.write_text("1,2\n0.5,5\n")
        with pytest.raises(SpecFormatError):
            load_step_function(str(path), GRID)


class TestReportWriter:
    """Test report serialization"""

    def test_format_csv(self):
        text = format_csv([(0.1, 1.0 / 3.0), (1.0, 2.0)])
        lines = text.splitlines()
        assert lines[0] == "t,value"
        assert lines[1] == "0.10000000000000001,0.33333333333333331"
        assert lines[2] == "1,2"

    def test_non_finite(self, tmp_path):
        with pytest.raises(ValueError):
            emit_csv([(1.0, float("inf"))], str(tmp_path / "c.csv"))
        assert not list(tmp_path.iterdir())

    def test_digest_ignores_timestamp(self):
        first = ReportDocument(["interplab", "boyd"], {}, "0", 42, timestamp="2024-01-01T00:00:00")
        second = ReportDocument(["interplab", "boyd"], {}, "0", 42, timestamp="2025-01-01T00:00:00")
        first.add_result("value", float("inf"))
        second.add_result("value", float("inf"))
        assert first.digest() == second.digest()
        assert first.to_dict()["results"]["value"] == "inf"

    def test_from_dict(self):
        document = ReportDocument(["interplab", "boyd"], {"grid": [1, 2, 3]}, "0", 7)
        document.add_result("p_lower", 2.0)
        restored = ReportDocument.from_dict(json.loads(document.to_json(with_timestamp=False)))
        assert restored.digest() == document.digest()
        assert restored.timestamp is None


class TestDispatch:
    """Test the command line"""

    def test_no_arguments(self, console):
        assert dispatch([], console) == (2, None)

    def test_unknown_command(self, console, capsys):
        code, document = dispatch(["nope"], console)
        assert code == 2
        assert document is None

    def test_help(self, console, capsys):
        code, document = dispatch(["help", "--no-timestamp"], console)
        assert code == 0
        assert "interp-report" in console.file.getvalue()
        assert "maxreg" in document.results["commands"]

    def test_boyd(self, console, tmp_path):
        out = tmp_path / "boyd.json"
        code, _ = dispatch(["boyd", "--space", "lp:2", "--grid", "1e-4,1e4,801", "--no-timestamp",
                            "--out", str(out)], console)
        assert code == 0
        data = json.loads(out.read_text())
        assert data["results"]["p_lower"] == pytest.approx(2.0, rel=1e-6)
        assert data["config"]["grid"] == [1e-4, 1e4, 801]
        assert "timestamp" not in data

    def test_deterministic_output(self, console, capsys):
        argv = ["boyd", "--space", "lorentz:2,4", "--seed", "3", "--no-timestamp"]
        dispatch(argv, console)
        first = capsys.readouterr().out
        dispatch(argv, console)
        second = capsys.readouterr().out
        assert first == second

    def test_flags_restored(self, console, capsys):
        seed, grid = LabConfig.get_seed(), LabConfig.get_grid_spec()
        dispatch(["boyd", "--space", "lp:2", "--seed", "11", "--grid", "1e-2,1e2,81"], console)
        assert LabConfig.get_seed() == seed
        assert LabConfig.get_grid_spec() == grid

    def test_numerical_error(self, console, capsys):
        code, document = dispatch(["weights", "classify", "--weight", "pow:0", "--p", "0.5", "--no-timestamp"],
                                  console)
        assert code == 1
        assert document.errors[0]["type"] == "ParameterError"
        assert json.loads(capsys.readouterr().out)["errors"][0]["type"] == "ParameterError"

    def test_bad_spec(self, console, capsys):
        code, document = dispatch(["boyd", "--space", "lq:2"], console)
        assert code == 1
        assert document.errors[0]["type"] == "SpecFormatError"

    def test_classify_with_curves(self, console, tmp_path, capsys):
        code, document = dispatch(["weights", "classify", "--weight", "pp:-0.5,-1", "--p", "2",
                                   "--csv", str(tmp_path / "curves.csv"), "--no-timestamp"], console)
        assert code == 0
        verdicts = document.results["verdicts"]
        assert verdicts["A_p^-"] == "in"
        assert verdicts["C_p"] == "out"
        assert list(tmp_path.glob("curves-*.csv"))

    def test_unwritable_output(self, console, tmp_path):
        code, _ = dispatch(["boyd", "--space", "lp:2", "--out", str(tmp_path / "missing" / "r.json")], console)
        assert code == 1

    def test_calculus(self, console, capsys):
        code, document = dispatch(["calculus", "--A", "diag:1,4", "--f", "psi-exp", "--no-timestamp"], console)
        assert code == 0
        assert document.results["eigen_residual"] <= 1e-7

    def test_interp_report_contour(self, console, tmp_path, capsys):
        path = tmp_path / "xs.csv"
        path.write_text("1,0\n1,-1\n")
        code, document = dispatch(["interp-report", "--A", "diag:1,4", "--space", "lp:2", "--xs", str(path),
                                   "--grid", "1e-3,1e3,121", "--contour", "--no-timestamp"], console)
        assert code == 0
        assert document.config["contour"] is True
        assert document.results["worst_constant"] <= 100.0
