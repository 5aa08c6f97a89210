import io
import json
import subprocess
import sys

import jsonschema
import pytest

from sdirac import cli
from sdirac.catalog import default_catalog
from sdirac.parser import parse_weyl
from sdirac.solver import InvariantBreach
from sdirac.verify import REPORT_SCHEMA

O1_CORRUPTED = "sym.O1=x^2*d_x + x*y*d_y - 1/2*x*q*d_q + i/2*y*d_q^2"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_comm_dirac_howe():
    code, out, _ = run("comm", "i*q*d_y - d_x*d_q", "y*d_q + i*x*q", "--vars", "x,y,q")
    assert code == 0
    assert parse_weyl(out.strip()) == parse_weyl("-i - i*x*d_x - i*y*d_y")


def test_apply():
    code, out, _ = run("apply", "i*q*d_y - d_x*d_q", "x*q")
    assert (code, out) == (0, "-1\n")
    code, out, _ = run("apply", "lambda*x", "y", "--lambda", "3/4")
    assert out == "3/4*x*y\n"


def test_fourier():
    code, out, _ = run("fourier", "xh*d_xh", "--map", "xh:x,yh:y")
    assert (code, out) == (0, "-x*d_x - 1\n")


def test_singular_text_and_json():
    code, out, _ = run("singular", "--degree", "1", "--qmax", "3", "--parity", "odd")
    assert code == 0 and "critical lambda=3/4" in out
    code, out, _ = run("singular", "--degree", "1", "--qmax", "3", "--parity", "odd", "--format", "json")
    rows = json.loads(out)
    assert rows[0]["critical"][0]["lambda"] == "3/4"
    assert set(rows[0]) >= {"n", "parity", "qmax", "generic_dim", "critical"}


def test_singular_at_lambda_and_upto():
    code, out, _ = run("singular", "--degree", "1", "--qmax", "3", "--parity", "odd", "--lambda", "3/4", "--format", "json")
    assert json.loads(out)[0]["kernel_dim"] == 2
    code, out, _ = run("singular", "--degree", "1", "--qmax", "2", "--upto", "--format", "json")
    assert [(r["n"], r["parity"]) for r in json.loads(out)] == [(0, "even"), (0, "odd"), (1, "even"), (1, "odd")]


def test_intertwine():
    code, out, _ = run("intertwine", "--fiber", "sigmastar", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["kind"] == "point"
    assert data["point"] == ["-3/4", "3/4"] and data["rho_shifted"] == ["3/4", "9/4"]


def test_catalog_listing_and_lookup():
    code, out, _ = run("catalog")
    assert "howe.Ds" in out.split()
    code, out, _ = run("catalog", "howe.Ds")
    assert out == "i*q*d_y - d_x*d_q\n"


def test_catalog_print_parse_round_trip():
    cat = default_catalog()
    for name in cat.weyl_names():
        code, out, _ = run("catalog", name)
        assert code == 0
        assert parse_weyl(out.strip(), cat[name].space) == cat[name], name


def test_verify_json_schema(tmp_path):
    path = tmp_path / "report.json"
    code, out, _ = run("verify", "--json", str(path), "--engine-cases", "5")
    assert code == 0
    report = json.loads(path.read_text())
    jsonschema.validate(report, REPORT_SCHEMA)
    assert report["failed"] == 0


def test_verify_negative_control_exit_code():
    code, out, _ = run("verify", "--suite", "symmetry", "--override", O1_CORRUPTED, "--json", "-")
    report = json.loads(out)
    assert code == 1 and report["failed"] > 0
    jsonschema.validate(report, REPORT_SCHEMA)


def test_deterministic_output():
    a = run("verify", "--suite", "engine", "--json", "-")
    b = run("verify", "--suite", "engine", "--json", "-")
    assert a == b


@pytest.mark.parametrize("argv", [
    ["comm", "x+", "y"],
    ["comm", "z", "x"],
    ["apply", "x", "d_x"],
    ["singular", "--degree", "-1", "--qmax", "2"],
    ["singular", "--degree", "1"],
    ["singular", "--degree", "1", "--qmax", "1", "--lambda", "x"],
    ["fourier", "x", "--map", "xh"],
    ["catalog", "nope"],
    ["verify", "--suite", "nope"],
    ["verify", "--override", "sym.O1=x+"],
    ["nosuchcommand"],
    [],
])
def test_usage_errors_exit_2(argv):
    code, _, err = run(*argv)
    assert code == 2 and err


def test_invariant_breach_exit_3(monkeypatch):
    def boom(*a, **k):
        raise InvariantBreach("forced")

    monkeypatch.setattr(cli, "kernel_symbolic", boom)
    code, _, err = run("singular", "--degree", "1", "--qmax", "1")
    assert code == 3 and "forced" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sdirac", "catalog", "mp2.H"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip()
    proc = subprocess.run([sys.executable, "-m", "sdirac", "comm", "x+"], capture_output=True, text=True)
    assert proc.returncode == 2
