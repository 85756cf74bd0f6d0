import json
import math

import numpy as np
import pytest

from isoheat import catalog, io
from isoheat.cli import EXIT_CHECK, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, main
from isoheat.heatfun import heat_content, heat_trace

PI = math.pi
RECT = json.dumps(io.domain_to_dict(catalog.rect12()))
BAND = json.dumps({"type": "band", "alpha": 1 / math.sqrt(2), "generator": io.domain_to_dict(catalog.rect12())})


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_report_passes(capsys):
    code, out, _ = run(capsys, "report", "theorem1")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["claim"] == "theorem1"
    assert data["runtime_ms"] is None
    assert all(c["pass"] for c in data["checks"])


def test_report_byte_identical(capsys):
    first = run(capsys, "report", "example6")[1]
    second = run(capsys, "report", "example6")[1]
    assert first == second


def test_report_failing_override(capsys):
    code, out, _ = run(capsys, "report", "theorem1", "--set", "lambda1_A=-1")
    assert code == EXIT_CHECK
    failed = [c["name"] for c in json.loads(out)["checks"] if not c["pass"]]
    assert failed == ["lambda1_A"]


def test_report_csv(capsys):
    code, out, _ = run(capsys, "report", "example3", "--format", "csv")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "claim,name,value,expected,tol,pass"
    assert all(line.startswith("example3,") for line in lines[1:])


def test_report_timing(capsys):
    data = json.loads(run(capsys, "report", "example6", "--timing")[1])
    assert data["runtime_ms"] >= 0


@pytest.mark.parametrize("argv", [
    ["report", "no_such_claim"],
    ["heat-trace", "--t", "0.1"],
    ["heat-trace", "--input", "{not json", "--t", "0.1"],
    ["heat-trace", "--input", RECT],
    ["heat-trace", "--input", RECT, "--t-min", "0.1"],
    ["heat-trace", "--input", RECT, "--t", "-1"],
    ["frobnicate"],
    ["report", "theorem1", "--set", "oops"],
    ["band", "--input", RECT],
    ["sturm", "xi-flow", "--n", "2"],
    ["spectrum", "--input", BAND],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_USAGE


def test_numerical_failure_exit(capsys):
    # the renewal forcing is not negligible on this window
    code, _, err = run(capsys, "band", "--input", BAND, "--t-min", "0.05", "--t-max", "0.5", "--t-steps", "8")
    assert code == EXIT_NUMERIC
    assert "numerical failure" in err


def test_heat_trace_values(capsys):
    code, out, _ = run(capsys, "heat-trace", "--input", RECT, "--t", "0.05", "--t", "0.2")
    assert code == EXIT_OK
    rows = json.loads(out)
    for row in rows:
        assert row["value"] == heat_trace(catalog.rect12(), row["t"]).value


def test_heat_content_csv_and_out(tmp_path, capsys):
    path = tmp_path / "q.csv"
    code, out, _ = run(capsys, "heat-content", "--input", RECT, "--t-min", "0.01", "--t-max", "1",
                       "--t-steps", "5", "--format", "csv", "--out", str(path))
    assert code == EXIT_OK and out == ""
    lines = path.read_text().splitlines()
    assert lines[0] == "t,value,tail_bound,modes_used"
    assert len(lines) == 6
    t, value = (float(v) for v in lines[1].split(",")[:2])
    assert t == pytest.approx(0.01, rel=1e-15)
    assert value == heat_content(catalog.rect12(), t).value


def test_input_from_file(tmp_path, capsys):
    f = tmp_path / "d.json"
    f.write_text(RECT)
    a = run(capsys, "heat-content", "--input", str(f), "--t", "0.3")[1]
    b = run(capsys, "heat-content", "--input", RECT, "--t", "0.3")[1]
    assert a == b


def test_spectrum(capsys):
    code, out, _ = run(capsys, "spectrum", "--input", RECT, "--max-modes", "5")
    assert code == EXIT_OK
    lam = [m["lambda"] for m in json.loads(out)]
    np.testing.assert_allclose(lam[:2], [PI**2 * 1.25, PI**2 * 2], rtol=1e-14)


def test_spectrum_potential(capsys):
    code, out, _ = run(capsys, "spectrum", "--input", '{"type": "zero"}', "--max-modes", "3")
    assert code == EXIT_OK
    np.testing.assert_allclose([r["lambda"] for r in json.loads(out)], (np.arange(1, 4) * PI) ** 2, atol=1e-9)


def test_fit(capsys):
    code, out, _ = run(capsys, "fit", "--input", RECT)
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["fit"]["b0"] == pytest.approx(2, rel=1e-8)
    assert data["formula"]["b1"] == pytest.approx(-12 / math.sqrt(PI), rel=1e-15)


def test_band_json(capsys):
    code, out, _ = run(capsys, "band", "--input", BAND, "--tol", "1e-9")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["area"] == pytest.approx(4.0)
    assert data["max_residual"] < 5e-9


def test_sturm_eigen_gamma(capsys):
    code, out, _ = run(capsys, "sturm", "eigen", "--input", '{"type": "gamma", "n": 2, "s": 0.5}', "--max-modes", "4")
    assert code == EXIT_OK
    np.testing.assert_allclose([r["lambda"] for r in json.loads(out)], (np.arange(1, 5) * PI) ** 2, atol=1e-8)


def test_sturm_dq_xi_csv(capsys):
    code, out, _ = run(capsys, "sturm", "dq-xi", "--n", "2", "--t", "1.0", "--format", "csv")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "t,series,first_order,approximate"
