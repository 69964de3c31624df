import io
import json
from fractions import Fraction

import pytest

from germcalc.cli import main
from germcalc.io import ParseError, dumps, parse_series, parse_series_list, series_from_dict, series_to_dict
from germcalc.series import GaussianRational, Series

x, y = Series.variables(2, 4)


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj if not isinstance(obj, Series) else series_to_dict(obj)))
    return str(path)


def run_cli(capsys, *argv):
    status = main(list(argv))
    captured = capsys.readouterr()
    return status, captured.out, captured.err


def test_round_trip_exact():
    f = x * x.scale(Fraction(-3, 7)) + y + Series(2, 4, {(0, 3): GaussianRational(1, 2)})
    doc = series_to_dict(f)
    assert doc["vars"] == ["x", "y"]
    assert series_from_dict(json.loads(json.dumps(doc))) == f


def test_approx_mode_and_float_rejection():
    doc = {"vars": ["z"], "trunc": 2, "terms": [{"exp": [1], "re": 0.5}]}
    assert series_from_dict(doc, "approx").coefficient(1) == 0.5
    with pytest.raises(ParseError):
        series_from_dict(doc, "exact")


@pytest.mark.parametrize("doc", [
    {"vars": ["z"], "trunc": 2},
    {"vars": [], "trunc": 2, "terms": []},
    {"vars": ["z"], "trunc": -1, "terms": []},
    {"vars": ["z"], "trunc": 2, "terms": [{"exp": [3], "re": "1"}]},
    {"vars": ["z"], "trunc": 2, "terms": [{"exp": [1], "re": "1"}, {"exp": [1], "re": "2"}]},
    {"vars": ["z"], "trunc": 2, "terms": [{"exp": [1, 0], "re": "1"}]},
    {"vars": ["z"], "trunc": 2, "terms": [{"exp": [1], "re": "1/0"}]},
    {"vars": ["z"], "trunc": 2, "terms": [{"exp": [1], "re": True}]},
])
def test_malformed_documents(doc):
    with pytest.raises(ParseError):
        series_from_dict(doc)


def test_parse_from_stream_and_lists():
    text = json.dumps({"components": [series_to_dict(x), series_to_dict(y)]})
    comps = parse_series_list(io.StringIO(text))
    assert comps == [x, y]
    assert parse_series(io.StringIO(json.dumps(series_to_dict(x)))) == x
    with pytest.raises(ParseError):
        parse_series(io.StringIO("{not json"))


def test_dumps_is_deterministic():
    report = {"a": 0.1, "b": [1, 2.5], "c": {"re": Fraction(1, 3), "im": 0}}
    assert dumps(report) == dumps(report)
    assert '"a": 0.10000000000000001' in dumps(report)


def test_cli_table_pair(tmp_path, capsys):
    X, Y = Series.variables(2, 5)
    f1 = write(tmp_path, "f1.json", (X - 1) * (X + Y) ** 2)
    f2 = write(tmp_path, "f2.json", (1 - 3 * Y) * (X + Y))
    status, out, _ = run_cli(capsys, "coprime", f1, f2, "--dmax", "2")
    report = json.loads(out)
    assert status == 0
    assert report["result"]["status"] == "composite-consistent"
    assert report["result"]["ranks"][2] == {"d": 2, "rank": 6, "bound": 6, "kernel": 6}
    assert report["config"]["dmax"] == 2
    # byte-identical on a second run
    assert run_cli(capsys, "coprime", f1, f2, "--dmax", "2")[1] == out


def test_cli_flow_of_euler_field(tmp_path, capsys):
    (z,) = Series.variables(1, 6)
    path = write(tmp_path, "euler.json", {"components": [series_to_dict(z)]})
    status, out, _ = run_cli(capsys, "flow", path, "--order", "4")
    comp = series_from_dict(json.loads(out)["result"]["components"][0])
    assert status == 0
    assert comp == Series(2, 4, {(1, k): Fraction(1, [1, 1, 2, 6][k]) for k in range(4)})


def test_cli_odesolve(tmp_path, capsys):
    w, d0, d1 = Series.variables(3, 7)
    path = write(tmp_path, "ode.json", d1 - d0 - w)
    status, out, _ = run_cli(capsys, "odesolve", path, "-k", "1", "--order", "6")
    sol = series_from_dict(json.loads(out)["result"]["solution"])
    assert status == 0 and sol.coefficient(6) == Fraction(1, 720)


def test_cli_solvable2_and_invert(tmp_path, capsys):
    (z,) = Series.variables(1, 8)
    f = write(tmp_path, "f.json", z + z * z)
    g = write(tmp_path, "g.json", z + z ** 3)
    status, out, _ = run_cli(capsys, "solvable2", f, g, "--order", "6")
    result = json.loads(out)["result"]
    assert status == 0 and not result["passes"] and result["failing_degree"] == 5
    status, out, _ = run_cli(capsys, "invert", f)
    inv = series_from_dict(json.loads(out)["result"]["result"])
    assert inv.coefficient(2) == -1


def test_cli_dconst_text(capsys):
    status, out, _ = run_cli(capsys, "dconst", "-k", "2", "--alpha", "1", "--beta", "1/2", "--format", "text")
    assert status == 0 and "argmax: 3" in out


def test_cli_foliation_singular_points(tmp_path, capsys):
    X, Y = Series.variables(2, 4)
    P = write(tmp_path, "P.json", 6 * X * X - 11 * X * Y + 6 * Y * Y)
    Q = write(tmp_path, "Q.json", Y * Y)
    status, out, _ = run_cli(capsys, "foliation", P, Q, "--singular")
    result = json.loads(out)["result"]
    assert status == 0 and result["rnd_star"]
    # real scalars are written as plain numbers
    assert [round(p["u"], 9) for p in result["singular_points"]] == [1, 2, 3]


def test_cli_errors(tmp_path, capsys):
    status, _, err = run_cli(capsys, "invert", str(tmp_path / "missing.json"))
    assert status == 2 and "missing.json" in err
    X, Y = Series.variables(2, 4)
    P = write(tmp_path, "P.json", 6 * X * X - 11 * X * Y + 6 * Y * Y)
    Q = write(tmp_path, "Q.json", Y * Y)
    status, out, _ = run_cli(capsys, "foliation", P, Q, "--holonomy", "--mode", "exact")
    assert status == 2 and json.loads(out)["error"]["kind"] == "ParseError"
    bad = write(tmp_path, "bad.json", {"vars": ["z"], "trunc": 2, "terms": [{"exp": [1], "re": 0.5}]})
    status, _, _ = run_cli(capsys, "invert", bad)
    assert status == 2


def test_cli_writes_to_file(tmp_path, capsys):
    (z,) = Series.variables(1, 5)
    f = write(tmp_path, "f.json", z + z * z)
    out = tmp_path / "out.json"
    assert main(["invert", f, "--out", str(out)]) == 0
    assert json.loads(out.read_text())["status"] == 0
