import csv
import io
import json

import pytest

from pencilhyp import cli
from pencilhyp.errors import SchemaError


def write(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_parse_model_config():
    cfg = cli.parse_config('{"model": "almost_wave", "a": 2, "b": 3, '
                           '"tolerances": {"rank_tol": 1e-10}}')
    assert cfg.source == "almost_wave" and cfg.tolerances.rank_tol == 1e-10
    assert cfg.build_system().N == 1


def test_parse_inline_config():
    doc = {"system": {"d": 2, "N": 1, "coeffs": [[[[1.0]], [[0.0]]], [[[0.0]], [[-1.0]]]]}}
    cfg = cli.parse_config(json.dumps(doc))
    assert cfg.source == "inline" and cfg.build_system().d == 2


@pytest.mark.parametrize("text,where", [
    ('{"model": "almost_wave", "a": 2}', None),
    ('{"model": "almost_wave", "a": 2, "b": 3, "c": 1}', None),
    ('{"model": "nope"}', ("model",)),
    ('{"model": "almost_wave", "a": 2, "b": 3, "tolerances": {"rank_tol": -1}}',
     ("tolerances", "rank_tol")),
    ('{"system": {"d": 2, "N": 1, "coeffs": [[[[1.0]]]]}}', ("system", "coeffs")),
    ('[1, 2]', None),
    ('{not json', None),
])
def test_schema_errors(text, where):
    with pytest.raises(SchemaError) as err:
        cli.parse_config(text)
    if where is not None:
        assert tuple(err.value.path) == where


def test_classify_exit_codes_and_report(tmp_path, capsys):
    path = write(tmp_path, {"model": "almost_wave", "a": 2, "b": 3})
    out = tmp_path / "r.json"
    assert cli.main(["classify", "--config", path, "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["verdict"] == "StrictlyHyperbolic"
    assert "convention_note" in doc and doc["config"]["a"] == 2
    path = write(tmp_path, {"model": "almost_wave", "a": 2, "b": 2}, "weak.json")
    assert cli.main(["classify", "--config", path]) == 2
    elliptic = {"system": {"d": 2, "N": 1, "coeffs": [[[[1.0]], [[0.0]]], [[[0.0]], [[1.0]]]]}}
    assert cli.main(["classify", "--config", write(tmp_path, elliptic, "e.json")]) == 3


def test_report_is_deterministic(tmp_path):
    path = write(tmp_path, {"model": "wave", "speeds": [1.0, 2.0], "sampling": {"count": 8}})
    a, b = io.StringIO(), io.StringIO()
    cli.run("classify", cli.parse_config(open(path).read()), stream=a)
    cli.run("classify", cli.parse_config(open(path).read()), stream=b)
    assert a.getvalue() == b.getvalue()


def test_csv_output(tmp_path):
    path = write(tmp_path, {"model": "wave", "speeds": [1.0, 0.5],
                            "sampling": {"count": 4, "refine": False}})
    table = tmp_path / "t.csv"
    assert cli.main(["classify", "--config", path, "--csv", str(table),
                     "--out", str(tmp_path / "r.json")]) == 0
    rows = list(csv.DictReader(table.open()))
    assert len(rows) == 4
    assert set(cli.CSV_NORMS) <= set(rows[0])
    assert float(rows[0]["k1"]) == 1.0


def test_factorize_and_spectrum(tmp_path, capsys):
    path = write(tmp_path, {"model": "almost_wave", "a": 2, "b": 3})
    assert cli.main(["factorize", "--config", path, "--direction", "1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["factorization"]["D1"] == pytest.approx([3.0])
    assert doc["factorization"]["D2"] == pytest.approx([2.0])
    path = write(tmp_path, {"model": "almost_wave", "a": 2, "b": 2}, "w.json")
    assert cli.main(["factorize", "--config", path]) == 2
    doc = json.loads(capsys.readouterr().out)
    assert doc["factorization_error"].startswith("Defective")
    assert cli.main(["spectrum", "--config", path]) == 2
    doc = json.loads(capsys.readouterr().out)
    assert doc["direction"]["alg_mult"] == [2] and doc["direction"]["geo_mult"] == [1]


def test_maxwell_case(tmp_path, capsys):
    m = [[-1, 0, 0, 0], [0, 4, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    path = write(tmp_path, {"model": "maxwell", "ghat": m, "gtilde": m})
    assert cli.main(["maxwell-case", "--config", path, "--direction", "1,0,0"]) == 2
    doc = json.loads(capsys.readouterr().out)
    assert doc["case_counts"] == {"Case4": 1}
    assert "n = (-1, 0, 0, 0)" in doc["convention_note"]


def test_errors_go_to_stderr(tmp_path, capsys):
    path = write(tmp_path, {"model": "almost_wave", "a": 2, "b": 3})
    assert cli.main(["classify", "--config", path, "--direction", "1,1"]) == 1
    err = capsys.readouterr().err
    assert "direction" in err and "config:" in err
    assert cli.main(["classify"]) == 1
    assert cli.main(["maxwell-case", "--config", path]) == 1


def test_selftest_command(capsys):
    assert cli.main(["selftest"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert all(c["passed"] for c in doc["checks"])
