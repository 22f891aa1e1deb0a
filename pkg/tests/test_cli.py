import json
import subprocess
import sys

import pytest

from k3lat.casebook import case_data
from k3lat.cli import main


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def _no_floats(obj):
    if isinstance(obj, float):
        return False
    if isinstance(obj, dict):
        return all(_no_floats(v) for v in obj.values())
    if isinstance(obj, list):
        return all(_no_floats(v) for v in obj)
    return True


@pytest.fixture
def config_file(tmp_path):
    def write(name):
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(case_data()["configurations"][name]))
        return str(path)
    return write


def test_lat(capsys):
    code, out, _ = run(capsys, "lat", "--ade", "E6", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["det"] == 3 and data["signature"] == [0, 6]


def test_disc_e6(capsys):
    code, out, _ = run(capsys, "disc", "--ade", "E6", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["orders"] == [3]
    assert sorted(v for _, v in data["q"]) == ["0", "2/3", "2/3"]
    assert _no_floats(data)


def test_disc_cap(capsys):
    code, out, _ = run(capsys, "disc", "--name", "E8(2)", "--cap-disc", "10")
    assert code == 3 and "omitted" in out


def test_roots_and_gram_file(capsys, tmp_path):
    path = tmp_path / "d4.json"
    path.write_text(json.dumps({"gram": [[-2, 1, 0, 0], [1, -2, 1, 1], [0, 1, -2, 0], [0, 1, 0, -2]]}))
    code, out, _ = run(capsys, "roots", "--gram", str(path), "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["count"] == 24 and data["types"] == ["D4"]
    code, _, err = run(capsys, "roots", "--ade", "E8", "--cap-roots", "100")
    assert code == 3


def test_sat(capsys):
    code, out, _ = run(capsys, "sat", "--name", "U", "--vectors", "[[1, 1], [1, -1]]", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["index"] == "2"


def test_overlat_on_configuration(capsys, config_file):
    code, out, _ = run(capsys, "overlat", "--file", config_file("quintic-tacnode"), "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert len(data["candidates"]) == 1 and data["candidates"][0]["index"] == 2
    assert data["candidates"][0]["iso_class"] == "U(2)+D5"
    code, out, _ = run(capsys, "overlat", "--file", config_file("quintic-5nodes"), "--format", "json")
    data = json.loads(out)
    assert len(data["candidates"]) == 1 and data["candidates"][0]["iso_class"] == "U(2)+D4"


def test_overlat_on_lattice(capsys):
    code, out, _ = run(capsys, "overlat", "--ade", "A1", "--format", "json")
    assert code == 0 and len(json.loads(out)["candidates"]) == 1


def test_resolve(capsys):
    code, out, _ = run(capsys, "resolve", "--type", "D", "--n", "7", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["m"] == 2 and data["iota"] == "flip"
    assert set(data["dual_graph"]) == {"nodes", "edges"}
    code, out, _ = run(capsys, "resolve", "--type", "E8", "--format", "dot")
    assert code == 0 and out.startswith("graph")


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--case", "branch-curves")
    assert code == 0 and out.rstrip().endswith("checks, 0 failed")
    code, out, _ = run(capsys, "verify", "--case", "branch-curves", "--format", "json")
    data = json.loads(out)
    assert all(c["status"] == "pass" for c in data["reports"][0]["checks"])


def test_verify_reports_failures(capsys):
    code, out, _ = run(capsys, "verify", "--case", "zariski-pair")
    assert code == 1 and "1 failed" in out


def test_usage_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "lat", "--gram", str(bad))[0] == 2
    assert run(capsys, "overlat", "--file", str(bad))[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "lat")[0] == 2
    assert run(capsys, "lat", "--ade", "F4")[0] == 2
    assert run(capsys, "disc", "--ade", "A2", "--cap-disc", "0")[0] == 2
    assert run(capsys, "verify", "--case", "nope")[0] == 2
    assert run(capsys, "verify")[0] == 2
    assert run(capsys, "lat", "--ade", "A2", "--format", "dot")[0] == 2
    odd = tmp_path / "odd.json"
    odd.write_text(json.dumps({"gram": [[1]]}))
    assert run(capsys, "lat", "--gram", str(odd))[0] == 2


def test_malformed_configuration(capsys, tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"degree": 6, "components": [{"degree": 5}], "singularities": []}))
    assert run(capsys, "overlat", "--file", str(path))[0] == 2


def test_json_output_is_deterministic(capsys, config_file):
    args = ("overlat", "--file", config_file("quintic-5nodes"), "--format", "json")
    first = run(capsys, *args)[1]
    assert run(capsys, *args)[1] == first


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "k3lat", "disc", "--ade", "A1"], capture_output=True, text=True)
    assert proc.returncode == 0 and "3/2" in proc.stdout


def test_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("K3LAT_THREADS", "two")
    assert run(capsys, "verify", "--case", "branch-curves")[0] == 2
