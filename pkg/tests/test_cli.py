import json
import subprocess
import sys

import numpy as np
import pytest

from spherespan.cli import main
from spherespan.degree import angle_map


@pytest.fixture
def bodies(tmp_path):
    lp2 = tmp_path / "lp2.json"
    lp2.write_text(json.dumps({"kind": "lp", "p": 2, "dim": 2}))
    sq = tmp_path / "square.json"
    sq.write_text(json.dumps({"kind": "lp", "p": "inf", "dim": 2}))
    return {"lp2": str(lp2), "square": str(sq)}


def test_gauge_prints_value(bodies, capsys):
    assert main(["gauge", "--body", bodies["square"], "--point", "0.5,0.25"]) == 0
    assert capsys.readouterr().out.strip() == "0.5"


def test_inline_body(capsys):
    assert main(["gauge", "--body", '{"kind": "lp", "p": 1, "dim": 2}', "--point", "0.3,0.3"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(0.6, abs=1e-15)


def test_theta(bodies, capsys):
    assert main(["theta", "--body", bodies["lp2"], "--uradius", "0.1", "--samples", "200"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["theta"] == pytest.approx(np.pi / 2, abs=1e-6)


def test_decompose3_and_verify(bodies, tmp_path, capsys):
    cert = tmp_path / "cert.json"
    again = tmp_path / "again.json"
    csv_path = tmp_path / "cert.csv"
    args = ["decompose3", "--body", bodies["lp2"], "--grid", "100", "--seed", "0"]
    assert main(args + ["--out", str(cert), "--csv", str(csv_path)]) == 0
    assert main(args + ["--out", str(again)]) == 0
    assert cert.read_bytes() == again.read_bytes()
    data = json.loads(cert.read_text())
    assert data["errors"]["sup_reconstruction_error"] <= 1e-7
    assert len(data["components"]) == 3
    assert csv_path.read_text().startswith("sample,component,coefficient")
    assert main(["verify", "--cert", str(cert)]) == 0
    assert json.loads(capsys.readouterr().out)["ok"] is True
    # a tampered certificate fails verification
    data["components"][0]["values"][0][1] += 0.01
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    assert main(["verify", "--cert", str(bad)]) == 1


def test_decompose_path_and_four(bodies, tmp_path):
    for cmd in (["decompose-path"], ["decompose-path", "--mode", "average"], ["decompose4", "--grid", "200"]):
        out = tmp_path / "c.json"
        assert main(cmd + ["--body", bodies["lp2"], "--out", str(out)]) == 0
        assert main(["verify", "--cert", str(out)]) == 0


def test_degree(tmp_path, capsys):
    f = tmp_path / "map.json"
    f.write_text(json.dumps(angle_map(2, 200).to_json()))
    assert main(["degree", "--map", str(f)]) == 0
    assert capsys.readouterr().out.strip() == "2"


def test_refute_exit_code_two(capsys):
    assert main(["refute", "--count", "2"]) == 2
    out = json.loads(capsys.readouterr().out)
    assert out["certificates"] == 2


def test_face_check_exit_codes(bodies, capsys):
    base = ["face-check", "--body", bodies["square"], "--point", "1,0"]
    assert main(base + ["--components", "1,1;1,-1", "--lambdas", "0.5,0.5"]) == 0
    assert main(base + ["--components", "1,1;0.998,-1", "--lambdas", "0.5,0.5"]) == 2


def test_witness_and_approx(bodies, capsys):
    assert main(["witness", "--body", bodies["lp2"], "--section", "ccw", "--grid", "64"]) == 0
    assert json.loads(capsys.readouterr().out)["all_found"] is True
    assert main(["approx", "--body", bodies["lp2"], "--m", "6"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["hausdorff"]["distance"] == pytest.approx(1 - np.cos(np.pi / 6), abs=1e-9)


def test_chord(bodies, capsys):
    assert main(["chord", "--body", bodies["lp2"], "--point", "0.5,0"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["count"] == 1
    assert out["chord_map"]["p2"] == pytest.approx([0.5, np.sqrt(0.75)], abs=1e-12)


def test_errors_name_the_field(tmp_path, capsys):
    assert main(["gauge", "--body", str(tmp_path / "missing.json"), "--point", "1,0"]) == 1
    assert "--body" in capsys.readouterr().err
    assert main(["gauge", "--body", '{"kind": "blob"}', "--point", "1,0"]) == 1
    assert "kind" in capsys.readouterr().err
    assert main(["gauge", "--body", '{"kind": "lp", "p": 2, "dim": 2}', "--point", "1,x"]) == 1
    assert "--point" in capsys.readouterr().err
    assert main(["degree", "--map", '{"domain": [[1, 0]]}']) == 1
    assert "image" in capsys.readouterr().err


def test_module_entry_point(bodies):
    res = subprocess.run([sys.executable, "-m", "spherespan", "gauge", "--body", bodies["square"],
                          "--point", "0.5,0.25"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "0.5"


def test_help_documents_csv_columns(capsys):
    with pytest.raises(SystemExit):
        main(["theta", "--help"])
    assert "p_x,p_y,angle" in capsys.readouterr().out
