import json
import shutil
import subprocess
import sys

import numpy as np
import pytest

from thomae_rosenhain.cli import main


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj), encoding="utf-8")
    return str(path)


@pytest.fixture
def g2(tmp_path):
    return write(tmp_path, "g2.json", {"genus": 2, "branch_points": [0, 1, 2, 3, 4]})


@pytest.fixture
def g2_periods(tmp_path, g2, capsys):
    assert main(["periods", g2]) == 0
    return write(tmp_path, "p2.json", capsys.readouterr().out)


def run(argv, capsys):
    code = main(argv)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_periods_output(g2, capsys):
    code, out, _ = run(["periods", g2], capsys)
    data = json.loads(out)
    assert code == 0
    assert np.asarray(data["a_matrix"]).shape == (2, 2, 2)
    assert np.asarray(data["tau"]).shape == (2, 2, 2)
    assert data["a_matrix"][0][0][0] == pytest.approx(1.8269787817451617, rel=1e-10)


def test_periods_byte_identical(g2, capsys):
    first = run(["periods", g2], capsys)[1]
    assert run(["periods", g2], capsys)[1] == first


@pytest.mark.parametrize("content,fragment", [
    ("{not json", "malformed"),
    ('{"genus": 2, "branch_points": [0, 2, 1, 3, 4]}', "increasing"),
    ('{"genus": 2}', "branch_points"),
])
def test_periods_usage_errors(tmp_path, capsys, content, fragment):
    code, _, err = run(["periods", write(tmp_path, "bad.json", content)], capsys)
    assert code == 2 and fragment in err


def test_theta_subcommand(tmp_path, capsys):
    tau = write(tmp_path, "tau.json", [[[0, 1]]])
    code, out, _ = run(["theta", tau, "--char", "[0;0]"], capsys)
    assert code == 0
    assert json.loads(out)["value"][0] == pytest.approx(1.0864348112133082, abs=1e-13)
    code, out, _ = run(["theta", tau, "--char", "[1;1]", "--gradient"], capsys)
    assert code == 0 and json.loads(out)["parity"] == "odd"
    assert run(["theta", tau, "--char", "[0;0]", "--gradient"], capsys)[0] == 2
    assert run(["theta", tau, "--char", "[00;00]"], capsys)[0] == 2
    code, out, _ = run(["theta", tau, "--char", "[0;0]", "--z", "0.1+0.2j"], capsys)
    assert code == 0


def test_verify_all_genus2(g2, capsys):
    code, out, err = run(["verify", "all", g2], capsys)
    assert code == 0
    suites = json.loads(out)["suites"]
    assert "thomae1" in suites and "appendix-a" in suites
    for line in err.strip().splitlines():
        name, rest = line.split(": ")
        passed, total = rest.split()[0].split("/")
        assert passed == total and rest.split()[1].startswith("residual_max=")


def test_verify_rosenhain3(tmp_path, capsys):
    g3 = write(tmp_path, "g3.json", {"genus": 3, "branch_points": [0, 1, 2, 3, 4, 5, 6]})
    assert run(["verify", "rosenhain3", g3], capsys)[0] == 2
    assert run(["verify", "rosenhain3", g3, "--e3", "2"], capsys)[0] == 0


def test_verify_errors(g2, tmp_path, capsys):
    assert run(["verify", "nonsense", g2], capsys)[0] == 2
    assert run(["verify", "thomae1"], capsys)[0] == 2
    bad = write(tmp_path, "bad_tau.json", [[[0, 1], [0.1, 0]], [[0.1, 0], [0, -1]]])
    assert run(["verify", "appendix-a", "--tau", bad], capsys)[0] == 3


def test_verify_appendix_from_tau(g2_periods, capsys):
    code, out, _ = run(["verify", "appendix-a", "--tau", g2_periods], capsys)
    assert code == 0 and len(json.loads(out)["suites"]["appendix-a"]["reports"]) == 15


def test_verify_failure_exit_code(g2, capsys):
    assert run(["verify", "thomae1", g2, "--tol", "1e-30"], capsys)[0] == 1


def test_reconstruct_round_trip(tmp_path, capsys):
    curve = write(tmp_path, "n.json", {"genus": 2, "branch_points": [0, 1, 2.5, 4, 7]})
    periods = write(tmp_path, "np.json", run(["periods", curve], capsys)[1])
    code, out, _ = run(["reconstruct", periods, "--genus2", "1", "2"], capsys)
    data = json.loads(out)
    assert code == 0 and data["fit"]["pass"]


def test_reconstruct_fake_tau_and_errors(tmp_path, capsys):
    tau = write(tmp_path, "i.json", [[[0, 1], [0, 0]], [[0, 0], [0, 1]]])
    code, out, _ = run(["reconstruct", tau, "--genus2", "1", "2"], capsys)
    assert code == 0 and json.loads(out)["fit"] is None
    assert run(["reconstruct", tau], capsys)[0] == 2
    tau3 = write(tmp_path, "i3.json", (np.stack([np.zeros((3, 3)), np.eye(3)], -1)).tolist())
    assert run(["reconstruct", tau3, "--genus3"], capsys)[0] == 2
    assert run(["reconstruct", tau3, "--genus3", "--e3", "2"], capsys)[0] == 0
    bad = write(tmp_path, "bad.json", [[[0, -1], [0, 0]], [[0, 0], [0, 1]]])
    assert run(["reconstruct", bad, "--genus2", "1", "2"], capsys)[0] == 3


def test_recover_branch_points(tmp_path, capsys):
    curve = write(tmp_path, "n.json", {"genus": 2, "branch_points": [0, 1, 2.5, 4, 7]})
    periods = write(tmp_path, "np.json", run(["periods", curve], capsys)[1])
    code, out, _ = run(["recover-branch-points", periods], capsys)
    assert code == 0
    np.testing.assert_allclose(json.loads(out)["branch_points"], [0, 1, 2.5, 4, 7], atol=1e-8)


def test_recover_genus3(tmp_path, capsys):
    curve = write(tmp_path, "n3.json", {"genus": 3, "branch_points": [0, 1, 2, 3, 4, 5, 6]})
    periods = write(tmp_path, "np3.json", run(["periods", curve], capsys)[1])
    assert run(["recover-branch-points", periods], capsys)[0] == 2
    code, out, _ = run(["recover-branch-points", periods, "--e3", "2"], capsys)
    assert code == 0
    np.testing.assert_allclose(json.loads(out)["branch_points"], range(7), atol=1e-7)


def test_console_script(g2):
    exe = shutil.which("thomae-rosenhain")
    cmd = [exe] if exe else [sys.executable, "-m", "thomae_rosenhain.cli"]
    proc = subprocess.run(cmd + ["verify", "thomae1", g2], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stderr.startswith("thomae1: 10/10")
