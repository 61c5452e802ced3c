import json
import shutil

import pytest

from instanton_lab import cli, io


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_fixture(capsys):
    code, out, _ = run(capsys, "check", "--net", "@net_n2")
    report = json.loads(out)
    assert code == 0 and report["ok"] and report["tool"] == "instanton-lab"
    assert report["result"]["rank_gamma_hat"] == 10


def test_check_fails_on_zero_net(tmp_path, capsys):
    zero = [["0"] * 2] * 2
    p = tmp_path / "zero.json"
    p.write_text(json.dumps({"n": 2, "G1": zero, "G2": zero, "G3": zero}))
    code, out, _ = run(capsys, "check", "--net", str(p))
    assert code == 1 and not json.loads(out)["ok"]


def test_input_errors_exit_2(tmp_path, capsys):
    code, _, err = run(capsys, "check", "--net", str(tmp_path / "missing.json"))
    assert code == 2 and "cannot read" in err
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2,\n "G": [}')
    code, _, err = run(capsys, "check", "--net", str(bad))
    assert code == 2 and "line 2" in err
    code, _, _ = run(capsys, "rr-table", "--degree", "5", "--charge", "1")
    assert code == 2


def test_rerun_is_byte_identical(capsys):
    for argv in (
        ("jumping", "--net", "@net_n3", "--oracle-lines", "2"),
        ("stability", "--net", "@unstable_n3"),
        ("random-net", "--n", "2", "--seed", "3"),
    ):
        first = run(capsys, *argv)
        assert first == run(capsys, *argv)
        assert first[0] == 0


def test_rr_table_text_and_negative_twists(capsys):
    code, out, _ = run(capsys, "rr-table", "--degree", "5", "--charge", "2", "--twists", "-3..2", "--text")
    assert code == 0 and "h0 - h1" in out
    code, out, _ = run(capsys, "rr-table", "--degree", "4", "--charge", "3")
    assert code == 0 and json.loads(out)["ok"]


def test_stability_reports(capsys):
    code, out, _ = run(capsys, "stability", "--net", "@unstable_pencil_n3")
    result = json.loads(out)["result"]
    assert code == 0 and result["unstable"] and result["verified"]
    code, out, _ = run(capsys, "stability", "--net", "@net_n2", "--budget", "50")
    result = json.loads(out)["result"]
    assert code == 0 and not result["unstable"] and result["candidates_tried"] <= 50


def test_y4_disc(capsys):
    code, out, _ = run(capsys, "y4-disc", "--pencil", "@pencil_smooth")
    result = json.loads(out)["result"]
    assert code == 0 and result["smooth"] and result["genus2"]["genus"] == 2
    code, out, _ = run(capsys, "y4-disc", "--pencil", "@pencil_degenerate")
    assert code == 1


def test_theta_and_roundtrip(capsys):
    code, out, _ = run(capsys, "theta", "--net", "@net_n2", "--kmax", "3")
    result = json.loads(out)["result"]
    assert code == 0 and result["roundtrip_ok"] and result["dims_ok"]
    code, _, _ = run(capsys, "roundtrip", "--net", "@net_n3")
    assert code == 0


def test_out_file_and_random_net_roundtrip(tmp_path, capsys):
    target = tmp_path / "net.json"
    code, out, _ = run(capsys, "random-net", "--n", "2", "--out", str(target))
    assert code == 0 and out == ""
    code, _, _ = run(capsys, "check", "--net", str(target))
    assert code == 0


def test_fixture_dir_override(tmp_path, monkeypatch, capsys):
    shutil.copy(io.resolve("@net_n2"), tmp_path / "mine.json")
    shutil.copy(io.resolve("@space"), tmp_path / "space.json")
    monkeypatch.setenv(io.FIXTURE_ENV, str(tmp_path))
    code, _, _ = run(capsys, "check", "--net", "@mine")
    assert code == 0
    code, _, err = run(capsys, "check", "--net", "@net_n3")
    assert code == 2


def test_usage_error_from_argparse(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["check"])
    assert exc.value.code == 2
