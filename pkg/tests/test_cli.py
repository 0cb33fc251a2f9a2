import json
import subprocess
import sys

import pytest

from conftest import fixture_path
from netsup.cli import main

PED = str(fixture_path("pedestrian.tdes"))
EX2 = str(fixture_path("nonfifo_example.tdes"))
ORDER = str(fixture_path("order_requirement.tdes"))
NS_FIG = str(fixture_path("pedestrian_ns_figure.tdes"))


def run(*argv):
    return main(list(argv))


def test_validate_ok(capsys):
    assert run("validate", "--plant", PED) == 0
    assert "8 states" in capsys.readouterr().out


def test_parse_error_is_positioned(tmp_path, capsys):
    bad = tmp_path / "bad.tdes"
    bad.write_text("tdes x\nevent a controllable\nstate s initial\ntrans s b s\n")
    assert run("validate", "--plant", str(bad)) == 1
    assert f"{bad}:4:9: unknown event 'b'" in capsys.readouterr().err


def test_missing_file(capsys):
    assert run("validate", "--plant", "/nonexistent.tdes") == 1
    assert "error:" in capsys.readouterr().err


def test_synth_example_writes_artifacts(tmp_path, capsys):
    out = tmp_path / "out"
    assert run("synth", "--plant", EX2, "--lmax", "2", "--mmax", "2", "--out", str(out)) == 0
    names = sorted(p.name for p in out.iterdir())
    assert names == ["np.decode.json", "np.dot", "np.tdes", "ns.decode.json", "ns.dot", "ns.tdes",
                     "nsp.decode.json", "nsp.tdes", "report.json", "synthesis.log"]
    report = json.loads((out / "report.json").read_text())
    assert report["header"]["ns_states"] == 8
    assert report["header"]["config"]["lmax"] == 2
    assert report["header"]["depth"] == 10
    assert all(c["verdict"] == "pass" for c in report["checks"])
    assert "result: supervisor with 8 states" in capsys.readouterr().out


def test_synth_non_fifo_no_result(capsys):
    code = run("synth", "--plant", EX2, "--lmax", "2", "--mmax", "2", "--control-channel", "non-fifo")
    assert code == 2
    assert "initial state uncontrollably reaches bad set" in capsys.readouterr().out


@pytest.mark.parametrize("extra", [[], ["--no-forcible-enabling"]])
def test_synth_pedestrian_no_result(extra, capsys):
    assert run("synth", "--plant", PED, "--nc", "1", "--no", "1", "--lmax", "1", "--mmax", "2", *extra) == 2
    assert "initial state uncontrollably reaches bad set" in capsys.readouterr().out


def test_synth_with_requirement(tmp_path):
    out = tmp_path / "o"
    assert run("synth", "--plant", EX2, "--requirement", ORDER, "--lmax", "2", "--mmax", "2",
               "--out", str(out)) == 0
    assert (out / "plant_requirement.tdes").exists()
    checks = json.loads((out / "report.json").read_text())["checks"]
    assert [c["check"] for c in checks][-1] == "safety"


def test_strict_assumptions(capsys):
    assert run("synth", "--plant", EX2, "--strict-assumptions") == 1
    assert "control capacity assumption violated" in capsys.readouterr().err


def test_verify_drawn_supervisor_fails(tmp_path):
    out = tmp_path / "r.json"
    assert run("verify", "--plant", PED, "--supervisor", NS_FIG, "--mmax", "2", "-o", str(out)) == 1
    data = json.loads(out.read_text())
    verdicts = {c["check"]: c["verdict"] for c in data["checks"]}
    assert verdicts["nonblocking"] == "fail"
    assert data["header"]["assumption_initial_ticks"]["ok"] is True


def test_simulate(capsys):
    assert run("simulate", "--plant", PED, "--supervisor", NS_FIG, "--mmax", "2",
               "--trace", "j_e tick") == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "0 | j_e | (a0,y2,{},[(j,1)])"
    assert out[-1] == "enabled: j tick"


def test_simulate_rejects_disabled_event(capsys):
    assert run("simulate", "--plant", PED, "--supervisor", NS_FIG, "--trace", "p_o") == 1
    assert "enabled: {j_e, tick}" in capsys.readouterr().err


def test_project_product_complete(tmp_path, capsys):
    assert run("project", "--plant", PED, "--events", "j") == 0
    assert "event p" not in capsys.readouterr().out
    assert run("complete", "--requirement", ORDER) == 0
    assert "trans q0 b q_d" in capsys.readouterr().out
    out = tmp_path / "gr.tdes"
    assert run("product", "--plant", EX2, "--requirement", ORDER, "-o", str(out)) == 0
    assert out.read_text().startswith("tdes nonfifo_example_order_requirement\n")


def test_netplant_subcommand(tmp_path, capsys):
    assert run("netplant", "--plant", PED, "--mmax", "2", "--out", str(tmp_path)) == 0
    assert "39 states" in capsys.readouterr().err
    assert (tmp_path / "np.dot").read_text().startswith("digraph")


def test_requirement_event_mismatch(tmp_path, capsys):
    r = tmp_path / "r.tdes"
    r.write_text("tdes r\nevent a uncontrollable\nstate q initial marked\n")
    assert run("product", "--plant", EX2, "--requirement", str(r)) == 1
    assert "disagrees" in capsys.readouterr().err


def test_deterministic_artifacts(tmp_path):
    for d in ("a", "b"):
        assert run("synth", "--plant", EX2, "--lmax", "2", "--mmax", "2", "--out", str(tmp_path / d)) == 0
    for f in (tmp_path / "a").iterdir():
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "netsup.cli", "validate", "--plant", PED],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "ok" in proc.stdout
