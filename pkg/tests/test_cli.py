import json
import subprocess
import sys
from pathlib import Path

import pytest

from infothermo import cli

FIXTURES = Path(__file__).parent / "fixtures" / "cli"
COMMANDS = json.loads((FIXTURES / "commands.json").read_text())


def run(args, capsys):
    code = cli.main(args)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(autouse=True)
def _in_fixture_dir(monkeypatch):
    monkeypatch.chdir(FIXTURES)


@pytest.mark.parametrize("case", COMMANDS, ids=[c["name"] for c in COMMANDS])
def test_golden(case, capsys):
    code, out, _ = run(case["args"], capsys)
    assert code == 0
    assert out == (FIXTURES / "golden" / f"{case['name']}.out").read_text()


def test_info_values(capsys):
    _, out, _ = run(["info", "--state", "mixed.json", "--hamiltonian", "h_qubit.json"], capsys)
    doc = json.loads(out)
    assert doc == {"E": 0.5, "S": 0.69314718056, "beta": 0.0, "T": "inf", "B": 0.5, "F": 0.0}
    _, out, _ = run(["info", "--state", "excited.json", "--hamiltonian", "h_qubit.json"], capsys)
    doc = json.loads(out)
    assert doc["beta"] == "inf" and doc["F"] == 1.0 and doc["B"] == 0.0
    _, out, _ = run(["info", "--state", "gibbs1.json", "--hamiltonian", "h_qubit.json"], capsys)
    assert abs(json.loads(out)["beta"] - 1.0) < 1e-8


def test_malformed_json_exit_2(capsys):
    code, out, err = run(["info", "--state", "malformed.json", "--hamiltonian", "h_qubit.json"], capsys)
    assert code == 2 and out == "" and "malformed JSON" in err


def test_invalid_state_names_invariant(capsys):
    code, _, err = run(["info", "--state", "not_psd.json", "--hamiltonian", "h_qubit.json"], capsys)
    assert code == 2 and "positivity" in err


def test_missing_file_exit_2(capsys):
    code, _, err = run(["info", "--state", "nope.json", "--hamiltonian", "h_qubit.json"], capsys)
    assert code == 2 and "nope.json" in err


def test_dimension_mismatch_exit_2(capsys):
    code, _, err = run(["info", "--state", "mixed.json", "--hamiltonian", "h_qutrit.json"], capsys)
    assert code == 2 and "dimension" in err


def test_bad_engine_config_exit_2(capsys):
    code, _, _ = run(["engine", "--beta-cold", "0.5", "--beta-hot", "2"], capsys)
    assert code == 2


def test_convert_rate_pure_target_is_a_result(capsys):
    code, out, _ = run(["convert-rate", "--source", "mixed.json", "--target", "excited.json", "--hamiltonian", "h_qubit.json"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["rate"] is None and doc["explanation"]


def test_gibbs_round_trip(tmp_path, capsys):
    code, out, _ = run(["gibbs", "--hamiltonian", "h_qutrit.json", "--beta", "0.8"], capsys)
    assert code == 0
    path = tmp_path / "g.json"
    path.write_text(out)
    _, out, _ = run(["info", "--state", str(path), "--hamiltonian", "h_qutrit.json"], capsys)
    doc = json.loads(out)
    assert abs(doc["beta"] - 0.8) < 1e-8 and doc["F"] == 0.0


def test_equilibrate_joint_state(capsys):
    code, out, _ = run(["equilibrate", "--hamiltonian", "h_qubit.json", "--hamiltonian", "h_qubit.json", "--state", "joint_thermal.json"], capsys)
    assert code == 0
    assert abs(json.loads(out)["common_beta"] - 1.32431613253) < 1e-10


def test_equilibrate_needs_betas_or_state(capsys):
    code, _, err = run(["equilibrate", "--hamiltonian", "h_qubit.json"], capsys)
    assert code == 2 and "--beta" in err


def test_process_random_unitary_is_seeded(capsys):
    args = ["process", "--hamiltonian-a", "h_qubit.json", "--hamiltonian-b", "h_qubit.json", "--initial", "joint_thermal.json", "--random-unitary"]
    _, a, _ = run(["--seed", "5", *args], capsys)
    _, b, _ = run(["--seed", "5", *args], capsys)
    _, c, _ = run(["--seed", "6", *args], capsys)
    assert a == b and a != c
    assert json.loads(a)["first_law_residual"] == 0.0


def test_process_identity_pair(capsys):
    code, out, _ = run(["process", "--hamiltonian-a", "h_qubit.json", "--hamiltonian-b", "h_qubit.json", "--initial", "joint_thermal.json", "--final", "joint_thermal.json"], capsys)
    assert code == 0 and json.loads(out)["entropy_preserving"]


def test_engine_csv(tmp_path, capsys):
    path = tmp_path / "cycles.csv"
    code, out, _ = run(["engine", "--cycles", "3", "--policy", "partial", "--step", "0.5", "--csv", str(path)], capsys)
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0].startswith("cycle,W,eta") and len(lines) == 4
    summary = json.loads(out)
    assert summary["total_work"] <= summary["free_energy_available"] + 1e-9


def test_diagram_outputs(tmp_path, capsys):
    code, out, _ = run(["diagram", "--hamiltonian", "h_qubit.json", "--format", "csv"], capsys)
    assert code == 0 and out.splitlines()[0] == "beta,energy,entropy"
    svg = tmp_path / "fig.svg"
    code, out, _ = run(["diagram", "--hamiltonian", "h_qubit.json", "--state", "coherent.json", "--annotate", "--out", str(svg)], capsys)
    assert code == 0 and out == ""
    text = svg.read_text()
    assert ">coherent</text>" in text and ">F coherent</text>" in text


def test_oracle_hidden_but_callable(capsys):
    with pytest.raises(SystemExit):
        cli.main(["--help"])
    helptext = capsys.readouterr().out
    assert "oracle" not in helptext and "convert-rate" in helptext
    code, out, _ = run(["oracle", "--hamiltonian", "h_qubit.json", "--entropy", "0.5"], capsys)
    assert code == 0 and 0 < json.loads(out)["min_energy"] < 0.5


def test_help_documents_every_flag(capsys):
    parser = cli.build_parser()
    sub = next(a for a in parser._actions if a.dest == "command")
    for name, p in sub.choices.items():
        if name == "oracle":
            continue
        for action in p._actions:
            if action.dest != "help":
                assert action.help, f"{name} {action.option_strings}"


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "infothermo", "info", "--state", "mixed.json", "--hamiltonian", "h_qubit.json"],
                       capture_output=True, text=True, cwd=FIXTURES)
    assert r.returncode == 0
    assert r.stdout == (FIXTURES / "golden" / "info_mixed.out").read_text()
