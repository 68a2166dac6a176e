import json
from pathlib import Path

import pytest

from housealloc.cli import main
from housealloc.fileio import (
    FileFormatError,
    dumps_allocation,
    dumps_instance,
    loads_allocation,
    loads_instance,
)
from housealloc.model import Allocation

FIXTURES = Path(__file__).parent / "fixtures"


def run_cli(*argv, capsys=None):
    code = main(list(argv))
    if capsys is not None:
        captured = capsys.readouterr()
        return code, captured.out, captured.err
    return code


# ---------------------------------------------------------------------------
# File formats


def test_fixture_files_round_trip_bytes():
    for name in ("e1", "e2", "e3"):
        text = (FIXTURES / f"{name}.json").read_text(encoding="utf-8")
        assert dumps_instance(loads_instance(text)) == text


def test_instance_rejects_unknown_keys():
    doc = json.loads((FIXTURES / "e2.json").read_text())
    doc["flavor"] = "spicy"
    with pytest.raises(FileFormatError, match="flavor"):
        loads_instance(json.dumps(doc))


def test_instance_rejects_missing_agent_fields():
    doc = json.loads((FIXTURES / "e2.json").read_text())
    del doc["agents"][0]["endowment"]
    with pytest.raises(FileFormatError, match="endowment"):
        loads_instance(json.dumps(doc))


def test_allocation_document_round_trip(e2):
    alloc = Allocation({"1": "h2", "2": None})
    text = dumps_allocation(e2, alloc)
    parsed, stated, trace = loads_allocation(text, e2)
    assert parsed.assignment == {"1": "h2", "2": None}
    assert stated == 1 and trace is None
    assert dumps_allocation(e2, parsed) == text


def test_allocation_document_welfare_must_match(e2):
    text = json.dumps({"allocation": {"1": "h2", "2": None}, "welfare": 2})
    with pytest.raises(FileFormatError, match="welfare"):
        loads_allocation(text, e2)


def test_allocation_document_rejects_duplicate_house(e2):
    text = json.dumps({"allocation": {"1": "h1", "2": "h1"}, "welfare": 0})
    with pytest.raises(FileFormatError):
        loads_allocation(text, e2)


# ---------------------------------------------------------------------------
# run


def test_run_msir_on_e2(tmp_path, capsys):
    out = tmp_path / "out.json"
    code = main(["run", str(FIXTURES / "e2.json"), "--mechanism", "msir",
                 "--output", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["allocation"] == {"1": "h1", "2": "h2"}
    assert doc["welfare"] == 0
    assert doc["trace"]["W"] == 0
    assert doc["trace"]["t"] == {"1": 0, "2": 0}


def test_run_mir_on_e2(tmp_path):
    out = tmp_path / "out.json"
    assert main(["run", str(FIXTURES / "e2.json"), "--mechanism", "mir",
                 "--output", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["allocation"]["1"] == "h2"
    assert doc["welfare"] == 1


def test_run_empty_instance(tmp_path):
    src = tmp_path / "empty.json"
    src.write_text(json.dumps({"agents": [], "houses": []}))
    out = tmp_path / "out.json"
    assert main(["run", str(src), "--mechanism", "msir", "--output", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["allocation"] == {} and doc["welfare"] == 0


def test_run_rerun_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert main(["run", str(FIXTURES / "e1.json"), "--mechanism", "mir",
                     "--output", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_run_with_permutation_file(tmp_path):
    perm = tmp_path / "perm.json"
    perm.write_text(json.dumps(["3", "4", "1", "2"]))
    out = tmp_path / "out.json"
    assert main(["run", str(FIXTURES / "e3.json"), "--mechanism", "mir",
                 "--permutation", f"file:{perm}", "--output", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["allocation"] == {"1": "h3", "2": "h4", "3": "h1", "4": "h2"}
    assert doc["trace"]["permutation"] == ["3", "4", "1", "2"]


def test_run_with_seeded_permutation_deterministic(tmp_path):
    outs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        assert main(["run", str(FIXTURES / "e1.json"), "--mechanism", "msir",
                     "--permutation", "seed:99", "--output", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_run_bad_permutation_file_is_input_error(tmp_path):
    perm = tmp_path / "perm.json"
    perm.write_text(json.dumps(["1"]))  # not a permutation of N
    assert main(["run", str(FIXTURES / "e3.json"), "--mechanism", "mir",
                 "--permutation", f"file:{perm}"]) == 2


def test_run_missing_file_is_input_error():
    assert main(["run", "no-such-file.json", "--mechanism", "msir"]) == 2


def test_run_invalid_instance_is_input_error(tmp_path, capsys):
    src = tmp_path / "bad.json"
    src.write_text(json.dumps({
        "agents": [
            {"id": "1", "endowment": "h1", "acceptable": []},
            {"id": "2", "endowment": "h1", "acceptable": []},
        ],
        "houses": ["h1"],
    }))
    assert main(["run", str(src), "--mechanism", "msir"]) == 2
    assert "h1" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# verify


def write_allocation(tmp_path, instance_path, assignment, name="alloc.json"):
    inst = loads_instance(Path(instance_path).read_text())
    path = tmp_path / name
    path.write_text(dumps_allocation(inst, Allocation(assignment)))
    return path


def test_verify_e3_z_ir_holds_core_fails(tmp_path, capsys):
    alloc = write_allocation(
        tmp_path, FIXTURES / "e3.json",
        {"1": "h3", "2": "h4", "3": "h1", "4": "h2"},
    )
    code, out, _ = run_cli(
        "verify", str(FIXTURES / "e3.json"), str(alloc),
        "--properties", "ir,core", capsys=capsys,
    )
    assert code == 1
    assert "ir: holds" in out
    assert "core: fails" in out
    assert "1" in out and "2" in out  # the blocking pair is named


def test_verify_e1_y_ir_po_hold(tmp_path, capsys):
    alloc = write_allocation(
        tmp_path, FIXTURES / "e1.json",
        {"1": "h2", "2": "h3", "3": "h1", "4": "h5", "5": "h6"},
    )
    code, out, _ = run_cli(
        "verify", str(FIXTURES / "e1.json"), str(alloc),
        "--properties", "ir,po", capsys=capsys,
    )
    assert code == 0
    assert out == "ir: holds\npo: holds\n"


def test_verify_e1_x_sir_holds(tmp_path, capsys):
    alloc = write_allocation(
        tmp_path, FIXTURES / "e1.json",
        {"1": "h2", "2": "h3", "3": "h1", "4": "h4", "5": "h5"},
    )
    code, out, _ = run_cli(
        "verify", str(FIXTURES / "e1.json"), str(alloc),
        "--properties", "sir", capsys=capsys,
    )
    assert code == 0
    assert "sir: holds" in out


def test_verify_json_report(tmp_path, capsys):
    alloc = write_allocation(
        tmp_path, FIXTURES / "e3.json",
        {"1": "h3", "2": "h4", "3": "h1", "4": "h2"},
    )
    report_path = tmp_path / "report.json"
    code, _, _ = run_cli(
        "verify", str(FIXTURES / "e3.json"), str(alloc),
        "--properties", "core,maxw", "--json", str(report_path), capsys=capsys,
    )
    assert code == 1
    doc = json.loads(report_path.read_text())
    assert doc["core"]["holds"] is False
    assert doc["core"]["witness"]["kind"] == "blocking-coalition"
    assert sorted(doc["core"]["witness"]["coalition"]) == ["1", "2"]
    assert doc["maxw"]["holds"] is True


def test_verify_unknown_property_is_input_error(tmp_path):
    alloc = write_allocation(tmp_path, FIXTURES / "e2.json", {"1": "h1", "2": "h2"})
    assert main(["verify", str(FIXTURES / "e2.json"), str(alloc),
                 "--properties", "ir,sparkle"]) == 2


def test_verify_budget_exceeded_is_exit_4(tmp_path, monkeypatch):
    monkeypatch.setenv("HOUSEALLOC_MAX_ALLOC_AGENTS", "2")
    alloc = write_allocation(
        tmp_path, FIXTURES / "e3.json",
        {"1": None, "2": None, "3": None, "4": None},
    )
    assert main(["verify", str(FIXTURES / "e3.json"), str(alloc),
                 "--properties", "maxw-ir"]) == 4


def test_run_output_passes_verify_for_guaranteed_properties(tmp_path, capsys):
    guarantees = {"msir": "sir,ir,core,maxw-sir", "mir": "ir,po,maxw,maxw-ir"}
    for fixture in ("e1", "e2", "e3"):
        for mech, props in guarantees.items():
            out = tmp_path / f"{fixture}_{mech}.json"
            assert main(["run", str(FIXTURES / f"{fixture}.json"),
                         "--mechanism", mech, "--output", str(out)]) == 0
            code, _, _ = run_cli(
                "verify", str(FIXTURES / f"{fixture}.json"), str(out),
                "--properties", props, capsys=capsys,
            )
            assert code == 0, (fixture, mech)


# ---------------------------------------------------------------------------
# gen


def test_gen_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["gen", "--agents", "5", "--houses", "6", "--endow-prob", "0.8",
            "--accept-prob", "0.3", "--seed", "42"]
    assert main(args + ["--output", str(a)]) == 0
    assert main(args + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    inst = loads_instance(a.read_text())
    assert inst.num_agents == 5 and inst.num_houses == 6


def test_gen_empty(tmp_path):
    out = tmp_path / "empty.json"
    assert main(["gen", "--agents", "0", "--houses", "0", "--endow-prob", "0",
                 "--accept-prob", "0", "--seed", "1", "--output", str(out)]) == 0
    assert json.loads(out.read_text()) == {"agents": [], "houses": []}


def test_gen_invalid_prob_is_input_error():
    assert main(["gen", "--agents", "2", "--houses", "2", "--endow-prob", "1.5",
                 "--accept-prob", "0.5", "--seed", "1"]) == 2


# ---------------------------------------------------------------------------
# report


def test_report_small_run(tmp_path, capsys):
    code, out, _ = run_cli(
        "report", "--trials", "40", "--seed", "11",
        "--max-agents", "4", "--max-houses", "4",
        "--out-dir", str(tmp_path / "cx"), capsys=capsys,
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("trials=40 seed=11")
    # theorem columns hold exactly
    table = {line.split()[0]: line.split()[1:3] for line in lines[2:9]}
    assert table["sir"][0] == "100.0%"
    assert table["ir"] == ["100.0%", "100.0%"]
    assert table["core"][0] == "100.0%"
    assert table["po"][1] == "100.0%"
    assert table["maxw-sir"][0] == "100.0%"
    assert table["maxw-ir"][1] == "100.0%"
    assert table["maxw"][1] == "100.0%"


def test_report_single_trial(tmp_path, capsys):
    code, out, _ = run_cli(
        "report", "--trials", "1", "--seed", "3",
        "--max-agents", "3", "--max-houses", "3",
        "--out-dir", str(tmp_path / "cx"), capsys=capsys,
    )
    assert code == 0
    assert "trials=1" in out


def test_report_counterexamples_feed_verify(tmp_path, capsys):
    cx_dir = tmp_path / "cx"
    code, out, _ = run_cli(
        "report", "--trials", "120", "--seed", "0",
        "--max-agents", "5", "--max-houses", "5",
        "--out-dir", str(cx_dir), capsys=capsys,
    )
    assert code == 0
    files = sorted(p.name for p in cx_dir.glob("*_instance.json"))
    assert files, "expected at least one counterexample"
    for inst_file in cx_dir.glob("*_instance.json"):
        stem = inst_file.name.replace("_instance.json", "")
        mech, prop = stem.split("_", 1)
        alloc_file = cx_dir / f"{stem}_allocation.json"
        code, vout, _ = run_cli(
            "verify", str(inst_file), str(alloc_file),
            "--properties", prop, capsys=capsys,
        )
        assert code == 1, stem
        assert f"{prop}: fails" in vout


def test_report_rerun_identical_output(tmp_path, capsys):
    outs = []
    for sub in ("x", "y"):
        code, out, _ = run_cli(
            "report", "--trials", "25", "--seed", "5",
            "--max-agents", "4", "--max-houses", "4",
            "--out-dir", str(tmp_path / sub), capsys=capsys,
        )
        assert code == 0
        outs.append(out.replace(str(tmp_path / sub), "OUT"))
    assert outs[0] == outs[1]


def test_report_budget_violation_is_exit_4(capsys):
    code, _, err = run_cli("report", "--trials", "1", "--max-agents", "9",
                           "--max-houses", "4", capsys=capsys)
    assert code == 4


def test_report_sp_budget_check(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("HOUSEALLOC_MAX_MISREPORT_HOUSES", "3")
    code, _, _ = run_cli("report", "--trials", "1", "--max-agents", "4",
                         "--max-houses", "4", "--sp", "on",
                         "--out-dir", str(tmp_path), capsys=capsys)
    assert code == 4


def test_report_with_sp_column(tmp_path, capsys):
    code, out, _ = run_cli(
        "report", "--trials", "12", "--seed", "1",
        "--max-agents", "3", "--max-houses", "3", "--sp", "on",
        "--out-dir", str(tmp_path / "cx"), capsys=capsys,
    )
    assert code == 0
    assert any(line.startswith("sp") for line in out.splitlines())
