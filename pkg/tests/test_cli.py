"""Command-line behavior: golden outputs, exit codes, JSON contracts."""

from __future__ import annotations

import contextlib
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from taulike.cli import main
from taulike.poset import poset_from_json_dict, poset_to_json_dict

GOLDEN = Path(__file__).parent / "golden"


def run_cli(*argv: str, expect: int = 0):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(io.StringIO()):
        try:
            code = main(list(argv))
        except SystemExit as exc:
            code = exc.code if exc.code is not None else 0
    assert code == expect, f"exit {code}, output: {buf.getvalue()!r}"
    text = buf.getvalue()
    return json.loads(text) if text.strip() else None


def golden(name: str):
    return json.loads((GOLDEN / name).read_text())


# -- pinned golden outputs ---------------------------------------------------


def test_golden_linearize_omega():
    got = run_cli("linearize", "--kind", "omega", "--family", "omega", "--blocks", "4")
    assert got == golden("linearize_omega.json")
    assert got["order"] == [0, 1, 2, 3]


def test_golden_fuf_gadget_and_decode(tmp_path):
    gadget = run_cli("gadget", "fuf", "--sets", "1;2", "--kind", "omega")
    assert gadget == golden("gadget_fuf.json")
    path = tmp_path / "fuf.json"
    path.write_text(json.dumps(gadget))
    decoded = run_cli("decode", "fuf", "--input", str(path))
    assert decoded == golden("decode_fuf.json")
    assert decoded["bound"] >= 3


def test_golden_verify_cycle(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"elements":[0,1],"relation":[[0,1],[1,0]]}')
    got = run_cli("verify", "--input", str(path), expect=1)
    assert got == golden("verify_cycle.json")
    assert got["error"]["code"] == "CycleError"


def test_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "taulike.cli", "linearize", "--kind", "omega", "--family", "omega", "--blocks", "4"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == golden("linearize_omega.json")


# -- schema and round-trip contracts ----------------------------------------------


def test_every_result_carries_schema(tmp_path):
    results = [
        run_cli("linearize", "--kind", "zeta", "--family", "zeta", "--blocks", "3"),
        run_cli("embed", "--kind", "omega", "--family", "omega", "--blocks", "3"),
        run_cli("gadget", "stage", "--f", "perm:1,0,2", "--elements", "3"),
        run_cli("gadget", "range", "--f", "identity", "--elements", "6"),
        run_cli("gadget", "embed", "--f", "identity", "--elements", "6"),
        run_cli("decode", "false-stages", "--f", "perm:1,0,2", "--horizon", "30"),
        run_cli("decode", "range", "--f", "perm:1,0,2", "--elements", "0", "--horizon", "64"),
        run_cli("verify", "--family", "omega", "--kind", "omega"),
        run_cli("oracle", "--family", "omega", "--elements", "40"),
    ]
    for doc in results:
        assert isinstance(doc["schema"], str) and doc["schema"].startswith("taulike.")


def test_emitted_poset_json_reloads_identically():
    gadget = run_cli("gadget", "range", "--f", "perm:1,0,2", "--elements", "8")
    doc = gadget["prefix"]
    assert poset_to_json_dict(poset_from_json_dict(doc)) == doc


def test_out_flag_mirrors_stdout(tmp_path):
    path = tmp_path / "result.json"
    got = run_cli(
        "linearize", "--kind", "omega", "--family", "omega", "--blocks", "2", "--out", str(path)
    )
    assert json.loads(path.read_text()) == got


# -- command behavior ---------------------------------------------------------------


def test_linearize_split_pinned():
    got = run_cli(
        "linearize", "--kind", "omega-omega-star", "--family", "omega-omega-star", "--elements", "8"
    )
    assert got["order"] == [0, 2, 4, 6, 7, 5, 3, 1]
    assert got["blocks"] is None
    assert ["0", "FIN_PRED"] == [str(got["sides"][0][0]), got["sides"][0][1]]


def test_linearize_default_budget_is_eight_blocks():
    got = run_cli("linearize", "--kind", "omega", "--family", "omega")
    assert len(got["blocks"]) == 8


def test_linearize_from_poset_file(tmp_path):
    path = tmp_path / "p.json"
    path.write_text('{"elements":[0,1,2],"relation":[[2,0]]}')
    got = run_cli("linearize", "--kind", "omega", "--input", str(path))
    order = got["order"]
    assert set(order) == {0, 1, 2}
    assert order.index(2) < order.index(0)


def test_embed_zeta_signed_coords():
    got = run_cli("embed", "--kind", "zeta", "--family", "zeta", "--blocks", "5")
    pairs = {x: c for x, c in got["map"]}
    from taulike.streams import zigzag_decode

    assert pairs == {x: zigzag_decode(x) for x in pairs}


def test_gadget_stage_payload():
    got = run_cli("gadget", "stage", "--f", "perm:1,0,2", "--elements", "3")
    assert got["values"] == [1, 0, 2]
    assert got["false_stages"] == [0]
    assert got["ascending"] == [0, 2, 1]


def test_decode_false_stages_end_to_end():
    got = run_cli("decode", "false-stages", "--f", "swap:2", "--horizon", "60")
    assert got["stages"] == got["ground_truth"] == [0, 2]
    assert got["requested"] == 50


def test_decode_range_end_to_end():
    hit = run_cli("decode", "range", "--f", "perm:1,0,2", "--elements", "0", "--horizon", "64")
    assert hit["member"] is True and hit["rank"] >= 2
    miss = run_cli(
        "decode", "range", "--f", "perm:1,0,2;gap:4", "--elements", "3", "--horizon", "128"
    )
    assert miss["member"] is False


def test_verify_all_kinds_on_omega_stream():
    got = run_cli("verify", "--family", "omega")
    by_kind = {r["kind"]: r["ok"] for r in got["reports"]}
    assert by_kind["omega"] is True
    assert by_kind["omega-star"] is False  # no successors oracle, honestly reported
    assert got["ok"] is False


def test_verify_single_kind_ok():
    got = run_cli("verify", "--family", "omega", "--kind", "omega")
    assert got["ok"] is True and len(got["reports"]) == 1


def test_verify_finite_file_all_kinds(tmp_path):
    path = tmp_path / "p.json"
    path.write_text('{"elements":[0,1,2],"relation":[[0,1]]}')
    got = run_cli("verify", "--input", str(path))
    assert got["ok"] is True
    assert all(r["scope"] == "finite" for r in got["reports"])


def test_oracle_command_on_gadgets():
    got = run_cli("oracle", "--family", "range-gadget", "--f", "identity", "--elements", "60")
    assert got["ok"] is True
    got = run_cli("oracle", "--family", "fuf", "--sets", "2;1")
    assert got["ok"] is True and got["prefix_size"] == 5


def test_fuf_family_variant_flag():
    got = run_cli("linearize", "--kind", "omega-star", "--family", "fuf", "--sets", "1;2", "--kind", "omega-star")
    assert got["order"] == [4, 3, 2, 1, 0]


# -- failure modes ---------------------------------------------------------------------


def test_usage_errors_exit_two():
    run_cli(expect=2)
    run_cli("linearize", "--family", "omega", expect=2)  # --kind required
    run_cli("linearize", "--kind", "sideways", "--family", "omega", expect=2)
    run_cli("linearize", "--kind", "omega", expect=2)  # no source
    run_cli("linearize", "--kind", "omega", "--family", "nowhere", expect=2)
    run_cli("gadget", "fuf", expect=2)  # --sets required
    run_cli("gadget", "fuf", "--sets", "1;x", expect=2)
    run_cli("decode", "false-stages", expect=2)  # --f required
    run_cli("linearize", "--kind", "omega", "--family", "omega", "--jobs", "0", expect=2)


def test_input_and_family_conflict(tmp_path):
    path = tmp_path / "p.json"
    path.write_text('{"elements":[0],"relation":[]}')
    run_cli("linearize", "--kind", "omega", "--input", str(path), "--family", "omega", expect=2)


def test_domain_errors_exit_one(tmp_path):
    got = run_cli(
        "linearize", "--kind", "omega", "--family", "omega", "--blocks", "2", "--elements", "2",
        expect=1,
    )
    assert got["error"]["code"] == "FormatError"
    # zeta stream offers no predecessors oracle
    got = run_cli("linearize", "--kind", "omega", "--family", "zeta", expect=1)
    assert got["error"]["code"] == "OracleMissing"
    got = run_cli("verify", "--input", str(tmp_path / "missing.json"), expect=1)
    assert got["error"]["code"] == "FileNotFound"
    bad = tmp_path / "garbled.json"
    bad.write_text("{not json")
    got = run_cli("verify", "--input", str(bad), expect=1)
    assert got["error"]["code"] == "FormatError"


def test_decode_fuf_rejects_non_gadget_file(tmp_path):
    path = tmp_path / "p.json"
    path.write_text('{"elements":[0],"relation":[]}')
    got = run_cli("decode", "fuf", "--input", str(path), expect=1)
    assert got["error"]["code"] == "FormatError"


def test_version_flag():
    with contextlib.redirect_stdout(io.StringIO()) as buf:
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
    assert exc.value.code == 0
    assert buf.getvalue().startswith("taulike ")
