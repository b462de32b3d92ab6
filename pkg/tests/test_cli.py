"""End-to-end CLI tests driving kuni.cli.main with real files."""

import json

import pytest

from kuni.cli import EXIT_OK, EXIT_REFUTED, EXIT_SAMPLED, EXIT_USAGE, main
from kuni.states import format_state, ghz, parse_state
from kuni.field import gf


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_codes_mds_roundtrip(tmp_path, capsys):
    path = tmp_path / "code.txt"
    code, out, _ = run(capsys, "codes", "mds", "--n", "5", "--k", "2",
                       "--q", "5", "-o", str(path))
    assert code == EXIT_OK and path.exists()
    code, out, _ = run(capsys, "codes", "check", str(path))
    assert code == EXIT_OK and "MDS" in out
    code, out, _ = run(capsys, "codes", "distance", str(path))
    assert code == EXIT_OK and "d = 4" in out


def test_codes_check_json_manifest(tmp_path, capsys):
    path = tmp_path / "code.txt"
    run(capsys, "codes", "mds", "--n", "4", "--k", "2", "--q", "3",
        "-o", str(path))
    code, out, _ = run(capsys, "codes", "check", str(path), "--json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["mds"]["is_mds"] is True
    assert doc["mds"]["checks"] == 6  # C(4, 2)
    manifest = doc["manifest"]
    assert manifest["tool"] == "kuni"
    # input digest is a sha256 hex string
    digest = manifest["inputs"][str(path)]
    assert len(digest) == 64 and int(digest, 16) >= 0


def test_codes_check_refutes_non_mds(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("CODE 4 2\n2 4 2 1\n1 0 1 0\n0 1 1 1\n")
    code, out, _ = run(capsys, "codes", "check", str(path))
    assert code == EXIT_REFUTED and "not MDS" in out


def test_construct_and_verify_ame52(tmp_path, capsys):
    state_path = tmp_path / "ame52.state"
    code, out, _ = run(capsys, "construct", "clq", "--n", "3", "--k", "2",
                       "--q", "2", "-o", str(state_path))
    assert code == EXIT_OK and "support 8" in out
    code, out, _ = run(capsys, "verify", str(state_path))
    assert code == EXIT_OK and "k = 2 [certified]" in out


def test_verify_json_and_sampled_exit_code(tmp_path, capsys):
    state_path = tmp_path / "ame52.state"
    run(capsys, "construct", "clq", "--n", "3", "--k", "2", "--q", "2",
        "-o", str(state_path))
    code, out, _ = run(capsys, "verify", str(state_path), "--json",
                       "--sample", "5", "--seed", "3")
    assert code == EXIT_SAMPLED
    doc = json.loads(out)
    assert doc["uniformity"]["certifying"] is False
    assert doc["uniformity"]["max_verified_k"] == 2
    assert doc["manifest"]["seed"] == 3


def test_verify_refutes_ghz(tmp_path, capsys):
    state_path = tmp_path / "ghz.state"
    state_path.write_text(format_state(ghz(4, gf(3))))
    code, out, _ = run(capsys, "verify", str(state_path))
    assert code == EXIT_REFUTED and "first failure" in out


def test_construct_builtin_state(tmp_path, capsys):
    out_path = tmp_path / "ghz.state"
    code, _, _ = run(capsys, "construct", "builtin", "--name", "ghz",
                     "--n", "4", "--q", "3", "-o", str(out_path))
    assert code == EXIT_OK
    assert parse_state(out_path.read_text()).equals(ghz(4, gf(3)))


def test_construct_builtin_matrices(tmp_path, capsys):
    g_path, q_path = tmp_path / "g.txt", tmp_path / "q.txt"
    code, out, _ = run(capsys, "construct", "builtin", "--name",
                       "ame_19_17_matrices", "--emit-g", str(g_path),
                       "--emit-q", str(q_path))
    assert code == EXIT_OK and g_path.exists() and q_path.exists()


def test_decompose_certify_pipeline(tmp_path, capsys):
    g_path, q_path = tmp_path / "g.txt", tmp_path / "q.txt"
    code, out, _ = run(capsys, "decompose", "--q", "5",
                       "--emit-g", str(g_path), "--emit-q", str(q_path))
    assert code == EXIT_OK and "AME(7,5)" in out
    code, out, _ = run(capsys, "certify", "--g", str(g_path),
                       "--q-matrix", str(q_path))
    assert code == EXIT_OK and "PASSED" in out
    # tamper with the label columns: rank drops to 1, certificate fails
    q_path.write_text("3 2 5 1\n1 0\n2 0\n0 0\n")
    code, out, _ = run(capsys, "certify", "--g", str(g_path),
                       "--q-matrix", str(q_path), "--json")
    assert code == EXIT_REFUTED
    doc = json.loads(out)
    assert doc["certificate"]["certified"] is False
    assert doc["certificate"]["q_rank"] == 1


def test_decompose_search_mode(capsys):
    code, out, _ = run(capsys, "decompose", "--q", "5", "--search",
                       "--seed", "11", "--budget", "100000")
    assert code == EXIT_OK and "AME(7,5)" in out


def test_construct_clq_rep_from_files(tmp_path, capsys):
    g_path, q_path = tmp_path / "g.txt", tmp_path / "q.txt"
    run(capsys, "decompose", "--q", "5", "--emit-g", str(g_path),
        "--emit-q", str(q_path))
    state_path = tmp_path / "ame75.state"
    code, out, _ = run(capsys, "construct", "clq-rep", "--g", str(g_path),
                       "--q-matrix", str(q_path), "-o", str(state_path))
    assert code == EXIT_OK and "support 625" in out


def test_table1_columns(capsys):
    code, out, _ = run(capsys, "table1", "--n-max", "7")
    assert code == EXIT_OK
    lines = [ln for ln in out.splitlines() if ln.strip()]
    assert len(lines) == 3
    for line, q_clq, q_mds in zip(lines, (2, 3, 4), (4, 4, 7)):
        assert f"Cl+Q q>={q_clq}" in line and f"MDS q>={q_mds}" in line


def test_table1_verified_small_rows(capsys):
    code, out, _ = run(capsys, "table1", "--n-max", "7", "--verify")
    assert code == EXIT_OK
    assert out.count("[exhaustive: k=2]") == 3


def test_table1_large_row_is_sampled_not_certified(capsys):
    code, out, _ = run(capsys, "table1", "--k", "3", "--n-min", "11",
                       "--n-max", "11", "--verify", "--seed", "0")
    assert code == EXIT_SAMPLED
    assert "[sampled: k=3]" in out


def test_table1_json_reproducible(capsys):
    args = ("table1", "--n-max", "6", "--json")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second
    doc = json.loads(first)
    assert doc["table1"][0]["clq_min_q"] == 2


def test_usage_errors(tmp_path, capsys):
    assert run(capsys, "frobnicate")[0] == EXIT_USAGE
    assert run(capsys, "verify", str(tmp_path / "missing.state"))[0] == EXIT_USAGE
    # construct clq without a code spec
    assert run(capsys, "construct", "clq")[0] == EXIT_USAGE
    bad = tmp_path / "bad.state"
    bad.write_text("garbage\n")
    assert run(capsys, "verify", str(bad))[0] == EXIT_USAGE


def test_help_exits_cleanly(capsys):
    assert main(["--help"]) == 0
    capsys.readouterr()
