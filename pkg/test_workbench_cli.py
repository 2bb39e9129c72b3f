"""
Test the workbench command line end to end on small files
"""

import io
import json
import os
import tempfile
from contextlib import redirect_stderr, redirect_stdout

import pytest

from config import EXIT_INVALID, EXIT_OK, EXIT_USAGE, REPORT_SCHEMA_VERSION
from polymorphism_workbench import main
from text_formats import parse_cover, parse_nd, parse_program, parse_tsvnd

XOR_COVER = "n=2 flavor=ppol table=0110\nOR 0011 0101 0111\nAND 0011 0101 0001\nNOT 0001 1110\nAND 0111 1110 0110\n"
XOR_COVER_WITHOUT_AND = "n=2 flavor=pol table=0110\nOR 0011 0101 0111\nNOT 0001 1110\nAND 0111 1110 0110\n"


def run(*argv):
    """(exit code, stdout, stderr) of one workbench invocation."""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


def write(directory, name, text):
    path = os.path.join(directory, name)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)
    return path


def test_classify():
    code, out, _ = run("classify", "--bits", "0001")
    assert code == EXIT_OK
    assert "and" in out
    code, out, _ = run("classify", "--bits", "0001", "--json")
    data = json.loads(out)
    assert data["schema_version"] == REPORT_SCHEMA_VERSION
    assert data["command"] == "classify"
    assert data["detected"] == ["and"]
    assert data["trivial"] == "general"


def test_synth_and_verify():
    with tempfile.TemporaryDirectory() as tmp:
        code, out, _ = run("synth", "--bits", "00000001")
        assert code == EXIT_OK
        program = parse_program(out)
        path = write(tmp, "and3.prog", out)
        assert run("verify-circuit", "--bits", "00000001", "--circuit", path)[0] == EXIT_OK
        code, out, _ = run("verify-circuit", "--bits", "00010110", "--circuit", path, "--json")
        assert code == EXIT_INVALID
        assert json.loads(out)["counterexample"] == "011"
        assert program.arity == 3
    assert run("synth", "--bits", "00010111")[0] == EXIT_INVALID


def test_synth_without_closure_is_invalid():
    code, out, _ = run("synth", "--bits", "1110")
    assert code == EXIT_INVALID
    assert out.startswith("❌")
    code, out, _ = run("synth", "--bits", "1110", "--op", "and")
    assert code == EXIT_INVALID
    assert "rows" in out


def test_synth_patched_and_multi_output():
    code, out, _ = run("synth", "--bits", "1110", "--base-bits", "1111", "--json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["size"] <= data["bound"]
    with tempfile.TemporaryDirectory() as tmp:
        path = write(tmp, "two.tbl", "n=2\n0001\n0011\n")
        code, out, _ = run("synth", "--table", path, "--op", "and")
        assert code == EXIT_OK
        assert len(parse_program(out).outputs) == 2


def test_optimal():
    code, out, _ = run("optimal", "--bits", "0110")
    assert code == EXIT_OK
    assert parse_program(out).size == 4
    assert run("optimal", "--bits", "0110", "--max-size", "3")[0] == EXIT_INVALID


def test_witnesses():
    code, out, _ = run("witnesses", "--bits", "1001", "--op", "maj", "--json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert len(data["witnesses"]["maj"]) == 4
    assert data["fixtures"] == {"w1": True, "w2": True, "w3": True, "w4": True}


def test_cover_commands():
    with tempfile.TemporaryDirectory() as tmp:
        cover = write(tmp, "xor.cover", XOR_COVER)
        assert run("cover-check", "--cover", cover)[0] == EXIT_OK

        broken = write(tmp, "broken.cover", XOR_COVER_WITHOUT_AND)
        code, out, _ = run("cover-check", "--cover", broken, "--json")
        assert code == EXIT_INVALID
        assert json.loads(out)["counterexample"].startswith("witness mode=total")

        code, out, _ = run("circuit-from-cover", "--cover", cover)
        assert code == EXIT_OK
        program_path = write(tmp, "xor.prog", out)
        assert parse_program(out).size == 4

        code, out, _ = run("cover-from-circuit", "--bits", "0110", "--circuit", program_path)
        assert code == EXIT_OK
        assert parse_cover(out).size == 4


def test_tsvnd_pipeline():
    with tempfile.TemporaryDirectory() as tmp:
        cover = write(tmp, "xor.cover", XOR_COVER)
        code, out, _ = run("tsvnd-build", "--cover", cover)
        assert code == EXIT_OK
        assert parse_tsvnd(out).guess_count == 4
        circuit = write(tmp, "xor.tsvnd", out)

        code, out, _ = run("tsvnd-check", "--circuit", circuit, "--bits", "0110", "--json")
        assert code == EXIT_OK
        assert json.loads(out)["report"]["computes_f"]

        code, out, _ = run("tsvnd-to-cover", "--circuit", circuit, "--bits", "0110")
        assert code == EXIT_OK
        assert parse_cover(out).size == 4

        nd_path, cond_path = os.path.join(tmp, "xor.nd"), os.path.join(tmp, "xor.cond")
        assert run("nd-split", "--circuit", circuit, "--out-nd", nd_path, "--out-cond", cond_path)[0] == EXIT_OK
        with open(nd_path, encoding="utf-8") as handle:
            assert parse_nd(handle.read()).decided_function().bits == "0110"

        code, out, _ = run("nd-merge", "--nd", nd_path, "--cond", cond_path, "--bits", "0110")
        assert code == EXIT_OK
        merged = write(tmp, "merged.tsvnd", out)
        assert run("tsvnd-check", "--circuit", merged, "--bits", "0110")[0] == EXIT_OK


def test_invalid_cover_gives_a_conflicting_tsvnd():
    with tempfile.TemporaryDirectory() as tmp:
        broken = write(tmp, "broken.cover", XOR_COVER_WITHOUT_AND)
        code, out, _ = run("tsvnd-build", "--cover", broken)
        assert code == EXIT_INVALID
        assert "witness mode=total" in out

        circuit = write(tmp, "conflict.tsvnd", "n=2 m=4\nOR x1 x2 = y1\nNOT y2 = y3\nAND y1 y3 = x3\n")
        code, out, _ = run("tsvnd-check", "--circuit", circuit, "--json")
        assert code == EXIT_INVALID
        report = json.loads(out)["report"]
        assert not report["single_valued"]
        assert "11" in report["conflicting"]


def test_sweep():
    code, out, _ = run("sweep", "--n", "2", "--checks", "s4,s5", "--json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["schema_version"] == REPORT_SCHEMA_VERSION
    assert data["all_passed"]
    assert run("sweep", "--n", "4", "--checks", "s4")[0] == EXIT_USAGE
    assert run("sweep", "--n", "3", "--checks", "s4")[0] == EXIT_USAGE


def test_usage_and_parse_errors():
    code, _, err = run("classify")
    assert code == EXIT_USAGE
    assert "[ERROR]" in err
    assert run("classify", "--bits", "012")[0] == EXIT_USAGE
    assert run("cover-check", "--bits", "0110")[0] == EXIT_USAGE
    assert run("cover-check", "--cover", "/nonexistent/xor.cover")[0] == EXIT_USAGE
    with tempfile.TemporaryDirectory() as tmp:
        bad = write(tmp, "bad.prog", "n=2\ng3 = AND g1 g5\n")
        code, _, err = run("verify-circuit", "--bits", "0001", "--circuit", bad)
        assert code == EXIT_USAGE
        assert "line 2" in err
    with pytest.raises(SystemExit) as excinfo:
        run("no-such-command")
    assert excinfo.value.code == EXIT_USAGE


if __name__ == "__main__":
    print("=" * 70)
    print("TEST: Workbench Command Line")
    print("=" * 70)
    for name, test in list(globals().items()):
        if name.startswith("test_") and callable(test):
            test()
            print(f"✅ PASS {name}")
