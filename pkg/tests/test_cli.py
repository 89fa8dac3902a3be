import os

import pytest

from tabalg import load, parse, serialize
from tabalg.cli import run


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestVerify:
    def test_pass_line_and_exit_zero(self, capsys):
        code, out, _ = invoke(capsys, "verify", "bundled:B32")
        assert code == 0
        assert out.strip() == "PASS (8 axiom classes, 32768 associativity triples)"

    def test_failing_file_exits_one(self, capsys, tmp_path):
        A = load("S3")
        path = tmp_path / "s3.alg"
        path.write_text(serialize(A))
        code, out, _ = invoke(capsys, "verify", str(path))
        assert code == 1
        assert "FAIL" in out

    def test_machine_format(self, capsys):
        code, out, _ = invoke(capsys, "--format", "machine", "verify", "bundled:C7")
        assert code == 0
        facts = dict(line.split("\t") for line in out.strip().splitlines())
        assert facts["result"] == "pass"
        assert facts["triples"] == "343"
        assert facts["check.associativity"] == "pass"

    def test_no_timestamps_in_output(self, capsys):
        code, out, _ = invoke(capsys, "verify", "bundled:B22")
        again = invoke(capsys, "verify", "bundled:B22")[1]
        assert out == again


class TestMult:
    def test_paper_example(self, capsys):
        code, out, _ = invoke(capsys, "mult", "bundled:B32", "b3", "b3bar")
        assert code == 0
        assert out.strip() == "1 + b8"

    def test_expression_arguments(self, capsys):
        code, out, _ = invoke(capsys, "inner", "bundled:B32", "b3 + x6", "b3 + 2 x6")
        assert code == 0
        assert out.strip() == "3"

    def test_unknown_name_exit_two(self, capsys):
        code, _, err = invoke(capsys, "mult", "bundled:B32", "nope", "b3")
        assert code == 2
        assert "error" in err


class TestStructureCommands:
    def test_quotient_line(self, capsys):
        code, out, _ = invoke(capsys, "quotient", "bundled:B32", "--by", "C")
        assert code == 0
        assert out.splitlines()[0] == "6 classes; group-like: cyclic(6)"

    def test_quotient_by_element_list(self, capsys):
        code, out, _ = invoke(capsys, "quotient", "bundled:B22", "--by", "b8,x10")
        assert code == 0
        assert out.splitlines()[0] == "4 classes; group-like: cyclic(4)"

    def test_subsets(self, capsys):
        code, out, _ = invoke(capsys, "subsets", "bundled:B22")
        assert code == 0
        sizes = [int(line.split()[1].rstrip(":")) for line in out.strip().splitlines()]
        assert sizes == [1, 7, 12, 22]

    def test_closure(self, capsys):
        code, out, _ = invoke(capsys, "closure", "bundled:B32", "b8")
        assert code == 0
        assert out.startswith("size 7:")

    def test_powers(self, capsys):
        code, out, _ = invoke(capsys, "powers", "bundled:B32", "b3", "--max", "3")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[1].startswith("b3^2:")
        assert set(lines[2].split(":")[1].split()) == {"r3", "s6", "t15"}


class TestIsoRestrict:
    def test_iso_yes(self, capsys, tmp_path):
        code, out, _ = invoke(capsys, "restrict", "bundled:B32", "--to", "D",
                              "-o", str(tmp_path / "d.alg"))
        assert code == 0
        code, out, _ = invoke(capsys, "iso", str(tmp_path / "d.alg"), "bundled:D17")
        assert code == 0
        assert out.splitlines()[0] == "exactly isomorphic"

    def test_iso_no_exit_one(self, capsys):
        code, out, _ = invoke(capsys, "iso", "bundled:B32", "bundled:B22")
        assert code == 1
        assert "not exactly isomorphic" in out

    def test_restrict_stdout(self, capsys):
        code, out, _ = invoke(capsys, "restrict", "bundled:B32", "--to", "C")
        assert code == 0
        assert parse(out).size == 7


class TestDeduce:
    def test_partial_file_completes(self, capsys, tmp_path):
        code, out, _ = invoke(
            capsys, "deduce", "bundled:PSL27-partial",
            "--trace", str(tmp_path / "trace.log"),
        )
        assert code == 0
        assert "completed" in out
        text = (tmp_path / "trace.log").read_text()
        assert text.strip().endswith("STATUS completed")
        assert "RULE" in text

    def test_stalled_exit_one(self, capsys, tmp_path):
        # B32's basis with only b3*b3bar known: far too little to propagate
        lines = [l for l in serialize(load("B32")).splitlines()
                 if not l.startswith("product") or l.startswith("product b3 b3bar")]
        path = tmp_path / "underseeded.alg"
        path.write_text("\n".join(lines) + "\n")
        code, out, _ = invoke(capsys, "deduce", str(path))
        assert code == 1
        assert "stalled" in out

    def test_refuted_seed_reports_contradiction(self, capsys, tmp_path):
        # on this four-element basis no value for b3*b3 can exist at all
        path = tmp_path / "refuted.alg"
        path.write_text(
            "algebra refuted\n"
            "element b3 degree 3 dual b3bar\n"
            "element b3bar degree 3 dual b3\n"
            "element b8 degree 8 dual b8\n"
            "product b3 b3bar = 1 + b8\n"
        )
        code, out, _ = invoke(capsys, "deduce", str(path))
        assert code == 1
        assert "contradiction" in out


class TestBundled:
    def test_list(self, capsys):
        code, out, _ = invoke(capsys, "bundled", "--list")
        assert code == 0
        assert "B32" in out and "PSL27-partial" in out

    def test_export_round_trip(self, capsys, tmp_path):
        target = tmp_path / "exported.alg"
        code, _, _ = invoke(capsys, "bundled", "--export", "D17", "-o", str(target))
        assert code == 0
        assert parse(target.read_text()).size == 17

    def test_data_dir_override(self, capsys, tmp_path, monkeypatch):
        custom = serialize(load("Z4")).replace("algebra Z4", "algebra Z4custom")
        (tmp_path / "MyAlg.alg").write_text(custom)
        monkeypatch.setenv("TABALG_DATA_DIR", str(tmp_path))
        code, out, _ = invoke(capsys, "verify", "bundled:MyAlg")
        assert code == 0

    def test_usage_error_exit_two(self, capsys):
        assert invoke(capsys, "powers", "bundled:B32")[0] == 2
