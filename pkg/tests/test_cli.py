"""End-to-end command line behavior, including exit codes."""

import json

import pytest

from cantorproj.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestConstruct:
    def test_json_output(self, capsys):
        code, out, _ = run(capsys, "construct", "--n-max", "3", "--i-max", "2")
        assert code == 0
        doc = json.loads(out)
        assert len(doc["dense_pairs"]) == 3
        assert doc["scheme_params"]["dense_tail_cycle"] == "20"

    def test_text_output(self, capsys):
        code, out, _ = run(capsys, "construct", "--n-max", "2", "--format", "text")
        assert code == 0
        assert out.splitlines()[0].startswith("n=0 ")

    def test_out_file(self, tmp_path, capsys):
        target = tmp_path / "fam.json"
        code, out, _ = run(capsys, "construct", "--n-max", "2", "--out", str(target))
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["dense_pairs"]

    def test_deterministic_bytes(self, tmp_path, capsys):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(capsys, "construct", "--n-max", "6", "--out", str(a))
        run(capsys, "construct", "--n-max", "6", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()


class TestImage:
    def test_basic(self, capsys):
        code, out, _ = run(capsys, "image", "0 x 00", "--depth", "2")
        assert code == 0
        doc = json.loads(out)
        assert doc["image"]["pieces"][0]["hull"] == ["0"]
        assert doc["trace"]["words"] == ["00", "02"]
        assert len(doc["decomposition"]["isolated"]) == 2

    def test_text_format(self, capsys):
        code, out, _ = run(capsys, "image", "0 x 00", "--format", "text")
        assert code == 0
        assert "isolated" in out

    def test_bad_literal(self, capsys):
        code, _, err = run(capsys, "image", "nonsense")
        assert code == 2
        assert "error:" in err


class TestFalsifyVerify:
    def test_roundtrip_through_file(self, tmp_path, capsys):
        cert_file = tmp_path / "w.json"
        code, _, _ = run(
            capsys, "falsify", "2 x 0", "--samples", "4", "--out", str(cert_file)
        )
        assert code == 0
        code, out, _ = run(capsys, "verify", str(cert_file))
        assert code == 0
        assert json.loads(out)["ok"] is True

    def test_verify_only(self, capsys):
        code, out, _ = run(capsys, "falsify", "0 x 0", "--samples", "3", "--verify-only")
        assert code == 0
        assert json.loads(out)["ok"] is True

    def test_tampered_certificate_fails(self, tmp_path, capsys):
        cert_file = tmp_path / "w.json"
        run(capsys, "falsify", "2 x 0", "--samples", "4", "--out", str(cert_file))
        doc = json.loads(cert_file.read_text())
        doc["payload"]["n_coarse"], doc["payload"]["n_fine"] = (
            doc["payload"]["n_fine"],
            doc["payload"]["n_coarse"],
        )
        cert_file.write_text(json.dumps(doc))
        code, out, _ = run(capsys, "verify", str(cert_file))
        assert code == 1
        assert json.loads(out)["clause"] == "n_fine_gt_n_coarse"

    def test_budget_exit_code(self, capsys):
        code, _, err = run(capsys, "falsify", "0 x 0", "--budget", "1")
        assert code == 3
        assert "budget" in err

    def test_rejects_rect_union(self, capsys):
        code, _, err = run(capsys, "falsify", "0 x 0; 2 x 2")
        assert code == 2

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "verify", "/no/such/file.json")
        assert code == 2

    def test_garbage_json(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code, _, _ = run(capsys, "verify", str(bad))
        assert code == 2


class TestCheck:
    def test_all_pass(self, capsys):
        code, out, _ = run(capsys, "check", "--format", "text")
        assert code == 0
        assert "all suites passed" in out

    def test_fault_injection_fails(self, capsys):
        code, out, _ = run(
            capsys, "check", "--inject-fault", "approximant-digit", "--format", "text"
        )
        assert code == 1
        assert "family-approximant-convergence: FAIL" in out


class TestUsage:
    def test_no_subcommand(self, capsys):
        assert run(capsys, )[0] == 2

    def test_unknown_flag(self, capsys):
        assert run(capsys, "construct", "--bogus")[0] == 2

    def test_env_default(self, capsys, monkeypatch):
        monkeypatch.setenv("CANTORPROJ_DEPTH", "1")
        code, out, _ = run(capsys, "image", "ε x ε")
        assert code == 0
        assert json.loads(out)["trace"]["depth"] == 1

    def test_flag_beats_env(self, capsys, monkeypatch):
        monkeypatch.setenv("CANTORPROJ_DEPTH", "1")
        code, out, _ = run(capsys, "image", "ε x ε", "--depth", "2")
        assert json.loads(out)["trace"]["depth"] == 2

    def test_bad_env_value(self, capsys, monkeypatch):
        monkeypatch.setenv("CANTORPROJ_DEPTH", "three")
        code, _, err = run(capsys, "image", "ε x ε")
        assert code == 2
        assert "CANTORPROJ_DEPTH" in err
