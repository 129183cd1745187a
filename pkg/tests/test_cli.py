import hashlib
import io
import json

import pytest

from chowsmooth.charts import CORPUS_DIR, format_case, bundled_case
from chowsmooth.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, JOBS_ENV, run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), stdout=out)
    return code, out.getvalue()


A1 = str(CORPUS_DIR / "A.1.case")


def test_verify_case_passes():
    code, text = call("verify-case", A1)
    assert code == EXIT_OK
    assert "PASS A.1" in text


def test_structured_manifest_hashes_the_input():
    code, text = call("verify-case", A1, "--format", "structured", "--seed", "5")
    doc = json.loads(text)
    m = doc["manifest"]
    assert m["seed"] == 5 and m["subcommand"] == "verify-case" and m["format"] == "structured"
    want = hashlib.sha256((CORPUS_DIR / "A.1.case").read_bytes()).hexdigest()
    assert m["corpus"] == [{"path": A1, "sha256": want}]
    assert doc["reports"][0]["corank"] == 4


def test_ablation_fails_with_exit_1(capsys):
    code, text = call("verify-case", A1, "--drop-relation", "0")
    assert code == EXIT_FAIL
    assert "CorankMismatch" in capsys.readouterr().err


def test_corrupted_file_names_constant_nonvanishing(tmp_path, capsys):
    text = format_case(bundled_case("A.1")).replace(
        "1:cr(C,A;D,B|E) == 2:cr(C,A;D,B|E)", "1:cr(C,A;D,B|E) == 2:cr(C,E;D,B|A)", 1
    )
    path = tmp_path / "corrupted.case"
    path.write_text(text)
    code, _ = call("verify-case", str(path))
    assert code == EXIT_FAIL
    assert "ConstantNonvanishing" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ("verify-case",),
        ("frobnicate",),
        ("verify-case", "/nonexistent.case"),
        ("homology", "--trials", "0"),
        ("verify-case", A1, "--drop-relation", "17"),
        ("verify-all", "--corpus", "z9"),
    ],
)
def test_usage_errors_exit_2(argv):
    assert call(*argv)[0] == EXIT_USAGE


def test_parse_error_exit_2(tmp_path):
    bad = tmp_path / "bad.case"
    bad.write_text("case X\nchart 1\npoint A = (1 : 0\n")
    assert call("verify-case", str(bad))[0] == EXIT_USAGE


def test_facts_subcommand():
    code, text = call("facts", str(CORPUS_DIR / "F.1p.case"))
    assert code == EXIT_OK
    assert "5/5 facts pass" in text


def test_reports_are_byte_identical_and_worker_order_free(monkeypatch):
    first = call("verify-all", "--corpus", "y5", "--format", "structured")
    second = call("verify-all", "--corpus", "y5", "--format", "structured")
    assert first == second
    monkeypatch.setenv(JOBS_ENV, "3")
    pooled = call("verify-all", "--corpus", "y5", "--format", "structured")
    a, b = json.loads(first[1]), json.loads(pooled[1])
    assert b["manifest"]["jobs"] == 3
    assert a["reports"] == b["reports"]
    assert [r["case"] for r in b["reports"]] == sorted(r["case"] for r in b["reports"])


def test_bad_jobs_env(monkeypatch):
    monkeypatch.setenv(JOBS_ENV, "many")
    assert call("verify-case", A1)[0] == EXIT_USAGE


def test_homology_and_identities_small():
    assert call("homology", "--trials", "5")[0] == EXIT_OK
    code, text = call("identities", "--trials", "20", "--seed", "3")
    assert code == EXIT_OK and "ceva-menelaus" in text


def test_oracle_single_file():
    code, text = call("oracle", A1, "--trials", "10")
    assert code == EXIT_OK
    assert "published formulas validated: 8/8" in text
