from __future__ import annotations

import json
import subprocess
import sys

import pytest

from helpkit.cli import render_text, run

from conftest import fixture_path


def ok(argv):
    code, out, err = run(argv)
    assert code == 0, err
    return out


def rows_of(text: str) -> list[list[str]]:
    return [line.split() for line in text.splitlines()[2:]]


def test_validate():
    assert "5 classes" in ok(["validate", "A5"])
    assert "valid" in ok(["validate", str(fixture_path("He"))])


def test_validate_truncated(tmp_path):
    p = tmp_path / "cut.ctbl"
    p.write_text(fixture_path("A5").read_text()[:400])
    code, out, err = run(["validate", str(p)])
    assert code == 2 and "line" in err
    p.write_text("# nothing here\n")
    code, _, err = run(["validate", str(p)])
    assert code == 2 and "unexpected end of input" in err


def test_validate_orthogonality_failure(tmp_path):
    text = fixture_path("A5").read_text()
    bad = text.replace('"values": ["5", "1", "-1", "0", "0"]', '"values": ["5", "1", "1", "0", "0"]')
    assert bad != text
    p = tmp_path / "bad.ctbl"
    p.write_text(bad)
    code, _, err = run(["validate", str(p)])
    assert code == 3 and "orthogonality" in err and "(" in err and "line" in err


def test_missing_file_and_unknown_character():
    code, _, err = run(["validate", "/nonexistent/x.ctbl"])
    assert code == 3 and "no such table" in err
    code, _, err = run(["order", "He", "2", "--chars", "chi99"])
    assert code == 3 and "chi99" in err


def test_order_he_17():
    out = ok(["order", "He.ctbl", "17", "--chars", "chi7", "--brauer", "2:chi6", "--no-mu"])
    assert "surviving tuples: 30" in out
    assert "-14 <= nu[17a] <= 15" in out


def test_order_on_22_and_7():
    assert "order 22: Excluded" in ok(["order", "ON", "22", "--profile"])
    out = ok(["order", "ON", "7", "--profile", "--no-mu"])
    assert "surviving tuples: 26" in out and "-3 <= nu[7a] <= 22" in out


def test_order_lists_mu_values():
    out = ok(["order", "He", "2", "--chars", "chi2"])
    assert "(2a=1, 2b=0)  mu: chi2/0=31 chi2/1=20" in out


def test_order_rejects_k_below_two():
    code, _, err = run(["order", "A5", "1"])
    assert code == 3


def test_pq_table_rows():
    out = ok(["pq-table", "He", "51", "--sum", "2+4+5", "-l", "17"])
    assert rows_of(out) == [["51", "3", "17", "(2,4,5)_[*]", "6", "0", "17", "351", "-96", "0"]]
    out = ok(["pq-table", "ON", "341", "--sum", "1+2@3", "-l", "0,31"])
    assert rows_of(out)[1] == ["341", "11", "31", "(1,2)_[3]", "1", "0", "31", "154", "-30", "0"]
    out = ok(["pq-table", "He", "34"])  # stored rows
    assert [r[-4:] for r in rows_of(out)] == [["0", "5322", "1104", "0"], ["2", "5322", "-69", "0"], ["17", "5184", "-1104", "0"]]


def test_pq_table_degenerate_row(tmp_path):
    doc_text = fixture_path("A5").read_text()
    body = json.loads("\n".join(l for l in doc_text.splitlines() if not l.startswith("#")))
    body["partial"] = True
    body["characters"].append({"id": "chi6", "degree": 6, "conductor": 1, "values": ["6", None, "0", "0", "0"]})
    p = tmp_path / "deg.ctbl"
    p.write_text(json.dumps(body))
    out = ok(["pq-table", str(p), "15", "--chars", "chi6", "-l", "0"])
    assert rows_of(out)[0][-3:] == ["6", "0", "0"]


def test_pq_table_errors():
    code, _, err = run(["pq-table", "He", "30"])
    assert code == 3 and "two distinct primes" in err
    code, _, err = run(["pq-table", "A5", "15"])
    assert code == 3 and "no stored rows" in err


def test_alpha_table():
    out = ok(["alpha", "ON", "35", "--char", "chi2", "--power", "7", "--fix", "5a=-20", "-l", "0,7"])
    assert "(7a=1)  11522  10927" in out
    assert len(out.splitlines()) == 3 + 26


def test_spectrum_and_kimmerle():
    out = ok(["spectrum", "He", "--profile"])
    assert out.rstrip().endswith("open: {20, 24, 30, 40, 42, 56, 60, 84, 120, 168}")
    assert "verdict: Confirmed" in ok(["kimmerle", "He", "--profile"])
    assert "verdict: Confirmed" in ok(["kimmerle", "A5"])
    assert "open: {}" in ok(["spectrum", "A5", "--direct", "all"])


def test_kimmerle_on_lists_33_and_57():
    code, out, _ = run(["kimmerle", "ON", "--profile", "--strict"])
    assert code == 1
    last = out.rstrip().splitlines()[-1]
    assert last.startswith("verdict: Open {") and "33" in last and "57" in last


def test_zassenhaus():
    out = ok(["zassenhaus", "A5", "5"])
    assert "order 5: RationallyTrivial" in out and "rationally conjugate" in out


def test_strict_and_unbounded_exit_codes():
    assert run(["order", "He", "2", "--chars", "chi2", "--strict"])[0] == 1
    assert run(["order", "He", "2", "--chars", "chi2"])[0] == 0
    code, out, _ = run(["order", "ON", "35", "--chars", "chi2", "--no-mu"])
    assert code == 4 and "insufficient constraints" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["validate", "A5"],
        ["order", "He", "3", "--profile"],
        ["zassenhaus", "ON", "33", "--profile"],
        ["pq-table", "ON", "93"],
        ["alpha", "ON", "35", "--char", "chi2", "--power", "7", "--fix", "5a=-20", "-l", "0,7"],
        ["spectrum", "He", "--profile"],
        ["kimmerle", "ON", "--profile"],
    ],
)
def test_json_renders_to_identical_text(argv):
    code_t, text, _ = run(argv)
    code_j, js, _ = run(argv + ["--format", "json"])
    assert code_t == code_j
    report = json.loads(js)
    assert render_text(report) == text
    assert json.loads(json.dumps(report)) == report


def test_console_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "helpkit.cli", "zassenhaus", "A5", "3"],
        capture_output=True, text=True,
    )
    assert out.returncode == 0 and "RationallyTrivial" in out.stdout


def test_argument_errors_use_the_validation_exit_code():
    for argv in (["alpha", "ON", "35", "--char", "chi2"], ["no-such-command"]):
        with pytest.raises(SystemExit) as info:
            run(argv)
        assert info.value.code == 3
