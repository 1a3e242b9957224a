import csv

import pytest

from dynlis.bench import CSV_HEADER
from dynlis.cli import EXIT_IO, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, main

PI_TRACE = "".join(f"append v={v}\n" for v in [3, 1, 4, 1, 5, 9, 2, 6]) + "query\n"


@pytest.fixture
def trace(tmp_path):
    def write(text, name="t.trace"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return write


def test_verify_pi_digits(trace, tmp_path):
    out = tmp_path / "report.txt"
    assert main(["verify", "--trace", trace(PI_TRACE), "--out", str(out)]) == EXIT_OK
    report = out.read_text().splitlines()
    assert "op 8 query length=4" in report
    assert "final_length 4" in report and report[-1] == "status ok"


def test_verify_empty_trace(trace, capsys):
    assert main(["verify", "--trace", trace("")]) == EXIT_OK
    assert "ops 0" in capsys.readouterr().out


def test_verify_delete_absent_key(trace, capsys):
    t = trace("insert_key k=5 v=1\nappend v=2\ndelete_key k=7\nquery\n")
    assert main(["verify", "--trace", t, "--mode", "length_only"]) == EXIT_MISMATCH
    out = capsys.readouterr()
    assert "error op 2 IndexNotFound" in out.out
    assert "status mismatch" in out.out


def test_verify_parse_error(trace, capsys):
    assert main(["verify", "--trace", trace("append v=1\nappend q=2\n")]) == EXIT_USAGE
    assert "line 2" in capsys.readouterr().err


def test_verify_missing_file(tmp_path):
    assert main(["verify", "--trace", str(tmp_path / "nope")]) == EXIT_IO


def test_usage_errors():
    assert main([]) == EXIT_USAGE
    assert main(["verify"]) == EXIT_USAGE
    assert main(["gen", "--seed", "1"]) == EXIT_USAGE


def test_gen_append_only(tmp_path):
    out = tmp_path / "g.trace"
    assert main(["gen", "--seed", "7", "--n", "100", "--mix", "append=1.0", "--out", str(out)]) == EXIT_OK
    lines = out.read_text().splitlines()
    assert len(lines) == 100 and all(l.startswith("append v=") for l in lines)


def test_gen_adversarial_increasing(tmp_path):
    out = tmp_path / "g.trace"
    assert main(["gen", "--adversarial", "increasing", "--n", "50", "--out", str(out)]) == EXIT_OK
    vals = [int(l.split("v=")[1]) for l in out.read_text().splitlines()]
    assert len(vals) == 50 and vals == sorted(set(vals))


def test_gen_bad_mix(capsys):
    assert main(["gen", "--n", "5", "--mix", "append=0.7"]) == EXIT_USAGE
    assert "BadMix" in capsys.readouterr().err


def test_gen_then_verify(tmp_path):
    t = tmp_path / "g.trace"
    assert main(["gen", "--seed", "3", "--n", "400", "--out", str(t)]) == EXIT_OK
    assert main(["verify", "--trace", str(t), "--out", str(tmp_path / "r")]) == EXIT_OK


def _rows(path):
    lines = path.read_text().splitlines()
    body = [l for l in lines if not l.startswith("#")]
    footer = [l for l in lines if l.startswith("#")]
    return list(csv.reader(body)), footer


def test_bench_csv_format(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["bench", "--seed", "2", "--n", "500", "--out", str(out)]) == EXIT_OK
    rows, footer = _rows(out)
    assert tuple(rows[0]) == CSV_HEADER
    assert all(int(r[4]) >= 0 and int(r[5]) >= 0 for r in rows[1:])
    assert any(l.startswith("# max_insert_ratio=") for l in footer)
    assert any(l.startswith("# max_append_ratio=") for l in footer)


def test_bench_deterministic_except_time(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        main(["bench", "--seed", "4", "--n", "300", "--out", str(p)])
    ra, fa = _rows(a)
    rb, fb = _rows(b)
    assert [r[:-1] for r in ra] == [r[:-1] for r in rb]
    assert fa == fb


def test_bench_decreasing_keeps_r_at_one(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["bench", "--adversarial", "decreasing", "--n", "2000", "--out", str(out)]) == EXIT_OK
    rows, _ = _rows(out)
    assert {int(r[3]) for r in rows[2:]} == {1}


def test_bench_from_trace(trace, tmp_path):
    out = tmp_path / "b.csv"
    assert main(["bench", "--trace", trace(PI_TRACE), "--out", str(out)]) == EXIT_OK
    rows, _ = _rows(out)
    assert len(rows) == 1 + 8
    assert [r[1] for r in rows[1:]] == ["append"] * 8
