import json

import pytest

from grassecant import cli, tables
from grassecant.golden import default_golden_path, load_golden, parse_golden
from grassecant.scan import ScanRecord
from grassecant.terracini import DegeneratePointError


def run(argv, capsys):
    code = cli.main(argv)
    return code, capsys.readouterr().out


def test_scan_markdown(capsys):
    code, out = run(["scan", "--n-min", "3", "--n-max", "7", "--backend", "exact",
                     "--seed", "7", "--format", "markdown", "--jobs", "1"], capsys)
    assert code == 0
    assert "| 69 | 5 | 3 | 7 | 33 | 49 (δ=1) | 63 (δ=4) | 69 |" in out


def test_scan_lines_paper_style(capsys):
    code, out = run(["scan", "--n-min", "5", "--n-max", "5", "--k-only", "1",
                     "--paper-style", "--jobs", "1"], capsys)
    assert code == 0
    assert "| 14 | 2 | 1 | 5 | 13* | 14 |" in out
    assert out.count("\n") == 3


def test_scan_smallest_n(capsys):
    code, out = run(["scan", "--n-min", "3", "--n-max", "3", "--format", "csv", "--jobs", "1"],
                    capsys)
    recs = tables.from_csv(out)
    assert code == 0
    assert [(r.k, r.n, r.s, r.computed_dim) for r in recs] == [(1, 3, 2, 5)]


def test_scan_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["scan", "--n-min", "2", "--n-max", "5"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["scan", "--prime", "1000"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["scan", "--backend", "symbolic"])
    assert exc.value.code == 2


def test_backend_failure_exit_code(monkeypatch, capsys):
    def fail(*a, **kw):
        raise DegeneratePointError("no full-rank points")

    monkeypatch.setattr(cli, "classify_cell_evidence", fail)
    assert cli.main(["cell", "-k", "2", "-n", "6", "-s", "2"]) == 3


@pytest.mark.parametrize(
    "k,n,s,dim,defect,status",
    [
        (2, 8, 4, 73, 2, "oracle_confirmed_defective"),
        (4, 10, 15, 461, 0, "certified_nondefective"),
        (1, 3, 1, 4, 0, "certified_nondefective"),
    ],
)
def test_cell(k, n, s, dim, defect, status, capsys):
    code, out = run(["cell", "-k", str(k), "-n", str(n), "-s", str(s)], capsys)
    fields = dict(line.split(": ", 1) for line in out.strip().splitlines())
    assert code == 0
    assert int(fields["computed_dim"]) == dim
    assert int(fields["defect"]) == defect
    assert fields["status"] == status
    assert fields["per_trial_ranks"]


def test_cell_json_and_dump(tmp_path, capsys):
    dump = tmp_path / "m.txt"
    code, out = run(["cell", "-k", "2", "-n", "6", "-s", "3", "--format", "json",
                     "--dump-matrix", str(dump)], capsys)
    assert code == 0
    assert json.loads(out)[0]["computed_dim"] == 33
    assert len(dump.read_text().splitlines()) == 63


def test_verify_small(capsys):
    code, out = run(["verify", "--n-max", "7", "--backend", "exact"], capsys)
    assert code == 0
    assert "0 mismatches" in out


def test_verify_tampered(tmp_path, capsys):
    text = default_golden_path().read_text()
    bad = tmp_path / "golden.txt"
    bad.write_text(text.replace("69 5 3 7 : 33 49* 63* 69", "69 5 3 7 : 33 49* 64* 69")
                       .replace("34 3 2 6 : 25 33* 34", "34 3 2 6 : 25 33 34"))
    code = cli.main(["verify", "--n-max", "7", "--golden", str(bad)])
    captured = capsys.readouterr()
    assert code == 1
    assert "G(3,7)^4: expected 64, got 63" in captured.out
    assert "G(2,6)^3: defect marker" in captured.out
    assert "checksum mismatch" in captured.err


def test_golden_asset():
    golden = load_golden()
    assert golden.checksum_ok
    assert len(golden.rows) == 41
    assert golden.row(5, 14).dims[-1] == 5004 and len(golden.row(5, 14).dims) == 90
    stars = {(k, n, s) for k, n, s, _, star in golden.cells() if star}
    assert {(2, 6, 3), (3, 7, 3), (3, 7, 4), (2, 8, 4)} <= stars
    assert all(k == 1 or (k, n, s) in {(2, 6, 3), (3, 7, 3), (3, 7, 4), (2, 8, 4)}
               for k, n, s in stars)


def test_parse_golden_detects_edit():
    text = default_golden_path().read_text()
    assert not parse_golden(text.replace("9 2 1 4 : 9", "9 2 1 4 : 8")).checksum_ok


def test_veronese_command(capsys):
    code, out = run(["veronese", "--k-max", "4", "--n-max", "2", "--format", "csv"], capsys)
    recs = tables.from_csv(out)
    assert code == 0
    assert {(r.k, r.n, r.s) for r in recs if r.defect} == {(2, 2, 2), (4, 2, 5)}


def test_csv_json_roundtrip(capsys):
    code, out = run(["scan", "--n-min", "6", "--n-max", "8", "--format", "csv", "--jobs", "1"],
                    capsys)
    recs = tables.from_csv(out)
    assert recs and all(isinstance(r, ScanRecord) for r in recs)
    assert tables.to_csv(recs) == out
    assert tables.from_json(tables.to_json(recs)) == recs
    assert out.splitlines()[0] == ("n,k,s,N,S,expected_dim,computed_dim,defect,status,"
                                   "backend,prime,seed,trials")


def test_output_files_are_deterministic(tmp_path):
    for fmt in ("csv", "json", "markdown"):
        paths = [tmp_path / f"{fmt}{i}" for i in range(2)]
        for p in paths:
            assert cli.main(["scan", "--n-min", "5", "--n-max", "8", "--seed", "3",
                             "--format", fmt, "--out", str(p), "--jobs", "1"]) == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()


def test_cache_env_var(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("GRASSECANT_CACHE_DIR", str(tmp_path))
    assert cli.main(["scan", "--n-min", "5", "--n-max", "6", "--jobs", "1"]) == 0
    lines = (tmp_path / "scan-cache.txt").read_text().splitlines()
    assert lines and lines[0].startswith("n=5 k=1 s=2 ")


def test_markdown_empty():
    assert tables.to_markdown([]).splitlines() == ["| N | S | k | n | G^2 |", "|---|---|---|---|---|"]
