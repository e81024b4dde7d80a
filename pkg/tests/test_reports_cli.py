import json
import subprocess
import sys

import pytest

from tautring import cli
from tautring.linalg import Disagreement
from tautring.poly import GenusContext
from tautring.relations import read_triplets
from tautring.reports import (
    CodimRecord,
    DimensionReport,
    ExpectedDims,
    RankDisagreement,
    count_table,
    dims_report,
    mg_report,
)

P1, P2 = 2147483647, 2147483629


def _run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_codim_record_invariants():
    CodimRecord(2, 4, 10, 3, 2, 2)
    with pytest.raises(ValueError):
        CodimRecord(2, 4, 10, 3, 2, 1)
    with pytest.raises(ValueError):
        CodimRecord(2, 4, 10, 1, 2, 2)


def test_report_round_trips():
    rep, _ = dims_report(GenusContext(5), range(0, 7), [P1, P2])
    text = rep.to_json()
    again = DimensionReport.from_json(text)
    assert again.to_json() == text
    assert list(json.loads(text)) == ["space", "genus", "primes", "order", "early_stop", "wall_time", "codims", "checks"]
    from_csv = DimensionReport.from_csv(rep.to_csv())
    assert from_csv.dims == rep.dims
    assert [r.rank for r in from_csv.codims] == [r.rank for r in rep.codims]
    assert from_csv.primes == rep.primes
    assert from_csv.to_csv() == rep.to_csv()


def test_dims_g4():
    rep, _ = dims_report(GenusContext(4), range(0, 6), [P1, P2])
    assert rep.dims == [1, 2, 2, 1, 0, 0]
    assert rep.space == "Mg1"
    assert all(r.rank <= r.rows_absorbed for r in rep.codims)


def test_expected_dims(tmp_path):
    p = tmp_path / "e.json"
    p.write_text(json.dumps({"genus": 4, "dims": [1, 2, 2, 1, 0, 0]}))
    e = ExpectedDims.load(p)
    assert e.get(3) == 1 and e.get(9) is None
    rep, _ = dims_report(GenusContext(4), range(0, 6), [P1, P2], expected=e)
    assert rep.early_stop
    assert rep.dims == [1, 2, 2, 1, 0, 0]
    assert all(rep.checks.values())
    with pytest.raises(ValueError):
        ExpectedDims(4, [1, -1])
    p.write_text("[1, 2]")
    with pytest.raises(ValueError):
        ExpectedDims.load(p)


def test_expected_mismatch_is_reported_not_fatal(tmp_path, capsys):
    p = tmp_path / "e.json"
    p.write_text(json.dumps({"genus": 4, "dims": [1, 2, 3, 1]}))
    code, out, _ = _run(capsys, "dims", "--genus", "4", "--expected", str(p), "--no-early-stop")
    assert code == 0
    rep = DimensionReport.from_json(out)
    assert rep.checks["expected dim^2 = 3"] is False
    assert rep.dims[:4] == [1, 2, 2, 1]


def test_mg_report_g5():
    rep, _ = mg_report(GenusContext(5), range(0, 5), [P1, P2])
    assert rep.space == "Mg"
    assert rep.dims == [1, 1, 1, 1, 0]
    assert rep.checks["kappa_1^(g-1) in codim g-1 relations"]


def test_count_table():
    rows = count_table(GenusContext(2), 1)
    assert rows == [(0, 1, 0), (1, 2, 1)]  # x[3,1]^2 is the one source
    assert [r[2] for r in count_table(GenusContext(8), 2)] == [0, 0, 0]


# -- CLI ----------------------------------------------------------------------

def test_cli_dims_g4(capsys):
    code, out, _ = _run(capsys, "dims", "--genus", "4")
    assert code == 0
    assert DimensionReport.from_json(out).dims == [1, 2, 2, 1, 0, 0]


def test_cli_dims_g6_codim3(capsys):
    code, out, _ = _run(capsys, "dims", "--genus", "6", "--codim-min", "3", "--codim-max", "3")
    assert code == 0
    assert DimensionReport.from_json(out).record(3).dimension == 4


def test_cli_dims_g8_codim3_csv(capsys, tmp_path):
    dest = tmp_path / "r.csv"
    code, _, _ = _run(capsys, "dims", "--genus", "8", "--codim-min", "3", "--codim-max", "3",
                      "--format", "csv", "--out", str(dest))
    assert code == 0
    rep = DimensionReport.from_csv(dest.read_text())
    assert rep.dims == [6]


def test_cli_json_csv_same_numbers(capsys):
    _, js, _ = _run(capsys, "dims", "--genus", "5", "--order", "canonical")
    _, cs, _ = _run(capsys, "dims", "--genus", "5", "--order", "canonical", "--format", "csv")
    a, b = DimensionReport.from_json(js), DimensionReport.from_csv(cs)
    assert [(r.codim, r.generators, r.sources, r.rows_absorbed, r.rank) for r in a.codims] == \
        [(r.codim, r.generators, r.sources, r.rows_absorbed, r.rank) for r in b.codims]


def test_cli_count(capsys):
    code, out, _ = _run(capsys, "count", "--genus", "24", "--codim-max", "13", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["Mon"][-2:] == [272, 373]
    assert data["mon"][-3:] == [325, 1709, 7763]
    code, out, _ = _run(capsys, "count", "--genus", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines[1].split() == ["0", "1", "0"]
    assert lines[2].split() == ["1", "2", "1"]


def test_cli_relmat(capsys, tmp_path):
    dest = tmp_path / "m.txt"
    assert _run(capsys, "relmat", "--genus", "5", "--codim", "3", "--out", str(dest))[0] == 0
    head = dest.read_text().splitlines()[0].split()
    assert head[1:] == ["7", str(P1), "5", "3"]
    tm = read_triplets(dest)
    assert all(0 <= v < P1 for _, _, v in tm.entries)
    assert _run(capsys, "relmat", "--genus", "5", "--codim", "3", "--out", str(dest), "--exact")[0] == 0
    assert dest.read_text().split()[2] == "0"
    assert _run(capsys, "relmat", "--genus", "8", "--codim", "2", "--out", str(dest))[0] == 0
    assert dest.read_text().splitlines()[0].split()[:2] == ["0", "4"]


def test_cli_pushforward(capsys):
    code, out, _ = _run(capsys, "pushforward", "--genus", "4")
    assert code == 0
    rep = DimensionReport.from_json(out)
    assert rep.space == "Mg"
    assert rep.dims[:3] == [1, 1, 1]
    assert rep.dims[3:] == [0, 0]


def test_cli_verify(capsys):
    code, out, _ = _run(capsys, "verify", "morita", "--genus", "7")
    assert code == 0 and "FAIL" not in out
    code, out, _ = _run(capsys, "verify", "tables")
    assert code == 0 and out.strip().endswith("checks passed")
    code, out, _ = _run(capsys, "verify", "sl2", "--genus", "3", "--trials", "12")
    assert code == 0
    code, out, _ = _run(capsys, "verify", "gorenstein", "--genus", "5")
    assert code == 0 and "FAIL" not in out


def test_cli_verify_failure_exit(capsys, monkeypatch):
    from tautring.verify import CheckResult
    monkeypatch.setattr(cli, "verify_tables", lambda: [CheckResult("forced", False)])
    code, out, _ = _run(capsys, "verify", "tables")
    assert code == cli.EXIT_CHECK
    assert "FAIL  forced" in out


@pytest.mark.parametrize("argv", [
    ["dims"],
    ["dims", "--genus", "1"],
    ["dims", "--genus", "4", "--order", "sideways"],
    ["dims", "--genus", "4", "--threads", "0"],
    ["dims", "--genus", "4", "--codim-min", "3", "--codim-max", "1"],
    ["dims", "--genus", "4", "--prime", "15"],
    ["dims", "--genus", "4", "--expected", "/nonexistent/file.json"],
    ["frobnicate"],
])
def test_cli_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        sys.exit(cli.main(argv))
    assert exc.value.code == 1


def test_cli_expected_wrong_genus(tmp_path, capsys):
    p = tmp_path / "e.json"
    p.write_text(json.dumps({"genus": 5, "dims": [1]}))
    assert _run(capsys, "dims", "--genus", "4", "--expected", str(p))[0] == 1


def test_cli_internal_error(capsys, monkeypatch):
    def boom(*a, **k):
        raise RuntimeError("kaput")
    monkeypatch.setattr(cli, "dims_report", boom)
    code, _, err = _run(capsys, "dims", "--genus", "4")
    assert code == 2
    assert "kaput" in err


def test_cli_disagreement(capsys, monkeypatch):
    def disagree(*a, **k):
        raise RankDisagreement(Disagreement({P1: 1, P2: 2}), 3, "Mg1")
    monkeypatch.setattr(cli, "dims_report", disagree)
    code, _, err = _run(capsys, "dims", "--genus", "4")
    assert code == 3
    assert "codim 3" in err


def test_threads_env_fallback(capsys, monkeypatch):
    seen = {}
    real = cli._context

    def spy(args):
        ctx = real(args)
        seen["threads"] = ctx.threads
        return ctx

    monkeypatch.setenv("TAUT_THREADS", "2")
    monkeypatch.setattr(cli, "_context", spy)
    assert _run(capsys, "count", "--genus", "3")[0] == 0
    assert seen["threads"] == 2
    assert _run(capsys, "count", "--genus", "3", "--threads", "3")[0] == 0
    assert seen["threads"] == 3


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "tautring", "count", "--genus", "3", "--format", "csv"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.splitlines()[0] == "codim,Mon,mon"
