"""Command line behavior: outputs, defaults, and error exits."""

import pytest

from beaconsense import parse_trace, serialize_trace
from beaconsense.cli import main, plotdata_tsv
from beaconsense.touch import TOUCH_CSV_HEADER
from beaconsense.attribution import ATTRIBUTION_CSV_HEADER

GAME_SCENARIO = """\
kind = two_person_game
shadowing_sigma_db = 0
tx_power_dbm = 0, 0
duration_ms = 4000
touch = 500 1500 0
touch = 2500 3500 1
"""

RECEDE_SCENARIO = """\
kind = recede
shadowing_sigma_db = 0
duration_ms = 3000
"""


@pytest.fixture
def game_trace_path(tmp_path):
    scenario = tmp_path / "game.scenario"
    scenario.write_text(GAME_SCENARIO)
    out = tmp_path / "game.trace"
    assert main(["simulate", str(scenario), "--out", str(out)]) == 0
    return out


class TestSimulate:
    def test_writes_parseable_trace(self, tmp_path, capsys):
        scenario = tmp_path / "r.scenario"
        scenario.write_text(RECEDE_SCENARIO)
        out = tmp_path / "r.trace"
        assert main(["simulate", str(scenario), "--out", str(out)]) == 0
        trace = parse_trace(out.read_text())
        assert len(trace.advs) == 30
        assert "30 advs" in capsys.readouterr().out

    def test_seed_override_changes_output(self, tmp_path):
        scenario = tmp_path / "r.scenario"
        scenario.write_text("kind = recede\nduration_ms = 3000\n")
        a, b, c = (tmp_path / n for n in ("a", "b", "c"))
        main(["simulate", str(scenario), "--out", str(a)])
        main(["simulate", str(scenario), "--out", str(b), "--seed", "123"])
        main(["simulate", str(scenario), "--out", str(c), "--seed", "123"])
        assert a.read_text() != b.read_text()
        assert b.read_text() == c.read_text()

    def test_missing_scenario_file(self, tmp_path, capsys):
        assert main(["simulate", str(tmp_path / "nope.scenario")]) == 1
        assert "error:" in capsys.readouterr().err

    def test_bad_scenario_reports_line(self, tmp_path, capsys):
        scenario = tmp_path / "bad.scenario"
        scenario.write_text("kind = recede\nwarp = 9\n")
        assert main(["simulate", str(scenario)]) == 1
        err = capsys.readouterr().err
        assert "line 2" in err and "warp" in err


class TestEvaluate:
    def test_touch_csv(self, game_trace_path, tmp_path, capsys):
        out = tmp_path / "touch.csv"
        code = main(
            ["evaluate", "touch", str(game_trace_path),
             "--thresholds=-40,-41,-42", "--out", str(out)]
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == TOUCH_CSV_HEADER
        assert len(lines) == 4
        assert lines[1].startswith("-40,")
        assert "thr dBm" in capsys.readouterr().out

    def test_attribution_csv(self, game_trace_path, tmp_path):
        out = tmp_path / "attr.csv"
        code = main(
            ["evaluate", "attribution", str(game_trace_path),
             "--windows", "0,300,500", "--out", str(out)]
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == ATTRIBUTION_CSV_HEADER
        assert [l.split(",")[0] for l in lines[1:]] == ["0", "300", "500"]

    def test_proximity_timeline(self, game_trace_path, tmp_path, capsys):
        out = tmp_path / "zones.txt"
        code = main(
            ["evaluate", "proximity", str(game_trace_path), "--out", str(out)]
        )
        assert code == 0
        text = out.read_text()
        assert text.startswith("zone 0 0-Wrist")
        assert text == "".join(
            l + "\n" for l in capsys.readouterr().out.splitlines() if l.startswith("zone")
        )

    def test_default_out_paths(self, game_trace_path, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        assert main(["evaluate", "touch", str(game_trace_path)]) == 0
        assert (tmp_path / "touch_report.csv").exists()

    def test_attribution_without_truth_fails_cleanly(self, tmp_path, capsys):
        trace_path = tmp_path / "no_truth.trace"
        trace_path.write_text("adv 0 0-Wrist -50\nframe 0 0000\n")
        assert main(["evaluate", "attribution", str(trace_path)]) == 1
        assert "error:" in capsys.readouterr().err
        assert not (tmp_path / "attribution_report.csv").exists()

    def test_malformed_trace_reports_line(self, tmp_path, capsys):
        trace_path = tmp_path / "bad.trace"
        trace_path.write_text("adv 0 0-Wrist -50\nadv oops\n")
        assert main(["evaluate", "touch", str(trace_path)]) == 1
        assert "line 2" in capsys.readouterr().err

    def test_usage_error_exits_2(self, game_trace_path):
        with pytest.raises(SystemExit) as exc:
            main(["evaluate", "sideways", str(game_trace_path)])
        assert exc.value.code == 2


class TestPlotdata:
    def test_column_count_with_truth(self, game_trace_path, tmp_path):
        out = tmp_path / "plot.tsv"
        assert main(["plotdata", str(game_trace_path), "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        header = lines[0].split("\t")
        # t_ms + 2 beacons + touch + truth_person
        assert header == ["t_ms", "rss_0-Wrist", "rss_1-Wrist", "touch", "truth_person"]
        assert all(len(l.split("\t")) == len(header) for l in lines[1:])

    def test_column_count_without_truth(self, tmp_path):
        trace = parse_trace("adv 0 0-Wrist -50\nframe 0 0000\nframe 100 1000\n")
        text = plotdata_tsv(trace)
        header = text.splitlines()[0].split("\t")
        assert header == ["t_ms", "rss_0-Wrist", "touch"]

    def test_nan_before_first_adv_and_touch_hold(self):
        trace = parse_trace(
            "adv 100 0-Wrist -50\nframe 0 0000\nframe 50 1000\nframe 150 0000\n"
        )
        rows = [l.split("\t") for l in plotdata_tsv(trace).splitlines()[1:]]
        by_t = {int(r[0]): r for r in rows}
        assert by_t[0][1] == "nan"
        assert by_t[50][1] == "nan"
        assert by_t[100][1] == "-50"
        assert by_t[0][2] == "0"
        assert by_t[50][2] == "1"
        assert by_t[100][2] == "1"  # held from frame at 50
        assert by_t[150][2] == "0"

    def test_rows_at_union_of_event_times(self, game_trace_path):
        trace = parse_trace(game_trace_path.read_text())
        text = plotdata_tsv(trace)
        times = [int(l.split("\t")[0]) for l in text.splitlines()[1:]]
        expected = sorted({e.t_ms for e in trace.advs} | {f.t_ms for f in trace.frames})
        assert times == expected

    def test_truth_person_column_values(self):
        trace = parse_trace(
            "adv 0 0-Wrist -50\nframe 100 0001\nframe 600 0000\ntruth 50 200 2\n"
        )
        rows = {int(l.split("\t")[0]): l.split("\t") for l in plotdata_tsv(trace).splitlines()[1:]}
        assert rows[100][3] == "2"
        assert rows[0][3] == "-1"
        assert rows[600][3] == "-1"


class TestRoundtripThroughCli:
    def test_simulated_trace_survives_reserialization(self, game_trace_path):
        trace = parse_trace(game_trace_path.read_text())
        assert serialize_trace(trace) == game_trace_path.read_text()
