import json

import numpy as np
import pytest

from cnext.cli import (RunConfig, UsageError, main, parse_curve, parse_field, parse_fraction, parse_grid,
                       parse_range, read_csv_artifact, run)
from cnext.extension_core import condition_number
from test_extension_core import TABLE1


def invoke(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestParsing:
    def test_ranges(self):
        assert parse_range("2..9", True) == list(range(2, 10))
        assert parse_range("2..16:2", False) == [2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0]
        assert parse_range("3", True) == [3]
        assert parse_range("1,4,5", True) == [1, 4, 5]
        assert parse_range("0.5..1.5:0.5", False) == [0.5, 1.0, 1.5]
        for bad in ("9..2", "x", "1..3:0"):
            with pytest.raises(UsageError):
                parse_range(bad, True)

    def test_fraction(self):
        assert parse_fraction("1/40") == 0.025
        assert parse_fraction("0.5") == 0.5

    def test_curves(self, tmp_path):
        assert parse_curve("circle").name == "circle"
        assert parse_curve("ellipse:3,1").max_curvature() == pytest.approx(3.0)
        assert parse_curve("star:1,0.2,5").modes == 6
        th = 2 * np.pi * np.arange(16) / 16
        path = tmp_path / "b.txt"
        np.savetxt(path, np.c_[np.cos(th), np.sin(th)])
        assert parse_curve("file:%s" % path).max_curvature() == pytest.approx(1.0, rel=1e-12)
        np.savetxt(path, np.c_[np.cos(th), np.sin(th)][:12])
        with pytest.raises(UsageError, match="power of two"):
            parse_curve("file:%s" % path)
        with pytest.raises(UsageError):
            parse_curve("hexagon")

    def test_fields(self):
        f = parse_field("poly:1@1,0;2@0,1")
        assert f(np.array([3.0]), np.array([5.0]))[0] == 13.0
        assert parse_field("sinexp")(0.0, 1.0) == 0.0
        with pytest.raises(UsageError):
            parse_field("poly:1@x")
        with pytest.raises(UsageError):
            parse_field("tan")

    def test_grid(self):
        X, Y = parse_grid("4,3,0,1,-1,1")
        assert X.shape == (3, 4)
        with pytest.raises(UsageError):
            parse_grid("4,3,0,1")

    def test_config_fails_fast(self):
        with pytest.raises(UsageError, match=r"a\*M <= L"):
            RunConfig("extend1d", n="9", a="3").validate()
        with pytest.raises(UsageError):
            RunConfig("table1", n="-1..2").validate()
        with pytest.raises(UsageError):
            RunConfig("shrink-table", shrink_delta=None).validate()
        with pytest.raises(UsageError):
            RunConfig("spectrum", shrink_delta=2.0).validate()
        with pytest.raises(KeyError):
            RunConfig("chunks", fn_id="f7").validate()


class TestTable1:
    def test_defaults(self):
        art = run(RunConfig("table1"))
        cols, rows = art.series["table1"]
        assert len(rows) == 64
        for a, n, cond, shown in rows:
            assert shown == TABLE1[int(a)][n - 2]
            assert cond == condition_number(n, a)

    def test_single_entries(self, capsys):
        code, out, _ = invoke(capsys, "table1", "--n", "2..2", "--a", "2..2", "--no-header-timestamp")
        assert code == 0
        assert out.splitlines()[-1] == "2,2,7,7.0"
        code, out, _ = invoke(capsys, "table1", "--n", "0..0", "--a", "2", "--format", "json")
        assert json.loads(out)["series"]["table1"]["data"] == [[2.0, 0, 1.0, "1.0"]]

    def test_io_failure(self, capsys, tmp_path):
        code, _, err = invoke(capsys, "table1", "--out", str(tmp_path / "missing" / "t.csv"))
        assert code != 0 and "cannot write" in err


class TestArtifacts:
    ARGS = ("chunks", "--fn", "f2", "--no-header-timestamp")

    def test_determinism(self, capsys):
        _, first, _ = invoke(capsys, *self.ARGS)
        _, second, _ = invoke(capsys, *self.ARGS)
        assert first == second

    def test_timestamp_line_only_difference(self, capsys):
        _, stamped, _ = invoke(capsys, "chunks", "--fn", "f2")
        _, plain, _ = invoke(capsys, *self.ARGS)
        lines = stamped.splitlines()
        assert lines[0].startswith("# generated=")
        assert "\n".join(lines[1:]) + "\n" == plain

    def test_json_round_trip(self, capsys, tmp_path):
        path = tmp_path / "s.json"
        assert main(["spectrum", "--fn", "f1", "--samples", "512", "--format", "json", "--out", str(path)]) == 0
        doc = json.loads(path.read_text())
        art = run(RunConfig("spectrum", fn_id="f1", samples=512))
        cols, rows = art.series["spectrum"]
        assert doc["series"]["spectrum"]["data"] == rows
        assert doc["meta"]["decay_bin_1e-8"] == art.meta["decay_bin_1e-8"]

    def test_csv_round_trip(self, capsys):
        _, out, _ = invoke(capsys, "spectrum", "--fn", "f3", "--samples", "256", "--no-header-timestamp")
        parsed = read_csv_artifact(out)
        _, rows = run(RunConfig("spectrum", fn_id="f3", samples=256)).series["spectrum"]
        np.testing.assert_array_equal(parsed["series"]["spectrum"], np.array(rows, dtype=float))
        assert parsed["meta"]["fn"] == "f3"


class TestCommands:
    def test_extend1d_f1(self, capsys):
        code, out, _ = invoke(capsys, "extend1d", "--fn", "f1", "--format", "json", "--samples", "101")
        doc = json.loads(out)
        assert code == 0
        assert doc["meta"]["kappa"] == pytest.approx(1.0, abs=0.02)
        assert doc["meta"]["chunks"] == 3
        assert len(doc["series"]["G"]["data"]) == 101
        assert len(doc["series"]["spectrum"]["data"]) == 2001

    def test_extend1d_reach_violation(self, capsys):
        code, _, err = invoke(capsys, "extend1d", "--fn", "f1", "--a", "4")
        assert code == 2
        assert "a*M <= L" in err

    def test_extend1d_shrink(self, capsys):
        code, out, _ = invoke(capsys, "extend1d", "--fn", "f5", "--a", "20", "--shrink-delta", "1/40",
                              "--format", "json", "--samples", "11")
        doc = json.loads(out)
        assert doc["meta"]["kappa"] == pytest.approx(7.365, rel=0.15)
        assert abs(doc["meta"]["chunks"] - 6) <= 2

    def test_shrink_table(self, capsys):
        code, out, _ = invoke(capsys, "shrink-table", "--shrink-delta", "1/2", "--n", "3", "--format", "json")
        doc = json.loads(out)
        assert code == 0 and doc["meta"]["max_probe_error"] <= 1e-12

    def test_extend2d_constant_circle(self, capsys):
        code, out, _ = invoke(capsys, "extend2d", "--curve", "circle:1", "--fn", "one", "--n", "3",
                              "--grid", "64,64,-1.5,1.5,-1.5,1.5", "--format", "json")
        doc = json.loads(out)
        field = np.array(doc["series"]["field"]["data"])
        r = np.hypot(field[:, 0], field[:, 1])
        r0, r1 = doc["meta"]["window"]
        np.testing.assert_allclose(field[r <= 1 + r0, 2], 1.0, rtol=1e-13)
        assert np.all(field[r > 1 + r1, 2] == 0.0)
        mism = np.array(doc["series"]["mismatch"]["data"])
        assert np.max(mism[:, 1]) <= 1e-10

    def test_extend2d_linear_ellipse(self, capsys):
        code, out, _ = invoke(capsys, "extend2d", "--curve", "ellipse:2,1", "--fn", "poly:1@1,0;2@0,1",
                              "--n", "3", "--grid", "40,40,-2.4,2.4,-1.4,1.4", "--reach", "0.12", "--format", "json")
        doc = json.loads(out)
        field = np.array(doc["series"]["field"]["data"])
        x, y, v = field.T
        d = parse_curve("ellipse:2,1")
        from cnext.extend2d import project
        _, dist = project(d, x, y)
        tube = (dist > 0) & (dist <= 0.5 * 0.12)
        assert tube.sum() > 20
        np.testing.assert_allclose(v[tube], x[tube] + 2 * y[tube], atol=1e-9)

    def test_extend2d_star(self, capsys):
        code, out, _ = invoke(capsys, "extend2d", "--curve", "star:1,0.2,5", "--fn", "sinexp", "--n", "4",
                              "--grid", "8,8,-1,1,-1,1", "--format", "json")
        mism = np.array(json.loads(out)["series"]["mismatch"]["data"])
        assert np.all(mism[:, 1] <= mism[:, 2])

    def test_extend2d_reach_violation(self, capsys):
        code, _, err = invoke(capsys, "extend2d", "--curve", "star", "--reach", "0.5")
        assert code == 2 and "suggested reach" in err
