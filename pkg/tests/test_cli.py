import json
import os
import subprocess
import sys

import numpy as np
import pytest

from mnmland import textio
from mnmland.cli import FIGURE_PRESETS, SIMULATION_FILES, main
from mnmland.landscape import NmLandscape, generate_landscape


def run(*argv):
    return main([str(a) for a in argv])


def error_line(capsys):
    err = capsys.readouterr().err.strip().splitlines()[-1]
    return json.loads(err)


class TestGenerate:
    def test_writes_landscape(self, tmp_path):
        out = tmp_path / "l.json"
        assert run("generate", "--n", 10, "--m", 2, "--sigma", 1, "--seed", 7, "--out", out) == 0
        doc = json.loads(out.read_text())
        assert len(doc["terms"]) == 55
        assert NmLandscape.from_dict(doc) == generate_landscape(10, 2, 1.0, 7)

    def test_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run("generate", "--n", 6, "--m", 3, "--sigma", 19, "--seed", 3, "--out", a)
        run("generate", "--n", 6, "--m", 3, "--sigma", 19, "--seed", 3, "--out", b)
        assert a.read_bytes() == b.read_bytes()

    def test_stdout(self, capsys):
        assert run("generate", "--n", 2, "--m", 1) == 0
        assert json.loads(capsys.readouterr().out)["n_vars"] == 2

    def test_validation_error(self, capsys):
        assert run("generate", "--n", 10, "--m", 11) == 2
        err = error_line(capsys)
        assert err["exit_code"] == 2 and err["type"] == "ParameterError"

    def test_bad_flag_value(self, capsys):
        assert run("generate", "--n", "ten") == 2
        assert error_line(capsys)["exit_code"] == 2

    def test_resource_guard(self, capsys):
        assert run("simulate", "--n", 27, "--m1", 1, "--m2", 1) == 3
        assert error_line(capsys)["type"] == "ResourceError"

    def test_io_error(self, tmp_path, capsys):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        assert run("generate", "--n", 3, "--m", 1, "--out", blocker / "sub" / "l.json") == 4
        assert error_line(capsys)["exit_code"] == 4


class TestConfig:
    def test_json_config_and_override(self, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"n": 5, "m": 2, "sigma": 3.0, "seed": 11}))
        out = tmp_path / "l.json"
        assert run("generate", "--config", cfg, "--out", out) == 0
        assert NmLandscape.from_json(out.read_text()) == generate_landscape(5, 2, 3.0, 11)
        assert run("generate", "--config", cfg, "--seed", 12, "--out", out) == 0
        assert NmLandscape.from_json(out.read_text()).seed == 12

    def test_toml_sections(self, tmp_path):
        cfg = tmp_path / "c.toml"
        cfg.write_text('seed = 4\n[generate]\nn = 4\nm = 1\nsigma = 2.0\n[sweep]\nmodels = 3\n')
        out = tmp_path / "l.json"
        assert run("generate", "--config", cfg, "--out", out) == 0
        assert NmLandscape.from_json(out.read_text()) == generate_landscape(4, 1, 2.0, 4)

    def test_unknown_key(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"bogus": 1}))
        assert run("generate", "--config", cfg) == 2


class TestSimulate:
    def test_csv_bundle(self, tmp_path):
        out = tmp_path / "sim"
        assert run("simulate", "--n", 6, "--m1", 1, "--m2", 2, "--sigma", 1, "--seed", 2, "--out", out) == 0
        assert sorted(os.listdir(out)) == sorted(SIMULATION_FILES)
        objectives = (out / "objectives.csv").read_text().splitlines()
        assert objectives[0] == "solution_index,f1,f2" and len(objectives) == 65
        assert (out / "boltzmann_f1.csv").read_text().startswith("solution_index,p\n")
        assert (out / "marginals_f2.csv").read_text().startswith("variable,p_one\n")
        front = (out / "front_true.csv").read_text().splitlines()
        assert {int(r.split(",")[0]) for r in front[1:]} >= {0, 63}

    def test_order_one_set_equal(self, tmp_path):
        out = tmp_path / "sim"
        assert run("simulate", "--m1", 1, "--m2", 1, "--sigma", 7, "--seed", 9, "--out", out) == 0
        cmp = json.loads((out / "front_comparison.json").read_text())
        assert cmp["true_vs_factorized"]["set_equal"] is True
        assert cmp["true_vs_boltzmann"]["set_equal"] is True
        assert max(cmp["factorization_linf"]) <= 1e-10

    @pytest.mark.parametrize("figure,which", [(1, "3"), (2, "right")])
    def test_presets(self, tmp_path, figure, which):
        out = tmp_path / "fig"
        flag = "--row" if figure == 1 else "--panel"
        assert run("simulate", "--figure", figure, flag, which, "--seed", 1, "--out", out) == 0
        meta = json.loads((out / "front_comparison.json").read_text())["problem"]
        sigma, m1, m2 = FIGURE_PRESETS[(figure, which)]
        assert meta["n_vars"] == 10
        assert [o["max_order"] for o in meta["objectives"]] == [m1, m2]
        assert {o["sigma"] for o in meta["objectives"]} == {sigma}

    def test_preset_needs_row(self, tmp_path):
        assert run("simulate", "--figure", 1, "--out", tmp_path / "x") == 2

    def test_json_format_and_determinism(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            assert run("simulate", "--n", 5, "--sigma", 19, "--seed", 1, "--format", "json", "--out", out) == 0
        doc = json.loads((a / "simulation.json").read_text())
        assert len(doc["boltzmann"][0]) == 32 and set(doc["fronts"]) == {"true", "boltzmann", "factorized"}
        for name in os.listdir(a):
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_from_landscape_file(self, tmp_path):
        land = tmp_path / "l.json"
        run("generate", "--n", 5, "--m", 3, "--sigma", 2, "--seed", 3, "--out", land)
        out = tmp_path / "sim"
        assert run("simulate", "--landscape", land, "--m1", 2, "--m2", 3, "--out", out) == 0
        meta = json.loads((out / "front_comparison.json").read_text())["problem"]
        assert meta["objectives"][0]["seed"] == 3


class TestSweep:
    ARGS = ("--n", 5, "--m", 1, 2, "--sigma", 1, 9, "--models", 2, "--base-seed", 3)

    def test_files(self, tmp_path):
        out = tmp_path / "sw"
        assert run("sweep", *self.ARGS, "--out", out) == 0
        assert sorted(os.listdir(out)) == ["sweep_cells.csv", "sweep_plot.json", "sweep_records.csv"]
        records = (out / "sweep_records.csv").read_text().splitlines()
        assert len(records) == 1 + 2 * 2 * 2
        plot = json.loads((out / "sweep_plot.json").read_text())
        assert plot["sigma_grid"] == [1.0, 9.0] and plot["units"] == "nats"

    def test_order_one_zero_mi(self, tmp_path):
        out = tmp_path / "sw"
        assert run("sweep", "--models", 1, "--m", 1, "--out", out) == 0
        rows = (out / "sweep_records.csv").read_text().splitlines()
        header = rows[0].split(",")
        mi = [float(r.split(",")[header.index("mi_max")]) for r in rows[1:]]
        assert len(mi) == 10 and max(mi) <= 1e-10

    def test_worker_count_invariance(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert run("sweep", *self.ARGS, "--workers", 1, "--out", a) == 0
        assert run("sweep", *self.ARGS, "--workers", 2, "--out", b) == 0
        for name in os.listdir(a):
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_invalid_grid(self, capsys, tmp_path):
        assert run("sweep", "--n", 5, "--m", 6, "--out", tmp_path) == 2


class TestFrontAndMi:
    def test_front_from_table(self, tmp_path, capsys):
        table = tmp_path / "t.csv"
        table.write_text(textio.csv_text(["solution_index", "f1", "f2"], [(0, 1.0, 1.0), (1, 0.0, 0.0), (2, 2.0, 0.0)]))
        assert run("front", "--table", table) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines == ["solution_index,f1,f2", "2,2,0", "0,1,1"]

    @pytest.mark.parametrize("source", ["objectives", "boltzmann"])
    def test_front_sources_agree(self, tmp_path, source):
        out = tmp_path / f"{source}.csv"
        assert run("front", "--n", 8, "--m1", 1, "--m2", 2, "--sigma", 3, "--seed", 1, "--source", source, "--out", out) == 0
        members = sorted(int(r.split(",")[0]) for r in out.read_text().splitlines()[1:])
        assert 0 in members and 255 in members
        ref = tmp_path / "ref.csv"
        run("front", "--n", 8, "--m1", 1, "--m2", 2, "--sigma", 3, "--seed", 1, "--out", ref)
        assert members == sorted(int(r.split(",")[0]) for r in ref.read_text().splitlines()[1:])

    def test_front_bad_table(self, tmp_path):
        table = tmp_path / "t.csv"
        table.write_text("index,f1\n0,1\n")
        assert run("front", "--table", table) == 2

    def test_mi_generated(self, capsys):
        assert run("mi", "--n", 6, "--m", 1, "--sigma", 5, "--seed", 2) == 0
        rows = capsys.readouterr().out.splitlines()
        assert rows[0] == "i,j,mi_nats" and len(rows) == 1 + 15
        assert max(float(r.split(",")[2]) for r in rows[1:]) <= 1e-10

    def test_mi_from_distribution(self, tmp_path, capsys):
        dist = tmp_path / "d.csv"
        dist.write_text(textio.csv_text(["solution_index", "p"], [(0, 0.5), (1, 0.0), (2, 0.0), (3, 0.5)]))
        assert run("mi", "--distribution", dist) == 0
        row = capsys.readouterr().out.splitlines()[1].split(",")
        assert row[:2] == ["1", "2"] and float(row[2]) == pytest.approx(np.log(2), abs=1e-11)

    def test_mi_approximation_zero(self, capsys):
        assert run("mi", "--n", 6, "--m", 2, "--sigma", 19, "--approximation") == 0
        rows = capsys.readouterr().out.splitlines()[1:]
        assert max(float(r.split(",")[2]) for r in rows) <= 1e-12


class TestAtomicWrite:
    def test_interrupted_write_leaves_nothing(self, tmp_path, monkeypatch):
        target = tmp_path / "sweep_cells.csv"

        def boom(src, dst):
            raise KeyboardInterrupt

        monkeypatch.setattr(os, "replace", boom)
        with pytest.raises(KeyboardInterrupt):
            textio.atomic_write_text(target, "M,sigma\n1,1\n")
        assert os.listdir(tmp_path) == []

    def test_replaces_existing(self, tmp_path):
        target = tmp_path / "f.txt"
        target.write_text("old")
        textio.atomic_write_text(target, "new")
        assert target.read_text() == "new"


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "mnmland", "generate", "--n", "10", "--m", "11"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 2
    assert json.loads(proc.stderr.strip().splitlines()[-1])["exit_code"] == 2
