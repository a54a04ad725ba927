import csv
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from hodgerank import build_clique_complex, gen_special
from hodgerank.bench import (BenchRow, cg_actual_iterations, export_matrices, make_graph,
                             read_bench_csv, run_bench, run_spectral, write_bench_csv)
from hodgerank.cli import EXIT_INPUT, EXIT_NUMERIC, EXIT_OK, main
from hodgerank.complex import laplacian_0, write_edge_list
from hodgerank.sparse import read_matrix_market


@pytest.fixture
def triangle_file(tmp_path):
    path = tmp_path / "tri.txt"
    path.write_text("1 0 1\n0 2 -2\n2 1 1\n")
    return path


def run_json(capsys, argv):
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


class TestRank:
    def test_consistent_triangle(self, capsys, triangle_file):
        code, out = run_json(capsys, ["rank", str(triangle_file)])
        assert code == EXIT_OK
        np.testing.assert_allclose(out["alpha"], [1.0, 0.0, -1.0], atol=1e-7)
        assert out["ranking"] == [0, 1, 2]
        assert out["consistent"] is True

    @pytest.mark.parametrize("method", ["CG-NE", "MINRES-KKT", "LSQR"])
    def test_methods(self, capsys, triangle_file, method):
        code, out = run_json(capsys, ["rank", str(triangle_file), "--method", method])
        assert code == EXIT_OK and out["ranking"] == [0, 1, 2]

    def test_output_file(self, tmp_path, triangle_file):
        out = tmp_path / "r.json"
        assert main(["rank", str(triangle_file), "-o", str(out)]) == EXIT_OK
        assert json.loads(out.read_text())["ranking"] == [0, 1, 2]


class TestExitCodes:
    def test_missing_file(self, tmp_path):
        assert main(["rank", str(tmp_path / "nope.txt")]) == EXIT_INPUT

    def test_empty_file(self, tmp_path):
        p = tmp_path / "e.txt"
        p.write_text("")
        assert main(["rank", str(p)]) == EXIT_INPUT

    def test_malformed(self, tmp_path):
        p = tmp_path / "m.txt"
        p.write_text("0 1 x\n")
        assert main(["decompose", str(p)]) == EXIT_INPUT

    def test_bad_method(self, triangle_file):
        assert main(["rank", str(triangle_file), "--method", "SOR"]) == EXIT_INPUT

    def test_not_converged(self, tmp_path):
        p = tmp_path / "g.txt"
        c = build_clique_complex(gen_special("path", 40))
        write_edge_list(p, c.as_graph(), np.sin(np.arange(39.0)))
        cfg = tmp_path / "c.cfg"
        cfg.write_text("tol = 1e-300\n")
        assert main(["--config", str(cfg), "rank", str(p)]) == EXIT_NUMERIC

    def test_bad_trials(self, tmp_path):
        assert main(["bench", "--trials", "0", "-o", str(tmp_path / "b.csv")]) == EXIT_INPUT

    def test_module_entry_point(self, triangle_file):
        proc = subprocess.run([sys.executable, "-m", "hodgerank", "rank", str(triangle_file)],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["ranking"] == [0, 1, 2]


class TestDecomposeAndBetti:
    def test_decompose_cyclic(self, capsys, tmp_path):
        p = tmp_path / "cyc.txt"
        p.write_text("1 0 1\n0 2 1\n2 1 1\n")
        code, out = run_json(capsys, ["decompose", str(p)])
        assert code == EXIT_OK
        assert out["norms"]["grad"] < 1e-7
        assert out["norms"]["curl"] == pytest.approx(math.sqrt(3), rel=1e-7)

    def test_betti_c4(self, capsys, tmp_path):
        p = tmp_path / "c4.txt"
        write_edge_list(p, gen_special("cycle", 4))
        code, out = run_json(capsys, ["betti", str(p), "--stacked"])
        assert code == EXIT_OK
        assert out["betti"] == [1, 1, 0] and out["betti1_stacked"] == 1
        assert out["euler_characteristic"] == 0


class TestPrecedence:
    def bench_seed(self, tmp_path, argv, env=None, monkeypatch=None):
        out = tmp_path / "b.csv"
        assert main(argv + ["-o", str(out)]) == EXIT_OK
        return read_bench_csv(out)

    def test_flag_beats_config_beats_env(self, tmp_path, monkeypatch):
        common = ["bench", "--family", "er", "--n", "20", "--p", "0.3", "--methods", "CG-NE",
                  "--trials", "1"]
        cfg = tmp_path / "c.cfg"
        cfg.write_text("seed = 5\n")
        monkeypatch.setenv("HODGERANK_SEED", "9")
        from_flag = self.bench_seed(tmp_path, ["--config", str(cfg)] + common + ["--seed", "1"])
        from_cfg = self.bench_seed(tmp_path, ["--config", str(cfg)] + common)
        from_env = self.bench_seed(tmp_path, common)
        monkeypatch.delenv("HODGERANK_SEED")
        ref = {s: run_bench("er", {"n": 20, "p": 0.3}, ["CG-NE"], 1, s)[0].n1 for s in (1, 5, 9)}
        assert from_flag[0].n1 == ref[1]
        assert from_cfg[0].n1 == ref[5]
        assert from_env[0].n1 == ref[9]

    def test_bad_config(self, tmp_path, triangle_file):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("just words\n")
        assert main(["--config", str(cfg), "rank", str(triangle_file)]) == EXIT_INPUT


class TestBench:
    def test_rows(self):
        rows = run_bench("ws", {"n": 40, "k": 6}, trials=2, seed=0)
        assert [r.method for r in rows] == ["CG-NE", "MINRES-NE", "CG-KKT", "MINRES-KKT", "LSQR"]
        for r in rows:
            assert r.error == ""
            assert r.rel_err_grad < 1e-5 and r.rel_err_curl < 1e-5
            assert r.n1 == 120

    def test_csv_reparse(self, tmp_path):
        rows = run_bench("ba", {"n": 30, "m": 3}, ["CG-NE", "LSQR"], trials=1, seed=2)
        path = tmp_path / "b.csv"
        write_bench_csv(path, rows)
        with open(path) as fh:
            header = next(csv.reader(fh))
        assert "rel_err_grad" in header and "iters_alpha" in header
        back = read_bench_csv(path)
        assert [r.method for r in back] == ["CG-NE", "LSQR"]
        assert back[0].rel_err_grad == rows[0].rel_err_grad
        assert isinstance(back[0].harmonic_is_absolute, bool)

    def test_failure_recorded(self):
        rows = run_bench("er", {"n": 20, "p": 0.3}, ["CG-NE", "NOPE"], trials=1)
        assert rows[0].error == "" and "ValueError" in rows[1].error

    def test_cli_bench(self, tmp_path):
        out = tmp_path / "b.csv"
        assert main(["bench", "--family", "ws", "--n", "30", "--k", "4", "--trials", "1",
                     "--methods", "CG-NE,LSQR", "-o", str(out)]) == EXIT_OK
        assert len(read_bench_csv(out)) == 2

    def test_make_graph_unknown(self):
        with pytest.raises(ValueError):
            make_graph("tree", {"n": 5})


class TestSpectralRun:
    def test_path_bounds(self):
        rows = run_spectral("path", [8, 16])
        for r in rows:
            assert 0 < r.actual <= r.bound_exact
            assert r.bound_known == r.bound_exact

    def test_complete_one_iteration(self):
        assert [r.actual for r in run_spectral("complete", [8, 16, 32])] == [1, 1, 1]

    def test_actual_iterations_identity(self):
        assert cg_actual_iterations(laplacian_0(build_clique_complex(gen_special("complete", 6))),
                                    np.array([1.0, -1, 0, 0, 2, -2])) == 1

    def test_cli_spectral(self, tmp_path):
        out = tmp_path / "s.csv"
        assert main(["spectral", "--family", "cycle", "--sizes", "8,12", "-o", str(out)]) == EXIT_OK
        with open(out) as fh:
            rows = list(csv.DictReader(fh))
        assert [int(r["n"]) for r in rows] == [8, 12]


class TestExport:
    def test_laplacians(self, tmp_path):
        c = build_clique_complex(gen_special("complete", 5))
        stats = export_matrices(c, "laplacians", tmp_path)
        assert stats["matrices"]["laplacian_2"]["nnz"] == 70
        m = read_matrix_market(tmp_path / "laplacian_2.mtx")
        assert m.shape == (10, 10) and m.nnz == 70

    def test_rcm_reduces_bandwidth(self, tmp_path):
        rng = np.random.default_rng(0)
        perm = rng.permutation(30)
        from hodgerank import Graph
        g = Graph(30, [(int(perm[i]), int(perm[i + 1])) for i in range(29)])
        c = build_clique_complex(g)
        plain = export_matrices(c, "patterns", tmp_path / "a")["matrices"]["laplacian_0"]
        rcm = export_matrices(c, "patterns", tmp_path / "b", "rcm")["matrices"]["laplacian_0"]
        assert rcm["bandwidth"] == 1 < plain["bandwidth"]
        assert rcm["nnz"] == plain["nnz"]

    def test_patterns_only(self, tmp_path):
        c = build_clique_complex(gen_special("wheel", 6))
        export_matrices(c, "patterns", tmp_path)
        assert sorted(p.name for p in tmp_path.iterdir()) == ["patterns.json"]

    def test_cli_export(self, tmp_path, capsys):
        p = tmp_path / "g.txt"
        write_edge_list(p, gen_special("complete", 5))
        code = main(["export", "boundaries", str(p), "--outdir", str(tmp_path / "o")])
        assert code == EXIT_OK
        assert json.loads(capsys.readouterr().out)["matrices"]["boundary_2"]["nnz"] == 30

    def test_bad_target(self, tmp_path):
        with pytest.raises(ValueError):
            export_matrices(build_clique_complex(gen_special("path", 3)), "vectors", tmp_path)


class TestGenAndSweep:
    def test_gen_weighted_feeds_rank(self, tmp_path, capsys):
        g = tmp_path / "g.txt"
        assert main(["gen", "--family", "er", "--n", "30", "--p", "0.2", "--seed", "3",
                     "--weighted", "-o", str(g)]) == EXIT_OK
        code, out = run_json(capsys, ["rank", str(g)])
        assert code == EXIT_OK and len(out["alpha"]) == 30

    def test_gen_instance(self, tmp_path):
        from hodgerank.generators import ProblemInstance
        p = tmp_path / "i.json"
        assert main(["gen", "--family", "cycle", "--n", "6", "--instance", "-o", str(p)]) == EXIT_OK
        assert ProblemInstance.load(p).omega.shape == (6,)

    def test_gen_deterministic(self, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        for path in (a, b):
            main(["gen", "--family", "ba", "--n", "40", "--m", "2", "--seed", "7", "-o", str(path)])
        assert a.read_text() == b.read_text()

    def test_sweep(self, tmp_path):
        out = tmp_path / "s.csv"
        assert main(["sweep", "--n", "12", "--rhos", "0.1,0.5", "--trials", "2", "-o", str(out)]) == EXIT_OK
        with open(out) as fh:
            assert len(list(csv.DictReader(fh))) == 4
        assert (tmp_path / "s.csv.thresholds.json").exists()
