"""Command-line interface tests driven through main()'s exit codes."""

from __future__ import annotations

import numpy as np
import pytest

from taxovec.cli import main
from taxovec.manifest import file_digest, read_manifest
from taxovec.trainer import load_embeddings

CHAIN = "b\ta\nc\tb\n"
# r with children a, b; a has c, d; b has e, f
TREE = "a\tr\nb\tr\nc\ta\nd\ta\ne\tb\nf\tb\n"


@pytest.fixture()
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "chain.tsv").write_text(CHAIN)
    (tmp_path / "tree.tsv").write_text(TREE)
    return tmp_path


def data_rows(path):
    return [
        line
        for line in path.read_text().splitlines()
        if line and not line.startswith("#")
    ]


def header_meta(path):
    out = {}
    for line in path.read_text().splitlines():
        if not line.startswith("# "):
            break
        key, _, value = line[2:].partition("=")
        out[key] = value
    return out


class TestSimilarities:
    def test_chain_golden_rows(self, workdir, capsys):
        code = main(
            ["similarities", "--graph", "chain.tsv", "--measure", "shp",
             "--output", "pairs.tsv"]
        )
        assert code == 0
        rows = set(data_rows(workdir / "pairs.tsv"))
        # ids take file order (b appears first), so pairs lead with b
        assert rows == {"b\ta\t1.0", "b\tc\t1.0", "a\tc\t0.0"}
        out = capsys.readouterr().out
        assert "candidates=3" in out
        assert "pairs=3" in out

    def test_manifest_digest_and_config(self, workdir):
        main(
            ["--threads", "2", "similarities", "--graph", "chain.tsv",
             "--measure", "shp", "--seed", "5", "--output", "pairs.tsv"]
        )
        got = read_manifest(workdir / "pairs.tsv.manifest")
        assert got["subcommand"] == "similarities"
        assert got["seed"] == "5"
        assert got["input.graph.sha256"] == file_digest(workdir / "chain.tsv")
        assert got["config.measure"] == "shp"
        assert got["config.mode"] == "full"
        assert got["config.top_k"] == "50"
        assert got["config.threads"] == "2"

    def test_full_and_fast_agree_on_chain(self, workdir):
        for mode in ("full", "fast"):
            assert main(
                ["similarities", "--graph", "chain.tsv", "--measure", "shp",
                 "--mode", mode, "--output", f"{mode}.tsv"]
            ) == 0
        assert data_rows(workdir / "full.tsv") == data_rows(workdir / "fast.tsv")
        assert header_meta(workdir / "full.tsv")["mode"] == "full"
        assert header_meta(workdir / "fast.tsv")["mode"] == "fast"

    def test_byte_identical_reruns(self, workdir):
        args = ["similarities", "--graph", "tree.tsv", "--measure", "shp",
                "--seed", "3"]
        assert main(args + ["--output", "one.tsv"]) == 0
        assert main(args + ["--output", "two.tsv"]) == 0
        assert (workdir / "one.tsv").read_bytes() == (workdir / "two.tsv").read_bytes()

    def test_jcn_requires_ic_counts(self, workdir, capsys):
        code = main(
            ["similarities", "--graph", "tree.tsv", "--measure", "jcn",
             "--output", "pairs.tsv"]
        )
        assert code == 1
        assert "ic-counts" in capsys.readouterr().err

    def test_jcn_with_counts(self, workdir):
        (workdir / "counts.tsv").write_text(
            "c\t4\nd\t2\ne\t3\nf\t1\n"
        )
        code = main(
            ["similarities", "--graph", "tree.tsv", "--measure", "jcn",
             "--ic-counts", "counts.tsv", "--output", "pairs.tsv"]
        )
        assert code == 0
        assert len(data_rows(workdir / "pairs.tsv")) > 0

    def test_cyclic_graph_is_a_data_error(self, workdir, capsys):
        (workdir / "cyc.tsv").write_text("a\tb\nb\ta\n")
        code = main(
            ["similarities", "--graph", "cyc.tsv", "--measure", "shp",
             "--output", "pairs.tsv"]
        )
        assert code == 2
        assert "data error" in capsys.readouterr().err

    def test_virtual_root_connects_forest(self, workdir):
        (workdir / "forest.tsv").write_text("b\ta\nd\tc\n")
        code = main(
            ["similarities", "--graph", "forest.tsv", "--measure", "shp",
             "--virtual-root", "ROOT", "--threshold", "0.0",
             "--output", "pairs.tsv"]
        )
        assert code == 0
        joined = "\n".join(data_rows(workdir / "pairs.tsv"))
        assert "ROOT" in joined


@pytest.fixture()
def tree_pairs(workdir):
    main(["similarities", "--graph", "tree.tsv", "--measure", "shp",
          "--output", "pairs.tsv"])
    return workdir


class TestTrain:
    def test_train_and_reload(self, tree_pairs, capsys):
        code = main(
            ["train", "--graph", "tree.tsv", "--pairs", "pairs.tsv",
             "--dim", "8", "--epochs", "3", "--output", "emb.txt"]
        )
        assert code == 0
        m = load_embeddings(tree_pairs / "emb.txt")
        assert m.n == 7 and m.d == 8
        out = capsys.readouterr().out
        assert "epoch 0:" in out and "epoch 2:" in out

    def test_seed_determinism(self, tree_pairs):
        args = ["train", "--graph", "tree.tsv", "--pairs", "pairs.tsv",
                "--dim", "8", "--epochs", "2"]
        main(args + ["--seed", "4", "--output", "a.txt"])
        main(args + ["--seed", "4", "--output", "b.txt"])
        main(args + ["--seed", "5", "--output", "c.txt"])
        assert (tree_pairs / "a.txt").read_bytes() == (tree_pairs / "b.txt").read_bytes()
        assert (tree_pairs / "a.txt").read_bytes() != (tree_pairs / "c.txt").read_bytes()

    def test_manifest_records_hyperparameter_defaults(self, tree_pairs):
        main(["train", "--graph", "tree.tsv", "--pairs", "pairs.tsv",
              "--dim", "8", "--output", "emb.txt"])
        got = read_manifest(tree_pairs / "emb.txt.manifest")
        assert got["config.d"] == "8"
        assert got["config.alpha"] == "0.01"
        assert got["config.negatives"] == "3"
        assert got["config.neg_mode"] == "per-side"
        assert got["config.batch_size"] == "100"
        assert got["config.epochs"] == "15"
        assert got["config.learning_rate"] == "0.001"
        assert got["config.l1"] == "1e-05"
        assert got["config.dtype"] == "float32"
        assert got["input.pairs.sha256"] == file_digest(tree_pairs / "pairs.tsv")

    def test_dev_pairs_enable_early_stop_reporting(self, tree_pairs, capsys):
        main(["similarities", "--graph", "tree.tsv", "--measure", "shp",
              "--seed", "9", "--output", "dev.tsv"])
        code = main(
            ["train", "--graph", "tree.tsv", "--pairs", "pairs.tsv",
             "--dev-pairs", "dev.tsv", "--dim", "8", "--epochs", "4",
             "--output", "emb.txt"]
        )
        assert code == 0
        assert "dev_spearman=" in capsys.readouterr().out

    def test_divergence_exits_three(self, tree_pairs, capsys):
        code = main(
            ["train", "--graph", "tree.tsv", "--pairs", "pairs.tsv",
             "--dim", "4", "--epochs", "3", "--learning-rate", "1e39",
             "--dtype", "float32", "--output", "emb.txt"]
        )
        assert code == 3
        assert "numeric failure" in capsys.readouterr().err

    def test_bad_pairs_file_exits_two(self, tree_pairs, capsys):
        (tree_pairs / "bad.tsv").write_text("a\tb\t1.5\n")
        code = main(
            ["train", "--graph", "tree.tsv", "--pairs", "bad.tsv",
             "--dim", "4", "--output", "emb.txt"]
        )
        assert code == 2
        assert "data error" in capsys.readouterr().err


class TestEvalSim:
    def setup_files(self, workdir):
        (workdir / "lemma_pairs.tsv").write_text(
            "cup\tmug\t8.0\nseat\tchair\t6.5\nbird\tstone\t2.0\nleaf\troot\t3.5\n"
        )
        (workdir / "candidates.tsv").write_text(
            "cup\tc,d\nmug\td\nseat\te\nchair\tf\nbird\tc\nstone\tf\nleaf\te\nroot\tr\n"
        )

    def test_measure_scorer_static(self, workdir, capsys):
        self.setup_files(workdir)
        code = main(
            ["eval-sim", "--graph", "tree.tsv", "--pairs", "lemma_pairs.tsv",
             "--candidates", "candidates.tsv", "--measure", "shp",
             "--scorer", "measure", "--golds", "measure",
             "--report", "report.tsv"]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "spearman=1.0000" in out
        assert "scorer=shp[raw]" in out
        report = (workdir / "report.tsv").read_text().splitlines()
        assert report[0].startswith("spearman\t")
        assert report[1].split("\t")[0] == "1.0"

    def test_model_scorer_dynamic(self, workdir, capsys):
        self.setup_files(workdir)
        main(["similarities", "--graph", "tree.tsv", "--measure", "shp",
              "--output", "pairs.tsv"])
        main(["train", "--graph", "tree.tsv", "--pairs", "pairs.tsv",
              "--dim", "8", "--epochs", "3", "--output", "emb.txt"])
        code = main(
            ["eval-sim", "--graph", "tree.tsv", "--pairs", "lemma_pairs.tsv",
             "--candidates", "candidates.tsv", "--measure", "shp",
             "--model", "emb.txt", "--selection", "dynamic",
             "--histogram", "hist.tsv", "--bins", "4"]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "selection=dynamic scorer=model[dot]" in out
        assert len((workdir / "hist.tsv").read_text().splitlines()) == 4
        assert (workdir / "taxovec-eval-sim.manifest").exists()

    def test_normalized_measure_scorer(self, workdir, capsys):
        self.setup_files(workdir)
        main(["similarities", "--graph", "tree.tsv", "--measure", "shp",
              "--output", "pairs.tsv"])
        code = main(
            ["eval-sim", "--graph", "tree.tsv", "--pairs", "lemma_pairs.tsv",
             "--candidates", "candidates.tsv", "--measure", "shp",
             "--scorer", "measure", "--norm-from", "pairs.tsv"]
        )
        assert code == 0
        assert "scorer=shp[norm]" in capsys.readouterr().out

    def test_scorer_model_requires_model_path(self, workdir, capsys):
        self.setup_files(workdir)
        code = main(
            ["eval-sim", "--graph", "tree.tsv", "--pairs", "lemma_pairs.tsv",
             "--candidates", "candidates.tsv", "--measure", "shp"]
        )
        assert code == 1
        assert "requires --model" in capsys.readouterr().err


class TestWsd:
    INSTANCES = (
        "s1\t0\tfirst\tc,e\tc\n"
        "s1\t1\tsecond\td\td\n"
        "\n"
        "s2\t0\tonly\tf\tf\n"
    )

    def test_measure_scorer_run(self, workdir, capsys):
        (workdir / "inst.tsv").write_text(self.INSTANCES)
        code = main(
            ["wsd", "--graph", "tree.tsv", "--instances", "inst.tsv",
             "--measure", "shp", "--threshold", "0.3",
             "--baseline", "first", "--predictions", "preds.tsv"]
        )
        assert code == 0
        out = capsys.readouterr().out
        # shp(c,d)=1/3 > 0.3 links them; e-d scores 1/5 -> token 0 picks c
        assert "precision=1.0000 recall=1.0000 f1=1.0000" in out
        assert "attempted=3 correct=3 gold=3 skipped_pairs=0" in out
        assert "baseline=first f1=1.0000" in out
        preds = (workdir / "preds.tsv").read_text().splitlines()
        assert preds[0] == "s1\t0\tfirst\tc,e\tc"
        assert (workdir / "taxovec-wsd.manifest").exists()

    def test_high_threshold_falls_back_to_first(self, workdir, capsys):
        (workdir / "inst.tsv").write_text(
            "s1\t0\tfirst\te,c\t-\ns1\t1\tsecond\td\td\n"
        )
        code = main(
            ["wsd", "--graph", "tree.tsv", "--instances", "inst.tsv",
             "--measure", "shp", "--threshold", "0.99",
             "--predictions", "preds.tsv"]
        )
        assert code == 0
        assert (workdir / "preds.tsv").read_text().splitlines()[0].endswith("\te")

    def test_sweep_lines(self, workdir, capsys):
        (workdir / "inst.tsv").write_text(self.INSTANCES)
        code = main(
            ["wsd", "--graph", "tree.tsv", "--instances", "inst.tsv",
             "--measure", "shp", "--sweep", "0.2:0.4:0.1"]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert out.count("sweep t=") == 3

    def test_bad_sweep_spec(self, workdir, capsys):
        (workdir / "inst.tsv").write_text(self.INSTANCES)
        code = main(
            ["wsd", "--graph", "tree.tsv", "--instances", "inst.tsv",
             "--measure", "shp", "--sweep", "backwards"]
        )
        assert code == 1

    def test_random_baseline_seeded(self, workdir, capsys):
        (workdir / "inst.tsv").write_text(self.INSTANCES)
        outs = []
        for _ in range(2):
            assert main(
                ["wsd", "--graph", "tree.tsv", "--instances", "inst.tsv",
                 "--measure", "shp", "--baseline", "random", "--seed", "6"]
            ) == 0
            outs.append(
                [l for l in capsys.readouterr().out.splitlines() if "baseline" in l]
            )
        assert outs[0] == outs[1]


class TestNeighbors:
    def test_matches_full_sort(self, tree_pairs, capsys):
        main(["train", "--graph", "tree.tsv", "--pairs", "pairs.tsv",
              "--dim", "8", "--epochs", "3", "--output", "emb.txt"])
        capsys.readouterr()
        code = main(["neighbors", "--model", "emb.txt", "--node", "c", "--k", "3"])
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 3
        m = load_embeddings(tree_pairs / "emb.txt")
        scores = m.matrix.astype(np.float64) @ m.matrix[m.idx("c")].astype(np.float64)
        expected = [m.ids[int(i)] for i in np.argsort(-scores, kind="stable")[:3]]
        assert [l.split("\t")[0] for l in lines] == expected
        got_scores = [float(l.split("\t")[1]) for l in lines]
        assert got_scores == sorted(got_scores, reverse=True)

    def test_oversized_k_clips_with_warning(self, tree_pairs, capsys):
        main(["train", "--graph", "tree.tsv", "--pairs", "pairs.tsv",
              "--dim", "4", "--epochs", "2", "--output", "emb.txt"])
        capsys.readouterr()
        code = main(["neighbors", "--model", "emb.txt", "--node", "c", "--k", "99"])
        assert code == 0
        captured = capsys.readouterr()
        assert "clipping to 6" in captured.err
        assert len(captured.out.splitlines()) == 6

    def test_unknown_node_is_a_data_error(self, tree_pairs, capsys):
        main(["train", "--graph", "tree.tsv", "--pairs", "pairs.tsv",
              "--dim", "4", "--epochs", "2", "--output", "emb.txt"])
        assert main(["neighbors", "--model", "emb.txt", "--node", "zzz"]) == 2


@pytest.mark.filterwarnings("ignore:median pass time")
class TestBench:
    def test_graph_and_dot(self, workdir, capsys):
        code = main(
            ["bench", "--graph", "tree.tsv", "--measure", "shp",
             "--dim", "16", "--queries", "3", "--repeats", "5",
             "--report", "bench.tsv"]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "graph[shp]" in out
        assert "dot[float32]" in out
        assert "top-10 overlap:" in out
        rows = (workdir / "bench.tsv").read_text().splitlines()
        assert rows[0].startswith("method\t")
        assert len(rows) == 3
        got = read_manifest(workdir / "taxovec-bench.manifest")
        assert got["config.methods"] == "graph,dot"

    def test_query_nodes_override(self, workdir, capsys):
        code = main(
            ["bench", "--graph", "tree.tsv", "--measure", "shp",
             "--methods", "graph", "--query-nodes", "c,d",
             "--repeats", "5"]
        )
        assert code == 0
        got = read_manifest(workdir / "taxovec-bench.manifest")
        assert got["config.queries"] == "c,d"

    def test_too_few_repeats(self, workdir, capsys):
        code = main(
            ["bench", "--graph", "tree.tsv", "--measure", "shp",
             "--methods", "graph", "--repeats", "1"]
        )
        assert code == 1
        assert "repeats" in capsys.readouterr().err


class TestEntryPoint:
    def test_help(self, capsys):
        assert main(["--help"]) == 0
        assert "similarities" in capsys.readouterr().out

    def test_no_arguments_shows_usage(self, capsys):
        assert main([]) == 1

    def test_unknown_command(self, capsys):
        assert main(["frobnicate"]) == 1
        assert "No such command" in capsys.readouterr().err

    def test_missing_input_file(self, workdir, capsys):
        code = main(
            ["similarities", "--graph", "no-such-file.tsv",
             "--measure", "shp", "--output", "pairs.tsv"]
        )
        assert code == 1
