"""Tests for ruleratio.cli — the staged pipeline, exit codes, manifests."""
from __future__ import annotations

import io
import json
from pathlib import Path

import pytest

from ruleratio.cli import main

CFG = """\
seed = 3
n_regions = 6
places_min = 6
places_max = 6
n_records = 1500
p_region_mention = 0.5
p_place_mention = 0.2
noise_vocab = 120
noise_per_record = 4
ambiguity_rate = 0.25
"""


@pytest.fixture()
def corpus(tmp_path: Path) -> Path:
    cfg = tmp_path / "cfg.toml"
    cfg.write_text(CFG)
    out = tmp_path / "corpus"
    assert main(["synth", "--config", str(cfg), "--out", str(out)]) == 0
    return out


def _counts_for(corpus: Path, tmp_path: Path) -> Path:
    counts = tmp_path / "counts.tsv"
    code = main(
        ["count", "--records", str(corpus / "records.txt"), "--out", str(counts)]
    )
    assert code == 0
    return counts


class TestToyExample:
    def test_rank_prints_the_toy_score_at_six_decimals(self, tmp_path, capsys):
        (tmp_path / "records.txt").write_text("a b\na b\na\nb\n")
        (tmp_path / "domains.tsv").write_text("a\tconsequent\nb\tantecedent\n")
        counts = tmp_path / "counts.tsv"
        assert main(
            ["count", "--records", str(tmp_path / "records.txt"), "--out", str(counts)]
        ) == 0
        capsys.readouterr()
        code = main(
            [
                "rank",
                "--counts", str(counts),
                "--domains", str(tmp_path / "domains.tsv"),
                "--estimator", "proposed",
                "--lambda", "1",
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert out == "1\ta\tb\t0.500000\t2\t3\n"


class TestPipeline:
    def test_synth_writes_the_corpus_files(self, corpus):
        for name in ("records.txt", "domains.tsv", "truth.tsv", "manifest.json"):
            assert (corpus / name).exists()
        manifest = json.loads((corpus / "manifest.json").read_text())
        assert manifest["command"] == "synth"
        assert manifest["options"]["resolved_config"]["seed"] == 3

    def test_count_rank_eval_curve(self, corpus, tmp_path, capsys):
        counts = _counts_for(corpus, tmp_path)
        ranked = tmp_path / "ranked.tsv"
        code = main(
            [
                "rank",
                "--counts", str(counts),
                "--domains", str(corpus / "domains.tsv"),
                "--estimator", "proposed",
                "--lambda", "2",
                "--out", str(ranked),
            ]
        )
        assert code == 0
        first = ranked.read_text().splitlines()[0].split("\t")
        assert first[0] == "1" and len(first) == 6

        capsys.readouterr()
        code = main(
            [
                "eval",
                "--ranked", str(ranked),
                "--truth", str(corpus / "truth.tsv"),
                "--counts", str(counts),
                "--k", "10",
                "--k", "30",
            ]
        )
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "k\trecall\tprecision"
        assert lines[1].startswith("10\t") and lines[2].startswith("30\t")

        curve_csv = tmp_path / "curve.csv"
        code = main(
            [
                "curve",
                "--ranked", str(ranked),
                "--truth", str(corpus / "truth.tsv"),
                "--counts", str(counts),
                "--step", "10",
                "--out", str(curve_csv),
            ]
        )
        assert code == 0
        assert curve_csv.read_text().startswith("rank,recall,precision\n")

    def test_rank_reads_counts_from_stdin(self, corpus, tmp_path, capsys, monkeypatch):
        counts = _counts_for(corpus, tmp_path)
        argv_tail = [
            "--domains", str(corpus / "domains.tsv"),
            "--estimator", "proposed",
            "--lambda", "2",
        ]
        assert main(["rank", "--counts", str(counts)] + argv_tail) == 0
        from_file = capsys.readouterr().out

        monkeypatch.setattr("sys.stdin", io.StringIO(counts.read_text()))
        assert main(["rank", "--counts", "-"] + argv_tail) == 0
        assert capsys.readouterr().out == from_file

    def test_threaded_count_is_byte_identical(self, corpus, tmp_path):
        single = tmp_path / "c1.tsv"
        threaded = tmp_path / "c4.tsv"
        records = str(corpus / "records.txt")
        assert main(["count", "--records", records, "--out", str(single)]) == 0
        assert main(
            ["count", "--records", records, "--threads", "4", "--out", str(threaded)]
        ) == 0
        assert single.read_bytes() == threaded.read_bytes()

    def test_tune_then_rank_with_frozen_params(self, corpus, tmp_path):
        tuned = tmp_path / "tuned.txt"
        code = main(
            [
                "tune",
                "--estimator", "proposed",
                "--train", str(corpus),
                "--k", "20",
                "--grid", "0:2:0.5",
                "--refine", "0.1",
                "--out", str(tuned),
            ]
        )
        assert code == 0
        text = dict(
            line.split("\t") for line in tuned.read_text().splitlines()
        )
        assert text["family"] == "proposed"
        assert text["k"] == "20"

        counts = _counts_for(corpus, tmp_path)
        ranked = tmp_path / "ranked.tsv"
        code = main(
            [
                "rank",
                "--counts", str(counts),
                "--domains", str(corpus / "domains.tsv"),
                "--params", str(tuned),
                "--out", str(ranked),
            ]
        )
        assert code == 0
        assert ranked.read_text().splitlines()

    def test_two_runs_produce_byte_identical_artifacts(self, tmp_path):
        cfg = tmp_path / "cfg.toml"
        cfg.write_text(CFG)
        outputs = []
        for tag in ("one", "two"):
            base = tmp_path / tag
            corpus = base / "corpus"
            assert main(["synth", "--config", str(cfg), "--out", str(corpus)]) == 0
            counts = base / "counts.tsv"
            assert main(
                [
                    "count",
                    "--records", str(corpus / "records.txt"),
                    "--threads", "3" if tag == "two" else "1",
                    "--out", str(counts),
                ]
            ) == 0
            ranked = base / "ranked.tsv"
            assert main(
                [
                    "rank",
                    "--counts", str(counts),
                    "--domains", str(corpus / "domains.tsv"),
                    "--estimator", "additive",
                    "--mu", "0.5",
                    "--out", str(ranked),
                ]
            ) == 0
            curve_csv = base / "curve.csv"
            assert main(
                [
                    "curve",
                    "--ranked", str(ranked),
                    "--truth", str(corpus / "truth.tsv"),
                    "--counts", str(counts),
                    "--step", "25",
                    "--out", str(curve_csv),
                ]
            ) == 0
            outputs.append(
                (
                    (corpus / "records.txt").read_bytes(),
                    counts.read_bytes(),
                    ranked.read_bytes(),
                    curve_csv.read_bytes(),
                )
            )
        assert outputs[0] == outputs[1]


class TestCompareAndVerify:
    def test_compare_reports_the_bundled_significance(self, capsys):
        assert main(["compare", "--k", "4000"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "dataset\tproposed\tapriori\tdiff"
        footer = dict(line.split("\t") for line in lines[-3:])
        assert footer["dof"] == "12"
        assert float(footer["p"]) <= 0.0005

    def test_verify_optimizer_passes_and_fails_by_threshold(self, capsys):
        assert main(["verify-optimizer", "--trials", "10", "--seed", "7"]) == 0
        out = dict(
            line.split("\t") for line in capsys.readouterr().out.splitlines()
        )
        assert out["status"] == "ok"
        assert float(out["max_discrepancy"]) <= 1e-6
        assert main(
            [
                "verify-optimizer",
                "--trials", "2",
                "--seed", "7",
                "--max-discrepancy", "1e-30",
            ]
        ) == 1


class TestManifests:
    def test_file_outputs_get_a_manifest(self, corpus, tmp_path):
        counts = _counts_for(corpus, tmp_path)
        manifest_path = Path(str(counts) + ".manifest.json")
        assert manifest_path.exists()
        manifest = json.loads(manifest_path.read_text())
        assert manifest["command"] == "count"
        assert manifest["options"]["records"] == str(corpus / "records.txt")
        assert manifest["tool"]["name"] == "ruleratio"

    def test_stdout_output_leaves_no_manifest(self, corpus, tmp_path, capsys):
        counts = _counts_for(corpus, tmp_path)
        assert main(
            [
                "rank",
                "--counts", str(counts),
                "--domains", str(corpus / "domains.tsv"),
                "--estimator", "mle",
            ]
        ) == 0
        capsys.readouterr()
        assert not list(tmp_path.glob("-*")) and not (tmp_path / "-.manifest.json").exists()


class TestExitCodes:
    def test_missing_input_file_is_a_usage_error(self, tmp_path, capsys):
        code = main(
            ["count", "--records", str(tmp_path / "absent.txt"), "--out", "-"]
        )
        assert code == 2
        err = capsys.readouterr().err
        assert err.startswith("error: ")
        assert "\n" not in err.rstrip("\n")

    def test_malformed_input_is_a_usage_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.tsv"
        bad.write_text("not a counts dump\n")
        (tmp_path / "domains.tsv").write_text("a\tconsequent\n")
        code = main(
            [
                "rank",
                "--counts", str(bad),
                "--domains", str(tmp_path / "domains.tsv"),
                "--estimator", "mle",
            ]
        )
        assert code == 2
        assert capsys.readouterr().err.startswith("error: ")

    def test_runtime_failure_exits_one(self, corpus, tmp_path, capsys):
        counts = _counts_for(corpus, tmp_path)
        # lam < 0 is a domain error, not a usage problem
        code = main(
            [
                "rank",
                "--counts", str(counts),
                "--domains", str(corpus / "domains.tsv"),
                "--estimator", "proposed",
                "--lambda", "-1",
            ]
        )
        assert code == 1
        assert capsys.readouterr().err.startswith("error: ")

    def test_unknown_flag_is_an_argparse_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["compare", "--bogus"])
        assert exc.value.code == 2

    def test_bad_grid_shape_is_an_argparse_error(self, corpus, capsys):
        with pytest.raises(SystemExit) as exc:
            main(
                [
                    "tune",
                    "--estimator", "proposed",
                    "--train", str(corpus),
                    "--grid", "nonsense",
                ]
            )
        assert exc.value.code == 2

    def test_estimator_or_params_required_for_rank(self, corpus, tmp_path, capsys):
        counts = _counts_for(corpus, tmp_path)
        code = main(
            ["rank", "--counts", str(counts), "--domains", str(corpus / "domains.tsv")]
        )
        assert code == 1
        assert "either --estimator or --params" in capsys.readouterr().err
