import json
from pathlib import Path

import pytest

from podsum.cli import main
from podsum.corpus import read_records, write_records
from podsum.evalharness import JudgmentRecord
from tests.fixtures import cleansing_corpus, pipeline_corpus


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """Episode files plus the pre-model pipeline artifacts, built once."""
    root = tmp_path_factory.mktemp("cli")
    paths = {
        "episodes": root / "episodes.jsonl",
        "cleanse_episodes": root / "cleanse_episodes.jsonl",
        "idf_t": root / "idf_transcripts.jsonl",
        "idf_d": root / "idf_descriptions.jsonl",
        "cands": root / "candidates.jsonl",
        "feats": root / "features.jsonl",
        "binner": root / "binner.jsonl",
        "labels": root / "labels.jsonl",
        "judgments": root / "judgments.jsonl",
        "root": root,
    }
    corpus = pipeline_corpus(n_episodes=6)
    write_records(corpus.episodes, paths["episodes"])
    write_records(cleansing_corpus().episodes, paths["cleanse_episodes"])
    write_records(
        [
            JudgmentRecord("e1", "sys", 2, (True,) * 8),
            JudgmentRecord("e2", "sys", 1, (False,) * 8),
            JudgmentRecord("e1", "base", 1, (True,) * 8),
            JudgmentRecord("e2", "base", 1, (True,) * 8),
        ],
        paths["judgments"],
    )

    steps = [
        ["idf", "--episodes", str(paths["episodes"]), "-o", str(paths["idf_t"])],
        ["idf", "--episodes", str(paths["cleanse_episodes"]),
         "--docs", "descriptions", "-o", str(paths["idf_d"])],
        ["candidates", "--episodes", str(paths["episodes"]),
         "-o", str(paths["cands"])],
        ["features", "--episodes", str(paths["episodes"]),
         "--idf", str(paths["idf_t"]), "--candidates", str(paths["cands"]),
         "--binner-out", str(paths["binner"]), "-o", str(paths["feats"])],
        ["label", "--episodes", str(paths["episodes"]),
         "--candidates", str(paths["cands"]), "-o", str(paths["labels"])],
    ]
    for argv in steps:
        assert main(argv) == 0, argv
    return paths


TRAIN_FLAGS = ["--d-model", "8", "--epochs", "2", "--lr", "0.05",
               "--max-positions", "40"]


def train_argv(workspace, out, extra=()):
    return [
        "train",
        "--episodes", str(workspace["episodes"]),
        "--candidates", str(workspace["cands"]),
        "--features", str(workspace["feats"]),
        "--labels", str(workspace["labels"]),
        *TRAIN_FLAGS, *extra,
        "-o", str(out),
    ]


def test_ingest_reads_manifest(tmp_path, capsys):
    meta = tmp_path / "meta.jsonl"
    meta.write_text(
        json.dumps({"episode_id": "t-1", "description": "First episode notes."})
        + "\n"
        + json.dumps({"episode_id": "t-2", "description": "Second one."})
        + "\n"
    )
    for name, words in (("t-1", ["hello", "there"]), ("t-2", ["more", "words"])):
        doc = {
            "episode_id": name,
            "show_id": "show-9",
            "title": name.upper(),
            "segments": [
                {"words": [{"w": w, "s": 0.4 * i, "e": 0.4 * i + 0.4}
                           for i, w in enumerate(words)]}
            ],
        }
        (tmp_path / ("%s.json" % name)).write_text(json.dumps(doc))
    manifest = tmp_path / "manifest.jsonl"
    manifest.write_text(
        json.dumps({"metadata": "meta.jsonl", "split": "valid"}) + "\n"
        + json.dumps({"transcript": "t-1.json"}) + "\n"
        + json.dumps({"transcript": "t-2.json"}) + "\n"
    )
    out = tmp_path / "episodes.jsonl"
    assert main(["ingest", str(manifest), "-o", str(out)]) == 0
    assert "ingested 2 episodes (split=valid)" in capsys.readouterr().out
    episodes = read_records(out, expect_kind="episode")
    assert [e.episode_id for e in episodes] == ["t-1", "t-2"]
    assert episodes[0].creator_description == "First episode notes."
    assert episodes[1].show_id == "show-9"


def test_idf_and_candidates_output(workspace, capsys, tmp_path):
    rc = main(["idf", "--episodes", str(workspace["episodes"]),
               "-o", str(tmp_path / "idf.jsonl")])
    assert rc == 0
    assert "idf over 6 transcripts documents" in capsys.readouterr().out

    rc = main(["candidates", "--episodes", str(workspace["episodes"]),
               "--head", "3", "--tail", "1", "-o", str(tmp_path / "c.jsonl")])
    assert rc == 0
    for record in read_records(tmp_path / "c.jsonl", expect_kind="candidates"):
        assert len(record["indices"]) <= 4


def test_cleanse_command(workspace, capsys, tmp_path):
    out = tmp_path / "refs.jsonl"
    rc = main(["cleanse", "--episodes", str(workspace["cleanse_episodes"]),
               "--idf", str(workspace["idf_d"]), "-o", str(out)])
    assert rc == 0
    printed = capsys.readouterr().out
    assert "pairs 3 (from 30 episodes)" in printed
    refs = read_records(out, expect_kind="clean_ref")
    assert {r.episode_id for r in refs} == {"sports-0", "repeat-a", "repeat-b"}


def test_cleanse_rejects_wrong_idf_view(workspace, tmp_path, capsys):
    rc = main(["cleanse", "--episodes", str(workspace["cleanse_episodes"]),
               "--idf", str(workspace["idf_t"]), "-o", str(tmp_path / "x.jsonl")])
    assert rc == 1
    assert "needs 'descriptions'" in capsys.readouterr().err


def test_label_prints_ratio_and_coverage(workspace, capsys, tmp_path):
    rc = main(["label", "--episodes", str(workspace["episodes"]),
               "--candidates", str(workspace["cands"]),
               "-o", str(tmp_path / "labels.jsonl")])
    assert rc == 0
    printed = capsys.readouterr().out
    assert "(tau=0.2)" in printed
    assert "ratio 1:" in printed
    assert "candidate coverage of positives 100.0%" in printed


def test_jobs_do_not_change_output(workspace, tmp_path):
    serial = tmp_path / "serial.jsonl"
    parallel = tmp_path / "parallel.jsonl"
    base = ["label", "--episodes", str(workspace["episodes"]),
            "--candidates", str(workspace["cands"])]
    assert main(base + ["-o", str(serial)]) == 0
    assert main(base + ["--jobs", "4", "-o", str(parallel)]) == 0
    assert serial.read_bytes() == parallel.read_bytes()


def test_rerun_is_byte_identical(workspace, tmp_path):
    first = tmp_path / "first.jsonl"
    second = tmp_path / "second.jsonl"
    for out in (first, second):
        rc = main(["features", "--episodes", str(workspace["episodes"]),
                   "--idf", str(workspace["idf_t"]),
                   "--candidates", str(workspace["cands"]),
                   "--binner-out", str(tmp_path / (out.stem + ".binner")),
                   "-o", str(out)])
        assert rc == 0
    assert first.read_bytes() == second.read_bytes()


def test_train_select_lead_summarize_postprocess_rouge(workspace, tmp_path, capsys):
    params = tmp_path / "params.json"
    rc = main(train_argv(workspace, params))
    assert rc == 0
    printed = capsys.readouterr().out
    assert "trained 6 episodes, 2 epochs" in printed
    assert "training accuracy" in printed

    sources = tmp_path / "sources.jsonl"
    rc = main(["select", "--episodes", str(workspace["episodes"]),
               "--candidates", str(workspace["cands"]),
               "--features", str(workspace["feats"]),
               "--params", str(params), "-o", str(sources)])
    assert rc == 0
    assert "selected sources for 6 episodes" in capsys.readouterr().out
    source_records = read_records(sources, expect_kind="source")
    assert len(source_records) == 6
    assert all(s.token_count <= 1024 for s in source_records)

    lead_out = tmp_path / "lead.jsonl"
    rc = main(["lead", "--episodes", str(workspace["episodes"]),
               "--budget", "50", "-o", str(lead_out)])
    assert rc == 0
    capsys.readouterr()
    episodes = read_records(workspace["episodes"], expect_kind="episode")
    by_id = {e.episode_id: e for e in episodes}
    for s in read_records(lead_out, expect_kind="source"):
        assert s.token_count == min(50, by_id[s.episode_id].token_count)

    summaries = tmp_path / "summaries.jsonl"
    rc = main(["summarize", "--sources", str(sources), "-o", str(summaries)])
    assert rc == 0
    assert "extractive backend" in capsys.readouterr().out
    summary_records = read_records(summaries, expect_kind="summary")
    assert len(summary_records) == 6
    assert all(len(s.text.split()) <= 250 for s in summary_records)

    post = tmp_path / "post.jsonl"
    rc = main(["postprocess", "--summaries", str(summaries), "-o", str(post)])
    assert rc == 0
    capsys.readouterr()
    assert all(s.postprocessed for s in read_records(post, expect_kind="summary"))

    rc = main(["rouge", "--system", str(post),
               "--refs", str(workspace["episodes"])])
    assert rc == 0
    table = capsys.readouterr().out
    assert "rouge1" in table and "rougeL" in table

    rc = main(["rouge", "--system", str(post),
               "--refs", str(workspace["episodes"]), "--json"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert set(payload["scores"]) == {"rouge1", "rouge2", "rougeL"}


def test_env_seed_overrides_flag(workspace, tmp_path, monkeypatch):
    monkeypatch.delenv("PODSUM_SEED", raising=False)
    flag_one = tmp_path / "seed1.json"
    flag_two = tmp_path / "seed2.json"
    assert main(train_argv(workspace, flag_one, ["--seed", "1"])) == 0
    assert main(train_argv(workspace, flag_two, ["--seed", "2"])) == 0
    assert flag_one.read_bytes() != flag_two.read_bytes()

    monkeypatch.setenv("PODSUM_SEED", "2")
    env_wins = tmp_path / "env.json"
    assert main(train_argv(workspace, env_wins, ["--seed", "1"])) == 0
    assert env_wins.read_bytes() == flag_two.read_bytes()


def test_config_file_supplies_defaults(workspace, tmp_path, capsys):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"lead": {"budget": 7}}))
    out = tmp_path / "lead7.jsonl"
    rc = main(["--config", str(config), "lead",
               "--episodes", str(workspace["episodes"]), "-o", str(out)])
    assert rc == 0
    assert "longest 7 tokens" in capsys.readouterr().out
    # an explicit flag still beats the config file
    rc = main(["--config", str(config), "lead",
               "--episodes", str(workspace["episodes"]),
               "--budget", "9", "-o", str(out)])
    assert rc == 0
    assert "longest 9 tokens" in capsys.readouterr().out


def test_judge_reports(workspace, capsys):
    rc = main(["judge", "--judgments", str(workspace["judgments"]),
               "--system", "sys"])
    assert rc == 0
    printed = capsys.readouterr().out
    assert "mean quality  1.500" in printed

    rc = main(["judge", "--judgments", str(workspace["judgments"]),
               "--system", "sys", "--against-majority"])
    assert rc == 0
    printed = capsys.readouterr().out
    # majority pool: e1 {2,1} tie -> 1, e2 {1,1} -> 1; gaps +1 and 0
    assert "gap +1     50.00%" in printed
    assert "equal-or-better  100.00%" in printed

    rc = main(["judge", "--judgments", str(workspace["judgments"]),
               "--system", "sys", "--json"])
    assert rc == 0
    assert json.loads(capsys.readouterr().out)["mean_quality"] == 1.5


def test_judge_duplicate_detection(tmp_path, capsys):
    path = tmp_path / "dups.jsonl"
    write_records(
        [JudgmentRecord("e1", "sys", 2, (True,) * 8),
         JudgmentRecord("e1", "sys", 1, (True,) * 8)],
        path,
    )
    rc = main(["judge", "--judgments", str(path), "--system", "sys",
               "--against-majority"])
    assert rc == 1
    assert "judged twice" in capsys.readouterr().err


def test_exit_codes(workspace, tmp_path, capsys):
    # unknown option -> usage error
    assert main(["idf", "--bogus"]) == 1
    capsys.readouterr()

    # missing input file -> I/O error
    rc = main(["idf", "--episodes", str(tmp_path / "missing.jsonl"),
               "-o", str(tmp_path / "out.jsonl")])
    assert rc == 2
    assert "i/o error" in capsys.readouterr().err

    rc = main(["ingest", str(tmp_path / "no-manifest.jsonl"),
               "-o", str(tmp_path / "out.jsonl")])
    assert rc == 2
    capsys.readouterr()

    # validation problem -> 1
    rc = main(["cleanse", "--episodes", str(workspace["cleanse_episodes"]),
               "--idf", str(workspace["idf_t"]),
               "-o", str(tmp_path / "x.jsonl")])
    assert rc == 1
    capsys.readouterr()


def test_summarize_service_errors(workspace, tmp_path, capsys):
    sources = tmp_path / "one_source.jsonl"
    write_records(
        [{"kind": "source", "episode_id": "e", "indices": [0],
          "text": "a few words to summarize here", "token_count": 6}],
        sources,
    )
    rc = main(["summarize", "--sources", str(sources), "--backend", "service",
               "-o", str(tmp_path / "s.jsonl")])
    assert rc == 1
    assert "base_url" in capsys.readouterr().err

    rc = main(["summarize", "--sources", str(sources), "--backend", "service",
               "--url", "http://127.0.0.1:9", "-o", str(tmp_path / "s.jsonl")])
    assert rc == 2
    assert "transport error" in capsys.readouterr().err


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    assert "Usage" in capsys.readouterr().out
