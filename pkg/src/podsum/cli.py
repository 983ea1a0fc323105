"""Pipeline subcommands over JSONL artifacts.

Defaults reproduce the published configuration end to end, so a bare
invocation of each stage chains into the next. Exit codes: 0 success,
1 validation/usage error, 2 I/O or transport error.
"""

from __future__ import annotations

import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import click
import numpy as np

from podsum import cleanser, evalharness, features, labeler, postprocess, stats
from podsum import summarizer as summarizer_mod
from podsum.corpus import Corpus, read_corpus, read_records, write_records
from podsum.errors import PodsumError, TransportError, ValidationError
from podsum.postprocess import PostprocessConfig, Summary
from podsum.selector import (
    EpisodeExamples,
    ModelConfig,
    StubEmbedder,
    dataset_accuracy,
    load_params,
    save_params,
    score_candidates,
    select_source,
    train as train_model,
    truncate_lead,
)

log = logging.getLogger(__name__)


def _pmap(fn, items, jobs: int):
    """Map preserving input order; jobs > 1 fans out over a thread pool."""
    items = list(items)
    if jobs <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _load_corpus(path: str) -> Corpus:
    episodes = read_records(path, expect_kind="episode")
    return Corpus(episodes=tuple(episodes))


def _load_idf(path: str, want_view: str) -> stats.IdfTable:
    tables = read_records(path, expect_kind="idf")
    if len(tables) != 1:
        raise ValidationError("%s holds %d idf records, expected 1" % (path, len(tables)))
    table = tables[0]
    if table.doc_view != want_view:
        raise ValidationError(
            "idf table was built over %r documents, this stage needs %r"
            % (table.doc_view, want_view)
        )
    return table


def _candidate_sets(path: str, corpus: Corpus) -> dict:
    by_id = corpus.by_id()
    out = {}
    for record in read_records(path, expect_kind="candidates"):
        episode = by_id.get(record["episode_id"])
        if episode is None:
            raise ValidationError(
                "candidates name unknown episode %r" % record["episode_id"]
            )
        out[record["episode_id"]] = features.candidate_set_from_record(record, episode)
    return out


def _seed_with_env(seed: int) -> int:
    env = os.environ.get("PODSUM_SEED")
    return int(env) if env is not None else seed


@click.group()
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="JSON file of per-subcommand flag defaults.")
@click.option("-v", "--verbose", is_flag=True, help="Debug logging.")
@click.pass_context
def cli(ctx, config_path, verbose):
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if config_path:
        with open(config_path, encoding="utf-8") as fh:
            ctx.default_map = json.load(fh)


@cli.command()
@click.argument("manifest", type=click.Path())
@click.option("-o", "--out", required=True, type=click.Path())
def ingest(manifest, out):
    """Read a corpus manifest into episode records."""
    corpus = read_corpus(manifest)
    write_records(corpus.episodes, out)
    click.echo("ingested %d episodes (split=%s) -> %s"
               % (len(corpus.episodes), corpus.split, out))


@cli.command()
@click.option("--episodes", required=True, type=click.Path())
@click.option("--docs", type=click.Choice(stats.DOC_VIEWS), default="transcripts",
              show_default=True, help="Which text each document contributes.")
@click.option("-o", "--out", required=True, type=click.Path())
def idf(episodes, docs, out):
    """Build a document-frequency table over the corpus."""
    corpus = _load_corpus(episodes)
    table = stats.build_idf(corpus, doc_view=docs)
    write_records([table], out)
    click.echo("idf over %d %s documents, %d terms -> %s"
               % (table.n_docs, docs, len(table.df), out))


@cli.command()
@click.option("--episodes", required=True, type=click.Path())
@click.option("--idf", "idf_path", required=True, type=click.Path(),
              help="IDF table built with --docs descriptions.")
@click.option("--sigma", default=10.0, show_default=True)
@click.option("--min-occ", default=5, show_default=True)
@click.option("--min-idf", default=1.5, show_default=True)
@click.option("-o", "--out", required=True, type=click.Path())
def cleanse(episodes, idf_path, sigma, min_occ, min_idf, out):
    """Filter low-salience sentences out of creator descriptions."""
    corpus = _load_corpus(episodes)
    table = _load_idf(idf_path, "descriptions")
    config = cleanser.CleanseConfig(sigma=sigma, min_occurrence=min_occ, min_idf=min_idf)
    result = cleanser.build_training_set(corpus, table, config)
    write_records(result.pairs, out)
    click.echo("pairs %d (from %d episodes)" % (result.episodes_after, result.episodes_before))
    click.echo("mean reference words before %.2f after %.2f"
               % (result.mean_words_before, result.mean_words_after))


@cli.command()
@click.option("--episodes", required=True, type=click.Path())
@click.option("--head", default=features.DEFAULT_HEAD, show_default=True)
@click.option("--tail", default=features.DEFAULT_TAIL, show_default=True)
@click.option("-o", "--out", required=True, type=click.Path())
def candidates(episodes, head, tail, out):
    """Pick the head/tail candidate windows per episode."""
    corpus = _load_corpus(episodes)
    sets = [features.select_candidates(ep, head=head, tail=tail) for ep in corpus.episodes]
    write_records(sets, out)
    click.echo("candidates for %d episodes -> %s" % (len(sets), out))


@cli.command("features")
@click.option("--episodes", required=True, type=click.Path())
@click.option("--idf", "idf_path", required=True, type=click.Path(),
              help="IDF table built with --docs transcripts.")
@click.option("--candidates", "candidates_path", required=True, type=click.Path())
@click.option("--jobs", default=1, show_default=True)
@click.option("--binner-out", required=True, type=click.Path())
@click.option("-o", "--out", required=True, type=click.Path())
def features_cmd(episodes, idf_path, candidates_path, jobs, binner_out, out):
    """Score surface features and one-hot binarize them."""
    corpus = _load_corpus(episodes)
    table = _load_idf(idf_path, "transcripts")
    cand = _candidate_sets(candidates_path, corpus)

    def score_episode(episode):
        counts = stats.episode_term_counts(episode)
        cset = cand.get(episode.episode_id)
        if cset is None:
            raise ValidationError("no candidates for episode %s" % episode.episode_id)
        return [
            features.feature_scores(seg, episode, table, term_counts=counts)
            for _, seg in cset.candidates
        ]

    scored = _pmap(score_episode, corpus.episodes, jobs)
    binner = features.fit_binner([row for ep_rows in scored for row in ep_rows])
    write_records([binner], binner_out)

    records = []
    for episode, ep_rows in zip(corpus.episodes, scored):
        cset = cand[episode.episode_id]
        for (index, _), raw in zip(cset.candidates, ep_rows):
            records.append(features.SegmentFeatures(
                episode_id=episode.episode_id,
                segment_index=index,
                raw=tuple(raw),
                binary=features.binarize(raw, binner),
            ))
    write_records(records, out)
    click.echo("featurized %d candidate segments -> %s (binner -> %s)"
               % (len(records), out, binner_out))


@cli.command()
@click.option("--episodes", required=True, type=click.Path())
@click.option("--candidates", "candidates_path", required=True, type=click.Path())
@click.option("--tau", default=labeler.DEFAULT_TAU, show_default=True)
@click.option("--jobs", default=1, show_default=True)
@click.option("-o", "--out", required=True, type=click.Path())
def label(episodes, candidates_path, tau, jobs, out):
    """Label candidate segments against description sentences."""
    corpus = _load_corpus(episodes)
    cand = _candidate_sets(candidates_path, corpus)

    def label_episode(episode):
        cset = cand.get(episode.episode_id)
        if cset is None:
            return []
        return [
            labeler.label_segment(seg, episode.creator_description, tau=tau,
                                  episode_id=episode.episode_id)
            for _, seg in cset.candidates
        ]

    per_episode = _pmap(label_episode, corpus.episodes, jobs)
    labels = [lab for rows in per_episode for lab in rows]
    write_records(labels, out)
    positives = sum(1 for l in labels if l.positive)
    negatives = len(labels) - positives
    ratio = (negatives / positives) if positives else float("inf")
    coverage = labeler.candidate_coverage(corpus, tau=tau)
    click.echo("labels %d (tau=%g) -> %s" % (len(labels), tau, out))
    click.echo("positives %d negatives %d ratio 1:%.1f" % (positives, negatives, ratio))
    click.echo("candidate coverage of positives %.1f%%" % (100.0 * coverage))


@cli.command()
@click.option("--episodes", required=True, type=click.Path())
@click.option("--candidates", "candidates_path", required=True, type=click.Path())
@click.option("--features", "features_path", required=True, type=click.Path())
@click.option("--labels", "labels_path", required=True, type=click.Path())
@click.option("--d-model", default=16, show_default=True)
@click.option("--layers", default=2, show_default=True)
@click.option("--heads", default=2, show_default=True)
@click.option("--max-positions", default=40, show_default=True)
@click.option("--lr", default=0.1, show_default=True)
@click.option("--epochs", default=100, show_default=True)
@click.option("--seed", default=0, show_default=True,
              help="PODSUM_SEED in the environment overrides this.")
@click.option("--full-batch", is_flag=True, help="One update per epoch.")
@click.option("-o", "--out", required=True, type=click.Path(),
              help="Where the trained parameter JSON goes.")
def train(episodes, candidates_path, features_path, labels_path, d_model, layers,
          heads, max_positions, lr, epochs, seed, full_batch, out):
    """Train the salience selector on labeled candidates."""
    corpus = _load_corpus(episodes)
    cand = _candidate_sets(candidates_path, corpus)
    config = ModelConfig(
        d_model=d_model, n_layers=layers, n_heads=heads,
        max_positions=max_positions, seed=_seed_with_env(seed),
        learning_rate=lr, epochs=epochs, full_batch=full_batch,
    )
    dataset = _build_dataset(corpus, cand, features_path, labels_path, config.d_model)
    result = train_model(dataset, config)
    save_params(out, result.params, config)
    accuracy = dataset_accuracy(result.params, dataset, config)
    click.echo("trained %d episodes, %d epochs" % (len(dataset), config.epochs))
    click.echo("loss %.6f -> %.6f; training accuracy %.1f%%"
               % (result.losses[0], result.losses[-1], 100.0 * accuracy))
    click.echo("params -> %s" % out)


def _build_dataset(corpus, cand, features_path, labels_path, d_model):
    feats = {}
    for f in read_records(features_path, expect_kind="features"):
        feats[(f.episode_id, f.segment_index)] = f.binary
    labels = {}
    for l in read_records(labels_path, expect_kind="label"):
        labels[(l.episode_id, l.segment_index)] = 1 if l.positive else 0
    embedder = StubEmbedder(d_model)
    dataset = []
    for episode in corpus.episodes:
        cset = cand.get(episode.episode_id)
        if cset is None:
            continue
        bits, ys, texts = [], [], []
        for index, segment in cset.candidates:
            key = (episode.episode_id, index)
            if key not in feats:
                raise ValidationError("no features for episode %s segment %d" % key)
            if key not in labels:
                raise ValidationError("no label for episode %s segment %d" % key)
            bits.append(feats[key])
            ys.append(labels[key])
            texts.append(segment.text())
        dataset.append(EpisodeExamples(
            episode_id=episode.episode_id,
            bits=np.asarray(bits, dtype=np.float64),
            context=np.asarray(embedder.embed(texts), dtype=np.float64),
            labels=np.asarray(ys, dtype=np.intp),
        ))
    if not dataset:
        raise ValidationError("no episodes with candidates to train on")
    return dataset


@cli.command()
@click.option("--episodes", required=True, type=click.Path())
@click.option("--candidates", "candidates_path", required=True, type=click.Path())
@click.option("--features", "features_path", required=True, type=click.Path())
@click.option("--params", "params_path", required=True, type=click.Path())
@click.option("--budget", default=1024, show_default=True)
@click.option("-o", "--out", required=True, type=click.Path())
def select(episodes, candidates_path, features_path, params_path, budget, out):
    """Pick summary-worthy segments under the token budget."""
    corpus = _load_corpus(episodes)
    cand = _candidate_sets(candidates_path, corpus)
    params, config = load_params(params_path)
    feats = {}
    for f in read_records(features_path, expect_kind="features"):
        feats[(f.episode_id, f.segment_index)] = f.binary
    embedder = StubEmbedder(config.d_model)

    sources = []
    for episode in corpus.episodes:
        cset = cand.get(episode.episode_id)
        if cset is None:
            continue
        bits = []
        texts = []
        for index, segment in cset.candidates:
            key = (episode.episode_id, index)
            if key not in feats:
                raise ValidationError("no features for episode %s segment %d" % key)
            bits.append(feats[key])
            texts.append(segment.text())
        ctx = np.asarray(embedder.embed(texts), dtype=np.float64)
        probs = score_candidates(np.asarray(bits, dtype=np.float64), ctx, params, config)
        sources.append(select_source(episode, cset.candidates, probs, budget=budget))
    write_records(sources, out)
    longest = max((s.token_count for s in sources), default=0)
    click.echo("selected sources for %d episodes (longest %d tokens) -> %s"
               % (len(sources), longest, out))


@cli.command()
@click.option("--episodes", required=True, type=click.Path())
@click.option("--budget", default=1024, show_default=True)
@click.option("-o", "--out", required=True, type=click.Path())
def lead(episodes, budget, out):
    """Lead-truncation source text per episode."""
    corpus = _load_corpus(episodes)
    sources = [truncate_lead(ep, budget=budget) for ep in corpus.episodes]
    write_records(sources, out)
    longest = max((s.token_count for s in sources), default=0)
    click.echo("lead sources for %d episodes (longest %d tokens) -> %s"
               % (len(sources), longest, out))


@cli.command()
@click.option("--sources", required=True, type=click.Path())
@click.option("--backend", type=click.Choice(["extractive", "service"]),
              default="extractive", show_default=True)
@click.option("--url", default=None, help="Model server base URL (service backend).")
@click.option("--min-len", default=39, show_default=True)
@click.option("--max-len", default=250, show_default=True)
@click.option("--beam", default=4, show_default=True)
@click.option("--length-penalty", default=2.0, show_default=True)
@click.option("--no-repeat", default=3, show_default=True)
@click.option("--jobs", default=1, show_default=True)
@click.option("-o", "--out", required=True, type=click.Path())
def summarize(sources, backend, url, min_len, max_len, beam, length_penalty,
              no_repeat, jobs, out):
    """Summarize source texts with the chosen backend."""
    config = summarizer_mod.DecodeConfig(
        length_penalty_p=length_penalty, no_repeat_ngram=no_repeat,
        min_length=min_len, max_length=max_len, beam_size=beam,
    )
    source_records = read_records(sources, expect_kind="source")

    def run(source):
        text = summarizer_mod.summarize(source, config, backend=backend, base_url=url)
        return Summary(episode_id=source.episode_id, text=text)

    summaries = _pmap(run, source_records, jobs)
    write_records(summaries, out)
    click.echo("summarized %d sources (%s backend) -> %s"
               % (len(summaries), backend, out))


@cli.command("postprocess")
@click.option("--summaries", required=True, type=click.Path())
@click.option("--long", "long_tokens", default=128, show_default=True,
              help="Token count at which a trailing partial sentence is dropped.")
@click.option("--dedup", default=3, show_default=True,
              help="Distinct-episode count at which a sentence is boilerplate.")
@click.option("-o", "--out", required=True, type=click.Path())
def postprocess_cmd(summaries, long_tokens, dedup, out):
    """Clean generated summaries and drop cross-episode boilerplate."""
    config = PostprocessConfig(long_summary_tokens=long_tokens,
                               dedup_min_occurrences=dedup)
    records = read_records(summaries, expect_kind="summary")
    cleaned = postprocess.postprocess_summaries(records, config)
    write_records(cleaned, out)
    click.echo("postprocessed %d summaries -> %s" % (len(cleaned), out))


def _text_by_episode(path: str) -> dict:
    out = {}
    for record in read_records(path):
        if isinstance(record, Summary):
            out[record.episode_id] = record.text
        elif isinstance(record, cleanser.CleanReference):
            out[record.episode_id] = record.text
        elif hasattr(record, "creator_description"):
            out[record.episode_id] = record.creator_description
        else:
            raise ValidationError(
                "%s: cannot read summary text from kind %r"
                % (path, getattr(record, "kind", type(record).__name__))
            )
    return out


@cli.command()
@click.option("--system", "system_path", required=True, type=click.Path())
@click.option("--refs", "refs_path", required=True, type=click.Path(),
              help="Summary, clean_ref, or episode records.")
@click.option("--json", "as_json", is_flag=True)
def rouge(system_path, refs_path, as_json):
    """Corpus ROUGE table of a system against references."""
    report = evalharness.rouge_report(
        _text_by_episode(system_path), _text_by_episode(refs_path)
    )
    click.echo(evalharness.report_to_json(report) if as_json
               else evalharness.render_rouge_report(report))


@cli.command()
@click.option("--judgments", required=True, type=click.Path())
@click.option("--system", "system_id", required=True)
@click.option("--against-majority", is_flag=True,
              help="Also compare with the per-episode majority rating.")
@click.option("--json", "as_json", is_flag=True)
def judge(judgments, system_id, against_majority, as_json):
    """Aggregate human judgments for one system."""
    records = read_records(judgments, expect_kind="judgment")
    report = evalharness.aggregate(records, system_id)
    click.echo(evalharness.report_to_json(report) if as_json
               else evalharness.render_system_report(report))
    if against_majority:
        mine = {}
        for j in records:
            if j.system_id == system_id:
                if j.episode_id in mine:
                    raise ValidationError(
                        "system %s judged twice on episode %s" % (system_id, j.episode_id)
                    )
                mine[j.episode_id] = j.quality
        pool = {}
        for j in records:
            if j.episode_id in mine:
                pool.setdefault(j.episode_id, []).append(j.quality)
        baseline = evalharness.majority_rating(pool)
        comparison = evalharness.compare(mine, baseline)
        click.echo(evalharness.report_to_json(comparison) if as_json
                   else evalharness.render_compare_report(comparison))


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 130
    except click.ClickException as exc:  # UsageError included
        exc.show()
        return 1
    except TransportError as exc:
        click.echo("transport error: %s" % exc, err=True)
        return 2
    except PodsumError as exc:
        click.echo("error: %s" % exc, err=True)
        return 1
    except OSError as exc:
        click.echo("i/o error: %s" % exc, err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
