"""Subcommand CLI wiring all pipeline stages behind one config file.

Stages run sequentially and write a manifest next to each artifact so a
rerun with unchanged inputs is byte-identical. Logs are JSONL on stderr;
data goes to files (and human-readable summaries to stdout).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional

from . import dataset as ds
from . import extract as ex
from . import fixtures, inject, metrics, report, synth, wordalign
from .classify import (HeuristicClassifier, Probe, RemoteClassifier, build_probe)
from .config import Config, ConfigError
from .explain import explain as explain_example
from .manifest import Manifest, jlog
from .model import (Document, GenderLabel, SubtokenCounter, parse_conllu,
                    read_plaintext, write_plaintext)
from .pages import align_pages, pairs_manifest_lines, read_pairs_manifest
from .sentalign import (PageAlignmentMeta, PosLexicon, SentencePair,
                        align_sentences)
from .translate import (CachingTranslator, DictionaryProvider,
                        ExternalProvider, IdentityProvider, TranslationCache,
                        load_dictionary)

TRANSLATE_URL_ENV = "GENDERPIVOT_TRANSLATE_URL"
CLASSIFY_URL_ENV = "GENDERPIVOT_CLASSIFY_URL"


# ---------------------------------------------------------------- helpers

def _write_text(path: Path, body: str, manifest_hash: Optional[str] = None,
                comment: bool = True) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    if manifest_hash and comment:
        body = f"# manifest: {manifest_hash}\n{body}"
    path.write_text(body, encoding="utf-8")


def _write_jsonl(path: Path, records: list[dict], manifest_hash: Optional[str] = None) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = []
    if manifest_hash:
        lines.append(json.dumps({"_manifest": manifest_hash}, sort_keys=True))
    lines.extend(json.dumps(r, ensure_ascii=False, sort_keys=True) for r in records)
    path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def _read_jsonl(path: Path) -> list[dict]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            if isinstance(record, dict) and record and all(k.startswith("_") for k in record):
                continue
            records.append(record)
    return records


def _read_docs(path: Path, lang: str) -> list[Document]:
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".conllu":
        return parse_conllu(text, default_lang=lang)
    return read_plaintext(text, lang=lang)


def _corpus_paths(cfg: Config, out_dir: Path) -> dict[str, Path]:
    if cfg.get("corpus", "source") == "synth":
        base = out_dir / "corpus"
        return {"es": base / "es.txt", "en": base / "en.txt",
                "dictionary": base / "dictionary.tsv", "pos": base / "pos_lexicon.tsv"}
    paths = {"es": Path(cfg.get("corpus", "es_docs")), "en": Path(cfg.get("corpus", "en_docs"))}
    paths["dictionary"] = Path(cfg.get("corpus", "dictionary")) if cfg.get("corpus", "dictionary") else None
    paths["pos"] = Path(cfg.get("corpus", "pos_lexicon")) if cfg.get("corpus", "pos_lexicon") else None
    return paths


def _materialize_synth(out_dir: Path) -> dict[str, Path]:
    corpus = synth.build_synthetic_corpus()
    base = out_dir / "corpus"
    base.mkdir(parents=True, exist_ok=True)
    (base / "es.txt").write_text(write_plaintext(corpus.es_docs), encoding="utf-8")
    (base / "en.txt").write_text(write_plaintext(corpus.en_docs), encoding="utf-8")
    (base / "dictionary.tsv").write_text(synth.dictionary_tsv(corpus), encoding="utf-8")
    (base / "pos_lexicon.tsv").write_text(synth.pos_lexicon_tsv(), encoding="utf-8")
    return {"es": base / "es.txt", "en": base / "en.txt",
            "dictionary": base / "dictionary.tsv", "pos": base / "pos_lexicon.tsv"}


def _load_corpus(cfg: Config, out_dir: Path):
    paths = _corpus_paths(cfg, out_dir)
    if cfg.get("corpus", "source") == "synth" and not paths["es"].exists():
        paths = _materialize_synth(out_dir)
    es_docs = _read_docs(paths["es"], "es")
    en_docs = _read_docs(paths["en"], "en")

    endpoint = os.environ.get(TRANSLATE_URL_ENV)
    if endpoint:
        provider = ExternalProvider(
            endpoint,
            timeout=cfg.get_float("translate", "timeout"),
            retries=cfg.get_int("translate", "retries"),
            backoff=cfg.get_float("translate", "backoff"),
            max_in_flight=cfg.get_int("translate", "max_in_flight"))
        cache_path = cfg.get("translate", "cache") or (out_dir / "translate_cache.jsonl")
        translator = CachingTranslator(provider, TranslationCache(cache_path))
    elif paths["dictionary"] is not None and paths["dictionary"].exists():
        with open(paths["dictionary"], encoding="utf-8") as fh:
            translator = load_dictionary(fh)
    else:
        translator = IdentityProvider()
        jlog("translator-fallback", provider="identity")

    pos_lexicon = None
    if paths["pos"] is not None and paths["pos"].exists():
        with open(paths["pos"], encoding="utf-8") as fh:
            pos_lexicon = PosLexicon.from_tsv(fh)
    return es_docs, en_docs, translator, pos_lexicon, paths


def _stage_manifest(cfg: Config, stage: str, sections: list[str], inputs: list[Path]) -> Manifest:
    params = {name: cfg.section(name) for name in sections}
    manifest = Manifest(stage, cfg.get_int("run", "seed"), params)
    for path in inputs:
        if path is not None and path.exists():
            manifest.add_input(path)
    return manifest


def _counter(cfg: Config) -> SubtokenCounter:
    vocab = cfg.get("extract", "subtoken_vocab")
    return SubtokenCounter.from_file(vocab) if vocab else SubtokenCounter()


# ---------------------------------------------------------------- stages

def cmd_synth_corpus(args, cfg: Config, out_dir: Path) -> int:
    paths = _materialize_synth(out_dir)
    manifest = _stage_manifest(cfg, "synth_corpus", ["corpus"], list(paths.values()))
    manifest.write(out_dir)
    jlog("synth-corpus", out=str(out_dir / "corpus"), articles=20)
    return 0


def cmd_align_pages(args, cfg: Config, out_dir: Path) -> int:
    es_docs, en_docs, _translator, _pos, paths = _load_corpus(cfg, out_dir)
    result = align_pages(es_docs, en_docs, loose_titles=cfg.get_bool("pages", "loose_titles"))
    for warning in result.warnings:
        jlog("page-align-warning", **warning)
    manifest = _stage_manifest(cfg, "align_pages", ["corpus", "pages"], [paths["es"], paths["en"]])
    manifest.write(out_dir)
    _write_text(out_dir / "pages.tsv", "\n".join(pairs_manifest_lines(result.pairs)) + "\n",
                manifest.hash)
    jlog("align-pages", pairs=len(result.pairs), warnings=len(result.warnings))
    return 0


def cmd_align_sentences(args, cfg: Config, out_dir: Path) -> int:
    es_docs, en_docs, translator, pos_lexicon, paths = _load_corpus(cfg, out_dir)
    es_by_id = {d.doc_id: d for d in es_docs}
    en_by_id = {d.doc_id: d for d in en_docs}
    rows = read_pairs_manifest((out_dir / "pages.tsv").read_text(encoding="utf-8"))

    from .pages import PagePair
    page_pairs = [PagePair(es_by_id[es_id], en_by_id[en_id], key) for key, es_id, en_id in rows]

    def run_one(pair):
        meta = PageAlignmentMeta()
        pairs = align_sentences(
            pair, translator, pos_lexicon,
            edit_unit=cfg.get("sentalign", "edit_unit"),
            exact_limit=cfg.get_int("sentalign", "exact_limit"),
            use_token_fallback=cfg.get_bool("sentalign", "use_token_fallback"),
            meta=meta)
        return pair, pairs, meta

    jobs = cfg.get_int("run", "jobs")
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_one, page_pairs))
    else:
        results = [run_one(p) for p in page_pairs]

    records = []
    for pair, pairs, meta in results:
        for skipped in meta.skipped_es:
            jlog("translate-skip", es_doc_id=pair.es_doc.doc_id, es_sent_id=skipped)
        for sp in pairs:
            record = {
                "es_doc_id": pair.es_doc.doc_id, "en_doc_id": pair.en_doc.doc_id,
                "es_sent_id": sp.es_sent.sent_id, "en_sent_id": sp.en_sent.sent_id,
                "cost": sp.cost, "witnesses": list(sp.shared_content), "method": meta.method,
            }
            records.append(record)
    manifest = _stage_manifest(cfg, "align_sentences", ["corpus", "sentalign", "translate"],
                               [paths["es"], paths["en"], out_dir / "pages.tsv"])
    manifest.write(out_dir)
    _write_jsonl(out_dir / "sentence_pairs.jsonl", records, manifest.hash)
    jlog("align-sentences", pairs=len(records), pages=len(page_pairs))
    return 0


def _load_sentence_pairs(cfg: Config, out_dir: Path):
    es_docs, en_docs, _translator, _pos, paths = _load_corpus(cfg, out_dir)
    es_by_id = {d.doc_id: d for d in es_docs}
    en_by_id = {d.doc_id: d for d in en_docs}
    pairs = []
    for record in _read_jsonl(out_dir / "sentence_pairs.jsonl"):
        es_doc = es_by_id[record["es_doc_id"]]
        en_doc = en_by_id[record["en_doc_id"]]
        es_sent = {s.sent_id: s for s in es_doc.sentences}[record["es_sent_id"]]
        en_sent = {s.sent_id: s for s in en_doc.sentences}[record["en_sent_id"]]
        pairs.append((record, es_doc,
                      SentencePair(es_sent, en_sent, record["cost"], tuple(record["witnesses"]))))
    return pairs, paths


def cmd_train_aligner(args, cfg: Config, out_dir: Path) -> int:
    pairs, paths = _load_sentence_pairs(cfg, out_dir)
    corpus = [sp for _, _, sp in pairs]
    iterations = cfg.get_int("aligner", "iterations")
    fwd = wordalign.train_ibm1(corpus, iterations)
    rev = wordalign.train_ibm1(corpus, iterations, reverse=True)
    manifest = _stage_manifest(cfg, "train_aligner", ["aligner"],
                               [out_dir / "sentence_pairs.jsonl", paths["es"], paths["en"]])
    manifest.write(out_dir)
    tables = out_dir / "tables"
    tables.mkdir(parents=True, exist_ok=True)
    _write_text(tables / "fwd.tsv", wordalign.save_table(fwd), manifest.hash)
    _write_text(tables / "rev.tsv", wordalign.save_table(rev), manifest.hash)
    jlog("train-aligner", iterations=iterations, pairs=len(corpus),
         final_ll=fwd.log_likelihood[-1])
    return 0


def cmd_extract(args, cfg: Config, out_dir: Path) -> int:
    pairs, paths = _load_sentence_pairs(cfg, out_dir)
    fwd = wordalign.load_table((out_dir / "tables" / "fwd.tsv").read_text(encoding="utf-8"))
    rev = wordalign.load_table((out_dir / "tables" / "rev.tsv").read_text(encoding="utf-8"))
    analyzer = ex.SpanishAnalyzer() if cfg.get_bool("extract", "use_analyzer") else None
    budget = cfg.get_int("extract", "budget")
    counter = _counter(cfg)

    audit: list[dict] = []
    examples = []
    for record, es_doc, sp in pairs:
        target = sp.es_sent
        if not target.annotated and analyzer is not None:
            target = analyzer.annotate(target)
        slots = (ex.detect_prodrop(target, audit=audit) + ex.detect_possessive(target))
        if not slots:
            continue
        alignment = wordalign.align_tokens(sp, fwd, rev)
        context = [s.text for s in es_doc.sentences if s.sent_id < target.sent_id]
        slotted = [ex.PronounSlot(target, s.kind, s.anchor) for s in slots]
        examples.extend(ex.project_gender(
            sp.__class__(target, sp.en_sent, sp.cost, sp.shared_content),
            alignment, slotted, context=context, doc_id=es_doc.doc_id,
            budget=budget, counter=counter, audit=audit))

    examples = ds.dedupe(examples)
    manifest = _stage_manifest(cfg, "extract", ["extract"],
                               [out_dir / "sentence_pairs.jsonl",
                                out_dir / "tables" / "fwd.tsv", out_dir / "tables" / "rev.tsv"])
    manifest.write(out_dir)
    _write_jsonl(out_dir / "examples.jsonl", [e.to_record() for e in examples], manifest.hash)
    _write_jsonl(out_dir / "extract_audit.jsonl", audit, manifest.hash)
    jlog("extract", examples=len(examples), dropped=len(audit))
    return 0


def _fractions(cfg: Config) -> tuple[float, float, float]:
    raw = cfg.get("dataset", "fractions")
    if raw:
        parts = tuple(float(p) for p in raw.split(","))
        if len(parts) != 3:
            raise ConfigError("dataset.fractions needs three comma-separated values")
        return parts
    preset = cfg.get("dataset", "preset")
    if preset not in ds.SPLIT_PRESETS:
        raise ConfigError(f"unknown split preset {preset!r}")
    return ds.SPLIT_PRESETS[preset]


def cmd_build_dataset(args, cfg: Config, out_dir: Path) -> int:
    examples = ds.read_examples((out_dir / "examples.jsonl").read_text(encoding="utf-8"))
    balanced = ds.balance(examples, cfg.get_int("dataset", "balance_seed"))
    splits = ds.split(balanced, _fractions(cfg), cfg.get_int("dataset", "split_seed"),
                      key=cfg.get("dataset", "split_key"))
    manifest = _stage_manifest(cfg, "build_dataset", ["dataset"], [out_dir / "examples.jsonl"])
    manifest.write(out_dir)
    base = out_dir / "dataset"
    base.mkdir(parents=True, exist_ok=True)
    for part in splits:
        _write_text(base / f"{part.name}.jsonl", ds.write_examples(part.examples, manifest.hash),
                    manifest_hash=None, comment=False)
    jlog("build-dataset", total=len(balanced), sizes=[len(p.examples) for p in splits])
    return 0


def _classifier(cfg: Config):
    provider = cfg.get("classify", "provider")
    if provider == "heuristic":
        return HeuristicClassifier(), None
    if provider == "remote":
        endpoint = os.environ.get(CLASSIFY_URL_ENV)
        if not endpoint:
            raise ConfigError(f"classify.provider=remote requires {CLASSIFY_URL_ENV}")
        return None, RemoteClassifier(endpoint)
    raise ConfigError(f"unknown classify provider {provider!r}")


def cmd_classify(args, cfg: Config, out_dir: Path) -> int:
    source = Path(args.examples) if args.examples else out_dir / "dataset" / "test.jsonl"
    examples = ds.read_examples(source.read_text(encoding="utf-8"))
    heuristic, remote = _classifier(cfg)
    style = cfg.get("classify", "mark_style")
    budget = cfg.get_int("classify", "budget")
    counter = _counter(cfg)

    records = []
    if remote is not None:
        probes = [build_probe(e, style, budget, counter) for e in examples]
        predictions = remote.classify_batch(probes)
        for warning in remote.warnings:
            jlog("classify-warning", **warning)
    else:
        predictions = [heuristic.classify(e) for e in examples]
    for example, pred in zip(examples, predictions):
        records.append({
            "id": example.id, "kind": example.kind, "gold": example.label.value,
            "label": pred.label.value if pred.label else None,
            "confidence": pred.confidence, "source": pred.source,
        })
    manifest = _stage_manifest(cfg, "classify", ["classify"], [source])
    manifest.write(out_dir)
    _write_jsonl(out_dir / "predictions.jsonl", records, manifest.hash)
    jlog("classify", examples=len(records),
         abstained=sum(1 for r in records if r["label"] is None))
    return 0


def _prf_rows(records: list[dict]) -> dict[str, metrics.GenderPRF]:
    def to_pairs(rows):
        return [(GenderLabel.parse(r["gold"]),
                 GenderLabel.parse(r["label"]) if r["label"] else None) for r in rows]

    rows = {"all": metrics.pronoun_prf(to_pairs(records))}
    for kind in sorted({r.get("kind") for r in records if r.get("kind")}):
        subset = [r for r in records if r.get("kind") == kind]
        if subset:
            rows[kind] = metrics.pronoun_prf(to_pairs(subset))
    return rows


def cmd_evaluate(args, cfg: Config, out_dir: Path) -> int:
    report_dir = out_dir / "report"
    manifest = _stage_manifest(cfg, "evaluate", ["classify"], [])

    if args.fixtures:
        name = args.fixtures
        if name in fixtures.AGREEMENT_FIXTURES:
            matrix = fixtures.AGREEMENT_FIXTURES[name]
            disamb, agree = metrics.agreement_stats(matrix)
            manifest.add_value("fixture", name)
            manifest.write(out_dir)
            report.write_report(report_dir, name, {}, metrics.EvalReport(confusion=matrix),
                                manifest.hash)
            print(f"{name}: disambiguation {100 * disamb:.1f}% (~{round(100 * disamb)}%), "
                  f"agreement {100 * agree:.1f}% (~{round(100 * agree)}%)")
            return 0
        if name == "prodrop-rates":
            rates = metrics.prodrop_rate(fixtures.prodrop_rate_pairs())
            manifest.add_value("fixture", name)
            manifest.write(out_dir)
            report.write_report(report_dir, name, {},
                                metrics.EvalReport(prodrop_rates=rates), manifest.hash)
            for gender, r in sorted(rates.items()):
                print(f"{gender}: {r.count} occurrences, {r.dropped} dropped, rate {100 * r.rate:.1f}%")
            return 0
        raise ConfigError(f"unknown fixture {name!r}; choose from "
                          f"{sorted(fixtures.AGREEMENT_FIXTURES) + ['prodrop-rates']}")

    if args.bleu_hyp or args.bleu_ref:
        if not (args.bleu_hyp and args.bleu_ref):
            raise ConfigError("--bleu-hyp and --bleu-ref go together")
        hyp_lines = Path(args.bleu_hyp).read_text(encoding="utf-8").splitlines()
        ref_lines = Path(args.bleu_ref).read_text(encoding="utf-8").splitlines()
        score = metrics.bleu([l.split() for l in hyp_lines], [l.split() for l in ref_lines])
        manifest.add_input(Path(args.bleu_hyp))
        manifest.add_input(Path(args.bleu_ref))
        manifest.write(out_dir)
        report.write_report(report_dir, "bleu", {}, metrics.EvalReport(bleu=score), manifest.hash)
        print(f"BLEU: {score:.2f}")
        return 0

    source = Path(args.predictions) if args.predictions else out_dir / "predictions.jsonl"
    records = _read_jsonl(source)
    if not records:
        raise ConfigError(f"no prediction records in {source}")
    rows = _prf_rows(records)
    manifest.add_input(source)
    manifest.write(out_dir)
    report.write_report(report_dir, "report", rows, metrics.EvalReport(prf=rows["all"]),
                        manifest.hash)
    print(report.render_prf_table(rows))
    return 0


def cmd_inject(args, cfg: Config, out_dir: Path) -> int:
    source = Path(args.infile)
    lines = source.read_text(encoding="utf-8").splitlines()
    analyzer = ex.SpanishAnalyzer()
    heuristic = HeuristicClassifier()
    seed = cfg.get_int("inject", "seed")
    mode = cfg.get("inject", "mode")
    flip_rate = cfg.get_float("inject", "flip_rate")
    random_tag_rate = cfg.get_float("inject", "random_tag_rate")
    allow_add = cfg.get_bool("inject", "allow_add_flip")

    from .model import Sentence
    out_lines = []
    tagged = 0
    for no, line in enumerate(lines):
        sentence = analyzer.annotate(Sentence.from_text(no, line))
        slots = ex.detect_prodrop(sentence) + ex.detect_possessive(sentence)
        prediction = None
        if slots:
            pseudo = ex.PronounExample(
                id=f"line:{no}", kind=slots[0].kind, label=GenderLabel.MASC,
                context_sentences=(), target_sentence=sentence.text,
                anchor_index=slots[0].anchor, doc_id="stdin", sent_id=no, witness="")
            pred = heuristic.classify(pseudo)
            prediction = pred if not pred.abstained else None
        if mode == inject.INFER and slots and prediction is None:
            out_lines.append(line)  # abstention: leave untagged
            continue
        rng = inject.substream(seed, no)
        result = inject.inject_tag(line, slots, prediction, rng, flip_rate,
                                   random_tag_rate, mode, allow_add)
        tagged += int(inject.has_tag(result))
        out_lines.append(result)

    manifest = _stage_manifest(cfg, "inject", ["inject"], [source])
    manifest.write(out_dir)
    target = Path(args.outfile) if args.outfile else out_dir / "tagged.txt"
    _write_text(target, "\n".join(out_lines) + ("\n" if out_lines else ""), None)
    jlog("inject", sentences=len(lines), tagged=tagged, mode=mode)
    return 0


def cmd_explain(args, cfg: Config, out_dir: Path) -> int:
    import random as _random

    source = Path(args.examples) if args.examples else out_dir / "dataset" / "test.jsonl"
    examples = ds.read_examples(source.read_text(encoding="utf-8"))
    if not examples:
        raise ConfigError(f"no examples in {source}")
    index = args.index
    if not (0 <= index < len(examples)):
        raise ConfigError(f"--index {index} out of range (have {len(examples)} examples)")
    heuristic, remote = _classifier(cfg)
    if remote is not None:
        style = cfg.get("classify", "mark_style")
        budget = cfg.get_int("classify", "budget")

        def classifier(example):
            return remote.classify(build_probe(example, style, budget))
    else:
        classifier = heuristic

    rng = _random.Random(cfg.get_int("explain", "seed"))
    explanation = explain_example(
        classifier, examples[index], cfg.get_int("explain", "n_samples"), rng,
        ridge_lambda=cfg.get_float("explain", "ridge_lambda"),
        sigma_scale=cfg.get_float("explain", "sigma_scale"))
    record = explanation.to_record()
    print(json.dumps(record, ensure_ascii=False, sort_keys=True))

    manifest = _stage_manifest(cfg, "explain", ["explain"], [source])
    manifest.write(out_dir)
    report_dir = out_dir / "report"
    report_dir.mkdir(parents=True, exist_ok=True)
    record["_manifest"] = manifest.hash
    (report_dir / "explanation.json").write_text(
        json.dumps(record, ensure_ascii=False, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    report.save_explanation_figure(explanation, report_dir / "explanation.png")
    return 0


def cmd_pipeline(args, cfg: Config, out_dir: Path) -> int:
    for step in (cmd_align_pages, cmd_align_sentences, cmd_train_aligner,
                 cmd_extract, cmd_build_dataset, cmd_classify):
        code = step(args, cfg, out_dir)
        if code != 0:
            return code
    eval_args = argparse.Namespace(fixtures=None, predictions=None, bleu_hyp=None,
                                   bleu_ref=None)
    return cmd_evaluate(eval_args, cfg, out_dir)


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="genderpivot",
        description="Mine gender-labeled Spanish pronoun examples from comparable "
                    "bilingual documents; evaluate and explain gender classifiers; "
                    "inject gender tags into MT input.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="run configuration file (INI sections per stage)")
    common.add_argument("--seed", type=int, help="override run.seed")
    common.add_argument("--jobs", type=int, help="override run.jobs")
    common.add_argument("--out-dir", help="override run.out_dir")
    common.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE",
                        help="override any config key")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("synth-corpus", parents=[common],
                   help="materialize the bundled synthetic corpus").set_defaults(func=cmd_synth_corpus)
    sub.add_parser("align-pages", parents=[common],
                   help="stage A: pair documents by title").set_defaults(func=cmd_align_pages)
    sub.add_parser("align-sentences", parents=[common],
                   help="stage B: match sentences inside page pairs").set_defaults(func=cmd_align_sentences)
    sub.add_parser("train-aligner", parents=[common],
                   help="train lexical translation tables").set_defaults(func=cmd_train_aligner)
    sub.add_parser("extract", parents=[common],
                   help="stage C: detect pronoun slots and project gender").set_defaults(func=cmd_extract)
    sub.add_parser("build-dataset", parents=[common],
                   help="balance, split and serialize the dataset").set_defaults(func=cmd_build_dataset)

    p = sub.add_parser("classify", parents=[common], help="classify examples")
    p.add_argument("--examples", help="examples JSONL (default: dataset/test.jsonl)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("evaluate", parents=[common], help="score predictions or fixtures")
    p.add_argument("--fixtures", help="bundled fixture name (prodrop-agreement, "
                                      "possessive-agreement, prodrop-rates)")
    p.add_argument("--predictions", help="predictions JSONL (default: predictions.jsonl)")
    p.add_argument("--bleu-hyp", help="hypothesis corpus, one tokenized sentence per line")
    p.add_argument("--bleu-ref", help="reference corpus, one tokenized sentence per line")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("inject", parents=[common], help="append gender tags to MT input")
    p.add_argument("--in", dest="infile", required=True, help="one sentence per line")
    p.add_argument("--out", dest="outfile", help="output path (default: OUT_DIR/tagged.txt)")
    p.set_defaults(func=cmd_inject)

    p = sub.add_parser("explain", parents=[common], help="explain one classification locally")
    p.add_argument("--examples", help="examples JSONL (default: dataset/test.jsonl)")
    p.add_argument("--index", type=int, default=0, help="example index to explain")
    p.set_defaults(func=cmd_explain)

    sub.add_parser("pipeline", parents=[common],
                   help="run every stage end to end").set_defaults(func=cmd_pipeline)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = Config.load(args.config)
        for override in args.set:
            if "=" not in override:
                raise ConfigError(f"--set expects SECTION.KEY=VALUE, got {override!r}")
            key, value = override.split("=", 1)
            cfg.set(key.strip(), value.strip())
        if args.seed is not None:
            cfg.set("run.seed", str(args.seed))
        if args.jobs is not None:
            cfg.set("run.jobs", str(args.jobs))
        if args.out_dir is not None:
            cfg.set("run.out_dir", args.out_dir)
        out_dir = Path(cfg.get("run", "out_dir"))
        out_dir.mkdir(parents=True, exist_ok=True)
        return args.func(args, cfg, out_dir)
    except (ConfigError, FileNotFoundError) as exc:
        jlog("usage-error", error=str(exc))
        return 2
    except Exception as exc:  # stage failure
        jlog("stage-failure", command=args.command, error=f"{type(exc).__name__}: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
