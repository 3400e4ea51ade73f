"""Command-line entry point: train victims, attack texts, evaluate corpora.

Exit codes are a stable contract: 0 success, 2 input/data error, 3
victim/transport error, 4 lookup error.  Settings merge as flags > config
file > defaults, and every run banner echoes the effective configuration
including the seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .attack import AttackConfig, attack
from .embeddings import ContextParams, load_embeddings
from .errors import DataFormatError, QueryError, TextfrayError
from .evaluate import (
    comparison_markdown,
    config_echo,
    emit_report,
    load_dataset,
    run_evaluation,
)
from .resources import (
    default_embeddings_path,
    default_stopwords_path,
    default_wordnet_dir,
)
from .text import Substitution, load_stopwords, splice, tokenize
from .victim import NaiveBayesVictim, RemoteVictim, train_naive_bayes
from .wordnet import load_wordnet

EXIT_OK = 0
EXIT_DATA = 2
EXIT_VICTIM = 3
EXIT_LOOKUP = 4

_DEFAULTS = {
    "method": "pwws",
    "selection": "deterministic",
    "top_k": 5,
    "sim_threshold": 0.80,
    "alpha": 1.0,
    "beta": 1.0,
    "feedback_lambda": 1.0,
    "window": 3,
    "gamma": 0.5,
    "seed": 42,
    "query_budget": 1000,
    "unk_token": "<unk>",
    "mwsaa_selection": "similarity",
    "samples": 200,
    "workers": 1,
    "format": "json",
}


def _read_config_file(path: str) -> dict:
    """Flat ``key = value`` settings file, ``#`` comments allowed."""
    settings = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise DataFormatError(f"{path}:{lineno}: expected key = value")
                key, value = line.split("=", 1)
                settings[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise DataFormatError(f"cannot read config file {path}: {exc}") from exc
    return settings


def _setting(args, file_cfg: dict, name: str, cast=str):
    value = getattr(args, name, None)
    if value is not None:
        return value
    if name in file_cfg:
        return cast(file_cfg[name])
    return _DEFAULTS.get(name)


def _build_attack_config(args, file_cfg: dict, method: str | None = None) -> AttackConfig:
    return AttackConfig(
        method=method or _setting(args, file_cfg, "method"),
        selection=_setting(args, file_cfg, "selection"),
        top_k=_setting(args, file_cfg, "top_k", int),
        sim_threshold=_setting(args, file_cfg, "sim_threshold", float),
        alpha=_setting(args, file_cfg, "alpha", float),
        beta=_setting(args, file_cfg, "beta", float),
        feedback_lambda=_setting(args, file_cfg, "feedback_lambda", float),
        context=ContextParams(
            window=_setting(args, file_cfg, "window", int),
            gamma=_setting(args, file_cfg, "gamma", float),
        ),
        seed=_setting(args, file_cfg, "seed", int),
        query_budget=_setting(args, file_cfg, "query_budget", int),
        unk_token=_setting(args, file_cfg, "unk_token"),
        mwsaa_selection=_setting(args, file_cfg, "mwsaa_selection"),
    )


def _load_victim(spec: str, timeout: float = 10.0):
    if spec.startswith("nb:"):
        return NaiveBayesVictim.load(spec[3:])
    if spec.startswith("http:"):
        rest = spec[5:]
        if rest.startswith("//"):
            url = "http:" + rest
        elif rest.startswith(("http://", "https://")):
            url = rest
        else:
            url = "http://" + rest
        return RemoteVictim(url, timeout=timeout)
    raise DataFormatError(f"victim spec must start with 'nb:' or 'http:', got {spec!r}")


def _load_resources(args, file_cfg: dict):
    stopwords_path = _setting(args, file_cfg, "stopwords") or default_stopwords_path()
    wordnet_dir = _setting(args, file_cfg, "wordnet") or default_wordnet_dir()
    embeddings_path = _setting(args, file_cfg, "embeddings") or default_embeddings_path()
    return (
        load_stopwords(stopwords_path),
        load_wordnet(wordnet_dir),
        load_embeddings(embeddings_path),
    )


def _banner(cfg: AttackConfig, extra: dict | None = None) -> None:
    echo = config_echo(cfg, extra.get("samples", 0) if extra else 0,
                       extra.get("workers", 1) if extra else 1,
                       extra.get("attack_all", False) if extra else False)
    if extra:
        echo.update(extra)
    pairs = " ".join(f"{k}={v}" for k, v in echo.items())
    print(f"[textfray] {pairs}", file=sys.stderr)


def _dataset_format(path: str, explicit: str | None) -> str:
    if explicit in ("csv", "jsonl"):
        return explicit
    return "jsonl" if str(path).endswith((".jsonl", ".ndjson")) else "csv"


def _render_adversarial(result) -> str:
    """Perturbed text with each substitution shown as ``replacement (original)``."""
    if not result.substitutions:
        return result.adversarial_text
    original_doc = tokenize(result.adversarial_text)
    marked = [
        Substitution(
            position=sub.position,
            original_surface=original_doc.tokens[sub.position].surface,
            replacement_surface=f"{sub.replacement_surface} ({sub.original_surface})",
            replacement_lemma=sub.replacement_lemma,
        )
        for sub in result.substitutions
    ]
    return splice(original_doc, marked)


def cmd_train_victim(args) -> int:
    file_cfg = _read_config_file(args.config) if args.config else {}
    fmt = _dataset_format(args.dataset, args.dataset_format)
    corpus = load_dataset(args.dataset, fmt)
    victim = train_naive_bayes(list(corpus.samples), smoothing=args.smoothing)
    victim.save(args.out)
    del file_cfg
    print(f"trained naive bayes victim on {len(corpus)} samples -> {args.out}")
    return EXIT_OK


def cmd_attack(args) -> int:
    file_cfg = _read_config_file(args.config) if args.config else {}
    cfg = _build_attack_config(args, file_cfg)
    if args.text is not None:
        text = args.text
    else:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    stopwords, db, store = _load_resources(args, file_cfg)
    victim = _load_victim(_setting(args, file_cfg, "victim"))
    _banner(cfg)
    result = attack(victim, db, store, text, cfg, stopwords=stopwords)
    if args.json:
        payload = {
            "status": result.status,
            "original_label": result.original_label,
            "final_label": result.final_label,
            "adversarial_text": result.adversarial_text,
            "queries": result.queries,
            "elapsed": result.elapsed,
            "final_similarity": result.final_similarity,
            "substitutions": [
                {
                    "position": s.substitution.position,
                    "original": s.substitution.original_surface,
                    "replacement": s.substitution.replacement_surface,
                    "lemma": s.substitution.replacement_lemma,
                    "prob_drop": s.prob_drop,
                    "sentence_sim": s.sentence_sim,
                    "queries_after": s.queries_after,
                }
                for s in result.steps
            ],
        }
        print(json.dumps(payload, indent=2))
    else:
        print(f"status: {result.status}")
        print(f"label: {result.original_label} -> {result.final_label}")
        print(f"queries: {result.queries}  similarity: {result.final_similarity:.4f}")
        print(_render_adversarial(result))
    return EXIT_OK


def cmd_evaluate(args) -> int:
    file_cfg = _read_config_file(args.config) if args.config else {}
    method_spec = _setting(args, file_cfg, "method")
    methods = [m.strip() for m in method_spec.split(",") if m.strip()]
    for m in methods:
        if m not in ("pwws", "mwsaa"):
            raise DataFormatError(f"unknown method {m!r} (expected pwws or mwsaa)")
    fmt = _dataset_format(args.dataset, args.dataset_format)
    corpus = load_dataset(args.dataset, fmt)
    stopwords, db, store = _load_resources(args, file_cfg)
    victim_spec = _setting(args, file_cfg, "victim")
    victim = _load_victim(victim_spec)
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    samples = _setting(args, file_cfg, "samples", int)
    workers = _setting(args, file_cfg, "workers", int)
    out_format = _setting(args, file_cfg, "format")

    reports = {}
    for method in methods:
        cfg = _build_attack_config(args, file_cfg, method=method)
        _banner(cfg, extra={"samples": samples, "workers": workers,
                            "attack_all": args.attack_all, "victim": victim_spec})
        report = run_evaluation(
            victim,
            db,
            store,
            corpus,
            cfg,
            sample_limit=samples,
            stopwords=stopwords,
            workers=workers,
            attack_all=args.attack_all,
            victim_name=victim_spec,
        )
        reports[method] = report
        if out_format in ("json", "both"):
            emit_report(report, "json", out_dir / f"report_{method}.json")
        if out_format in ("markdown", "both"):
            emit_report(report, "markdown", out_dir / f"report_{method}.md")
        agg = report.aggregates
        rate = agg["attack_success_rate"]
        rate_s = "n/a" if rate is None else f"{rate:.2f}%"
        avg_q = agg["avg_queries"]
        avg_q_s = "n/a" if avg_q is None else f"{avg_q:.2f}"
        print(
            f"{method}: attacked={agg['attacked_count']} successes={agg['successes']} "
            f"success_rate={rate_s} avg_queries={avg_q_s}"
        )
    if len(reports) > 1:
        comparison = comparison_markdown(reports)
        (out_dir / "comparison.md").write_text(comparison, encoding="utf-8")
        print(f"comparison table -> {out_dir / 'comparison.md'}")
    return EXIT_OK


def cmd_inspect(args) -> int:
    try:
        with open(args.report, encoding="utf-8") as fh:
            report = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DataFormatError(f"cannot read report {args.report}: {exc}") from exc
    match = next((s for s in report.get("samples", []) if s.get("id") == args.sample), None)
    if match is None:
        print(f"no sample with id {args.sample} in {args.report}", file=sys.stderr)
        return EXIT_LOOKUP
    print(f"sample {match['id']}: gold={match['gold_label']} clean={match['clean_label']}")
    result = match.get("result")
    if result is None:
        print("not attacked" + (f" (error: {match['error']})" if match.get("error") else ""))
        return EXIT_OK
    print(f"status: {result['status']}  label: {result['original_label']} -> {result['final_label']}")
    print(f"queries: {result['queries']}  final_similarity: {result['final_similarity']:.4f}")
    subs = result.get("substitutions", [])
    if not subs:
        print("no substitutions")
        return EXIT_OK
    print("substitution trace (applied order):")
    for i, sub in enumerate(subs, start=1):
        drop = sub.get("prob_drop")
        sim = sub.get("sentence_sim")
        print(
            f"  {i}. pos {sub['position']}: {sub['original']} -> {sub['replacement']}"
            f"  dP={'n/a' if drop is None else f'{drop:+.4f}'}"
            f"  sim={'n/a' if sim is None else f'{sim:.4f}'}"
            f"  queries={sub['queries_after']}"
        )
    return EXIT_OK


def _add_attack_flags(p: argparse.ArgumentParser, method_list: bool = False) -> None:
    if method_list:
        p.add_argument("--method", default=None,
                       help="comma-separated method list: pwws, mwsaa")
    else:
        p.add_argument("--method", choices=["pwws", "mwsaa"], default=None)
    p.add_argument("--selection", choices=["deterministic", "randomized"], default=None)
    p.add_argument("--top-k", dest="top_k", type=int, default=None)
    p.add_argument("--sim-threshold", dest="sim_threshold", type=float, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--feedback-lambda", dest="feedback_lambda", type=float, default=None)
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--query-budget", dest="query_budget", type=int, default=None)
    p.add_argument("--unk-token", dest="unk_token", default=None)
    p.add_argument("--mwsaa-selection", dest="mwsaa_selection",
                   choices=["similarity", "max_drop"], default=None)
    p.add_argument("--stopwords", default=None, help="stopword file path")
    p.add_argument("--wordnet", default=None, help="wordnet database directory")
    p.add_argument("--embeddings", default=None, help="word vector file path")
    p.add_argument("--victim", default=None, help="victim spec: nb:<path> or http:<url>")
    p.add_argument("--config", default=None, help="flat key=value settings file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="textfray",
        description="Word-substitution adversarial attacks on text classifiers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train-victim", help="train and serialize the naive bayes victim")
    p.add_argument("--dataset", required=True)
    p.add_argument("--dataset-format", choices=["csv", "jsonl"], default=None)
    p.add_argument("--smoothing", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_train_victim)

    p = sub.add_parser("attack", help="attack a single text")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--text", default=None)
    src.add_argument("--file", default=None)
    p.add_argument("--json", action="store_true", help="emit the result as json")
    _add_attack_flags(p)
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("evaluate", help="attack a corpus and emit reports")
    p.add_argument("--dataset", required=True)
    p.add_argument("--dataset-format", choices=["csv", "jsonl"], default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--format", choices=["json", "markdown", "both"], default=None)
    p.add_argument("--out", default=None, help="output directory")
    p.add_argument("--attack-all", dest="attack_all", action="store_true",
                   help="also attack samples the victim already misclassifies")
    _add_attack_flags(p, method_list=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("inspect", help="print one sample's attack trace from a report")
    p.add_argument("--report", required=True)
    p.add_argument("--sample", type=int, required=True)
    p.set_defaults(func=cmd_inspect)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except QueryError as exc:
        print(f"victim error: {exc}", file=sys.stderr)
        return EXIT_VICTIM
    except (TextfrayError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
