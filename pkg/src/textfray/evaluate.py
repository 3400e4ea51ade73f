"""Batch attack execution and the aggregate metric suite.

Loads labeled corpora (csv/jsonl), attacks each sample whose clean
prediction matches its gold label (the rest are recorded, not attacked),
and aggregates attack success rate, query counts, running time, word
replacement rate, accuracy under attack and final similarity into a
versioned report that can be emitted as JSON or markdown tables.
"""

from __future__ import annotations

import csv
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .attack import STATUS_BUDGET, STATUS_SUCCESS, AttackConfig, AttackResult, attack
from .errors import DataFormatError, QueryError
from .text import attackable_positions, tokenize, word_token_count
from .victim import VictimInterface

REPORT_VERSION = 1


@dataclass(frozen=True)
class LabeledCorpus:
    samples: tuple[tuple[str, str], ...]
    labels: frozenset[str]

    def __len__(self) -> int:
        return len(self.samples)


@dataclass
class SampleRecord:
    sample_id: int
    text: str
    gold_label: str
    clean_label: str | None
    originally_correct: bool
    result: AttackResult | None = None
    error: str | None = None
    word_count: int = 0
    alphabetic_tokens: int = 0
    replacement_ratio: float | None = None


@dataclass
class EvalReport:
    config: dict
    records: list[SampleRecord] = field(default_factory=list)
    aggregates: dict = field(default_factory=dict)


def load_dataset(path, format: str) -> LabeledCorpus:
    """Load ``text,label`` csv (RFC-4180) or jsonl with string text/label fields."""
    samples: list[tuple[str, str]] = []
    try:
        return _load_dataset(path, format, samples)
    except OSError as exc:
        raise DataFormatError(f"cannot read dataset {path}: {exc}") from exc


def _load_dataset(path, format: str, samples: list[tuple[str, str]]) -> LabeledCorpus:
    if format == "csv":
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None:
                raise DataFormatError(f"{path}: empty file")
            if "text" not in reader.fieldnames or "label" not in reader.fieldnames:
                raise DataFormatError(f"{path}: header must contain 'text' and 'label'")
            for row in reader:
                text, label = row.get("text"), row.get("label")
                if not text or label is None:
                    raise DataFormatError(f"{path}:{reader.line_num}: missing text or label")
                samples.append((text, label))
    elif format == "jsonl":
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise DataFormatError(f"{path}:{lineno}: invalid json ({exc})") from exc
                text, label = obj.get("text"), obj.get("label")
                if not isinstance(text, str) or not text or not isinstance(label, str):
                    raise DataFormatError(f"{path}:{lineno}: need string 'text' and 'label'")
                samples.append((text, label))
    else:
        raise ValueError(f"unknown dataset format {format!r}")
    if not samples:
        raise DataFormatError(f"{path}: no samples")
    return LabeledCorpus(samples=tuple(samples), labels=frozenset(label for _, label in samples))


def success_rate(successes: int, total: int) -> float | None:
    """Percentage of successful attacks; None when nothing was attacked."""
    if total == 0:
        return None
    if not 0 <= successes <= total:
        raise ValueError("successes must lie in [0, total]")
    return 100.0 * successes / total


def replacement_rate(result: AttackResult, doc) -> float | None:
    """Percent of alphabetic tokens substituted; None without alphabetic tokens."""
    total = word_token_count(doc)
    if total == 0:
        return None
    return 100.0 * len(result.substitutions) / total


def accuracy_under_attack(records: list[SampleRecord]) -> float | None:
    """Gold-label accuracy of the victim on final texts.

    The final text is the adversarial one when the attack succeeded and the
    original otherwise, so a successful attack counts as correct only if the
    flipped label happens to equal gold.
    """
    scored = [r for r in records if r.error is None]
    if not scored:
        return None
    correct = 0
    for rec in scored:
        if rec.result is not None and rec.result.status == STATUS_SUCCESS:
            correct += int(rec.result.final_label == rec.gold_label)
        else:
            correct += int(rec.originally_correct)
    return 100.0 * correct / len(scored)


def _mean(values: list[float]) -> float | None:
    if not values:
        return None
    return sum(values) / len(values)


def run_evaluation(
    victim: VictimInterface,
    db,
    store,
    corpus: LabeledCorpus,
    cfg: AttackConfig,
    sample_limit: int,
    stopwords: frozenset[str] | set[str] = frozenset(),
    workers: int = 1,
    attack_all: bool = False,
    victim_name: str = "victim",
) -> EvalReport:
    """Attack the first ``sample_limit`` samples and aggregate the metrics.

    Samples whose clean prediction misses the gold label are recorded but not
    attacked (unless ``attack_all``).  Victim errors are recorded per sample
    and excluded from the aggregates.  With ``workers > 1`` samples run
    concurrently; per-sample RNG seeds derive from (seed, sample index), so
    results do not depend on scheduling.
    """
    if sample_limit < 1:
        raise ValueError("sample_limit must be >= 1")
    taken = corpus.samples[:sample_limit]

    def evaluate_one(idx: int) -> SampleRecord:
        text, gold = taken[idx]
        doc = tokenize(text)
        rec = SampleRecord(
            sample_id=idx,
            text=text,
            gold_label=gold,
            clean_label=None,
            originally_correct=False,
            word_count=len(attackable_positions(doc, stopwords)),
            alphabetic_tokens=word_token_count(doc),
        )
        try:
            rec.clean_label = victim.predict_proba(text).top_label
            rec.originally_correct = rec.clean_label == gold
            if rec.originally_correct or attack_all:
                rec.result = attack(
                    victim, db, store, text, cfg, stopwords=stopwords, sample_index=idx
                )
                if rec.alphabetic_tokens > 0:
                    rec.replacement_ratio = (
                        len(rec.result.substitutions) / rec.alphabetic_tokens
                    )
        except QueryError as exc:
            rec.error = str(exc)
        return rec

    started = time.perf_counter()
    indices = range(len(taken))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(evaluate_one, indices))
    else:
        records = [evaluate_one(i) for i in indices]
    records.sort(key=lambda r: r.sample_id)
    wall = time.perf_counter() - started

    scored = [r for r in records if r.error is None]
    attacked = [r for r in scored if r.result is not None]
    successes = [r for r in attacked if r.result.status == STATUS_SUCCESS]
    rate = success_rate(len(successes), len(attacked))
    aggregates = {
        "victim": victim_name,
        "samples_evaluated": len(scored),
        "errors": len(records) - len(scored),
        "clean_accuracy": _mean([100.0 * r.originally_correct for r in scored]),
        "attacked_count": len(attacked),
        "successes": len(successes),
        "attack_success_rate": rate,
        "budget_exhausted_count": sum(
            1 for r in attacked if r.result.status == STATUS_BUDGET
        ),
        "avg_queries": _mean([float(r.result.queries) for r in attacked]),
        "avg_elapsed": _mean([r.result.elapsed for r in attacked]),
        "mean_replacement_rate": _mean(
            [100.0 * r.replacement_ratio for r in successes if r.replacement_ratio is not None]
        ),
        "mean_final_similarity": _mean([r.result.final_similarity for r in successes]),
        "accuracy_under_attack": accuracy_under_attack(records),
        "wall_elapsed": wall,
    }
    return EvalReport(config=dict(config_echo(cfg, sample_limit, workers, attack_all)),
                      records=records, aggregates=aggregates)


def config_echo(cfg: AttackConfig, sample_limit: int, workers: int, attack_all: bool) -> dict:
    """Flat, stable-order echo of every effective setting."""
    return {
        "method": cfg.method,
        "selection": cfg.selection,
        "top_k": cfg.top_k,
        "sim_threshold": cfg.sim_threshold,
        "alpha": cfg.alpha,
        "beta": cfg.beta,
        "feedback_lambda": cfg.feedback_lambda,
        "window": cfg.context.window,
        "gamma": cfg.context.gamma,
        "seed": cfg.seed,
        "query_budget": cfg.query_budget,
        "unk_token": cfg.unk_token,
        "mwsaa_selection": cfg.mwsaa_selection,
        "sample_limit": sample_limit,
        "workers": workers,
        "attack_all": attack_all,
    }


def _record_to_dict(rec: SampleRecord) -> dict:
    obj = {
        "id": rec.sample_id,
        "text": rec.text,
        "gold_label": rec.gold_label,
        "clean_label": rec.clean_label,
        "originally_correct": rec.originally_correct,
        "word_count": rec.word_count,
        "alphabetic_tokens": rec.alphabetic_tokens,
        "replacement_ratio": rec.replacement_ratio,
        "error": rec.error,
        "result": None,
    }
    if rec.result is not None:
        res = rec.result
        obj["result"] = {
            "status": res.status,
            "original_label": res.original_label,
            "final_label": res.final_label,
            "adversarial_text": res.adversarial_text,
            "queries": res.queries,
            "elapsed": res.elapsed,
            "final_similarity": res.final_similarity,
            "substitutions": [
                {
                    "position": step.substitution.position,
                    "original": step.substitution.original_surface,
                    "replacement": step.substitution.replacement_surface,
                    "lemma": step.substitution.replacement_lemma,
                    "prob_drop": step.prob_drop,
                    "sentence_sim": step.sentence_sim,
                    "queries_after": step.queries_after,
                }
                for step in res.steps
            ],
        }
    return obj


def report_to_dict(report: EvalReport) -> dict:
    return {
        "report_version": REPORT_VERSION,
        "config": report.config,
        "aggregates": report.aggregates,
        "samples": [_record_to_dict(r) for r in report.records],
    }


def _fmt_pct(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.2f}%"


def _fmt(value: float | None, digits: int = 4) -> str:
    return "n/a" if value is None else f"{value:.{digits}f}"


def report_to_markdown(report: EvalReport) -> str:
    """Aggregate tables in the success/efficiency/replacement-rate layouts."""
    agg = report.aggregates
    victim = agg.get("victim", "victim")
    lines = [
        f"# Attack report — method `{report.config['method']}`",
        "",
        "## Attack success",
        "",
        "| Victim | Total Attacked Instances | Successful Attacked Instances | Attack Success Rate |",
        "| --- | --- | --- | --- |",
        f"| {victim} | {agg['attacked_count']} | {agg['successes']} | "
        f"{_fmt_pct(agg['attack_success_rate'])} |",
        "",
        "## Efficiency",
        "",
        "| Victim | Average Running Time (in second) | Total No of Queries Exceeded | Avg Victim Model Queries |",
        "| --- | --- | --- | --- |",
        f"| {victim} | {_fmt(agg['avg_elapsed'], 7)} | {agg['budget_exhausted_count']} | "
        f"{_fmt(agg['avg_queries'], 2)} |",
        "",
        "## Text quality",
        "",
        "| Victim | Word Replacement Rate | Mean Final Similarity | Accuracy Under Attack | Clean Accuracy |",
        "| --- | --- | --- | --- | --- |",
        f"| {victim} | {_fmt_pct(agg['mean_replacement_rate'])} | "
        f"{_fmt(agg['mean_final_similarity'])} | {_fmt_pct(agg['accuracy_under_attack'])} | "
        f"{_fmt_pct(agg['clean_accuracy'])} |",
        "",
    ]
    return "\n".join(lines)


def comparison_markdown(reports: dict[str, EvalReport]) -> str:
    """Side-by-side method columns for the shared metric rows."""
    methods = list(reports)
    rows = [
        ("Clean Accuracy", "clean_accuracy", _fmt_pct),
        ("Accuracy Under Attack", "accuracy_under_attack", _fmt_pct),
        ("Attack Success Rate", "attack_success_rate", _fmt_pct),
        ("Word Replacement Rate", "mean_replacement_rate", _fmt_pct),
        ("Avg Victim Model Queries", "avg_queries", lambda v: _fmt(v, 2)),
        ("Mean Final Similarity", "mean_final_similarity", lambda v: _fmt(v, 4)),
    ]
    lines = [
        "# Method comparison",
        "",
        "| Metric | " + " | ".join(m.upper() for m in methods) + " |",
        "| --- |" + " --- |" * len(methods),
    ]
    for title, key, fmt in rows:
        cells = [fmt(reports[m].aggregates[key]) for m in methods]
        lines.append(f"| {title} | " + " | ".join(cells) + " |")
    lines.append("")
    return "\n".join(lines)


def emit_report(report: EvalReport, format: str, path) -> None:
    """Write the report as deterministic JSON or markdown tables."""
    if format == "json":
        payload = json.dumps(report_to_dict(report), indent=2) + "\n"
    elif format == "markdown":
        payload = report_to_markdown(report)
    else:
        raise ValueError(f"unknown report format {format!r}")
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(payload)
    except OSError as exc:
        raise DataFormatError(f"cannot write report to {path}: {exc}") from exc
