"""Report emission: JSON with full precision, Markdown for presentation.

Markdown tables follow the shapes of the published comparison tables
(MOS columns per system, BLEU-r vs BLEU-c with the larger score bolded,
ASR model rows) plus a per-language BLEU matrix CSV for external plotting.
JSON reports contain only deterministic values, so byte-identical reruns
are possible.
"""

import csv
import json
from dataclasses import dataclass
from pathlib import Path

from .harness import REFERENCE_STD_BAND, AsrBenchRow, MosReport, S2stBleuResult


@dataclass(frozen=True)
class BleuComparisonRow:
    """One externally reported score (bleu_r, never computed here) vs ours."""

    task_name: str
    bleu_r: float
    source: str
    bleu_c: float


def write_json_report(payload: dict, out_dir, name: str) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{name}.json"
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return path


def write_markdown_report(text: str, out_dir, name: str) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{name}.md"
    path.write_text(text, encoding="utf-8")
    return path


def _pm(mean: float, err: float) -> str:
    return f"{mean:.2f} ± {err:.2f}"


# --- S2ST BLEU sampling summary --------------------------------------------

def s2st_bleu_payload(result: S2stBleuResult) -> dict:
    low, high = REFERENCE_STD_BAND
    return {
        "task": result.task_name,
        "plan": {
            "clips_per_iteration": result.plan.clips_per_iteration,
            "iterations": result.plan.iterations,
            "seed": result.plan.seed,
        },
        "per_iteration_scores": list(result.summary.per_iteration_scores),
        "mean_bleu": result.summary.mean,
        "std_bleu": result.summary.std,
        "reference_std_band": {"low": low, "high": high,
                               "within": result.summary.std_in_reference_band},
        "subsets": [list(s) for s in result.subsets],
        "per_iteration_detail": [
            {
                "score": b.score,
                "precisions": list(b.precisions),
                "brevity_penalty": b.brevity_penalty,
                "hyp_len": b.hyp_len,
                "ref_len": b.ref_len,
            }
            for b in result.per_iteration
        ],
    }


def render_s2st_bleu_md(result: S2stBleuResult) -> str:
    lines = [
        f"# S2ST BLEU: {result.task_name}",
        "",
        f"Sampling: {result.plan.clips_per_iteration} clips x "
        f"{result.plan.iterations} iterations, seed {result.plan.seed}",
        "",
        f"**BLEU-c: {_pm(result.summary.mean, result.summary.std)}** (mean ± std over iterations)",
        "",
        "| Iteration | BLEU |",
        "|---|---|",
    ]
    for i, score in enumerate(result.summary.per_iteration_scores):
        lines.append(f"| {i} | {score:.2f} |")
    low, high = REFERENCE_STD_BAND
    flag = "within" if result.summary.std_in_reference_band else "outside"
    lines += ["", f"Std is {flag} the reference band ({low}, {high})."]
    return "\n".join(lines) + "\n"


# --- BLEU-r vs BLEU-c comparison (two-column table) -------------------------

def load_bleu_reference(path) -> list[dict]:
    """Load externally reported scores: JSON array of {task, bleu_r, source}."""
    rows = json.loads(Path(path).read_text(encoding="utf-8"))
    for row in rows:
        for key in ("task", "bleu_r", "source"):
            if key not in row:
                raise ValueError(f"BLEU reference row missing {key!r}: {row}")
    return rows


def render_bleu_comparison_md(rows: list[BleuComparisonRow]) -> str:
    lines = [
        "# S2ST BLEU comparison",
        "",
        "| Task (source) | BLEU-r | BLEU-c |",
        "|---|---|---|",
    ]
    for row in rows:
        r, c = f"{row.bleu_r:.1f}", f"{row.bleu_c:.1f}"
        if row.bleu_c > row.bleu_r:
            c = f"**{c}**"
        elif row.bleu_r > row.bleu_c:
            r = f"**{r}**"
        lines.append(f"| {row.task_name} ({row.source}) | {r} | {c} |")
    return "\n".join(lines) + "\n"


def bleu_comparison_payload(rows: list[BleuComparisonRow]) -> dict:
    return {"rows": [
        {"task": r.task_name, "bleu_r": r.bleu_r, "source": r.source, "bleu_c": r.bleu_c}
        for r in rows
    ]}


# --- ASR benchmark table ----------------------------------------------------

def render_asr_bench_md(rows: list[AsrBenchRow], latency_field: str = "per_clip_mean_s") -> str:
    lines = [
        "# ASR benchmark",
        "",
        "| Model | WER (%) | Average Latency (s) |",
        "|---|---|---|",
    ]
    for row in rows:
        if not row.ok:
            lines.append(f"| {row.model} | FAILED | FAILED |")
            continue
        latency = getattr(row.latency, latency_field)
        lines.append(f"| {row.model} | {row.wer.wer * 100:.2f} | {latency:.3f} |")
    lines += ["", f"Latency column: {latency_field} (per_clip_mean_s / duration_weighted_s / rtf available)."]
    return "\n".join(lines) + "\n"


def asr_bench_payload(rows: list[AsrBenchRow]) -> dict:
    out = []
    for row in rows:
        if not row.ok:
            out.append({"model": row.model, "error": row.error})
            continue
        out.append({
            "model": row.model,
            "wer": row.wer.wer,
            "substitutions": row.wer.substitutions,
            "deletions": row.wer.deletions,
            "insertions": row.wer.insertions,
            "ref_words": row.wer.ref_words,
            "latency": {
                "per_clip_mean_s": row.latency.per_clip_mean_s,
                "duration_weighted_s": row.latency.duration_weighted_s,
                "rtf": row.latency.rtf,
                "n": row.latency.n,
            },
        })
    return {"rows": out}


# --- MOS table --------------------------------------------------------------

_SYSTEM_LABELS = {"gt": "MOS-h (GT)", "vanilla": "MOS-v (Vanilla TTS)", "crossvoice": "MOS-c"}


def render_mos_md(report: MosReport, questions: tuple[int, ...] = (1, 2)) -> str:
    lines = ["# MOS comparison", ""]
    for err_kind in ("std", "ci95"):
        lines += [
            f"## mean ± {err_kind}",
            "",
            "| Translation Task | MOS-h (GT) | MOS-v (Vanilla TTS) | MOS-c |",
            "|---|---|---|---|",
        ]
        for task in report.tasks():
            cells = []
            for system in ("gt", "vanilla", "crossvoice"):
                stats = report.system_stats(task, system, questions)
                if stats is None and system == "gt" and task in report.gt_reference:
                    cells.append(f"{report.gt_reference[task]:.2f}")
                elif stats is None:
                    cells.append("-")
                else:
                    err = stats.std if err_kind == "std" else stats.ci95_halfwidth
                    cells.append(_pm(stats.mean, err))
            lines.append(f"| {task} | {cells[0]} | {cells[1]} | {cells[2]} |")
        lines.append("")
    headline = report.headline()
    if headline is not None:
        lines += [f"Overall MOS-c (unweighted task mean, questions {list(questions)}; "
                  f"interpretive summary): {headline:.1f}", ""]
    return "\n".join(lines)


def mos_payload(report: MosReport, questions: tuple[int, ...] = (1, 2)) -> dict:
    cells = [
        {
            "task": task,
            "system": system,
            "question": question,
            "mean": stats.mean,
            "std": stats.std,
            "ci95_halfwidth": stats.ci95_halfwidth,
            "n": stats.n,
        }
        for (task, system, question), stats in sorted(report.cells.items())
    ]
    summary = []
    for task in report.tasks():
        for system in ("gt", "vanilla", "crossvoice"):
            stats = report.system_stats(task, system, questions)
            if stats is not None:
                summary.append({"task": task, "system": system, "mean": stats.mean,
                                "std": stats.std, "ci95_halfwidth": stats.ci95_halfwidth,
                                "n": stats.n})
    return {
        "cells": cells,
        "system_summary": summary,
        "gt_reference": report.gt_reference,
        "headline_mos": report.headline(questions=questions),
        "headline_questions": list(questions),
    }


# --- Per-language BLEU matrix ----------------------------------------------

def write_bleu_matrix_csv(rows: list[dict], path) -> Path:
    """rows: {language, direction ("X->en" / "en->X"), mean_bleu, std}."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["language", "direction", "mean_bleu", "std"])
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    return path
