"""Report rendering: JSON, aligned text tables, TSV, and matplotlib figures
written alongside the delimited output."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .explain import Explanation  # noqa: E402
from .metrics import HUMAN_LABELS, ConfusionMatrix, EvalReport, GenderPRF  # noqa: E402

_PNG_META = {"Software": "genderpivot"}  # fixed so reruns are byte-identical


def render_prf_table(rows: dict[str, GenderPRF]) -> str:
    """Aligned-column text table: one row per system/kind, Masculine and
    Feminine P/R/F1 in percent."""
    header1 = f"{'':24}{'Masculine':>22}    {'Feminine':>22}"
    header2 = f"{'':24}{'P':>6} {'R':>6} {'F1':>6}    {'P':>6} {'R':>6} {'F1':>6}"
    lines = [header1, header2]
    for name, prf in rows.items():
        m, f = prf.masc, prf.fem
        lines.append(
            f"{name:24}"
            f"{100 * m.precision:6.1f} {100 * m.recall:6.1f} {100 * m.f1:6.1f}    "
            f"{100 * f.precision:6.1f} {100 * f.recall:6.1f} {100 * f.f1:6.1f}"
        )
    return "\n".join(lines)


def prf_tsv(rows: dict[str, GenderPRF], manifest_hash: Optional[str] = None) -> str:
    lines = []
    if manifest_hash:
        lines.append(f"# manifest: {manifest_hash}")
    lines.append("row\tgender\tprecision\trecall\tf1")
    for name, prf in rows.items():
        for gender, m in prf.by_gender().items():
            lines.append(f"{name}\t{gender}\t{m.precision:.6f}\t{m.recall:.6f}\t{m.f1:.6f}")
    return "\n".join(lines) + "\n"


def report_record(rows: dict[str, GenderPRF], report: EvalReport) -> dict:
    record: dict = {"prf": {}}
    for name, prf in rows.items():
        record["prf"][name] = {
            gender: {"precision": m.precision, "recall": m.recall, "f1": m.f1}
            for gender, m in prf.by_gender().items()
        }
    if report.confusion is not None:
        record["confusion"] = {f"{pipe}/{human}": count
                               for (pipe, human), count in sorted(report.confusion.counts.items())}
    if report.bleu is not None:
        record["bleu"] = report.bleu
    if report.prodrop_rates:
        record["prodrop_rates"] = {
            gender: {"count": r.count, "dropped": r.dropped, "rate": r.rate}
            for gender, r in sorted(report.prodrop_rates.items())
        }
    return record


def save_prf_figure(rows: dict[str, GenderPRF], path) -> None:
    fig, ax = plt.subplots(figsize=(7, 4))
    metrics = ("precision", "recall", "f1")
    labels = []
    values: list[list[float]] = [[], [], []]
    for name, prf in rows.items():
        for gender, m in prf.by_gender().items():
            labels.append(f"{name}\n{gender}")
            for i, metric in enumerate(metrics):
                values[i].append(100 * getattr(m, metric))
    x = range(len(labels))
    width = 0.27
    for i, metric in enumerate(metrics):
        ax.bar([p + (i - 1) * width for p in x], values[i], width, label=metric.upper() if metric == "f1" else metric.capitalize())
    ax.set_xticks(list(x))
    ax.set_xticklabels(labels, fontsize=8)
    ax.set_ylabel("percent")
    ax.set_ylim(0, 105)
    ax.legend(loc="lower right", fontsize=8)
    ax.set_title("Pronoun gender classification")
    fig.tight_layout()
    fig.savefig(path, metadata=_PNG_META)
    plt.close(fig)


def save_confusion_figure(matrix: ConfusionMatrix, path, title: str = "Agreement with human labels") -> None:
    grid = [[matrix.counts.get((pipe, human), 0) for human in HUMAN_LABELS]
            for pipe in ("MASC", "FEM")]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    im = ax.imshow(grid, cmap="Blues")
    ax.set_xticks(range(3), HUMAN_LABELS)
    ax.set_yticks(range(2), ["MASC", "FEM"])
    ax.set_xlabel("human")
    ax.set_ylabel("pipeline")
    ax.set_title(title)
    for i in range(2):
        for j in range(3):
            ax.text(j, i, str(grid[i][j]), ha="center", va="center", fontsize=9,
                    color="white" if grid[i][j] > max(max(row) for row in grid) / 2 else "black")
    fig.colorbar(im, ax=ax, shrink=0.8)
    fig.tight_layout()
    fig.savefig(path, metadata=_PNG_META)
    plt.close(fig)


def save_prodrop_figure(rates: dict, path) -> None:
    fig, ax = plt.subplots(figsize=(4.5, 3.2))
    genders = sorted(rates)
    ax.bar(genders, [100 * rates[g].rate for g in genders], color=["#4878a8", "#b05a5a"])
    for i, g in enumerate(genders):
        ax.text(i, 100 * rates[g].rate + 1, f"{100 * rates[g].rate:.1f}%", ha="center", fontsize=9)
    ax.set_ylabel("dropped-subject rate (%)")
    ax.set_ylim(0, 110)
    ax.set_title("Subject-pronoun drop rate by gender")
    fig.tight_layout()
    fig.savefig(path, metadata=_PNG_META)
    plt.close(fig)


def save_explanation_figure(explanation: Explanation, path, top_k: int = 10) -> None:
    pairs = list(explanation.token_weights[:top_k])[::-1]
    fig, ax = plt.subplots(figsize=(5, 0.45 * max(4, len(pairs))))
    tokens = [t for t, _ in pairs]
    weights = [w for _, w in pairs]
    ax.barh(range(len(pairs)), weights,
            color=["#4878a8" if w >= 0 else "#b05a5a" for w in weights])
    ax.set_yticks(range(len(pairs)), tokens)
    ax.axvline(0, color="black", linewidth=0.8)
    ax.set_xlabel(f"weight toward {explanation.predicted_class.value}")
    ax.set_title("Local linear explanation")
    fig.tight_layout()
    fig.savefig(path, metadata=_PNG_META)
    plt.close(fig)


def write_report(out_dir, name: str, rows: dict[str, GenderPRF], report: EvalReport,
                 manifest_hash: Optional[str] = None) -> dict[str, Path]:
    """Write JSON + TSV + text table + figures for one evaluation report;
    returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths: dict[str, Path] = {}

    record = report_record(rows, report)
    if manifest_hash:
        record["_manifest"] = manifest_hash
    paths["json"] = out / f"{name}.json"
    paths["json"].write_text(json.dumps(record, sort_keys=True, ensure_ascii=False, indent=2) + "\n",
                             encoding="utf-8")
    paths["tsv"] = out / f"{name}.tsv"
    paths["tsv"].write_text(prf_tsv(rows, manifest_hash), encoding="utf-8")

    text_lines = [render_prf_table(rows)]
    if report.bleu is not None:
        text_lines.append(f"\nBLEU: {report.bleu:.2f}")
    if report.prodrop_rates:
        text_lines.append("\nProdrop rates:")
        for gender, r in sorted(report.prodrop_rates.items()):
            text_lines.append(f"  {gender}: {r.count} occurrences, {r.dropped} dropped, {100 * r.rate:.1f}%")
    paths["txt"] = out / f"{name}.txt"
    body = "\n".join(text_lines) + "\n"
    if manifest_hash:
        body = f"# manifest: {manifest_hash}\n" + body
    paths["txt"].write_text(body, encoding="utf-8")

    if rows:
        paths["prf_png"] = out / f"{name}_prf.png"
        save_prf_figure(rows, paths["prf_png"])
    if report.confusion is not None:
        paths["confusion_png"] = out / f"{name}_confusion.png"
        save_confusion_figure(report.confusion, paths["confusion_png"])
    if report.prodrop_rates:
        paths["prodrop_png"] = out / f"{name}_prodrop.png"
        save_prodrop_figure(report.prodrop_rates, paths["prodrop_png"])
    return paths
