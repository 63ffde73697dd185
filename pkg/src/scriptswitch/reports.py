"""Structured records and aligned text tables for every report family."""

from __future__ import annotations

import json
from pathlib import Path

from .corpus import LABEL_ORDER, Label


def write_json(path, payload) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, ensure_ascii=False, sort_keys=True) + "\n", encoding="utf-8")


def write_tsv(path, header, rows) -> None:
    lines = ["\t".join(header)] + ["\t".join(str(x) for x in row) for row in rows]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def aligned(header, rows) -> str:
    cells = [list(map(str, header))] + [[str(x) for x in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]

    def fmt(row):
        return "  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(row, widths))).rstrip()

    rule = "-" * len(fmt(cells[0]))
    return "\n".join([rule, fmt(cells[0]), rule, *map(fmt, cells[1:]), rule]) + "\n"


def distribution_rows(distributions: dict, binary: set) -> list:
    """Rows of the class-distribution table; labels a language cannot have print as '-'."""
    rows = []
    for language, dist in distributions.items():
        row = [language.value.lower()]
        for label in LABEL_ORDER:
            if label is Label.TRANS and language in binary:
                row.append("-")
            else:
                row.append(f"{dist[label]:.2f}")
        rows.append(row)
    return rows


def summary_rows(summary) -> list:
    return [
        [row.language.value.lower(), row.total, *(row.label_counts.get(lab, 0) for lab in LABEL_ORDER)]
        for row in summary
    ]


def script_mix_rows(summaries) -> list:
    return [
        [
            s.language.value.lower(), s.n,
            f"{s.lower_whisker:.6f}", f"{s.lower_quartile:.6f}", f"{s.median:.6f}",
            f"{s.upper_quartile:.6f}", f"{s.upper_whisker:.6f}", f"{s.any_latin_fraction:.6f}",
        ]
        for s in summaries
    ]


SCRIPT_MIX_HEADER = ["language", "n", "lower_whisker", "lower_quartile", "median",
                     "upper_quartile", "upper_whisker", "any_latin"]


def selection_rows(languages, configs, scores, winners) -> list:
    rows = []
    for lang in languages:
        row = [lang.value.lower()]
        for c in configs:
            mark = "*" if c in winners[lang] else " "
            row.append(f"{scores[lang][c]:.4f}{mark}")
        rows.append(row)
    return rows


def selection_header(configs) -> list:
    return ["language"] + [f"{v.value.lower()}-{s.value.lower()}" for v, s in configs]
