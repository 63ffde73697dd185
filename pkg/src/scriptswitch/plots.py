"""Figures written next to the text reports. Uses the Agg backend; PNG output is byte-stable."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

RC = {
    "font.size": 9,
    "axes.titlesize": 10,
    "axes.labelsize": 9,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "svg.hashsalt": "scriptswitch",
}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=110, metadata={"Software": None})
    plt.close(fig)


def observations_bar(summary_rows, path):
    """Labelled observations per language, largest first (thousands)."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(6, 3))
        names = [row.language.value.lower() for row in summary_rows]
        values = [row.total / 1000 for row in summary_rows]
        ax.bar(names, values, color="0.6", edgecolor="black", hatch="//")
        ax.set_ylabel("Observations (thousands)")
        ax.set_xlabel("Language condition")
        ax.grid(axis="y", linestyle="--", linewidth=0.5)
        _save(fig, path)


def script_mix_boxplot(summaries, path):
    """Prepared boxplots of the per-document Latin-script proportion."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(6, 3.6))
        stats = [
            {
                "label": s.language.value.lower(),
                "med": s.median,
                "q1": s.lower_quartile,
                "q3": s.upper_quartile,
                "whislo": s.lower_whisker,
                "whishi": s.upper_whisker,
                "fliers": [],
            }
            for s in summaries
        ]
        if stats:
            ax.bxp(stats, orientation="horizontal", showfliers=False,
                   boxprops={"linestyle": "--"}, medianprops={"color": "black"})
        ax.set_xlabel("Proportion of words in Latin script")
        ax.set_ylabel("Language condition")
        ax.set_xlim(-0.05, 1.05)
        _save(fig, path)


def selection_heatmap(languages, configs, scores, winners, path):
    """Macro F1 per language (rows) and configuration (columns); winners outlined."""
    data = np.array([[scores[lang][c] for c in configs] for lang in languages], dtype=float)
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(1.1 * len(configs) + 1.5, 0.35 * len(languages) + 1.2))
        im = ax.imshow(data, vmin=0, vmax=1, cmap="Greys", aspect="auto")
        ax.set_xticks(range(len(configs)))
        ax.set_xticklabels([f"{v.value.lower()}\n{s.value.lower()}" for v, s in configs])
        ax.set_yticks(range(len(languages)))
        ax.set_yticklabels([lang.value.lower() for lang in languages])
        for i, lang in enumerate(languages):
            for j, c in enumerate(configs):
                win = c in winners[lang]
                ax.text(j, i, f"{data[i, j]:.2f}", ha="center", va="center", fontsize=7,
                        fontweight="bold" if win else "normal",
                        color="white" if data[i, j] > 0.6 else "black")
        fig.colorbar(im, ax=ax, label="Macro F1")
        _save(fig, path)
