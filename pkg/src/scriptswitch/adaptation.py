"""Adaptation corpora: provenance-tagged document collections used to fit feature models."""

from __future__ import annotations

import gzip
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DataError
from .seeds import rng_for

EVAL_FRACTION = 0.05


class Provenance(str, Enum):
    BASELINE = "BASELINE"
    SYNTHETIC = "SYNTHETIC"
    ORGANIC = "ORGANIC"


TRAIN, EVAL = "train", "eval"


@dataclass(frozen=True)
class Document:
    text: str
    source: str
    partition: str = TRAIN


@dataclass(frozen=True)
class AdaptationCorpus:
    documents: tuple[Document, ...]
    provenance: Provenance
    meta: dict = field(default_factory=dict, compare=False)

    def __len__(self):
        return len(self.documents)

    @property
    def train_texts(self) -> list[str]:
        return [d.text for d in self.documents if d.partition == TRAIN]

    @property
    def eval_texts(self) -> list[str]:
        return [d.text for d in self.documents if d.partition == EVAL]

    def source_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for d in self.documents:
            counts[d.source] = counts.get(d.source, 0) + 1
        return counts


def partition_markers(n: int, seed: int, eval_fraction: float = EVAL_FRACTION) -> list[str]:
    """Seeded train/eval assignment; ``floor(eval_fraction * n)`` documents go to eval."""
    n_eval = math.floor(eval_fraction * n + 1e-9)
    markers = [TRAIN] * n
    if n_eval:
        for i in rng_for(seed, "partition").permutation(n)[:n_eval]:
            markers[int(i)] = EVAL
    return markers


def assemble(parts: Iterable[tuple[str, str]], provenance: Provenance, seed: int, **meta) -> AdaptationCorpus:
    """Build a corpus from ``(text, source)`` pairs in the given order and mark its partition."""
    parts = list(parts)
    markers = partition_markers(len(parts), seed)
    docs = tuple(Document(_clean(text), source, mark) for (text, source), mark in zip(parts, markers))
    return AdaptationCorpus(docs, Provenance(provenance), dict(meta, seed=seed))


def baseline_corpus(abstracts, seed: int) -> AdaptationCorpus:
    """General-domain reference corpus: every abstract as-is, nothing added."""
    parts = [(text, f"abstract:{_code(lang)}") for lang, docs in abstracts.items() for text in docs]
    return assemble(parts, Provenance.BASELINE, seed)


def _code(lang) -> str:
    return getattr(lang, "value", str(lang))


def _clean(text: str) -> str:
    return " ".join(text.split())


def write_corpus(corpus: AdaptationCorpus, path) -> Path:
    """One document per line plus a ``.manifest.json`` sidecar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for doc in corpus.documents:
            fh.write(_clean(doc.text) + "\n")
    segments = []
    for i, doc in enumerate(corpus.documents):
        if segments and segments[-1][0] == doc.source:
            segments[-1][2] = i + 1
        else:
            segments.append([doc.source, i, i + 1])
    manifest = {
        "format": "adaptation-corpus/1",
        "provenance": corpus.provenance.value,
        "documents": len(corpus),
        "partition": {
            "train": sum(d.partition == TRAIN for d in corpus.documents),
            "eval": sum(d.partition == EVAL for d in corpus.documents),
            "eval_indices": [i for i, d in enumerate(corpus.documents) if d.partition == EVAL],
        },
        "sources": segments,
        **{k: v for k, v in sorted(corpus.meta.items())},
    }
    sidecar = manifest_path(path)
    sidecar.write_text(json.dumps(manifest, indent=2, ensure_ascii=False, sort_keys=True) + "\n", encoding="utf-8")
    return sidecar


def manifest_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.stem + ".manifest.json")


def read_corpus(path) -> AdaptationCorpus:
    path = Path(path)
    sidecar = manifest_path(path)
    if not path.is_file() or not sidecar.is_file():
        raise DataError(f"corpus {path} or its manifest is missing")
    manifest = json.loads(sidecar.read_text(encoding="utf-8"))
    if manifest.get("format") != "adaptation-corpus/1":
        raise DataError(f"{sidecar}: unsupported corpus format {manifest.get('format')!r}")
    lines = path.read_text(encoding="utf-8").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) != manifest["documents"]:
        raise DataError(f"{path}: {len(lines)} lines but manifest says {manifest['documents']}")
    sources = [None] * len(lines)
    for source, start, end in manifest["sources"]:
        sources[start:end] = [source] * (end - start)
    eval_idx = set(manifest["partition"]["eval_indices"])
    docs = tuple(
        Document(text, sources[i], EVAL if i in eval_idx else TRAIN) for i, text in enumerate(lines)
    )
    meta = {k: v for k, v in manifest.items() if k not in {"format", "provenance", "documents", "partition", "sources"}}
    return AdaptationCorpus(docs, Provenance(manifest["provenance"]), meta)


def read_documents(path) -> list[str]:
    """Read a one-document-per-line UTF-8 file (``.gz`` accepted); blank lines are skipped."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"document file not found: {path}")
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rt", encoding="utf-8") as fh:
        return [line.strip() for line in fh if line.strip()]


def iter_documents(path) -> Iterable[str]:
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rt", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                yield line.strip()


def texts_of(examples: Sequence) -> list[tuple[str, str]]:
    return [(ex.text, f"labelled:{_code(ex.language)}") for ex in examples]
