"""Rule-based Brahmic-to-Latin romanization and the synthetic script-switched corpus."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Mapping, Sequence

from ..adaptation import AdaptationCorpus, Provenance, assemble, texts_of
from ..errors import DataError
from ..script import BRAHMIC_SCRIPTS, ScriptClass
from ..seeds import rng_for

TABLE_DIR = Path(__file__).with_name("tables")


@dataclass(frozen=True)
class TransliterationTable:
    script: ScriptClass
    rules: tuple[tuple[str, str], ...]
    version: str

    def __post_init__(self):
        sources = [s for s, _ in self.rules]
        if any(not s for s in sources):
            raise DataError(f"{self.script.value} table has an empty rule source")
        if len(set(sources)) != len(sources):
            raise DataError(f"{self.script.value} table has duplicate rule sources")
        object.__setattr__(self, "_lookup", dict(self.rules))
        object.__setattr__(self, "_max_len", max(map(len, sources), default=0))

    def apply(self, text: str) -> str:
        """Greedy longest match, left to right; unmatched characters pass through."""
        lookup, max_len = self._lookup, self._max_len
        out = []
        i, n = 0, len(text)
        while i < n:
            for width in range(min(max_len, n - i), 0, -1):
                piece = text[i : i + width]
                if piece in lookup:
                    out.append(lookup[piece])
                    i += width
                    break
            else:
                out.append(text[i])
                i += 1
        return "".join(out)


def parse_table(lines, script: ScriptClass) -> TransliterationTable:
    version = None
    rules = []
    for lineno, line in enumerate(lines, 1):
        line = line.rstrip("\n")
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            if key.strip() == "version":
                version = value.strip()
            continue
        source, sep, replacement = line.partition("\t")
        if not sep:
            raise DataError(f"{script.value} table line {lineno}: expected source<TAB>replacement")
        rules.append((source, replacement))
    if version is None:
        raise DataError(f"{script.value} table has no version header")
    return TransliterationTable(script, tuple(rules), version)


@lru_cache(maxsize=None)
def load_table(script: ScriptClass) -> TransliterationTable:
    script = ScriptClass(script)
    if script not in BRAHMIC_SCRIPTS:
        raise DataError(f"no transliteration table for script {script.value}")
    path = TABLE_DIR / f"{script.value.lower()}.tsv"
    with path.open(encoding="utf-8") as fh:
        return parse_table(fh, script)


def transliterate(text: str, script: ScriptClass) -> str:
    try:
        script = ScriptClass(script)
    except ValueError:
        raise DataError(f"unsupported script {script!r}") from None
    return load_table(script).apply(text)


def synthesize_augmented_corpus(
    abstracts: Mapping,
    labelled: Sequence,
    sample_fraction: float = 0.5,
    seed: int = 0,
) -> AdaptationCorpus:
    """Originals for every language, romanized copies of a seeded sample for
    non-Latin languages, then the labelled training texts.

    Per non-Latin language ``floor(sample_fraction * n)`` abstracts are drawn
    without replacement and romanized; Latin-native languages contribute
    their abstracts untouched.
    """
    if not 0.0 <= sample_fraction <= 1.0:
        raise DataError(f"sample_fraction must lie in [0, 1], got {sample_fraction}")
    parts = []
    per_language = {}
    for language, docs in abstracts.items():
        docs = list(docs)
        code = language.value
        parts += [(text, f"abstract:{code}") for text in docs]
        n_sampled = 0
        if language.native_script is not ScriptClass.LATIN:
            k = math.floor(sample_fraction * len(docs) + 1e-9)
            picked = sorted(rng_for(seed, f"sample:{code}").choice(len(docs), size=k, replace=False))
            script = language.native_script
            parts += [(transliterate(docs[i], script), f"translit:{code}") for i in picked]
            n_sampled = k
        per_language[code] = {"abstracts": len(docs), "transliterated": n_sampled}
    parts += texts_of(labelled)
    return assemble(
        parts,
        Provenance.SYNTHETIC,
        seed,
        sample_fraction=sample_fraction,
        per_language=per_language,
        labelled=len(labelled),
        table_version=load_table(ScriptClass.DEVANAGARI).version,
    )
