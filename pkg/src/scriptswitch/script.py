"""Word-level Unicode script classification and Latin-script proportions per document."""

from __future__ import annotations

import logging
import unicodedata
from functools import lru_cache
from collections import Counter, defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

log = logging.getLogger(__name__)


class ScriptClass(str, Enum):
    LATIN = "Latin"
    DEVANAGARI = "Devanagari"
    GUJARATI = "Gujarati"
    KANNADA = "Kannada"
    MALAYALAM = "Malayalam"
    TAMIL = "Tamil"
    TELUGU = "Telugu"
    OTHER = "OtherScript"
    NEUTRAL = "Neutral"


BRAHMIC_SCRIPTS = (
    ScriptClass.DEVANAGARI,
    ScriptClass.GUJARATI,
    ScriptClass.KANNADA,
    ScriptClass.MALAYALAM,
    ScriptClass.TAMIL,
    ScriptClass.TELUGU,
)

# (first, last) code point ranges, inclusive
SCRIPT_RANGES = {
    ScriptClass.LATIN: [
        (0x0041, 0x005A), (0x0061, 0x007A), (0x00AA, 0x00AA), (0x00BA, 0x00BA),
        (0x00C0, 0x024F), (0x0250, 0x02AF), (0x1D00, 0x1D7F), (0x1E00, 0x1EFF),
        (0x2C60, 0x2C7F), (0xA720, 0xA7FF), (0xAB30, 0xAB6F), (0xFF21, 0xFF3A), (0xFF41, 0xFF5A),
    ],
    ScriptClass.DEVANAGARI: [(0x0900, 0x097F), (0xA8E0, 0xA8FF)],
    ScriptClass.GUJARATI: [(0x0A80, 0x0AFF)],
    ScriptClass.TAMIL: [(0x0B80, 0x0BFF), (0x11FC0, 0x11FFF)],
    ScriptClass.TELUGU: [(0x0C00, 0x0C7F)],
    ScriptClass.KANNADA: [(0x0C80, 0x0CFF)],
    ScriptClass.MALAYALAM: [(0x0D00, 0x0D7F)],
}

# Combining marks that inherit the script of their base; never counted.
_INHERITED = [(0x0300, 0x036F), (0x1AB0, 0x1AFF), (0x1DC0, 0x1DFF), (0x20D0, 0x20FF), (0xFE20, 0xFE2F)]

_PRIORITY = [ScriptClass.LATIN, *BRAHMIC_SCRIPTS, ScriptClass.OTHER]


def _in_ranges(cp: int, ranges) -> bool:
    return any(lo <= cp <= hi for lo, hi in ranges)


@lru_cache(maxsize=65536)
def char_script(ch: str) -> ScriptClass | None:
    """Script of one alphabetic code point, or None for non-alphabetic/inherited ones."""
    if unicodedata.category(ch)[0] not in "LM":
        return None
    cp = ord(ch)
    if _in_ranges(cp, _INHERITED):
        return None
    for script, ranges in SCRIPT_RANGES.items():
        if _in_ranges(cp, ranges):
            return script
    return ScriptClass.OTHER


def classify_word_script(word: str) -> ScriptClass:
    """Majority script over the token's alphabetic code points.

    Latin wins any tie it is part of; remaining ties follow ``_PRIORITY``.
    A token without alphabetic code points is Neutral.
    """
    counts = Counter(s for s in map(char_script, word) if s is not None)
    if not counts:
        return ScriptClass.NEUTRAL
    best = max(counts.values())
    for script in _PRIORITY:
        if counts.get(script) == best:
            return script
    raise AssertionError("unreachable")


def strip_punctuation(token: str) -> str:
    start, end = 0, len(token)
    while start < end and unicodedata.category(token[start])[0] == "P":
        start += 1
    while end > start and unicodedata.category(token[end - 1])[0] == "P":
        end -= 1
    return token[start:end]


def word_scripts(text: str) -> list[ScriptClass]:
    """Script class of every non-Neutral word in ``text``."""
    out = []
    for token in text.split():
        script = classify_word_script(strip_punctuation(token))
        if script is not ScriptClass.NEUTRAL:
            out.append(script)
    return out


def latin_proportion(text: str) -> float | None:
    """Share of counted words written in Latin script; None when nothing is countable."""
    scripts = word_scripts(text)
    if not scripts:
        return None
    return sum(s is ScriptClass.LATIN for s in scripts) / len(scripts)


@dataclass(frozen=True)
class ScriptMixSummary:
    language: object
    median: float
    lower_quartile: float
    upper_quartile: float
    lower_whisker: float
    upper_whisker: float
    n: int
    any_latin_fraction: float

    def to_record(self) -> dict:
        lang = getattr(self.language, "value", self.language)
        return {
            "language": lang,
            "n": self.n,
            "lower_whisker": self.lower_whisker,
            "lower_quartile": self.lower_quartile,
            "median": self.median,
            "upper_quartile": self.upper_quartile,
            "upper_whisker": self.upper_whisker,
            "any_latin_fraction": self.any_latin_fraction,
        }


def summarize_proportions(language, proportions: Sequence[float]) -> ScriptMixSummary:
    """Five-number summary with inclusive linear-interpolation quartiles; whiskers are min/max."""
    values = np.asarray(proportions, dtype=float)
    if values.size == 0:
        raise ValueError(f"{language}: no defined proportions to summarize")
    q1, med, q3 = np.percentile(values, [25, 50, 75], method="linear")
    return ScriptMixSummary(
        language=language,
        median=float(med),
        lower_quartile=float(q1),
        upper_quartile=float(q3),
        lower_whisker=float(values.min()),
        upper_whisker=float(values.max()),
        n=int(values.size),
        any_latin_fraction=float(np.mean(values > 0)),
    )


def script_switch_summary(examples: Iterable) -> dict:
    """Per-language Latin-proportion summaries over labelled examples.

    Documents with no countable words are skipped. Languages left with zero
    documents are dropped from the result and logged as a warning.
    """
    by_language = defaultdict(list)
    seen = []
    for ex in examples:
        if ex.language not in by_language:
            seen.append(ex.language)
        props = by_language[ex.language]
        p = latin_proportion(ex.text)
        if p is not None:
            props.append(p)
    out = {}
    for language in seen:
        props = by_language[language]
        if not props:
            log.warning("%s: no document with a defined Latin proportion; omitted", getattr(language, "value", language))
            continue
        out[language] = summarize_proportions(language, props)
    return out
