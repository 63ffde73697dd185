"""Character n-gram language profiles, out-of-place rank detection, and organic mining."""

from __future__ import annotations

import json
import unicodedata
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .adaptation import AdaptationCorpus, Provenance, assemble
from .corpus import LanguageCondition
from .errors import DataError, ModelFormatError
from .script import SCRIPT_RANGES, ScriptClass, char_script

PROFILE_FORMAT = "langid-profile/1"
PROFILE_VERSION = "oop-1-3gram-1"
DEFAULT_K = 300
NGRAM_ORDERS = (1, 2, 3)
PAD = "_"
MIN_PROFILE_CHARS = 100
MIN_DETECT_CHARS = 20


def _build_translation() -> dict:
    table = {ord(PAD): " "}
    for cp in range(0xA0):
        if unicodedata.category(chr(cp)) == "Cc" and not chr(cp).isspace():
            table[cp] = None
    for lo, hi in SCRIPT_RANGES[ScriptClass.LATIN]:
        for cp in range(lo, hi + 1):
            ch = chr(cp)
            if char_script(ch) is ScriptClass.LATIN and ch.lower() != ch:
                table[cp] = ch.lower()
    return table


# Latin uppercase -> lowercase, control characters dropped, pad character to space.
_NORMALIZE = _build_translation()


def normalize(text: str) -> str:
    """Lowercase Latin letters, drop control characters, collapse whitespace."""
    return " ".join(text.translate(_NORMALIZE).split())


def ngram_counts(text: str, orders: Sequence[int] = NGRAM_ORDERS) -> Counter:
    """Counts of n-grams over each word padded with ``_`` on both sides.

    Expects normalized text. Words are handled independently, so repeating a
    document scales every count without adding new n-grams.
    """
    grams = []
    for word in text.split():
        padded = f"{PAD}{word}{PAD}"
        for n in orders:
            grams.extend(padded[i : i + n] for i in range(len(padded) - n + 1))
    return Counter(grams)


def rank_ngrams(counts: Mapping[str, int], k: int) -> list[str]:
    """Top ``k`` n-grams by frequency, ties broken lexicographically."""
    return [g for g, _ in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:k]]


@dataclass(frozen=True)
class LanguageProfile:
    language: LanguageCondition
    ngram_ranks: tuple[tuple[str, int], ...]
    total_ngrams_seen: int
    version: str = PROFILE_VERSION

    @property
    def k(self) -> int:
        return len(self.ngram_ranks)

    @property
    def rank_of(self) -> dict[str, int]:
        cached = self.__dict__.get("_rank_of")
        if cached is None:
            cached = dict(self.ngram_ranks)
            object.__setattr__(self, "_rank_of", cached)
        return cached

    def to_dict(self) -> dict:
        return {
            "format": PROFILE_FORMAT,
            "version": self.version,
            "language": self.language.value,
            "total_ngrams_seen": self.total_ngrams_seen,
            "ngrams": [g for g, _ in self.ngram_ranks],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "LanguageProfile":
        if data.get("format") != PROFILE_FORMAT:
            raise ModelFormatError(f"unsupported profile format {data.get('format')!r}")
        grams = data["ngrams"]
        return cls(
            LanguageCondition.parse(data["language"]),
            tuple((g, i + 1) for i, g in enumerate(grams)),
            int(data["total_ngrams_seen"]),
            data["version"],
        )


def build_profile(texts: Iterable[str], language, k: int = DEFAULT_K) -> LanguageProfile:
    language = LanguageCondition.parse(language)
    normalized = [normalize(t) for t in texts]
    if sum(len(t) for t in normalized) < MIN_PROFILE_CHARS:
        raise DataError(f"{language.value}: insufficient text to build a profile (< {MIN_PROFILE_CHARS} chars)")
    counts: Counter = Counter()
    for t in normalized:
        counts.update(ngram_counts(t))
    ranked = rank_ngrams(counts, k)
    return LanguageProfile(language, tuple((g, i + 1) for i, g in enumerate(ranked)), sum(counts.values()))


def out_of_place(doc_ranking: Sequence[str], profile: LanguageProfile) -> int:
    """Sum of rank displacements; n-grams missing from the profile cost its size K."""
    ranks = profile.rank_of
    penalty = profile.k
    total = 0
    for r_doc, gram in enumerate(doc_ranking, 1):
        r_lang = ranks.get(gram)
        total += penalty if r_lang is None else abs(r_doc - r_lang)
    return total


@dataclass(frozen=True)
class DetectionResult:
    candidates: tuple[tuple[LanguageCondition, int], ...]
    margin: int

    @property
    def top(self) -> LanguageCondition:
        return self.candidates[0][0]


def detect_language(text: str, profiles: Sequence[LanguageProfile]) -> DetectionResult:
    if len(profiles) < 2:
        raise DataError("language detection needs at least two profiles")
    norm = normalize(text)
    if len(norm) < MIN_DETECT_CHARS:
        raise DataError(f"text too short for detection ({len(norm)} < {MIN_DETECT_CHARS} chars)")
    k = max(p.k for p in profiles)
    doc_ranking = rank_ngrams(ngram_counts(norm), k)
    scored = sorted(((p.language, out_of_place(doc_ranking, p)) for p in profiles), key=lambda c: (c[1], c[0].value))
    return DetectionResult(tuple(scored), scored[1][1] - scored[0][1])


def mine_organic(
    stream: Iterable[str],
    target,
    profiles: Sequence[LanguageProfile],
    min_margin: float = 0,
    min_length: int = MIN_DETECT_CHARS,
    max_docs: int | None = None,
    seed: int = 0,
    cache: dict | None = None,
) -> AdaptationCorpus:
    """Keep stream documents detected as ``target`` with enough margin and length.

    Output preserves stream order and stops once ``max_docs`` are kept.
    ``cache`` (text -> DetectionResult) lets several targets share one scoring
    pass over the same stream and profiles.
    """
    target = LanguageCondition.parse(target)
    if min_margin < 0 or min_length < 0 or (max_docs is not None and max_docs < 0):
        raise DataError("mining thresholds must be non-negative")
    kept, rejected = [], 0
    for doc in stream:
        if max_docs is not None and len(kept) >= max_docs:
            break
        norm_len = len(normalize(doc))
        if norm_len < max(min_length, MIN_DETECT_CHARS):
            rejected += 1
            continue
        result = cache.get(doc) if cache is not None else None
        if result is None:
            result = detect_language(doc, profiles)
            if cache is not None:
                cache[doc] = result
        if result.top is target and result.margin >= min_margin:
            kept.append(doc)
        else:
            rejected += 1
    return assemble(
        [(doc, f"organic:{target.value}") for doc in kept],
        Provenance.ORGANIC,
        seed,
        target=target.value,
        retained=len(kept),
        rejected=rejected,
        min_margin=min_margin,
        min_length=min_length,
        max_docs=max_docs,
    )


def save_profiles(profiles: Sequence[LanguageProfile], path) -> None:
    payload = {"format": PROFILE_FORMAT, "profiles": [p.to_dict() for p in profiles]}
    Path(path).write_text(json.dumps(payload, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")


def load_profiles(path) -> list[LanguageProfile]:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ModelFormatError(f"cannot read profiles from {path}: {exc}") from exc
    if payload.get("format") != PROFILE_FORMAT:
        raise ModelFormatError(f"{path}: unsupported profile format {payload.get('format')!r}")
    return [LanguageProfile.from_dict(p) for p in payload["profiles"]]
