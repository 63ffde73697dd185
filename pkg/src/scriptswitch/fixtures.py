"""Deterministic desk-scale fixture corpora.

Every language gets a pseudo-lexicon: a handful of real function words plus
generated words whose syllable statistics are language specific, so that
languages sharing a script (HIN/MAR, KAN/TCY) remain separable by n-gram
statistics alone. Class cue words are generated pseudo-words; no real abusive
vocabulary is shipped.
"""

from __future__ import annotations

import json
import math
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import LABEL_ORDER, Label, LabeledExample, LanguageCondition, write_dataset
from .script import ScriptClass
from .seeds import rng_for
from .translit import transliterate
from .translit.tablegen import BLOCK_BASE, CONSONANTS, VOWEL_SIGNS, VIRAMA

L = LanguageCondition

# Labelled observations per language as published; fixtures scale these down.
PUBLISHED_OBSERVATIONS = {
    L.KAN: 12220, L.TEL: 10990, L.GUJ: 9859, L.MAL: 4327, L.MAR: 4250,
    L.ENG: 3956, L.TAM: 3328, L.HIN: 2880, L.ESP: 1586, L.TCY: 730,
}

# NONE / HOMO / TRANS shares per language.
PUBLISHED_DISTRIBUTION = {
    L.ENG: (0.94, 0.06, 0.00), L.ESP: (0.57, 0.22, 0.22), L.GUJ: (0.47, 0.28, 0.25),
    L.HIN: (0.95, 0.02, 0.04), L.KAN: (0.44, 0.27, 0.28), L.MAL: (0.79, 0.16, 0.06),
    L.MAR: (0.73, 0.16, 0.11), L.TAM: (0.77, 0.17, 0.06), L.TCY: (0.74, 0.26, 0.0),
    L.TEL: (0.39, 0.32, 0.30),
}

ENG_PUBLISHED_COUNTS = {Label.NONE: 3496, Label.HOMO: 221, Label.TRANS: 9}

# (share of fully romanized comments, per-word romanization rate inside native comments)
SCRIPT_MIX = {
    L.GUJ: (0.04, 0.03), L.KAN: (0.06, 0.03), L.TAM: (0.10, 0.05), L.TEL: (0.05, 0.03),
    L.MAR: (0.30, 0.10), L.MAL: (0.50, 0.20), L.HIN: (0.80, 0.10), L.TCY: (0.85, 0.10),
}

FUNCTION_WORDS = {
    L.ENG: ("the and is of to in that it for you this was with on are they but not have be at "
            "one all what so can just like people video really love good know think about more "
            "there their would when who very because how time also only make should them well "
            "world life never always same these many even much thank please here great still").split(),
    L.ESP: ("el la de que y en los las un una por con para es no se lo como más pero sus le ya "
            "muy todo esta este son porque cuando gente vida amor video bien mundo siempre nunca "
            "también hay ser hacer tiene puede gracias aquí mucho nada otro entre sobre donde "
            "quien mismo cada bueno tiempo hombre mujer persona respeto").split(),
    L.HIN: "है और के में की नहीं यह तो भी से को का हैं पर क्या".split(),
    L.MAR: "आहे आणि हे नाही च्या ला तर पण काय मी तू आम्ही होते या त्या".split(),
    L.GUJ: "અને છે માં નથી આ તે પણ શું હું તમે".split(),
    L.KAN: "ಮತ್ತು ಇದು ಅವರು ಒಂದು ಈ ಆ ನಾನು ಇಲ್ಲ ಹೌದು ಬಗ್ಗೆ".split(),
    L.TCY: "ಬೊಕ್ಕ ಉಂಡು ಇಜ್ಜಿ ಯಾನ್ ಈರ್ ಎಂಚ ದಾನೆ ಅವು ಮಲ್ಪು ಪನ್ಪೆ".split(),
    L.TAM: "மற்றும் இது அது ஒரு இல்லை நான் நீ என்ன எனக்கு ஆனால்".split(),
    L.TEL: "మరియు ఇది అది ఒక లేదు నేను మీరు ఏమి కానీ చాలా".split(),
    L.MAL: "ഒരു ഇത് അത് ഇല്ല ഞാൻ നീ എന്ത് പക്ഷേ വളരെ ആണ്".split(),
}

LATIN_LETTERS = "abcdefghijklmnopqrstuvwxyz"
LATIN_VOWELS = "aeiou"


def ascii_fold(text: str) -> str:
    """Informal romanization: drop diacritics from a scholarly transliteration."""
    decomposed = unicodedata.normalize("NFD", text)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


def romanize_informal(text: str, language: LanguageCondition) -> str:
    if language.native_script is ScriptClass.LATIN:
        return text
    return ascii_fold(transliterate(text, language.native_script))


@dataclass
class Lexicon:
    language: LanguageCondition
    words: list
    probs: np.ndarray
    cues: dict = field(default_factory=dict)

    def sample(self, rng, k: int) -> list:
        return list(rng.choice(self.words, size=k, p=self.probs))


def _zipf(n: int, exponent: float = 1.0) -> np.ndarray:
    w = 1.0 / np.arange(1, n + 1) ** exponent
    return w / w.sum()


def _brahmic_word_maker(language: LanguageCondition, rng):
    script = language.native_script
    base = BLOCK_BASE[script]
    present = [o for o in CONSONANTS if _assigned(base + o)]
    signs = [o for o in VOWEL_SIGNS if o <= 0x4C and _assigned(base + o) and o not in (0x43, 0x44, 0x45, 0x49)]
    c_weights = rng.dirichlet(np.full(len(present), 0.6))
    s_weights = rng.dirichlet(np.full(len(signs) + 1, 0.8))

    def syllable():
        c = present[rng.choice(len(present), p=c_weights)]
        out = chr(base + c)
        if rng.random() < 0.12:
            c2 = present[rng.choice(len(present), p=c_weights)]
            out += chr(base + VIRAMA) + chr(base + c2)
        s = rng.choice(len(signs) + 1, p=s_weights)
        if s < len(signs):
            out += chr(base + signs[s])
        return out

    def word():
        return "".join(syllable() for _ in range(rng.integers(1, 4)))

    return word


def _latin_word_maker(rng):
    consonants = [c for c in LATIN_LETTERS if c not in LATIN_VOWELS]
    c_weights = rng.dirichlet(np.full(len(consonants), 0.7))

    def word():
        parts = []
        for _ in range(rng.integers(2, 4)):
            parts.append(consonants[rng.choice(len(consonants), p=c_weights)])
            parts.append(LATIN_VOWELS[rng.integers(len(LATIN_VOWELS))])
        if rng.random() < 0.5:
            parts.append(consonants[rng.choice(len(consonants), p=c_weights)])
        return "".join(parts)

    return word


def _assigned(cp: int) -> bool:
    try:
        unicodedata.name(chr(cp))
        return True
    except ValueError:
        return False


def build_lexicon(language: LanguageCondition, seed: int, size: int = 300, n_cues: int = 8) -> Lexicon:
    rng = rng_for(seed, f"lexicon:{language.value}")
    if language.native_script is ScriptClass.LATIN:
        make = _latin_word_maker(rng)
    else:
        make = _brahmic_word_maker(language, rng)
    words = list(FUNCTION_WORDS[language])
    seen = set(words)
    while len(words) < size:
        w = make()
        if w not in seen:
            seen.add(w)
            words.append(w)
    cues = {}
    for label in (Label.HOMO, Label.TRANS):
        group = []
        while len(group) < n_cues:
            w = make()
            if w not in seen:
                seen.add(w)
                group.append(w)
        cues[label] = group
    return Lexicon(language, words, _zipf(len(words)), cues)


def _sentence(lex: Lexicon, rng, n_words: int, label: Label | None, cue_rate: float = 0.9) -> list:
    words = lex.sample(rng, n_words)
    if label in (Label.HOMO, Label.TRANS) and rng.random() < cue_rate:
        for _ in range(rng.integers(1, 3)):
            words.insert(int(rng.integers(len(words) + 1)), lex.cues[label][rng.integers(len(lex.cues[label]))])
    elif label is Label.NONE and rng.random() < 0.05:
        pool = lex.cues[Label.HOMO] + lex.cues[Label.TRANS]
        words.insert(int(rng.integers(len(words) + 1)), pool[rng.integers(len(pool))])
    return words


def make_comment(lex: Lexicon, rng, label: Label) -> str:
    """One social-media style comment; non-Latin languages are script-switched at their own rates."""
    words = _sentence(lex, rng, int(rng.integers(5, 13)), label)
    language = lex.language
    if language.native_script is ScriptClass.LATIN:
        return " ".join(words)
    full_rate, word_rate = SCRIPT_MIX[language]
    if rng.random() < full_rate:
        return romanize_informal(" ".join(words), language)
    cues = set(lex.cues[Label.HOMO]) | set(lex.cues[Label.TRANS])
    out = []
    for w in words:
        # class cues are romanized far more often than other words
        rate = 0.5 if w in cues else word_rate
        out.append(romanize_informal(w, language) if rng.random() < rate else w)
    return " ".join(out)


def _label_counts(language: LanguageCondition, n: int) -> dict:
    shares = PUBLISHED_DISTRIBUTION[language]
    counts = {label: math.floor(share * n) for label, share in zip(LABEL_ORDER, shares)}
    counts[Label.NONE] += n - sum(counts.values())
    if language.is_binary:
        counts.pop(Label.TRANS)
    return counts


def labelled_dataset(language: LanguageCondition, n: int, seed: int, lex: Lexicon | None = None) -> list:
    lex = lex or build_lexicon(language, seed)
    rng = rng_for(seed, f"labelled:{language.value}")
    labels = [label for label, c in _label_counts(language, n).items() for _ in range(c)]
    labels = [labels[i] for i in rng.permutation(len(labels))]
    return [
        LabeledExample(f"{language.value}-{i}", make_comment(lex, rng, label), language, label)
        for i, label in enumerate(labels)
    ]


def abstracts(language: LanguageCondition, n: int, seed: int, lex: Lexicon | None = None) -> list:
    """Encyclopedic-register documents in the native script; class cues are rare."""
    lex = lex or build_lexicon(language, seed)
    rng = rng_for(seed, f"abstracts:{language.value}")
    docs = []
    pool = lex.cues[Label.HOMO] + lex.cues[Label.TRANS]
    for _ in range(n):
        words = lex.sample(rng, int(rng.integers(15, 40)))
        if rng.random() < 0.3:
            words.insert(int(rng.integers(len(words) + 1)), pool[rng.integers(len(pool))])
        docs.append(" ".join(words))
    return docs


def organic_stream(lexicons: dict, n: int, seed: int) -> list:
    """Raw social-media stream: script-switched posts from every language plus noise."""
    rng = rng_for(seed, "stream")
    languages = list(lexicons)
    docs = []
    for _ in range(n):
        u = rng.random()
        if u < 0.08:
            docs.append(" ".join(str(rng.integers(0, 999)) for _ in range(rng.integers(1, 4))))
            continue
        language = languages[rng.integers(len(languages))]
        lex = lexicons[language]
        label = LABEL_ORDER[rng.choice(3, p=(0.8, 0.1, 0.1))]
        if language.is_binary and label is Label.TRANS:
            label = Label.HOMO
        words = _sentence(lex, rng, int(rng.integers(6, 16)), label)
        text = " ".join(words)
        if language.native_script is not ScriptClass.LATIN and rng.random() < 0.6:
            text = romanize_informal(text, language)
        docs.append(text)
    return docs


def langid_fixture(seed: int = 0, n_train: int = 300, n_heldout: int = 500, min_chars: int = 40):
    """Native-script train and held-out sentences for all ten languages."""
    train, heldout = {}, {}
    for language in LanguageCondition:
        lex = build_lexicon(language, seed)
        rng = rng_for(seed, f"langid:{language.value}")

        def sentence():
            while True:
                s = " ".join(_sentence(lex, rng, int(rng.integers(6, 14)), None))
                if len(s) >= min_chars:
                    return s

        train[language] = [sentence() for _ in range(n_train)]
        heldout[language] = [sentence() for _ in range(n_heldout)]
    return train, heldout


@dataclass
class FixtureBundle:
    labelled: dict
    abstracts: dict
    stream: list
    seed: int


def build_fixture(seed: int = 0, scale: float = 0.1, n_abstracts: int = 200, n_stream: int = 1500,
                  languages=None) -> FixtureBundle:
    """Labelled data sized ``scale`` x the published per-language counts, plus abstracts and a stream."""
    languages = list(languages or LanguageCondition)
    lexicons = {lang: build_lexicon(lang, seed) for lang in languages}
    labelled = {
        lang: labelled_dataset(lang, max(30, round(PUBLISHED_OBSERVATIONS[lang] * scale)), seed, lexicons[lang])
        for lang in languages
    }
    abstract_docs = {lang: abstracts(lang, n_abstracts, seed, lexicons[lang]) for lang in languages}
    return FixtureBundle(labelled, abstract_docs, organic_stream(lexicons, n_stream, seed), seed)


def write_fixture(directory, seed: int = 0, scale: float = 0.1, n_abstracts: int = 200, n_stream: int = 1500,
                  languages=None) -> Path:
    """Write datasets, abstracts, stream and a matching experiment config; returns the config path."""
    directory = Path(directory)
    bundle = build_fixture(seed, scale, n_abstracts, n_stream, languages)
    (directory / "data").mkdir(parents=True, exist_ok=True)
    (directory / "abstracts").mkdir(exist_ok=True)
    for lang, examples in bundle.labelled.items():
        write_dataset(directory / "data" / f"{lang.value.lower()}.tsv", examples)
    for lang, docs in bundle.abstracts.items():
        (directory / "abstracts" / f"{lang.value.lower()}.txt").write_text("\n".join(docs) + "\n", encoding="utf-8")
    (directory / "stream.txt").write_text("\n".join(bundle.stream) + "\n", encoding="utf-8")
    config = {
        "seed": seed,
        "languages": [lang.value for lang in bundle.labelled],
        "data": {lang.value: f"data/{lang.value.lower()}.tsv" for lang in bundle.labelled},
        "abstracts": {lang.value: f"abstracts/{lang.value.lower()}.txt" for lang in bundle.labelled},
        "organic_stream": "stream.txt",
        "sample_fraction": 0.5,
        "vocab_size": 20000,
        "langid": {"min_margin": 0, "min_length": 20, "max_docs": 300, "profile_size": 300},
        "train": {"epochs": 4, "eval_every": 25, "batch_size": 32},
        "output_dir": "out",
    }
    path = directory / "config.json"
    path.write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")
    return path
