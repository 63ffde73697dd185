"""Generate the shipped romanization tables.

The six Brahmic blocks in scope share the ISCII-derived layout, so one
offset -> romanization map (simplified ISO 15919) covers all of them.
Run ``python -m scriptswitch.translit.tablegen`` to rewrite ``tables/*.tsv``.
"""

from __future__ import annotations

import unicodedata
from pathlib import Path

from ..script import ScriptClass

TABLE_VERSION = "iso15919-simplified-1"

BLOCK_BASE = {
    ScriptClass.DEVANAGARI: 0x0900,
    ScriptClass.GUJARATI: 0x0A80,
    ScriptClass.TAMIL: 0x0B80,
    ScriptClass.TELUGU: 0x0C00,
    ScriptClass.KANNADA: 0x0C80,
    ScriptClass.MALAYALAM: 0x0D00,
}

CONSONANTS = {
    0x15: "k", 0x16: "kh", 0x17: "g", 0x18: "gh", 0x19: "ṅ",
    0x1A: "c", 0x1B: "ch", 0x1C: "j", 0x1D: "jh", 0x1E: "ñ",
    0x1F: "ṭ", 0x20: "ṭh", 0x21: "ḍ", 0x22: "ḍh", 0x23: "ṇ",
    0x24: "t", 0x25: "th", 0x26: "d", 0x27: "dh", 0x28: "n", 0x29: "ṉ",
    0x2A: "p", 0x2B: "ph", 0x2C: "b", 0x2D: "bh", 0x2E: "m",
    0x2F: "y", 0x30: "r", 0x31: "ṟ", 0x32: "l", 0x33: "ḷ", 0x34: "ḻ", 0x35: "v",
    0x36: "ś", 0x37: "ṣ", 0x38: "s", 0x39: "h", 0x3A: "ṯ",
}

# Script-specific consonants outside the shared range.
EXTRA_CONSONANTS = {
    ScriptClass.DEVANAGARI: {
        0x58: "q", 0x59: "ḵh", 0x5A: "ġ", 0x5B: "z", 0x5C: "ṛ", 0x5D: "ṛh", 0x5E: "f", 0x5F: "ẏ",
    },
    ScriptClass.TELUGU: {0x58: "ts", 0x59: "dz", 0x5A: "ṟ"},
    ScriptClass.KANNADA: {0x5E: "f"},
}

VOWELS = {
    0x05: "a", 0x06: "ā", 0x07: "i", 0x08: "ī", 0x09: "u", 0x0A: "ū",
    0x0B: "r̥", 0x0C: "l̥", 0x0D: "ê", 0x0E: "e", 0x0F: "ē", 0x10: "ai",
    0x11: "ô", 0x12: "o", 0x13: "ō", 0x14: "au", 0x60: "r̥̄", 0x61: "l̥̄",
}

VOWEL_SIGNS = {
    0x3E: "ā", 0x3F: "i", 0x40: "ī", 0x41: "u", 0x42: "ū", 0x43: "r̥", 0x44: "r̥̄",
    0x45: "ê", 0x46: "e", 0x47: "ē", 0x48: "ai", 0x49: "ô", 0x4A: "o", 0x4B: "ō", 0x4C: "au",
    0x62: "l̥", 0x63: "l̥̄",
}

VIRAMA = 0x4D
NUKTA = 0x3C

OTHER_SIGNS = {
    0x01: "m̐", 0x02: "ṁ", 0x03: "ḥ", 0x3D: "'", 0x50: "ōm", 0x64: ".", 0x65: "..",
    **{0x66 + d: str(d) for d in range(10)},
}

SCRIPT_OVERRIDES = {
    ScriptClass.TAMIL: {0x03: "ḵ"},
    ScriptClass.MALAYALAM: {
        0x4E: "r", 0x54: "m", 0x55: "y", 0x56: "ḻ",
        0x7A: "ṇ", 0x7B: "n", 0x7C: "r", 0x7D: "l", 0x7E: "ḷ", 0x7F: "k",
    },
}

NUKTA_FORMS = {"k": "q", "kh": "ḵh", "g": "ġ", "j": "z", "ḍ": "ṛ", "ḍh": "ṛh", "ph": "f", "y": "ẏ"}


def _assigned(cp: int) -> bool:
    try:
        unicodedata.name(chr(cp))
    except ValueError:
        return False
    return True


def _fallback(cp: int) -> str:
    """Romanization for block code points the scheme does not name explicitly."""
    ch = chr(cp)
    if unicodedata.category(ch) == "Lo":
        word = unicodedata.name(ch).split()[-1].lower()
        return word[:4]
    return ""


def build_rules(script: ScriptClass) -> list[tuple[str, str]]:
    base = BLOCK_BASE[script]

    def present(offset):
        return _assigned(base + offset)

    def src(*offsets):
        return "".join(chr(base + o) for o in offsets)

    consonants = {o: r for o, r in CONSONANTS.items() if present(o)}
    consonants.update({o: r for o, r in EXTRA_CONSONANTS.get(script, {}).items() if present(o)})
    signs = {o: r for o, r in VOWEL_SIGNS.items() if present(o)}
    has_nukta = present(NUKTA)

    rules: dict[str, str] = {}
    for c_off, roman in consonants.items():
        variants = [((c_off,), roman)]
        if has_nukta:
            variants.append(((c_off, NUKTA), NUKTA_FORMS.get(roman, roman)))
        for offsets, r in variants:
            rules[src(*offsets)] = r + "a"
            rules[src(*offsets, VIRAMA)] = r
            for s_off, vowel in signs.items():
                rules[src(*offsets, s_off)] = r + vowel

    for table in (VOWELS, signs, OTHER_SIGNS, SCRIPT_OVERRIDES.get(script, {})):
        for off, roman in table.items():
            if present(off):
                rules[src(off)] = roman
    rules[src(VIRAMA)] = ""
    if has_nukta:
        rules[src(NUKTA)] = ""

    # Every remaining assigned code point in the block still needs a rule so
    # that no source-script character survives transliteration.
    for cp in range(base, base + 0x80):
        ch = chr(cp)
        if ch not in rules and _assigned(cp):
            rules[ch] = _fallback(cp)

    return sorted(rules.items(), key=lambda kv: (-len(kv[0]), kv[0]))


def render_table(script: ScriptClass) -> str:
    lines = [f"# script: {script.value}", f"# version: {TABLE_VERSION}"]
    lines += [f"{s}\t{r}" for s, r in build_rules(script)]
    return "\n".join(lines) + "\n"


def table_path(script: ScriptClass) -> Path:
    return Path(__file__).with_name("tables") / f"{script.value.lower()}.tsv"


def main():
    for script in BLOCK_BASE:
        path = table_path(script)
        path.parent.mkdir(exist_ok=True)
        path.write_text(render_table(script), encoding="utf-8")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
