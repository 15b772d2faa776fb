#!/usr/bin/env python3
"""Regenerate src/oovkit/data/lexicon_demo.txt.

Synthesizes Estonian-flavored words (plus a curated seed list with foreign
letters, capitalized names and kri- neighbors), derives each pronunciation
with the shipped demo rules, and writes the lexicon sorted by word.
"""

import random
from pathlib import Path

from oovkit.data import demo_rules_text
from oovkit.pipeline import Lexicon, format_lexicon, g2p
from oovkit.rules import compile_ruleset, parse_rules

SEED_WORDS = [
    # kri-/chris neighborhood the recovery examples lean on
    "kris", "kriis", "krista", "kristi", "kristo", "kriips", "krips",
    "kirs", "riis", "iris", "ris", "kriisk",
    # foreign-letter words so c/q/w/x/y/z graphemes are LM-supported
    "cris", "citrus", "yks", "nyland", "wii", "watt", "zoo", "zink",
    "taxo", "xerox", "quark", "qatar", "chris", "charta", "chrome",
    # capitalized proper names (case variants must be scorable)
    "Kris", "Kristjan", "Kristiina", "Krista", "Chris", "Christa",
    "Carmen", "Caspar", "Quentin", "Walter", "Yana", "Zelda", "Xavier",
    "Tartu", "Tallinn", "Pärnu", "Viljandi", "Rakvere", "Narva",
]

ONSETS = ["", "k", "l", "m", "n", "p", "r", "s", "t", "v", "j", "h", "d", "g", "b",
          "kr", "tr", "pr", "kl", "pl", "sl", "st", "sk"]
VOWELS = ["a", "e", "i", "o", "u", "õ", "ä", "ö", "ü", "aa", "ee", "ii", "oo", "uu", "ei", "ai", "au"]
CODAS = ["", "", "l", "m", "n", "r", "s", "t", "k", "nd", "st", "ks", "kk", "pp", "tt"]


def synth_word(rng: random.Random) -> str:
    n_syll = rng.choice([1, 2, 2, 2, 3, 3])
    parts = []
    for i in range(n_syll):
        onset = rng.choice(ONSETS) if i == 0 else rng.choice(ONSETS[:15])
        parts.append(onset + rng.choice(VOWELS) + (rng.choice(CODAS) if i == n_syll - 1 or rng.random() < 0.3 else ""))
    return "".join(parts)


def main() -> None:
    rng = random.Random(2024)
    words = set(SEED_WORDS)
    while len(words) < 540:
        w = synth_word(rng)
        if not 3 <= len(w) <= 12:
            continue
        if rng.random() < 0.08:
            w = w.capitalize()
        words.add(w)

    cascade = compile_ruleset(parse_rules(demo_rules_text()))
    lex = Lexicon()
    for word in sorted(words):
        (pron, _), = g2p(word, cascade)
        lex.add(word, pron.split())

    out = Path(__file__).resolve().parent.parent / "src" / "oovkit" / "data" / "lexicon_demo.txt"
    out.write_text(format_lexicon(lex), encoding="utf-8")
    print(f"wrote {len(lex)} entries ({len(lex.entries)} words) to {out}")


if __name__ == "__main__":
    main()
