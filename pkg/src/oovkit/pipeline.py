"""Out-of-vocabulary word machinery: lexicon ingestion, forward G2P, the
phoneme-LM decoding subgraph, and phoneme-to-grapheme recovery rescored by a
grapheme language model.

Recovery composes the inverted (may-apply) rule cascade with the grapheme LM
acceptor: one phoneme sequence fans out into many candidate spellings, and
spellings whose letter sequences are frequent among in-vocabulary words rank
first.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from oovkit import rules as _rules
from oovkit.fst import (
    UnknownSymbol,
    Wfst,
    compose,
    linear_acceptor,
    nbest_outputs,
    project,
    relabel,
    scale_weights,
)
from oovkit.ngram import NgramModel, TokenCorpus, train


class LexiconFormatError(ValueError):
    """Lexicon parse failure; message carries the 1-based line number."""


@dataclass
class Lexicon:
    """word -> pronunciations; no duplicate (word, pronunciation) pairs."""

    entries: dict[str, list[tuple[str, ...]]] = field(default_factory=dict)
    duplicates: int = 0  # input lines collapsed away

    def add(self, word: str, pronunciation) -> None:
        if not word:
            raise ValueError("blank word")
        pron = tuple(pronunciation)
        if not pron:
            raise ValueError("blank pronunciation")
        prons = self.entries.setdefault(word, [])
        if pron in prons:
            self.duplicates += 1
        else:
            prons.append(pron)

    def __len__(self) -> int:
        return sum(len(p) for p in self.entries.values())

    def words(self):
        return self.entries.keys()

    def pronunciations(self):
        """Every (word, pronunciation) pair in file order."""
        for word, prons in self.entries.items():
            for pron in prons:
                yield word, pron


def load_lexicon(text: str) -> Lexicon:
    """Parse ``word<TAB>phoneme phoneme ...`` lines."""
    lex = Lexicon()
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip():
            continue
        if "\t" not in raw:
            raise LexiconFormatError(f"line {lineno}: expected 'word<TAB>pronunciation'")
        word, pron = raw.split("\t", 1)
        word = word.strip()
        phones = pron.split()
        if not word:
            raise LexiconFormatError(f"line {lineno}: blank word")
        if not phones:
            raise LexiconFormatError(f"line {lineno}: blank pronunciation")
        lex.add(word, phones)
    return lex


def format_lexicon(lex: Lexicon) -> str:
    return "".join(f"{w}\t{' '.join(p)}\n" for w, p in lex.pronunciations())


def g2p(word: str, rule_fst: Wfst, n_best: int | None = None) -> list[tuple[str, float]]:
    """Apply the (lowercasing) forward cascade to one word.

    Returns (pronunciation string, cost) pairs ascending; an obligatory
    cascade yields exactly one.  Graphemes outside the rule alphabet raise
    :class:`UnknownSymbol` naming the offending character.
    """
    if not word:
        raise ValueError("empty word")
    outputs = _rules.apply(rule_fst, list(word.lower()), n_best=n_best)
    return [(" ".join(toks), w) for toks, w in outputs]


def build_phoneme_lm(lexicon: Lexicon, order: int = 3, smoothing: str = "witten-bell") -> NgramModel:
    """Train the OOV-subgraph phoneme model on all lexicon pronunciations."""
    if not lexicon.entries:
        raise ValueError("lexicon is empty")
    corpus = TokenCorpus()
    for _, pron in lexicon.pronunciations():
        corpus.add(pron)
    return train(corpus, order, smoothing)


def build_grapheme_lm(lexicon: Lexicon, order: int = 5, smoothing: str = "witten-bell") -> NgramModel:
    """Train the spelling disambiguator on all in-vocabulary words (one
    character sequence per distinct word)."""
    if not lexicon.entries:
        raise ValueError("lexicon is empty")
    corpus = TokenCorpus()
    for word in lexicon.words():
        corpus.add(list(word))
    return train(corpus, order, smoothing)


@dataclass
class RecoveryConfig:
    n_best: int = 10
    lm_scale: float = 1.0
    max_candidate_length: int = 40

    def __post_init__(self):
        if self.n_best < 1:
            raise ValueError("n_best must be >= 1")
        if self.lm_scale < 0:
            raise ValueError("lm_scale must be >= 0")


@dataclass(frozen=True)
class CandidateWord:
    graphemes: str
    cost: float


def recover(
    phonemes,
    inv_g2p: Wfst,
    grapheme_lm_wfsa: Wfst,
    cfg: RecoveryConfig = RecoveryConfig(),
) -> list[CandidateWord]:
    """Rank candidate spellings for one phoneme sequence.

    ``inv_g2p`` is the inverted may-apply cascade; ``grapheme_lm_wfsa`` the
    unscaled grapheme LM acceptor (scaled here by ``cfg.lm_scale``).  Sentence
    boundaries are implicit in the acceptor: its start state is the ``<s>``
    context and its final weights carry the ``</s>`` mass.  Candidates are
    unique spellings at their cheapest cost, ascending, ties broken by the
    spelling; spellings longer than ``max_candidate_length`` are dropped.
    Spellings using graphemes the LM has never seen are unscorable and
    likewise dropped.  An empty result means the sequence is unrecoverable.
    """
    phonemes = list(phonemes)
    if not phonemes:
        raise ValueError("empty phoneme sequence")
    spellings = project(compose(linear_acceptor(phonemes, inv_g2p.isyms), inv_g2p), "output")
    scorable = relabel(spellings, grapheme_lm_wfsa.isyms, grapheme_lm_wfsa.isyms, drop_unknown=True)
    scored_lm = grapheme_lm_wfsa if cfg.lm_scale == 1.0 else scale_weights(grapheme_lm_wfsa, cfg.lm_scale)
    lattice = compose(scorable, scored_lm)

    want = cfg.n_best
    while True:
        paths = nbest_outputs(lattice, want)
        exhausted = len(paths) < want
        ranked = [
            CandidateWord("".join(p.olabels), p.weight)
            for p in paths
            if len(p.olabels) <= cfg.max_candidate_length
        ]
        if exhausted or len(ranked) >= cfg.n_best or want >= 500000:
            return ranked[: cfg.n_best]
        want *= 2
