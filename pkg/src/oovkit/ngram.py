"""Backoff n-gram language models over grapheme or phoneme tokens.

Sequences are modeled independently between ``<s>``/``</s>`` boundaries.
Witten-Bell interpolation is the default smoothing (every vocabulary token
gets mass in every context through the backoff chain); MLE is available as an
unsmoothed reference.  Models export to the ARPA text format and to a
weighted acceptor whose backoff transitions are free-input epsilon arcs, so
the acceptor's shortest path lower-bounds the exact backoff score and equals
it whenever no backoff is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from oovkit.fst import SymbolTable, UnknownSymbol, Wfst, WfstBuilder

BOS_TOKEN = "<s>"
EOS_TOKEN = "</s>"


@dataclass
class TokenCorpus:
    """Token sequences with multiplicities; one word/pronunciation each."""

    sequences: list[tuple[tuple[str, ...], int]] = field(default_factory=list)

    def add(self, tokens, count: int = 1) -> None:
        if count < 1:
            raise ValueError("sequence count must be >= 1")
        self.sequences.append((tuple(tokens), count))

    def __len__(self) -> int:
        return len(self.sequences)

    def __iter__(self):
        return iter(self.sequences)

    @classmethod
    def from_text(cls, text: str) -> "TokenCorpus":
        """One whitespace-tokenized sequence per line, optional ``count<TAB>``."""
        corpus = cls()
        for raw in text.splitlines():
            if not raw.strip():
                continue
            count = 1
            body = raw
            if "\t" in raw:
                head, rest = raw.split("\t", 1)
                if head.strip().isdigit():
                    count = int(head)
                    body = rest
            corpus.add(body.split(), count)
        return corpus


@dataclass
class ContextEntry:
    probs: dict[str, float] = field(default_factory=dict)
    backoff: float = 1.0


class NgramModel:
    """Trained backoff model: per-context continuation probabilities plus a
    backoff weight; every suffix of a stored context is itself stored."""

    def __init__(self, order: int, entries: dict[tuple[str, ...], ContextEntry], vocab: SymbolTable):
        self.order = order
        self.entries = entries
        self.vocab = vocab

    def prob(self, token: str, context: tuple[str, ...]) -> float:
        """Exact backoff probability: longest stored context wins, otherwise
        multiply backoff weights down the suffix chain."""
        h = tuple(context[-(self.order - 1) :]) if self.order > 1 else ()
        entry = self.entries.get(h)
        if entry is not None:
            p = entry.probs.get(token)
            if p is not None:
                return p
        if not h:
            return 0.0
        bow = entry.backoff if entry is not None else 1.0
        return bow * self.prob(token, h[1:])

    def score(self, seq) -> float:
        """-ln probability of the boundary-wrapped sequence."""
        tokens = list(seq)
        for t in tokens:
            if t not in self.vocab:
                raise UnknownSymbol(f"token not in model vocabulary: {t!r}")
        stream = [BOS_TOKEN] + tokens + [EOS_TOKEN]
        total = 0.0
        for i in range(1, len(stream)):
            p = self.prob(stream[i], tuple(stream[max(0, i - (self.order - 1)) : i]))
            if p <= 0.0:
                return math.inf
            total += -math.log(p)
        return total

    def validate(self, tol: float = 1e-9) -> None:
        """Check the structural invariants; raises ValueError on violation."""
        for h, entry in self.entries.items():
            total = sum(entry.probs.values())
            if total > 1.0 + tol:
                raise ValueError(f"context {h}: probabilities sum to {total}")
            for w, p in entry.probs.items():
                if not 0.0 < p <= 1.0 + tol:
                    raise ValueError(f"context {h}: P({w}) = {p} out of range")
            if not 0.0 < entry.backoff <= 1.0 + tol:
                raise ValueError(f"context {h}: backoff {entry.backoff} out of range")
            if h and h[1:] not in self.entries:
                raise ValueError(f"context {h}: suffix {h[1:]} missing")


def train(corpus: TokenCorpus, order: int, smoothing: str = "witten-bell") -> NgramModel:
    """Count boundary-wrapped n-grams and estimate the backoff model."""
    if order < 1:
        raise ValueError("order must be >= 1")
    if len(corpus) == 0:
        raise ValueError("corpus is empty")
    if smoothing not in ("witten-bell", "mle"):
        raise ValueError(f"unknown smoothing {smoothing!r}")

    counts: dict[tuple[str, ...], dict[str, int]] = {}
    vocab = SymbolTable([BOS_TOKEN, EOS_TOKEN])
    for tokens, mult in corpus:
        for t in tokens:
            vocab.add_symbol(t)
        stream = [BOS_TOKEN] + list(tokens) + [EOS_TOKEN]
        for i in range(1, len(stream)):
            w = stream[i]
            for clen in range(min(i, order - 1) + 1):
                h = tuple(stream[i - clen : i])
                counts.setdefault(h, {}).setdefault(w, 0)
                counts[h][w] += mult

    predicted = sorted({w for by_w in counts.values() for w in by_w})
    vsize = len(predicted)

    memo: dict[tuple[tuple[str, ...], str], float] = {}

    def wb_prob(h: tuple[str, ...], w: str) -> float:
        key = (h, w)
        if key in memo:
            return memo[key]
        by_w = counts[h]
        total = sum(by_w.values())
        distinct = len(by_w)
        lower = 1.0 / vsize if not h else wb_prob(h[1:], w)
        p = (by_w.get(w, 0) + distinct * lower) / (total + distinct)
        memo[key] = p
        return p

    entries: dict[tuple[str, ...], ContextEntry] = {}
    for h in sorted(counts, key=lambda c: (len(c), c)):
        by_w = counts[h]
        total = sum(by_w.values())
        entry = ContextEntry()
        if smoothing == "mle":
            entry.probs = {w: c / total for w, c in sorted(by_w.items())}
            entry.backoff = 1.0
        else:
            entry.probs = {w: wb_prob(h, w) for w in sorted(by_w)}
            # the root never backs off further, and ARPA has no slot for a
            # root weight, so it stays at 1.0
            entry.backoff = len(by_w) / (total + len(by_w)) if h else 1.0
        entries[h] = entry
    return NgramModel(order, entries, vocab)


def to_wfsa(model: NgramModel) -> Wfst:
    """Weighted acceptor: one state per stored context, continuation arcs at
    -ln p, epsilon backoff arcs at -ln backoff, finals from ``</s>`` mass."""
    syms = SymbolTable(
        t for t in model.vocab if t not in ("<eps>", BOS_TOKEN, EOS_TOKEN)
    )
    contexts = sorted(model.entries, key=lambda c: (len(c), c))
    b = WfstBuilder(syms, syms)
    state_of = {h: b.add_state() for h in contexts}
    start_ctx = (BOS_TOKEN,) if model.order > 1 and (BOS_TOKEN,) in state_of else ()
    b.set_start(state_of[start_ctx])

    def next_context(h: tuple[str, ...], w: str) -> tuple[str, ...]:
        nxt = (h + (w,))[-(model.order - 1) :] if model.order > 1 else ()
        while nxt not in state_of:
            nxt = nxt[1:]
        return nxt

    for h in contexts:
        entry = model.entries[h]
        src = state_of[h]
        for w, p in entry.probs.items():
            if w == EOS_TOKEN:
                b.set_final(src, -math.log(p))
            elif w == BOS_TOKEN:
                continue
            else:
                b.add_arc(src, syms.index(w), syms.index(w), -math.log(p), state_of[next_context(h, w)])
        if h:
            b.add_arc(src, 0, 0, -math.log(entry.backoff), state_of[h[1:]])
    return b.freeze()


def write_arpa(model: NgramModel) -> str:
    """Serialize to ARPA text (log10 probabilities and backoff weights)."""
    by_order: dict[int, list[tuple[tuple[str, ...], str]]] = {n: [] for n in range(1, model.order + 1)}
    for h, entry in model.entries.items():
        for w in entry.probs:
            by_order[len(h) + 1].append((h, w))
    has_bos = (BOS_TOKEN,) in model.entries
    lines = ["\\data\\"]
    for n in range(1, model.order + 1):
        count = len(by_order[n]) + (1 if n == 1 and has_bos else 0)
        lines.append(f"ngram {n}={count}")
    lines.append("")
    for n in range(1, model.order + 1):
        lines.append(f"\\{n}-grams:")
        grams = sorted(h + (w,) for h, w in by_order[n])
        if n == 1 and has_bos:
            grams = [(BOS_TOKEN,)] + [g for g in grams]
        for gram in grams:
            h, w = gram[:-1], gram[-1]
            if n == 1 and w == BOS_TOKEN:
                logp = -99.0
            else:
                logp = math.log10(model.entries[h].probs[w])
            line = f"{logp:.7f}\t{' '.join(gram)}"
            if n < model.order and gram in model.entries:
                line += f"\t{math.log10(model.entries[gram].backoff):.7f}"
            lines.append(line)
        lines.append("")
    lines.append("\\end\\")
    return "\n".join(lines) + "\n"


def read_arpa(text: str) -> NgramModel:
    """Parse ARPA text back into a model (inverse of :func:`write_arpa`)."""
    lines = iter(text.splitlines())
    for line in lines:
        if line.strip() == "\\data\\":
            break
    else:
        raise ValueError("ARPA: missing \\data\\ header")
    declared: dict[int, int] = {}
    for line in lines:
        line = line.strip()
        if not line:
            break
        if line.startswith("ngram"):
            spec, num = line.split("=")
            declared[int(spec.split()[1])] = int(num)
    if not declared:
        raise ValueError("ARPA: empty \\data\\ section")
    order = max(declared)

    entries: dict[tuple[str, ...], ContextEntry] = {(): ContextEntry()}
    vocab = SymbolTable([BOS_TOKEN, EOS_TOKEN])
    current = None
    for line in lines:
        line = line.strip()
        if not line:
            continue
        if line == "\\end\\":
            break
        if line.startswith("\\") and line.endswith("-grams:"):
            current = int(line[1:].split("-")[0])
            continue
        if current is None:
            raise ValueError(f"ARPA: data outside a grams section: {line!r}")
        fields = line.split()
        has_bow = len(fields) == current + 2
        if len(fields) != current + 1 and not has_bow:
            raise ValueError(f"ARPA: malformed {current}-gram line: {line!r}")
        logp = float(fields[0])
        gram = tuple(fields[1 : current + 1])
        for t in gram:
            vocab.add_symbol(t)
        h, w = gram[:-1], gram[-1]
        entries.setdefault(h, ContextEntry())
        if logp > -98.0:
            entries[h].probs[w] = 10.0 ** logp
        if has_bow:
            entries.setdefault(gram, ContextEntry()).backoff = 10.0 ** float(fields[-1])
    # backoff chain must be total: materialize any missing suffix contexts
    for h in sorted(entries, key=len, reverse=True):
        for k in range(1, len(h)):
            entries.setdefault(h[k:], ContextEntry())
    return NgramModel(order, entries, vocab)
