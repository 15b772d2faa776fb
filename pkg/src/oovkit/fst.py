"""Weighted finite-state transducers over the tropical (min, +) semiring.

Weights are non-negative float costs (-ln probability); +inf is the semiring
zero.  Machines are immutable once frozen by :class:`WfstBuilder` and safe to
share between threads.  Epsilon is always label 0 / the symbol ``<eps>``.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from typing import Iterable, Iterator, NamedTuple, Sequence

EPSILON = "<eps>"
EPSILON_ID = 0

INF = math.inf


class UnknownSymbol(KeyError):
    """A symbol or label id that is not registered in a symbol table."""


class TableMismatch(ValueError):
    """Two machines were combined over incompatible symbol tables."""


class InvalidMachine(ValueError):
    """Builder state violates a Wfst invariant at freeze time."""


class Tropical:
    """The (min, +) cost algebra: plus = min, times = +, zero = inf, one = 0."""

    zero = INF
    one = 0.0

    @staticmethod
    def plus(a: float, b: float) -> float:
        return a if a <= b else b

    @staticmethod
    def times(a: float, b: float) -> float:
        return a + b


class SymbolTable:
    """Bijection between symbol strings and contiguous integer labels.

    Label 0 is always ``<eps>``.  Lookups of unregistered symbols raise
    :class:`UnknownSymbol`; registration only happens through
    :meth:`add_symbol`.
    """

    def __init__(self, symbols: Iterable[str] = ()):
        self._sym2id: dict[str, int] = {EPSILON: 0}
        self._id2sym: list[str] = [EPSILON]
        for sym in symbols:
            self.add_symbol(sym)

    def add_symbol(self, sym: str) -> int:
        """Register ``sym`` (idempotent) and return its label id."""
        if sym in self._sym2id:
            return self._sym2id[sym]
        if not sym or any(c.isspace() for c in sym):
            raise ValueError(f"symbol must be non-empty and whitespace-free: {sym!r}")
        label = len(self._id2sym)
        self._sym2id[sym] = label
        self._id2sym.append(sym)
        return label

    def index(self, sym: str) -> int:
        try:
            return self._sym2id[sym]
        except KeyError:
            raise UnknownSymbol(f"unknown symbol: {sym!r}") from None

    def symbol(self, label: int) -> str:
        if 0 <= label < len(self._id2sym):
            return self._id2sym[label]
        raise UnknownSymbol(f"unknown label id: {label}")

    def __contains__(self, sym: str) -> bool:
        return sym in self._sym2id

    def __len__(self) -> int:
        return len(self._id2sym)

    def __iter__(self) -> Iterator[str]:
        return iter(self._id2sym)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymbolTable):
            return NotImplemented
        return self._id2sym == other._id2sym

    def __repr__(self) -> str:
        return f"SymbolTable({len(self)} symbols)"

    def copy(self) -> "SymbolTable":
        return SymbolTable(self._id2sym[1:])

    def sort_ranks(self) -> list[int]:
        """rank[label] = position of the symbol in lexicographic order."""
        order = sorted(range(len(self._id2sym)), key=self._id2sym.__getitem__)
        ranks = [0] * len(order)
        for rank, label in enumerate(order):
            ranks[label] = rank
        return ranks

    def to_text(self) -> str:
        return "".join(f"{s}\t{i}\n" for i, s in enumerate(self._id2sym))

    @classmethod
    def from_text(cls, text: str) -> "SymbolTable":
        pairs = []
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise ValueError(f"symbol table line {lineno}: expected 'symbol<TAB>id'")
            pairs.append((fields[0], int(fields[1])))
        pairs.sort(key=lambda p: p[1])
        if not pairs or pairs[0] != (EPSILON, 0):
            raise ValueError("symbol table must map <eps> to 0")
        for expect, (sym, label) in enumerate(pairs):
            if label != expect:
                raise ValueError(f"symbol table ids must be contiguous, got {label}")
        return cls(sym for sym, _ in pairs[1:])


class Arc(NamedTuple):
    ilabel: int
    olabel: int
    weight: float
    nextstate: int


class Path(NamedTuple):
    """An accepting path: token sequences with epsilons removed, plus cost."""

    ilabels: tuple[str, ...]
    olabels: tuple[str, ...]
    weight: float


class Wfst:
    """A frozen transducer.  Build instances via :class:`WfstBuilder`."""

    __slots__ = ("_arcs", "_finals", "_start", "_ilabel_index", "isyms", "osyms")

    def __init__(self, arcs, finals, start, isyms, osyms, _token=None):
        if _token is not _BUILD_TOKEN:
            raise TypeError("construct Wfst through WfstBuilder.freeze()")
        self._arcs: tuple[tuple[Arc, ...], ...] = arcs
        self._finals: dict[int, float] = finals
        self._start: int | None = start
        self._ilabel_index: list[dict[int, list[Arc]]] | None = None
        self.isyms: SymbolTable = isyms
        self.osyms: SymbolTable = osyms

    def arcs_by_ilabel(self) -> list[dict[int, list[Arc]]]:
        """Per-state arcs grouped by input label (built once, cached)."""
        if self._ilabel_index is None:
            index: list[dict[int, list[Arc]]] = []
            for arcs in self._arcs:
                d: dict[int, list[Arc]] = {}
                for arc in arcs:
                    d.setdefault(arc.ilabel, []).append(arc)
                index.append(d)
            self._ilabel_index = index
        return self._ilabel_index

    @property
    def start(self) -> int | None:
        return self._start

    @property
    def num_states(self) -> int:
        return len(self._arcs)

    @property
    def num_arcs(self) -> int:
        return sum(len(a) for a in self._arcs)

    def states(self) -> range:
        return range(len(self._arcs))

    def arcs(self, state: int) -> tuple[Arc, ...]:
        return self._arcs[state]

    def final_weight(self, state: int) -> float:
        return self._finals.get(state, INF)

    def final_states(self) -> dict[int, float]:
        return dict(self._finals)

    def is_acceptor(self) -> bool:
        return all(a.ilabel == a.olabel for arcs in self._arcs for a in arcs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Wfst):
            return NotImplemented
        return (
            self._start == other._start
            and self._arcs == other._arcs
            and self._finals == other._finals
            and self.isyms == other.isyms
            and self.osyms == other.osyms
        )

    def __repr__(self) -> str:
        return f"Wfst({self.num_states} states, {self.num_arcs} arcs)"


_BUILD_TOKEN = object()


class WfstBuilder:
    """Single-owner accumulator; :meth:`freeze` validates and emits a Wfst.

    Arc labels may be given as ids or as symbol strings (resolved against the
    machine's tables; unregistered strings raise UnknownSymbol).
    """

    def __init__(self, isyms: SymbolTable, osyms: SymbolTable | None = None):
        self.isyms = isyms
        self.osyms = osyms if osyms is not None else isyms
        self._arcs: list[list[Arc]] = []
        self._finals: dict[int, float] = {}
        self._start: int | None = None

    def add_state(self) -> int:
        self._arcs.append([])
        return len(self._arcs) - 1

    def add_states(self, n: int) -> int:
        first = len(self._arcs)
        for _ in range(n):
            self._arcs.append([])
        return first

    def set_start(self, state: int) -> None:
        self._start = state

    def set_final(self, state: int, weight: float = 0.0) -> None:
        self._finals[state] = weight

    def _label(self, label: int | str, table: SymbolTable) -> int:
        if isinstance(label, str):
            return table.index(label)
        return label

    def add_arc(
        self,
        src: int,
        ilabel: int | str,
        olabel: int | str,
        weight: float,
        dst: int,
    ) -> None:
        il = self._label(ilabel, self.isyms)
        ol = self._label(olabel, self.osyms)
        self._arcs[src].append(Arc(il, ol, float(weight), dst))

    def freeze(self) -> Wfst:
        n = len(self._arcs)
        if n == 0:
            if self._start is not None or self._finals:
                raise InvalidMachine("empty machine cannot have a start or finals")
        else:
            if self._start is None or not 0 <= self._start < n:
                raise InvalidMachine(f"invalid start state: {self._start}")
        for state, arcs in enumerate(self._arcs):
            for arc in arcs:
                if not 0 <= arc.nextstate < n:
                    raise InvalidMachine(f"arc from {state} targets bad state {arc.nextstate}")
                if not 0 <= arc.ilabel < len(self.isyms):
                    raise InvalidMachine(f"arc from {state} has bad ilabel {arc.ilabel}")
                if not 0 <= arc.olabel < len(self.osyms):
                    raise InvalidMachine(f"arc from {state} has bad olabel {arc.olabel}")
                if not arc.weight >= 0.0 or arc.weight == INF:
                    raise InvalidMachine(f"arc weight must be finite and >= 0, got {arc.weight}")
        for state, w in self._finals.items():
            if not 0 <= state < n:
                raise InvalidMachine(f"final weight on bad state {state}")
            if not w >= 0.0 or w == INF:
                raise InvalidMachine(f"final weight must be finite and >= 0, got {w}")
        return Wfst(
            tuple(tuple(arcs) for arcs in self._arcs),
            dict(self._finals),
            self._start,
            self.isyms,
            self.osyms,
            _token=_BUILD_TOKEN,
        )


def _require_same_table(a: SymbolTable, b: SymbolTable, what: str) -> None:
    if a is not b and a != b:
        raise TableMismatch(f"{what}: symbol tables differ")


def linear_acceptor(tokens: Sequence[str], syms: SymbolTable) -> Wfst:
    """Chain acceptor of exactly ``tokens``, every weight 0.0."""
    b = WfstBuilder(syms, syms)
    labels = [syms.index(t) for t in tokens]
    b.add_states(len(labels) + 1)
    b.set_start(0)
    for i, lab in enumerate(labels):
        b.add_arc(i, lab, lab, 0.0, i + 1)
    b.set_final(len(labels), 0.0)
    return b.freeze()


def identity_transducer(syms: SymbolTable) -> Wfst:
    """Single-state machine mapping every registered symbol to itself at 0.0."""
    b = WfstBuilder(syms, syms)
    s = b.add_state()
    b.set_start(s)
    b.set_final(s, 0.0)
    for label in range(1, len(syms)):
        b.add_arc(s, label, label, 0.0, s)
    return b.freeze()


def invert(t: Wfst) -> Wfst:
    """Swap input and output labels (and tables); topology and weights kept."""
    b = WfstBuilder(t.osyms, t.isyms)
    b.add_states(t.num_states)
    if t.start is not None:
        b.set_start(t.start)
    for s in t.states():
        for a in t.arcs(s):
            b.add_arc(s, a.olabel, a.ilabel, a.weight, a.nextstate)
    for s, w in t.final_states().items():
        b.set_final(s, w)
    return b.freeze()


def project(t: Wfst, side: str = "output") -> Wfst:
    """Acceptor over the chosen side's labels; weights preserved."""
    if side not in ("input", "output"):
        raise ValueError(f"side must be 'input' or 'output', got {side!r}")
    syms = t.isyms if side == "input" else t.osyms
    b = WfstBuilder(syms, syms)
    b.add_states(t.num_states)
    if t.start is not None:
        b.set_start(t.start)
    for s in t.states():
        for a in t.arcs(s):
            lab = a.ilabel if side == "input" else a.olabel
            b.add_arc(s, lab, lab, a.weight, a.nextstate)
    for s, w in t.final_states().items():
        b.set_final(s, w)
    return b.freeze()


def scale_weights(t: Wfst, factor: float) -> Wfst:
    """Multiply every arc and final weight by ``factor`` (>= 0)."""
    if factor < 0:
        raise ValueError("scale factor must be >= 0")
    b = WfstBuilder(t.isyms, t.osyms)
    b.add_states(t.num_states)
    if t.start is not None:
        b.set_start(t.start)
    for s in t.states():
        for a in t.arcs(s):
            b.add_arc(s, a.ilabel, a.olabel, a.weight * factor, a.nextstate)
    for s, w in t.final_states().items():
        b.set_final(s, w * factor)
    return b.freeze()


def relabel(t: Wfst, isyms: SymbolTable, osyms: SymbolTable, drop_unknown: bool = False) -> Wfst:
    """Remap labels by symbol string into new tables.

    With ``drop_unknown`` arcs carrying symbols missing from the target table
    are removed (their paths become unacceptable) instead of raising.
    """
    b = WfstBuilder(isyms, osyms)
    b.add_states(t.num_states)
    if t.start is not None:
        b.set_start(t.start)
    for s in t.states():
        for a in t.arcs(s):
            try:
                il = isyms.index(t.isyms.symbol(a.ilabel)) if a.ilabel else 0
                ol = osyms.index(t.osyms.symbol(a.olabel)) if a.olabel else 0
            except UnknownSymbol:
                if drop_unknown:
                    continue
                raise
            b.add_arc(s, il, ol, a.weight, a.nextstate)
    for s, w in t.final_states().items():
        b.set_final(s, w)
    return b.freeze()


def compose(a: Wfst, b: Wfst) -> Wfst:
    """Tropical composition with the three-state epsilon-matching filter.

    The filter admits exactly one interleaving of epsilon moves between any
    two matched paths, so the min over paths is preserved and no spurious
    duplicate paths appear.  Only states on accepting paths are kept.
    """
    _require_same_table(a.osyms, b.isyms, "compose")
    out = WfstBuilder(a.isyms, b.osyms)
    if a.start is None or b.start is None:
        return out.freeze()

    by_ilabel = b.arcs_by_ilabel()

    start = (a.start, b.start, 0)
    state_id: dict[tuple[int, int, int], int] = {start: out.add_state()}
    out.set_start(0)
    queue = deque([start])
    while queue:
        triple = queue.popleft()
        qa, qb, f = triple
        src = state_id[triple]

        wa, wb = a.final_weight(qa), b.final_weight(qb)
        if wa < INF and wb < INF:
            out.set_final(src, wa + wb)

        def emit(nq: tuple[int, int, int], il: int, ol: int, w: float) -> None:
            nid = state_id.get(nq)
            if nid is None:
                nid = state_id[nq] = out.add_state()
                queue.append(nq)
            out.add_arc(src, il, ol, w, nid)

        arcs_a = a.arcs(qa)
        arcs_b = b.arcs(qb)
        for aa in arcs_a:
            if aa.olabel != EPSILON_ID:
                for ab in by_ilabel[qb].get(aa.olabel, ()):
                    emit((aa.nextstate, ab.nextstate, 0), aa.ilabel, ab.olabel, aa.weight + ab.weight)
        if f == 0:
            for aa in arcs_a:
                if aa.olabel == EPSILON_ID:
                    for ab in by_ilabel[qb].get(EPSILON_ID, ()):
                        emit((aa.nextstate, ab.nextstate, 0), aa.ilabel, ab.olabel, aa.weight + ab.weight)
        if f != 1:
            for aa in arcs_a:
                if aa.olabel == EPSILON_ID:
                    emit((aa.nextstate, qb, 2), aa.ilabel, EPSILON_ID, aa.weight)
        if f != 2:
            for ab in arcs_b:
                if ab.ilabel == EPSILON_ID:
                    emit((qa, ab.nextstate, 1), EPSILON_ID, ab.olabel, ab.weight)

    return connect(out.freeze())


def connect(t: Wfst) -> Wfst:
    """Keep only states both reachable from start and co-reachable to a final."""
    if t.start is None:
        return t
    reach: set[int] = set()
    stack = [t.start]
    while stack:
        s = stack.pop()
        if s in reach:
            continue
        reach.add(s)
        for a in t.arcs(s):
            if a.nextstate not in reach:
                stack.append(a.nextstate)
    radj: dict[int, list[int]] = {}
    for s in t.states():
        for a in t.arcs(s):
            radj.setdefault(a.nextstate, []).append(s)
    coreach: set[int] = set()
    stack = [s for s in t.final_states()]
    while stack:
        s = stack.pop()
        if s in coreach:
            continue
        coreach.add(s)
        for p in radj.get(s, ()):
            if p not in coreach:
                stack.append(p)
    keep = reach & coreach
    b = WfstBuilder(t.isyms, t.osyms)
    if t.start not in keep:
        return b.freeze()
    remap = {}
    for s in t.states():
        if s in keep:
            remap[s] = b.add_state()
    b.set_start(remap[t.start])
    for s in t.states():
        if s not in keep:
            continue
        for a in t.arcs(s):
            if a.nextstate in keep:
                b.add_arc(remap[s], a.ilabel, a.olabel, a.weight, remap[a.nextstate])
    for s, w in t.final_states().items():
        if s in keep:
            b.set_final(remap[s], w)
    return b.freeze()


def union(a: Wfst, b: Wfst) -> Wfst:
    """Weighted path-set union."""
    _require_same_table(a.isyms, b.isyms, "union")
    _require_same_table(a.osyms, b.osyms, "union")
    out = WfstBuilder(a.isyms, a.osyms)
    s0 = out.add_state()
    out.set_start(s0)
    for m in (a, b):
        if m.start is None:
            continue
        off = out.add_states(m.num_states)
        for s in m.states():
            for arc in m.arcs(s):
                out.add_arc(off + s, arc.ilabel, arc.olabel, arc.weight, off + arc.nextstate)
        for s, w in m.final_states().items():
            out.set_final(off + s, w)
        out.add_arc(s0, EPSILON_ID, EPSILON_ID, 0.0, off + m.start)
    return out.freeze()


def concat(a: Wfst, b: Wfst) -> Wfst:
    """Pairwise path concatenation; weights add."""
    _require_same_table(a.isyms, b.isyms, "concat")
    _require_same_table(a.osyms, b.osyms, "concat")
    out = WfstBuilder(a.isyms, a.osyms)
    if a.start is None or b.start is None:
        return out.freeze()
    out.add_states(a.num_states + b.num_states)
    off = a.num_states
    out.set_start(a.start)
    for s in a.states():
        for arc in a.arcs(s):
            out.add_arc(s, arc.ilabel, arc.olabel, arc.weight, arc.nextstate)
    for s in b.states():
        for arc in b.arcs(s):
            out.add_arc(off + s, arc.ilabel, arc.olabel, arc.weight, off + arc.nextstate)
    for s, w in a.final_states().items():
        out.add_arc(s, EPSILON_ID, EPSILON_ID, w, off + b.start)
    for s, w in b.final_states().items():
        out.set_final(off + s, w)
    return out.freeze()


def closure(a: Wfst) -> Wfst:
    """Zero or more repetitions; the empty string is accepted at weight 0."""
    out = WfstBuilder(a.isyms, a.osyms)
    s0 = out.add_state()
    out.set_start(s0)
    out.set_final(s0, 0.0)
    if a.start is None:
        return out.freeze()
    off = out.add_states(a.num_states)
    for s in a.states():
        for arc in a.arcs(s):
            out.add_arc(off + s, arc.ilabel, arc.olabel, arc.weight, off + arc.nextstate)
    out.add_arc(s0, EPSILON_ID, EPSILON_ID, 0.0, off + a.start)
    for s, w in a.final_states().items():
        out.set_final(off + s, w)
        out.add_arc(off + s, EPSILON_ID, EPSILON_ID, w, off + a.start)
    return out.freeze()


def remove_epsilon(t: Wfst) -> Wfst:
    """Eliminate arcs with both labels epsilon; the weighted relation is kept.

    For each state the tropical epsilon-closure distances are folded into the
    outgoing non-epsilon arcs and final weights.
    """
    if t.start is None:
        return t

    def eps_closure(src: int) -> dict[int, float]:
        dist = {src: 0.0}
        heap = [(0.0, src)]
        while heap:
            d, s = heapq.heappop(heap)
            if d > dist.get(s, INF):
                continue
            for a in t.arcs(s):
                if a.ilabel == EPSILON_ID and a.olabel == EPSILON_ID:
                    nd = d + a.weight
                    if nd < dist.get(a.nextstate, INF):
                        dist[a.nextstate] = nd
                        heapq.heappush(heap, (nd, a.nextstate))
        return dist

    b = WfstBuilder(t.isyms, t.osyms)
    b.add_states(t.num_states)
    b.set_start(t.start)
    for s in t.states():
        closure_d = eps_closure(s)
        final = INF
        seen: dict[tuple[int, int, float, int], bool] = {}
        for v, d in sorted(closure_d.items()):
            fv = t.final_weight(v)
            if d + fv < final:
                final = d + fv
            for a in t.arcs(v):
                if a.ilabel == EPSILON_ID and a.olabel == EPSILON_ID:
                    continue
                key = (a.ilabel, a.olabel, d + a.weight, a.nextstate)
                if key not in seen:
                    seen[key] = True
                    b.add_arc(s, a.ilabel, a.olabel, d + a.weight, a.nextstate)
        if final < INF:
            b.set_final(s, final)
    return connect(b.freeze())


def _completion_costs(t: Wfst) -> list[float]:
    """Dijkstra over reversed arcs: cheapest cost from each state to accept."""
    dist = [INF] * t.num_states
    heap: list[tuple[float, int]] = []
    for s, w in t.final_states().items():
        dist[s] = w
        heapq.heappush(heap, (w, s))
    radj: dict[int, list[tuple[int, float]]] = {}
    for s in t.states():
        for a in t.arcs(s):
            radj.setdefault(a.nextstate, []).append((s, a.weight))
    while heap:
        d, s = heapq.heappop(heap)
        if d > dist[s]:
            continue
        for p, w in radj.get(s, ()):
            nd = d + w
            if nd < dist[p]:
                dist[p] = nd
                heapq.heappush(heap, (nd, p))
    return dist


def _is_cyclic(t: Wfst) -> bool:
    color = [0] * t.num_states  # 0 unseen, 1 on stack, 2 done
    for root in t.states():
        if color[root]:
            continue
        stack: list[tuple[int, int]] = [(root, 0)]
        color[root] = 1
        while stack:
            s, idx = stack[-1]
            arcs = t.arcs(s)
            if idx < len(arcs):
                stack[-1] = (s, idx + 1)
                nxt = arcs[idx].nextstate
                if color[nxt] == 1:
                    return True
                if color[nxt] == 0:
                    color[nxt] = 1
                    stack.append((nxt, 0))
            else:
                color[s] = 2
                stack.pop()
    return False


def _nbest_search(t: Wfst, n: int, unique_outputs: bool) -> list[Path]:
    """Best-first n-best over (cost, output sequence, input sequence).

    A* with the exact completion distance as heuristic: extending a partial
    path never decreases its key, so items pop in final-order and the first
    ``n`` completions are the answer.  With ``unique_outputs`` paths that
    rejoin a state with the same emitted output are dominated and pruned, and
    each distinct output is reported once at its cheapest path.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if t.start is None:
        return []
    h = _completion_costs(t)
    if h[t.start] == INF:
        return []
    iranks = t.isyms.sort_ranks()
    oranks = t.osyms.sort_ranks()
    cap = None if not _is_cyclic(t) else max(2 * n, n + 16)

    counter = 0
    # entry: (cost, oranks, iranks, seq, done, state, g, itoks, otoks)
    start_item = (h[t.start], (), (), 0, False, t.start, 0.0, (), ())
    heap = [start_item]
    pops: dict[int, int] = {}
    expanded: set[tuple[int, tuple[int, ...]]] = set()
    emitted: set[tuple[int, ...]] = set()
    results: list[Path] = []
    while heap and len(results) < n:
        cost, okey, ikey, _, done, state, g, itoks, otoks = heapq.heappop(heap)
        if done:
            if unique_outputs:
                if otoks in emitted:
                    continue
                emitted.add(otoks)
            results.append(
                Path(
                    tuple(t.isyms.symbol(l) for l in itoks),
                    tuple(t.osyms.symbol(l) for l in otoks),
                    cost,
                )
            )
            continue
        if unique_outputs:
            key = (state, otoks)
            if key in expanded:
                continue
            expanded.add(key)
        if cap is not None:
            seen = pops.get(state, 0)
            if seen >= cap:
                continue
            pops[state] = seen + 1
        fw = t.final_weight(state)
        if fw < INF:
            counter += 1
            heapq.heappush(heap, (g + fw, okey, ikey, counter, True, state, g, itoks, otoks))
        for a in t.arcs(state):
            nh = h[a.nextstate]
            if nh == INF:
                continue
            ng = g + a.weight
            nik, nit = (ikey, itoks) if a.ilabel == EPSILON_ID else (ikey + (iranks[a.ilabel],), itoks + (a.ilabel,))
            nok, not_ = (okey, otoks) if a.olabel == EPSILON_ID else (okey + (oranks[a.olabel],), otoks + (a.olabel,))
            counter += 1
            heapq.heappush(heap, (ng + nh, nok, nik, counter, False, a.nextstate, ng, nit, not_))
    return results


def shortest_paths(t: Wfst, n: int) -> list[Path]:
    """The ``n`` lowest-cost accepting paths, ascending.

    Ties are broken by lexicographic order of the output token sequence, then
    the input sequence.  Distinct arc sequences count as distinct paths.  On
    cyclic machines expansion is bounded per state (weight-correct; tie order
    beyond the bound is best-effort).
    """
    return _nbest_search(t, n, unique_outputs=False)


def nbest_outputs(t: Wfst, n: int) -> list[Path]:
    """The ``n`` cheapest distinct output token sequences, ascending, each at
    the cost of its cheapest path (ties by output, then input sequence)."""
    return _nbest_search(t, n, unique_outputs=True)


def write_text(t: Wfst) -> str:
    """Serialize to the line-oriented text format.

    Arc lines are ``src dst isym osym weight``; final lines ``state weight``.
    The start state's arcs come first, then remaining states ascending, then
    finals ascending.  A machine whose start has no arcs leads with its final
    line (weight ``inf`` if the start is not accepting).
    """
    if t.start is None:
        return ""
    lines = []
    isym, osym = t.isyms.symbol, t.osyms.symbol
    order = [t.start] + [s for s in t.states() if s != t.start]
    if not t.arcs(t.start):
        lines.append(f"{t.start} {_fmt(t.final_weight(t.start))}")
    for s in order:
        for a in t.arcs(s):
            lines.append(f"{s} {a.nextstate} {isym(a.ilabel)} {osym(a.olabel)} {_fmt(a.weight)}")
    for s in sorted(t.final_states()):
        if s == t.start and not t.arcs(t.start):
            continue
        lines.append(f"{s} {_fmt(t.final_weight(s))}")
    return "\n".join(lines) + "\n"


def _fmt(w: float) -> str:
    return repr(w) if w != INF else "inf"


def read_text(text: str, isyms: SymbolTable, osyms: SymbolTable | None = None) -> Wfst:
    """Parse the text format produced by :func:`write_text`."""
    if osyms is None:
        osyms = isyms
    arcs: list[tuple[int, int, str, str, float]] = []
    finals: dict[int, float] = {}
    start: int | None = None
    max_state = -1
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        fields = line.split()
        try:
            if len(fields) in (4, 5):
                src, dst = int(fields[0]), int(fields[1])
                w = float(fields[4]) if len(fields) == 5 else 0.0
                arcs.append((src, dst, fields[2], fields[3], w))
                max_state = max(max_state, src, dst)
            elif len(fields) in (1, 2):
                s = int(fields[0])
                w = float(fields[1]) if len(fields) == 2 else 0.0
                if w != INF:
                    finals[s] = w
                max_state = max(max_state, s)
            else:
                raise ValueError("bad field count")
        except ValueError as e:
            raise ValueError(f"fst text line {lineno}: {e}") from None
        if start is None:
            start = int(fields[0])
    b = WfstBuilder(isyms, osyms)
    if start is None:
        return b.freeze()
    b.add_states(max_state + 1)
    b.set_start(start)
    for src, dst, il, ol, w in arcs:
        b.add_arc(src, isyms.index(il), osyms.index(ol), w, dst)
    for s, w in finals.items():
        b.set_final(s, w)
    return b.freeze()


def save(t: Wfst, path: str) -> None:
    """Write ``path`` plus ``path.isyms`` / ``path.osyms`` sidecar tables."""
    with open(path, "w", encoding="utf-8") as f:
        f.write(write_text(t))
    with open(path + ".isyms", "w", encoding="utf-8") as f:
        f.write(t.isyms.to_text())
    with open(path + ".osyms", "w", encoding="utf-8") as f:
        f.write(t.osyms.to_text())


def load(path: str) -> Wfst:
    """Read a machine written by :func:`save`."""
    with open(path + ".isyms", encoding="utf-8") as f:
        isyms = SymbolTable.from_text(f.read())
    with open(path + ".osyms", encoding="utf-8") as f:
        osyms_text = f.read()
    osyms = SymbolTable.from_text(osyms_text)
    if osyms == isyms:
        osyms = isyms
    with open(path, encoding="utf-8") as f:
        return read_text(f.read(), isyms, osyms)
