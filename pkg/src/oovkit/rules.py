"""Context-dependent rewrite rules and their compilation to transducers.

A rule ``PHI -> PSI / LAMBDA _ RHO`` rewrites any occurrence of PHI whose
left context matches LAMBDA and right context matches RHO.  PHI, LAMBDA and
RHO are regular expressions over whitespace-separated tokens with ``|``,
grouping and ``?`` (no star, so every pattern denotes a finite set of token
sequences).  Contexts are always evaluated against the original input.

Obligatory rules apply left to right with leftmost-longest match and compile
to functional transducers; rules flagged ``optional`` may or may not apply at
each occurrence and compile to a union with identity, which is what makes the
inverted cascade productive for phoneme-to-grapheme candidate generation.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from oovkit.fst import (
    SymbolTable,
    Wfst,
    WfstBuilder,
    compose,
    connect,
    identity_transducer,
    invert,
    linear_acceptor,
    nbest_outputs,
    project,
    remove_epsilon,
)

BOS = "[BOS]"
EOS = "[EOS]"

_MAX_EXPANSION = 20000


class RuleSyntaxError(ValueError):
    """Rule file parse failure; message carries the 1-based line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class RewriteRule:
    """One parsed rule; phi/lam/rho are the expanded finite token languages."""

    phi: tuple[tuple[str, ...], ...]
    psi: tuple[str, ...]
    lam: tuple[tuple[str, ...], ...] = ((),)
    rho: tuple[tuple[str, ...], ...] = ((),)
    bos: bool = False
    eos: bool = False
    weight: float = 0.0
    optional: bool = False


@dataclass
class RuleSet:
    rules: list[RewriteRule]
    graphemes: SymbolTable
    phonemes: SymbolTable
    symbols: SymbolTable = field(default=None)  # union alphabet used for compilation

    def __post_init__(self):
        if self.symbols is None:
            combined = SymbolTable()
            for sym in self.graphemes:
                if sym != "<eps>":
                    combined.add_symbol(sym)
            for sym in self.phonemes:
                if sym != "<eps>":
                    combined.add_symbol(sym)
            self.symbols = combined


def _expand_regex(tokens: list[str], lineno: int) -> set[tuple[str, ...]]:
    """Finite language of a token regex with ``|``, ``( )`` and ``?``."""

    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def parse_expr() -> set[tuple[str, ...]]:
        nonlocal pos
        alts = parse_seq()
        while peek() == "|":
            pos += 1
            alts = alts | parse_seq()
        return alts

    def parse_seq() -> set[tuple[str, ...]]:
        nonlocal pos
        acc: set[tuple[str, ...]] = {()}
        while peek() is not None and peek() not in ("|", ")"):
            term = parse_term()
            acc = {a + t for a in acc for t in term}
            if len(acc) > _MAX_EXPANSION:
                raise RuleSyntaxError(lineno, "pattern expands to too many alternatives")
        return acc

    def parse_term() -> set[tuple[str, ...]]:
        nonlocal pos
        tok = peek()
        if tok == "(":
            pos += 1
            inner = parse_expr()
            if peek() != ")":
                raise RuleSyntaxError(lineno, "unbalanced parentheses in pattern")
            pos += 1
        elif tok in (")", "?", "|"):
            raise RuleSyntaxError(lineno, f"unexpected {tok!r} in pattern")
        elif tok == "0":
            pos += 1
            inner = {()}
        else:
            pos += 1
            inner = {(tok,)}
        if peek() == "?":
            pos += 1
            inner = inner | {()}
        return inner

    if not tokens:
        return {()}
    lang = parse_expr()
    if pos != len(tokens):
        raise RuleSyntaxError(lineno, f"trailing {tokens[pos]!r} in pattern")
    return lang


def _parse_rule_line(lineno: int, line: str) -> RewriteRule:
    toks = line.split()
    if toks and toks[-1] == ";":
        toks = toks[:-1]
    elif toks and toks[-1].endswith(";"):
        toks = toks[:-1] + [toks[-1][:-1]]

    optional = False
    if toks and toks[-1] == "optional":
        optional = True
        toks = toks[:-1]
    weight = 0.0
    if toks and toks[-1].startswith("<") and toks[-1].endswith(">") and toks[-1] not in (BOS, EOS):
        try:
            weight = float(toks[-1][1:-1])
        except ValueError:
            raise RuleSyntaxError(lineno, f"bad weight {toks[-1]!r}") from None
        if weight < 0:
            raise RuleSyntaxError(lineno, "rule weight must be >= 0")
        toks = toks[:-1]

    if "->" not in toks:
        raise RuleSyntaxError(lineno, "missing '->'")
    arrow = toks.index("->")
    phi_toks = toks[:arrow]
    rest = toks[arrow + 1 :]
    if "/" in rest:
        slash = rest.index("/")
        psi_toks = rest[:slash]
        ctx = rest[slash + 1 :]
        if ctx.count("_") != 1:
            raise RuleSyntaxError(lineno, "context must contain exactly one '_'")
        underscore = ctx.index("_")
        lam_toks = ctx[:underscore]
        rho_toks = ctx[underscore + 1 :]
    else:
        psi_toks = rest
        lam_toks, rho_toks = [], []

    if not phi_toks:
        raise RuleSyntaxError(lineno, "rule has no match pattern before '->'")
    if not psi_toks:
        raise RuleSyntaxError(lineno, "rule has no output (use 0 for deletion)")

    bos = False
    if BOS in lam_toks:
        if lam_toks[0] != BOS or lam_toks.count(BOS) > 1:
            raise RuleSyntaxError(lineno, f"{BOS} may only appear leftmost in the left context")
        bos = True
        lam_toks = lam_toks[1:]
    eos = False
    if EOS in rho_toks:
        if rho_toks[-1] != EOS or rho_toks.count(EOS) > 1:
            raise RuleSyntaxError(lineno, f"{EOS} may only appear rightmost in the right context")
        eos = True
        rho_toks = rho_toks[:-1]
    for name, seq in (("match", phi_toks), ("output", psi_toks), ("left context", lam_toks), ("right context", rho_toks)):
        for special in (BOS, EOS):
            if special in seq:
                raise RuleSyntaxError(lineno, f"{special} not allowed in {name}")

    phi = _expand_regex(phi_toks, lineno)
    if () in phi:
        raise RuleSyntaxError(lineno, "match pattern must not accept the empty string")
    psi = tuple(t for t in psi_toks if t != "0")
    if any(t in ("|", "(", ")", "?") for t in psi_toks):
        raise RuleSyntaxError(lineno, "output must be a literal token sequence")
    lam = _expand_regex(lam_toks, lineno)
    rho = _expand_regex(rho_toks, lineno)
    return RewriteRule(
        phi=tuple(sorted(phi)),
        psi=psi,
        lam=tuple(sorted(lam)),
        rho=tuple(sorted(rho)),
        bos=bos,
        eos=eos,
        weight=weight,
        optional=optional,
    )


def parse_rules(text: str) -> RuleSet:
    """Parse a rule file into rules plus the collected alphabets."""
    graphemes = SymbolTable()
    phonemes = SymbolTable()
    rules: list[RewriteRule] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("!alphabet:"):
            for sym in line[len("!alphabet:") :].split():
                graphemes.add_symbol(sym)
            continue
        if line.startswith("!phonemes:"):
            for sym in line[len("!phonemes:") :].split():
                phonemes.add_symbol(sym)
            continue
        rule = _parse_rule_line(lineno, line)
        for seq in rule.phi + rule.lam + rule.rho:
            for tok in seq:
                graphemes.add_symbol(tok)
        for tok in rule.psi:
            phonemes.add_symbol(tok)
        rules.append(rule)
    return RuleSet(rules=rules, graphemes=graphemes, phonemes=phonemes)


class _ContextMatcher:
    """DFA over tokens; after consuming a prefix, tells whether the left
    context matches at the current boundary.

    Unanchored: true iff some language member is a suffix of the consumed
    prefix.  Anchored (BOS): true iff the whole consumed prefix is a member.
    """

    def __init__(self, lang: tuple[tuple[str, ...], ...], anchored: bool, sigma: list[str]):
        self._lang = lang
        self._anchored = anchored
        items0 = frozenset((ci, 0) for ci in range(len(lang))) if anchored else frozenset()
        self._ids: dict[frozenset, int] = {items0: 0}
        self._accept: list[bool] = [self._is_accepting(items0)]
        self._step: list[dict[str, int]] = [{}]
        queue = deque([items0])
        while queue:
            items = queue.popleft()
            sid = self._ids[items]
            for tok in sigma:
                nxt = set()
                for ci, pos in items:
                    cand = lang[ci]
                    if pos < len(cand) and cand[pos] == tok:
                        nxt.add((ci, pos + 1))
                if not anchored:
                    for ci, cand in enumerate(lang):
                        if cand and cand[0] == tok:
                            nxt.add((ci, 1))
                key = frozenset(nxt)
                nid = self._ids.get(key)
                if nid is None:
                    nid = self._ids[key] = len(self._accept)
                    self._accept.append(self._is_accepting(key))
                    self._step.append({})
                    queue.append(key)
                self._step[sid][tok] = nid

    def _is_accepting(self, items: frozenset) -> bool:
        if not self._anchored and () in self._lang:
            return True
        return any(pos == len(self._lang[ci]) for ci, pos in items)

    @property
    def start(self) -> int:
        return 0

    def step(self, state: int, tok: str) -> int:
        return self._step[state][tok]

    def accepting(self, state: int) -> bool:
        return self._accept[state]


def _rho_status(rule: RewriteRule, rest: tuple[str, ...], at_end: bool) -> int:
    """1 = right context certainly matches, -1 = certainly not, 0 = unknown."""
    if rule.eos:
        if at_end:
            return 1 if rest in rule.rho else -1
        return 0 if any(len(r) >= len(rest) and r[: len(rest)] == rest for r in rule.rho) else -1
    if any(len(r) <= len(rest) and rest[: len(r)] == r for r in rule.rho):
        return 1
    if at_end:
        return -1
    if any(len(r) > len(rest) and r[: len(rest)] == rest for r in rule.rho):
        return 0
    return -1


def _add_path(b: WfstBuilder, src: int, dst: int, in_label: int, out_labels: list[int], cost: float) -> None:
    """Arc chain from src to dst: input on the first arc, outputs spread out."""
    n = max(1, len(out_labels))
    cur = src
    for k in range(n):
        il = in_label if k == 0 else 0
        ol = out_labels[k] if k < len(out_labels) else 0
        nxt = dst if k == n - 1 else b.add_state()
        b.add_arc(cur, il, ol, cost if k == 0 else 0.0, nxt)
        cur = nxt


def _compile_obligatory(rule: RewriteRule, symbols: SymbolTable) -> Wfst:
    """Deterministic rewriter with bounded lookahead buffering.

    Machine states are (left-context DFA state, undecided input buffer); a
    buffered token is released as soon as the leftmost-longest decision at the
    buffer front is settled, which bounds the buffer by max |phi| + max |rho|.
    """
    sigma = [symbols.symbol(i) for i in range(1, len(symbols))]
    lam_dfa = _ContextMatcher(rule.lam, rule.bos, sigma)
    phi_by_len = sorted(rule.phi, key=lambda c: (-len(c), c))

    def decide(dstate: int, buf: tuple[str, ...], at_end: bool):
        if not lam_dfa.accepting(dstate):
            return ("pass", None)
        for cand in phi_by_len:
            size = len(cand)
            if len(buf) >= size:
                if buf[:size] == cand:
                    st = _rho_status(rule, buf[size:], at_end)
                    if st == 1:
                        return ("match", cand)
                    if st == 0:
                        return ("unknown", None)
            elif not at_end and cand[: len(buf)] == buf:
                return ("unknown", None)
        return ("pass", None)

    def resolve(dstate: int, buf: tuple[str, ...], at_end: bool):
        out: list[str] = []
        cost = 0.0
        while buf:
            verdict, cand = decide(dstate, buf, at_end)
            if verdict == "unknown":
                break
            if verdict == "pass":
                tok = buf[0]
                out.append(tok)
                dstate = lam_dfa.step(dstate, tok)
                buf = buf[1:]
            else:
                out.extend(rule.psi)
                cost += rule.weight
                for tok in cand:
                    dstate = lam_dfa.step(dstate, tok)
                buf = buf[len(cand) :]
        return dstate, buf, out, cost

    b = WfstBuilder(symbols, symbols)
    key0 = (lam_dfa.start, ())
    ids = {key0: b.add_state()}
    b.set_start(0)
    queue = deque([key0])
    order = [key0]
    while queue:
        key = queue.popleft()
        dstate, buf = key
        src = ids[key]
        for tok in sigma:
            nd, nbuf, out, cost = resolve(dstate, buf + (tok,), at_end=False)
            nkey = (nd, nbuf)
            dst = ids.get(nkey)
            if dst is None:
                dst = ids[nkey] = b.add_state()
                queue.append(nkey)
                order.append(nkey)
            _add_path(b, src, dst, symbols.index(tok), [symbols.index(o) for o in out], cost)
    for key in order:
        dstate, buf = key
        nd, nbuf, out, cost = resolve(dstate, buf, at_end=True)
        assert not nbuf, "end-of-input resolution must drain the buffer"
        if not out:
            b.set_final(ids[key], cost)
        else:
            sink = b.add_state()
            b.set_final(sink, 0.0)
            _add_path(b, ids[key], sink, 0, [symbols.index(o) for o in out], cost)
    return connect(b.freeze())


def _advance_obligations(obs: frozenset, tok: str):
    """Move every pending right-context check forward by one input token.

    Returns None when some check can no longer succeed (the path dies).
    Checks against end-of-input keep an empty residual alive until the end.
    """
    new = set()
    for eos, residuals in obs:
        nres = frozenset(r[1:] for r in residuals if r and r[0] == tok)
        if not eos and () in nres:
            continue
        if not nres:
            return None
        new.add((eos, nres))
    return frozenset(new)


def _compile_optional(rule: RewriteRule, symbols: SymbolTable) -> Wfst:
    """Union-with-identity rewriter: at each occurrence the rule may apply.

    Nondeterministic; every application branch carries its right-context
    requirement forward as an obligation verified by subsequent input.
    """
    sigma = [symbols.symbol(i) for i in range(1, len(symbols))]
    lam_dfa = _ContextMatcher(rule.lam, rule.bos, sigma)
    psi_labels = [symbols.index(t) for t in rule.psi]

    if rule.eos:
        fresh_ob = (True, frozenset(rule.rho))
    elif () in rule.rho:
        fresh_ob = None  # no right context: satisfied immediately
    else:
        fresh_ob = (False, frozenset(rule.rho))

    b = WfstBuilder(symbols, symbols)
    key0 = (lam_dfa.start, frozenset())
    ids = {key0: b.add_state()}
    b.set_start(0)
    queue = deque([key0])
    order = [key0]

    def intern(key):
        sid = ids.get(key)
        if sid is None:
            sid = ids[key] = b.add_state()
            queue.append(key)
            order.append(key)
        return sid

    while queue:
        key = queue.popleft()
        dstate, obs = key
        src = ids[key]
        for tok in sigma:
            nobs = _advance_obligations(obs, tok)
            if nobs is not None:
                lab = symbols.index(tok)
                b.add_arc(src, lab, lab, 0.0, intern((lam_dfa.step(dstate, tok), nobs)))
        if not lam_dfa.accepting(dstate):
            continue
        for cand in rule.phi:
            cur_d, cur_obs, dead = dstate, obs, False
            for tok in cand:
                cur_obs = _advance_obligations(cur_obs, tok)
                if cur_obs is None:
                    dead = True
                    break
                cur_d = lam_dfa.step(cur_d, tok)
            if dead:
                continue
            if fresh_ob is not None:
                cur_obs = cur_obs | {fresh_ob}
            dst = intern((cur_d, cur_obs))
            cand_labels = [symbols.index(t) for t in cand]
            n = max(len(cand_labels), len(psi_labels))
            cur = src
            for k in range(n):
                il = cand_labels[k] if k < len(cand_labels) else 0
                ol = psi_labels[k] if k < len(psi_labels) else 0
                nxt = dst if k == n - 1 else b.add_state()
                b.add_arc(cur, il, ol, rule.weight if k == 0 else 0.0, nxt)
                cur = nxt
    for key in order:
        _, obs = key
        if all(eos and () in residuals for eos, residuals in obs):
            b.set_final(ids[key], 0.0)
    return connect(b.freeze())


def compile_rule(rule: RewriteRule, symbols: SymbolTable) -> Wfst:
    """Compile one rule over the combined alphabet; unmatched symbols pass
    through identically."""
    for seq in rule.phi + rule.lam + rule.rho + (rule.psi,):
        for tok in seq:
            symbols.index(tok)
    if rule.optional:
        return _compile_optional(rule, symbols)
    return _compile_obligatory(rule, symbols)


def compile_ruleset(
    ruleset: RuleSet,
    force_optional: bool = False,
    inverse: bool = False,
) -> Wfst:
    """Compose the rules in file order into one cascade transducer.

    ``force_optional`` compiles every rule in may-apply mode (used to build a
    productive inverse); ``inverse`` inverts the finished cascade.
    """
    symbols = ruleset.symbols
    machine = None
    for rule in ruleset.rules:
        if force_optional and not rule.optional:
            rule = RewriteRule(
                phi=rule.phi, psi=rule.psi, lam=rule.lam, rho=rule.rho,
                bos=rule.bos, eos=rule.eos, weight=rule.weight, optional=True,
            )
        compiled = compile_rule(rule, symbols)
        machine = compiled if machine is None else remove_epsilon(compose(machine, compiled))
    if machine is None:
        machine = identity_transducer(symbols)
    machine = remove_epsilon(machine)
    return invert(machine) if inverse else machine


def apply(t: Wfst, s, n_best: int | None = None) -> list[tuple[tuple[str, ...], float]]:
    """Run a transducer over one token sequence.

    ``s`` may be a token sequence, a whitespace-joined token string, or a
    plain word (each character one token).  Returns (output tokens, cost)
    pairs, deduplicated per output keeping the cheapest derivation, ascending
    by cost then output.  Obligatory cascades yield exactly one pair.
    """
    if isinstance(s, str):
        tokens = s.split() if any(c.isspace() for c in s) else list(s)
    else:
        tokens = list(s)
    lattice = project(compose(linear_acceptor(tokens, t.isyms), t), "output")
    want = 16 if n_best is None else n_best
    while True:
        paths = nbest_outputs(lattice, want)
        exhausted = len(paths) < want
        if exhausted or n_best is not None or want >= 200000:
            items = [(p.olabels, p.weight) for p in paths]
            return items if n_best is None else items[:n_best]
        want *= 2
