import random

from oovkit.fst import SymbolTable, Wfst, WfstBuilder

# Weight grid deliberately includes repeats-by-sum so tie handling is exercised.
WEIGHT_GRID = (0.0, 0.25, 0.5, 0.5, 1.0, 1.5)


def random_wfst(
    rng: random.Random,
    isyms: SymbolTable,
    osyms: SymbolTable | None = None,
    max_states: int = 6,
    acyclic: bool = True,
    eps: float = 0.15,
    max_arcs_per_state: int = 3,
) -> Wfst:
    if osyms is None:
        osyms = isyms
    n = rng.randint(2, max_states)
    b = WfstBuilder(isyms, osyms)
    b.add_states(n)
    b.set_start(0)
    for s in range(n):
        if acyclic and s == n - 1:
            break
        for _ in range(rng.randint(1, max_arcs_per_state)):
            dst = rng.randint(s + 1, n - 1) if acyclic else rng.randint(0, n - 1)
            il = 0 if rng.random() < eps else rng.randint(1, len(isyms) - 1)
            ol = 0 if rng.random() < eps else rng.randint(1, len(osyms) - 1)
            b.add_arc(s, il, ol, rng.choice(WEIGHT_GRID), dst)
    b.set_final(n - 1, rng.choice(WEIGHT_GRID))
    for s in range(n - 1):
        if rng.random() < 0.25:
            b.set_final(s, rng.choice(WEIGHT_GRID))
    return b.freeze()


def assert_relations_equal(got: dict, want: dict, tol: float = 1e-9) -> None:
    assert set(got) == set(want), (
        f"relation key mismatch: extra={set(got) - set(want)} missing={set(want) - set(got)}"
    )
    for key, w in want.items():
        assert abs(got[key] - w) <= tol, f"weight mismatch at {key}: {got[key]} vs {w}"
