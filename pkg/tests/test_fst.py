import math
import random

import pytest

from conftest import assert_relations_equal, random_wfst
from oracles import best_paths, compose_relations, relation

from oovkit.fst import (
    EPSILON,
    SymbolTable,
    TableMismatch,
    Tropical,
    UnknownSymbol,
    WfstBuilder,
    closure,
    compose,
    concat,
    identity_transducer,
    invert,
    linear_acceptor,
    project,
    read_text,
    remove_epsilon,
    shortest_paths,
    union,
    write_text,
)

INF = math.inf


class TestTropical:
    def test_axioms(self):
        rng = random.Random(7)
        vals = [0.0, 1.0, 2.5, 1e-9, 100.0, INF] + [rng.uniform(0, 50) for _ in range(200)]
        for a in vals:
            assert Tropical.plus(a, a) == a  # idempotent
            assert Tropical.plus(a, Tropical.zero) == a
            assert Tropical.times(a, Tropical.one) == a
            assert Tropical.times(Tropical.zero, a) == INF  # annihilator
            for b in vals[:20]:
                assert Tropical.plus(a, b) == min(a, b)
                if a < INF and b < INF:
                    assert Tropical.times(a, b) == a + b

    def test_distributivity_on_grid(self):
        grid = [0.0, 0.5, 1.0, 2.0, INF]
        for a in grid:
            for b in grid:
                for c in grid:
                    lhs = Tropical.times(a, Tropical.plus(b, c))
                    rhs = Tropical.plus(Tropical.times(a, b), Tropical.times(a, c))
                    assert lhs == rhs


class TestSymbolTable:
    def test_epsilon_reserved(self):
        t = SymbolTable(["a", "b"])
        assert t.index(EPSILON) == 0
        assert t.symbol(0) == EPSILON
        assert t.index("a") == 1 and t.symbol(2) == "b"

    def test_unknown_lookup_raises(self):
        t = SymbolTable(["a"])
        with pytest.raises(UnknownSymbol):
            t.index("zz")
        with pytest.raises(UnknownSymbol):
            t.symbol(99)

    def test_add_is_idempotent(self):
        t = SymbolTable()
        assert t.add_symbol("x") == t.add_symbol("x") == 1
        assert len(t) == 2

    def test_round_trip_text(self):
        t = SymbolTable(["a", "kk", "Z"])
        assert SymbolTable.from_text(t.to_text()) == t


def letters(*syms):
    return SymbolTable(syms)


class TestLinearAcceptor:
    def test_kris_chain(self):
        syms = letters("k", "r", "i", "s")
        m = linear_acceptor(["k", "r", "i", "s"], syms)
        assert m.num_states == 5
        paths = shortest_paths(m, 2)
        assert len(paths) == 1
        assert paths[0].ilabels == ("k", "r", "i", "s")
        assert paths[0].weight == 0.0

    def test_empty_sequence(self):
        syms = letters("a")
        m = linear_acceptor([], syms)
        assert m.num_states == 1
        assert m.final_weight(m.start) == 0.0

    def test_identity_composition_weight(self):
        syms = letters("a")
        m = linear_acceptor(["a", "a"], syms)
        c = compose(m, identity_transducer(syms))
        paths = shortest_paths(c, 1)
        assert paths[0].weight == 0.0
        assert paths[0].olabels == ("a", "a")

    def test_unknown_token(self):
        syms = letters("a")
        with pytest.raises(UnknownSymbol, match="b"):
            linear_acceptor(["a", "b"], syms)


class TestCompose:
    def test_single_path_weights_add(self):
        sx, sy, sz = letters("x"), letters("y"), letters("z")
        a = WfstBuilder(sx, sy)
        a.add_states(2)
        a.set_start(0)
        a.add_arc(0, "x", "y", 0.5, 1)
        a.set_final(1)
        b = WfstBuilder(sy, sz)
        b.add_states(2)
        b.set_start(0)
        b.add_arc(0, "y", "z", 0.25, 1)
        b.set_final(1)
        c = compose(a.freeze(), b.freeze())
        rel = relation(c, c.num_states)
        assert_relations_equal(rel, {((1,), (1,)): 0.75})

    def test_table_mismatch(self):
        a = identity_transducer(letters("a"))
        b = identity_transducer(letters("b"))
        with pytest.raises(TableMismatch):
            compose(a, b)

    def test_identity_preserves_relation(self):
        rng = random.Random(11)
        syms = letters("a", "b", "c")
        ident = identity_transducer(syms)
        for _ in range(25):
            m = random_wfst(rng, syms)
            c = compose(m, ident)
            assert_relations_equal(relation(c, 8), relation(m, 8))

    def test_random_pairs_against_path_pairing(self):
        rng = random.Random(23)
        syms = letters("a", "b", "c", "d")
        for _ in range(60):
            a = random_wfst(rng, syms, syms)
            b = random_wfst(rng, syms, syms)
            want = compose_relations(relation(a, a.num_states), relation(b, b.num_states))
            c = compose(a, b)
            assert_relations_equal(relation(c, c.num_states), want)

    def test_associativity(self):
        rng = random.Random(5)
        syms = letters("a", "b")
        for _ in range(20):
            a = random_wfst(rng, syms, max_states=4)
            b = random_wfst(rng, syms, max_states=4)
            c = random_wfst(rng, syms, max_states=4)
            left = compose(compose(a, b), c)
            right = compose(a, compose(b, c))
            assert_relations_equal(relation(left, left.num_states), relation(right, right.num_states))


class TestInvert:
    def test_involution(self):
        rng = random.Random(3)
        syms, osyms = letters("a", "b"), letters("p", "q")
        for _ in range(20):
            m = random_wfst(rng, syms, osyms)
            assert invert(invert(m)) == m

    def test_single_arc(self):
        si, so = letters("c"), letters("k")
        b = WfstBuilder(si, so)
        b.add_states(2)
        b.set_start(0)
        b.add_arc(0, "c", "k", 0.0, 1)
        b.set_final(1)
        inv = invert(b.freeze())
        arc = inv.arcs(0)[0]
        assert inv.isyms.symbol(arc.ilabel) == "k"
        assert inv.osyms.symbol(arc.olabel) == "c"

    def test_path_sets_swap(self):
        rng = random.Random(17)
        syms, osyms = letters("a", "b", "c"), letters("x", "y")
        for _ in range(20):
            m = random_wfst(rng, syms, osyms)
            direct = relation(m, m.num_states)
            swapped = {(o, i): w for (i, o), w in direct.items()}
            assert_relations_equal(relation(invert(m), m.num_states), swapped)


class TestProject:
    def test_output_projection(self):
        si, so = letters("x"), letters("y")
        b = WfstBuilder(si, so)
        b.add_states(2)
        b.set_start(0)
        b.add_arc(0, "x", "y", 1.0, 1)
        b.set_final(1)
        p = project(b.freeze(), "output")
        assert p.is_acceptor()
        rel = relation(p, 2)
        assert_relations_equal(rel, {((1,), (1,)): 1.0})
        assert p.isyms.symbol(1) == "y"

    def test_input_projection_of_acceptor_is_identity(self):
        syms = letters("a", "b")
        m = linear_acceptor(["a", "b"], syms)
        assert project(m, "input") == m

    def test_preserves_shortest_path_weight(self):
        rng = random.Random(29)
        syms, osyms = letters("a", "b"), letters("x", "y")
        for _ in range(20):
            m = random_wfst(rng, syms, osyms)
            best = shortest_paths(m, 1)
            for side in ("input", "output"):
                pbest = shortest_paths(project(m, side), 1)
                assert (not best) == (not pbest)
                if best:
                    assert abs(pbest[0].weight - best[0].weight) <= 1e-9


class TestShortestPaths:
    def _two_path_machine(self):
        syms = letters("a", "b")
        b = WfstBuilder(syms, syms)
        b.add_states(2)
        b.set_start(0)
        b.add_arc(0, "a", "a", 1.0, 1)
        b.add_arc(0, "b", "b", 2.0, 1)
        b.set_final(1)
        return b.freeze()

    def test_picks_cheapest(self):
        paths = shortest_paths(self._two_path_machine(), 1)
        assert len(paths) == 1
        assert paths[0].weight == 1.0
        assert paths[0].olabels == ("a",)

    def test_n_larger_than_path_count(self):
        paths = shortest_paths(self._two_path_machine(), 10)
        assert [p.weight for p in paths] == [1.0, 2.0]

    def test_empty_and_dead_machines(self):
        syms = letters("a")
        empty = WfstBuilder(syms).freeze()
        assert shortest_paths(empty, 3) == []
        b = WfstBuilder(syms)
        b.add_states(2)
        b.set_start(0)
        b.add_arc(0, "a", "a", 0.0, 1)  # state 1 not final: no accepting path
        assert shortest_paths(b.freeze(), 3) == []

    def test_matches_enumeration_on_random_machines(self):
        rng = random.Random(41)
        syms = letters("a", "b", "c")
        for _ in range(100):
            m = random_wfst(rng, syms)
            n = rng.randint(1, 8)
            want = best_paths(m, n, m.num_states)
            got = [(p.weight, p.olabels, p.ilabels) for p in shortest_paths(m, n)]
            assert len(got) == len(want)
            for g, w in zip(got, want):
                assert g[1:] == w[1:]
                assert abs(g[0] - w[0]) <= 1e-9

    def test_deterministic_tie_break_on_cyclic_machine(self):
        # 0-weight flower: best paths are ordered lexicographically by output.
        syms = letters("a", "b")
        flower = identity_transducer(syms)
        paths = shortest_paths(flower, 4)
        assert [p.olabels for p in paths] == [(), ("a",), ("a", "a"), ("a", "a", "a")]


class TestRationalOps:
    def test_union(self):
        syms = letters("a", "b")
        a = WfstBuilder(syms)
        a.add_states(2)
        a.set_start(0)
        a.add_arc(0, "a", "a", 1.0, 1)
        a.set_final(1)
        b = WfstBuilder(syms)
        b.add_states(2)
        b.set_start(0)
        b.add_arc(0, "b", "b", 2.0, 1)
        b.set_final(1)
        u = remove_epsilon(union(a.freeze(), b.freeze()))
        assert_relations_equal(relation(u, u.num_states), {((1,), (1,)): 1.0, ((2,), (2,)): 2.0})

    def test_concat(self):
        syms = letters("a", "b")
        a = linear_acceptor(["a"], syms)
        a_w = WfstBuilder(syms)
        a_w.add_states(2)
        a_w.set_start(0)
        a_w.add_arc(0, "a", "a", 1.0, 1)
        a_w.set_final(1)
        b_w = WfstBuilder(syms)
        b_w.add_states(2)
        b_w.set_start(0)
        b_w.add_arc(0, "b", "b", 2.0, 1)
        b_w.set_final(1)
        c = remove_epsilon(concat(a_w.freeze(), b_w.freeze()))
        assert_relations_equal(relation(c, c.num_states), {((1, 2), (1, 2)): 3.0})

    def test_closure(self):
        syms = letters("a")
        a = WfstBuilder(syms)
        a.add_states(2)
        a.set_start(0)
        a.add_arc(0, "a", "a", 1.0, 1)
        a.set_final(1)
        c = closure(a.freeze())
        paths = shortest_paths(c, 3)
        assert [(p.olabels, p.weight) for p in paths] == [
            ((), 0.0),
            (("a",), 1.0),
            (("a", "a"), 2.0),
        ]


class TestRemoveEpsilon:
    def test_folds_epsilon_bridge(self):
        syms = letters("a", "b")
        b = WfstBuilder(syms)
        b.add_states(4)
        b.set_start(0)
        b.add_arc(0, "a", "a", 0.0, 1)
        b.add_arc(1, EPSILON, EPSILON, 0.5, 2)
        b.add_arc(2, "b", "b", 0.0, 3)
        b.set_final(3)
        m = remove_epsilon(b.freeze())
        assert all(not (a.ilabel == 0 and a.olabel == 0) for s in m.states() for a in m.arcs(s))
        assert_relations_equal(relation(m, m.num_states), {((1, 2), (1, 2)): 0.5})

    def test_epsilon_free_relation_unchanged(self):
        syms = letters("a", "b")
        m = linear_acceptor(["a", "b"], syms)
        assert_relations_equal(relation(remove_epsilon(m), 4), relation(m, 4))

    def test_random_machines_relation_equality(self):
        rng = random.Random(53)
        syms = letters("a", "b")
        for _ in range(50):
            m = random_wfst(rng, syms, eps=0.35)
            r = remove_epsilon(m)
            assert all(not (a.ilabel == 0 and a.olabel == 0) for s in r.states() for a in r.arcs(s))
            assert_relations_equal(relation(r, 10), relation(m, 10))


class TestTextFormat:
    def test_round_trip_bytes(self):
        rng = random.Random(61)
        syms, osyms = letters("a", "b"), letters("x", "y")
        for _ in range(25):
            m = random_wfst(rng, syms, osyms)
            text = write_text(m)
            again = read_text(text, m.isyms, m.osyms)
            assert write_text(again) == text
            assert_relations_equal(relation(again, m.num_states), relation(m, m.num_states))

    def test_default_weight_is_zero(self):
        syms = letters("a")
        m = read_text("0 1 a a\n1\n", syms)
        assert m.arcs(0)[0].weight == 0.0
        assert m.final_weight(1) == 0.0

    def test_start_is_first_src(self):
        syms = letters("a")
        m = read_text("2 0 a a 0.5\n0 1.0\n", syms)
        assert m.start == 2
        assert m.final_weight(0) == 1.0
