"""Finite-model shrink, size bound, and the bounded exhaustive finder."""

import random

import pytest

from numlog.errors import BudgetExhaustedError, InputError
from numlog.logic import (AT_LEAST, AT_MOST, Lit, RelationalAtom, at_least,
                          at_most, evaluate, structure)
from numlog.n2 import bounded_search, shrink_model, size_bound
from numlog.parsing import parse_english, Lexicon


class TestSizeBound:
    def test_single_sentence(self):
        assert size_bound([at_least(1, Lit("p"), Lit("p"))]) == 4

    def test_argument_two_set(self):
        # the seven-premise relational argument plus its negated conclusion:
        # five nouns, largest bound 8, eight sentences
        lex = Lexicon(frozenset({"artist", "beekeeper", "carpenter",
                                 "dentist", "electrician"}),
                      frozenset({"admire"}))
        text = """
        At most 1 artist admires at most 7 beekeepers
        At most 2 carpenters admire at most 8 dentists
        At most 3 artists admire at least 7 electricians
        At most 4 beekeepers are not electricians
        At most 5 dentists are not electricians
        At most 1 beekeeper is a dentist
        Therefore:
        At most 6 artists are carpenters
        """
        arg = parse_english(text, lex)
        from numlog.logic import negate_atom
        atoms = list(arg.premises) + [negate_atom(arg.conclusion)]
        assert len(atoms) == 7
        # negating "at most 6" gives bound 7; largest bound is 8
        assert size_bound(atoms) == 32 * (8 * 7 + 1)

    def test_empty_set(self):
        assert size_bound([]) == 1


class TestShrinkModel:
    def test_small_model_only_thins_edges(self):
        phi = [RelationalAtom(AT_LEAST, 1, "p", "r", AT_LEAST, 1, "q")]
        s = structure(3, {"p": {0}, "q": {1, 2}}, {"r": {(0, 1), (0, 2)}})
        report = shrink_model(s, phi)
        assert report.structure.domain_size == 3
        assert all(evaluate(report.structure, a) for a in phi)

    def test_long_chain_shrinks(self):
        n = 100
        phi = [RelationalAtom(AT_LEAST, 1, "p", "r", AT_LEAST, 1, "q")]
        s = structure(n, {"p": set(range(n)), "q": set(range(n))},
                      {"r": {(i, (i + 1) % n) for i in range(n)}})
        report = shrink_model(s, phi)
        assert report.structure.domain_size <= size_bound(phi)
        assert all(evaluate(report.structure, a) for a in phi)

    def test_witnesses_are_retained(self):
        phi = [RelationalAtom(AT_LEAST, 2, "p", "r", AT_LEAST, 1, "q"),
               at_most(30, Lit("p"), Lit("p"))]
        s = structure(30, {"p": set(range(30)), "q": set(range(30))},
                      {"r": {(i, i) for i in range(30)}})
        report = shrink_model(s, phi)
        out = report.structure
        assert all(evaluate(out, a) for a in phi)
        # the designated witnesses of the outer >=2 survive the shrink
        assert report.witnesses
        assert report.witnesses <= set(report.kept_elements)
        assert out.domain_size <= size_bound(phi)

    def test_witness_retention_randomized(self):
        rng = random.Random(179)
        for _ in range(20):
            n = rng.randint(2, 25)
            s = structure(
                n,
                {"p": {e for e in range(n) if rng.random() < 0.6},
                 "q": {e for e in range(n) if rng.random() < 0.6}},
                {"r": {(a, b) for a in range(n) for b in range(n)
                       if rng.random() < 0.3}})
            cand = RelationalAtom(AT_LEAST, 1, "p", "r", AT_LEAST, 1, "q")
            if not evaluate(s, cand):
                continue
            report = shrink_model(s, [cand])
            assert report.witnesses <= set(report.kept_elements)

    def test_random_pairs_harness(self):
        rng = random.Random(83)
        done = 0
        while done < 50:
            n = rng.randint(1, 40)
            s = structure(
                n,
                {"p": {e for e in range(n) if rng.random() < 0.5},
                 "q": {e for e in range(n) if rng.random() < 0.5}},
                {"r": {(a, b) for a in range(n) for b in range(n)
                       if rng.random() < 0.2}})
            phi = []
            for _ in range(rng.randint(1, 4)):
                if rng.random() < 0.5:
                    a = RelationalAtom(
                        AT_LEAST if rng.random() < 0.5 else AT_MOST,
                        rng.randint(0, 2), rng.choice(["p", "q"]), "r",
                        AT_LEAST if rng.random() < 0.5 else AT_MOST,
                        rng.randint(0, 2), rng.choice(["p", "q"]))
                else:
                    a = at_least(rng.randint(0, 2), Lit("p"), Lit("q")) \
                        if rng.random() < 0.5 else \
                        at_most(n, Lit(rng.choice(["p", "q"])),
                                Lit(rng.choice(["p", "q"])))
                if evaluate(s, a):
                    phi.append(a)
            if not phi:
                continue
            report = shrink_model(s, phi)
            assert all(evaluate(report.structure, a) for a in phi)
            assert report.structure.domain_size <= size_bound(phi)
            done += 1

    def test_rejects_non_model(self):
        phi = [at_least(1, Lit("p"), Lit("p"))]
        s = structure(1, {"p": set()}, {})
        with pytest.raises(InputError):
            shrink_model(s, phi)


class TestBoundedSearch:
    def test_simple_witness(self):
        phi = [RelationalAtom(AT_LEAST, 1, "p", "r", AT_MOST, 0, "p")]
        model = bounded_search(phi, 4)
        assert model is not None
        assert all(evaluate(model, a) for a in phi)

    def test_unsatisfiable_tiny_set(self):
        phi = [RelationalAtom(AT_LEAST, 2, "p", "r", AT_LEAST, 1, "q"),
               at_most(1, Lit("p"), Lit("p")),
               at_most(0, Lit("q"), Lit("q"))]
        assert bounded_search(phi, size_bound(phi), budget=3_000_000) is None

    def test_complete_up_to_bound_for_unary(self):
        # agreement with the one-variable solver on relational-free sets
        from numlog.c1 import decide_sat, SAT
        rng = random.Random(89)
        for _ in range(25):
            atoms = [at_least(rng.randint(0, 2), Lit("p"), Lit("q"))
                     if rng.random() < 0.5 else
                     at_most(rng.randint(0, 2), Lit("p"),
                             Lit("q", rng.random() < 0.5))
                     for _ in range(rng.randint(1, 3))]
            via_c1 = decide_sat(atoms).status == SAT
            found = bounded_search(atoms, size_bound(atoms),
                                   budget=2_000_000)
            assert (found is not None) == via_c1

    def test_budget_is_distinct_from_no_model(self):
        phi = [RelationalAtom(AT_LEAST, 2, "p", "r", AT_LEAST, 2, "q")]
        with pytest.raises(BudgetExhaustedError):
            bounded_search(phi, size_bound(phi), budget=3)
