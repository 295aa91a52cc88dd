"""The satisfiability pipeline: normalization, system construction with
pruning, the decision procedure against a brute-force model-search oracle,
and entailment."""

import random
from itertools import product

import pytest

from numlog.c1 import (SAT, UNSAT, build_system, decide_sat, entails,
                       normalize)
from numlog.errors import InputError
from numlog.logic import (AT_LEAST, AT_MOST, And, Count, Lit, Not, Pred,
                          RelationalAtom, at_least, at_most, evaluate,
                          negate_atom, structure)
from helpers import random_unary_atom


def brute_sat_flat(atoms, preds, cap):
    """Oracle: exhaustive search over capped one-type cardinality vectors.

    Complete because any model's cell counts capped coordinatewise still
    model the same flat sentences.
    """
    cells = 1 << len(preds)

    def materialize(vec):
        unary = {p: set() for p in preds}
        e = 0
        for mask, count in enumerate(vec):
            for _ in range(count):
                for i, p in enumerate(preds):
                    if (mask >> i) & 1:
                        unary[p].add(e)
                e += 1
        return structure(e, unary, {})

    for vec in product(range(cap + 1), repeat=cells):
        if sum(vec) == 0:
            continue
        s = materialize(vec)
        if all(evaluate(s, a) for a in atoms):
            return s
    return None


class TestNormalize:
    def test_already_normal(self):
        branches = normalize([at_least(2, Lit("p"), Lit("q"))])
        assert len(branches) == 1
        assert len(branches[0].conjuncts) == 1

    def test_two_flat_formulas_one_branch(self):
        f = And((Count(AT_LEAST, 1, Pred("p")), Count(AT_LEAST, 2, Pred("q"))))
        branches = normalize([f])
        assert len(branches) == 1
        assert len(branches[0].conjuncts) == 2

    def test_embedded_quantifier_gives_two_branches(self):
        inner = Count(AT_LEAST, 2, Pred("q"))
        f = Count(AT_MOST, 2, And((Pred("p"), inner)))
        branches = normalize([f])
        assert len(branches) == 2
        # true-branch first: the inner sentence is asserted there
        assert (AT_LEAST, 2, Pred("q")) in branches[0].conjuncts

    def test_constant_false_branch_is_dropped(self):
        inner = Count(AT_LEAST, 2, Pred("q"))
        f = Count(AT_LEAST, 1, And((Pred("p"), inner)))
        # the false-branch body collapses to an unsatisfiable >=1, so only
        # the true branch survives
        branches = normalize([f])
        assert len(branches) == 1

    def test_equisatisfiable_over_small_domains(self):
        rng = random.Random(61)
        preds = ["p", "q"]
        for _ in range(60):
            inner = Count(AT_LEAST if rng.random() < 0.5 else AT_MOST,
                          rng.randint(0, 2), Pred(rng.choice(preds)))
            body = And((Pred(rng.choice(preds)),
                        inner if rng.random() < 0.5 else Not(inner)))
            f = Count(AT_LEAST if rng.random() < 0.5 else AT_MOST,
                      rng.randint(0, 2), body)
            branches = normalize([f])
            for n in range(1, 5):
                for bits in product([0, 1], repeat=n * 2):
                    unary = {"p": {e for e in range(n) if bits[e]},
                             "q": {e for e in range(n) if bits[n + e]}}
                    s = structure(n, unary, {})
                    direct = evaluate(s, f)
                    via = any(all(evaluate(s, Count(d, b, body_))
                                  for d, b, body_ in br.conjuncts)
                              for br in branches)
                    assert direct == via

    def test_rejects_relational(self):
        a = RelationalAtom(AT_LEAST, 1, "p", "r", AT_LEAST, 1, "q")
        with pytest.raises(InputError):
            normalize([a])

    def test_rejects_free_variable(self):
        with pytest.raises(InputError):
            normalize([Pred("p")])


class TestBuildSystem:
    def test_pruning_deletes_killed_columns(self):
        branches = normalize([at_most(0, Lit("p"), Lit("q"))])
        built = build_system(branches[0], ["p", "q"])
        # the p-and-q cell dies; three cells and the nonempty row remain
        assert len(built.live_types) == 3
        assert built.system.m == 1
        assert built.system.relations == (">=",)

    def test_totality_row_always_added(self):
        branches = normalize([at_least(1, Lit("p"), Lit("p"))])
        built = build_system(branches[0])
        assert built.system.relations[-1] == ">="
        assert built.system.rhs[-1] == 1

    def test_infeasible_when_everything_killed(self):
        branches = normalize([at_most(0, Lit("p"), Lit("p")),
                              at_most(0, Lit("p", False), Lit("p", False))])
        built = build_system(branches[0])
        assert built.infeasible

    def test_demand_on_killed_cells_is_infeasible(self):
        # ">=1 p" demands live p-cells, "<=0 p" kills them all
        res = decide_sat([at_least(1, Lit("p"), Lit("p")),
                          at_most(0, Lit("p"), Lit("p"))])
        assert res.status == UNSAT

    def test_incompleteness_instance_live_columns(self):
        # independent oracle: enumerate all 2^15 masks, applying the <=0
        # sentences directly
        from numlog.proofs import incompleteness_instance
        phi, goals = incompleteness_instance(6)
        kills = [a for a in phi if a.direction == AT_MOST and a.bound == 0]
        preds = sorted({l.pred for a in phi for l in a.lits})
        index = {p: i for i, p in enumerate(preds)}

        def alive(mask):
            for a in kills:
                if all(bool((mask >> index[l.pred]) & 1) == l.positive
                       for l in a.lits):
                    return False
            return True

        oracle_live = sum(1 for mask in range(1 << 15) if alive(mask))
        branches = normalize(phi)
        assert len(branches) == 1
        built = build_system(branches[0], preds)
        assert len(built.live_types) == oracle_live == 144
        # with one goal negated, its cell dies too
        aug = phi + [negate_atom(goals[0])]
        built2 = build_system(normalize(aug)[0], preds)
        assert len(built2.live_types) == 143


class TestDecideSat:
    def test_triangle_colouring_is_sat(self):
        from numlog.reductions import encode_3col, graph
        k3 = graph(3, [(1, 2), (1, 3), (2, 3)])
        res = decide_sat(encode_3col(k3))
        assert res.status == SAT
        assert res.witness is not None
        assert res.certificate.solution is not None

    def test_k4_is_unsat(self):
        from numlog.reductions import brute_3col, encode_3col, graph
        k4 = graph(4, [(i, j) for i in range(1, 5) for j in range(i + 1, 5)])
        assert brute_3col(k4) is None
        assert decide_sat(encode_3col(k4)).status == UNSAT

    def test_contradictory_pair(self):
        res = decide_sat([at_least(2, Lit("p"), Lit("p")),
                          at_most(1, Lit("p"), Lit("p"))])
        assert res.status == UNSAT

    def test_witness_size_bound(self):
        rng = random.Random(67)
        preds = ["p", "q"]
        for _ in range(100):
            atoms = [random_unary_atom(rng, preds, max_bound=3)
                     for _ in range(rng.randint(1, 4))]
            res = decide_sat(atoms)
            if res.status == SAT:
                cap = max(1, max(a.bound for a in atoms))
                assert res.witness.domain_size <= (1 << len(preds)) * cap
                for a in atoms:
                    assert evaluate(res.witness, a)

    def test_oracle_equivalence_small(self):
        rng = random.Random(71)
        preds = ["p", "q", "r"]
        for _ in range(120):
            atoms = [random_unary_atom(rng, preds[:rng.randint(1, 3)],
                                       max_bound=3)
                     for _ in range(rng.randint(1, 5))]
            used = sorted({l.pred for a in atoms for l in a.lits})
            cap = max(1, max(a.bound for a in atoms))
            oracle = brute_sat_flat(atoms, used, cap)
            res = decide_sat(atoms)
            assert (res.status == SAT) == (oracle is not None)

    def test_cap_doubling_never_flips(self):
        # re-solving with doubled per-cell caps keeps every verdict
        rng = random.Random(73)
        preds = ["p", "q"]
        for _ in range(100):
            atoms = [random_unary_atom(rng, preds, max_bound=3)
                     for _ in range(rng.randint(1, 4))]
            base = decide_sat(atoms)
            branches = normalize(atoms)
            doubled_sat = False
            for branch in branches:
                built = build_system(branch, sorted(
                    {l.pred for a in atoms for l in a.lits}))
                if built.infeasible:
                    continue
                cap = 2 * max(1, max(b for _, b, _ in branch.conjuncts))
                from numlog.linsys import ilp_solve
                if ilp_solve(built.system,
                             [cap] * len(built.live_types)) is not None:
                    doubled_sat = True
                    break
            assert (base.status == SAT) == doubled_sat

    def test_parallel_branches_same_verdict(self):
        inner = Count(AT_LEAST, 2, Pred("q"))
        f = Count(AT_LEAST, 1, And((Pred("p"), Not(inner))))
        seq = decide_sat([f])
        par = decide_sat([f], jobs=4)
        assert seq.status == par.status == SAT


class TestEntails:
    def test_flagship_argument(self):
        prem = [at_least(13, Lit("a"), Lit("b")),
                at_most(3, Lit("b"), Lit("c")),
                at_most(4, Lit("d"), Lit("c", False))]
        assert entails(prem, at_least(6, Lit("a"), Lit("d", False)))

    def test_additivity_sequent(self):
        prem = [at_least(2, Lit("p"), Lit("q")),
                at_least(3, Lit("p"), Lit("q", False))]
        assert entails(prem, at_least(5, Lit("p"), Lit("p")))

    def test_one_element_countermodel(self):
        assert not entails([at_least(1, Lit("p"), Lit("q"))],
                           at_least(2, Lit("p"), Lit("p")))

    def test_incompleteness_goal_is_entailed(self):
        from numlog.proofs import incompleteness_instance
        phi, goals = incompleteness_instance(6)
        assert entails(phi, goals[0])

    def test_rejects_nonatoms(self):
        with pytest.raises(InputError):
            entails([Count(AT_LEAST, 1, Pred("p"))],
                    at_least(1, Lit("p"), Lit("p")))
