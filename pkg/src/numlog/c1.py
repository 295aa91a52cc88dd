"""Satisfiability (= finite satisfiability) and entailment for the unary
counting fragments and quantifier-normal one-variable formula sets.

The pipeline: normalize a formula set into branches whose conjuncts are
counting quantifiers over quantifier-free bodies; translate each branch into
a linear system over 1-type cardinalities (one column per live 1-type, one
row per conjunct, plus a row making the domain nonempty); search for a
natural solution with every cell capped at the largest bound.  A Sat verdict
always carries a finite witness structure that is model-checked against the
original input before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExhaustedError, CapExceededError, InputError
from .linsys import EQ, GE, LinearSystem, ilp_solve, sparsify_natural
from .logic import (AT_LEAST, AT_MOST, EXACTLY, And, C1Formula, Count,
                    CountingAtom, FALSE, FiniteStructure, Not, Or, Pred,
                    RelationalAtom, TRUE, UnaryAtom, as_literal_conjunction,
                    atom_formula, eval_quantifier_free, evaluate,
                    formula_predicates, is_closed, is_quantifier_free,
                    mask_assignment, structure)

SAT = "sat"
UNSAT = "unsat"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class NormalC1:
    """A conjunction of counting quantifiers over quantifier-free bodies."""

    conjuncts: tuple[tuple[str, int, C1Formula], ...]


@dataclass(frozen=True)
class Certificate:
    preds: tuple[str, ...]
    live_types: tuple[int, ...]
    solution: tuple[int, ...]
    sparse_solution: tuple[int, ...] | None = None


@dataclass(frozen=True)
class SatResult:
    status: str
    witness: FiniteStructure | None = None
    certificate: Certificate | None = None


# ---------------------------------------------------------------------------
# Normalization
# ---------------------------------------------------------------------------

def _expand_exactly(f: C1Formula) -> C1Formula:
    """Rewrite every =C quantifier as the <=C and >=C pair."""
    if isinstance(f, Pred):
        return f
    if isinstance(f, Not):
        return Not(_expand_exactly(f.body))
    if isinstance(f, And):
        return And(tuple(_expand_exactly(p) for p in f.parts))
    if isinstance(f, Or):
        return Or(tuple(_expand_exactly(p) for p in f.parts))
    body = _expand_exactly(f.body)
    if f.direction == EXACTLY:
        return And((Count(AT_MOST, f.bound, body), Count(AT_LEAST, f.bound, body)))
    return Count(f.direction, f.bound, body)


def _simplify(f: C1Formula) -> C1Formula:
    if isinstance(f, Pred):
        return f
    if isinstance(f, Not):
        b = _simplify(f.body)
        if b == TRUE:
            return FALSE
        if b == FALSE:
            return TRUE
        return Not(b)
    if isinstance(f, And):
        parts = []
        for p in f.parts:
            p = _simplify(p)
            if p == FALSE:
                return FALSE
            if p == TRUE:
                continue
            if isinstance(p, And):
                parts.extend(p.parts)
            else:
                parts.append(p)
        return And(tuple(parts)) if len(parts) != 1 else parts[0]
    if isinstance(f, Or):
        parts = []
        for p in f.parts:
            p = _simplify(p)
            if p == TRUE:
                return TRUE
            if p == FALSE:
                continue
            if isinstance(p, Or):
                parts.extend(p.parts)
            else:
                parts.append(p)
        return Or(tuple(parts)) if len(parts) != 1 else parts[0]
    body = _simplify(f.body)
    if body == FALSE:
        # no element satisfies the body, whatever the domain
        count_ok = (0 >= f.bound) if f.direction == AT_LEAST else (0 <= f.bound)
        return TRUE if count_ok else FALSE
    return Count(f.direction, f.bound, body)


def _innermost_count(f: C1Formula) -> Count | None:
    """Leftmost innermost quantified subformula with a quantifier-free body."""
    if isinstance(f, Pred):
        return None
    if isinstance(f, Not):
        return _innermost_count(f.body)
    if isinstance(f, (And, Or)):
        for p in f.parts:
            got = _innermost_count(p)
            if got is not None:
                return got
        return None
    got = _innermost_count(f.body)
    if got is not None:
        return got
    return f if is_quantifier_free(f.body) else None


def _substitute(f: C1Formula, target: C1Formula, value: C1Formula) -> C1Formula:
    if f == target:
        return value
    if isinstance(f, Pred):
        return f
    if isinstance(f, Not):
        return Not(_substitute(f.body, target, value))
    if isinstance(f, And):
        return And(tuple(_substitute(p, target, value) for p in f.parts))
    if isinstance(f, Or):
        return Or(tuple(_substitute(p, target, value) for p in f.parts))
    return Count(f.direction, f.bound, _substitute(f.body, target, value))


def _dual_count(c: Count) -> Count:
    if c.direction == AT_LEAST:
        return Count(AT_MOST, c.bound - 1, c.body)
    return Count(AT_LEAST, c.bound + 1, c.body)


def normalize(formulas, *, max_depth: int = 64) -> list[NormalC1]:
    """Deterministic expansion into equisatisfiable normal-form branches.

    The innermost quantified subformula is replaced by true (that conjunct
    asserted) or false (its dual asserted), true-branch first, until every
    conjunct is a counting quantifier over a quantifier-free body.  The union
    of branches is equisatisfiable with the input over every domain.
    """
    conjuncts: list[C1Formula] = []
    for f in formulas:
        if isinstance(f, RelationalAtom):
            raise InputError("relational sentences are outside this solver; "
                             "use the two-variable tooling in numlog.n2")
        if isinstance(f, UnaryAtom):
            f = atom_formula(f)
        if not is_closed(f):
            raise InputError(f"formula has a free variable: {f}")
        conjuncts.append(_simplify(_expand_exactly(f)))

    branches: list[NormalC1] = []

    def walk(items: list[C1Formula], depth: int):
        flat: list[C1Formula] = []
        for c in items:
            c = _simplify(c)
            if c == TRUE:
                continue
            if c == FALSE:
                return  # dead branch
            if isinstance(c, And):
                flat.extend(c.parts)
            else:
                flat.append(c)
        target = None
        for c in flat:
            if isinstance(c, Count) and is_quantifier_free(c.body):
                continue
            target = _innermost_count(c)
            break
        if target is None:
            branches.append(NormalC1(tuple(
                (c.direction, c.bound, c.body) for c in flat)))
            return
        if depth >= max_depth:
            raise CapExceededError("normalization nesting depth cap exceeded")
        top = [_substitute(c, target, TRUE) for c in flat] + [target]
        walk(top, depth + 1)
        bot = [_substitute(c, target, FALSE) for c in flat] + [_dual_count(target)]
        walk(bot, depth + 1)

    walk(conjuncts, 0)
    return branches


# ---------------------------------------------------------------------------
# System construction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BuiltSystem:
    system: LinearSystem | None
    live_types: tuple[int, ...]
    preds: tuple[str, ...]
    infeasible: bool = False


def build_system(normal: NormalC1, preds: list[str] | None = None, *,
                 max_live: int = 200_000, pred_cap: int = 30,
                 merge: bool = False) -> BuiltSystem:
    """The 1-type cardinality system of a normal-form branch.

    One column per live 1-type: a 1-type is dead when some <=0 conjunct's
    body holds under it (such conjuncts are consumed by the pruning and
    dropped as rows).  Live types are enumerated by a depth-first walk over
    predicate bits so the full 2^l grid is never materialized.  With
    merge=True, columns with identical coefficient vectors collapse into
    their smallest representative (feasibility-preserving; the solver uses
    this).  A final all-ones >=1 row keeps the domain nonempty.
    """
    rows_in: list[tuple[str, int, C1Formula]] = []
    for d, b, body in normal.conjuncts:
        if d == EXACTLY:
            rows_in.append((AT_MOST, b, body))
            rows_in.append((AT_LEAST, b, body))
        else:
            rows_in.append((d, b, body))
    found: set[str] = set()
    for _, _, body in rows_in:
        found |= formula_predicates(body)
    if preds is None:
        preds = sorted(found)
    elif not found <= set(preds):
        raise InputError("predicate list does not cover the branch")
    preds = list(preds)
    if len(preds) > pred_cap:
        raise CapExceededError(f"{len(preds)} predicates exceed cap {pred_cap}")
    if any(d == AT_MOST and b < 0 for d, b, _ in rows_in):
        return BuiltSystem(None, (), tuple(preds), infeasible=True)

    kills = [body for d, b, body in rows_in if d == AT_MOST and b == 0]
    kept = [(d, b, body) for d, b, body in rows_in
            if not (d == AT_MOST and b == 0) and not (d == AT_LEAST and b <= 0)]

    index = {p: i for i, p in enumerate(preds)}
    by_level: dict[int, list[C1Formula]] = {}
    for body in kills:
        kp = formula_predicates(body)
        level = max((index[p] for p in kp), default=-1)
        by_level.setdefault(level, []).append(body)

    # constant kill bodies (no predicates) kill every 1-type at once
    if any(eval_quantifier_free(body, {}) for body in by_level.get(-1, ())):
        return BuiltSystem(None, (), tuple(preds), infeasible=True)

    live: list[int] = []
    assignment: dict[str, bool] = {}

    def assign(level: int, mask: int):
        if level >= 0:
            for body in by_level.get(level, ()):
                if eval_quantifier_free(body, assignment):
                    return
        if level == len(preds) - 1:
            if len(live) >= max_live:
                raise CapExceededError("live 1-type cap exceeded")
            live.append(mask)
            return
        nxt = level + 1
        for bit in (0, 1):
            assignment[preds[nxt]] = bool(bit)
            assign(nxt, mask | (bit << nxt))
        del assignment[preds[nxt]]

    if preds:
        assign(-1, 0)
    else:
        live.append(0)

    if not live:
        return BuiltSystem(None, (), tuple(preds), infeasible=True)

    # Row bodies: fast bit tests for literal conjunctions, generic otherwise.
    testers = []
    for _, _, body in kept:
        lits = as_literal_conjunction(body)
        if lits is not None:
            bits = [(index[l.pred], l.positive) for l in lits]

            def tester(mask, _bits=bits):
                return all(bool((mask >> i) & 1) == want for i, want in _bits)
        else:
            def tester(mask, _body=body, _preds=preds):
                return eval_quantifier_free(_body, mask_assignment(mask, _preds))
        testers.append(tester)

    coeff_rows = [[1 if t(mask) else 0 for mask in live] for t in testers]
    if merge:
        # merge identical columns, keeping the smallest 1-type representative
        groups: set[tuple] = set()
        merged_live: list[int] = []
        keep_idx: list[int] = []
        for col, mask in enumerate(live):
            sig = tuple(row[col] for row in coeff_rows)
            if sig in groups:
                continue
            groups.add(sig)
            keep_idx.append(col)
            merged_live.append(mask)
    else:
        merged_live = live
        keep_idx = list(range(len(live)))
    one, zero = Fraction(1), Fraction(0)
    coeffs = [tuple(one if row[c] else zero for c in keep_idx)
              for row in coeff_rows]
    relations = [d for d, _, _ in kept]
    rhs = [Fraction(b) for _, b, _ in kept]
    # nonempty-domain row
    coeffs.append(tuple(one for _ in keep_idx))
    relations.append(GE)
    rhs.append(Fraction(1))
    system = LinearSystem(tuple(coeffs), tuple(relations), tuple(rhs))
    return BuiltSystem(system, tuple(merged_live), tuple(preds))


def _materialize(built: BuiltSystem, solution) -> FiniteStructure:
    """Fresh consecutive element indices per 1-type cell, in column order."""
    unary: dict[str, set[int]] = {p: set() for p in built.preds}
    next_elem = 0
    for mask, count in zip(built.live_types, solution):
        for _ in range(count):
            for i, p in enumerate(built.preds):
                if (mask >> i) & 1:
                    unary[p].add(next_elem)
            next_elem += 1
    return structure(next_elem, unary, {})


def _sparse_certificate(system: LinearSystem, solution):
    if system.is_boolean and all(rel == EQ for rel in system.relations):
        return sparsify_natural(system, solution)
    return None


def decide_sat(formulas, *, max_nodes: int = 2_000_000, use_lp: bool = True,
               max_live: int = 200_000, pred_cap: int = 30,
               jobs: int = 1) -> SatResult:
    """Decide satisfiability of unary counting atoms / closed one-variable
    formulas, producing a model-checked witness on Sat.

    Branches are solved in order; the first Sat wins (with jobs > 1 they run
    on worker threads and the lowest Sat branch index still wins).  A
    solution over the live 1-types is searched with every cell capped at
    max(1, largest bound), which is complete by the finite-model-property
    cap argument.  Returns Unknown only when some branch exhausted its
    search budget.
    """
    formulas = list(formulas)
    all_preds: set[str] = set()
    for f in formulas:
        if isinstance(f, RelationalAtom):
            raise InputError("relational sentences are outside this solver; "
                             "use the two-variable tooling in numlog.n2")
        if isinstance(f, UnaryAtom):
            all_preds |= f.predicates()
        else:
            all_preds |= formula_predicates(f)
    preds = sorted(all_preds)
    branches = normalize(formulas)

    def solve_branch(branch):
        built = build_system(branch, preds, max_live=max_live,
                             pred_cap=pred_cap, merge=True)
        if built.infeasible:
            return None
        cap = max(1, max([b for _, b, _ in branch.conjuncts] + [0]))
        sol = ilp_solve(built.system, [cap] * len(built.live_types),
                        max_nodes=max_nodes, use_lp=use_lp)
        if sol is None:
            return None
        return built, sol

    saw_budget = False
    outcomes: list = []
    if jobs > 1 and len(branches) > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(solve_branch, b) for b in branches]
        for fut in futures:
            try:
                outcomes.append(fut.result())
            except BudgetExhaustedError:
                saw_budget = True
                outcomes.append(None)
    else:
        for branch in branches:
            try:
                got = solve_branch(branch)
            except BudgetExhaustedError:
                saw_budget = True
                got = None
            outcomes.append(got)
            if got is not None:
                break
    for got in outcomes:
        if got is None:
            continue
        built, sol = got
        witness = _materialize(built, sol)
        for f in formulas:
            if not evaluate(witness, f):
                raise AssertionError(f"witness failed model check on {f}")
        cert = Certificate(built.preds, built.live_types, sol,
                           _sparse_certificate(built.system, sol))
        return SatResult(SAT, witness, cert)
    return SatResult(UNKNOWN if saw_budget else UNSAT)


def entails(premises, conclusion: CountingAtom, **kwargs) -> bool:
    """True iff the premises entail the conclusion (all unary atoms).

    Decided as unsatisfiability of premises plus the dual of the conclusion.
    Budget exhaustion propagates as BudgetExhaustedError, never as a verdict.
    """
    from .logic import negate_atom
    atoms = list(premises) + [negate_atom(conclusion)]
    for a in atoms:
        if not isinstance(a, UnaryAtom):
            raise InputError("entails works on unary counting atoms")
    res = decide_sat(atoms, **kwargs)
    if res.status == UNKNOWN:
        raise BudgetExhaustedError("entailment undecided within budget")
    return res.status == UNSAT
