"""Probability assignments over finite world sets, the threshold semantics
for counting sentences, a small-scale probabilistic-satisfiability decider,
and the counterexample construction that certifies the proof calculus
incomplete.

The threshold semantics reads "at least C (p and q)" as P(p and q) >= C/N
for a fixed scale N carried by the assignment.  Every axiom and rule of the
calculus is sound for it, so exhibiting an assignment that satisfies a
premise set while giving some goal probability 0 certifies that the goal is
underivable - even though it is semantically entailed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import CapExceededError, InputError, UnknownPredicateError
from .linsys import (EQ, LinearSystem, lp_feasible, many_nonzeros_instance,
                     sparsify_rational)
from .logic import (AT_LEAST, And, CountingAtom, Lit, Not, Or, Pred,
                    UnaryAtom, eval_quantifier_free, formula_predicates)

World = frozenset[str]  # the letters true at that world


@dataclass(frozen=True)
class ProbabilityAssignment:
    """Finitely many worlds with exact rational weights summing to 1.

    Worlds are deduplicated (equal assignments merge their weights).  `scale`
    is the fixed denominator N used by the threshold semantics; None when
    the assignment is not meant for threshold evaluation.
    """

    letters: tuple[str, ...]
    worlds: tuple[tuple[World, Fraction], ...]
    scale: int | None = None

    def __post_init__(self):
        merged: dict[World, Fraction] = {}
        for w, weight in self.worlds:
            w = frozenset(w)
            if not w <= set(self.letters):
                raise InputError("world mentions a letter outside the signature")
            weight = Fraction(weight)
            if weight < 0:
                raise InputError("negative world weight")
            merged[w] = merged.get(w, Fraction(0)) + weight
        worlds = tuple(sorted(((w, wt) for w, wt in merged.items() if wt > 0),
                              key=lambda item: sorted(item[0])))
        if sum((wt for _, wt in worlds), Fraction(0)) != 1:
            raise InputError("world weights must sum to exactly 1")
        object.__setattr__(self, "worlds", worlds)
        object.__setattr__(self, "letters", tuple(self.letters))


def _world_sat(world: World, formula) -> bool:
    if isinstance(formula, Lit):
        return (formula.pred in world) == formula.positive
    if isinstance(formula, tuple):  # clause: disjunction of literals
        return any(_world_sat(world, lit) for lit in formula)
    if isinstance(formula, (Pred, Not, And, Or)):
        return eval_quantifier_free(formula, _WorldView(world))
    raise InputError(f"not a propositional formula: {formula!r}")


class _WorldView(dict):
    def __init__(self, world: World):
        super().__init__()
        self.world = world

    def __missing__(self, key):
        return key in self.world


def prob(assignment: ProbabilityAssignment, formula) -> Fraction:
    """Exact probability of a propositional formula: the total weight of the
    worlds satisfying it.

    Accepts a literal, a clause (tuple of literals), or a formula tree over
    Pred/Not/And/Or.  Letters outside the signature are an error.
    """
    letters = set()
    if isinstance(formula, Lit):
        letters = {formula.pred}
    elif isinstance(formula, tuple):
        letters = {lit.pred for lit in formula}
    elif isinstance(formula, (Pred, Not, And, Or)):
        letters = formula_predicates(formula)
    else:
        raise InputError(f"not a propositional formula: {formula!r}")
    unknown = letters - set(assignment.letters)
    if unknown:
        raise UnknownPredicateError(f"unknown letters {sorted(unknown)}")
    return sum((wt for w, wt in assignment.worlds if _world_sat(w, formula)),
               Fraction(0))


def approx_models(assignment: ProbabilityAssignment, atom: CountingAtom) -> bool:
    """Threshold truth of a unary counting sentence: at least C means
    probability >= C/N, at most C means <= C/N, for the assignment's scale N."""
    if not isinstance(atom, UnaryAtom):
        raise InputError("threshold semantics covers unary sentences only")
    if assignment.scale is None:
        raise InputError("assignment has no scale N attached")
    l1, l2 = atom.lits
    p = sum((wt for w, wt in assignment.worlds
             if _world_sat(w, l1) and _world_sat(w, l2)), Fraction(0))
    threshold = Fraction(atom.bound, assignment.scale)
    return p >= threshold if atom.direction == AT_LEAST else p <= threshold


# ---------------------------------------------------------------------------
# PSAT
# ---------------------------------------------------------------------------

def psat_decide(instance, *, letter_cap: int = 20, enumerate_cap: int = 12,
                max_live: int = 300_000) -> ProbabilityAssignment | None:
    """Decide whether clause probabilities are jointly realizable.

    `instance` is a list of (clause, q) pairs, clause a tuple of literals
    and q an exact rational in [0,1]; each pair demands P(clause) = q.  As
    an extension, (clause, rel, q) triples with rel in {"=", "<=", ">="}
    demand the corresponding inequality.  Feasibility is a linear program
    over the probabilities of full truth assignments; 0/1-valued equality
    rows prune assignments before enumeration, which admits a few more
    letters than brute enumeration would.  A satisfying assignment is
    sparsified before being returned (at most m+1 supported worlds when all
    rows are equalities).
    """
    norm: list[tuple[tuple, str, Fraction]] = []
    for item in instance:
        if len(item) == 2:
            cl, q = item
            rel = EQ
        else:
            cl, rel, q = item
            if rel not in (EQ, "<=", ">="):
                raise InputError(f"bad probability relation {rel!r}")
        q = Fraction(q)
        if not 0 <= q <= 1:
            raise InputError(f"probability {q} outside [0,1]")
        norm.append((tuple(cl), rel, q))
    letters = sorted({lit.pred for cl, _, _ in norm for lit in cl})
    if len(letters) > letter_cap:
        raise CapExceededError(f"{len(letters)} letters exceed cap {letter_cap}")

    index = {p: i for i, p in enumerate(letters)}

    def clause_sat(mask: int, cl) -> bool:
        return any(bool((mask >> index[lit.pred]) & 1) == lit.positive
                   for lit in cl)

    # live truth assignments: P(clause) = 0 kills its satisfying masks,
    # P(clause) = 1 kills its falsifying masks
    kills = []
    for cl, rel, q in norm:
        if q == 0 and rel in (EQ, "<="):
            kills.append(lambda mask, _cl=cl: clause_sat(mask, _cl))
        elif q == 1 and rel in (EQ, ">="):
            kills.append(lambda mask, _cl=cl: not clause_sat(mask, _cl))
    live: list[int] = []
    if len(letters) > enumerate_cap and not kills:
        raise CapExceededError(
            f"{len(letters)} letters need 0/1 rows to prune; cap is {enumerate_cap}")
    for mask in range(1 << len(letters)):
        if any(k(mask) for k in kills):
            continue
        live.append(mask)
        if len(live) > max_live:
            raise CapExceededError("live truth-assignment cap exceeded")

    rows = []
    relations = []
    rhs = []
    one, zero = Fraction(1), Fraction(0)
    for cl, rel, q in norm:
        rows.append([one if clause_sat(mask, cl) else zero for mask in live])
        relations.append(rel)
        rhs.append(q)
    rows.append([one] * len(live))
    relations.append(EQ)
    rhs.append(one)
    system = LinearSystem(tuple(tuple(r) for r in rows),
                          tuple(relations), tuple(rhs))
    sol = lp_feasible(system)
    if sol is None:
        return None
    if all(rel == EQ for rel in system.relations):
        sol = sparsify_rational(system, sol)
    worlds = []
    for mask, weight in zip(live, sol):
        if weight:
            world = frozenset(p for p, i in index.items() if (mask >> i) & 1)
            worlds.append((world, weight))
    out = ProbabilityAssignment(tuple(letters), tuple(worlds))
    for cl, rel, q in norm:
        got = prob(out, cl)
        ok = got == q if rel == EQ else (got <= q if rel == "<=" else got >= q)
        assert ok, "assignment fails to reproduce a demanded probability"
    return out


# PSAT instance file: one "p | !q | r ; 3/5" line per constraint; as an
# extension the probability may carry a relation, e.g. "p | q ; >= 1/2".

def parse_psat_instance(text: str):
    out = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        clause_text, sep, q_text = line.rpartition(";")
        if not sep:
            raise InputError(f"line {ln}: missing '; probability'")
        lits = []
        for tok in clause_text.split("|"):
            tok = tok.strip()
            if not tok:
                raise InputError(f"line {ln}: empty literal")
            lits.append(Lit(tok[1:].strip(), False) if tok.startswith("!")
                        else Lit(tok))
        q_text = q_text.strip()
        rel = EQ
        for candidate in ("<=", ">="):
            if q_text.startswith(candidate):
                rel = candidate
                q_text = q_text[2:].strip()
                break
        if "/" in q_text:
            num, _, den = q_text.partition("/")
            q = Fraction(int(num), int(den))
        else:
            q = Fraction(int(q_text))
        out.append((tuple(lits), q) if rel == EQ else (tuple(lits), rel, q))
    return out


def render_psat_instance(instance) -> str:
    lines = []
    for item in instance:
        cl, rel, q = item if len(item) == 3 else (item[0], EQ, item[1])
        clause = " | ".join(str(lit) for lit in cl)
        lines.append(f"{clause} ; {q}" if rel == EQ
                     else f"{clause} ; {rel} {q}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# The incompleteness counterexample
# ---------------------------------------------------------------------------

def counterexample_assignment(m: int) -> tuple[ProbabilityAssignment, int]:
    """A probability assignment that threshold-satisfies the whole
    incompleteness premise set while giving some goal "at least 1 (t_j and
    r)" probability exactly 0; returns it with that j (1-based).

    Construction: take a nonnegative rational solution of the unique-solution
    system with at most m nonzero entries (so some entry is zero, and every
    entry is at most 3); scale worlds by the least common denominator u;
    lay out 6u(m+1) worlds with half of them satisfying t, cells of 3u
    worlds per t_j, u*u_j of each cell satisfying r (padded outside t to
    total 3u(m+1)), and the s_i unions dictated by the system's columns.
    The flat distribution then reproduces every premise threshold exactly.
    """
    from .proofs import incompleteness_instance

    if m < 6:
        raise InputError("counterexample_assignment needs m >= 6")
    system = many_nonzeros_instance(m)
    u_vec = sparsify_rational(system, lp_feasible(system))
    assert any(v == 0 for v in u_vec)
    assert all(v <= 3 for v in u_vec)
    u = lcm(*(v.denominator for v in u_vec))
    scale = 6 * (m + 1)
    num_worlds = u * scale
    half = 3 * u * (m + 1)

    # worlds 0..half-1 satisfy t, split into m+1 cells of 3u
    cell_of = {}
    for j in range(m + 1):
        for w in range(3 * u * j, 3 * u * (j + 1)):
            cell_of[w] = j
    r_states = set()
    for j in range(m + 1):
        count = u * u_vec[j]
        assert count.denominator == 1
        r_states.update(range(3 * u * j, 3 * u * j + int(count)))
    pad = half - len(r_states)
    r_states.update(range(half, half + pad))
    s_members = {i: {w for w in range(half)
                     if system.coeffs[i][cell_of[w]] == 1}
                 for i in range(m)}

    letters = tuple(["t"] + [f"t{j}" for j in range(1, m + 2)]
                    + [f"s{i}" for i in range(1, m + 1)] + ["r"])
    weight = Fraction(1, num_worlds)
    worlds = []
    for w in range(num_worlds):
        true: set[str] = set()
        if w < half:
            true.add("t")
            true.add(f"t{cell_of[w] + 1}")
            for i in range(m):
                if w in s_members[i]:
                    true.add(f"s{i + 1}")
        if w in r_states:
            true.add("r")
        worlds.append((frozenset(true), weight))
    assignment = ProbabilityAssignment(letters, tuple(worlds), scale)

    phi, goals = incompleteness_instance(m)
    for atom in phi:
        assert approx_models(assignment, atom), f"assignment misses {atom}"
    zero_j = next(j for j in range(m + 1) if u_vec[j] == 0) + 1
    conj = And((Pred(f"t{zero_j}"), Pred("r")))
    assert prob(assignment, conj) == 0
    assert not approx_models(assignment, goals[zero_j - 1])
    return assignment, zero_j
