"""The numerical syllogism calculus: two axiom schemas, three inference
rules, ex falso quodlibet, and a saturation-based derivability check.

Axioms: "at least 0 (L1 and L2)" for every literal pair, and "at most C
(L and not-L)" for every C >= 0.  Rules (subscript arithmetic over the
integers; negative bounds mean constant-true / constant-false sentences):

    R1:  <=C (L1 & L2),  <=D (~L2 & L3)   gives   <=C+D (L1 & L3)
    R2:  >=C (L1 & L2),  <=D (L2 & L3)    gives   >=C-D (L1 & ~L3)
    R3:  <=C (L1 & L1),  >=D (L1 & L2)    gives   <=C-D (L1 & ~L2)

Derivability is decided by saturating a table of best bounds per literal
pair: each rule's output improves monotonically with its inputs' best
bounds, so applying rules to table optima is exhaustive.  A goal weaker
than a table bound is still derivable - one extra rule step against an
axiom instance with a positive subscript weakens any bound - and the
derivation trees returned include that step so they replay exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .errors import InputError
from .linsys import many_nonzeros_instance
from .logic import AT_LEAST, AT_MOST, CountingAtom, Lit, UnaryAtom, at_least, at_most

R1 = "R1"
R2 = "R2"
R3 = "R3"

PairKey = tuple[Lit, Lit]


def _pair(l1: Lit, l2: Lit) -> PairKey:
    return tuple(sorted((l1, l2), key=lambda l: l.sort_key))  # type: ignore


def _other(pair: PairKey, member: Lit) -> Lit:
    if pair[0] == member:
        return pair[1]
    if pair[1] == member:
        return pair[0]
    raise ValueError(f"{member} not in {pair}")


def rule_conclusions(rule: str, a: UnaryAtom, b: UnaryAtom) -> list[UnaryAtom]:
    """Every conclusion the rule schema licenses from (a, b), in a fixed
    order; empty when the shapes do not unify."""
    out: list[UnaryAtom] = []

    def add(atom: UnaryAtom):
        if atom not in out:
            out.append(atom)

    if rule == R1 and a.direction == AT_MOST and b.direction == AT_MOST:
        for x in a.lits:
            if x.opposite() in b.lits:
                l1 = _other(a.lits, x)
                l3 = _other(b.lits, x.opposite())
                add(at_most(a.bound + b.bound, l1, l3))
    elif rule == R2 and a.direction == AT_LEAST and b.direction == AT_MOST:
        for x in a.lits:
            if x in b.lits:
                l1 = _other(a.lits, x)
                l3 = _other(b.lits, x)
                add(at_least(a.bound - b.bound, l1, l3.opposite()))
    elif rule == R3 and a.direction == AT_MOST and b.direction == AT_LEAST:
        if a.lits[0] == a.lits[1] and a.lits[0] in b.lits:
            l1 = a.lits[0]
            l2 = _other(b.lits, l1)
            add(at_most(a.bound - b.bound, l1, l2.opposite()))
    return out


def apply_rule(rule: str, a: UnaryAtom, b: UnaryAtom) -> UnaryAtom | None:
    """First conclusion of the rule schema on (a, b), or None."""
    got = rule_conclusions(rule, a, b)
    return got[0] if got else None


def is_axiom(a: UnaryAtom) -> bool:
    if a.direction == AT_LEAST and a.bound == 0:
        return True
    return (a.direction == AT_MOST and a.bound >= 0
            and a.lits[0] == a.lits[1].opposite())


# ---------------------------------------------------------------------------
# Derivations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Derivation:
    conclusion: UnaryAtom
    rule: str  # premise | axiom | R1 | R2 | R3 | exfalso
    children: tuple["Derivation", ...] = ()


def check_derivation(d: Derivation, premises) -> bool:
    """Replay a derivation: every node must be a premise, an axiom instance,
    or an exact rule application to its children's conclusions."""
    premise_set = set(premises)

    def ok(node: Derivation) -> bool:
        if node.rule == "premise":
            return node.conclusion in premise_set and not node.children
        if node.rule == "axiom":
            return is_axiom(node.conclusion) and not node.children
        if not all(ok(c) for c in node.children):
            return False
        if node.rule in (R1, R2, R3):
            if len(node.children) != 2:
                return False
            c1, c2 = (c.conclusion for c in node.children)
            return node.conclusion in rule_conclusions(node.rule, c1, c2)
        if node.rule == "exfalso":
            if len(node.children) != 2:
                return False
            up, low = (c.conclusion for c in node.children)
            return (up.direction == AT_MOST and low.direction == AT_LEAST
                    and up.lits == low.lits and low.bound > up.bound)
        return False

    return ok(d)


def render_derivation(d: Derivation, indent: int = 0) -> str:
    lines = [("  " * indent) + f"[{d.rule}] {d.conclusion}"]
    for c in d.children:
        lines.append(render_derivation(c, indent + 1))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Saturation
# ---------------------------------------------------------------------------

@dataclass
class BoundTable:
    """Best derivable bounds per canonical literal pair.

    lower[pair] is the largest C with ">=C" derivable (axioms give 0);
    upper[pair] the smallest C with "<=C" derivable (None when no upper is
    known; complementary pairs start at 0).  `contradiction` carries the
    offending pair once some lower exceeds an upper, after which every
    sentence is derivable by ex falso.  `complete` is False when saturation
    stopped on budget rather than at the fixpoint: the table is still sound,
    but "not in the table" then means "not shown derivable".
    """

    lower: dict[PairKey, int] = field(default_factory=dict)
    upper: dict[PairKey, int] = field(default_factory=dict)
    prov_lower: dict[PairKey, list] = field(default_factory=dict)
    prov_upper: dict[PairKey, list] = field(default_factory=dict)
    contradiction: PairKey | None = None
    complete: bool = True
    literals: tuple[Lit, ...] = ()

    def lower_of(self, pair: PairKey) -> int:
        return self.lower.get(pair, 0)

    def upper_of(self, pair: PairKey) -> int | None:
        got = self.upper.get(pair)
        if got is None and pair[0] == pair[1].opposite():
            return 0
        return got


def _check_unary(phi) -> list[UnaryAtom]:
    atoms = list(phi)
    for a in atoms:
        if not isinstance(a, UnaryAtom):
            raise InputError("the proof engine handles unary sentences only")
    return atoms


def saturate(phi, *, max_updates: int = 500_000) -> BoundTable:
    """Fixpoint of rule application over best-known bounds.

    Uppers only decrease and lowers only increase, both within finite
    ranges, so the fixpoint exists; rules applied to the optima dominate all
    other applications.  Saturation halts early when a contradiction
    surfaces (everything is then derivable).
    """
    atoms = _check_unary(phi)
    preds = sorted({l.pred for a in atoms for l in a.lits})
    literals = [Lit(p, pol) for p in preds for pol in (True, False)]
    literals.sort(key=lambda l: l.sort_key)
    pairs = [(_pair(a, b)) for a, b in
             combinations_with_replacement(literals, 2)]
    table = BoundTable(literals=tuple(literals))
    for pr in pairs:
        table.lower[pr] = 0
        table.prov_lower[pr] = [(0, ("axiom",))]
        if pr[0] == pr[1].opposite():
            table.upper[pr] = 0
            table.prov_upper[pr] = [(0, ("axiom",))]
    updates = 0

    def improve_lower(pr: PairKey, val: int, just) -> bool:
        nonlocal updates
        if val <= table.lower.get(pr, 0):
            return False
        table.lower[pr] = val
        table.prov_lower.setdefault(pr, []).append((val, just))
        updates += 1
        up = table.upper_of(pr)
        if up is not None and val > up and table.contradiction is None:
            table.contradiction = pr
        return True

    def improve_upper(pr: PairKey, val: int, just) -> bool:
        nonlocal updates
        cur = table.upper_of(pr)
        if cur is not None and val >= cur:
            return False
        table.upper[pr] = val
        table.prov_upper.setdefault(pr, []).append((val, just))
        updates += 1
        if table.lower.get(pr, 0) > val and table.contradiction is None:
            table.contradiction = pr
        return True

    for a in atoms:
        pr = a.lits
        if a.direction == AT_LEAST:
            improve_lower(pr, a.bound, ("premise", a))
        else:
            improve_upper(pr, a.bound, ("premise", a))
        if table.contradiction:
            return table

    by_lit: dict[Lit, list[PairKey]] = {l: [] for l in literals}
    for pr in pairs:
        by_lit[pr[0]].append(pr)
        if pr[1] != pr[0]:
            by_lit[pr[1]].append(pr)

    while table.contradiction is None:
        changed = False
        # R1: two uppers sharing a complementary literal
        for pa in pairs:
            ua = table.upper_of(pa)
            if ua is None:
                continue
            for x in {pa[0], pa[1]}:
                for pb in by_lit[x.opposite()]:
                    ub = table.upper_of(pb)
                    if ub is None:
                        continue
                    target = _pair(_other(pa, x), _other(pb, x.opposite()))
                    if improve_upper(
                            target, ua + ub,
                            (R1, (pa, "upper", ua), (pb, "upper", ub))):
                        changed = True
        if table.contradiction:
            break
        # R2: a lower and an upper sharing a literal
        for pa in pairs:
            la = table.lower.get(pa, 0)
            if la <= 0:
                continue
            for x in {pa[0], pa[1]}:
                for pb in by_lit[x]:
                    ub = table.upper_of(pb)
                    if ub is None:
                        continue
                    target = _pair(_other(pa, x), _other(pb, x).opposite())
                    if improve_lower(
                            target, la - ub,
                            (R2, (pa, "lower", la), (pb, "upper", ub))):
                        changed = True
        if table.contradiction:
            break
        # R3: a same-literal upper and a lower through that literal
        for l in literals:
            pa = (l, l)
            ua = table.upper_of(pa)
            if ua is None:
                continue
            for pb in by_lit[l]:
                lb = table.lower.get(pb, 0)
                if lb <= 0:
                    continue
                target = _pair(l, _other(pb, l).opposite())
                if improve_upper(
                        target, ua - lb,
                        (R3, (pa, "upper", ua), (pb, "lower", lb))):
                    changed = True
        if not changed:
            break
        if updates > max_updates:
            table.complete = False
            break
    return table


# ---------------------------------------------------------------------------
# Derivability
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DeriveResult:
    derivable: bool
    derivation: Derivation | None
    complete: bool  # False: saturation hit its budget, verdict is "not shown"


def _rebuild(table: BoundTable, pr: PairKey, side: str, value: int,
             memo: dict) -> Derivation:
    key = (pr, side, value)
    if key in memo:
        return memo[key]
    entries = (table.prov_lower if side == "lower" else
               table.prov_upper).get(pr, [])
    just = next((j for v, j in entries if v == value), None)
    if just is None or just[0] == "axiom":
        atom = (at_least(value, *pr) if side == "lower" else at_most(value, *pr))
        node = Derivation(atom, "axiom")
    elif just[0] == "premise":
        node = Derivation(just[1], "premise")
    else:
        rule, (pa, sa, va), (pb, sb, vb) = just
        ca = _rebuild(table, pa, sa, va, memo)
        cb = _rebuild(table, pb, sb, vb, memo)
        atom = (at_least(value, *pr) if side == "lower" else at_most(value, *pr))
        node = Derivation(atom, rule, (ca, cb))
    memo[key] = node
    return node


def _weaken_lower(base: Derivation, goal: UnaryAtom) -> Derivation:
    """>=C from >=C' with C' > C: one R2 step against an axiom instance."""
    have = base.conclusion.bound
    l2 = base.conclusion.lits[1]
    ax = Derivation(at_most(have - goal.bound, l2, l2.opposite()), "axiom")
    return Derivation(goal, R2, (base, ax))


def _weaken_upper(base: Derivation, goal: UnaryAtom) -> Derivation:
    """<=C from <=C' with C' < C: one R1 step against an axiom instance."""
    have = base.conclusion.bound
    l2 = base.conclusion.lits[1]
    ax = Derivation(at_most(goal.bound - have, l2.opposite(), l2), "axiom")
    return Derivation(goal, R1, (base, ax))


def derives(phi, goal: CountingAtom, *, max_updates: int = 500_000
            ) -> DeriveResult:
    """Whether the calculus derives the goal from phi, with a replayable
    derivation tree on success.

    A False verdict with complete=True is fixpoint-certified
    non-derivability; with complete=False it only means "not shown within
    budget".
    """
    atoms = _check_unary(phi)
    if not isinstance(goal, UnaryAtom):
        raise InputError("goals must be unary sentences")
    table = saturate(atoms, max_updates=max_updates)
    memo: dict = {}
    if table.contradiction is not None:
        pr = table.contradiction
        up = table.upper_of(pr)
        low = table.lower_of(pr)
        node = Derivation(goal, "exfalso",
                          (_rebuild(table, pr, "upper", up, memo),
                           _rebuild(table, pr, "lower", low, memo)))
        return DeriveResult(True, node, table.complete)
    pr = _pair(*goal.lits)
    if goal.direction == AT_LEAST:
        best = table.lower_of(pr)
        if best >= goal.bound:
            base = _rebuild(table, pr, "lower", best, memo)
            node = base if best == goal.bound else _weaken_lower(base, goal)
            return DeriveResult(True, node, table.complete)
        return DeriveResult(False, None, table.complete)
    best = table.upper_of(pr)
    if best is not None and best <= goal.bound:
        base = _rebuild(table, pr, "upper", best, memo)
        node = base if best == goal.bound else _weaken_upper(base, goal)
        return DeriveResult(True, node, table.complete)
    return DeriveResult(False, None, table.complete)


# ---------------------------------------------------------------------------
# Numerically explicit premise sets and the incompleteness instance
# ---------------------------------------------------------------------------

def is_numerically_explicit(phi) -> tuple[int, dict[str, int]] | None:
    """The witnessing total C > 0 and per-predicate counts, when phi fixes
    for every predicate how many elements satisfy it and how many do not
    (all four bounding sentences present, against one common total)."""
    atoms = _check_unary(phi)
    preds = sorted({l.pred for a in atoms for l in a.lits})
    if not preds:
        return None
    cands: dict[str, tuple[list[int], list[int]]] = {}
    for p in preds:
        pos = _pair(Lit(p), Lit(p))
        neg = _pair(Lit(p, False), Lit(p, False))

        def both(pairkey):
            ups = {a.bound for a in atoms
                   if a.direction == AT_MOST and a.lits == pairkey}
            downs = {a.bound for a in atoms
                     if a.direction == AT_LEAST and a.lits == pairkey}
            return sorted(ups & downs)

        cp, cn = both(pos), both(neg)
        if not cp or not cn:
            return None
        cands[p] = (cp, cn)
    first = preds[0]
    totals = sorted({c + d for c in cands[first][0] for d in cands[first][1]})
    for total in totals:
        if total <= 0:
            continue
        counts: dict[str, int] = {}
        for p in preds:
            cp, cn = cands[p]
            pick = next((c for c in cp if total - c in cn), None)
            if pick is None:
                break
            counts[p] = pick
        else:
            return total, counts
    return None


def incompleteness_instance(m: int) -> tuple[list[UnaryAtom], list[UnaryAtom]]:
    """The numerically explicit premise set whose per-cell intersection
    counts are forced through the unique-solution Boolean system, together
    with the goal family "at least 1 (t_j and r)".

    Every goal is semantically entailed, yet at least one is underivable in
    the calculus (the probabilistic semantics certifies this).  Exact-count
    premises are emitted as their <= / >= pairs.
    """
    if m < 6:
        raise InputError("incompleteness_instance needs m >= 6")
    system = many_nonzeros_instance(m)
    t = Lit("t")
    tj = [Lit(f"t{j}") for j in range(1, m + 2)]
    si = [Lit(f"s{i}") for i in range(1, m + 1)]
    r = Lit("r")

    def exact(bound: int, lit: Lit) -> list[UnaryAtom]:
        return [at_most(bound, lit, lit), at_least(bound, lit, lit)]

    phi: list[UnaryAtom] = []
    phi.append(at_most(3 * (m + 1), t, t))
    phi += [at_least(3, x, x) for x in tj]
    phi += [at_most(0, x, t.opposite()) for x in tj]
    phi += [at_most(0, tj[j], tj[k])
            for j in range(m + 1) for k in range(j + 1, m + 1)]
    phi += [at_most(0, x, t.opposite()) for x in si]
    for i in range(m):
        for j in range(m + 1):
            if system.coeffs[i][j] == 1:
                phi.append(at_most(0, tj[j], si[i].opposite()))
            else:
                phi.append(at_most(0, tj[j], si[i]))
    for i in range(m - 1):
        phi += [at_most(3, si[i], r), at_least(3, si[i], r)]
    phi += [at_most(4, si[m - 1], r), at_least(4, si[m - 1], r)]
    # exact cardinalities for every predicate and its complement
    phi += exact(3 * (m + 1), t) + exact(3 * (m + 1), t.opposite())
    for x in tj:
        phi += exact(3, x) + exact(6 * m + 3, x.opposite())
    for x in si[:-1]:
        phi += exact(9, x) + exact(6 * m - 3, x.opposite())
    phi += exact(12, si[-1]) + exact(6 * m - 6, si[-1].opposite())
    phi += exact(3 * (m + 1), r) + exact(3 * (m + 1), r.opposite())
    goals = [at_least(1, x, r) for x in tj]
    return phi, goals
