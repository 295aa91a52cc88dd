"""Tooling for the relational fragment: the shrink construction that turns
any model into a small one, its size bound, and a bounded exhaustive model
finder for tiny instances.

The shrink keeps, within each 1-type cell, every designated witness of an
outer "at least" sentence plus padding up to min(cell size, C*|Phi|+1), then
reinterprets each verb so every kept element sees min(original successor
count, C*|Phi|+1) successors per cell.  The output always model-checks the
input sentences and is at most L*(C*|Phi|+1) elements for L = 2^l.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import BudgetExhaustedError, CapExceededError, InputError
from .logic import (AT_LEAST, CountingAtom, FiniteStructure,
                    RelationalAtom, UnaryAtom, element_one_type, evaluate,
                    structure)


def _check_atoms(phi) -> list[CountingAtom]:
    atoms = list(phi)
    for a in atoms:
        if not isinstance(a, (UnaryAtom, RelationalAtom)):
            raise InputError(f"not a counting atom: {a!r}")
    return atoms


def _unary_preds(atoms) -> list[str]:
    preds: set[str] = set()
    for a in atoms:
        preds |= a.predicates()
    return sorted(preds)


def _binary_preds(atoms) -> list[str]:
    return sorted({a.verb for a in atoms if isinstance(a, RelationalAtom)})


def _max_bound(atoms) -> int:
    bounds = [0]
    for a in atoms:
        bounds.append(a.bound)
        if isinstance(a, RelationalAtom):
            bounds.append(a.inner_bound)
    return max(bounds)


def size_bound(phi) -> int:
    """L * (C*|Phi| + 1): a satisfiable set has a model no larger than this."""
    atoms = _check_atoms(phi)
    l = len(_unary_preds(atoms))
    return (1 << l) * (_max_bound(atoms) * len(atoms) + 1)


@dataclass(frozen=True)
class ShrinkReport:
    input_size: int
    structure: FiniteStructure
    kept_per_cell: dict[int, int]
    cell_cap: int
    witnesses: frozenset[int] = frozenset()      # original indices
    kept_elements: tuple[int, ...] = ()          # original indices, ascending


def _witness_elements(s: FiniteStructure, a: CountingAtom) -> list[int]:
    """Elements satisfying the body of an atom, ascending."""
    if isinstance(a, UnaryAtom):
        ext = s.lit_ext(a.lits[0]) & s.lit_ext(a.lits[1])
        return sorted(ext)
    subj = s.unary_ext(a.subject)
    obj = s.unary_ext(a.obj)
    edges = s.binary_ext(a.verb)
    out = []
    for e in sorted(subj):
        inner = sum(1 for b in obj if (e, b) in edges)
        ok = inner >= a.inner_bound if a.inner_direction == AT_LEAST \
            else inner <= a.inner_bound
        if ok:
            out.append(e)
    return sorted(out)


def shrink_model(s: FiniteStructure, phi) -> ShrinkReport:
    """Shrink a model of phi to at most L*(C*|Phi|+1) elements, preserving
    truth of every sentence in phi.

    Kept elements per cell and kept successors are chosen by ascending index
    (any choice works; this one makes outputs canonical).  Raises InputError
    when s is not a model of phi.
    """
    atoms = _check_atoms(phi)
    for a in atoms:
        if not evaluate(s, a):
            raise InputError(f"input structure is not a model of {a}")
    preds = _unary_preds(atoms)
    verbs = _binary_preds(atoms)
    cap = _max_bound(atoms) * len(atoms) + 1

    # Designated witnesses of outer "at least" sentences.
    a_phi: set[int] = set()
    for a in atoms:
        if a.direction == AT_LEAST and a.bound > 0:
            a_phi.update(_witness_elements(s, a)[:a.bound])

    cells: dict[int, list[int]] = {}
    for e in range(s.domain_size):
        cells.setdefault(element_one_type(s, preds, e), []).append(e)

    kept: list[int] = []
    kept_per_cell: dict[int, int] = {}
    for mask in sorted(cells):
        members = cells[mask]
        want = min(len(members), cap)
        chosen = sorted(m for m in members if m in a_phi)
        for e in members:
            if len(chosen) >= want:
                break
            if e not in a_phi:
                chosen.append(e)
        chosen = sorted(chosen)
        assert len(chosen) == want
        kept.extend(chosen)
        kept_per_cell[mask] = want
    kept = sorted(kept)
    new_index = {e: i for i, e in enumerate(kept)}
    kept_cells = {mask: [e for e in cells[mask] if e in new_index]
                  for mask in cells}

    unary = {p: {new_index[e] for e in sorted(s.unary_ext(p)) if e in new_index}
             for p in s.unary}
    binary: dict[str, set[tuple[int, int]]] = {}
    for r in verbs:
        edges = s.binary_ext(r)
        new_edges: set[tuple[int, int]] = set()
        for e in kept:
            for mask, members in cells.items():
                orig = sum(1 for b in members if (e, b) in edges)
                want = min(orig, cap)
                for b in kept_cells[mask][:want]:
                    new_edges.add((new_index[e], new_index[b]))
        binary[r] = new_edges
    for r in s.binary:
        binary.setdefault(r, {(new_index[a], new_index[b])
                              for a, b in s.binary_ext(r)
                              if a in new_index and b in new_index})

    out = structure(len(kept), unary, binary)
    for a in atoms:
        assert evaluate(out, a), f"shrunk structure lost {a}"
    assert out.domain_size <= size_bound(atoms)
    assert a_phi <= set(kept), "a designated witness was dropped"
    return ShrinkReport(s.domain_size, out, kept_per_cell, cap,
                        frozenset(a_phi), tuple(kept))


# ---------------------------------------------------------------------------
# Bounded exhaustive search
# ---------------------------------------------------------------------------

def _compositions(total: int, parts: int):
    """All tuples of `parts` naturals summing to `total`, lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def bounded_search(phi, domain_cap: int, *, budget: int = 200_000
                   ) -> FiniteStructure | None:
    """Exhaustive model search up to domain_cap; None when no model exists
    within the cap.

    Complete for this fragment when domain_cap >= size_bound(phi), since the
    fragment has the finite model property with that bound.  Candidates are
    canonical under cell-respecting permutations: a cell cardinality vector
    first, then a multiset of per-element successor-count profiles per cell.
    Profiles only track counts into cells some object predicate can see -
    the semantics inspects nothing else - and are materialized on ascending
    indices.  Raises BudgetExhaustedError when the budget runs out, which is
    distinct from "no model up to the cap".
    """
    atoms = _check_atoms(phi)
    preds = _unary_preds(atoms)
    verbs = _binary_preds(atoms)
    l = len(preds)
    if l > 16:
        raise CapExceededError("too many unary predicates for exhaustive search")
    cells = 1 << l
    pred_index = {p: i for i, p in enumerate(preds)}
    # cells some object predicate of each verb can see
    relevant: dict[str, list[int]] = {}
    for r in verbs:
        objs = {a.obj for a in atoms
                if isinstance(a, RelationalAtom) and a.verb == r}
        relevant[r] = [k for k in range(cells)
                       if any((k >> pred_index[o]) & 1 for o in objs)]
    spent = 0
    for n in range(1, domain_cap + 1):
        for alpha in _compositions(n, cells):
            spent += 1
            if spent > budget:
                raise BudgetExhaustedError("bounded_search budget exhausted")
            unary = {p: set() for p in preds}
            starts = []
            pos = 0
            for mask, count in enumerate(alpha):
                starts.append(pos)
                for i, p in enumerate(preds):
                    if (mask >> i) & 1:
                        unary[p].update(range(pos, pos + count))
                pos += count
            base = structure(n, unary, {r: () for r in verbs})
            if not all(evaluate(base, a) for a in atoms
                       if isinstance(a, UnaryAtom)):
                continue
            if not verbs:
                if all(evaluate(base, a) for a in atoms):
                    return base
                continue
            found, spent = _search_binary(atoms, base, verbs, relevant,
                                          alpha, starts, budget, spent)
            if found is not None:
                return found
    return None


def _search_binary(atoms, base, verbs, relevant, alpha, starts, budget, spent):
    """Assign each element a successor-count profile per verb, up to
    permutations inside each unary cell."""
    n = base.domain_size
    cells = len(alpha)
    # combined profile: one count per (verb, relevant cell)
    axes = [(r, k) for r in verbs for k in relevant[r]]
    profiles = list(product(*(range(alpha[k] + 1) for _, k in axes)))

    def materialize(per_cell):
        binary = {r: set() for r in verbs}
        for cell, profile_counts in per_cell.items():
            next_elem = starts[cell]
            for profile, times in zip(profiles, profile_counts):
                for _ in range(times):
                    e = next_elem
                    next_elem += 1
                    for (r, k), cnt in zip(axes, profile):
                        for b in range(starts[k], starts[k] + cnt):
                            binary[r].add((e, b))
        return structure(n, dict(base.unary), binary)

    occupied = [k for k in range(cells) if alpha[k] > 0]

    def assign(idx: int, per_cell: dict):
        nonlocal spent
        if idx == len(occupied):
            spent += 1
            if spent > budget:
                raise BudgetExhaustedError("bounded_search budget exhausted")
            cand = materialize(per_cell)
            if all(evaluate(cand, a) for a in atoms):
                return cand
            return None
        cell = occupied[idx]
        for split in _compositions(alpha[cell], len(profiles)):
            per_cell[cell] = split
            got = assign(idx + 1, per_cell)
            if got is not None:
                return got
        per_cell.pop(cell, None)
        return None

    return assign(0, {}), spent
