"""Exact rational/integer linear feasibility and sparse-solution kernels.

Every operation here is exact: rationals are `fractions.Fraction`, integers
are Python ints, and no float is ever produced.  The feasibility core is a
phase-1 simplex with Bland's rule run on an integer tableau carrying one
shared positive denominator (fraction-free pivoting); every division it
performs is checked to be exact.

A "Boolean" system has all coefficients in {0, 1} and natural right-hand
sides; the two sparsifiers implement support-reduction exchanges that keep a
solution exact at every step and never create new nonzero coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import (BudgetExhaustedError, CapExceededError, InputError,
                     NotASolutionError)

LE = "<="
GE = ">="
EQ = "="

_RELATIONS = (LE, GE, EQ)


_FRAC_CACHE = {v: Fraction(v) for v in range(-2, 65)}


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise InputError("floats are not accepted; use Fraction or int")
    if isinstance(x, int):
        cached = _FRAC_CACHE.get(x)
        if cached is not None:
            return cached
    return Fraction(x)


@dataclass(frozen=True)
class LinearSystem:
    """m rows of rational coefficients, one relation and rhs per row."""

    coeffs: tuple[tuple[Fraction, ...], ...]
    relations: tuple[str, ...]
    rhs: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(tuple(_frac(a) for a in row) for row in self.coeffs)
        rhs = tuple(_frac(c) for c in self.rhs)
        if len(coeffs) != len(self.relations) or len(coeffs) != len(rhs):
            raise InputError("row count mismatch between coeffs, relations, rhs")
        if any(rel not in _RELATIONS for rel in self.relations):
            raise InputError("relations must be <=, >= or =")
        widths = {len(row) for row in coeffs}
        if len(widths) > 1:
            raise InputError("ragged coefficient rows")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "rhs", rhs)
        object.__setattr__(self, "relations", tuple(self.relations))

    @property
    def m(self) -> int:
        return len(self.coeffs)

    @property
    def num_vars(self) -> int:
        return len(self.coeffs[0]) if self.coeffs else 0

    @property
    def is_boolean(self) -> bool:
        """True when every coefficient is 0/1 and every rhs is a natural."""
        return (all(c.denominator == 1 and c >= 0 for c in self.rhs)
                and all(a == 0 or a == 1 for row in self.coeffs for a in row))

    def row_value(self, i: int, x: Sequence) -> Fraction:
        row = self.coeffs[i]
        # iterate the nonzeros of x; solutions are typically sparse
        return sum((row[j] * v for j, v in enumerate(x) if v), Fraction(0))

    def is_solution(self, x: Sequence) -> bool:
        if len(x) != self.num_vars:
            return False
        nz = [(j, Fraction(v)) for j, v in enumerate(x) if v]
        for i, rel in enumerate(self.relations):
            row = self.coeffs[i]
            v = sum((row[j] * xv for j, xv in nz), Fraction(0))
            if rel == LE and not v <= self.rhs[i]:
                return False
            if rel == GE and not v >= self.rhs[i]:
                return False
            if rel == EQ and v != self.rhs[i]:
                return False
        return True

    def with_rows(self, extra_coeffs, extra_relations, extra_rhs) -> "LinearSystem":
        return LinearSystem(self.coeffs + tuple(extra_coeffs),
                            self.relations + tuple(extra_relations),
                            self.rhs + tuple(extra_rhs))


def system_from_rows(rows: Iterable[Sequence], relations: Iterable[str],
                     rhs: Iterable) -> LinearSystem:
    return LinearSystem(tuple(tuple(_frac(a) for a in row) for row in rows),
                        tuple(relations), tuple(_frac(c) for c in rhs))


# ---------------------------------------------------------------------------
# Exact LP feasibility (phase-1 simplex, integer tableau)
# ---------------------------------------------------------------------------

def _scaled_rows(system: LinearSystem) -> list[tuple[list[tuple[int, int]], str, int]]:
    """Rows as (sparse integer coefficients, relation, integer rhs)."""
    out = []
    for i in range(system.m):
        den = math.lcm(*(a.denominator for a in system.coeffs[i]),
                       system.rhs[i].denominator)
        sparse = [(j, int(a * den)) for j, a in enumerate(system.coeffs[i]) if a]
        out.append((sparse, system.relations[i], int(system.rhs[i] * den)))
    return out


def _phase1(rows, n: int, max_pivots: int) -> tuple[Fraction, ...] | None:
    """Revised phase-1 simplex over integer data.

    The basis inverse is kept as an integer matrix with one shared positive
    denominator d (fraction-free pivoting; every division is exact by the
    subdeterminant argument, and checked).  Bland's rule everywhere; columns
    are priced sparsely, artificial variables never re-enter.
    """
    m = len(rows)
    if m == 0:
        return tuple(Fraction(0) for _ in range(n))

    # Column-major sparse matrix: originals, then slacks, then artificials.
    cols: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    rhs: list[int] = []
    basis: list[int] = []
    for i, (sparse, rel, c) in enumerate(rows):
        flip = -1 if c < 0 else 1
        slack = None
        if rel != EQ:
            slack = len(cols)
            cols.append([(i, (1 if rel == LE else -1) * flip)])
        for j, a in sparse:
            cols[j].append((i, a * flip))
        rhs.append(c * flip)
        if slack is not None and cols[slack][0][1] == 1:
            basis.append(slack)
        else:
            basis.append(-1)  # placeholder for artificial
    n_struct = len(cols)
    art_rows = []
    for i in range(m):
        if basis[i] < 0:
            basis[i] = len(cols)
            cols.append([(i, 1)])
            art_rows.append(i)
    first_art = n_struct

    binv = [[0] * m for _ in range(m)]
    for i in range(m):
        binv[i][i] = 1
    xb = list(rhs)
    d = 1
    is_art_basis = [basis[i] >= first_art for i in range(m)]

    pivots = 0
    while True:
        # y = (basis cost vector) . Binv; cost 1 on artificial basics.
        y = [0] * m
        for i in range(m):
            if is_art_basis[i]:
                row = binv[i]
                for k in range(m):
                    y[k] += row[k]
        enter = -1
        for j in range(first_art):
            # reduced cost numerator of a zero-cost column is -(y . A_j)
            acc = 0
            for r, a in cols[j]:
                acc += y[r] * a
            if acc > 0:
                enter = j
                break
        if enter < 0:
            break
        u = [0] * m
        for r, a in cols[enter]:
            for i in range(m):
                u[i] += binv[i][r] * a
        leave = -1
        for i in range(m):
            if u[i] > 0:
                if leave < 0:
                    leave = i
                    continue
                lhs = xb[i] * u[leave]
                rhs_ = xb[leave] * u[i]
                if lhs < rhs_ or (lhs == rhs_ and basis[i] < basis[leave]):
                    leave = i
        if leave < 0:
            raise AssertionError("phase-1 objective unbounded below")
        piv = u[leave]
        lrow = binv[leave]
        lxb = xb[leave]
        for i in range(m):
            if i == leave:
                continue
            f = u[i]
            row = binv[i]
            if f == 0:
                if piv != d:
                    for k in range(m):
                        v = row[k]
                        if v:
                            q, rr = divmod(v * piv, d)
                            if rr:
                                raise ArithmeticError("non-exact pivot division")
                            row[k] = q
                    q, rr = divmod(xb[i] * piv, d)
                    if rr:
                        raise ArithmeticError("non-exact pivot division")
                    xb[i] = q
            else:
                for k in range(m):
                    q, rr = divmod(row[k] * piv - f * lrow[k], d)
                    if rr:
                        raise ArithmeticError("non-exact pivot division")
                    row[k] = q
                q, rr = divmod(xb[i] * piv - f * lxb, d)
                if rr:
                    raise ArithmeticError("non-exact pivot division")
                xb[i] = q
        basis[leave] = enter
        is_art_basis[leave] = False
        d = piv
        pivots += 1
        if pivots > max_pivots:
            raise BudgetExhaustedError("simplex pivot budget exhausted")

    if any(is_art_basis[i] and xb[i] != 0 for i in range(m)):
        return None
    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = Fraction(xb[i], d)
    return tuple(x)


def lp_feasible(system: LinearSystem, *, max_pivots: int = 500_000
                ) -> tuple[Fraction, ...] | None:
    """Some nonnegative rational solution of the system, or None.

    Exact and deterministic.  Raises BudgetExhaustedError only if the pivot
    budget is hit (Bland's rule guarantees finite termination).
    """
    return _phase1(_scaled_rows(system), system.num_vars, max_pivots)


# ---------------------------------------------------------------------------
# Sparse solutions
# ---------------------------------------------------------------------------

def _support(x: Sequence) -> list[int]:
    return [j for j, v in enumerate(x) if v != 0]


def _kernel_vector(columns: list[list[Fraction]], m: int) -> list[Fraction] | None:
    """A nonzero rational kernel vector of the m x k matrix given by columns,
    canonical: the RREF null vector for the first free column."""
    k = len(columns)
    rows = [[columns[j][i] for j in range(k)] for i in range(m)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(k):
        pr = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append((r, c))
        r += 1
        if r == m:
            break
    pivot_cols = {c for _, c in pivots}
    free = next((c for c in range(k) if c not in pivot_cols), None)
    if free is None:
        return None
    vec = [Fraction(0)] * k
    vec[free] = Fraction(1)
    for pr, pc in pivots:
        vec[pc] = -rows[pr][free]
    return vec


def sparsify_rational(system: LinearSystem, solution: Sequence
                      ) -> tuple[Fraction, ...]:
    """Reduce a nonnegative rational solution of an all-equality system to at
    most m nonzero entries.

    Each step finds a rational kernel vector supported on the current support
    and moves by the extremal step that zeroes at least one more coordinate
    while staying nonnegative; zero coordinates stay zero forever.
    """
    if any(rel != EQ for rel in system.relations):
        raise InputError("sparsify_rational needs an all-equality system")
    sol = [Fraction(v) for v in solution]
    if any(v < 0 for v in sol) or not system.is_solution(sol):
        raise NotASolutionError("input does not solve the system over Q+")
    m = system.m
    while True:
        support = _support(sol)
        if len(support) <= m:
            break
        cols = [[system.coeffs[i][j] for i in range(m)] for j in support]
        kern = _kernel_vector(cols, m)
        assert kern is not None, "more than m columns must be dependent"
        # Feasible step range; candidates that zero a coordinate.
        eps_neg = None  # largest (closest to 0) negative candidate
        eps_pos = None  # smallest positive candidate
        for idx, j in enumerate(support):
            kj = kern[idx]
            if kj > 0:
                cand = -sol[j] / kj
                if eps_neg is None or cand > eps_neg:
                    eps_neg = cand
            elif kj < 0:
                cand = -sol[j] / kj
                if eps_pos is None or cand < eps_pos:
                    eps_pos = cand
        if eps_pos is not None and (eps_neg is None or eps_pos <= -eps_neg):
            eps = eps_pos
        else:
            eps = eps_neg
        for idx, j in enumerate(support):
            sol[j] += eps * kern[idx]
        assert all(v >= 0 for v in sol)
        assert system.is_solution(sol)
        assert len(_support(sol)) < len(support)
    return tuple(sol)


def natural_sparsity_bound(m: int, num_vars: int) -> int:
    """ceil(m * log2(L + 1)) computed exactly: the least b with 2^b >= (L+1)^m."""
    if m == 0:
        return 0
    target = (num_vars + 1) ** m
    return (target - 1).bit_length()


def _colliding_subsets(system: LinearSystem, support: list[int],
                       max_subsets: int = 2_000_000
                       ) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Two distinct subsets of the support whose column sums agree,
    enumerated by increasing size then lexicographically."""
    m = system.m
    seen: dict[tuple[int, ...], tuple[int, ...]] = {}
    count = 0
    for size in range(1, len(support) + 1):
        for subset in combinations(support, size):
            vec = tuple(int(sum(system.coeffs[i][j] for j in subset))
                        for i in range(m))
            prev = seen.get(vec)
            if prev is not None:
                return prev, subset
            seen[vec] = subset
            count += 1
            if count > max_subsets:
                raise BudgetExhaustedError("subset-collision search budget exhausted")
    raise AssertionError("no colliding subsets below the proven bound")


def sparsify_natural(system: LinearSystem, solution: Sequence[int],
                     *, pair_first_above: int = 40) -> tuple[int, ...]:
    """Reduce a natural solution of a Boolean all-equality system to at most
    ceil(m * log2(L+1)) nonzero entries.

    The exchange step finds distinct support subsets with equal column sums,
    then shifts value from one to the other until a coordinate reaches zero;
    the solution re-solves the system exactly after every exchange.  For
    supports above `pair_first_above` the search first spends equal-column
    pairs before general subsets.
    """
    if not system.is_boolean:
        raise InputError("sparsify_natural needs a Boolean system")
    if any(rel != EQ for rel in system.relations):
        raise InputError("sparsify_natural needs an all-equality system")
    sol = [int(v) for v in solution]
    if any(v < 0 for v in sol) or list(solution) != sol or not system.is_solution(sol):
        raise NotASolutionError("input does not solve the system over N")
    m = system.m
    bound = natural_sparsity_bound(m, system.num_vars)
    while True:
        support = _support(sol)
        if len(support) <= bound:
            break
        pair = None
        if len(support) > pair_first_above:
            cols = {}
            for j in support:
                key = tuple(system.coeffs[i][j] for i in range(m))
                if key in cols:
                    pair = ((cols[key],), (j,))
                    break
                cols[key] = j
        if pair is None:
            pair = _colliding_subsets(system, support)
        i_set, i_prime = pair
        j_dec = tuple(sorted(set(i_set) - set(i_prime)))
        j_inc = tuple(sorted(set(i_prime) - set(i_set)))
        if not j_dec:
            j_dec, j_inc = j_inc, j_dec
        step = min(sol[j] for j in j_dec)
        for j in j_dec:
            sol[j] -= step
        for j in j_inc:
            sol[j] += step
        assert system.is_solution(sol)
        assert len(_support(sol)) < len(support)
    return tuple(sol)


def check_prop2_bound(system: LinearSystem, solution: Sequence[int]) -> bool:
    """True iff the solution has at most 5/2 * m * log2(m) + 1 nonzeros.

    Compared exactly: nnz <= 5/2 m log2 m + 1 iff 4^(nnz-1) <= m^(5m).
    """
    nnz = len(_support(solution))
    if nnz == 0:
        return True
    m = system.m
    if m == 0:
        return nnz == 0
    return 4 ** (nnz - 1) <= m ** (5 * m)


def many_nonzeros_instance(m: int) -> LinearSystem:
    """The m x (m+1) Boolean system whose unique natural solution is all-ones.

    The first m-1 rows slide a block of three 1s one step right per row; the
    last row is (1,1,0,1,0,0,1,0,...,0).  The right-hand side is (3,...,3,4).
    """
    if m < 6:
        raise InputError("many_nonzeros_instance needs m >= 6")
    width = m + 1
    rows = []
    for i in range(m - 1):
        row = [0] * width
        row[i] = row[i + 1] = row[i + 2] = 1
        rows.append(row)
    last = [0] * width
    for j in (0, 1, 3, 6):
        last[j] = 1
    rows.append(last)
    rhs = [3] * (m - 1) + [4]
    return system_from_rows(rows, [EQ] * m, rhs)


# ---------------------------------------------------------------------------
# Bounded integer feasibility
# ---------------------------------------------------------------------------

def _prop_rows(system: LinearSystem):
    """Preprocess rows for propagation; integer rows get pure-int arithmetic."""
    out = []
    for i in range(system.m):
        nz = [(j, a) for j, a in enumerate(system.coeffs[i]) if a != 0]
        c = system.rhs[i]
        if all(a.denominator == 1 for _, a in nz) and c.denominator == 1:
            nz = [(j, int(a)) for j, a in nz]
            c = int(c)
        amax = max((abs(a) for _, a in nz), default=0)
        out.append((nz, system.relations[i], c, amax))
    return out


def _propagate(rows, lo: list[int], hi: list[int], max_passes: int = 60) -> bool:
    """Interval tightening per row to fixpoint; False on conflict.

    Bounds derived here are valid for every integer solution inside the box.
    A row's per-variable pass is skipped when the row slack provably cannot
    tighten anything (slack >= amax * widest interval).
    """
    for _ in range(max_passes):
        changed = False
        for nz, rel, c, amax in rows:
            min_lhs = 0
            max_lhs = 0
            width = 0
            for j, a in nz:
                w = hi[j] - lo[j]
                if w < 0:
                    return False
                if w > width:
                    width = w
                if a > 0:
                    min_lhs += a * lo[j]
                    max_lhs += a * hi[j]
                else:
                    min_lhs += a * hi[j]
                    max_lhs += a * lo[j]
            if rel in (LE, EQ):
                slack = c - min_lhs
                if slack < 0:
                    return False
                if amax * width > slack:
                    for j, a in nz:
                        if a > 0:
                            if a * (hi[j] - lo[j]) > slack:
                                hi[j] = lo[j] + slack // a
                                changed = True
                        else:
                            p = -a
                            if p * (hi[j] - lo[j]) > slack:
                                lo[j] = hi[j] - slack // p
                                changed = True
            if rel in (GE, EQ):
                surplus = max_lhs - c
                if surplus < 0:
                    return False
                if amax * width > surplus:
                    for j, a in nz:
                        if a > 0:
                            if a * (hi[j] - lo[j]) > surplus:
                                lo[j] = hi[j] - surplus // a
                                changed = True
                        else:
                            p = -a
                            if p * (hi[j] - lo[j]) > surplus:
                                hi[j] = lo[j] + surplus // p
                                changed = True
            if any(lo[j] > hi[j] for j, _ in nz):
                return False
        if not changed:
            return True
    return True


def _greedy_seed(system: LinearSystem, ubs: list[int],
                 max_steps: int = 4_000) -> tuple[int, ...] | None:
    """Cheap covering heuristic: repeatedly bump the variable that serves the
    most unmet >=-rows without breaking any <=/=-row.  Sound (the result is
    verified exactly); returns None when the heuristic dead-ends."""
    m, n = system.m, system.num_vars
    cols: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for i in range(m):
        for j, a in enumerate(system.coeffs[i]):
            if a != 0:
                if a.denominator != 1:
                    return None
                cols[j].append((i, int(a)))
    if any(c.denominator != 1 for c in system.rhs):
        return None
    rhs = [int(c) for c in system.rhs]
    vals = [0] * n
    sums = [0] * m
    ge_rows = [i for i in range(m)
               if system.relations[i] in (GE, EQ) and rhs[i] > 0]
    row_pos_cols: dict[int, list[int]] = {i: [] for i in ge_rows}
    for j in range(n):
        for i, a in cols[j]:
            if a > 0 and i in row_pos_cols:
                row_pos_cols[i].append(j)
    for _ in range(max_steps):
        unmet = [i for i in ge_rows if sums[i] < rhs[i]]
        if not unmet:
            return tuple(vals) if system.is_solution(vals) else None
        unmet_set = set(unmet)
        target = unmet[0]
        best, best_score = -1, 0
        for j in row_pos_cols[target]:
            if vals[j] >= ubs[j]:
                continue
            score = 0
            ok = True
            helps_target = False
            for i, a in cols[j]:
                rel = system.relations[i]
                if rel == LE and sums[i] + a > rhs[i]:
                    ok = False
                    break
                if rel == EQ and sums[i] + a > rhs[i]:
                    ok = False
                    break
                if a > 0 and i in unmet_set:
                    score += 1
                    if i == target:
                        helps_target = True
            if ok and helps_target and score > best_score:
                best, best_score = j, score
        if best < 0:
            return None
        vals[best] += 1
        for i, a in cols[best]:
            sums[i] += a
    return None


def ilp_solve(system: LinearSystem, upper_bounds: Sequence[int], *,
              max_nodes: int = 200_000, use_lp: bool = True
              ) -> tuple[int, ...] | None:
    """A natural solution with x_j <= upper_bounds[j], or None.

    Depth-first search: interval propagation per row, LP-relaxation pruning
    (exact simplex over the rows plus accumulated branch constraints), and
    bisection on the LP-fractional variable with the smallest remaining
    interval.  Deterministic.  Raises BudgetExhaustedError when the node
    budget runs out; that is reported distinctly from infeasibility.
    """
    n = system.num_vars
    ubs = [int(b) for b in upper_bounds]
    if len(ubs) != n or any(b < 0 for b in ubs):
        raise InputError("need one nonnegative upper bound per variable")
    rows = _prop_rows(system)
    seed = _greedy_seed(system, ubs)
    if seed is not None:
        return seed
    base_int_rows = _scaled_rows(system)
    nodes = 0
    lazy_ub: set[int] = set()  # box rows added to the LP on demand

    def lp_check(branch_rows) -> tuple[Fraction, ...] | None:
        extra = list(branch_rows) + [(j, LE, ubs[j]) for j in sorted(lazy_ub)]
        while True:
            lp_rows = base_int_rows + [([(j, 1)], rel, int(v))
                                       for j, rel, v in extra]
            sol = _phase1(lp_rows, n, 500_000)
            if sol is None:
                return None
            violated = [j for j in range(n) if sol[j] > ubs[j] and j not in lazy_ub]
            if not violated:
                return sol
            lazy_ub.update(violated)
            extra += [(j, LE, ubs[j]) for j in violated]

    def search(lo: list[int], hi: list[int], branch_rows) -> tuple[int, ...] | None:
        nonlocal nodes
        nodes += 1
        if nodes > max_nodes:
            raise BudgetExhaustedError("ilp_solve node budget exhausted")
        if not _propagate(rows, lo, hi):
            return None
        if all(l == h for l, h in zip(lo, hi)):
            cand = tuple(lo)
            return cand if system.is_solution(cand) else None
        branch_j = -1
        split = None
        if use_lp:
            sol = lp_check(branch_rows)
            if sol is None:
                return None
            if all(v.denominator == 1 for v in sol):
                cand = tuple(int(v) for v in sol)
                if all(0 <= v <= u for v, u in zip(cand, ubs)):
                    assert system.is_solution(cand)
                    return cand
            frac = [(hi[j] - lo[j], j) for j in range(n)
                    if sol[j].denominator != 1 and hi[j] > lo[j]]
            if frac:
                _, branch_j = min(frac)
                split = min(max(math.floor(sol[branch_j]), lo[branch_j]),
                            hi[branch_j] - 1)
        if branch_j < 0:
            open_vars = [(hi[j] - lo[j], j) for j in range(n) if hi[j] > lo[j]]
            _, branch_j = min(open_vars)
            split = (lo[branch_j] + hi[branch_j]) // 2
        lo_child_hi = hi[:]
        lo_child_hi[branch_j] = min(hi[branch_j], split)
        got = search(lo[:], lo_child_hi, branch_rows + ((branch_j, LE, split),))
        if got is not None:
            return got
        hi_child_lo = lo[:]
        hi_child_lo[branch_j] = max(lo[branch_j], split + 1)
        return search(hi_child_lo, hi[:], branch_rows + ((branch_j, GE, split + 1),))

    return search([0] * n, list(ubs), ())


def enumerate_solutions(system: LinearSystem, box: Sequence[int],
                        volume_cap: int = 10_000_000) -> list[tuple[int, ...]]:
    """All natural solutions with x_j <= box[j], lexicographic order.

    Brute-force oracle: depth-first over the box with sound partial-sum
    pruning (a prefix is cut only when no suffix completion can satisfy a
    row), exact arithmetic at the leaves.
    """
    n = system.num_vars
    box = [int(b) for b in box]
    if len(box) != n or any(b < 0 for b in box):
        raise InputError("need one nonnegative box bound per variable")
    volume = 1
    for b in box:
        volume *= b + 1
        if volume > volume_cap:
            raise CapExceededError("box volume exceeds the enumeration cap")
    m = system.m
    # suffix_min[i][j], suffix_max[i][j]: extreme contribution of vars j..n-1
    suffix_min = [[Fraction(0)] * (n + 1) for _ in range(m)]
    suffix_max = [[Fraction(0)] * (n + 1) for _ in range(m)]
    for i in range(m):
        for j in range(n - 1, -1, -1):
            a = system.coeffs[i][j]
            lo_c = a * 0 if a > 0 else a * box[j]
            hi_c = a * box[j] if a > 0 else a * 0
            suffix_min[i][j] = suffix_min[i][j + 1] + lo_c
            suffix_max[i][j] = suffix_max[i][j + 1] + hi_c
    out: list[tuple[int, ...]] = []
    partial = [Fraction(0)] * m
    x = [0] * n

    def viable(depth: int) -> bool:
        for i in range(m):
            rel = system.relations[i]
            c = system.rhs[i]
            if rel in (LE, EQ) and partial[i] + suffix_min[i][depth] > c:
                return False
            if rel in (GE, EQ) and partial[i] + suffix_max[i][depth] < c:
                return False
        return True

    def walk(depth: int):
        if depth == n:
            out.append(tuple(x))
            return
        for v in range(box[depth] + 1):
            x[depth] = v
            for i in range(m):
                partial[i] += system.coeffs[i][depth] * v
            if viable(depth + 1):
                walk(depth + 1)
            for i in range(m):
                partial[i] -= system.coeffs[i][depth] * v
        x[depth] = 0

    if viable(0):
        walk(0)
    return out


# ---------------------------------------------------------------------------
# System file format:  "m L" header, then rows "a1 ... aL (<=|>=|=) c"
# ---------------------------------------------------------------------------

def _parse_scalar(tok: str) -> Fraction:
    if "/" in tok:
        num, _, den = tok.partition("/")
        return Fraction(int(num), int(den))
    return Fraction(int(tok))


def parse_system(text: str) -> LinearSystem:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise InputError("empty system file")
    try:
        m, width = (int(t) for t in lines[0].split())
    except ValueError as exc:
        raise InputError(f"bad header line {lines[0]!r}") from exc
    if len(lines) - 1 != m:
        raise InputError(f"expected {m} rows, found {len(lines) - 1}")
    rows, relations, rhs = [], [], []
    for ln in lines[1:]:
        toks = ln.split()
        if len(toks) != width + 2 or toks[width] not in _RELATIONS:
            raise InputError(f"bad row: {ln!r}")
        rows.append([_parse_scalar(t) for t in toks[:width]])
        relations.append(toks[width])
        rhs.append(_parse_scalar(toks[-1]))
    return system_from_rows(rows, relations, rhs)


def render_system(system: LinearSystem) -> str:
    def show(v: Fraction) -> str:
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"

    lines = [f"{system.m} {system.num_vars}"]
    for i in range(system.m):
        lines.append(" ".join(show(a) for a in system.coeffs[i])
                     + f" {system.relations[i]} {show(system.rhs[i])}")
    return "\n".join(lines) + "\n"
