"""Core syntax and exact finite-model semantics for counting-quantifier fragments.

The sentence forms handled across the package are counting atoms: "at
least/at most C elements satisfy L1 and L2" over unary literals, plus the
relational form "at least/at most C p VERB at least/at most D q" in which the
subject quantifier always scopes over the object quantifier.  A small
one-variable formula language (conjunction, disjunction, negation, counting
quantifiers over unary atoms) embeds the unary atoms and is what the
satisfiability pipeline normalizes.

Everything here is immutable after construction and evaluated exactly over
explicit finite structures; there are no approximation paths.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .errors import CapExceededError, InputError, UnknownPredicateError

AT_LEAST = ">="
AT_MOST = "<="
EXACTLY = "="

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _check_ident(name: str) -> str:
    if not _IDENT.match(name or ""):
        raise InputError(f"not a valid predicate name: {name!r}")
    return name


@dataclass(frozen=True)
class Lit:
    """A signed unary predicate: p or !p."""

    pred: str
    positive: bool = True

    def __post_init__(self):
        _check_ident(self.pred)

    def opposite(self) -> "Lit":
        return Lit(self.pred, not self.positive)

    @property
    def sort_key(self):
        # positive before negative, predicate names lexicographic
        return (self.pred, 0 if self.positive else 1)

    def __str__(self) -> str:
        return self.pred if self.positive else "!" + self.pred


@dataclass(frozen=True)
class UnaryAtom:
    """One sentence of the unary fragments: at least/at most C (L1 and L2).

    The literal pair is canonically ordered, so the two spellings of a
    symmetric sentence compare (and hash) equal.  Bounds may be negative:
    such atoms only arise inside the proof engine, where `<= C` for C < 0 is
    the constant-false sentence and `>= C` for C <= 0 the constant-true one.
    """

    direction: str
    bound: int
    lits: tuple[Lit, Lit]

    def __post_init__(self):
        if self.direction not in (AT_LEAST, AT_MOST):
            raise InputError(f"bad direction {self.direction!r}")
        if len(self.lits) != 2:
            raise InputError("unary atom needs exactly two literals")
        ordered = tuple(sorted(self.lits, key=lambda l: l.sort_key))
        object.__setattr__(self, "lits", ordered)

    @property
    def is_trivially_false(self) -> bool:
        return self.direction == AT_MOST and self.bound < 0

    @property
    def is_trivially_true(self) -> bool:
        return self.direction == AT_LEAST and self.bound <= 0

    def predicates(self) -> set[str]:
        return {l.pred for l in self.lits}

    def __str__(self) -> str:
        return f"{self.direction}{self.bound} ({self.lits[0]} & {self.lits[1]})"


@dataclass(frozen=True)
class RelationalAtom:
    """A transitive-verb sentence: at least/at most C p VERB at least/at most D q.

    `subject` and `obj` are unary predicates, `verb` is binary.  The subject
    quantifier scopes over the object quantifier.
    """

    direction: str
    bound: int
    subject: str
    verb: str
    inner_direction: str
    inner_bound: int
    obj: str

    def __post_init__(self):
        for d in (self.direction, self.inner_direction):
            if d not in (AT_LEAST, AT_MOST):
                raise InputError(f"bad direction {d!r}")
        for name in (self.subject, self.verb, self.obj):
            _check_ident(name)

    @property
    def is_trivially_false(self) -> bool:
        return self.direction == AT_MOST and self.bound < 0

    @property
    def is_trivially_true(self) -> bool:
        return self.direction == AT_LEAST and self.bound <= 0

    def predicates(self) -> set[str]:
        return {self.subject, self.obj}

    def __str__(self) -> str:
        return (
            f"{self.direction}{self.bound} {self.subject} "
            f"[{self.verb} {self.inner_direction}{self.inner_bound} {self.obj}]"
        )


CountingAtom = Union[UnaryAtom, RelationalAtom]


def at_least(bound: int, l1: Lit, l2: Lit) -> UnaryAtom:
    return UnaryAtom(AT_LEAST, bound, (l1, l2))


def at_most(bound: int, l1: Lit, l2: Lit) -> UnaryAtom:
    return UnaryAtom(AT_MOST, bound, (l1, l2))


def negate_atom(a: CountingAtom) -> CountingAtom:
    """The dual sentence: >=C becomes <=C-1, <=C becomes >=C+1.

    For relational atoms only the outer quantifier flips.  On every finite
    structure exactly one of {a, negate_atom(a)} holds.  Dualizing >=0
    yields <=-1, the constant-false atom (see is_trivially_false).
    """
    if isinstance(a, UnaryAtom):
        if a.direction == AT_LEAST:
            return UnaryAtom(AT_MOST, a.bound - 1, a.lits)
        return UnaryAtom(AT_LEAST, a.bound + 1, a.lits)
    if a.direction == AT_LEAST:
        return RelationalAtom(AT_MOST, a.bound - 1, a.subject, a.verb,
                              a.inner_direction, a.inner_bound, a.obj)
    return RelationalAtom(AT_LEAST, a.bound + 1, a.subject, a.verb,
                          a.inner_direction, a.inner_bound, a.obj)


# ---------------------------------------------------------------------------
# One-variable formulas with counting quantifiers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Pred:
    name: str

    def __post_init__(self):
        _check_ident(self.name)

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Not:
    body: "C1Formula"

    def __str__(self):
        return f"!{self.body}"


@dataclass(frozen=True)
class And:
    parts: tuple["C1Formula", ...]

    def __str__(self):
        return "(" + " & ".join(map(str, self.parts)) + ")" if self.parts else "true"


@dataclass(frozen=True)
class Or:
    parts: tuple["C1Formula", ...]

    def __str__(self):
        return "(" + " | ".join(map(str, self.parts)) + ")" if self.parts else "false"


@dataclass(frozen=True)
class Count:
    """A counting quantifier node: there exist >=/<=/= `bound` elements
    satisfying `body`.  Quantifier nesting re-binds the single variable, so
    a nested Count is a closed subformula."""

    direction: str
    bound: int
    body: "C1Formula"

    def __post_init__(self):
        if self.direction not in (AT_LEAST, AT_MOST, EXACTLY):
            raise InputError(f"bad quantifier direction {self.direction!r}")

    def __str__(self):
        return f"E{self.direction}{self.bound} x {self.body}"


C1Formula = Union[Pred, Not, And, Or, Count]

TRUE = And(())
FALSE = Or(())


def lit_formula(l: Lit) -> C1Formula:
    return Pred(l.pred) if l.positive else Not(Pred(l.pred))


def atom_formula(a: UnaryAtom) -> Count:
    """Lossless embedding of a unary counting atom into the formula language."""
    if not isinstance(a, UnaryAtom):
        raise InputError("only unary atoms embed into one-variable formulas")
    return Count(a.direction, a.bound, And((lit_formula(a.lits[0]),
                                            lit_formula(a.lits[1]))))


def formula_predicates(f: C1Formula) -> set[str]:
    if isinstance(f, Pred):
        return {f.name}
    if isinstance(f, Not):
        return formula_predicates(f.body)
    if isinstance(f, (And, Or)):
        out: set[str] = set()
        for p in f.parts:
            out |= formula_predicates(p)
        return out
    if isinstance(f, Count):
        return formula_predicates(f.body)
    raise InputError(f"not a formula: {f!r}")


def is_quantifier_free(f: C1Formula) -> bool:
    if isinstance(f, Count):
        return False
    if isinstance(f, Not):
        return is_quantifier_free(f.body)
    if isinstance(f, (And, Or)):
        return all(is_quantifier_free(p) for p in f.parts)
    return True


def is_closed(f: C1Formula) -> bool:
    """True when every predicate occurrence sits under some quantifier."""
    if isinstance(f, Pred):
        return False
    if isinstance(f, Not):
        return is_closed(f.body)
    if isinstance(f, (And, Or)):
        return all(is_closed(p) for p in f.parts)
    return True  # Count


def eval_quantifier_free(f: C1Formula, assignment: Mapping[str, bool]) -> bool:
    """Evaluate a quantifier-free formula under a truth assignment."""
    if isinstance(f, Pred):
        try:
            return assignment[f.name]
        except KeyError:
            raise UnknownPredicateError(f.name) from None
    if isinstance(f, Not):
        return not eval_quantifier_free(f.body, assignment)
    if isinstance(f, And):
        return all(eval_quantifier_free(p, assignment) for p in f.parts)
    if isinstance(f, Or):
        return any(eval_quantifier_free(p, assignment) for p in f.parts)
    raise InputError("formula is not quantifier-free")


def as_literal_conjunction(f: C1Formula) -> tuple[Lit, ...] | None:
    """Return the literals of f when it is a flat conjunction of literals,
    else None.  Used for fast-path column pruning."""
    if isinstance(f, Pred):
        return (Lit(f.name),)
    if isinstance(f, Not) and isinstance(f.body, Pred):
        return (Lit(f.body.name, False),)
    if isinstance(f, And):
        lits: list[Lit] = []
        for p in f.parts:
            sub = as_literal_conjunction(p)
            if sub is None:
                return None
            lits.extend(sub)
        return tuple(lits)
    return None


# ---------------------------------------------------------------------------
# Finite structures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteStructure:
    """An explicit finite interpretation.

    Elements are the dense indices 0..domain_size-1.  `unary` maps each unary
    predicate to its extension, `binary` each binary predicate to a set of
    ordered pairs.  Values are normalized to frozensets; treat instances as
    immutable (they are shared freely across threads).
    """

    domain_size: int
    unary: Mapping[str, frozenset[int]]
    binary: Mapping[str, frozenset[tuple[int, int]]]

    def __post_init__(self):
        if self.domain_size < 0:
            raise InputError("negative domain size")
        un = {}
        for p, ext in self.unary.items():
            _check_ident(p)
            ext = frozenset(ext)
            if any(not (0 <= e < self.domain_size) for e in ext):
                raise InputError(f"element out of range in unary {p}")
            un[p] = ext
        bi = {}
        for r, ext in self.binary.items():
            _check_ident(r)
            ext = frozenset((int(a), int(b)) for a, b in ext)
            if any(not (0 <= a < self.domain_size and 0 <= b < self.domain_size)
                   for a, b in ext):
                raise InputError(f"element out of range in binary {r}")
            bi[r] = ext
        object.__setattr__(self, "unary", un)
        object.__setattr__(self, "binary", bi)

    def unary_ext(self, pred: str) -> frozenset[int]:
        try:
            return self.unary[pred]
        except KeyError:
            raise UnknownPredicateError(f"unary predicate {pred!r} not interpreted") from None

    def binary_ext(self, pred: str) -> frozenset[tuple[int, int]]:
        try:
            return self.binary[pred]
        except KeyError:
            raise UnknownPredicateError(f"binary predicate {pred!r} not interpreted") from None

    def lit_ext(self, l: Lit) -> frozenset[int]:
        ext = self.unary_ext(l.pred)
        if l.positive:
            return ext
        return frozenset(range(self.domain_size)) - ext


def structure(domain_size: int,
              unary: Mapping[str, Iterable[int]] | None = None,
              binary: Mapping[str, Iterable[tuple[int, int]]] | None = None,
              ) -> FiniteStructure:
    """Convenience constructor accepting any iterables."""
    return FiniteStructure(domain_size,
                           {p: frozenset(v) for p, v in (unary or {}).items()},
                           {r: frozenset(v) for r, v in (binary or {}).items()})


def _compare(count: int, direction: str, bound: int) -> bool:
    if direction == AT_LEAST:
        return count >= bound
    if direction == AT_MOST:
        return count <= bound
    return count == bound


def _holds_at(s: FiniteStructure, f: C1Formula, element: int | None) -> bool:
    if isinstance(f, Pred):
        if element is None:
            raise InputError("free variable in a closed evaluation context")
        return element in s.unary_ext(f.name)
    if isinstance(f, Not):
        return not _holds_at(s, f.body, element)
    if isinstance(f, And):
        return all(_holds_at(s, p, element) for p in f.parts)
    if isinstance(f, Or):
        return any(_holds_at(s, p, element) for p in f.parts)
    if isinstance(f, Count):
        n = sum(1 for e in range(s.domain_size) if _holds_at(s, f.body, e))
        return _compare(n, f.direction, f.bound)
    raise InputError(f"cannot evaluate {f!r}")


def evaluate(s: FiniteStructure, f) -> bool:
    """Exact truth value of a counting atom or closed formula in s.

    Relational atoms count subjects whose per-object tallies meet the inner
    bound (subjects scope over objects).  Raises UnknownPredicateError when a
    predicate of f is not interpreted in s.
    """
    if isinstance(f, UnaryAtom):
        ext = s.lit_ext(f.lits[0]) & s.lit_ext(f.lits[1])
        return _compare(len(ext), f.direction, f.bound)
    if isinstance(f, RelationalAtom):
        subj = s.unary_ext(f.subject)
        obj = s.unary_ext(f.obj)
        edges = s.binary_ext(f.verb)
        hits = 0
        for a in subj:
            inner = sum(1 for b in obj if (a, b) in edges)
            if _compare(inner, f.inner_direction, f.inner_bound):
                hits += 1
        return _compare(hits, f.direction, f.bound)
    if isinstance(f, (Pred, Not, And, Or, Count)):
        if not is_closed(f):
            raise InputError("formula has a free variable; evaluate needs a closed formula")
        return _holds_at(s, f, None)
    raise InputError(f"cannot evaluate {f!r}")


# ---------------------------------------------------------------------------
# 1-types
# ---------------------------------------------------------------------------

ONE_TYPE_CAP = 24


def one_types(preds: list[str], cap: int = ONE_TYPE_CAP) -> list[int]:
    """All 2^l one-type bitmasks over an ordered predicate list, numeric order.

    Bit i of a mask is the polarity of preds[i].
    """
    if len(set(preds)) != len(preds):
        raise InputError("duplicate predicates in one_types")
    if len(preds) > cap:
        raise CapExceededError(f"{len(preds)} predicates exceed the cap of {cap}")
    return list(range(1 << len(preds)))


def mask_assignment(mask: int, preds: list[str]) -> dict[str, bool]:
    return {p: bool((mask >> i) & 1) for i, p in enumerate(preds)}


def mask_satisfies(mask: int, preds_index: Mapping[str, int], lit: Lit) -> bool:
    bit = (mask >> preds_index[lit.pred]) & 1
    return bool(bit) == lit.positive


def element_one_type(s: FiniteStructure, preds: list[str], element: int) -> int:
    mask = 0
    for i, p in enumerate(preds):
        if element in s.unary_ext(p):
            mask |= 1 << i
    return mask


def cardinality_vector(s: FiniteStructure, preds: list[str],
                       cap: int = ONE_TYPE_CAP) -> list[int]:
    """Entry j = number of elements realizing the j-th one-type; sums to
    domain_size."""
    masks = one_types(preds, cap)
    vec = [0] * len(masks)
    for e in range(s.domain_size):
        vec[element_one_type(s, preds, e)] += 1
    return vec


# ---------------------------------------------------------------------------
# Structure file format
# ---------------------------------------------------------------------------
# domain N
# unary p: 0, 1, 2
# binary r: (0,1), (2,0)

def parse_structure(text: str) -> FiniteStructure:
    domain = None
    unary: dict[str, set[int]] = {}
    binary: dict[str, set[tuple[int, int]]] = {}
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("domain"):
                domain = int(line.split()[1])
            elif line.startswith("unary"):
                head, _, rest = line[len("unary"):].partition(":")
                pred = head.strip()
                elems = {int(t) for t in rest.replace(",", " ").split()}
                unary.setdefault(pred, set()).update(elems)
            elif line.startswith("binary"):
                head, _, rest = line[len("binary"):].partition(":")
                pred = head.strip()
                pairs = re.findall(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)", rest)
                stripped = re.sub(r"[\s,]*\(\s*\d+\s*,\s*\d+\s*\)[\s,]*", "", rest)
                if stripped.strip():
                    raise InputError(f"bad pair syntax: {rest.strip()!r}")
                binary.setdefault(pred, set()).update(
                    (int(a), int(b)) for a, b in pairs)
            else:
                raise InputError(f"unrecognized line: {line!r}")
        except (ValueError, IndexError) as exc:
            raise InputError(f"line {ln}: {exc}") from exc
    if domain is None:
        raise InputError("missing 'domain N' line")
    return structure(domain, unary, binary)


def render_structure(s: FiniteStructure) -> str:
    lines = [f"domain {s.domain_size}"]
    for p in sorted(s.unary):
        lines.append(f"unary {p}: " + ", ".join(map(str, sorted(s.unary[p]))))
    for r in sorted(s.binary):
        pairs = ", ".join(f"({a},{b})" for a, b in sorted(s.binary[r]))
        lines.append(f"binary {r}: " + pairs)
    return "\n".join(lines) + "\n"
