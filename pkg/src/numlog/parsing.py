"""Bidirectional translation between controlled English / a symbolic text
format and counting atoms.

English grammar (one sentence per line, case-insensitive keywords):

    At (least|most) C [non-]NOUN (are|is) [not] [a|an] [non-]NOUN
    At (least|most) C NOUN VERB at (least|most) D NOUN
    (Some|All|Every|No) NOUN (are|is) [not] [a|an] NOUN
    There (are|is) at (least|most) C [non-]NOUN

Sugar desugars at parse time: "Some p are q" is "At least 1 p is a q",
"All p are q" is "At most 0 p are not q", "There are at least C p" is
"At least C p are p".  All/Every/No carry no existential import.  Grammatical
number is accepted loosely everywhere (is/are, singular/plural) and carries
no meaning.  Relational sentences are read with the subject scoping over the
object; no alternative scoping is offered.

The symbolic grammar is lexicon-free, one atom per line:

    >=13 (artist & beekeeper)
    <=0 (p & !q)
    <=1 artist [admire <=7 beekeeper]
    =3 (p & q)            # sugar: expands to the <= / >= pair

Argument files for both syntaxes are UTF-8, `#` starts a comment, and an
optional conclusion follows a line reading `Therefore:`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import InputError
from .logic import (AT_LEAST, AT_MOST, CountingAtom, Lit, RelationalAtom,
                    UnaryAtom, at_least, at_most)


@dataclass(frozen=True)
class Lexicon:
    """Nouns are unary predicates, verbs binary; `plural` maps irregular
    surface forms to lemmas (regular plurals fold by stripping a final s)."""

    nouns: frozenset[str]
    verbs: frozenset[str]
    plural: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        overlap = self.nouns & self.verbs
        if overlap:
            raise InputError(f"words both noun and verb: {sorted(overlap)}")
        for surface, lemma in self.plural.items():
            if lemma not in self.nouns and lemma not in self.verbs:
                raise InputError(f"plural target {lemma!r} not in lexicon")

    def resolve_noun(self, word: str) -> str | None:
        if word in self.nouns:
            return word
        lemma = self.plural.get(word)
        if lemma in self.nouns:
            return lemma
        if word.endswith("s") and word[:-1] in self.nouns:
            return word[:-1]
        return None

    def resolve_verb(self, word: str) -> str | None:
        if word in self.verbs:
            return word
        lemma = self.plural.get(word)
        if lemma in self.verbs:
            return lemma
        if word.endswith("s") and word[:-1] in self.verbs:
            return word[:-1]
        return None

    def surface_plural(self, lemma: str) -> str:
        for surface, lm in self.plural.items():
            if lm == lemma:
                return surface
        return lemma + "s"


@dataclass(frozen=True)
class ArgumentFile:
    premises: tuple[CountingAtom, ...]
    conclusion: CountingAtom | None = None


def parse_lexicon(text: str) -> Lexicon:
    nouns: set[str] = set()
    verbs: set[str] = set()
    plural: dict[str, str] = {}
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(":")
        key = key.strip().lower()
        items = [t.strip() for t in rest.split(",") if t.strip()]
        if key == "nouns":
            nouns.update(items)
        elif key == "verbs":
            verbs.update(items)
        elif key == "plural":
            for item in items:
                surface, _, lemma = item.partition("=")
                if not lemma:
                    raise InputError(f"line {ln}: plural entries look like surface=lemma")
                plural[surface.strip()] = lemma.strip()
        else:
            raise InputError(f"line {ln}: unknown lexicon section {key!r}")
    return Lexicon(frozenset(nouns), frozenset(verbs), plural)


def render_lexicon(lex: Lexicon) -> str:
    lines = ["nouns: " + ", ".join(sorted(lex.nouns)),
             "verbs: " + ", ".join(sorted(lex.verbs))]
    if lex.plural:
        lines.append("plural: " + ", ".join(
            f"{s}={l}" for s, l in sorted(lex.plural.items())))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# English
# ---------------------------------------------------------------------------

_ARTICLES = {"a", "an"}


def _parse_number(tok: str) -> int:
    if not tok.isdigit():
        raise InputError(f"malformed number {tok!r}")
    return int(tok)


def _noun_literal(word: str, lex: Lexicon) -> Lit:
    negative = False
    if word.startswith("non-"):
        negative = True
        word = word[len("non-"):]
    pred = lex.resolve_noun(word)
    if pred is None:
        raise InputError(f"unknown noun {word!r}")
    return Lit(pred, not negative)


def parse_english_sentence(sentence: str, lex: Lexicon) -> CountingAtom:
    toks = sentence.lower().split()
    if not toks:
        raise InputError("empty sentence")

    def fail():
        raise InputError(f"cannot parse sentence: {sentence!r}")

    # There (are|is) at (least|most) C [non-]NOUN
    if toks[0] == "there":
        if len(toks) < 6 or toks[1] not in ("are", "is") or toks[2] != "at" \
                or toks[3] not in ("least", "most"):
            fail()
        bound = _parse_number(toks[4])
        if len(toks) != 6:
            fail()
        lit = _noun_literal(toks[5], lex)
        direction = AT_LEAST if toks[3] == "least" else AT_MOST
        return UnaryAtom(direction, bound, (lit, lit))

    # (Some|All|Every|No) NOUN (are|is) [not] [a|an] NOUN
    if toks[0] in ("some", "all", "every", "no"):
        rest = toks[1:]
        if len(rest) < 3:
            fail()
        subj = _noun_literal(rest[0], lex)
        if not subj.positive:
            fail()  # sugar forms take plain nouns
        if rest[1] not in ("are", "is"):
            fail()
        rest = rest[2:]
        negated = False
        if rest and rest[0] == "not":
            negated = True
            rest = rest[1:]
        if rest and rest[0] in _ARTICLES:
            rest = rest[1:]
        if len(rest) != 1:
            fail()
        obj = _noun_literal(rest[0], lex)
        if not obj.positive:
            fail()
        if toks[0] == "some":
            # Some p are q == At least 1 p is a q
            return at_least(1, subj, obj.opposite() if negated else obj)
        if toks[0] in ("all", "every"):
            # All p are q == At most 0 p are not q (no existential import)
            return at_most(0, subj, obj if negated else obj.opposite())
        # No p are q == At most 0 p are q
        return at_most(0, subj, obj.opposite() if negated else obj)

    # At (least|most) C ...
    if toks[0] != "at" or len(toks) < 3 or toks[1] not in ("least", "most"):
        fail()
    direction = AT_LEAST if toks[1] == "least" else AT_MOST
    bound = _parse_number(toks[2])
    rest = toks[3:]
    if not rest:
        fail()
    subj = _noun_literal(rest[0], lex)
    rest = rest[1:]
    if not rest:
        fail()

    if rest[0] in ("are", "is"):
        # unary form
        rest = rest[1:]
        negated = False
        if rest and rest[0] == "not":
            negated = True
            rest = rest[1:]
        if rest and rest[0] in _ARTICLES:
            rest = rest[1:]
        if len(rest) != 1:
            fail()
        obj = _noun_literal(rest[0], lex)
        return UnaryAtom(direction, bound,
                         (subj, obj.opposite() if negated else obj))

    # relational: NOUN VERB at (least|most) D NOUN
    if not subj.positive:
        fail()  # relational subjects are plain nouns
    verb = lex.resolve_verb(rest[0])
    if verb is None:
        raise InputError(f"unknown verb {rest[0]!r}")
    rest = rest[1:]
    if len(rest) != 4 or rest[0] != "at" or rest[1] not in ("least", "most"):
        fail()
    inner_direction = AT_LEAST if rest[1] == "least" else AT_MOST
    inner_bound = _parse_number(rest[2])
    obj = _noun_literal(rest[3], lex)
    if not obj.positive:
        fail()
    return RelationalAtom(direction, bound, subj.pred, verb,
                          inner_direction, inner_bound, obj.pred)


def _argument_lines(text: str):
    """Yield (is_conclusion, line) pairs, handling comments and Therefore:."""
    in_conclusion = False
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.rstrip(":").strip().lower() == "therefore":
            if in_conclusion:
                raise InputError("multiple Therefore: separators")
            in_conclusion = True
            continue
        yield in_conclusion, line


def parse_english(text: str, lex: Lexicon) -> ArgumentFile:
    premises: list[CountingAtom] = []
    conclusion: CountingAtom | None = None
    for is_conc, line in _argument_lines(text):
        atom = parse_english_sentence(line, lex)
        if is_conc:
            if conclusion is not None:
                raise InputError("more than one conclusion sentence")
            conclusion = atom
        else:
            premises.append(atom)
    return ArgumentFile(tuple(premises), conclusion)


def _render_noun(lit: Lit, lex: Lexicon, count: int) -> str:
    if lit.pred not in lex.nouns:
        raise InputError(f"predicate {lit.pred!r} not in lexicon")
    word = lit.pred if count == 1 else lex.surface_plural(lit.pred)
    return ("non-" + word) if not lit.positive else word


def render_english(a: CountingAtom, lex: Lexicon) -> str:
    """Render an atom as one grammar sentence; parse_english inverts it."""
    if isinstance(a, UnaryAtom):
        if a.bound < 0:
            raise InputError("English rendering needs a bound >= 0")
        kind = "least" if a.direction == AT_LEAST else "most"
        l1, l2 = a.lits
        if l1 == l2:
            verb = "is" if a.bound == 1 else "are"
            return f"There {verb} at {kind} {a.bound} {_render_noun(l1, lex, a.bound)}"
        copula = "is" if a.bound == 1 else "are"
        if l2.positive:
            obj = _render_noun(l2, lex, a.bound)
            article = "a " if a.bound == 1 else ""
            return (f"At {kind} {a.bound} {_render_noun(l1, lex, a.bound)} "
                    f"{copula} {article}{obj}")
        obj = _render_noun(l2.opposite(), lex, a.bound)
        return (f"At {kind} {a.bound} {_render_noun(l1, lex, a.bound)} "
                f"{copula} not {obj}")
    if isinstance(a, RelationalAtom):
        if a.bound < 0 or a.inner_bound < 0:
            raise InputError("English rendering needs bounds >= 0")
        if a.subject not in lex.nouns or a.obj not in lex.nouns:
            raise InputError("relational nouns missing from lexicon")
        if a.verb not in lex.verbs:
            raise InputError(f"verb {a.verb!r} not in lexicon")
        kind = "least" if a.direction == AT_LEAST else "most"
        inner_kind = "least" if a.inner_direction == AT_LEAST else "most"
        subj = a.subject if a.bound == 1 else lex.surface_plural(a.subject)
        verb = a.verb + "s" if a.bound == 1 else a.verb
        obj = a.obj if a.inner_bound == 1 else lex.surface_plural(a.obj)
        return (f"At {kind} {a.bound} {subj} {verb} "
                f"at {inner_kind} {a.inner_bound} {obj}")
    raise InputError(f"cannot render {a!r}")


def render_argument_english(arg: ArgumentFile, lex: Lexicon) -> str:
    lines = [render_english(a, lex) for a in arg.premises]
    if arg.conclusion is not None:
        lines.append("Therefore:")
        lines.append(render_english(arg.conclusion, lex))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Symbolic format
# ---------------------------------------------------------------------------

_SYM_UNARY = re.compile(
    r"(?P<dir>>=|<=|=)\s*(?P<bound>\d+)\s*"
    r"\(\s*(?P<l1>!?\w+)\s*&\s*(?P<l2>!?\w+)\s*\)\Z")
_SYM_SINGLE = re.compile(
    r"(?P<dir>>=|<=|=)\s*(?P<bound>\d+)\s*(?P<l1>!?\w+)\Z")
_SYM_REL = re.compile(
    r"(?P<dir>>=|<=)\s*(?P<bound>\d+)\s*(?P<subj>\w+)\s*"
    r"\[\s*(?P<verb>\w+)\s+(?P<idir>>=|<=)\s*(?P<ibound>\d+)\s*(?P<obj>\w+)\s*\]\Z")


def _sym_lit(tok: str) -> Lit:
    if tok.startswith("!"):
        return Lit(tok[1:], False)
    return Lit(tok)


def parse_symbolic_line(line: str) -> list[CountingAtom]:
    """One symbolic atom; '=' sugar yields the <= / >= pair."""
    line = line.strip()
    m = _SYM_REL.match(line)
    if m:
        return [RelationalAtom(m["dir"], int(m["bound"]), m["subj"], m["verb"],
                               m["idir"], int(m["ibound"]), m["obj"])]
    m = _SYM_UNARY.match(line) or _SYM_SINGLE.match(line)
    if not m:
        raise InputError(f"cannot parse symbolic atom: {line!r}")
    l1 = _sym_lit(m["l1"])
    l2 = _sym_lit(m.groupdict().get("l2") or m["l1"])
    bound = int(m["bound"])
    if m["dir"] == "=":
        return [at_most(bound, l1, l2), at_least(bound, l1, l2)]
    return [UnaryAtom(m["dir"], bound, (l1, l2))]


def parse_symbolic(text: str) -> ArgumentFile:
    premises: list[CountingAtom] = []
    conclusion: CountingAtom | None = None
    for is_conc, line in _argument_lines(text):
        atoms = parse_symbolic_line(line)
        if is_conc:
            if conclusion is not None or len(atoms) != 1:
                raise InputError("conclusion must be a single <=/>= atom")
            conclusion = atoms[0]
        else:
            premises.extend(atoms)
    return ArgumentFile(tuple(premises), conclusion)


def render_symbolic(a: CountingAtom) -> str:
    if isinstance(a, UnaryAtom):
        return f"{a.direction}{a.bound} ({a.lits[0]} & {a.lits[1]})"
    if isinstance(a, RelationalAtom):
        return (f"{a.direction}{a.bound} {a.subject} "
                f"[{a.verb} {a.inner_direction}{a.inner_bound} {a.obj}]")
    raise InputError(f"cannot render {a!r}")


def render_argument_symbolic(arg: ArgumentFile) -> str:
    lines = [render_symbolic(a) for a in arg.premises]
    if arg.conclusion is not None:
        lines.append("Therefore:")
        lines.append(render_symbolic(arg.conclusion))
    return "\n".join(lines) + "\n"


def looks_symbolic(text: str) -> bool:
    for _, line in _argument_lines(text):
        return line.lstrip()[:1] in ("<", ">", "=")
    return False


def parse_argument(text: str, lex: Lexicon | None = None) -> ArgumentFile:
    """Parse an argument file, auto-detecting the syntax."""
    if looks_symbolic(text):
        return parse_symbolic(text)
    if lex is None:
        raise InputError("English argument files need a lexicon")
    return parse_english(text, lex)
