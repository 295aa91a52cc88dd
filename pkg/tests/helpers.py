"""Shared generators for randomized test suites (all seeded by the caller)."""

from fractions import Fraction

from numlog.logic import AT_LEAST, AT_MOST, Lit, UnaryAtom, structure
from numlog.psat import ProbabilityAssignment


def random_lit(rng, preds):
    return Lit(rng.choice(preds), rng.random() < 0.5)


def random_unary_atom(rng, preds, max_bound=5):
    direction = AT_LEAST if rng.random() < 0.5 else AT_MOST
    return UnaryAtom(direction, rng.randint(0, max_bound),
                     (random_lit(rng, preds), random_lit(rng, preds)))


def random_structure(rng, preds, max_domain=8, verbs=()):
    n = rng.randint(1, max_domain)
    unary = {p: {e for e in range(n) if rng.random() < 0.5} for p in preds}
    binary = {r: {(a, b) for a in range(n) for b in range(n)
                  if rng.random() < 0.3} for r in verbs}
    return structure(n, unary, binary)


def random_assignment(rng, letters, max_worlds=6, scale=None):
    worlds = []
    weights = []
    for _ in range(rng.randint(1, max_worlds)):
        world = frozenset(p for p in letters if rng.random() < 0.5)
        worlds.append(world)
        weights.append(rng.randint(1, 9))
    total = sum(weights)
    pairs = tuple((w, Fraction(wt, total)) for w, wt in zip(worlds, weights))
    return ProbabilityAssignment(tuple(letters), pairs, scale)
