"""Exception hierarchy shared by all numlog modules."""


class NumlogError(Exception):
    """Base class for all package errors."""


class InputError(NumlogError):
    """Malformed input: files, sentences, structures, or argument values."""


class UnknownPredicateError(InputError):
    """A formula mentions a predicate the structure or lexicon does not interpret."""


class CapExceededError(NumlogError):
    """A configured size cap (predicates, columns, box volume) was exceeded."""


class BudgetExhaustedError(NumlogError):
    """A search or solver ran out of budget.

    Deliberately distinct from "infeasible"/"not derivable": callers must
    report Unknown, never a definite verdict, when they catch this.
    """


class NotASolutionError(NumlogError):
    """A vector handed to a sparsifier does not solve the system exactly."""
