"""Exception hierarchy shared by all modules."""


class GcxError(Exception):
    """Base class for every error raised by this package."""


class ParseError(GcxError, ValueError):
    """Malformed input text (XML, grammar, SLP, automaton or query)."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)


class UnsupportedQueryError(ParseError):
    """The query uses XPath outside the child/descendant/following-sibling fragment."""


class ValidationError(GcxError, ValueError):
    """A structure violates its invariants; ``violations`` lists each problem."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class LimitExceeded(GcxError):
    """A configured size cap was hit (expansion length, DFA states)."""


class ExpansionLimitError(LimitExceeded):
    pass


class DfaBlowupError(LimitExceeded):
    pass
