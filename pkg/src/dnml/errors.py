"""Exception and warning types shared across the package."""


class DnmlError(Exception):
    """Base class for every error raised by dnml."""


class ModelError(DnmlError, ValueError):
    """An atom, message or narrative violates a model invariant."""


class SpecializationCycleError(ModelError):
    def __init__(self, pairs):
        self.pairs = tuple(sorted(pairs))
        shown = ", ".join(f"{a} < {b}" for a, b in self.pairs)
        super().__init__(f"specialization relation has a cycle through: {shown}")


class EvaluationError(DnmlError):
    pass


class UnboundSourceError(EvaluationError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unbound source name {name!r}")


class QuerySyntaxError(DnmlError):
    """Parse failure, carrying the 1-based line/column and the expected tokens."""

    def __init__(self, message, line, column, expected=()):
        self.reason = message
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        text = f"{message} at line {line}, column {column}"
        if self.expected:
            text += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(text)


class DatabaseFormatError(DnmlError):
    """Malformed database document; ``path`` locates the offending element."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


class DuplicateNarrativeWarning(UserWarning):
    """Two narratives share a message tuple and were collapsed into one."""
