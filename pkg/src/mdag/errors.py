"""Exception hierarchy.

Every exception carries a short machine-readable ``category`` which the
command line tool prints and maps to an exit status.
"""


class MDagError(Exception):
    category = "error"


class InputError(MDagError, ValueError):
    """Bad arguments: unknown vertices, overlapping sets, violated preconditions."""

    category = "input"


class CycleError(InputError):
    category = "cycle"

    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__("directed cycle: " + " -> ".join(self.cycle))


class ResourceError(MDagError):
    """A configured size cap would be exceeded."""

    category = "resource"


class DegenerateInputError(InputError):
    """A conditioning cell has zero probability."""

    category = "degenerate"


class ConsistencyError(MDagError):
    """Merge and separation certificates contradict each other."""

    category = "consistency"


class ParseError(InputError):
    category = "parse"

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
        self.message = message
