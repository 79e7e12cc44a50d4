class LabelDistError(Exception):
    """Base error of the package. `exit_code` is what the CLI returns for it."""

    exit_code = 1


class InputError(LabelDistError, ValueError):
    """Bad user input: arguments, files, shapes, split constraints."""

    exit_code = 2


class ParseError(InputError):
    """A line of an input file could not be parsed."""

    def __init__(self, path, line_number: int, message: str):
        self.path = str(path)
        self.line_number = line_number
        super().__init__(f"{self.path}:{line_number}: {message}")


class NumericalError(LabelDistError, ArithmeticError):
    """NaN loss, oracle non-convergence and similar numerical failures."""

    exit_code = 3
