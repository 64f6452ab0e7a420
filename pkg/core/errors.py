# core/errors.py
# Exception hierarchy; utils/error_translator.py maps these to exit codes


class DivkitError(Exception):
    """Base class for every error raised by the library"""


class UsageError(DivkitError):
    """Bad combination of command-line options"""


class InputError(DivkitError, ValueError):
    """Malformed or invalid input data (masses, labels, files)"""


class LabelMismatchError(InputError):
    """Kernel / joint label sets do not line up"""


class UnknownGeneratorError(InputError):
    """Generator name not in the catalog"""

    def __init__(self, name: str, suggestions=None):
        self.name = name
        self.suggestions = list(suggestions or [])
        hint = f" Did you mean: {', '.join(self.suggestions)}?" if self.suggestions else ""
        super().__init__(f"Unknown generator '{name}'.{hint}")


class ConstraintError(DivkitError, ValueError):
    """Parameter outside the admissible range (e.g. FGM theta not in [-1, 1])"""


class InvalidCandidateError(DivkitError, ValueError):
    """Copula candidate does not coarsen to the joint's cell masses"""


class UnknownSuiteError(UsageError):
    """Property-suite name not registered"""

    def __init__(self, name: str, suggestions=None):
        self.name = name
        self.suggestions = list(suggestions or [])
        hint = f" Did you mean: {', '.join(self.suggestions)}?" if self.suggestions else ""
        super().__init__(f"Unknown suite '{name}'.{hint}")
