# utils/error_translator.py
# Maps exceptions to CLI exit codes, a one-line message and a fix hint

from typing import Dict

from core.errors import (
    ConstraintError,
    DivkitError,
    InputError,
    InvalidCandidateError,
    LabelMismatchError,
    UnknownGeneratorError,
    UnknownSuiteError,
    UsageError,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_INPUT = 3

# Most specific first; the first isinstance match wins
ERROR_TRANSLATIONS = [
    (UnknownGeneratorError, {
        "exit_code": EXIT_USAGE,
        "fix_hint": "Generators: kl, kl-star, tv, hellinger, pearson, neyman, alpha:<float>, lecam, js.",
    }),
    (UnknownSuiteError, {
        "exit_code": EXIT_USAGE,
        "fix_hint": "Run 'check --list' for the available suites.",
    }),
    (UsageError, {
        "exit_code": EXIT_USAGE,
        "fix_hint": "Run with --help for the options of each command.",
    }),
    (LabelMismatchError, {
        "exit_code": EXIT_INPUT,
        "fix_hint": "Kernel source labels must cover the labels of the joint or distribution.",
    }),
    (ConstraintError, {
        "exit_code": EXIT_INPUT,
        "fix_hint": "FGM fits need (p + q - 1)_+ < r < min(p, q) and theta in [-1, 1].",
    }),
    (InvalidCandidateError, {
        "exit_code": EXIT_INPUT,
        "fix_hint": "Candidate copulas must coarsen to the cell masses of the joint.",
    }),
    (InputError, {
        "exit_code": EXIT_INPUT,
        "fix_hint": "Masses must be nonnegative and sum to 1 (within 1e-9); labels must be distinct.",
    }),
    (FileNotFoundError, {
        "exit_code": EXIT_INPUT,
        "fix_hint": "Check the path of the input file.",
    }),
    (ValueError, {
        "exit_code": EXIT_INPUT,
        "fix_hint": "Check that the input file is valid JSON in the documented schema.",
    }),
    (DivkitError, {
        "exit_code": EXIT_INPUT,
        "fix_hint": "",
    }),
]


def translate_error(error: BaseException) -> Dict:
    """{exit_code, error_type, message, fix_hint}; unknown exceptions map to None exit code"""
    for cls, info in ERROR_TRANSLATIONS:
        if isinstance(error, cls):
            return {
                "exit_code": info["exit_code"],
                "error_type": type(error).__name__,
                "message": str(error)[:400],
                "fix_hint": info["fix_hint"],
            }
    return {
        "exit_code": None,
        "error_type": type(error).__name__,
        "message": str(error)[:400],
        "fix_hint": "",
    }


def format_error(error: BaseException) -> str:
    """Two lines for stderr: the error and, when known, how to fix it"""
    result = translate_error(error)
    lines = [f"error: {result['error_type']}: {result['message']}"]
    if result["fix_hint"]:
        lines.append(f"hint: {result['fix_hint']}")
    return "\n".join(lines)
