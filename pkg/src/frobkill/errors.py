"""Error categories shared by the library and the command line."""


class FrobKillError(Exception):
    category = "error"
    exit_code = 1


class ParseError(FrobKillError):
    category = "parse"
    exit_code = 5


class PreconditionError(FrobKillError):
    category = "precondition"
    exit_code = 2


class BudgetExceeded(FrobKillError):
    category = "budget"
    exit_code = 3


class VerifyError(FrobKillError):
    category = "verify-fail"
    exit_code = 4


class InjectivityError(PreconditionError):
    """The base ring does not embed in a constructed tower (a presentation bug)."""
